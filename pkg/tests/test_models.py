import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lattice_edgeworth.exact_dist import sum_pmf
from lattice_edgeworth.exceptions import ValidationError
from lattice_edgeworth.models import (
    FAMILIES,
    ModelConfig,
    build_model,
    eg1_limit_constant,
    eg1_square_limit,
    load_config,
    model_from_mapping,
)


def build(family, mode="exact", **params):
    return build_model(ModelConfig(family, params, mode))


def test_every_family_has_a_builder():
    examples = {
        "iid": {"values": [0, 1], "probs": [0.5, 0.5]},
        "span": {"step": 3, "probs": [0.25, 0.75]},
        "eg1_theta_over_n": {"theta": 0.3},
        "eg1_theta_over_n2": {"theta": 0.3},
        "nonsym": {"gamma": 1},
        "exuniform": {"m": 3, "L": 2, "r": 2},
        "custom-table": {"rows": [{"0": 0.5, "1": 0.5}]},
        "array-row-rule": {"theta": 2},
    }
    assert set(examples) == set(FAMILIES)
    for family, params in examples.items():
        assert build(family, **params).terms(4)


def test_floats_are_read_as_decimals():
    rv = build("eg1_theta_over_n", theta=0.3).term(5, 1)
    assert dict(rv.items()) == {-1: Fraction(7, 20), 0: Fraction(3, 10), 1: Fraction(7, 20)}


def test_eg1_probability_caps_at_one():
    rv = build("eg1_theta_over_n", theta=2).term(5, 1)
    assert {v: p for v, p in dict(rv.items()).items() if p} == {0: 1}


def test_exuniform_layout():
    m = build("exuniform", m=3, L=2, r=2)
    terms = m.terms(6)
    assert m.K == 6
    assert all(set(rv.support) == {6, 1, 2} for rv in terms[:2])
    assert all(set(rv.support) == {-3, 0, 3} for rv in terms[2:])


@pytest.mark.parametrize("mean_zero", [False, True])
def test_nonsym_terms(mean_zero):
    m = build("nonsym", gamma=1, mean_zero=mean_zero)
    rv = m.term(30, 20)
    d = dict(rv.items())
    assert d[0] == Fraction(1, 20)
    assert sum(d.values()) == 1
    if mean_zero:
        assert rv.mean == 0
    else:
        assert d[-1] == d[3]


def test_nonsym_cap_applies_to_early_terms():
    assert dict(build("nonsym", gamma=1).term(5, 1).items())[0] == Fraction(1, 10)


def test_single_row_custom_table_matches_iid():
    custom = build("custom-table", rows=[{"-1": 0.25, "2": 0.75}])
    iid = build("iid", values=[-1, 2], probs=[0.25, 0.75])
    assert sum_pmf(custom, 7).to_dict() == sum_pmf(iid, 7).to_dict()


def test_custom_table_cycles_rows():
    m = build("custom-table", rows=[{0: 1}, {1: 0.5, -1: 0.5}])
    assert [len(rv.support) for rv in m.terms(4)] == [1, 2, 1, 2]


def test_span_support():
    m = build("span", shift=1, step=3, probs=[0.5, 0.25, 0.25])
    assert m.term(1, 1).support == (1, 4, 7)


def test_array_rows_depend_on_n():
    m = build("array-row-rule", theta=2)
    assert len(m.terms(10)) == 10
    assert dict(m.term(10, 1).items())[0] == Fraction(1, 5)
    assert dict(m.term(20, 1).items())[0] == Fraction(1, 10)


def test_double_mode_gives_floats():
    rv = build("nonsym", mode="double", gamma=1).term(10, 3)
    assert not rv.exact
    assert all(isinstance(p, float) for p in rv.probs)


@pytest.mark.parametrize(
    "family, params",
    [
        ("nope", {}),
        ("iid", {"values": [0, 1]}),
        ("iid", {"values": [0, 1], "probs": [0.5, 0.6]}),
        ("iid", {"values": [0, 1], "probs": [0.5]}),
        ("iid", {"values": [0.5, 1], "probs": [0.5, 0.5]}),
        ("span", {"step": 1, "probs": [0.5, 0.5]}),
        ("eg1_theta_over_n", {"theta": 0}),
        ("eg1_theta_over_n", {"theta": "abc"}),
        ("eg1_theta_over_n", {"theta": 0.3, "extra": 1}),
        ("nonsym", {"gamma": 1, "cap": 0.2}),
        ("nonsym", {"gamma": 1, "mean_zero": "yes"}),
        ("exuniform", {"m": 1, "L": 2, "r": 2}),
        ("custom-table", {"rows": []}),
        ("custom-table", {"rows": [{"0": -0.5, "1": 1.5}]}),
    ],
)
def test_invalid_configs_are_rejected(family, params):
    with pytest.raises(ValidationError):
        build(family, **params)


def test_invalid_numeric_mode():
    with pytest.raises(ValidationError):
        build_model(ModelConfig("nonsym", {"gamma": 1}, "quad"))


def test_model_from_mapping_merges_inline_params():
    cfg, run = model_from_mapping({"model": {"family": "nonsym", "gamma": 1, "params": {"cap": 0.05}}})
    assert cfg.params == {"gamma": 1, "cap": 0.05}
    assert cfg.numeric_mode == "exact"
    assert run == {}


def test_load_config_round_trip(tmp_path):
    path = tmp_path / "cfg.toml"
    path.write_text(
        '[model]\nfamily = "custom-table"\n\n[[model.params.rows]]\n"0" = 0.5\n"2" = 0.5\n\n'
        '[run]\nmode = "double"\nN = [10, 20]\n'
    )
    cfg, run = load_config(path)
    assert cfg.family == "custom-table"
    assert not cfg.exact
    assert run["N"] == [10, 20]
    assert build_model(cfg).term(1, 1).support == (0, 2)


@pytest.mark.parametrize("text", ["[model\n", "[run]\nN = 3\n"])
def test_load_config_errors(tmp_path, text):
    path = tmp_path / "bad.toml"
    path.write_text(text)
    with pytest.raises(ValidationError):
        load_config(path)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ValidationError):
        load_config(tmp_path / "absent.toml")


def test_eg1_limit_constant_matches_gamma_function():
    assert eg1_limit_constant(0.3) == pytest.approx(1 / math.gamma(0.4), rel=1e-6)


@given(theta=st.floats(0.05, 0.45))
def test_eg1_limit_constant_reciprocal_gamma(theta):
    assert eg1_limit_constant(theta, cutoff=10 ** 5) == pytest.approx(1 / math.gamma(1 - 2 * theta), rel=1e-5)


def test_eg1_square_limit_matches_sine_product():
    # prod (1 - 2 theta / n^2) = sin(pi sqrt(2 theta)) / (pi sqrt(2 theta)) once theta < 1/2
    theta = 0.3
    x = math.pi * math.sqrt(2 * theta)
    assert eg1_square_limit(theta) == pytest.approx(math.sin(x) / x, rel=1e-5)
