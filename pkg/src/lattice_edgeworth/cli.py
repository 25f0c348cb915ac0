"""Command line front end: ``lattice-edgeworth <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 resource guard.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import sys

from . import conditions
from .exact_dist import format_prob, sum_pmf, write_pmf_csv
from .exceptions import LatticeEdgeworthError, ResourceGuardError, ValidationError
from .experiments import check_resource, error_table, write_table_csv
from .models import FAMILIES, build_model, load_config
from .trig_expansion import GeneralizedExpansion
from .validation import check_increasing, parse_int_list

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_GUARD = 3

CHECKS = ("llt", "prokhorov", "quantitative_prokhorov", "order_r", "superstable", "uniformity")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(f"{self.prog}: {message}")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lattice-edgeworth", description="Edgeworth expansions for lattice sums")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, n_help):
        sp.add_argument("--config", required=True, help="TOML file with [model] and optional [run]")
        sp.add_argument("--N", help=n_help)
        sp.add_argument("--mode", choices=("exact", "double"), help="numeric mode (overrides config)")
        sp.add_argument("--out", help="output CSV path (default: stdout)")

    sp = sub.add_parser("pmf", help="exact distribution of S_N")
    common(sp, "single N")

    sp = sub.add_parser("table", help="sup errors of classical and generalized expansions")
    common(sp, "comma-separated increasing N list")
    sp.add_argument("--r", type=int, help="expansion order")
    sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("diagnose", help="finite-N diagnostic sequence")
    common(sp, "comma-separated increasing N list")
    sp.add_argument("--check", required=True, choices=CHECKS)
    sp.add_argument("--r", type=int)
    sp.add_argument("--h", type=int, help="modulus for prokhorov and uniformity")
    sp.add_argument("--sbar", type=int, default=1, help="removal size for superstable")
    sp.add_argument("--seed", type=int, default=0, help="seed of the superstable audit sample")

    sp = sub.add_parser("expand", help="generalized expansion at one k with its term breakdown")
    common(sp, "single N")
    sp.add_argument("--r", type=int)
    sp.add_argument("--k", type=int, required=True)

    sub.add_parser("models", help="list builtin families")
    return p


def _setting(args, run: dict, name: str, default=None):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return run.get(name, default)


def _Ns(args, run) -> list[int]:
    raw = _setting(args, run, "N")
    if raw is None:
        raise ValidationError("--N is required (or N in the [run] table)")
    if isinstance(raw, list):
        return check_increasing(raw)
    return check_increasing(parse_int_list(raw))


def _single_N(args, run) -> int:
    Ns = _Ns(args, run)
    if len(Ns) != 1:
        raise ValidationError("this subcommand takes a single N")
    return Ns[0]


def _order(args, run) -> int:
    r = _setting(args, run, "r", 1)
    if not isinstance(r, int) or r < 1:
        raise ValidationError("--r must be a positive integer")
    return r


def _load(args):
    cfg, run = load_config(args.config)
    mode = args.mode or cfg.numeric_mode
    cfg = type(cfg)(cfg.family, cfg.params, mode)
    return cfg, build_model(cfg), run


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
        return
    buf = io.StringIO()
    yield buf
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def _cmd_pmf(args) -> int:
    cfg, model, run = _load(args)
    N = _single_N(args, run)
    check_resource(model, N, cfg.exact)
    pmf = sum_pmf(model, N, exact=cfg.exact)
    with _output(args.out) as out:
        write_pmf_csv(pmf, out)
    return EXIT_OK


def _cmd_table(args) -> int:
    cfg, model, run = _load(args)
    rows = error_table(model, _order(args, run), _Ns(args, run), exact=cfg.exact, workers=args.workers)
    with _output(args.out) as out:
        write_table_csv(rows, out)
    return EXIT_OK


def _cmd_diagnose(args) -> int:
    cfg, model, run = _load(args)
    Ns = _Ns(args, run)
    r = _order(args, run)
    check = args.check
    if check in ("prokhorov", "uniformity"):
        h = _setting(args, run, "h")
        if h is None:
            raise ValidationError(f"--h is required for {check}")
    if check == "llt":
        rep = conditions.llt_diagnostic(model, Ns)
    elif check == "prokhorov":
        rep = conditions.prokhorov_diagnostic(model, Ns, h)
    elif check == "quantitative_prokhorov":
        rep = conditions.quantitative_prokhorov_report(model, Ns, r)
    elif check == "order_r":
        rep = conditions.order_r_diagnostic(model, Ns, r)
    elif check == "superstable":
        rep = conditions.superstable_diagnostic(model, Ns, r, args.sbar, seed=args.seed)
    else:
        for N in Ns:
            check_resource(model, N, cfg.exact)
        rep = conditions.uniformity_diagnostic(model, Ns, h, r, exact=cfg.exact)
    with _output(args.out) as out:
        rep.write_csv(out)
    print(rep.summary(), file=sys.stderr)
    return EXIT_OK


def _cmd_expand(args) -> int:
    _, model, run = _load(args)
    N = _single_N(args, run)
    gen = GeneralizedExpansion(model, N, _order(args, run))
    ev = gen.evaluate(args.k)
    methods = {d.point: d.method for d in gen.data}
    with _output(args.out) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["term", "method", "real", "imag"])
        writer.writerow(["zero", "classical", format_prob(ev.zero_term), format_prob(0.0)])
        for p in gen.points:
            value = ev.resonant_terms.get(p, 0j)
            writer.writerow([str(p), methods[p], format_prob(value.real), format_prob(value.imag)])
        writer.writerow(["total", "", format_prob(ev.total), format_prob(ev.imag_residue)])
    return EXIT_OK


def _cmd_models(args) -> int:
    for name in sorted(FAMILIES):
        print(f"{name:20s} {FAMILIES[name]}")
    return EXIT_OK


_COMMANDS = {
    "pmf": _cmd_pmf,
    "table": _cmd_table,
    "diagnose": _cmd_diagnose,
    "expand": _cmd_expand,
    "models": _cmd_models,
}


def cli_main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
        if args.command is None:
            _parser().print_usage(sys.stderr)
            return EXIT_VALIDATION
        return _COMMANDS[args.command](args)
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except LatticeEdgeworthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
