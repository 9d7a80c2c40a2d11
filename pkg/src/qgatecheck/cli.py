"""Command-line front end: ``qgatecheck {analyze,simulate,verify,fixture}``.

Exit codes: 0 success, 1 validation error (including bad usage), 2 I/O error.
"""
import argparse
import sys
from pathlib import Path

from . import iofmt
from .analysis import full_report
from .channel import (average_fidelity_mc, choi_fidelity, process_matrix, sample_counts,
                      truth_table, verify_identities)

ALGEBRA_TOL = 1e-9
MC_SIGMAS = 3.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _table_format(path: str) -> str:
    return "csv" if path.lower().endswith(".csv") else "json"


def _write(data: bytes, out, stdout):
    if out:
        Path(out).write_bytes(data)
    else:
        stdout.write(data.decode())


def cmd_analyze(args, stdout):
    z = iofmt.parse_truth_table(_read(args.z_table), _table_format(args.z_table))
    x = iofmt.parse_truth_table(_read(args.x_table), _table_format(args.x_table))
    report = full_report(z, x, args.b)
    data = iofmt.emit_report(report, "markdown" if args.markdown else "json")
    _write(data, args.out, stdout)
    if args.out:
        stdout.write(iofmt.emit_report(report, "text").decode())
    return 0


def cmd_simulate(args, stdout):
    model = iofmt.parse_model(_read(args.model))
    table = truth_table(model, args.basis)
    if args.shots is not None:
        table = sample_counts(table, args.shots, args.seed)
    _write(iofmt.emit_truth_table(table, args.format), args.out, stdout)
    return 0


def cmd_verify(args, stdout):
    model = iofmt.parse_model(_read(args.model))
    res = verify_identities(model)
    chi00 = process_matrix(model).fidelity
    choi = choi_fidelity(model)
    d = model.d
    expected = (chi00 * d + 1) / (d + 1)
    mean, stderr = average_fidelity_mc(model, args.mc_samples, args.seed)
    mc_dev = abs(mean - expected)

    ok = True
    lines = []
    for name in ("f_z", "f_x", "sum_rule", "reconstruction", "choi"):
        good = abs(res[name]) <= ALGEBRA_TOL
        ok &= good
        lines.append(f"{name:<15} residual {res[name]: .3e}  {'ok' if good else 'FAIL'}")
    lines.append(f"{'chi_00,00':<15} {chi00:.12f}   choi fidelity {choi:.12f}")
    # exact agreement gives stderr 0 (e.g. noiseless gates); allow float noise there
    mc_good = mc_dev <= MC_SIGMAS * stderr + 1e-12
    ok &= mc_good
    lines.append(f"{'average fid.':<15} MC {mean:.6f} +- {stderr:.6f}, expected {expected:.6f}"
                 f"  ({mc_dev / stderr if stderr > 0 else 0.0:.2f} sigma)  {'ok' if mc_good else 'FAIL'}")
    lines.append("all checks passed" if ok else "verification FAILED")
    stdout.write("\n".join(lines) + "\n")
    return 0 if ok else 1


def cmd_fixture(args, stdout):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in ("z", "x"):
        table = iofmt.load_fixture(name)
        path = out_dir / f"table1_{name}.{args.format}"
        path.write_bytes(iofmt.emit_truth_table(table, args.format))
        stdout.write(f"wrote {path}\n")
    path = out_dir / "table3_model.json"
    path.write_bytes(iofmt.fixture_bytes("model"))
    stdout.write(f"wrote {path}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qgatecheck", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="bounds from a Z-basis and an X-basis truth table")
    a.add_argument("--z-table", required=True)
    a.add_argument("--x-table", required=True)
    a.add_argument("--b", type=float, default=0.5, help="witness parameter, 1/M (default 0.5)")
    a.add_argument("--out")
    a.add_argument("--markdown", action="store_true")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="truth table of a noisy gate model")
    s.add_argument("--model", required=True)
    s.add_argument("--basis", required=True, choices=["z", "x", "zx", "xz", "bell"])
    s.add_argument("--shots", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="check process-matrix identities for a model")
    v.add_argument("--model", required=True)
    v.add_argument("--mc-samples", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fixture", help="write the bundled experimental tables")
    f.add_argument("--out-dir", default=".")
    f.add_argument("--format", choices=["json", "csv"], default="json")
    f.set_defaults(func=cmd_fixture)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, stdout)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return 1
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        stderr.write(f"error: {exc}\n")
        return 1


def main():
    sys.exit(run())
