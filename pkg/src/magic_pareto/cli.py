"""Command-line entry point: every subcommand writes a CSV with a metadata header.

Output is deterministic: identical argv gives byte-identical files.
Exit codes: 0 success, 1 verification failure, 2 bad flags or out-of-domain input.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence, TextIO

import numpy as np

from . import __version__
from .catalogs import amplitudes_of, catalog, fmt, match_states, state_rows, write_catalog_csv, write_rows_csv
from .errors import DomainError, MagicParetoError, VerificationFailure
from .frontiers import BRANCH_FUNCTIONS, BRANCHES, m2_max, m2_min
from .measures import concurrence, m2_analytic, m2_direct, pattern_of_state
from .parametrization import WhartonAngles, angles_to_state
from .states import PAULI_LABELS, make_state, pauli_expectations

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2
SUBCOMMANDS = ("measure", "frontier", "catalog", "sample", "oracle", "orbit", "verify-all")
DEFAULT_SEED = 20240611
# options that change how work is scheduled but never the output bytes
_SCHEDULING_ONLY = frozenset({"workers"})


class UsageError(MagicParetoError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)
    out: Optional[str] = None

    def header(self) -> list[str]:
        opts = " ".join(f"{k}={_show(v)}" for k, v in sorted(self.options.items())
                        if v is not None and k not in _SCHEDULING_ONLY)
        return [f"magic_pareto {__version__} {self.subcommand}" + (f" {opts}" if opts else "")]


def _show(v) -> str:
    if isinstance(v, float):
        return fmt(v)
    if isinstance(v, (list, tuple)):
        return ",".join(_show(x) for x in v)
    return str(v)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(n: int):
    def parse(text: str) -> list[float]:
        try:
            vals = [float(x) for x in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}") from None
        if len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {len(vals)}")
        return vals
    return parse


def _complexes(text: str) -> list[complex]:
    try:
        vals = [complex(x.replace(" ", "")) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse amplitudes {text!r}") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("expected 4 comma-separated amplitudes")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="magic-pareto", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"magic_pareto {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def out_flag(sp):
        sp.add_argument("--out", help="output CSV path (default: stdout)")

    sp = sub.add_parser("measure", help="concurrence, M2 and Pauli expectations of one state")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--state", type=_complexes, help="a,b,c,d (Python complex syntax, e.g. 1j)")
    g.add_argument("--angles", type=_floats(6), help="theta1,phi1,theta2,phi2,chi,gamma")
    out_flag(sp)

    sp = sub.add_parser("frontier", help="frontier values at given concurrences")
    sp.add_argument("--delta", type=float, nargs="+", required=True)
    sp.add_argument("--branch", choices=BRANCHES)
    out_flag(sp)

    sp = sub.add_parser("catalog", help="enumerate a boundary catalog at fixed chi")
    sp.add_argument("--branch", choices=BRANCHES, required=True)
    sp.add_argument("--chi", type=float, required=True)
    out_flag(sp)

    sp = sub.add_parser("sample", help="Haar sample histogram over (concurrence, M2)")
    sp.add_argument("--n", type=int, default=1_000_000)
    sp.add_argument("--bins", type=int, default=200)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--chunk", type=int, default=1 << 16, help="samples per RNG substream")
    sp.add_argument("--workers", type=int, default=1)
    out_flag(sp)

    sp = sub.add_parser("oracle", help="brute-force extremal M2 at fixed concurrence")
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--mode", choices=("max", "min"), default="max")
    sp.add_argument("--grid", type=int, default=24, help="coarse grid points per angle")
    sp.add_argument("--iterations", type=int, default=200)
    sp.add_argument("--tolerance", type=float, default=1e-9)
    sp.add_argument("--starts", type=int, default=6)
    out_flag(sp)

    sp = sub.add_parser("orbit", help="Clifford orbit of a catalog state")
    sp.add_argument("--branch", choices=BRANCHES, required=True)
    sp.add_argument("--chi", type=float, required=True)
    sp.add_argument("--row", type=int, required=True)
    sp.add_argument("--full", action="store_true", help="keep orbit states at every concurrence")
    out_flag(sp)

    sp = sub.add_parser("verify-all", help="run every acceptance check")
    sp.add_argument("--fast", action="store_true", help="reduced sample counts, same tolerances")
    return p


def parse_config(argv: Sequence[str]) -> RunConfig:
    ns = vars(build_parser().parse_args(list(argv)))
    cmd = ns.pop("subcommand")
    out = ns.pop("out", None)
    return RunConfig(cmd, ns, out)


def _measure(cfg: RunConfig, fh: TextIO) -> None:
    o = cfg.options
    if o["state"] is not None:
        s = make_state(*o["state"])
        analytic = None
    else:
        w = WhartonAngles(*o["angles"])
        s = angles_to_state(w)
        analytic = m2_analytic(w)
    vals = pauli_expectations(s.amplitudes)
    fh.write(f"# {cfg.header()[0]}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["delta", "m2", "m2_analytic", "zeros", *PAULI_LABELS])
    w.writerow([fmt(concurrence(s)), fmt(m2_direct(s)), fmt(analytic), pattern_of_state(s).count,
                *(fmt(v) for v in vals)])


def _frontier(cfg: RunConfig, fh: TextIO) -> None:
    branch = cfg.options["branch"]
    if branch:
        columns = ["delta", "branch", "m2"]
        rows = [[fmt(d), branch, fmt(BRANCH_FUNCTIONS[branch](d))] for d in cfg.options["delta"]]
    else:
        columns = ["delta", "branch", "m2_max", "m2_min"]
        rows = []
        for d in cfg.options["delta"]:
            hi, lo = m2_max(d), m2_min(d)
            rows.append([fmt(d), hi.branch, fmt(hi.m2), fmt(lo.m2)])
    fh.write(f"# {cfg.header()[0]}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)


def _catalog(cfg: RunConfig, fh: TextIO) -> None:
    entries = catalog(cfg.options["branch"], cfg.options["chi"])
    write_catalog_csv(entries, fh, cfg.header())


def _sample(cfg: RunConfig, fh: TextIO) -> None:
    from .experiments.haar import scan_samples, write_histogram_csv

    o = cfg.options
    h, scan = scan_samples(o["n"], o["bins"], o["seed"], o["chunk"], o["workers"])
    extra = [f"violations={scan.violations} purity_max_dev={fmt(scan.purity_max_dev)} "
             f"mean_delta={fmt(scan.mean_delta)}"]
    fh.write(f"# {cfg.header()[0]}\n")
    write_histogram_csv(h, fh, extra)


def _oracle(cfg: RunConfig, fh: TextIO) -> None:
    from .experiments.oracle import OracleConfig, frontier_oracle_full

    o = cfg.options
    mode = "maximize" if o["mode"] == "max" else "minimize"
    res = frontier_oracle_full(o["delta"], OracleConfig(o["grid"], o["iterations"], o["tolerance"], mode, o["starts"]))
    ref = m2_max(o["delta"]).m2 if mode == "maximize" else m2_min(o["delta"]).m2
    a = res.angles
    fh.write(f"# {cfg.header()[0]}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["delta", "mode", "m2_oracle", "m2_analytic", "abs_err", "theta1", "theta2", "phi1", "phi2", "gamma"])
    w.writerow([fmt(res.delta), mode, fmt(res.m2), fmt(ref), fmt(abs(res.m2 - ref)),
                fmt(a.theta1), fmt(a.theta2), fmt(a.phi1), fmt(a.phi2), fmt(a.gamma)])


def _orbit(cfg: RunConfig, fh: TextIO) -> None:
    from .experiments.clifford import build_clifford_group, orbit_amplitudes

    o = cfg.options
    entries = catalog(o["branch"], o["chi"])
    seeds = [e for e in entries if e.row == o["row"]]
    if not seeds:
        rows = sorted({e.row for e in entries})
        raise DomainError(f"{o['branch']} has no row {o['row']}; rows are {rows[0]}..{rows[-1]}")
    psi = orbit_amplitudes(seeds[0].amplitudes, build_clifford_group(), same_concurrence=not o["full"])
    match = match_states(psi, amplitudes_of(entries))
    matched = [entries[j] if j >= 0 else None for j in match]
    extra = f"orbit_size={len(psi)} matched_in_catalog={int(np.sum(match >= 0))}"
    write_rows_csv(state_rows(psi, matched), fh, cfg.header() + [extra])


def _verify_all(cfg: RunConfig, fh: TextIO) -> int:
    from .acceptance import run_all

    fh.write(f"# {cfg.header()[0]}\n")
    results = run_all(cfg.options["fast"], report=lambda line: (fh.write(line + "\n"), fh.flush()))
    failed = [r.number for r in results if not r.passed]
    fh.write(f"# {len(results) - len(failed)}/{len(results)} criteria passed\n")
    if failed:
        raise VerificationFailure(f"criteria {failed} failed")
    return EXIT_OK


HANDLERS = {
    "measure": _measure, "frontier": _frontier, "catalog": _catalog, "sample": _sample,
    "oracle": _oracle, "orbit": _orbit, "verify-all": _verify_all,
}


@contextlib.contextmanager
def _output(path: Optional[str], default: TextIO):
    if path is None:
        yield default
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def run(argv: Optional[Sequence[str]] = None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        with _output(cfg.out, stdout) as fh:
            HANDLERS[cfg.subcommand](cfg, fh)
        return EXIT_OK
    except UsageError as exc:
        stderr.write(f"magic-pareto: usage error: {exc}\n")
        return EXIT_USAGE
    except (DomainError, ValueError) as exc:
        stderr.write(f"magic-pareto: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
    except VerificationFailure as exc:
        stderr.write(f"magic-pareto: verification failed: {exc}\n")
        return EXIT_VERIFY


def main() -> None:
    sys.exit(run())
