"""Command line entry point.

Subcommands::

    amcs run CONFIG [--out DIR]
    amcs verify --dmax N --seed S [--out FILE]
    amcs bench --dlist 2,8,32,128 --horizon T --step H [--repeats R] [--out FILE]
    amcs export-ops --d N [--out FILE]

Exit status: 0 all checks pass, 1 a verification check failed, 2 usage or
configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .benchmark import bench
from .coherent import amcs_norm_sq, amcs_trajectory
from .config import ExperimentConfig, load_config
from .dlevel import axial_solution, bloch_vectors, evolve_d, write_state_csv
from .errors import BenchmarkError, ConfigError, DomainError, IntegrationError, NumericDomainError
from .fields import ConstantField, primitive_xi
from .numerics import TimeGrid
from .spin2 import WTrajectory, solve_w, w_constant_field, w_step_error
from .spin_ops import spin_matrices
from .verification import Check, VerificationReport, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_OUT = "amcs_out"

log = logging.getLogger("amcs")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_bloch_csv(path, times, psi) -> None:
    """``<S>/j`` per sample so every block lives on the unit sphere (raw ``<S>`` for ``d = 1``)."""
    d = psi.shape[1]
    b = bloch_vectors(psi)
    if d > 1:
        b = b / ((d - 1) / 2)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["t", "n1", "n2", "n3"])
        for t, row in zip(times, b):
            out.writerow([_fmt(t)] + [_fmt(x) for x in row])


def _run_checks(cfg: ExperimentConfig, traj: WTrajectory, blocks: dict, direct: dict) -> list[Check]:
    checks = [Check("w unitarity", "w(t) w(t)^+ = I", 1e-10, traj.max_unitarity_defect())]
    t = traj.times
    for d, psi in blocks.items():
        norms = np.einsum("na,na->n", psi.conj(), psi).real
        checks.append(Check(f"block norm d={d}", "<Z,t|Z,t>^(d) = exp(-|Z|^2) |Z|^(2(d-1)) / (d-1)!",
                            1e-12, float(np.max(np.abs(norms - amcs_norm_sq(d, cfg.Z))))))
    f = cfg.field
    if isinstance(f, ConstantField) and f.is_axial:
        exact = w_constant_field(f.omega0, t - t[0])
        checks.append(Check("w closed form", "w(t) = diag(exp(i w0 t), exp(-i w0 t))", 1e-10,
                            float(np.max(np.abs(traj.w - exact)))))
    if f.is_axial:
        for d, psi in blocks.items():
            weights = d - 2 * np.arange(1, d + 1) + 1
            c = psi[0] * np.exp(1j * weights * primitive_xi(f, t[0]))
            exact = np.array([axial_solution(d, c, f, tk).psi for tk in t])
            checks.append(Check(f"axial closed form d={d}", "psi_a(t) = c_a exp(-i (d-2a+1) Xi(t))",
                                1e-9, float(np.max(np.abs(psi - exact)))))
    for d, psi in direct.items():
        a, b = blocks[d], psi
        ov = np.abs(np.einsum("na,na->n", a.conj(), b)) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
        checks.append(Check(f"coherent path vs direct d={d}", "1 - |<psi_coherent|psi_direct>|",
                            1e-8, float(np.max(1 - ov))))
    return checks


def _write_failure(out: Path, exc: Exception, stage: str) -> None:
    record = {"status": "failed", "stage": stage, "error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, IntegrationError):
        record["time"] = exc.time
    (out / "failure.json").write_text(json.dumps(record, indent=2) + "\n")


def run_experiment(cfg: ExperimentConfig, out_dir) -> int:
    """Execute the pipelines a config asks for and write outputs into ``out_dir``.

    Returns the exit status.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    try:
        traj = solve_w(cfg.field, cfg.grid, cfg.step, order=cfg.order)
    except IntegrationError as exc:
        if exc.partial is not None and len(exc.partial_times) >= 2:
            w = np.swapaxes(exc.partial, 1, 2)
            WTrajectory(TimeGrid(exc.partial_times), w, cfg.field).to_csv(out / "w_partial.csv")
        _write_failure(out, exc, "solve_w")
        log.error("integration failed: %s", exc)
        return EXIT_NUMERIC

    if cfg.wants("w"):
        traj.to_csv(out / "w.csv")
        written.append("w.csv")

    blocks, direct = {}, {}
    for d in cfg.d_list:
        psi = amcs_trajectory(d, cfg.Z, traj)
        blocks[d] = psi
        if cfg.wants("amplitudes"):
            write_state_csv(out / f"amplitudes_d{d}.csv", traj.times, psi)
            written.append(f"amplitudes_d{d}.csv")
        if cfg.wants("bloch"):
            if np.all(psi == 0):
                log.warning("block d=%d vanishes for this Z; no Bloch vector", d)
            else:
                write_bloch_csv(out / f"bloch_d{d}.csv", traj.times, psi)
                written.append(f"bloch_d{d}.csv")
        if cfg.wants("direct"):
            try:
                psi_d = evolve_d(cfg.field, psi[0], cfg.grid, cfg.step, order=cfg.order).psi
            except IntegrationError as exc:
                _write_failure(out, exc, f"evolve_d d={d}")
                return EXIT_NUMERIC
            direct[d] = psi_d
            write_state_csv(out / f"direct_d{d}.csv", traj.times, psi_d)
            written.append(f"direct_d{d}.csv")

    status = EXIT_OK
    if cfg.wants("verify"):
        report = VerificationReport(max(cfg.d_list), cfg.seed, tuple(_run_checks(cfg, traj, blocks, direct)))
        (out / "report.json").write_text(report.to_json())
        written.append("report.json")
        print(report.summary())
        if not report.passed:
            status = EXIT_FAIL

    if cfg.wants("bench"):
        try:
            table = bench(sorted(set(cfg.d_list)), cfg.grid.t1 - cfg.grid.t0, cfg.step, field=cfg.field,
                          order=cfg.order)
        except BenchmarkError as exc:
            _write_failure(out, exc, "bench")
            log.error("%s", exc)
            return EXIT_FAIL
        table.to_csv(out / "bench.csv")
        written.append("bench.csv")
        print(table.format())

    summary = {"status": "ok" if status == EXIT_OK else "verification failed", "outputs": written,
               "config": cfg.raw}
    if cfg.wants("verify"):
        # diagnostic only: the fixed step is the user's choice
        summary["w_step_doubling_change"] = w_step_error(cfg.field, cfg.grid, cfg.step, order=cfg.order)
    (out / "run.json").write_text(json.dumps(summary, indent=2) + "\n")
    return status


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    out = args.out or cfg.output_dir or DEFAULT_OUT
    return run_experiment(cfg, out)


def _cmd_verify(args) -> int:
    report = verify(args.dmax, args.seed)
    if args.out:
        Path(args.out).write_text(report.to_json())
        print(report.summary())
    else:
        sys.stdout.write(report.to_json())
    return EXIT_OK if report.passed else EXIT_FAIL


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _cmd_bench(args) -> int:
    try:
        table = bench(args.dlist, args.horizon, args.step, order=args.order, repeats=args.repeats)
    except BenchmarkError as exc:
        print(f"bench aborted: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(table.format())
    if args.out:
        table.to_csv(args.out)
    return EXIT_OK


def export_ops_csv(d: int, fh) -> None:
    """All entries of ``s1, s2, s3, s+, s-`` as ``op,row,col,re,im`` (1-based indices)."""
    ops = spin_matrices(d)
    out = csv.writer(fh, lineterminator="\n")
    out.writerow(["op", "row", "col", "re", "im"])
    for name in ("s1", "s2", "s3", "s_plus", "s_minus"):
        m = getattr(ops, name)
        for r in range(d):
            for c in range(d):
                out.writerow([name, r + 1, c + 1, _fmt(m[r, c].real + 0.0), _fmt(m[r, c].imag + 0.0)])


def _cmd_export_ops(args) -> int:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            export_ops_csv(args.d, fh)
    else:
        export_ops_csv(args.d, sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="amcs", description="Angular-momentum coherent states of driven d-level systems.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run an experiment config")
    r.add_argument("config")
    r.add_argument("--out", help="output directory (overrides output_dir in the config)")
    r.set_defaults(func=_cmd_run)

    v = sub.add_parser("verify", help="run the seeded identity suite")
    v.add_argument("--dmax", type=int, required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", help="write the JSON report here instead of stdout")
    v.set_defaults(func=_cmd_verify)

    b = sub.add_parser("bench", help="time coherent-state reconstruction against direct integration")
    b.add_argument("--dlist", type=_int_list, default=[2, 8, 32, 128])
    b.add_argument("--horizon", type=float, required=True)
    b.add_argument("--step", type=float, required=True)
    b.add_argument("--order", type=int, choices=(2, 4), default=4)
    b.add_argument("--repeats", type=int, default=3)
    b.add_argument("--out", help="CSV file for the table")
    b.set_defaults(func=_cmd_bench)

    e = sub.add_parser("export-ops", help="dump spin matrices as CSV")
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--out")
    e.set_defaults(func=_cmd_export_ops)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IntegrationError, NumericDomainError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
