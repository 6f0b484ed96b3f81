"""Command-line experiments: ``qumode-bridge <command> --config <path>``.

Each command writes CSV and JSON files into the output directory and exits
with 0 on success, 2 on invalid input, 3 when a numerical acceptance
threshold is missed and 4 when the squeeze solver fails.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, load_config
from .errors import NumericalGateError, QumodeError, SolverError, ValidationError

log = logging.getLogger("qumode_bridge")

GATE_TOL = 10.0  # acceptance gates allow 10 * eps


# ---------------------------------------------------------------- output


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".10g")
    return str(v)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header: list[str], rows) -> None:
    """CSV with 10 significant digits and LF line endings, written atomically."""
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    _atomic_write(path, "\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(format(float(obj), ".10g"))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path: Path, obj) -> None:
    _atomic_write(path, json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def _map(fn, tasks, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, tasks))
    return [fn(t) for t in tasks]


# ---------------------------------------------------------------- represent


def cmd_represent(cfg: ExperimentConfig, out: Path, jobs: int = 1) -> list[str]:
    """Per-n errors of the discrete Fock vectors and of the discrete HO spectrum."""
    from .discrete import discrete_fock_set, supported_cutoff
    from .grids import make_grid

    eps = cfg.eps[0]
    rows, failures = [], []
    for n_q in cfg.n_q:
        grid = make_grid(n_q, cfg.mu)
        n_sup = supported_cutoff(grid, eps)
        if cfg.n_b > n_sup:
            raise ValidationError(
                f"n_q={n_q} supports Fock orders below {n_sup} at eps={eps:g}; "
                f"n_b={cfg.n_b} needs a larger grid")
        eig = discrete_fock_set(grid, cfg.n_b)
        smp = discrete_fock_set(grid, cfg.n_b, kind="sampled").vectors
        smp = smp / np.linalg.norm(smp, axis=0)
        vec_err = np.linalg.norm(eig.vectors - smp, axis=0)
        val_err = np.abs(eig.eigenvalues - cfg.mu * (np.arange(cfg.n_b) + 0.5))
        for n in range(cfg.n_b):
            rows.append((n_q, n, vec_err[n], val_err[n]))
            if max(vec_err[n], val_err[n]) > GATE_TOL * eps:
                failures.append(f"n_q={n_q} n={n}")
    write_csv(out / "represent.csv", ["n_q", "n", "vector_error", "eigenvalue_error"], rows)
    return failures


# ---------------------------------------------------------------- CV -> DV


def _cvdv_task(args):
    from .transfer.cvdv import cvdv_success_probability, cvdv_transfer, encode_target
    from .transfer.cvstate import cv_support_radius, fock_number_state
    from .grids import make_grid

    cfg, n_q, n = args
    grid = make_grid(n_q, cfg.mu)
    cv = fock_number_state(n, grid, oversample=cfg.oversample)
    eps0 = cfg.eps[0]
    l_eps = cv_support_radius(cv, eps0)
    target = encode_target(cv)
    span = min(2 * grid.L, grid.L + l_eps + 1.0) * np.sqrt(grid.mu)
    rows = []
    for p in np.linspace(-span, span, cfg.p_points):
        o = cvdv_transfer(cv, float(p), l_eps=l_eps, target=target)
        rows.append((n_q, n, o.measured, o.probability, o.fidelity, o.distance, o.in_window))
    reports = []
    for eps in cfg.eps:
        rep = cvdv_success_probability(cv, eps, n_points=cfg.success_points,
                                       criterion=cfg.criterion)
        reports.append({"n_q": n_q, "n": n, **asdict(rep)})
    return rows, reports


def cmd_transfer_cvdv(cfg: ExperimentConfig, out: Path, jobs: int = 1) -> list[str]:
    """Sweep of the momentum outcome and success probabilities for Fock inputs."""
    tasks = [(cfg, n_q, n) for n_q in cfg.n_q for n in cfg.fock]
    results = _map(_cvdv_task, tasks, jobs)
    rows = [r for res in results for r in res[0]]
    reports = [r for res in results for r in res[1]]
    write_csv(out / "transfer_cvdv.csv",
              ["n_q", "n", "p_meas", "prob", "fidelity", "distance", "in_window"], rows)
    write_json(out / "transfer_cvdv.json", {"success": reports})
    return [f"n_q={r['n_q']} n={r['n']} eps={r['eps']:g}: P={r['p_success']:.4f} "
            f"vs {r['predicted']:.4f}"
            for r in reports if abs(r["p_success"] - r["predicted"]) > 0.02]


# ---------------------------------------------------------------- DV -> CV


def _dvcv_task(args):
    from .discrete import encode_fock
    from .grids import make_grid, support_radius
    from .transfer.cvstate import make_initial_cv
    from .transfer.dvcv import dvcv_success_probability, dvcv_table

    cfg, kind, n_q, n = args
    grid = make_grid(n_q, cfg.mu)
    sigma = cfg.sigma_for(grid) if kind == "gaussian" else None
    g0 = make_initial_cv(kind, grid, sigma=sigma, oversample=cfg.oversample)
    dv = encode_fock(n, grid, eps=cfg.eps[0])
    rows, reports = [], []
    table = None
    for eps in cfg.eps:
        l_eps = support_radius(n, eps, cfg.mu).L_eps
        if table is None:
            table = dvcv_table(dv, g0, l_eps)
            for m in range(grid.n_x):
                rows.append((kind, n_q, n, m, table.p_m[m], table.prob[m],
                             table.fidelity[m], table.in_window[m]))
        rep = dvcv_success_probability(dv, g0, eps, l_eps, criterion=cfg.criterion,
                                       table=replace(table, in_window=np.abs(table.p_m)
                                                     <= (grid.L - l_eps) * np.sqrt(grid.mu)))
        reports.append({"kind": kind, "n_q": n_q, "n": n, "sigma": sigma, **asdict(rep)})
    flat_err = float(np.max(np.abs(table.prob - 1 / grid.n_x)))
    return rows, reports, flat_err


def cmd_transfer_dvcv(cfg: ExperimentConfig, out: Path, jobs: int = 1) -> list[str]:
    """Per-outcome tables and success probabilities for both initial CV states."""
    tasks = [(cfg, k, n_q, n) for k in cfg.kinds for n_q in cfg.n_q for n in cfg.fock]
    results = _map(_dvcv_task, tasks, jobs)
    rows = [r for res in results for r in res[0]]
    reports = [r for res in results for r in res[1]]
    write_csv(out / "transfer_dvcv.csv",
              ["kind", "n_q", "n", "m", "p_m", "prob", "fidelity", "in_window"], rows)
    write_json(out / "transfer_dvcv.json", {"success": reports})
    failures = []
    for (_, kind, n_q, n), res in zip(tasks, results):
        if kind == "rectangular" and res[2] > 1e-6:
            failures.append(f"rectangular n_q={n_q} n={n}: Pr deviates by {res[2]:.2e}")
    for r in reports:
        if r["kind"] == "rectangular" and abs(r["p_success"] - r["predicted"]) > 0.02:
            failures.append(f"rectangular n_q={r['n_q']} n={r['n']} eps={r['eps']:g}: "
                            f"P={r['p_success']:.4f} vs {r['predicted']:.4f}")
    return failures


# ---------------------------------------------------------------- squeeze


def squeeze_table(cfg: ExperimentConfig):
    """Rows ``(r, trotter_err, exact_err, a, b, residual, solver_ok)`` and the fitted slope."""
    from .circuits.simulate import circuit_unitary
    from .circuits.squeeze import (compile_squeeze_exact, compile_squeeze_trotter,
                                   dense_squeeze, fock_block_error, solve_squeeze_coeffs)
    from .discrete import discrete_fock_set
    from .grids import make_grid

    grid = make_grid(cfg.squeeze_qubits, cfg.mu)
    V = discrete_fock_set(grid, cfg.squeeze_cutoff).vectors
    rs = np.concatenate([[0.0], np.logspace(np.log10(cfg.r_min), np.log10(cfg.r_max),
                                            cfg.r_points)])
    rows = []
    for r in rs:
        S = dense_squeeze(grid, r)
        trot = fock_block_error(circuit_unitary(compile_squeeze_trotter(grid, r)), S, V)
        try:
            co = solve_squeeze_coeffs(r)
            exact = fock_block_error(circuit_unitary(compile_squeeze_exact(grid, r)), S, V)
            rows.append((r, trot, exact, co.a, co.b, co.residual, co.identity_residual, True))
        except SolverError as exc:
            log.warning("r=%g: %s", r, exc)
            rows.append((r, trot, np.nan, np.nan, np.nan, np.nan, np.nan, False))
    sel = [(r, t) for r, t, *_ in rows if cfg.r_min <= r <= 0.3 and t > 0]
    slope = float(np.polyfit(*np.log(np.array(sel)).T, 1)[0]) if len(sel) > 1 else float("nan")
    return rows, slope


def cmd_squeeze_decomp(cfg: ExperimentConfig, out: Path, jobs: int = 1) -> list[str]:
    rows, slope = squeeze_table(cfg)
    write_csv(out / "squeeze_decomp.csv",
              ["r", "trotter_err", "exact_err", "a", "b", "residual", "identity_residual",
               "solver_ok"], rows)
    write_json(out / "squeeze_decomp.json", {"trotter_slope": slope,
                                             "n_q": cfg.squeeze_qubits,
                                             "cutoff": cfg.squeeze_cutoff})
    failures = []
    if not all(row[-1] for row in rows):
        raise SolverError("squeeze solver failed for some r; rows flagged in the CSV")
    if not abs(slope - 1.5) <= 0.15:
        failures.append(f"Trotter error slope {slope:.3f} outside 1.5 +- 0.15")
    bad = [row[0] for row in rows if row[0] <= 1 and not row[2] < 1e-6]
    if bad:
        failures.append(f"exact decomposition error >= 1e-6 at r={bad}")
    return failures


# ---------------------------------------------------------------- gate counts


def _oracle_error(kind: str, n_q: int, cfg: ExperimentConfig, eta: float = 0.37) -> float:
    """Max deviation from the dense oracle.

    Full unitary up to ``oracle_max_qubits`` per register, random probe
    vectors up to 16 circuit qubits, sampled diagonal entries beyond.
    """
    from .circuits.compile import COMPILERS, dense_oracle
    from .circuits.simulate import circuit_unitary, diagonal_entries, simulate
    from .grids import make_grid

    grid = make_grid(n_q, cfg.mu)
    circ = COMPILERS[kind](grid, eta)
    rng = np.random.default_rng(cfg.seed)
    if circ.n_qubits > 16:
        idx = rng.integers(0, 2**circ.n_qubits, 4096)
        return float(np.max(np.abs(diagonal_entries(circ, idx)
                                   - dense_oracle(kind, grid, eta, idx))))
    diag = dense_oracle(kind, grid, eta)
    if n_q <= cfg.oracle_max_qubits:
        U = circuit_unitary(circ)
        return float(np.max(np.abs(U - np.diag(diag))))
    probe = rng.normal(size=(diag.size, 2)) + 1j * rng.normal(size=(diag.size, 2))
    return float(np.max(np.abs(simulate(circ, probe) - diag[:, None] * probe)))


def gate_count_table(cfg: ExperimentConfig) -> list[tuple]:
    """Rows ``(compiler, n_q, quoted, measured, declared, oracle_err)``."""
    from .circuits.compile import COMPILERS, QUOTED_CNOT_COUNTS
    from .circuits.gates import gate_count
    from .grids import make_grid

    rows = []
    for kind, compiler in COMPILERS.items():
        for n_q in range(cfg.n_q_min, cfg.n_q_max + 1):
            circ = compiler(make_grid(n_q, cfg.mu), 0.37)
            rows.append((kind, n_q, QUOTED_CNOT_COUNTS[kind](n_q), gate_count(circ).cnot_equiv,
                         circ.declared_cnot, _oracle_error(kind, n_q, cfg)))
    return rows


def cmd_gate_counts(cfg: ExperimentConfig, out: Path, jobs: int = 1) -> list[str]:
    """Quoted versus measured CNOT counts and dense-oracle errors per compiler."""
    rows = gate_count_table(cfg)
    write_csv(out / "gate_counts.csv",
              ["compiler", "n_q", "quoted", "measured", "declared", "oracle_err"], rows)
    failures = []
    for kind, n_q, quoted, measured, _, err in rows:
        if quoted != measured:
            failures.append(f"{kind} n_q={n_q}: quoted {quoted}, measured {measured}")
        if not err <= 1e-9:
            failures.append(f"{kind} n_q={n_q}: oracle error {err:.2e}")
    return failures


# ---------------------------------------------------------------- resize


def cmd_resize_demo(cfg: ExperimentConfig, out: Path, jobs: int = 1) -> list[str]:
    """CV-to-DV transfer of a Fock state followed by qubit discards."""
    from .ancilla import resize_to
    from .grids import make_grid
    from .transfer.cvdv import cvdv_transfer, sample_outcomes
    from .transfer.cvstate import cv_support_radius, fock_number_state

    eps = cfg.eps[0]
    n_q = cfg.n_q[0]
    grid = make_grid(n_q, cfg.mu)
    results, failures = [], []
    for n in cfg.fock:
        cv = fock_number_state(n, grid, oversample=cfg.oversample)
        l_eps = cv_support_radius(cv, eps)
        p = float(sample_outcomes(cv, 1, seed=cfg.seed + n)[0])
        o = cvdv_transfer(cv, p, l_eps=l_eps)
        coeffs = np.zeros(n + 1)
        coeffs[n] = 1
        rep = resize_to(o.state, cfg.n_q_target, eps=eps, target=coeffs)
        results.append({"n": n, "p_meas": p, "in_window": o.in_window,
                        "transfer_fidelity": o.fidelity, **rep.to_dict()})
        if o.in_window and rep.fidelity < 1 - GATE_TOL * eps:
            failures.append(f"n={n}: end-to-end fidelity {rep.fidelity:.6f}")
    write_json(out / "resize_demo.json", {"seed": cfg.seed, "eps": eps, "runs": results})
    return failures


COMMANDS = {
    "represent": cmd_represent,
    "transfer-cvdv": cmd_transfer_cvdv,
    "transfer-dvcv": cmd_transfer_dvcv,
    "squeeze-decomp": cmd_squeeze_decomp,
    "gate-counts": cmd_gate_counts,
    "resize-demo": cmd_resize_demo,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qumode-bridge", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="key = value experiment file")
    ap.add_argument("--out", help="output directory (overrides the config 'output' key)")
    ap.add_argument("--seed", type=int, help="RNG seed (overrides the config)")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        if args.jobs < 1:
            raise ValidationError("--jobs must be at least 1")
        out = Path(args.out or cfg.output)
        failures = COMMANDS[args.command](cfg, out, args.jobs)
        if failures:
            raise NumericalGateError("; ".join(failures))
    except QumodeError as exc:
        print(f"qumode-bridge {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    print(f"qumode-bridge {args.command}: ok ({out})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
