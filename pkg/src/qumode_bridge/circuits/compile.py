"""Compilers from qumode evolution operators to gate lists.

With ``w_q = 2**(n-1-q)`` the discrete position operator reads
``X = -(dx/2) sum_q w_q Z_q``, so polynomial phases in ``X`` become products
of Z rotations, and functions of ``P`` follow by conjugation with the
(shifted) quantum Fourier transform.
"""
from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np

from ..errors import ValidationError
from ..grids import GridSpec
from .gates import CNOT, H, PHASE, RZ, ZZ, ZZZ, Circuit


def _weights(n: int) -> np.ndarray:
    return 2.0 ** (n - 1 - np.arange(n))


def phase_cnot_count(n_q: int) -> int:
    return n_q * (n_q - 1)


def cubic_cnot_count(n_q: int) -> int:
    """CNOT-equivalents of the cubic-phase circuit: 4 per three-qubit term."""
    return 4 * comb(n_q, 3)


def qft_cnot_count(n_q: int) -> int:
    return n_q * (n_q - 1) + 3 * (n_q // 2)


def compile_displacement(grid: GridSpec, eta: float) -> Circuit:
    """``exp(-i eta X)`` as one RZ per qubit; exact."""
    n = grid.n_q
    gates = [RZ(q, -w * grid.delta_x * eta) for q, w in enumerate(_weights(n))]
    return Circuit(n, gates, declared_cnot=0)


def compile_phase(grid: GridSpec, eta: float) -> Circuit:
    """``exp(-i eta X^2)`` as a global phase and one ZZ per qubit pair; exact."""
    n, dx, N = grid.n_q, grid.delta_x, grid.n_x
    w = _weights(n)
    gates = [PHASE(-eta * dx**2 * (N**2 - 1) / 12)]
    for q, p in combinations(range(n), 2):
        gates.append(ZZ(q, p, eta * 0.5 * dx**2 * w[p] * w[q]))
    return Circuit(n, gates, declared_cnot=phase_cnot_count(n))


def cubic_coefficients(grid: GridSpec) -> tuple[dict, np.ndarray]:
    """Coefficients of ``X^3`` in the Pauli-Z basis.

    ``X^3 = sum_{p<q<r} m_pqr Z_p Z_q Z_r + sum_s l_s Z_s / 2`` with
    ``m_pqr = -(3/4) w_p w_q w_r dx^3`` and
    ``l_s = -(1/4) w_s (N^2 - 1 - 2 w_s^2) dx^3``.
    """
    n, dx, N = grid.n_q, grid.delta_x, grid.n_x
    w = _weights(n)
    m = {t: -0.75 * w[t[0]] * w[t[1]] * w[t[2]] * dx**3
         for t in combinations(range(n), 3)}
    lam = -0.25 * w * (N**2 - 1 - 2 * w**2) * dx**3
    return m, lam


def compile_cubic(grid: GridSpec, eta: float) -> Circuit:
    """``exp(-i eta X^3)`` as ZZZ terms over qubit triples and one RZ per qubit; exact."""
    n = grid.n_q
    m, lam = cubic_coefficients(grid)
    gates = [ZZZ(*t, eta * c) for t, c in m.items()]
    gates += [RZ(s, eta * lam[s]) for s in range(n)]
    return Circuit(n, gates, declared_cnot=cubic_cnot_count(n))


def controlled_phase(a: int, b: int, phi: float) -> list:
    """``diag(1, 1, 1, exp(i phi))`` written with ZZ and RZ."""
    return [PHASE(phi / 4), RZ(a, phi / 2), RZ(b, phi / 2), ZZ(a, b, -phi / 4)]


def swap(a: int, b: int) -> list:
    return [CNOT(a, b), CNOT(b, a), CNOT(a, b)]


def compile_qft(n: int) -> Circuit:
    """Standard QFT ``|k> -> N^-1/2 sum_j exp(2 pi i j k / N) |j>``."""
    gates = []
    for q in range(n):
        gates.append(H(q))
        for r in range(q + 1, n):
            gates += controlled_phase(r, q, 2 * np.pi / 2 ** (r - q + 1))
    for q in range(n // 2):
        gates += swap(q, n - 1 - q)
    return Circuit(n, gates, declared_cnot=qft_cnot_count(n))


def _index_phase(n: int, beta: float) -> list:
    """``diag_k exp(-i k beta)``."""
    N = 2 ** n
    gates = [PHASE(-beta * (N - 1) / 2)]
    gates += [RZ(q, -w * beta) for q, w in enumerate(_weights(n))]
    return gates


def compile_shifted_qft(grid: GridSpec, delta_x: float = 0.0, delta_p: float = 0.0) -> Circuit:
    """Shifted centered DFT ``exp(2 pi i/N (j-c+dx)(k-c+dp)) / sqrt(N)``.

    Built as a diagonal layer, the standard QFT, a second diagonal layer and
    a global phase.
    """
    n, N = grid.n_q, grid.n_x
    c = (N - 1) / 2
    A = 2 * np.pi / N * (c - delta_x) * (c - delta_p)
    gates = _index_phase(n, 2 * np.pi / N * (c - delta_x))
    gates += compile_qft(n).gates
    gates += _index_phase(n, 2 * np.pi / N * (c - delta_p))
    gates.append(PHASE(A))
    return Circuit(n, gates, declared_cnot=qft_cnot_count(n))


def compile_kinetic(grid: GridSpec, eta: float) -> Circuit:
    """``exp(-i eta P^2) = F exp(-i eta mu^2 X^2) F^-1``."""
    F = compile_shifted_qft(grid)
    return F.inverse() + compile_phase(grid, eta * grid.mu**2) + F


def compile_cphase(grid: GridSpec, eta: float) -> Circuit:
    """``exp(-i eta X_A X_B)`` across two registers of ``n_q`` qubits each; exact."""
    n, dx = grid.n_q, grid.delta_x
    w = _weights(n)
    gates = [ZZ(p, n + q, eta * 0.25 * dx**2 * w[p] * w[q])
             for p in range(n) for q in range(n)]
    return Circuit(2 * n, gates, registers=2, declared_cnot=2 * n * n)


# Closed-form CNOT counts as quoted for each compiler; the cubic entry does
# not agree with the circuit that compile_cubic builds (see cubic_cnot_count).
QUOTED_CNOT_COUNTS = {
    "phase": lambda n: n * (n - 1),
    "cubic": lambda n: 2 * n * (n + 1) * (n + 2) // 3,
    "cphase": lambda n: 2 * n * n,
}

COMPILERS = {"phase": compile_phase, "cubic": compile_cubic, "cphase": compile_cphase}


def dense_oracle(kind: str, grid: GridSpec, eta: float, indices=None) -> np.ndarray:
    """Diagonal of the target operator, built directly from the grid points.

    ``cphase`` acts on two registers; its diagonal is indexed with the first
    register as the most significant bits.  ``indices`` selects entries
    without forming the full diagonal.
    """
    N = grid.n_x
    if indices is None:
        indices = np.arange(N * N if kind == "cphase" else N)
    k = np.asarray(indices, dtype=np.int64)
    if kind == "cphase":
        xa = (k // N - grid.center) * grid.delta_x
        xb = (k % N - grid.center) * grid.delta_x
        return np.exp(-1j * eta * xa * xb)
    x = (k - grid.center) * grid.delta_x
    if kind == "phase":
        return np.exp(-1j * eta * x**2)
    if kind == "cubic":
        return np.exp(-1j * eta * x**3)
    if kind == "displacement":
        return np.exp(-1j * eta * x)
    raise ValidationError(f"unknown compiler {kind!r}")
