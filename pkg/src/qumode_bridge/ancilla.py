"""Removing and adding register qubits without disturbing the qumode.

Dropping the most significant qubit halves the number of grid points at a
fixed spacing; a squeeze by ``ln(2)/2`` then restores the spacing that a
register of ``n_q - 1`` qubits needs for the same boson mass.  Padding runs
the steps in reverse.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits.gates import CNOT, Circuit, X
from .circuits.simulate import simulate
from .circuits.squeeze import compile_squeeze_exact, dense_squeeze
from .discrete import DiscreteQumode, encode_qumode
from .errors import ValidationError
from .grids import GridSpec

SQUEEZE = np.log(2) / 2


@dataclass(frozen=True)
class ResizeReport:
    """Result of adding or removing register qubits.

    ``leak`` is the discarded norm for a discard and the post-squeeze edge
    norm for a pad.  ``fidelity`` compares ``after`` with a directly encoded
    target when one is supplied.
    """

    before: DiscreteQumode
    after: DiscreteQumode
    leak: float
    fidelity: float | None = None

    @property
    def n_q_before(self) -> int:
        return self.before.grid.n_q

    @property
    def n_q_after(self) -> int:
        return self.after.grid.n_q

    def to_dict(self) -> dict:
        return {"n_q_before": self.n_q_before, "n_q_after": self.n_q_after,
                "leak": self.leak, "fidelity": self.fidelity}


def _outer_half_weight(amps: np.ndarray) -> float:
    N = amps.size
    return float(np.sqrt(np.sum(np.abs(amps[:N // 4]) ** 2)
                         + np.sum(np.abs(amps[3 * N // 4:]) ** 2)))


def _edge_weight(amps: np.ndarray) -> float:
    """Norm on the outermost 1/32 of the register on each side."""
    k = max(amps.size // 32, 1)
    return float(np.sqrt(np.sum(np.abs(amps[:k]) ** 2) + np.sum(np.abs(amps[-k:]) ** 2)))


def _fold_circuit(n: int) -> Circuit:
    """CNOT(1 -> 0) then X(1): maps the middle half of the register onto qubit 0 = |1>."""
    return Circuit(n, [CNOT(1, 0), X(1)])


def _squeeze(grid: GridSpec, amps: np.ndarray, r: float) -> np.ndarray:
    if grid.n_q >= 2:
        return simulate(compile_squeeze_exact(grid, r), amps)
    return dense_squeeze(grid, r) @ amps


def _compare(after: DiscreteQumode, target, eps: float) -> float | None:
    if target is None:
        return None
    if not isinstance(target, DiscreteQumode):
        target = encode_qumode(target, after.grid, eps=eps)
    return after.fidelity(target)


def discard_qubit(dv: DiscreteQumode, eps: float = 1e-4, target=None,
                  squeeze: bool = True) -> ResizeReport:
    """Remove the most significant qubit.

    Requires the weight outside the middle half of the register to be at
    most ``eps``.  The leak is the norm that did not end on qubit 0 = |1>.
    With ``squeeze=False`` the result is the representation of the same
    wavefunction for mass ``2 mu``.  ``target`` (a DiscreteQumode, Fock
    coefficients or a wavefunction) sets the reported fidelity.
    """
    g = dv.grid
    if g.n_q < 2:
        raise ValidationError("cannot discard from a single-qubit register")
    outer = _outer_half_weight(dv.amps)
    if outer > eps:
        raise ValidationError(
            f"weight {outer:.3g} outside the middle half exceeds eps={eps:g}")
    out = simulate(_fold_circuit(g.n_q), dv.amps)
    N = g.n_x
    leak = float(np.linalg.norm(out[:N // 2]))
    kept = out[N // 2:]
    kept = kept / np.linalg.norm(kept)
    if squeeze:
        g2 = g.with_qubits(g.n_q - 1)
        kept = _squeeze(g2, kept, SQUEEZE)
    else:
        g2 = GridSpec(g.n_q - 1, 2 * g.mu)
    after = DiscreteQumode(g2, kept / np.linalg.norm(kept), info={"leak": leak})
    return ResizeReport(dv, after, leak, _compare(after, target, eps))


def pad_qubit(dv: DiscreteQumode, edge_tol: float = 1e-3, target=None,
              eps: float = 1e-4) -> ResizeReport:
    """Add a most significant qubit: squeeze by ``-ln(2)/2``, prepend |1>,
    then X(1) and CNOT(1 -> 0).

    The squeeze widens the wavefunction by ``sqrt(2)``.  It is refused when
    the squeezed state has more than ``edge_tol`` norm on the outermost
    1/32 of the register, where wrap-around would set in.
    """
    g = dv.grid
    sq = _squeeze(g, dv.amps, -SQUEEZE)
    edge = _edge_weight(sq)
    if edge > edge_tol:
        raise ValidationError(f"squeezed state reaches the register edge (weight {edge:.3g})")
    N = g.n_x
    big = np.zeros(2 * N, dtype=complex)
    big[N:] = sq
    big = simulate(_fold_circuit(g.n_q + 1).inverse(), big)
    after = DiscreteQumode(g.with_qubits(g.n_q + 1), big / np.linalg.norm(big),
                           info={"edge_weight": edge})
    return ResizeReport(dv, after, edge, _compare(after, target, eps))


def max_discards(L: float, l_eps: float) -> int:
    """Largest ``r`` with ``L / sqrt(2^r) >= l_eps``."""
    if l_eps <= 0 or L < l_eps:
        return 0
    return int(np.floor(2 * np.log2(L / l_eps)))


def resize_to(dv: DiscreteQumode, target_n_q: int, eps: float = 1e-4, target=None,
              edge_tol: float = 1e-3) -> ResizeReport:
    """Discard or pad qubits until the register has ``target_n_q`` qubits.

    Each step checks its own precondition, so the sequence stops with an
    error as soon as the state no longer fits.  The reported leak is the
    root-sum-square of the per-step leaks.
    """
    GridSpec(target_n_q, dv.grid.mu)
    leak2 = 0.0
    cur = dv
    while cur.grid.n_q > target_n_q:
        rep = discard_qubit(cur, eps)
        cur, leak2 = rep.after, leak2 + rep.leak**2
    while cur.grid.n_q < target_n_q:
        rep = pad_qubit(cur, edge_tol)
        cur, leak2 = rep.after, leak2 + rep.leak**2
    return ResizeReport(dv, cur, float(np.sqrt(leak2)), _compare(cur, target, eps))
