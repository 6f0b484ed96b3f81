"""Statevector simulation of gate lists.

Consecutive diagonal gates are fused into one phase vector, which keeps the
cost of long runs of RZ/ZZ/ZZZ gates at a few vector operations each.
"""
from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .gates import DIAGONAL, Circuit

_H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


class _Bits:
    def __init__(self, n: int):
        self.n = n
        self.idx = np.arange(2 ** n)
        self._z = {}

    def z(self, q: int) -> np.ndarray:
        """Eigenvalue of Z on qubit q for every basis index (+1 for bit 0)."""
        if q not in self._z:
            self._z[q] = 1.0 - 2.0 * ((self.idx >> (self.n - 1 - q)) & 1)
        return self._z[q]

    def flip(self, q: int) -> np.ndarray:
        return self.idx ^ (1 << (self.n - 1 - q))


def _diag_angle(bits: _Bits, g) -> np.ndarray | float:
    """Phase angle ``theta`` with the gate acting as ``exp(i theta)``."""
    if g.kind == "PHASE":
        return g.angle
    if g.kind == "RZ":
        return -0.5 * g.angle * bits.z(g.qubits[0])
    zs = bits.z(g.qubits[0]) * bits.z(g.qubits[1])
    if g.kind == "ZZZ":
        zs = zs * bits.z(g.qubits[2])
    return -g.angle * zs


def simulate(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    """Apply ``circuit`` to a state vector or to the columns of a matrix."""
    psi = np.array(state, dtype=complex)
    n = circuit.n_qubits
    if psi.shape[0] != 2 ** n:
        raise ValidationError(f"state has {psi.shape[0]} entries, circuit needs {2 ** n}")
    batch = psi.shape[1:]
    psi = psi.reshape(2 ** n, -1)
    bits = _Bits(n)
    angle = None

    def flush(psi, angle):
        if angle is None:
            return psi
        ph = np.exp(1j * np.broadcast_to(angle, (2 ** n,)))
        return psi * ph[:, None]

    for g in circuit.gates:
        if g.kind in DIAGONAL:
            a = _diag_angle(bits, g)
            angle = a if angle is None else angle + a
            continue
        psi = flush(psi, angle)
        angle = None
        if g.kind == "X":
            psi = psi[bits.flip(g.qubits[0])]
        elif g.kind == "CNOT":
            c, t = g.qubits
            src = np.where(bits.z(c) < 0, bits.flip(t), bits.idx)
            psi = psi[src]
        elif g.kind == "H":
            q = g.qubits[0]
            v = psi.reshape(2 ** q, 2, -1)
            psi = np.einsum("ab,ibk->iak", _H, v).reshape(2 ** n, -1)
    psi = flush(psi, angle)
    return psi.reshape((2 ** n,) + batch)


def diagonal_entries(circuit: Circuit, indices) -> np.ndarray:
    """Diagonal matrix elements ``<k|U|k>`` of a circuit built from diagonal gates only.

    Works on any register width since no state vector is formed.
    """
    idx = np.asarray(indices, dtype=np.int64)
    n = circuit.n_qubits
    if np.any((idx < 0) | (idx >= 2 ** n)):
        raise ValidationError("basis index out of range")
    bits = _Bits(n)
    bits.idx = idx
    angle = np.zeros(idx.shape)
    for g in circuit.gates:
        if g.kind not in DIAGONAL:
            raise ValidationError(f"gate {g.kind} is not diagonal")
        angle = angle + _diag_angle(bits, g)
    return np.exp(1j * angle)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of a circuit (columns are images of basis states)."""
    return simulate(circuit, np.eye(2 ** circuit.n_qubits, dtype=complex))
