"""Discrete qumode states and the dense operators acting on them."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import NumericalGateError, ValidationError
from .fourier import centered_dft_apply
from .grids import (GridSpec, fock_superposition, fock_tail, sinc_interpolate,
                    superposition_tails, truncation_weight)

NORM_TOL = 1e-10


@dataclass
class DiscreteQumode:
    """Amplitudes ``sqrt(dx) phi(x_j)`` of a qumode on ``grid``."""

    grid: GridSpec
    amps: np.ndarray
    normalized: bool = True
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.amps.shape != (self.grid.n_x,):
            raise ValidationError(
                f"expected {self.grid.n_x} amplitudes, got shape {self.amps.shape}")
        if self.normalized and abs(np.linalg.norm(self.amps) - 1) > NORM_TOL:
            raise ValidationError("amplitudes are not normalized")

    @property
    def samples(self) -> np.ndarray:
        """Wavefunction values ``phi(x_j)``."""
        return self.amps / np.sqrt(self.grid.delta_x)

    def overlap(self, other: "DiscreteQumode") -> complex:
        if other.grid != self.grid:
            raise ValidationError("grids differ")
        return complex(np.vdot(self.amps, other.amps))

    def fidelity(self, other: "DiscreteQumode") -> float:
        return abs(self.overlap(other))

    def to_json(self) -> str:
        return json.dumps({
            "n_q": self.grid.n_q,
            "mu": self.grid.mu,
            "amps": [[float(a.real), float(a.imag)] for a in self.amps],
        })

    @classmethod
    def from_json(cls, text: str) -> "DiscreteQumode":
        d = json.loads(text)
        amps = np.array([complex(re, im) for re, im in d["amps"]])
        return cls(GridSpec(int(d["n_q"]), float(d["mu"])), amps)


def check_unitary(m: np.ndarray, tol: float = 1e-10) -> float:
    """Return ``max |U^dag U - 1|``; raise if above ``tol``."""
    err = float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
    if err > tol:
        raise NumericalGateError(f"matrix is not unitary (err={err:.3e})")
    return err


def check_hermitian(m: np.ndarray, tol: float = 1e-10) -> float:
    err = float(np.max(np.abs(m - m.conj().T)))
    if err > tol:
        raise NumericalGateError(f"matrix is not Hermitian (err={err:.3e})")
    return err


def position_operator(grid: GridSpec) -> np.ndarray:
    """Diagonal position operator with entries ``x_j``."""
    return np.diag(grid.x_points()).astype(complex)


def shifted_dft(grid: GridSpec, delta_x: float = 0.0, delta_p: float = 0.0) -> np.ndarray:
    """Dense shifted centered DFT ``exp(2j pi/N (j-c+dx)(k-c+dp)) / sqrt(N)``."""
    N = grid.n_x
    c = grid.center
    j = np.arange(N) - c
    return np.exp(2j * np.pi / N * np.outer(j + delta_x, j + delta_p)) / np.sqrt(N)


def centered_dft(grid: GridSpec) -> np.ndarray:
    """Dense centered DFT; maps position eigenvectors to momentum eigenvectors."""
    return shifted_dft(grid, 0.0, 0.0)


def momentum_operator(grid: GridSpec) -> np.ndarray:
    """``mu F X F^-1``, Hermitian with eigenvalues ``p_m``."""
    F = centered_dft(grid)
    return grid.mu * (F * grid.x_points()) @ F.conj().T


def grid_shift_operator(grid: GridSpec, delta1: float, delta2: float,
                        delta_p: float = 0.0) -> np.ndarray:
    """``F_{d1,dp} F_{d2,dp}^-1``: re-samples a state onto a grid shifted by
    ``(d1 - d2) dx``."""
    return shifted_dft(grid, delta1, delta_p) @ shifted_dft(grid, delta2, delta_p).conj().T


def harmonic_hamiltonian(grid: GridSpec) -> np.ndarray:
    """``P^2 / 2 + mu^2 X^2 / 2``; real symmetric for the centered grid."""
    P = momentum_operator(grid)
    x = grid.x_points()
    H = 0.5 * (P @ P) + np.diag(0.5 * grid.mu**2 * x**2)
    return H.real if np.max(np.abs(H.imag)) < 1e-9 else H


@dataclass(frozen=True)
class DiscreteFockSet:
    """Discrete Fock vectors ``|n_bar>`` for ``n < n_b`` as matrix columns."""

    grid: GridSpec
    n_b: int
    kind: str
    vectors: np.ndarray
    eigenvalues: np.ndarray | None = None


def sampled_fock_vectors(grid: GridSpec, n_b: int) -> np.ndarray:
    """Columns ``sqrt(dx) phi_n(x_j)`` for ``n < n_b``."""
    from .grids import fock_wavefunctions
    phis = fock_wavefunctions(n_b - 1, grid.mu, grid.x_points())
    return (np.sqrt(grid.delta_x) * phis.T).astype(complex)


@lru_cache(maxsize=16)
def _eigensystem(grid: GridSpec):
    w, v = np.linalg.eigh(harmonic_hamiltonian(grid))
    return w, v


def discrete_fock_set(grid: GridSpec, n_b: int, kind: str = "eigen") -> DiscreteFockSet:
    """Discrete Fock vectors, either sampled or eigenvectors of ``H_h``.

    Eigenvectors are phase-fixed so their overlap with the sampled vector
    of the same order is real and positive.
    """
    if not 1 <= n_b <= grid.n_x:
        raise ValidationError(f"n_b must be in [1, {grid.n_x}], got {n_b}")
    sampled = sampled_fock_vectors(grid, n_b)
    if kind == "sampled":
        return DiscreteFockSet(grid, n_b, kind, sampled)
    if kind != "eigen":
        raise ValidationError(f"unknown kind {kind!r}")
    w, v = _eigensystem(grid)
    vecs = v[:, :n_b].astype(complex)
    ov = np.einsum("jn,jn->n", sampled.conj(), vecs)
    vecs = vecs * np.where(np.abs(ov) > 0, np.abs(ov) / np.where(ov == 0, 1, ov), 1)
    return DiscreteFockSet(grid, n_b, kind, vecs, w[:n_b].copy())


def cutoff_projector(grid: GridSpec, n_b: int) -> np.ndarray:
    """Projector onto the span of the lowest ``n_b`` eigenvectors of ``H_h``."""
    V = discrete_fock_set(grid, n_b).vectors
    return V @ V.conj().T


def mapping_leak(op: np.ndarray, Q: np.ndarray) -> float:
    """``max |(1 - Q) O Q|``: how far ``O`` maps the cutoff subspace outside."""
    return float(np.max(np.abs(Q @ op @ Q - op @ Q)))


def supported_cutoff(grid: GridSpec, eps: float = 1e-4) -> int:
    """Largest boson cutoff ``N_b`` whose Fock states all have tails ``<= eps``
    beyond the grid window."""
    if fock_tail(0, grid.L, eps) > eps:
        return 0
    lo, hi = 0, min(grid.n_x, 512)
    if fock_tail(hi, grid.L, eps) <= eps:
        return hi + 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fock_tail(mid, grid.L, eps) <= eps:
            lo = mid
        else:
            hi = mid
    return lo + 1


def encode_qumode(source, grid: GridSpec, *, eps: float = 1e-4,
                  max_truncation: float = 0.1) -> DiscreteQumode:
    """Sample a qumode onto the grid: ``amps_j = sqrt(dx) psi(x_j)``.

    Parameters
    ----------
    source : array_like or callable
        Fock coefficients ``c_n`` or a position wavefunction ``psi(x)``.
    eps : float
        Accuracy target used to determine the grid's supported cutoff.
    max_truncation : float
        Refuse Fock inputs whose weight beyond the supported cutoff exceeds this.

    The returned state carries ``info`` with the renormalization factor and,
    for Fock input, the representation error and truncation weight.
    """
    info: dict = {}
    if callable(source):
        vals = np.asarray(source(grid.x_points()), dtype=complex)
    else:
        c = np.asarray(source, dtype=complex)
        n_b = supported_cutoff(grid, eps)
        omega = truncation_weight(c, n_b)
        info["truncation_weight"] = omega
        info["supported_cutoff"] = n_b
        if omega > max_truncation:
            raise ValidationError(
                f"state has weight {omega:.3g} beyond the supported cutoff {n_b}")
        vals = fock_superposition(c, grid.mu, grid.x_points())
        info["eps"] = max(superposition_tails(c, grid.L, eps))
    amps = np.sqrt(grid.delta_x) * vals
    nrm = np.linalg.norm(amps)
    if nrm == 0:
        raise ValidationError("state vanishes on the grid")
    info["norm_factor"] = float(nrm)
    return DiscreteQumode(grid, amps / nrm, info=info)


def encode_fock(n: int, grid: GridSpec, eps: float = 1e-4) -> DiscreteQumode:
    c = np.zeros(n + 1)
    c[n] = 1
    return encode_qumode(c, grid, eps=eps)


def decode_qumode(dv: DiscreteQumode, xs) -> np.ndarray:
    """Band-limited reconstruction ``sum_j phi(x_j) sinc((x - x_j)/dx)``."""
    return sinc_interpolate(dv.samples, dv.grid, xs)


def apply_dft(dv: DiscreteQumode, inverse: bool = False,
              row_shift: float = 0.0, col_shift: float = 0.0) -> DiscreteQumode:
    """Fast application of the (shifted) centered DFT."""
    out = centered_dft_apply(dv.amps, row_shift, col_shift, inverse)
    return DiscreteQumode(dv.grid, out, normalized=dv.normalized)


def momentum_amplitudes(dv: DiscreteQumode) -> np.ndarray:
    """Components in the momentum eigenbasis ``F|m>``."""
    return centered_dft_apply(dv.amps, inverse=True)


def momentum_evolution(dv: DiscreteQumode, fn: Callable[[np.ndarray], np.ndarray]
                       ) -> DiscreteQumode:
    """Apply ``exp(-i fn(P))`` exactly through the momentum eigenbasis."""
    pm = dv.grid.p_points()
    out = centered_dft_apply(np.exp(-1j * fn(pm)) * momentum_amplitudes(dv))
    return DiscreteQumode(dv.grid, out, normalized=dv.normalized)
