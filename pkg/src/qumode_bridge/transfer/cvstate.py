"""Continuous-variable wavefunctions sampled on a fine position grid.

The fine grid is cell centred, ``y_b = (b - (M - 1)/2) dy`` with
``dy = dx / oversample`` and ``M = span * oversample * N``, so it covers
``[-span L/sqrt(mu), span L/sqrt(mu)]`` symmetrically.  Integrals are
Riemann sums over the cells, and Fourier integrals reduce to offset DFTs
because ``dy * dp`` is a rational multiple of ``2 pi``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError
from ..fourier import offset_dft
from ..grids import GridSpec, fock_superposition, superposition_support_radius

DEFAULT_OVERSAMPLE = 16


@dataclass
class SampledCVState:
    """Wavefunction samples ``psi(y_b)`` on the fine grid tied to ``grid``."""

    grid: GridSpec
    amps: np.ndarray
    oversample: int = DEFAULT_OVERSAMPLE
    span: int = 2
    fock_coeffs: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.oversample < 8 or self.oversample % 2:
            raise ValidationError("oversample must be an even integer >= 8")
        if self.span < 2 or self.span > self.oversample:
            raise ValidationError("span must lie in [2, oversample]")
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.amps.shape != (self.fine_n,):
            raise ValidationError(f"expected {self.fine_n} samples")

    @property
    def mu(self) -> float:
        return self.grid.mu

    @property
    def fine_n(self) -> int:
        return self.span * self.oversample * self.grid.n_x

    @property
    def fine_dx(self) -> float:
        return self.grid.delta_x / self.oversample

    @property
    def x_min(self) -> float:
        return float(self.xs[0])

    @property
    def xs(self) -> np.ndarray:
        return fine_axis(self.grid, self.oversample, self.span)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2) * self.fine_dx))

    def normalized(self) -> "SampledCVState":
        return SampledCVState(self.grid, self.amps / self.norm(), self.oversample,
                              self.span, self.fock_coeffs)

    def overlap(self, other: "SampledCVState") -> complex:
        return complex(np.vdot(self.amps, other.amps) * self.fine_dx)


def fine_axis(grid: GridSpec, oversample: int = DEFAULT_OVERSAMPLE, span: int = 2) -> np.ndarray:
    M = span * oversample * grid.n_x
    return (np.arange(M) - (M - 1) / 2) * grid.delta_x / oversample


def sample_cv(psi, grid: GridSpec, oversample: int = DEFAULT_OVERSAMPLE, span: int = 2,
              normalize: bool = True) -> SampledCVState:
    """Sample a callable wavefunction on the fine grid."""
    xs = fine_axis(grid, oversample, span)
    st = SampledCVState(grid, np.asarray(psi(xs), dtype=complex), oversample, span)
    return st.normalized() if normalize else st


def fock_cv_state(coeffs, grid: GridSpec, oversample: int = DEFAULT_OVERSAMPLE,
                  span: int = 2) -> SampledCVState:
    """Fock superposition ``sum_n c_n phi_n`` on the fine grid."""
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if abs(np.linalg.norm(c) - 1) > 1e-8:
        raise ValidationError("Fock coefficients must be normalized")
    st = sample_cv(lambda x: fock_superposition(c, grid.mu, x), grid, oversample, span)
    st.fock_coeffs = c
    return st


def fock_number_state(n: int, grid: GridSpec, **kw) -> SampledCVState:
    c = np.zeros(n + 1)
    c[n] = 1
    return fock_cv_state(c, grid, **kw)


def make_initial_cv(kind: str, grid: GridSpec, sigma: float | None = None,
                    oversample: int = DEFAULT_OVERSAMPLE, span: int | None = None
                    ) -> SampledCVState:
    """Initial CV wavefunction for the DV-to-CV protocol.

    ``rectangular`` has height ``mu^(1/4) / sqrt(2L)`` on ``|x| < L/sqrt(mu)``.
    No fine-grid point lies on the edges, so the Riemann norm is exactly one.
    ``gaussian`` is ``pi^(-1/4) sigma^(-1/2) exp(-x^2 / (2 sigma^2))``; its
    default span keeps at least eight standard deviations on each side.
    """
    L, mu = grid.L, grid.mu
    if kind == "rectangular":
        span = span or 2
        xs = fine_axis(grid, oversample, span)
        amps = np.where(np.abs(xs) < L / np.sqrt(mu), mu**0.25 / np.sqrt(2 * L), 0.0)
        return SampledCVState(grid, amps, oversample, span)
    if kind == "gaussian":
        if sigma is None or sigma <= 0:
            raise ValidationError("gaussian initial state needs sigma > 0")
        if span is None:
            span = max(2, int(np.ceil(8 * sigma * np.sqrt(mu) / L)) + 1)
            span += span % 2
            span = min(span, oversample)
        xs = fine_axis(grid, oversample, span)
        amps = np.pi**-0.25 / np.sqrt(sigma) * np.exp(-xs**2 / (2 * sigma**2))
        return SampledCVState(grid, amps, oversample, span)
    raise ValidationError(f"unknown initial state {kind!r}")


def cv_fourier(cv: SampledCVState, ks) -> np.ndarray:
    """Direct evaluation of ``(2 pi)^-1/2 int psi(y) exp(-i k y) dy`` at ``ks``."""
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    xs = cv.xs
    out = np.empty(ks.size, dtype=complex)
    for s in range(0, ks.size, 256):
        out[s:s + 256] = np.exp(-1j * np.outer(ks[s:s + 256], xs)) @ cv.amps
    return out * cv.fine_dx / np.sqrt(2 * np.pi)


def comb_momentum(cv: SampledCVState, p: float) -> np.ndarray:
    """``psi_hat(p + mu x_j)`` for all DV grid points ``x_j``."""
    g = cv.grid
    N, os_ = g.n_x, cv.oversample
    v = cv.amps * np.exp(-1j * p * cv.xs)
    out = offset_dft(v, os_ * N, g.center, (cv.fine_n - 1) / 2, N, sign=-1)
    return out * cv.fine_dx / np.sqrt(2 * np.pi)


def fine_momentum_axis(cv: SampledCVState) -> np.ndarray:
    """Momentum grid of spacing ``dp / oversample`` spanning ``|p| < span L sqrt(mu)``."""
    g = cv.grid
    M = cv.fine_n
    return (np.arange(M) - (M - 1) / 2) * g.delta_p / cv.oversample


def momentum_on_fine_axis(cv: SampledCVState) -> np.ndarray:
    """``psi_hat`` on :func:`fine_momentum_axis` via one offset DFT."""
    g = cv.grid
    M = cv.fine_n
    K = cv.oversample**2 * g.n_x
    c = (M - 1) / 2
    out = offset_dft(cv.amps, K, c, c, M, sign=-1)
    return out * cv.fine_dx / np.sqrt(2 * np.pi)


def cv_support_radius(cv: SampledCVState, eps: float) -> float:
    """Support radius of a sampled state.

    Uses the Fock expansion when it is known; otherwise the larger of the
    position and momentum radii found from cumulative tails of the samples.
    """
    if cv.fock_coeffs is not None:
        return superposition_support_radius(cv.fock_coeffs, eps, cv.mu)
    sq = np.sqrt(cv.mu)
    rx = _sampled_radius(np.abs(cv.xs) * sq, np.abs(cv.amps) ** 2 * cv.fine_dx, eps)
    ps = fine_momentum_axis(cv)
    dp = ps[1] - ps[0]
    rp = _sampled_radius(np.abs(ps) / sq, np.abs(momentum_on_fine_axis(cv)) ** 2 * dp, eps)
    return max(rx, rp)


def _sampled_radius(r, w, eps):
    order = np.argsort(r)[::-1]
    tail = np.sqrt(np.cumsum(w[order]))
    k = np.searchsorted(tail, eps, side="right")
    return float(r[order][k]) if k < r.size else 0.0
