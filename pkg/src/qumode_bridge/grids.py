"""Phase-space grids, oscillator eigenfunctions and band-limited interpolation.

A qumode with boson mass ``mu`` is represented on ``n_q`` qubits by sampling
its position wavefunction on ``N = 2**n_q`` points.  The spacing is chosen so
that the position and momentum windows have the same dimensionless half-width
``L = sqrt(pi N / 2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import ValidationError

MAX_FOCK = 512
MAX_QUBITS = 16


@dataclass(frozen=True)
class GridSpec:
    """Discretization parameters for one qumode register.

    Parameters
    ----------
    n_q : int
        Number of qubits, ``1 <= n_q <= 16``.
    mu : float
        Boson mass, must be positive.
    """

    n_q: int
    mu: float = 1.0

    def __post_init__(self):
        if not isinstance(self.n_q, (int, np.integer)) or isinstance(self.n_q, bool):
            raise ValidationError(f"n_q must be an integer, got {self.n_q!r}")
        if not 1 <= self.n_q <= MAX_QUBITS:
            raise ValidationError(f"n_q must be in [1, {MAX_QUBITS}], got {self.n_q}")
        if not np.isfinite(self.mu) or self.mu <= 0:
            raise ValidationError(f"mu must be positive and finite, got {self.mu}")
        object.__setattr__(self, "n_q", int(self.n_q))
        object.__setattr__(self, "mu", float(self.mu))

    @property
    def n_x(self) -> int:
        return 2 ** self.n_q

    @property
    def delta_x(self) -> float:
        return float(np.sqrt(2 * np.pi / (self.n_x * self.mu)))

    @property
    def delta_p(self) -> float:
        return self.mu * self.delta_x

    @property
    def L(self) -> float:
        """Dimensionless half-width of both windows."""
        return float(np.sqrt(np.pi * self.n_x / 2))

    @property
    def center(self) -> float:
        return (self.n_x - 1) / 2

    def x_points(self) -> np.ndarray:
        return (np.arange(self.n_x) - self.center) * self.delta_x

    def p_points(self) -> np.ndarray:
        return (np.arange(self.n_x) - self.center) * self.delta_p

    def with_qubits(self, n_q: int) -> "GridSpec":
        return GridSpec(n_q, self.mu)


def make_grid(n_q: int, mu: float = 1.0) -> GridSpec:
    """Return the grid for ``n_q`` qubits and boson mass ``mu``."""
    return GridSpec(n_q, mu)


def _check_order(n: int) -> None:
    if n < 0 or n > MAX_FOCK:
        raise ValidationError(f"Fock index must be in [0, {MAX_FOCK}], got {n}")


def fock_wavefunctions(n_max: int, mu: float, x) -> np.ndarray:
    """Position eigenfunctions ``phi_0 .. phi_{n_max}`` of the oscillator.

    Uses the three-term recurrence with per-point logarithmic rescaling so
    that high orders stay finite far into the classically forbidden region.

    Returns
    -------
    ndarray, shape ``(n_max + 1,) + x.shape``
    """
    _check_order(n_max)
    if mu <= 0:
        raise ValidationError("mu must be positive")
    x = np.asarray(x, dtype=float)
    y = np.sqrt(mu) * x.ravel()
    out = np.empty((n_max + 1, y.size))
    logs = -0.5 * y**2 - 0.25 * np.log(np.pi)
    prev = np.zeros_like(y)
    cur = np.ones_like(y)

    def emit(k):
        with np.errstate(divide="ignore"):
            mag = np.log(np.abs(cur)) + logs
        out[k] = np.where(cur == 0, 0.0, np.sign(cur) * np.exp(mag))

    emit(0)
    for k in range(n_max):
        nxt = y * np.sqrt(2.0 / (k + 1)) * cur - np.sqrt(k / (k + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e150
        if big.any():
            scale = np.abs(cur[big])
            cur[big] /= scale
            prev[big] /= scale
            logs[big] += np.log(scale)
        emit(k + 1)
    return (mu**0.25 * out).reshape((n_max + 1,) + x.shape)


def fock_wavefunction(n: int, mu: float, x) -> np.ndarray:
    """Position wavefunction ``phi_n(x)`` for boson mass ``mu``."""
    return fock_wavefunctions(n, mu, x)[n]


def fock_momentum_wavefunction(n: int, mu: float, p) -> np.ndarray:
    """Momentum wavefunction ``(-i)^n phi_n(p / mu) / sqrt(mu)``."""
    p = np.asarray(p, dtype=float)
    return (-1j) ** n * fock_wavefunction(n, mu, p / mu) / np.sqrt(mu)


def fock_superposition(coeffs, mu: float, x, momentum: bool = False) -> np.ndarray:
    """Evaluate ``sum_n c_n phi_n`` in position (or momentum) space."""
    c = np.asarray(coeffs, dtype=complex)
    if momentum:
        x = np.asarray(x, dtype=float) / mu
        c = c * (-1j) ** np.arange(c.size) / np.sqrt(mu)
    basis = fock_wavefunctions(c.size - 1, mu, x)
    return np.tensordot(c, basis, axes=(0, 0))


@dataclass(frozen=True)
class SupportRadius:
    """Smallest dimensionless radius holding all but ``eps`` of a state."""

    n: int
    eps: float
    L_eps: float
    mu: float = 1.0


def _tail_integral(density, start: float, stop: float, eps: float) -> float:
    val, _ = integrate.quad(density, start, stop, epsabs=eps**2 / 100,
                            epsrel=1e-10, limit=400)
    return max(val, 0.0)


def _tail_stop(n: int, L: float) -> float:
    return max(L, np.sqrt(2 * n + 1)) + 40.0


def fock_tail(n: int, L: float, eps: float = 1e-4) -> float:
    """Weight of ``phi_n`` outside ``|x| < L / sqrt(mu)``, as a norm.

    The value does not depend on ``mu``; the momentum tail outside
    ``|p| < L sqrt(mu)`` is identical.
    """
    _check_order(n)
    stop = _tail_stop(n, L)
    t = _tail_integral(lambda y: fock_wavefunction(n, 1.0, y) ** 2, L, stop, eps)
    return float(np.sqrt(2 * t))


def _bisect_radius(tail, eps: float, start: float, resolution: float = 1e-3) -> float:
    lo, hi = 0.0, max(start, 1.0)
    while tail(hi) > eps:
        lo, hi = hi, 2 * hi
        if hi > 1e3:
            raise ValidationError("support radius search diverged")
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if tail(mid) > eps:
            lo = mid
        else:
            hi = mid
    return hi


@lru_cache(maxsize=4096)
def _fock_radius(n: int, eps: float) -> float:
    return _bisect_radius(lambda L: fock_tail(n, L, eps), eps, np.sqrt(2 * n + 1) + 1)


def support_radius(n: int, eps: float, mu: float = 1.0) -> SupportRadius:
    """Minimal ``L`` with position and momentum tails of ``phi_n`` below ``eps``.

    Tails are evaluated by adaptive quadrature; the radius is found by
    bisection to a resolution of ``1e-3``.
    """
    _check_order(n)
    if not 1e-12 <= eps < 1:
        raise ValidationError(f"eps must lie in [1e-12, 1), got {eps}")
    if mu <= 0:
        raise ValidationError("mu must be positive")
    return SupportRadius(n, float(eps), _fock_radius(int(n), float(eps)), float(mu))


def superposition_tails(coeffs, L: float, eps: float = 1e-4) -> tuple[float, float]:
    """Position and momentum tail norms of ``sum_n c_n phi_n`` beyond ``L``.

    Computed in units where ``mu = 1``; the result is mass independent.
    """
    c = np.asarray(coeffs, dtype=complex)
    n_max = c.size - 1
    _check_order(n_max)
    cp = c * (-1j) ** np.arange(c.size)
    stop = _tail_stop(n_max, L)

    def dens(cc, sign):
        return lambda y: abs(np.dot(cc, fock_wavefunctions(n_max, 1.0, sign * y))) ** 2

    tails = []
    for cc in (c, cp):
        t = _tail_integral(dens(cc, 1.0), L, stop, eps)
        t += _tail_integral(dens(cc, -1.0), L, stop, eps)
        tails.append(float(np.sqrt(t)))
    return tails[0], tails[1]


def superposition_support_radius(coeffs, eps: float, mu: float = 1.0) -> float:
    """Support radius of a Fock superposition: the larger of the position
    and momentum radii."""
    c = np.asarray(coeffs, dtype=complex)
    nrm = np.linalg.norm(c)
    if abs(nrm - 1) > 1e-8:
        raise ValidationError("Fock coefficients must be normalized")
    return _bisect_radius(lambda L: max(superposition_tails(c, L, eps)), eps,
                          np.sqrt(2 * c.size + 1) + 1)


def truncation_weight(coeffs, n_b: int) -> float:
    """Norm of the Fock components with index ``>= n_b``."""
    c = np.asarray(coeffs, dtype=complex)
    if abs(np.linalg.norm(c) - 1) > 1e-8:
        raise ValidationError("Fock coefficients must be normalized")
    if n_b < 0:
        raise ValidationError("n_b must be non-negative")
    return float(np.linalg.norm(c[n_b:]))


def sinc_kernel(grid: GridSpec, x) -> np.ndarray:
    """Band-limited interpolation kernel ``sinc(x / delta_x)``."""
    return np.sinc(np.asarray(x, dtype=float) / grid.delta_x)


def sinc_interpolate(samples, grid: GridSpec, x, delta: float = 0.0,
                     chunk: int = 4096) -> np.ndarray:
    """Evaluate ``sum_j s_j sinc((x - x_j - delta dx) / dx)`` at points ``x``.

    ``delta`` must lie in ``[-0.5, 0.5]``; both ends describe valid sampling grids.
    """
    if not -0.5 <= delta <= 0.5:
        raise ValidationError(f"delta must lie in [-0.5, 0.5], got {delta}")
    s = np.asarray(samples)
    if s.shape[0] != grid.n_x:
        raise ValidationError("sample count does not match the grid")
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    nodes = (grid.x_points() + delta * grid.delta_x) / grid.delta_x
    out = np.empty(flat.size, dtype=np.result_type(s.dtype, float))
    for start in range(0, flat.size, chunk):
        xs = flat[start:start + chunk] / grid.delta_x
        out[start:start + chunk] = np.sinc(xs[:, None] - nodes[None, :]) @ s
    return out.reshape(x.shape)
