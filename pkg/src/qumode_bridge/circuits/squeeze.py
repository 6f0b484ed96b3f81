"""Squeezing ``S(r) = exp(i r/2 (XP + PX))`` from exponentials of X^2 and P^2.

With ``e = (i/2) X^2``, ``f = -(i/2) P^2`` and ``h = (i/2)(XP + PX)`` the three
generators close into sl(2, R).  In the defining 2x2 representation
``e -> [[0, 1], [0, 0]]``, ``f -> [[0, 0], [1, 0]]`` and ``h -> diag(1, -1)``, so

    exp(-a e) exp(-a f) exp(b e) exp(b f) exp(-a e) exp(-a f) = exp(r h)

becomes a pair of scalar equations for ``(a, b)``.  They are solved by damped
Newton iteration with continuation in ``r``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..discrete import momentum_operator, position_operator
from ..errors import SolverError, ValidationError
from ..grids import GridSpec
from .compile import compile_kinetic, compile_phase
from .gates import Circuit

CONTINUATION_STEP = 0.01
MAX_ITER = 200
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class SqueezeCoefficients:
    r: float
    a: float
    b: float
    residual: float
    identity_residual: float


def sl2r_product(a: float, b: float) -> np.ndarray:
    """2x2 image of ``exp(-ae) exp(-af) exp(be) exp(bf) exp(-ae) exp(-af)``."""
    G = np.array([[1 + a * a, -a], [-a, 1.0]])
    Hb = np.array([[1 + b * b, b], [b, 1.0]])
    return G @ Hb @ G


def _trace_terms(a, b):
    Q = (a**4 - 2 * (a**2 + 2) * a * b + 4 * a**2
         + (a**4 + 3 * a**2 + 1) * b**2 + 2)
    K = a**4 * (b**2 + 1) - 2 * a**3 * b + a**2 * (b**2 + 2) + b**2
    return Q, K


def squeeze_residuals(r: float, a: float, b: float) -> np.ndarray:
    """Residuals of the two conditions, divided by the stabilizer ``sqrt(Q^2 - 4)``.

    ``Q`` is the trace of the 2x2 product and ``K`` the difference of its
    diagonal entries.  The first condition is the vanishing off-diagonal
    entry; the second matches the Cartan component of the logarithm,
    ``K arccoth(Q / st) / st``, to ``r``.
    """
    Q, K = _trace_terms(a, b)
    st = np.sqrt(max((Q + 2) * (Q - 2), 0.0))
    if st == 0:
        return np.array([np.inf, np.inf])
    f1 = a * (a**2 * (b**2 + 1) - 2 * a * b + b**2 + 2) - b
    f2 = r - K * np.arctanh(min(st / Q, 1.0)) / st
    return np.array([f1, f2]) / st


def _jacobian(fun, x, h=1e-7):
    J = np.empty((2, 2))
    for k in range(2):
        d = np.zeros(2)
        d[k] = h * max(1.0, abs(x[k]))
        J[:, k] = (fun(x + d) - fun(x - d)) / (2 * d[k])
    return J


def _newton(fun, x0):
    x = np.array(x0, dtype=float)
    f = fun(x)
    for _ in range(MAX_ITER):
        if np.max(np.abs(f)) < 1e-13:
            break
        try:
            step = np.linalg.solve(_jacobian(fun, x), -f)
        except np.linalg.LinAlgError:
            raise SolverError("singular Jacobian in squeeze solver") from None
        lam = 1.0
        while lam > 1e-10:
            xn = x + lam * step
            fn = fun(xn)
            if np.all(np.isfinite(fn)) and np.linalg.norm(fn) < np.linalg.norm(f):
                break
            lam *= 0.5
        else:
            break
        x, f = xn, fn
    return x, float(np.max(np.abs(f)))


def _poly_mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Product of matrix polynomials stored as ``(degree + 1, 2, 2)`` coefficient stacks."""
    out = np.zeros((p.shape[0] + q.shape[0] - 1, 2, 2))
    for i in range(p.shape[0]):
        for j in range(q.shape[0]):
            out[i + j] += p[i] @ q[j]
    return out


def _pad(p: np.ndarray, n: int) -> np.ndarray:
    return np.concatenate([p, np.zeros((n - p.shape[0], 2, 2))])


def _small_r_residuals(r: float, alpha: float, beta: float) -> np.ndarray:
    """Direct conditions in the scaled variables ``(a, b) = sqrt(r) (alpha, beta)``.

    Near ``r = 0`` the stabilizer ``sqrt(Q^2 - 4)`` vanishes; the scaled
    off-diagonal entry and log-diagonal entry stay O(1) instead.  The product
    ``(1 + g)(1 + h)(1 + g) - 1`` is expanded as a polynomial in ``s = sqrt(r)``
    so the powers of ``s`` divide out exactly, even for subnormal ``r``.
    """
    s = np.sqrt(r)
    g = np.array([np.zeros((2, 2)), [[0.0, -alpha], [-alpha, 0.0]], [[alpha**2, 0.0], [0.0, 0.0]]])
    h = np.array([np.zeros((2, 2)), [[0.0, beta], [beta, 0.0]], [[beta**2, 0.0], [0.0, 0.0]]])
    gh, hg, gg = _poly_mul(g, h), _poly_mul(h, g), _poly_mul(g, g)
    D = _pad(2 * g + h, 7) + _pad(gh + hg + gg, 7) + _poly_mul(gh, g)
    powers = s ** np.arange(6)
    off = D[1:, 0, 1] @ powers            # D01 / s
    diag = D[2:, 0, 0] @ powers[:5]       # D00 / r
    x = diag * r
    if x <= -1:
        return np.array([np.inf, np.inf])
    return np.array([off, diag - 1 + (np.log1p(x) - x) / r])


@lru_cache(maxsize=256)
def _solve(r: float) -> tuple[float, float, float]:
    if r == 0:
        return 0.0, 0.0, 0.0
    if r < CONTINUATION_STEP:
        x, res = _newton(lambda v: _small_r_residuals(r, v[0], v[1]),
                         [1 / np.sqrt(3), 2 / np.sqrt(3)])
        if not res < RESIDUAL_TOL:
            raise SolverError(f"squeeze solver stalled at r={r:.3g} (residual {res:.2e})")
        a, b = np.sqrt(r) * x
        return float(a), float(b), res
    steps = np.append(np.arange(CONTINUATION_STEP, r, CONTINUATION_STEP), r)
    a0 = np.sqrt(steps[0] / 3)
    x = np.array([a0, 2 * a0])
    res = np.inf
    for rk in steps:
        x, res = _newton(lambda v: squeeze_residuals(rk, v[0], v[1]), x)
        if not res < RESIDUAL_TOL:
            raise SolverError(f"squeeze solver stalled at r={rk:.4f} (residual {res:.2e})")
    return float(x[0]), float(x[1]), res


def solve_squeeze_coeffs(r: float) -> SqueezeCoefficients:
    """Angles ``(a, b)`` of the exact six-factor decomposition of ``S(|r|)``."""
    r = float(r)
    if not np.isfinite(r):
        raise ValidationError("r must be finite")
    a, b, res = _solve(abs(r))
    target = np.diag([np.exp(abs(r)), np.exp(-abs(r))])
    ident = float(np.max(np.abs(sl2r_product(a, b) - target)))
    if ident > RESIDUAL_TOL * max(1.0, np.exp(abs(r))):
        raise SolverError(f"2x2 identity violated (residual {ident:.2e})")
    return SqueezeCoefficients(r, a, b, res, ident)


def _x2(grid, eta):
    """exp(-i eta X^2)"""
    return compile_phase(grid, eta)


def _p2(grid, eta):
    """exp(-i eta P^2)"""
    return compile_kinetic(grid, eta)


def _chain(grid, factors):
    """Circuit for an operator product written left to right."""
    out = Circuit(grid.n_q, declared_cnot=0)
    for c in reversed(factors):
        out = out + c
    return out


def compile_squeeze_exact(grid: GridSpec, r: float) -> Circuit:
    """Six-factor decomposition of ``S(r)``; negative ``r`` swaps the roles of
    X^2 and P^2."""
    co = solve_squeeze_coeffs(r)
    a, b = co.a, co.b
    if r >= 0:
        A, B = _x2, _p2
    else:
        A, B = _p2, _x2
    return _chain(grid, [A(grid, a / 2), B(grid, -a / 2), A(grid, -b / 2),
                         B(grid, b / 2), A(grid, a / 2), B(grid, -a / 2)])


def compile_squeeze_trotter(grid: GridSpec, r: float) -> Circuit:
    """Four-factor group-commutator approximation of ``S(r)``; error O(|r|^1.5)."""
    s = np.sqrt(abs(r))
    A, B = (_x2, _p2) if r >= 0 else (_p2, _x2)
    return _chain(grid, [A(grid, s / 2), B(grid, -s / 2), A(grid, -s / 2), B(grid, s / 2)])


@lru_cache(maxsize=8)
def _dilation_eigensystem(grid: GridSpec):
    X = position_operator(grid)
    P = momentum_operator(grid)
    G = 0.5 * (X @ P + P @ X)
    return np.linalg.eigh(0.5 * (G + G.conj().T))


def dense_squeeze(grid: GridSpec, r: float) -> np.ndarray:
    """Reference ``exp(i r/2 (XP + PX))`` by diagonalization."""
    w, V = _dilation_eigensystem(grid)
    return (V * np.exp(1j * r * w)) @ V.conj().T


def restricted_error(U: np.ndarray, S: np.ndarray, V: np.ndarray) -> float:
    """``max |(U - S) Q|`` with ``Q = V V^dag``."""
    D = (U - S) @ V
    return float(np.max(np.abs(D @ V.conj().T)))


def fock_block_error(U: np.ndarray, S: np.ndarray, V: np.ndarray) -> float:
    """``max |<m|(U - S)|n>|`` over the discrete Fock vectors in the columns of ``V``."""
    return float(np.max(np.abs(V.conj().T @ (U - S) @ V)))
