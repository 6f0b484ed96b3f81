"""Transfer of a discrete qumode from a qubit register to a CV mode.

The CV mode starts in a broad state ``g``; after ``exp(-i mu X (x) X_bar)``
the DV register is measured in the momentum basis ``F|m>``.  The CV mode is
then displaced by ``p_m / mu`` and Fourier transformed with
``F_mu = sqrt(mu / 2 pi) int int exp(i mu x y) |x><y|``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..discrete import DiscreteQumode, decode_qumode, shifted_dft
from ..errors import ValidationError
from ..fourier import offset_dft
from .cvdv import JointState, SuccessReport, TransferOutcome
from .cvstate import SampledCVState


@dataclass(frozen=True)
class DVCVTable:
    """Outcome-resolved results for every ``m``."""

    p_m: np.ndarray
    prob: np.ndarray
    fidelity: np.ndarray
    in_window: np.ndarray


def prepare_joint_dvcv(dv: DiscreteQumode, g0: SampledCVState) -> JointState:
    if dv.grid != g0.grid:
        raise ValidationError("DV state and CV template use different grids")
    return JointState(g0, np.outer(g0.amps, dv.amps))


def measure_dv_momentum(joint: JointState, m: int) -> np.ndarray:
    """Unnormalized CV samples after the DV outcome ``F|m>``."""
    g = joint.cv_template.grid
    col = shifted_dft(g)[:, m]
    return joint.amps @ col.conj()


def _collapsed(dv: DiscreteQumode, g0: SampledCVState, m: int) -> np.ndarray:
    """``g(y) sqrt(dp) phi_aper(mu y + p_m)`` on the fine grid, via one offset DFT."""
    g = dv.grid
    N = g.n_x
    pm = g.p_points()[m]
    v = dv.amps * np.exp(-1j * pm * g.x_points()) / np.sqrt(N)
    # mu x_j y_b = 2 pi (j - c)(b - c_M) / (oversample N)
    s = offset_dft(v, g0.oversample * N, (g0.fine_n - 1) / 2, g.center, g0.fine_n, sign=-1)
    return g0.amps * s


def _displace(amps: np.ndarray, shift: float, dy: float) -> np.ndarray:
    """``exp(-i shift P)`` by phase multiplication in Fourier space."""
    k = 2 * np.pi * np.fft.fftfreq(amps.size, dy)
    return np.fft.ifft(np.fft.fft(amps) * np.exp(-1j * k * shift))


def _f_mu(amps: np.ndarray, g0: SampledCVState) -> np.ndarray:
    """``xi(x) = sqrt(mu / 2 pi) int exp(i mu x y) chi(y) dy`` on the fine grid."""
    M = g0.fine_n
    K = g0.oversample**2 * g0.grid.n_x
    c = (M - 1) / 2
    out = offset_dft(amps, K, c, c, M, sign=1)
    return out * g0.fine_dx * np.sqrt(g0.mu / (2 * np.pi))


def dvcv_transfer(dv: DiscreteQumode, g0: SampledCVState, m: int,
                  target: np.ndarray | None = None, l_eps: float | None = None,
                  method: str = "fast") -> TransferOutcome:
    """Run the protocol for DV outcome ``m``.

    Returns the outcome probability, the final CV state and its fidelity with
    the band-limited reconstruction of ``dv`` (or with ``target`` samples).
    """
    g = dv.grid
    if g0.grid != g:
        raise ValidationError("DV state and CV template use different grids")
    if not 0 <= m < g.n_x:
        raise ValidationError(f"outcome m must be in [0, {g.n_x})")
    if method == "fast":
        chi = _collapsed(dv, g0, m)
    elif method == "joint":
        from .cvdv import apply_entangler
        chi = measure_dv_momentum(apply_entangler(prepare_joint_dvcv(dv, g0)), m)
    else:
        raise ValidationError(f"unknown method {method!r}")
    prob = float(np.sum(np.abs(chi) ** 2) * g0.fine_dx)
    if prob <= 0:
        raise ValidationError("zero-probability outcome")
    chi = chi / np.sqrt(prob)
    pm = g.p_points()[m]
    chi = _displace(chi, pm / g.mu, g0.fine_dx)
    xi = _f_mu(chi, g0)
    out = SampledCVState(g, xi, g0.oversample, g0.span)
    if target is None:
        target = decode_qumode(dv, g0.xs)
    fid = _fidelity(target, xi)
    inside = True if l_eps is None else abs(pm) <= (g.L - l_eps) * np.sqrt(g.mu)
    return TransferOutcome(float(pm), prob, out, fid, bool(inside), float(np.sqrt(max(2 - 2 * fid, 0))))


def _fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b)))


def dvcv_table(dv: DiscreteQumode, g0: SampledCVState, l_eps: float,
               target: np.ndarray | None = None) -> DVCVTable:
    """Probability, fidelity and window flag for every outcome ``m``."""
    g = dv.grid
    if target is None:
        target = decode_qumode(dv, g0.xs)
    probs, fids = [], []
    for m in range(g.n_x):
        o = dvcv_transfer(dv, g0, m, target=target)
        probs.append(o.probability)
        fids.append(o.fidelity)
    pm = g.p_points()
    return DVCVTable(pm, np.array(probs), np.array(fids),
                     np.abs(pm) <= (g.L - l_eps) * np.sqrt(g.mu))


def predicted_dvcv_success(grid, l_eps: float) -> float:
    return (grid.L - l_eps) / grid.L


def dvcv_success_probability(dv: DiscreteQumode, g0: SampledCVState, eps: float,
                             l_eps: float, criterion: str = "distance",
                             table: DVCVTable | None = None) -> SuccessReport:
    """Sum of ``Pr(p_m)`` over outcomes with an ``eps``-accurate transfer.

    ``criterion`` has the same meaning as for the CV-to-DV protocol.
    """
    t = table or dvcv_table(dv, g0, l_eps)
    if criterion == "distance":
        ok = np.sqrt(np.maximum(2 - 2 * t.fidelity, 0)) <= eps
    elif criterion == "fidelity":
        ok = t.fidelity > 1 - eps
    else:
        raise ValidationError(f"unknown criterion {criterion!r}")
    return SuccessReport(float(eps), float(np.sum(t.prob[ok])),
                         float(predicted_dvcv_success(dv.grid, l_eps)), int(t.prob.size), criterion)


def g_hat(kind: str, t, grid, sigma: float | None = None) -> np.ndarray:
    """Fourier transform of the initial CV wavefunction at ``t``."""
    t = np.asarray(t, dtype=float)
    if kind == "rectangular":
        return np.sinc(t / (grid.mu * grid.delta_x)) / np.sqrt(grid.delta_p)
    if kind == "gaussian":
        return np.pi**-0.25 * np.sqrt(sigma) * np.exp(-(sigma * t) ** 2 / 2)
    raise ValidationError(f"unknown initial state {kind!r}")


def dvcv_transfer_analytic(dv: DiscreteQumode, kind: str, m: int, xs,
                           sigma: float | None = None, phi=None,
                           images: int = 3) -> tuple[np.ndarray, float]:
    """Closed-form output wavefunction and outcome probability.

    ``xi(x) = exp(i x p_m) Pr^-1/2 (dp/N)^1/2 sum_j phi(x_j) exp(-i x_j p_m) g_hat(mu (x_j - x))``
    with ``j`` running over ``images`` extra grid copies on each side.  Values
    of ``phi`` off the register are taken from the callable ``phi`` when
    given, and are zero otherwise.
    """
    g = dv.grid
    N = g.n_x
    j = np.arange(-images * N, (images + 1) * N)
    xj = (j - g.center) * g.delta_x
    vals = np.zeros(j.size, dtype=complex)
    inside = (j >= 0) & (j < N)
    vals[inside] = dv.samples
    if phi is not None:
        vals[~inside] = phi(xj[~inside])
    pm = g.p_points()[m]
    w = vals * np.exp(-1j * xj * pm)
    if kind == "rectangular":
        prob = g.delta_x * float(np.sum(np.abs(vals) ** 2)) / N
    elif kind == "gaussian":
        d = xj[:, None] - xj[None, :]
        ker = np.exp(-(g.mu * sigma * d) ** 2 / 4)
        prob = float(np.real(w.conj() @ ker @ w)) * g.delta_p / (N * g.mu)
    else:
        raise ValidationError(f"unknown initial state {kind!r}")
    xs = np.asarray(xs, dtype=float)
    xi = np.empty(xs.size, dtype=complex)
    for s in range(0, xs.size, 2048):
        xx = xs[s:s + 2048]
        xi[s:s + 2048] = g_hat(kind, g.mu * (xj[None, :] - xx[:, None]), g, sigma) @ w
    xi *= np.exp(1j * xs * pm) * np.sqrt(g.delta_p / N) / np.sqrt(prob)
    return xi, prob
