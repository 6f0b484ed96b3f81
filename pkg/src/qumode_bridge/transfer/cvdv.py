"""Transfer of a CV qumode into a qubit register.

The DV register starts in the uniform superposition, the two systems are
entangled with ``exp(-i mu X (x) X_bar)``, and the CV momentum is measured.
After the outcome-dependent DV corrections the register holds the discrete
representation of the input, provided the outcome lies in the window
``|p| < (L - L_eps) sqrt(mu) + dp/2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ..discrete import DiscreteQumode
from ..errors import ValidationError
from ..fourier import centered_dft_apply
from .cvstate import (SampledCVState, comb_momentum, cv_support_radius,
                      fine_momentum_axis, momentum_on_fine_axis)


@dataclass
class JointState:
    """Joint amplitudes ``A[b, j]``: fine CV grid point ``b`` times DV index ``j``."""

    cv_template: SampledCVState
    amps: np.ndarray


@dataclass
class TransferOutcome:
    measured: float
    probability: float
    state: object
    fidelity: float
    in_window: bool
    distance: float


@dataclass(frozen=True)
class SuccessReport:
    eps: float
    p_success: float
    predicted: float
    n_points: int
    criterion: str = "distance"


def prepare_joint_cvdv(cv: SampledCVState) -> JointState:
    """CV state times the uniform DV superposition."""
    N = cv.grid.n_x
    return JointState(cv, np.outer(cv.amps, np.ones(N)) / np.sqrt(N))


def apply_entangler(joint: JointState, sign: int = -1) -> JointState:
    """Multiply by ``exp(sign i mu y x_j)``."""
    g = joint.cv_template.grid
    ph = np.exp(sign * 1j * g.mu * np.outer(joint.cv_template.xs, g.x_points()))
    return JointState(joint.cv_template, joint.amps * ph)


def measure_cv_momentum(joint: JointState, p: float) -> np.ndarray:
    """Unnormalized DV amplitudes after a CV momentum outcome ``p``."""
    cv = joint.cv_template
    ker = np.exp(-1j * p * cv.xs) * cv.fine_dx / np.sqrt(2 * np.pi)
    return ker @ joint.amps


def split_outcome(p: float, delta_p: float) -> tuple[int, float]:
    """Write ``p = (n + d) dp`` with ``d`` in ``(-0.5, 0.5]``."""
    n = int(np.ceil(p / delta_p - 0.5))
    return n, p / delta_p - n


def window_half_width(grid, l_eps: float) -> float:
    return (grid.L - l_eps) * np.sqrt(grid.mu) + grid.delta_p / 2


def measurement_pdf(cv: SampledCVState, p) -> np.ndarray:
    """``Pr(p) = N^-1 sum_j |psi_hat(mu x_j + p)|^2``."""
    ps = np.atleast_1d(np.asarray(p, dtype=float))
    N = cv.grid.n_x
    return np.array([np.sum(np.abs(comb_momentum(cv, q)) ** 2) / N for q in ps])


def pdf_on_fine_axis(cv: SampledCVState) -> tuple[np.ndarray, np.ndarray]:
    """Measurement density on the fine momentum axis from a single transform."""
    ps = fine_momentum_axis(cv)
    dens = np.abs(momentum_on_fine_axis(cv)) ** 2
    g = cv.grid
    step = cv.oversample
    N = g.n_x
    out = np.zeros_like(dens)
    M = dens.size
    for j in range(N):
        # a shift by (j - c) dp is an integer number of fine momentum cells
        shift = int(step * (j - g.center))
        if shift >= 0:
            out[:M - shift] += dens[shift:]
        else:
            out[-shift:] += dens[:M + shift]
    return ps, out / N


def half_cell_values(cv: SampledCVState) -> np.ndarray:
    """Band-limited values of the samples at ``y_b + dy/2`` (FFT phase shift)."""
    k = 2 * np.pi * np.fft.fftfreq(cv.fine_n, cv.fine_dx)
    return np.fft.ifft(np.fft.fft(cv.amps) * np.exp(1j * k * cv.fine_dx / 2))


def encode_target(cv: SampledCVState) -> DiscreteQumode:
    """Discrete representation of the CV input.

    The DV points fall half-way between fine grid points, so the samples are
    shifted by half a cell before being read off.
    """
    g = cv.grid
    idx = cv.fine_n // 2 - 1 + np.rint(cv.oversample * (np.arange(g.n_x) - g.center)).astype(int)
    amps = np.sqrt(g.delta_x) * half_cell_values(cv)[idx]
    return DiscreteQumode(g, amps / np.linalg.norm(amps))


def _phase_free_distance(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    ov = np.vdot(a, b)
    fid = float(abs(ov))
    phase = ov / fid if fid > 0 else 1.0
    return fid, float(np.linalg.norm(a * phase - b))


def cvdv_transfer(cv: SampledCVState, p_meas: float, l_eps: float | None = None,
                  eps: float = 1e-4, target: DiscreteQumode | None = None,
                  method: str = "fast") -> TransferOutcome:
    """Run the protocol for a given momentum outcome.

    Parameters
    ----------
    cv : SampledCVState
        Input qumode.
    p_meas : float
        CV momentum outcome; must lie inside the fine momentum span.
    l_eps : float, optional
        Support radius used for the window flag; computed from ``cv`` if absent.
    method : {"fast", "joint"}
        ``joint`` builds the entangled joint state explicitly.
    """
    g = cv.grid
    span_p = cv.span * g.L * np.sqrt(g.mu)
    if not abs(p_meas) <= span_p:
        raise ValidationError(f"p_meas={p_meas} outside the momentum span {span_p:.4g}")
    N = g.n_x
    if method == "joint":
        c = measure_cv_momentum(apply_entangler(prepare_joint_cvdv(cv)), p_meas)
    elif method == "fast":
        c = comb_momentum(cv, p_meas) / np.sqrt(N)
    else:
        raise ValidationError(f"unknown method {method!r}")
    prob = float(np.sum(np.abs(c) ** 2))
    if prob <= 0:
        raise ValidationError("zero-probability outcome")
    chi = c / np.sqrt(prob)
    n, d = split_outcome(p_meas, g.delta_p)
    # exp(-i (n dp / mu) P), applied in the momentum eigenbasis
    mom = centered_dft_apply(chi, inverse=True)
    mom *= np.exp(-1j * n * g.delta_p * g.p_points() / g.mu)
    chi = centered_dft_apply(mom)
    chi = centered_dft_apply(chi, 0.0, d)
    out = DiscreteQumode(g, chi / np.linalg.norm(chi))
    if target is None:
        target = encode_target(cv)
    fid, dist = _phase_free_distance(target.amps, out.amps)
    if l_eps is None:
        l_eps = cv_support_radius(cv, eps)
    inside = abs(p_meas) < window_half_width(g, l_eps)
    return TransferOutcome(float(p_meas), prob, out, fid, bool(inside), dist)


def predicted_cvdv_success(grid, l_eps: float) -> float:
    return (grid.L - l_eps) / grid.L + 1.0 / grid.n_x


def _succeeds(outcome: TransferOutcome, eps: float, criterion: str) -> bool:
    if criterion == "distance":
        return outcome.distance <= eps
    if criterion == "fidelity":
        return outcome.fidelity > 1 - eps
    raise ValidationError(f"unknown criterion {criterion!r}")


def cvdv_success_probability(cv: SampledCVState, eps: float, n_points: int = 256,
                             criterion: str = "distance",
                             l_eps: float | None = None) -> SuccessReport:
    """Probability that the outcome yields an ``eps``-accurate transfer.

    Success is decided per outcome by ``criterion``: ``distance`` requires
    the phase-optimal state distance ``||chi - phi|| <= eps`` (the same norm
    used for the support radius); ``fidelity`` requires ``F > 1 - eps``.
    The success set is located on ``n_points`` outcomes, its edges are
    refined by bisection and the density is integrated adaptively over it.
    """
    if n_points < 200:
        raise ValidationError("n_points must be at least 200")
    g = cv.grid
    target = encode_target(cv)
    if l_eps is None:
        l_eps = cv_support_radius(cv, eps)
    span_p = min(cv.span * g.L, g.L + l_eps + 1.0) * np.sqrt(g.mu)
    ps = np.linspace(-span_p, span_p, n_points)

    def ok(p):
        return _succeeds(cvdv_transfer(cv, p, l_eps=l_eps, target=target), eps, criterion)

    flags = np.array([ok(p) for p in ps])
    edges = []
    for k in np.nonzero(flags[1:] != flags[:-1])[0]:
        lo, hi = ps[k], ps[k + 1]
        f_lo = flags[k]
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if ok(mid) == f_lo:
                lo = mid
            else:
                hi = mid
        edges.append(0.5 * (lo + hi))
    bounds = np.concatenate([[ps[0]], edges, [ps[-1]]])
    state = bool(flags[0])
    total = 0.0
    for a, b in zip(bounds[:-1], bounds[1:]):
        if state:
            val, _ = integrate.quad(lambda p: measurement_pdf(cv, p)[0], a, b,
                                    epsabs=1e-9, limit=200)
            total += val
        state = not state
    return SuccessReport(float(eps), float(total),
                         float(predicted_cvdv_success(g, l_eps)), int(n_points), criterion)


def sample_outcomes(cv: SampledCVState, size: int, seed: int = 42) -> np.ndarray:
    """Draw momentum outcomes by inverse-CDF sampling of the measurement density."""
    ps, dens = pdf_on_fine_axis(cv)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(ps))])
    cdf /= cdf[-1]
    u = np.random.default_rng(seed).random(size)
    return np.interp(u, cdf, ps)


def sample_cvdv(cv: SampledCVState, seed: int = 42, eps: float = 1e-4) -> TransferOutcome:
    """Sample one outcome and run the protocol for it."""
    p = float(sample_outcomes(cv, 1, seed)[0])
    return cvdv_transfer(cv, p, eps=eps)


def aperiodic_momentum_extension(dv: DiscreteQumode, p) -> np.ndarray:
    """``N^-1/2 dp^-1/2 sum_j amps_j exp(-i x_j p)``; anti-periodic with period ``2 L sqrt(mu)``."""
    g = dv.grid
    p = np.atleast_1d(np.asarray(p, dtype=float))
    return np.exp(-1j * np.outer(p, g.x_points())) @ dv.amps / np.sqrt(g.n_x * g.delta_p)


__all__ = [
    "JointState", "SuccessReport", "TransferOutcome", "aperiodic_momentum_extension",
    "apply_entangler", "cvdv_success_probability", "cvdv_transfer", "encode_target",
    "measure_cv_momentum", "measurement_pdf", "pdf_on_fine_axis",
    "predicted_cvdv_success", "prepare_joint_cvdv", "sample_cvdv", "sample_outcomes",
    "split_outcome", "window_half_width",
]
