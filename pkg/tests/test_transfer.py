import numpy as np
import pytest
from scipy import integrate, stats

from qumode_bridge.discrete import encode_fock, encode_qumode
from qumode_bridge.errors import ValidationError
from qumode_bridge.grids import fock_momentum_wavefunction, fock_superposition, make_grid
from qumode_bridge.grids import sinc_kernel, support_radius
from qumode_bridge.transfer import (SampledCVState, cvdv_success_probability, cvdv_transfer,
                                    dvcv_success_probability, dvcv_table, dvcv_transfer,
                                    dvcv_transfer_analytic, encode_target, fock_cv_state,
                                    fock_number_state, make_initial_cv, predicted_cvdv_success,
                                    sample_cvdv)
from qumode_bridge.transfer.cvdv import (aperiodic_momentum_extension, apply_entangler,
                                         measure_cv_momentum, measurement_pdf, pdf_on_fine_axis,
                                         prepare_joint_cvdv, sample_outcomes, split_outcome,
                                         window_half_width)
from qumode_bridge.transfer.cvstate import (comb_momentum, cv_fourier, cv_support_radius,
                                            fine_momentum_axis, momentum_on_fine_axis)
from qumode_bridge.transfer.dvcv import g_hat

EPS = 1e-4


def window(g, n, eps=EPS):
    return window_half_width(g, support_radius(n, eps).L_eps)


# ---------------------------------------------------------------- CV samples


def test_fine_grid_layout():
    g = make_grid(4)
    cv = fock_number_state(0, g)
    xs = cv.xs
    assert xs.size == 2 * 16 * g.n_x
    assert xs[0] == pytest.approx(-xs[-1])
    assert xs[-1] + cv.fine_dx / 2 == pytest.approx(2 * g.L / np.sqrt(g.mu))
    assert cv.norm() == pytest.approx(1.0, abs=1e-12)
    for bad in (dict(oversample=7), dict(oversample=6), dict(span=1)):
        with pytest.raises(ValidationError):
            SampledCVState(g, np.zeros(8), **{"oversample": 16, "span": 2, **bad})
    with pytest.raises(ValidationError):
        SampledCVState(g, np.zeros(8))


def test_initial_states():
    g = make_grid(8)
    rect = make_initial_cv("rectangular", g)
    assert rect.norm() == pytest.approx(1.0, abs=1e-8)
    sigma = 0.5 * g.L / np.sqrt(g.mu)
    gau = make_initial_cv("gaussian", g, sigma=sigma)
    assert gau.norm() == pytest.approx(1.0, abs=1e-8)
    assert gau.xs[-1] >= 8 * sigma
    with pytest.raises(ValidationError):
        make_initial_cv("gaussian", g)
    with pytest.raises(ValidationError):
        make_initial_cv("triangle", g)


def _quad_ft(f, k, a):
    """``(2 pi)^-1/2 int_{-a}^{a} f(y) exp(-i k y) dy`` for an even real ``f``."""
    val, _ = integrate.quad(lambda y: f(y) * np.cos(k * y), -a, a, limit=400,
                            epsabs=1e-13, epsrel=1e-12)
    return val / np.sqrt(2 * np.pi)


def test_rectangular_transform_is_sinc():
    g = make_grid(4, 1.5)
    a = g.L / np.sqrt(g.mu)
    h = g.mu**0.25 / np.sqrt(2 * g.L)
    for x in (0.0, 0.13, -0.7, 1.9, 3.3):
        k = g.mu * x
        assert g_hat("rectangular", k, g) == pytest.approx(
            sinc_kernel(g, x) / np.sqrt(g.delta_p), abs=1e-12)
        assert abs(_quad_ft(lambda y: h, k, a) - g_hat("rectangular", k, g)) < 1e-6


def test_gaussian_transform():
    g = make_grid(4)
    sigma = 1.3
    f = lambda y: np.pi**-0.25 / np.sqrt(sigma) * np.exp(-y**2 / (2 * sigma**2))
    for k in (0.0, 0.4, -1.7):
        assert abs(_quad_ft(f, k, 30 * sigma) - g_hat("gaussian", k, g, sigma)) < 1e-10
    with pytest.raises(ValidationError):
        g_hat("box", 0.0, g)


def test_momentum_helpers_match_direct_transform():
    g = make_grid(5)
    cv = fock_number_state(3, g)
    ps = fine_momentum_axis(cv)
    sel = np.arange(0, ps.size, 97)
    assert np.allclose(momentum_on_fine_axis(cv)[sel], cv_fourier(cv, ps[sel]), atol=1e-12)
    assert np.allclose(cv_fourier(cv, ps[sel]), fock_momentum_wavefunction(3, 1.0, ps[sel]),
                       atol=1e-9)
    p = 0.37
    assert np.allclose(comb_momentum(cv, p), cv_fourier(cv, p + g.mu * g.x_points()), atol=1e-12)


def test_cv_support_radius():
    g = make_grid(7)
    cv = fock_number_state(5, g)
    # both are bisection roots of the same tail, to 1e-3
    assert cv_support_radius(cv, EPS) == pytest.approx(support_radius(5, EPS).L_eps, abs=1.1e-3)
    raw = SampledCVState(g, cv.amps)
    assert cv_support_radius(raw, EPS) == pytest.approx(support_radius(5, EPS).L_eps, abs=0.05)


# ---------------------------------------------------------------- CV to DV


def test_joint_state_preparation_and_entangler():
    g = make_grid(4)
    cv = fock_number_state(0, g)
    joint = prepare_joint_cvdv(cv)
    w = np.abs(joint.amps) ** 2 * cv.fine_dx
    assert w.sum() == pytest.approx(1.0, abs=1e-8)
    assert np.allclose(w.sum(axis=1), np.abs(cv.amps) ** 2 * cv.fine_dx)
    assert np.allclose(w.sum(axis=0), 1 / g.n_x)
    assert np.array_equal(apply_entangler(joint, sign=0).amps, joint.amps)
    ent = apply_entangler(joint)
    assert (np.abs(ent.amps) ** 2).sum() * cv.fine_dx == pytest.approx(1.0, abs=1e-12)
    # column j carries the plane wave exp(-i mu x_j y); locate it with an FFT
    rect = make_initial_cv("rectangular", g)
    ent = apply_entangler(prepare_joint_cvdv(rect))
    k = 2 * np.pi * np.fft.fftfreq(rect.fine_n, rect.fine_dx)
    for j in range(g.n_x):
        peak = k[np.argmax(np.abs(np.fft.fft(ent.amps[:, j])))]
        assert peak == pytest.approx(-g.mu * g.x_points()[j], abs=1e-9)


def test_split_outcome():
    dp = 0.7
    for p in (0.0, 0.35, -0.35, 1.0, -2.3):
        n, d = split_outcome(p, dp)
        assert (n + d) * dp == pytest.approx(p)
        assert -0.5 < d <= 0.5 + 1e-12


def test_joint_and_fast_paths_agree():
    g = make_grid(4)
    cv = fock_cv_state(np.array([1, 1j]) / np.sqrt(2), g)
    for p in (0.0, 0.41, -1.9, 3.0):
        a = cvdv_transfer(cv, p, method="fast", eps=1e-2)
        b = cvdv_transfer(cv, p, method="joint", eps=1e-2)
        assert a.probability == pytest.approx(b.probability, rel=1e-10)
        assert np.allclose(a.state.amps, b.state.amps, atol=1e-10)
        # measurement reduces the norm by the outcome density
        assert a.probability == pytest.approx(measurement_pdf(cv, p)[0], rel=1e-10)
        raw = measure_cv_momentum(apply_entangler(prepare_joint_cvdv(cv)), p)
        assert np.sum(np.abs(raw) ** 2) == pytest.approx(a.probability, rel=1e-10)
    with pytest.raises(ValidationError):
        cvdv_transfer(cv, 0.0, method="teleport")
    with pytest.raises(ValidationError):
        cvdv_transfer(cv, 10 * g.L)


def test_encode_target_matches_direct_encoding():
    g = make_grid(6)
    for n in (0, 4):
        t = encode_target(fock_number_state(n, g))
        assert t.fidelity(encode_fock(n, g)) > 1 - 1e-10


def test_vacuum_fidelity_and_plateau():
    g = make_grid(7)
    cv = fock_number_state(0, g)
    W = window(g, 0)
    plateau = 1 / (g.n_x * g.delta_p)
    for p in np.linspace(-0.99 * W, 0.99 * W, 9):
        o = cvdv_transfer(cv, p)
        assert o.in_window
        assert o.fidelity >= 1 - 1e-3
        assert abs(o.probability - plateau) <= 10 * EPS * plateau
    assert cvdv_transfer(cv, 0.0).fidelity >= 1 - 1e-3


def test_fidelity_falls_outside_window():
    g = make_grid(7)
    o = cvdv_transfer(fock_number_state(31, g), 1.5 * g.L * np.sqrt(g.mu),
                      l_eps=support_radius(31, EPS).L_eps)
    assert not o.in_window
    assert o.fidelity < 0.9


def test_superposition_is_transferred_linearly():
    g = make_grid(7)
    c = np.array([1, 1]) / np.sqrt(2)
    o = cvdv_transfer(fock_cv_state(c, g), 0.0)
    direct = encode_qumode(lambda x: fock_superposition(c, 1.0, x), g)
    ov = np.vdot(direct.amps, o.state.amps)
    assert np.linalg.norm(o.state.amps * np.conj(ov) / abs(ov) - direct.amps) <= 10 * EPS


def test_window_sweep_small_grid():
    g = make_grid(6)
    for n in (0, 10):
        cv = fock_number_state(n, g)
        l_eps = support_radius(n, EPS).L_eps
        W = window_half_width(g, l_eps)
        for p in np.linspace(-W, W, 22)[1:-1]:
            assert cvdv_transfer(cv, p, l_eps=l_eps).fidelity > 1 - 10 * EPS


def test_pdf_normalization_and_fine_axis():
    g = make_grid(6)
    cv = fock_number_state(0, g)
    ps, dens = pdf_on_fine_axis(cv)
    assert np.sum(dens) * (ps[1] - ps[0]) == pytest.approx(1.0, abs=1e-6)
    sel = np.arange(500, ps.size - 500, 211)
    assert np.allclose(dens[sel], measurement_pdf(cv, ps[sel]), atol=1e-10)


def _plateau_width(n, g):
    ps, dens = pdf_on_fine_axis(fock_number_state(n, g))
    flat = np.abs(dens * g.n_x * g.delta_p - 1) < 1e-3
    return np.ptp(ps[flat])


def test_plateau_narrows_with_n():
    g = make_grid(7)
    assert _plateau_width(62, g) < _plateau_width(0, g)


def test_sampling_reproducible_and_consistent():
    g = make_grid(6)
    cv = fock_number_state(0, g)
    a = sample_outcomes(cv, 10_000, seed=7)
    assert np.array_equal(a, sample_outcomes(cv, 10_000, seed=7))
    assert not np.array_equal(a, sample_outcomes(cv, 10_000, seed=8))
    o1, o2 = sample_cvdv(cv, seed=3), sample_cvdv(cv, seed=3)
    assert o1.measured == o2.measured and o1.fidelity == o2.fidelity
    # in-window frequency against the closed form, within three binomial sigma
    l_eps = support_radius(0, EPS).L_eps
    P = predicted_cvdv_success(g, l_eps)
    freq = np.mean(np.abs(a) < window_half_width(g, l_eps))
    assert abs(freq - P) <= 3 * np.sqrt(P * (1 - P) / a.size)
    # histogram against the density
    edges = np.linspace(-1.2 * g.L, 1.2 * g.L, 41)
    counts, _ = np.histogram(a, edges)
    mids = 0.5 * (edges[1:] + edges[:-1])
    fine = np.linspace(edges[0], edges[-1], 40 * 64 + 1)
    pdf = measurement_pdf(cv, fine)
    mass = np.array([integrate.trapezoid(pdf[i * 64:(i + 1) * 64 + 1], fine[i * 64:(i + 1) * 64 + 1])
                     for i in range(40)])
    expect = mass / mass.sum() * counts.sum()
    keep = expect >= 5
    assert keep.sum() > 20 and mids.size == 40
    stat = np.sum((counts[keep] - expect[keep]) ** 2 / expect[keep])
    assert stats.chi2.sf(stat, keep.sum() - 1) > 0.01


def test_cvdv_success_probability():
    g = make_grid(6)
    cv = fock_number_state(0, g)
    reps = [cvdv_success_probability(cv, e) for e in (1e-2, 1e-3, 1e-4)]
    ps = [r.p_success for r in reps]
    assert ps[0] >= ps[1] >= ps[2] > 0
    assert abs(ps[2] - reps[2].predicted) < 0.02
    with pytest.raises(ValidationError):
        cvdv_success_probability(cv, 1e-4, n_points=10)


# ---------------------------------------------------------------- DV to CV


def test_dvcv_joint_and_fast_paths_agree():
    g = make_grid(4)
    dv = encode_fock(1, g)
    g0 = make_initial_cv("gaussian", g, sigma=0.5 * g.L)
    for m in (0, 5, 8, 15):
        a = dvcv_transfer(dv, g0, m)
        b = dvcv_transfer(dv, g0, m, method="joint")
        assert a.probability == pytest.approx(b.probability, rel=1e-10)
        assert np.allclose(a.state.amps, b.state.amps, atol=1e-10)
    with pytest.raises(ValidationError):
        dvcv_transfer(dv, g0, g.n_x)
    with pytest.raises(ValidationError):
        dvcv_transfer(dv, make_initial_cv("rectangular", make_grid(5)), 0)
    with pytest.raises(ValidationError):
        dvcv_transfer(dv, g0, 0, method="bogus")


def test_rectangular_outcomes_are_uniform():
    g = make_grid(8)
    dv = encode_fock(0, g)
    t = dvcv_table(dv, make_initial_cv("rectangular", g), support_radius(0, EPS).L_eps)
    assert np.max(np.abs(t.prob - 1 / g.n_x)) <= 1e-6
    assert t.prob.sum() == pytest.approx(1.0, abs=1e-8)
    assert np.all(t.fidelity[t.in_window] >= 1 - 1e-3)


def test_gaussian_outcomes_are_bell_shaped():
    g = make_grid(6)
    g0 = make_initial_cv("gaussian", g, sigma=0.5 * g.L)
    widths = []
    for n in (0, 6):
        t = dvcv_table(encode_fock(n, g), g0, support_radius(n, EPS).L_eps)
        assert t.prob.sum() == pytest.approx(1.0, abs=1e-8)
        top = np.argmax(t.prob)
        assert np.all(np.diff(t.prob[:top + 1]) >= -1e-12)
        assert np.all(np.diff(t.prob[top:]) <= 1e-12)
        widths.append(np.sqrt(np.sum(t.prob * t.p_m**2)))
    assert widths[1] > widths[0]


def test_analytic_output_at_grid_points():
    g = make_grid(5)
    dv = encode_fock(2, g)
    for m in (0, 11, 31):
        xi, prob = dvcv_transfer_analytic(dv, "rectangular", m, g.x_points(), images=0)
        assert prob == pytest.approx(g.delta_x * np.sum(np.abs(dv.samples) ** 2) / g.n_x)
        expect = dv.samples / np.sqrt(g.delta_x * np.sum(np.abs(dv.samples) ** 2))
        assert np.allclose(xi, expect, atol=1e-12)
    with pytest.raises(ValidationError):
        dvcv_transfer_analytic(dv, "box", 0, [0.0])


@pytest.mark.parametrize("kind, oversample", [("gaussian", 16), ("rectangular", 128)])
def test_analytic_matches_simulation(kind, oversample):
    g = make_grid(5)
    dv = encode_fock(0, g)
    sigma = 0.5 * g.L if kind == "gaussian" else None
    g0 = make_initial_cv(kind, g, sigma=sigma, oversample=oversample)
    for m in (0, 9, 16, 27):
        o = dvcv_transfer(dv, g0, m)
        xi, prob = dvcv_transfer_analytic(dv, kind, m, g0.xs, sigma=sigma)
        assert prob == pytest.approx(o.probability, abs=1e-5)
        assert np.max(np.abs(xi - o.state.amps)) < 1e-5


def test_dvcv_success_probability():
    g = make_grid(6)
    dv = encode_fock(0, g)
    g0 = make_initial_cv("rectangular", g)
    l_eps = support_radius(0, 1e-4).L_eps
    t = dvcv_table(dv, g0, l_eps)
    ps = [dvcv_success_probability(dv, g0, e, l_eps, table=t).p_success
          for e in (1e-2, 1e-3, 1e-4)]
    assert ps[0] >= ps[1] >= ps[2]
    rep = dvcv_success_probability(dv, g0, 1e-4, l_eps, table=t)
    assert abs(rep.p_success - rep.predicted) < 0.02
    assert dvcv_success_probability(dv, g0, 1.0, l_eps, "fidelity", t).p_success == \
        pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ValidationError):
        dvcv_success_probability(dv, g0, 1e-4, l_eps, "vibes", t)


# ---------------------------------------------------------------- aperiodic extension


def test_aperiodic_extension():
    g = make_grid(6)
    dv = encode_fock(0, g)
    period = 2 * g.L * np.sqrt(g.mu)
    p = np.random.default_rng(0).uniform(-3 * g.L, 3 * g.L, 50)
    a, b = aperiodic_momentum_extension(dv, p), aperiodic_momentum_extension(dv, p + period)
    assert np.max(np.abs(a + b)) < 1e-12
    q = np.linspace(-g.L, g.L, 101)
    ext = aperiodic_momentum_extension(dv, q)
    assert np.max(np.abs(ext - fock_momentum_wavefunction(0, 1.0, q))) <= 10 * EPS
    assert np.max(np.abs(ext.imag)) < 1e-12
    assert np.allclose(ext, ext[::-1], atol=1e-12)
