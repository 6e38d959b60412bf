import numpy as np
import pytest

from mcg.services.analysis import (
    REFERENCE_REGIMES,
    AttractorClass,
    AttractorKind,
    FixedPointType,
    LyapunovSettings,
    LyapunovSpectrum,
    PeriodResult,
    _cluster_labels,
    _variational_rhs,
    classify_attractor,
    detect_double_spiral,
    detect_period,
    kaplan_yorke,
    lobe_share,
    lyapunov_spectrum,
    origin_eigenvalues,
    reference_regime,
    resolve_period,
    sign_pattern,
)
from mcg.services.integrator import IntegrationSettings, Trajectory, integrate, loop_maxima
from mcg.services.model import ModelParams, jacobian, make_field, mirror, study_params, vector_field

START = (0.1, 0.1, 0.1)


def _spectrum(*exponents):
    return LyapunovSpectrum(exponents=tuple(exponents), averaging_time=1.0, renorm_interval=1.0,
                            tail_variation=0.0, trace_average=float(sum(exponents)))


def _random_params(rng):
    mu = rng.uniform(0.5, 5.0)
    theta = rng.uniform(0.5, 5.0)
    bound = 2.0 * np.sqrt(mu * theta)
    return ModelParams(
        alpha=rng.uniform(0.05, 5.0),
        eta=rng.uniform(0.5, 20.0),
        a=rng.uniform(-8.0, 2.0),
        b=rng.uniform(0.1, 5.0),
        mu=mu,
        gamma=rng.uniform(-0.9, 0.9) * bound,
        theta=theta,
        epsilon=rng.uniform(0.1, 2.0),
    )


# ---------------------------------------------------------------- 特征值

def test_alpha_star_study_params():
    rep = origin_eigenvalues(study_params(0.5))
    assert rep.alpha_star == pytest.approx(5.4222, abs=1e-4)


def test_eigenvalues_at_half():
    rep = origin_eigenvalues(study_params(0.5))
    assert rep.lambda1 == -0.6
    assert rep.lambda2.real == pytest.approx(3.0 / 24.4)
    assert abs(rep.lambda2.imag) == pytest.approx(0.3858, abs=1e-4)
    assert rep.lambda3 == rep.lambda2.conjugate()
    assert rep.unstable_pair
    assert rep.is_complex_pair


def test_eigenvalues_match_numeric_decomposition():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        p = _random_params(rng)
        rep = origin_eigenvalues(p)
        numeric = np.linalg.eigvals(jacobian((0.0, 0.0, 0.0), p))
        assert rep.lambda1 == -p.epsilon
        for root in (rep.lambda1, rep.lambda2, rep.lambda3):
            assert np.min(np.abs(numeric - root)) < 1e-10
        # Vieta
        assert abs(rep.lambda2 * rep.lambda3 - 1.0 / (p.alpha * p.eta)) < 1e-10
        assert abs(rep.lambda2 + rep.lambda3 + (p.a + p.theta) / p.eta) < 1e-10


def test_fixed_point_classification():
    assert origin_eigenvalues(study_params(1.0)).classification == FixedPointType.SADDLE_FOCUS
    assert origin_eigenvalues(study_params(6.0)).classification == FixedPointType.SADDLE_NODE
    boundary = origin_eigenvalues(study_params(0.5)).alpha_star
    rep = origin_eigenvalues(study_params(boundary))
    assert rep.discriminant == 0.0
    assert rep.classification == FixedPointType.SADDLE_NODE


def test_unstable_pair_inside_window():
    rng = np.random.default_rng(5)
    p = study_params()
    alpha_star = origin_eigenvalues(p).alpha_star
    for alpha in rng.uniform(0.01, alpha_star, size=20):
        rep = origin_eigenvalues(p.with_alpha(alpha))
        assert rep.lambda2.real > 0 and rep.lambda3.real > 0


def test_alpha_star_undefined_when_a_plus_theta_vanishes():
    p = ModelParams(alpha=1.0, eta=12.2, a=-3.0, b=3.0, mu=3.0, gamma=-2.0, theta=3.0, epsilon=0.6)
    rep = origin_eigenvalues(p)
    assert rep.alpha_star is None
    assert rep.classification == FixedPointType.SADDLE_FOCUS
    assert rep.lambda2.real == 0.0


# ---------------------------------------------------------------- Lyapunov 指数

def test_variational_rhs_matches_jacobian():
    p = study_params(0.7)
    consts = (1.0 / p.alpha, 1.0 / p.eta, p.a, p.b, p.mu, p.gamma, p.theta, p.epsilon)
    rng = np.random.default_rng(11)
    for _ in range(20):
        s = rng.uniform(-2, 2, size=3)
        v = rng.normal(size=(3, 3))
        du, trace = _variational_rhs(tuple(s) + tuple(v.ravel()), consts)
        assert np.allclose(du[:3], vector_field(s, p), rtol=1e-12, atol=1e-12)
        assert np.allclose(np.reshape(du[3:], (3, 3)), jacobian(s, p) @ v, rtol=1e-12, atol=1e-12)
        assert trace == pytest.approx(np.trace(jacobian(s, p)), rel=1e-12, abs=1e-12)


def test_lyapunov_rejects_origin():
    with pytest.raises(ValueError):
        lyapunov_spectrum(study_params(0.5), (0.0, 0.0, 0.0), LyapunovSettings(t_average=1.0, t_transient=0.0))


def test_lyapunov_settings_validation():
    with pytest.raises(ValueError):
        LyapunovSettings(renorm_interval=0.001)
    with pytest.raises(ValueError):
        LyapunovSettings(t_average=0.0)
    cfg = LyapunovSettings.from_config({"lce_time": 100.0, "lce_transient": 10.0, "lce_renorm": 0.5})
    assert (cfg.t_average, cfg.t_transient, cfg.renorm_interval) == (100.0, 10.0, 0.5)


def test_short_spectrum_sum_matches_trace():
    ls = lyapunov_spectrum(study_params(0.5), START, LyapunovSettings(t_average=200.0, t_transient=50.0))
    assert list(ls.exponents) == sorted(ls.exponents, reverse=True)
    assert ls.total == pytest.approx(ls.trace_average, rel=1e-3)


@pytest.mark.slow
def test_spectrum_spiral_chaos(spectra):
    l1, l2, l3 = spectra(0.5).exponents
    assert 0.05 <= l1 <= 0.11
    assert abs(l2) < 0.02
    assert -0.5 <= l3 <= -0.3


@pytest.mark.slow
def test_spectrum_double_spiral(spectra):
    l1, l2, l3 = spectra(1.2).exponents
    assert 0.045 <= l1 <= 0.10
    assert abs(l2) < 0.02
    assert -0.48 <= l3 <= -0.28


@pytest.mark.slow
def test_spectrum_torus(spectra):
    l1, l2, l3 = spectra(0.05).exponents
    assert abs(l1) < 0.02 and abs(l2) < 0.02
    assert -0.2 <= l3 <= -0.07


@pytest.mark.slow
@pytest.mark.parametrize("alpha", [0.05, 0.26, 0.5, 1.2])
def test_spectrum_sum_matches_trace_average(spectra, alpha):
    ls = spectra(alpha)
    assert ls.total == pytest.approx(ls.trace_average, rel=0.02)


@pytest.mark.slow
@pytest.mark.parametrize("alpha", [0.05, 0.26, 0.5, 1.2])
def test_flow_has_zero_exponent(spectra, alpha):
    assert min(abs(v) for v in spectra(alpha).exponents) < 0.02


@pytest.mark.slow
def test_spectrum_invariant_under_mirror(spectra):
    forward = spectra(0.5)
    mirrored = spectra(0.5, mirror(START))
    diff = np.max(np.abs(np.subtract(forward.exponents, mirrored.exponents)))
    assert diff <= max(forward.tail_variation, 1e-9)


@pytest.mark.slow
def test_kaplan_yorke_measured(spectra):
    assert 2.10 <= kaplan_yorke(spectra(0.5), 0.02) <= 2.30
    assert 2.10 <= kaplan_yorke(spectra(1.2), 0.02) <= 2.30
    assert kaplan_yorke(spectra(0.05), 0.02) == 2.0
    assert kaplan_yorke(spectra(0.26), 0.02) == 1.0


@pytest.mark.slow
def test_regime_taxonomy(spectra):
    assert classify_attractor(spectra(0.05)).kind == AttractorKind.TORUS2
    assert classify_attractor(spectra(0.26)).is_periodic
    assert classify_attractor(spectra(0.5)).kind == AttractorKind.CHAOS
    assert classify_attractor(spectra(1.2)).kind == AttractorKind.CHAOS


# ---------------------------------------------------------------- 维数与分类

def test_kaplan_yorke_examples():
    assert kaplan_yorke(_spectrum(0.08, 0.0, -0.4)) == pytest.approx(2.2)
    assert kaplan_yorke(_spectrum(0.0, -0.08, -0.08)) == 1.0
    assert kaplan_yorke(_spectrum(-0.1, -0.2, -0.3)) == 0.0


def test_kaplan_yorke_snaps_measured_zeros():
    assert kaplan_yorke(_spectrum(0.004, -0.09, -0.1), zero_tol=0.02) == 1.0
    assert kaplan_yorke(_spectrum(0.003, -0.002, -0.13), zero_tol=0.02) == 2.0
    assert kaplan_yorke(_spectrum(0.003, -0.002, -0.13)) != 2.0


def test_spectrum_must_be_sorted():
    with pytest.raises(ValueError):
        _spectrum(-0.4, 0.0, 0.08)


def test_classify_examples():
    assert classify_attractor(_spectrum(0.08, 0.0, -0.4), 0.02).kind == AttractorKind.CHAOS
    assert classify_attractor(_spectrum(0.001, -0.0005, -0.13), 0.02).kind == AttractorKind.TORUS2
    periodic = classify_attractor(_spectrum(0.0, -0.08, -0.08), 0.02)
    assert periodic.kind == AttractorKind.PERIODIC
    assert periodic.is_periodic


def test_classify_unlisted_pattern_is_reported():
    cls = classify_attractor(_spectrum(0.3, 0.1, -0.5), 0.02)
    assert cls.kind == AttractorKind.UNCLASSIFIED
    assert cls.label == "Unclassified(++-)"
    assert "," not in cls.label


def test_classify_requires_positive_tolerance():
    with pytest.raises(ValueError):
        classify_attractor(_spectrum(0.08, 0.0, -0.4), 0.0)


def test_classify_resolves_period():
    spectrum = _spectrum(0.0, -0.08, -0.08)
    assert classify_attractor(spectrum, 0.02, PeriodResult(1, 1, "periodic")).kind == AttractorKind.LIMIT_CYCLE1
    resolved = classify_attractor(spectrum, 0.02, PeriodResult(3, 3, "periodic"))
    assert resolved.kind == AttractorKind.PERIODIC_N and resolved.period == 3
    unresolved = classify_attractor(spectrum, 0.02, PeriodResult(None, 4, "ambiguous"))
    assert unresolved.kind == AttractorKind.PERIODIC


def test_resolve_period_leaves_chaos_alone():
    chaos = AttractorClass(AttractorKind.CHAOS, signs="+0-")
    assert resolve_period(chaos, PeriodResult(2, 2, "periodic")) == chaos


def test_sign_pattern():
    assert sign_pattern((0.08, 0.001, -0.4), 0.02) == "+0-"


# ---------------------------------------------------------------- 周期

def test_detect_period_constant():
    assert detect_period([1.7] * 12).period == 1


def test_detect_period_cycle():
    result = detect_period([1.0, 2.0, 3.5] * 6)
    assert result == PeriodResult(3, 3, "periodic")


def test_detect_period_noisy_cycle():
    rng = np.random.default_rng(9)
    values = np.tile([1.0, 2.0, 3.0, 2.5, 1.5], 6) + rng.normal(scale=1e-6, size=30)
    assert detect_period(values).period == 5


def test_detect_period_filled_band():
    rng = np.random.default_rng(4)
    result = detect_period(rng.uniform(1.0, 2.0, size=400))
    assert result.period is None
    assert result.status in ("aperiodic", "ambiguous")


def test_detect_period_visit_order_must_repeat():
    result = detect_period([1.0, 2.0, 1.0, 1.0, 2.0, 2.0, 1.0, 2.0, 2.0, 1.0])
    assert result.period is None
    assert result.status == "aperiodic"


def test_detect_period_needs_eight_maxima():
    with pytest.raises(ValueError):
        detect_period([1.0, 2.0] * 3)


def test_cluster_labels_single_linkage():
    labels, widths = _cluster_labels(np.array([2.0, 1.0, 2.005, 1.01, 1.02]), 0.05)
    assert labels.tolist() == [1, 0, 1, 0, 0]
    assert widths == pytest.approx([0.02, 0.005])
    chained, _ = _cluster_labels(np.array([0.0, 0.04, 0.08, 0.12]), 0.05)
    assert chained.tolist() == [0, 0, 0, 0]


@pytest.mark.parametrize("tol", [0.01, 0.02, 0.03])
def test_detect_period_keeps_narrow_doubling(tol):
    # 刚倍周期分岔出的两支只差 0.05%
    result = detect_period([2.0, 2.001] * 8, tol)
    assert result == PeriodResult(2, 2, "periodic")


def test_detect_period_merges_rounding_split():
    assert detect_period([2.0, 2.0 + 1e-9] * 8).period == 1


def _tail_maxima(alpha):
    cfg = IntegrationSettings(t_end=6000.0, t_skip=3000.0)
    traj = integrate(make_field(study_params(alpha)), START, cfg)
    return [v for _, v in loop_maxima(traj)]


@pytest.mark.slow
@pytest.mark.parametrize("alpha, period", [(7.5, 3), (11.0, 5)])
def test_detect_period_saddle_node_regime(alpha, period):
    maxima = _tail_maxima(alpha)
    assert detect_period(maxima, 0.02).period == period
    assert detect_period(maxima, 0.01).period == period
    assert detect_period(maxima, 0.03).period == period


# ---------------------------------------------------------------- 双螺旋

def _cloud(points):
    points = np.asarray(points, dtype=float)
    return Trajectory(np.arange(len(points), dtype=float), points)


def test_double_spiral_synthetic_cloud():
    cloud = _cloud([(1, 1, 0), (-1, -1, 0), (2, 0, 1), (-2, 0, 1)])
    assert detect_double_spiral(cloud, 0.05, min_samples=4)


def test_single_lobe_is_not_double_spiral():
    cloud = _cloud([(1, 1, 0), (1.5, 1, 0), (2, 0, 1), (2.5, 0, 1)])
    assert not detect_double_spiral(cloud, 0.05, min_samples=4)


def test_double_spiral_needs_samples():
    with pytest.raises(ValueError):
        detect_double_spiral(_cloud([(1, 1, 0), (-1, -1, 0)]))


def _spiral_series(orientations, per_loop=400):
    """每圈 y>0 与 y<0 两个半摆各一个 z 峰，orientations[k] 为真时第 k 圈的高峰在 y>0 一侧"""
    loops = len(orientations)
    t = np.linspace(0.0, 2.0 * np.pi * loops, loops * per_loop + 1)
    index = np.minimum((t // (2.0 * np.pi)).astype(int), loops - 1)
    x, y = -np.cos(t), np.sin(t)
    tall = np.asarray(orientations)[index] == (y > 0)
    z = 2.0 + np.where(tall, 1.0, 0.3) * np.sin(t) ** 2
    return Trajectory(t, np.column_stack([x, y, z]))


def test_one_sided_loops_are_single_spiral():
    series = _spiral_series([True] * 30)
    assert lobe_share(series) == 0.0
    assert not detect_double_spiral(series, 0.05, min_samples=1000)


def test_switching_loops_are_double_spiral():
    series = _spiral_series([(k // 5) % 2 == 0 for k in range(30)])
    assert 0.4 <= lobe_share(series) <= 0.5
    assert detect_double_spiral(series, 0.05, min_samples=1000)


def test_balanced_loops_have_no_orientation():
    loops = 30
    t = np.linspace(0.0, 2.0 * np.pi * loops, loops * 400 + 1)
    series = Trajectory(t, np.column_stack([-np.cos(t), np.sin(t), 2.0 + np.sin(t) ** 2]))
    assert lobe_share(series) is None
    assert detect_double_spiral(series, 0.05, min_samples=1000)


def test_lobe_share_needs_loops():
    assert lobe_share(_spiral_series([True] * 5)) is None


@pytest.mark.slow
def test_double_spiral_geometry(trajectories):
    assert detect_double_spiral(trajectories(1.2), 0.05)
    assert not detect_double_spiral(trajectories(0.5), 0.05)


# ---------------------------------------------------------------- 参考区间

def test_reference_regimes_cover_table():
    assert len(REFERENCE_REGIMES) == 11
    for regime in REFERENCE_REGIMES:
        assert regime.alpha_low <= regime.representative_alpha <= regime.alpha_high
    assert reference_regime(0.05).kind == AttractorKind.TORUS2
    assert reference_regime(0.5).dimension == pytest.approx(2.21)
    assert reference_regime(1.2).double_spiral
    assert reference_regime(0.105) is None
