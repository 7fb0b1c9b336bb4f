import math
import warnings

import numpy as np
import pytest

from probit_trends.gaussian_shift import (
    LinearClassifier,
    MeanShift,
    exact_probit_margin,
    make_rng,
    probit_deviation,
    random_task,
    sample_unit_sphere,
)
from probit_trends.numerics import probit
from probit_trends.scenarios import (
    LearnerGrid,
    ScenarioConfig,
    format_model_id,
    quantize,
    run_scenario,
)

SMALL = dict(
    d=2000,
    n_sub=(20, 40),
    d_proj=(50, 500),
    nonlinear_n_sub=(40,),
    nonlinear_d_proj=(50,),
    n_test=5000,
)
SMALL_GRID = LearnerGrid(logistic_l2_C=(1e-4, 1.0), ridge_alpha=(0.1,), knn_k=(1,), forest_trees=(3,))


def normal_pdf(z):
    return math.exp(-z * z / 2) / math.sqrt(2 * math.pi)


def small(kind, **kw):
    base = dict(SMALL)
    if kind in ("covariance_shift", "matched_noise"):
        base.update(d=200, n_sub=(50, 100, 200), d_proj=(200,))
        grid = LearnerGrid(logistic_l2_C=(1e-4, 1.0), logistic_l1_C=(0.1, 1.0), ridge_alpha=(0.1,), knn_k=(), forest_trees=())
    elif kind == "more_data":
        base["sigma"] = 0.1
        grid = LearnerGrid(logistic_l2_C=(1e-4, 1.0), ridge_alpha=(), knn_k=(), forest_trees=())
        base["aux_sizes"] = (0, 20)
    elif kind == "adversarial":
        grid = SMALL_GRID.linear_only()
    else:
        base["sigma"] = 0.1
        grid = SMALL_GRID
    base["learners"] = grid
    base.update(kw)
    return ScenarioConfig.default(kind, **base)


@pytest.fixture(scope="module")
def main_result():
    return run_scenario(small("main_trend"))


def test_quantize_and_ids():
    assert quantize(0.123456789123) == 0.123456789
    assert quantize(1.0) == 1.0
    assert format_model_id("ridge", {"alpha": 0.1, "n_sub": 30}) == "ridge_alpha=0.1_n_sub=30"


def test_config_validation():
    with pytest.raises(ValueError):
        ScenarioConfig(kind="nope")
    with pytest.raises(ValueError):
        ScenarioConfig(d=100, d_proj=(50, 300))
    with pytest.raises(ValueError):
        ScenarioConfig(workers=0)
    with pytest.raises(ValueError):
        ScenarioConfig(n_train=50, n_sub=(30, 100))
    with pytest.raises(ValueError):
        ScenarioConfig(covariance_shift="rotate")
    assert ScenarioConfig.default("adversarial").learners.knn_k == ()
    assert ScenarioConfig.default("covariance_shift").d == 500


def test_main_records_shape(main_result):
    r = main_result
    ids = [x.model_id for x in r.records]
    assert ids == sorted(ids) and len(set(ids)) == len(ids)
    # 4 n_sub x d_proj cells x 3 linear models plus one cell x 2 nonlinear models
    assert len(r.records) == 4 * 3 + 2
    linear = [x for x in r.records if x.family in ("logistic-l2", "ridge")]
    assert all(x.metric_id.is_exact and x.metric_ood.is_exact for x in linear)
    nonlinear = [x for x in r.records if x.family in ("knn", "random-forest")]
    assert all(x.metric_id.n == 5000 and x.metric_id.ci_lo <= x.metric_id.value <= x.metric_id.ci_hi for x in nonlinear)
    assert set(r.fits) == {"linear", "nonlinear"}
    assert r.fits["linear"].n_points == len(linear)


def test_main_deviation_two_paths(main_result):
    # deviation from the closed form vs from the reported accuracies
    r = main_result
    cfg = r.config
    for mid, dev in r.diagnostics["deviation"].items():
        rec = r.record(mid)
        a_id, a_ood = rec.metric_id.value, rec.metric_ood.value
        from_acc = probit(a_ood) - cfg.alpha / cfg.gamma * probit(a_id)
        # 9 significant digits leave at most 5e-10 in each accuracy
        slack = 5e-10 * (1 / normal_pdf(probit(a_ood)) + 1 / normal_pdf(probit(a_id))) + 1e-12
        assert abs(from_acc - dev) <= slack
        assert abs(dev) <= r.diagnostics["theorem_bound_union"]


def test_main_deviation_closed_form():
    cfg = small("main_trend")
    task = random_task(cfg.d, cfg.sigma, make_rng(5))
    shift = MeanShift(cfg.alpha, cfg.beta, cfg.gamma, sample_unit_sphere(cfg.d, make_rng(6)))
    theta = make_rng(7).standard_normal(cfg.d)
    clf = LinearClassifier(theta)
    expected = cfg.beta / (cfg.gamma * cfg.sigma) * (theta @ shift.delta) / np.linalg.norm(theta)
    assert probit_deviation(task, shift, clf) == pytest.approx(expected, abs=1e-10)
    # the same from the two margins
    from probit_trends.gaussian_shift import apply_shift

    direct = exact_probit_margin(apply_shift(task, shift), clf) - cfg.alpha / cfg.gamma * exact_probit_margin(task, clf)
    assert direct == pytest.approx(expected, abs=1e-10)


def test_zero_beta_gives_exact_line():
    r = run_scenario(small("main_trend", beta=0.0, learners=SMALL_GRID.linear_only()))
    assert max(abs(v) for v in r.diagnostics["deviation"].values()) <= 1e-12
    fit = r.fits["linear"]
    # reported accuracies carry 9 significant digits, so the refit is not bit exact
    assert fit.slope == pytest.approx(0.7, abs=1e-6)
    assert fit.intercept == pytest.approx(0.0, abs=1e-6)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("kind", ["main_trend", "more_data", "adversarial", "covariance_shift", "matched_noise"])
def test_worker_count_does_not_change_results(kind):
    a = run_scenario(small(kind, workers=1))
    b = run_scenario(small(kind, workers=4))
    assert a.records == b.records
    assert a.diagnostics == b.diagnostics


def test_seed_changes_results(main_result):
    other = run_scenario(small("main_trend", seed=1))
    assert other.records != main_result.records


def test_more_data_aux_zero_matches_main():
    md = run_scenario(small("more_data"))
    main = run_scenario(small("main_trend", learners=LearnerGrid(logistic_l2_C=(1e-4, 1.0), ridge_alpha=(), knn_k=(), forest_trees=())))
    base = {(r.hyperparams["C"], r.hyperparams["n_sub"], r.hyperparams["d_proj"]): r for r in main.records}
    zero = [r for r in md.records if r.hyperparams["aux"] == 0]
    assert len(zero) == len(base)
    for r in zero:
        ref = base[(r.hyperparams["C"], r.hyperparams["n_sub"], r.hyperparams["d_proj"])]
        assert (r.metric_id, r.metric_ood) == (ref.metric_id, ref.metric_ood)
    assert set(md.fits) == {"aux=0", "aux=20"}
    assert set(md.diagnostics["group_mean_id"]) == {"aux=0", "aux=20"}


def test_adversarial_target_deviation():
    cfg = small("adversarial")
    r = run_scenario(cfg)
    expected = cfg.beta * cfg.c / (cfg.gamma * cfg.sigma)
    assert r.diagnostics["target_deviation"] == pytest.approx(expected, abs=1e-9)
    assert r.diagnostics["target_deviation"] == pytest.approx(-0.474342, abs=1e-6)
    # Cauchy-Schwarz: no model can deviate further than the target
    assert max(abs(v) for v in r.diagnostics["deviation"].values()) <= abs(expected) + 1e-9
    assert r.diagnostics["target_model"] == r.records[0].model_id


def test_adversarial_zero_c():
    r = run_scenario(small("adversarial", c=0.0))
    assert max(abs(v) for v in r.diagnostics["deviation"].values()) <= 1e-12


def test_adversarial_bad_target():
    with pytest.raises(ValueError):
        run_scenario(small("adversarial", target=999))


def test_covariance_add_probes_and_ratios():
    r = run_scenario(small("covariance_shift"))
    probes = r.diagnostics["coordinate_probe_ratio"]
    assert probes["big"] == pytest.approx(1 / math.sqrt(1 + 0.25), abs=1e-9)
    assert probes["small"] == pytest.approx(1 / math.sqrt(1 + 25), abs=1e-9)
    ratios = r.diagnostics["probit_ratio"]
    assert len(ratios) == len([x for x in r.records if x.ok])
    assert all(0 < v < 1 for v in ratios.values())
    assert r.theoretical_line is None


def test_covariance_scale_control():
    r = run_scenario(small("covariance_shift", covariance_shift="scale"))
    fit = r.fits["linear"]
    assert fit.r_squared == pytest.approx(1.0, abs=1e-9)
    assert fit.slope == pytest.approx(1 / math.sqrt(1.25), abs=1e-6)
    assert r.diagnostics["ratio_spread"] == pytest.approx(1.0, abs=1e-6)
    assert r.diagnostics["nonconstant_ratio"] is False


def test_matched_noise():
    r = run_scenario(small("matched_noise"))
    assert r.diagnostics["r2_matched"] == pytest.approx(1.0, abs=1e-9)
    assert r.diagnostics["r2_isotropic"] < r.diagnostics["r2_matched"]
    # 10 coordinates of variance 1/200, the remaining 190 of variance 1/2
    mean_var = (10 / 200 + 190 * 0.5) / 200
    assert r.diagnostics["isotropic_s2"] == pytest.approx(0.25 * mean_var, rel=1e-12)
    assert any(x.model_id.startswith("matched:") for x in r.records)
    assert any(x.model_id.startswith("isotropic:") for x in r.records)


def test_failed_models_become_status_records():
    cfg = small("main_trend", tol=1e-30, learners=LearnerGrid(logistic_l2_C=(1.0,), ridge_alpha=(0.1,), knn_k=(), forest_trees=()))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        r = run_scenario(cfg)
    bad = [x for x in r.records if not x.ok]
    assert bad and all(x.status == "not_converged" and x.family == "logistic-l2" for x in bad)
    assert all(x.metric_id is None for x in bad)
    assert len([w for w in caught if "not_converged" in str(w.message)]) == len(bad)
    assert r.fits["linear"].n_points == len(r.records) - len(bad)


def _fresh_direction_worst_deviations(reruns):
    """Train the default linear models once, then redraw the shift direction."""
    from probit_trends.gaussian_shift import apply_shift, sample_dataset
    from probit_trends.learners import Logistic, Ridge, project, subsample, train

    cfg = ScenarioConfig.default("main_trend")
    task = random_task(cfg.d, cfg.sigma, make_rng(0, 1))
    data = sample_dataset(task.truncated(max(cfg.d_proj)), cfg.train_size, make_rng(0, 3))
    specs = [Logistic("l2", c) for c in cfg.learners.logistic_l2_C] + [Ridge(a) for a in cfg.learners.ridge_alpha]
    models = [
        train(s, project(subsample(data, n), dp), tol=cfg.tol).padded(cfg.d)
        for n in cfg.n_sub
        for dp in cfg.d_proj
        for s in specs
    ]
    z_id = np.array([exact_probit_margin(task, m) for m in models])
    worst = []
    for r in range(reruns):
        shift = MeanShift(cfg.alpha, cfg.beta, cfg.gamma, sample_unit_sphere(cfg.d, make_rng(0, 100, r)))
        shifted = apply_shift(task, shift)
        z_ood = np.array([exact_probit_margin(shifted, m) for m in models])
        worst.append(float(np.max(np.abs(z_ood - cfg.alpha / cfg.gamma * z_id))))
    return cfg, len(models), np.array(worst)


@pytest.fixture(scope="module")
def fresh_directions():
    return _fresh_direction_worst_deviations(100)


@pytest.mark.slow
def test_fresh_directions_within_union_bound(fresh_directions):
    from probit_trends.gaussian_shift import theorem_bound_union

    cfg, n_models, worst = fresh_directions
    bound = theorem_bound_union(cfg.beta, cfg.gamma, cfg.sigma, cfg.d, cfg.bound_delta, n_models)
    assert bound == pytest.approx(0.2263, abs=1e-4)
    assert np.mean(worst <= bound) >= 0.99


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="the per-model bound does not cover the maximum over 140 models")
def test_fresh_directions_within_per_model_bound(fresh_directions):
    cfg, _, worst = fresh_directions
    assert np.mean(worst <= 0.16276) >= 0.99


def test_main_records_correlation_property():
    from probit_trends.stats import CorrelationTransform, check_correlation_property

    r = run_scenario(ScenarioConfig.default("main_trend", learners=LearnerGrid().linear_only()))
    g = CorrelationTransform(0.7, 0.0)
    # Phi is 1/sqrt(2 pi)-Lipschitz, so a probit deviation within the bound
    # moves accuracy by at most bound / sqrt(2 pi)
    lipschitz = r.bound / math.sqrt(2 * math.pi)
    holds, worst = check_correlation_property(r.records, g, lipschitz)
    assert holds and lipschitz == pytest.approx(0.0649, abs=1e-4)
    # a 0.01 tolerance is too tight for these records
    holds, worst = check_correlation_property(r.records, g, 0.01)
    assert not holds and worst == pytest.approx(0.0394, abs=1e-4)


@pytest.mark.slow
def test_l2_beats_l1_ood_at_matched_id_accuracy():
    r = run_scenario(ScenarioConfig.default("covariance_shift"))
    l2 = [x for x in r.records if x.ok and x.family == "logistic-l2"]
    l1 = [x for x in r.records if x.ok and x.family == "logistic-l1"]
    pairs = [(a, b) for a in l2 for b in l1 if abs(a.metric_id.value - b.metric_id.value) <= 0.005]
    assert len(pairs) >= 3
    assert all(a.metric_ood.value >= b.metric_ood.value for a, b in pairs)
