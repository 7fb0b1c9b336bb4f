import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from probit_trends.gaussian_shift import (
    AdversarialMeanShift,
    CovarianceAdd,
    CovarianceScale,
    Dataset,
    Diagonal,
    GaussianTask,
    Isotropic,
    LabeledSample,
    LinearClassifier,
    MeanShift,
    ShiftIncompatibleError,
    apply_shift,
    diagonal_covariance_task,
    exact_linear_accuracy,
    exact_probit_margin,
    make_aux_task,
    make_rng,
    probit_deviation,
    random_task,
    sample_dataset,
    sample_unit_sphere,
    theorem_bound,
    theorem_bound_union,
)
from probit_trends.numerics import normal_cdf, probit
from probit_trends.stats import clopper_pearson

SIGMA = 10 ** -1.5


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


# --- sphere and RNG -------------------------------------------------------


def test_sphere_examples():
    for seed in range(10):
        v = sample_unit_sphere(1, make_rng(seed))
        assert v.shape == (1,) and abs(v[0]) == 1.0
    v = sample_unit_sphere(1000, make_rng(1))
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


def test_sphere_first_coordinate_concentrates():
    d, draws = 100_000, 1000
    rng = make_rng(5)
    first = np.array([sample_unit_sphere(d, rng)[0] for _ in range(draws)])
    # each first coordinate has variance 1/d
    assert abs(first.mean()) <= 3 / math.sqrt(d) / math.sqrt(draws)
    assert first.var() == pytest.approx(1 / d, rel=0.15)


def test_make_rng_streams():
    a = make_rng(3, 1, 2).standard_normal(5)
    assert np.array_equal(a, make_rng(3, 1, 2).standard_normal(5))
    assert not np.array_equal(a, make_rng(3, 2, 1).standard_normal(5))
    assert not np.array_equal(a, make_rng(4, 1, 2).standard_normal(5))


# --- shifts ---------------------------------------------------------------


def test_identity_mean_shift():
    task = random_task(50, SIGMA, make_rng(0))
    delta = sample_unit_sphere(50, make_rng(1))
    out = apply_shift(task, MeanShift(1.0, 0.0, 1.0, delta))
    assert np.array_equal(out.mu, task.mu) and out.noise == task.noise


def test_mean_shift_norm_algebra():
    task = random_task(1000, SIGMA, make_rng(2))
    delta = sample_unit_sphere(1000, make_rng(3))
    out = apply_shift(task, MeanShift(0.7, 0.5, 1.0, delta))
    expected = 0.49 + 0.7 * float(delta @ task.mu) + 0.25
    assert float(out.mu @ out.mu) == pytest.approx(expected, abs=1e-12)
    assert out.noise.sigma == SIGMA


def test_covariance_shifts():
    iso = GaussianTask(np.ones(3) / math.sqrt(3), Isotropic(1.0))
    assert apply_shift(iso, CovarianceScale(2.0)).noise.sigma == pytest.approx(math.sqrt(2))
    assert apply_shift(iso, CovarianceAdd(3.0)).noise.sigma == pytest.approx(2.0)
    diag = GaussianTask(np.ones(3), Diagonal([0.5, 0.5, 0.005]))
    assert np.allclose(apply_shift(diag, CovarianceAdd(0.125)).variances(), [0.625, 0.625, 0.13])
    assert np.allclose(apply_shift(diag, CovarianceScale(1.25)).variances(), [0.625, 0.625, 0.00625])
    # input untouched
    assert np.array_equal(diag.variances(), [0.5, 0.5, 0.005])


def test_shift_errors():
    diag = GaussianTask(np.ones(3), Diagonal([1.0, 1.0, 1.0]))
    with pytest.raises(ShiftIncompatibleError):
        apply_shift(diag, MeanShift(0.7, 0.5, 1.0, unit([1, 0, 0])))
    with pytest.raises(ValueError):
        MeanShift(0.7, 0.5, 1.0, [1.0, 1.0])
    with pytest.raises(ValueError):
        CovarianceAdd(0.0)
    with pytest.raises(ValueError):
        AdversarialMeanShift.targeting(0.7, 0.5, 1.0, 1.5, [1.0, 0.0])
    adv = AdversarialMeanShift.targeting(0.7, 0.5, 1.0, -0.03, [3.0, 4.0])
    assert np.allclose(adv.delta, [-0.018, -0.024])


# --- exact accuracies -----------------------------------------------------


def test_exact_accuracy_examples():
    mu = unit(np.arange(1.0, 6.0))
    task = GaussianTask(mu, Isotropic(1.0))
    assert exact_linear_accuracy(task, LinearClassifier(mu)) == pytest.approx(normal_cdf(1.0), abs=1e-15)
    assert exact_linear_accuracy(task, LinearClassifier(mu)) == pytest.approx(0.841345, abs=1e-6)
    ortho = np.array([2.0, -1.0, 0, 0, 0])
    assert exact_linear_accuracy(task, LinearClassifier(ortho)) == pytest.approx(0.5, abs=1e-15)
    assert exact_linear_accuracy(task, LinearClassifier(-mu)) == pytest.approx(1 - normal_cdf(1.0), abs=1e-15)
    with pytest.raises(ValueError):
        exact_linear_accuracy(task, LinearClassifier(np.zeros(5)))


def test_exact_accuracy_diagonal_formula():
    mu = np.array([0.3, -0.2, 0.5])
    var = np.array([0.5, 0.005, 0.2])
    theta = np.array([1.0, -2.0, 0.5])
    task = GaussianTask(mu, Diagonal(var))
    expected = normal_cdf(theta @ mu / math.sqrt(theta**2 @ var))
    assert exact_linear_accuracy(task, LinearClassifier(theta)) == pytest.approx(expected, rel=1e-15)


@given(st.floats(0.01, 100), st.integers(0, 2**32 - 1))
def test_exact_accuracy_scale_invariance(c, seed):
    rng = make_rng(seed)
    task = random_task(20, 0.3, rng)
    theta = rng.standard_normal(20)
    a = exact_linear_accuracy(task, LinearClassifier(theta))
    assert exact_linear_accuracy(task, LinearClassifier(c * theta)) == pytest.approx(a, rel=1e-12)
    assert exact_linear_accuracy(task, LinearClassifier(-c * theta)) == pytest.approx(1 - a, rel=1e-9, abs=1e-15)


def test_monte_carlo_agrees_with_exact_accuracy():
    rng = make_rng(11)
    task = random_task(10, 0.4, rng)
    clf = LinearClassifier(task.mu + 0.3 * rng.standard_normal(10))
    n = 1_000_000
    correct = 0
    for chunk in range(10):
        data = sample_dataset(task, n // 10, make_rng(11, 99, chunk))
        correct += int(np.sum(clf.predict(data.X) == data.y))
    lo, hi = clopper_pearson(correct, n)
    assert lo <= exact_linear_accuracy(task, clf) <= hi


def test_projected_classifier_accuracy():
    task = random_task(200, SIGMA, make_rng(4))
    theta = make_rng(5).standard_normal(30)
    padded = LinearClassifier(theta).padded(200)
    expected = normal_cdf(theta @ task.mu[:30] / (np.linalg.norm(theta) * SIGMA))
    assert exact_linear_accuracy(task, padded) == pytest.approx(expected, rel=1e-13)


# --- deviation and the bound ----------------------------------------------


def test_probit_deviation_examples():
    d = 1000
    task = random_task(d, SIGMA, make_rng(6))
    theta = task.mu + 0.02 * make_rng(7).standard_normal(d)
    clf = LinearClassifier(theta)
    ortho = make_rng(8).standard_normal(d)
    ortho -= (ortho @ theta) / (theta @ theta) * theta
    assert probit_deviation(task, MeanShift(0.7, 0.5, 1.0, unit(ortho)), clf) == pytest.approx(0.0, abs=1e-8)
    assert probit_deviation(task, MeanShift(0.7, 0.5, 1.0, unit(theta)), clf) == pytest.approx(15.8114, abs=1e-4)
    adv = AdversarialMeanShift.targeting(0.7, 0.5, 1.0, -0.03, theta)
    assert probit_deviation(task, adv, clf) == pytest.approx(-0.474342, abs=1e-6)


def test_probit_deviation_definition():
    # moderate margins, so both accuracies are representable away from 1
    d = 500
    task = random_task(d, 0.5, make_rng(9))
    shift = MeanShift(0.7, 0.5, 1.0, sample_unit_sphere(d, make_rng(10)))
    clf = LinearClassifier(task.mu + 0.01 * make_rng(12).standard_normal(d))
    acc = exact_linear_accuracy(task, clf)
    acc_ood = exact_linear_accuracy(apply_shift(task, shift), clf)
    assert probit_deviation(task, shift, clf) == pytest.approx(probit(acc_ood) - 0.7 * probit(acc), abs=1e-7)


def test_theorem_bound_examples():
    base = theorem_bound(0.5, 1.0, SIGMA, 100_000, 0.01)
    assert base == pytest.approx(0.16276, abs=1e-4)
    assert base == pytest.approx(0.5 / SIGMA * math.sqrt(2 * math.log(200) / 1e5), rel=1e-14)
    assert theorem_bound(0.0, 1.0, SIGMA, 100_000, 0.01) == 0.0
    assert theorem_bound(0.5, 1.0, SIGMA, 400_000, 0.01) == pytest.approx(base / 2, rel=1e-14)
    assert theorem_bound_union(0.5, 1.0, SIGMA, 100_000, 0.01, 1) == base
    assert theorem_bound_union(1.0, 1.0, 1.0, 1, 0.5, 2) == pytest.approx(math.sqrt(2 * math.log(8)))
    # direct evaluation with ln(2N/delta) = ln(20000)
    assert theorem_bound_union(0.5, 1.0, SIGMA, 100_000, 0.01, 100) == pytest.approx(0.222525, abs=1e-6)
    with pytest.raises(ValueError):
        theorem_bound(0.5, 1.0, SIGMA, 100, 1.5)


def test_theorem_tail_monte_carlo():
    d = 100_000
    task = random_task(d, SIGMA, make_rng(20))
    clf = LinearClassifier(task.mu + 0.01 * make_rng(21).standard_normal(d))
    bound = theorem_bound(0.5, 1.0, SIGMA, d, 0.05)
    rng = make_rng(22)
    exceed = 0
    trials = 1000
    for _ in range(trials):
        shift = MeanShift(0.7, 0.5, 1.0, sample_unit_sphere(d, rng))
        exceed += abs(probit_deviation(task, shift, clf)) > bound
    slack = 3 * math.sqrt(0.05 * 0.95 / trials)
    assert exceed / trials <= 0.05 + slack


# --- covariance ratios ----------------------------------------------------


def test_covariance_probit_ratios():
    task = diagonal_covariance_task(500, 10, 0.5, 1 / 200, make_rng(30))
    v = task.variances()
    assert np.sum(v == 0.5) == 490 and np.sum(v == 1 / 200) == 10
    shifted = apply_shift(task, CovarianceAdd(1 / 8))
    for idx, oracle in ((int(np.argmax(v)), math.sqrt(0.5 / 0.625)), (int(np.argmin(v)), math.sqrt(0.005 / 0.13))):
        e = np.zeros(500)
        e[idx] = 1.0
        ratio = exact_probit_margin(shifted, LinearClassifier(e)) / exact_probit_margin(task, LinearClassifier(e))
        assert ratio == pytest.approx(oracle, abs=1e-12)
    assert math.sqrt(0.5 / 0.625) == pytest.approx(0.894427, abs=1e-6)
    assert math.sqrt(0.005 / 0.13) == pytest.approx(0.196116, abs=1e-6)


@given(st.floats(0.1, 10), st.integers(0, 2**32 - 1))
def test_covariance_scale_ratio_is_constant(kappa, seed):
    rng = make_rng(seed)
    task = diagonal_covariance_task(40, 5, 0.5, 0.005, rng)
    shifted = apply_shift(task, CovarianceScale(kappa))
    theta = rng.standard_normal(40)
    if abs(theta @ task.mu) < 1e-9:
        return
    clf = LinearClassifier(theta)
    ratio = exact_probit_margin(shifted, clf) / exact_probit_margin(task, clf)
    assert ratio == pytest.approx(1 / math.sqrt(kappa), rel=1e-12)


# --- sampling -------------------------------------------------------------


def test_sample_dataset_class_means():
    d, n = 5, 100_000
    task = random_task(d, 0.5, make_rng(40))
    data = sample_dataset(task, n, make_rng(41))
    for label in (-1, 1):
        rows = data.X[data.y == label]
        tol = 4 * 0.5 / math.sqrt(n / 2)
        assert np.all(np.abs(rows.mean(axis=0) - label * task.mu) <= tol)
    assert abs(np.mean(data.y == 1) - 0.5) < 4 * 0.5 / math.sqrt(n)


def test_sample_dataset_is_deterministic():
    task = random_task(7, 0.5, make_rng(0))
    a = sample_dataset(task, 50, make_rng(1))
    b = sample_dataset(task, 50, make_rng(1))
    assert np.array_equal(a.X, b.X) and np.array_equal(a.y, b.y)
    with pytest.raises(ValueError):
        sample_dataset(task, 0, make_rng(1))


def test_dataset_samples_round_trip():
    task = random_task(4, 0.5, make_rng(0))
    data = sample_dataset(task, 6, make_rng(1))
    samples = list(data)
    assert all(isinstance(s, LabeledSample) for s in samples)
    back = Dataset.from_samples(samples)
    assert np.array_equal(back.X, data.X) and np.array_equal(back.y, data.y)


def test_aux_task():
    d = 10_000
    task = random_task(d, SIGMA, make_rng(50))
    delta = sample_unit_sphere(d, make_rng(51))
    shifted = apply_shift(task, MeanShift(0.7, 0.5, 1.0, delta))
    aux = make_aux_task(shifted, 0.5, math.sqrt(2) * SIGMA, make_rng(52))
    assert np.linalg.norm(aux.base.mu - shifted.mu) == pytest.approx(0.5, abs=1e-12)
    assert aux.base.noise.sigma == pytest.approx(math.sqrt(2) * SIGMA)
    assert abs(aux.delta_tilde @ delta) <= 5 / math.sqrt(d)
    same = make_aux_task(shifted, 0.0, SIGMA, make_rng(52))
    assert np.array_equal(same.base.mu, shifted.mu)
