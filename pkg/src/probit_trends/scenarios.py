"""Simulation runners: main probit trend, more data, adversarial shift,
covariance shift and covariance-matched vs isotropic noise.

Every runner is a pure function of its ScenarioConfig. Random streams are
keyed by (master seed, stream tag, index), so results do not depend on the
number of worker threads.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .gaussian_shift import (
    AdversarialMeanShift,
    CovarianceAdd,
    CovarianceScale,
    Dataset,
    GaussianTask,
    LinearClassifier,
    MeanShift,
    apply_shift,
    diagonal_covariance_task,
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
from .learners import (
    KNN,
    ConvergenceError,
    LearnerSpec,
    Logistic,
    RandomForest,
    Ridge,
    count_correct,
    is_linear,
    project,
    subsample,
    train,
)
from .numerics import TransformKind, normal_cdf
from .stats import DegenerateFitError, EvalRecord, MetricEstimate, TrendFit, TrendLine, fit_trend

__all__ = [
    "SCENARIOS",
    "LearnerGrid",
    "ScenarioConfig",
    "ScenarioResult",
    "run_scenario",
    "run_main_trend",
    "run_more_data",
    "run_adversarial",
    "run_covariance_shift",
    "run_matched_noise",
    "quantize",
    "format_model_id",
]

SCENARIOS = ("main_trend", "more_data", "adversarial", "covariance_shift", "matched_noise")

# stream tags for make_rng
_MU, _DELTA, _TRAIN, _TEST_ID, _TEST_OOD, _MODEL, _AUX_DIR, _AUX_DATA = range(1, 9)

_TEST_CHUNK = 4096
SIGNIFICANT_DIGITS = 9


def quantize(x: float) -> float:
    """Round to the reporting precision (9 significant digits)."""
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}")


def _fmt(v) -> str:
    return format(v, "g") if isinstance(v, float) else str(v)


def format_model_id(family: str, hyperparams: dict) -> str:
    return family + "_" + "_".join(f"{k}={_fmt(v)}" for k, v in hyperparams.items())


@dataclass(frozen=True)
class LearnerGrid:
    logistic_l2_C: tuple = (1e-6, 1e-4, 1e-2, 1.0)
    logistic_l1_C: tuple = ()
    ridge_alpha: tuple = (1e-3, 1e-1, 10.0)
    knn_k: tuple = (1, 3)
    forest_trees: tuple = (3, 30, 100)
    forest_max_depth: int | None = None

    def specs(self) -> list[LearnerSpec]:
        out: list[LearnerSpec] = [Logistic("l2", c) for c in self.logistic_l2_C]
        out += [Logistic("l1", c) for c in self.logistic_l1_C]
        out += [Ridge(a) for a in self.ridge_alpha]
        out += [KNN(k) for k in self.knn_k]
        out += [RandomForest(t, self.forest_max_depth) for t in self.forest_trees]
        return out

    def linear_only(self) -> "LearnerGrid":
        return replace(self, knn_k=(), forest_trees=())


@dataclass(frozen=True)
class ScenarioConfig:
    """All knobs of a simulation. Defaults follow the main isotropic setting;
    use :meth:`default` for per-scenario defaults."""

    kind: str = "main_trend"
    seed: int = 0
    transform: TransformKind = TransformKind.PROBIT
    workers: int = 1
    # task
    d: int = 100_000
    sigma: float = 10 ** -1.5
    mu_norm: float = 1.0
    n_small: int = 10
    var_big: float = 0.5
    var_small: float = 1 / 200
    # shift
    alpha: float = 0.7
    beta: float = 0.5
    gamma: float = 1.0
    covariance_shift: str = "add"
    s2: float = 1 / 8
    kappa: float = 1.25
    c: float = -0.03
    target: int = 0
    aux_sizes: tuple = (0, 50, 100)
    sigma_aux_factor: float = math.sqrt(2.0)
    # data
    n_train: int | None = None
    n_sub: tuple = (30, 50, 70, 100)
    d_proj: tuple = (50, 100, 300, 1000, 3000)
    nonlinear_n_sub: tuple | None = (30, 100)
    nonlinear_d_proj: tuple | None = (50, 300, 3000)
    n_test: int = 100_000
    confidence: float = 0.95
    bound_delta: float = 0.01
    tol: float = 1e-8
    learners: LearnerGrid = field(default_factory=LearnerGrid)

    def __post_init__(self):
        if self.kind not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.kind!r}; expected one of {', '.join(SCENARIOS)}")
        object.__setattr__(self, "transform", TransformKind.parse(self.transform))
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not self.n_sub or not self.d_proj:
            raise ValueError("n_sub and d_proj grids must be non-empty")
        if max(self.d_proj) > self.d or min(self.d_proj) < 1:
            raise ValueError(f"d_proj values must lie in [1, d={self.d}]")
        if min(self.n_sub) < 1 or (self.n_train is not None and max(self.n_sub) > self.n_train):
            raise ValueError("n_sub values must lie in [1, n_train]")
        if self.covariance_shift not in ("add", "scale"):
            raise ValueError("covariance_shift must be 'add' or 'scale'")

    @classmethod
    def default(cls, kind: str, **overrides) -> "ScenarioConfig":
        base: dict = {"kind": kind}
        if kind == "more_data":
            base["learners"] = LearnerGrid(knn_k=(), forest_trees=(), ridge_alpha=())
        elif kind == "adversarial":
            base["learners"] = LearnerGrid().linear_only()
        elif kind in ("covariance_shift", "matched_noise"):
            base.update(
                d=500,
                n_sub=(100, 200, 500, 1000, 2000),
                d_proj=(500,),
                learners=LearnerGrid(
                    logistic_l2_C=(1e-6, 1e-4, 1e-2, 1.0),
                    logistic_l1_C=(0.03, 0.1, 0.3, 1.0),
                    ridge_alpha=(1e-3, 1e-1, 10.0),
                    knn_k=(),
                    forest_trees=(),
                ),
            )
        base.update(overrides)
        return cls(**base)

    @property
    def train_size(self) -> int:
        return self.n_train if self.n_train is not None else max(self.n_sub)


@dataclass
class ScenarioResult:
    scenario: str
    seed: int
    config: ScenarioConfig
    records: list[EvalRecord]
    fits: dict[str, TrendFit]
    theoretical_line: TrendLine | None = None
    bound: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def record(self, model_id: str) -> EvalRecord:
        for r in self.records:
            if r.model_id == model_id:
                return r
        raise KeyError(model_id)

    @property
    def primary_fit(self) -> TrendFit | None:
        return next(iter(self.fits.values()), None)


@dataclass(frozen=True)
class _Job:
    spec: LearnerSpec
    n_sub: int
    d_proj: int
    aux: int | None = None

    @property
    def hyperparams(self) -> dict:
        hp = dict(self.spec.hyperparams())
        hp["n_sub"] = self.n_sub
        hp["d_proj"] = self.d_proj
        if self.aux is not None:
            hp["aux"] = self.aux
        return hp

    @property
    def model_id(self) -> str:
        return format_model_id(self.spec.family, self.hyperparams)


def _jobs(config: ScenarioConfig, grid: LearnerGrid, aux: int | None = None) -> list[_Job]:
    jobs = []
    nl_n = config.nonlinear_n_sub if config.nonlinear_n_sub is not None else config.n_sub
    nl_d = config.nonlinear_d_proj if config.nonlinear_d_proj is not None else config.d_proj
    for n_sub in config.n_sub:
        for d_proj in config.d_proj:
            for spec in grid.specs():
                if not is_linear(spec) and (n_sub not in nl_n or d_proj not in nl_d):
                    continue
                jobs.append(_Job(spec, n_sub, d_proj, aux))
    return jobs


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass
class _Trained:
    job: _Job
    model: object | None
    status: str = "ok"
    message: str = ""


def _train_all(
    jobs: list[_Job],
    data_for: Callable[[_Job], Dataset],
    config: ScenarioConfig,
    stream: int = 0,
) -> list[_Trained]:
    def work(indexed):
        i, job = indexed
        data = data_for(job)
        rng = make_rng(config.seed, _MODEL, stream, i)
        try:
            model = train(job.spec, data, rng, tol=config.tol)
        except ConvergenceError as err:
            return _Trained(job, None, "not_converged", str(err))
        if isinstance(model, LinearClassifier) and model.is_zero:
            return _Trained(job, None, "degenerate", "all-zero weight vector")
        return _Trained(job, model)

    out = _map(work, list(enumerate(jobs)), config.workers)
    for t in out:
        if t.status != "ok":
            warnings.warn(f"{t.job.model_id}: {t.status} ({t.message})", stacklevel=3)
    return out


def _exact_metric(margin: float) -> MetricEstimate:
    return MetricEstimate.exact(quantize(normal_cdf(margin)))


def _count_metric(correct: int, n: int, confidence: float) -> MetricEstimate:
    m = MetricEstimate.from_counts(correct, n, confidence)
    return MetricEstimate(quantize(m.value), n, quantize(m.ci_lo), quantize(m.ci_hi))


def _empirical_counts(models: list, tasks: list[GaussianTask], config: ScenarioConfig) -> np.ndarray:
    """Correct-prediction counts, shape (len(tasks), len(models)).

    All models share one test set per task, drawn in fixed-size chunks from
    per-chunk streams.
    """
    counts = np.zeros((len(tasks), len(models)), dtype=np.int64)
    if not models:
        return counts
    width = max(m.d for m in models)
    n_chunks = -(-config.n_test // _TEST_CHUNK)
    for t_idx, task in enumerate(tasks):
        sub = task.truncated(width)
        for c in range(n_chunks):
            size = min(_TEST_CHUNK, config.n_test - c * _TEST_CHUNK)
            chunk = sample_dataset(sub, size, make_rng(config.seed, _TEST_ID + t_idx, c))
            counts[t_idx] += _map(lambda m: count_correct(m, chunk), models, config.workers)
    return counts


def _sorted(records: list[EvalRecord]) -> list[EvalRecord]:
    return sorted(records, key=lambda r: r.model_id)


def _skipped(t: _Trained, model_id: str | None = None, hyperparams: dict | None = None) -> EvalRecord:
    return EvalRecord(model_id or t.job.model_id, t.job.spec.family, hyperparams or t.job.hyperparams, status=t.status)


def _safe_fit(records, transform, name, diagnostics) -> TrendFit | None:
    try:
        return fit_trend(records, transform)
    except DegenerateFitError as err:
        diagnostics.setdefault("fit_errors", {})[name] = str(err)
        return None


def _mean_shift_world(config: ScenarioConfig):
    task = random_task(config.d, config.sigma, make_rng(config.seed, _MU), config.mu_norm)
    delta = sample_unit_sphere(config.d, make_rng(config.seed, _DELTA))
    shift = MeanShift(config.alpha, config.beta, config.gamma, delta)
    return task, shift


def _train_set(task: GaussianTask, config: ScenarioConfig) -> Dataset:
    width = max(config.d_proj)
    return sample_dataset(task.truncated(width), config.train_size, make_rng(config.seed, _TRAIN))


def _prefix(data: Dataset, job: _Job) -> Dataset:
    return project(subsample(data, job.n_sub), job.d_proj)


def _theory(config: ScenarioConfig, n_models: int) -> tuple[TrendLine, float, dict]:
    line = TrendLine(config.transform, config.alpha / config.gamma, 0.0)
    bound = theorem_bound(config.beta, config.gamma, config.sigma, config.d, config.bound_delta)
    extra = {
        "theorem_bound_union": theorem_bound_union(
            config.beta, config.gamma, config.sigma, config.d, config.bound_delta, max(1, n_models)
        )
    }
    return line, bound, extra


def run_main_trend(config: ScenarioConfig) -> ScenarioResult:
    """Linear models scored exactly, nonlinear models on shared test sets;
    probit trend fitted over the linear models."""
    task, shift = _mean_shift_world(config)
    shifted = apply_shift(task, shift)
    train_data = _train_set(task, config)
    trained = _train_all(_jobs(config, config.learners), lambda j: _prefix(train_data, j), config)

    records, deviations = [], {}
    nonlinear = []
    for t in trained:
        if t.status != "ok":
            records.append(_skipped(t))
        elif isinstance(t.model, LinearClassifier):
            clf = t.model.padded(config.d)
            records.append(
                EvalRecord(
                    t.job.model_id,
                    t.job.spec.family,
                    t.job.hyperparams,
                    _exact_metric(exact_probit_margin(task, clf)),
                    _exact_metric(exact_probit_margin(shifted, clf)),
                )
            )
            deviations[t.job.model_id] = probit_deviation(task, shift, clf)
        else:
            nonlinear.append(t)
    counts = _empirical_counts([t.model for t in nonlinear], [task, shifted], config)
    for i, t in enumerate(nonlinear):
        records.append(
            EvalRecord(
                t.job.model_id,
                t.job.spec.family,
                t.job.hyperparams,
                _count_metric(int(counts[0, i]), config.n_test, config.confidence),
                _count_metric(int(counts[1, i]), config.n_test, config.confidence),
            )
        )
    records = _sorted(records)
    line, bound, extra = _theory(config, len(deviations))
    diagnostics = {"deviation": dict(sorted(deviations.items())), **extra}
    exact = [r for r in records if r.ok and r.metric_id.is_exact]
    fits = {}
    fit = _safe_fit(exact, config.transform, "linear", diagnostics)
    if fit is not None:
        fits["linear"] = fit
    sampled = [r for r in records if r.ok and not r.metric_id.is_exact]
    if len(sampled) >= 2:
        fit = _safe_fit(sampled, config.transform, "nonlinear", diagnostics)
        if fit is not None:
            fits["nonlinear"] = fit
    if deviations:
        diagnostics["max_abs_deviation"] = max(abs(v) for v in deviations.values())
    return ScenarioResult(config.kind, config.seed, config, records, fits, line, bound, diagnostics)


def run_more_data(config: ScenarioConfig) -> ScenarioResult:
    """Logistic models trained on D plus 0 or more samples from the auxiliary
    distribution D'' (mean mu' + beta * fresh direction, noise sigma_aux_factor * sigma)."""
    task, shift = _mean_shift_world(config)
    shifted = apply_shift(task, shift)
    train_data = _train_set(task, config)
    aux = make_aux_task(
        shifted, config.beta, config.sigma_aux_factor * config.sigma, make_rng(config.seed, _AUX_DIR)
    )
    width = max(config.d_proj)
    max_aux = max(config.aux_sizes)
    aux_data = (
        sample_dataset(aux.base.truncated(width), max_aux, make_rng(config.seed, _AUX_DATA)) if max_aux else None
    )
    grid = replace(config.learners, knn_k=(), forest_trees=())

    def data_for(job: _Job) -> Dataset:
        base = _prefix(train_data, job)
        if not job.aux:
            return base
        extra = project(subsample(aux_data, job.aux), job.d_proj)
        return Dataset.concat(base, extra)

    records, fits = [], {}
    diagnostics: dict = {"group_mean_id": {}, "group_mean_ood": {}}
    for stream, size in enumerate(config.aux_sizes):
        trained = _train_all(_jobs(config, grid, size), data_for, config, stream=stream)
        group = []
        for t in trained:
            if t.status != "ok":
                records.append(_skipped(t))
                continue
            clf = t.model.padded(config.d)
            rec = EvalRecord(
                t.job.model_id,
                t.job.spec.family,
                t.job.hyperparams,
                _exact_metric(exact_probit_margin(task, clf)),
                _exact_metric(exact_probit_margin(shifted, clf)),
            )
            group.append(rec)
        records += group
        name = f"aux={size}"
        if len(group) >= 2:
            fit = _safe_fit(group, config.transform, name, diagnostics)
            if fit is not None:
                fits[name] = fit
        if group:
            diagnostics["group_mean_id"][name] = float(np.mean([r.metric_id.value for r in group]))
            diagnostics["group_mean_ood"][name] = float(np.mean([r.metric_ood.value for r in group]))
    line, bound, extra = _theory(config, len(records))
    diagnostics.update(extra)
    return ScenarioResult(config.kind, config.seed, config, _sorted(records), fits, line, bound, diagnostics)


def run_adversarial(config: ScenarioConfig) -> ScenarioResult:
    """Direction chosen against one trained classifier: delta = c * theta* / ||theta*||.

    ``config.target`` indexes the successfully trained linear models in
    model_id order. Only OOD accuracies change, since D is unaffected.
    """
    task, _ = _mean_shift_world(config)
    train_data = _train_set(task, config)
    trained = _train_all(
        _jobs(config, config.learners.linear_only()), lambda j: _prefix(train_data, j), config
    )
    ok = sorted((t for t in trained if t.status == "ok"), key=lambda t: t.job.model_id)
    if not ok:
        raise RuntimeError("no linear model trained successfully")
    if not 0 <= config.target < len(ok):
        raise ValueError(f"target index {config.target} outside [0, {len(ok)})")
    target = ok[config.target]
    theta_star = target.model.padded(config.d).theta
    shift = AdversarialMeanShift.targeting(config.alpha, config.beta, config.gamma, config.c, theta_star)
    shifted = apply_shift(task, shift)

    records, deviations = [], {}
    for t in trained:
        if t.status != "ok":
            records.append(_skipped(t))
            continue
        clf = t.model.padded(config.d)
        records.append(
            EvalRecord(
                t.job.model_id,
                t.job.spec.family,
                t.job.hyperparams,
                _exact_metric(exact_probit_margin(task, clf)),
                _exact_metric(exact_probit_margin(shifted, clf)),
            )
        )
        deviations[t.job.model_id] = probit_deviation(task, shift, clf)
    records = _sorted(records)
    line, bound, extra = _theory(config, len(deviations))
    diagnostics = {
        "target_model": target.job.model_id,
        "target_deviation": deviations[target.job.model_id],
        "deviation": dict(sorted(deviations.items())),
        **extra,
    }
    fits = {}
    fit = _safe_fit(records, config.transform, "linear", diagnostics)
    if fit is not None:
        fits["linear"] = fit
    return ScenarioResult(config.kind, config.seed, config, records, fits, line, bound, diagnostics)


def _covariance_world(config: ScenarioConfig) -> GaussianTask:
    return diagonal_covariance_task(
        config.d, config.n_small, config.var_big, config.var_small, make_rng(config.seed, _MU), config.mu_norm
    )


def _covariance_records(trained, task, shifted_tasks: dict, config, diagnostics):
    """Exact records for linear models under each named shifted task, plus
    empirical records for any nonlinear ones."""
    records = {name: [] for name in shifted_tasks}
    ratios = {name: {} for name in shifted_tasks}
    nonlinear = []
    for t in trained:
        if t.status != "ok":
            for name in shifted_tasks:
                mid = _prefixed(name, t.job.model_id, len(shifted_tasks))
                records[name].append(_skipped(t, mid))
            continue
        if not isinstance(t.model, LinearClassifier):
            nonlinear.append(t)
            continue
        clf = t.model.padded(config.d)
        m_id = exact_probit_margin(task, clf)
        for name, shifted in shifted_tasks.items():
            m_ood = exact_probit_margin(shifted, clf)
            mid = _prefixed(name, t.job.model_id, len(shifted_tasks))
            records[name].append(
                EvalRecord(mid, t.job.spec.family, t.job.hyperparams, _exact_metric(m_id), _exact_metric(m_ood))
            )
            ratios[name][mid] = m_ood / m_id
    if nonlinear:
        names = list(shifted_tasks)
        counts = _empirical_counts([t.model for t in nonlinear], [task] + [shifted_tasks[n] for n in names], config)
        for i, t in enumerate(nonlinear):
            m_id = _count_metric(int(counts[0, i]), config.n_test, config.confidence)
            for j, name in enumerate(names):
                mid = _prefixed(name, t.job.model_id, len(names))
                m_ood = _count_metric(int(counts[j + 1, i]), config.n_test, config.confidence)
                records[name].append(EvalRecord(mid, t.job.spec.family, t.job.hyperparams, m_id, m_ood))
    for name in shifted_tasks:
        r = ratios[name]
        diagnostics.setdefault("probit_ratio", {})[name] = dict(sorted(r.items()))
        if r:
            vals = np.array(list(r.values()))
            spread = float(vals.max() / vals.min()) if vals.min() > 0 else math.inf
            diagnostics.setdefault("ratio_spread", {})[name] = spread
            diagnostics.setdefault("nonconstant_ratio", {})[name] = bool(spread > 1.05)
    return records


def _prefixed(name: str, model_id: str, n_groups: int) -> str:
    return model_id if n_groups == 1 else f"{name}:{model_id}"


def _coordinate_probes(task: GaussianTask, shifted: GaussianTask) -> dict:
    """Probit ratios of the single-coordinate classifiers on the first
    largest- and smallest-variance coordinates."""
    v = task.variances()
    out = {}
    for name, idx in (("big", int(np.argmax(v))), ("small", int(np.argmin(v)))):
        e = np.zeros(task.d)
        e[idx] = 1.0
        clf = LinearClassifier(e)
        if task.mu[idx] == 0:
            continue
        out[name] = exact_probit_margin(shifted, clf) / exact_probit_margin(task, clf)
    return out


def run_covariance_shift(config: ScenarioConfig) -> ScenarioResult:
    """Diagonal-covariance task under Sigma' = Sigma + s2 I (or kappa * Sigma
    as a control); reports the per-model probit ratio."""
    task = _covariance_world(config)
    if config.covariance_shift == "add":
        shift = CovarianceAdd(config.s2)
    else:
        shift = CovarianceScale(config.kappa)
    shifted = apply_shift(task, shift)
    train_data = _train_set(task, config)
    trained = _train_all(_jobs(config, config.learners), lambda j: _prefix(train_data, j), config)
    diagnostics: dict = {"coordinate_probe_ratio": _coordinate_probes(task, shifted)}
    records = _sorted(_covariance_records(trained, task, {"shifted": shifted}, config, diagnostics)["shifted"])
    for key in ("probit_ratio", "ratio_spread", "nonconstant_ratio"):
        diagnostics[key] = diagnostics[key]["shifted"] if key in diagnostics else {}
    fits = {}
    exact = [r for r in records if r.ok and r.metric_id.is_exact]
    fit = _safe_fit(exact, config.transform, "linear", diagnostics)
    if fit is not None:
        fits["linear"] = fit
    for family in sorted({r.family for r in exact}):
        group = [r for r in exact if r.family == family]
        if len(group) >= 2:
            fit = _safe_fit(group, config.transform, family, diagnostics)
            if fit is not None:
                fits[family] = fit
    line = None
    if config.covariance_shift == "scale":
        line = TrendLine(config.transform, 1.0 / math.sqrt(config.kappa), 0.0)
    return ScenarioResult(config.kind, config.seed, config, records, fits, line, None, diagnostics)


def run_matched_noise(config: ScenarioConfig) -> ScenarioResult:
    """Same models under covariance-matched noise (kappa * Sigma) and under
    isotropic noise of equal total variance (s2 = (kappa - 1) tr(Sigma) / d)."""
    task = _covariance_world(config)
    s2 = (config.kappa - 1.0) * float(np.sum(task.variances())) / task.d
    shifted = {"matched": apply_shift(task, CovarianceScale(config.kappa))}
    if s2 > 0:
        shifted["isotropic"] = apply_shift(task, CovarianceAdd(s2))
    else:
        shifted["isotropic"] = task
    train_data = _train_set(task, config)
    trained = _train_all(_jobs(config, config.learners), lambda j: _prefix(train_data, j), config)
    diagnostics: dict = {"isotropic_s2": s2}
    groups = _covariance_records(trained, task, shifted, config, diagnostics)
    fits = {}
    for name in ("matched", "isotropic"):
        exact = [r for r in groups[name] if r.ok and r.metric_id.is_exact]
        fit = _safe_fit(exact, config.transform, name, diagnostics)
        if fit is not None:
            fits[name] = fit
            diagnostics[f"r2_{name}"] = fit.r_squared
    records = _sorted(groups["matched"] + groups["isotropic"])
    line = TrendLine(config.transform, 1.0 / math.sqrt(config.kappa), 0.0)
    return ScenarioResult(config.kind, config.seed, config, records, fits, line, None, diagnostics)


_RUNNERS = {
    "main_trend": run_main_trend,
    "more_data": run_more_data,
    "adversarial": run_adversarial,
    "covariance_shift": run_covariance_shift,
    "matched_noise": run_matched_noise,
}


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    return _RUNNERS[config.kind](config)
