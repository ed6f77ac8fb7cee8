"""Candidate evaluation: fit on a training split, score on a validation split.

Timeouts are cooperative. Learners call ``check_deadline`` between
iterations, tree nodes and prediction chunks; after the fact, any evaluation
that overran its limit without noticing is also marked as a timeout.
"""
from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass, field

import numpy as np

from ._common import deadline_scope, derive_seed
from .data import Dataset, split_holdout
from .errors import AllRepeatsFailed, EvaluationTimeout, MlcPlanError
from .learners import PARAM_SPACES, LearnerSpec, apply_transform, fit_preprocessor
from .learners.preprocess import PREPROCESSOR_SPACES
from .losses import LossKind, all_losses, compute_loss
from .mlc import MLC_NAMES, MlcSpec, fit_mlc, predict_mlc
from .searchspace import ComponentInstance, ComponentRegistry, builtin_registry


class CompileError(MlcPlanError):
    """The instance cannot be mapped onto executable components."""


# ---------------------------------------------------------------------------
# instance -> executable pipeline

@dataclass(frozen=True)
class PipelineSpec:
    preprocessors: tuple  # ((kind, params), ...) applied in order
    mlc: MlcSpec


def _learner_spec(inst: ComponentInstance) -> LearnerSpec:
    if inst.name not in PARAM_SPACES:
        raise CompileError(f"{inst.name!r} is not a single-label learner")
    inner = inst.child_dict.get("inner")
    return LearnerSpec(inst.name, inst.param_dict, _learner_spec(inner) if inner else None)


def libre_candidates(registry: ComponentRegistry | None) -> tuple:
    """Every executable binary learner of the registry, at its default settings."""
    registry = registry or builtin_registry()
    return tuple(LearnerSpec(c.name) for c in registry.providers("SLC-binary")
                 if c.name in PARAM_SPACES and not c.requires)


def compile_instance(inst: ComponentInstance, registry: ComponentRegistry | None = None) -> PipelineSpec:
    pre = []
    while inst.name == "pipeline":
        children = inst.child_dict
        p = children["preprocessor"]
        if p.name not in PREPROCESSOR_SPACES:
            raise CompileError(f"{p.name!r} is not a preprocessor")
        pre.append((p.name, p.param_dict))
        inst = children["classifier"]
    if inst.name not in MLC_NAMES:
        raise CompileError(f"{inst.name!r} is not a multi-label method")
    params = inst.param_dict
    if inst.name == "libre":
        return PipelineSpec(tuple(pre), MlcSpec("libre", params, libre_candidates(registry)))
    return PipelineSpec(tuple(pre), MlcSpec(inst.name, params, _learner_spec(inst.child_dict["base"])))


class FittedPipeline:
    def __init__(self, transforms, model):
        self.transforms = transforms
        self.model = model

    def transform(self, X):
        for t in self.transforms:
            X = apply_transform(t, X)
        return X

    def predict(self, X, tau=0.5):
        return predict_mlc(self.model, self.transform(X), tau)


def fit_pipeline(spec: PipelineSpec, train: Dataset, seed: int = 0) -> FittedPipeline:
    """Fit the preprocessor chain and the multi-label model on ``train`` only."""
    X = train.features
    transforms = []
    for kind, params in spec.preprocessors:
        t = fit_preprocessor(kind, params, X)
        transforms.append(t)
        X = apply_transform(t, X)
    ds = Dataset(X, train.labels)
    return FittedPipeline(transforms, fit_mlc(spec.mlc, ds, seed))


# ---------------------------------------------------------------------------
# records

@dataclass
class EvaluationRecord:
    candidate: ComponentInstance
    status: str  # ok | timeout | error | skipped_by_guard
    loss: float | None = None
    runtime_ms: float = 0.0
    split_seed: int = 0
    budget: float = 1.0
    error: str | None = None
    losses: dict = field(default_factory=dict)
    predicted_ms: float | None = None

    @property
    def ok(self):
        return self.status == "ok"

    def to_dict(self):
        d = {"status": self.status, "loss": self.loss, "runtime_ms": self.runtime_ms,
             "candidate": self.candidate.to_dict(), "budget": self.budget,
             "split_seed": self.split_seed}
        if self.error:
            d["error"] = self.error
        if self.losses:
            d["losses"] = dict(self.losses)
        if self.predicted_ms is not None:
            d["predicted_ms"] = self.predicted_ms
        return d


def evaluate_pipeline(instance: ComponentInstance, train: Dataset, val: Dataset, kind,
                      timeout_s: float | None = None, tau: float = 0.5, seed: int = 0,
                      registry: ComponentRegistry | None = None, budget: float = 1.0) -> EvaluationRecord:
    """Fit ``instance`` on ``train`` and report its ``kind`` loss on ``val``."""
    kind = LossKind.parse(kind) if isinstance(kind, str) else kind
    start = time.perf_counter()

    def record(status, **kw):
        ms = (time.perf_counter() - start) * 1000.0
        return EvaluationRecord(instance, status, runtime_ms=ms, split_seed=seed, budget=budget, **kw)

    try:
        spec = compile_instance(instance, registry)
        if train.n_features != val.n_features or train.n_labels != val.n_labels:
            raise CompileError("train and validation schemas differ")
        with deadline_scope(timeout_s):
            fitted = fit_pipeline(spec, train, derive_seed(seed, 1))
            scores, hard = fitted.predict(val.features, tau)
        if not np.all(np.isfinite(scores)):
            return record("error", error="non_finite_scores")
        losses = all_losses(val.labels, hard)
        loss = compute_loss(kind, val.labels, hard)
    except EvaluationTimeout:
        return record("timeout", error="timeout")
    except (MlcPlanError, ValueError, FloatingPointError, np.linalg.LinAlgError) as exc:
        return record("error", error=f"{type(exc).__name__}: {exc}")
    rec = record("ok", loss=loss, losses=losses)
    if timeout_s is not None and rec.runtime_ms > timeout_s * 1000.0:
        # watchdog: the run finished, but too late to count
        return EvaluationRecord(instance, "timeout", runtime_ms=rec.runtime_ms, split_seed=seed,
                                budget=budget, error="timeout")
    return rec


def mccv(instance, ds: Dataset, repeats: int = 1, train_ratio: float = 0.7, seed: int = 0,
         kind=LossKind.HAMMING, timeout_s=None, tau=0.5, registry=None):
    """Monte-Carlo cross-validation: mean loss over ``repeats`` seeded holdout splits.

    Returns ``(mean_loss, records)``; the mean is over successful repeats only.
    """
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    records = []
    for r in range(repeats):
        split_seed = derive_seed(seed, r)
        train, val = split_holdout(ds, train_ratio, split_seed)
        records.append(evaluate_pipeline(instance, train, val, kind, timeout_s, tau,
                                         split_seed, registry))
    ok = [r.loss for r in records if r.ok]
    if not ok:
        raise AllRepeatsFailed(records[0].status if records else "no repeats")
    return float(np.mean(ok)), records


def budgeted_evaluate(instance, ds: Dataset, fraction: float, split_seed: int, kind,
                      timeout_s=None, tau=0.5, train_ratio=0.7, registry=None) -> EvaluationRecord:
    """Evaluate with only the first ``ceil(fraction * N_train)`` shuffled training rows.

    The training part of ``split_holdout`` is already in shuffled order, so
    smaller budgets use prefixes of the rows larger budgets see.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"budget fraction {fraction} outside (0, 1]")
    train, val = split_holdout(ds, train_ratio, split_seed)
    n = math.ceil(fraction * train.n_rows)
    if n < 1:
        raise ValueError("budget leaves no training rows")
    if n < train.n_rows:
        train = train.take(np.arange(n))
    return evaluate_pipeline(instance, train, val, kind, timeout_s, tau, split_seed,
                             registry, budget=fraction)


# ---------------------------------------------------------------------------
# runtime guard

@dataclass(frozen=True)
class GuardDecision:
    proceed: bool
    predicted_ms: float | None = None


class RuntimeHistory:
    """Observed evaluation runtimes and a least-squares model of log runtime.

    Features: intercept, log rows, log columns, pipeline size, plus one
    indicator per component name seen so far. Timed-out runs are right-censored;
    they are stored at ``censor_factor * timeout`` (a penalized-runtime
    imputation) so that a model fitted on them can predict beyond the limit.
    """

    def __init__(self, warmup: int = 10, censor_factor: float = 10.0):
        self.warmup = warmup
        self.censor_factor = censor_factor
        self.entries = []  # (n_rows, n_cols, size, names, log_ms)
        self._lock = threading.Lock()
        self._coef = None
        self._names = ()
        self._fitted_len = -1

    def __len__(self):
        return len(self.entries)

    def record(self, n_rows, n_cols, instance, runtime_ms):
        names = tuple(sorted(set(instance.component_names())))
        with self._lock:
            self.entries.append((n_rows, n_cols, instance.size(), names,
                                 math.log(max(runtime_ms, 1e-3))))

    def record_evaluation(self, rec: EvaluationRecord, n_rows, n_cols, timeout_s):
        if rec.status == "ok":
            self.record(n_rows, n_cols, rec.candidate, rec.runtime_ms)
        elif rec.status == "timeout" and timeout_s is not None:
            self.record(n_rows, n_cols, rec.candidate, self.censor_factor * timeout_s * 1000.0)

    def _row(self, n_rows, n_cols, size, names, vocab):
        base = [1.0, math.log(max(n_rows, 1)), math.log(max(n_cols, 1)), float(size)]
        present = set(names)
        return base + [1.0 if v in present else 0.0 for v in vocab]

    def _refit(self):
        entries = list(self.entries)
        vocab = tuple(sorted({n for e in entries for n in e[3]}))
        A = np.array([self._row(e[0], e[1], e[2], e[3], vocab) for e in entries])
        b = np.array([e[4] for e in entries])
        coef, *_ = np.linalg.lstsq(A, b, rcond=None)
        self._coef, self._names, self._fitted_len = coef, vocab, len(entries)

    def predict_ms(self, n_rows, n_cols, instance):
        """Predicted runtime, or ``None`` before warmup."""
        with self._lock:
            if len(self.entries) < self.warmup:
                return None
            if self._fitted_len != len(self.entries):
                self._refit()
            coef, vocab = self._coef, self._names
        names = tuple(sorted(set(instance.component_names())))
        x = np.array(self._row(n_rows, n_cols, instance.size(), names, vocab))
        return float(math.exp(x @ coef))


def runtime_guard(history: RuntimeHistory, instance, ds: Dataset, timeout_s,
                  factor: float = 2.0) -> GuardDecision:
    """Skip candidates whose predicted runtime exceeds ``factor * timeout_s``."""
    if timeout_s is None:
        return GuardDecision(True)
    try:
        predicted = history.predict_ms(ds.n_rows, ds.n_features, instance)
    except (np.linalg.LinAlgError, ValueError, OverflowError):
        return GuardDecision(True)
    if predicted is None:
        return GuardDecision(True)
    return GuardDecision(predicted <= factor * timeout_s * 1000.0, predicted)


# ---------------------------------------------------------------------------
# evaluator used by the optimizers

class PipelineEvaluator:
    """Callable ``instance -> EvaluationRecord`` over fixed internal splits.

    ``budgeted(instance, fraction)`` evaluates on a training-row prefix for the
    budget-based optimizers. Identical candidates are evaluated once.
    """

    def __init__(self, ds: Dataset, kind=LossKind.HAMMING, timeout_s=None, tau=0.5, seed=0,
                 registry=None, repeats=1, train_ratio=0.7, guard=True,
                 history: RuntimeHistory | None = None, guard_factor=2.0):
        self.ds = ds
        self.kind = LossKind.parse(kind) if isinstance(kind, str) else kind
        self.timeout_s = timeout_s
        self.tau = tau
        self.seed = seed
        self.registry = registry
        self.repeats = repeats
        self.train_ratio = train_ratio
        self.guard = guard
        self.guard_factor = guard_factor
        self.history = history if history is not None else RuntimeHistory()
        self._cache = {}
        self._lock = threading.Lock()
        self.n_train_rows = math.ceil(train_ratio * ds.n_rows)

    def _guarded(self, instance, n_rows, run, budget=1.0):
        if self.guard:
            decision = runtime_guard(self.history, instance, _Shape(n_rows, self.ds.n_features),
                                     self.timeout_s, self.guard_factor)
            if not decision.proceed:
                return EvaluationRecord(instance, "skipped_by_guard", budget=budget,
                                        predicted_ms=decision.predicted_ms,
                                        error="predicted runtime exceeds guard threshold")
        rec = run()
        self.history.record_evaluation(rec, n_rows, self.ds.n_features, self.timeout_s)
        return rec

    def __call__(self, instance: ComponentInstance) -> EvaluationRecord:
        key = (instance.key(), 1.0)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        rec = self._guarded(instance, self.n_train_rows, lambda: self._run_full(instance))
        with self._lock:
            self._cache[key] = rec
        return rec

    def _run_full(self, instance):
        records = []
        for r in range(self.repeats):
            split_seed = derive_seed(self.seed, r)
            train, val = split_holdout(self.ds, self.train_ratio, split_seed)
            rec = evaluate_pipeline(instance, train, val, self.kind, self.timeout_s, self.tau,
                                    split_seed, self.registry)
            records.append(rec)
            if not rec.ok:
                # a failed repeat fails the candidate; later repeats would waste budget
                break
        if len(records) == 1 or not records[-1].ok:
            rec = records[-1]
            rec.runtime_ms = sum(r.runtime_ms for r in records)
            return rec
        ok = [r for r in records if r.ok]
        losses = {k: float(np.mean([r.losses[k] for r in ok])) for k in ok[0].losses}
        return EvaluationRecord(instance, "ok", loss=float(np.mean([r.loss for r in ok])),
                                runtime_ms=sum(r.runtime_ms for r in records),
                                split_seed=self.seed, losses=losses)

    def budgeted(self, instance: ComponentInstance, fraction: float) -> EvaluationRecord:
        key = (instance.key(), float(fraction))
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        n_rows = math.ceil(fraction * self.n_train_rows)
        rec = self._guarded(instance, n_rows, lambda: budgeted_evaluate(
            instance, self.ds, fraction, derive_seed(self.seed, 0), self.kind, self.timeout_s,
            self.tau, self.train_ratio, self.registry), budget=float(fraction))
        with self._lock:
            self._cache[key] = rec
        return rec


@dataclass(frozen=True)
class _Shape:
    n_rows: int
    n_features: int
