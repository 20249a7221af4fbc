"""Algorithm registry and the cancellable run-job lifecycle.

Every algorithm is exposed through one uniform contract: validate a typed
parameter map against the registry, run against a dataset, and produce a
JSON-serializable result document. The CLI runs jobs synchronously; the
service runs them on worker threads through the shared job table.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

import numpy as np

from .baselines import train_naive_bayes, train_one_r, train_zero_r
from .clustering import train_farthest_first, train_kmeans
from .data import NOMINAL, Dataset
from .evaluation import cross_validate
from .forests import train_forest_pa, train_random_forest, train_sysfor
from .rules import describe_rules, mine_apriori
from .runtime import RunCancelled, RunContext
from .trees import train_c45, train_cart_spaarc, train_rep_tree

CLASSIFIER = "classifier"
CLUSTERER = "clusterer"
ASSOCIATOR = "associator"


class ValidationError(ValueError):
    """Rejected run specification: unknown algorithm/parameter, bad value,
    or dataset that does not satisfy the algorithm's preconditions."""


@dataclass(frozen=True)
class Param:
    name: str
    kind: str                 # int | float | flag
    default: object
    min: float | None = None
    max: float | None = None

    def coerce(self, raw):
        if self.kind == "flag":
            if isinstance(raw, bool):
                value = raw
            elif isinstance(raw, str) and raw.lower() in ("true", "false"):
                value = raw.lower() == "true"
            else:
                raise ValidationError(f"parameter {self.name!r} expects true/false")
            return value
        try:
            value = int(raw) if self.kind == "int" else float(raw)
        except (TypeError, ValueError):
            raise ValidationError(
                f"parameter {self.name!r} expects {self.kind}, got {raw!r}") from None
        if self.kind == "int" and isinstance(raw, float) and raw != value:
            raise ValidationError(f"parameter {self.name!r} expects an integer")
        if self.min is not None and value < self.min:
            raise ValidationError(f"parameter {self.name!r} must be >= {self.min}")
        if self.max is not None and value > self.max:
            raise ValidationError(f"parameter {self.name!r} must be <= {self.max}")
        return value

    def describe(self):
        d = {"name": self.name, "kind": self.kind, "default": self.default}
        if self.min is not None:
            d["min"] = self.min
        if self.max is not None:
            d["max"] = self.max
        return d


@dataclass(frozen=True)
class AlgorithmInfo:
    id: str
    family: str
    params: tuple
    train: object             # callable(ds, params, seed, ctx) -> model


def _rf_train(ds, p, seed, ctx):
    subspace = p["subspace"] if p["subspace"] > 0 else None
    return train_random_forest(ds, num_trees=p["num_trees"], subspace=subspace,
                               seed=seed, bootstrap=p["bootstrap"], ctx=ctx)


REGISTRY = [
    AlgorithmInfo("c45", CLASSIFIER, (
        Param("confidence", "float", 0.25, min=1e-6, max=0.5),
        Param("min_leaf", "int", 2, min=1),
    ), lambda ds, p, s, c: train_c45(ds, p["confidence"], p["min_leaf"], ctx=c)),
    AlgorithmInfo("reptree", CLASSIFIER, (
        Param("prune_folds", "int", 3, min=2),
        Param("min_leaf", "int", 2, min=1),
    ), lambda ds, p, s, c: train_rep_tree(ds, p["prune_folds"], p["min_leaf"],
                                          seed=s, ctx=c)),
    AlgorithmInfo("spaarc", CLASSIFIER, (
        Param("split_sampling", "flag", True),
        Param("max_points", "int", 20, min=2),
        Param("attr_sampling", "flag", True),
        Param("min_leaf", "int", 2, min=1),
    ), lambda ds, p, s, c: train_cart_spaarc(
        ds, p["split_sampling"], p["max_points"], p["attr_sampling"],
        p["min_leaf"], seed=s, ctx=c)),
    AlgorithmInfo("randomforest", CLASSIFIER, (
        Param("num_trees", "int", 10, min=1),
        Param("subspace", "int", 0, min=0),
        Param("bootstrap", "flag", True),
    ), _rf_train),
    AlgorithmInfo("sysfor", CLASSIFIER, (
        Param("num_trees", "int", 10, min=1),
        Param("goodness_threshold", "float", 0.3, min=0.0, max=1.0),
    ), lambda ds, p, s, c: train_sysfor(ds, p["num_trees"],
                                        p["goodness_threshold"], seed=s, ctx=c)),
    AlgorithmInfo("forestpa", CLASSIFIER, (
        Param("num_trees", "int", 10, min=1),
        Param("recovery_trees", "int", 3, min=0),
    ), lambda ds, p, s, c: train_forest_pa(ds, p["num_trees"],
                                           p["recovery_trees"], seed=s, ctx=c)),
    AlgorithmInfo("naivebayes", CLASSIFIER, (),
                  lambda ds, p, s, c: train_naive_bayes(ds, ctx=c)),
    AlgorithmInfo("zeror", CLASSIFIER, (),
                  lambda ds, p, s, c: train_zero_r(ds, ctx=c)),
    AlgorithmInfo("oner", CLASSIFIER, (
        Param("min_bucket", "int", 6, min=1),
    ), lambda ds, p, s, c: train_one_r(ds, p["min_bucket"], ctx=c)),
    AlgorithmInfo("kmeans", CLUSTERER, (
        Param("k", "int", 2, min=1),
        Param("max_iter", "int", 500, min=1),
    ), lambda ds, p, s, c: train_kmeans(ds, p["k"], p["max_iter"], seed=s, ctx=c)),
    AlgorithmInfo("farthestfirst", CLUSTERER, (
        Param("k", "int", 2, min=1),
    ), lambda ds, p, s, c: train_farthest_first(ds, p["k"], seed=s, ctx=c)),
    AlgorithmInfo("apriori", ASSOCIATOR, (
        Param("min_support", "float", 0.1, min=1e-9, max=1.0),
        Param("min_confidence", "float", 0.9, min=0.0, max=1.0),
        Param("max_rules", "int", 10, min=1),
    ), lambda ds, p, s, c: mine_apriori(ds, p["min_support"], p["min_confidence"],
                                        p["max_rules"], ctx=c)),
]

_BY_ID = {a.id: a for a in REGISTRY}


def list_algorithms():
    """Stable-order catalog: id, family and parameter descriptors."""
    return [
        {"id": a.id, "family": a.family, "params": [p.describe() for p in a.params]}
        for a in REGISTRY
    ]


@dataclass
class AlgorithmSpec:
    algorithm: str
    params: dict = field(default_factory=dict)
    seed: int = 1
    folds: int = 10
    class_index: object = "last"    # "last" or 0-based int

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "params": dict(self.params),
            "seed": self.seed,
            "folds": self.folds,
            "class_index": self.class_index,
        }


def validate_spec(spec: AlgorithmSpec, ds: Dataset):
    """Resolve and type-check a spec against the registry and the dataset.

    Returns (info, resolved params, dataset view with the class index set).
    """
    info = _BY_ID.get(spec.algorithm)
    if info is None:
        raise ValidationError(f"unknown algorithm {spec.algorithm!r}")

    declared = {p.name: p for p in info.params}
    unknown = set(spec.params) - set(declared)
    if unknown:
        raise ValidationError(
            f"unknown parameters for {info.id}: {', '.join(sorted(unknown))}")
    resolved = {}
    for name, p in declared.items():
        raw = spec.params.get(name, p.default)
        resolved[name] = p.coerce(raw)

    if spec.class_index == "last":
        view = ds.with_class_index(ds.n_attributes - 1)
    else:
        try:
            idx = int(spec.class_index)
        except (TypeError, ValueError):
            raise ValidationError("class_index must be an integer or 'last'") from None
        if not 0 <= idx < ds.n_attributes:
            raise ValidationError(
                f"class index {idx} out of range for {ds.n_attributes} attributes")
        view = ds.with_class_index(idx)

    if not isinstance(spec.seed, int):
        raise ValidationError("seed must be an integer")

    if info.family == CLASSIFIER:
        if view.class_attribute.kind != NOMINAL:
            raise ValidationError("class attribute must be nominal")
        if view.n_instances == 0:
            raise ValidationError("dataset has no instances")
        if np.isnan(view.X[:, view.class_index]).any():
            raise ValidationError("dataset has instances with a missing class value")
        if not 2 <= spec.folds <= view.n_instances:
            raise ValidationError(
                f"fold count {spec.folds} out of range for {view.n_instances} instances")
        for j in view.feature_indices():
            if view.attributes[j].kind == "string":
                raise ValidationError(
                    f"string attribute {view.attributes[j].name!r} is not supported")
    elif info.family == CLUSTERER:
        k = resolved.get("k", 2)
        if k > view.n_instances:
            raise ValidationError(
                f"k={k} exceeds the {view.n_instances} available instances")
        for j in view.feature_indices():
            if view.attributes[j].kind == "string":
                raise ValidationError(
                    f"string attribute {view.attributes[j].name!r} is not supported")
    else:
        for attr in view.attributes:
            if attr.kind != NOMINAL:
                raise ValidationError(
                    f"association mining needs nominal attributes; "
                    f"{attr.name!r} is {attr.kind}")
    return info, resolved, view


def _dataset_header(ds):
    return {
        "relation": ds.relation,
        "instances": ds.n_instances,
        "attributes": ds.n_attributes,
    }


def execute_spec(spec: AlgorithmSpec, ds: Dataset, ctx=None) -> dict:
    """Validate and run, returning the result document."""
    info, params, view = validate_spec(spec, ds)

    if info.family == CLASSIFIER:
        report = cross_validate(
            lambda d, s, c: info.train(d, params, s, c),
            view, k=spec.folds, seed=spec.seed, ctx=ctx,
            algorithm=info.id, params=params)
        return {
            "algorithm": info.id,
            "params": params,
            "seed": spec.seed,
            "folds": spec.folds,
            "dataset": _dataset_header(view),
            "accuracy": report.accuracy,
            "class_labels": list(report.class_labels),
            "confusion": report.confusion.tolist(),
            "per_class": [
                {"label": m.label, "precision": m.precision,
                 "recall": m.recall, "f1": m.f1}
                for m in report.per_class
            ],
            "build_time_s": report.build_time_s,
            "cv_time_s": report.cv_time_s,
            "model_text": report.model_text,
        }

    t0 = time.perf_counter()
    model = info.train(view, params, spec.seed, ctx)
    build_time = time.perf_counter() - t0
    if ctx is not None:
        ctx.set_progress(1.0)

    if info.family == CLUSTERER:
        return {
            "algorithm": info.id,
            "params": params,
            "seed": spec.seed,
            "dataset": _dataset_header(view),
            "clusters": {
                "sizes": model.sizes,
                "iterations": model.iterations,
                "within_score": model.within_score,
            },
            "build_time_s": build_time,
            "model_text": model.describe(),
        }

    rules = model
    return {
        "algorithm": info.id,
        "params": params,
        "dataset": _dataset_header(view),
        "rules": [
            {
                "antecedent": [f"{a}={v}" for a, v in r.antecedent],
                "consequent": [f"{a}={v}" for a, v in r.consequent],
                "support": r.support,
                "confidence": r.confidence,
            }
            for r in rules
        ],
        "build_time_s": build_time,
        "model_text": describe_rules(rules),
    }


# ---------------------------------------------------------------------------
# Job table
# ---------------------------------------------------------------------------

PENDING = "pending"
RUNNING = "running"
DONE = "done"
CANCELLED = "cancelled"
FAILED = "failed"


class RunJob:
    def __init__(self, job_id, spec):
        self.id = job_id
        self.spec = spec
        self.status = PENDING
        self.ctx = RunContext()
        self.result = None
        self.error = None
        self.thread = None

    def snapshot(self):
        snap = {
            "id": self.id,
            "algorithm": self.spec.algorithm,
            "status": self.status,
            "progress": 1.0 if self.status == DONE else self.ctx.progress,
        }
        if self.status == DONE:
            snap["result"] = self.result
        if self.status == FAILED:
            snap["error"] = self.error
        return snap


class UnknownJobError(KeyError):
    pass


class Engine:
    """Shared job table; all mutation is serialized on one lock."""

    def __init__(self):
        self._lock = threading.Lock()
        self._jobs = {}
        self._counter = 0

    def start_run(self, spec: AlgorithmSpec, ds: Dataset) -> str:
        validate_spec(spec, ds)    # no job is created for an invalid spec
        with self._lock:
            self._counter += 1
            job = RunJob(f"run-{self._counter}", spec)
            self._jobs[job.id] = job

        def worker():
            with self._lock:
                if job.status == CANCELLED:
                    return
                job.status = RUNNING
            try:
                result = execute_spec(spec, ds, ctx=job.ctx)
            except RunCancelled:
                with self._lock:
                    job.status = CANCELLED
                    job.result = None
            except Exception as exc:
                with self._lock:
                    job.status = FAILED
                    job.error = str(exc)
            else:
                # a cancel that was never observed at a checkpoint lost the
                # race: the finished result stands
                with self._lock:
                    job.status = DONE
                    job.result = result

        job.thread = threading.Thread(target=worker, daemon=True)
        job.thread.start()
        return job.id

    def _get(self, job_id) -> RunJob:
        with self._lock:
            job = self._jobs.get(job_id)
        if job is None:
            raise UnknownJobError(job_id)
        return job

    def poll_run(self, job_id) -> dict:
        job = self._get(job_id)
        with self._lock:
            return job.snapshot()

    def cancel_run(self, job_id) -> dict:
        job = self._get(job_id)
        with self._lock:
            if job.status == PENDING:
                job.status = CANCELLED
        job.ctx.request_cancel()
        with self._lock:
            return job.snapshot()

    def wait(self, job_id, timeout=None):
        job = self._get(job_id)
        if job.thread is not None:
            job.thread.join(timeout)
        return self.poll_run(job_id)

    def jobs(self):
        with self._lock:
            return [j.snapshot() for j in self._jobs.values()]
