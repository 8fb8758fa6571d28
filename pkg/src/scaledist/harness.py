"""Experiment harness: simulation grids over standardisation x order x method.

One experiment draws ``replicates`` datasets from a setup and, for every
combination of standardisation method, aggregation order q and learner,
records one score per replicate: the adjusted Rand index against the true
classes for the clustering methods (pam, complete, average, always on the
training data with k = number of classes), and the test misclassification
rate for knn3 (3 nearest neighbours, fitted on training data).

Standardisation is always fitted on training data only; the boxplot transform
is applied to test data with capping.  Pooled standardisations use class
labels: legitimate for the supervised knn3, label-leaking for clustering, so
clustering with a pooled method must be enabled explicitly (oracle_pooling)
and those rows are tagged ':oracle' in the output.

Reproducibility: replicate r uses word r of
``SeedSequence(seed).generate_state(replicates, uint64)`` as its data seed
(also written to the output, so single replicates can be regenerated with the
``simulate`` subcommand).  Replicates are independent and may run in parallel
(SCALEDIST_JOBS processes, or the machine's CPU count); the records and all
default outputs are byte-identical for any job count.  Wall-clock timings are
kept in memory but written to the CSV only when timing is enabled, precisely
because they are the one field that cannot be reproducible.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import _atomic_write
from .distance import check_order, cross, format_order, pairwise, parse_order
from .evaluate import adjusted_rand_index, misclassification_rate
from .learn import cut_tree, knn_classify, linkage, pam
from .simgen import SetupSpec, generate, setup_catalog
from .standardise import METHODS, POOLED_METHODS, fit_standardiser

__all__ = [
    "CLUSTER_METHODS",
    "EXPERIMENT_METHODS",
    "RESULTS_HEADER",
    "ResultRecord",
    "ExperimentConfig",
    "replicate_seeds",
    "run_replicate",
    "run_experiment",
    "run_experiment_to_files",
    "summarise",
    "write_records_csv",
    "read_records_csv",
    "write_summary_json",
]

CLUSTER_METHODS = ("pam", "complete", "average")
EXPERIMENT_METHODS = CLUSTER_METHODS + ("knn3",)

RESULTS_HEADER = "setup,replicate,seed,standardisation,q,method,metric,value,seconds"

JOBS_ENV_VAR = "SCALEDIST_JOBS"


@dataclass(frozen=True)
class ResultRecord:
    """One scored run: a (setup, replicate, standardisation, q, method) cell."""

    setup: str
    replicate: int
    seed: int
    standardisation: str
    q: float
    method: str
    metric: str
    value: float
    seconds: float


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one experiment grid.

    ``setup`` is a catalog name or a custom :class:`SetupSpec`; ``p`` and
    ``n_per_class`` override the setup's size when given.  ``orders`` holds
    the Minkowski orders (math.inf allowed).
    """

    setup: str | SetupSpec
    replicates: int
    seed: int
    standardisations: tuple = ("none",)
    orders: tuple = (1.0,)
    methods: tuple = EXPERIMENT_METHODS
    p: int | None = None
    n_per_class: int | None = None
    oracle_pooling: bool = False
    timing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "standardisations", tuple(self.standardisations))
        object.__setattr__(self, "orders", tuple(float(q) for q in self.orders))
        object.__setattr__(self, "methods", tuple(self.methods))

    def validate(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if int(self.seed) < 0:
            raise ValueError("seed must be non-negative")
        if not self.standardisations:
            raise ValueError("no standardisation methods requested")
        for s in self.standardisations:
            if s not in METHODS:
                raise ValueError("unknown standardisation method %r" % (s,))
        if not self.orders:
            raise ValueError("no aggregation orders requested")
        for q in self.orders:
            check_order(q)
        if not self.methods:
            raise ValueError("no methods requested")
        for m in self.methods:
            if m not in EXPERIMENT_METHODS:
                raise ValueError("unknown method %r" % (m,))
        pooled = [s for s in self.standardisations if s in POOLED_METHODS]
        wants_clustering = any(m in CLUSTER_METHODS for m in self.methods)
        if pooled and wants_clustering and not self.oracle_pooling:
            raise ValueError(
                "pooled standardisation (%s) uses class labels; clustering with it "
                "requires oracle_pooling" % ", ".join(pooled)
            )
        self.resolve_spec()
        return self

    def resolve_spec(self):
        """The SetupSpec this experiment draws from, with size overrides applied."""
        if isinstance(self.setup, SetupSpec):
            spec = self.setup
        else:
            catalog = setup_catalog()
            if self.setup not in catalog:
                raise ValueError(
                    "unknown setup %r (known: %s)" % (self.setup, ", ".join(catalog))
                )
            spec = catalog[self.setup]
        return spec.with_size(p=self.p, n_per_class=self.n_per_class)

    def to_json_dict(self):
        setup = self.setup if isinstance(self.setup, str) else self.setup.to_json_dict()
        return {
            "setup": setup,
            "replicates": self.replicates,
            "seed": self.seed,
            "standardisations": list(self.standardisations),
            "orders": [format_order(q) for q in self.orders],
            "methods": list(self.methods),
            "p": self.p,
            "n_per_class": self.n_per_class,
            "oracle_pooling": self.oracle_pooling,
            "timing": self.timing,
        }

    @classmethod
    def from_json_dict(cls, data):
        if not isinstance(data, dict) or "setup" not in data:
            raise ValueError("expected a JSON object with at least 'setup'")
        setup = data["setup"]
        if isinstance(setup, dict):
            setup = SetupSpec.from_json_dict(setup)
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError("unknown config key(s): %s" % ", ".join(sorted(extra)))
        kwargs = {
            "setup": setup,
            "replicates": int(data.get("replicates", 100)),
            "seed": int(data.get("seed", 0)),
        }
        if "standardisations" in data:
            kwargs["standardisations"] = tuple(data["standardisations"])
        if "orders" in data:
            kwargs["orders"] = tuple(parse_order(q) for q in data["orders"])
        if "methods" in data:
            kwargs["methods"] = tuple(data["methods"])
        for key in ("p", "n_per_class"):
            if data.get(key) is not None:
                kwargs[key] = int(data[key])
        for key in ("oracle_pooling", "timing"):
            if key in data:
                kwargs[key] = bool(data[key])
        return cls(**kwargs)


def replicate_seeds(seed, replicates):
    """Data seed for each replicate: the uint64 state words of the master seed."""
    state = np.random.SeedSequence(int(seed)).generate_state(replicates, np.uint64)
    return [int(s) for s in state]


def run_replicate(spec, setup_label, replicate, seed, standardisations, orders,
                  methods, oracle_pooling=False):
    """Score one replicate; the unit of (parallel) work.

    Pure function of its arguments; returns the records in grid order
    (standardisation, then q, then method).
    """
    data = generate(spec, seed)
    k_classes = int(data.y_train.max())
    records = []
    for std_method in standardisations:
        pooled = std_method in POOLED_METHODS
        std = fit_standardiser(
            data.x_train, std_method, labels=data.y_train if pooled else None
        )
        x_train = std.transform(data.x_train)
        x_test = std.transform(data.x_test, cap=True)
        cluster_tag = std_method + (":oracle" if pooled else "")
        for q in orders:
            train_d = None
            if any(m in CLUSTER_METHODS for m in methods):
                train_d = pairwise(x_train, q)
            for method in methods:
                started = time.perf_counter()
                if method == "pam":
                    labels = pam(train_d, k_classes).labels
                    value = adjusted_rand_index(labels, data.y_train)
                    metric, tag = "ari", cluster_tag
                elif method in ("complete", "average"):
                    labels = cut_tree(linkage(train_d, method), k_classes)
                    value = adjusted_rand_index(labels, data.y_train)
                    metric, tag = "ari", cluster_tag
                else:  # knn3
                    predicted = knn_classify(cross(x_test, x_train, q), data.y_train, 3)
                    value = misclassification_rate(predicted, data.y_test)
                    metric, tag = "misclassification", std_method
                records.append(
                    ResultRecord(
                        setup=setup_label,
                        replicate=replicate,
                        seed=seed,
                        standardisation=tag,
                        q=q,
                        method=method,
                        metric=metric,
                        value=float(value),
                        seconds=time.perf_counter() - started,
                    )
                )
    return records


def _replicate_task(args):
    return run_replicate(*args)


def _resolve_jobs(jobs):
    if jobs is None:
        env = os.environ.get(JOBS_ENV_VAR, "").strip()
        if env:
            try:
                jobs = int(env)
            except ValueError:
                raise ValueError(
                    "%s must be an integer, got %r" % (JOBS_ENV_VAR, env)
                ) from None
        else:
            jobs = os.cpu_count() or 1
    jobs = int(jobs)
    if jobs < 1:
        raise ValueError("job count must be >= 1, got %d" % jobs)
    return jobs


def run_experiment(config, jobs=None):
    """Run the full grid; returns records ordered by replicate, then grid order.

    ``jobs`` defaults to the SCALEDIST_JOBS environment variable, else the
    CPU count.  Replicates are scored in separate processes when jobs > 1;
    the output does not depend on the job count.
    """
    config.validate()
    jobs = _resolve_jobs(jobs)
    spec = config.resolve_spec()
    setup_label = config.setup if isinstance(config.setup, str) else spec.name
    seeds = replicate_seeds(config.seed, config.replicates)
    tasks = [
        (spec, setup_label, r, seeds[r], config.standardisations, config.orders,
         config.methods, config.oracle_pooling)
        for r in range(config.replicates)
    ]
    if jobs == 1 or config.replicates == 1:
        batches = [_replicate_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, config.replicates)) as pool:
            batches = list(pool.map(_replicate_task, tasks))
    return [record for batch in batches for record in batch]


def write_records_csv(path, records, timing=False):
    """Write records under the fixed header.

    The seconds field is left empty unless ``timing`` is set: wall time is the
    one field that would break bytewise reproducibility of otherwise identical
    runs.
    """
    lines = [RESULTS_HEADER]
    for r in records:
        lines.append(
            "%s,%d,%d,%s,%s,%s,%s,%s,%s"
            % (
                r.setup,
                r.replicate,
                r.seed,
                r.standardisation,
                format_order(r.q),
                r.method,
                r.metric,
                repr(float(r.value)),
                repr(float(r.seconds)) if timing else "",
            )
        )
    _atomic_write(path, "\n".join(lines) + "\n")


def read_records_csv(path):
    """Read a results CSV written by :func:`write_records_csv`."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != RESULTS_HEADER:
        raise ValueError("%s: missing results header %r" % (path, RESULTS_HEADER))
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != 9:
            raise ValueError("line %d: %d fields, expected 9" % (lineno, len(cells)))
        try:
            records.append(
                ResultRecord(
                    setup=cells[0],
                    replicate=int(cells[1]),
                    seed=int(cells[2]),
                    standardisation=cells[3],
                    q=parse_order(cells[4]),
                    method=cells[5],
                    metric=cells[6],
                    value=float(cells[7]),
                    seconds=float(cells[8]) if cells[8] != "" else math.nan,
                )
            )
        except ValueError as exc:
            raise ValueError("line %d: %s" % (lineno, exc)) from None
    return records


def summarise(records):
    """Aggregate records into means per (standardisation, q, method, metric).

    Groups appear in first-encounter order.  ``se`` is the standard error of
    the mean (sample standard deviation / sqrt(count); 0.0 for a single
    record).

    Returns a list of dicts with keys standardisation, q, method, metric,
    mean, se, count.
    """
    order = []
    groups = {}
    for r in records:
        key = (r.standardisation, format_order(r.q), r.method, r.metric)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(r.value)
    rows = []
    for key in order:
        values = np.array(groups[key])
        count = values.shape[0]
        se = float(np.std(values, ddof=1) / np.sqrt(count)) if count > 1 else 0.0
        rows.append(
            {
                "standardisation": key[0],
                "q": key[1],
                "method": key[2],
                "metric": key[3],
                "mean": float(values.mean()),
                "se": se,
                "count": count,
            }
        )
    return rows


def write_summary_json(path, rows, config=None):
    payload = {"groups": rows}
    if config is not None:
        payload = {"config": config.to_json_dict(), "groups": rows}
    _atomic_write(path, json.dumps(payload, indent=1) + "\n")


def run_experiment_to_files(config, out_csv, summary_json=None, jobs=None):
    """Run an experiment and write results CSV (+ optional summary JSON).

    Everything is computed before anything is written, so a failure leaves no
    partial output files.
    """
    records = run_experiment(config, jobs=jobs)
    write_records_csv(out_csv, records, timing=config.timing)
    if summary_json is not None:
        write_summary_json(summary_json, summarise(records), config=config)
    return records
