"""Multinomial logistic regression pipeline over projected features.

The pipeline compares feature maps (identity, random Gaussian projection,
PCA fit on the training split only) under one shared train/test split and
identical classifier hyperparameters, reporting test error and training
wall-clock per method.

Dataset CSV schema: header ``label,f0,f1,...``; report CSV schema:
``method,M,seed,error,train_seconds``.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._rng import substream
from .bodies import GaussianProjection
from .pca import inertia, principal_subspace

DEFAULT_L2 = 1e-4
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITERS = 5000
ARMIJO_SLOPE = 1e-4


@dataclass(frozen=True)
class Dataset:
    """Feature rows with integer labels in ``0..n_classes-1``.

    When ``n_classes`` is omitted it is inferred from the labels, which
    must then cover every value (fresh datasets); a split may pass the
    parent's count so a side missing some class stays valid.
    ``class_names`` preserves original label spellings so a loaded file
    can be written back byte-for-byte.
    """

    features: np.ndarray
    labels: np.ndarray
    class_names: tuple[str, ...] | None = None
    n_classes: int | None = None

    def __post_init__(self) -> None:
        features = np.ascontiguousarray(self.features, dtype=float)
        labels = np.asarray(self.labels, dtype=np.int64)
        if features.ndim != 2:
            raise ValueError("features must be 2-D")
        if labels.shape != (features.shape[0],):
            raise ValueError("labels must match feature rows")
        if not np.all(np.isfinite(features)):
            raise ValueError("features contain non-finite entries")
        present = np.unique(labels)
        if self.n_classes is None:
            k = present.size
            if not np.array_equal(present, np.arange(k)):
                raise ValueError("labels must be exactly 0..K-1")
        else:
            k = int(self.n_classes)
            if present.size and (present[0] < 0 or present[-1] >= k):
                raise ValueError(f"labels must lie in 0..{k - 1}")
        if k < 2:
            raise ValueError("dataset must contain at least 2 classes")
        if self.class_names is not None and len(self.class_names) != k:
            raise ValueError("class_names must have one entry per class")
        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "n_classes", k)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]


def dataset_from_arrays(features, labels, class_names=None) -> Dataset:
    """Build a Dataset from arbitrary integer labels, remapping them sorted."""
    labels = np.asarray(labels, dtype=np.int64)
    originals = np.unique(labels)
    remapped = np.searchsorted(originals, labels)
    if class_names is None:
        class_names = tuple(str(int(value)) for value in originals)
    return Dataset(np.asarray(features, dtype=float), remapped, tuple(class_names))


def load_dataset(path, fmt: str = "csv") -> Dataset:
    """Read ``label,f0,...`` CSV; labels are remapped to 0..K-1 sorted.

    Malformed input (ragged rows, non-numeric cells) raises with the
    offending line number.
    """
    if fmt != "csv":
        raise ValueError(f"unknown dataset format {fmt!r}")
    path = Path(path)
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("dataset file is empty") from None
        expected_width = len(header)
        if expected_width < 2 or header[0] != "label":
            raise ValueError(f"line 1: header must be label,f0,..., got {header!r}")
        raw_labels: list[int] = []
        rows: list[list[float]] = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != expected_width:
                raise ValueError(
                    f"line {line_no}: expected {expected_width} cells, got {len(row)}"
                )
            try:
                raw_labels.append(int(row[0]))
            except ValueError:
                raise ValueError(f"line {line_no}: non-integer label {row[0]!r}") from None
            try:
                rows.append([float(cell) for cell in row[1:]])
            except ValueError:
                raise ValueError(f"line {line_no}: non-numeric feature cell") from None
    if not rows:
        raise ValueError("dataset file has no data rows")
    return dataset_from_arrays(np.array(rows), np.array(raw_labels))


def save_dataset(data: Dataset, path, fmt: str = "csv") -> None:
    """Write the dataset CSV; floats use repr so a reload is bit-exact."""
    if fmt != "csv":
        raise ValueError(f"unknown dataset format {fmt!r}")
    names = data.class_names or tuple(str(i) for i in range(data.n_classes))
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["label"] + [f"f{i}" for i in range(data.n_features)])
        for label, row in zip(data.labels, data.features):
            writer.writerow([names[label]] + [repr(float(v)) for v in row])


def split(data: Dataset, ratio: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic uniform split; training size is ``round(ratio * p)``.

    Every class must appear in the training split, otherwise this raises
    with advice to raise the ratio or change the seed.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must lie in (0, 1), got {ratio!r}")
    p = data.n_samples
    n_train = int(math.floor(ratio * p + 0.5))
    if n_train < 1 or n_train >= p:
        raise ValueError(f"split of {p} samples at ratio {ratio} leaves an empty side")
    order = substream(seed, "split").permutation(p)
    train_idx = np.sort(order[:n_train])
    test_idx = np.sort(order[n_train:])
    if np.unique(data.labels[train_idx]).size != data.n_classes:
        raise ValueError(
            "some class has no training sample; raise the ratio or change the seed"
        )

    def take(idx: np.ndarray) -> Dataset:
        return Dataset(
            data.features[idx], data.labels[idx], data.class_names, data.n_classes
        )

    return take(train_idx), take(test_idx)


@dataclass(frozen=True)
class MlrModel:
    """Trained multinomial logistic model with its standardization."""

    weights: np.ndarray
    feature_mean: np.ndarray
    feature_scale: np.ndarray
    loss_trace: tuple[float, ...]
    converged: bool

    @property
    def n_classes(self) -> int:
        return self.weights.shape[0]


def _design(features: np.ndarray, mean: np.ndarray, scale: np.ndarray) -> np.ndarray:
    standardized = (features - mean) / scale
    return np.hstack([standardized, np.ones((features.shape[0], 1))])


def _loss_grad(
    design: np.ndarray, onehot: np.ndarray, weights: np.ndarray, l2: float
) -> tuple[float, np.ndarray]:
    logits = design @ weights.T
    logits -= logits.max(axis=1, keepdims=True)
    exp = np.exp(logits)
    total = exp.sum(axis=1, keepdims=True)
    log_probs = logits - np.log(total)
    loss = -float((onehot * log_probs).sum()) / design.shape[0]
    penalty = weights.copy()
    penalty[:, -1] = 0.0
    loss += 0.5 * l2 * float((penalty[:, :-1] ** 2).sum())
    grad = ((exp / total) - onehot).T @ design / design.shape[0] + l2 * penalty
    return loss, grad


def train_mlr(
    train: Dataset,
    l2: float = DEFAULT_L2,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
) -> MlrModel:
    """Full-batch gradient descent with backtracking (Armijo) line search.

    Features are standardized on training statistics (stored in the
    model); the bias column is excluded from the L2 penalty. Training
    stops when the gradient norm falls to ``tol`` or after ``max_iters``
    accepted steps. The loss trace is non-increasing.
    """
    labels = train.labels
    k = train.n_classes
    if np.unique(labels).size < 2:
        raise ValueError("training data must contain at least 2 classes")
    if l2 < 0.0:
        raise ValueError(f"l2 must be >= 0, got {l2!r}")
    mean = train.features.mean(axis=0)
    std = train.features.std(axis=0)
    scale = np.where(std > 1e-12, std, 1.0)
    design = _design(train.features, mean, scale)
    onehot = np.zeros((labels.size, k))
    onehot[np.arange(labels.size), labels] = 1.0
    weights = np.zeros((k, design.shape[1]))
    loss, grad = _loss_grad(design, onehot, weights, l2)
    trace = [loss]
    converged = False
    step = 1.0
    for _ in range(max_iters):
        grad_sq = float((grad**2).sum())
        if math.sqrt(grad_sq) <= tol:
            converged = True
            break
        step = min(step * 2.0, 1e6)
        accepted = False
        for _ in range(60):
            candidate = weights - step * grad
            new_loss, new_grad = _loss_grad(design, onehot, candidate, l2)
            if new_loss <= loss - ARMIJO_SLOPE * step * grad_sq:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        weights, loss, grad = candidate, new_loss, new_grad
        trace.append(loss)
    else:
        converged = math.sqrt(float((grad**2).sum())) <= tol
    return MlrModel(
        weights=weights,
        feature_mean=mean,
        feature_scale=scale,
        loss_trace=tuple(trace),
        converged=converged,
    )


def predict(model: MlrModel, features) -> np.ndarray:
    """Class labels for feature rows under the trained model."""
    features = np.asarray(features, dtype=float)
    design = _design(features, model.feature_mean, model.feature_scale)
    return np.argmax(design @ model.weights.T, axis=1)


def error_rate(model: MlrModel, data: Dataset) -> float:
    return float(np.mean(predict(model, data.features) != data.labels))


@dataclass(frozen=True)
class PipelineReport:
    """One method's test error and training cost within a pipeline run."""

    method: str
    m: int
    seed: int
    error: float
    train_seconds: float

    def to_row(self) -> list:
        return [self.method, self.m, self.seed, repr(self.error), repr(self.train_seconds)]


def _parse_method(method: str, n_features: int) -> tuple[str, int]:
    if method == "identity":
        return "identity", n_features
    for prefix in ("rp", "pca"):
        if method.startswith(prefix + ":"):
            try:
                m = int(method.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"malformed method {method!r}") from None
            if not 1 <= m <= n_features:
                raise ValueError(
                    f"method {method!r} needs M in [1, {n_features}]"
                )
            return prefix, m
    raise ValueError(f"unknown method {method!r}; use identity, rp:M, or pca:M")


def run_pipeline(
    data: Dataset,
    ratio: float,
    methods,
    seed: int,
    l2: float = DEFAULT_L2,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
) -> list[PipelineReport]:
    """Train and evaluate each feature map on one shared split.

    Methods are strings: ``identity``, ``rp:M`` (Gaussian projection with
    this run's seed), or ``pca:M`` (subspace fit on the training split
    only). Wall-clock covers classifier training alone.
    """
    train, test = split(data, ratio, seed)
    reports = []
    for method in methods:
        kind, m = _parse_method(method, data.n_features)
        if kind == "identity":
            train_x, test_x = train.features, test.features
        elif kind == "rp":
            matrix = GaussianProjection(m, data.n_features, seed).entries
            train_x = train.features @ matrix.T
            test_x = test.features @ matrix.T
        else:
            basis = principal_subspace(inertia(train.features), m).basis
            train_x = train.features @ basis
            test_x = test.features @ basis
        train_set = Dataset(train_x, train.labels, train.class_names, train.n_classes)
        start = time.perf_counter()
        model = train_mlr(train_set, l2=l2, max_iters=max_iters, tol=tol)
        elapsed = time.perf_counter() - start
        test_set = Dataset(test_x, test.labels, test.class_names, test.n_classes)
        reports.append(
            PipelineReport(
                method=method,
                m=m,
                seed=seed,
                error=error_rate(model, test_set),
                train_seconds=elapsed,
            )
        )
    return reports


def save_report(reports, path) -> None:
    """Write pipeline reports as ``method,M,seed,error,train_seconds``."""
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["method", "M", "seed", "error", "train_seconds"])
        for report in reports:
            writer.writerow(report.to_row())
