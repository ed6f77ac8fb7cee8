"""Multi-label dataset ingestion, holdout splitting and label statistics."""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateSplit,
    InvalidDataset,
    LabelCountExceedsColumns,
    MissingFile,
    MissingRelationMarker,
    NonBinaryLabel,
    NonNumericCell,
    UnsupportedAttributeType,
)


@dataclass(frozen=True)
class Dataset:
    """Feature matrix ``features`` (S x d) with binary ``labels`` (S x m)."""

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple = field(default=())
    label_names: tuple = field(default=())

    def __post_init__(self):
        X = np.array(self.features, dtype=np.float64, copy=True)
        Y = np.array(self.labels, copy=True)
        if X.ndim != 2 or Y.ndim != 2:
            raise InvalidDataset("features and labels must be 2-d")
        if X.shape[0] != Y.shape[0] or X.shape[0] < 1:
            raise InvalidDataset(f"row mismatch or empty: {X.shape[0]} vs {Y.shape[0]}")
        if X.shape[1] < 1 or Y.shape[1] < 1:
            raise InvalidDataset("need at least one feature and one label")
        if not np.all(np.isfinite(X)):
            raise InvalidDataset("features contain NaN or Inf")
        if not np.all((Y == 0) | (Y == 1)):
            bad = np.argwhere((Y != 0) & (Y != 1))[0]
            raise NonBinaryLabel(int(bad[0]), int(bad[1]), Y[tuple(bad)])
        Y = Y.astype(np.int8)
        X.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", Y)
        fn = tuple(self.feature_names) or tuple(f"f{j + 1}" for j in range(X.shape[1]))
        ln = tuple(self.label_names) or tuple(f"l{j + 1}" for j in range(Y.shape[1]))
        if len(fn) != X.shape[1] or len(ln) != Y.shape[1]:
            raise InvalidDataset("name lists do not match matrix widths")
        object.__setattr__(self, "feature_names", fn)
        object.__setattr__(self, "label_names", ln)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_labels(self) -> int:
        return self.labels.shape[1]

    def take(self, rows) -> "Dataset":
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.features[rows], self.labels[rows],
                       self.feature_names, self.label_names)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.feature_names == other.feature_names
                and self.label_names == other.label_names
                and np.array_equal(self.features, other.features)
                and np.array_equal(self.labels, other.labels))

    __hash__ = None


@dataclass(frozen=True)
class LabelStats:
    cardinality: float
    density: float
    distinct_labelsets: int
    per_label_frequency: np.ndarray


def _parse_float(text, row, col):
    try:
        value = float(text)
    except ValueError:
        raise NonNumericCell(row, col, text) from None
    if not math.isfinite(value):
        raise NonNumericCell(row, col, text)
    return value


def load_csv(path, label_count: int, label_position: str = "suffix") -> Dataset:
    """Read a numeric CSV with one header row; split off ``label_count`` label columns.

    ``label_position`` is ``"prefix"`` (labels are the first columns) or
    ``"suffix"`` (labels are the last columns). Row and column indices in
    errors are 0-based and count data rows only.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(str(path))
    if label_position not in ("prefix", "suffix"):
        raise ValueError(f"label_position must be prefix or suffix, got {label_position!r}")
    if label_count < 1:
        raise ValueError("label_count must be positive")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise InvalidDataset(f"{path} is empty") from None
        rows = [r for r in reader if r and any(c.strip() for c in r)]
    n_cols = len(header)
    if label_count >= n_cols:
        raise LabelCountExceedsColumns(
            f"{label_count} labels requested but only {n_cols} columns present")
    if label_position == "prefix":
        label_cols = list(range(label_count))
    else:
        label_cols = list(range(n_cols - label_count, n_cols))
    feature_cols = [c for c in range(n_cols) if c not in label_cols]

    values = np.empty((len(rows), n_cols), dtype=np.float64)
    for i, row in enumerate(rows):
        if len(row) != n_cols:
            raise InvalidDataset(f"row {i} has {len(row)} cells, expected {n_cols}")
        for j, cell in enumerate(row):
            values[i, j] = _parse_float(cell.strip(), i, j)
    for j in label_cols:
        bad = np.flatnonzero((values[:, j] != 0) & (values[:, j] != 1))
        if bad.size:
            raise NonBinaryLabel(int(bad[0]), j, rows[bad[0]][j])
    if not rows:
        raise InvalidDataset(f"{path} has no data rows")
    return Dataset(values[:, feature_cols], values[:, label_cols].astype(np.int8),
                   tuple(header[c] for c in feature_cols),
                   tuple(header[c] for c in label_cols))


def save_csv(ds: Dataset, path, label_position: str = "suffix") -> None:
    """Write ``ds`` in the format read by :func:`load_csv` (round-trips exactly)."""
    if label_position == "prefix":
        header = list(ds.label_names) + list(ds.feature_names)
    else:
        header = list(ds.feature_names) + list(ds.label_names)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for x, y in zip(ds.features, ds.labels):
            xs = [repr(float(v)) for v in x]
            ys = [str(int(v)) for v in y]
            writer.writerow(ys + xs if label_position == "prefix" else xs + ys)


_MARKER = re.compile(r"-C\s+(-?\d+)")
_ATTR = re.compile(r"@attribute\s+('(?:[^']|\\')*'|\"[^\"]*\"|\S+)\s+(.+)$", re.IGNORECASE)


def load_meka_arff(path) -> Dataset:
    """Read a dense, numeric MEKA-style ARFF file.

    The ``@relation`` name must carry ``-C k``; the first ``|k|`` attributes are
    taken as labels for either sign of ``k``. Label attributes must be declared
    as the nominal set ``{0,1}``; every other attribute must be numeric/real.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(str(path))
    relation = None
    attrs = []
    data_lines = []
    in_data = False
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        low = line.lower()
        if in_data:
            data_lines.append(line)
        elif low.startswith("@relation"):
            relation = line[len("@relation"):].strip()
        elif low.startswith("@attribute"):
            match = _ATTR.match(line)
            if not match:
                raise InvalidDataset(f"cannot parse attribute line: {line}")
            name = match.group(1).strip("'\"")
            attrs.append((name, match.group(2).strip()))
        elif low.startswith("@data"):
            in_data = True
    if relation is None:
        raise MissingRelationMarker("no @relation line")
    marker = _MARKER.search(relation)
    if marker is None:
        raise MissingRelationMarker(f"relation {relation!r} has no '-C k' marker")
    m = abs(int(marker.group(1)))
    if m < 1 or m >= len(attrs):
        raise LabelCountExceedsColumns(f"-C {marker.group(1)} with {len(attrs)} attributes")

    for j, (name, kind) in enumerate(attrs):
        spec = kind.lower()
        if j < m:
            values = spec.strip("{}").replace(" ", "").replace("'", "").replace('"', "")
            if not (spec.startswith("{") and set(values.split(",")) <= {"0", "1"}):
                if spec.split()[0] not in ("numeric", "real", "integer"):
                    raise UnsupportedAttributeType(name, kind)
        elif spec.split()[0] not in ("numeric", "real", "integer"):
            raise UnsupportedAttributeType(name, kind)

    values = np.empty((len(data_lines), len(attrs)), dtype=np.float64)
    for i, line in enumerate(data_lines):
        if line.startswith("{"):
            raise InvalidDataset("sparse ARFF rows are not supported")
        cells = [c.strip().strip("'\"") for c in line.split(",")]
        if len(cells) != len(attrs):
            raise InvalidDataset(f"data row {i} has {len(cells)} values, expected {len(attrs)}")
        for j, cell in enumerate(cells):
            values[i, j] = _parse_float(cell, i, j)
    for j in range(m):
        bad = np.flatnonzero((values[:, j] != 0) & (values[:, j] != 1))
        if bad.size:
            raise NonBinaryLabel(int(bad[0]), j, values[bad[0], j])
    if not data_lines:
        raise InvalidDataset(f"{path} has no data rows")
    names = [a[0] for a in attrs]
    return Dataset(values[:, m:], values[:, :m].astype(np.int8),
                   tuple(names[m:]), tuple(names[:m]))


def split_indices(n_rows: int, train_ratio: float, seed: int):
    """Seeded permutation split used by :func:`split_holdout`."""
    if not 0.0 < train_ratio < 1.0:
        raise ValueError("train_ratio must lie in (0, 1)")
    n_train = math.ceil(train_ratio * n_rows)
    if n_rows < 2 or n_train < 1 or n_rows - n_train < 1:
        raise DegenerateSplit(f"cannot split {n_rows} rows with ratio {train_ratio}")
    perm = np.random.default_rng(seed).permutation(n_rows)
    return perm[:n_train], perm[n_train:]


def split_holdout(ds: Dataset, train_ratio: float, seed: int):
    """Shuffle rows with ``seed``; the first ``ceil(ratio * S)`` form the train part."""
    train, test = split_indices(ds.n_rows, train_ratio, seed)
    return ds.take(train), ds.take(test)


def label_stats(ds: Dataset) -> LabelStats:
    Y = ds.labels
    per_label = Y.mean(axis=0)
    return LabelStats(
        cardinality=float(Y.sum(axis=1).mean()),
        # same reduction as the Hamming loss of the all-zeros predictor
        density=float(np.mean(Y != 0)),
        distinct_labelsets=len({row.tobytes() for row in Y}),
        per_label_frequency=per_label,
    )
