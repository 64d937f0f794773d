"""Dataset loading, normalization and stratified fold assignment."""

from __future__ import annotations

import csv
import hashlib
import io
import logging
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

MISSING_TOKENS = frozenset({"", "?", "na", "nan", "null"})

BUNDLED = {
    "breastcancer": "breastcancer.csv",
    "zoo": "zoo.csv",
    "wine": "wine.csv",
    "wineew": "wine.csv",
    "ionosphere": "ionosphere.csv",
    "ionosphereew": "ionosphere.csv",
    "penglungew": "penglungew.csv",
}


class DataFormatError(ValueError):
    """A CSV cell could not be parsed; ``row`` and ``column`` are 1-based."""

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


@dataclass(frozen=True)
class Dataset:
    name: str
    X: np.ndarray
    y: np.ndarray
    classes: tuple[str, ...]
    feature_names: tuple[str, ...]
    col_min: np.ndarray
    col_max: np.ndarray
    normalized: bool = False
    checksum: str = ""
    rejected_rows: tuple[int, ...] = field(default=())

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def n_instances(self) -> int:
        return self.X.shape[0]

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def summary(self) -> dict:
        return {
            "name": self.name,
            "features": self.n_features,
            "instances": self.n_instances,
            "classes": self.n_classes,
            "sha256": self.checksum,
            "rejected_rows": len(self.rejected_rows),
        }


def bundled_path(name: str) -> Path:
    """Path of a dataset shipped with the package (breastcancer, zoo, wine, ...)."""
    key = name.lower().removesuffix(".csv")
    if key not in BUNDLED:
        raise KeyError(f"no bundled dataset {name!r}; available: {', '.join(sorted(BUNDLED))}")
    return Path(str(resources.files("ecwsa") / "datasets" / BUNDLED[key]))


def load_bundled(name: str, normalize: bool = True) -> Dataset:
    ds = load_csv(bundled_path(name), name=name.lower())
    return min_max_normalize(ds) if normalize else ds


def _resolve_label(label_col, header: list[str] | None, width: int) -> int:
    if isinstance(label_col, str) and not label_col.lstrip("-").isdigit():
        if header is None:
            raise ValueError(f"label column {label_col!r} given by name but the file has no header")
        if label_col not in header:
            raise ValueError(f"label column {label_col!r} not in header {header}")
        return header.index(label_col)
    idx = int(label_col)
    if not -width <= idx < width:
        raise ValueError(f"label column index {idx} out of range for {width} columns")
    return idx % width


def load_csv(path, header: bool = False, label_col: int | str = -1, name: str | None = None) -> Dataset:
    """Read a numeric CSV with one instance per row.

    Labels are encoded by order of first appearance. Rows containing a missing
    cell (empty, ``?``, ``NA``...) are rejected and their 1-based row numbers
    kept in ``rejected_rows``; any other non-numeric feature cell raises
    :class:`DataFormatError`.
    """
    path = Path(path)
    raw = path.read_bytes()
    text = raw.decode("utf-8-sig")
    rows = [r for r in csv.reader(io.StringIO(text, newline="")) if r and any(c.strip() for c in r)]
    if not rows:
        raise DataFormatError(f"{path}: no data rows")

    header_row = None
    first_row_no = 1
    if header:
        header_row = [c.strip() for c in rows[0]]
        rows = rows[1:]
        first_row_no = 2
    width = len(header_row) if header_row else len(rows[0])
    if width < 2:
        raise DataFormatError(f"{path}: need at least one feature column and a label column")
    label_idx = _resolve_label(label_col, header_row, width)

    features, labels, rejected = [], [], []
    for offset, row in enumerate(rows):
        row_no = first_row_no + offset
        if len(row) != width:
            raise DataFormatError(f"{path}: row {row_no} has {len(row)} cells, expected {width}", row=row_no)
        values = []
        missing = False
        for col, cell in enumerate(row):
            if col == label_idx:
                continue
            cell = cell.strip()
            if cell.lower() in MISSING_TOKENS:
                missing = True
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise DataFormatError(
                    f"{path}: non-numeric value {cell!r} at row {row_no}, column {col + 1}",
                    row=row_no,
                    column=col + 1,
                ) from None
        label = row[label_idx].strip()
        if missing or label.lower() in MISSING_TOKENS:
            rejected.append(row_no)
            continue
        features.append(values)
        labels.append(label)

    if rejected:
        log.warning("%s: rejected %d rows with missing values", path, len(rejected))
    if not features:
        raise DataFormatError(f"{path}: no complete rows")

    classes: dict[str, int] = {}
    y = np.array([classes.setdefault(lab, len(classes)) for lab in labels], dtype=np.int64)
    if len(classes) < 2:
        raise ValueError(f"{path}: dataset has a single class")
    X = np.array(features, dtype=float)
    if header_row:
        names = tuple(h for i, h in enumerate(header_row) if i != label_idx)
    else:
        names = tuple(f"f{i}" for i in range(X.shape[1]))
    return Dataset(
        name=name or path.stem,
        X=X,
        y=y,
        classes=tuple(classes),
        feature_names=names,
        col_min=X.min(axis=0),
        col_max=X.max(axis=0),
        checksum=hashlib.sha256(raw).hexdigest(),
        rejected_rows=tuple(rejected),
    )


def min_max_normalize(dataset: Dataset) -> Dataset:
    """Map each column onto [0, 1]; constant columns become all zeros."""
    X = dataset.X
    lo, hi = X.min(axis=0), X.max(axis=0)
    span = hi - lo
    safe = np.where(span > 0, span, 1.0)
    Z = np.where(span > 0, (X - lo) / safe, 0.0)
    return replace(dataset, X=np.clip(Z, 0.0, 1.0), col_min=lo, col_max=hi, normalized=True)


def stratified_folds(y, folds: int, seed: int) -> np.ndarray:
    """Per-instance fold index in ``[0, folds)``, stratified by class.

    Within each class the instances are shuffled and dealt round-robin; the
    dealing position carries over between classes so fold sizes also differ
    by at most one.
    """
    y = np.asarray(y)
    if folds < 2:
        raise ValueError("folds must be >= 2")
    if folds > y.size:
        raise ValueError(f"{folds} folds requested for {y.size} instances")
    rng = np.random.default_rng(np.random.SeedSequence(int(seed) % 2**64, spawn_key=(0xF01D,)))
    out = np.empty(y.size, dtype=np.int64)
    cursor = 0
    for c in np.unique(y):
        idx = np.flatnonzero(y == c)
        idx = idx[rng.permutation(idx.size)]
        out[idx] = (cursor + np.arange(idx.size)) % folds
        cursor = (cursor + idx.size) % folds
    return out
