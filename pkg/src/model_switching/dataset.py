"""
Synthetic binary-classification data.

The generator places Gaussian clusters on vertices of a hypercube, in the
manner of the familiar ``make_classification`` routine but fully defined
here:

    centroids  ⊂ {−class_sep, +class_sep}^n_informative   (distinct vertices)
    informative coordinates = centroid + N(0, I)
    redundant features      = informative @ B,  B ~ U[−1, 1]
    remaining features      ~ N(0, 1)

Columns are laid out as [informative | redundant | noise] and rows are
shuffled. The distribution (centroids and B) depends only on ``seed``;
the sampled rows depend on ``(seed, draw)``, so a larger ``n_samples`` with a
new ``draw`` grows a dataset without changing its distribution.
"""

import math
import re
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from .errors import DatasetParseError, InvalidArgumentError
from .matrix import Labels, Matrix, as_labels, as_matrix
from .rng import SeededRng, rng_from_seed

PathLike = Union[str, Path]


@dataclass(frozen=True)
class DatasetSpec:
    """
    Full generator configuration.

    :param n_samples: Number of rows.
    :param n_features: Total number of columns.
    :param n_informative: Columns carrying the cluster signal.
    :param n_redundant: Random linear combinations of the informative columns.
    :param n_clusters_per_class: Gaussian clusters per class.
    :param class_sep: Half-side of the hypercube holding the centroids.
    :param seed: Fixes the distribution and, with ``draw``, the rows.
    :param draw: Which sample of the distribution to take.
    """

    n_samples: int
    n_features: int
    n_informative: int
    n_redundant: int = 0
    n_clusters_per_class: int = 1
    class_sep: float = 1.0
    seed: int = 42
    draw: int = 0

    def __post_init__(self):
        for name in ("n_samples", "n_features", "n_informative", "n_redundant",
                     "n_clusters_per_class", "draw"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidArgumentError(f"{name} must be an integer, got {value!r}")
        if self.n_informative < 1:
            raise InvalidArgumentError("constraint n_informative >= 1 violated")
        if self.n_redundant < 0 or self.draw < 0:
            raise InvalidArgumentError("n_redundant and draw must be non-negative")
        if self.n_clusters_per_class < 1:
            raise InvalidArgumentError("constraint n_clusters_per_class >= 1 violated")
        if self.n_informative + self.n_redundant > self.n_features:
            raise InvalidArgumentError(
                "constraint n_informative + n_redundant <= n_features violated "
                f"({self.n_informative} + {self.n_redundant} > {self.n_features})"
            )
        if self.n_samples < 2 * self.n_clusters_per_class:
            raise InvalidArgumentError(
                "constraint n_samples >= 2 * n_clusters_per_class violated "
                f"({self.n_samples} < {2 * self.n_clusters_per_class})"
            )
        if 2 * self.n_clusters_per_class > 2 ** self.n_informative:
            raise InvalidArgumentError(
                "constraint 2 * n_clusters_per_class <= 2^n_informative violated "
                f"({2 * self.n_clusters_per_class} > {2 ** self.n_informative})"
            )
        if not (math.isfinite(self.class_sep) and self.class_sep > 0):
            raise InvalidArgumentError(
                f"constraint class_sep > 0 violated (got {self.class_sep})"
            )
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidArgumentError(f"seed must be in [0, 2^64), got {self.seed}")

    @property
    def n_clusters(self) -> int:
        return 2 * self.n_clusters_per_class

    @property
    def informative_columns(self) -> range:
        return range(0, self.n_informative)

    @property
    def redundant_columns(self) -> range:
        return range(self.n_informative, self.n_informative + self.n_redundant)

    @property
    def noise_columns(self) -> range:
        return range(self.n_informative + self.n_redundant, self.n_features)

    def grown(self, n_samples: int, draw: int) -> "DatasetSpec":
        """Same distribution, a different (usually larger) sample."""
        return replace(self, n_samples=n_samples, draw=draw)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class NoiseSpec:
    """
    Corruption applied by :func:`add_noise`.

    :param level: Label-flip probability and jitter scale, in [0, 1].
    :param flip_labels: Flip each label with probability ``level``.
    :param jitter_features: Add N(0, (level * column std)^2) to every entry.
    """

    level: float
    flip_labels: bool = True
    jitter_features: bool = True

    def __post_init__(self):
        if not (isinstance(self.level, (int, float)) and 0.0 <= self.level <= 1.0):
            raise InvalidArgumentError(
                f"noise level must be in [0, 1], got {self.level}"
            )

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    A feature matrix with binary labels.

    :param x: ``n_samples x n_features`` finite matrix.
    :param y: Labels in {0, 1}, one per row.
    :param spec: Generator configuration, when the data was generated.
    """

    x: Matrix
    y: Labels
    spec: Optional[DatasetSpec] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "x", as_matrix(self.x))
        object.__setattr__(self, "y", as_labels(self.y))
        if self.x.shape[0] != self.y.shape[0]:
            raise InvalidArgumentError(
                f"x has {self.x.shape[0]} rows but y has {self.y.shape[0]} labels"
            )

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)

    def __len__(self):
        return self.x.shape[0]

    @property
    def n_samples(self) -> int:
        return self.x.shape[0]

    @property
    def n_features(self) -> int:
        return self.x.shape[1]

    def class_counts(self) -> Tuple[int, int]:
        """Number of rows labelled 0 and 1."""
        ones = int(self.y.sum())
        return self.n_samples - ones, ones

    def subset(self, rows) -> "Dataset":
        """Rows ``rows`` of this dataset, in the given order."""
        rows = np.asarray(rows, dtype=np.intp)
        return Dataset(self.x[rows], self.y[rows], self.spec)


def _cluster_vertices(spec: DatasetSpec, rng: SeededRng) -> np.ndarray:
    vertices = []
    seen = set()
    while len(vertices) < spec.n_clusters:
        bits = tuple(rng.next_below(2) for _ in range(spec.n_informative))
        if bits in seen:
            continue
        seen.add(bits)
        vertices.append(bits)
    signs = np.array(vertices, dtype=np.float64) * 2.0 - 1.0
    return signs * spec.class_sep


def cluster_centroids(spec: DatasetSpec) -> np.ndarray:
    """
    Centroids of the clusters of ``spec``, one row per cluster.

    Cluster ``i`` belongs to class ``i % 2``.
    """
    return _cluster_vertices(spec, rng_from_seed(spec.seed).split("structure"))


def generate(spec: DatasetSpec) -> Dataset:
    """
    Generate the dataset described by ``spec``.

    The result is a pure function of ``spec``.
    """
    structure = rng_from_seed(spec.seed).split("structure")
    samples = rng_from_seed(spec.seed).split(f"samples/{spec.draw}")

    centroids = _cluster_vertices(spec, structure)
    coefficients = structure.uniforms(spec.n_informative * spec.n_redundant)
    coefficients = (coefficients * 2.0 - 1.0).reshape(
        spec.n_informative, spec.n_redundant
    )

    n, k = spec.n_samples, spec.n_informative
    n_clusters = spec.n_clusters
    sizes = [
        n // n_clusters + (1 if i < n % n_clusters else 0) for i in range(n_clusters)
    ]
    cluster_of_row = np.repeat(np.arange(n_clusters), sizes)
    labels = cluster_of_row % 2

    informative = samples.normals(n * k).reshape(n, k) + centroids[cluster_of_row]

    # fixed summation order keeps the redundant columns bit-reproducible
    redundant = np.zeros((n, spec.n_redundant))
    for j in range(k):
        redundant += informative[:, j:j + 1] * coefficients[j]

    n_noise = len(spec.noise_columns)
    noise = samples.normals(n * n_noise).reshape(n, n_noise)

    x = np.hstack([informative, redundant, noise])
    order = samples.permutation(n)
    return Dataset(x[order], labels[order], spec)


def add_noise(data: Dataset, noise: NoiseSpec, rng: SeededRng) -> Dataset:
    """
    Return a corrupted copy of ``data``; ``data`` itself is untouched.

    Labels are flipped first (one uniform draw per row), then every entry of
    column j receives N(0, (level * std_j)^2) jitter, std_j being the column's
    sample standard deviation.
    """
    if noise.level == 0:
        return Dataset(data.x.copy(), data.y.copy(), data.spec)

    x = data.x.copy()
    y = data.y.copy()
    n, d = x.shape
    if noise.flip_labels:
        flips = rng.uniforms(n) < noise.level
        y[flips] = 1 - y[flips]
    if noise.jitter_features:
        sigma = x.std(axis=0, ddof=1) if n > 1 else np.zeros(d)
        x = x + rng.normals(n * d).reshape(n, d) * (noise.level * sigma)
    return Dataset(x, y, data.spec)


def split_indices(
    y: Labels, val_fraction: float, rng: SeededRng
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Stratified partition of row indices into (train, validation).

    Each class contributes ``round_half_up(count * val_fraction)`` rows to the
    validation part. Both index arrays are sorted.
    """
    if not 0.0 < val_fraction < 1.0:
        raise InvalidArgumentError(
            f"val_fraction must be in (0, 1), got {val_fraction}"
        )
    train_parts, val_parts = [], []
    for label in (0, 1):
        rows = np.flatnonzero(np.asarray(y) == label)
        n_val = int(math.floor(rows.size * val_fraction + 0.5))
        shuffled = rows[rng.permutation(rows.size)]
        val_parts.append(shuffled[:n_val])
        train_parts.append(shuffled[n_val:])
    train = np.sort(np.concatenate(train_parts))
    val = np.sort(np.concatenate(val_parts))
    if train.size == 0 or val.size == 0:
        raise InvalidArgumentError(
            f"val_fraction {val_fraction} leaves an empty "
            f"{'training' if train.size == 0 else 'validation'} part"
        )
    return train, val


def train_val_split(
    data: Dataset, val_fraction: float, rng: SeededRng
) -> Tuple[Dataset, Dataset]:
    """Stratified (train, validation) split of ``data``."""
    train, val = split_indices(data.y, val_fraction, rng)
    return data.subset(train), data.subset(val)


def _header(n_features: int):
    return [f"f{j}" for j in range(n_features)] + ["label"]


def write_csv(data: Dataset, path: PathLike) -> None:
    """
    Write ``data`` as UTF-8 CSV with header ``f0,...,f{d-1},label``.

    Floats are written with 17 significant digits so reading them back is
    exact.
    """
    frame = pd.DataFrame(data.x, columns=_header(data.n_features)[:-1])
    frame["label"] = data.y
    frame.to_csv(
        path, index=False, float_format="%.17g", lineterminator="\n", encoding="utf-8"
    )


_DECIMAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def _cell_problem(cell: str) -> Optional[str]:
    if not _DECIMAL.fullmatch(cell):
        return f"not a number: {cell!r}"
    if not math.isfinite(float(cell)):
        return f"non-finite value: {cell!r}"
    return None


def _first_bad_row(cells: np.ndarray) -> Tuple[int, str]:
    """First faulty row of ``cells`` (features then label) and what is wrong."""
    for row, values in enumerate(cells):
        if any(cell == "" for cell in values):
            return row, f"ragged row: expected {len(values)} non-empty fields"
        if values[-1] not in ("0", "1"):
            return row, f"label must be 0 or 1, got {values[-1]!r}"
        for cell in values[:-1]:
            problem = _cell_problem(cell)
            if problem:
                return row, problem
    return -1, ""


def read_csv(path: PathLike) -> Dataset:
    """
    Read a dataset written by :func:`write_csv`.

    :raises DatasetParseError: On a missing header, ragged rows,
        features that are not finite plain decimal numbers, or labels other
        than 0/1; the error carries the offending line number.
    """
    try:
        frame = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            na_filter=False,
            skip_blank_lines=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError as exc:
        raise DatasetParseError("no header", line=1) from exc
    except pd.errors.ParserError as exc:
        match = re.search(r"line (\d+)", str(exc))
        line = int(match.group(1)) if match else None
        raise DatasetParseError(f"ragged row: {exc}", line=line) from exc
    except UnicodeDecodeError as exc:
        raise DatasetParseError(f"not UTF-8 text: {exc}") from exc

    columns = list(frame.columns)
    if len(columns) < 2 or columns != _header(len(columns) - 1):
        raise DatasetParseError(
            f"header must be f0,...,f{{d-1}},label; got {','.join(map(str, columns))}",
            line=1,
        )
    if frame.shape[0] == 0:
        raise DatasetParseError("no data rows", line=2)

    cells = frame.to_numpy(dtype=object)
    bad_row, reason = _first_bad_row(cells)
    if bad_row >= 0:
        raise DatasetParseError(reason, line=bad_row + 2)

    x = cells[:, :-1].astype(np.float64)
    y = (cells[:, -1] == "1").astype(np.int64)
    return Dataset(x, y)
