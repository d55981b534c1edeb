"""Seeded matrix datasets and unit-sphere point clouds.

Randomness comes from a counter-based Philox stream keyed by the seed; each
item (matrix or surface point) owns a fixed, index-derived block of the
counter, so generation is order-independent and regeneration from the same
(seed, parameters) is bit-identical.  Uniform doubles are built from the top
53 bits of each 64-bit word as (r >> 11 + 0.5) * 2^-53, and Gaussian entries
use the inverse-transform method (normal quantile of the uniforms).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.random import Philox
from scipy.special import ndtri

from .errors import EmptyCloud, InvalidInput
from .linalg import SingularMatrix, inverse

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Gaussian:
    mean: float
    std: float

    def __str__(self) -> str:
        return f"gaussian:{self.mean!r}:{self.std!r}"


@dataclass(frozen=True)
class Uniform:
    low: float
    high: float

    def __str__(self) -> str:
        return f"uniform:{self.low!r}:{self.high!r}"


def parse_descriptor(text: str) -> Gaussian | Uniform:
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidInput(f"cannot parse distribution {text!r}")
    kind, a, b = parts
    try:
        x, y = float(a), float(b)
    except ValueError as exc:
        raise InvalidInput(f"cannot parse distribution {text!r}") from exc
    if kind == "gaussian":
        return Gaussian(x, y)
    if kind == "uniform":
        return Uniform(x, y)
    raise InvalidInput(f"unknown distribution kind {kind!r}")


@dataclass(frozen=True)
class MatrixSet:
    matrices: np.ndarray  # (count, rows, cols)
    seed: int
    descriptor: Gaussian | Uniform

    @property
    def count(self) -> int:
        return self.matrices.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrices.shape[1], self.matrices.shape[2]


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray  # (count, dim)
    source: str         # original | inverse | torus
    seed: int | None = None
    skipped: tuple[int, ...] = field(default_factory=tuple)

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _uniforms(seed: int, count: int, per_item: int) -> np.ndarray:
    """(count, per_item) uniforms in (0, 1); item i starts at its own
    4-aligned counter block so parallel or partial generation would agree."""
    words = -(-per_item // 4) * 4
    bg = Philox(key=seed)
    raw = bg.random_raw(count * words).reshape(count, words)[:, :per_item]
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def generate_matrices(count, rows, cols, descriptor, seed=0) -> MatrixSet:
    if count < 1:
        raise InvalidInput(f"count must be >= 1, got {count}")
    if rows < 1 or cols < 1:
        raise InvalidInput(f"bad shape {rows}x{cols}")
    if isinstance(descriptor, Gaussian):
        if not descriptor.std > 0.0:
            raise InvalidInput(f"gaussian std must be > 0, got {descriptor.std}")
    elif isinstance(descriptor, Uniform):
        if not descriptor.low < descriptor.high:
            raise InvalidInput(
                f"uniform needs low < high, got [{descriptor.low}, {descriptor.high}]"
            )
    else:
        raise InvalidInput(f"unknown descriptor {descriptor!r}")

    u = _uniforms(int(seed), int(count), int(rows) * int(cols))
    if isinstance(descriptor, Gaussian):
        entries = descriptor.mean + descriptor.std * ndtri(u)
    else:
        entries = descriptor.low + (descriptor.high - descriptor.low) * u
    return MatrixSet(
        matrices=entries.reshape(count, rows, cols),
        seed=int(seed),
        descriptor=descriptor,
    )


def _normalize_rows(flat: np.ndarray, source: str, seed) -> PointCloud:
    norms = np.linalg.norm(flat, axis=1)
    keep = norms > 0.0
    skipped = tuple(np.nonzero(~keep)[0].tolist())
    if not np.any(keep):
        raise EmptyCloud("all members degenerate, no points left")
    points = flat[keep] / norms[keep, None]
    return PointCloud(points=points, source=source, seed=seed, skipped=skipped)


def flatten_normalize(mset: MatrixSet) -> PointCloud:
    """Row-major flatten each matrix, scale to unit Euclidean norm.

    Zero matrices cannot be normalized; they are skipped and their indices
    recorded on the cloud.
    """
    flat = mset.matrices.reshape(mset.count, -1)
    return _normalize_rows(flat, "original", mset.seed)


def inverse_cloud(mset: MatrixSet) -> PointCloud:
    """Cloud of the normalized flattened inverses; singular members skipped."""
    rows, cols = mset.shape
    if rows != cols:
        raise InvalidInput("inverse cloud needs square matrices")
    flat = []
    skipped = []
    for i in range(mset.count):
        try:
            flat.append(inverse(mset.matrices[i]).reshape(-1))
        except SingularMatrix:
            skipped.append(i)
    if not flat:
        raise EmptyCloud("every matrix in the set is singular")
    cloud = _normalize_rows(np.array(flat), "inverse", mset.seed)
    merged = tuple(sorted(set(skipped) | set(cloud.skipped)))
    return PointCloud(cloud.points, "inverse", mset.seed, merged)


def sample_torus(count, major, minor, seed=0) -> PointCloud:
    """Points on the torus (sqrt(x^2+y^2) - major)^2 + z^2 = minor^2.

    Both angles are uniform on [0, 2*pi); the sampling is angle-uniform, not
    area-uniform.
    """
    if count < 1:
        raise InvalidInput(f"count must be >= 1, got {count}")
    if not (major > minor > 0.0):
        raise InvalidInput(f"need major > minor > 0, got {major}, {minor}")
    angles = TWO_PI * _uniforms(int(seed), int(count), 2)
    u, v = angles[:, 0], angles[:, 1]
    ring = major + minor * np.cos(v)
    points = np.column_stack((ring * np.cos(u), ring * np.sin(u), minor * np.sin(v)))
    return PointCloud(points=points, source="torus", seed=int(seed))


def write_cloud(cloud: PointCloud, path) -> None:
    seed = "none" if cloud.seed is None else cloud.seed
    lines = [f"# dim={cloud.dim} count={cloud.points.shape[0]} source={cloud.source} seed={seed}"]
    for row in cloud.points:
        lines.append(",".join(repr(x) for x in row.tolist()))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_cloud(path) -> PointCloud:
    meta = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    if "=" in token:
                        k, v = token.split("=", 1)
                        meta[k] = v
                continue
            rows.append([float(x) for x in line.split(",")])
    if not rows:
        raise InvalidInput(f"no points in {path}")
    seed = meta.get("seed", "none")
    return PointCloud(
        points=np.array(rows),
        source=meta.get("source", "original"),
        seed=None if seed == "none" else int(seed),
    )
