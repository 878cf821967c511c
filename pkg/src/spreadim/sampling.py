"""Seeded samplers for the synthetic shapes used in validation.

All randomness comes from a counter-based generator: every variate is a pure
function of (seed, stream, point index, coordinate index), hashed through a
splitmix64-style finaliser. Samples are therefore reproducible, independent
of evaluation order, and safe to generate in parallel. The exact mixing
chain is fixed; changing it would silently change every seeded dataset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MULT_A = np.uint64(0xBF58476D1CE4E5B9)
_MULT_B = np.uint64(0x94D049BB133111EB)

# variate streams: keeps independent draws at the same (point, coord) counter
STREAM_UNIFORM = 0
STREAM_GAUSS_A = 1
STREAM_GAUSS_B = 2

_TWO_PI = 2.0 * np.pi


def _mix(h: np.ndarray) -> np.ndarray:
    h = (h + _GAMMA) & _MASK
    h = ((h ^ (h >> np.uint64(30))) * _MULT_A) & _MASK
    h = ((h ^ (h >> np.uint64(27))) * _MULT_B) & _MASK
    return h ^ (h >> np.uint64(31))


def _hash_counters(seed: int, stream: int, point, coord) -> np.ndarray:
    """64-bit hash of (seed, stream, point index, coordinate index), vectorised."""
    seed_u = np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF)
    with np.errstate(over="ignore"):
        h = _mix(np.atleast_1d(np.asarray(seed_u)))
        h = _mix(h ^ np.uint64(stream))
        h = _mix(h ^ np.asarray(point, dtype=np.uint64))
        h = _mix(h ^ np.asarray(coord, dtype=np.uint64))
    return h


def counter_uniform(seed: int, stream: int, point, coord) -> np.ndarray:
    """Deterministic uniforms in [0, 1) keyed by (seed, stream, point, coord)."""
    h = _hash_counters(seed, stream, point, coord)
    return (h >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def counter_normal(seed: int, point, coord) -> np.ndarray:
    """Deterministic standard normals via Box-Muller on two uniform streams."""
    u1 = counter_uniform(seed, STREAM_GAUSS_A, point, coord)
    u2 = counter_uniform(seed, STREAM_GAUSS_B, point, coord)
    # 1 - u1 lies in (0, 1], so the log never sees zero
    r = np.sqrt(-2.0 * np.log1p(-u1))
    return r * np.cos(_TWO_PI * u2)


def _child_seed(seed: int, salt: int) -> int:
    return int(_hash_counters(seed, 255, salt, 0)[0])


def _index_grid(count: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    points = np.arange(count, dtype=np.uint64)[:, None]
    coords = np.arange(width, dtype=np.uint64)[None, :]
    return points, coords


def _check_count(count: int) -> int:
    if count < 1:
        raise ValidationError(f"sample count must be >= 1, got {count}")
    return int(count)


def circle_angles(count: int, seed: int) -> np.ndarray:
    """Uniform angles on [0, 2*pi), one per point index."""
    count = _check_count(count)
    i, j = _index_grid(count, 1)
    return (counter_uniform(seed, STREAM_UNIFORM, i, j) * _TWO_PI).reshape(-1)


def sample_circle(count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Points uniform on the unit circle; returns (points, angles)."""
    angles = circle_angles(count, seed)
    points = np.column_stack([np.cos(angles), np.sin(angles)])
    return points, angles


def sample_sphere(dim: int, count: int, seed: int) -> np.ndarray:
    """Uniform points on the unit dim-sphere: normalised standard normals in R^(dim+1)."""
    if dim < 1:
        raise ValidationError(f"sphere dimension must be >= 1, got {dim}")
    count = _check_count(count)
    i, j = _index_grid(count, dim + 1)
    g = counter_normal(seed, i, j)
    norms = np.sqrt((g * g).sum(axis=1, keepdims=True))
    if (norms == 0.0).any():
        raise ValidationError("degenerate zero-norm draw; use a different seed")
    return g / norms


def sample_cube(dim: int, count: int, seed: int) -> np.ndarray:
    """Uniform points in the unit cube [0, 1]^dim."""
    if dim < 1:
        raise ValidationError(f"cube dimension must be >= 1, got {dim}")
    count = _check_count(count)
    i, j = _index_grid(count, dim)
    return counter_uniform(seed, STREAM_UNIFORM, i, j)


def sample_noisy_plane(
    intrinsic_dim: int, ambient_dim: int, count: int, seed: int, noise: float = 0.05
) -> np.ndarray:
    """Uniform patch on a coordinate hyperplane plus isotropic normal noise.

    The patch is [0, 1]^intrinsic_dim embedded in the first coordinates of
    R^ambient_dim; noise of scale ``noise`` is added to every coordinate.
    """
    if intrinsic_dim < 1:
        raise ValidationError(f"intrinsic dimension must be >= 1, got {intrinsic_dim}")
    if not intrinsic_dim < ambient_dim:
        raise ValidationError(
            f"need intrinsic_dim < ambient_dim, got {intrinsic_dim} >= {ambient_dim}"
        )
    if noise < 0.0:
        raise ValidationError(f"noise scale must be >= 0, got {noise!r}")
    count = _check_count(count)
    points = np.zeros((count, ambient_dim), dtype=np.float64)
    i, j = _index_grid(count, intrinsic_dim)
    points[:, :intrinsic_dim] = counter_uniform(seed, STREAM_UNIFORM, i, j)
    if noise > 0.0:
        i, j = _index_grid(count, ambient_dim)
        points += noise * counter_normal(seed, i, j)
    return points


@dataclass(frozen=True)
class SampleSpec:
    """Declarative description of a synthetic sample.

    ``shape`` is one of circle, sphere, cube, noisy_plane, product. ``dim``
    is the sphere/cube dimension or the intrinsic dimension of a noisy
    plane; ``ambient_dim`` and ``noise`` apply to noisy planes only; product
    shapes concatenate the coordinates of two independent sub-samples drawn
    with seeds derived from this spec's seed.
    """

    shape: str
    count: int
    seed: int
    dim: int = 1
    ambient_dim: Optional[int] = None
    noise: float = 0.05
    left: Optional["SampleSpec"] = None
    right: Optional["SampleSpec"] = None


def sample(spec: SampleSpec) -> np.ndarray:
    """Draw the point cloud described by ``spec`` (angles via sample_circle)."""
    if spec.shape == "circle":
        return sample_circle(spec.count, spec.seed)[0]
    if spec.shape == "sphere":
        return sample_sphere(spec.dim, spec.count, spec.seed)
    if spec.shape == "cube":
        return sample_cube(spec.dim, spec.count, spec.seed)
    if spec.shape == "noisy_plane":
        ambient = spec.ambient_dim if spec.ambient_dim is not None else spec.dim + 1
        return sample_noisy_plane(spec.dim, ambient, spec.count, spec.seed, spec.noise)
    if spec.shape == "product":
        if spec.left is None or spec.right is None:
            raise ValidationError("product spec needs both left and right sub-specs")
        left = sample(
            _respec(spec.left, count=spec.count, seed=_child_seed(spec.seed, 1))
        )
        right = sample(
            _respec(spec.right, count=spec.count, seed=_child_seed(spec.seed, 2))
        )
        return np.hstack([left, right])
    raise ValidationError(f"unknown shape {spec.shape!r}")


def _respec(spec: SampleSpec, count: int, seed: int) -> SampleSpec:
    return SampleSpec(
        shape=spec.shape,
        count=count,
        seed=seed,
        dim=spec.dim,
        ambient_dim=spec.ambient_dim,
        noise=spec.noise,
        left=spec.left,
        right=spec.right,
    )


__all__ = [
    "SampleSpec",
    "circle_angles",
    "counter_normal",
    "counter_uniform",
    "sample",
    "sample_circle",
    "sample_cube",
    "sample_noisy_plane",
    "sample_sphere",
]
