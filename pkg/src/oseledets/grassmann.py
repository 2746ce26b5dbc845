"""Finite-dimensional subspace geometry.

Subspaces of R^m are carried as orthonormal frames.  This module provides the
operations every splitting computation is built from: oblique projections
(onto a subspace along a complement), the local norm of a subspace relative to
a reference pair, well-conditioned bases adapted to a chosen ambient norm, and
the gap metric (sine of the largest principal angle).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import ConditioningFailure, DegenerateSum, DimensionMismatch

ORTHONORMAL_TOL = 1e-12
IDEMPOTENCE_TOL = 1e-10
DIRECT_SUM_MIN_SV = 1e-10
EQUALITY_GAP = 1e-8

NormTag = Literal["euclidean", "sup", "one"]


def _as_readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True, order="C")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Subspace:
    """A d-dimensional subspace of R^m, stored as an m-by-d orthonormal frame.

    The frame is unique only up to right rotation; equality of subspaces is
    tested through :func:`gap` (two subspaces are considered equal when their
    gap is below 1e-8).
    """

    frame: np.ndarray

    def __post_init__(self):
        frame = _as_readonly(np.atleast_2d(self.frame))
        object.__setattr__(self, "frame", frame)
        m, d = frame.shape
        if not (1 <= d <= m):
            raise DimensionMismatch(f"need 1 <= d <= m, got frame shape {frame.shape}")
        gram = frame.T @ frame
        if np.max(np.abs(gram - np.eye(d))) > ORTHONORMAL_TOL:
            raise DimensionMismatch("frame columns are not orthonormal to 1e-12")

    @property
    def m(self) -> int:
        return self.frame.shape[0]

    @property
    def d(self) -> int:
        return self.frame.shape[1]

    @classmethod
    def from_spanning(cls, vectors: np.ndarray) -> "Subspace":
        """Orthonormalize the columns of `vectors` (must have full column rank)."""
        a = np.atleast_2d(np.asarray(vectors, dtype=float))
        if a.ndim != 2:
            raise DimensionMismatch("expected a 2-d array of column vectors")
        q, r = np.linalg.qr(a)
        if np.min(np.abs(np.diag(r))) <= 1e-12 * max(1.0, np.max(np.abs(r))):
            raise DimensionMismatch("spanning set is numerically rank deficient")
        return cls(q)

    @classmethod
    def span(cls, *vectors: Sequence[float]) -> "Subspace":
        """Convenience constructor from row-listed spanning vectors."""
        return cls.from_spanning(np.array(vectors, dtype=float).T)

    @classmethod
    def full(cls, m: int) -> "Subspace":
        return cls(np.eye(m))

    def contains(self, v: np.ndarray, tol: float = 1e-10) -> bool:
        v = np.asarray(v, dtype=float)
        nv = np.linalg.norm(v)
        if nv == 0:
            return True
        resid = v - self.frame @ (self.frame.T @ v)
        return float(np.linalg.norm(resid)) <= tol * nv

    def orthogonal_complement(self) -> "Subspace":
        if self.d == self.m:
            raise DimensionMismatch("the full space has no nontrivial complement")
        u, _, _ = np.linalg.svd(self.frame, full_matrices=True)
        return Subspace(u[:, self.d:])

    def isclose(self, other: "Subspace", tol: float = EQUALITY_GAP) -> bool:
        return gap(self, other) <= tol


@dataclass(frozen=True)
class ProjectionPair:
    """An oblique projection together with its range and kernel subspaces."""

    range: Subspace
    kernel: Subspace
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_readonly(self.matrix))
        p = self.matrix
        if np.max(np.abs(p @ p - p)) > IDEMPOTENCE_TOL:
            raise DegenerateSum("projection matrix is not idempotent to 1e-10")
        if np.max(np.abs(p @ self.range.frame - self.range.frame)) > IDEMPOTENCE_TOL:
            raise DegenerateSum("projection does not fix its range frame")
        if np.max(np.abs(p @ self.kernel.frame)) > IDEMPOTENCE_TOL:
            raise DegenerateSum("projection does not kill its kernel frame")


def _min_singular(a: np.ndarray) -> float:
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def project_along(kernel: Subspace, range: Subspace) -> ProjectionPair:
    """Projection onto `range` along `kernel` (the unique idempotent with
    the given range and kernel).

    Raises
    ------
    DegenerateSum
        If the concatenated frames have smallest singular value below 1e-10,
        i.e. the two subspaces do not span the ambient space as a direct sum.
    DimensionMismatch
        If the dimensions do not add up to the ambient dimension.
    """
    if kernel.m != range.m:
        raise DimensionMismatch("ambient dimensions differ")
    m = kernel.m
    if kernel.d + range.d != m:
        raise DimensionMismatch(
            f"kernel.d + range.d = {kernel.d + range.d} != ambient dimension {m}")
    concat = np.hstack([range.frame, kernel.frame])
    if _min_singular(concat) < DIRECT_SUM_MIN_SV:
        raise DegenerateSum("sum is not direct (smallest singular value < 1e-10)")
    # Any x decomposes as range@c + kernel@d; the projection keeps range@c.
    coeffs = np.linalg.solve(concat, np.eye(m))
    matrix = range.frame @ coeffs[: range.d]
    return ProjectionPair(range=range, kernel=kernel, matrix=matrix)


def local_norm(e: Subspace, e0: Subspace, f0: Subspace) -> float:
    """Operator norm of the projection onto `f0` along `e`, restricted to `e0`.

    This is the size of `e` in the chart anchored at the reference pair
    (`e0`, `f0`); it vanishes exactly when `e == e0`.
    """
    if not (e.m == e0.m == f0.m):
        raise DimensionMismatch("ambient dimensions differ")
    m = e.m
    if e0.d + f0.d != m or e.d + f0.d != m:
        raise DimensionMismatch("reference pair does not decompose the ambient space")
    if _min_singular(np.hstack([e0.frame, f0.frame])) < DIRECT_SUM_MIN_SV:
        raise DegenerateSum("e0 + f0 is not a direct sum")
    proj = project_along(kernel=e, range=f0)  # raises DegenerateSum if e + f0 degenerate
    restricted = proj.matrix @ e0.frame
    return float(np.linalg.norm(restricted, 2))


def gap(a: Subspace, b: Subspace) -> float:
    """Sine of the largest principal angle between equal-dimensional subspaces.

    Symmetric by construction, zero iff the subspaces coincide, and a metric
    on the fixed-dimension collection.  Values are clipped to [0, 1].
    """
    if a.m != b.m:
        raise DimensionMismatch("ambient dimensions differ")
    if a.d != b.d:
        raise DimensionMismatch(f"subspace dimensions differ: {a.d} != {b.d}")
    if a.frame is b.frame or np.array_equal(a.frame, b.frame):
        return 0.0
    ra = a.frame - b.frame @ (b.frame.T @ a.frame)
    rb = b.frame - a.frame @ (a.frame.T @ b.frame)
    s = max(np.linalg.norm(ra, 2), np.linalg.norm(rb, 2))
    return float(min(1.0, max(0.0, s)))


# -- norm-adapted bases --------------------------------------------------------

def ambient_norm(x: np.ndarray, norm: NormTag) -> np.ndarray:
    """Column-wise ambient norm of the vectors in `x`."""
    if norm == "euclidean":
        return np.linalg.norm(x, axis=0)
    if norm == "sup":
        return np.max(np.abs(x), axis=0)
    if norm == "one":
        return np.sum(np.abs(x), axis=0)
    raise ValueError(f"unknown norm tag {norm!r}")


def _unit_coefficients(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((d, n))
    a /= np.linalg.norm(a, axis=0)
    return a


def _fit_quadratic_form(coeffs: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Least-squares fit of an SPD form H with a' H a ~ values^2."""
    d, n = coeffs.shape
    cols = []
    idx = []
    for i in range(d):
        cols.append(coeffs[i] ** 2)
        idx.append((i, i))
    for i in range(d):
        for j in range(i + 1, d):
            cols.append(2.0 * coeffs[i] * coeffs[j])
            idx.append((i, j))
    design = np.stack(cols, axis=1)
    sol, *_ = np.linalg.lstsq(design, values ** 2, rcond=None)
    h = np.zeros((d, d))
    for (i, j), v in zip(idx, sol):
        h[i, j] = v
        h[j, i] = v
    # Clamp to SPD; the fit may dip for very anisotropic samples.
    w, v = np.linalg.eigh(h)
    w = np.maximum(w, 1e-12 * max(np.max(w), 1e-300))
    return (v * w) @ v.T


def conditioned_basis(
    e: Subspace,
    norm: NormTag = "euclidean",
    n_samples: int = 10_000,
    max_rounds: int = 8,
    seed: int = 0,
) -> list[np.ndarray]:
    """Basis e_1..e_d of `e` with ||a||_2 <= ||sum a_i e_i|| <= 4 sqrt(d) ||a||_2.

    The ambient norm is selected by `norm`.  Construction fits an ellipsoid to
    the restricted norm on sampled coefficient spheres (John-ellipsoid style),
    changes basis to round the norm, and rescales so the sampled lower bound
    clears 1.  The sandwich is then re-verified on a fresh sample.

    Raises
    ------
    ConditioningFailure
        If the sampled sandwich is still violated after `max_rounds`
        refinement rounds.
    """
    rng = np.random.default_rng(seed)
    d = e.d
    basis = np.array(e.frame, copy=True)
    upper = 4.0 * np.sqrt(d)
    for _ in range(max_rounds):
        coeffs = _unit_coefficients(d, n_samples, rng)
        vals = ambient_norm(basis @ coeffs, norm)
        lo, hi = float(np.min(vals)), float(np.max(vals))
        if lo <= 0.0:
            raise ConditioningFailure("restricted norm vanished on a sample")
        # Rescale so sampled values sit in [1.05, ...]; the margin guards
        # fresh-sample dips below the sampled minimum and costs little of the
        # 4 sqrt(d) budget after the ellipsoid rounding.
        scale = 1.05 / lo
        if hi * scale <= upper:
            candidate = basis * scale
            check = ambient_norm(candidate @ _unit_coefficients(d, n_samples, rng), norm)
            if np.min(check) >= 1.0 and np.max(check) <= upper:
                return [candidate[:, i] for i in range(d)]
        h = _fit_quadratic_form(coeffs, vals)
        w, v = np.linalg.eigh(h)
        basis = basis @ (v / np.sqrt(w)) @ v.T
    raise ConditioningFailure(
        f"no basis met the sandwich after {max_rounds} refinement rounds")
