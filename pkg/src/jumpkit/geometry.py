"""Monomial maps, anisotropic quasi-norms, and boundary shell measures.

A monomial map sends y in R^k to the tuple (y^gamma) over a fixed set of
multi-indices gamma. The matching dilation scales the gamma coordinate of a
frequency vector by t^|gamma|, and the quasi-norm

    q(xi) = max_gamma |xi_gamma|^(1/|gamma|)

is exactly 1-homogeneous under that dilation, which the tests pin down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .bodies import ConvexBodySpec
from .errors import InvalidArgumentError


def _as_points(x, dim: int) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        if dim != 1:
            raise InvalidArgumentError("scalar input only valid when dim == 1")
        return arr.reshape(1, 1)
    if arr.ndim == 1:
        if dim == 1:
            return arr.reshape(-1, 1)
        if arr.shape[0] == dim:
            return arr.reshape(1, dim)
        raise InvalidArgumentError("vector does not match dimension")
    if arr.ndim == 2 and arr.shape[1] == dim:
        return arr
    raise InvalidArgumentError(f"points must have shape (n, {dim})")


@dataclass(frozen=True)
class MonomialMap:
    """Finite set of multi-indices over R^k and the map y -> (y^gamma)."""

    exponents: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        exps = self.exponents
        if not exps:
            raise InvalidArgumentError("need at least one multi-index")
        k = len(exps[0])
        if k < 1:
            raise InvalidArgumentError("multi-indices need at least one variable")
        for g in exps:
            if len(g) != k:
                raise InvalidArgumentError("multi-indices must share arity")
            if any(e < 0 or e != int(e) for e in g):
                raise InvalidArgumentError("multi-index entries must be integers >= 0")
            if sum(g) < 1:
                raise InvalidArgumentError("the zero multi-index is not allowed")
        if len(set(exps)) != len(exps):
            raise InvalidArgumentError("multi-indices must be distinct")
        canonical = tuple(sorted(exps, key=lambda g: (sum(g), g)))
        if canonical != exps:
            raise InvalidArgumentError(
                "multi-indices must be sorted by (degree, lexicographic)"
            )

    @property
    def base_dim(self) -> int:
        return len(self.exponents[0])

    @property
    def ambient_dim(self) -> int:
        return len(self.exponents)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sum(g) for g in self.exponents)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @staticmethod
    def moment_curve(max_degree: int) -> "MonomialMap":
        """y -> (y, y^2, ..., y^max_degree) on one variable."""
        if max_degree < 1:
            raise InvalidArgumentError("max_degree must be >= 1")
        return MonomialMap(tuple((j,) for j in range(1, max_degree + 1)))

    @staticmethod
    def full(base_dim: int, max_degree: int) -> "MonomialMap":
        """All multi-indices over base_dim variables with 1 <= degree <= max_degree."""
        if base_dim < 1 or max_degree < 1:
            raise InvalidArgumentError("base_dim and max_degree must be >= 1")
        out = [combo for combo in product(range(max_degree + 1), repeat=base_dim)
               if 1 <= sum(combo) <= max_degree]
        out.sort(key=lambda g: (sum(g), g))
        return MonomialMap(tuple(out))

    def evaluate(self, y) -> np.ndarray:
        """Map points (n, k) to monomial tuples (n, m)."""
        pts = _as_points(y, self.base_dim)
        cols = [np.prod(pts ** np.asarray(g, dtype=float), axis=1)
                for g in self.exponents]
        return np.stack(cols, axis=1)

    def dilate(self, t: float, xi) -> np.ndarray:
        """Anisotropic dilation: scale coordinate gamma by t^|gamma|."""
        if t <= 0:
            raise InvalidArgumentError("dilation parameter must be positive")
        pts = _as_points(xi, self.ambient_dim)
        scales = np.array([float(t) ** d for d in self.degrees])
        return pts * scales

    def quasi_norm(self, xi) -> np.ndarray:
        """max_gamma |xi_gamma|^(1/|gamma|); 1-homogeneous under dilate."""
        pts = _as_points(xi, self.ambient_dim)
        mags = np.abs(pts)
        powered = mags ** (1.0 / np.asarray(self.degrees, dtype=float))
        out = powered.max(axis=1)
        return out if out.size > 1 else float(out[0])


def quasi_norm(spec: MonomialMap, xi):
    """Module-level convenience wrapper around MonomialMap.quasi_norm."""
    return spec.quasi_norm(xi)


@dataclass(frozen=True)
class BoundaryMeasureResult:
    """Monte Carlo estimate of vol{x : dist(x, boundary) <= s}."""

    estimate: float
    stderr: float
    ratio: float
    shell_width: float
    samples: int
    hits: int
    box_volume: float

    def as_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "ratio": self.ratio,
            "shell_width": self.shell_width,
            "samples": self.samples,
            "hits": self.hits,
            "box_volume": self.box_volume,
        }


_MC_CHUNK = 1 << 19


def boundary_neighborhood_measure(body: ConvexBodySpec, s: float, samples: int,
                                  seed: int) -> BoundaryMeasureResult:
    """Estimate the volume of the two-sided s-shell around the boundary.

    Sampling is uniform over the bounding box grown by s, so the estimate is
    unbiased for the full shell. ratio = estimate / (s * diam^(k-1)) is the
    scale-free quantity the shell bounds are stated with; for small s it
    approaches (surface area) * 2 / diam^(k-1).
    """
    if s <= 0:
        raise InvalidArgumentError("shell width must be positive")
    diam = body.diameter()
    if s > diam:
        raise InvalidArgumentError("shell width must not exceed the diameter")
    if samples < 1:
        raise InvalidArgumentError("need at least one sample")
    k = body.dim
    # bounding_half_widths already absorbs any center offset, so the sampling
    # box is centered at the origin.
    half = body.bounding_half_widths(margin=s)
    box_volume = float(np.prod(2.0 * half))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    hits = 0
    done = 0
    while done < samples:
        n = min(_MC_CHUNK, samples - done)
        pts = rng.uniform(-1.0, 1.0, size=(n, k)) * half
        dist = body.boundary_distance(pts)
        hits += int(np.count_nonzero(dist <= s))
        done += n
    p = hits / samples
    estimate = p * box_volume
    stderr = box_volume * math.sqrt(max(p * (1.0 - p), 0.0) / samples)
    ratio = estimate / (s * diam ** (k - 1))
    return BoundaryMeasureResult(
        estimate=estimate,
        stderr=stderr,
        ratio=ratio,
        shell_width=s,
        samples=samples,
        hits=hits,
        box_volume=box_volume,
    )
