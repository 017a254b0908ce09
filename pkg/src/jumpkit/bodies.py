"""Symmetric convex bodies: ell^q balls and axis-aligned boxes.

Provides exact membership, closed-form volumes and radii, and distance to the
boundary. Distances are exact for q in {1, 2, inf} and boxes; general q falls
back to 64-step bisection along the ray through the center (radial distance,
reported as approximate). Offset boxes are supported but experimental: they
break the symmetric-cancellation assumptions some callers rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class ConvexBodySpec:
    kind: str  # "lq-ball" | "box"
    dim: int
    q: Optional[float] = None
    radius: float = 1.0
    half_widths: Optional[tuple[float, ...]] = None
    center: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidArgumentError("body dimension must be >= 1")
        if self.kind == "lq-ball":
            if self.q is None or not (1.0 <= self.q):
                raise InvalidArgumentError("lq-ball needs q in [1, inf]")
            if self.radius <= 0:
                raise InvalidArgumentError("lq-ball needs radius > 0")
            if self.half_widths is not None or self.center is not None:
                raise InvalidArgumentError("lq-ball takes no box parameters")
        elif self.kind == "box":
            if self.half_widths is None or len(self.half_widths) != self.dim:
                raise InvalidArgumentError("box needs one half-width per axis")
            if any(h <= 0 for h in self.half_widths):
                raise InvalidArgumentError("box half-widths must be positive")
            if self.center is not None and len(self.center) != self.dim:
                raise InvalidArgumentError("box center must match the dimension")
        else:
            raise InvalidArgumentError(f"unknown body kind {self.kind!r}")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def lq_ball(dim: int, q: float, radius: float = 1.0) -> "ConvexBodySpec":
        return ConvexBodySpec(kind="lq-ball", dim=dim, q=float(q), radius=float(radius))

    @staticmethod
    def box(half_widths, center=None) -> "ConvexBodySpec":
        hw = tuple(float(h) for h in half_widths)
        c = tuple(float(x) for x in center) if center is not None else None
        return ConvexBodySpec(kind="box", dim=len(hw), half_widths=hw, center=c)

    # -- basic geometry ----------------------------------------------------

    def _centered(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.dim:
            raise InvalidArgumentError("points must have shape (n, dim)")
        if self.kind == "box" and self.center is not None:
            pts = pts - np.asarray(self.center)
        return pts

    def contains(self, points) -> np.ndarray:
        pts = self._centered(points)
        if self.kind == "box":
            return np.all(np.abs(pts) <= np.asarray(self.half_widths), axis=1)
        if self.q == math.inf:
            return np.max(np.abs(pts), axis=1) <= self.radius
        return np.sum(np.abs(pts) ** self.q, axis=1) ** (1.0 / self.q) <= self.radius

    def volume(self) -> float:
        if self.kind == "box":
            return float(np.prod([2.0 * h for h in self.half_widths]))
        if self.q == math.inf:
            return (2.0 * self.radius) ** self.dim
        k, q = self.dim, self.q
        return self.radius**k * (2.0 * math.gamma(1.0 + 1.0 / q)) ** k / math.gamma(1.0 + k / q)

    def circumradius(self) -> float:
        """Largest Euclidean norm over the body, measured from its center."""
        if self.kind == "box":
            return float(np.linalg.norm(self.half_widths))
        if self.q == math.inf:
            return self.radius * math.sqrt(self.dim)
        if self.q <= 2.0:
            return self.radius
        return self.radius * self.dim ** (0.5 - 1.0 / self.q)

    def inradius(self) -> float:
        """Distance from the center to the nearest boundary point."""
        if self.kind == "box":
            return float(min(self.half_widths))
        if self.q == math.inf:
            return self.radius
        if self.q >= 2.0:
            return self.radius
        return self.radius * self.dim ** (0.5 - 1.0 / self.q)

    def diameter(self) -> float:
        return 2.0 * self.circumradius()

    def max_extent_from_origin(self) -> float:
        """sup of |x|_2 over the body, measured from the origin (not the center)."""
        if self.kind == "box" and self.center is not None:
            corners = np.abs(np.asarray(self.center)) + np.asarray(self.half_widths)
            return float(np.linalg.norm(corners))
        return self.circumradius()

    def bounding_half_widths(self, margin: float = 0.0) -> np.ndarray:
        """Per-axis half-widths of a centered box containing the body + margin."""
        if self.kind == "box":
            base = np.asarray(self.half_widths, dtype=float)
            if self.center is not None:
                base = base + np.abs(np.asarray(self.center))
        else:
            base = np.full(self.dim, self.radius)  # axis extent of any lq ball
        return base + margin

    # -- distance to the boundary ------------------------------------------

    @property
    def distance_exact(self) -> bool:
        if self.kind == "box":
            return True
        return self.q in (1.0, 2.0, math.inf)

    def boundary_distance(self, points) -> np.ndarray:
        """Distance to the boundary; exact where distance_exact.

        Boxes use the per-axis gauge on both sides (max excess outside, min
        slack inside), so the s-shell of a box is exactly the box grown by s
        minus the box shrunk by s. Balls use the Euclidean distance.
        """
        pts = self._centered(points)
        if self.kind == "box" or self.q == math.inf:
            h = (
                np.asarray(self.half_widths)
                if self.kind == "box"
                else np.full(self.dim, self.radius)
            )
            y = np.abs(pts)
            excess = np.maximum(y - h, 0.0)
            outside = np.max(excess, axis=1)
            inside = np.min(h - y, axis=1)  # valid (positive) only when inside
            return np.where(outside > 0, outside, np.abs(inside))
        if self.q == 2.0:
            return np.abs(np.linalg.norm(pts, axis=1) - self.radius)
        if self.q == 1.0:
            return self._l1_boundary_distance(pts)
        return self._radial_boundary_distance(pts)

    def _l1_boundary_distance(self, pts: np.ndarray) -> np.ndarray:
        k = self.dim
        z = np.abs(pts)
        norm1 = z.sum(axis=1)
        inside = (self.radius - norm1) / math.sqrt(k)
        # exterior: Euclidean distance to the simplex {z >= 0, sum z = radius}
        # via the sorted-threshold projection
        zs = np.sort(z, axis=1)[:, ::-1]
        cums = np.cumsum(zs, axis=1)
        ks = np.arange(1, k + 1)
        tau = (cums - self.radius) / ks
        valid = zs - tau > 0
        m = valid.sum(axis=1)  # number of active coordinates, >= 1
        tau_star = tau[np.arange(len(z)), m - 1]
        proj = np.maximum(z - tau_star[:, None], 0.0)
        outside = np.linalg.norm(z - proj, axis=1)
        return np.where(norm1 > self.radius, outside, inside)

    def _radial_boundary_distance(self, pts: np.ndarray) -> np.ndarray:
        # distance along the ray through the center: bisect the scale s with
        # s*x on the boundary, then return |x|_2 * |1 - s|. The crossing
        # satisfies radius/(k |x|_inf) <= s <= radius/|x|_inf, so that upper
        # value (plus slack) brackets it.
        norms = np.linalg.norm(pts, axis=1)
        out = np.zeros(len(pts))
        nz = norms > 0
        x = pts[nz]
        linf = np.max(np.abs(x), axis=1)
        lo = np.zeros(nz.sum())
        hi = (self.radius / linf) * (1.0 + 1e-9)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            inside = self.contains(mid[:, None] * x)
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        s = 0.5 * (lo + hi)
        out[nz] = norms[nz] * np.abs(1.0 - s)
        out[~nz] = self.inradius()
        return out

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind, "dim": self.dim}
        if self.kind == "lq-ball":
            d["q"] = "inf" if self.q == math.inf else self.q
            d["radius"] = self.radius
        else:
            d["half_widths"] = list(self.half_widths)
            if self.center is not None:
                d["center"] = list(self.center)
        return d

    @staticmethod
    def from_dict(d: dict) -> "ConvexBodySpec":
        kind = d.get("kind")
        if kind == "lq-ball":
            q = d.get("q")
            q = math.inf if q in ("inf", None) else float(q)
            return ConvexBodySpec.lq_ball(int(d["dim"]), q, float(d.get("radius", 1.0)))
        if kind == "box":
            return ConvexBodySpec.box(d["half_widths"], d.get("center"))
        raise InvalidArgumentError(f"unknown body kind {kind!r}")
