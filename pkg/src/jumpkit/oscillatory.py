"""Rough-amplitude van der Corput bounds in one and two variables.

Amplitudes are piecewise linear with jumps allowed at the knots, which makes
every quantity on the bound side exact: absolute integrals, window integrals,
and the shifted-difference L1 function D(y) = int |psi(x) - psi(x - y)| dx
all reduce to integrals of |linear| over explicit cells. The oscillatory
left-hand sides use Gauss-Legendre panels aligned to the amplitude knots and
sized so the phase advances less than pi/4 per panel, then verified by panel
doubling to 1e-9.

The one-variable bound pairs a monomial-type phase (k-th derivative bounded
below by lambda, first derivative monotone when k = 1) with

    window     = inf_x int_{x-delta}^{x+delta} |psi|,   delta = lambda^(-1/k)
    smoothness = lambda^(1/k) int_{-delta}^{delta} D(y) dy,

and the several-variable bound pairs a polynomial phase with the sup of D(v)
over |v| <= R Lambda^(-1/d), Lambda = sum_alpha R^|alpha| |lambda_alpha|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import InvalidArgumentError, NumericFailureError

_GL64_NODES, _GL64_WEIGHTS = leggauss(64)
_GL8_NODES, _GL8_WEIGHTS = leggauss(8)
_MAX_LHS_NODES = 1 << 20
_LHS_TOL = 1e-9


def _abs_linear_integral(c: float, m: float, lo: float, hi: float) -> float:
    """Exact integral of |c + m x| over [lo, hi]."""
    if hi <= lo:
        return 0.0
    vl = c + m * lo
    vh = c + m * hi
    if m != 0.0:
        root = -c / m
        if lo < root < hi:
            return 0.5 * (abs(vl) * (root - lo) + abs(vh) * (hi - root))
    return 0.5 * (abs(vl) + abs(vh)) * (hi - lo)


@dataclass(frozen=True)
class AmplitudeSpec:
    """Piecewise linear amplitude, zero outside [knots[0], knots[-1]].

    On the open cell (knots[i], knots[i+1]) the value is
    intercepts[i] + slopes[i] * x; jumps at knots are allowed and carry no
    mass. All derived quantities below are exact.
    """

    kind: str
    knots: tuple[float, ...]
    slopes: tuple[float, ...]
    intercepts: tuple[float, ...]

    def __post_init__(self):
        if len(self.knots) < 2:
            raise InvalidArgumentError("amplitude needs at least two knots")
        if any(b <= a for a, b in zip(self.knots, self.knots[1:])):
            raise InvalidArgumentError("knots must be strictly increasing")
        ncell = len(self.knots) - 1
        if len(self.slopes) != ncell or len(self.intercepts) != ncell:
            raise InvalidArgumentError("need one (slope, intercept) per cell")
        vals = list(self.knots) + list(self.slopes) + list(self.intercepts)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidArgumentError("amplitude data must be finite")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "AmplitudeSpec":
        return AmplitudeSpec("zero", (0.0, 1.0), (0.0,), (0.0,))

    @staticmethod
    def indicator(a: float, b: float) -> "AmplitudeSpec":
        if not a < b:
            raise InvalidArgumentError("indicator needs a < b")
        return AmplitudeSpec("indicator", (a, b), (0.0,), (1.0,))

    @staticmethod
    def hat(a: float, b: float) -> "AmplitudeSpec":
        """Tent of height 1 on [a, b], peak at the midpoint."""
        if not a < b:
            raise InvalidArgumentError("hat needs a < b")
        mid = 0.5 * (a + b)
        m = 2.0 / (b - a)
        return AmplitudeSpec("hat", (a, mid, b), (m, -m), (-m * a, m * b))

    @staticmethod
    def step(knots: Sequence[float], values: Sequence[float]) -> "AmplitudeSpec":
        ks = tuple(float(k) for k in knots)
        vs = tuple(float(v) for v in values)
        if len(vs) != len(ks) - 1:
            raise InvalidArgumentError("need one value per cell")
        return AmplitudeSpec("step", ks, (0.0,) * len(vs), vs)

    @staticmethod
    def from_samples(xs: Sequence[float], ys: Sequence[float]) -> "AmplitudeSpec":
        """Continuous interpolant through the samples, zero outside.

        The interpolant itself is handled exactly; how well it models the
        sampled function is the caller's modeling error.
        """
        xs = tuple(float(x) for x in xs)
        ys = tuple(float(y) for y in ys)
        if len(xs) != len(ys) or len(xs) < 2:
            raise InvalidArgumentError("need matching xs/ys with length >= 2")
        slopes = []
        intercepts = []
        for (x0, x1), (y0, y1) in zip(zip(xs, xs[1:]), zip(ys, ys[1:])):
            m = (y1 - y0) / (x1 - x0)
            slopes.append(m)
            intercepts.append(y0 - m * x0)
        return AmplitudeSpec("sampled", xs, tuple(slopes), tuple(intercepts))

    # -- evaluation and exact integrals -------------------------------------

    @property
    def support(self) -> tuple[float, float]:
        return (self.knots[0], self.knots[-1])

    def __call__(self, x) -> np.ndarray:
        ks = np.asarray(self.knots)
        xv = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(ks, xv, side="right") - 1, 0,
                      len(self.knots) - 2)
        inside = (xv >= ks[0]) & (xv <= ks[-1])
        out = (np.asarray(self.intercepts)[idx]
               + np.asarray(self.slopes)[idx] * xv) * inside
        return out

    def _cell_params(self, t: float) -> tuple[float, float]:
        """(intercept, slope) of the cell containing t, (0, 0) outside."""
        if t < self.knots[0] or t >= self.knots[-1]:
            return 0.0, 0.0
        lo, hi = 0, len(self.knots) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.knots[mid] <= t:
                lo = mid
            else:
                hi = mid
        return self.intercepts[lo], self.slopes[lo]

    def integral_abs(self) -> float:
        """Exact total mass int |psi|."""
        return sum(
            _abs_linear_integral(c, m, l, r)
            for c, m, l, r in zip(self.intercepts, self.slopes,
                                  self.knots, self.knots[1:])
        )

    def window_integral(self, lo: float, hi: float) -> float:
        """Exact int_{lo}^{hi} |psi|."""
        if hi <= lo:
            return 0.0
        total = 0.0
        for c, m, l, r in zip(self.intercepts, self.slopes,
                              self.knots, self.knots[1:]):
            total += _abs_linear_integral(c, m, max(l, lo), min(r, hi))
        return total

    def shifted(self, y: float) -> "AmplitudeSpec":
        """The amplitude x -> psi(x - y)."""
        return AmplitudeSpec(
            self.kind,
            tuple(k + y for k in self.knots),
            self.slopes,
            tuple(c - m * y for c, m in zip(self.intercepts, self.slopes)),
        )

    def rescaled(self, s: float) -> "AmplitudeSpec":
        """The amplitude x -> psi(s x)."""
        if s <= 0:
            raise InvalidArgumentError("scale must be positive")
        return AmplitudeSpec(
            self.kind,
            tuple(k / s for k in self.knots),
            tuple(m * s for m in self.slopes),
            self.intercepts,
        )

    def difference_l1(self, y: float) -> float:
        """Exact D(y) = int over the line of |psi(x) - psi(x - y)|."""
        if y == 0.0:
            return 0.0
        other = self.shifted(y)
        grid = np.unique(np.concatenate([self.knots, other.knots]))
        total = 0.0
        for l, r in zip(grid, grid[1:]):
            t = 0.5 * (l + r)
            c0, m0 = self._cell_params(t)
            c1, m1 = other._cell_params(t)
            total += _abs_linear_integral(c0 - c1, m0 - m1, l, r)
        return total

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "knots": list(self.knots),
            "slopes": list(self.slopes),
            "intercepts": list(self.intercepts),
        }

    @staticmethod
    def from_dict(d: dict) -> "AmplitudeSpec":
        return AmplitudeSpec(d["kind"], tuple(d["knots"]), tuple(d["slopes"]),
                             tuple(d["intercepts"]))


def integrated_difference(psi: AmplitudeSpec, delta: float,
                          tol: float = 1e-10) -> float:
    """int_{-delta}^{delta} D(y) dy with D exact per evaluation.

    Panels are cut at every pairwise knot difference (where D changes its
    polynomial piece) and at 0, then Gauss-Legendre panels are refined until
    the value settles; D is piecewise quadratic so this converges fast.
    """
    if delta <= 0:
        raise InvalidArgumentError("window half-width must be positive")
    ks = np.asarray(psi.knots)
    diffs = (ks[:, None] - ks[None, :]).ravel()
    breaks = np.unique(np.concatenate([diffs, [-delta, 0.0, delta]]))
    breaks = breaks[(breaks >= -delta) & (breaks <= delta)]
    prev = None
    splits = 1
    while splits <= 4096:
        total = 0.0
        for l, r in zip(breaks, breaks[1:]):
            edges = np.linspace(l, r, splits + 1)
            mid = 0.5 * (edges[:-1] + edges[1:])
            half = 0.5 * (edges[1:] - edges[:-1])
            nodes = (mid[:, None] + half[:, None] * _GL8_NODES).ravel()
            weights = (half[:, None] * _GL8_WEIGHTS).ravel()
            total += float(sum(w * psi.difference_l1(float(y))
                               for y, w in zip(nodes, weights)))
        if prev is not None and abs(total - prev) <= tol * max(1.0, abs(total)):
            return total
        prev = total
        splits *= 2
    raise NumericFailureError("difference integral did not converge")


# ---------------------------------------------------------------------------
# phases


@dataclass(frozen=True)
class PhaseSpec:
    """Phase for the van der Corput bounds.

    monomial: shape x^order / order! on the interval (a, b); the coefficient
    lambda is supplied at call time, so the order-th derivative is exactly
    lambda and the first derivative is monotone when order = 1.

    polynomial: sum of lambda_alpha x^alpha over multi-indices with
    1 <= |alpha|, in nvars <= 2 variables; used with a ball of radius R/2.
    """

    kind: str
    order: int = 0
    domain: tuple[float, float] = (0.0, 1.0)
    coefficients: tuple[tuple[tuple[int, ...], float], ...] = ()
    nvars: int = 1

    @staticmethod
    def monomial(order: int, a: float, b: float) -> "PhaseSpec":
        if order < 1 or order != int(order):
            raise InvalidArgumentError("derivative order must be a positive integer")
        if not a < b:
            raise InvalidArgumentError("phase domain needs a < b")
        return PhaseSpec(kind="monomial", order=int(order), domain=(a, b))

    @staticmethod
    def polynomial(coefficients: dict, nvars: int) -> "PhaseSpec":
        if nvars not in (1, 2):
            raise InvalidArgumentError("polynomial phases support 1 or 2 variables")
        coeffs = []
        for alpha, lam in coefficients.items():
            alpha = tuple(int(e) for e in (alpha if isinstance(alpha, tuple)
                                           else (alpha,)))
            if len(alpha) != nvars or any(e < 0 for e in alpha):
                raise InvalidArgumentError("bad multi-index for the phase")
            if sum(alpha) < 1:
                raise InvalidArgumentError("constant phase terms are not allowed")
            coeffs.append((alpha, float(lam)))
        if not coeffs:
            raise InvalidArgumentError("polynomial phase needs at least one term")
        coeffs.sort(key=lambda t: (sum(t[0]), t[0]))
        return PhaseSpec(kind="polynomial", coefficients=tuple(coeffs),
                         nvars=nvars)

    @property
    def degree(self) -> int:
        if self.kind != "polynomial":
            raise InvalidArgumentError("degree is a polynomial-phase notion")
        return max(sum(a) for a, _ in self.coefficients)

    def scale(self, radius: float) -> float:
        """Lambda = sum over terms of radius^|alpha| * |lambda_alpha|."""
        if self.kind != "polynomial":
            raise InvalidArgumentError("scale is a polynomial-phase notion")
        if radius <= 0:
            raise InvalidArgumentError("radius must be positive")
        return float(sum(radius ** sum(a) * abs(l)
                         for a, l in self.coefficients))

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "monomial":
            d["order"] = self.order
            d["domain"] = list(self.domain)
        else:
            d["nvars"] = self.nvars
            d["coefficients"] = [[list(a), l] for a, l in self.coefficients]
        return d

    @staticmethod
    def from_dict(d: dict) -> "PhaseSpec":
        if d["kind"] == "monomial":
            a, b = d["domain"]
            return PhaseSpec.monomial(d["order"], a, b)
        coeffs = {tuple(a): l for a, l in d["coefficients"]}
        return PhaseSpec.polynomial(coeffs, d["nvars"])


# ---------------------------------------------------------------------------
# oscillatory left-hand sides


def _segment_edges(psi: AmplitudeSpec, a: float, b: float) -> list[float]:
    lo = max(a, psi.knots[0])
    hi = min(b, psi.knots[-1])
    if hi <= lo:
        return []
    inner = [k for k in psi.knots if lo < k < hi]
    return [lo] + inner + [hi]


def _lhs_line(phase_vals, dphase_bound, psi: AmplitudeSpec, a: float,
              b: float) -> float:
    """|int_a^b exp(i phi) psi| with knot-aligned phase-sized panels."""
    edges = _segment_edges(psi, a, b)
    if not edges:
        return 0.0
    mass = psi.integral_abs()
    base = []
    for l, r in zip(edges, edges[1:]):
        dmax = dphase_bound(l, r)
        # 8 pi of phase per panel: 64-point Gauss resolves 4 waves to machine
        # precision, and the mult-doubling check below is the accuracy gate
        panels = max(1, int(math.ceil((r - l) * dmax / (8.0 * math.pi))))
        base.append(panels)
    mult = 1
    prev = None
    while True:
        if sum(p * mult for p in base) * 64 > _MAX_LHS_NODES:
            raise NumericFailureError("oscillatory quadrature budget exceeded")
        total = 0.0 + 0.0j
        for (l, r), panels in zip(zip(edges, edges[1:]), base):
            e = np.linspace(l, r, panels * mult + 1)
            mid = 0.5 * (e[:-1] + e[1:])
            half = 0.5 * (e[1:] - e[:-1])
            nodes = (mid[:, None] + half[:, None] * _GL64_NODES).ravel()
            weights = (half[:, None] * _GL64_WEIGHTS).ravel()
            total += np.sum(weights * np.exp(1j * phase_vals(nodes))
                            * psi(nodes))
        if prev is not None and abs(total - prev) <= _LHS_TOL * max(1.0, mass):
            lhs = abs(total)
            if lhs > mass * (1.0 + 1e-9) + 1e-12:
                raise NumericFailureError(
                    "quadrature exceeded the amplitude mass bound"
                )
            return float(lhs)
        prev = total
        mult *= 2


def vdc_1d(phase: PhaseSpec, psi: AmplitudeSpec, lam: float,
           grid_points: int = 128) -> tuple[float, float, float]:
    """One-variable rough-amplitude oscillatory bound data.

    Returns (lhs, window, smoothness) where lhs = |int exp(i lam x^k / k!)
    psi(x) dx| over the phase domain, window is the global inf (on a
    grid_points grid plus the endpoints) of the two-sided delta-window mass
    of |psi|, and smoothness = lam^(1/k) int_{|y| <= delta} D(y) dy with
    delta = lam^(-1/k). The bound lhs <= C_k (window + smoothness) is
    measured, not assumed; lhs <= int |psi| is asserted on every call.
    """
    if phase.kind != "monomial":
        raise InvalidArgumentError("one-variable bound needs a monomial phase")
    if lam <= 0:
        raise InvalidArgumentError("phase size lambda must be positive")
    a, b = phase.domain
    if psi.knots[0] < a - 1e-12 or psi.knots[-1] > b + 1e-12:
        raise InvalidArgumentError("amplitude support must lie in the phase domain")
    k = phase.order
    fact = float(math.factorial(k))
    dfact = float(math.factorial(k - 1))

    def phase_vals(x):
        return lam * x**k / fact

    def dphase_bound(l, r):
        return lam * max(abs(l), abs(r)) ** (k - 1) / dfact

    lhs = _lhs_line(phase_vals, dphase_bound, psi, a, b)
    if psi.integral_abs() == 0.0:
        return lhs, 0.0, 0.0
    delta = lam ** (-1.0 / k)
    xs = np.linspace(a, b, grid_points)
    xs = np.unique(np.concatenate([xs, [a, b]]))
    window = min(psi.window_integral(float(x) - delta, float(x) + delta)
                 for x in xs)
    smooth = lam ** (1.0 / k) * integrated_difference(psi, delta)
    return lhs, float(window), float(smooth)


# ---------------------------------------------------------------------------
# several variables (product amplitudes)


@dataclass(frozen=True)
class ProductAmplitude:
    """Two-variable amplitude psi(x1, x2) = f1(x1) * f2(x2)."""

    factors: tuple[AmplitudeSpec, AmplitudeSpec]

    def __call__(self, x1, x2) -> np.ndarray:
        return self.factors[0](x1) * self.factors[1](x2)

    @property
    def support_radius(self) -> float:
        corners = [max(abs(f.knots[0]), abs(f.knots[-1])) for f in self.factors]
        return math.hypot(*corners)

    def integral_abs(self) -> float:
        return self.factors[0].integral_abs() * self.factors[1].integral_abs()

    def difference_l1(self, v: tuple[float, float]) -> float:
        """int |psi(x) - psi(x - v)| by per-cell Gauss-Legendre.

        Cells are cut at the knots of both the original and shifted factors,
        so the integrand is smooth except where it changes sign; an 8-point
        rule per axis per cell is accurate to ~1e-6, plenty for measured
        constants.
        """
        f1, f2 = self.factors
        g1, g2 = f1.shifted(v[0]), f2.shifted(v[1])
        grid1 = np.unique(np.concatenate([f1.knots, g1.knots]))
        grid2 = np.unique(np.concatenate([f2.knots, g2.knots]))

        def axis_nodes(grid):
            mid = 0.5 * (grid[:-1] + grid[1:])
            half = 0.5 * (grid[1:] - grid[:-1])
            nodes = (mid[:, None] + half[:, None] * _GL8_NODES).ravel()
            weights = (half[:, None] * _GL8_WEIGHTS).ravel()
            return nodes, weights

        n1, w1 = axis_nodes(grid1)
        n2, w2 = axis_nodes(grid2)
        plain = np.outer(f1(n1), f2(n2))
        moved = np.outer(g1(n1), g2(n2))
        return float(w1 @ np.abs(plain - moved) @ w2)


def vdc_multidim(phase: PhaseSpec, psi, radius: float,
                 direction_points: int = 16, radius_points: int = 24,
                 ) -> tuple[float, float, float]:
    """Several-variable oscillatory bound data for polynomial phases.

    psi is an AmplitudeSpec (one variable) or ProductAmplitude (two); its
    support must lie in the ball of radius/2. Returns (lhs, rhs, Lambda)
    where rhs = sup of D(v) over |v| <= radius * Lambda^(-1/degree) on a
    direction/radius grid that always includes the extreme radius.
    """
    if phase.kind != "polynomial":
        raise InvalidArgumentError("several-variable bound needs a polynomial phase")
    lam_scale = phase.scale(radius)
    if lam_scale <= 0:
        raise InvalidArgumentError("phase scale Lambda must be positive")
    d = phase.degree
    vmax = radius * lam_scale ** (-1.0 / d)

    if phase.nvars == 1:
        if not isinstance(psi, AmplitudeSpec):
            raise InvalidArgumentError("one-variable phase needs a line amplitude")
        if max(abs(psi.knots[0]), abs(psi.knots[-1])) > radius / 2.0 + 1e-12:
            raise InvalidArgumentError("amplitude support exceeds the half-ball")

        def phase_vals(x):
            out = np.zeros_like(np.asarray(x, dtype=float))
            for alpha, lam in phase.coefficients:
                out = out + lam * np.asarray(x, dtype=float) ** alpha[0]
            return out

        def dphase_bound(l, r):
            m = max(abs(l), abs(r))
            return sum(abs(lam) * alpha[0] * m ** (alpha[0] - 1)
                       for alpha, lam in phase.coefficients)

        lhs = _lhs_line(phase_vals, dphase_bound, psi, -radius / 2.0,
                        radius / 2.0)
        radii = np.linspace(0.0, vmax, radius_points + 1)[1:]
        rhs = max(psi.difference_l1(float(s * r))
                  for r in radii for s in (1.0, -1.0))
        return lhs, float(rhs), float(lam_scale)

    if not isinstance(psi, ProductAmplitude):
        raise InvalidArgumentError("two-variable phase needs a product amplitude")
    if psi.support_radius > radius / 2.0 + 1e-12:
        raise InvalidArgumentError("amplitude support exceeds the half-ball")
    lhs = _lhs_plane(phase, psi)
    angles = np.linspace(0.0, 2.0 * math.pi, direction_points, endpoint=False)
    radii = np.linspace(0.0, vmax, radius_points + 1)[1:]
    rhs = 0.0
    for th in angles:
        u = (math.cos(th), math.sin(th))
        for r in radii:
            rhs = max(rhs, psi.difference_l1((r * u[0], r * u[1])))
    return lhs, float(rhs), float(lam_scale)


def _lhs_plane(phase: PhaseSpec, psi: ProductAmplitude) -> float:
    """|int exp(i P(x)) psi(x) dx| by knot-aligned tensor quadrature."""
    f1, f2 = psi.factors
    mass = psi.integral_abs()
    if mass == 0.0:
        return 0.0

    def axis_bound(ax: int, other_max: float, lo: float, hi: float) -> float:
        m = max(abs(lo), abs(hi))
        total = 0.0
        for alpha, lam in phase.coefficients:
            if alpha[ax] == 0:
                continue
            total += (abs(lam) * alpha[ax] * m ** (alpha[ax] - 1)
                      * other_max ** alpha[1 - ax])
        return total

    def axis_rule(f: AmplitudeSpec, ax: int, other_max: float, mult: int):
        edges = _segment_edges(f, f.knots[0], f.knots[-1])
        nodes = []
        weights = []
        for l, r in zip(edges, edges[1:]):
            dmax = axis_bound(ax, other_max, l, r)
            panels = max(1, int(math.ceil((r - l) * dmax / (8.0 * math.pi))))
            e = np.linspace(l, r, panels * mult + 1)
            mid = 0.5 * (e[:-1] + e[1:])
            half = 0.5 * (e[1:] - e[:-1])
            nodes.append((mid[:, None] + half[:, None] * _GL64_NODES).ravel())
            weights.append((half[:, None] * _GL64_WEIGHTS).ravel())
        return np.concatenate(nodes), np.concatenate(weights)

    max1 = max(abs(f1.knots[0]), abs(f1.knots[-1]))
    max2 = max(abs(f2.knots[0]), abs(f2.knots[-1]))
    mult = 1
    prev = None
    while True:
        n1, w1 = axis_rule(f1, 0, max2, mult)
        n2, w2 = axis_rule(f2, 1, max1, mult)
        if n1.size * n2.size > _MAX_LHS_NODES * 64:
            raise NumericFailureError("oscillatory quadrature budget exceeded")
        p = np.zeros((n1.size, n2.size))
        for alpha, lam in phase.coefficients:
            p += lam * np.outer(n1 ** alpha[0], n2 ** alpha[1])
        vals = np.exp(1j * p) * np.outer(f1(n1), f2(n2))
        total = complex(w1 @ vals @ w2)
        if prev is not None and abs(total - prev) <= _LHS_TOL * max(1.0, mass):
            lhs = abs(total)
            if lhs > mass * (1.0 + 1e-9) + 1e-12:
                raise NumericFailureError(
                    "quadrature exceeded the amplitude mass bound"
                )
            return float(lhs)
        prev = total
        mult *= 2
