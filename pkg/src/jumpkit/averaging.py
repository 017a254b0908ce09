"""Averaging operators over convex bodies and polynomial curves.

Lattice-side operators act on LatticeField values by FFT convolution with a
normalized (weights sum to one) kernel supported inside the torus, with an
explicit wraparound precondition. Quadrature-side routines compute the
oscillatory integrals behind the corresponding multiplier symbols: averages
over a dilated body composed with a monomial map, and truncated singular
integrals against a Calderon-Zygmund kernel.

All quadrature uses Gauss-Legendre panels sized to the total phase and is
verified by panel doubling; non-convergence raises NumericFailureError rather
than returning a silent answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.fft as sfft
from numpy.polynomial.legendre import leggauss

from .bodies import ConvexBodySpec
from .errors import InvalidArgumentError, NumericFailureError
from .fourier import LatticeField, SymbolFamily, apply_multiplier, as_points
from .geometry import MonomialMap
from .moduli import ModulusOfContinuity

_GL_ORDER = 32
_GL_NODES, _GL_WEIGHTS = leggauss(_GL_ORDER)
_MAX_QUAD_NODES = 1 << 21


# ---------------------------------------------------------------------------
# kernels


@dataclass(frozen=True)
class KernelSpec:
    """Calderon-Zygmund kernel data on R^dim minus the origin.

    size_constant bounds |K(y)| |y|^dim, smoothness is the modulus with
    |K(y) - K(y - z)| <= smoothness(|z|/|y|) |y|^-dim for |z| <= |y|/2, and
    odd = True records exact odd symmetry (cancellation holds identically).
    """

    name: str
    dim: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    size_constant: float
    smoothness: ModulusOfContinuity
    odd: bool = False

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidArgumentError("kernel dimension must be >= 1")
        if self.size_constant <= 0:
            raise InvalidArgumentError("size constant must be positive")

    def __call__(self, y) -> np.ndarray:
        return np.asarray(self.evaluate(np.asarray(y, dtype=float)))

    @staticmethod
    def reciprocal() -> "KernelSpec":
        """K(y) = 1/y on the line: size constant 1, modulus 2t, odd."""
        return KernelSpec(
            name="reciprocal",
            dim=1,
            evaluate=lambda y: 1.0 / y,
            size_constant=1.0,
            smoothness=ModulusOfContinuity.power(1.0, scale=2.0),
            odd=True,
        )


@dataclass(frozen=True)
class KernelCheckReport:
    """Measured size/smoothness/cancellation ratios for a KernelSpec."""

    size_max_ratio: float
    smoothness_max_ratio: float
    cancellation_defect: float

    def as_dict(self) -> dict:
        return {
            "size_max_ratio": self.size_max_ratio,
            "smoothness_max_ratio": self.smoothness_max_ratio,
            "cancellation_defect": self.cancellation_defect,
        }


def kernel_smoothness_check(kernel: KernelSpec, radii: Sequence[float],
                            fractions: Sequence[float]) -> KernelCheckReport:
    """Check the declared kernel constants on a grid (dim 1 kernels).

    For each radius r and fraction u <= 1/2 the displacement z = u*r is
    tested on both signs of y; ratios are against the declared constants, so
    values <= 1 mean the declaration holds on the grid.
    """
    if kernel.dim != 1:
        raise InvalidArgumentError("grid check implemented for dim 1 kernels")
    rs = np.asarray(radii, dtype=float)
    if rs.size == 0 or np.any(rs <= 0):
        raise InvalidArgumentError("radii must be positive")
    us = np.asarray(fractions, dtype=float)
    if np.any(us <= 0) or np.any(us > 0.5):
        raise InvalidArgumentError("displacement fractions must lie in (0, 1/2]")
    ys = np.concatenate([rs, -rs])
    size_ratio = float(np.max(np.abs(kernel(ys)) * np.abs(ys)
                              / kernel.size_constant))
    smooth_ratio = 0.0
    for u in us:
        z = u * ys
        num = np.abs(kernel(ys) - kernel(ys - z)) * np.abs(ys)
        smooth_ratio = max(smooth_ratio, float(np.max(num / kernel.smoothness(u))))
    if kernel.odd:
        defect = 0.0
    else:
        defect = 0.0
        lo, hi = float(rs.min()), float(rs.max())
        a = lo
        while a < hi:
            b = min(2.0 * a, hi)
            nodes = 0.5 * (b - a) * _GL_NODES + 0.5 * (b + a)
            w = 0.5 * (b - a) * _GL_WEIGHTS
            total = np.sum(w * (kernel(nodes) + kernel(-nodes)))
            defect = max(defect, abs(float(total)))
            a = b
    return KernelCheckReport(
        size_max_ratio=size_ratio,
        smoothness_max_ratio=smooth_ratio,
        cancellation_defect=defect,
    )


# ---------------------------------------------------------------------------
# lattice averages over convex bodies


def _signed_offsets(side: int) -> np.ndarray:
    """Signed lattice offsets [-M/2, M/2) in FFT index order."""
    idx = np.arange(side)
    return (idx + side // 2) % side - side // 2


def _lattice_indicator(body: ConvexBodySpec, t: float, side: int,
                       spacing: float) -> np.ndarray:
    """Boolean cube marking lattice offsets y with y in t*body.

    Built by per-axis broadcasting, never materializing a point list, so it
    stays affordable at side^dim up to the field memory budget.
    """
    u = spacing * _signed_offsets(side) / t
    d = body.dim
    if body.kind == "box":
        hw = np.asarray(body.half_widths, dtype=float)
        c = np.asarray(body.center, dtype=float) if body.center is not None \
            else np.zeros(d)
        out = np.ones((side,) * d, dtype=bool)
        for ax in range(d):
            shape = [1] * d
            shape[ax] = side
            out &= (np.abs(u - c[ax]) <= hw[ax]).reshape(shape)
        return out
    if body.q == math.inf:
        out = np.ones((side,) * d, dtype=bool)
        for ax in range(d):
            shape = [1] * d
            shape[ax] = side
            out &= (np.abs(u) <= body.radius).reshape(shape)
        return out
    acc = np.zeros((side,) * d, dtype=np.float64)
    for ax in range(d):
        shape = [1] * d
        shape[ax] = side
        acc += ((np.abs(u) / body.radius) ** body.q).reshape(shape)
    return acc <= 1.0


def avg_convex(field: LatticeField, body: ConvexBodySpec, t: float,
               ) -> LatticeField:
    """Normalized average of the field over lattice points of the dilated body.

    The kernel is the sampled indicator of t*body on the spacing-h lattice,
    divided by its point count, applied by FFT convolution. Wraparound is a
    hard error: the dilated body must fit strictly inside the half-torus.
    """
    if t <= 0:
        raise InvalidArgumentError("dilation parameter must be positive")
    if body.dim != field.dim:
        raise InvalidArgumentError("body dimension must match the field")
    extent = t * body.max_extent_from_origin()
    if not extent < field.side * field.spacing / 2.0:
        raise InvalidArgumentError("dilated body wraps around the torus")
    ind = _lattice_indicator(body, t, field.side, field.spacing)
    count = int(ind.sum())
    if count == 0:
        raise InvalidArgumentError("dilated body contains no lattice points")
    wdtype = np.float32 if field.values.dtype == np.complex64 else np.float64
    weights = ind.astype(wdtype) / count
    out = sfft.ifftn(sfft.fftn(field.values) * sfft.fftn(weights))
    return LatticeField(out.astype(field.values.dtype, copy=False), field.spacing)


def convex_lattice_weight_count(body: ConvexBodySpec, t: float, side: int,
                                spacing: float = 1.0) -> int:
    """Number of lattice points in the dilated body (the avg_convex divisor)."""
    if t <= 0:
        raise InvalidArgumentError("dilation parameter must be positive")
    return int(_lattice_indicator(body, t, side, spacing).sum())


# ---------------------------------------------------------------------------
# discrete cube averages


def _dirichlet_ratio(n: int, x: np.ndarray) -> np.ndarray:
    """sin((2n+1) pi x) / ((2n+1) sin(pi x)) with its limit 1 at integers."""
    s = np.sin(math.pi * x)
    near_int = np.abs(s) < 1e-15
    safe = np.where(near_int, 1.0, s)
    out = np.sin((2 * n + 1) * math.pi * x) / ((2 * n + 1) * safe)
    return np.where(near_int, 1.0, out)


def discrete_symbol(n: int, xi, dim: int = 1):
    """Multiplier of the average over the integer cube [-n, n]^dim.

    Product over axes of the Dirichlet ratio; frequencies live in
    [-1/2, 1/2]^dim and the value at 0 is exactly 1.
    """
    if n < 0 or n != int(n):
        raise InvalidArgumentError("cube radius must be a nonnegative integer")
    pts = as_points(xi, dim)
    if np.any(np.abs(pts) > 0.5 + 1e-9):
        raise InvalidArgumentError("discrete frequencies live in [-1/2, 1/2]^d")
    out = np.prod(_dirichlet_ratio(int(n), pts), axis=1)
    return out if out.size > 1 else float(out[0])


def discrete_cube_family(dim: int) -> SymbolFamily:
    return SymbolFamily(
        name="discrete-cube",
        dim=dim,
        flavor="discrete",
        evaluate=lambda n, pts: np.asarray(discrete_symbol(int(n), pts, dim)),
        zero_value=1.0,
    )


def discrete_cube_axis_symbol(n: int, side: int) -> np.ndarray:
    """Per-axis symbol values on the fftfreq grid, for separable application."""
    return _dirichlet_ratio(int(n), np.fft.fftfreq(side))


def avg_discrete_cube(field: LatticeField, n: int) -> LatticeField:
    """Exact average over the integer cube [-n, n]^d of lattice offsets.

    Realized as a separable Fourier multiplier (one Dirichlet ratio per
    axis), which agrees with the direct sum to FFT rounding.
    """
    if n < 0 or n != int(n):
        raise InvalidArgumentError("cube radius must be a nonnegative integer")
    if 2 * n + 1 > field.side:
        raise InvalidArgumentError("integer cube exceeds the torus period")
    sym = discrete_cube_axis_symbol(n, field.side)
    return apply_multiplier(field, [sym] * field.dim)


# ---------------------------------------------------------------------------
# oscillatory quadrature over monomial curves (one base variable)


def _panel_rule(a: float, b: float, panels: int):
    """Gauss-Legendre nodes/weights for `panels` equal panels on [a, b]."""
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * _GL_NODES).ravel()
    weights = (half[:, None] * _GL_WEIGHTS).ravel()
    return nodes, weights


def _converging_line_integral(f, a: float, b: float, osc: float,
                              tol: float) -> complex:
    """Integrate f over [a, b] with phase-aware panels, verified by doubling."""
    if b <= a:
        return 0.0 + 0.0j
    panels = max(1, min(int(math.ceil(osc / (4.0 * math.pi))) + 1, 1 << 14))
    prev = None
    while panels * _GL_ORDER <= _MAX_QUAD_NODES:
        nodes, weights = _panel_rule(a, b, panels)
        cur = complex(np.sum(weights * f(nodes)))
        if prev is not None and abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
        panels *= 2
    raise NumericFailureError("oscillatory quadrature did not converge")


def _phase_scale(mmap: MonomialMap, xi_row: np.ndarray, t: float) -> float:
    return 2.0 * math.pi * float(
        np.sum(np.abs(xi_row) * np.asarray([t**d for d in mmap.degrees]))
    )


def radon_symbol(mmap: MonomialMap, t: float, xi, tol: float = 1e-9):
    """Multiplier of the normalized average over the curve y -> P(y), |y| <= t.

    Computes (1/2t) * integral_{-t}^{t} exp(-2 pi i xi . P(y)) dy for one
    base variable; the value at xi = 0 is exactly 1.
    """
    if mmap.base_dim != 1:
        raise InvalidArgumentError("curve symbols support one base variable")
    if t <= 0:
        raise InvalidArgumentError("dilation parameter must be positive")
    pts = as_points(xi, mmap.ambient_dim)
    out = np.empty(pts.shape[0], dtype=complex)
    for i, row in enumerate(pts):
        osc = _phase_scale(mmap, row, t)

        def integrand(y, row=row):
            phase = mmap.evaluate(y) @ row
            return np.exp(-2j * math.pi * phase)

        out[i] = _converging_line_integral(integrand, -t, t, osc, tol) / (2.0 * t)
    return out if out.size > 1 else complex(out[0])


def psi_increment(mmap: MonomialMap, kernel: KernelSpec, s: float, t: float,
                  xi, tol: float = 1e-9):
    """Truncated singular multiplier increment over the shell s <= |y| <= t.

    integral_{s <= |y| <= t} exp(-2 pi i xi . P(y)) K(y) dy for one base
    variable; requires 0 < s <= t so the kernel singularity stays outside.
    """
    if mmap.base_dim != 1 or kernel.dim != 1:
        raise InvalidArgumentError("shell increments support one base variable")
    if not 0 < s <= t:
        raise InvalidArgumentError("need 0 < s <= t")
    pts = as_points(xi, mmap.ambient_dim)
    out = np.empty(pts.shape[0], dtype=complex)
    for i, row in enumerate(pts):
        osc = _phase_scale(mmap, row, t)

        def integrand(y, row=row):
            pos = np.exp(-2j * math.pi * (mmap.evaluate(y) @ row)) * kernel(y)
            neg = np.exp(-2j * math.pi * (mmap.evaluate(-y) @ row)) * kernel(-y)
            return pos + neg

        out[i] = _converging_line_integral(integrand, s, t, osc, tol)
    return out if out.size > 1 else complex(out[0])


# ---------------------------------------------------------------------------
# lattice Radon operators (curve case)


def _fractional_shift(values: np.ndarray, shift: np.ndarray) -> np.ndarray:
    """Sample f(x - shift) on the periodic lattice by multilinear interpolation.

    shift is in lattice units, one entry per axis; each axis costs two rolls.
    """
    out = values
    for ax, s in enumerate(shift):
        n = math.floor(s)
        f = s - n
        lo = np.roll(out, n, axis=ax)
        if f == 0.0:
            out = lo
        else:
            hi = np.roll(out, n + 1, axis=ax)
            out = (1.0 - f) * lo + f * hi
    return out


def _check_curve_fits(mmap: MonomialMap, t: float, field: LatticeField):
    reach = np.array([t**d for d in mmap.degrees])
    if not np.all(reach < field.side * field.spacing / 2.0):
        raise InvalidArgumentError("curve segment wraps around the torus")


def radon_average(field: LatticeField, mmap: MonomialMap, t: float,
                  tol: float = 1e-8, max_doublings: int = 8) -> LatticeField:
    """Average of the field along the curve x - P(y), |y| <= t.

    (1/2t) * integral_{-t}^{t} f(x - P(y)) dy on the periodic lattice, with
    off-lattice samples taken by multilinear interpolation. Quadrature panels
    double until the sup change is below tol (relative to the field size).
    """
    if mmap.base_dim != 1:
        raise InvalidArgumentError("curve averages support one base variable")
    if mmap.ambient_dim != field.dim:
        raise InvalidArgumentError("monomial map must match the field dimension")
    if t <= 0:
        raise InvalidArgumentError("dilation parameter must be positive")
    _check_curve_fits(mmap, t, field)
    scale = max(1.0, float(np.abs(field.values).max()))
    panels = max(2, int(math.ceil(2.0 * t / field.spacing / 8.0)))
    prev = None
    for _ in range(max_doublings + 1):
        nodes, weights = _panel_rule(-t, t, panels)
        shifts = mmap.evaluate(nodes) / field.spacing
        acc = np.zeros_like(field.values, dtype=complex)
        for q in range(nodes.size):
            acc += weights[q] * _fractional_shift(field.values, shifts[q])
        acc /= 2.0 * t
        if prev is not None and float(np.abs(acc - prev).max()) <= tol * scale:
            return LatticeField(acc.astype(field.values.dtype, copy=False),
                                field.spacing)
        prev = acc
        panels *= 2
    raise NumericFailureError("curve average quadrature did not converge")


def radon_singular(field: LatticeField, mmap: MonomialMap, kernel: KernelSpec,
                   r_min: float, r_max: float) -> LatticeField:
    """Truncated singular integral along the curve, shell by dyadic shell.

    integral_{r_min <= |y| <= r_max} f(x - P(y)) K(y) dy; both signs of y are
    paired inside each shell so odd kernels cancel constants exactly.
    """
    if mmap.base_dim != 1 or kernel.dim != 1:
        raise InvalidArgumentError("curve integrals support one base variable")
    if mmap.ambient_dim != field.dim:
        raise InvalidArgumentError("monomial map must match the field dimension")
    if not 0 < r_min < r_max:
        raise InvalidArgumentError("need 0 < r_min < r_max")
    _check_curve_fits(mmap, r_max, field)
    acc = np.zeros_like(field.values, dtype=complex)
    a = r_min
    while a < r_max:
        b = min(2.0 * a, r_max)
        nodes, weights = _panel_rule(a, b, 2)
        for sign in (1.0, -1.0):
            ys = sign * nodes
            shifts = mmap.evaluate(ys) / field.spacing
            kv = kernel(ys)
            for q in range(nodes.size):
                acc += weights[q] * kv[q] * _fractional_shift(field.values,
                                                              shifts[q])
        a = b
    return LatticeField(acc.astype(field.values.dtype, copy=False), field.spacing)
