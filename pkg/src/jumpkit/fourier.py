"""Periodic lattice fields and Fourier multiplier machinery.

Fields live on Z_M^d with an optional physical spacing h; the DFT frequency
grid is np.fft.fftfreq(M) per axis, so multiplier symbols are functions of the
lattice frequency xi in [-1/2, 1/2)^d (cycles per sample). Averaging operators
that need physical units do their own scaling before calling in here.

Symbol families are parametrized symbols (tag, evaluator, declared value at
xi = 0): the Poisson semigroup in continuous flavor exp(-2 pi t |xi|) and
discrete flavor exp(-2 pi t |xi|_sin) with |xi|_sin^2 = sum_j sin^2(pi xi_j),
their dyadic differences (Littlewood-Paley pieces), and the standard envelope
min(2^k |xi|, (2^k |xi|)^-1) used to bound them.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.fft as sfft

from .errors import InvalidArgumentError

DEFAULT_MAX_LOG2_POINTS = 26.0

_MAGIC = b"JKLF"
_VERSION = 1


def as_points(xi, dim: int) -> np.ndarray:
    """Coerce frequency input to shape (n, dim)."""
    arr = np.asarray(xi, dtype=float)
    if arr.ndim == 0:
        if dim != 1:
            raise InvalidArgumentError("scalar frequency only valid when dim == 1")
        return arr.reshape(1, 1)
    if arr.ndim == 1:
        if dim == 1:
            return arr.reshape(-1, 1)
        if arr.shape[0] == dim:
            return arr.reshape(1, dim)
        raise InvalidArgumentError("frequency vector does not match dimension")
    if arr.ndim == 2 and arr.shape[1] == dim:
        return arr
    raise InvalidArgumentError("frequencies must have shape (n, dim)")


@dataclass(frozen=True)
class LatticeField:
    """Complex field on the periodic lattice Z_M^d with spacing h."""

    values: np.ndarray
    spacing: float = 1.0

    def __post_init__(self):
        v = self.values
        if v.ndim < 1 or any(s != v.shape[0] for s in v.shape):
            raise InvalidArgumentError("field values must be a (M,)*d cube")
        if not np.issubdtype(v.dtype, np.complexfloating):
            raise InvalidArgumentError("field values must be complex")
        if self.spacing <= 0:
            raise InvalidArgumentError("lattice spacing must be positive")
        if self.dim * math.log2(self.side) > DEFAULT_MAX_LOG2_POINTS + 1e-9:
            raise InvalidArgumentError(
                f"lattice of {self.side}^{self.dim} points exceeds the memory budget"
            )

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def side(self) -> int:
        return self.values.shape[0]

    @staticmethod
    def from_array(values, spacing: float = 1.0) -> "LatticeField":
        return LatticeField(np.asarray(values).astype(complex, copy=False), spacing)

    @staticmethod
    def _check_budget(dim: int, side: int) -> None:
        # reject before allocating: an over-budget request must fail fast
        # instead of first materializing gigabytes of samples
        if dim < 1 or side < 2:
            raise InvalidArgumentError("need dim >= 1 and side >= 2")
        if dim * math.log2(side) > DEFAULT_MAX_LOG2_POINTS + 1e-9:
            raise InvalidArgumentError(
                f"lattice of {side}^{dim} points exceeds the memory budget"
            )

    @staticmethod
    def random_normal(dim: int, side: int, rng: np.random.Generator,
                      spacing: float = 1.0, dtype=np.complex128) -> "LatticeField":
        LatticeField._check_budget(dim, side)
        shape = (side,) * dim
        real = rng.standard_normal(shape, dtype=np.float64)
        imag = rng.standard_normal(shape, dtype=np.float64)
        return LatticeField((real + 1j * imag).astype(dtype), spacing)

    @staticmethod
    def delta(dim: int, side: int, spacing: float = 1.0) -> "LatticeField":
        LatticeField._check_budget(dim, side)
        v = np.zeros((side,) * dim, dtype=complex)
        v[(0,) * dim] = 1.0
        return LatticeField(v, spacing)

    def axis_frequencies(self) -> np.ndarray:
        """Lattice frequencies per axis, in [-1/2, 1/2) cycles per sample."""
        return np.fft.fftfreq(self.side)

    def frequency_points(self) -> np.ndarray:
        """All lattice frequencies, shape (M^d, d); heavy for large fields."""
        axes = [self.axis_frequencies()] * self.dim
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def norm_lp(self, p: float) -> float:
        a = np.abs(self.values)
        if p == math.inf:
            return float(a.max())
        return float(np.sum(a**p) ** (1.0 / p))

    # -- serialization -----------------------------------------------------

    def to_bytes(self) -> bytes:
        """Binary wire format: magic, version, d, M, spacing, then row-major
        little-endian complex64 values."""
        head = _MAGIC + struct.pack("<BxII d", _VERSION, self.dim, self.side,
                                    self.spacing)
        body = np.ascontiguousarray(self.values, dtype="<c8").tobytes()
        return head + body

    @staticmethod
    def from_bytes(buf: bytes) -> "LatticeField":
        if buf[:4] != _MAGIC:
            raise InvalidArgumentError("bad lattice field magic")
        ver, d, m, spacing = struct.unpack_from("<BxII d", buf, 4)
        if ver != _VERSION:
            raise InvalidArgumentError(f"unsupported lattice field version {ver}")
        off = 4 + struct.calcsize("<BxII d")
        count = m**d
        try:
            vals = np.frombuffer(buf, dtype="<c8", count=count, offset=off)
        except ValueError as exc:
            raise InvalidArgumentError("truncated lattice field payload") from exc
        return LatticeField(vals.reshape((m,) * d).astype(np.complex64), spacing)

    def to_json(self) -> str:
        if self.values.size > 65536:
            raise InvalidArgumentError("JSON form is for small fields; use to_bytes")
        flat = self.values.ravel()
        return json.dumps(
            {
                "dim": self.dim,
                "side": self.side,
                "spacing": self.spacing,
                "values": [[float(z.real), float(z.imag)] for z in flat],
            }
        )

    @staticmethod
    def from_json(text: str) -> "LatticeField":
        d = json.loads(text)
        vals = np.array([complex(re, im) for re, im in d["values"]])
        side, dim = int(d["side"]), int(d["dim"])
        if vals.size != side**dim:
            raise InvalidArgumentError("value count does not match side^dim")
        return LatticeField(vals.reshape((side,) * dim), float(d.get("spacing", 1.0)))


@dataclass(frozen=True)
class SymbolFamily:
    """A parametrized multiplier symbol xi -> m_param(xi) on (n, d) points."""

    name: str
    dim: int
    flavor: str  # "continuous" | "discrete"
    evaluate: Callable[[float, np.ndarray], np.ndarray]
    zero_value: complex = 1.0 + 0.0j

    def __call__(self, param, xi) -> np.ndarray:
        return np.asarray(self.evaluate(param, as_points(xi, self.dim)))


def _euclid(pts: np.ndarray) -> np.ndarray:
    return np.linalg.norm(pts, axis=1)


def _sin_norm(pts: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.sin(math.pi * pts) ** 2, axis=1))


def _check_discrete_domain(pts: np.ndarray):
    if np.any(np.abs(pts) > 0.5 + 1e-9):
        raise InvalidArgumentError("discrete-flavor frequencies live in [-1/2, 1/2]^d")


def poisson_symbol(t: float, xi, dim: int = 1, flavor: str = "continuous"):
    """Poisson semigroup symbol at time t > 0; real values in (0, 1]."""
    if t <= 0:
        raise InvalidArgumentError("semigroup time must be positive")
    pts = as_points(xi, dim)
    if flavor == "continuous":
        mag = _euclid(pts)
    elif flavor == "discrete":
        _check_discrete_domain(pts)
        mag = _sin_norm(pts)
    else:
        raise InvalidArgumentError(f"unknown flavor {flavor!r}")
    out = np.exp(-2.0 * math.pi * t * mag)
    return out if out.size > 1 else float(out[0])


def littlewood_paley_symbol(k: int, xi, dim: int = 1, flavor: str = "continuous"):
    """Dyadic semigroup difference p_{2^k} - p_{2^(k+1)}; nonnegative."""
    lo = poisson_symbol(2.0**k, xi, dim, flavor)
    hi = poisson_symbol(2.0 ** (k + 1), xi, dim, flavor)
    return np.asarray(lo) - np.asarray(hi) if np.ndim(lo) else lo - hi


def poisson_family(dim: int, flavor: str = "continuous") -> SymbolFamily:
    return SymbolFamily(
        name=f"poisson-{flavor}",
        dim=dim,
        flavor=flavor,
        evaluate=lambda t, pts: np.asarray(poisson_symbol(t, pts, dim, flavor)),
        zero_value=1.0,
    )


def littlewood_paley_family(dim: int, flavor: str = "continuous") -> SymbolFamily:
    return SymbolFamily(
        name=f"littlewood-paley-{flavor}",
        dim=dim,
        flavor=flavor,
        evaluate=lambda k, pts: np.asarray(
            littlewood_paley_symbol(int(k), pts, dim, flavor)
        ),
        zero_value=0.0,
    )


def envelope_family(dim: int) -> SymbolFamily:
    """min(2^k |xi|, (2^k |xi|)^-1): the standard single-scale envelope."""

    def ev(k, pts):
        u = 2.0 ** float(k) * _euclid(pts)
        with np.errstate(divide="ignore"):
            return np.minimum(u, np.where(u > 0, 1.0 / u, np.inf))

    return SymbolFamily(name="envelope", dim=dim, flavor="continuous",
                        evaluate=ev, zero_value=0.0)


def cube_average_family(dim: int) -> SymbolFamily:
    """Symbol of the normalized average over the cube t*(-1,1)^d."""

    def ev(t, pts):
        if t <= 0:
            raise InvalidArgumentError("cube scale must be positive")
        return np.prod(np.sinc(2.0 * t * pts), axis=1)

    return SymbolFamily(name="cube-average", dim=dim, flavor="continuous",
                        evaluate=ev, zero_value=1.0)


def apply_multiplier(field: LatticeField, symbol) -> LatticeField:
    """Apply a Fourier multiplier to a lattice field.

    symbol may be an ndarray of shape (M,)*d (values on the fftfreq grid), a
    callable on (n, d) frequency points, or a sequence of d per-axis arrays
    for a separable (tensor product) symbol.
    """
    shape = field.values.shape
    # scipy.fft keeps complex64 fields in single precision end to end
    spec = sfft.fftn(field.values)
    if callable(symbol):
        pts = field.frequency_points()
        sym = np.asarray(symbol(pts)).reshape(shape)
        spec = spec * sym
    elif isinstance(symbol, np.ndarray):
        if symbol.shape != shape:
            raise InvalidArgumentError("symbol array must match the field shape")
        spec = spec * symbol
    elif isinstance(symbol, (list, tuple)):
        if len(symbol) != field.dim:
            raise InvalidArgumentError("separable symbol needs one array per axis")
        for ax, s in enumerate(symbol):
            s = np.asarray(s)
            if s.shape != (field.side,):
                raise InvalidArgumentError("per-axis symbol must have length M")
            shape_ax = [1] * field.dim
            shape_ax[ax] = field.side
            spec *= s.reshape(shape_ax)
    else:
        raise InvalidArgumentError("unsupported symbol type")
    out = sfft.ifftn(spec)
    return LatticeField(out.astype(field.values.dtype, copy=False), field.spacing)


def off_diagonal_decay(mk: SymbolFamily, sk: SymbolFamily, j: int,
                       k_range: Iterable[int], xi) -> float:
    """sup over the xi grid of (sum_k |mk_k(xi) * sk_{k+j}(xi)|^2)^(1/2).

    This is the exact Plancherel quantity on the grid; tails beyond k_range
    are the caller's bookkeeping (the experiment runners bound them from the
    envelope and report them separately).
    """
    pts = as_points(xi, mk.dim)
    if np.any(np.all(pts == 0.0, axis=1)):
        raise InvalidArgumentError("frequency grid must exclude 0")
    total = np.zeros(pts.shape[0])
    for k in k_range:
        prod = np.abs(mk.evaluate(k, pts) * sk.evaluate(k + j, pts))
        total += prod**2
    return float(np.sqrt(total.max()))


@dataclass(frozen=True)
class EnvelopeReport:
    """Measured constants for low/high-frequency envelope bounds of a family.

    low covers |m_t(xi) - m_t(0)| <= C * omega(t q(xi)) on {t q <= 1};
    high covers |m_t(xi)| <= C * omega(1 / (t q(xi))) on {t q >= 1};
    lipschitz covers |m((t+h) xi) - m(t xi)| <= C * h / t when requested.
    """

    low_max_ratio: float
    high_max_ratio: float
    low_count: int
    high_count: int
    lipschitz_max_ratio: float | None = None
    constant: float | None = None

    @property
    def passed(self) -> bool | None:
        if self.constant is None:
            return None
        worst = max(self.low_max_ratio, self.high_max_ratio,
                    self.lipschitz_max_ratio or 0.0)
        return worst <= self.constant

    def as_dict(self) -> dict:
        return {
            "low_max_ratio": self.low_max_ratio,
            "high_max_ratio": self.high_max_ratio,
            "low_count": self.low_count,
            "high_count": self.high_count,
            "lipschitz_max_ratio": self.lipschitz_max_ratio,
            "constant": self.constant,
            "passed": self.passed,
        }


def symbol_envelope_check(family: SymbolFamily, omega, quasi_norm,
                          t_grid: Sequence[float], xi,
                          constant: float | None = None,
                          lipschitz_fractions: Sequence[float] | None = None,
                          ) -> EnvelopeReport:
    """Measure how tightly a family obeys its modulus envelopes.

    omega is a modulus of continuity, quasi_norm a callable on (n, d) points.
    For each t and xi the scale variable is u = t * quasi_norm(xi); ratios are
    accumulated over {u <= 1} against omega(u) (difference from the declared
    zero value) and over {u >= 1} against omega(1/u) (plain size).
    """
    pts = as_points(xi, family.dim)
    q = np.asarray(quasi_norm(pts), dtype=float)
    if np.any(q <= 0):
        raise InvalidArgumentError("quasi-norm must be positive on the grid")
    low_max = 0.0
    high_max = 0.0
    low_n = 0
    high_n = 0
    lip_max = 0.0 if lipschitz_fractions else None
    for t in t_grid:
        if t <= 0:
            raise InvalidArgumentError("scale grid must be positive")
        vals = np.asarray(family.evaluate(t, pts))
        u = t * q
        lo = u <= 1.0
        hi = u >= 1.0
        if np.any(lo):
            dev = np.abs(vals[lo] - family.zero_value)
            low_max = max(low_max, float(np.max(dev / omega(u[lo]))))
            low_n += int(lo.sum())
        if np.any(hi):
            size = np.abs(vals[hi])
            high_max = max(high_max, float(np.max(size / omega(1.0 / u[hi]))))
            high_n += int(hi.sum())
        if lipschitz_fractions:
            for frac in lipschitz_fractions:
                h = frac * t
                step = np.abs(np.asarray(family.evaluate(t + h, pts)) - vals)
                lip_max = max(lip_max, float(np.max(step / (h / t))))
    return EnvelopeReport(
        low_max_ratio=low_max,
        high_max_ratio=high_max,
        low_count=low_n,
        high_count=high_n,
        lipschitz_max_ratio=lip_max,
        constant=constant,
    )
