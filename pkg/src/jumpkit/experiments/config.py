"""Experiment configurations.

Every experiment is described by a small pydantic model with a ``kind``
discriminator. Configs are pure data: the same config plus the same seed must
reproduce a run bit for bit, so everything that influences a run lives here
and is covered by the config hash. The output path is the one exception; it
is carried for convenience but excluded from the hash, since where a report
lands cannot change what it contains.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from ..errors import InvalidArgumentError

# hard cap on lattice size, matching the LatticeField budget
_MAX_LATTICE_LOG2 = 26


class FixedPathSpec(BaseModel):
    """A hand-picked atom pushed through the sweep pipeline unchanged.

    Times may be dyadic strings like "5/2^2"; values may be reals or
    [re, im] pairs. ``expected`` is an optional reference seminorm used to
    fill the report's reference column.
    """

    model_config = {"extra": "forbid"}

    times: tuple[Union[str, int, float], ...]
    values: tuple[Union[float, tuple[float, float]], ...]
    weight: float = 1.0
    expected: Optional[float] = None

    @model_validator(mode="after")
    def _check(self) -> "FixedPathSpec":
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")
        if len(self.times) < 2:
            raise ValueError("a path needs at least two samples")
        if self.weight <= 0:
            raise ValueError("weight must be positive")
        return self


class DimensionSweepConfig(BaseModel):
    """Random-field jump statistics across lattice dimensions.

    For each d, ``trials`` seeded fields on Z_side^d are averaged over the
    discrete cubes of the given radii; the per-point path of averages feeds
    the jump seminorm, normalized by the field's l^p norm. The convex
    variants and fixed paths are opt-in extras.
    """

    model_config = {"extra": "forbid"}

    kind: Literal["dimension-sweep"] = "dimension-sweep"
    seed: int = Field(default=0, ge=0, lt=2**64)
    out: Optional[str] = None
    side: int = Field(default=16, ge=2)
    dims: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    radii: tuple[int, ...] = (1, 2, 4)
    exponents: tuple[float, ...] = (1.6, 2.0, 3.0)
    trials: int = Field(default=50, ge=1)
    precision: Literal["single", "double"] = "single"
    convex_qs: tuple[float, ...] = ()
    convex_trials: int = Field(default=5, ge=1)
    fixed_paths: tuple[FixedPathSpec, ...] = ()

    @field_validator("dims")
    @classmethod
    def _dims_ok(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v or any(d < 1 for d in v) or list(v) != sorted(set(v)):
            raise ValueError("dims must be strictly increasing positive integers")
        return v

    @field_validator("exponents")
    @classmethod
    def _exponents_ok(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if not v or any(not (1.0 < p < math.inf) for p in v):
            raise ValueError("exponents must lie in (1, inf)")
        return v

    @field_validator("convex_qs")
    @classmethod
    def _qs_ok(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if any(q < 1.0 for q in v):
            raise ValueError("convex exponents must satisfy q >= 1")
        return v

    @model_validator(mode="after")
    def _budget(self) -> "DimensionSweepConfig":
        if len(self.radii) < 2 or list(self.radii) != sorted(set(self.radii)):
            raise ValueError("radii must be at least two strictly increasing integers")
        if any(n < 1 or 2 * n + 1 > self.side for n in self.radii):
            raise ValueError("cube radii must satisfy 1 <= N and 2N+1 <= side")
        bits = max(self.dims) * math.log2(self.side)
        if bits > _MAX_LATTICE_LOG2:
            raise ValueError(
                f"lattice budget exceeded: side^max(dims) is 2^{bits:.1f} "
                f"points, cap is 2^{_MAX_LATTICE_LOG2}"
            )
        return self


class VdcSweepConfig(BaseModel):
    """Oscillatory-integral bound ratios over a phase/amplitude corpus.

    The one-variable rows sweep monomial phase orders against the configured
    lambda grid; the two-variable rows sweep a linear and a quadratic phase
    over the radius grid. ``constant`` is the flag threshold for ratios.
    """

    model_config = {"extra": "forbid"}

    kind: Literal["vdc-sweep"] = "vdc-sweep"
    seed: int = Field(default=0, ge=0, lt=2**64)
    out: Optional[str] = None
    orders: tuple[int, ...] = (1, 2, 3)
    lambdas: tuple[float, ...] = (
        10.0, 15.8, 25.1, 39.8, 63.1, 100.0, 158.0, 251.0, 398.0, 631.0, 1000.0,
    )
    amplitudes: tuple[Literal["indicator", "hat"], ...] = ("indicator", "hat")
    support: tuple[float, float] = (0.0, 1.0)
    multidim: bool = True
    radii: tuple[float, ...] = (1.0, 1.78, 3.16, 5.62, 10.0, 17.8, 31.6)
    linear_coeffs: tuple[float, float] = (1.0, 0.7)
    quadratic_coeffs: tuple[float, float, float] = (1.0, 0.5, 0.7)
    constant: float = Field(default=10.0, gt=0)
    grid_points: int = Field(default=128, ge=2)

    @field_validator("orders")
    @classmethod
    def _orders_ok(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v or any(k < 1 for k in v):
            raise ValueError("phase orders must be positive integers")
        return v

    @field_validator("lambdas", "radii")
    @classmethod
    def _positive_grid(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if any(x <= 0 for x in v) or list(v) != sorted(v):
            raise ValueError("grids must be positive and nondecreasing")
        return v

    @model_validator(mode="after")
    def _support_ok(self) -> "VdcSweepConfig":
        a, b = self.support
        if not a < b:
            raise ValueError("amplitude support must be a nonempty interval")
        return self


class SymbolEnvelopeConfig(BaseModel):
    """Multiplier envelope and decay checks.

    Four independent checks share one config: the resolution-of-identity
    telescoping defect, the off-diagonal l^2 decay of multiplier pieces
    against dyadic frequency envelopes, the discrete cube symbol bounds
    across dimensions, and the parabola increment-symbol envelopes for the
    reciprocal kernel.
    """

    model_config = {"extra": "forbid"}

    kind: Literal["symbol-envelope"] = "symbol-envelope"
    seed: int = Field(default=0, ge=0, lt=2**64)
    out: Optional[str] = None
    checks: tuple[
        Literal[
            "resolution-identity",
            "off-diagonal",
            "discrete-bounds",
            "parabola-envelope",
        ],
        ...,
    ] = (
        "resolution-identity",
        "off-diagonal",
        "discrete-bounds",
        "parabola-envelope",
    )
    flavor: Literal["continuous", "discrete"] = "continuous"
    dims: tuple[int, ...] = (1, 2, 4)
    freqs: int = Field(default=1000, ge=1)
    k_cap: int = Field(default=20, ge=1)
    j_range: int = Field(default=20, ge=0)
    k_range: int = Field(default=40, ge=1)
    n_max: int = Field(default=64, ge=1)
    bound_dims: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    t_exponents: tuple[int, ...] = (-4, -3, -2, -1, 0, 1, 2, 3, 4)
    kappa: float = Field(default=0.5, gt=0, lt=1)
    scale_log_range: tuple[int, int] = (-8, 5)

    @field_validator("dims", "bound_dims")
    @classmethod
    def _dims_ok(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v or any(d < 1 for d in v) or list(v) != sorted(set(v)):
            raise ValueError("dims must be strictly increasing positive integers")
        return v

    @model_validator(mode="after")
    def _ranges_ok(self) -> "SymbolEnvelopeConfig":
        lo, hi = self.scale_log_range
        if not lo < hi:
            raise ValueError("scale_log_range must be increasing")
        if not self.checks:
            raise ValueError("at least one check required")
        return self


class BodySpecModel(BaseModel):
    """Wire form of a convex body: an l^q ball or an axis-aligned box."""

    model_config = {"extra": "forbid"}

    shape: Literal["box", "ball"]
    dim: int = Field(ge=1)
    q: Optional[Union[float, Literal["inf"]]] = None
    radius: float = Field(default=1.0, gt=0)
    half_widths: Optional[tuple[float, ...]] = None
    center: Optional[tuple[float, ...]] = None

    @model_validator(mode="after")
    def _shape_ok(self) -> "BodySpecModel":
        if self.shape == "ball":
            if self.q is None:
                raise ValueError("balls need an exponent q")
            if self.q != "inf" and float(self.q) < 1.0:
                raise ValueError("ball exponent must satisfy q >= 1")
        else:
            if self.half_widths is None or len(self.half_widths) != self.dim:
                raise ValueError("boxes need one half-width per axis")
            if any(h <= 0 for h in self.half_widths):
                raise ValueError("half-widths must be positive")
        if self.center is not None and len(self.center) != self.dim:
            raise ValueError("center length must match dim")
        return self

    def label(self) -> str:
        if self.shape == "box":
            return f"box{self.dim}d"
        return f"l{self.q}-ball{self.dim}d"

    def to_body(self):
        from ..bodies import ConvexBodySpec

        if self.shape == "box":
            return ConvexBodySpec.box(self.half_widths, self.center)
        q = math.inf if self.q == "inf" else float(self.q)
        return ConvexBodySpec.lq_ball(self.dim, q, self.radius)


class BoundaryMeasureConfig(BaseModel):
    """Monte Carlo boundary-shell measures over a body/shell-width sweep."""

    model_config = {"extra": "forbid"}

    kind: Literal["boundary-measure"] = "boundary-measure"
    seed: int = Field(default=0, ge=0, lt=2**64)
    out: Optional[str] = None
    bodies: tuple[BodySpecModel, ...] = (
        BodySpecModel(shape="box", dim=2, half_widths=(0.5, 0.5)),
        BodySpecModel(shape="ball", dim=2, q=2.0),
        BodySpecModel(shape="ball", dim=2, q=1.0),
        BodySpecModel(shape="ball", dim=2, q="inf"),
        BodySpecModel(shape="ball", dim=3, q=2.0),
        BodySpecModel(shape="box", dim=3, half_widths=(0.5, 0.8, 1.1)),
    )
    shell_exponents: tuple[int, ...] = (2, 3, 4, 5, 6, 7, 8)
    samples: int = Field(default=1_000_000, ge=1)

    @field_validator("shell_exponents")
    @classmethod
    def _shells_ok(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v or any(j < 1 for j in v) or list(v) != sorted(set(v)):
            raise ValueError("shell exponents must be increasing positive integers")
        return v

    @model_validator(mode="after")
    def _bodies_ok(self) -> "BoundaryMeasureConfig":
        if not self.bodies:
            raise ValueError("at least one body required")
        return self


class JumpCorpusConfig(BaseModel):
    """Fuzz corpora for the pathwise jump inequalities.

    Three sub-corpora: the bridge inequality lambda N^(1/r) <= V^r on random
    paths, the level-decomposition variation bound on dyadic-grid paths, and
    the long/short split constant.
    """

    model_config = {"extra": "forbid"}

    kind: Literal["jump-corpus"] = "jump-corpus"
    seed: int = Field(default=0, ge=0, lt=2**64)
    out: Optional[str] = None
    bridge_paths: int = Field(default=100_000, ge=1)
    max_len: int = Field(default=32, ge=2)
    rs: tuple[float, ...] = (1.0, 1.5, 2.0, 3.0)
    lambdas: tuple[float, ...] = (0.5, 1.0, 1.5)
    lewko_paths: int = Field(default=10_000, ge=0)
    lewko_max_level: int = Field(default=5, ge=1)
    longshort_paths: int = Field(default=10_000, ge=0)

    @field_validator("rs")
    @classmethod
    def _rs_ok(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if not v or any(r < 1.0 for r in v):
            raise ValueError("variation exponents must satisfy r >= 1")
        return v

    @field_validator("lambdas")
    @classmethod
    def _lambdas_ok(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if not v or any(x <= 0 for x in v):
            raise ValueError("thresholds must be positive")
        return v


ExperimentConfig = Union[
    DimensionSweepConfig,
    VdcSweepConfig,
    SymbolEnvelopeConfig,
    BoundaryMeasureConfig,
    JumpCorpusConfig,
]

_KIND_TO_MODEL = {
    "dimension-sweep": DimensionSweepConfig,
    "vdc-sweep": VdcSweepConfig,
    "symbol-envelope": SymbolEnvelopeConfig,
    "boundary-measure": BoundaryMeasureConfig,
    "jump-corpus": JumpCorpusConfig,
}


def parse_config(data: dict) -> ExperimentConfig:
    """Validate a raw mapping into the typed config for its kind."""
    if not isinstance(data, dict):
        raise InvalidArgumentError("config must be a JSON object")
    kind = data.get("kind")
    model = _KIND_TO_MODEL.get(kind)
    if model is None:
        known = ", ".join(sorted(_KIND_TO_MODEL))
        raise InvalidArgumentError(f"unknown experiment kind {kind!r}; known: {known}")
    try:
        return model.model_validate(data)
    except Exception as exc:
        raise InvalidArgumentError(f"invalid {kind} config: {exc}") from exc


def canonical_json(config: ExperimentConfig) -> str:
    """Canonical serialization: sorted keys, no whitespace, output path dropped."""
    payload = config.model_dump(mode="json", exclude={"out"})
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def config_hash(config: ExperimentConfig) -> str:
    """Hex digest identifying the run-determining part of a config."""
    return hashlib.sha256(canonical_json(config).encode()).hexdigest()
