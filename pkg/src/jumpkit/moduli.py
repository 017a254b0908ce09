"""Moduli of continuity and their Dini-type integral norms.

A modulus is a nondecreasing subadditive function omega: [0, inf) -> [0, inf)
with omega(0) = 0. The class is closed under sums, composition, omega^theta,
and omega(t^theta) for theta in (0, 1]; constructors below preserve these
properties and spot-check subadditivity for tabulated data.

The two integral norms are int_0^1 omega(t) dt/t and
int_0^1 omega(t) |log t| dt/t, computed by geometric subdivision toward 0
with Gauss-Legendre panels and a geometric tail extrapolation. A divergent
integral is reported as a flagged result, not an exception.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


@dataclass(frozen=True)
class ModulusOfContinuity:
    """Vectorized modulus with a form tag for serialization and reporting."""

    fn: Callable[[np.ndarray], np.ndarray]
    form: str

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = np.asarray(self.fn(np.maximum(t_arr, 0.0)), dtype=float)
        return out if out.shape else float(out)

    @staticmethod
    def power(theta: float, scale: float = 1.0) -> "ModulusOfContinuity":
        """omega(t) = scale * t^theta; subadditive exactly when theta <= 1."""
        if not (0.0 < theta <= 1.0):
            raise InvalidArgumentError("power modulus needs theta in (0, 1]")
        if scale <= 0:
            raise InvalidArgumentError("power modulus needs scale > 0")
        return ModulusOfContinuity(
            fn=lambda t: scale * np.power(t, theta),
            form=f"power(theta={theta:g}, scale={scale:g})",
        )

    @staticmethod
    def from_table(ts, ws) -> "ModulusOfContinuity":
        """Piecewise-linear interpolant through (0,0) and the given nodes.

        Constant beyond the last node. Nondecreasing is required; a
        subadditivity spot-check on node sums must pass to 1e-12.
        """
        ts = np.asarray(ts, dtype=float)
        ws = np.asarray(ws, dtype=float)
        if ts.ndim != 1 or ts.shape != ws.shape or ts.size == 0:
            raise InvalidArgumentError("table needs matching 1-d node arrays")
        if np.any(ts <= 0) or np.any(np.diff(ts) <= 0):
            raise InvalidArgumentError("table abscissae must be positive increasing")
        if np.any(ws < 0) or np.any(np.diff(ws) < 0):
            raise InvalidArgumentError("table values must be nonnegative nondecreasing")
        xs = np.concatenate(([0.0], ts))
        ys = np.concatenate(([0.0], ws))
        mod = ModulusOfContinuity(
            fn=lambda t: np.interp(t, xs, ys),
            form="table",
        )
        worst = mod.subadditivity_defect(ts)
        if worst > 1e-12:
            raise InvalidArgumentError(f"table is not subadditive (defect {worst:.3g})")
        return mod

    def subadditivity_defect(self, grid) -> float:
        """max over grid pairs of omega(t+s) - omega(t) - omega(s), clipped at 0."""
        g = np.asarray(grid, dtype=float)
        t = g[:, None]
        s = g[None, :]
        defect = self(t + s) - self(t) - self(s)
        return float(max(0.0, np.max(defect)))

    def plus(self, other: "ModulusOfContinuity") -> "ModulusOfContinuity":
        return ModulusOfContinuity(
            fn=lambda t: self.fn(t) + other.fn(t),
            form=f"sum({self.form}, {other.form})",
        )

    def compose(self, inner: "ModulusOfContinuity") -> "ModulusOfContinuity":
        """omega_outer(omega_inner(t)); moduli are closed under composition."""
        return ModulusOfContinuity(
            fn=lambda t: self.fn(np.asarray(inner.fn(t), dtype=float)),
            form=f"compose({self.form}, {inner.form})",
        )

    def power_of(self, theta: float) -> "ModulusOfContinuity":
        """omega^theta for theta in (0, 1]."""
        if not (0.0 < theta <= 1.0):
            raise InvalidArgumentError("power_of needs theta in (0, 1]")
        return ModulusOfContinuity(
            fn=lambda t: np.power(self.fn(t), theta),
            form=f"({self.form})^{theta:g}",
        )

    def precompose_power(self, theta: float) -> "ModulusOfContinuity":
        """omega(t^theta) for theta in (0, 1]."""
        if not (0.0 < theta <= 1.0):
            raise InvalidArgumentError("precompose_power needs theta in (0, 1]")
        return ModulusOfContinuity(
            fn=lambda t: self.fn(np.power(t, theta)),
            form=f"{self.form} o t^{theta:g}",
        )


@dataclass(frozen=True)
class DiniResult:
    """Integral norms of a modulus over (0, 1], with tail bookkeeping.

    dini     = int_0^1 omega(t) dt/t
    log_dini = int_0^1 omega(t) |log t| dt/t
    The dyadic sums sum_j omega(2^-j) and sum_j j*omega(2^-j) (j >= 0) are the
    standard comparable quantities. Divergent integrals are flagged with
    infinite values. tail_estimate is the extrapolated geometric tail that was
    added past the deepest level actually integrated.
    """

    dini: float
    log_dini: float
    dyadic_sum: float
    dyadic_log_sum: float
    divergent: bool
    levels_used: int
    tail_estimate: float


def _panel(omega: ModulusOfContinuity, j: int) -> tuple[float, float]:
    """(int omega dt/t, int omega*|log t| dt/t) over [2^-(j+1), 2^-j]."""
    # t = 2^-j * u with u in [1/2, 1]; dt/t = du/u; |log t| = j*log2 - log u
    u = 0.75 + 0.25 * _GL_NODES
    w = 0.25 * _GL_WEIGHTS
    vals = omega(2.0**-j * u)
    base = float(np.sum(w * vals / u))
    logged = float(np.sum(w * vals * (j * math.log(2.0) - np.log(u)) / u))
    return base, logged


def dini_norms(omega: ModulusOfContinuity, tol: float = 1e-12, max_levels: int = 20000) -> DiniResult:
    """Dini and log-Dini norms by dyadic subdivision with tail extrapolation.

    Levels j = 0, 1, ... cover [2^-(j+1), 2^-j]. Iteration stops once the
    extrapolated geometric tail drops below tol (the tail is then added), or
    declares divergence when the level sums stop decaying.
    """
    dini = 0.0
    log_dini = 0.0
    dyadic = 0.0
    dyadic_log = 0.0
    prev = None
    ratios: list[float] = []
    for j in range(max_levels):
        base, logged = _panel(omega, j)
        dini += base
        log_dini += logged
        w_j = omega(2.0**-j)
        dyadic += w_j
        dyadic_log += j * w_j
        if prev is not None and prev > 0:
            ratios.append(base / prev)
        prev = base
        if base == 0.0:
            return DiniResult(dini, log_dini, dyadic, dyadic_log, False, j + 1, 0.0)
        if len(ratios) >= 3:
            rho = max(ratios[-3:])
            if rho >= 1.0 - 1e-9 and j >= 60:
                return DiniResult(
                    math.inf, math.inf, math.inf, math.inf, True, j + 1, math.inf
                )
            if rho < 1.0:
                # geometric tails: sum_{m>=1} base*rho^m and the log-weighted
                # analogue sum_{m>=1} ((j+m)*log2 + O(1)) * base * rho^m
                tail = base * rho / (1.0 - rho)
                tail_log = base * math.log(2.0) * (
                    j * rho / (1.0 - rho) + rho / (1.0 - rho) ** 2
                ) + tail  # + tail covers the bounded -log u part of each panel
                if tail < tol and tail_log < tol:
                    w_tail = omega(2.0 ** -(j + 1))
                    rho_w = rho  # dyadic terms decay with the same ratio
                    dy_tail = w_tail * rho_w / (1.0 - rho_w)
                    dy_log_tail = w_tail * (
                        (j + 1) * rho_w / (1.0 - rho_w) + rho_w / (1.0 - rho_w) ** 2
                    )
                    return DiniResult(
                        dini + tail,
                        log_dini + tail_log,
                        dyadic + dy_tail,
                        dyadic_log + dy_log_tail,
                        False,
                        j + 1,
                        max(tail, tail_log),
                    )
    return DiniResult(math.inf, math.inf, math.inf, math.inf, True, max_levels, math.inf)
