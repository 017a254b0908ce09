"""Jump counting and variation seminorms for finitely sampled paths.

A path is a complex-valued function sampled at finitely many rational times.
The two central functionals:

* jump count at threshold lambda: the largest J such that some increasing
  subsequence t_0 < ... < t_J of sample times has |f(t_j) - f(t_{j-1})| >=
  lambda for every consecutive pair. Zero means "no lambda-jump".
* r-variation: sup over increasing subsequences of
  (sum |f(t_j) - f(t_{j-1})|^r)^(1/r), with the r = infinity convention
  max over pairs t_0 < t_1 of |f(t_1) - f(t_0)|.

Both are computed by exact dynamic programs over all subsequences, not by the
single-anchor greedy scan (which undercounts: values [5, 0, 10] at threshold 6
hold one jump that no chain starting at the first sample sees). Batch variants
run the same DP vectorized across many paths sharing a grid length.

Threshold comparisons are left-closed with a 1e-12 relative slack so that
float noise on an exactly-achieved magnitude does not drop a jump.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dyadic import floor_log2, is_two_power, two_power_exponent
from .errors import InvalidArgumentError, NumericFailureError

# Relative slack for left-closed threshold tests: magnitude m counts against
# threshold lam iff m >= lam * (1 - THRESHOLD_SLACK).
THRESHOLD_SLACK = 1e-12


def meets_threshold(magnitude, lam):
    """Left-closed comparison with relative slack; works on arrays."""
    return magnitude >= lam * (1.0 - THRESHOLD_SLACK)


@dataclass(frozen=True)
class SampledPath:
    """A finite complex-valued path with exact rational sample times.

    times: strictly increasing, nonnegative rationals (dyadic rationals
    serialize; general rationals are fine in memory). values: one complex
    number per time.
    """

    times: tuple[Fraction, ...]
    values: tuple[complex, ...]

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise InvalidArgumentError("times and values must have equal length")
        if len(self.times) == 0:
            raise InvalidArgumentError("a path needs at least one sample")
        for t in self.times:
            if t < 0:
                raise InvalidArgumentError("sample times must be nonnegative")
        for a, b in zip(self.times, self.times[1:]):
            if not a < b:
                raise InvalidArgumentError("sample times must be strictly increasing")

    @staticmethod
    def make(times: Sequence, values: Sequence) -> "SampledPath":
        """Build from convenience types (ints, floats, strings for times)."""
        ts = tuple(t if isinstance(t, Fraction) else Fraction(t) for t in times)
        vs = tuple(complex(v) for v in values)
        return SampledPath(ts, vs)

    def __len__(self) -> int:
        return len(self.times)

    def subpath(self, indices: Sequence[int]) -> "SampledPath | None":
        """Restriction to a subset of sample indices; None if empty."""
        idx = list(indices)
        if not idx:
            return None
        return SampledPath(
            tuple(self.times[i] for i in idx),
            tuple(self.values[i] for i in idx),
        )


@dataclass(frozen=True)
class JumpProfile:
    """Breakpoint description of lambda -> jump count for one path.

    breakpoints: pairs (magnitude, count) with magnitudes strictly increasing
    and counts strictly decreasing; magnitude m is the largest threshold at
    which the count is still `count`. The count at any lambda > 0 is the count
    of the first breakpoint with magnitude >= lambda, and 0 beyond the last.
    """

    breakpoints: tuple[tuple[float, int], ...]

    def __post_init__(self):
        mags = [m for m, _ in self.breakpoints]
        counts = [c for _, c in self.breakpoints]
        if any(m <= 0 for m in mags):
            raise InvalidArgumentError("breakpoint magnitudes must be positive")
        if any(b <= a for a, b in zip(mags, mags[1:])):
            raise InvalidArgumentError("breakpoint magnitudes must strictly increase")
        if any(b >= a for a, b in zip(counts, counts[1:])):
            raise InvalidArgumentError("breakpoint counts must strictly decrease")

    def count_at(self, lam: float) -> int:
        if lam <= 0:
            raise InvalidArgumentError("threshold must be positive")
        for mag, count in self.breakpoints:
            if meets_threshold(mag, lam):
                return count
        return 0

    def sup_scaled_count(self) -> float:
        """sup over lambda of lambda * count^(1/2), attained at a breakpoint."""
        best = 0.0
        for mag, count in self.breakpoints:
            best = max(best, mag * math.sqrt(count))
        return best


@dataclass(frozen=True)
class FieldOfPaths:
    """A weighted family of paths, one per atom of the spatial measure.

    Models a function of a spatial variable sampled in time: atom weights are
    the measures of the spatial cells (counting measure uses weight 1). Atoms
    may have different time grids; only the counts enter the seminorm.
    """

    atoms: tuple[tuple[float, SampledPath], ...]

    def __post_init__(self):
        if len(self.atoms) == 0:
            raise InvalidArgumentError("a field needs at least one atom")
        if any(w <= 0 for w, _ in self.atoms):
            raise InvalidArgumentError("atom weights must be positive")


@dataclass(frozen=True)
class ExponentRecord:
    """Derived interpolation exponents for a pair 1 <= q0 < q1 <= 2."""

    q0: float
    q1: float
    theta: float
    nu: float
    q_theta: float

    def identity_residuals(self) -> dict[str, float]:
        """Absolute residuals of the algebraic identities tying the exponents."""
        q0, q1, theta, nu = self.q0, self.q1, self.theta, self.nu
        return {
            "one_minus_theta": abs((1 - theta) - q0 / 2),
            "nu_theta": abs(nu * theta - (2 - q1) / 2),
            "nu_one_minus_theta": abs(nu * (1 - theta) - ((2 - q1) / (2 - q0)) * (q0 / 2)),
            "one_minus_nu": abs((1 - nu) - (q1 - q0) / (2 - q0)),
            "q_theta_interpolation": abs(1 / self.q_theta - ((1 - theta) / q0 + theta / q1)),
            "q_theta_closed_form": abs(1 / self.q_theta - (0.5 + (1 - q0 / 2) / q1)),
        }


# ---------------------------------------------------------------------------
# scalar functionals


def _abs_diff_matrix(values: Sequence[complex]) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    return np.abs(v[None, :] - v[:, None])


def jump_count(path: SampledPath, lam: float) -> int:
    """Largest number of consecutive moves of size >= lam along a subsequence.

    Exact O(n^2) chain DP; equals exhaustive search over all increasing
    subsequences. Returns 0 when no pair of samples is lam-separated.
    """
    if lam <= 0:
        raise InvalidArgumentError("jump threshold must be positive")
    n = len(path)
    if n < 2:
        return 0
    d = _abs_diff_matrix(path.values)
    ok = meets_threshold(d, lam)
    best = [0] * n  # most jumps of an admissible chain ending at sample j
    for j in range(1, n):
        bj = 0
        for i in range(j):
            if ok[i, j] and best[i] + 1 > bj:
                bj = best[i] + 1
        best[j] = bj
    return max(best)


def variation(path: SampledPath, r) -> float:
    """r-variation of the path; r = math.inf gives the max pairwise gap."""
    n = len(path)
    if n < 2:
        return 0.0
    d = _abs_diff_matrix(path.values)
    if r == math.inf:
        return float(np.max(d))
    r = float(r)
    if r <= 0:
        raise InvalidArgumentError("variation exponent must be positive")
    powered = d**r
    best = np.zeros(n)  # largest sum of |increment|^r over chains ending at j
    for j in range(1, n):
        best[j] = max(best[i] + powered[i, j] for i in range(j))
    return float(np.max(best) ** (1.0 / r))


def jump_breakpoints(path: SampledPath) -> JumpProfile:
    """All thresholds where the jump count changes, with the counts attained."""
    n = len(path)
    if n < 2:
        return JumpProfile(())
    v = np.asarray(path.values, dtype=complex).reshape(n, 1)
    mu = chain_thresholds_batch(v)[:, 0]  # mu[c-1] = best min-gap of a c-jump chain
    entries = []
    for c in range(n - 1, 0, -1):
        m = float(mu[c - 1])
        nxt = float(mu[c]) if c < n - 1 else 0.0
        if m > 0 and m > nxt:
            entries.append((m, c))
    return JumpProfile(tuple(entries))


def jump_seminorm(field: FieldOfPaths, p: float) -> float:
    """sup over lambda of lambda * (sum_atoms w * N_lambda^(p/2))^(1/p).

    The map lambda -> count is piecewise constant and left-continuous, so the
    sup is attained at a breakpoint magnitude of some atom; this evaluates the
    exact sup over the union of breakpoints, not a discretization.
    """
    if not (1.0 < p < math.inf):
        raise InvalidArgumentError("jump seminorm needs 1 < p < infinity")
    events_mag: list[float] = []
    events_drop: list[float] = []
    for weight, path in field.atoms:
        prof = jump_breakpoints(path).breakpoints
        for i, (mag, count) in enumerate(prof):
            nxt = prof[i + 1][1] if i + 1 < len(prof) else 0
            events_mag.append(mag)
            events_drop.append(weight * (count ** (p / 2) - nxt ** (p / 2)))
    if not events_mag:
        return 0.0
    mags = np.asarray(events_mag)
    drops = np.asarray(events_drop)
    order = np.argsort(-mags, kind="stable")
    mags, drops = mags[order], drops[order]
    running = np.cumsum(drops)  # sum of w * N^(p/2) over atoms, at lambda = mags[i]
    # ties: only the last entry of an equal-magnitude run has the full sum,
    # and it dominates the earlier ones anyway (same magnitude, larger sum).
    candidates = mags * running ** (1.0 / p)
    return float(np.max(candidates))


def lewko_bound(path: SampledPath, r: float) -> tuple[float, float]:
    """r-variation versus its dyadic-level domination on a full dyadic grid.

    Requires times = {u * 2^-N : 0 <= u <= 2^(k+N)} for integers k, N with
    k+N >= 0. Returns (lhs, rhs) where lhs is the r-variation and rhs is
    2^(1-1/r) * sum over levels l of the l-th level increment sum
    (sum_m |g(2^(k-l) (m+1)) - g(2^(k-l) m)|^r)^(1/r), levels l = 0 .. k+N.
    """
    if not (1.0 <= r < math.inf):
        raise InvalidArgumentError("dyadic-level bound needs 1 <= r < infinity")
    times = path.times
    n = len(times)
    if n < 2:
        raise InvalidArgumentError("dyadic grid needs at least two samples")
    if times[0] != 0:
        raise InvalidArgumentError("dyadic grid must start at 0")
    h = times[1] - times[0]
    if not is_two_power(h):
        raise InvalidArgumentError("dyadic grid spacing must be a power of two")
    for i, t in enumerate(times):
        if t != i * h:
            raise InvalidArgumentError("times must form a uniform dyadic grid")
    if not is_two_power(times[-1]):
        raise InvalidArgumentError("dyadic grid must end at a power of two")
    depth = n - 1  # = 2^(k+N)
    if depth & (depth - 1):
        raise InvalidArgumentError("dyadic grid must have 2^(k+N) + 1 samples")
    levels = depth.bit_length() - 1  # k + N

    lhs = variation(path, r)
    v = np.asarray(path.values, dtype=complex)
    total = 0.0
    for level in range(levels + 1):
        stride = 1 << (levels - level)
        sub = v[::stride]
        inc = np.abs(np.diff(sub))
        total += float(np.sum(inc**r) ** (1.0 / r))
    rhs = 2 ** (1.0 - 1.0 / r) * total
    return lhs, rhs


def long_short_split(path: SampledPath, lam: float) -> tuple[float, float, float]:
    """Dyadic long/short decomposition of the scaled jump count.

    Returns (long, short, lhs):
      lhs   = lam * N_lam(full path)^(1/2),
      long  = lam * N_{lam/3}(path restricted to times 2^k)^(1/2),
      short = (sum over blocks [2^k, 2^(k+1)) of lam^2 * N_lam(block))^(1/2).
    Times equal to 0 sit in no block and are not powers of two.
    """
    if lam <= 0:
        raise InvalidArgumentError("jump threshold must be positive")
    lhs = lam * math.sqrt(jump_count(path, lam))

    dyadic_idx = [i for i, t in enumerate(path.times) if is_two_power(t)]
    sub = path.subpath(dyadic_idx)
    long_count = jump_count(sub, lam / 3.0) if sub is not None else 0
    long = lam * math.sqrt(long_count)

    blocks: dict[int, list[int]] = {}
    for i, t in enumerate(path.times):
        if t > 0:
            blocks.setdefault(floor_log2(t), []).append(i)
    short_sq = 0.0
    for idx in blocks.values():
        bp = path.subpath(idx)
        if bp is not None and len(bp) >= 2:
            short_sq += lam * lam * jump_count(bp, lam)
    short = math.sqrt(short_sq)
    return long, short, lhs


def interpolation_exponents(q0: float, q1: float) -> ExponentRecord:
    """Derived exponents theta, nu, q_theta for 1 <= q0 < q1 <= 2."""
    if not (1.0 <= q0 < q1 <= 2.0):
        raise InvalidArgumentError("need 1 <= q0 < q1 <= 2")
    theta = (2.0 - q0) / 2.0
    nu = (2.0 - q1) / (2.0 - q0)
    q_theta = 1.0 / (0.5 + (1.0 - q0 / 2.0) / q1)
    return ExponentRecord(q0=q0, q1=q1, theta=theta, nu=nu, q_theta=q_theta)


def bootstrap_fixed_point(a: float, q1: float, big_c: float) -> float:
    """Smallest B > 0 with B = C * (1 + a * B^((2-q1)/2)).

    The exponent (2-q1)/2 lies in [0, 1/2) for q1 in (1, 2], so the map is an
    increasing concave contraction near its unique fixed point; plain
    iteration from B = C converges. q1 = 2 gives the closed form C * (1 + a).
    """
    if a < 0:
        raise InvalidArgumentError("coefficient a must be nonnegative")
    if big_c <= 0:
        raise InvalidArgumentError("constant C must be positive")
    if not (1.0 < q1 <= 2.0):
        raise InvalidArgumentError("need 1 < q1 <= 2")
    beta = (2.0 - q1) / 2.0
    if a == 0.0 or beta == 0.0:
        return big_c * (1.0 + a)
    x = big_c
    for _ in range(10_000):
        nxt = big_c * (1.0 + a * x**beta)
        if abs(nxt - x) <= 1e-14 * max(1.0, abs(nxt)):
            return nxt
        x = nxt
    raise NumericFailureError("bootstrap iteration did not converge")


# ---------------------------------------------------------------------------
# batch (vectorized) twins, shared by the fuzz corpora and the lattice sweeps


def jump_count_batch(values: np.ndarray, lam) -> np.ndarray:
    """jump_count across many paths: values has shape (n, B), lam scalar or (B,)."""
    v = np.asarray(values)
    n, b = v.shape
    lam = np.broadcast_to(np.asarray(lam, dtype=float), (b,))
    if np.any(lam <= 0):
        raise InvalidArgumentError("jump threshold must be positive")
    best = np.zeros((n, b), dtype=np.int64)
    for j in range(1, n):
        acc = np.zeros(b, dtype=np.int64)
        for i in range(j):
            ok = meets_threshold(np.abs(v[j] - v[i]), lam)
            acc = np.maximum(acc, np.where(ok, best[i] + 1, 0))
        best[j] = acc
    return best.max(axis=0)


def variation_batch(values: np.ndarray, r) -> np.ndarray:
    """variation across many paths: values has shape (n, B)."""
    v = np.asarray(values)
    n, b = v.shape
    if n < 2:
        return np.zeros(b)
    if r == math.inf:
        out = np.zeros(b)
        for j in range(1, n):
            for i in range(j):
                out = np.maximum(out, np.abs(v[j] - v[i]))
        return out
    r = float(r)
    if r <= 0:
        raise InvalidArgumentError("variation exponent must be positive")
    best = np.zeros((n, b))
    for j in range(1, n):
        acc = np.zeros(b)
        for i in range(j):
            acc = np.maximum(acc, best[i] + np.abs(v[j] - v[i]) ** r)
        best[j] = acc
    return best.max(axis=0) ** (1.0 / r)


def _seminorm_equal_weights(mu: np.ndarray, weight: float, ps: np.ndarray) -> np.ndarray:
    # Counting-measure case: the running sum at magnitude m is
    # weight * sum_c drop_c * #{atoms with mu[c] >= m}, and the counts come
    # from per-row sorts plus searchsorted. Counts are integers, so the sum
    # is exact in float64; no global event sort is needed.
    n1, b = mu.shape
    srows = [np.sort(mu[c]) for c in range(n1)]
    steps = np.arange(0, n1 + 1, dtype=np.float64)
    drops = np.stack([steps[1:] ** (p / 2.0) - steps[:-1] ** (p / 2.0) for p in ps])
    out = np.zeros(len(ps))
    for c in range(n1):
        row = srows[c]
        first = int(np.searchsorted(row, 0, side="right"))
        if first == b:
            continue
        mags = row[first:]
        counts = []
        for cc in range(n1):
            if cc == c:
                # descending rank; within a tie run the first entry carries
                # the full count and dominates the rest of the run
                cnt = np.arange(b - first, 0, -1, dtype=np.int32)
            else:
                cnt = (b - np.searchsorted(srows[cc], mags, side="left")).astype(np.int32)
            counts.append(cnt)
        for i in range(len(ps)):
            tot = drops[i, 0] * counts[0]
            for cc in range(1, n1):
                tot += drops[i, cc] * counts[cc]
            cand = mags * (weight * tot) ** (1.0 / ps[i])
            out[i] = max(out[i], float(cand.max()))
    return out


def jump_seminorm_from_thresholds(mu: np.ndarray, weights, ps) -> np.ndarray:
    """Exact jump seminorms of a B-atom field given its chain thresholds.

    mu is the (n-1, B) output of chain_thresholds_batch (one column per atom),
    weights a scalar or (B,) array of atom masses, ps an iterable of
    exponents in (1, inf). Equivalent to jump_seminorm over the B atoms: the
    sup over lambda is evaluated at every threshold entry, with the count
    drop c^(p/2) - (c-1)^(p/2) attached to mu[c-1] (ties telescope, and the
    candidate at the end of a tie run dominates the run). One descending sort
    is shared by all exponents.
    """
    mu = np.asarray(mu)
    n1, b = mu.shape
    ps = np.atleast_1d(np.asarray(ps, dtype=float))
    if np.any(ps <= 1.0) or np.any(~np.isfinite(ps)):
        raise InvalidArgumentError("jump seminorm needs 1 < p < infinity")
    if np.ndim(weights) == 0:
        if weights <= 0:
            raise InvalidArgumentError("atom weights must be positive")
        return _seminorm_equal_weights(mu, float(weights), ps)
    w = np.broadcast_to(np.asarray(weights, dtype=np.float64), (b,))
    if np.any(w <= 0):
        raise InvalidArgumentError("atom weights must be positive")
    mask = mu > 0
    if not mask.any():
        return np.zeros(len(ps))
    mags = mu[mask]
    rows = np.broadcast_to(np.arange(1, n1 + 1)[:, None], (n1, b))[mask]
    watoms = np.broadcast_to(w, (n1, b))[mask]
    order = np.argsort(-mags, kind="stable")
    mags = np.ascontiguousarray(mags[order], dtype=np.float64)
    rows = rows[order]
    watoms = watoms[order]
    out = np.empty(len(ps))
    counts = np.arange(0, n1 + 1, dtype=np.float64)
    for i, p in enumerate(ps):
        half = p / 2.0
        drop = counts[1:] ** half - counts[:-1] ** half
        running = np.cumsum(watoms * drop[rows - 1])
        out[i] = float(np.max(mags * running ** (1.0 / p)))
    return out


def chain_thresholds_batch(values: np.ndarray) -> np.ndarray:
    """Largest admissible threshold per chain length, across many paths.

    values: shape (n, B). Returns mu of shape (n-1, B) where mu[c-1, x] is the
    largest lambda at which path x still holds c jumps (the max over c-jump
    chains of the smallest move along the chain; 0 if no such chain). Rows are
    nonincreasing in c, and N_lambda = #{c : mu[c-1] >= lambda}.
    """
    v = np.asarray(values)
    n, b = v.shape
    if n < 2:
        return np.zeros((0, b))
    gaps = [[None] * n for _ in range(n)]
    for j in range(1, n):
        for i in range(j):
            gaps[i][j] = np.abs(v[j] - v[i])
    dt = gaps[0][1].dtype
    # w[j] = best min-gap over chains with c jumps ending at j
    w = np.full((n, b), np.inf, dtype=dt)
    mu = np.zeros((n - 1, b), dtype=dt)
    for c in range(1, n):
        nxt = np.full((n, b), -np.inf, dtype=dt)
        for j in range(c, n):
            acc = np.full(b, -np.inf, dtype=dt)
            for i in range(j):
                acc = np.maximum(acc, np.minimum(w[i], gaps[i][j]))
            nxt[j] = acc
        w = nxt
        mu[c - 1] = np.maximum(w.max(axis=0), 0.0)
    return mu
