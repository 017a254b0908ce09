"""Pathwise jump counts, variation seminorms, and their inequalities."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jumpkit import (
    FieldOfPaths,
    InvalidArgumentError,
    JumpProfile,
    NumericFailureError,
    SampledPath,
    bootstrap_fixed_point,
    chain_thresholds_batch,
    interpolation_exponents,
    jump_breakpoints,
    jump_count,
    jump_count_batch,
    jump_seminorm,
    jump_seminorm_from_thresholds,
    lewko_bound,
    long_short_split,
    variation,
    variation_batch,
)

from conftest import brute_jump_count_batch, brute_variation_batch

ROOT2 = math.sqrt(2.0)


def path(values, times=None):
    if times is None:
        times = range(len(values))
    return SampledPath.make(times, values)


# ---------------------------------------------------------------------------
# SampledPath / JumpProfile / FieldOfPaths validation


def test_path_requires_increasing_times():
    with pytest.raises(InvalidArgumentError):
        path([0.0, 1.0], times=[1, 1])
    with pytest.raises(InvalidArgumentError):
        path([0.0, 1.0], times=[2, 1])
    with pytest.raises(InvalidArgumentError):
        path([0.0, 1.0], times=[-1, 1])


def test_path_requires_matching_lengths():
    with pytest.raises(InvalidArgumentError):
        path([0.0, 1.0, 2.0], times=[0, 1])


def test_subpath_selects_samples():
    p = path([0.0, 1.0, 2.0, 3.0])
    sub = p.subpath([0, 2, 3])
    assert sub.values == (0.0, 2.0, 3.0)
    assert p.subpath([]) is None
    assert len(p) == 4


def test_profile_validation():
    with pytest.raises(InvalidArgumentError):
        JumpProfile(breakpoints=((0.0, 1),))
    with pytest.raises(InvalidArgumentError):
        JumpProfile(breakpoints=((1.0, 2), (2.0, 2)))
    with pytest.raises(InvalidArgumentError):
        JumpProfile(breakpoints=((1.0, 2),)).count_at(0.0)


def test_field_validation():
    with pytest.raises(InvalidArgumentError):
        FieldOfPaths(atoms=())
    with pytest.raises(InvalidArgumentError):
        FieldOfPaths(atoms=((0.0, path([0.0, 1.0])),))


# ---------------------------------------------------------------------------
# jump_count


def test_jump_count_constant_path():
    assert jump_count(path([2.0] * 7), 0.5) == 0


def test_jump_count_alternating():
    # every consecutive gap is exactly 1, so the full path is a chain
    assert jump_count(path([0, 1, 0, 1, 0]), 1.0) == 4


def test_jump_count_rejects_bad_threshold():
    with pytest.raises(InvalidArgumentError):
        jump_count(path([0.0, 1.0]), 0.0)
    with pytest.raises(InvalidArgumentError):
        jump_count(path([0.0, 1.0]), -1.0)


def test_jump_count_exact_at_threshold():
    # a gap equal to lambda counts as a jump, without float fuzz
    assert jump_count(path([0.0, 0.3]), 0.3) == 1


def test_jump_count_matches_brute_force():
    rng = np.random.default_rng(11)
    vals = rng.integers(-2, 3, size=(1000, 8)).astype(float)
    for lam in (0.5, 1.0, 1.5):
        want = brute_jump_count_batch(vals, lam)
        got = np.array([jump_count(path(row), lam) for row in vals])
        assert np.array_equal(got, want)
        assert np.array_equal(jump_count_batch(vals.T, lam), want)


def test_jump_count_greedy_is_not_optimal():
    # taking the first admissible jump from the left is suboptimal here:
    # greedy pairs 0 -> 3 and strands the tail, but 0 -> 2 -> 4 has 2 jumps
    p = path([0.0, 3.0, 2.0, 4.0])
    assert jump_count(p, 2.0) == 2


# ---------------------------------------------------------------------------
# variation


def test_variation_sup_norm():
    assert variation(path([0.0, 3.0, 1.0]), math.inf) == 3.0


def test_variation_total_increase():
    assert variation(path([0.0, 1.0, 2.0, 5.0]), 1.0) == pytest.approx(5.0, abs=1e-12)


def test_variation_square_root_two():
    assert variation(path([0.0, 1.0, 0.0]), 2.0) == pytest.approx(ROOT2, abs=1e-12)


def test_variation_single_point():
    assert variation(SampledPath.make([3], [1.0]), 2.0) == 0.0


def test_variation_rejects_bad_exponent():
    with pytest.raises(InvalidArgumentError):
        variation(path([0.0, 1.0]), 0.0)
    with pytest.raises(InvalidArgumentError):
        variation(path([0.0, 1.0]), -2.0)


def test_variation_matches_brute_force():
    rng = np.random.default_rng(12)
    vals = rng.standard_normal((400, 7))
    for r in (1.0, 1.5, 2.0, 3.0, math.inf):
        want = brute_variation_batch(vals, r)
        got = np.array([variation(path(row), r) for row in vals])
        assert np.allclose(got, want, rtol=1e-12, atol=1e-12)
        assert np.allclose(variation_batch(vals.T, r), want, rtol=1e-12, atol=1e-12)


def test_variation_complex_values():
    p = path([0.0, 1.0j, 0.0])
    assert variation(p, 2.0) == pytest.approx(ROOT2, abs=1e-12)


# ---------------------------------------------------------------------------
# jump_breakpoints / jump_seminorm


def test_breakpoints_constant_path():
    prof = jump_breakpoints(path([1.0, 1.0, 1.0]))
    assert prof.breakpoints == ()
    assert prof.sup_scaled_count() == 0.0


def test_breakpoints_single_jump():
    prof = jump_breakpoints(path([0.0, 2.0]))
    assert prof.breakpoints == ((2.0, 1),)
    assert prof.sup_scaled_count() == 2.0


def test_breakpoints_tent():
    prof = jump_breakpoints(path([0.0, 1.0, 0.0]))
    assert prof.breakpoints == ((1.0, 2),)
    assert prof.sup_scaled_count() == pytest.approx(ROOT2, abs=1e-12)


def test_breakpoints_agree_with_jump_count():
    rng = np.random.default_rng(13)
    for _ in range(50):
        vals = rng.integers(-2, 3, size=8).astype(float)
        p = path(vals)
        prof = jump_breakpoints(p)
        mags = [m for m, _ in prof.breakpoints]
        probes = mags + [0.5 * (a + b) for a, b in zip(mags, mags[1:])]
        probes += [0.3 * mags[0]] if mags else [1.0]
        probes += [mags[-1] * 2.0] if mags else []
        for lam in probes:
            assert prof.count_at(lam) == jump_count(p, lam)


def test_seminorm_constant_field():
    field = FieldOfPaths(atoms=((1.0, path([5.0, 5.0, 5.0])),))
    assert jump_seminorm(field, 2.0) == 0.0


def test_seminorm_single_tent():
    field = FieldOfPaths(atoms=((1.0, path([0.0, 1.0, 0.0])),))
    assert jump_seminorm(field, 2.0) == pytest.approx(ROOT2, abs=1e-12)


def test_seminorm_two_atoms():
    # lambda=1 gives sqrt(1*2 + 1*1) = sqrt(3); lambda=2 gives sqrt(4*1) = 2
    field = FieldOfPaths(
        atoms=((1.0, path([0.0, 1.0, 0.0])), (1.0, path([0.0, 2.0])))
    )
    assert jump_seminorm(field, 2.0) == pytest.approx(2.0, abs=1e-12)


def test_seminorm_rejects_bad_exponent():
    field = FieldOfPaths(atoms=((1.0, path([0.0, 1.0])),))
    for p in (1.0, 0.5, math.inf):
        with pytest.raises(InvalidArgumentError):
            jump_seminorm(field, p)


def test_seminorm_batch_parity():
    rng = np.random.default_rng(14)
    vals = rng.standard_normal((9, 6))  # 6 atoms, 9 samples each
    weights = rng.uniform(0.5, 2.0, size=6)
    atoms = tuple((float(w), path(vals[:, i])) for i, w in enumerate(weights))
    field = FieldOfPaths(atoms=atoms)
    mu = chain_thresholds_batch(vals)
    ps = np.array([1.5, 2.0, 3.0])
    batch = jump_seminorm_from_thresholds(mu, weights, ps)
    for p, b in zip(ps, batch):
        assert jump_seminorm(field, float(p)) == pytest.approx(float(b), rel=1e-12)


def test_threshold_batch_matches_breakpoints():
    rng = np.random.default_rng(15)
    vals = rng.integers(-2, 3, size=(7, 40)).astype(float)
    mu = chain_thresholds_batch(vals)
    assert mu.shape == (6, 40)
    for c in range(40):
        prof = jump_breakpoints(path(vals[:, c]))
        for m, count in prof.breakpoints:
            # mu[j] is the largest threshold admitting a (j+1)-jump chain
            assert mu[count - 1, c] == pytest.approx(m, abs=1e-12)


# ---------------------------------------------------------------------------
# lewko_bound


def test_lewko_constant_path():
    p = path([1.0, 1.0, 1.0], times=[0, 1, 2])
    assert lewko_bound(p, 2.0) == (0.0, 0.0)


def test_lewko_tent():
    # rhs = 2^(1/2) * (sqrt(2) + 0): level 0 pairs give sqrt(2), level 1 gives 0
    p = path([0.0, 1.0, 0.0], times=[0, 1, 2])
    lhs, rhs = lewko_bound(p, 2.0)
    assert lhs == pytest.approx(ROOT2, abs=1e-12)
    assert rhs == pytest.approx(2.0, abs=1e-12)


def test_lewko_linear():
    p = path([0.0, 1.0, 2.0], times=[0, 1, 2])
    lhs, rhs = lewko_bound(p, 1.0)
    assert lhs == pytest.approx(2.0, abs=1e-12)
    assert rhs == pytest.approx(4.0, abs=1e-12)


def test_lewko_rejects_bad_grids():
    with pytest.raises(InvalidArgumentError):
        lewko_bound(path([0.0, 1.0, 0.0], times=[0, 1, 3]), 2.0)
    with pytest.raises(InvalidArgumentError):
        lewko_bound(path([0.0, 1.0], times=[1, 2]), 2.0)
    with pytest.raises(InvalidArgumentError):
        # 2^k+1 samples required: 4 samples cannot tile dyadic levels
        lewko_bound(path([0.0, 1.0, 0.0, 1.0], times=[0, 1, 2, 3]), 2.0)


def test_lewko_rejects_bad_exponent():
    p = path([0.0, 1.0, 0.0], times=[0, 1, 2])
    for r in (0.5, math.inf):
        with pytest.raises(InvalidArgumentError):
            lewko_bound(p, r)


def test_lewko_fractional_grid():
    times = [Fraction(k, 4) for k in range(5)]
    p = path([0.0, 1.0, 0.0, 1.0, 0.0], times=times)
    lhs, rhs = lewko_bound(p, 2.0)
    assert 0.0 < lhs <= rhs + 1e-12


# ---------------------------------------------------------------------------
# long_short_split


def test_long_short_frozen_example():
    p = path([0.0, 1.0, 0.0, 1.0], times=[Fraction(1), Fraction(5, 4), Fraction(3, 2), Fraction(2)])
    long_part, short_part, lhs = long_short_split(p, 1.0)
    assert long_part == pytest.approx(1.0, abs=1e-12)
    assert short_part == pytest.approx(ROOT2, abs=1e-12)
    assert lhs == pytest.approx(math.sqrt(3.0), abs=1e-12)


def test_long_short_dyadic_times_only():
    rng = np.random.default_rng(16)
    for _ in range(25):
        vals = rng.standard_normal(4)
        p = path(vals, times=[1, 2, 4, 8])
        long_part, short_part, lhs = long_short_split(p, 0.7)
        assert short_part == 0.0
        assert lhs <= long_part + 1e-12


def test_long_short_rejects_bad_threshold():
    p = path([0.0, 1.0], times=[1, 2])
    with pytest.raises(InvalidArgumentError):
        long_short_split(p, 0.0)


# ---------------------------------------------------------------------------
# exponent bookkeeping


def test_interpolation_midpoint():
    rec = interpolation_exponents(1.0, 2.0)
    assert rec.theta == pytest.approx(0.5, abs=1e-12)
    assert rec.nu == pytest.approx(0.0, abs=1e-12)
    assert rec.q_theta == pytest.approx(4.0 / 3.0, abs=1e-12)


def test_interpolation_three_halves():
    rec = interpolation_exponents(1.0, 1.5)
    assert rec.theta == pytest.approx(0.5, abs=1e-12)
    assert rec.nu == pytest.approx(0.5, abs=1e-12)
    assert rec.q_theta == pytest.approx(1.2, abs=1e-12)


def test_interpolation_identities_hold():
    for q0, q1 in ((1.0, 1.25), (1.0, 2.0), (1.2, 1.9), (1.5, 2.0)):
        rec = interpolation_exponents(q0, q1)
        for name, resid in rec.identity_residuals().items():
            assert abs(resid) <= 1e-12, name


def test_interpolation_nu_limit():
    # nu -> 1 as q1 decreases to q0
    nus = [interpolation_exponents(1.2, 1.2 + eps).nu for eps in (0.1, 0.01, 0.001)]
    assert all(n1 < n2 for n1, n2 in zip(nus, nus[1:]))
    assert nus[-1] > 0.99


def test_interpolation_rejects_out_of_range():
    for q0, q1 in ((0.9, 1.5), (1.0, 2.5), (1.5, 1.5), (1.8, 1.2)):
        with pytest.raises(InvalidArgumentError):
            interpolation_exponents(q0, q1)


def test_bootstrap_zero_coefficient():
    assert bootstrap_fixed_point(0.0, 1.5, 3.0) == pytest.approx(3.0, abs=1e-12)


def test_bootstrap_closed_form_at_q1_two():
    assert bootstrap_fixed_point(2.0, 2.0, 1.5) == pytest.approx(4.5, abs=1e-12)


def test_bootstrap_quarter_power():
    # B solves B = 1 + B^(1/4)
    b = bootstrap_fixed_point(1.0, 1.5, 1.0)
    assert b == pytest.approx(1.0 + b**0.25, abs=1e-10)
    assert b == pytest.approx(2.221, abs=5e-4)


def test_bootstrap_rejects_bad_arguments():
    with pytest.raises(InvalidArgumentError):
        bootstrap_fixed_point(-1.0, 1.5, 1.0)
    with pytest.raises(InvalidArgumentError):
        bootstrap_fixed_point(1.0, 2.5, 1.0)
    with pytest.raises(InvalidArgumentError):
        bootstrap_fixed_point(1.0, 1.5, 0.0)


# ---------------------------------------------------------------------------
# property tests

values_st = st.lists(
    st.floats(min_value=-8.0, max_value=8.0, allow_nan=False),
    min_size=2,
    max_size=10,
)


@given(values_st, st.sampled_from([1.0, 1.5, 2.0, 3.0]), st.floats(min_value=0.05, max_value=4.0))
@settings(max_examples=200, deadline=None)
def test_bridge_inequality(values, r, lam):
    p = path(values)
    n = jump_count(p, lam)
    v = variation(p, r)
    assert lam * n ** (1.0 / r) <= v * (1.0 + 1e-9) + 1e-12


@given(values_st, st.floats(min_value=0.05, max_value=2.0), st.floats(min_value=1.0, max_value=3.0))
@settings(max_examples=150, deadline=None)
def test_jump_count_monotone_in_threshold(values, lam, factor):
    p = path(values)
    assert jump_count(p, lam) >= jump_count(p, lam * factor)


@given(values_st, st.floats(min_value=0.5, max_value=4.0), st.floats(min_value=1.0, max_value=3.0))
@settings(max_examples=150, deadline=None)
def test_variation_monotone_in_exponent(values, r, factor):
    p = path(values)
    assert variation(p, r * factor) <= variation(p, r) * (1.0 + 1e-9) + 1e-12


@given(values_st)
@settings(max_examples=150, deadline=None)
def test_sup_variation_is_smallest(values):
    p = path(values)
    v_inf = variation(p, math.inf)
    assert v_inf <= variation(p, 2.0) * (1.0 + 1e-12) + 1e-12
    assert v_inf <= variation(p, 1.0) * (1.0 + 1e-12) + 1e-12


@given(values_st, st.data())
@settings(max_examples=100, deadline=None)
def test_variation_monotone_under_subsampling(values, data):
    p = path(values)
    keep = data.draw(
        st.lists(st.integers(0, len(values) - 1), min_size=2, unique=True).map(sorted)
    )
    sub = p.subpath(keep)
    assert variation(sub, 2.0) <= variation(p, 2.0) * (1.0 + 1e-12) + 1e-12


@given(values_st)
@settings(max_examples=100, deadline=None)
def test_profile_sup_equals_seminorm_at_two(values):
    p = path(values)
    field = FieldOfPaths(atoms=((1.0, p),))
    prof = jump_breakpoints(p)
    assert jump_seminorm(field, 2.0) == pytest.approx(prof.sup_scaled_count(), rel=1e-12, abs=1e-12)
