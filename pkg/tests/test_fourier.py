"""Multiplier families on lattice fields: evaluation, envelopes, decay."""

import math

import numpy as np
import pytest

from jumpkit import (
    InvalidArgumentError,
    LatticeField,
    ModulusOfContinuity,
    apply_multiplier,
    cube_average_family,
    envelope_family,
    littlewood_paley_family,
    littlewood_paley_symbol,
    off_diagonal_decay,
    poisson_family,
    poisson_symbol,
    symbol_envelope_check,
)


# ---------------------------------------------------------------------------
# symbols


def test_poisson_at_zero_frequency():
    for flavor in ("continuous", "discrete"):
        assert poisson_symbol(1.0, 0.0, 1, flavor) == pytest.approx(1.0, abs=1e-15)


def test_poisson_discrete_frozen_value():
    got = poisson_symbol(1.0, 0.25, 1, "discrete")
    assert got == pytest.approx(math.exp(-math.pi * math.sqrt(2.0)), rel=1e-14)


def test_poisson_strictly_decreasing_in_t():
    ts = np.geomspace(0.01, 100.0, 40)
    vals = [poisson_symbol(float(t), 0.2, 1, "continuous") for t in ts]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-30


def test_poisson_validation():
    with pytest.raises(InvalidArgumentError):
        poisson_symbol(0.0, 0.25, 1, "continuous")
    with pytest.raises(InvalidArgumentError):
        poisson_symbol(1.0, 0.75, 1, "discrete")  # outside the fundamental cell


def test_littlewood_paley_nonnegative_and_zero_at_origin():
    assert littlewood_paley_symbol(3, 0.0, 1, "continuous") == 0.0
    xi = np.linspace(-10, 10, 101)
    for k in (-3, 0, 2):
        vals = littlewood_paley_symbol(k, xi, 1, "continuous")
        assert np.all(vals >= 0.0)


def test_littlewood_paley_telescopes_exactly():
    # sum_{|k|<=K} S_k = p_{2^-K} - p_{2^(K+1)} by cancellation of shared terms
    rng = np.random.default_rng(21)
    for d in (1, 2):
        xi = rng.standard_normal((200, d))
        total = np.zeros(200)
        for k in range(-10, 11):
            total = total + littlewood_paley_symbol(k, xi, d, "continuous")
        want = poisson_symbol(2.0**-10, xi, d, "continuous") - poisson_symbol(
            2.0**11, xi, d, "continuous"
        )
        assert np.allclose(total, want, atol=1e-13)


def test_littlewood_paley_under_dyadic_envelope():
    # each piece sits below 2 pi times the min(u, 1/u) envelope in d = 1;
    # at u ~ 1e-10 the difference of two near-1 exponentials cancels to a
    # few ulps, so the check carries a 1e-6 relative allowance
    xi = np.geomspace(1e-6, 1e6, 400)
    for k in range(-12, 13):
        u = 2.0**k * xi
        envelope = np.minimum(u, 1.0 / u)
        vals = littlewood_paley_symbol(k, xi, 1, "continuous")
        assert np.all(vals <= 2.0 * math.pi * envelope * (1.0 + 1e-6))


def test_envelope_family_shape():
    fam = envelope_family(1)
    assert fam.zero_value == 0.0
    assert fam(0, np.array([1.0]))[0] == pytest.approx(1.0, abs=1e-15)
    assert fam(3, np.array([1.0]))[0] == pytest.approx(2.0**-3, rel=1e-15)


def test_cube_symbol_high_frequency_decay():
    # |sin(2 pi t xi) / (2 pi t xi)| <= 1/(2 pi t |xi|), constant 1/(2 pi)
    fam = cube_average_family(1)
    xi = np.geomspace(0.05, 50.0, 300)
    for t in (0.5, 1.0, 4.0):
        vals = np.abs(fam(t, xi))
        assert np.all(vals * (2.0 * math.pi * t * xi) <= 1.0 + 1e-12)


# ---------------------------------------------------------------------------
# off-diagonal decay


def test_off_diagonal_zero_family():
    from jumpkit import SymbolFamily

    zero = SymbolFamily(
        name="zero",
        dim=1,
        flavor="custom",
        evaluate=lambda k, pts: np.zeros(pts.shape[0]),
        zero_value=0.0,
    )
    lp = littlewood_paley_family(1, "continuous")
    xi = np.linspace(0.1, 4.0, 50)[:, None]
    assert off_diagonal_decay(zero, lp, 0, range(-5, 6), xi) == 0.0


def test_off_diagonal_littlewood_paley_diagonal_is_below_one():
    # at j = 0 the column sums are sum_k S_k^4 <= (sum_k S_k^2)^2 <= 1
    lp = littlewood_paley_family(1, "continuous")
    mags = 2.0 ** np.linspace(-8.0, 8.0, 160)
    xi = mags[:, None]
    a0 = off_diagonal_decay(lp, lp, 0, range(-20, 21), xi)
    assert 0.0 < a0 <= 1.0 + 1e-12


def test_off_diagonal_envelope_pair_decays():
    env = envelope_family(1)
    mags = 2.0 ** np.linspace(-12.0, 12.0, 120)
    xi = mags[:, None]
    ks = range(-20, 21)
    a0 = off_diagonal_decay(env, env, 0, ks, xi)
    a4 = off_diagonal_decay(env, env, 4, ks, xi)
    a8 = off_diagonal_decay(env, env, 8, ks, xi)
    assert a0 > a4 > a8 > 0.0
    # the shifted product loses a factor 2^(-|j|/2) against the diagonal
    assert a4 <= a0 * 2.0 ** (-4.0 / 4.0)
    assert a8 <= a0 * 2.0 ** (-8.0 / 4.0)


def test_off_diagonal_rejects_zero_grid_point():
    env = envelope_family(1)
    xi = np.array([[0.0], [1.0]])
    with pytest.raises(InvalidArgumentError):
        off_diagonal_decay(env, env, 0, range(-2, 3), xi)


# ---------------------------------------------------------------------------
# lattice fields and multipliers


def test_field_budget_enforced():
    rng = np.random.default_rng(0)
    with pytest.raises(InvalidArgumentError):
        LatticeField.random_normal(7, 16, rng)  # 7 * log2(16) = 28 > 26


def test_field_requires_cube():
    with pytest.raises(InvalidArgumentError):
        LatticeField.from_array(np.zeros((4, 8), dtype=np.complex128))


def test_field_norms_counting_measure():
    field = LatticeField.delta(2, 8)
    for p in (1.0, 2.0, 3.0):
        assert field.norm_lp(p) == pytest.approx(1.0, abs=1e-12)
    const = LatticeField.from_array(np.full((8, 8), 2.0, dtype=np.complex128))
    assert const.norm_lp(2.0) == pytest.approx(2.0 * 8.0, abs=1e-12)


def test_random_field_dtype():
    rng = np.random.default_rng(1)
    single = LatticeField.random_normal(2, 8, rng, dtype=np.complex64)
    assert single.values.dtype == np.complex64
    assert single.dim == 2 and single.side == 8


def test_apply_multiplier_identity_and_zero():
    rng = np.random.default_rng(2)
    field = LatticeField.random_normal(2, 16, rng, dtype=np.complex128)
    same = apply_multiplier(field, lambda pts: np.ones(pts.shape[0]))
    assert np.allclose(same.values, field.values, atol=1e-10)
    gone = apply_multiplier(field, lambda pts: np.zeros(pts.shape[0]))
    assert np.allclose(gone.values, 0.0, atol=1e-12)


def test_apply_multiplier_axis_factors_match_full_grid():
    rng = np.random.default_rng(3)
    field = LatticeField.random_normal(2, 16, rng, dtype=np.complex128)
    freqs = field.axis_frequencies()
    axis = np.exp(-np.abs(freqs))
    full = np.exp(-np.abs(freqs))[:, None] * np.exp(-np.abs(freqs))[None, :]
    via_axes = apply_multiplier(field, [axis, axis])
    via_grid = apply_multiplier(field, full)
    assert np.allclose(via_axes.values, via_grid.values, atol=1e-12)


def test_apply_multiplier_preserves_single_precision():
    rng = np.random.default_rng(4)
    field = LatticeField.random_normal(1, 32, rng, dtype=np.complex64)
    out = apply_multiplier(field, lambda pts: np.ones(pts.shape[0]))
    assert out.values.dtype == np.complex64


def test_apply_multiplier_dimension_mismatch():
    rng = np.random.default_rng(5)
    field = LatticeField.random_normal(2, 8, rng)
    with pytest.raises(InvalidArgumentError):
        apply_multiplier(field, np.ones((8, 8, 8)))
    with pytest.raises(InvalidArgumentError):
        apply_multiplier(field, [np.ones(8)])  # one factor for two axes


# ---------------------------------------------------------------------------
# envelope reports


def test_poisson_envelope_check_passes():
    fam = poisson_family(1, "continuous")
    omega = ModulusOfContinuity.power(1.0)
    xi = np.geomspace(1e-4, 1e4, 120)[:, None]
    report = symbol_envelope_check(
        fam,
        omega,
        quasi_norm=lambda pts: np.abs(pts[:, 0]),
        t_grid=2.0 ** np.arange(-8, 9, dtype=float),
        xi=xi,
        constant=2.0 * math.pi,
        lipschitz_fractions=(0.25, 0.5),
    )
    assert report.passed
    assert report.low_count > 0 and report.high_count > 0
    # |d/dt p_t| * t <= sup_u 2 pi u e^(-2 pi u) < 1, far below the constant
    assert report.lipschitz_max_ratio < 1.0
    d = report.as_dict()
    assert set(d) >= {"low_max_ratio", "high_max_ratio", "low_count", "high_count"}


def test_envelope_check_flags_violations():
    fam = poisson_family(1, "continuous")
    omega = ModulusOfContinuity.power(1.0)
    xi = np.geomspace(1e-2, 1e2, 60)[:, None]
    report = symbol_envelope_check(
        fam,
        omega,
        quasi_norm=lambda pts: np.abs(pts[:, 0]),
        t_grid=(0.5, 1.0, 2.0),
        xi=xi,
        constant=1e-6,  # absurdly small cap must fail
    )
    assert not report.passed
