"""Moduli of continuity and their Dini-type integral norms."""

import math

import numpy as np
import pytest

from jumpkit import InvalidArgumentError, ModulusOfContinuity, dini_norms

GRID = np.geomspace(1e-6, 1.0, 80)


def test_power_evaluates():
    omega = ModulusOfContinuity.power(0.5, scale=3.0)
    assert omega(0.0) == 0.0
    assert omega(0.25) == pytest.approx(1.5, abs=1e-12)
    vals = omega(GRID)
    assert np.all(np.diff(vals) > 0)


def test_power_rejects_bad_parameters():
    for theta in (0.0, -0.5, 1.5):
        with pytest.raises(InvalidArgumentError):
            ModulusOfContinuity.power(theta)
    with pytest.raises(InvalidArgumentError):
        ModulusOfContinuity.power(0.5, scale=0.0)


def test_power_is_subadditive():
    for theta in (0.1, 0.5, 1.0):
        omega = ModulusOfContinuity.power(theta)
        assert omega.subadditivity_defect(GRID) <= 1e-12


def test_from_table_interpolates():
    omega = ModulusOfContinuity.from_table([0.5, 1.0], [0.25, 0.5])
    assert omega(0.25) == pytest.approx(0.125, abs=1e-12)
    assert omega(2.0) == pytest.approx(0.5, abs=1e-12)  # constant past last node


def test_from_table_rejects_bad_tables():
    with pytest.raises(InvalidArgumentError):
        ModulusOfContinuity.from_table([1.0, 0.5], [0.1, 0.2])
    with pytest.raises(InvalidArgumentError):
        ModulusOfContinuity.from_table([0.5, 1.0], [0.3, 0.2])
    with pytest.raises(InvalidArgumentError):
        # convex table: omega(1) > omega(1/2) + omega(1/2) breaks subadditivity
        ModulusOfContinuity.from_table([0.5, 1.0], [0.2, 0.5])


def test_closure_under_powers():
    omega = ModulusOfContinuity.power(0.7, scale=2.0)
    assert omega.power_of(0.5).subadditivity_defect(GRID) <= 1e-12
    assert omega.precompose_power(0.5).subadditivity_defect(GRID) <= 1e-12
    with pytest.raises(InvalidArgumentError):
        omega.power_of(1.5)
    with pytest.raises(InvalidArgumentError):
        omega.precompose_power(0.0)


def test_combinators_evaluate():
    a = ModulusOfContinuity.power(1.0, scale=2.0)
    b = ModulusOfContinuity.power(0.5)
    assert a.plus(b)(0.25) == pytest.approx(1.0, abs=1e-12)
    assert a.compose(b)(0.25) == pytest.approx(1.0, abs=1e-12)
    assert b.power_of(0.5)(x := 0.0625) == pytest.approx(x**0.25, abs=1e-12)
    assert b.precompose_power(0.5)(x) == pytest.approx(x**0.25, abs=1e-12)


def test_dini_zero_modulus():
    omega = ModulusOfContinuity.from_table([1.0], [0.0])
    res = dini_norms(omega)
    assert res.dini == 0.0
    assert res.log_dini == 0.0
    assert not res.divergent


def test_dini_power_closed_forms():
    # int_0^1 t^theta dt/t = 1/theta, with |log t| weight 1/theta^2
    for theta in (0.1, 0.5, 1.0):
        res = dini_norms(ModulusOfContinuity.power(theta))
        assert res.dini == pytest.approx(1.0 / theta, abs=1e-8)
        assert res.log_dini == pytest.approx(1.0 / theta**2, abs=1e-8)
        assert not res.divergent


def test_dini_dyadic_sums_comparable():
    # sum_j omega(2^-j) equals the integral up to a log 2 factor
    res = dini_norms(ModulusOfContinuity.power(0.5))
    assert res.dyadic_sum * math.log(2.0) == pytest.approx(res.dini, rel=0.5)
    assert res.dyadic_log_sum > 0.0
    assert res.levels_used > 10


def test_dini_divergent_modulus():
    omega = ModulusOfContinuity(
        fn=lambda t: 1.0 / (1.0 - np.log(np.clip(t, 1e-300, 1.0))),
        form="reciprocal-log",
    )
    res = dini_norms(omega)
    assert res.divergent
    assert math.isinf(res.dini)


def test_dini_monotone_in_modulus():
    # pointwise domination of moduli forces domination of both norms
    small = dini_norms(ModulusOfContinuity.power(0.8))
    big = dini_norms(ModulusOfContinuity.power(0.4))
    assert small.dini <= big.dini
    assert small.log_dini <= big.log_dini
