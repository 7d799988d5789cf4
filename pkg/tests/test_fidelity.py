import math

import numpy as np
import pytest

from mdmsim.circuit import MeasurementStrength, run_protocol
from mdmsim.errors import BoundDomainError
from mdmsim.fidelity import (
    FidelityPoint,
    analytic_point,
    avg_estimation_fidelity,
    avg_operation_fidelity,
    estimation_fidelity,
    haar_average,
    mdm_bound,
    operation_fidelity,
    six_state_average,
)
from mdmsim.qcore import Qubit1, fidelity_pure_mixed, haar_random_qubit, spawn_rng

S2 = math.sqrt(0.5)

# frozen by direct evaluation of the closed forms at t = 0.9, r = sqrt(0.19)
G_AT_09 = 0.6033333333333334
F_AT_09 = 0.928200603279107


def random_strengths(seed: int, n: int) -> list[MeasurementStrength]:
    rng = spawn_rng(seed, 0)
    return [MeasurementStrength.from_t(t) for t in rng.uniform(1 / math.sqrt(2), 1.0, n)]


# ---------------------------------------------------------------- per state


def test_estimation_examples():
    assert estimation_fidelity(Qubit1(1, 0), MeasurementStrength(1.0, 0.0)) == pytest.approx(1.0, abs=1e-12)
    for s in random_strengths(3, 10):
        assert estimation_fidelity(Qubit1(S2, S2), s) == pytest.approx(0.5, abs=1e-12)
    assert estimation_fidelity(Qubit1(1, 0), MeasurementStrength(S2, S2)) == pytest.approx(0.5, abs=1e-12)


def test_estimation_matches_guess_operator_route(rng):
    # dual route: direct formula vs <psi|rho_g|psi>
    for _ in range(30):
        psi = haar_random_qubit(rng)
        s = MeasurementStrength.from_t(rng.uniform(1 / math.sqrt(2), 1.0))
        via_rho = fidelity_pure_mixed(psi, run_protocol(psi, s).rho_g)
        assert estimation_fidelity(psi, s) == pytest.approx(via_rho, abs=1e-12)


def test_operation_examples(rng):
    s_flip = MeasurementStrength(S2, S2)
    for _ in range(10):
        assert operation_fidelity(haar_random_qubit(rng), s_flip) == pytest.approx(1.0, abs=1e-12)
    for s in random_strengths(4, 10):
        assert operation_fidelity(Qubit1(1, 0), s) == pytest.approx(1.0, abs=1e-12)
    assert operation_fidelity(Qubit1(S2, S2), MeasurementStrength(1.0, 0.0)) == pytest.approx(0.5, abs=1e-12)


# ---------------------------------------------------------------- closed forms


def test_avg_estimation_closed_form():
    assert avg_estimation_fidelity(MeasurementStrength(S2, S2)) == pytest.approx(0.5, abs=1e-12)
    assert avg_estimation_fidelity(MeasurementStrength(1.0, 0.0)) == pytest.approx(2 / 3, abs=1e-12)
    assert avg_estimation_fidelity(MeasurementStrength.from_t(0.9)) == pytest.approx(G_AT_09, abs=1e-12)


def test_avg_operation_closed_form():
    assert avg_operation_fidelity(MeasurementStrength(S2, S2)) == pytest.approx(1.0, abs=1e-12)
    assert avg_operation_fidelity(MeasurementStrength(1.0, 0.0)) == pytest.approx(2 / 3, abs=1e-12)
    assert avg_operation_fidelity(MeasurementStrength.from_t(0.9)) == pytest.approx(F_AT_09, abs=1e-12)


def test_bound_endpoints_exact():
    assert abs(mdm_bound(0.5) - 1.0) < 1e-12
    assert abs(mdm_bound(2.0 / 3.0) - 2.0 / 3.0) < 1e-12


def test_bound_consistent_with_closed_forms_at_t09():
    assert mdm_bound(G_AT_09) == pytest.approx(F_AT_09, abs=1e-6)


def test_bound_domain_errors():
    with pytest.raises(BoundDomainError):
        mdm_bound(0.49)
    with pytest.raises(BoundDomainError):
        mdm_bound(0.67)
    # slack: values a hair outside the interval are rounding, not bugs
    assert mdm_bound(0.5 - 5e-13) == pytest.approx(1.0, abs=1e-6)
    assert mdm_bound(2.0 / 3.0 + 5e-13) == pytest.approx(2.0 / 3.0, abs=1e-6)


def test_bound_is_decreasing_and_concave():
    g = np.linspace(0.5, 2.0 / 3.0, 400)
    f = np.array([mdm_bound(float(x)) for x in g])
    assert np.all(np.diff(f) < 0.0)  # strictly decreasing on (1/2, 2/3]
    assert np.all(np.diff(f, 2) < 1e-12)  # concave


def test_device_saturates_the_bound_on_a_grid():
    for t in np.linspace(1 / math.sqrt(2), 1.0, 200):
        s = MeasurementStrength.from_t(float(t))
        g = avg_estimation_fidelity(s)
        f = avg_operation_fidelity(s)
        assert abs(f - mdm_bound(g)) < 1e-9


def test_analytic_point_ranges():
    for s in random_strengths(5, 50):
        point = analytic_point(s)
        assert 0.5 - 1e-12 <= point.g_avg <= 2 / 3 + 1e-12
        assert 2 / 3 - 1e-12 <= point.f_avg <= 1 + 1e-12
    with pytest.raises(ValueError):
        FidelityPoint(0.4, 0.9, MeasurementStrength(1.0, 0.0))
    with pytest.raises(ValueError):
        FidelityPoint(0.6, 0.5, MeasurementStrength(1.0, 0.0))


# ---------------------------------------------------------------- averages


def test_six_state_average_equals_closed_forms():
    for s in random_strengths(6, 50):
        assert six_state_average(estimation_fidelity, s) == pytest.approx(
            avg_estimation_fidelity(s), abs=1e-12
        )
        assert six_state_average(operation_fidelity, s) == pytest.approx(
            avg_operation_fidelity(s), abs=1e-12
        )


def test_six_state_average_examples():
    assert six_state_average(estimation_fidelity, MeasurementStrength(S2, S2)) == pytest.approx(0.5, abs=1e-12)
    assert six_state_average(operation_fidelity, MeasurementStrength(1.0, 0.0)) == pytest.approx(2 / 3, abs=1e-12)
    assert six_state_average(estimation_fidelity, MeasurementStrength.from_t(0.9)) == pytest.approx(G_AT_09, abs=1e-12)


def test_haar_average_is_deterministic():
    s = MeasurementStrength.from_t(0.9)
    a = haar_average(estimation_fidelity, s, 500, seed=21)
    b = haar_average(estimation_fidelity, s, 500, seed=21)
    assert a == b
    single = haar_average(estimation_fidelity, s, 1, seed=21)
    assert single == haar_average(estimation_fidelity, s, 1, seed=21)
    assert single.stderr == 0.0


def test_haar_average_constant_integrand():
    mc = haar_average(operation_fidelity, MeasurementStrength(S2, S2), 200, seed=5)
    assert mc.mean == pytest.approx(1.0, abs=1e-12)
    assert mc.stderr < 1e-12


def test_haar_average_rejects_empty():
    with pytest.raises(ValueError):
        haar_average(estimation_fidelity, MeasurementStrength(1.0, 0.0), 0, seed=1)


def test_haar_average_converges_to_closed_forms():
    # 3-standard-error agreement at 10 strengths for both fidelity functions
    for i, s in enumerate(random_strengths(8, 10)):
        for f, closed in (
            (estimation_fidelity, avg_estimation_fidelity(s)),
            (operation_fidelity, avg_operation_fidelity(s)),
        ):
            mc = haar_average(f, s, 100_000, seed=100 + i)
            assert abs(mc.mean - closed) < 3.0 * max(mc.stderr, 1e-15)


def test_haar_average_large_sample_estimation():
    s = MeasurementStrength.from_t(0.85)
    mc = haar_average(estimation_fidelity, s, 1_000_000, seed=2)
    assert abs(mc.mean - avg_estimation_fidelity(s)) < 3.0 * mc.stderr
