import math

import numpy as np
import pytest

from mdmsim.errors import InvalidStateError
from mdmsim.qcore import (
    Density1,
    Qubit1,
    TwoQubitState,
    canonical,
    fidelity_pure_mixed,
    haar_random_qubit,
    mub_six,
    orthogonal,
    overlap,
    partial_trace_ancilla,
    spawn_rng,
    states_equal,
)

S2 = math.sqrt(0.5)


def numpy_partial_trace(rho4: np.ndarray) -> np.ndarray:
    """Independent oracle: trace out the second (ancilla) index of a 4x4
    density matrix with (system, ancilla) ordering."""
    return np.einsum("iaja->ij", rho4.reshape(2, 2, 2, 2))


# ---------------------------------------------------------------- constructors


def test_qubit_rejects_unnormalized():
    with pytest.raises(InvalidStateError):
        Qubit1(1.0, 1.0)


def test_qubit_rejects_nan():
    with pytest.raises(InvalidStateError):
        Qubit1(float("nan"), 0.0)


def test_two_qubit_rejects_unnormalized():
    with pytest.raises(InvalidStateError):
        TwoQubitState(1.0, 1.0, 0.0, 0.0)


def test_density_rejects_non_hermitian():
    with pytest.raises(InvalidStateError):
        Density1(np.array([[0.5, 0.3], [0.1, 0.5]], dtype=complex))


def test_density_rejects_bad_trace():
    with pytest.raises(InvalidStateError):
        Density1(np.array([[0.9, 0.0], [0.0, 0.3]], dtype=complex))


def test_density_rejects_negative_eigenvalue():
    with pytest.raises(InvalidStateError):
        Density1(np.array([[1.5, 0.0], [0.0, -0.5]], dtype=complex))


def test_density_is_immutable():
    rho = Density1(np.eye(2, dtype=complex) / 2)
    with pytest.raises(ValueError):
        rho.m[0, 0] = 3.0


def test_normalized_constructor():
    psi = Qubit1.normalized(3.0, 4.0j)
    assert psi.a0 == pytest.approx(0.6)
    assert psi.a1 == pytest.approx(0.8j)
    with pytest.raises(InvalidStateError):
        Qubit1.normalized(0.0, 0.0)


# ---------------------------------------------------------------- fidelity


def test_fidelity_projector_on_itself():
    psi = Qubit1(1.0, 0.0)
    assert fidelity_pure_mixed(psi, psi.density()) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_maximally_mixed():
    rho = Density1(np.eye(2, dtype=complex) / 2)
    assert fidelity_pure_mixed(Qubit1(1.0, 0.0), rho) == pytest.approx(0.5, abs=1e-12)


def test_fidelity_symmetric_mixture():
    diag = Density1(np.diag([0.5, 0.5]).astype(complex))
    assert fidelity_pure_mixed(Qubit1(S2, S2), diag) == pytest.approx(0.5, abs=1e-12)


def test_fidelity_self_projector_for_haar_states(random_states):
    for psi in random_states(100):
        assert fidelity_pure_mixed(psi, psi.density()) == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------- partial trace


def test_partial_trace_product_state():
    rho = partial_trace_ancilla(TwoQubitState(1.0, 0.0, 0.0, 0.0))
    assert np.allclose(rho.m, [[1, 0], [0, 0]], atol=1e-12)


@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_partial_trace_bell_states(sign):
    rho = partial_trace_ancilla(TwoQubitState(S2, 0.0, 0.0, sign * S2))
    assert np.allclose(rho.m, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_matches_numpy_oracle(rng, random_states):
    for psi in random_states(50):
        anc = haar_random_qubit(rng)
        state = TwoQubitState.from_product(psi, anc)
        # scramble into a generic entangled state via a random unitary
        u = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))[0]
        v = u @ state.vec
        state = TwoQubitState(*v)
        expected = numpy_partial_trace(np.outer(v, v.conj()))
        assert np.allclose(partial_trace_ancilla(state).m, expected, atol=1e-12)


def test_partial_trace_is_linear(rng, random_states):
    # tracing a convex mixture equals the mixture of traces
    for _ in range(20):
        a = TwoQubitState.from_product(haar_random_qubit(rng), haar_random_qubit(rng))
        b = TwoQubitState.from_product(haar_random_qubit(rng), haar_random_qubit(rng))
        w = rng.uniform(0.0, 1.0)
        mixed = w * np.outer(a.vec, a.vec.conj()) + (1 - w) * np.outer(b.vec, b.vec.conj())
        combo = w * partial_trace_ancilla(a).m + (1 - w) * partial_trace_ancilla(b).m
        assert np.allclose(numpy_partial_trace(mixed), combo, atol=1e-12)


# ---------------------------------------------------------------- haar sampling


def test_haar_sample_is_normalized(rng):
    for _ in range(100):
        psi = haar_random_qubit(rng)
        assert abs(abs(psi.a0) ** 2 + abs(psi.a1) ** 2 - 1.0) < 1e-12


def test_haar_sampling_is_deterministic():
    a = [haar_random_qubit(spawn_rng(42, 0)) for _ in range(1)][0]
    b = [haar_random_qubit(spawn_rng(42, 0)) for _ in range(1)][0]
    assert a == b


def test_haar_moment_matches_spherical_grid():
    # independent oracle: uniform-sphere average of cos^2(theta/2) by quadrature
    theta = np.linspace(0.0, np.pi, 20001)
    weight = np.sin(theta)
    grid_avg = np.trapezoid(np.cos(theta / 2) ** 2 * weight, theta) / np.trapezoid(
        weight, theta
    )
    assert grid_avg == pytest.approx(0.5, abs=1e-9)

    rng = spawn_rng(7, 0)
    mean = np.mean([abs(haar_random_qubit(rng).a0) ** 2 for _ in range(100_000)])
    assert abs(mean - grid_avg) < 0.005


# ---------------------------------------------------------------- six states


def test_six_states_are_normalized_in_fixed_order():
    states = mub_six()
    assert len(states) == 6
    assert states[0] == Qubit1(1.0, 0.0)  # H
    assert states[1] == Qubit1(0.0, 1.0)  # V
    for psi in states:
        assert abs(abs(psi.a0) ** 2 + abs(psi.a1) ** 2 - 1.0) < 1e-12


def test_six_states_orthogonal_pairs():
    h, v, d, a, r, l = mub_six()
    for x, y in [(h, v), (d, a), (r, l)]:
        assert abs(overlap(x, y)) ** 2 < 1e-12


def test_six_states_mutually_unbiased():
    h, v, d, a, r, l = mub_six()
    for x in (d, a, r, l):
        assert abs(overlap(h, x)) ** 2 == pytest.approx(0.5, abs=1e-12)
        assert abs(overlap(v, x)) ** 2 == pytest.approx(0.5, abs=1e-12)
    for x in (r, l):
        assert abs(overlap(d, x)) ** 2 == pytest.approx(0.5, abs=1e-12)


def test_six_states_form_a_2_design(rng, random_states):
    # quadratic and quartic overlap moments must equal the Haar values
    # 1/2 and 1/3 for any reference state
    for chi in random_states(20):
        quad = np.mean([abs(overlap(psi, chi)) ** 2 for psi in mub_six()])
        quart = np.mean([abs(overlap(psi, chi)) ** 4 for psi in mub_six()])
        assert quad == pytest.approx(0.5, abs=1e-12)
        assert quart == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_2_design_matches_haar_monte_carlo():
    chi = Qubit1(0.6, 0.8j)
    rng = spawn_rng(11, 0)
    samples = np.array(
        [abs(overlap(haar_random_qubit(rng), chi)) ** 2 for _ in range(100_000)]
    )
    for moment, expected in [(samples, 0.5), (samples**2, 1.0 / 3.0)]:
        se = moment.std(ddof=1) / math.sqrt(len(moment))
        assert abs(moment.mean() - expected) < 3 * se


# ---------------------------------------------------------------- ray helpers


def test_states_equal_up_to_global_phase(random_states):
    phase = complex(math.cos(1.1), math.sin(1.1))
    for psi in random_states(20):
        rotated = Qubit1(psi.a0 * phase, psi.a1 * phase)
        assert states_equal(psi, rotated)
        assert not states_equal(psi, orthogonal(psi))


def test_canonical_makes_leading_amplitude_real(random_states):
    for psi in random_states(20):
        fixed = canonical(psi)
        assert fixed.a0.imag == pytest.approx(0.0, abs=1e-12)
        assert fixed.a0.real > 0.0
        assert states_equal(psi, fixed)


def test_orthogonal_is_orthogonal(random_states):
    for psi in random_states(20):
        assert abs(overlap(psi, orthogonal(psi))) < 1e-12


def test_spawn_rng_streams():
    assert spawn_rng(5, 1).standard_normal(4).tolist() == spawn_rng(5, 1).standard_normal(4).tolist()
    assert spawn_rng(5, 1).standard_normal(4).tolist() != spawn_rng(5, 2).standard_normal(4).tolist()
