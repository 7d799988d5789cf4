"""Complex-amplitude state algebra for one qubit and a qubit pair.

Conventions used everywhere in this package: |0> is horizontal (H) and |1>
is vertical (V) polarization, and two-qubit amplitudes are indexed
(system, ancilla) with the system as the most significant index.  States
are physical rays, so equality predicates compare up to a global phase.
All values are immutable after construction; random sampling takes an
explicit generator so results stay reproducible (use ``spawn_rng`` to
derive independent child streams for parallel work).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError

NORM_TOL = 1e-12

_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class Qubit1:
    """Pure single-qubit state a0|0> + a1|1>, normalized to 1."""

    a0: complex
    a1: complex

    def __post_init__(self):
        object.__setattr__(self, "a0", complex(self.a0))
        object.__setattr__(self, "a1", complex(self.a1))
        n = abs(self.a0) ** 2 + abs(self.a1) ** 2
        if not math.isfinite(n):
            raise InvalidStateError("qubit amplitudes must be finite")
        if abs(n - 1.0) > NORM_TOL:
            raise InvalidStateError(f"qubit norm^2 = {n!r}, expected 1")

    @classmethod
    def normalized(cls, a0: complex, a1: complex) -> "Qubit1":
        """Build a state from unnormalized amplitudes."""
        n = math.sqrt(abs(a0) ** 2 + abs(a1) ** 2)
        if n == 0.0 or not math.isfinite(n):
            raise InvalidStateError("cannot normalize a zero or non-finite vector")
        return cls(a0 / n, a1 / n)

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.a0, self.a1], dtype=complex)

    def density(self) -> "Density1":
        """The projector |psi><psi|."""
        v = self.vec
        return Density1(np.outer(v, v.conj()))


@dataclass(frozen=True)
class TwoQubitState:
    """Two-qubit amplitudes c_sa over (system, ancilla) in {00, 01, 10, 11}."""

    c00: complex
    c01: complex
    c10: complex
    c11: complex

    def __post_init__(self):
        for name in ("c00", "c01", "c10", "c11"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        n = sum(abs(c) ** 2 for c in self.amps)
        if not math.isfinite(n):
            raise InvalidStateError("two-qubit amplitudes must be finite")
        if abs(n - 1.0) > NORM_TOL:
            raise InvalidStateError(f"two-qubit norm^2 = {n!r}, expected 1")

    @classmethod
    def from_product(cls, system: Qubit1, ancilla: Qubit1) -> "TwoQubitState":
        return cls(
            system.a0 * ancilla.a0,
            system.a0 * ancilla.a1,
            system.a1 * ancilla.a0,
            system.a1 * ancilla.a1,
        )

    @property
    def amps(self) -> tuple[complex, complex, complex, complex]:
        return (self.c00, self.c01, self.c10, self.c11)

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.amps, dtype=complex)


@dataclass(frozen=True, eq=False)
class Density1:
    """2x2 density operator: Hermitian, unit trace, positive semidefinite."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidStateError(f"density matrix shape {m.shape}, expected (2, 2)")
        if not np.all(np.isfinite(m)):
            raise InvalidStateError("density matrix entries must be finite")
        if abs(m[0, 1] - m[1, 0].conjugate()) > NORM_TOL or (
            abs(m[0, 0].imag) > NORM_TOL or abs(m[1, 1].imag) > NORM_TOL
        ):
            raise InvalidStateError("density matrix is not Hermitian")
        tr = m[0, 0].real + m[1, 1].real
        if abs(tr - 1.0) > NORM_TOL:
            raise InvalidStateError(f"density matrix trace {tr!r}, expected 1")
        # closed-form smallest eigenvalue of a 2x2 Hermitian matrix
        det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
        lam_min = (tr - math.sqrt(max(tr * tr - 4.0 * det, 0.0))) / 2.0
        if lam_min < -NORM_TOL:
            raise InvalidStateError(f"density matrix has eigenvalue {lam_min!r} < 0")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)


def overlap(a: Qubit1, b: Qubit1) -> complex:
    """Inner product <a|b>."""
    return a.a0.conjugate() * b.a0 + a.a1.conjugate() * b.a1


def orthogonal(psi: Qubit1) -> Qubit1:
    """A state orthogonal to psi (unique up to phase)."""
    return Qubit1(-psi.a1.conjugate(), psi.a0.conjugate())


def states_equal(a: Qubit1, b: Qubit1, tol: float = NORM_TOL) -> bool:
    """Ray equality: true when the states differ only by a global phase."""
    return abs(abs(overlap(a, b)) - 1.0) <= tol


def canonical(psi: Qubit1) -> Qubit1:
    """Fix the global phase so the first non-negligible amplitude is real positive."""
    ref = psi.a0 if abs(psi.a0) > NORM_TOL else psi.a1
    phase = ref / abs(ref)
    return Qubit1(psi.a0 / phase, psi.a1 / phase)


def fidelity_pure_mixed(psi: Qubit1, rho: Density1) -> float:
    """Overlap <psi|rho|psi> of a pure state with a density operator.

    The result is mathematically real; any floating-point imaginary residue
    beyond tolerance raises, otherwise it is discarded.
    """
    m = rho.m
    a0, a1 = psi.a0, psi.a1
    val = a0.conjugate() * (m[0, 0] * a0 + m[0, 1] * a1) + a1.conjugate() * (
        m[1, 0] * a0 + m[1, 1] * a1
    )
    if abs(val.imag) > NORM_TOL:
        raise InvalidStateError(f"overlap has imaginary residue {val.imag!r}")
    return float(val.real)


def partial_trace_ancilla(state: TwoQubitState) -> Density1:
    """Reduced density operator of the system qubit."""
    c = state.vec.reshape(2, 2)
    return Density1(c @ c.conj().T)


def haar_random_qubit(rng: np.random.Generator) -> Qubit1:
    """Draw a state uniformly (Haar) from the Bloch sphere.

    Two independent standard complex Gaussian amplitudes, normalized.  The
    caller owns the generator; fresh generators with the same seed reproduce
    the same states.
    """
    x = rng.standard_normal(4)
    a0 = complex(x[0], x[1])
    a1 = complex(x[2], x[3])
    n = math.sqrt(abs(a0) ** 2 + abs(a1) ** 2)
    if n == 0.0:  # probability zero, but keep the contract total
        return haar_random_qubit(rng)
    return Qubit1(a0 / n, a1 / n)


def mub_six() -> list[Qubit1]:
    """The six canonical input states, in the fixed order H, V, D, A, R, L.

    These pair into three mutually unbiased bases and form a projective
    2-design: averaging any quadratic fidelity functional over them equals
    the Haar average over the whole Bloch sphere.
    """
    s = _SQRT_HALF
    return [
        Qubit1(1.0, 0.0),
        Qubit1(0.0, 1.0),
        Qubit1(s, s),
        Qubit1(s, -s),
        Qubit1(s, complex(0.0, -s)),
        Qubit1(s, complex(0.0, s)),
    ]


def spawn_rng(seed: int, *key: int) -> np.random.Generator:
    """Deterministic child generator for (seed, key...).

    Parallel tasks must derive their streams this way so merged results are
    reproducible for a fixed seed and partition, independent of scheduling.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))
