"""The abstract measurement protocol on (system, ancilla) qubit pairs.

The system qubit is entangled with a |0>-initialized ancilla by a CNOT, the
ancilla is rotated by the tunable gate [[t, r], [r, -t]] and measured, and
outcome 1 triggers a sigma_z correction on the system.  t = r is a coin
flip that leaves the system untouched; r = 0 is a projective measurement.
``run_protocol`` is the reference model the optical bench is validated
against.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStrengthError
from .qcore import NORM_TOL, Density1, Qubit1, TwoQubitState

_ZERO_PROB = 1e-300  # below this a branch never occurs


@dataclass(frozen=True)
class MeasurementStrength:
    """Ancilla-rotation parameters (t, r) with t >= r >= 0 and t^2 + r^2 = 1."""

    t: float
    r: float

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "r", float(self.r))
        if not (math.isfinite(self.t) and math.isfinite(self.r)):
            raise InvalidStrengthError("strength parameters must be finite")
        if abs(self.t * self.t + self.r * self.r - 1.0) > NORM_TOL:
            raise InvalidStrengthError(f"t^2 + r^2 != 1 for t={self.t!r}, r={self.r!r}")
        if not self.t >= self.r >= 0.0:
            raise InvalidStrengthError(f"need t >= r >= 0, got t={self.t!r}, r={self.r!r}")

    @classmethod
    def from_t(cls, t: float) -> "MeasurementStrength":
        """Build from t alone; r is the non-negative root of 1 - t^2."""
        t = float(t)
        return cls(t, math.sqrt(max(1.0 - t * t, 0.0)))

    @classmethod
    def from_phi_deg(cls, phi_deg: float) -> "MeasurementStrength":
        """Strength realized by the variable beam splitter at waveplate angle
        phi (degrees): t = cos(2 phi), r = sin(2 phi)."""
        phi = math.radians(phi_deg)
        return cls(math.cos(2.0 * phi), math.sin(2.0 * phi))


@dataclass(frozen=True)
class ProtocolResult:
    """Everything one protocol run produces for a given input state.

    ``branch0``/``branch1`` are the normalized post-measurement system states
    for ancilla outcomes 0 and 1 (``branch1_raw`` before the sigma_z
    correction).  ``rho_f`` is assembled from the subnormalized branch
    vectors, so its trace is p0 + p1 = 1.  A branch with zero probability
    never occurs; its state is reported as the (undisturbed) input.
    """

    p0: float
    p1: float
    branch0: Qubit1
    branch1_raw: Qubit1
    branch1: Qubit1
    rho_g: Density1
    rho_f: Density1


def apply_cnot(state: TwoQubitState) -> TwoQubitState:
    """CNOT with the system as control: flips the ancilla in the system-1 sector."""
    return TwoQubitState(state.c00, state.c01, state.c11, state.c10)


def apply_hprime(state: TwoQubitState, s: MeasurementStrength) -> TwoQubitState:
    """Apply [[t, r], [r, -t]] to the ancilla index only."""
    t, r = s.t, s.r
    return TwoQubitState(
        t * state.c00 + r * state.c01,
        r * state.c00 - t * state.c01,
        t * state.c10 + r * state.c11,
        r * state.c10 - t * state.c11,
    )


def feed_forward_sigma_z(psi: Qubit1) -> Qubit1:
    """Outcome-1 correction |1> -> -|1>."""
    return Qubit1(psi.a0, -psi.a1)


def _normalized_branch(amps: tuple[complex, complex], p: float, fallback: Qubit1) -> Qubit1:
    if p < _ZERO_PROB:
        return fallback
    n = math.sqrt(p)
    return Qubit1(amps[0] / n, amps[1] / n)


def run_protocol(psi: Qubit1, s: MeasurementStrength) -> ProtocolResult:
    """Run CNOT, ancilla rotation, ancilla measurement and feed-forward.

    The ancilla always starts in |0>; callers supply only the system state.
    """
    state = apply_hprime(apply_cnot(TwoQubitState.from_product(psi, Qubit1(1.0, 0.0))), s)
    # ancilla outcome i selects the system amplitudes (c_0i, c_1i)
    b0 = (state.c00, state.c10)
    b1 = (state.c01, state.c11)
    p0 = abs(b0[0]) ** 2 + abs(b0[1]) ** 2
    p1 = abs(b1[0]) ** 2 + abs(b1[1]) ** 2
    branch0 = _normalized_branch(b0, p0, psi)
    branch1_raw = _normalized_branch(b1, p1, psi)
    branch1 = feed_forward_sigma_z(branch1_raw)

    k0 = np.array(b0, dtype=complex)
    k1 = np.array([b1[0], -b1[1]], dtype=complex)  # sigma_z applied to the kept branch
    rho_f = Density1(np.outer(k0, k0.conj()) + np.outer(k1, k1.conj()))
    rho_g = Density1(np.array([[p0, 0.0], [0.0, p1]], dtype=complex))
    return ProtocolResult(p0, p1, branch0, branch1_raw, branch1, rho_g, rho_f)
