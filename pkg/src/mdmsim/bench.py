"""Jones-calculus model of the interferometric measurement apparatus.

The photon enters in path 0 carrying the polarization qubit prepared by a
half-wave plate at theta1 followed by a quarter-wave plate at theta2 acting
on |V>.  A polarizing beam splitter (H transmits, V reflects) entangles
polarization with path, a phase ``mz_phase`` accumulates in path 1, a
variable beam splitter (half-wave plate at phi in path 0, phi + 45 deg in
path 1, then a second polarizing beam splitter) closes the interferometer,
and a half-wave plate at 45 deg in output path 1 applies the conditional
polarization flip.  Each output then passes the inverted preparation
waveplates and an analyzing beam splitter that separates the (psi, psi-perp)
channels, giving four detector probabilities.

Imperfections: path coherence is scaled by ``visibility`` before the
recombining beam splitter, each detector channel keeps a click with
probability ``eta[i]`` (thinning), and a dark click may fire in an otherwise
empty shot with probability ``dark_rate`` per channel.

Mode amplitudes are ordered [path0 H, path0 V, path1 H, path1 V].
Waveplate angles are measured from the vertical axis (radians internally,
degrees at every external boundary).  The matrix phase conventions below
are fixed exactly as written so results are bit-reproducible; only
probability-level behavior is physically meaningful, and that is what the
``bench_equals_circuit`` harness checks against the abstract protocol.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .circuit import MeasurementStrength, run_protocol
from .errors import InvalidConfigError, InvalidStateError, PreparationMismatchError
from .qcore import Qubit1, orthogonal, overlap, states_equal

_PREP_TOL = 1e-9

STATE_LABELS = ("H", "V", "D", "A", "R", "L")

# Preparation waveplate angles (theta1_deg, theta2_deg) for the six canonical
# input states; each produces the corresponding mub_six() state up to a
# global phase.
STATE_SETTINGS: dict[str, tuple[float, float]] = {
    "H": (45.0, 0.0),
    "V": (0.0, 0.0),
    "D": (22.5, 45.0),
    "A": (67.5, -45.0),
    "R": (22.5, 0.0),
    "L": (67.5, 0.0),
}

# Polarizing beam splitter on [0H, 0V, 1H, 1V]: H transmits (keeps its path),
# V reflects (swaps path).  No reflection phase; all path phases live in
# mz_phase.
_PBS = np.zeros((4, 4), dtype=complex)
_PBS[0, 0] = 1.0
_PBS[3, 1] = 1.0
_PBS[2, 2] = 1.0
_PBS[1, 3] = 1.0

_V_IN = np.array([0.0, 1.0], dtype=complex)


def hwp_jones(theta: float) -> np.ndarray:
    """Half-wave plate with its fast axis ``theta`` radians from vertical."""
    c = math.cos(2.0 * theta)
    s = math.sin(2.0 * theta)
    return np.array([[-c, s], [s, c]], dtype=complex)


def qwp_jones(theta: float) -> np.ndarray:
    """Quarter-wave plate at ``theta`` radians from vertical.

    The fast-axis component is advanced by a phase i relative to the slow
    axis; two identical quarter-wave plates compose to ``hwp_jones(theta)``.
    """
    c = math.cos(theta)
    s = math.sin(theta)
    rot = np.array([[c, s], [-s, c]], dtype=complex)
    return rot @ np.diag([1.0j, 1.0]) @ rot.T


def prepare_state(theta1: float, theta2: float) -> Qubit1:
    """Polarization qubit leaving the preparation waveplates (input |V>)."""
    v = qwp_jones(theta2) @ hwp_jones(theta1) @ _V_IN
    return Qubit1(complex(v[0]), complex(v[1]))


@dataclass(frozen=True)
class ModeState:
    """Pure path x polarization amplitudes, ordered [0H, 0V, 1H, 1V].

    The norm may drop below 1 when loss is represented; it never exceeds 1.
    """

    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex)
        if amps.shape != (4,):
            raise InvalidStateError(f"mode amplitudes shape {amps.shape}, expected (4,)")
        if not np.all(np.isfinite(amps)):
            raise InvalidStateError("mode amplitudes must be finite")
        n = float(np.sum(np.abs(amps) ** 2))
        if n > 1.0 + 1e-12:
            raise InvalidStateError(f"mode norm^2 = {n!r} exceeds 1")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_qubit(cls, psi: Qubit1, path: int = 0) -> "ModeState":
        amps = np.zeros(4, dtype=complex)
        amps[2 * path] = psi.a0
        amps[2 * path + 1] = psi.a1
        return cls(amps)

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))


@dataclass(frozen=True)
class BenchConfig:
    """All apparatus settings.  Angles are radians; loaders use degrees.

    ``eta`` holds the relative channel efficiencies for
    (D0(psi), D0(perp), D1(psi), D1(perp)).  ``dark_rate`` is the per-shot
    probability that an otherwise empty shot fires one given detector; the
    four dark outcomes share the no-click budget, so it must not exceed 1/4.
    """

    theta1: float
    theta2: float
    phi: float
    mz_phase: float = 0.0
    visibility: float = 1.0
    eta: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    dark_rate: float = 0.0

    def __post_init__(self):
        for name in ("theta1", "theta2", "phi", "mz_phase"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidConfigError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if not 0.0 <= self.visibility <= 1.0:
            raise InvalidConfigError(f"visibility={self.visibility!r} outside [0, 1]")
        eta = tuple(float(e) for e in self.eta)
        if len(eta) != 4:
            raise InvalidConfigError(f"eta needs 4 entries, got {len(eta)}")
        if any(not 0.0 < e <= 1.0 for e in eta):
            raise InvalidConfigError(f"eta entries must lie in (0, 1], got {eta!r}")
        object.__setattr__(self, "eta", eta)
        if not 0.0 <= self.dark_rate <= 0.25:
            raise InvalidConfigError(f"dark_rate={self.dark_rate!r} outside [0, 0.25]")

    @classmethod
    def ideal(cls, phi_deg: float, theta1_deg: float = 0.0, theta2_deg: float = 0.0) -> "BenchConfig":
        """Loss-free, perfectly aligned apparatus at the given angles."""
        return cls(
            theta1=math.radians(theta1_deg),
            theta2=math.radians(theta2_deg),
            phi=math.radians(phi_deg),
        )

    def strength(self) -> MeasurementStrength:
        """The measurement strength this beam-splitter angle realizes."""
        return MeasurementStrength.from_phi_deg(math.degrees(self.phi))

    def to_dict(self) -> dict[str, float]:
        """Flat key-value form with angles in degrees."""
        return {
            "theta1_deg": math.degrees(self.theta1),
            "theta2_deg": math.degrees(self.theta2),
            "phi_deg": math.degrees(self.phi),
            "mz_phase_deg": math.degrees(self.mz_phase),
            "visibility": self.visibility,
            "eta0": self.eta[0],
            "eta1": self.eta[1],
            "eta2": self.eta[2],
            "eta3": self.eta[3],
            "dark_rate": self.dark_rate,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchConfig":
        """Inverse of :meth:`to_dict`; missing keys fall back to ideal values."""
        known = {
            "theta1_deg": 0.0,
            "theta2_deg": 0.0,
            "phi_deg": 0.0,
            "mz_phase_deg": 0.0,
            "visibility": 1.0,
            "eta0": 1.0,
            "eta1": 1.0,
            "eta2": 1.0,
            "eta3": 1.0,
            "dark_rate": 0.0,
        }
        unknown = set(doc) - set(known)
        if unknown:
            raise InvalidConfigError(f"unknown config keys: {sorted(unknown)}")
        values = {**known, **doc}
        return cls(
            theta1=math.radians(values["theta1_deg"]),
            theta2=math.radians(values["theta2_deg"]),
            phi=math.radians(values["phi_deg"]),
            mz_phase=math.radians(values["mz_phase_deg"]),
            visibility=values["visibility"],
            eta=(values["eta0"], values["eta1"], values["eta2"], values["eta3"]),
            dark_rate=values["dark_rate"],
        )


def config_for_state(config: BenchConfig, label: str) -> BenchConfig:
    """Same apparatus with the preparation waveplates set for one canonical state."""
    if label not in STATE_SETTINGS:
        raise InvalidConfigError(f"unknown state label {label!r}")
    t1_deg, t2_deg = STATE_SETTINGS[label]
    return replace(config, theta1=math.radians(t1_deg), theta2=math.radians(t2_deg))


@dataclass(frozen=True)
class DetectorProbs:
    """Click probabilities ordered [D0(psi), D0(perp), D1(psi), D1(perp)]."""

    p: tuple[float, float, float, float]

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        if len(p) != 4:
            raise InvalidStateError(f"need 4 probabilities, got {len(p)}")
        if any(not 0.0 <= x <= 1.0 for x in p):
            raise InvalidStateError(f"probabilities outside [0, 1]: {p!r}")
        object.__setattr__(self, "p", p)

    def as_array(self) -> np.ndarray:
        return np.array(self.p)

    @property
    def total(self) -> float:
        return sum(self.p)


def _per_path(m0: np.ndarray, m1: np.ndarray) -> np.ndarray:
    """Polarization operation m0 in path 0 and m1 in path 1."""
    out = np.zeros((4, 4), dtype=complex)
    out[0:2, 0:2] = m0
    out[2:4, 2:4] = m1
    return out


def propagate(config: BenchConfig, psi: Qubit1) -> DetectorProbs:
    """Click probability at each of the four detectors for input ``psi``.

    ``psi`` must be the state the configured preparation waveplates produce
    (up to a global phase); otherwise the inverse-analysis stage would no
    longer project onto (psi, psi-perp) and ``PreparationMismatchError`` is
    raised.
    """
    expected = prepare_state(config.theta1, config.theta2)
    if not states_equal(psi, expected, tol=_PREP_TOL):
        raise PreparationMismatchError(
            "psi does not match the state prepared by (theta1, theta2)"
        )

    # coherent front end: entangle polarization with path, path-1 phase
    amps = _PBS @ ModeState.from_qubit(psi, path=0).amps
    amps = amps.copy()
    amps[2:4] *= np.exp(1j * config.mz_phase)

    # dephase path coherence by the interference visibility
    rho = np.outer(amps, amps.conj())
    rho[0:2, 2:4] *= config.visibility
    rho[2:4, 0:2] *= config.visibility

    # variable beam splitter, conditional flip, inverse analysis
    u = _per_path(hwp_jones(config.phi), hwp_jones(config.phi + math.pi / 4.0))
    u = _PBS @ u
    u = _per_path(np.eye(2, dtype=complex), hwp_jones(math.pi / 4.0)) @ u
    inv = hwp_jones(config.theta1) @ qwp_jones(config.theta2 + math.pi / 2.0)
    u = _per_path(inv, inv) @ u
    rho = u @ rho @ u.conj().T

    # analyzer: after the inverse waveplates psi sits on V, psi-perp on H
    diag = np.maximum(rho.diagonal().real, 0.0)
    raw = np.array([diag[1], diag[0], diag[3], diag[2]])

    eta = np.array(config.eta)
    detected = eta * raw
    no_click = max(1.0 - float(detected.sum()), 0.0)
    p = detected + no_click * config.dark_rate
    return DetectorProbs(tuple(float(min(x, 1.0)) for x in p))


def circuit_probs(psi: Qubit1, s: MeasurementStrength) -> np.ndarray:
    """The four detector probabilities predicted by the abstract protocol."""
    result = run_protocol(psi, s)
    perp = orthogonal(psi)
    return np.array(
        [
            result.p0 * abs(overlap(psi, result.branch0)) ** 2,
            result.p0 * abs(overlap(perp, result.branch0)) ** 2,
            result.p1 * abs(overlap(psi, result.branch1)) ** 2,
            result.p1 * abs(overlap(perp, result.branch1)) ** 2,
        ]
    )


def bench_equals_circuit(
    phi_deg_values=None, config: BenchConfig | None = None
) -> float:
    """Maximum |bench - circuit| click-probability discrepancy.

    Sweeps the six canonical states over a grid of beam-splitter angles.
    With an ideal apparatus the two models are mathematically identical and
    the discrepancy is rounding noise; imperfections in ``config`` show up
    as a genuine gap.
    """
    if phi_deg_values is None:
        phi_deg_values = np.linspace(0.0, 22.5, 10)
    base = config if config is not None else BenchConfig.ideal(0.0)
    worst = 0.0
    for phi_deg in phi_deg_values:
        s = MeasurementStrength.from_phi_deg(phi_deg)
        for label in STATE_LABELS:
            cfg = replace(config_for_state(base, label), phi=math.radians(phi_deg))
            psi = prepare_state(cfg.theta1, cfg.theta2)
            gap = np.abs(propagate(cfg, psi).as_array() - circuit_probs(psi, s)).max()
            worst = max(worst, float(gap))
    return worst
