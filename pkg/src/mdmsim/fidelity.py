"""Estimation/operation fidelities, their Bloch-sphere averages, and the
optimal information-disturbance trade-off frontier.

Closed forms for the protocol in :mod:`mdmsim.circuit`:

    G_avg(t)   = (t^2 + 1) / 3
    F_avg(t,r) = 2 (1 + t r) / 3
    F_max(G)   = 2/3 + sqrt(1 - (6 G - 3)^2) / 3      (the MDM frontier)

The six-state average is exact for these functionals (2-design property);
the Haar Monte Carlo average is the independent statistical cross-check.
"""

import math
from dataclasses import dataclass
from typing import Callable

from .circuit import MeasurementStrength, run_protocol
from .errors import BoundDomainError
from .qcore import Qubit1, fidelity_pure_mixed, haar_random_qubit, mub_six, spawn_rng

G_MIN = 0.5
G_MAX = 2.0 / 3.0
_DOMAIN_SLACK = 1e-12
_RANGE_SLACK = 1e-9

FidelityFn = Callable[[Qubit1, MeasurementStrength], float]


@dataclass(frozen=True)
class FidelityPoint:
    """One (G_avg, F_avg) pair together with the strength that produced it."""

    g_avg: float
    f_avg: float
    strength: MeasurementStrength

    def __post_init__(self):
        if not (G_MIN - _RANGE_SLACK <= self.g_avg <= G_MAX + _RANGE_SLACK):
            raise ValueError(f"g_avg={self.g_avg!r} outside [1/2, 2/3]")
        if not (G_MAX - _RANGE_SLACK <= self.f_avg <= 1.0 + _RANGE_SLACK):
            raise ValueError(f"f_avg={self.f_avg!r} outside [2/3, 1]")


@dataclass(frozen=True)
class MonteCarloAverage:
    """Monte Carlo mean with its standard error."""

    mean: float
    stderr: float
    n_samples: int


def estimation_fidelity(psi: Qubit1, s: MeasurementStrength) -> float:
    """Overlap of the outcome-weighted guess with the input:
    P0 |<0|psi>|^2 + P1 |<1|psi>|^2."""
    x = abs(psi.a0) ** 2
    y = abs(psi.a1) ** 2
    t2 = s.t * s.t
    r2 = s.r * s.r
    p0 = x * t2 + y * r2
    p1 = x * r2 + y * t2
    return p0 * x + p1 * y


def operation_fidelity(psi: Qubit1, s: MeasurementStrength) -> float:
    """Overlap of the feed-forward-corrected output with the input."""
    return fidelity_pure_mixed(psi, run_protocol(psi, s).rho_f)


def avg_estimation_fidelity(s: MeasurementStrength) -> float:
    """Bloch-sphere average of the estimation fidelity."""
    return (s.t * s.t + 1.0) / 3.0


def avg_operation_fidelity(s: MeasurementStrength) -> float:
    """Bloch-sphere average of the operation fidelity."""
    return 2.0 * (1.0 + s.t * s.r) / 3.0


def mdm_bound(g_avg: float) -> float:
    """Largest average operation fidelity attainable at estimation fidelity
    ``g_avg``.

    Only the optimal (positive square-root) branch is emitted.  Arguments
    outside [1/2, 2/3] beyond a 1e-12 slack raise ``BoundDomainError``:
    an out-of-range G indicates a pipeline bug, not a physical point.
    """
    if not (G_MIN - _DOMAIN_SLACK <= g_avg <= G_MAX + _DOMAIN_SLACK):
        raise BoundDomainError(f"g_avg={g_avg!r} outside [1/2, 2/3]")
    rad = 1.0 - (6.0 * g_avg - 3.0) ** 2
    return 2.0 / 3.0 + math.sqrt(max(rad, 0.0)) / 3.0


def analytic_point(s: MeasurementStrength) -> FidelityPoint:
    """Closed-form (G_avg, F_avg) for one strength; lies on the frontier."""
    return FidelityPoint(avg_estimation_fidelity(s), avg_operation_fidelity(s), s)


def six_state_average(f: FidelityFn, s: MeasurementStrength) -> float:
    """Arithmetic mean of a per-state fidelity over the six canonical states."""
    states = mub_six()
    return sum(f(psi, s) for psi in states) / len(states)


def haar_average(
    f: FidelityFn, s: MeasurementStrength, n_samples: int, seed: int
) -> MonteCarloAverage:
    """Monte Carlo Bloch-sphere average of a per-state fidelity.

    Deterministic for a fixed seed.  Workers splitting the sample budget must
    derive child generators with ``spawn_rng(seed, task_index)``; for a fixed
    seed and partition the merged estimate does not depend on the worker
    count.  This implementation runs as a single task (index 0).
    """
    if n_samples < 1:
        raise ValueError(f"n_samples={n_samples} must be >= 1")
    rng = spawn_rng(seed, 0)
    total = 0.0
    total_sq = 0.0
    for _ in range(n_samples):
        v = f(haar_random_qubit(rng), s)
        total += v
        total_sq += v * v
    mean = total / n_samples
    var = max(total_sq / n_samples - mean * mean, 0.0)
    if n_samples > 1:
        var *= n_samples / (n_samples - 1)
    return MonteCarloAverage(mean, math.sqrt(var / n_samples), n_samples)
