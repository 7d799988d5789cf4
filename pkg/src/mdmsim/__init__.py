"""Deterministic simulator and analysis pipeline for minimum-disturbance
measurement of a single-photon polarization qubit with a path-qubit ancilla.

The package covers the abstract two-qubit protocol (:mod:`mdmsim.circuit`),
its closed-form information-disturbance trade-off (:mod:`mdmsim.fidelity`),
an element-level Jones-calculus model of the interferometric apparatus
(:mod:`mdmsim.bench`), shot-based count simulation (:mod:`mdmsim.montecarlo`)
and the count-to-fidelity reduction (:mod:`mdmsim.datared`), plus a CLI
(``mdmsim``).
"""

from .bench import (
    STATE_LABELS,
    STATE_SETTINGS,
    BenchConfig,
    DetectorProbs,
    ModeState,
    bench_equals_circuit,
    circuit_probs,
    config_for_state,
    hwp_jones,
    prepare_state,
    propagate,
    qwp_jones,
)
from .circuit import (
    MeasurementStrength,
    ProtocolResult,
    apply_cnot,
    apply_hprime,
    feed_forward_sigma_z,
    run_protocol,
)
from .datared import (
    ReducedPoint,
    aggregate_runs,
    efficiency_correct,
    load_reference_counts,
    reduce_row,
    reduce_table,
)
from .errors import (
    BoundDomainError,
    CountsParseError,
    EmptyRowError,
    InvalidConfigError,
    InvalidStateError,
    InvalidStrengthError,
    PreparationMismatchError,
)
from .fidelity import (
    FidelityPoint,
    MonteCarloAverage,
    analytic_point,
    avg_estimation_fidelity,
    avg_operation_fidelity,
    estimation_fidelity,
    haar_average,
    mdm_bound,
    operation_fidelity,
    six_state_average,
)
from .montecarlo import (
    CountsRow,
    CountsTable,
    expected_counts,
    read_csv,
    simulate_counts,
    to_csv_text,
    write_csv,
)
from .qcore import (
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

__version__ = "0.1.0"
