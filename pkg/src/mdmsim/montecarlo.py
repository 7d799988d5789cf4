"""Shot-level simulation of the counting experiment.

One shot is one heralded photon: a single five-way categorical draw over
the four detector channels plus a no-click outcome, so at most one detector
fires per shot.  Shots are drawn in fixed-size chunks and every chunk uses
its own generator derived from (seed, state index, chunk index); a partition
of chunks across workers therefore merges to the same table for any worker
count.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bench import STATE_LABELS, BenchConfig, DetectorProbs, config_for_state, prepare_state, propagate
from .errors import CountsParseError, InvalidConfigError
from .qcore import spawn_rng

CSV_HEADER = "state,N0_psi,N0_perp,N1_psi,N1_perp"
CHUNK_SHOTS = 1 << 16


@dataclass(frozen=True)
class CountsRow:
    """Counts for one input state: (D0(psi), D0(perp), D1(psi), D1(perp)).

    Raw simulated counts are integers; efficiency-corrected counts and
    externally recorded rates may be real-valued.
    """

    state_label: str
    n0_psi: float
    n0_perp: float
    n1_psi: float
    n1_perp: float

    def __post_init__(self):
        if self.state_label not in STATE_LABELS:
            raise ValueError(f"unknown state label {self.state_label!r}")
        for name in ("n0_psi", "n0_perp", "n1_psi", "n1_perp"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name}={value!r} must be a finite non-negative count")
            object.__setattr__(self, name, value)

    @property
    def counts(self) -> np.ndarray:
        return np.array([self.n0_psi, self.n0_perp, self.n1_psi, self.n1_perp])

    @property
    def total(self) -> float:
        return float(self.counts.sum())


@dataclass(frozen=True)
class CountsTable:
    """Six rows in the fixed order H, V, D, A, R, L plus run metadata."""

    rows: tuple[CountsRow, ...]
    phi_deg: float
    shots_per_state: int | None = None
    seed: int | None = None

    def __post_init__(self):
        rows = tuple(self.rows)
        labels = tuple(row.state_label for row in rows)
        if labels != STATE_LABELS:
            raise ValueError(f"rows must be ordered {STATE_LABELS}, got {labels}")
        object.__setattr__(self, "rows", rows)

    @property
    def matrix(self) -> np.ndarray:
        """Counts as a 6x4 array in row order."""
        return np.stack([row.counts for row in self.rows])


def _categorical(probs: DetectorProbs) -> np.ndarray:
    """Five-outcome distribution [4 detectors, no-click]."""
    p = probs.as_array()
    s = float(p.sum())
    if s > 1.0 + 1e-9:
        raise InvalidConfigError(f"detector probabilities sum to {s!r} > 1")
    if abs(s - 1.0) <= 1e-12:  # conserve probability exactly when lossless
        return np.append(p / s, 0.0)
    return np.append(p, 1.0 - s)


def _chunk_sizes(total: int):
    for index, start in enumerate(range(0, total, CHUNK_SHOTS)):
        yield index, min(CHUNK_SHOTS, total - start)


def simulate_counts(config: BenchConfig, shots_per_state: int, seed: int) -> CountsTable:
    """Simulated count table over the six canonical input states."""
    if shots_per_state < 0:
        raise ValueError(f"shots_per_state={shots_per_state} must be >= 0")
    rows = []
    for state_index, label in enumerate(STATE_LABELS):
        cfg = config_for_state(config, label)
        psi = prepare_state(cfg.theta1, cfg.theta2)
        pvals = _categorical(propagate(cfg, psi))
        counts = np.zeros(5, dtype=np.int64)
        for chunk_index, n in _chunk_sizes(shots_per_state):
            rng = spawn_rng(seed, state_index, chunk_index)
            counts += rng.multinomial(n, pvals)
        rows.append(CountsRow(label, *(float(c) for c in counts[:4])))
    return CountsTable(
        tuple(rows),
        phi_deg=math.degrees(config.phi),
        shots_per_state=shots_per_state,
        seed=seed,
    )


def expected_counts(config: BenchConfig, shots_per_state: int) -> CountsTable:
    """Noise-free table (shots x probability per cell), the sampling oracle."""
    rows = []
    for label in STATE_LABELS:
        cfg = config_for_state(config, label)
        psi = prepare_state(cfg.theta1, cfg.theta2)
        cell = shots_per_state * propagate(cfg, psi).as_array()
        rows.append(CountsRow(label, *(float(c) for c in cell)))
    return CountsTable(tuple(rows), phi_deg=math.degrees(config.phi), shots_per_state=shots_per_state)


def _format_count(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def to_csv_text(table: CountsTable) -> str:
    """Serialize a table; metadata rides in #-prefixed comment lines."""
    lines = [f"# phi_deg={table.phi_deg!r}"]
    if table.shots_per_state is not None:
        lines.append(f"# shots={table.shots_per_state}")
    if table.seed is not None:
        lines.append(f"# seed={table.seed}")
    lines.append(CSV_HEADER)
    for row in table.rows:
        cells = ",".join(_format_count(v) for v in row.counts)
        lines.append(f"{row.state_label},{cells}")
    return "\n".join(lines) + "\n"


def write_csv(table: CountsTable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(to_csv_text(table))


def parse_csv_text(text: str, source: str = "<string>") -> CountsTable:
    """Parse a counts CSV document; errors carry 1-based line numbers."""
    meta: dict[str, str] = {}
    rows: list[CountsRow] = []
    header_seen = False
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
            continue
        if not header_seen:
            if line != CSV_HEADER:
                raise CountsParseError(
                    f"bad header {line!r}, expected {CSV_HEADER!r}", line=line_no
                )
            header_seen = True
            continue
        cells = line.split(",")
        if len(cells) != 5:
            raise CountsParseError(f"expected 5 columns, got {len(cells)}", line=line_no)
        label = cells[0].strip()
        if len(rows) >= 6:
            raise CountsParseError("more than six data rows", line=line_no)
        if label != STATE_LABELS[len(rows)]:
            raise CountsParseError(
                f"row {len(rows) + 1} must be state {STATE_LABELS[len(rows)]!r}, got {label!r}",
                line=line_no,
            )
        try:
            values = [float(c) for c in cells[1:]]
        except ValueError as exc:
            raise CountsParseError(f"non-numeric count: {exc}", line=line_no) from None
        try:
            rows.append(CountsRow(label, *values))
        except ValueError as exc:
            raise CountsParseError(str(exc), line=line_no) from None
    if not header_seen:
        raise CountsParseError(f"{source}: missing header {CSV_HEADER!r}")
    if len(rows) != 6:
        raise CountsParseError(f"{source}: expected 6 data rows, got {len(rows)}")
    if "phi_deg" not in meta:
        raise CountsParseError(f"{source}: missing '# phi_deg=...' metadata line")
    try:
        phi_deg = float(meta["phi_deg"])
    except ValueError:
        raise CountsParseError(f"{source}: non-numeric phi_deg {meta['phi_deg']!r}") from None

    def _int_meta(key: str) -> int | None:
        if key not in meta:
            return None
        try:
            return int(meta[key])
        except ValueError:
            raise CountsParseError(f"{source}: non-integer {key} {meta[key]!r}") from None

    return CountsTable(
        tuple(rows),
        phi_deg=phi_deg,
        shots_per_state=_int_meta("shots"),
        seed=_int_meta("seed"),
    )


def read_csv(path) -> CountsTable:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_csv_text(handle.read(), source=str(path))
