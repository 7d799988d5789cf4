"""Reduce count tables to (estimation fidelity, operation fidelity) points.

Per input state, each row is normalized by its own total N_tot:

    n_i(psi)     = N_i(psi) / N_tot
    F_psi        = n_0(psi) + n_1(psi)
    P_i          = n_i(psi) + n_i(perp)
    G_psi        = P_0 |<H|psi>|^2 + P_1 |<V|psi>|^2

and the table-level figures are unweighted means over the six canonical
states.  Efficiency correction is the caller's responsibility when
ingesting raw hardware counts; the bundled reference table is already
corrected.
"""

import importlib.resources
import json
import math
import statistics
from dataclasses import dataclass, replace

from .errors import EmptyRowError
from .montecarlo import STATE_LABELS, CountsRow, CountsTable, parse_csv_text
from .qcore import Qubit1, mub_six

REDUCED_CSV_HEADER = "phi_deg,g_avg,f_avg,g_std,f_std"


@dataclass(frozen=True)
class ReducedPoint:
    """Fidelity figures reduced from one or more count tables at a fixed phi."""

    g_avg: float
    f_avg: float
    g_per_state: tuple[float, ...]
    f_per_state: tuple[float, ...]
    phi_deg: float
    n_runs: int = 1
    g_std: float = 0.0
    f_std: float = 0.0

    def __post_init__(self):
        for name in ("g_per_state", "f_per_state"):
            values = tuple(float(v) for v in getattr(self, name))
            if len(values) != 6:
                raise ValueError(f"{name} needs 6 entries, got {len(values)}")
            object.__setattr__(self, name, values)
        for value in (self.g_avg, self.f_avg, *self.g_per_state, *self.f_per_state):
            if not 0.0 <= value <= 1.0 + 1e-12:
                raise ValueError(f"fidelity {value!r} outside [0, 1]")


def efficiency_correct(
    raw: CountsTable, eta: tuple[float, float, float, float]
) -> CountsTable:
    """Divide each detector column by its relative channel efficiency."""
    eta = tuple(float(e) for e in eta)
    if len(eta) != 4 or any(e <= 0.0 or not math.isfinite(e) for e in eta):
        raise ValueError(f"eta must be 4 positive values, got {eta!r}")
    rows = tuple(
        CountsRow(row.state_label, *(c / e for c, e in zip(row.counts, eta)))
        for row in raw.rows
    )
    return CountsTable(rows, raw.phi_deg, raw.shots_per_state, raw.seed)


def reduce_row(row: CountsRow, psi: Qubit1) -> tuple[float, float]:
    """(F_psi, G_psi) for one state's counts."""
    total = row.total
    if total <= 0.0:
        raise EmptyRowError(f"state {row.state_label}: all counts are zero")
    f = (row.n0_psi + row.n1_psi) / total
    p0 = (row.n0_psi + row.n0_perp) / total
    p1 = (row.n1_psi + row.n1_perp) / total
    g = p0 * abs(psi.a0) ** 2 + p1 * abs(psi.a1) ** 2
    return f, g


def reduce_table(table: CountsTable) -> ReducedPoint:
    """Per-state reduction against the canonical six states, then the mean."""
    f_per_state = []
    g_per_state = []
    for row, psi in zip(table.rows, mub_six()):
        f, g = reduce_row(row, psi)
        f_per_state.append(f)
        g_per_state.append(g)
    return ReducedPoint(
        g_avg=sum(g_per_state) / 6.0,
        f_avg=sum(f_per_state) / 6.0,
        g_per_state=tuple(g_per_state),
        f_per_state=tuple(f_per_state),
        phi_deg=table.phi_deg,
    )


def aggregate_runs(points: list[ReducedPoint]) -> ReducedPoint:
    """Mean over repeated runs at one setting; spread goes to g_std/f_std.

    The standard deviations are sample standard deviations over the runs
    (zero for a single run), matching the repeat-the-measurement procedure.
    """
    if not points:
        raise ValueError("need at least one reduced point")
    phis = {p.phi_deg for p in points}
    if len(phis) != 1:
        raise ValueError(f"points mix phi settings: {sorted(phis)}")
    if len(points) == 1:
        return replace(points[0], n_runs=1, g_std=0.0, f_std=0.0)
    n = len(points)
    g_values = [p.g_avg for p in points]
    f_values = [p.f_avg for p in points]
    return ReducedPoint(
        g_avg=sum(g_values) / n,
        f_avg=sum(f_values) / n,
        g_per_state=tuple(
            sum(p.g_per_state[i] for p in points) / n for i in range(6)
        ),
        f_per_state=tuple(
            sum(p.f_per_state[i] for p in points) / n for i in range(6)
        ),
        phi_deg=points[0].phi_deg,
        n_runs=n,
        g_std=statistics.stdev(g_values),
        f_std=statistics.stdev(f_values),
    )


def point_to_dict(point: ReducedPoint) -> dict:
    """JSON-ready document for one reduced point."""
    return {
        "phi_deg": point.phi_deg,
        "g_avg": point.g_avg,
        "f_avg": point.f_avg,
        "g_std": point.g_std,
        "f_std": point.f_std,
        "per_state": {
            label: {"g": point.g_per_state[i], "f": point.f_per_state[i]}
            for i, label in enumerate(STATE_LABELS)
        },
    }


def write_points_json(points: list[ReducedPoint], path, extra: list[dict] | None = None) -> None:
    """Write reduced points as a JSON array; ``extra`` merges per-point fields."""
    docs = []
    for i, point in enumerate(points):
        doc = point_to_dict(point)
        if extra is not None:
            doc.update(extra[i])
        docs.append(doc)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(docs, handle, indent=2)
        handle.write("\n")


def write_points_csv(points: list[ReducedPoint], path) -> None:
    """Flat curve-plotting CSV: phi_deg,g_avg,f_avg,g_std,f_std."""
    lines = [REDUCED_CSV_HEADER]
    for p in points:
        lines.append(f"{p.phi_deg!r},{p.g_avg!r},{p.f_avg!r},{p.g_std!r},{p.f_std!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def load_reference_counts() -> CountsTable:
    """Bundled efficiency-corrected reference data set, recorded at the
    random-guess setting (phi = 22.5 deg)."""
    text = (
        importlib.resources.files("mdmsim.data")
        .joinpath("reference_counts.csv")
        .read_text(encoding="utf-8")
    )
    return parse_csv_text(text, source="reference_counts.csv")
