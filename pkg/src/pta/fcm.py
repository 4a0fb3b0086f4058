"""Fuzzy cognitive map engine: one-step update and fixed-point iteration.

The update rule keeps the additive self term, so one step is
``f(state @ weights + state)`` applied elementwise. Squashing is pluggable:
a sigmoid for real-valued maps, bivalent/trivalent thresholds for classical
binary maps. Limit cycles are reported (converged=False), never raised.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, SchemaError

SQUASH_KINDS = ("sigmoid", "bivalent", "trivalent")


@dataclass(frozen=True)
class SquashSpec:
    """Squashing function selector.

    lam is the sigmoid steepness; threshold is the firing level for the
    bivalent/trivalent step functions.
    """

    kind: str = "sigmoid"
    lam: float = 1.0
    threshold: float = 0.5

    def __post_init__(self):
        if self.kind not in SQUASH_KINDS:
            raise SchemaError(f"unknown squash kind {self.kind!r}")
        if self.kind == "sigmoid" and not self.lam > 0:
            raise SchemaError("sigmoid lambda must be > 0")

    def fn(self) -> Callable[[np.ndarray], np.ndarray]:
        if self.kind == "sigmoid":
            lam = self.lam
            return lambda x: 1.0 / (1.0 + np.exp(-lam * x))
        if self.kind == "bivalent":
            thr = self.threshold
            return lambda x: (x >= thr).astype(float)
        thr = self.threshold
        return lambda x: np.where(x >= thr, 1.0, np.where(x <= -thr, -1.0, 0.0))


@dataclass
class FcmModel:
    """Concepts plus a square causal-weight matrix.

    weights[i][j] is the causal strength of concept i on concept j, in
    [-1, 1]. The diagonal must be zero: self influence comes from the
    update rule's own self term, not the matrix.
    """

    concepts: list[str]
    weights: np.ndarray
    squash: SquashSpec = field(default_factory=SquashSpec)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        n = len(self.concepts)
        if self.weights.shape != (n, n):
            raise DimensionMismatch(
                f"weight matrix {self.weights.shape} does not match {n} concepts"
            )
        if len(set(self.concepts)) != n:
            raise SchemaError("duplicate concept ids")
        if np.any(np.abs(self.weights) > 1.0):
            raise SchemaError("causal weights must lie in [-1, 1]")
        if np.any(np.diagonal(self.weights) != 0.0):
            raise SchemaError("diagonal must be zero (self term is implicit)")

    def __eq__(self, other):
        if not isinstance(other, FcmModel):
            return NotImplemented
        return (
            self.concepts == other.concepts
            and np.array_equal(self.weights, other.weights)
            and self.squash == other.squash
        )


@dataclass
class ConceptState:
    """One activation value per concept, in [-1, 1]."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise DimensionMismatch("state must be a flat vector")
        if np.any(np.abs(self.values) > 1.0):
            raise SchemaError("concept values must lie in [-1, 1]")

    def __eq__(self, other):
        if not isinstance(other, ConceptState):
            return NotImplemented
        return np.array_equal(self.values, other.values)


@dataclass
class FixedPointReport:
    concepts: list[str]
    final: ConceptState
    iterations: int
    converged: bool
    trajectory: list[np.ndarray]


def step_state(model: FcmModel, state: ConceptState) -> ConceptState:
    """One synchronous update: f(state @ W + state), elementwise."""
    v = state.values
    if v.shape[0] != len(model.concepts):
        raise DimensionMismatch(
            f"state has {v.shape[0]} values for {len(model.concepts)} concepts"
        )
    return ConceptState(model.squash.fn()(v @ model.weights + v))


def run_to_fixed_point(
    model: FcmModel,
    start: ConceptState,
    tol: float = 1e-6,
    max_iter: int = 1000,
) -> FixedPointReport:
    """Iterate step_state until the L-infinity change drops below tol.

    The trajectory includes the start state. A model stuck in a limit
    cycle simply comes back with converged=False after max_iter steps.
    """
    if not tol > 0:
        raise ValueError("tol must be > 0")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    current = start
    trajectory = [np.array(current.values)]
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        nxt = step_state(model, current)
        trajectory.append(np.array(nxt.values))
        if float(np.max(np.abs(nxt.values - current.values))) < tol:
            current = nxt
            converged = True
            break
        current = nxt
    return FixedPointReport(
        concepts=list(model.concepts),
        final=current,
        iterations=iterations,
        converged=converged,
        trajectory=trajectory,
    )


def render_report(
    reports: FixedPointReport | Sequence[tuple[str, FixedPointReport]],
    decimals: int = 7,
    fmt: str = "text",
) -> str:
    """Tabulate final concept values, one column per scenario.

    Accepts a single report or an ordered list of (label, report) pairs;
    columns keep the submitted order. An empty trajectory renders as a
    header-only table.
    """
    if isinstance(reports, FixedPointReport):
        columns = [("Scenario", reports)]
    else:
        columns = list(reports)
    if fmt not in ("text", "csv"):
        raise ValueError(f"unknown format {fmt!r}")

    concepts: list[str] = []
    for _, rep in columns:
        if rep.concepts:
            concepts = rep.concepts
            break
    rows: list[list[str]] = []
    if any(rep.trajectory for _, rep in columns):
        for i, concept in enumerate(concepts):
            cells = [concept]
            for _, rep in columns:
                if rep.trajectory:
                    cells.append(f"{rep.final.values[i]:.{decimals}f}")
                else:
                    cells.append("")
            rows.append(cells)

    header = ["Concepts"] + [label for label, _ in columns]
    if fmt == "csv":
        out = io.StringIO()
        out.write(",".join(_csv_quote(c) for c in header) + "\n")
        for row in rows:
            out.write(",".join(_csv_quote(c) for c in row) + "\n")
        return out.getvalue()

    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _csv_quote(cell: str) -> str:
    if any(ch in cell for ch in ',"\n'):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def parse_weight_table(text: str) -> FcmModel:
    """Parse the matrix exchange format: header row/column of concept ids,
    signed decimal entries, comma separated."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise SchemaError("empty weight table")
    header = [c.strip() for c in lines[0].split(",")]
    concepts = [c for c in header[1:] if c]
    rows = []
    for ln in lines[1:]:
        cells = [c.strip() for c in ln.split(",")]
        if cells[0] != concepts[len(rows)]:
            raise SchemaError(
                f"row label {cells[0]!r} does not match column order"
            )
        try:
            rows.append([float(c) for c in cells[1:]])
        except ValueError as exc:
            raise SchemaError(f"bad numeric cell in row {cells[0]!r}") from exc
    if len(rows) != len(concepts):
        raise SchemaError("row count does not match concept count")
    return FcmModel(concepts=concepts, weights=np.array(rows))


def render_weight_table(model: FcmModel) -> str:
    lines = ["," + ",".join(model.concepts)]
    for i, concept in enumerate(model.concepts):
        lines.append(concept + "," + ",".join(repr(float(w)) for w in model.weights[i]))
    return "\n".join(lines) + "\n"
