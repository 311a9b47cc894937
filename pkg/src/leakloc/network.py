"""Core data types for a water distribution network.

Conventions shared by every module in the package:

* Units: demands and flows in m3/h at API boundaries, heads/pressures in
  meters of water column, pipe lengths in m, diameters in mm.
* Node order: junctions first, then reservoirs, each in order of appearance.
  The position of a node in that order is its dense index; matrices are
  indexed by it.
* All types are immutable after construction and safe to share across
  threads.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ModelError

__all__ = [
    "Junction",
    "Reservoir",
    "Pipe",
    "HydraulicModel",
    "DemandMatrix",
    "PressureMatrix",
    "restrict",
    "add_leak",
]


@dataclass(frozen=True)
class Junction:
    """Demand node. ``base_demand`` in m3/h, ``elevation`` in m."""

    name: str
    elevation: float
    base_demand: float = 0.0
    pattern: Optional[str] = None

    def __post_init__(self):
        if not math.isfinite(self.elevation):
            raise ModelError(f"junction {self.name!r}: elevation must be finite")
        if not (self.base_demand >= 0.0):
            raise ModelError(f"junction {self.name!r}: base demand must be >= 0")


@dataclass(frozen=True)
class Reservoir:
    """Fixed-head boundary node. ``head`` in m; optional multiplier pattern."""

    name: str
    head: float
    pattern: Optional[str] = None

    def __post_init__(self):
        if not math.isfinite(self.head):
            raise ModelError(f"reservoir {self.name!r}: head must be finite")


@dataclass(frozen=True)
class Pipe:
    """Pipe link. ``length`` in m, ``diameter`` in mm, ``roughness`` is Hazen-Williams C."""

    name: str
    start: str
    end: str
    length: float
    diameter: float
    roughness: float
    status: str = "open"

    def __post_init__(self):
        if self.start == self.end:
            raise ModelError(f"pipe {self.name!r}: start and end node are both {self.start!r}")
        if not (self.length > 0.0):
            raise ModelError(f"pipe {self.name!r}: length must be > 0")
        if not (self.diameter > 0.0):
            raise ModelError(f"pipe {self.name!r}: diameter must be > 0")
        if not (self.roughness > 0.0):
            raise ModelError(f"pipe {self.name!r}: roughness must be > 0")
        if self.status not in ("open", "closed"):
            raise ModelError(f"pipe {self.name!r}: status must be 'open' or 'closed'")

    @property
    def is_open(self) -> bool:
        return self.status == "open"


@dataclass(frozen=True)
class HydraulicModel:
    """A loaded network: nodes, pipes, demand patterns and the time grid.

    ``n_steps`` and ``step_seconds`` define the simulation horizon: demand
    column t covers [t * step_seconds, (t+1) * step_seconds).
    """

    junctions: tuple[Junction, ...] = ()
    reservoirs: tuple[Reservoir, ...] = ()
    pipes: tuple[Pipe, ...] = ()
    patterns: dict[str, tuple[float, ...]] = field(default_factory=dict)
    n_steps: int = 24
    step_seconds: int = 3600
    coordinates: dict[str, tuple[float, float]] = field(default_factory=dict)
    title: str = ""

    def __post_init__(self):
        if self.n_steps < 1:
            raise ModelError("n_steps must be >= 1")
        if self.step_seconds < 1:
            raise ModelError("step_seconds must be >= 1")
        labels = [j.name for j in self.junctions] + [r.name for r in self.reservoirs]
        index: dict[str, int] = {}
        for i, name in enumerate(labels):
            if name in index:
                raise ModelError(f"duplicate node id {name!r}")
            index[name] = i
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_labels", tuple(labels))
        seen_pipes: set[str] = set()
        for p in self.pipes:
            if p.name in seen_pipes:
                raise ModelError(f"duplicate pipe id {p.name!r}")
            seen_pipes.add(p.name)
            for endpoint in (p.start, p.end):
                if endpoint not in index:
                    raise ModelError(f"pipe {p.name!r} references unknown node {endpoint!r}")
        for junction in self.junctions:
            if junction.pattern is not None and junction.pattern not in self.patterns:
                raise ModelError(
                    f"junction {junction.name!r} references unknown pattern {junction.pattern!r}"
                )
        for reservoir in self.reservoirs:
            if reservoir.pattern is not None and reservoir.pattern not in self.patterns:
                raise ModelError(
                    f"reservoir {reservoir.name!r} references unknown pattern {reservoir.pattern!r}"
                )
        for name, values in self.patterns.items():
            if len(values) == 0:
                raise ModelError(f"pattern {name!r} is empty")

    # -- node indexing ------------------------------------------------------

    @property
    def n_junctions(self) -> int:
        return len(self.junctions)

    @property
    def n_reservoirs(self) -> int:
        return len(self.reservoirs)

    @property
    def n_nodes(self) -> int:
        return len(self.junctions) + len(self.reservoirs)

    @property
    def node_labels(self) -> tuple[str, ...]:
        return self._labels  # type: ignore[attr-defined]

    @property
    def junction_labels(self) -> tuple[str, ...]:
        return self._labels[: self.n_junctions]  # type: ignore[attr-defined]

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]  # type: ignore[attr-defined]
        except KeyError:
            raise ModelError(f"unknown node id {label!r}") from None

    def label_of(self, index: int) -> str:
        labels = self._labels  # type: ignore[attr-defined]
        if not 0 <= index < len(labels):
            raise ModelError(f"node index {index} out of range 0..{len(labels) - 1}")
        return labels[index]

    def is_junction(self, label: str) -> bool:
        return self.index_of(label) < self.n_junctions

    def open_pipes(self) -> tuple[Pipe, ...]:
        return tuple(p for p in self.pipes if p.is_open)

    # -- validation ---------------------------------------------------------

    def validate(self) -> "HydraulicModel":
        """Check solvability: a reservoir exists and feeds every junction.

        Reachability is evaluated on the open-pipe graph. Raises ModelError
        naming the first unreachable junction.
        """
        if self.n_junctions and not self.reservoirs:
            raise ModelError("model has junctions but no reservoir to feed them")
        reached = set(range(self.n_junctions, self.n_nodes))
        adjacency: dict[int, list[int]] = {}
        for p in self.open_pipes():
            a, b = self.index_of(p.start), self.index_of(p.end)
            adjacency.setdefault(a, []).append(b)
            adjacency.setdefault(b, []).append(a)
        queue = deque(reached)
        while queue:
            u = queue.popleft()
            for v in adjacency.get(u, ()):
                if v not in reached:
                    reached.add(v)
                    queue.append(v)
        for i in range(self.n_junctions):
            if i not in reached:
                raise ModelError(
                    f"junction {self.label_of(i)!r} is not connected to any reservoir"
                )
        return self

    # -- derived matrices ---------------------------------------------------

    def _expand_pattern(self, base: float, pattern: Optional[str]) -> np.ndarray:
        out = np.full(self.n_steps, base, dtype=float)
        if pattern is not None:
            mult = np.asarray(self.patterns[pattern], dtype=float)
            out *= mult[np.arange(self.n_steps) % len(mult)]
        return out

    def demand_matrix(self) -> "DemandMatrix":
        """Base demands expanded over time: M x T in m3/h, reservoir rows zero."""
        values = np.zeros((self.n_nodes, self.n_steps))
        for i, j in enumerate(self.junctions):
            values[i] = self._expand_pattern(j.base_demand, j.pattern)
        return DemandMatrix(self.node_labels, values, self.n_junctions)

    def reservoir_heads(self) -> np.ndarray:
        """Fixed heads expanded over time: R x T in m."""
        values = np.zeros((self.n_reservoirs, self.n_steps))
        for i, r in enumerate(self.reservoirs):
            values[i] = self._expand_pattern(r.head, r.pattern)
        return values


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 2:
        raise ModelError(f"expected a 2-D matrix, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DemandMatrix:
    """Per-node, per-step water demand in m3/h.

    Rows follow the model's dense node order; the first ``n_junctions``
    rows are junctions and the remaining rows (reservoirs) must be zero.
    """

    nodes: tuple[str, ...]
    values: np.ndarray
    n_junctions: int

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        arr = _frozen_array(self.values)
        object.__setattr__(self, "values", arr)
        if arr.shape[0] != len(self.nodes):
            raise ModelError(
                f"demand matrix has {arr.shape[0]} rows for {len(self.nodes)} nodes"
            )
        if not np.isfinite(arr).all():
            raise ModelError("demand matrix contains non-finite entries")
        if not 0 <= self.n_junctions <= len(self.nodes):
            raise ModelError("n_junctions out of range")
        if arr[self.n_junctions :].any():
            raise ModelError("reservoir rows of a demand matrix must be zero")

    @property
    def n_steps(self) -> int:
        return self.values.shape[1]

    def row_index(self, node: str) -> int:
        try:
            return self.nodes.index(node)
        except ValueError:
            raise ModelError(f"unknown node id {node!r}") from None


@dataclass(frozen=True, eq=False)
class PressureMatrix:
    """Pressure head in m for an explicit node set over time.

    The row set may be all model nodes or any sensor subset; two matrices
    are comparable only when their row sets and step counts match.
    """

    nodes: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        arr = _frozen_array(self.values)
        object.__setattr__(self, "values", arr)
        if arr.shape[0] != len(self.nodes):
            raise ModelError(
                f"pressure matrix has {arr.shape[0]} rows for {len(self.nodes)} nodes"
            )
        if len(set(self.nodes)) != len(self.nodes):
            raise ModelError("pressure matrix row labels must be unique")

    @property
    def n_steps(self) -> int:
        return self.values.shape[1]

    def row(self, node: str) -> np.ndarray:
        try:
            i = self.nodes.index(node)
        except ValueError:
            raise ModelError(f"unknown node id {node!r}") from None
        return self.values[i]

    def same_layout(self, other: "PressureMatrix") -> bool:
        return self.nodes == other.nodes and self.values.shape == other.values.shape


def restrict(pressures: PressureMatrix, sensors: Iterable[str]) -> PressureMatrix:
    """Project a pressure matrix onto a sensor subset.

    Output rows keep the input matrix's row order (canonical dense order
    for solver output), regardless of the order ``sensors`` is given in.
    """
    wanted = set(sensors)
    unknown = wanted - set(pressures.nodes)
    if unknown:
        raise ModelError(f"unknown sensor id {sorted(unknown)[0]!r}")
    keep = [i for i, n in enumerate(pressures.nodes) if n in wanted]
    return PressureMatrix(
        tuple(pressures.nodes[i] for i in keep), pressures.values[keep].copy()
    )


def add_leak(demands: DemandMatrix, node: str, leak_flow: float) -> DemandMatrix:
    """Return a copy of ``demands`` with ``leak_flow`` m3/h added to every
    step of ``node``'s row. The leak node must be a junction."""
    if not (leak_flow >= 0.0):
        raise ModelError(f"leak flow must be >= 0, got {leak_flow}")
    i = demands.row_index(node)
    if i >= demands.n_junctions:
        raise ModelError(f"cannot place a leak on reservoir {node!r}: its head is fixed")
    values = demands.values.copy()
    values[i] += leak_flow
    return DemandMatrix(demands.nodes, values, demands.n_junctions)
