"""
MAPFlow Topology
Builds the flow structure of the eleven catalog architectures
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, NamedTuple

import networkx as nx
import numpy as np

from .errors import ValidationError

logger = logging.getLogger(__name__)

TOLERANCE = 1e-12
SOURCE_NODE = "S"


class ArchitectureKind(str, Enum):
    """Canonical architecture codes"""
    P = "P"
    PDO = "PDO"
    PDC = "PDC"
    PNO = "PNO"
    PNC = "PNC"
    SDO = "SDO"
    SDC = "SDC"
    SNO = "SNO"
    SNC = "SNC"
    PA = "PA"
    SA = "SA"

    @property
    def sequential(self) -> bool:
        """True when the source feeds agent 1 only"""
        return self.value.startswith("S")


@dataclass(frozen=True)
class ArchitectureInfo:
    """Catalog entry describing one design"""
    code: str
    source_mode: str   # "parallel", "sequential"
    links: str         # "none", "directed", "non-directed", "complete"
    chain: str         # "open", "closed", "-"
    description: str


CATALOG: Dict[ArchitectureKind, ArchitectureInfo] = {
    ArchitectureKind.P: ArchitectureInfo(
        "P", "parallel", "none", "-", "source feeds every agent, no agent links"),
    ArchitectureKind.PDO: ArchitectureInfo(
        "PDO", "parallel", "directed", "open", "parallel supply, directed open chain"),
    ArchitectureKind.PDC: ArchitectureInfo(
        "PDC", "parallel", "directed", "closed", "parallel supply, directed cycle"),
    ArchitectureKind.PNO: ArchitectureInfo(
        "PNO", "parallel", "non-directed", "open", "parallel supply, undirected open chain"),
    ArchitectureKind.PNC: ArchitectureInfo(
        "PNC", "parallel", "non-directed", "closed", "parallel supply, undirected cycle"),
    ArchitectureKind.SDO: ArchitectureInfo(
        "SDO", "sequential", "directed", "open", "source feeds agent 1, directed open chain"),
    ArchitectureKind.SDC: ArchitectureInfo(
        "SDC", "sequential", "directed", "closed", "source feeds agent 1, directed cycle"),
    ArchitectureKind.SNO: ArchitectureInfo(
        "SNO", "sequential", "non-directed", "open", "source feeds agent 1, undirected open chain"),
    ArchitectureKind.SNC: ArchitectureInfo(
        "SNC", "sequential", "non-directed", "closed", "source feeds agent 1, undirected cycle"),
    ArchitectureKind.PA: ArchitectureInfo(
        "PA", "parallel", "complete", "-", "parallel supply, all agents interconnected"),
    ArchitectureKind.SA: ArchitectureInfo(
        "SA", "sequential", "complete", "-", "source feeds agent 1, all agents interconnected"),
}


def catalog() -> List[ArchitectureInfo]:
    """The eleven designs in canonical order"""
    return [CATALOG[kind] for kind in ArchitectureKind]


def parse_kind(code: str) -> ArchitectureKind:
    """Look up an architecture by its code (case-insensitive)"""
    try:
        return ArchitectureKind(str(code).strip().upper())
    except ValueError:
        known = ", ".join(kind.value for kind in ArchitectureKind)
        raise ValidationError(f"unknown architecture '{code}', expected one of {known}",
                              flag="--arch") from None


@dataclass(frozen=True)
class ArchitectureSpec:
    """Symbolic identity of a catalog design plus its agent count"""
    kind: ArchitectureKind
    n_agents: int = 5

    def __post_init__(self):
        if not isinstance(self.kind, ArchitectureKind):
            object.__setattr__(self, 'kind', parse_kind(self.kind))
        if int(self.n_agents) != self.n_agents or self.n_agents < 2:
            raise ValidationError(f"n_agents must be an integer >= 2, got {self.n_agents}",
                                  flag="--agents")
        object.__setattr__(self, 'n_agents', int(self.n_agents))

    @property
    def code(self) -> str:
        return self.kind.value


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FlowSystem:
    """The concrete linear system of one architecture"""
    spec: ArchitectureSpec
    forward_matrix: np.ndarray  # (i, j): fraction of x_j delivered to agent i
    source_vector: np.ndarray
    waste_mask: np.ndarray
    s: float
    f: float
    e: float
    b: float
    w: float = 1.0
    update_matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'forward_matrix', _frozen(np.asarray(self.forward_matrix, dtype=float)))
        object.__setattr__(self, 'source_vector', _frozen(np.asarray(self.source_vector, dtype=float)))
        object.__setattr__(self, 'waste_mask', _frozen(np.asarray(self.waste_mask, dtype=bool)))
        n = self.forward_matrix.shape[0]
        object.__setattr__(self, 'update_matrix', _frozen(self.s * np.eye(n) + self.forward_matrix))

    @property
    def n_agents(self) -> int:
        return self.spec.n_agents

    @property
    def code(self) -> str:
        return self.spec.code

    def with_source_rate(self, b: float) -> 'FlowSystem':
        """Same topology with the source rate rescaled to b"""
        scale = b / self.b
        return replace(self, source_vector=self.source_vector * scale, b=b)


def _agent_graph(kind: ArchitectureKind, n: int) -> nx.DiGraph:
    """Directed agent-to-agent links, nodes 0..n-1"""
    links = CATALOG[kind].links
    chain = CATALOG[kind].chain
    if links == "none":
        return nx.empty_graph(n, create_using=nx.DiGraph)
    if links == "complete":
        return nx.complete_graph(n).to_directed()
    if links == "directed":
        builder = nx.path_graph if chain == "open" else nx.cycle_graph
        return builder(n, create_using=nx.DiGraph)
    builder = nx.path_graph if chain == "open" else nx.cycle_graph
    return builder(n).to_directed()


def build_architecture(spec: ArchitectureSpec, s: float, f: float,
                       b: float = 1.0, w: float = 1.0) -> FlowSystem:
    """Build the FlowSystem of a catalog design"""
    for name, value in (('s', s), ('f', f), ('w', w)):
        if not 0.0 <= value <= 1.0:
            raise ValidationError(f"{name} must lie in [0, 1], got {value}", flag=f"--{name}")
    if s + f > 1.0 + TOLERANCE:
        raise ValidationError(f"fractions exceed unity: s + f = {s + f:g}", flag="--f")
    if not b > 0:
        raise ValidationError(f"source rate b must be positive, got {b}", flag="--b")

    n = spec.n_agents
    graph = _agent_graph(spec.kind, n)
    for j in graph.nodes:
        successors = list(graph.successors(j))
        for i in successors:
            graph[j][i]['weight'] = f / len(successors)

    adjacency = nx.to_numpy_array(graph, nodelist=range(n), weight='weight')
    forward = adjacency.T
    waste = np.array([graph.out_degree(j) == 0 for j in range(n)])

    if spec.kind.sequential:
        source = np.zeros(n)
        source[0] = b
    else:
        source = np.full(n, b / n)

    logger.debug("built %s with N=%d, s=%g, f=%g, b=%g", spec.code, n, s, f, b)
    return FlowSystem(spec=spec, forward_matrix=forward, source_vector=source,
                      waste_mask=waste, s=s, f=f, e=1.0 - s - f, b=b, w=w)


def validate(system: FlowSystem) -> List[str]:
    """Describe every broken FlowSystem invariant; empty when valid"""
    violations: List[str] = []
    s, f, e = system.s, system.f, system.e
    n = system.n_agents

    if s + f > 1.0 + TOLERANCE:
        violations.append("fractions exceed unity")
    else:
        for name, value in (('s', s), ('f', f), ('e', e)):
            if not -TOLERANCE <= value <= 1.0 + TOLERANCE:
                violations.append(f"fraction {name} = {value:g} outside [0, 1]")
        if abs(s + f + e - 1.0) > TOLERANCE:
            violations.append(f"s + f + e sums to {s + f + e:g}, expected 1")
    if not 0.0 <= system.w <= 1.0:
        violations.append(f"work efficiency w = {system.w:g} outside [0, 1]")

    matrix = system.forward_matrix
    if matrix.shape != (n, n) or system.source_vector.shape != (n,) or system.waste_mask.shape != (n,):
        violations.append(f"array shapes do not match n_agents = {n}")
        return violations

    for j, column_sum in enumerate(matrix.sum(axis=0)):
        expected = 0.0 if system.waste_mask[j] else f
        if abs(column_sum - expected) > TOLERANCE:
            violations.append(f"column {j + 1} sums to {column_sum:g}, expected {expected:g}")

    outside = (matrix < -TOLERANCE) | (matrix > f + TOLERANCE)
    for i, j in zip(*np.nonzero(outside)):
        violations.append(f"entry ({i + 1}, {j + 1}) = {matrix[i, j]:g} outside [0, {f:g}]")

    if np.any(system.source_vector < 0):
        violations.append("source vector has negative entries")
    total = float(system.source_vector.sum())
    if abs(total - system.b) > TOLERANCE:
        violations.append(f"source vector sums to {total:g}, expected {system.b:g}")
    return violations


def link_graph(system: FlowSystem) -> nx.DiGraph:
    """Source and agent links as a weighted graph (agents numbered from 1)"""
    graph = nx.DiGraph()
    graph.add_node(SOURCE_NODE)
    graph.add_nodes_from(range(1, system.n_agents + 1))
    for i, rate in enumerate(system.source_vector):
        if rate > 0:
            graph.add_edge(SOURCE_NODE, i + 1, weight=float(rate))
    for i, j in zip(*np.nonzero(system.forward_matrix)):
        graph.add_edge(int(j) + 1, int(i) + 1, weight=float(system.forward_matrix[i, j]))
    return graph


class LinkCensus(NamedTuple):
    source_links: int
    agent_links: int


def link_census(system: FlowSystem) -> LinkCensus:
    """Count source links and directed agent links"""
    graph = link_graph(system)
    source_links = graph.out_degree(SOURCE_NODE)
    return LinkCensus(source_links, graph.number_of_edges() - source_links)
