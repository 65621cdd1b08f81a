"""
Genus bookkeeping for the ambient surface.

Each basic set carries a trapping sub-surface whose genus and Euler
characteristic follow from its bunch data; the complement components form a
multigraph on the basic sets whose bridges split the surface during surgery
and whose cycle edges each contribute one torus summand.  All arithmetic is
exact (ints and ``Fraction``).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .model import BasicSet, DiffeoSpec, Kind, require_valid


class DomainError(ValueError):
    pass


class IntegralityError(ValueError):
    """A genus or Euler characteristic formula did not produce a valid integer."""

    def __init__(self, message: str, value: Fraction | None = None):
        super().__init__(message)
        self.value = value


class DisconnectedGraphError(ValueError):
    pass


def _positive_int(n, name: str) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"{name} must be a positive integer, got {n!r}")
    return n


def saddle_index(separatrix_count: int) -> Fraction:
    """Index of a saddle singularity with the given number of separatrices."""
    k = _positive_int(separatrix_count, "separatrix_count")
    return 1 - Fraction(k, 2)


def euler_char_closed_from_bunches(m: int, h: int) -> int:
    """Euler characteristic m - h/2 of the closed surface obtained by capping a trapping sub-surface."""
    _positive_int(m, "m")
    _positive_int(h, "h")
    if (h - 2 * m) % 4:
        raise IntegralityError(
            f"h - 2m = {h - 2 * m} is not divisible by 4", Fraction(2 * m - h, 2)
        )
    return m - h // 2


def euler_char_with_boundary(chi_closed: int, boundary_curves: int) -> int:
    if isinstance(boundary_curves, bool) or not isinstance(boundary_curves, int) or boundary_curves < 0:
        raise DomainError(f"boundary_curves must be a non-negative integer, got {boundary_curves!r}")
    return chi_closed - boundary_curves


@dataclass(frozen=True)
class SubsurfaceProfile:
    genus: int
    boundary_count: int

    @property
    def euler_characteristic(self) -> int:
        """Euler characteristic of the bordered sub-surface."""
        return euler_char_with_boundary(2 - 2 * self.genus, self.boundary_count)


def poincare_hopf_sum(bs: BasicSet) -> Fraction:
    """Sum of saddle indices over the capped bunches of ``bs``."""
    return sum((saddle_index(b.degree) for b in bs.bunches), Fraction(0))


def basic_set_genus(bs: BasicSet) -> SubsurfaceProfile:
    g = bs.genus_value()
    if g.denominator != 1 or g < 0:
        raise IntegralityError(f"basic set {bs.id}: genus 1 + h/4 - m/2 = {g}", g)
    genus = int(g)
    chi = euler_char_closed_from_bunches(bs.bunch_count, bs.degree_sum)
    # index sum and closed-form chi must agree with chi = 2 - 2g
    if poincare_hopf_sum(bs) != chi or chi != 2 - 2 * genus:
        raise IntegralityError(f"basic set {bs.id}: Euler characteristic mismatch", g)
    return SubsurfaceProfile(genus=genus, boundary_count=bs.bunch_count)


# ---------------------------------------------------------------------------
# pairing graph
# ---------------------------------------------------------------------------


class _UnionFind:
    def __init__(self, items: Iterable[str]):
        self.parent = {i: i for i in items}

    def find(self, x: str) -> str:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


@dataclass(frozen=True)
class PairingEdge:
    component: str
    attractor: str
    repeller: str


@dataclass(frozen=True)
class PairingGraph:
    vertices: tuple[str, ...]
    kinds: tuple[tuple[str, Kind], ...]
    edges: tuple[PairingEdge, ...]

    def kind_of(self, vertex: str) -> Kind:
        return dict(self.kinds)[vertex]

    def component_count(self, edges: Iterable[PairingEdge] | None = None) -> int:
        uf = _UnionFind(self.vertices)
        for e in self.edges if edges is None else edges:
            uf.union(e.attractor, e.repeller)
        return len({uf.find(v) for v in self.vertices})

    def is_connected(self) -> bool:
        return self.component_count() == 1


def build_pairing_graph(spec: DiffeoSpec) -> PairingGraph:
    owner = spec.bunch_owner()
    vertices = tuple(sorted(bs.id for bs in spec.basic_sets))
    kinds = tuple(sorted((bs.id, bs.kind) for bs in spec.basic_sets))
    edges = tuple(
        PairingEdge(c.id, owner[c.attractor_bunch].id, owner[c.repeller_bunch].id)
        for c in sorted(spec.complement_components, key=lambda c: c.id)
    )
    return PairingGraph(vertices, kinds, edges)


def cycle_rank(g: PairingGraph) -> int:
    if not g.is_connected():
        raise DisconnectedGraphError("cycle rank requested for a disconnected pairing graph")
    return len(g.edges) - len(g.vertices) + 1


class StepKind(str, enum.Enum):
    SPLIT = "split"
    TORUS_SUMMAND = "torus_summand"


@dataclass(frozen=True)
class SurgeryStep:
    component_id: str
    classification: StepKind

    def to_dict(self) -> dict:
        return {"component": self.component_id, "step": self.classification.value}


def surgery_trace(spec: DiffeoSpec, order: Sequence[str] | None = None) -> list[SurgeryStep]:
    """Cut the complement components one at a time and classify each cut.

    A cut is a torus summand when the edge still lies on a cycle of the
    not-yet-cut graph, and a split when it is a bridge there.  Connectivity is
    recomputed from scratch for every step.
    """
    require_valid(spec)
    graph = build_pairing_graph(spec)
    by_id = {e.component: e for e in graph.edges}
    if order is None:
        order = sorted(by_id)
    else:
        order = list(order)
        if sorted(order) != sorted(by_id):
            raise ValueError("order must be a permutation of the complement component ids")

    remaining = dict(by_id)
    steps = []
    for cid in order:
        edge = remaining.pop(cid)
        uf = _UnionFind(graph.vertices)
        for e in remaining.values():
            uf.union(e.attractor, e.repeller)
        joined = uf.find(edge.attractor) == uf.find(edge.repeller)
        steps.append(SurgeryStep(cid, StepKind.TORUS_SUMMAND if joined else StepKind.SPLIT))
    return steps


@dataclass(frozen=True)
class Decomposition:
    summand_genera: tuple[tuple[str, int], ...]
    torus_count: int
    trace: tuple[SurgeryStep, ...]

    @property
    def genera(self) -> list[int]:
        return [g for _, g in self.summand_genera]

    @property
    def total_genus(self) -> int:
        return sum(self.genera) + self.torus_count

    def to_dict(self, include_trace: bool = True) -> dict:
        out = {
            "summands": [{"basic_set": s, "genus": g} for s, g in self.summand_genera],
            "torus_count": self.torus_count,
            "total_genus": self.total_genus,
        }
        if include_trace:
            out["trace"] = [s.to_dict() for s in self.trace]
        return out

    def to_json(self, include_trace: bool = True) -> str:
        return json.dumps(self.to_dict(include_trace), indent=2) + "\n"


def decompose(spec: DiffeoSpec) -> Decomposition:
    require_valid(spec)
    genera = tuple(
        (bs.id, basic_set_genus(bs).genus) for bs in sorted(spec.basic_sets, key=lambda s: s.id)
    )
    tori = cycle_rank(build_pairing_graph(spec))
    trace = tuple(surgery_trace(spec))
    dec = Decomposition(genera, tori, trace)

    splits = sum(s.classification is StepKind.SPLIT for s in trace)
    assert splits == spec.k_f - 1 and len(trace) - splits == tori
    assert tori == spec.m_f // 2 - spec.k_f + 1
    assert dec.total_genus == 1 + Fraction(spec.h_f, 4)
    return dec


def total_genus(spec: DiffeoSpec) -> int:
    """Genus 1 + h_f/4 of the ambient surface."""
    require_valid(spec)
    g = 1 + Fraction(spec.h_f, 4)
    if g.denominator != 1:
        raise IntegralityError(f"total genus {g} is not an integer", g)
    return int(g)


def pairing_graph_dot(spec: DiffeoSpec) -> str:
    """Graphviz source for the pairing graph; vertices labelled id:kind:genus."""
    graph = build_pairing_graph(spec)
    lines = ["graph pairing {"]
    for bs in sorted(spec.basic_sets, key=lambda s: s.id):
        try:
            genus = str(basic_set_genus(bs).genus)
        except IntegralityError as exc:
            genus = str(exc.value)
        lines.append(f'  "{bs.id}" [label="{bs.id}:{bs.kind.value}:{genus}"];')
    for e in graph.edges:
        lines.append(f'  "{e.attractor}" -- "{e.repeller}" [label="{e.component}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
