"""Omega-stability and structural-stability verdicts from the precedence relation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .model import DiffeoSpec, require_valid

NO_SINK_SOURCE_REASON = (
    "non-wandering set is made of one-dimensional attractors and repellers with no "
    "periodic sinks or sources; a structurally stable surface diffeomorphism with a "
    "one-dimensional attractor (repeller) must have a source (sink)"
)


@dataclass(frozen=True)
class PrecGraph:
    """Directed graph of the relation W^s(a) meets W^u(b), written a -> b."""

    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str]]) -> PrecGraph:
        edges = frozenset(edges)
        verts = set(vertices) | {v for e in edges for v in e}
        return cls(tuple(sorted(verts)), edges)

    def successors(self) -> dict[str, list[str]]:
        succ: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a, b in sorted(self.edges):
            succ[a].append(b)
        return succ


def build_prec_graph(spec: DiffeoSpec) -> PrecGraph:
    require_valid(spec)
    owner = spec.bunch_owner()
    edges = {
        (owner[c.attractor_bunch].id, owner[c.repeller_bunch].id)
        for c in spec.complement_components
    }
    return PrecGraph.from_edges((bs.id for bs in spec.basic_sets), edges)


def detect_cycles(g: PrecGraph) -> bool:
    """True iff the digraph has a directed cycle (self-loops included)."""
    succ = g.successors()
    WHITE, GREY, BLACK = 0, 1, 2
    colour = dict.fromkeys(g.vertices, WHITE)
    for root in g.vertices:
        if colour[root] != WHITE:
            continue
        colour[root] = GREY
        stack = [(root, iter(succ[root]))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if colour[w] == GREY:
                    return True
                if colour[w] == WHITE:
                    colour[w] = GREY
                    stack.append((w, iter(succ[w])))
                    break
            else:
                colour[v] = BLACK
                stack.pop()
    return False


@dataclass(frozen=True)
class StabilityVerdict:
    omega_stable: bool
    structurally_stable: bool
    has_cycles: bool
    reason: str

    def to_dict(self) -> dict:
        return {
            "omega_stable": self.omega_stable,
            "structurally_stable": self.structurally_stable,
            "has_cycles": self.has_cycles,
            "reason": self.reason,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def stability_verdict(spec: DiffeoSpec) -> StabilityVerdict:
    cycles = detect_cycles(build_prec_graph(spec))
    if cycles:
        reason = "precedence relation has a cycle; " + NO_SINK_SOURCE_REASON
    else:
        reason = "axiom A holds and the precedence relation has no cycles; " + NO_SINK_SOURCE_REASON
    return StabilityVerdict(
        omega_stable=not cycles,
        structurally_stable=False,
        has_cycles=cycles,
        reason=reason,
    )


def prec_graph_dot(g: PrecGraph) -> str:
    lines = ["digraph prec {"]
    lines += [f'  "{v}";' for v in g.vertices]
    lines += [f'  "{a}" -> "{b}";' for a, b in sorted(g.edges)]
    lines.append("}")
    return "\n".join(lines) + "\n"
