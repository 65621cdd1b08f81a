import itertools
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfdecomp.generators import (
    GeneratorConfig,
    example_f1,
    example_f2,
    example_pretzel,
    generate_for_genus,
    random_valid_spec,
)
from surfdecomp.model import BasicSet, Bunch, InvalidSpecError, Kind
from surfdecomp.topology import (
    DisconnectedGraphError,
    DomainError,
    IntegralityError,
    PairingGraph,
    StepKind,
    SubsurfaceProfile,
    basic_set_genus,
    build_pairing_graph,
    cycle_rank,
    decompose,
    euler_char_closed_from_bunches,
    euler_char_with_boundary,
    pairing_graph_dot,
    poincare_hopf_sum,
    saddle_index,
    surgery_trace,
    total_genus,
)

seeds = st.integers(0, 2**64 - 1)


def bs(*degrees, kind=Kind.ATTRACTOR):
    return BasicSet("X", kind, tuple(Bunch(f"X.b{i}", d) for i, d in enumerate(degrees)))


# --- local formulas ----------------------------------------------------------


@pytest.mark.parametrize("k, want", [(1, Fraction(1, 2)), (2, 0), (3, Fraction(-1, 2)), (4, -1), (6, -2)])
def test_saddle_index(k, want):
    assert saddle_index(k) == want


@pytest.mark.parametrize("bad", [0, -1, 1.5, "2", True])
def test_saddle_index_domain(bad):
    with pytest.raises(DomainError):
        saddle_index(bad)


@pytest.mark.parametrize("m, h, chi", [(1, 2, 0), (2, 4, 0), (1, 6, -2), (2, 8, -2), (3, 2, 2), (4, 4, 2)])
def test_closed_euler_characteristic(m, h, chi):
    assert euler_char_closed_from_bunches(m, h) == chi


@pytest.mark.parametrize("m, h", [(1, 1), (1, 3), (2, 2), (1, 4)])
def test_closed_euler_characteristic_rejects_non_integral_genus(m, h):
    with pytest.raises(IntegralityError):
        euler_char_closed_from_bunches(m, h)


def test_euler_with_boundary():
    assert euler_char_with_boundary(0, 1) == -1
    assert euler_char_with_boundary(2, 2) == 0
    with pytest.raises(DomainError):
        euler_char_with_boundary(0, -1)


def test_subsurface_profile():
    assert SubsurfaceProfile(1, 1).euler_characteristic == -1
    assert SubsurfaceProfile(0, 2).euler_characteristic == 0


@pytest.mark.parametrize("degrees, genus", [((2,), 1), ((2, 2), 1), ((6,), 2), ((1, 1, 1, 1, 2, 2), 0), ((3, 1), 1)])
def test_basic_set_genus(degrees, genus):
    assert basic_set_genus(bs(*degrees)).genus == genus
    assert basic_set_genus(bs(*degrees)).boundary_count == len(degrees)


def test_basic_set_genus_rejects_fractional():
    with pytest.raises(IntegralityError) as exc:
        basic_set_genus(bs(1))
    assert exc.value.value == Fraction(3, 4)


def test_genus_formula_against_enumeration():
    # For every multiset of at most four degrees in 1..6, the closed-form genus
    # must equal (2 - chi)/2 with chi the plain sum of per-saddle indices.
    for m in range(1, 5):
        for degrees in itertools.combinations_with_replacement(range(1, 7), m):
            chi = sum(Fraction(2 - d, 2) for d in degrees)
            g = (2 - chi) / 2
            if g.denominator != 1 or g < 0:
                continue
            assert basic_set_genus(bs(*degrees)).genus == g
            assert poincare_hopf_sum(bs(*degrees)) == chi


# --- pairing graph and decomposition ------------------------------------------


def spanning_tree_oracle(g: PairingGraph) -> int:
    """Non-tree edge count of a BFS spanning forest, multi-edges kept."""
    adj = {v: [] for v in g.vertices}
    for i, e in enumerate(g.edges):
        adj[e.attractor].append((e.repeller, i))
        adj[e.repeller].append((e.attractor, i))
    seen, tree = {g.vertices[0]}, set()
    queue = [g.vertices[0]]
    while queue:
        v = queue.pop(0)
        for w, i in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(i)
                queue.append(w)
    assert len(seen) == len(g.vertices)
    return len(g.edges) - len(tree)


def bridge_oracle(spec, order):
    """Replay the surgery with networkx bridge detection on a multigraph."""
    graph = build_pairing_graph(spec)
    mg = nx.MultiGraph()
    mg.add_nodes_from(graph.vertices)
    for e in graph.edges:
        mg.add_edge(e.attractor, e.repeller, key=e.component)
    out = []
    for cid in order:
        e = next(e for e in graph.edges if e.component == cid)
        mg.remove_edge(e.attractor, e.repeller, key=cid)
        out.append(StepKind.TORUS_SUMMAND if nx.has_path(mg, e.attractor, e.repeller) else StepKind.SPLIT)
    return out


def test_f1_decomposition():
    dec = decompose(example_f1())
    assert dec.genera == [1, 1, 1]
    assert dec.torus_count == 0
    assert dec.total_genus == 3
    assert [s.classification for s in dec.trace] == [StepKind.SPLIT, StepKind.SPLIT]


def test_f2_decomposition():
    dec = decompose(example_f2())
    assert dec.genera == [1, 1]
    assert dec.torus_count == 1
    assert dec.total_genus == 3
    assert sorted(s.classification.value for s in dec.trace) == ["split", "torus_summand"]


def test_pretzel_decomposition():
    assert decompose(example_pretzel()).total_genus == 2
    assert total_genus(example_pretzel()) == 2


def test_order_of_f2_cuts():
    steps = surgery_trace(example_f2(), ["V2", "V1"])
    assert [s.component_id for s in steps] == ["V2", "V1"]
    assert [s.classification for s in steps] == [StepKind.TORUS_SUMMAND, StepKind.SPLIT]


def test_bad_order_rejected():
    with pytest.raises(ValueError):
        surgery_trace(example_f2(), ["V1"])
    with pytest.raises(ValueError):
        surgery_trace(example_f2(), ["V1", "V1"])


def test_decompose_requires_valid(data_dir):
    from surfdecomp.model import parse_spec

    spec = parse_spec((data_dir / "quarter_genus.json").read_bytes())
    with pytest.raises(InvalidSpecError) as exc:
        decompose(spec)
    assert "V5" in exc.value.report.rule_codes


def test_cycle_rank_disconnected():
    from surfdecomp.topology import PairingEdge

    g = PairingGraph(("A", "R"), {"A": Kind.ATTRACTOR, "R": Kind.REPELLER}, ())
    assert not g.is_connected()
    with pytest.raises(DisconnectedGraphError):
        cycle_rank(g)
    g2 = PairingGraph(g.vertices, g.kinds, (PairingEdge("V", "A", "R"), PairingEdge("W", "A", "R")))
    assert cycle_rank(g2) == 1


@pytest.mark.parametrize("genus", [2, 3, 4, 7, 12])
def test_generate_for_genus(genus):
    spec = generate_for_genus(genus)
    dec = decompose(spec)
    assert dec.total_genus == genus
    assert dec.torus_count == 0
    assert dec.genera == [1] * genus


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_decomposition_identities(seed):
    spec = random_valid_spec(GeneratorConfig(seed=seed))
    dec = decompose(spec)
    graph = build_pairing_graph(spec)
    assert dec.total_genus == 1 + Fraction(spec.h_f, 4)
    assert dec.torus_count == spec.m_f // 2 - spec.k_f + 1
    assert cycle_rank(graph) == spanning_tree_oracle(graph)
    assert dec.total_genus >= 2


@settings(max_examples=200, deadline=None)
@given(seeds, st.randoms(use_true_random=False))
def test_trace_counts_any_order(seed, rnd):
    spec = random_valid_spec(GeneratorConfig(seed=seed))
    order = [c.id for c in spec.complement_components]
    rnd.shuffle(order)
    steps = surgery_trace(spec, order)
    assert [s.classification for s in steps] == bridge_oracle(spec, order)
    splits = sum(s.classification is StepKind.SPLIT for s in steps)
    assert splits == spec.k_f - 1
    assert len(steps) - splits == cycle_rank(build_pairing_graph(spec))


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_index_sum_matches_genus(seed):
    for b in random_valid_spec(GeneratorConfig(seed=seed)).basic_sets:
        assert 2 - 2 * basic_set_genus(b).genus == poincare_hopf_sum(b)


def test_decomposition_json():
    dec = decompose(example_f2())
    d = dec.to_dict()
    assert d["torus_count"] == 1
    assert d["summands"] == [{"basic_set": "A1", "genus": 1}, {"basic_set": "R1", "genus": 1}]
    assert len(d["trace"]) == 2
    assert "trace" not in dec.to_dict(include_trace=False)
    assert dec.to_json().endswith("\n")


def test_pairing_dot():
    dot = pairing_graph_dot(example_f1())
    assert dot.startswith("graph pairing {")
    assert '"A1" [label="A1:attractor:1"];' in dot
    assert '"A2" -- "R1" [label="V2"];' in dot
    assert dot.count(" -- ") == 2
