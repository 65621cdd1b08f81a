"""
Named example specs, a genus-targeted family, and a seeded random generator.

Random specs are drawn with ``numpy.random.Generator(PCG64(seed))``; PCG64 is
a portable 64-bit generator, so a seed fixes the spec on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import BasicSet, Bunch, ComplementComponent, DiffeoSpec, Kind


class GenerationError(ValueError):
    pass


def _set(sid: str, kind: Kind, *degrees: int) -> BasicSet:
    return BasicSet(sid, kind, tuple(Bunch(f"{sid}.b{i}", d) for i, d in enumerate(degrees, 1)))


def example_f1() -> DiffeoSpec:
    """Two attractors with one degree-2 bunch each, one repeller with two."""
    return DiffeoSpec(
        (
            _set("A1", Kind.ATTRACTOR, 2),
            _set("A2", Kind.ATTRACTOR, 2),
            _set("R1", Kind.REPELLER, 2, 2),
        ),
        (
            ComplementComponent("V1", "A1.b1", "R1.b1"),
            ComplementComponent("V2", "A2.b1", "R1.b2"),
        ),
    )


def example_f2() -> DiffeoSpec:
    """One attractor and one repeller, each with two degree-2 bunches, paired twice."""
    return DiffeoSpec(
        (_set("A1", Kind.ATTRACTOR, 2, 2), _set("R1", Kind.REPELLER, 2, 2)),
        (
            ComplementComponent("V1", "A1.b1", "R1.b1"),
            ComplementComponent("V2", "A1.b2", "R1.b2"),
        ),
    )


def example_pretzel() -> DiffeoSpec:
    return DiffeoSpec(
        (_set("A1", Kind.ATTRACTOR, 2), _set("R1", Kind.REPELLER, 2)),
        (ComplementComponent("V1", "A1.b1", "R1.b1"),),
    )


EXAMPLES = {"f1": example_f1, "f2": example_f2, "pretzel": example_pretzel}


def generate_for_genus(genus: int) -> DiffeoSpec:
    """Alternating attractor/repeller path with degree-2 bunches; every summand is a torus."""
    if isinstance(genus, bool) or not isinstance(genus, int) or genus < 2:
        raise ValueError(
            f"genus must be an integer >= 2, got {genus!r}: the sphere and the torus "
            "admit no diffeomorphism of this class"
        )
    sets = []
    for i in range(genus):
        kind = Kind.ATTRACTOR if i % 2 == 0 else Kind.REPELLER
        n_bunches = 1 if i in (0, genus - 1) else 2
        sets.append(_set(f"{kind.value[0].upper()}{i + 1}", kind, *([2] * n_bunches)))
    comps = []
    for i in range(genus - 1):
        left, right = sets[i], sets[i + 1]
        # left uses its last bunch, right its first
        ends = {left.kind: left.bunches[-1].id, right.kind: right.bunches[0].id}
        comps.append(ComplementComponent(f"V{i + 1}", ends[Kind.ATTRACTOR], ends[Kind.REPELLER]))
    return DiffeoSpec(tuple(sets), tuple(comps))


@dataclass(frozen=True)
class GeneratorConfig:
    """Bounds for ``random_valid_spec``.

    ``max_extra_components`` is the knob for non-tree pairing graphs: after a
    random spanning tree, up to that many extra attractor-repeller components
    are added (each one raises the torus count by one).
    """

    seed: int = 0
    max_basic_sets: int = 6
    max_bunches_per_set: int = 4
    max_degree: int = 6
    max_extra_components: int = 3

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.max_basic_sets < 2:
            raise ValueError("max_basic_sets must be >= 2 (both kinds are required)")
        if self.max_bunches_per_set < 1 or self.max_extra_components < 0:
            raise ValueError("max_bunches_per_set must be >= 1 and max_extra_components >= 0")
        if self.max_degree < 2:
            raise ValueError("max_degree must be >= 2")


_MAX_ATTEMPTS = 64


def _random_tree(rng, kinds, cap):
    """Random spanning tree of a bipartite graph respecting the per-vertex bunch cap."""
    n = len(kinds)
    for _ in range(_MAX_ATTEMPTS):
        order = [int(i) for i in rng.permutation(n)]
        a = next(i for i in order if kinds[i] is Kind.ATTRACTOR)
        r = next(i for i in order if kinds[i] is Kind.REPELLER)
        deg = [0] * n
        edges = [(a, r)]
        deg[a] = deg[r] = 1
        placed = [a, r]
        ok = True
        for v in order:
            if v in (a, r):
                continue
            targets = [u for u in placed if kinds[u] is not kinds[v] and deg[u] < cap]
            if not targets:
                ok = False
                break
            u = targets[int(rng.integers(len(targets)))]
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
            placed.append(v)
        if ok:
            return edges, deg
    raise GenerationError("could not build a spanning tree within max_bunches_per_set")


def _repair_degrees(rng, degrees: list[int], max_degree: int) -> None:
    """Adjust bunch degrees in place until h = 2m (mod 4) and 1 + h/4 - m/2 >= 0.

    Parity and mod-4 repairs move one degree by +-1 / +-2 (raising when there
    is room under ``max_degree``, else lowering); the genus floor is restored
    by +2 steps taken in pairs, which keeps h mod 4 fixed.
    """
    m = len(degrees)

    def fail():
        raise GenerationError(f"max_degree={max_degree} too small to repair bunch degrees {degrees}")

    def shift(delta, allow_down=True):
        moves = [(i, delta) for i, d in enumerate(degrees) if d + delta <= max_degree]
        if not moves and allow_down:
            moves = [(i, -delta) for i, d in enumerate(degrees) if d - delta >= 1]
        if not moves:
            fail()
        i, step = moves[int(rng.integers(len(moves)))]
        degrees[i] += step

    if (sum(degrees) - 2 * m) % 2:
        shift(1)
    if (sum(degrees) - 2 * m) % 4:
        shift(2)
    while 4 + sum(degrees) - 2 * m < 0:
        shift(2, allow_down=False)
        shift(2, allow_down=False)


def random_valid_spec(cfg: GeneratorConfig) -> DiffeoSpec:
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    cap = cfg.max_bunches_per_set

    # k_f with both kinds and enough bunch capacity on each side for a tree
    choices = []
    for k in range(2, cfg.max_basic_sets + 1):
        for n_att in range(1, k):
            if n_att * cap >= k - 1 and (k - n_att) * cap >= k - 1:
                choices.append((k, n_att))
    if not choices:
        raise GenerationError("max_bunches_per_set too small for any connected spec")
    k, n_att = choices[int(rng.integers(len(choices)))]
    kinds = [Kind.ATTRACTOR] * n_att + [Kind.REPELLER] * (k - n_att)
    kinds = [kinds[int(i)] for i in rng.permutation(k)]

    edges, deg = _random_tree(rng, kinds, cap)
    for _ in range(int(rng.integers(cfg.max_extra_components + 1))):
        att = [i for i in range(k) if kinds[i] is Kind.ATTRACTOR and deg[i] < cap]
        rep = [i for i in range(k) if kinds[i] is Kind.REPELLER and deg[i] < cap]
        if not att or not rep:
            break
        u = att[int(rng.integers(len(att)))]
        v = rep[int(rng.integers(len(rep)))]
        edges.append((u, v))
        deg[u] += 1
        deg[v] += 1

    width = len(str(k))
    names = [f"{kinds[i].value[0].upper()}{i + 1:0{width}d}" for i in range(k)]
    bunch_ids: list[list[str]] = [[] for _ in range(k)]
    comps = []
    cwidth = len(str(len(edges)))
    for n, (u, v) in enumerate(edges, 1):
        pair = {}
        for w in (u, v):
            bid = f"{names[w]}.b{len(bunch_ids[w]) + 1}"
            bunch_ids[w].append(bid)
            pair[kinds[w]] = bid
        comps.append(ComplementComponent(f"V{n:0{cwidth}d}", pair[Kind.ATTRACTOR], pair[Kind.REPELLER]))

    sets = []
    for i in range(k):
        degrees = [int(d) for d in rng.integers(1, cfg.max_degree + 1, size=len(bunch_ids[i]))]
        _repair_degrees(rng, degrees, cfg.max_degree)
        sets.append(BasicSet(names[i], kinds[i], tuple(Bunch(b, d) for b, d in zip(bunch_ids[i], degrees))))
    return DiffeoSpec(tuple(sets), tuple(comps)).canonical()
