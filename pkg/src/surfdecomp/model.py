"""
Combinatorial model of an A-diffeomorphism whose non-wandering set consists
of one-dimensional attractors and repellers.

A spec lists the basic sets (each with its bunches and their degrees) and the
complement components, each of which pairs one attractor bunch with one
repeller bunch.  Everything here is immutable; ``validate_spec`` reports every
necessary condition that a spec violates instead of raising.
"""

from __future__ import annotations

import enum
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction


class Kind(str, enum.Enum):
    ATTRACTOR = "attractor"
    REPELLER = "repeller"


@dataclass(frozen=True)
class Bunch:
    id: str
    degree: int


@dataclass(frozen=True)
class BasicSet:
    id: str
    kind: Kind
    bunches: tuple[Bunch, ...]

    @property
    def bunch_count(self) -> int:
        """Number of bunches (m for this set)."""
        return len(self.bunches)

    @property
    def degree_sum(self) -> int:
        """Sum of the bunch degrees (h for this set)."""
        return sum(b.degree for b in self.bunches)

    def genus_value(self) -> Fraction:
        """Exact value of 1 + h/4 - m/2; may be fractional or negative on bad input."""
        return 1 + Fraction(self.degree_sum, 4) - Fraction(self.bunch_count, 2)


@dataclass(frozen=True)
class ComplementComponent:
    id: str
    attractor_bunch: str
    repeller_bunch: str


@dataclass(frozen=True)
class DiffeoSpec:
    basic_sets: tuple[BasicSet, ...]
    complement_components: tuple[ComplementComponent, ...]

    @property
    def k_f(self) -> int:
        return len(self.basic_sets)

    @property
    def m_f(self) -> int:
        return sum(bs.bunch_count for bs in self.basic_sets)

    @property
    def h_f(self) -> int:
        return sum(bs.degree_sum for bs in self.basic_sets)

    def bunch_owner(self) -> dict[str, BasicSet]:
        """Map bunch id -> owning basic set.

        On duplicate bunch ids the owner is picked by sorted set content, so the
        answer does not depend on input order.
        """
        owners: dict[str, BasicSet] = {}
        key = lambda bs: (bs.id, bs.kind.value, tuple((b.id, b.degree) for b in bs.bunches))
        for bs in sorted(self.basic_sets, key=key):
            for b in bs.bunches:
                owners.setdefault(b.id, bs)
        return owners

    def basic_set(self, set_id: str) -> BasicSet:
        for bs in self.basic_sets:
            if bs.id == set_id:
                return bs
        raise KeyError(set_id)

    def canonical(self) -> DiffeoSpec:
        """Same spec with every array sorted by id."""
        sets = tuple(
            BasicSet(bs.id, bs.kind, tuple(sorted(bs.bunches, key=lambda b: b.id)))
            for bs in sorted(self.basic_sets, key=lambda s: s.id)
        )
        comps = tuple(sorted(self.complement_components, key=lambda c: c.id))
        return DiffeoSpec(sets, comps)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

RULES = {
    "V1": "both-kinds-present",
    "V2": "each-bunch-paired-exactly-once",
    "V3": "pairing-crosses-kinds",
    "V4": "pairing-graph-connected",
    "V5": "genus-integrality",
    "V6": "genus-non-negativity",
    "V7": "degrees-positive",
    "V8": "ids-unique",
}


@dataclass(frozen=True, order=True)
class Violation:
    rule_code: str
    message: str
    offending_ids: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "rule_code": self.rule_code,
            "rule": RULES[self.rule_code],
            "message": self.message,
            "offending_ids": list(self.offending_ids),
        }


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def rule_codes(self) -> set[str]:
        return {v.rule_code for v in self.violations}

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_dict() for v in self.violations]}


class InvalidSpecError(ValueError):
    """Raised by operations that require a spec passing ``validate_spec``."""

    def __init__(self, report: ValidationReport):
        codes = ", ".join(sorted(report.rule_codes))
        super().__init__(f"spec violates {codes}")
        self.report = report


def _components(vertices, edges) -> list[set]:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in edges:
        parent[find(a)] = find(b)
    groups: dict = {}
    for v in vertices:
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


def validate_spec(spec: DiffeoSpec) -> ValidationReport:
    """Check rules V1-V8; the violation list is sorted and order-independent."""
    out: list[Violation] = []

    kinds = {bs.kind for bs in spec.basic_sets}
    if kinds != {Kind.ATTRACTOR, Kind.REPELLER}:
        missing = sorted(k.value for k in {Kind.ATTRACTOR, Kind.REPELLER} - kinds)
        out.append(Violation("V1", "missing basic-set kind: " + ", ".join(missing)))

    # V8: ids unique within each namespace
    for label, ids in (
        ("basic set", [bs.id for bs in spec.basic_sets]),
        ("bunch", [b.id for bs in spec.basic_sets for b in bs.bunches]),
        ("complement component", [c.id for c in spec.complement_components]),
    ):
        dups = sorted(i for i, n in Counter(ids).items() if n > 1)
        if dups:
            out.append(Violation("V8", f"duplicate {label} ids", tuple(dups)))

    # V7: degrees and non-empty bunch lists
    for bs in spec.basic_sets:
        if not bs.bunches:
            out.append(Violation("V7", f"basic set {bs.id} has no bunches", (bs.id,)))
        bad = sorted(b.id for b in bs.bunches if b.degree < 1)
        if bad:
            out.append(Violation("V7", f"bunch degree < 1 in {bs.id}", tuple(bad)))

    # V5 / V6 per basic set, exact rationals
    for bs in spec.basic_sets:
        if not bs.bunches:
            continue
        g = bs.genus_value()
        if (bs.degree_sum - 2 * bs.bunch_count) % 4:
            out.append(Violation("V5", f"genus of {bs.id} would be {g}, not an integer", (bs.id,)))
        if g < 0:
            out.append(Violation("V6", f"genus of {bs.id} would be {g} < 0", (bs.id,)))

    # V2 / V3: pairing
    owner = spec.bunch_owner()
    refs: Counter = Counter()
    edges = []
    for c in spec.complement_components:
        ends = []
        for ref, want in ((c.attractor_bunch, Kind.ATTRACTOR), (c.repeller_bunch, Kind.REPELLER)):
            refs[ref] += 1
            bs = owner.get(ref)
            if bs is None:
                out.append(Violation("V2", f"component {c.id} references unknown bunch {ref}", (c.id, ref)))
            elif bs.kind is not want:
                out.append(Violation(
                    "V3",
                    f"component {c.id}: {want.value} side references bunch {ref} of {bs.kind.value} {bs.id}",
                    (c.id, ref),
                ))
            else:
                ends.append(bs.id)
        if len(ends) == 2:
            edges.append(tuple(ends))
    for bid in sorted(owner):
        n = refs[bid]
        if n != 1:
            out.append(Violation("V2", f"bunch {bid} is paired {n} times", (bid,)))

    # V4: connectivity over the resolvable pairings
    vertices = sorted({bs.id for bs in spec.basic_sets})
    if len(vertices) > 1:
        parts = _components(vertices, edges)
        if len(parts) > 1:
            parts = sorted(sorted(p) for p in parts)
            out.append(Violation(
                "V4",
                f"pairing graph has {len(parts)} connected components",
                tuple(i for p in parts[1:] for i in p),
            ))

    return ValidationReport(tuple(sorted(set(out))))


def require_valid(spec: DiffeoSpec) -> None:
    report = validate_spec(spec)
    if not report.valid:
        raise InvalidSpecError(report)


# ---------------------------------------------------------------------------
# JSON format
# ---------------------------------------------------------------------------


class SpecParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


_TOP_KEYS = ("basic_sets", "complement_components")
_SET_KEYS = ("id", "kind", "bunches")
_BUNCH_KEYS = ("id", "degree")
_COMP_KEYS = ("id", "attractor_bunch", "repeller_bunch")


def _position(text: str, pattern: str, nth: int = 0) -> tuple[int | None, int | None]:
    matches = list(re.finditer(pattern, text))
    if len(matches) <= nth:
        return None, None
    pos = matches[nth].start()
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def _key_error(text: str, key: str, message: str) -> SpecParseError:
    return SpecParseError(message, *_position(text, r'"%s"\s*:' % re.escape(key)))


def _check_keys(text: str, obj, allowed: tuple[str, ...], where: str) -> None:
    if not isinstance(obj, dict):
        raise SpecParseError(f"{where} must be an object")
    for key in obj:
        if key not in allowed:
            raise _key_error(text, key, f"unknown field {key!r} in {where}")
    for key in allowed:
        if key not in obj:
            raise SpecParseError(f"missing field {key!r} in {where}")


def _str(value, what: str) -> str:
    if not isinstance(value, str) or not value:
        raise SpecParseError(f"{what} must be a non-empty string")
    return value


def parse_spec(data: bytes | str) -> DiffeoSpec:
    """Parse the JSON spec format; structural problems raise ``SpecParseError``."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SpecParseError(f"not UTF-8: {exc}") from None
    else:
        text = data
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"JSON syntax error: {exc.msg}", exc.lineno, exc.colno) from None

    _check_keys(text, raw, _TOP_KEYS, "spec")
    for key in _TOP_KEYS:
        if not isinstance(raw[key], list) or not raw[key]:
            raise _key_error(text, key, f"{key} must be a non-empty array")

    sets = []
    for i, rs in enumerate(raw["basic_sets"]):
        _check_keys(text, rs, _SET_KEYS, f"basic_sets[{i}]")
        sid = _str(rs["id"], f"basic_sets[{i}].id")
        try:
            kind = Kind(rs["kind"])
        except ValueError:
            raise _key_error(text, "kind", f"basic set {sid}: kind must be 'attractor' or 'repeller'") from None
        if not isinstance(rs["bunches"], list) or not rs["bunches"]:
            raise SpecParseError(f"basic set {sid}: bunches must be a non-empty array", *_position(text, re.escape(f'"{sid}"')))
        bunches = []
        for j, rb in enumerate(rs["bunches"]):
            _check_keys(text, rb, _BUNCH_KEYS, f"{sid}.bunches[{j}]")
            deg = rb["degree"]
            if isinstance(deg, bool) or not isinstance(deg, int):
                raise SpecParseError(f"{sid}.bunches[{j}].degree must be an integer")
            bunches.append(Bunch(_str(rb["id"], f"{sid}.bunches[{j}].id"), deg))
        sets.append(BasicSet(sid, kind, tuple(bunches)))

    comps = []
    for i, rc in enumerate(raw["complement_components"]):
        _check_keys(text, rc, _COMP_KEYS, f"complement_components[{i}]")
        comps.append(ComplementComponent(
            _str(rc["id"], f"complement_components[{i}].id"),
            _str(rc["attractor_bunch"], f"complement_components[{i}].attractor_bunch"),
            _str(rc["repeller_bunch"], f"complement_components[{i}].repeller_bunch"),
        ))

    for label, ids in (
        ("basic set", [s.id for s in sets]),
        ("bunch", [b.id for s in sets for b in s.bunches]),
        ("complement component", [c.id for c in comps]),
    ):
        for dup, n in Counter(ids).items():
            if n > 1:
                line, col = _position(text, r'"id"\s*:\s*"%s"' % re.escape(dup), nth=1)
                raise SpecParseError(f"duplicate {label} id {dup!r}", line, col)

    return DiffeoSpec(tuple(sets), tuple(comps))


def spec_to_dict(spec: DiffeoSpec) -> dict:
    spec = spec.canonical()
    return {
        "basic_sets": [
            {
                "id": bs.id,
                "kind": bs.kind.value,
                "bunches": [{"id": b.id, "degree": b.degree} for b in bs.bunches],
            }
            for bs in spec.basic_sets
        ],
        "complement_components": [
            {"id": c.id, "attractor_bunch": c.attractor_bunch, "repeller_bunch": c.repeller_bunch}
            for c in spec.complement_components
        ],
    }


def serialize_spec(spec: DiffeoSpec) -> bytes:
    """Canonical UTF-8 JSON: arrays sorted by id, two-space indent, trailing LF."""
    return (json.dumps(spec_to_dict(spec), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
