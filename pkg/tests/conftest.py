from pathlib import Path

import pytest
from hypothesis import strategies as st

from surfdecomp.model import BasicSet, Bunch, ComplementComponent, DiffeoSpec, Kind

DATA = Path(__file__).parent / "data"

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k[2:])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}  {detail}")


@pytest.fixture
def data_dir():
    return DATA


@st.composite
def arbitrary_specs(draw):
    """Small specs that are structurally well-formed but may break any V-rule."""
    n_sets = draw(st.integers(1, 4))
    sets = []
    bunch_ids = []
    for i in range(n_sets):
        kind = draw(st.sampled_from(list(Kind)))
        sid = draw(st.sampled_from([f"S{i}", "S0"]))  # occasional duplicate ids
        bunches = []
        for j in range(draw(st.integers(0, 3))):
            bid = f"{sid}.b{j}"
            bunches.append(Bunch(bid, draw(st.integers(0, 6))))
            bunch_ids.append(bid)
        sets.append(BasicSet(sid, kind, tuple(bunches)))
    refs = st.sampled_from(bunch_ids + ["ghost"]) if bunch_ids else st.just("ghost")
    comps = tuple(
        ComplementComponent(f"V{i}", draw(refs), draw(refs))
        for i in range(draw(st.integers(1, 4)))
    )
    return DiffeoSpec(tuple(sets), comps)
