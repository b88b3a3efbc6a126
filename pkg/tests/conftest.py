import pytest

from catlogic.bundles import bundled_suites
from catlogic.kernel import FinCategory, validate_category
from catlogic.semantics import build_interpretation
from catlogic.structure import discover_structure


def make_h2() -> FinCategory:
    """The two-element chain as a bare category: bot, top, u : bot -> top."""
    return FinCategory.build(["bot", "top"], [("u", "bot", "top")], name="H2")


@pytest.fixture(scope="session")
def h2():
    cat = make_h2()
    assert validate_category(cat).ok
    return cat


@pytest.fixture(scope="session")
def h2_structure(h2):
    return discover_structure(h2)


@pytest.fixture(scope="session")
def prepared_suites():
    """Every bundled suite with its category, structure table and interpretation."""
    out = []
    for suite in bundled_suites():
        cat = suite.model.category()
        assert validate_category(cat).ok
        st = discover_structure(cat)
        theory = suite.theory()
        interp = build_interpretation(st, theory)
        out.append((suite, cat, st, interp))
    return out


@pytest.fixture(scope="session")
def b4_prepared(prepared_suites):
    for suite, cat, st, interp in prepared_suites:
        if suite.suite_id == "powerset-2/pair-const":
            return suite, cat, st, interp
    raise RuntimeError("powerset-2/pair-const suite missing")


# subset encodings used as an oracle independent of the lattice tables
def subset_of(name: str) -> frozenset:
    assert name.startswith("e")
    return frozenset(int(ch) for ch in name[1:])


def subset_name(s: frozenset) -> str:
    return "e" + "".join(str(i) for i in sorted(s))
