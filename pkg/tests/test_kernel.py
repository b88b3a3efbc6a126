import random

import pytest
from hypothesis import given, settings, strategies as st

from catlogic.errors import (
    CategoryFileError,
    MalformedInput,
    NotComposable,
    ShapeMismatch,
)
from catlogic.heyting import gen_powerset
from catlogic.kernel import (
    FinCategory,
    format_category,
    mutually_inverse,
    parse_category,
    validate_category,
)

from conftest import make_h2, subset_of


def test_h2_is_valid(h2):
    assert validate_category(h2).ok
    u = h2.arrow("u")
    assert h2.compose(u, h2.identity_of(h2.obj("bot"))) == u
    assert h2.compose(h2.identity_of(h2.obj("top")), u) == u


def test_h2_with_redirected_identity_composite_detected():
    cat = make_h2()
    bad = cat.with_composition(cat.arrow("id_top"), cat.arrow("u"),
                               cat.arrow("id_top"))
    report = validate_category(bad)
    assert not report.ok
    kinds = {v.kind for v in report.violations}
    assert kinds & {"identity-law", "compose-endpoints"}
    assert any("u" in v.message for v in report.violations)


def test_b4_is_valid_against_order_oracle():
    model = gen_powerset(2)
    # oracle: the declared order must be reflexive and transitive, and the
    # category arrows must match it exactly
    n = len(model.elements)
    for i in range(n):
        assert model.leq[i][i]
        for j in range(n):
            for k in range(n):
                if model.leq[i][j] and model.leq[j][k]:
                    assert model.leq[i][k]
    cat = model.category()
    assert len(cat.objects) == 4 and len(cat.arrows) == 9
    assert validate_category(cat).ok
    for a in cat.objects:
        for b in cat.objects:
            expected = subset_of(a.name) <= subset_of(b.name)
            assert (len(cat.hom(a, b)) == 1) == expected


def test_compose_requires_matching_endpoints(h2):
    u = h2.arrow("u")
    with pytest.raises(NotComposable):
        h2.compose(u, u)


def test_b4_composition_follows_inclusion_chain():
    cat = gen_powerset(2).category()
    f = cat.hom(cat.obj("e"), cat.obj("e1"))[0]
    g = cat.hom(cat.obj("e1"), cat.obj("e12"))[0]
    expected = cat.hom(cat.obj("e"), cat.obj("e12"))[0]  # unique by thinness
    assert cat.compose(g, f) == expected


def test_hom_queries(h2):
    assert [a.name for a in h2.hom(h2.obj("bot"), h2.obj("top"))] == ["u"]
    assert h2.hom(h2.obj("top"), h2.obj("bot")) == ()


def test_hom_partitions_arrows():
    cat = gen_powerset(3).category()
    seen = []
    for a in cat.objects:
        for b in cat.objects:
            seen.extend(cat.hom(a, b))
    assert sorted(f.index for f in seen) == list(range(len(cat.arrows)))


def test_mutually_inverse(h2):
    id_top = h2.identity_of(h2.obj("top"))
    assert mutually_inverse(h2, id_top, id_top)
    u = h2.arrow("u")
    with pytest.raises(ShapeMismatch):
        mutually_inverse(h2, u, u)


def test_mutually_inverse_identity_pair_b4():
    cat = gen_powerset(2).category()
    i = cat.identity_of(cat.obj("e1"))
    assert mutually_inverse(cat, i, i)


def test_single_entry_corruptions_are_detected():
    cat = gen_powerset(2).category()
    assert validate_category(cat).ok
    rng = random.Random(20240817)
    pairs = [(g, f) for g, f in cat.composable_pairs()]
    for _ in range(100):
        g, f = rng.choice(pairs)
        current = cat.table_entry(g, f)
        wrong = rng.randrange(len(cat.arrows) + 1)
        if wrong == current:
            wrong = (wrong + 1) % (len(cat.arrows) + 1)
        h = None if wrong == len(cat.arrows) else cat.arrows[wrong]
        mutated = cat.with_composition(g, f, h)
        assert not validate_category(mutated).ok


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_any_single_flip_is_detected_hypothesis(data):
    cat = gen_powerset(2).category()
    pairs = list(cat.composable_pairs())
    g, f = data.draw(st.sampled_from(pairs))
    k = data.draw(st.integers(min_value=-1, max_value=len(cat.arrows) - 1))
    if k == cat.table_entry(g, f):
        k = -1 if k != -1 else cat.identity_of(cat.objects[0]).index
        if k == cat.table_entry(g, f):
            return
    mutated = cat.with_composition(g, f, None if k == -1 else cat.arrows[k])
    assert not validate_category(mutated).ok


def test_spurious_entry_on_non_composable_pair_detected(h2):
    u = h2.arrow("u")
    mutated = h2.with_composition(u, u, u)  # u . u is not composable
    report = validate_category(mutated)
    assert any(v.kind == "compose-spurious" for v in report.violations)


def test_missing_identity_raises():
    with pytest.raises(MalformedInput):
        FinCategory.build(["a"], [], identities={}, name="broken")


def test_dangling_endpoint_raises():
    with pytest.raises(MalformedInput):
        FinCategory.build(["a"], [("f", "a", "nowhere")])


# -- file format ---------------------------------------------------------------

H2_FILE = """\
# two-element chain
object bot
object top
arrow u : bot -> top
id bot = auto
id top = auto
"""


def test_parse_category_roundtrip():
    cat = parse_category(H2_FILE, name="H2")
    assert validate_category(cat).ok
    again = parse_category(format_category(cat), name="H2")
    assert [o.name for o in again.objects] == [o.name for o in cat.objects]
    assert [(a.name, a.dom, a.cod) for a in again.arrows] == \
        [(a.name, a.dom, a.cod) for a in cat.arrows]
    for g in cat.arrows:
        for f in cat.arrows:
            assert again.table_entry(g, f) == cat.table_entry(g, f)


def test_generated_models_roundtrip():
    for k in (2, 3):
        cat = gen_powerset(k).category()
        again = parse_category(format_category(cat), name=cat.name)
        assert validate_category(again).ok
        assert len(again.arrows) == len(cat.arrows)
        for g in cat.arrows:
            for f in cat.arrows:
                assert again.table_entry(g, f) == cat.table_entry(g, f)


def test_parse_errors_carry_line_numbers():
    with pytest.raises(CategoryFileError) as exc:
        parse_category("object a\narrow f : a -> b\nid a = auto\n")
    assert "line 2" in str(exc.value)

    with pytest.raises(CategoryFileError) as exc:
        parse_category("object a\nid a = auto\ncompose f . g = h\n")
    assert "line 3" in str(exc.value)

    with pytest.raises(CategoryFileError):
        parse_category("object a\n")  # no id line


def test_explicit_compose_line_overrides_autofill():
    text = H2_FILE + "compose id_top . u = id_top\n"
    cat = parse_category(text)
    report = validate_category(cat)
    assert not report.ok


def test_undefined_composite_reported_as_missing():
    # a three-arrow chain whose non-identity composite is left out
    text = """\
object a
object b
object c
arrow f : a -> b
arrow g : b -> c
id a = auto
id b = auto
id c = auto
"""
    cat = parse_category(text)
    report = validate_category(cat)
    assert any(v.kind == "compose-missing" for v in report.violations)
    fixed = parse_category(text + "arrow h : a -> c\ncompose g . f = h\n")
    assert validate_category(fixed).ok
