import itertools

import pytest

from catlogic.bundles import bundled_suites
from catlogic.cli import run_cli
from catlogic.errors import ScaleExceeded
from catlogic.heyting import (
    gen_chain,
    gen_diamond,
    gen_powerset,
    oracle_atom_map,
    oracle_interpret,
)
from catlogic.kernel import format_category, parse_category, validate_category
from catlogic.logic import Zero, parse_formula
from catlogic.report import Report, strip_timing
from catlogic.semantics import check_conditions
from catlogic.structure import discover_structure

from conftest import subset_of


# -- generators -----------------------------------------------------------------

def test_gen_chain_2_is_h2():
    model = gen_chain(2)
    assert model.elements == ("c0", "c1")
    assert model.impl[model.top][model.bottom] == model.bottom


def test_gen_powerset_2_implication():
    model = gen_powerset(2)
    e1, e2 = model.index("e1"), model.index("e2")
    # oracle: implication in a powerset algebra is complement-union
    assert subset_of(model.elements[model.impl[e1][e2]]) == \
        (subset_of("e12") - subset_of("e1")) | subset_of("e2")
    assert model.elements[model.impl[e1][e2]] == "e2"


def test_gen_diamond_isomorphic_to_powerset_2():
    d = gen_diamond()
    b4 = gen_powerset(2)
    # match by order-profile: send bot->e, top->e12, left/right to the atoms
    mapping = {0: 0, 1: 1, 2: 2, 3: 3}
    for i in range(4):
        for j in range(4):
            assert d.leq[i][j] == b4.leq[mapping[i]][mapping[j]]
            assert mapping[d.meet[i][j]] == b4.meet[mapping[i]][mapping[j]]
            assert mapping[d.join[i][j]] == b4.join[mapping[i]][mapping[j]]


def test_generators_produce_valid_structured_categories():
    for model in (gen_chain(4), gen_powerset(2), gen_powerset(3), gen_diamond()):
        cat = model.category()
        assert validate_category(cat).ok
        st = discover_structure(cat)
        assert st.complete, model.name
        # the categorical structure must agree with the lattice tables
        for a in cat.objects:
            for b in cat.objects:
                ai, bi = a.index, b.index
                assert st.product(a, b).apex.index == model.meet[ai][bi]
                assert st.coproduct(a, b).apex.index == model.join[ai][bi]
                assert st.exponential(a, b).apex.index == model.impl[ai][bi]
        assert st.terminal_obj().index == model.top
        assert st.initial_obj().index == model.bottom


def test_scale_limits():
    with pytest.raises(ScaleExceeded):
        gen_powerset(5)
    with pytest.raises(ScaleExceeded):
        gen_chain(0)
    with pytest.raises(ScaleExceeded):
        gen_chain(33)
    gen_powerset(4)  # 16 objects is still desk scale


# -- the lattice oracle -----------------------------------------------------------

def test_oracle_zero_is_bottom(b4_prepared):
    suite, _, _, interp = b4_prepared
    elems = oracle_atom_map(suite.model, interp.theory.atom_interp)
    assert oracle_interpret(suite.model, interp.universe, elems, Zero()) == \
        suite.model.bottom


def test_oracle_worked_examples():
    model = gen_powerset(2)
    from catlogic.logic import parse_theory
    theory = parse_theory(
        "sort s\nfun c : s\nfun d : s\nrel B : s\nrel P\ndepth 1\n"
        "interp B(c) = e2\ninterp B(d) = e12\ninterp P = e1\n")
    from catlogic.logic import enumerate_closed_terms
    u = enumerate_closed_terms(theory.signature, 1)
    elems = oracle_atom_map(model, theory.atom_interp)
    f = parse_formula("exists x:s. B(x)", theory.signature)
    assert model.elements[oracle_interpret(model, u, elems, f)] == "e12"
    g = parse_formula("P & (exists x:s. B(x))", theory.signature)
    assert model.elements[oracle_interpret(model, u, elems, g)] == "e1"


def test_oracle_agrees_with_engine_on_axioms(prepared_suites):
    for suite, _, _, interp in prepared_suites:
        elems = oracle_atom_map(suite.model, interp.theory.atom_interp)
        for ax in interp.theory.signature.axioms:
            want = oracle_interpret(suite.model, interp.universe, elems, ax)
            assert interp.interpret(ax).index == want


# -- reports ------------------------------------------------------------------------

def test_report_rendering_and_strip():
    r = Report()
    r.add("alpha", 1)
    r.add("beta.gamma", "x y")
    r.add_timing("total_ms", 12.34)
    text = r.render()
    assert "alpha = 1\n" in text
    assert "timing.total_ms = 12.3\n" in text
    assert "timing" not in strip_timing(text)
    assert strip_timing(text) == r.render(include_timing=False)


def test_report_rejects_multiline_values():
    r = Report()
    with pytest.raises(ValueError):
        r.add("key", "two\nlines")


# -- the CLI ----------------------------------------------------------------------------

@pytest.fixture()
def workdir(tmp_path):
    model = tmp_path / "b4.cat"
    assert run_cli(["gen", "--kind", "powerset", "--n", "2",
                    "--out", str(model)]) == 0
    theory = tmp_path / "theory.th"
    theory.write_text(
        "sort s\nfun c : s\nfun d : s\nrel B : s\nrel P\ndepth 1\n"
        "axiom exists x:s. (P & B(x))\n"
        "interp B(c) = e1\ninterp B(d) = e2\ninterp P = e1\n")
    return tmp_path, model, theory


def test_cli_validate_ok(workdir, capsys):
    _, model, _ = workdir
    assert run_cli(["validate", "--model", str(model)]) == 0
    out = capsys.readouterr().out
    assert "validation = PASS" in out


def test_cli_validate_dangling_arrow_name_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.cat"
    bad.write_text("object a\narrow f : a -> ghost\nid a = auto\n")
    assert run_cli(["validate", "--model", str(bad)]) == 2
    assert "ghost" in capsys.readouterr().err


def test_cli_validate_law_violation_exits_1(workdir, capsys):
    tmp_path, model, _ = workdir
    text = model.read_text() + "compose id_e12 . le_e_e12 = id_e12\n"
    broken = tmp_path / "broken.cat"
    broken.write_text(text)
    assert run_cli(["validate", "--model", str(broken)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_cli_interpret(workdir, capsys):
    _, model, theory = workdir
    rc = run_cli(["interpret", "--model", str(model), "--theory", str(theory),
                  "--formula", "exists x:s. B(x)"])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "e12"


def test_cli_interpret_open_formula_exits_2(workdir, capsys):
    _, model, theory = workdir
    rc = run_cli(["interpret", "--model", str(model), "--theory", str(theory),
                  "--formula", "B(zzz)"])
    assert rc == 2


def test_cli_check_powerset2(workdir, capsys, tmp_path):
    _, model, theory = workdir
    rpt = tmp_path / "out.rpt"
    rc = run_cli(["check", "--model", str(model), "--theory", str(theory),
                  "--report", str(rpt)])
    assert rc == 0
    text = rpt.read_text()
    for n, name in [(1, "products"), (2, "coproducts"), (3, "exponentials"),
                    (4, "distributivity"), (5, "quantifier-objects"),
                    (6, "interpretation-clauses"), (7, "frobenius")]:
        assert f"condition.{n}.{name} = PASS" in text
    assert "conditions.overall = PASS" in text


def test_cli_check_report_deterministic(workdir, tmp_path, capsys):
    _, model, theory = workdir
    r1, r2 = tmp_path / "r1.rpt", tmp_path / "r2.rpt"
    assert run_cli(["check", "--model", str(model), "--theory", str(theory),
                    "--report", str(r1)]) == 0
    assert run_cli(["check", "--model", str(model), "--theory", str(theory),
                    "--report", str(r2)]) == 0
    assert strip_timing(r1.read_text()) == strip_timing(r2.read_text())
    assert strip_timing(r1.read_text())  # non-empty


def test_cli_check_mutated_model_never_exits_0(workdir, tmp_path, capsys):
    _, model, theory = workdir
    base = model.read_text()
    # corrupt one compose line in place
    lines = base.splitlines()
    for i, line in enumerate(lines):
        if line.startswith("compose le_e1_e12 . le_e_e1"):
            lines[i] = "compose le_e1_e12 . le_e_e1 = le_e_e2"
            break
    mutated = tmp_path / "mutated.cat"
    mutated.write_text("\n".join(lines) + "\n")
    rc = run_cli(["check", "--model", str(mutated), "--theory", str(theory)])
    assert rc in (1, 2)


def test_cli_redundancy_chain3(tmp_path, capsys):
    model = tmp_path / "chain3.cat"
    assert run_cli(["gen", "--kind", "chain", "--n", "3",
                    "--out", str(model)]) == 0
    theory = tmp_path / "t.th"
    theory.write_text(
        "sort s\nfun c : s\nfun d : s\nrel B : s\nrel P\ndepth 1\n"
        "axiom exists x:s. (P & B(x))\n"
        "interp B(c) = c1\ninterp B(d) = c1\ninterp P = c1\n")
    rpt = tmp_path / "red.rpt"
    rc = run_cli(["redundancy", "--model", str(model), "--theory", str(theory),
                  "--report", str(rpt)])
    assert rc == 0
    text = rpt.read_text()
    assert "delta.count = 27" in text  # 3^3 object triples, exhaustive
    assert text.count(".verdict = PASS") >= 27
    assert "redundancy.overall = PASS" in text


def test_cli_gen_rejects_scale(capsys):
    assert run_cli(["gen", "--kind", "powerset", "--n", "9"]) == 2
    assert "desk scale" in capsys.readouterr().err


def test_cli_usage_error_exits_2():
    assert run_cli(["check", "--model"]) == 2
    assert run_cli(["frobnicate"]) == 2


def test_cli_missing_file_exits_2(capsys):
    assert run_cli(["validate", "--model", "/nonexistent/x.cat"]) == 2


def test_bundled_suites_cover_the_matrix():
    ids = [s.suite_id for s in bundled_suites()]
    assert len(ids) == 6
    for model in ("chain-4", "powerset-2", "powerset-3"):
        assert f"{model}/pair-const" in ids
        assert f"{model}/unary-fun" in ids


def test_report_is_self_contained(workdir, tmp_path):
    # re-running from the inputs embedded in a report reproduces the report
    _, model, theory = workdir
    r1 = tmp_path / "first.rpt"
    assert run_cli(["check", "--model", str(model), "--theory", str(theory),
                    "--report", str(r1)]) == 0
    text = r1.read_text()
    model_lines, theory_lines = [], []
    for line in text.splitlines():
        if line.startswith("input.model."):
            model_lines.append(line.split(" = ", 1)[1])
        elif line.startswith("input.theory."):
            theory_lines.append(line.split(" = ", 1)[1])
    redo = tmp_path / "redo"
    redo.mkdir()
    m2 = redo / model.name
    t2 = redo / theory.name
    m2.write_text("\n".join(model_lines) + "\n")
    t2.write_text("\n".join(theory_lines) + "\n")
    r2 = tmp_path / "second.tmp"
    assert run_cli(["check", "--model", str(m2), "--theory", str(t2),
                    "--report", str(r2)]) == 0
    assert strip_timing(r2.read_text()) == strip_timing(text)
