import pathlib

import pytest

from opgroth.dsl import (
    DocBuilder,
    documents_table_equal,
    parse_spec_file,
    pretty_print,
    ser_category,
    ser_laxtoset,
    ser_omon,
)
from opgroth.fincore import FinMap, validate_category
from opgroth.fib2cat import validate_indexed_set

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def read(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


# --------------------------------------------------------------- parsing


def test_walk_fixture_parses_to_one_category():
    doc = parse_spec_file(read("walk.cat"))
    assert doc.ok
    assert [s.kind for s in doc.sections] == ["category"]
    cat = doc.sections[0].value
    assert cat.n_objects == 2
    assert sum(1 for m in range(cat.n_morphisms) if not cat.is_identity_mor(m)) == 1


def test_broken_unit_fixture_parses_then_fails_semantically():
    doc = parse_spec_file(read("broken_unit.cat"))
    assert doc.ok
    report = validate_category(doc.sections[0].value)
    assert not report.ok
    assert not report.has_structural
    assert any("(u, id_a)" in r.witness for r in report.records)


def test_broken_syntax_fixture_collects_diagnostics():
    doc = parse_spec_file(read("broken_syntax.cat"))
    assert not doc.ok
    assert all(d.line >= 1 and d.col >= 1 for d in doc.diagnostics)


def test_errors_do_not_abort_other_sections():
    text = """
[category GOOD]
objects = a

[functor BADREF]
dom = GOOD
cod = MISSING

[category ALSOGOOD]
objects = b
"""
    doc = parse_spec_file(text)
    assert not doc.ok
    assert doc.get("GOOD").value is not None
    assert doc.get("ALSOGOOD").value is not None
    assert doc.get("BADREF").value is None
    assert any("MISSING" in d.message for d in doc.diagnostics)


def test_mu_line_recovers_finmap():
    text = """
[operad C]
arity 0 = e
arity 1 = e
arity 2 = e
arity 3 = e
unit = e
mu [2,1,1] e e e = e
"""
    doc = parse_spec_file(text)
    assert doc.ok
    op = doc.get("C").value
    key = (2, (2, 1, 1), "e", ("e", "e"))
    assert op.table[key] == "e"
    assert op.compose(FinMap(3, 2, (2, 1, 1)), "e", ("e", "e")) == "e"


def test_duplicate_names_are_diagnosed():
    text = """
[category A]
objects = x

[category A]
objects = y
"""
    doc = parse_spec_file(text)
    assert not doc.ok


def test_unknown_section_kind_is_diagnosed():
    doc = parse_spec_file("[widget W]\nobjects = a\n")
    assert not doc.ok
    assert any("unknown section kind" in d.message for d in doc.diagnostics)


def test_crlf_is_accepted():
    text = "[category C]\r\nobjects = a, b\r\nu : a -> b\r\n"
    doc = parse_spec_file(text)
    assert doc.ok
    assert doc.get("C").value.n_objects == 2


def test_nested_tuple_labels_tokenize():
    text = """
[category P]
objects = (a,b), (a,c)
m : (a,b) -> (a,c)
"""
    doc = parse_spec_file(text)
    assert doc.ok
    cat = doc.get("P").value
    assert cat.objects == ("(a,b)", "(a,c)")


def test_iset_section_builds_actions():
    text = """
[category L]
objects = 0, 1
le : 0 -> 1

[iset F]
index = L
set 0 = x1, x2
set 1 = y
map le x1 = y
map le x2 = y
"""
    doc = parse_spec_file(text)
    assert doc.ok
    F = doc.get("F").value
    assert validate_indexed_set(F).ok
    assert F.actions[F.index.mor_index("le")]("x1") == "y"


def test_incomplete_nu_table_is_diagnosed():
    base = read("grade.laxtoset")
    lines = [l for l in base.splitlines() if l != "nu [1,2] (0,0) (q,q) = q"]
    doc = parse_spec_file("\n".join(lines))
    assert not doc.ok
    assert any("incomplete nu table" in d.message for d in doc.diagnostics)


# --------------------------------------------------------------- round trips


@pytest.mark.parametrize(
    "name",
    [
        "walk.cat",
        "broken_unit.cat",
        "grade.laxtoset",
        "l2.laxtoset",
        "qconv.laxtoset",
        "corpus_small.spec",
        "corpus_omon.spec",
    ],
)
def test_pretty_print_round_trip(name):
    doc = parse_spec_file(read(name))
    assert doc.ok, [d.render() for d in doc.diagnostics][:3]
    text2 = pretty_print(doc)
    doc2 = parse_spec_file(text2)
    assert doc2.ok, [d.render() for d in doc2.diagnostics][:3]
    assert documents_table_equal(doc, doc2)


def test_serialized_fixtures_match_builders():
    from opgroth.ogroth import grade_laxtoset, omons_equal

    doc = parse_spec_file(read("grade.laxtoset"))
    parsed = doc.get("GRADE").value
    built = grade_laxtoset(3)
    assert omons_equal(parsed.dom, built.dom)
    assert parsed.iset == built.iset
    assert parsed.nu == built.nu


def test_corpus_small_matches_library_objects():
    from opgroth.groth import make_corpus

    doc = parse_spec_file(read("corpus_small.spec"))
    corpus = make_corpus()
    parsed_isets = [s.value for s in doc.by_kind("iset")]
    assert len(parsed_isets) == len(corpus.isets)
    for a, b in zip(parsed_isets, corpus.isets):
        assert a == b
    parsed_fibs = [s.value for s in doc.by_kind("fibration")]
    assert len(parsed_fibs) == len(corpus.fibrations)
    for a, b in zip(parsed_fibs, corpus.fibrations):
        assert a.proj == b.proj


def test_omon_serialization_round_trip_with_twists():
    from opgroth.omon import extend_unbiased_to_assoc, twisted_bz2_unbiased
    from opgroth.ogroth import omons_equal

    ext = extend_unbiased_to_assoc(twisted_bz2_unbiased(3))
    b = DocBuilder()
    ser_omon(b, ext, suggested="TWIST")
    doc = parse_spec_file(b.text())
    assert doc.ok, [d.render() for d in doc.diagnostics][:3]
    assert omons_equal(doc.get("TWIST").value, ext)
