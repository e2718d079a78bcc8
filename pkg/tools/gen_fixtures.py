"""Regenerate the shipped fixture files from the programmatic builders.

Run from the repository root:  python3 tools/gen_fixtures.py
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from opgroth import fixtures  # noqa: E402
from opgroth.dsl import (  # noqa: E402
    DocBuilder,
    parse_spec_file,
    ser_category,
    ser_fibration,
    ser_iset,
    ser_laxtoset,
    ser_ofib,
    ser_omon,
)
from opgroth.groth import make_corpus  # noqa: E402
from opgroth.ogroth import (  # noqa: E402
    grade_laxtoset,
    identity_ofib,
    l2_laxtoset,
    make_o_corpus,
    omon_groth,
    qconv_proj_laxtoset,
    trivial_laxtoset,
)

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

BROKEN_SYNTAX = """\
# deliberately malformed: unbalanced group and a stray line
[category BAD
objects = a, b
this line has no meaning
u : a -> (b
"""

INCOMPLETE = """\
# chain without the required composite entry: structurally incomplete
[category CHAIN]
objects = a, b, c
u : a -> b
v : b -> c
"""


def write(name: str, text: str) -> None:
    path = FIXTURES / name
    path.write_text(text, encoding="utf-8")
    print(f"wrote {path.relative_to(ROOT)} ({len(text.splitlines())} lines)")


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)

    b = DocBuilder()
    ser_category(b, fixtures.walk(), suggested="WALK")
    write("walk.cat", b.text())

    broken = b.text() + "\n# redirected unit composite\n"
    broken = broken.replace(
        "u : a -> b\n", "u : a -> b\ncompose u id_a = id_b\n"
    )
    write("broken_unit.cat", broken)

    write("broken_syntax.cat", BROKEN_SYNTAX)
    write("incomplete.cat", INCOMPLETE)

    for maker, name, out in (
        (grade_laxtoset, "GRADE", "grade.laxtoset"),
        (l2_laxtoset, "L2FAM", "l2.laxtoset"),
        (qconv_proj_laxtoset, "QPROJ", "qconv.laxtoset"),
    ):
        b = DocBuilder()
        ser_laxtoset(b, maker(3), suggested=name)
        write(out, b.text())

    corpus = make_corpus()
    b = DocBuilder()
    for k, iset in enumerate(corpus.isets):
        ser_iset(b, iset, suggested=iset.name or f"F{k}")
    for k, fib in enumerate(corpus.fibrations):
        ser_fibration(b, fib, suggested=fib.name or f"P{k}")
    text = b.text()
    doc = parse_spec_file(text)
    assert doc.ok, [d.render() for d in doc.diagnostics][:5]
    write("corpus_small.spec", text)

    grade = grade_laxtoset(3)
    l2 = l2_laxtoset(3)
    qproj = qconv_proj_laxtoset(3)
    b = DocBuilder()
    ser_laxtoset(b, grade, suggested="GRADE")
    ser_laxtoset(b, trivial_laxtoset(grade.dom, name="TRIVDZ2"), suggested="TRIVDZ2")
    ser_laxtoset(b, l2, suggested="L2FAM")
    ser_laxtoset(b, trivial_laxtoset(l2.dom, name="TRIVL2"), suggested="TRIVL2")
    ser_laxtoset(b, qproj, suggested="QPROJ")
    ser_ofib(b, omon_groth(grade), suggested="INTGRADE")
    ser_ofib(b, identity_ofib(l2.dom, name="IDL2"), suggested="IDL2")
    text = b.text()
    doc = parse_spec_file(text)
    assert doc.ok, [d.render() for d in doc.diagnostics][:5]
    write("corpus_omon.spec", text)


if __name__ == "__main__":
    main()
