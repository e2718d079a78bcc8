import itertools
import random

import pytest

from opgroth.fincore import FinMap, identity_map, terminal_map
from opgroth.operads import (
    CompositionUndefined,
    Operad,
    boolean_semiring,
    build_assoc,
    build_comm,
    build_qconv,
    check_operad_axioms,
    check_operad_morphism,
    check_semiring,
    identity_operad_morphism,
    terminal_morphism,
    with_overrides,
)

# ---------------------------------------------------------------------------
# independent oracle: its own loop nest, no helpers shared with the package


def _maps(m, n):
    if m == 0:
        return [()]
    if n == 0:
        return []
    return list(itertools.product(range(1, n + 1), repeat=m))


def _fibers(values, n):
    return [
        [j for j in range(1, len(values) + 1) if values[j - 1] == i]
        for i in range(1, n + 1)
    ]


def oracle_operad(o: Operad):
    """Naive re-check of all unit and associativity instances.

    Returns (verdict, counts) where counts mirror the checker's stats keys.
    """
    N = o.max_arity
    ok = True
    counts = {"unit_id": 0, "unit_t": 0, "assoc": 0}
    for n in range(N + 1):
        for p in o.carriers[n]:
            counts["unit_id"] += 1
            if o.compose(FinMap(n, n, tuple(range(1, n + 1))), p, (o.unit,) * n) != p:
                ok = False
            counts["unit_t"] += 1
            if o.compose(FinMap(n, 1, (1,) * n), o.unit, (p,)) != p:
                ok = False
    for n in range(N + 1):
        for m in range(N + 1):
            for fv in _maps(m, n):
                f_fibs = _fibers(fv, n)
                for ell in range(N + 1):
                    for gv in _maps(ell, m):
                        g_fibs = _fibers(gv, m)
                        fgv = tuple(fv[gv[k] - 1] for k in range(ell))
                        fg_fibs = _fibers(fgv, n)
                        for p in o.carriers[n]:
                            inner_f = [o.carriers[len(fb)] for fb in f_fibs]
                            inner_g = [o.carriers[len(gb)] for gb in g_fibs]
                            for qs in itertools.product(*inner_f):
                                for rs in itertools.product(*inner_g):
                                    counts["assoc"] += 1
                                    f = FinMap(m, n, tuple(fv))
                                    g = FinMap(ell, m, tuple(gv))
                                    lhs = o.compose(g, o.compose(f, p, qs), rs)
                                    nested = []
                                    for i in range(1, n + 1):
                                        src_fib = fg_fibs[i - 1]
                                        tgt_fib = f_fibs[i - 1]
                                        gi = FinMap(
                                            len(src_fib),
                                            len(tgt_fib),
                                            tuple(
                                                tgt_fib.index(gv[j - 1]) + 1
                                                for j in src_fib
                                            ),
                                        )
                                        nested.append(
                                            o.compose(
                                                gi,
                                                qs[i - 1],
                                                tuple(rs[j - 1] for j in tgt_fib),
                                            )
                                        )
                                    rhs = o.compose(
                                        FinMap(ell, n, fgv), p, tuple(nested)
                                    )
                                    if lhs != rhs:
                                        ok = False
    return ok, counts


def expected_instance_counts(o: Operad):
    """Combinatorial instance counts from carrier sizes alone."""
    N = o.max_arity
    sizes = [len(c) for c in o.carriers]
    unit = sum(sizes[n] for n in range(N + 1))
    assoc = 0
    for n in range(N + 1):
        for m in range(N + 1):
            for fv in _maps(m, n):
                wf = sizes[n]
                for fb in _fibers(fv, n):
                    wf *= sizes[len(fb)]
                for ell in range(N + 1):
                    for gv in _maps(ell, m):
                        wg = 1
                        for gb in _fibers(gv, m):
                            wg *= sizes[len(gb)]
                        assoc += wf * wg
    return {"unit_id": unit, "unit_t": unit, "assoc": assoc}


ETA = "[1]"
SWAP = "[2,1]"
ID2 = "[1,2]"


# ---------------------------------------------------------------------------
# builtins


def test_comm_carriers_and_axioms():
    comm = build_comm(2)
    assert [len(c) for c in comm.carriers] == [1, 1, 1]
    assert comm.compose(FinMap(2, 2, (2, 1)), "*", ("*", "*")) == "*"
    assert build_comm(3).compose(FinMap(3, 2, (2, 1, 1)), "*", ("*", "*")) == "*"
    assert check_operad_axioms(build_comm(4)).ok


def test_assoc_carrier_sizes():
    assoc = build_assoc(3)
    assert [len(c) for c in assoc.carriers] == [1, 1, 2, 6]


def test_assoc_unit_compositions():
    assoc = build_assoc(3)
    assert assoc.compose(identity_map(2), SWAP, (ETA, ETA)) == SWAP
    assert assoc.compose(terminal_map(2), ETA, (SWAP,)) == SWAP


def test_assoc_axioms_exhaustive():
    report = check_operad_axioms(build_assoc(3))
    assert report.ok


def test_broken_unit_detected():
    assoc = build_assoc(3)
    broken = with_overrides(assoc, {(terminal_map(2), ETA, (SWAP,)): ID2})
    report = check_operad_axioms(broken)
    assert not report.ok
    assert any(r.check == "operad.unit_terminal" for r in report.records)


def test_qconv_boolean_carriers():
    q = build_qconv(boolean_semiring(), 3)
    assert len(q.carriers[0]) == 0
    assert sorted(q.carriers[2]) == ["(0,1)", "(1,0)", "(1,1)"]
    assert q.compose(identity_map(2), "(1,1)", ("(1)", "(1)")) == "(1,1)"
    assert check_operad_axioms(q).ok


def test_qconv_rejects_missing_inner_elements():
    q = build_qconv(boolean_semiring(), 2)
    # the map [1,1]: 2 -> 2 has an empty second fiber; no inner vector exists
    with pytest.raises(CompositionUndefined):
        q.compose(FinMap(2, 2, (1, 1)), "(1,1)", ("(1,1)", "()"))


def test_boolean_semiring_validates():
    assert check_semiring(boolean_semiring()).ok


def test_broken_semiring_detected():
    r = boolean_semiring()
    r.mul[("1", "1")] = "0"
    report = check_semiring(r)
    assert not report.ok


# ---------------------------------------------------------------------------
# checker vs oracle


@pytest.mark.parametrize(
    "make",
    [
        lambda: build_comm(3),
        lambda: build_assoc(3),
        lambda: build_qconv(boolean_semiring(), 3),
    ],
    ids=["comm", "assoc", "qconv"],
)
def test_checker_agrees_with_oracle_on_builtins(make):
    o = make()
    report = check_operad_axioms(o)
    ok, counts = oracle_operad(o)
    assert report.ok == ok
    assert report.stats["operad.assoc_instances"] == counts["assoc"]
    assert report.stats["operad.unit_identity_instances"] == counts["unit_id"]
    assert report.stats["operad.unit_terminal_instances"] == counts["unit_t"]
    assert counts == expected_instance_counts(o)


def test_checker_agrees_with_oracle_on_corrupted_variants():
    assoc = build_assoc(3)
    corruptions = [
        {(terminal_map(2), ETA, (SWAP,)): ID2},
        {(identity_map(2), SWAP, (ETA, ETA)): ID2},
        {(FinMap(2, 2, (2, 1)), ID2, (ETA, ETA)): ID2},
        {(FinMap(3, 2, (1, 1, 2)), SWAP, (SWAP, ETA)): "[1,2,3]"},
    ]
    for overrides in corruptions:
        broken = with_overrides(assoc, overrides)
        report = check_operad_axioms(broken)
        ok, _ = oracle_operad(broken)
        assert report.ok == ok
        assert not report.ok


def test_assoc4_sampled_associativity():
    # exhaustive at 4 is factorially large; fixed-seed sample instead
    assoc = build_assoc(4)
    rng = random.Random(74114)
    for _ in range(10_000):
        n = rng.randint(1, 4)
        m = rng.randint(1, 4)
        ell = rng.randint(1, 4)
        f = FinMap(m, n, tuple(rng.randint(1, n) for _ in range(m)))
        g = FinMap(ell, m, tuple(rng.randint(1, m) for _ in range(ell)))
        p = rng.choice(assoc.carriers[n])
        qs = tuple(
            rng.choice(assoc.carriers[len([j for j in range(1, m + 1) if f(j) == i])])
            for i in range(1, n + 1)
        )
        rs = tuple(
            rng.choice(assoc.carriers[len([k for k in range(1, ell + 1) if g(k) == j])])
            for j in range(1, m + 1)
        )
        lhs = assoc.compose(g, assoc.compose(f, p, qs), rs)
        from opgroth.fincore import fiber, fm_compose, induced_fiber_map

        nested = tuple(
            assoc.compose(
                induced_fiber_map(f, g, i),
                qs[i - 1],
                tuple(rs[j - 1] for j in fiber(f, i)),
            )
            for i in range(1, n + 1)
        )
        assert lhs == assoc.compose(fm_compose(f, g), p, nested)


# ---------------------------------------------------------------------------
# morphisms


def test_terminal_morphism_validates():
    for o in (build_assoc(3), build_qconv(boolean_semiring(), 3), build_comm(3)):
        assert check_operad_morphism(terminal_morphism(o)).ok


def test_identity_morphism_validates():
    q = build_qconv(boolean_semiring(), 3)
    assert check_operad_morphism(identity_operad_morphism(q)).ok


def test_collapsing_swap_breaks_preservation():
    assoc = build_assoc(3)
    h = identity_operad_morphism(assoc)
    maps = list(h.maps)
    maps[2] = {ID2: ID2, SWAP: ID2}
    h = type(h)(dom=assoc, cod=assoc, maps=tuple(maps))
    report = check_operad_morphism(h)
    assert not report.ok
    assert any(r.check == "opmorphism.composition" for r in report.records)
