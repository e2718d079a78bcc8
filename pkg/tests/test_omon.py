import itertools

import pytest

from opgroth import fixtures
from opgroth.fincore import FinMap, fm_compose, identity_map, terminal_map
from opgroth.operads import build_assoc, build_comm, composition_keys, terminal_morphism
from opgroth.omon import (
    LaxOMonFunctor,
    OMonTransformation,
    SetAlgebra,
    assoc_algebra_from_monoid,
    check_omon_category,
    check_lax_omon_functor,
    check_omon_transformation,
    check_set_algebra,
    check_strict_omon_iso,
    dz2_assoc_omon,
    extend_unbiased_to_assoc,
    forget_assoc_to_unbiased,
    grade_assoc_omon,
    l2_comm_omon,
    l2_unbiased,
    omon_copy,
    omon_from_set_algebra,
    omon_single_entry_mutations,
    product_omon,
    restrict_along_operad_morphism,
    twisted_bz2_unbiased,
    validate_unbiased,
    z2_unbiased,
)
from opgroth.fincore import identity_functor, identity_nat


# --------------------------------------------------------------- checkers


def test_dz2_assoc_structure_validates():
    report = check_omon_category(dz2_assoc_omon(3))
    assert report.ok


def test_l2_comm_structure_validates():
    assert check_omon_category(l2_comm_omon(3)).ok


def test_grade_structure_validates():
    assert check_omon_category(grade_assoc_omon(3)).ok


def test_phi_set_to_non_identity_fails():
    c = omon_copy(dz2_assoc_omon(2))
    p2 = c.operad.elements(2)[0]
    wrong = (c.tensor_obj(2, p2, (0, 0)) + 1) % 2
    c.phi[(terminal_map(2), c.operad.unit, (p2,), (0, 0))] = c.base.id_of(wrong)
    report = check_omon_category(c)
    assert not report.ok
    assert any("phi[f=[1,1]" in r.witness for r in report.records)


def test_all_shipped_mutations_fail_with_named_witness():
    for make in (lambda: dz2_assoc_omon(2), lambda: l2_comm_omon(2)):
        baseline = make()
        assert check_omon_category(baseline).ok
        for description, mutated, fragment in omon_single_entry_mutations(baseline):
            report = check_omon_category(mutated)
            assert not report.ok, description
            assert any(fragment in r.witness for r in report.records), description


def test_strict_checker_matches_algebra_oracle():
    # on a strict discrete structure the checker verdict must coincide
    # with a direct check of the algebra equations
    from opgroth.fincore import fiber

    assoc = build_assoc(2)
    good = assoc_algebra_from_monoid(fixtures.Z2_ELEMENTS, fixtures.Z2_ADD, "0", 2)
    bad_mult = dict(fixtures.Z2_ADD)
    bad_mult[("1", "1")] = "1"  # breaks associativity-with-units
    bad = assoc_algebra_from_monoid(fixtures.Z2_ELEMENTS, bad_mult, "0", 2)
    for alg in (good, bad):
        equations_hold = True
        for f, p, qs in composition_keys(assoc):
            rho = assoc.compose(f, p, qs)
            for xs in itertools.product(alg.carrier, repeat=f.source):
                blocks = tuple(
                    alg.apply(len(fiber(f, i)), qs[i - 1], tuple(xs[j - 1] for j in fiber(f, i)))
                    for i in range(1, f.target + 1)
                )
                if alg.apply(f.source, rho, xs) != alg.apply(f.target, p, blocks):
                    equations_hold = False
        for x in alg.carrier:
            if alg.apply(1, assoc.unit, (x,)) != x:
                equations_hold = False
        assert check_set_algebra(alg).ok == equations_hold
        if equations_hold:
            omon = omon_from_set_algebra(assoc, alg)
            assert check_omon_category(omon).ok == equations_hold
        else:
            with pytest.raises(ValueError):
                omon_from_set_algebra(assoc, alg)


# --------------------------------------------------------------- lax functors


def test_identity_lax_functor_is_strict():
    c = dz2_assoc_omon(2)
    L = LaxOMonFunctor(dom=c, cod=c, functor=identity_functor(c.base), xi={})
    report = check_lax_omon_functor(L)
    assert report.ok
    assert report.info["classification"] == "strict"


def test_omon_transformation_identity():
    c = dz2_assoc_omon(2)
    L = LaxOMonFunctor(dom=c, cod=c, functor=identity_functor(c.base), xi={})
    tr = OMonTransformation(dom=L, cod=L, t=identity_nat(L.functor))
    assert check_omon_transformation(tr).ok


def test_lax_functor_operad_mismatch_is_structural():
    c = dz2_assoc_omon(2)
    d = l2_comm_omon(2)
    L = LaxOMonFunctor(dom=c, cod=d, functor=identity_functor(c.base), xi={})
    report = check_lax_omon_functor(L)
    assert not report.ok
    assert report.has_structural


# --------------------------------------------------------------- restriction


def test_restrict_l2_along_terminal_assoc_morphism():
    l2 = l2_comm_omon(3)
    t = terminal_morphism(build_assoc(3))
    restricted = restrict_along_operad_morphism(t, l2)
    assert restricted.operad.name.startswith("Assoc")
    assert check_omon_category(restricted).ok


def test_restrict_along_identity_is_identity():
    from opgroth.operads import identity_operad_morphism

    c = dz2_assoc_omon(2)
    h = identity_operad_morphism(c.operad)
    restricted = restrict_along_operad_morphism(h, c)
    assert {k: (t.obj, t.mor) for k, t in restricted.tensors.items()} == {
        k: (t.obj, t.mor) for k, t in c.tensors.items()
    }
    assert restricted.phi == c.phi


def test_restricted_twisted_structure_revalidates():
    ext = extend_unbiased_to_assoc(twisted_bz2_unbiased(3))
    from opgroth.operads import identity_operad_morphism

    h = identity_operad_morphism(ext.operad)
    restricted = restrict_along_operad_morphism(h, ext)
    assert check_omon_category(restricted).ok


def test_restriction_preserves_validity_on_lax_cells():
    # pull the meet structure and a lax endofunctor back along the
    # terminal morphism from the permutation operad
    l2 = l2_comm_omon(3)
    base = l2.base
    from opgroth.fincore import functor_from_labels

    const1 = functor_from_labels(base, base, {"0": "1", "1": "1"}, {"le_0_1": "id_1"})
    xi = {}
    for n in range(4):
        for objs in itertools.product(range(2), repeat=n):
            src = l2.tensor_obj(n, "*", tuple(1 for _ in objs))
            tgt = 1
            if src != tgt:
                xi[(n, "*", objs)] = base.mor_index("le_0_1")
    L = LaxOMonFunctor(dom=l2, cod=l2, functor=const1, xi=xi)
    assert check_lax_omon_functor(L).ok
    t = terminal_morphism(build_assoc(3))
    restricted = restrict_along_operad_morphism(t, L)
    assert check_lax_omon_functor(restricted).ok


# --------------------------------------------------------------- unbiased


def test_unbiased_fixtures_validate():
    assert validate_unbiased(z2_unbiased(3)).ok
    assert validate_unbiased(l2_unbiased(3)).ok
    assert validate_unbiased(twisted_bz2_unbiased(3)).ok


def test_twisted_fixture_has_nontrivial_structure():
    tw = twisted_bz2_unbiased(3)
    assert tw.alpha  # genuinely non-identity isomorphisms


def test_extend_outputs_pass_checker():
    for u in (z2_unbiased(3), l2_unbiased(3), twisted_bz2_unbiased(3)):
        ext = extend_unbiased_to_assoc(u)
        assert check_omon_category(ext).ok


def test_forget_extend_is_identity_on_tables():
    for u in (z2_unbiased(3), l2_unbiased(3), twisted_bz2_unbiased(3)):
        ext = extend_unbiased_to_assoc(u)
        back = forget_assoc_to_unbiased(ext)
        assert back.tensors == u.tensors
        assert back.alpha == u.alpha


def test_forget_on_dz2_recovers_xor():
    u = forget_assoc_to_unbiased(dz2_assoc_omon(3))
    z2 = z2_unbiased(3)
    assert u.tensors == z2.tensors
    assert u.alpha == z2.alpha


def test_extend_requires_unit_tensor():
    u = z2_unbiased(2)
    broken = dict(u.tensors)
    from opgroth.omon import TensorTable

    broken[1] = TensorTable(obj={(0,): 1, (1,): 0}, mor={(0,): 1, (1,): 0})
    bad = type(u)(base=u.base, max_arity=2, tensors=broken, alpha={}, name="bad")
    with pytest.raises(ValueError):
        extend_unbiased_to_assoc(bad)


def test_phi_value_independent_of_factorization():
    # phi over any factorization f = g.h with g monotone must agree with
    # the shipped closed form
    tw = twisted_bz2_unbiased(3)
    ext = extend_unbiased_to_assoc(tw)
    from opgroth.fincore import all_maps, all_permutations

    for m in range(4):
        for n in range(4):
            for f in all_maps(m, n):
                for h in all_permutations(m):
                    g_values = [0] * m
                    for j in range(1, m + 1):
                        g_values[h(j) - 1] = f(j)
                    g = FinMap(m, n, tuple(g_values))
                    if not g.is_monotone:
                        continue
                    # phi_f = phi_g at the h-permuted tuple, for any h
                    for p, qs in [(ext.operad.elements(n)[0], tuple(ext.operad.elements(len([j for j in range(1, m+1) if f(j) == i]))[0] for i in range(1, n+1)))]:
                        objs = (0,) * m
                        try:
                            lhs = ext.phi_at(f, p, qs, objs)
                            rhs = ext.phi_at(g, p, qs, objs)
                        except Exception:
                            continue
                        assert lhs == rhs


def test_unbiased_alpha_corruption_detected():
    tw = twisted_bz2_unbiased(3)
    key = next(iter(tw.alpha))
    broken_alpha = dict(tw.alpha)
    del broken_alpha[key]
    bad = type(tw)(
        base=tw.base, max_arity=3, tensors=tw.tensors, alpha=broken_alpha, name="bad"
    )
    assert not validate_unbiased(bad).ok


# --------------------------------------------------------------- products, isos


def test_product_omon_validates():
    c = dz2_assoc_omon(2)
    prod = product_omon(c, c)
    assert check_omon_category(prod).ok
    assert prod.base.n_objects == 4


def test_strict_iso_between_equal_structures():
    c1 = dz2_assoc_omon(2)
    c2 = dz2_assoc_omon(2)
    assert check_strict_omon_iso(c1, c2, identity_functor(c1.base)).ok


def test_strict_iso_detects_structure_mismatch():
    c1 = dz2_assoc_omon(2)
    c2 = omon_copy(c1)
    p2 = c2.operad.elements(2)[0]
    c2.tensors[(2, p2)].obj[(1, 1)] = 1
    c2.tensors[(2, p2)].mor[(1, 1)] = 1
    report = check_strict_omon_iso(c1, c2, identity_functor(c1.base))
    assert not report.ok


def test_structural_set_restricts_to_itself():
    from opgroth.omon import STRUCTURAL_SET

    t = terminal_morphism(build_assoc(3))
    assert restrict_along_operad_morphism(t, STRUCTURAL_SET) is STRUCTURAL_SET


def test_extend_after_forget_recovers_permutation_entries():
    # on a structure already satisfying the permutation law, the
    # translation round trip is a full table identity
    for make in (dz2_assoc_omon, grade_assoc_omon):
        c = make(3)
        back = extend_unbiased_to_assoc(forget_assoc_to_unbiased(c))
        assert {k: (t.obj, t.mor) for k, t in back.tensors.items()} == {
            k: (t.obj, t.mor) for k, t in c.tensors.items()
        }
        assert back.phi == c.phi
    tw = extend_unbiased_to_assoc(twisted_bz2_unbiased(3))
    back = extend_unbiased_to_assoc(forget_assoc_to_unbiased(tw))
    assert back.phi == tw.phi
