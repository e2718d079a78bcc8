"""The operadic Grothendieck construction: from lax structured functors
into (Set, x) to strict structured projections that are discrete
fibrations, and back.

The total structure is induced by the classical construction: tensors
pair the index tensor with the comparison function, structure
isomorphisms are the unique lifts of the base ones.  Lifts are always
re-verified, never trusted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .fincore import (
    CatFunctor,
    FinMap,
    NatTransform,
    all_functors,
    all_nat_transforms,
    functor_compose,
    identity_functor,
    identity_nat,
    validate_natural_transformation,
)
from .fib2cat import (
    DFib2Cell,
    DFibCell,
    DiscreteFibration,
    FinFunction,
    FinSet,
    ISet2Cell,
    ISetCell,
    IndexedSet,
    fn_compose,
    fn_identity,
    identity_fibration,
    iset_from_tables,
    set_product,
    validate_iset_cell,
)
from .groth import _groth_cell, _groth_object, _pair_offsets, groth_apply, phi_component, phi_inverse, transpose_apply
from .omon import (
    LaxOMonFunctor,
    LaxSetFunctor,
    OMonCategory,
    PhiMissing,
    SetAlgebra,
    TensorTable,
    _check_set_lax,
    _check_table_lax,
    _fn_product_aligned,
    _mixed_decode,
    _mixed_encode,
    o_fn_product,
    o_set_product,
    build_assoc,
    check_omon_category,
    check_lax_omon_functor,
    dz2_assoc_omon,
    l2_comm_omon,
    nu_key_render,
    omon_from_set_algebra,
    product_omon,
    xi_key_render,
)
from .operads import boolean_semiring, build_qconv, composition_keys, identity_operad_morphism, operads_equal, terminal_morphism
from .report import CheckReport, require_ok

LaxToSet = LaxSetFunctor


def check_laxtoset(x: LaxSetFunctor) -> CheckReport:
    """Validate the index structure, the indexed set, and the lax
    comparison data as one object."""
    report = CheckReport()
    report.merge(check_omon_category(x.dom), where=x.dom.name or "index")
    if not report.ok:
        return report
    report.merge(_check_set_lax(x), where=x.name or "laxtoset")
    return report


# --------------------------------------------------------------------------
# objects


@dataclass
class OFibObject:
    fib: DiscreteFibration
    total_omon: OMonCategory
    base_omon: OMonCategory
    name: str = ""


def identity_ofib(c: OMonCategory, name: str = "") -> OFibObject:
    return OFibObject(
        fib=identity_fibration(c.base, name=name or f"id[{c.name}]"),
        total_omon=c,
        base_omon=c,
        name=name or f"id[{c.name}]",
    )


def omons_equal(a: OMonCategory, b: OMonCategory) -> bool:
    return (
        operads_equal(a.operad, b.operad)
        and a.base == b.base
        and {k: (t.obj, t.mor) for k, t in a.tensors.items()}
        == {k: (t.obj, t.mor) for k, t in b.tensors.items()}
        and a.phi == b.phi
    )


def check_ofib_object(x: OFibObject, _omon_cache: dict | None = None) -> CheckReport:
    from .fib2cat import check_discrete_fibration

    report = CheckReport()
    where = x.name or "ofib"
    if not operads_equal(x.total_omon.operad, x.base_omon.operad):
        report.structural("ofib.operad", "total and base live over different operads", where)
        return report
    if x.fib.total != x.total_omon.base or x.fib.base != x.base_omon.base:
        report.structural("ofib.frame", "projection frame mismatch", where)
        return report
    report.merge(check_discrete_fibration(x.fib), where=where)
    cache = _omon_cache if _omon_cache is not None else {}
    for tag, omon in (("total", x.total_omon), ("base", x.base_omon)):
        key = id(omon)
        if key not in cache:
            cache[key] = check_omon_category(omon)
        report.merge(cache[key], where=f"{where}:{tag}")
    if not report.ok:
        return report

    proj = x.fib.proj
    operad = x.total_omon.operad
    total, base = x.total_omon, x.base_omon
    for n in range(operad.max_arity + 1):
        for p in operad.elements(n):
            for combo in itertools.product(range(x.fib.total.n_objects), repeat=n):
                report.count("ofib.strictness_instances")
                if proj.on_obj[total.tensor_obj(n, p, combo)] != base.tensor_obj(
                    n, p, tuple(proj.on_obj[a] for a in combo)
                ):
                    report.violation(
                        "ofib.strict_tensor",
                        f"tensor[p={p}] not strictly preserved at "
                        f"({','.join(x.fib.total.objects[a] for a in combo)})",
                        where,
                    )
            for combo in itertools.product(range(x.fib.total.n_morphisms), repeat=n):
                report.count("ofib.strictness_instances")
                if proj.on_mor[total.tensor_mor(n, p, combo)] != base.tensor_mor(
                    n, p, tuple(proj.on_mor[m] for m in combo)
                ):
                    report.violation(
                        "ofib.strict_tensor",
                        f"tensor[p={p}] morphism entry not strictly preserved",
                        where,
                    )
    for f, p, qs in composition_keys(operad):
        for combo in itertools.product(range(x.fib.total.n_objects), repeat=f.source):
            report.count("ofib.strictness_instances")
            try:
                top = total.phi_at(f, p, qs, combo)
                bottom = base.phi_at(f, p, qs, tuple(proj.on_obj[a] for a in combo))
            except (PhiMissing, KeyError) as exc:
                report.violation("ofib.phi_missing", str(exc), where)
                continue
            if proj.on_mor[top] != bottom:
                report.violation(
                    "ofib.strict_phi",
                    f"phi[f={f.label()},p={p}] not strictly preserved at "
                    f"({','.join(x.fib.total.objects[a] for a in combo)})",
                    where,
                )
    return report


# --------------------------------------------------------------------------
# 1-cells and 2-cells


def _normalize_xi(endpoints, entries) -> dict:
    """Drop entries that coincide with the identity default."""
    out = {}
    for key, value in entries.items():
        src, tgt, base = endpoints(key)
        if src == tgt and value == base.id_of(src):
            continue
        out[key] = value
    return out


@dataclass
class OCell:
    dom: LaxSetFunctor
    cod: LaxSetFunctor
    functor: CatFunctor
    xi: dict = field(default_factory=dict)
    mu: tuple = ()
    name: str = ""

    def index_lax(self) -> LaxOMonFunctor:
        return LaxOMonFunctor(
            dom=self.dom.dom, cod=self.cod.dom, functor=self.functor, xi=self.xi
        )

    def iset_cell(self) -> ISetCell:
        return ISetCell(self.dom.iset, self.cod.iset, self.functor, self.mu)


def identity_ocell(x: LaxSetFunctor) -> OCell:
    return OCell(
        dom=x,
        cod=x,
        functor=identity_functor(x.dom.base),
        xi={},
        mu=tuple(fn_identity(x.iset.values[a]) for a in range(x.dom.base.n_objects)),
    )


def check_ocell(c: OCell) -> CheckReport:
    report = CheckReport()
    where = c.name or "ocell"
    lax = c.index_lax()
    report.merge(_check_table_lax(lax), where=f"{where}:index")
    report.merge(validate_iset_cell(c.iset_cell()), where=f"{where}:iset")
    if not report.ok:
        return report
    x, y = c.dom, c.cod
    operad = x.dom.operad
    G = y.iset
    for n in range(operad.max_arity + 1):
        for p in operad.elements(n):
            for objs in itertools.product(range(x.dom.base.n_objects), repeat=n):
                report.count("ocell.square_instances")
                try:
                    lhs = fn_compose(
                        c.mu[x.dom.tensor_obj(n, p, objs)], x.nu_at(n, p, objs)
                    )
                    rhs = fn_compose(
                        G.actions[lax.xi_at(n, p, objs)],
                        fn_compose(
                            y.nu_at(n, p, tuple(c.functor.on_obj[a] for a in objs)),
                            o_fn_product(tuple(c.mu[a] for a in objs)),
                        ),
                    )
                except (PhiMissing, ValueError, KeyError) as exc:
                    report.violation("ocell.missing", str(exc), where)
                    continue
                if lhs != rhs:
                    report.violation(
                        "ocell.square",
                        "comparison square fails at "
                        + nu_key_render(p, [x.dom.base.objects[a] for a in objs]),
                        where,
                    )
    return report


def ocell_compose(c2: OCell, c1: OCell) -> OCell:
    if c1.cod is not c2.dom and not (
        omons_equal(c1.cod.dom, c2.dom.dom) and c1.cod.iset == c2.dom.iset
    ):
        raise ValueError("cells not composable")
    functor = functor_compose(c2.functor, c1.functor)
    operad = c1.dom.dom.operad
    base = c2.cod.dom.base
    lax1, lax2 = c1.index_lax(), c2.index_lax()
    entries = {}
    for n in range(operad.max_arity + 1):
        for p in operad.elements(n):
            for objs in itertools.product(range(c1.dom.dom.base.n_objects), repeat=n):
                image = tuple(c1.functor.on_obj[a] for a in objs)
                value = base.compose(
                    c2.functor.on_mor[lax1.xi_at(n, p, objs)],
                    lax2.xi_at(n, p, image),
                )
                entries[(n, p, objs)] = value

    def endpoints(key):
        n, p, objs = key
        src = c2.cod.dom.tensor_obj(n, p, tuple(functor.on_obj[a] for a in objs))
        tgt = functor.on_obj[c1.dom.dom.tensor_obj(n, p, objs)]
        return src, tgt, base

    mu = tuple(
        fn_compose(c2.mu[c1.functor.on_obj[a]], c1.mu[a])
        for a in range(c1.dom.dom.base.n_objects)
    )
    return OCell(
        dom=c1.dom,
        cod=c2.cod,
        functor=functor,
        xi=_normalize_xi(endpoints, entries),
        mu=mu,
    )


@dataclass
class OFibCell:
    dom: OFibObject
    cod: OFibObject
    top: CatFunctor
    bottom: CatFunctor
    xi_top: dict = field(default_factory=dict)
    xi_bottom: dict = field(default_factory=dict)
    name: str = ""

    def top_lax(self) -> LaxOMonFunctor:
        return LaxOMonFunctor(
            dom=self.dom.total_omon, cod=self.cod.total_omon,
            functor=self.top, xi=self.xi_top,
        )

    def bottom_lax(self) -> LaxOMonFunctor:
        return LaxOMonFunctor(
            dom=self.dom.base_omon, cod=self.cod.base_omon,
            functor=self.bottom, xi=self.xi_bottom,
        )

    def dfib_cell(self) -> DFibCell:
        return DFibCell(self.dom.fib, self.cod.fib, self.top, self.bottom)


def identity_ofib_cell(x: OFibObject) -> OFibCell:
    return OFibCell(
        dom=x,
        cod=x,
        top=identity_functor(x.fib.total),
        bottom=identity_functor(x.fib.base),
    )


def check_ofib_cell(c: OFibCell) -> CheckReport:
    from .fib2cat import validate_dfib_cell

    report = CheckReport()
    where = c.name or "ofibcell"
    report.merge(validate_dfib_cell(c.dfib_cell()), where=f"{where}:square")
    report.merge(_check_table_lax(c.top_lax()), where=f"{where}:top")
    report.merge(_check_table_lax(c.bottom_lax()), where=f"{where}:bottom")
    if not report.ok:
        return report
    # the comparison 2-morphisms must strictly commute with the projections
    operad = c.dom.total_omon.operad
    proj = c.cod.fib.proj
    top, bottom = c.top_lax(), c.bottom_lax()
    for n in range(operad.max_arity + 1):
        for p in operad.elements(n):
            for combo in itertools.product(range(c.dom.fib.total.n_objects), repeat=n):
                report.count("ofibcell.strict_instances")
                try:
                    up = top.xi_at(n, p, combo)
                    down = bottom.xi_at(
                        n, p, tuple(c.dom.fib.proj.on_obj[a] for a in combo)
                    )
                except (PhiMissing, KeyError) as exc:
                    report.violation("ofibcell.missing", str(exc), where)
                    continue
                if proj.on_mor[up] != down:
                    report.violation(
                        "ofibcell.strict_xi",
                        xi_key_render(p, [c.dom.fib.total.objects[a] for a in combo])
                        + " does not commute with the projections",
                        where,
                    )
    return report


def ofib_cell_compose(c2: OFibCell, c1: OFibCell) -> OFibCell:
    top = functor_compose(c2.top, c1.top)
    bottom = functor_compose(c2.bottom, c1.bottom)
    operad = c1.dom.total_omon.operad

    def composite_xi(lax1, lax2, functor1, cod_omon, dom_base_n):
        base = cod_omon.base
        entries = {}
        for n in range(operad.max_arity + 1):
            for p in operad.elements(n):
                for objs in itertools.product(range(dom_base_n), repeat=n):
                    image = tuple(functor1.on_obj[a] for a in objs)
                    entries[(n, p, objs)] = base.compose(
                        lax2.functor.on_mor[lax1.xi_at(n, p, objs)],
                        lax2.xi_at(n, p, image),
                    )
        return entries

    lax_t1, lax_t2 = c1.top_lax(), c2.top_lax()
    lax_b1, lax_b2 = c1.bottom_lax(), c2.bottom_lax()
    top_entries = composite_xi(
        lax_t1, lax_t2, c1.top, c2.cod.total_omon, c1.dom.fib.total.n_objects
    )
    bottom_entries = composite_xi(
        lax_b1, lax_b2, c1.bottom, c2.cod.base_omon, c1.dom.fib.base.n_objects
    )

    def endpoints_for(cod_omon, dom_omon, functor):
        def endpoints(key):
            n, p, objs = key
            src = cod_omon.tensor_obj(n, p, tuple(functor.on_obj[a] for a in objs))
            tgt = functor.on_obj[dom_omon.tensor_obj(n, p, objs)]
            return src, tgt, cod_omon.base

        return endpoints

    return OFibCell(
        dom=c1.dom,
        cod=c2.cod,
        top=top,
        bottom=bottom,
        xi_top=_normalize_xi(
            endpoints_for(c2.cod.total_omon, c1.dom.total_omon, top), top_entries
        ),
        xi_bottom=_normalize_xi(
            endpoints_for(c2.cod.base_omon, c1.dom.base_omon, bottom), bottom_entries
        ),
    )


@dataclass
class O2Cell:
    dom: OCell
    cod: OCell
    eta: NatTransform
    name: str = ""


def check_o2cell(e: O2Cell) -> CheckReport:
    report = CheckReport()
    where = e.name or "o2cell"
    report.merge(
        validate_iset_cell(ISet2Cell(e.dom.iset_cell(), e.cod.iset_cell(), e.eta)),
        where=f"{where}:iset",
    )
    if not report.ok:
        return report
    # the transformation must respect the comparison structure of both cells
    dom_omon = e.dom.dom.dom
    cod_omon = e.dom.cod.dom
    base = cod_omon.base
    operad = dom_omon.operad
    lax1, lax2 = e.dom.index_lax(), e.cod.index_lax()
    for n in range(operad.max_arity + 1):
        for p in operad.elements(n):
            for objs in itertools.product(range(dom_omon.base.n_objects), repeat=n):
                report.count("o2cell.square_instances")
                try:
                    lhs = base.compose(
                        e.eta.components[dom_omon.tensor_obj(n, p, objs)],
                        lax1.xi_at(n, p, objs),
                    )
                    rhs = base.compose(
                        lax2.xi_at(n, p, objs),
                        cod_omon.tensor_mor(
                            n, p, tuple(e.eta.components[a] for a in objs)
                        ),
                    )
                except (PhiMissing, KeyError) as exc:
                    report.violation("o2cell.missing", str(exc), where)
                    continue
                if lhs != rhs:
                    report.violation(
                        "o2cell.square",
                        "transformation square fails at "
                        + xi_key_render(p, [dom_omon.base.objects[a] for a in objs]),
                        where,
                    )
    return report


@dataclass
class OFib2Cell:
    dom: OFibCell
    cod: OFibCell
    top: NatTransform
    bottom: NatTransform
    name: str = ""


def check_ofib_2cell(e: OFib2Cell) -> CheckReport:
    from .fib2cat import validate_dfib_cell

    report = CheckReport()
    where = e.name or "ofib2cell"
    report.merge(
        validate_dfib_cell(
            DFib2Cell(e.dom.dfib_cell(), e.cod.dfib_cell(), e.top, e.bottom)
        ),
        where=f"{where}:square",
    )
    if not report.ok:
        return report

    def montrans_square(lax1, lax2, t, omon_dom, omon_cod, tag):
        base = omon_cod.base
        operad = omon_dom.operad
        for n in range(operad.max_arity + 1):
            for p in operad.elements(n):
                for objs in itertools.product(range(omon_dom.base.n_objects), repeat=n):
                    report.count("ofib2cell.square_instances")
                    try:
                        lhs = base.compose(
                            t.components[omon_dom.tensor_obj(n, p, objs)],
                            lax1.xi_at(n, p, objs),
                        )
                        rhs = base.compose(
                            lax2.xi_at(n, p, objs),
                            omon_cod.tensor_mor(
                                n, p, tuple(t.components[a] for a in objs)
                            ),
                        )
                    except (PhiMissing, KeyError) as exc:
                        report.violation("ofib2cell.missing", str(exc), where)
                        continue
                    if lhs != rhs:
                        report.violation(
                            "ofib2cell.square",
                            f"{tag} transformation square fails at "
                            + xi_key_render(p, [omon_dom.base.objects[a] for a in objs]),
                            where,
                        )

    montrans_square(
        e.dom.top_lax(), e.cod.top_lax(), e.top,
        e.dom.dom.total_omon, e.dom.cod.total_omon, "top",
    )
    montrans_square(
        e.dom.bottom_lax(), e.cod.bottom_lax(), e.bottom,
        e.dom.dom.base_omon, e.dom.cod.base_omon, "bottom",
    )
    return report


# --------------------------------------------------------------------------
# the construction


def omon_groth(x) -> "OFibObject | OFibCell | OFib2Cell":
    """Structured Grothendieck construction on objects, 1-cells, 2-cells."""
    if isinstance(x, LaxSetFunctor):
        return _omon_groth_object(x)
    if isinstance(x, OCell):
        return _omon_groth_cell(x)
    if isinstance(x, O2Cell):
        return _omon_groth_2cell(x)
    raise TypeError(f"cannot apply the construction to {type(x).__name__}")


def _omon_groth_object(x: LaxSetFunctor) -> OFibObject:
    F = x.iset
    fib = _groth_object(F)
    index = x.dom
    operad = index.operad
    obj_off, _, mor_off, _ = _pair_offsets(F)
    sizes = [v.size for v in F.values]
    total = fib.total

    def pair_of(obj: int) -> tuple[int, int]:
        a = fib.proj.on_obj[obj]
        return a, obj - obj_off[a]

    tensors = {}
    for n in range(operad.max_arity + 1):
        for p in operad.elements(n):
            obj_table = {}
            for combo in itertools.product(range(total.n_objects), repeat=n):
                pairs = [pair_of(o) for o in combo]
                i_vec = tuple(a for a, _ in pairs)
                nu = x.nu_at(n, p, i_vec)
                enc = _mixed_encode(tuple(xi for _, xi in pairs), [sizes[a] for a in i_vec])
                target_obj = index.tensor_obj(n, p, i_vec)
                obj_table[combo] = obj_off[target_obj] + nu.mapping[enc]
            mor_table = {}
            for combo in itertools.product(range(total.n_morphisms), repeat=n):
                base_mors = tuple(fib.proj.on_mor[t] for t in combo)
                src_pairs = [pair_of(total.mor_src[t]) for t in combo]
                i_vec = tuple(a for a, _ in src_pairs)
                nu = x.nu_at(n, p, i_vec)
                enc = _mixed_encode(
                    tuple(xi for _, xi in src_pairs), [sizes[a] for a in i_vec]
                )
                big = index.tensor_mor(n, p, base_mors)
                mor_table[combo] = mor_off[big] + nu.mapping[enc]
            tensors[(n, p)] = TensorTable(obj=obj_table, mor=mor_table)
    phi = {}
    for (f, p, qs, i_vec), value in index.phi.items():
        for xs in itertools.product(*(range(sizes[a]) for a in i_vec)):
            combo = tuple(obj_off[a] + xi for a, xi in zip(i_vec, xs))
            rho = index.op(f, p, qs)
            nu = x.nu_at(f.source, rho, i_vec)
            enc = _mixed_encode(xs, [sizes[a] for a in i_vec])
            phi[(f, p, qs, combo)] = mor_off[value] + nu.mapping[enc]
    total_omon = OMonCategory(
        operad=operad,
        base=total,
        tensors=tensors,
        phi=phi,
        name=f"int[{x.name or F.name}]",
    )
    return OFibObject(
        fib=fib,
        total_omon=total_omon,
        base_omon=index,
        name=f"int[{x.name or F.name}]",
    )


def _omon_groth_cell(c: OCell) -> OFibCell:
    dom_of = _omon_groth_object(c.dom)
    cod_of = _omon_groth_object(c.cod)
    square = _groth_cell(c.iset_cell())
    G = c.cod.iset
    g_obj_off, _, g_mor_off, _ = _pair_offsets(G)
    f_obj_off, _, _, _ = _pair_offsets(c.dom.iset)
    xi_top = {}
    for (n, p, objs), value in c.xi.items():
        # lift the comparison morphism at every total tuple over objs
        dom_sizes = [c.dom.iset.values[a].size for a in objs]
        for xs in itertools.product(*(range(s) for s in dom_sizes)):
            combo = tuple(f_obj_off[a] + xi for a, xi in zip(objs, xs))
            src_combo = tuple(square.top.on_obj[o] for o in combo)
            src_pairs_i = tuple(c.functor.on_obj[a] for a in objs)
            kappa = c.cod.nu_at(n, p, src_pairs_i)
            enc = _mixed_encode(
                tuple(o - g_obj_off[i] for o, i in zip(src_combo, src_pairs_i)),
                [G.values[i].size for i in src_pairs_i],
            )
            xi_top[(n, p, combo)] = g_mor_off[value] + kappa.mapping[enc]

    def endpoints(key):
        n, p, combo = key
        src = cod_of.total_omon.tensor_obj(
            n, p, tuple(square.top.on_obj[o] for o in combo)
        )
        tgt = square.top.on_obj[dom_of.total_omon.tensor_obj(n, p, combo)]
        return src, tgt, cod_of.fib.total

    def endpoints_bottom(key):
        n, p, objs = key
        src = cod_of.base_omon.tensor_obj(n, p, tuple(c.functor.on_obj[a] for a in objs))
        tgt = c.functor.on_obj[dom_of.base_omon.tensor_obj(n, p, objs)]
        return src, tgt, cod_of.fib.base

    return OFibCell(
        dom=dom_of,
        cod=cod_of,
        top=square.top,
        bottom=square.bottom,
        xi_top=_normalize_xi(endpoints, xi_top),
        xi_bottom=_normalize_xi(endpoints_bottom, dict(c.xi)),
    )


def _omon_groth_2cell(e: O2Cell) -> OFib2Cell:
    from .groth import _groth_2cell

    two = _groth_2cell(ISet2Cell(e.dom.iset_cell(), e.cod.iset_cell(), e.eta))
    return OFib2Cell(
        dom=_omon_groth_cell(e.dom),
        cod=_omon_groth_cell(e.cod),
        top=two.top,
        bottom=two.bottom,
    )


def omon_transpose(y) -> "LaxSetFunctor | OCell | O2Cell":
    """Fiberwise inverse; comparison functions are read off the total
    tensors of fiber elements."""
    if isinstance(y, OFibObject):
        return _omon_transpose_object(y)
    if isinstance(y, OFibCell):
        return _omon_transpose_cell(y)
    if isinstance(y, OFib2Cell):
        return O2Cell(
            dom=_omon_transpose_cell(y.dom),
            cod=_omon_transpose_cell(y.cod),
            eta=y.bottom,
        )
    raise TypeError(f"cannot transpose {type(y).__name__}")


def _omon_transpose_object(y: OFibObject) -> LaxSetFunctor:
    F = transpose_apply(y.fib)
    index = y.base_omon
    operad = index.operad
    fibers = [[] for _ in range(y.fib.base.n_objects)]
    for c in range(y.fib.total.n_objects):
        fibers[y.fib.proj.on_obj[c]].append(c)
    position = {}
    for fiber_objs in fibers:
        for k, c in enumerate(fiber_objs):
            position[c] = k
    nu = {}
    for n in range(operad.max_arity + 1):
        for p in operad.elements(n):
            if n == 1 and p == operad.unit:
                continue
            for i_vec in itertools.product(range(y.fib.base.n_objects), repeat=n):
                src = o_set_product(F.values[a] for a in i_vec)
                tgt_obj = index.tensor_obj(n, p, i_vec)
                tgt = F.values[tgt_obj]
                sizes = [F.values[a].size for a in i_vec]
                mapping = []
                for idx in range(src.size):
                    xs = _mixed_decode(idx, sizes) if sizes else ()
                    total_objs = tuple(fibers[a][xi] for a, xi in zip(i_vec, xs))
                    out = y.total_omon.tensor_obj(n, p, total_objs)
                    mapping.append(position[out])
                nu[(n, p, i_vec)] = FinFunction(src, tgt, tuple(mapping))
    return LaxSetFunctor(dom=index, iset=F, nu=nu, name=f"T[{y.name}]")


def _omon_transpose_cell(c: OFibCell) -> OCell:
    from .groth import _transpose_cell

    square = _transpose_cell(c.dfib_cell())
    return OCell(
        dom=_omon_transpose_object(c.dom),
        cod=_omon_transpose_object(c.cod),
        functor=c.bottom,
        xi=dict(c.xi_bottom),
        mu=square.mu,
    )


# --------------------------------------------------------------------------
# products


def product_laxtoset(x1: LaxSetFunctor, x2: LaxSetFunctor, name: str = "") -> LaxSetFunctor:
    from .fib2cat import product_iset

    dom = product_omon(x1.dom, x2.dom, name=name or f"({x1.dom.name}x{x2.dom.name})")
    iset = product_iset([x1.iset, x2.iset], name=name or f"({x1.name}x{x2.name})")
    iset = IndexedSet(index=dom.base, values=iset.values, actions=iset.actions, name=iset.name)
    operad = dom.operad
    n_obj1 = x1.dom.base.n_objects
    sizes1 = [v.size for v in x1.iset.values]
    sizes2 = [v.size for v in x2.iset.values]
    n2 = x2.dom.base.n_objects
    nu = {}
    for n in range(operad.max_arity + 1):
        for p in operad.elements(n):
            if n == 1 and p == operad.unit:
                continue
            for combo in itertools.product(range(dom.base.n_objects), repeat=n):
                a1 = tuple(c // n2 for c in combo)
                a2 = tuple(c % n2 for c in combo)
                nu1 = x1.nu_at(n, p, a1)
                nu2 = x2.nu_at(n, p, a2)
                src = o_set_product(iset.values[c] for c in combo)
                tgt_obj = dom.tensor_obj(n, p, combo)
                tgt = iset.values[tgt_obj]
                pair_sizes = [(sizes1[i], sizes2[j]) for i, j in zip(a1, a2)]
                flat_sizes = [s1 * s2 for s1, s2 in pair_sizes]
                t1, t2 = tgt_obj // n2, tgt_obj % n2
                mapping = []
                for idx in range(src.size):
                    xs = _mixed_decode(idx, flat_sizes) if flat_sizes else ()
                    xs1 = tuple(v // s2 for v, (_, s2) in zip(xs, pair_sizes))
                    xs2 = tuple(v % s2 for v, (_, s2) in zip(xs, pair_sizes))
                    out1 = nu1.mapping[_mixed_encode(xs1, [s for s, _ in pair_sizes])]
                    out2 = nu2.mapping[_mixed_encode(xs2, [s for _, s in pair_sizes])]
                    mapping.append(out1 * sizes2[t2] + out2)
                nu[(n, p, combo)] = FinFunction(src, tgt, tuple(mapping))
    return LaxSetFunctor(dom=dom, iset=iset, nu=nu, name=name or f"({x1.name}x{x2.name})")


def product_ofib(y1: OFibObject, y2: OFibObject, name: str = "") -> OFibObject:
    from .fib2cat import product_dfib

    fib = product_dfib([y1.fib, y2.fib], name=name)
    total = product_omon(y1.total_omon, y2.total_omon)
    base = product_omon(y1.base_omon, y2.base_omon)
    total = OMonCategory(
        operad=total.operad, base=fib.total, tensors=total.tensors,
        phi=total.phi, name=total.name,
    )
    base = OMonCategory(
        operad=base.operad, base=fib.base, tensors=base.tensors,
        phi=base.phi, name=base.name,
    )
    return OFibObject(fib=fib, total_omon=total, base_omon=base,
                      name=name or f"({y1.name}x{y2.name})")


# --------------------------------------------------------------------------
# shipped fixture families


def grade_laxtoset(max_arity: int = 3) -> LaxSetFunctor:
    """The graded three-element monoid as a lax comparison structure over
    addition mod 2: the motivating 'pair of monoids' example."""
    from . import fixtures
    from .omon import permute_tuple
    from .fincore import fm_from_label

    index = dz2_assoc_omon(max_arity)
    iset = iset_from_tables(
        index.base, {"0": ["p", "q"], "1": ["r"]}, {}, name="gradeF"
    )
    operad = index.operad

    def product_of(labels) -> str:
        acc = fixtures.GRADE_UNIT
        for x in labels:
            acc = fixtures.GRADE_MULT[(acc, x)]
        return acc

    nu = {}
    for n in range(operad.max_arity + 1):
        for p in operad.elements(n):
            if n == 1 and p == operad.unit:
                continue
            sigma = fm_from_label(p) if n else FinMap(0, 0, ())
            for i_vec in itertools.product(range(2), repeat=n):
                src = set_product(iset.values[a] for a in i_vec)
                tgt = iset.values[index.tensor_obj(n, p, i_vec)]
                if tgt.size == 1:
                    continue  # unique function, defaulted
                mapping = []
                for combo in itertools.product(*(iset.values[a].labels for a in i_vec)):
                    mapping.append(tgt.index(product_of(permute_tuple(combo, sigma))))
                nu[(n, p, i_vec)] = FinFunction(src, tgt, tuple(mapping))
    return LaxSetFunctor(dom=index, iset=iset, nu=nu, name="GRADE")


def l2_laxtoset(max_arity: int = 3) -> LaxSetFunctor:
    """A two-level family over the meet-semilattice: the top fiber is the
    or-monoid, the bottom is a point."""
    index = l2_comm_omon(max_arity)
    iset = iset_from_tables(
        index.base,
        {"0": ["s"], "1": ["a", "b"]},
        {"le_0_1": {"s": "b"}},
        name="l2F",
    )
    top = iset.values[1]

    def or_label(labels) -> str:
        return "b" if "b" in labels else "a"

    nu = {}
    for n in range(2, max_arity + 1):
        i_vec = (1,) * n
        src = set_product([top] * n)
        mapping = tuple(
            top.index(or_label(combo))
            for combo in itertools.product(top.labels, repeat=n)
        )
        nu[(n, "*", i_vec)] = FinFunction(src, top, mapping)
    nu[(0, "*", ())] = FinFunction(set_product(()), top, (top.index("a"),))
    return LaxSetFunctor(dom=index, iset=iset, nu=nu, name="L2FAM")


def qconv_or_omon(max_arity: int = 3) -> OMonCategory:
    """The weighted-or algebra on two points over the quasi-convexity
    operad of the Boolean semiring."""
    from .operads import qconv_coords

    operad = build_qconv(boolean_semiring(), max_arity)
    carrier = ("0", "1")
    ops = {}
    for n in range(max_arity + 1):
        for p in operad.elements(n):
            alpha = qconv_coords(p)
            table = {}
            for xs in itertools.product(carrier, repeat=n):
                bit = "0"
                for a, x in zip(alpha, xs):
                    if a == "1" and x == "1":
                        bit = "1"
                table[xs] = bit
            ops[(n, p)] = table
    alg = SetAlgebra(operad=operad, carrier=carrier, ops=ops, name="QOR")
    return omon_from_set_algebra(operad, alg, name="QOR")


def qconv_proj_laxtoset(max_arity: int = 3) -> LaxSetFunctor:
    """A two-element family over the weighted-or structure whose
    comparison maps are the weighted-or itself: the quasi-convex analogue
    of the graded-monoid example."""
    from .operads import qconv_coords

    index = qconv_or_omon(max_arity)
    operad = index.operad
    fiber_set = ["f0", "f1"]
    iset = iset_from_tables(
        index.base, {obj: fiber_set for obj in index.base.objects}, {}, name="qprojF"
    )
    values = iset.values[0]
    nu = {}
    for n in range(max_arity + 1):
        for p in operad.elements(n):
            if n == 1 and p == operad.unit:
                continue
            alpha = qconv_coords(p)
            for i_vec in itertools.product(range(2), repeat=n):
                src = set_product([values] * n)
                mapping = []
                for xs in itertools.product(range(2), repeat=n):
                    bit = 0
                    for a, x in zip(alpha, xs):
                        if a == "1" and x == 1:
                            bit = 1
                    mapping.append(bit)
                nu[(n, p, i_vec)] = FinFunction(src, values, tuple(mapping))
    return LaxSetFunctor(dom=index, iset=iset, nu=nu, name="QPROJ")


def trivial_laxtoset(index: OMonCategory, name: str = "") -> LaxSetFunctor:
    from .fib2cat import constant_singleton

    return LaxSetFunctor(
        dom=index,
        iset=constant_singleton(index.base, name=f"triv[{index.name}]"),
        nu={},
        name=name or f"TRIV[{index.name}]",
    )


# --------------------------------------------------------------------------
# deterministic cell enumeration for the corpus


def forced_xi(dom_omon: OMonCategory, cod_omon: OMonCategory, functor: CatFunctor):
    """The unique candidate comparison structure, when homs are thin."""
    xi = {}
    operad = dom_omon.operad
    base = cod_omon.base
    for n in range(operad.max_arity + 1):
        for p in operad.elements(n):
            for objs in itertools.product(range(dom_omon.base.n_objects), repeat=n):
                src = cod_omon.tensor_obj(n, p, tuple(functor.on_obj[a] for a in objs))
                tgt = functor.on_obj[dom_omon.tensor_obj(n, p, objs)]
                if src == tgt:
                    continue
                hom = base.hom(src, tgt)
                if len(hom) != 1:
                    return None
                xi[(n, p, objs)] = hom[0]
    return xi


def enumerate_ocells(x: LaxSetFunctor, y: LaxSetFunctor, cap: int = 3):
    """Valid cells x -> y found by exhaustive search (thin-hom bases)."""
    if not operads_equal(x.dom.operad, y.dom.operad):
        return []
    out = []
    for M in all_functors(x.dom.base, y.dom.base):
        xi = forced_xi(x.dom, y.dom, M)
        if xi is None:
            continue
        lax = LaxOMonFunctor(dom=x.dom, cod=y.dom, functor=M, xi=xi)
        if not _check_table_lax(lax).ok:
            continue
        per_object = []
        feasible = True
        for a in range(x.dom.base.n_objects):
            dom_set = x.iset.values[a]
            cod_set = y.iset.values[M.on_obj[a]]
            if dom_set.size > 0 and cod_set.size == 0:
                feasible = False
                break
            per_object.append(
                [
                    FinFunction(dom_set, cod_set, mapping)
                    for mapping in itertools.product(
                        range(cod_set.size), repeat=dom_set.size
                    )
                ]
                if dom_set.size
                else [FinFunction(dom_set, cod_set, ())]
            )
        if not feasible:
            continue
        for combo in itertools.product(*per_object):
            cell = OCell(dom=x, cod=y, functor=M, xi=xi, mu=tuple(combo))
            if check_ocell(cell).ok:
                out.append(cell)
                if len(out) >= cap:
                    return out
    return out


def enumerate_o2cells(c1: OCell, c2: OCell, cap: int = 2):
    if c1.dom is not c2.dom or c1.cod is not c2.cod:
        return []
    out = []
    for eta in all_nat_transforms(c1.functor, c2.functor):
        e = O2Cell(dom=c1, cod=c2, eta=eta)
        if check_o2cell(e).ok:
            out.append(e)
            if len(out) >= cap:
                break
    return out


@dataclass
class OCorpus:
    laxtosets: list = field(default_factory=list)
    ofibs: list = field(default_factory=list)
    ocells: list = field(default_factory=list)
    ofib_cells: list = field(default_factory=list)
    o2cells: list = field(default_factory=list)
    ofib_2cells: list = field(default_factory=list)
    operad_morphisms: list = field(default_factory=list)
    params: dict = field(default_factory=dict)


def make_o_corpus(max_arity: int = 3) -> OCorpus:
    """The shipped corpus: the graded-monoid family over the permutation
    operad, the semilattice family over the terminal operad, and the
    weighted-or family over the Boolean quasi-convexity operad."""
    grade = grade_laxtoset(max_arity)
    triv_dz2 = trivial_laxtoset(grade.dom, name="TRIVDZ2")
    l2fam = l2_laxtoset(max_arity)
    triv_l2 = trivial_laxtoset(l2fam.dom, name="TRIVL2")
    qproj = qconv_proj_laxtoset(max_arity)
    triv_q = trivial_laxtoset(qproj.dom, name="TRIVQ")
    laxtosets = [grade, triv_dz2, l2fam, triv_l2, qproj, triv_q]

    ofibs = [omon_groth(grade), omon_groth(l2fam), omon_groth(qproj)]
    ofibs.append(identity_ofib(grade.dom, name="idDZ2"))
    ofibs.append(identity_ofib(l2fam.dom, name="idL2"))

    ocells = [identity_ocell(x) for x in laxtosets]
    groups = [(grade, triv_dz2), (l2fam, triv_l2), (qproj, triv_q)]
    for a, b in groups:
        for src, tgt in ((a, b), (b, a), (a, a), (b, b)):
            for cell in enumerate_ocells(src, tgt, cap=2):
                ocells.append(cell)

    o2cells = []
    for c1 in ocells:
        for c2 in ocells:
            if c1 is c2 or c1.dom is not c2.dom or c1.cod is not c2.cod:
                continue
            o2cells.extend(enumerate_o2cells(c1, c2, cap=1))
    for cell in ocells[:4]:
        o2cells.append(O2Cell(dom=cell, cod=cell, eta=identity_nat(cell.functor)))

    ofib_cells = [identity_ofib_cell(y) for y in ofibs]
    for cell in ocells[: len(laxtosets) + 4]:
        ofib_cells.append(omon_groth(cell))
    ofib_2cells = [
        OFib2Cell(
            dom=c, cod=c, top=identity_nat(c.top), bottom=identity_nat(c.bottom)
        )
        for c in ofib_cells[:3]
    ]
    for e in o2cells[:4]:
        ofib_2cells.append(omon_groth(e))

    assoc = grade.dom.operad
    qconv = qproj.dom.operad
    comm = l2fam.dom.operad
    morphisms = [
        identity_operad_morphism(assoc),
        identity_operad_morphism(comm),
        identity_operad_morphism(qconv),
        terminal_morphism(assoc),
        terminal_morphism(qconv),
    ]
    return OCorpus(
        laxtosets=laxtosets,
        ofibs=ofibs,
        ocells=ocells,
        ofib_cells=ofib_cells,
        o2cells=o2cells,
        ofib_2cells=ofib_2cells,
        operad_morphisms=morphisms,
        params={"max_arity": max_arity},
    )


# --------------------------------------------------------------------------
# round trips


def phi_ocell(x: LaxSetFunctor, back: LaxSetFunctor) -> OCell:
    """The canonical invertible cell from the transposed construction of
    x back to x: forget the index coordinate of every pair."""
    base_phi = phi_component(x.iset)
    return OCell(
        dom=back,
        cod=x,
        functor=identity_functor(x.dom.base),
        xi={},
        mu=base_phi.mu,
        name=f"phi[{x.name}]",
    )


def phi_ocell_inverse(x: LaxSetFunctor, back: LaxSetFunctor) -> OCell:
    base_inv = phi_inverse(x.iset)
    return OCell(
        dom=x,
        cod=back,
        functor=identity_functor(x.dom.base),
        xi={},
        mu=base_inv.mu,
        name=f"phi_inv[{x.name}]",
    )


def psi_ofib_cell(y: OFibObject, fwd: OFibObject) -> OFibCell:
    from .groth import psi_component

    base_psi = psi_component(y.fib)
    return OFibCell(
        dom=fwd,
        cod=y,
        top=base_psi.top,
        bottom=base_psi.bottom,
        name=f"psi[{y.name}]",
    )


def psi_ofib_cell_inverse(y: OFibObject, fwd: OFibObject) -> OFibCell:
    from .groth import psi_inverse

    base_inv = psi_inverse(y.fib)
    return OFibCell(
        dom=y,
        cod=fwd,
        top=base_inv.top,
        bottom=base_inv.bottom,
        name=f"psi_inv[{y.name}]",
    )


def ocell_equal(a: OCell, b: OCell) -> bool:
    return (
        a.functor == b.functor
        and a.xi == b.xi
        and a.mu == b.mu
        and a.dom.iset == b.dom.iset
        and a.cod.iset == b.cod.iset
        and omons_equal(a.dom.dom, b.dom.dom)
        and omons_equal(a.cod.dom, b.cod.dom)
    )


def ofib_cell_equal(a: OFibCell, b: OFibCell) -> bool:
    return (
        a.top == b.top
        and a.bottom == b.bottom
        and a.xi_top == b.xi_top
        and a.xi_bottom == b.xi_bottom
        and a.dom.fib == b.dom.fib
        and a.cod.fib == b.cod.fib
        and omons_equal(a.dom.total_omon, b.dom.total_omon)
        and omons_equal(a.cod.total_omon, b.cod.total_omon)
    )


def omon_roundtrip_check(corpus: OCorpus) -> CheckReport:
    """Both round trips up to the explicit structured isomorphisms, plus
    strict functoriality of the construction on corpus cells and the
    fixed-base restriction."""
    report = CheckReport()
    for k, v in corpus.params.items():
        report.info[f"ocorpus.{k}"] = str(v)
    omon_cache: dict = {}

    def cached_omon(c: OMonCategory) -> CheckReport:
        key = id(c)
        if key not in omon_cache:
            omon_cache[key] = check_omon_category(c)
        return omon_cache[key]

    for x in corpus.laxtosets:
        report.merge(cached_omon(x.dom), where=x.dom.name or "index")
        report.merge(_check_set_lax(x), where=x.name)
    for y in corpus.ofibs:
        report.merge(check_ofib_object(y, _omon_cache=omon_cache), where=y.name)
    if not report.ok:
        return report

    # forward round trip
    for x in corpus.laxtosets:
        y = omon_groth(x)
        report.merge(check_ofib_object(y, _omon_cache=omon_cache), where=f"int[{x.name}]")
        report.count("oroundtrip.groth_objects")
        if y.fib != groth_apply(x.iset):
            report.violation(
                "oroundtrip.underlying",
                f"underlying fibration of the construction differs at {x.name}",
            )
        back = omon_transpose(y)
        report.merge(_check_set_lax(back), where=f"T[int[{x.name}]]")
        phi = phi_ocell(x, back)
        inv = phi_ocell_inverse(x, back)
        report.merge(check_ocell(phi), where=phi.name)
        report.merge(check_ocell(inv), where=inv.name)
        if not ocell_equal(ocell_compose(phi, inv), identity_ocell(x)):
            report.violation("oroundtrip.phi_invertible", f"phi o phi_inv != id at {x.name}")
        if not ocell_equal(ocell_compose(inv, phi), identity_ocell(back)):
            report.violation("oroundtrip.phi_invertible", f"phi_inv o phi != id at {x.name}")

    # backward round trip
    for y in corpus.ofibs:
        x = omon_transpose(y)
        report.merge(cached_omon(x.dom), where=f"T[{y.name}]:index")
        report.merge(_check_set_lax(x), where=f"T[{y.name}]")
        fwd = omon_groth(x)
        report.merge(check_ofib_object(fwd, _omon_cache=omon_cache), where=f"int[T[{y.name}]]")
        psi = psi_ofib_cell(y, fwd)
        inv = psi_ofib_cell_inverse(y, fwd)
        report.merge(check_ofib_cell(psi), where=psi.name)
        report.merge(check_ofib_cell(inv), where=inv.name)
        if not ofib_cell_equal(ofib_cell_compose(psi, inv), identity_ofib_cell(y)):
            report.violation("oroundtrip.psi_invertible", f"psi o psi_inv != id at {y.name}")
        if not ofib_cell_equal(ofib_cell_compose(inv, psi), identity_ofib_cell(fwd)):
            report.violation("oroundtrip.psi_invertible", f"psi_inv o psi != id at {y.name}")

    # cells and functoriality
    for cell in corpus.ocells:
        report.merge(check_ocell(cell), where=cell.name or "ocell")
        image = omon_groth(cell)
        report.merge(check_ofib_cell(image), where=f"int[{cell.name or 'ocell'}]")
        report.count("oroundtrip.cells")
    for cell in corpus.ofib_cells:
        report.merge(check_ofib_cell(cell), where=cell.name or "ofibcell")
        back = omon_transpose(cell)
        report.merge(check_ocell(back), where=f"T[{cell.name or 'ofibcell'}]")
    for e in corpus.o2cells:
        report.merge(check_o2cell(e), where=e.name or "o2cell")
        report.merge(check_ofib_2cell(omon_groth(e)), where="int[o2cell]")
    for e in corpus.ofib_2cells:
        report.merge(check_ofib_2cell(e), where=e.name or "ofib2cell")

    for x in corpus.laxtosets:
        if not ofib_cell_equal(
            omon_groth(identity_ocell(x)), identity_ofib_cell(omon_groth(x))
        ):
            report.violation("oroundtrip.functorial_id", f"int(id) != id at {x.name}")
    for c1 in corpus.ocells:
        for c2 in corpus.ocells:
            if c1.cod is not c2.dom:
                continue
            report.count("oroundtrip.functoriality_pairs")
            if not ofib_cell_equal(
                omon_groth(ocell_compose(c2, c1)),
                ofib_cell_compose(omon_groth(c2), omon_groth(c1)),
            ):
                report.violation(
                    "oroundtrip.functorial_compose",
                    f"construction breaks a composite through {c1.name or '?'}",
                )

    # fixed-base restriction: cells over one structured index with the
    # identity functor stay over that index on the other side
    for cell in corpus.ocells:
        if cell.dom is not cell.cod:
            continue
        if cell.functor != identity_functor(cell.dom.dom.base) or cell.xi:
            continue
        image = omon_groth(cell)
        report.count("oroundtrip.fixed_base_cells")
        if image.bottom != identity_functor(image.dom.base_omon.base) or image.xi_bottom:
            report.violation(
                "oroundtrip.fixed_base",
                f"fixed-base cell leaves its base at {cell.name or '?'}",
            )
    return report


def restriction_report(corpus: OCorpus) -> CheckReport:
    """Every applicable (corpus cell, corpus operad morphism) pair:
    the restricted cell must re-validate."""
    from .omon import _pullback_indexed, restrict_along_operad_morphism

    report = CheckReport()
    omon_cache: dict = {}
    for h in corpus.operad_morphisms:
        for x in corpus.laxtosets:
            if not operads_equal(h.cod, x.dom.operad):
                continue
            report.count("restriction.pairs")
            try:
                restricted = restrict_along_operad_morphism(h, x, recheck=False)
            except Exception as exc:  # noqa: BLE001 - report, not crash
                report.violation("restriction.build", f"{x.name} along {h.name}: {exc}")
                continue
            key = id(restricted.dom)
            if key not in omon_cache:
                omon_cache[key] = check_omon_category(restricted.dom)
            report.merge(omon_cache[key], where=f"{x.name}|{h.name}:index")
            report.merge(_check_set_lax(restricted), where=f"{x.name}|{h.name}")
        for cell in corpus.ocells:
            if not operads_equal(h.cod, cell.dom.dom.operad):
                continue
            report.count("restriction.pairs")
            rx = restrict_along_operad_morphism(h, cell.dom, recheck=False)
            ry = restrict_along_operad_morphism(h, cell.cod, recheck=False)
            rcell = OCell(
                dom=rx,
                cod=ry,
                functor=cell.functor,
                xi=_pullback_indexed(h, cell.xi),
                mu=cell.mu,
                name=f"{cell.name}|{h.name}" if cell.name else "",
            )
            report.merge(check_ocell(rcell), where=f"ocell|{h.name}")
    return report
