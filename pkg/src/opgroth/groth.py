"""The discrete Grothendieck construction, its transpose, the explicit
natural isomorphisms between the round trips and the identity, and the
corpus-driven verification of the whole 2-equivalence.

Object identity in a total category is the canonical (index, element)
pair with label ``<index>.<element>``; a morphism is determined by a base
morphism plus its source pair.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .fincore import (
    CatFunctor,
    FinCat,
    NatTransform,
    all_functors,
    all_nat_transforms,
    identity_functor,
    product_category,
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
    check_discrete_fibration,
    constant_singleton,
    dfib_2cell_vcompose,
    dfib_cell_compose,
    dfib_whisker_post,
    dfib_whisker_pre,
    embed_set_as_dfib,
    fn_compose,
    fn_identity,
    identity_dfib_2cell,
    identity_dfib_cell,
    identity_fibration,
    identity_iset_2cell,
    identity_iset_cell,
    iset_2cell_vcompose,
    iset_cell_compose,
    iset_from_tables,
    iset_whisker_post,
    iset_whisker_pre,
    lift_count_table,
    product_dfib,
    product_iset,
    validate_dfib_cell,
    validate_indexed_set,
    validate_iset_cell,
)
from .report import CheckReport

# --------------------------------------------------------------------------
# pair bookkeeping for a total category


def _pair_offsets(F: IndexedSet):
    obj_offsets = []
    total = 0
    for a in range(F.index.n_objects):
        obj_offsets.append(total)
        total += F.values[a].size
    mor_offsets = []
    count = 0
    for m in range(F.index.n_morphisms):
        mor_offsets.append(count)
        count += F.values[F.index.mor_src[m]].size
    return obj_offsets, total, mor_offsets, count


def _groth_object(F: IndexedSet) -> DiscreteFibration:
    index = F.index
    obj_offsets, n_obj, mor_offsets, n_mor = _pair_offsets(F)
    objects = []
    for a in range(index.n_objects):
        for x in F.values[a].labels:
            objects.append(f"{index.objects[a]}.{x}")
    mor_src = []
    mor_tgt = []
    proj_mor = []
    for m in range(index.n_morphisms):
        a, b = index.mor_src[m], index.mor_tgt[m]
        act = F.actions[m]
        for xi in range(F.values[a].size):
            mor_src.append(obj_offsets[a] + xi)
            mor_tgt.append(obj_offsets[b] + act.mapping[xi])
            proj_mor.append(m)
    identity = tuple(
        mor_offsets[index.id_of(a)] + xi
        for a in range(index.n_objects)
        for xi in range(F.values[a].size)
    )
    identity_set = set(identity)
    mor_labels = tuple(
        f"id_{objects[mor_src[t]]}"
        if t in identity_set
        else f"{index.mor_labels[proj_mor[t]]}@{objects[mor_src[t]]}"
        for t in range(n_mor)
    )
    composition = {}
    for tg in range(n_mor):
        for tf in range(n_mor):
            if mor_src[tg] != mor_tgt[tf]:
                continue
            m = index.compose(proj_mor[tg], proj_mor[tf])
            composition[(tg, tf)] = mor_offsets[m] + (mor_src[tf] - obj_offsets[index.mor_src[proj_mor[tf]]])
    total = FinCat(
        objects=tuple(objects),
        mor_labels=mor_labels,
        mor_src=tuple(mor_src),
        mor_tgt=tuple(mor_tgt),
        identity=identity,
        composition=composition,
        name=f"int[{F.name or index.name}]",
    )
    proj = CatFunctor(
        total,
        index,
        tuple(a for a in range(index.n_objects) for _ in range(F.values[a].size)),
        tuple(proj_mor),
        name="proj",
    )
    return DiscreteFibration(proj, name=f"int[{F.name or index.name}]")


def _groth_cell(cell: ISetCell) -> DFibCell:
    F, G = cell.dom, cell.cod
    dom_fib = _groth_object(F)
    cod_fib = _groth_object(G)
    f_obj_off, _, f_mor_off, _ = _pair_offsets(F)
    g_obj_off, _, g_mor_off, _ = _pair_offsets(G)
    on_obj = []
    for a in range(F.index.n_objects):
        for xi in range(F.values[a].size):
            on_obj.append(g_obj_off[cell.functor.on_obj[a]] + cell.mu[a].mapping[xi])
    on_mor = []
    for m in range(F.index.n_morphisms):
        a = F.index.mor_src[m]
        for xi in range(F.values[a].size):
            mm = cell.functor.on_mor[m]
            on_mor.append(g_mor_off[mm] + cell.mu[a].mapping[xi])
    top = CatFunctor(dom_fib.total, cod_fib.total, tuple(on_obj), tuple(on_mor))
    return DFibCell(dom_fib, cod_fib, top, cell.functor)


def _groth_2cell(e: ISet2Cell) -> DFib2Cell:
    c1 = _groth_cell(e.dom)
    c2 = _groth_cell(e.cod)
    F, G = e.dom.dom, e.dom.cod
    g_obj_off, _, g_mor_off, _ = _pair_offsets(G)
    comps = []
    for a in range(F.index.n_objects):
        for xi in range(F.values[a].size):
            m = e.eta.components[a]
            comps.append(g_mor_off[m] + e.dom.mu[a].mapping[xi])
    top = NatTransform(c1.top, c2.top, tuple(comps))
    return DFib2Cell(c1, c2, top, e.eta)


def groth_apply(cell):
    """The Grothendieck construction on an object, 1-cell, or 2-cell."""
    if isinstance(cell, IndexedSet):
        return _groth_object(cell)
    if isinstance(cell, ISetCell):
        return _groth_cell(cell)
    if isinstance(cell, ISet2Cell):
        return _groth_2cell(cell)
    raise TypeError(f"not an indexed-set cell: {type(cell).__name__}")


# --------------------------------------------------------------------------
# transpose


def _fiber_objects(p: DiscreteFibration):
    fibers = [[] for _ in range(p.base.n_objects)]
    for c in range(p.total.n_objects):
        fibers[p.proj.on_obj[c]].append(c)
    return fibers


def _transpose_object(p: DiscreteFibration) -> IndexedSet:
    base, total = p.base, p.total
    fibers = _fiber_objects(p)
    values = tuple(
        FinSet(tuple(total.objects[c] for c in fiber)) for fiber in fibers
    )
    position = {}
    for fiber in fibers:
        for k, c in enumerate(fiber):
            position[c] = k
    lifts = lift_count_table(p)
    actions = []
    for f in range(base.n_morphisms):
        a, b = base.mor_src[f], base.mor_tgt[f]
        mapping = []
        for c in fibers[a]:
            options = lifts[(c, f)]
            if len(options) != 1:
                raise ValueError(
                    f"not a discrete fibration at ({total.objects[c]}, {base.mor_labels[f]})"
                )
            mapping.append(position[total.mor_tgt[options[0]]])
        actions.append(FinFunction(values[a], values[b], tuple(mapping)))
    return IndexedSet(
        index=base, values=values, actions=tuple(actions), name=f"T[{p.name}]"
    )


def _transpose_cell(d: DFibCell) -> ISetCell:
    Fp = _transpose_object(d.dom)
    Gq = _transpose_object(d.cod)
    p, q = d.dom, d.cod
    fibers_p = _fiber_objects(p)
    position_q = {}
    for fiber in _fiber_objects(q):
        for k, c in enumerate(fiber):
            position_q[c] = k
    mu = []
    for a in range(p.base.n_objects):
        cod_set = Gq.values[d.bottom.on_obj[a]]
        mapping = tuple(position_q[d.top.on_obj[c]] for c in fibers_p[a])
        mu.append(FinFunction(Fp.values[a], cod_set, mapping))
    return ISetCell(Fp, Gq, d.bottom, tuple(mu))


def _transpose_2cell(e: DFib2Cell) -> ISet2Cell:
    return ISet2Cell(_transpose_cell(e.dom), _transpose_cell(e.cod), e.bottom)


def transpose_apply(cell):
    """Fiberwise inverse of the Grothendieck construction."""
    if isinstance(cell, DiscreteFibration):
        return _transpose_object(cell)
    if isinstance(cell, DFibCell):
        return _transpose_cell(cell)
    if isinstance(cell, DFib2Cell):
        return _transpose_2cell(cell)
    raise TypeError(f"not a discrete-fibration cell: {type(cell).__name__}")


# --------------------------------------------------------------------------
# the two natural isomorphisms


def phi_component(F: IndexedSet) -> ISetCell:
    """Invertible cell from the transpose of the construction back to F;
    pointwise it forgets the index coordinate of a pair."""
    TF = _transpose_object(_groth_object(F))
    mu = tuple(
        FinFunction(TF.values[a], F.values[a], tuple(range(F.values[a].size)))
        for a in range(F.index.n_objects)
    )
    return ISetCell(TF, F, identity_functor(F.index), mu, name=f"phi[{F.name}]")


def phi_inverse(F: IndexedSet) -> ISetCell:
    TF = _transpose_object(_groth_object(F))
    mu = tuple(
        FinFunction(F.values[a], TF.values[a], tuple(range(F.values[a].size)))
        for a in range(F.index.n_objects)
    )
    return ISetCell(F, TF, identity_functor(F.index), mu, name=f"phi_inv[{F.name}]")


def psi_component(p: DiscreteFibration) -> DFibCell:
    """Invertible cell from the construction of the transpose back to p."""
    back = _groth_object(_transpose_object(p))
    fibers = _fiber_objects(p)
    flat = [c for fiber in fibers for c in fiber]
    on_obj = tuple(flat)
    lifts = lift_count_table(p)
    on_mor = []
    Tp = _transpose_object(p)
    for m in range(Tp.index.n_morphisms):
        a = Tp.index.mor_src[m]
        for c in fibers[a]:
            on_mor.append(lifts[(c, m)][0])
    top = CatFunctor(back.total, p.total, on_obj, tuple(on_mor))
    return DFibCell(back, p, top, identity_functor(p.base), name=f"psi[{p.name}]")


def psi_inverse(p: DiscreteFibration) -> DFibCell:
    back = _groth_object(_transpose_object(p))
    fibers = _fiber_objects(p)
    pair_index = {}
    k = 0
    for fiber in fibers:
        for c in fiber:
            pair_index[c] = k
            k += 1
    Tp = _transpose_object(p)
    _, _, mor_off, _ = _pair_offsets(Tp)
    position = {}
    for fiber in fibers:
        for i, c in enumerate(fiber):
            position[c] = i
    on_obj = tuple(pair_index[c] for c in range(p.total.n_objects))
    on_mor = tuple(
        mor_off[p.proj.on_mor[m]] + position[p.total.mor_src[m]]
        for m in range(p.total.n_morphisms)
    )
    top = CatFunctor(p.total, back.total, on_obj, on_mor)
    return DFibCell(p, back, top, identity_functor(p.base), name=f"psi_inv[{p.name}]")


# --------------------------------------------------------------------------
# product comparison cells


def groth_product_comparison(F1: IndexedSet, F2: IndexedSet) -> DFibCell:
    """The canonical invertible cell from the construction of a product
    to the product of the constructions."""
    P = product_iset([F1, F2])
    dom = _groth_object(P)
    q1, q2 = _groth_object(F1), _groth_object(F2)
    cod = product_dfib([q1, q2])
    off1, _, moff1, _ = _pair_offsets(F1)
    off2, _, moff2, _ = _pair_offsets(F2)
    prod_idx = product_category([F1.index, F2.index])
    totals = product_category([q1.total, q2.total])
    on_obj = []
    for ai, t in enumerate(prod_idx.obj_tuples):
        a1, a2 = t
        for x1 in range(F1.values[a1].size):
            for x2 in range(F2.values[a2].size):
                on_obj.append(
                    totals.obj_index[(off1[a1] + x1, off2[a2] + x2)]
                )
    on_mor = []
    for mi, t in enumerate(prod_idx.mor_tuples):
        m1, m2 = t
        a1, a2 = F1.index.mor_src[m1], F2.index.mor_src[m2]
        for x1 in range(F1.values[a1].size):
            for x2 in range(F2.values[a2].size):
                on_mor.append(
                    totals.mor_index[(moff1[m1] + x1, moff2[m2] + x2)]
                )
    top = CatFunctor(dom.total, cod.total, tuple(on_obj), tuple(on_mor))
    bottom = identity_functor(dom.base)
    return DFibCell(dom, cod, top, bottom, name="groth-product-comparison")


def transpose_product_comparison(p1: DiscreteFibration, p2: DiscreteFibration) -> ISetCell:
    """Fiber labels agree on the nose, so the canonical comparison is the
    identity-shaped cell."""
    P = product_dfib([p1, p2])
    dom = _transpose_object(P)
    cod = product_iset([_transpose_object(p1), _transpose_object(p2)])
    mu = tuple(
        FinFunction(dom.values[a], cod.values[a], tuple(range(dom.values[a].size)))
        for a in range(dom.index.n_objects)
    )
    return ISetCell(dom, cod, identity_functor(dom.index), mu)


# --------------------------------------------------------------------------
# corpus


@dataclass
class Corpus:
    isets: list = field(default_factory=list)
    fibrations: list = field(default_factory=list)
    iset_cells: list = field(default_factory=list)
    dfib_cells: list = field(default_factory=list)
    iset_2cells: list = field(default_factory=list)
    dfib_2cells: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def n_objects(self) -> int:
        return len(self.isets) + len(self.fibrations)

    @property
    def n_1cells(self) -> int:
        return len(self.iset_cells) + len(self.dfib_cells)

    @property
    def n_2cells(self) -> int:
        return len(self.iset_2cells) + len(self.dfib_2cells)


DEFAULT_CORPUS_SEED = 20240


def _pool_categories():
    from . import fixtures

    return [
        ("term", product_category([]).cat, {}),
        ("disc2", fixtures.dz2(), {}),
        (
            "disc3",
            __import__("opgroth.fincore", fromlist=["discrete_category"]).discrete_category(
                "D3", ["x", "y", "z"]
            ),
            {},
        ),
        ("l2", fixtures.l2(), {"edges": [("le_0_1", "0", "1")]}),
        (
            "chain3",
            fixtures.chain3(),
            {
                "edges": [("le_0_1", "0", "1"), ("le_1_2", "1", "2")],
                "paths": {"le_0_2": ["le_0_1", "le_1_2"]},
            },
        ),
        ("span", fixtures.span(), {"edges": [("le_x_y", "x", "y"), ("le_x_z", "x", "z")]}),
        ("cospan", fixtures.cospan(), {"edges": [("le_x_z", "x", "z"), ("le_y_z", "y", "z")]}),
        ("par", fixtures.parallel_pair(), {"edges": [("u", "a", "b"), ("v", "a", "b")]}),
        ("bz2", fixtures.bz2(), {"involution": "1"}),
    ]


def _random_iset(name, cat, meta, rng, tag):
    sizes = {}
    has_arrows = bool(meta)
    for obj in cat.objects:
        low = 1 if has_arrows else rng.choice([1, 1, 1, 0])
        sizes[obj] = rng.randint(max(low, 1), 3) if has_arrows else rng.randint(low, 3)
    sets = {obj: [f"e{k}" for k in range(sizes[obj])] for obj in cat.objects}
    maps = {}
    if "involution" in meta:
        elems = list(sets[cat.objects[0]])
        perm = {}
        pool = list(elems)
        rng.shuffle(pool)
        while pool:
            x = pool.pop()
            if pool and rng.random() < 0.5:
                y = pool.pop()
                perm[x], perm[y] = y, x
            else:
                perm[x] = x
        maps[meta["involution"]] = perm
    else:
        for label, s, t in meta.get("edges", []):
            maps[label] = {x: rng.choice(sets[t]) for x in sets[s]}
        for label, path in meta.get("paths", {}).items():
            # composite along the unique path
            src_obj = cat.objects[cat.mor_src[cat.mor_index(path[0])]]
            table = {x: x for x in sets[src_obj]}
            for step in path:
                table = {x: maps[step][y] for x, y in table.items()}
            maps[label] = table
    return iset_from_tables(cat, sets, maps, name=f"{name}_{tag}")


def _valid_mus(F: IndexedSet, G: IndexedSet, M: CatFunctor, cap: int = 4000):
    """Natural families mu_a : F(a) -> G(M(a)), exhaustively up to a cap."""
    import itertools as it

    per_object = []
    for a in range(F.index.n_objects):
        dom, cod = F.values[a], G.values[M.on_obj[a]]
        if dom.size > 0 and cod.size == 0:
            return []
        per_object.append(
            [
                FinFunction(dom, cod, mapping)
                for mapping in it.product(range(max(cod.size, 1)), repeat=dom.size)
            ]
            if cod.size > 0 or dom.size == 0
            else []
        )
        if dom.size == 0:
            per_object[-1] = [FinFunction(dom, cod, ())]
    found = []
    for combo in it.product(*per_object):
        candidate = ISetCell(F, G, M, tuple(combo))
        good = True
        for m in range(F.index.n_morphisms):
            a, b = F.index.mor_src[m], F.index.mor_tgt[m]
            if fn_compose(G.actions[M.on_mor[m]], combo[a]) != fn_compose(
                combo[b], F.actions[m]
            ):
                good = False
                break
        if good:
            found.append(candidate)
            if len(found) >= cap:
                break
    return found


def generate_cells(isets, fibrations, seed: int, n_iset_cells=14, n_2cells=8):
    """Deterministically build valid cells among the given objects."""
    rng = random.Random(seed)
    iset_cells = [identity_iset_cell(F) for F in isets]
    functor_cache: dict = {}

    def functors_between(F, G):
        key = (id(F.index), id(G.index))
        if key not in functor_cache:
            functor_cache[key] = list(all_functors(F.index, G.index))
        return functor_cache[key]

    attempts = 0
    built = 0
    while built < n_iset_cells and attempts < 500:
        attempts += 1
        F = rng.choice(isets)
        G = rng.choice(isets)
        functors = functors_between(F, G)
        if not functors:
            continue
        M = rng.choice(functors)
        mus = _valid_mus(F, G, M)
        if not mus:
            continue
        cell = rng.choice(mus)
        iset_cells.append(cell)
        built += 1

    iset_2cells = []
    for cell in iset_cells[: max(6, n_2cells)]:
        iset_2cells.append(identity_iset_2cell(cell))
    built = 0
    attempts = 0
    while built < n_2cells and attempts < 300:
        attempts += 1
        cell = rng.choice(iset_cells)
        F, G = cell.dom, cell.cod
        targets = functors_between(F, G)
        N = rng.choice(targets) if targets else None
        if N is None:
            continue
        etas = list(all_nat_transforms(cell.functor, N))
        if not etas:
            continue
        eta = rng.choice(etas)
        nu = tuple(
            fn_compose(G.actions[eta.components[a]], cell.mu[a])
            for a in range(F.index.n_objects)
        )
        target_cell = ISetCell(F, G, N, nu)
        iset_cells.append(target_cell)
        iset_2cells.append(ISet2Cell(cell, target_cell, eta))
        built += 1

    dfib_cells = [identity_dfib_cell(p) for p in fibrations]
    for cell in iset_cells[:10]:
        dfib_cells.append(_groth_cell(cell))
    # diagonal cells between identity fibrations
    id_fibs = [p for p in fibrations if p.proj.on_obj == tuple(range(p.total.n_objects))
               and p.total == p.base]
    built = 0
    attempts = 0
    while built < 8 and attempts < 200 and len(id_fibs) >= 1:
        attempts += 1
        p = rng.choice(id_fibs)
        q = rng.choice(id_fibs)
        functors = functor_cache.setdefault(
            (id(p.total), id(q.total), "cat"),
            list(all_functors(p.total, q.total)),
        )
        if not functors:
            continue
        Fc = rng.choice(functors)
        dfib_cells.append(DFibCell(p, q, Fc, Fc))
        built += 1

    dfib_2cells = [identity_dfib_2cell(c) for c in dfib_cells[:6]]
    for e in iset_2cells[:6]:
        dfib_2cells.append(_groth_2cell(e))
    # transformations on diagonal cells
    built = 0
    attempts = 0
    diag = [c for c in dfib_cells if c.top == c.bottom and c.dom in id_fibs]
    while built < 4 and attempts < 100 and diag:
        attempts += 1
        c = rng.choice(diag)
        partners = [d for d in diag if d.dom == c.dom and d.cod == c.cod]
        d = rng.choice(partners)
        etas = list(all_nat_transforms(c.top, d.top))
        if not etas:
            continue
        eta = rng.choice(etas)
        dfib_2cells.append(DFib2Cell(c, d, eta, eta))
        built += 1
    return iset_cells, dfib_cells, iset_2cells, dfib_2cells


def make_corpus(
    seed: int = DEFAULT_CORPUS_SEED,
    n_isets: int = 26,
    n_iset_cells: int = 14,
    n_2cells: int = 8,
) -> Corpus:
    """The shipped pseudorandom corpus; deterministic in the seed."""
    rng = random.Random(seed)
    pool = _pool_categories()
    isets = []
    for k in range(n_isets):
        name, cat, meta = pool[k % len(pool)]
        isets.append(_random_iset(name, cat, meta, rng, f"i{k}"))
    fibrations = []
    for k, F in enumerate(isets):
        if k % 2 == 0 and len(fibrations) < 10:
            fib = _groth_object(F)
            fibrations.append(
                DiscreteFibration(fib.proj, name=f"int_{F.name}")
            )
    from . import fixtures

    for cat in (fixtures.walk(), fixtures.l2(), fixtures.bz2(), fixtures.chain3()):
        fibrations.append(identity_fibration(cat))
    fibrations.append(embed_set_as_dfib(["s1", "s2"], name="twopoint"))
    fibrations.append(
        product_dfib(
            [identity_fibration(fixtures.walk()), embed_set_as_dfib(["t1", "t2"], name="T")],
            name="walk_x_set",
        )
    )
    iset_cells, dfib_cells, iset_2cells, dfib_2cells = generate_cells(
        isets, fibrations, seed + 1, n_iset_cells, n_2cells
    )
    return Corpus(
        isets=isets,
        fibrations=fibrations,
        iset_cells=iset_cells,
        dfib_cells=dfib_cells,
        iset_2cells=iset_2cells,
        dfib_2cells=dfib_2cells,
        params={
            "seed": seed,
            "max_objects": 3,
            "max_morphisms": 6,
            "max_value_size": 3,
        },
    )


# --------------------------------------------------------------------------
# round-trip verification


def roundtrip_report(corpus: Corpus) -> CheckReport:
    """Verify the 2-equivalence on the corpus: invertibility and
    naturality of both isomorphisms, and strict functoriality of the
    construction and its transpose on every composable corpus pair."""
    report = CheckReport()
    for k, v in corpus.params.items():
        report.info[f"corpus.{k}"] = str(v)
    report.count("corpus.objects", corpus.n_objects)
    report.count("corpus.1cells", corpus.n_1cells)
    report.count("corpus.2cells", corpus.n_2cells)

    for F in corpus.isets:
        report.merge(validate_indexed_set(F), where=F.name or "iset")
    for p in corpus.fibrations:
        report.merge(check_discrete_fibration(p), where=p.name or "fibration")
    if not report.ok:
        return report

    # invertibility of the pointwise isomorphisms
    for F in corpus.isets:
        fib = _groth_object(F)
        report.merge(check_discrete_fibration(fib), where=f"int[{F.name}]")
        phi = phi_component(F)
        inv = phi_inverse(F)
        report.merge(validate_iset_cell(phi), where=f"phi[{F.name}]")
        report.merge(validate_iset_cell(inv), where=f"phi_inv[{F.name}]")
        if iset_cell_compose(phi, inv) != identity_iset_cell(F):
            report.violation("roundtrip.phi_invertible", f"phi o phi_inv != id at {F.name}")
        if iset_cell_compose(inv, phi) != identity_iset_cell(phi.dom):
            report.violation("roundtrip.phi_invertible", f"phi_inv o phi != id at {F.name}")
        report.count("roundtrip.phi_components")
    for p in corpus.fibrations:
        TF = _transpose_object(p)
        report.merge(validate_indexed_set(TF), where=f"T[{p.name}]")
        psi = psi_component(p)
        inv = psi_inverse(p)
        report.merge(validate_dfib_cell(psi), where=f"psi[{p.name}]")
        report.merge(validate_dfib_cell(inv), where=f"psi_inv[{p.name}]")
        if dfib_cell_compose(psi, inv) != identity_dfib_cell(p):
            report.violation("roundtrip.psi_invertible", f"psi o psi_inv != id at {p.name}")
        if dfib_cell_compose(inv, psi) != identity_dfib_cell(psi.dom):
            report.violation("roundtrip.psi_invertible", f"psi_inv o psi != id at {p.name}")
        report.count("roundtrip.psi_components")

    # naturality against every corpus 1-cell
    for cell in corpus.iset_cells:
        report.merge(validate_iset_cell(cell), where=cell.name or "iset-cell")
        image = _groth_cell(cell)
        report.merge(validate_dfib_cell(image), where="int[cell]")
        back = _transpose_cell(image)
        lhs = iset_cell_compose(phi_component(cell.cod), back)
        rhs = iset_cell_compose(cell, phi_component(cell.dom))
        report.count("roundtrip.naturality_squares")
        if lhs != rhs:
            report.violation(
                "roundtrip.phi_naturality",
                f"naturality square fails at cell {cell.name or '?'}",
            )
    for cell in corpus.dfib_cells:
        report.merge(validate_dfib_cell(cell), where=cell.name or "dfib-cell")
        image = _transpose_cell(cell)
        report.merge(validate_iset_cell(image), where="T[cell]")
        back = _groth_cell(image)
        lhs = dfib_cell_compose(psi_component(cell.cod), back)
        rhs = dfib_cell_compose(cell, psi_component(cell.dom))
        report.count("roundtrip.naturality_squares")
        if lhs != rhs:
            report.violation(
                "roundtrip.psi_naturality",
                f"naturality square fails at cell {cell.name or '?'}",
            )

    # naturality against every corpus 2-cell (whiskering equality)
    for e in corpus.iset_2cells:
        report.merge(validate_iset_cell(e), where="iset-2cell")
        image = _groth_2cell(e)
        report.merge(validate_dfib_cell(image), where="int[2cell]")
        back = _transpose_2cell(image)
        lhs = iset_whisker_post(phi_component(e.dom.cod), back)
        rhs = iset_whisker_pre(e, phi_component(e.dom.dom))
        report.count("roundtrip.naturality_squares")
        if lhs != rhs:
            report.violation("roundtrip.phi_naturality_2", "2-cell whiskering differs")
    for e in corpus.dfib_2cells:
        report.merge(validate_dfib_cell(e), where="dfib-2cell")
        image = _transpose_2cell(e)
        report.merge(validate_iset_cell(image), where="T[2cell]")
        back = _groth_2cell(image)
        lhs = dfib_whisker_post(psi_component(e.dom.cod), back)
        rhs = dfib_whisker_pre(e, psi_component(e.dom.dom))
        report.count("roundtrip.naturality_squares")
        if lhs != rhs:
            report.violation("roundtrip.psi_naturality_2", "2-cell whiskering differs")

    # strict functoriality: identities and all composable corpus pairs
    for F in corpus.isets:
        if _groth_cell(identity_iset_cell(F)) != identity_dfib_cell(_groth_object(F)):
            report.violation("roundtrip.functorial_id", f"int(id) != id at {F.name}")
    for p in corpus.fibrations:
        if _transpose_cell(identity_dfib_cell(p)) != identity_iset_cell(
            _transpose_object(p)
        ):
            report.violation("roundtrip.functorial_id", f"T(id) != id at {p.name}")
    for c1 in corpus.iset_cells:
        for c2 in corpus.iset_cells:
            if c1.cod != c2.dom:
                continue
            report.count("roundtrip.functoriality_pairs")
            if _groth_cell(iset_cell_compose(c2, c1)) != dfib_cell_compose(
                _groth_cell(c2), _groth_cell(c1)
            ):
                report.violation(
                    "roundtrip.functorial_compose", "int breaks a composite"
                )
    for c1 in corpus.dfib_cells:
        for c2 in corpus.dfib_cells:
            if c1.cod != c2.dom:
                continue
            report.count("roundtrip.functoriality_pairs")
            if _transpose_cell(dfib_cell_compose(c2, c1)) != iset_cell_compose(
                _transpose_cell(c2), _transpose_cell(c1)
            ):
                report.violation(
                    "roundtrip.functorial_compose", "T breaks a composite"
                )
    for e1 in corpus.iset_2cells:
        for e2 in corpus.iset_2cells:
            if e1.cod != e2.dom:
                continue
            report.count("roundtrip.functoriality_pairs")
            if _groth_2cell(iset_2cell_vcompose(e2, e1)) != dfib_2cell_vcompose(
                _groth_2cell(e2), _groth_2cell(e1)
            ):
                report.violation(
                    "roundtrip.functorial_compose", "int breaks a vertical composite"
                )
    for e1 in corpus.dfib_2cells:
        for e2 in corpus.dfib_2cells:
            if e1.cod != e2.dom:
                continue
            report.count("roundtrip.functoriality_pairs")
            if _transpose_2cell(dfib_2cell_vcompose(e2, e1)) != iset_2cell_vcompose(
                _transpose_2cell(e2), _transpose_2cell(e1)
            ):
                report.violation(
                    "roundtrip.functorial_compose", "T breaks a vertical composite"
                )
    return report
