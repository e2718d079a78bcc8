"""Arity-truncated symmetric operads in Set.

Carrier elements are plain label strings so that builtin and file-defined
operads share one representation.  Composition is indexed by a map of
finite ordinals ``f: {1..m} -> {1..n}``: the outer element lives in O(n),
the i-th inner element in O(|f^-1(i)|), and the result in O(m).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .fincore import (
    FinMap,
    all_maps,
    block_permutation,
    factorize_monotone_perm,
    fiber,
    fm_compose,
    identity_map,
    induced_fiber_map,
    terminal_map,
)
from .report import CheckReport


class CompositionUndefined(Exception):
    """Raised when a composition entry is missing or ill-typed."""


@dataclass
class Operad:
    name: str
    max_arity: int
    carriers: tuple[tuple[str, ...], ...]
    unit: str
    rule: Optional[Callable[[FinMap, str, tuple[str, ...]], str]] = None
    table: Optional[dict] = None
    origin: Optional[tuple] = None
    _cache: dict = field(default_factory=dict, repr=False)

    def elements(self, n: int) -> tuple[str, ...]:
        if not 0 <= n <= self.max_arity:
            raise IndexError(f"arity {n} outside truncation 0..{self.max_arity}")
        return self.carriers[n]

    def compose(self, f: FinMap, p: str, qs: tuple[str, ...]) -> str:
        if f.source > self.max_arity or f.target > self.max_arity:
            raise CompositionUndefined(
                f"map {f.label()} exceeds truncation {self.max_arity}"
            )
        if p not in self.carriers[f.target]:
            raise CompositionUndefined(f"{p!r} is not an element of arity {f.target}")
        qs = tuple(qs)
        if len(qs) != f.target:
            raise CompositionUndefined(
                f"expected {f.target} inner elements, got {len(qs)}"
            )
        for i, q in enumerate(qs, start=1):
            size = len(fiber(f, i))
            if q not in self.carriers[size]:
                raise CompositionUndefined(
                    f"{q!r} is not an element of arity {size} (fiber {i} of {f.label()})"
                )
        key = (f.target, f.values, p, qs)
        if key in self._cache:
            return self._cache[key]
        if self.rule is not None:
            result = self.rule(f, p, qs)
        elif self.table is not None:
            try:
                result = self.table[key]
            except KeyError:
                raise CompositionUndefined(
                    f"no table entry for mu {f.label()} {p} {' '.join(qs)}"
                ) from None
        else:
            raise CompositionUndefined("operad has neither a rule nor a table")
        self._cache[key] = result
        return result


def composition_keys(o: Operad):
    """Every (f, p, qs) the truncation defines, in deterministic order."""
    for n in range(o.max_arity + 1):
        for m in range(o.max_arity + 1):
            for f in all_maps(m, n):
                inner = [o.elements(len(fiber(f, i))) for i in range(1, n + 1)]
                for p in o.elements(n):
                    for qs in itertools.product(*inner):
                        yield f, p, qs


def operads_equal(a: Operad, b: Operad) -> bool:
    """Table equality over the shared truncation."""
    if a.max_arity != b.max_arity or a.carriers != b.carriers or a.unit != b.unit:
        return False
    for f, p, qs in composition_keys(a):
        try:
            if a.compose(f, p, qs) != b.compose(f, p, qs):
                return False
        except CompositionUndefined:
            return False
    return True


def with_overrides(o: Operad, overrides: dict, name: str = "") -> Operad:
    """A copy of ``o`` whose composition is redirected on the given keys;
    used to build deliberately broken variants in tests and fixtures.

    Keys are (f, p, qs) triples.
    """
    frozen = {(f.target, f.values, p, tuple(qs)): r for (f, p, qs), r in overrides.items()}

    def rule(f: FinMap, p: str, qs: tuple[str, ...]) -> str:
        key = (f.target, f.values, p, qs)
        if key in frozen:
            return frozen[key]
        return o.compose(f, p, qs)

    return Operad(
        name=name or f"{o.name}-broken",
        max_arity=o.max_arity,
        carriers=o.carriers,
        unit=o.unit,
        rule=rule,
    )


# --------------------------------------------------------------------------
# builtin operads


def build_comm(max_arity: int) -> Operad:
    """The terminal operad: a single operation in every arity."""
    if max_arity < 1:
        raise ValueError("max_arity must be at least 1")
    carriers = tuple(("*",) for _ in range(max_arity + 1))
    return Operad(
        name=f"Comm({max_arity})",
        max_arity=max_arity,
        carriers=carriers,
        unit="*",
        rule=lambda f, p, qs: "*",
        origin=("comm",),
    )


def perm_label(p: FinMap) -> str:
    return p.label()


def build_assoc(max_arity: int) -> Operad:
    """Permutations of every arity; composition twists the unique
    monotone-times-permutation factorization against the fiber blocks."""
    if max_arity < 1:
        raise ValueError("max_arity must be at least 1")
    perms = [
        {perm_label(p): p for p in map_perms}
        for map_perms in (
            tuple(
                FinMap(n, n, values)
                for values in itertools.permutations(range(1, n + 1))
            )
            for n in range(max_arity + 1)
        )
    ]
    carriers = tuple(tuple(perms[n].keys()) for n in range(max_arity + 1))

    def rule(f: FinMap, p: str, qs: tuple[str, ...]) -> str:
        sigma = perms[f.target][p]
        taus = tuple(
            perms[len(fiber(f, i))][q] for i, q in enumerate(qs, start=1)
        )
        twist = block_permutation(f, taus)
        _, sigma_f = factorize_monotone_perm(fm_compose(sigma, f))
        return perm_label(fm_compose(sigma_f, twist))

    return Operad(
        name=f"Assoc({max_arity})",
        max_arity=max_arity,
        carriers=carriers,
        unit=perm_label(identity_map(1)),
        rule=rule,
        origin=("assoc",),
    )


# --------------------------------------------------------------------------
# semirings and the quasi-convexity operad


@dataclass
class Semiring:
    name: str
    elements: tuple[str, ...]
    add: dict[tuple[str, str], str]
    mul: dict[tuple[str, str], str]
    zero: str
    one: str

    def sum(self, labels) -> str:
        acc = self.zero
        for x in labels:
            acc = self.add[(acc, x)]
        return acc


def boolean_semiring() -> Semiring:
    elems = ("0", "1")
    return Semiring(
        name="Bool",
        elements=elems,
        add={(a, b): ("1" if "1" in (a, b) else "0") for a in elems for b in elems},
        mul={(a, b): ("1" if a == b == "1" else "0") for a in elems for b in elems},
        zero="0",
        one="1",
    )


def check_semiring(r: Semiring) -> CheckReport:
    report = CheckReport()
    elems = r.elements
    if len(set(elems)) != len(elems):
        report.structural("semiring.labels", "duplicate element labels")
    for table, op in ((r.add, "add"), (r.mul, "mul")):
        for a in elems:
            for b in elems:
                v = table.get((a, b))
                if v is None:
                    report.structural(f"semiring.{op}_missing", f"{op}({a}, {b}) has no entry")
                elif v not in elems:
                    report.structural(f"semiring.{op}_range", f"{op}({a}, {b}) = {v!r} not an element")
    if r.zero not in elems or r.one not in elems:
        report.structural("semiring.units", "zero or one is not an element")
    if report.records:
        return report
    for a in elems:
        if r.add[(r.zero, a)] != a or r.add[(a, r.zero)] != a:
            report.violation("semiring.add_unit", f"0 + {a} laws fail")
        if r.mul[(r.one, a)] != a or r.mul[(a, r.one)] != a:
            report.violation("semiring.mul_unit", f"1 * {a} laws fail")
        if r.mul[(r.zero, a)] != r.zero or r.mul[(a, r.zero)] != r.zero:
            report.violation("semiring.absorbing", f"0 * {a} laws fail")
        for b in elems:
            if r.add[(a, b)] != r.add[(b, a)]:
                report.violation("semiring.add_comm", f"{a} + {b} != {b} + {a}")
            for c in elems:
                report.count("semiring.instances")
                if r.add[(r.add[(a, b)], c)] != r.add[(a, r.add[(b, c)])]:
                    report.violation("semiring.add_assoc", f"({a}+{b})+{c}")
                if r.mul[(r.mul[(a, b)], c)] != r.mul[(a, r.mul[(b, c)])]:
                    report.violation("semiring.mul_assoc", f"({a}{b}){c}")
                if r.mul[(a, r.add[(b, c)])] != r.add[(r.mul[(a, b)], r.mul[(a, c)])]:
                    report.violation("semiring.left_dist", f"{a}({b}+{c})")
                if r.mul[(r.add[(a, b)], c)] != r.add[(r.mul[(a, c)], r.mul[(b, c)])]:
                    report.violation("semiring.right_dist", f"({a}+{b}){c}")
    return report


def qconv_label(coords) -> str:
    return "(" + ",".join(coords) + ")"


def qconv_coords(label: str) -> tuple[str, ...]:
    inner = label.strip()[1:-1]
    return tuple(t.strip() for t in inner.split(",")) if inner else ()


def build_qconv(r: Semiring, max_arity: int) -> Operad:
    """Tuples over the semiring summing to one; no nullary operations
    unless the semiring is trivial, so empty-fiber compositions have an
    empty domain."""
    if max_arity < 1:
        raise ValueError("max_arity must be at least 1")
    carriers = []
    for n in range(max_arity + 1):
        level = tuple(
            qconv_label(coords)
            for coords in itertools.product(r.elements, repeat=n)
            if r.sum(coords) == r.one
        )
        carriers.append(level)

    def rule(f: FinMap, p: str, qs: tuple[str, ...]) -> str:
        alpha = qconv_coords(p)
        betas = [qconv_coords(q) for q in qs]
        out = [r.zero] * f.source
        for i in range(1, f.target + 1):
            for k, j in enumerate(fiber(f, i)):
                out[j - 1] = r.mul[(alpha[i - 1], betas[i - 1][k])]
        return qconv_label(out)

    return Operad(
        name=f"QConv[{r.name}]({max_arity})",
        max_arity=max_arity,
        carriers=tuple(carriers),
        unit=qconv_label((r.one,)),
        rule=rule,
        origin=("qconv", r),
    )


# --------------------------------------------------------------------------
# axiom checking


def check_operad_axioms(o: Operad) -> CheckReport:
    """Exhaustive unit and associativity check over the truncation.

    Instances whose inner element slots are empty (an empty fiber with
    O(0) empty) do not exist and are skipped, mirroring the restriction
    of composition to surjective maps when there are no nullary
    operations.
    """
    report = CheckReport()
    n_arities = o.max_arity + 1
    if len(o.carriers) != n_arities:
        report.structural("operad.carriers", "carrier list does not match truncation")
        return report
    if o.unit not in o.carriers[1]:
        report.structural("operad.unit", f"unit {o.unit!r} not in arity-1 carrier")
        return report

    def guarded(f, p, qs, context):
        try:
            result = o.compose(f, p, qs)
        except CompositionUndefined as exc:
            report.structural("operad.composition", f"{context}: {exc}")
            return None
        if result not in o.carriers[f.source]:
            report.structural(
                "operad.closure",
                f"{context}: mu {f.label()} {p} {' '.join(qs)} = {result!r} not in carrier",
            )
            return None
        return result

    # unit laws
    for n in range(n_arities):
        for p in o.elements(n):
            report.count("operad.unit_identity_instances")
            got = guarded(identity_map(n), p, (o.unit,) * n, "unit law")
            if got is not None and got != p:
                report.violation(
                    "operad.unit_identity",
                    f"mu {identity_map(n).label()} {p} eta^%d = {got} != {p}" % n,
                )
            report.count("operad.unit_terminal_instances")
            got = guarded(terminal_map(n), o.unit, (p,), "unit law")
            if got is not None and got != p:
                report.violation(
                    "operad.unit_terminal",
                    f"mu {terminal_map(n).label()} eta {p} = {got} != {p}",
                )

    # associativity
    for n in range(n_arities):
        for m in range(n_arities):
            for f in all_maps(m, n):
                f_inner = [o.elements(len(fiber(f, i))) for i in range(1, n + 1)]
                f_fibers = [fiber(f, i) for i in range(1, n + 1)]
                for ell in range(n_arities):
                    for g in all_maps(ell, m):
                        g_inner = [
                            o.elements(len(fiber(g, j))) for j in range(1, m + 1)
                        ]
                        fg = fm_compose(f, g)
                        g_is = [induced_fiber_map(f, g, i) for i in range(1, n + 1)]
                        for p in o.elements(n):
                            for qs in itertools.product(*f_inner):
                                for rs in itertools.product(*g_inner):
                                    report.count("operad.assoc_instances")
                                    mid = guarded(f, p, qs, "associativity")
                                    if mid is None:
                                        continue
                                    lhs = guarded(g, mid, rs, "associativity")
                                    nested = []
                                    for i in range(n):
                                        sub = tuple(rs[j - 1] for j in f_fibers[i])
                                        nested.append(
                                            guarded(g_is[i], qs[i], sub, "associativity")
                                        )
                                    if lhs is None or any(x is None for x in nested):
                                        continue
                                    rhs = guarded(fg, p, tuple(nested), "associativity")
                                    if rhs is None:
                                        continue
                                    if lhs != rhs:
                                        report.violation(
                                            "operad.assoc",
                                            "associativity fails at g="
                                            f"{g.label()} f={f.label()} p={p} "
                                            f"q=({','.join(qs)}) r=({','.join(rs)})",
                                        )
    return report


# --------------------------------------------------------------------------
# operad morphisms


@dataclass
class OperadMorphism:
    dom: Operad
    cod: Operad
    maps: tuple[dict, ...]
    name: str = ""

    def apply(self, n: int, p: str) -> str:
        return self.maps[n][p]


def identity_operad_morphism(o: Operad) -> OperadMorphism:
    return OperadMorphism(
        dom=o,
        cod=o,
        maps=tuple({p: p for p in o.elements(n)} for n in range(o.max_arity + 1)),
        name=f"id_{o.name}",
    )


def terminal_morphism(o: Operad) -> OperadMorphism:
    """The unique morphism into the terminal operad."""
    comm = build_comm(o.max_arity)
    return OperadMorphism(
        dom=o,
        cod=comm,
        maps=tuple({p: "*" for p in o.elements(n)} for n in range(o.max_arity + 1)),
        name=f"{o.name}->Comm",
    )


def check_operad_morphism(h: OperadMorphism) -> CheckReport:
    report = CheckReport()
    o, p_op = h.dom, h.cod
    if o.max_arity != p_op.max_arity:
        report.structural("opmorphism.truncation", "arity mismatch between dom and cod")
        return report
    for n in range(o.max_arity + 1):
        for x in o.elements(n):
            y = h.maps[n].get(x)
            if y is None:
                report.structural("opmorphism.total", f"no image for {x!r} at arity {n}")
            elif y not in p_op.elements(n):
                report.structural(
                    "opmorphism.range", f"image {y!r} of {x!r} not in arity-{n} carrier"
                )
    if report.records:
        return report
    if h.maps[1][o.unit] != p_op.unit:
        report.violation("opmorphism.unit", f"unit maps to {h.maps[1][o.unit]!r}")
    for f, p, qs in composition_keys(o):
        report.count("opmorphism.instances")
        lhs = h.maps[f.source][o.compose(f, p, qs)]
        rhs = p_op.compose(
            f,
            h.maps[f.target][p],
            tuple(h.maps[len(fiber(f, i))][q] for i, q in enumerate(qs, start=1)),
        )
        if lhs != rhs:
            report.violation(
                "opmorphism.composition",
                f"not preserved at mu {f.label()} {p} ({','.join(qs)})",
            )
    return report
