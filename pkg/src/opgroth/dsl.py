"""The unified declarative text format.

Line-oriented: ``[kind name]`` section headers, ``key = value`` entries,
arrow declarations ``f : a -> b``, comments from ``#`` to end of line,
LF or CRLF.  Bracket and parenthesis groups are single tokens, so tuple
and map literals may appear anywhere a label does.  Parsing is total:
every error becomes a diagnostic with a 1-based line and column, and an
error in one section does not stop collection in the others.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .fincore import FinMap, make_category
from .fib2cat import (
    DiscreteFibration,
    FinFunction,
    IndexedSet,
    iset_from_tables,
)
from .fincore import CatFunctor, NatTransform
from .omon import (
    LaxOMonFunctor,
    LaxSetFunctor,
    OMonCategory,
    OMonTransformation,
    TensorTable,
    o_set_product,
    _mixed_encode,
)
from .ogroth import OFibObject, omons_equal
from .operads import (
    Operad,
    Semiring,
    build_assoc,
    build_comm,
    build_qconv,
    composition_keys,
    operads_equal,
)

SECTION_KINDS = (
    "category",
    "functor",
    "nattrans",
    "fibration",
    "iset",
    "operad",
    "semiring",
    "omon",
    "laxfun",
    "omontrans",
    "ofib",
    "laxtoset",
)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str
    section: str = ""

    def render(self) -> str:
        where = f" in [{self.section}]" if self.section else ""
        return f"{self.line}:{self.col}: {self.message}{where}"


@dataclass
class RawLine:
    line: int
    tokens: list  # (text, col) pairs


@dataclass
class RawSection:
    kind: str
    name: str
    line: int
    entries: list = field(default_factory=list)


@dataclass
class Section:
    kind: str
    name: str
    value: object = None


@dataclass
class SpecDocument:
    sections: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    def get(self, name: str):
        for s in self.sections:
            if s.name == name:
                return s
        raise KeyError(f"no section named {name!r}")

    def by_kind(self, kind: str):
        return [s for s in self.sections if s.kind == kind]


# --------------------------------------------------------------------------
# tokenizer


def _tokenize_line(text: str, lineno: int, diagnostics: list, section: str):
    hash_pos = text.find("#")
    if hash_pos >= 0:
        text = text[:hash_pos]
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "=,:":
            tokens.append((ch, i + 1))
            i += 1
            continue
        if ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(("->", i + 1))
            i += 2
            continue
        start = i
        buf = []
        while i < n:
            ch = text[i]
            if ch.isspace() or ch in "=,:" or (ch == "-" and i + 1 < n and text[i + 1] == ">"):
                break
            if ch in "([":
                close = ")" if ch == "(" else "]"
                depth = 0
                j = i
                while j < n:
                    if text[j] in "([":
                        depth += 1
                    elif text[j] in ")]":
                        depth -= 1
                        if depth == 0:
                            break
                    j += 1
                if j >= n or depth != 0:
                    diagnostics.append(
                        Diagnostic(lineno, i + 1, "unbalanced bracket group", section)
                    )
                    return None
                buf.append(text[i : j + 1])
                i = j + 1
                continue
            if ch in ")]":
                diagnostics.append(
                    Diagnostic(lineno, i + 1, "unmatched closing bracket", section)
                )
                return None
            buf.append(ch)
            i += 1
        tokens.append(("".join(buf), start + 1))
    return tokens


def _split_on(tokens, sep):
    groups = [[]]
    for tok in tokens:
        if tok[0] == sep:
            groups.append([])
        else:
            groups[-1].append(tok)
    return groups


def _parse_tuple(text: str):
    """Split a parenthesized literal at top-level commas."""
    inner = text[1:-1]
    parts = []
    depth = 0
    buf = []
    for ch in inner:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
    tail = "".join(buf).strip()
    if tail or parts:
        parts.append(tail)
    return tuple(parts)


def _parse_finmap_literal(text: str, target: int) -> FinMap:
    inner = text[1:-1].strip()
    values = tuple(int(t.strip()) for t in inner.split(",")) if inner else ()
    return FinMap(len(values), target, values)


# --------------------------------------------------------------------------
# raw parse


def _parse_raw(text: str, diagnostics: list):
    sections: list[RawSection] = []
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                diagnostics.append(
                    Diagnostic(lineno, 1, "malformed section header", "")
                )
                current = None
                continue
            parts = stripped[1:-1].split()
            if len(parts) != 2:
                diagnostics.append(
                    Diagnostic(lineno, 1, "section header needs a kind and a name", "")
                )
                current = None
                continue
            kind, name = parts
            if kind not in SECTION_KINDS:
                diagnostics.append(
                    Diagnostic(lineno, 2, f"unknown section kind {kind!r}", name)
                )
                current = None
                continue
            current = RawSection(kind=kind, name=name, line=lineno)
            sections.append(current)
            continue
        if current is None:
            diagnostics.append(
                Diagnostic(lineno, 1, "content before any section header", "")
            )
            continue
        tokens = _tokenize_line(line, lineno, diagnostics, current.name)
        if tokens:
            current.entries.append(RawLine(line=lineno, tokens=tokens))
    names = {}
    for s in sections:
        if s.name in names:
            diagnostics.append(
                Diagnostic(s.line, 1, f"duplicate section name {s.name!r}", s.name)
            )
        names[s.name] = s
    return sections


# --------------------------------------------------------------------------
# resolution


class _Resolver:
    def __init__(self, raw_sections, diagnostics, default_max_arity: int = 3):
        self.raw = {s.name: s for s in raw_sections}
        self.order = [s.name for s in raw_sections]
        self.default_max_arity = default_max_arity
        self.diagnostics = diagnostics
        self.values: dict[str, object] = {}
        self.failed: set[str] = set()
        self.in_progress: set[str] = set()

    def diag(self, raw: RawSection, line, col, message):
        self.diagnostics.append(Diagnostic(line, col, message, raw.name))

    def resolve_all(self) -> list:
        out = []
        for name in self.order:
            value = self.resolve(name)
            out.append(Section(kind=self.raw[name].kind, name=name, value=value))
        return out

    def resolve(self, name: str):
        if name in self.values:
            return self.values[name]
        if name in self.failed:
            return None
        if name not in self.raw:
            return None
        if name in self.in_progress:
            raw = self.raw[name]
            self.diag(raw, raw.line, 1, f"circular reference through {name!r}")
            self.failed.add(name)
            return None
        self.in_progress.add(name)
        raw = self.raw[name]
        try:
            value = getattr(self, f"_build_{raw.kind}")(raw)
        except Exception as exc:  # noqa: BLE001 - surface as diagnostic
            self.diag(raw, raw.line, 1, f"internal error: {exc}")
            value = None
        self.in_progress.discard(name)
        if value is None:
            self.failed.add(name)
        else:
            self.values[name] = value
        return value

    def ref(self, raw, line, token, kinds):
        name, col = token
        if name not in self.raw:
            self.diag(raw, line, col, f"unresolved reference {name!r}")
            return None
        if self.raw[name].kind not in kinds:
            self.diag(
                raw, line, col,
                f"{name!r} is a {self.raw[name].kind}, expected one of {kinds}",
            )
            return None
        return self.resolve(name)

    # -- helpers -------------------------------------------------------------

    @staticmethod
    def _key_values(raw):
        """Yield (key tokens, value token groups, line) for key=value lines."""
        for entry in raw.entries:
            texts = [t for t, _ in entry.tokens]
            if "=" in texts:
                idx = texts.index("=")
                yield entry.tokens[:idx], entry.tokens[idx + 1 :], entry
            else:
                yield None, None, entry

    def _single(self, raw, entry, value_tokens, what):
        if len(value_tokens) != 1:
            line = entry.line
            col = value_tokens[0][1] if value_tokens else 1
            self.diag(raw, line, col, f"expected a single {what}")
            return None
        return value_tokens[0]

    def _list_values(self, value_tokens):
        return [g[0][0] for g in _split_on(value_tokens, ",") if g]

    # -- categories ------------------------------------------------------------

    def _build_category(self, raw):
        objects = None
        arrows = []
        compose = {}
        ok = True
        for key, value, entry in self._key_values(raw):
            texts = [t for t, _ in entry.tokens]
            if key is None:
                if ":" in texts and "->" in texts:
                    ci, ai = texts.index(":"), texts.index("->")
                    if ci == 1 and ai == 3 and len(texts) == 5:
                        arrows.append((texts[0], texts[2], texts[4]))
                        continue
                self.diag(raw, entry.line, entry.tokens[0][1], "unrecognized line")
                ok = False
                continue
            key_texts = [t for t, _ in key]
            if key_texts == ["objects"]:
                objects = self._list_values(value)
            elif key_texts and key_texts[0] == "compose" and len(key_texts) == 3:
                target = self._single(raw, entry, value, "morphism")
                if target is None:
                    ok = False
                    continue
                compose[(key_texts[1], key_texts[2])] = target[0]
            else:
                self.diag(raw, entry.line, key[0][1], f"unknown key {' '.join(key_texts)!r}")
                ok = False
        if objects is None:
            self.diag(raw, raw.line, 1, "category needs an 'objects' line")
            return None
        label_pool = set(objects)
        for label, s, t in arrows:
            if label in label_pool:
                self.diag(raw, raw.line, 1, f"arrow label {label!r} collides with another label")
                return None
            label_pool.add(label)
            if s not in objects or t not in objects:
                self.diag(raw, raw.line, 1, f"arrow {label!r} references unknown objects")
                return None
        try:
            cat = make_category(raw.name, objects, arrows, compose)
        except KeyError as exc:
            self.diag(raw, raw.line, 1, f"bad composition entry: {exc}")
            return None
        return cat if ok else None

    def _build_functor(self, raw):
        dom = cod = None
        obj_map = {}
        mor_map = {}
        for key, value, entry in self._key_values(raw):
            if key is None:
                self.diag(raw, entry.line, entry.tokens[0][1], "unrecognized line")
                return None
            key_texts = [t for t, _ in key]
            if key_texts == ["dom"]:
                tok = self._single(raw, entry, value, "category name")
                dom = self.ref(raw, entry.line, tok, ("category",)) if tok else None
            elif key_texts == ["cod"]:
                tok = self._single(raw, entry, value, "category name")
                cod = self.ref(raw, entry.line, tok, ("category",)) if tok else None
            elif len(key_texts) == 2 and key_texts[0] == "obj":
                tok = self._single(raw, entry, value, "object")
                if tok:
                    obj_map[key_texts[1]] = tok[0]
            elif len(key_texts) == 2 and key_texts[0] == "mor":
                tok = self._single(raw, entry, value, "morphism")
                if tok:
                    mor_map[key_texts[1]] = tok[0]
            else:
                self.diag(raw, entry.line, key[0][1], f"unknown key {' '.join(key_texts)!r}")
                return None
        if dom is None or cod is None:
            self.diag(raw, raw.line, 1, "functor needs dom and cod")
            return None
        from .fincore import functor_from_labels

        try:
            return functor_from_labels(dom, cod, obj_map, mor_map, name=raw.name)
        except KeyError as exc:
            self.diag(raw, raw.line, 1, str(exc))
            return None

    def _build_nattrans(self, raw):
        dom = cod = None
        at = {}
        for key, value, entry in self._key_values(raw):
            if key is None:
                self.diag(raw, entry.line, entry.tokens[0][1], "unrecognized line")
                return None
            key_texts = [t for t, _ in key]
            if key_texts == ["dom"]:
                tok = self._single(raw, entry, value, "functor name")
                dom = self.ref(raw, entry.line, tok, ("functor",)) if tok else None
            elif key_texts == ["cod"]:
                tok = self._single(raw, entry, value, "functor name")
                cod = self.ref(raw, entry.line, tok, ("functor",)) if tok else None
            elif len(key_texts) == 2 and key_texts[0] == "at":
                tok = self._single(raw, entry, value, "morphism")
                if tok:
                    at[key_texts[1]] = tok[0]
            else:
                self.diag(raw, entry.line, key[0][1], f"unknown key {' '.join(key_texts)!r}")
                return None
        if dom is None or cod is None:
            self.diag(raw, raw.line, 1, "nattrans needs dom and cod")
            return None
        try:
            components = tuple(
                dom.cod.mor_index(at[obj]) for obj in dom.dom.objects
            )
        except KeyError as exc:
            self.diag(raw, raw.line, 1, f"bad component: {exc}")
            return None
        return NatTransform(dom, cod, components, name=raw.name)

    def _build_fibration(self, raw):
        proj = None
        for key, value, entry in self._key_values(raw):
            if key is None:
                self.diag(raw, entry.line, entry.tokens[0][1], "unrecognized line")
                return None
            key_texts = [t for t, _ in key]
            if key_texts == ["proj"]:
                tok = self._single(raw, entry, value, "functor name")
                proj = self.ref(raw, entry.line, tok, ("functor",)) if tok else None
            else:
                self.diag(raw, entry.line, key[0][1], f"unknown key {' '.join(key_texts)!r}")
                return None
        if proj is None:
            self.diag(raw, raw.line, 1, "fibration needs a proj functor")
            return None
        return DiscreteFibration(proj, name=raw.name)

    def _build_iset(self, raw):
        index = None
        sets = {}
        maps: dict = {}
        for key, value, entry in self._key_values(raw):
            if key is None:
                self.diag(raw, entry.line, entry.tokens[0][1], "unrecognized line")
                return None
            key_texts = [t for t, _ in key]
            if key_texts == ["index"]:
                tok = self._single(raw, entry, value, "category name")
                index = self.ref(raw, entry.line, tok, ("category",)) if tok else None
            elif len(key_texts) == 2 and key_texts[0] == "set":
                sets[key_texts[1]] = self._list_values(value)
            elif len(key_texts) == 3 and key_texts[0] == "map":
                tok = self._single(raw, entry, value, "element")
                if tok:
                    maps.setdefault(key_texts[1], {})[key_texts[2]] = tok[0]
            else:
                self.diag(raw, entry.line, key[0][1], f"unknown key {' '.join(key_texts)!r}")
                return None
        if index is None:
            self.diag(raw, raw.line, 1, "indexed set needs an index category")
            return None
        for obj in index.objects:
            sets.setdefault(obj, [])
        try:
            return iset_from_tables(index, sets, maps, name=raw.name)
        except (KeyError, ValueError) as exc:
            self.diag(raw, raw.line, 1, str(exc))
            return None

    def _build_semiring(self, raw):
        elements = None
        zero = one = None
        add = {}
        mul = {}
        for key, value, entry in self._key_values(raw):
            if key is None:
                self.diag(raw, entry.line, entry.tokens[0][1], "unrecognized line")
                return None
            key_texts = [t for t, _ in key]
            if key_texts == ["elements"]:
                elements = self._list_values(value)
            elif key_texts == ["zero"]:
                tok = self._single(raw, entry, value, "element")
                zero = tok[0] if tok else None
            elif key_texts == ["one"]:
                tok = self._single(raw, entry, value, "element")
                one = tok[0] if tok else None
            elif len(key_texts) == 3 and key_texts[0] in ("add", "mul"):
                tok = self._single(raw, entry, value, "element")
                if tok:
                    table = add if key_texts[0] == "add" else mul
                    table[(key_texts[1], key_texts[2])] = tok[0]
            else:
                self.diag(raw, entry.line, key[0][1], f"unknown key {' '.join(key_texts)!r}")
                return None
        if elements is None or zero is None or one is None:
            self.diag(raw, raw.line, 1, "semiring needs elements, zero, and one")
            return None
        return Semiring(
            name=raw.name, elements=tuple(elements), add=add, mul=mul, zero=zero, one=one
        )

    def _build_operad(self, raw):
        builtin = None
        max_arity = None
        semiring = None
        arities = {}
        unit = None
        mu_lines = []
        for key, value, entry in self._key_values(raw):
            if key is None:
                self.diag(raw, entry.line, entry.tokens[0][1], "unrecognized line")
                return None
            key_texts = [t for t, _ in key]
            if key_texts == ["builtin"]:
                tok = self._single(raw, entry, value, "builtin name")
                builtin = tok[0] if tok else None
            elif key_texts == ["max_arity"]:
                tok = self._single(raw, entry, value, "integer")
                if tok:
                    max_arity = int(tok[0])
            elif key_texts == ["semiring"]:
                tok = self._single(raw, entry, value, "semiring name")
                semiring = self.ref(raw, entry.line, tok, ("semiring",)) if tok else None
            elif len(key_texts) == 2 and key_texts[0] == "arity":
                arities[int(key_texts[1])] = self._list_values(value)
            elif key_texts == ["unit"]:
                tok = self._single(raw, entry, value, "element")
                unit = tok[0] if tok else None
            elif key_texts and key_texts[0] == "mu":
                mu_lines.append((key_texts, value, entry))
            else:
                self.diag(raw, entry.line, key[0][1], f"unknown key {' '.join(key_texts)!r}")
                return None
        if builtin is not None:
            n = max_arity if max_arity is not None else self.default_max_arity
            if builtin == "comm":
                op = build_comm(n)
            elif builtin == "assoc":
                op = build_assoc(n)
            elif builtin == "qconv":
                if semiring is None:
                    self.diag(raw, raw.line, 1, "qconv needs a semiring reference")
                    return None
                op = build_qconv(semiring, n)
            else:
                self.diag(raw, raw.line, 1, f"unknown builtin {builtin!r}")
                return None
            op.name = raw.name
            return op
        if not arities or unit is None:
            self.diag(raw, raw.line, 1, "explicit operad needs arity lines and a unit")
            return None
        top = max(arities)
        carriers = tuple(tuple(arities.get(k, ())) for k in range(top + 1))
        table = {}
        for key_texts, value, entry in mu_lines:
            # mu [values] p q1 ... qn = r
            if len(key_texts) < 3 or not key_texts[1].startswith("["):
                self.diag(raw, entry.line, entry.tokens[0][1], "malformed mu entry")
                return None
            p = key_texts[2]
            qs = tuple(key_texts[3:])
            try:
                f = _parse_finmap_literal(key_texts[1], len(qs))
            except ValueError as exc:
                self.diag(raw, entry.line, entry.tokens[1][1], str(exc))
                return None
            tok = self._single(raw, entry, value, "element")
            if tok is None:
                return None
            table[(f.target, f.values, p, qs)] = tok[0]
        return Operad(
            name=raw.name, max_arity=top, carriers=carriers, unit=unit, table=table
        )

    # -- structured sections ---------------------------------------------------

    def _lookup_tuple(self, raw, entry, cat, literal, want):
        labels = _parse_tuple(literal)
        if want == "obj":
            try:
                return tuple(cat.obj_index(x) for x in labels), "obj"
            except KeyError:
                pass
            try:
                return tuple(cat.mor_index(x) for x in labels), "mor"
            except KeyError:
                self.diag(raw, entry.line, entry.tokens[0][1],
                          f"tuple {literal} is neither all objects nor all morphisms")
                return None, None
        return None, None

    def _build_omon(self, raw):
        operad = base = None
        tensor_lines = []
        phi_lines = []
        for key, value, entry in self._key_values(raw):
            if key is None:
                self.diag(raw, entry.line, entry.tokens[0][1], "unrecognized line")
                return None
            key_texts = [t for t, _ in key]
            if key_texts == ["operad"]:
                tok = self._single(raw, entry, value, "operad name")
                operad = self.ref(raw, entry.line, tok, ("operad",)) if tok else None
            elif key_texts == ["base"]:
                tok = self._single(raw, entry, value, "category name")
                base = self.ref(raw, entry.line, tok, ("category",)) if tok else None
            elif key_texts and key_texts[0] == "tensor":
                tensor_lines.append((key_texts, value, entry))
            elif key_texts and key_texts[0] == "phi":
                phi_lines.append((key_texts, value, entry))
            else:
                self.diag(raw, entry.line, key[0][1], f"unknown key {' '.join(key_texts)!r}")
                return None
        if operad is None or base is None:
            self.diag(raw, raw.line, 1, "structured category needs operad and base")
            return None
        tensors: dict = {}
        ok = True
        for key_texts, value, entry in tensor_lines:
            if len(key_texts) != 3 or not key_texts[2].startswith("("):
                self.diag(raw, entry.line, entry.tokens[0][1], "malformed tensor entry")
                ok = False
                continue
            p = key_texts[1]
            combo, kind = self._lookup_tuple(raw, entry, base, key_texts[2], "obj")
            if combo is None:
                ok = False
                continue
            n = len(combo)
            tok = self._single(raw, entry, value, "label")
            if tok is None:
                ok = False
                continue
            table = tensors.setdefault((n, p), TensorTable(obj={}, mor={}))
            try:
                if kind == "obj":
                    table.obj[combo] = base.obj_index(tok[0])
                else:
                    table.mor[combo] = base.mor_index(tok[0])
            except KeyError as exc:
                self.diag(raw, entry.line, tok[1], str(exc))
                ok = False
        # identity-tuple morphism entries are forced by functoriality
        for (n, p), table in tensors.items():
            for combo, target in table.obj.items():
                ids = tuple(base.id_of(a) for a in combo)
                table.mor.setdefault(ids, base.id_of(target))
        phi = {}
        for key_texts, value, entry in phi_lines:
            # phi [values] p q1 ... qn (A1,...,Am) = mor
            if len(key_texts) < 4 or not key_texts[1].startswith("[") or not key_texts[-1].startswith("("):
                self.diag(raw, entry.line, entry.tokens[0][1], "malformed phi entry")
                ok = False
                continue
            p = key_texts[2]
            qs = tuple(key_texts[3:-1])
            try:
                f = _parse_finmap_literal(key_texts[1], len(qs))
            except ValueError as exc:
                self.diag(raw, entry.line, entry.tokens[1][1], str(exc))
                ok = False
                continue
            labels = _parse_tuple(key_texts[-1])
            tok = self._single(raw, entry, value, "morphism")
            if tok is None:
                ok = False
                continue
            try:
                objs = tuple(base.obj_index(x) for x in labels)
                phi[(f, p, qs, objs)] = base.mor_index(tok[0])
            except KeyError as exc:
                self.diag(raw, entry.line, entry.tokens[0][1], str(exc))
                ok = False
        if not ok:
            return None
        return OMonCategory(
            operad=operad, base=base, tensors=tensors, phi=phi, name=raw.name
        )

    def _build_laxfun(self, raw):
        dom = cod = functor = None
        xi_lines = []
        for key, value, entry in self._key_values(raw):
            if key is None:
                self.diag(raw, entry.line, entry.tokens[0][1], "unrecognized line")
                return None
            key_texts = [t for t, _ in key]
            if key_texts == ["dom"]:
                tok = self._single(raw, entry, value, "omon name")
                dom = self.ref(raw, entry.line, tok, ("omon",)) if tok else None
            elif key_texts == ["cod"]:
                tok = self._single(raw, entry, value, "omon name")
                cod = self.ref(raw, entry.line, tok, ("omon",)) if tok else None
            elif key_texts == ["functor"]:
                tok = self._single(raw, entry, value, "functor name")
                functor = self.ref(raw, entry.line, tok, ("functor",)) if tok else None
            elif key_texts and key_texts[0] == "xi":
                xi_lines.append((key_texts, value, entry))
            else:
                self.diag(raw, entry.line, key[0][1], f"unknown key {' '.join(key_texts)!r}")
                return None
        if dom is None or cod is None or functor is None:
            self.diag(raw, raw.line, 1, "lax functor needs dom, cod, and functor")
            return None
        xi = {}
        for key_texts, value, entry in xi_lines:
            if len(key_texts) != 3 or not key_texts[2].startswith("("):
                self.diag(raw, entry.line, entry.tokens[0][1], "malformed xi entry")
                return None
            p = key_texts[1]
            labels = _parse_tuple(key_texts[2])
            tok = self._single(raw, entry, value, "morphism")
            if tok is None:
                return None
            try:
                objs = tuple(dom.base.obj_index(x) for x in labels)
                xi[(len(objs), p, objs)] = cod.base.mor_index(tok[0])
            except KeyError as exc:
                self.diag(raw, entry.line, entry.tokens[0][1], str(exc))
                return None
        return LaxOMonFunctor(dom=dom, cod=cod, functor=functor, xi=xi, name=raw.name)

    def _build_omontrans(self, raw):
        dom = cod = None
        at = {}
        for key, value, entry in self._key_values(raw):
            if key is None:
                self.diag(raw, entry.line, entry.tokens[0][1], "unrecognized line")
                return None
            key_texts = [t for t, _ in key]
            if key_texts == ["dom"]:
                tok = self._single(raw, entry, value, "laxfun name")
                dom = self.ref(raw, entry.line, tok, ("laxfun",)) if tok else None
            elif key_texts == ["cod"]:
                tok = self._single(raw, entry, value, "laxfun name")
                cod = self.ref(raw, entry.line, tok, ("laxfun",)) if tok else None
            elif len(key_texts) == 2 and key_texts[0] == "at":
                tok = self._single(raw, entry, value, "morphism")
                if tok:
                    at[key_texts[1]] = tok[0]
            else:
                self.diag(raw, entry.line, key[0][1], f"unknown key {' '.join(key_texts)!r}")
                return None
        if dom is None or cod is None:
            self.diag(raw, raw.line, 1, "transformation needs dom and cod")
            return None
        try:
            components = tuple(
                cod.cod.base.mor_index(at[obj]) for obj in dom.dom.base.objects
            )
        except KeyError as exc:
            self.diag(raw, raw.line, 1, f"bad component: {exc}")
            return None
        t = NatTransform(dom.functor, cod.functor, components, name=raw.name)
        return OMonTransformation(dom=dom, cod=cod, t=t, name=raw.name)

    def _build_ofib(self, raw):
        total = base = proj = None
        for key, value, entry in self._key_values(raw):
            if key is None:
                self.diag(raw, entry.line, entry.tokens[0][1], "unrecognized line")
                return None
            key_texts = [t for t, _ in key]
            if key_texts == ["total"]:
                tok = self._single(raw, entry, value, "omon name")
                total = self.ref(raw, entry.line, tok, ("omon",)) if tok else None
            elif key_texts == ["base"]:
                tok = self._single(raw, entry, value, "omon name")
                base = self.ref(raw, entry.line, tok, ("omon",)) if tok else None
            elif key_texts == ["proj"]:
                tok = self._single(raw, entry, value, "functor name")
                proj = self.ref(raw, entry.line, tok, ("functor",)) if tok else None
            else:
                self.diag(raw, entry.line, key[0][1], f"unknown key {' '.join(key_texts)!r}")
                return None
        if total is None or base is None or proj is None:
            self.diag(raw, raw.line, 1, "structured fibration needs total, base, proj")
            return None
        return OFibObject(
            fib=DiscreteFibration(proj, name=raw.name),
            total_omon=total,
            base_omon=base,
            name=raw.name,
        )

    def _build_laxtoset(self, raw):
        omon = iset = None
        nu_lines = []
        for key, value, entry in self._key_values(raw):
            if key is None:
                self.diag(raw, entry.line, entry.tokens[0][1], "unrecognized line")
                return None
            key_texts = [t for t, _ in key]
            if key_texts == ["omon"]:
                tok = self._single(raw, entry, value, "omon name")
                omon = self.ref(raw, entry.line, tok, ("omon",)) if tok else None
            elif key_texts == ["iset"]:
                tok = self._single(raw, entry, value, "iset name")
                iset = self.ref(raw, entry.line, tok, ("iset",)) if tok else None
            elif key_texts and key_texts[0] == "nu":
                nu_lines.append((key_texts, value, entry))
            else:
                self.diag(raw, entry.line, key[0][1], f"unknown key {' '.join(key_texts)!r}")
                return None
        if omon is None or iset is None:
            self.diag(raw, raw.line, 1, "laxtoset needs omon and iset")
            return None
        if iset.index != omon.base:
            self.diag(raw, raw.line, 1, "iset is not indexed by the structured base")
            return None
        groups: dict = {}
        ok = True
        for key_texts, value, entry in nu_lines:
            # nu p (i1,...,in) (x1,...,xn) = y
            if len(key_texts) != 4 or not key_texts[2].startswith("(") or not key_texts[3].startswith("("):
                self.diag(raw, entry.line, entry.tokens[0][1], "malformed nu entry")
                ok = False
                continue
            p = key_texts[1]
            i_labels = _parse_tuple(key_texts[2])
            x_labels = _parse_tuple(key_texts[3])
            tok = self._single(raw, entry, value, "element")
            if tok is None:
                ok = False
                continue
            try:
                i_vec = tuple(omon.base.obj_index(x) for x in i_labels)
            except KeyError as exc:
                self.diag(raw, entry.line, entry.tokens[0][1], str(exc))
                ok = False
                continue
            groups.setdefault((len(i_vec), p, i_vec), {})[x_labels] = (tok[0], entry)
        nu = {}
        for (n, p, i_vec), table in groups.items():
            src = o_set_product(iset.values[a] for a in i_vec)
            try:
                tgt = iset.values[omon.tensor_obj(n, p, i_vec)]
            except KeyError:
                self.diag(raw, raw.line, 1, f"nu entry references a missing tensor at arity {n}")
                ok = False
                continue
            sizes = [iset.values[a].size for a in i_vec]
            mapping = [None] * src.size
            for x_labels, (y, entry) in table.items():
                try:
                    xs = tuple(
                        iset.values[a].index(x) for a, x in zip(i_vec, x_labels)
                    )
                    if len(x_labels) != n:
                        raise KeyError("tuple arity mismatch")
                    mapping[_mixed_encode(xs, sizes)] = tgt.index(y)
                except KeyError as exc:
                    self.diag(raw, entry.line, entry.tokens[0][1], str(exc))
                    ok = False
            if any(v is None for v in mapping):
                self.diag(raw, raw.line, 1,
                          f"incomplete nu table for p={p} at ({','.join(omon.base.objects[a] for a in i_vec)})")
                ok = False
                continue
            nu[(n, p, i_vec)] = FinFunction(src, tgt, tuple(mapping))
        if not ok:
            return None
        return LaxSetFunctor(dom=omon, iset=iset, nu=nu, name=raw.name)


def parse_spec_file(text: str, default_max_arity: int = 3) -> SpecDocument:
    diagnostics: list[Diagnostic] = []
    raw_sections = _parse_raw(text, diagnostics)
    resolver = _Resolver(raw_sections, diagnostics, default_max_arity)
    sections = resolver.resolve_all()
    return SpecDocument(sections=sections, diagnostics=diagnostics)


# --------------------------------------------------------------------------
# serialization


def _sanitize(name: str) -> str:
    out = []
    for ch in name:
        out.append(ch if ch.isalnum() or ch in "_.-" else "_")
    text = "".join(out).strip("_")
    return text or "section"


class DocBuilder:
    """Collects sections with stable, unique names."""

    def __init__(self):
        self.chunks: list[str] = []
        self.names: dict[int, str] = {}
        self.used: set[str] = set()
        self.done: set[int] = set()
        self._keep: list = []  # pin objects so ids stay unique

    def name_for(self, obj, suggested: str) -> str:
        key = id(obj)
        if key in self.names:
            return self.names[key]
        self._keep.append(obj)
        base = _sanitize(suggested)
        name = base
        k = 2
        while name in self.used:
            name = f"{base}{k}"
            k += 1
        self.used.add(name)
        self.names[key] = name
        return name

    def has(self, obj) -> bool:
        return id(obj) in self.names

    def mark(self, obj) -> bool:
        """True exactly once per object: the caller should emit its body."""
        if id(obj) in self.done:
            return False
        self.done.add(id(obj))
        return True

    def add(self, kind: str, name: str, lines) -> None:
        body = "\n".join(lines)
        self.chunks.append(f"[{kind} {name}]\n{body}\n")

    def text(self) -> str:
        return "\n".join(self.chunks)


def ser_category(b: DocBuilder, cat, suggested: str = "") -> str:
    name = b.name_for(cat, suggested or cat.name or "C")
    if not b.mark(cat):
        return name
    lines = [f"objects = {', '.join(cat.objects)}"]
    for m in range(cat.n_morphisms):
        if cat.identity[cat.mor_src[m]] == m:
            continue
        lines.append(
            f"{cat.mor_labels[m]} : {cat.objects[cat.mor_src[m]]} -> {cat.objects[cat.mor_tgt[m]]}"
        )
    for (g, f), h in sorted(cat.composition.items()):
        g_id = cat.identity[cat.mor_src[g]] == g
        f_id = cat.identity[cat.mor_src[f]] == f
        if g_id and h == f:
            continue
        if f_id and h == g:
            continue
        lines.append(
            f"compose {cat.mor_labels[g]} {cat.mor_labels[f]} = {cat.mor_labels[h]}"
        )
    b.add("category", name, lines)
    return name


def ser_functor(b: DocBuilder, F, suggested: str = "") -> str:
    name = b.name_for(F, suggested or F.name or "F")
    if not b.mark(F):
        return name
    dom_name = ser_category(b, F.dom)
    cod_name = ser_category(b, F.cod)
    lines = [f"dom = {dom_name}", f"cod = {cod_name}"]
    for a in range(F.dom.n_objects):
        lines.append(f"obj {F.dom.objects[a]} = {F.cod.objects[F.on_obj[a]]}")
    for m in range(F.dom.n_morphisms):
        if F.dom.identity[F.dom.mor_src[m]] == m:
            continue
        lines.append(f"mor {F.dom.mor_labels[m]} = {F.cod.mor_labels[F.on_mor[m]]}")
    b.add("functor", name, lines)
    return name


def ser_fibration(b: DocBuilder, p, suggested: str = "") -> str:
    name = b.name_for(p, suggested or p.name or "fib")
    if not b.mark(p):
        return name
    proj_name = ser_functor(b, p.proj, suggested=f"{name}_proj")
    b.add("fibration", name, [f"proj = {proj_name}"])
    return name


def ser_iset(b: DocBuilder, F, suggested: str = "") -> str:
    name = b.name_for(F, suggested or F.name or "F")
    if not b.mark(F):
        return name
    index_name = ser_category(b, F.index)
    lines = [f"index = {index_name}"]
    for a in range(F.index.n_objects):
        lines.append(f"set {F.index.objects[a]} = {', '.join(F.values[a].labels)}")
    for m in range(F.index.n_morphisms):
        if F.index.identity[F.index.mor_src[m]] == m:
            continue
        fn = F.actions[m]
        for x in fn.dom.labels:
            lines.append(f"map {F.index.mor_labels[m]} {x} = {fn(x)}")
    b.add("iset", name, lines)
    return name


def ser_semiring(b: DocBuilder, r, suggested: str = "") -> str:
    name = b.name_for(r, suggested or r.name or "R")
    if not b.mark(r):
        return name
    lines = [
        f"elements = {', '.join(r.elements)}",
        f"zero = {r.zero}",
        f"one = {r.one}",
    ]
    for (a, c), v in sorted(r.add.items()):
        lines.append(f"add {a} {c} = {v}")
    for (a, c), v in sorted(r.mul.items()):
        lines.append(f"mul {a} {c} = {v}")
    b.add("semiring", name, lines)
    return name


def ser_operad(b: DocBuilder, op, suggested: str = "") -> str:
    name = b.name_for(op, suggested or op.name or "O")
    if not b.mark(op):
        return name
    origin = op.origin
    if op.rule is not None and origin:
        tag = origin[0]
        lines = [f"builtin = {tag}", f"max_arity = {op.max_arity}"]
        if tag == "qconv":
            if len(origin) < 2:
                raise ValueError("cannot serialize a qconv operad without its semiring")
            lines.insert(1, f"semiring = {ser_semiring(b, origin[1])}")
        b.add("operad", name, lines)
        return name
    lines = []
    for n in range(op.max_arity + 1):
        lines.append(f"arity {n} = {', '.join(op.elements(n))}")
    lines.append(f"unit = {op.unit}")
    for f, p, qs in composition_keys(op):
        r = op.compose(f, p, qs)
        lines.append(f"mu {f.label()} {p} {' '.join(qs)} = {r}")
    b.add("operad", name, lines)
    return name


def ser_omon(b: DocBuilder, c, suggested: str = "") -> str:
    name = b.name_for(c, suggested or c.name or "M")
    if not b.mark(c):
        return name
    operad_name = ser_operad(b, c.operad)
    base_name = ser_category(b, c.base)
    base = c.base
    lines = [f"operad = {operad_name}", f"base = {base_name}"]
    for (n, p), table in sorted(c.tensors.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        for combo, target in sorted(table.obj.items()):
            labels = ",".join(base.objects[a] for a in combo)
            lines.append(f"tensor {p} ({labels}) = {base.objects[target]}")
        for combo, target in sorted(table.mor.items()):
            if all(base.identity[base.mor_src[m]] == m for m in combo):
                objs = tuple(base.mor_src[m] for m in combo)
                if objs in table.obj and target == base.id_of(table.obj[objs]):
                    continue  # forced by functoriality
            labels = ",".join(base.mor_labels[m] for m in combo)
            lines.append(f"tensor {p} ({labels}) = {base.mor_labels[target]}")
    for (f, p, qs, objs), value in sorted(
        c.phi.items(), key=lambda kv: (kv[0][0].values, kv[0][1], kv[0][2], kv[0][3])
    ):
        labels = ",".join(base.objects[a] for a in objs)
        lines.append(
            f"phi {f.label()} {p} {' '.join(qs)} ({labels}) = {base.mor_labels[value]}"
        )
    b.add("omon", name, lines)
    return name


def ser_laxfun(b: DocBuilder, L, suggested: str = "") -> str:
    name = b.name_for(L, suggested or L.name or "L")
    if not b.mark(L):
        return name
    dom_name = ser_omon(b, L.dom)
    cod_name = ser_omon(b, L.cod)
    functor_name = ser_functor(b, L.functor, suggested=f"{name}_fun")
    lines = [f"dom = {dom_name}", f"cod = {cod_name}", f"functor = {functor_name}"]
    for (n, p, objs), value in sorted(L.xi.items()):
        labels = ",".join(L.dom.base.objects[a] for a in objs)
        lines.append(f"xi {p} ({labels}) = {L.cod.base.mor_labels[value]}")
    b.add("laxfun", name, lines)
    return name


def ser_omontrans(b: DocBuilder, tr, suggested: str = "") -> str:
    name = b.name_for(tr, suggested or tr.name or "T")
    if not b.mark(tr):
        return name
    dom_name = ser_laxfun(b, tr.dom)
    cod_name = ser_laxfun(b, tr.cod)
    lines = [f"dom = {dom_name}", f"cod = {cod_name}"]
    base = tr.dom.cod.base
    for a in range(tr.dom.dom.base.n_objects):
        lines.append(
            f"at {tr.dom.dom.base.objects[a]} = {base.mor_labels[tr.t.components[a]]}"
        )
    b.add("omontrans", name, lines)
    return name


def ser_ofib(b: DocBuilder, y, suggested: str = "") -> str:
    name = b.name_for(y, suggested or y.name or "Y")
    if not b.mark(y):
        return name
    total_name = ser_omon(b, y.total_omon)
    base_name = ser_omon(b, y.base_omon)
    proj_name = ser_functor(b, y.fib.proj, suggested=f"{name}_proj")
    b.add(
        "ofib", name,
        [f"total = {total_name}", f"base = {base_name}", f"proj = {proj_name}"],
    )
    return name


def ser_laxtoset(b: DocBuilder, x, suggested: str = "") -> str:
    name = b.name_for(x, suggested or x.name or "X")
    if not b.mark(x):
        return name
    omon_name = ser_omon(b, x.dom)
    iset_name = ser_iset(b, x.iset, suggested=f"{name}_iset")
    lines = [f"omon = {omon_name}", f"iset = {iset_name}"]
    base = x.dom.base
    for (n, p, i_vec), fn in sorted(x.nu.items()):
        i_labels = ",".join(base.objects[a] for a in i_vec)
        value_sets = [x.iset.values[a].labels for a in i_vec]
        for combo in itertools.product(*value_sets):
            sizes = [len(v) for v in value_sets]
            xs = tuple(vs.index(lab) for vs, lab in zip(value_sets, combo))
            out = fn.cod.labels[fn.mapping[_mixed_encode(xs, sizes)]]
            x_labels = ",".join(combo)
            lines.append(f"nu {p} ({i_labels}) ({x_labels}) = {out}")
    b.add("laxtoset", name, lines)
    return name


_SERIALIZERS = {
    "category": ser_category,
    "functor": ser_functor,
    "fibration": ser_fibration,
    "iset": ser_iset,
    "semiring": ser_semiring,
    "operad": ser_operad,
    "omon": ser_omon,
    "laxfun": ser_laxfun,
    "omontrans": ser_omontrans,
    "ofib": ser_ofib,
    "laxtoset": ser_laxtoset,
}


def pretty_print(doc: SpecDocument) -> str:
    """Regenerate text; reparsing yields a table-equal document."""
    b = DocBuilder()
    for section in doc.sections:
        if section.value is None:
            continue
        _SERIALIZERS[section.kind](b, section.value, suggested=section.name)
    return b.text()


def section_values_equal(kind: str, a, b) -> bool:
    if a is None or b is None:
        return a is b
    if kind == "operad":
        return operads_equal(a, b)
    if kind == "omon":
        return omons_equal(a, b)
    if kind == "laxfun":
        return (
            omons_equal(a.dom, b.dom)
            and omons_equal(a.cod, b.cod)
            and a.functor == b.functor
            and a.xi == b.xi
        )
    if kind == "omontrans":
        return (
            section_values_equal("laxfun", a.dom, b.dom)
            and section_values_equal("laxfun", a.cod, b.cod)
            and a.t.components == b.t.components
        )
    if kind == "ofib":
        return (
            a.fib == b.fib
            and omons_equal(a.total_omon, b.total_omon)
            and omons_equal(a.base_omon, b.base_omon)
        )
    if kind == "laxtoset":
        return omons_equal(a.dom, b.dom) and a.iset == b.iset and a.nu == b.nu
    return a == b


def documents_table_equal(a: SpecDocument, b: SpecDocument) -> bool:
    if len(a.sections) != len(b.sections):
        return False
    b_by_name = {s.name: s for s in b.sections}
    for sa in a.sections:
        sb = b_by_name.get(sa.name)
        if sb is None or sb.kind != sa.kind:
            return False
        if not section_values_equal(sa.kind, sa.value, sb.value):
            return False
    return True
