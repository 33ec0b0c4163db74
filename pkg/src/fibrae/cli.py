"""Text formats, command dispatch and DOT export.

The grammar is line-oriented with braces; identities and their compositions
are implicit in the text and materialized by the parser.  The composition
convention is ``g . f`` = "g after f" everywhere.  All outputs are sorted
and byte-stable across runs.
"""
from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field

from . import dinat, graphmod, kan, karoubi, overbase, reflect, setfun
from .errors import (DepthCapError, DomainError, FibraeError, ParseError,
                     SizeCapError, ValidationFailure)
from .fincat import (FinCategory, FunctorData, OverCategory, build_category,
                     fmt_id, identity_over, idkey, sort_ids,
                     validate_category, validate_functor, validate_over)
from .setfun import CONTRA, COV, SetFunctor, elements, validate_setfunctor

# ---------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(r"->|[{}:,.=@()]|[A-Za-z0-9_']+|#[^\n]*|\s+|.")


@dataclass
class _Tok:
    kind: str
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, col = 1, 1
    for m in _TOKEN_RE.finditer(text):
        s = m.group(0)
        if s.startswith("#"):
            pass
        elif s.isspace():
            pass
        elif s == "->" or s in "{}:,.=@()":
            toks.append(_Tok(s, s, line, col))
        elif re.fullmatch(r"[A-Za-z0-9_']+", s):
            toks.append(_Tok("ident", s, line, col))
        else:
            raise ParseError(f"unexpected character {s!r}", line, col)
        for ch in s:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    def expect(self, kind: str, what: str | None = None) -> _Tok:
        t = self.next()
        if t.kind != kind:
            raise ParseError(f"expected {what or kind}, got {t.value!r}",
                             t.line, t.col)
        return t

    def ident(self, what="an identifier") -> str:
        return self.expect("ident", what).value

    def try_word(self, word: str) -> bool:
        t = self.peek()
        if t.kind == "ident" and t.value == word:
            self.pos += 1
            return True
        return False

    def ident_list(self) -> list[str]:
        out = [self.ident()]
        while self.peek().kind == ",":
            self.next()
            out.append(self.ident())
        return out

    def braced_set(self) -> list[str]:
        self.expect("{")
        out = []
        if self.peek().kind != "}":
            out = self.ident_list()
        self.expect("}")
        return out

    def arrow_ref(self, arrows: dict, identity: dict, what="an arrow"):
        """An arrow name or id(x)."""
        t = self.peek()
        if t.kind == "ident" and t.value == "id" and \
                self.toks[self.pos + 1].kind == "(":
            self.next()
            self.next()
            x = self.ident("an object")
            self.expect(")")
            if x not in identity:
                raise ParseError(f"unknown object {x!r}", t.line, t.col)
            return identity[x]
        name = self.ident(what)
        if name not in arrows:
            raise ParseError(f"unknown arrow {name!r}", t.line, t.col)
        return name


# ---------------------------------------------------------------------------
# workspace

@dataclass
class Workspace:
    categories: dict = field(default_factory=dict)
    graphs: dict = field(default_factory=dict)
    setfunctors: dict = field(default_factory=dict)
    overs: dict = field(default_factory=dict)
    profunctors: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)


def _parse_category_body(p: _Parser):
    p.expect("{")
    objects: list[str] = []
    arrows: dict = {}
    arrow_toks: dict = {}
    compose_raw: list = []
    while True:
        if p.peek().kind == "}":
            p.next()
            break
        if p.try_word("objects"):
            p.expect(":")
            objects.extend(p.ident_list())
        elif p.try_word("arrow"):
            tok = p.peek()
            a = p.ident("an arrow name")
            p.expect(":")
            s = p.ident("an object")
            p.expect("->")
            t = p.ident("an object")
            if a in arrows:
                p.fail(f"duplicate arrow {a!r}")
            arrows[a] = (s, t)
            arrow_toks[a] = tok
        elif p.try_word("compose"):
            tok = p.peek()
            g = p.ident("an arrow")
            p.expect(".")
            f = p.ident("an arrow")
            p.expect("=")
            identity = {x: ("id", x) for x in objects}
            h = p.arrow_ref({**arrows}, identity)
            compose_raw.append((g, f, h, tok))
        else:
            p.fail("expected objects/arrow/compose")
    objset = set(objects)
    for a, (s, t) in arrows.items():
        for x in (s, t):
            if x not in objset:
                tok = arrow_toks[a]
                raise ParseError(f"arrow {a!r} references unknown object {x!r}",
                                 tok.line, tok.col)
    identity = {x: ("id", x) for x in objects}
    compose = {}
    for g, f, h, tok in compose_raw:
        for a in (g, f):
            if a not in arrows:
                raise ParseError(f"unknown arrow {a!r} in compose",
                                 tok.line, tok.col)
        compose[(g, f)] = h
    return build_category(objects, arrows, compose, identity)


def _parse_graph_body(p: _Parser) -> graphmod.FinGraph:
    p.expect("{")
    nodes: list[str] = []
    edges: dict = {}
    while True:
        if p.peek().kind == "}":
            p.next()
            break
        if p.try_word("nodes"):
            p.expect(":")
            nodes.extend(p.ident_list())
        elif p.try_word("edge"):
            e = p.ident("an edge name")
            p.expect(":")
            s = p.ident()
            p.expect("->")
            t = p.ident()
            if e in edges:
                p.fail(f"duplicate edge {e!r}")
            edges[e] = (s, t)
        else:
            p.fail("expected nodes/edge")
    return graphmod.FinGraph(sort_ids(nodes), edges)


def _parse_setfunctor_body(p: _Parser, base: FinCategory,
                           variance: str) -> SetFunctor:
    p.expect("{")
    fibers: dict = {x: [] for x in base.objects}
    actions: dict = {}
    while True:
        if p.peek().kind == "}":
            p.next()
            break
        if p.try_word("at"):
            tok = p.peek()
            x = p.ident("an object")
            if x not in set(base.objects):
                raise ParseError(f"unknown object {x!r}", tok.line, tok.col)
            p.expect(":")
            fibers[x] = p.braced_set()
        elif p.try_word("on"):
            tok = p.peek()
            f = p.ident("an arrow")
            if f not in base.arrows:
                raise ParseError(f"unknown arrow {f!r}", tok.line, tok.col)
            p.expect(":")
            act = {}
            while True:
                a = p.ident("an element")
                p.expect("->")
                b = p.ident("an element")
                act[a] = b
                if p.peek().kind == ",":
                    p.next()
                else:
                    break
            actions[f] = act
        else:
            p.fail("expected at/on")
    for f in base.arrows:
        if base.is_identity(f):
            continue
        actions.setdefault(f, {})
    return setfun.make_setfunctor(base, variance, fibers, actions)


def _parse_over_body(p: _Parser, base: FinCategory) -> OverCategory:
    p.expect("{")
    objects: list[str] = []
    obj_proj: dict = {}
    arrows: dict = {}
    arr_proj: dict = {}
    compose_raw: list = []
    base_ident = dict(base.identity)
    while True:
        if p.peek().kind == "}":
            p.next()
            break
        if p.try_word("object"):
            tok = p.peek()
            a = p.ident("an object name")
            p.expect("@")
            x = p.ident("a base object")
            if x not in set(base.objects):
                raise ParseError(f"unknown base object {x!r}", tok.line, tok.col)
            objects.append(a)
            obj_proj[a] = x
        elif p.try_word("arrow"):
            u = p.ident("an arrow name")
            p.expect(":")
            a = p.ident()
            p.expect("->")
            b = p.ident()
            p.expect("@")
            f = p.arrow_ref(base.arrows, base_ident, "a base arrow")
            arrows[u] = (a, b)
            arr_proj[u] = f
        elif p.try_word("compose"):
            tok = p.peek()
            g = p.ident()
            p.expect(".")
            f = p.ident()
            p.expect("=")
            identity = {a: ("id", a) for a in objects}
            h = p.arrow_ref(dict(arrows), identity)
            compose_raw.append((g, f, h, tok))
        else:
            p.fail("expected object/arrow/compose")
    compose = {}
    for g, f, h, tok in compose_raw:
        for u in (g, f):
            if u not in arrows:
                raise ParseError(f"unknown arrow {u!r} in compose",
                                 tok.line, tok.col)
        compose[(g, f)] = h
    T = build_category(objects, arrows, compose)
    obj_map = dict(obj_proj)
    arrow_map = dict(arr_proj)
    for a in objects:
        arrow_map[T.id_of(a)] = base.id_of(obj_proj[a])
    proj = FunctorData(T, base, obj_map, arrow_map)
    return OverCategory(T, base, proj)


def _parse_profunctor_body(p: _Parser, base: FinCategory) -> dinat.ProfunctorData:
    p.expect("{")
    values: dict = {(x, y): () for x in base.objects for y in base.objects}
    left: dict = {}
    right: dict = {}

    def elem_maps():
        act = {}
        while True:
            a = p.ident("an element")
            p.expect("->")
            b = p.ident("an element")
            act[a] = b
            if p.peek().kind == ",":
                p.next()
            else:
                break
        return act

    base_ident = dict(base.identity)
    while True:
        if p.peek().kind == "}":
            p.next()
            break
        if p.try_word("at"):
            p.expect("(")
            x = p.ident()
            p.expect(",")
            y = p.ident()
            p.expect(")")
            p.expect(":")
            values[(x, y)] = tuple(p.braced_set())
        elif p.try_word("left"):
            f = p.arrow_ref(base.arrows, base_ident, "a base arrow")
            p.expect("(")
            z = p.ident()
            p.expect(")")
            p.expect(":")
            left[(f, z)] = elem_maps()
        elif p.try_word("right"):
            f = p.arrow_ref(base.arrows, base_ident, "a base arrow")
            p.expect("(")
            z = p.ident()
            p.expect(")")
            p.expect(":")
            right[(z, f)] = elem_maps()
        else:
            p.fail("expected at/left/right")
    for f, (x, y) in base.arrows.items():
        for z in base.objects:
            if base.is_identity(f):
                left[(f, z)] = {e: e for e in values[(y, z)]}
                right[(z, f)] = {e: e for e in values[(z, x)]}
            else:
                left.setdefault((f, z), {})
                right.setdefault((z, f), {})
    return dinat.ProfunctorData(base, {k: sort_ids(v) for k, v in values.items()},
                                left, right)


def _parse_functor_body(p: _Parser, dom: FinCategory,
                        cod: FinCategory) -> FunctorData:
    p.expect("{")
    obj_map: dict = {}
    arrow_map: dict = {}
    cod_ident = dict(cod.identity)
    while True:
        if p.peek().kind == "}":
            p.next()
            break
        if p.try_word("object"):
            x = p.ident()
            p.expect("->")
            y = p.ident()
            obj_map[x] = y
        elif p.try_word("arrow"):
            tok = p.peek()
            f = p.ident()
            if f not in dom.arrows:
                raise ParseError(f"unknown arrow {f!r}", tok.line, tok.col)
            p.expect("->")
            arrow_map[f] = p.arrow_ref(cod.arrows, cod_ident)
        else:
            p.fail("expected object/arrow")
    for x in dom.objects:
        if x in obj_map:
            arrow_map.setdefault(dom.id_of(x), cod.identity.get(obj_map[x]))
    return FunctorData(dom, cod, obj_map, arrow_map)


def parse(text: str, validate: bool = True) -> Workspace:
    """Parse a workspace file; every value is validated before registration
    unless ``validate`` is disabled."""
    p = _Parser(text)
    ws = Workspace()

    def register(kind: dict, name: str, value, report):
        if name in kind:
            p.fail(f"duplicate name {name!r}")
        if validate and report:
            raise ValidationFailure(name, report)
        kind[name] = value

    def named_category(tok) -> FinCategory:
        cname = p.ident("a category name")
        if cname not in ws.categories:
            raise ParseError(f"unknown category {cname!r}", tok.line, tok.col)
        return ws.categories[cname]

    while p.peek().kind != "eof":
        tok = p.peek()
        if p.try_word("category"):
            name = p.ident("a name")
            C = _parse_category_body(p)
            register(ws.categories, name, C, validate_category(C))
        elif p.try_word("graph"):
            name = p.ident("a name")
            G = _parse_graph_body(p)
            register(ws.graphs, name, G, graphmod.validate_graph(G))
        elif p.try_word("presheaf"):
            name = p.ident("a name")
            if not p.try_word("on"):
                p.fail("expected 'on'")
            base = named_category(tok)
            if p.try_word("contravariant"):
                variance = CONTRA
            elif p.try_word("covariant"):
                variance = COV
            else:
                p.fail("expected contravariant/covariant")
            A = _parse_setfunctor_body(p, base, variance)
            register(ws.setfunctors, name, A, validate_setfunctor(A))
        elif p.try_word("over"):
            name = p.ident("a name")
            if not p.try_word("on"):
                p.fail("expected 'on'")
            base = named_category(tok)
            O = _parse_over_body(p, base)
            register(ws.overs, name, O, validate_over(O))
        elif p.try_word("profunctor"):
            name = p.ident("a name")
            if not p.try_word("on"):
                p.fail("expected 'on'")
            base = named_category(tok)
            H = _parse_profunctor_body(p, base)
            register(ws.profunctors, name, H, dinat.validate_profunctor(H))
        elif p.try_word("functor"):
            name = p.ident("a name")
            p.expect(":")
            dom = named_category(tok)
            p.expect("->")
            cod = named_category(tok)
            F = _parse_functor_body(p, dom, cod)
            register(ws.functors, name, F, validate_functor(F))
        else:
            p.fail("expected a declaration "
                   "(category/graph/presheaf/over/profunctor/functor)")
    return ws


# ---------------------------------------------------------------------------
# printer

def _arrow_ref_text(C: FinCategory, a) -> str:
    if C.is_identity(a):
        return f"id({C.arrows[a][0]})"
    return str(a)


def print_category(name: str, C: FinCategory) -> str:
    lines = [f"category {name} {{"]
    lines.append("  objects: " + ", ".join(str(x) for x in C.objects))
    for a in C.nonidentity_arrows():
        s, t = C.arrows[a]
        lines.append(f"  arrow {a}: {s} -> {t}")
    for (g, f) in sorted(C.compose, key=idkey):
        if C.is_identity(g) or C.is_identity(f):
            continue
        lines.append(f"  compose {g} . {f} = {_arrow_ref_text(C, C.compose[(g, f)])}")
    lines.append("}")
    return "\n".join(lines)


def print_graph(name: str, G: graphmod.FinGraph) -> str:
    lines = [f"graph {name} {{"]
    lines.append("  nodes: " + ", ".join(str(v) for v in G.nodes))
    for e in sort_ids(G.edges):
        s, t = G.edges[e]
        lines.append(f"  edge {e}: {s} -> {t}")
    lines.append("}")
    return "\n".join(lines)


def print_setfunctor(name: str, A: SetFunctor, base_name: str) -> str:
    kw = "contravariant" if A.variance == CONTRA else "covariant"
    lines = [f"presheaf {name} on {base_name} {kw} {{"]
    for x in A.base.objects:
        lines.append(f"  at {x}: {{" + ", ".join(str(e) for e in A.fibers[x]) + "}")
    for f in A.base.nonidentity_arrows():
        act = A.actions[f]
        if not act:
            continue
        body = ", ".join(f"{a} -> {act[a]}" for a in sort_ids(act))
        lines.append(f"  on {f}: {body}")
    lines.append("}")
    return "\n".join(lines)


def print_over(name: str, p: OverCategory, base_name: str) -> str:
    T = p.total
    lines = [f"over {name} on {base_name} {{"]
    for a in T.objects:
        lines.append(f"  object {a} @ {p.proj_obj(a)}")
    for u in T.nonidentity_arrows():
        a, b = T.arrows[u]
        lines.append(f"  arrow {u}: {a} -> {b} @ "
                     f"{_arrow_ref_text(p.base, p.proj_arrow(u))}")
    for (g, f) in sorted(T.compose, key=idkey):
        if T.is_identity(g) or T.is_identity(f):
            continue
        lines.append(f"  compose {g} . {f} = {_arrow_ref_text(T, T.compose[(g, f)])}")
    lines.append("}")
    return "\n".join(lines)


def print_profunctor(name: str, H: dinat.ProfunctorData, base_name: str) -> str:
    X = H.base
    lines = [f"profunctor {name} on {base_name} {{"]
    for x in X.objects:
        for y in X.objects:
            v = H.values[(x, y)]
            if v:
                lines.append(f"  at ({x},{y}): {{" + ", ".join(map(str, v)) + "}")
    for f in X.nonidentity_arrows():
        for z in X.objects:
            act = H.left[(f, z)]
            if act:
                body = ", ".join(f"{a} -> {act[a]}" for a in sort_ids(act))
                lines.append(f"  left {f} ({z}): {body}")
    for z in X.objects:
        for f in X.nonidentity_arrows():
            act = H.right[(z, f)]
            if act:
                body = ", ".join(f"{a} -> {act[a]}" for a in sort_ids(act))
                lines.append(f"  right {f} ({z}): {body}")
    lines.append("}")
    return "\n".join(lines)


def print_functor(name: str, F: FunctorData, dom_name: str,
                  cod_name: str) -> str:
    lines = [f"functor {name}: {dom_name} -> {cod_name} {{"]
    for x in F.domain.objects:
        lines.append(f"  object {x} -> {F.object_map[x]}")
    for f in F.domain.nonidentity_arrows():
        lines.append(f"  arrow {f} -> {_arrow_ref_text(F.codomain, F.arrow_map[f])}")
    lines.append("}")
    return "\n".join(lines)


def print_workspace(ws: Workspace) -> str:
    chunks = []
    cat_names = {id(C): n for n, C in ws.categories.items()}
    for n in sorted(ws.categories):
        chunks.append(print_category(n, ws.categories[n]))
    for n in sorted(ws.graphs):
        chunks.append(print_graph(n, ws.graphs[n]))
    for n in sorted(ws.setfunctors):
        A = ws.setfunctors[n]
        chunks.append(print_setfunctor(n, A, _name_of_category(ws, A.base)))
    for n in sorted(ws.overs):
        p = ws.overs[n]
        chunks.append(print_over(n, p, _name_of_category(ws, p.base)))
    for n in sorted(ws.profunctors):
        H = ws.profunctors[n]
        chunks.append(print_profunctor(n, H, _name_of_category(ws, H.base)))
    for n in sorted(ws.functors):
        F = ws.functors[n]
        chunks.append(print_functor(n, F, _name_of_category(ws, F.domain),
                                    _name_of_category(ws, F.codomain)))
    return "\n\n".join(chunks) + "\n"


def _name_of_category(ws: Workspace, C: FinCategory) -> str:
    for n, D in ws.categories.items():
        if D == C:
            return n
    raise DomainError("value refers to a category not in the workspace")


# ---------------------------------------------------------------------------
# canonical renamings for computed values

def rename_category(C: FinCategory) -> FinCategory:
    obj_names = {x: f"o{i}" for i, x in enumerate(C.objects)}
    arr_names = {}
    for x in C.objects:
        arr_names[C.id_of(x)] = ("id", obj_names[x])
    for i, a in enumerate(C.nonidentity_arrows()):
        arr_names[a] = f"a{i}"
    arrows = {arr_names[a]: (obj_names[s], obj_names[t])
              for a, (s, t) in C.arrows.items()}
    identity = {obj_names[x]: arr_names[C.id_of(x)] for x in C.objects}
    compose = {(arr_names[g], arr_names[f]): arr_names[h]
               for (g, f), h in C.compose.items()}
    return FinCategory(tuple(obj_names[x] for x in C.objects), arrows,
                       identity, compose)


def rename_setfunctor(A: SetFunctor) -> SetFunctor:
    names = {}
    for x in A.base.objects:
        for i, e in enumerate(A.fibers[x]):
            names[(x, e)] = f"e{i}"
    fibers = {x: tuple(names[(x, e)] for e in A.fibers[x])
              for x in A.base.objects}
    actions = {}
    for f in A.base.arrows:
        d, c = A.action_endpoints(f)
        actions[f] = {names[(d, a)]: names[(c, b)]
                      for a, b in A.actions[f].items()}
    return SetFunctor(A.base, A.variance, fibers, actions)


def rename_graph(G: graphmod.FinGraph) -> graphmod.FinGraph:
    node_names = {v: f"v{i}" for i, v in enumerate(G.nodes)}
    edges = {}
    for i, e in enumerate(sort_ids(G.edges)):
        s, t = G.edges[e]
        edges[f"s{i}"] = (node_names[s], node_names[t])
    return graphmod.FinGraph(tuple(node_names[v] for v in G.nodes), edges)


def render_presentation(pres) -> str:
    """One-line rendering of an evolutive presentation.

    Elements are named after the smallest input node mapping to them, or
    #k for unnamed ones; frontier entries trail off as ``x -> ...`` and
    backward-free elements of two-sided presentations as ``... -> x``.
    """
    names = {}
    for v in sorted(pres.generator_image, key=idkey):
        c = pres.generator_image[v]
        if c in pres.elements and c not in names:
            names.setdefault(c, str(v))
    k = 0
    for c in pres.elements:
        if c not in names:
            names[c] = f"#{k}"
            k += 1
    entries = []
    backward = getattr(pres, "frontier_backward", ())
    for c in sorted(pres.elements, key=lambda c: names[c]):
        if c in backward:
            entries.append(f"... -> {names[c]}")
        if c in pres.succ:
            entries.append(f"{names[c]} -> {names[pres.succ[c]]}")
        else:
            entries.append(f"{names[c]} -> ...")
    return "; ".join(entries)


# ---------------------------------------------------------------------------
# DOT export

def _dot_id(i: int) -> str:
    return f"n{i}"


def export_dot(value, flavor: str = "total") -> str:
    """Deterministic DOT text for categories, over-categories, graphs and
    evolutive presentations; the fibered flavor clusters by base object."""
    lines = ["digraph G {"]
    if isinstance(value, graphmod.EvolutivePresentation) or \
            isinstance(value, graphmod.TwoSidedPresentation):
        pres = value
        order = {c: i for i, c in enumerate(pres.elements)}
        frontier = set(getattr(pres, "frontier", ()) or ()) | \
            set(getattr(pres, "frontier_forward", ()) or ()) | \
            set(getattr(pres, "frontier_backward", ()) or ())
        for c in pres.elements:
            style = ', style=dashed' if c in frontier else ""
            lines.append(f'  {_dot_id(order[c])} [label="{fmt_id(c)}"{style}];')
        for c in pres.elements:
            if c in pres.succ:
                lines.append(f"  {_dot_id(order[c])} -> {_dot_id(order[pres.succ[c]])};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(value, graphmod.FinGraph):
        order = {v: i for i, v in enumerate(value.nodes)}
        for v in value.nodes:
            lines.append(f'  {_dot_id(order[v])} [label="{fmt_id(v)}"];')
        for e in sort_ids(value.edges):
            s, t = value.edges[e]
            lines.append(f'  {_dot_id(order[s])} -> {_dot_id(order[t])} '
                         f'[label="{fmt_id(e)}"];')
        lines.append("}")
        return "\n".join(lines)
    if isinstance(value, FinCategory):
        C = value
        order = {x: i for i, x in enumerate(C.objects)}
        for x in C.objects:
            lines.append(f'  {_dot_id(order[x])} [label="{fmt_id(x)}"];')
        for a in C.nonidentity_arrows():
            s, t = C.arrows[a]
            lines.append(f'  {_dot_id(order[s])} -> {_dot_id(order[t])} '
                         f'[label="{fmt_id(a)}"];')
        lines.append("}")
        return "\n".join(lines)
    if isinstance(value, OverCategory):
        p = value
        if flavor == "base":
            return export_dot(p.base)
        if flavor == "total":
            return export_dot(p.total)
        if flavor != "fibered":
            raise DomainError(f"unknown flavor {flavor!r}")
        order = {a: i for i, a in enumerate(p.total.objects)}
        for j, x in enumerate(p.base.objects):
            lines.append(f"  subgraph cluster{j} {{")
            lines.append(f'    label="{fmt_id(x)}";')
            for a in p.objects_over[x]:
                lines.append(f'    {_dot_id(order[a])} [label="{fmt_id(a)}"];')
            lines.append("  }")
        for u in p.total.nonidentity_arrows():
            a, b = p.total.arrows[u]
            lines.append(f'  {_dot_id(order[a])} -> {_dot_id(order[b])} '
                         f'[label="{fmt_id(u)} over {fmt_id(p.proj_arrow(u))}"];')
        lines.append("}")
        return "\n".join(lines)
    raise DomainError("value is not drawable")


# ---------------------------------------------------------------------------
# commands

def _over_arg(ws: Workspace, name: str) -> OverCategory:
    if name in ws.overs:
        return ws.overs[name]
    if name in ws.setfunctors:
        return elements(ws.setfunctors[name])
    if name in ws.categories:
        return identity_over(ws.categories[name])
    raise DomainError(f"no over-category, set functor or category named {name!r}")


def _category_arg(ws: Workspace, name: str) -> FinCategory:
    if name not in ws.categories:
        raise DomainError(f"no category named {name!r}")
    return ws.categories[name]


def _setfunctor_arg(ws: Workspace, name: str) -> SetFunctor:
    if name not in ws.setfunctors:
        raise DomainError(f"no set functor named {name!r}")
    return ws.setfunctors[name]


def _functor_arg(ws: Workspace, name: str) -> FunctorData:
    if name not in ws.functors:
        raise DomainError(f"no functor named {name!r}")
    return ws.functors[name]


def _profunctor_args(ws: Workspace, args: list[str]) -> list:
    """Resolve profunctor names, where 'hom' consumes a trailing category."""
    n_hom = sum(1 for a in args if a == "hom")
    names = args
    cat = None
    if n_hom:
        if len(args) < 2:
            raise DomainError("'hom' needs a category name")
        cat = _category_arg(ws, args[-1])
        names = args[:-1]
    out = []
    for a in names:
        if a == "hom":
            out.append(dinat.hom_profunctor(cat))
        else:
            if a not in ws.profunctors:
                raise DomainError(f"no profunctor named {a!r}")
            out.append(ws.profunctors[a])
    return out


def _flag(args: list[str], name: str, default=None):
    if name in args:
        i = args.index(name)
        if i + 1 >= len(args):
            raise DomainError(f"{name} needs a value")
        v = args[i + 1]
        del args[i:i + 2]
        return v
    return default


def run(command: str, args: list[str], ws: Workspace) -> str:
    """Execute one command against a workspace and return its text output."""
    args = list(args)

    if command == "validate":
        name = args[0]
        for kind, validator in (
                (ws.categories, validate_category),
                (ws.graphs, graphmod.validate_graph),
                (ws.setfunctors, validate_setfunctor),
                (ws.overs, validate_over),
                (ws.profunctors, dinat.validate_profunctor),
                (ws.functors, validate_functor)):
            if name in kind:
                report = validator(kind[name])
                if report:
                    raise ValidationFailure(name, report)
                return "ok"
        raise DomainError(f"no value named {name!r}")

    if command == "components":
        name = args[0]
        if name in ws.graphs:
            return str(len(graphmod.graph_components(ws.graphs[name])))
        if name in ws.categories:
            return str(len(overbase.components(ws.categories[name])))
        return str(len(overbase.components(_over_arg(ws, name))))

    if command == "sections":
        return str(len(overbase.sections(_over_arg(ws, args[0]))))

    if command == "hom":
        p, q = _over_arg(ws, args[0]), _over_arg(ws, args[1])
        return str(len(overbase.hom_over(p, q)))

    if command == "tensor":
        classical = "--classical" in args
        if classical:
            args.remove("--classical")
            A = _setfunctor_arg(ws, args[0])
            D = _setfunctor_arg(ws, args[1])
            return str(len(overbase.tensor_product_classical(A, D)))
        p, q = _over_arg(ws, args[0]), _over_arg(ws, args[1])
        return str(len(overbase.ten(p, q)))

    if command in ("reflect-df", "reflect-dof", "coreflect-df", "coreflect-dof"):
        p = _over_arg(ws, args[0])
        op = {"reflect-df": reflect.reflect_df,
              "reflect-dof": reflect.reflect_dof}.get(command)
        if op:
            A = op(p).functor
        else:
            op = {"coreflect-df": reflect.coreflect_df,
                  "coreflect-dof": reflect.coreflect_dof}[command]
            A = op(p).functor
        base_name = _name_of_category(ws, p.base)
        return print_setfunctor("R", rename_setfunctor(A), base_name)

    if command == "limit":
        return str(len(reflect.limit_setfunctor(_setfunctor_arg(ws, args[0]))))

    if command == "colimit":
        return str(len(reflect.colimit_setfunctor(_setfunctor_arg(ws, args[0]))))

    if command == "colimit-in-base":
        found = reflect.colimit_in_base(_over_arg(ws, args[0]))
        if found is None:
            return "none"
        x, cone = found
        lines = [f"object {fmt_id(x)}"]
        for a in cone.domain.objects:
            lines.append(f"  {fmt_id(a)} -> {fmt_id(cone.object_map[a])}")
        return "\n".join(lines)

    if command == "end":
        (H,) = _profunctor_args(ws, args)
        return str(len(dinat.end(H)))

    if command == "coend":
        (H,) = _profunctor_args(ws, args)
        return str(len(dinat.coend_classical(H)))

    if command == "coend-strong":
        (H,) = _profunctor_args(ws, args)
        return str(len(dinat.strong_coend(H)))

    if command == "dinat":
        H, K = _profunctor_args(ws, args)
        return str(len(dinat.strong_dinaturals(H, K)))

    if command in ("lan", "ran"):
        f = _functor_arg(ws, args[0])
        D = _setfunctor_arg(ws, args[1])
        A = kan.lan(f, D) if command == "lan" else kan.ran(f, D)
        return print_setfunctor("R", rename_setfunctor(A),
                                _name_of_category(ws, f.codomain))

    if command == "frobenius-check":
        f = _functor_arg(ws, args[0])
        p = _over_arg(ws, args[1])
        q = _over_arg(ws, args[2])
        return "true" if kan.check_frobenius(f, p, q) else "false"

    if command == "atoms":
        return "true" if karoubi.is_atom(_over_arg(ws, args[0])) else "false"

    if command == "idempotents":
        X = _category_arg(ws, args[0])
        es = karoubi.idempotents(X)
        out = [str(len(es))]
        out += [f"  {fmt_id(e.arrow)}" for e in es]
        return "\n".join(out)

    if command == "karoubi":
        X = _category_arg(ws, args[0])
        env, _emb = karoubi.karoubi_envelope(X)
        return print_category("K", rename_category(env))

    if command == "graph-reflect":
        into = _flag(args, "--into")
        depth = int(_flag(args, "--depth-cap", "4096"))
        if into is None:
            raise DomainError("graph-reflect needs --into")
        G = ws.graphs.get(args[0])
        if G is None:
            raise DomainError(f"no graph named {args[0]!r}")
        if into == "eset":
            return render_presentation(graphmod.reflect_eset(G, depth))
        if into == "idem":
            return print_graph("R", rename_graph(graphmod.reflect_idem(G)))
        if into == "bij":
            r = graphmod.reflect_bij(G, depth)
            if isinstance(r, graphmod.FinGraph):
                return print_graph("R", rename_graph(r))
            return render_presentation(r)
        if into.startswith("periodic:"):
            n = int(into.split(":", 1)[1])
            return print_graph(
                "R", rename_graph(graphmod.reflect_periodic(G, n)))
        raise DomainError(f"unknown reflection target {into!r}")

    if command == "graph-coreflect":
        into = _flag(args, "--into")
        if into is None:
            raise DomainError("graph-coreflect needs --into")
        G = ws.graphs.get(args[0])
        if G is None:
            raise DomainError(f"no graph named {args[0]!r}")
        r = graphmod.coreflect_finite(G, into)
        if isinstance(r, graphmod.InfinityReport):
            return (f"infinite\n  witness node {fmt_id(r.witness_node)} has "
                    f"{r.live_out_degree} live out-edges on a cycle")
        return print_graph("R", rename_graph(r))

    if command == "dot":
        flavor = _flag(args, "--flavor", "total")
        name = args[0]
        if name in ws.graphs:
            return export_dot(ws.graphs[name])
        if name in ws.categories:
            return export_dot(ws.categories[name])
        if name in ws.overs:
            return export_dot(ws.overs[name], flavor)
        if name in ws.setfunctors:
            return export_dot(elements(ws.setfunctors[name]), flavor)
        raise DomainError(f"no drawable value named {name!r}")

    if command == "print":
        return print_workspace(ws).rstrip("\n")

    raise DomainError(f"unknown command {command!r}")


COMMANDS = [
    "validate", "components", "sections", "hom", "tensor", "reflect-df",
    "reflect-dof", "coreflect-df", "coreflect-dof", "limit", "colimit",
    "colimit-in-base", "end", "coend", "coend-strong", "dinat", "lan", "ran",
    "frobenius-check", "atoms", "idempotents", "karoubi", "graph-reflect",
    "graph-coreflect", "dot", "print",
]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    files = []
    while "-f" in argv:
        i = argv.index("-f")
        if i + 1 >= len(argv):
            print("error: -f needs a file", file=sys.stderr)
            return 1
        files.append(argv[i + 1])
        del argv[i:i + 2]
    if not argv:
        print("usage: fibrae [-f FILE]... COMMAND [ARGS...]", file=sys.stderr)
        print("commands: " + ", ".join(COMMANDS), file=sys.stderr)
        return 1
    command, args = argv[0], argv[1:]
    try:
        text = ""
        for path in files:
            with open(path, "r", encoding="utf-8") as fh:
                text += fh.read() + "\n"
        ws = parse(text, validate=command != "validate")
        out = run(command, args, ws)
        if out:
            print(out)
        return 0
    except (SizeCapError, DepthCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, ValidationFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, FibraeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IndexError,):
        print(f"error: missing argument for {command}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
