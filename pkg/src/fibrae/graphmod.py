"""Graphs over a base, graph (op)fibrations, and reflections into endomap
classes: evolutive sets, idempotents, bijections and n-periodic maps.

Reflections into evolutive sets multiply with a truncated anti-chain and
take components; the truncation deepens (doubling) until consecutive slices
are shift-isomorphic, and the result is returned as a finite presentation
whose frontier elements continue as fresh free chains.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import DepthCapError, DomainError
from .fincat import fmt_id, idkey, sort_ids
from .overbase import ComponentsResult, UnionFind, _components_of


@dataclass(frozen=True)
class FinGraph:
    """A finite directed multigraph (loops and parallel edges allowed)."""

    nodes: tuple
    edges: dict  # edge -> (source, target)

    def src(self, e):
        return self.edges[e][0]

    def tgt(self, e):
        return self.edges[e][1]

    @cached_property
    def out_edges(self) -> dict:
        idx: dict = {v: [] for v in self.nodes}
        for e, (s, t) in self.edges.items():
            idx[s].append(e)
        return {v: sort_ids(es) for v, es in idx.items()}

    @cached_property
    def in_edges(self) -> dict:
        idx: dict = {v: [] for v in self.nodes}
        for e, (s, t) in self.edges.items():
            idx[t].append(e)
        return {v: sort_ids(es) for v, es in idx.items()}


def make_graph(nodes, edges) -> FinGraph:
    nodes = sort_ids(nodes)
    nodeset = set(nodes)
    for e, (s, t) in edges.items():
        if s not in nodeset or t not in nodeset:
            raise DomainError(f"edge {fmt_id(e)} has unknown endpoint")
    return FinGraph(nodes, dict(edges))


def validate_graph(G: FinGraph) -> list[str]:
    nodeset = set(G.nodes)
    return [f"edge {fmt_id(e)} has unknown endpoint"
            for e, (s, t) in G.edges.items()
            if s not in nodeset or t not in nodeset]


@dataclass(frozen=True)
class GraphMorphism:
    domain: FinGraph
    codomain: FinGraph
    node_map: dict
    edge_map: dict


def validate_graph_morphism(m: GraphMorphism) -> list[str]:
    report = []
    for v in m.domain.nodes:
        if v not in m.node_map:
            report.append(f"no image for node {fmt_id(v)}")
        elif m.node_map[v] not in set(m.codomain.nodes):
            report.append(f"node image of {fmt_id(v)} unknown")
    for e, (s, t) in m.domain.edges.items():
        img = m.edge_map.get(e)
        if img is None:
            report.append(f"no image for edge {fmt_id(e)}")
            continue
        if img not in m.codomain.edges:
            report.append(f"edge image of {fmt_id(e)} unknown")
            continue
        if m.codomain.edges[img] != (m.node_map.get(s), m.node_map.get(t)):
            report.append(f"edge image of {fmt_id(e)} has wrong endpoints")
    return report


def loop_graph() -> FinGraph:
    return make_graph(("*",), {"l": ("*", "*")})


def cycle_graph(n: int) -> FinGraph:
    """The n-cycle: the shape of n-periodic evolutive sets."""
    if n < 1:
        raise DomainError("cycle length must be positive")
    nodes = tuple(f"c{i}" for i in range(n))
    edges = {f"e{i}": (f"c{i}", f"c{(i + 1) % n}") for i in range(n)}
    return make_graph(nodes, edges)


def graph_components(G: FinGraph) -> ComponentsResult:
    return _components_of(G.nodes, ((s, t) for s, t in G.edges.values()))


def graph_product(G: FinGraph, H: FinGraph) -> FinGraph:
    nodes = tuple((a, b) for a in G.nodes for b in H.nodes)
    edges = {(e, f): ((G.src(e), H.src(f)), (G.tgt(e), H.tgt(f)))
             for e in G.edges for f in H.edges}
    return make_graph(nodes, edges)


def is_graph_opfibration(m: GraphMorphism) -> bool:
    """Unique lift of every base edge at every node over its source."""
    for f, (x, y) in m.codomain.edges.items():
        for a in m.domain.nodes:
            if m.node_map[a] != x:
                continue
            lifts = [e for e in m.domain.out_edges[a] if m.edge_map[e] == f]
            if len(lifts) != 1:
                return False
    return True


def is_graph_fibration(m: GraphMorphism) -> bool:
    """Unique lift of every base edge at every node over its target."""
    for f, (x, y) in m.codomain.edges.items():
        for b in m.domain.nodes:
            if m.node_map[b] != y:
                continue
            lifts = [e for e in m.domain.in_edges[b] if m.edge_map[e] == f]
            if len(lifts) != 1:
                return False
    return True


def is_evolutive(G: FinGraph) -> bool:
    """Exactly one outgoing edge per node."""
    return all(len(G.out_edges[v]) == 1 for v in G.nodes)


def evolutive_graph(points, succ) -> FinGraph:
    """The graph of an endomapping."""
    return make_graph(points, {("s", p): (p, succ[p]) for p in points})


# ---------------------------------------------------------------------------
# presentations of possibly-infinite evolutive sets

@dataclass(frozen=True)
class EvolutivePresentation:
    """Finite presentation of an evolutive set.

    ``succ`` is defined on every element except the frontier ones; each
    frontier element continues as a fresh infinite chain, all chains
    pairwise disjoint.  ``generator_image`` locates the input nodes.
    """

    elements: tuple
    succ: dict
    generator_image: dict
    frontier: tuple

    def is_finite(self) -> bool:
        return not self.frontier


def validate_presentation(P: EvolutivePresentation) -> list[str]:
    report = []
    elems = set(P.elements)
    for c in P.elements:
        if c in P.succ and P.succ[c] not in elems:
            report.append(f"succ of {fmt_id(c)} escapes the element set")
    for c in P.elements:
        if (c in P.succ) == (c in set(P.frontier)):
            report.append(f"{fmt_id(c)} must be exactly one of succ-defined/frontier")
    reached = set(P.generator_image.values())
    frontier_tail: set = set()
    changed = True
    while changed:
        changed = False
        for c in list(reached):
            nxt = P.succ.get(c)
            if nxt is not None and nxt not in reached:
                reached.add(nxt)
                changed = True
    if not elems <= reached:
        report.append("unreachable elements in presentation")
    return report


@dataclass(frozen=True)
class TwoSidedPresentation:
    """Presentation of a bijective endomap set with free tails both ways."""

    elements: tuple
    succ: dict
    generator_image: dict
    frontier_forward: tuple
    frontier_backward: tuple

    def is_finite(self) -> bool:
        return not self.frontier_forward and not self.frontier_backward


@dataclass(frozen=True)
class InfinityReport:
    """Witness that a coreflection is infinite; no cardinality is claimed."""

    target: str
    witness_node: object
    live_out_degree: int


# ---------------------------------------------------------------------------
# canonical forms and isomorphism of presented sets

def functional_canonical_form(G: FinGraph):
    """Canonical form of an endomap graph: tree shapes hung on cycles."""
    if not is_evolutive(G):
        raise DomainError("not an endomapping graph")
    succ = {v: G.tgt(G.out_edges[v][0]) for v in G.nodes}
    # find cycle nodes: iterate successors |V| times
    on_cycle = set()
    for v in G.nodes:
        seen = {}
        cur = v
        while cur not in seen:
            seen[cur] = True
            cur = succ[cur]
        # cur starts a cycle
        c = cur
        while True:
            on_cycle.add(c)
            c = succ[c]
            if c == cur:
                break

    tree_hash: dict = {}

    def th(v):
        if v in tree_hash:
            return tree_hash[v]
        kids = tuple(sorted(
            (th(u) for u in G.nodes
             if succ[u] == v and u not in on_cycle),
        ))
        tree_hash[v] = ("t", kids)
        return tree_hash[v]

    cycles = []
    visited = set()
    for v in sort_ids(on_cycle):
        if v in visited:
            continue
        cyc = [v]
        cur = succ[v]
        while cur != v:
            cyc.append(cur)
            cur = succ[cur]
        visited.update(cyc)
        labels = [th(u) for u in cyc]
        # minimal rotation
        best = min(tuple(labels[i:] + labels[:i]) for i in range(len(labels)))
        cycles.append(best)
    return tuple(sorted(cycles))


def functional_graphs_isomorphic(G: FinGraph, H: FinGraph) -> bool:
    return functional_canonical_form(G) == functional_canonical_form(H)


def cycle_spectrum(G: FinGraph) -> dict:
    """cycle length -> number of pure cycles, for sums of cycles."""
    form = functional_canonical_form(G)
    spec: dict = {}
    for cyc in form:
        if any(kids != ("t", ()) for kids in cyc):
            raise DomainError("graph is not a disjoint sum of cycles")
        spec[len(cyc)] = spec.get(len(cyc), 0) + 1
    return spec


def _reduce_tails(elements, succ, frontier_fwd, frontier_bwd=None):
    """Prune the removable interior of free tails.

    A forward-frontier element with exactly one predecessor hands its mark
    to the predecessor; backward marks migrate dually.  The reductions are
    confluent, so the result is a normal form of the presented structure.
    """
    elements = list(elements)
    succ = dict(succ)
    fwd = set(frontier_fwd)
    bwd = None if frontier_bwd is None else set(frontier_bwd)
    changed = True
    while changed:
        changed = False
        preds: dict = {c: [] for c in elements}
        for c, d in succ.items():
            preds[d].append(c)
        for z in list(elements):
            if z in fwd and len(preds[z]) == 1 and (bwd is None or z not in bwd):
                (y,) = preds[z]
                elements.remove(z)
                fwd.discard(z)
                del succ[y]
                fwd.add(y)
                changed = True
                break
            if bwd is not None and z in bwd and z in succ and z not in fwd:
                d = succ[z]
                if len(preds[d]) == 1:
                    elements.remove(z)
                    bwd.discard(z)
                    del succ[z]
                    bwd.add(d)
                    changed = True
                    break
    return elements, succ, fwd, bwd


def _partial_graphs_isomorphic(e1, s1, marks1, e2, s2, marks2) -> bool:
    """Backtracking isomorphism of partial endomap graphs with marked sets.

    ``marks*`` is a tuple of same-length mark sets that the bijection must
    preserve setwise.
    """
    if len(e1) != len(e2):
        return False
    if any(len(m1) != len(m2) for m1, m2 in zip(marks1, marks2)):
        return False
    preds1: dict = {c: 0 for c in e1}
    for d in s1.values():
        preds1[d] += 1
    preds2: dict = {c: 0 for c in e2}
    for d in s2.values():
        preds2[d] += 1

    def sig(c, s, preds, marks):
        return (tuple(c in m for m in marks), preds[c], c in s)

    order = sorted(e1, key=idkey)
    mapping: dict = {}
    used: set = set()

    def rec(i):
        if i == len(order):
            return all(mapping[s1[c]] == s2[mapping[c]] for c in s1)
        c = order[i]
        for d in e2:
            if d in used:
                continue
            if sig(c, s1, preds1, marks1) != sig(d, s2, preds2, marks2):
                continue
            if c in s1 and s1[c] in mapping and mapping[s1[c]] != s2.get(d):
                continue
            mapping[c] = d
            used.add(d)
            if rec(i + 1):
                return True
            del mapping[c]
            used.discard(d)
        return False

    return rec(0)


def presentations_isomorphic(P1: EvolutivePresentation,
                             P2: EvolutivePresentation) -> bool:
    """Whether two presentations present isomorphic evolutive sets.

    Both presentations are pruned to the normal form of their free tails and
    the finite remainders are matched, frontier marks included.
    """
    e1, s1, f1, _ = _reduce_tails(P1.elements, P1.succ, P1.frontier)
    e2, s2, f2, _ = _reduce_tails(P2.elements, P2.succ, P2.frontier)
    return _partial_graphs_isomorphic(e1, s1, (f1,), e2, s2, (f2,))


def two_sided_isomorphic(P1: TwoSidedPresentation,
                         P2: TwoSidedPresentation) -> bool:
    e1, s1, f1, b1 = _reduce_tails(P1.elements, P1.succ,
                                   P1.frontier_forward, P1.frontier_backward)
    e2, s2, f2, b2 = _reduce_tails(P2.elements, P2.succ,
                                   P2.frontier_forward, P2.frontier_backward)
    return _partial_graphs_isomorphic(e1, s1, (f1, b1), e2, s2, (f2, b2))


def integers_presentation() -> TwoSidedPresentation:
    """The free two-sided orbit (the bijective reflection of a free edge)."""
    return TwoSidedPresentation(("z",), {}, {}, ("z",), ("z",))


# ---------------------------------------------------------------------------
# the anti-chain truncation engine

def _two_slice_patterns(uf: UnionFind, levels, nodes, step: int):
    """Abstract partition of two consecutive slices, per level."""
    patterns = []
    for n in levels:
        cells: dict = {}
        for i, lvl in ((0, n), (1, n + step)):
            for v in nodes:
                cells.setdefault(uf.find((lvl, v)), []).append((i, v))
        patterns.append(frozenset(frozenset(c) for c in cells.values()))
    return patterns


def _stable_cut(patterns, guard: int):
    """Earliest index N whose pattern persists through the whole usable
    region; the last ``guard`` patterns are ignored as a truncation buffer.

    Requires at least ``guard`` agreeing steps inside the usable region.
    """
    usable = len(patterns) - guard
    for idx in range(usable):
        if usable - idx < guard:
            break
        if all(p == patterns[idx] for p in patterns[idx:usable]):
            return idx
    return None


def _minimize_presentation(elements, succ, gen_image, frontier):
    elements = list(elements)
    succ = dict(succ)
    frontier = set(frontier)
    protected = set(gen_image.values())
    changed = True
    while changed:
        changed = False
        preds: dict = {c: [] for c in elements}
        for c, d in succ.items():
            preds[d].append(c)
        for z in list(elements):
            if z in protected or z not in frontier:
                continue
            if len(preds[z]) != 1:
                continue
            (y,) = preds[z]
            elements.remove(z)
            frontier.discard(z)
            del succ[y]
            frontier.add(y)
            changed = True
            break
    return elements, succ, frontier


def reflect_eset(P: FinGraph, depth_cap: int = 4096,
                 initial_depth: int | None = None) -> EvolutivePresentation:
    """Reflection of a graph into evolutive sets, finitely presented.

    Components of the product with the anti-chain are computed on a window
    of levels that deepens until two-slice patterns stabilize; window
    classes become elements and the shift becomes succ, undefined exactly on
    the classes that escape the window (the free frontier).
    """
    nodes = P.nodes
    M = initial_depth or 2 * (len(nodes) + len(P.edges)) + 2
    guard = max(2, len(nodes))
    while True:
        uf = UnionFind((n, v) for n in range(M + 1) for v in nodes)
        for n in range(M):
            for e, (x, y) in P.edges.items():
                uf.union((n + 1, x), (n, y))
        patterns = _two_slice_patterns(uf, list(range(M)), nodes, 1)
        cut = _stable_cut(patterns, guard)
        if cut is not None:
            break
        M *= 2
        if M > depth_cap:
            raise DepthCapError(
                f"anti-chain truncation did not stabilize within {depth_cap}")

    window = set()
    for n in range(cut + 1):
        for v in nodes:
            window.add(uf.find((n, v)))
    members: dict = {}
    for n in range(M + 1):
        for v in nodes:
            r = uf.find((n, v))
            if r in window:
                members.setdefault(r, []).append((n, v))
    elements = sort_ids(window)
    succ = {}
    frontier = []
    for c in elements:
        n, v = min(members[c], key=idkey)
        target = uf.find((n + 1, v))
        if target in window:
            succ[c] = target
        else:
            frontier.append(c)
    gen_image = {v: uf.find((0, v)) for v in nodes}
    elems, succ, frontier = _minimize_presentation(
        elements, succ, gen_image, frontier)
    pres = EvolutivePresentation(sort_ids(elems), succ, gen_image,
                                 sort_ids(frontier))
    assert not validate_presentation(pres), validate_presentation(pres)
    return pres


# ---------------------------------------------------------------------------
# finite-shape reflections

def _shifted_components(P: FinGraph, S: FinGraph, pred: dict) -> FinGraph:
    """Components of S x P with the endomap induced by a left shift of S."""
    prod = graph_product(S, P)
    comp = graph_components(prod)
    succ = {}
    for cls in comp.classes:
        m, x = cls
        succ[cls] = comp.class_of[(pred[m], x)]
    return evolutive_graph(comp.classes, succ)


def reflect_idem(P: FinGraph) -> FinGraph:
    """Reflection into idempotent endomappings: components of the product
    with the reversed idempotent shape, with its induced shift."""
    E_op = make_graph(("g", "w"), {"a": ("w", "g"), "l": ("w", "w")})
    pred = {"g": "w", "w": "w"}
    return _shifted_components(P, E_op, pred)


def reflect_periodic(P: FinGraph, n: int) -> FinGraph:
    """Reflection into n-periodic endomappings: components of the product
    with the n-cycle, shifted along the cycle."""
    if n < 1:
        raise DomainError("period must be positive")
    Z = cycle_graph(n)
    pred = {f"c{i}": f"c{(i + 1) % n}" for i in range(n)}
    return _shifted_components(P, Z, pred)


def reflect_bij(P: FinGraph, depth_cap: int = 4096,
                initial_depth: int | None = None):
    """Reflection into bijective endomappings via a two-sided chain window.

    Returns a FinGraph (a sum of cycles) when the result is finite, else a
    TwoSidedPresentation with free tails in both directions.
    """
    nodes = P.nodes
    M = initial_depth or 2 * (len(nodes) + len(P.edges)) + 2
    guard = max(2, len(nodes))
    while True:
        uf = UnionFind((n, v) for n in range(-M, M + 1) for v in nodes)
        for n in range(-M, M):
            for e, (x, y) in P.edges.items():
                uf.union((n, x), (n + 1, y))
        up = _two_slice_patterns(uf, list(range(M)), nodes, 1)
        cut_up = _stable_cut(up, guard)
        down = _two_slice_patterns(uf, list(range(0, -M, -1)), nodes, -1)
        idx_down = _stable_cut(down, guard)
        cut_down = None if idx_down is None else -idx_down
        if cut_up is not None and cut_down is not None:
            break
        M *= 2
        if M > depth_cap:
            raise DepthCapError(
                f"two-sided truncation did not stabilize within {depth_cap}")

    window = set()
    for n in range(cut_down, cut_up + 1):
        for v in nodes:
            window.add(uf.find((n, v)))
    members: dict = {}
    for n in range(-M, M + 1):
        for v in nodes:
            r = uf.find((n, v))
            if r in window:
                members.setdefault(r, []).append((n, v))
    elements = sort_ids(window)
    succ = {}
    frontier_fwd = []
    for c in elements:
        # use a member away from the window edge when available
        n, v = min(members[c], key=lambda mv: (abs(mv[0]), idkey(mv)))
        if n + 1 <= M:
            target = uf.find((n + 1, v))
            if target in window:
                succ[c] = target
                continue
        frontier_fwd.append(c)
    hit = set(succ.values())
    frontier_bwd = [c for c in elements if c not in hit]
    gen_image = {v: uf.find((0, v)) for v in nodes}

    if not frontier_fwd and not frontier_bwd:
        G = evolutive_graph(elements, succ)
        assert len(set(succ.values())) == len(succ)
        return G

    # drop removable tail elements on both sides
    elements = list(elements)
    frontier_fwd = set(frontier_fwd)
    frontier_bwd = set(frontier_bwd)
    protected = set(gen_image.values())
    changed = True
    while changed:
        changed = False
        preds: dict = {c: [] for c in elements}
        for c, d in succ.items():
            preds[d].append(c)
        for z in list(elements):
            if z in protected:
                continue
            if z in frontier_fwd and len(preds[z]) == 1 and z not in frontier_bwd:
                (y,) = preds[z]
                elements.remove(z)
                frontier_fwd.discard(z)
                del succ[y]
                frontier_fwd.add(y)
                changed = True
                break
            if z in frontier_bwd and z in succ and z not in frontier_fwd:
                d = succ[z]
                if len(preds[d]) == 1:
                    elements.remove(z)
                    frontier_bwd.discard(z)
                    del succ[z]
                    frontier_bwd.add(d)
                    changed = True
                    break
    return TwoSidedPresentation(sort_ids(elements), succ, gen_image,
                                sort_ids(frontier_fwd), sort_ids(frontier_bwd))


# ---------------------------------------------------------------------------
# coreflections

def _live_subgraph(P: FinGraph):
    """Nodes and edges from which an infinite forward path exists."""
    live = set(P.nodes)
    changed = True
    while changed:
        changed = False
        for v in list(live):
            if not any(P.tgt(e) in live for e in P.out_edges[v]):
                live.discard(v)
                changed = True
    live_out = {v: [e for e in P.out_edges[v] if P.tgt(e) in live]
                for v in live}
    return live, live_out


def _cycle_nodes(P: FinGraph, live: set) -> set:
    on_cycle = set()
    for v in live:
        # reachable from v via >= 1 live edge back to v
        stack = [P.tgt(e) for e in P.out_edges[v] if P.tgt(e) in live]
        seen = set()
        while stack:
            w = stack.pop()
            if w == v:
                on_cycle.add(v)
                break
            if w in seen:
                continue
            seen.add(w)
            stack.extend(P.tgt(e) for e in P.out_edges[w] if P.tgt(e) in live)
    return on_cycle


def coreflect_finite(P: FinGraph, target: str):
    """Coreflection of a graph into a finite-shape endomap class.

    ``target`` is "idem", "periodic:N", or "eset".  Idempotent and periodic
    coreflections are always finite; for evolutive sets the result is the
    set of infinite paths, materialized when finite, otherwise an
    InfinityReport naming a cycle node with branching live choices.
    """
    if target == "idem":
        nodes = []
        succ = {}
        for u, (a, b) in P.edges.items():
            for v in P.out_edges[b]:
                if P.tgt(v) == b:
                    nodes.append(("m", u, v))
        for nd in nodes:
            _, u, v = nd
            succ[nd] = ("m", v, v)
        return evolutive_graph(sort_ids(nodes), succ)

    if target.startswith("periodic:"):
        n = int(target.split(":", 1)[1])
        if n < 1:
            raise DomainError("period must be positive")
        walks: list = []

        def extend(walk):
            if len(walk) == n:
                if P.tgt(walk[-1]) == P.src(walk[0]):
                    walks.append(tuple(walk))
                return
            last = P.tgt(walk[-1])
            for e in P.out_edges[last]:
                extend(walk + [e])

        for e in sort_ids(P.edges):
            extend([e])
        nodes = sort_ids(("w",) + w for w in walks)
        succ = {nd: ("w",) + nd[2:] + (nd[1],) for nd in nodes}
        return evolutive_graph(nodes, succ)

    if target == "eset":
        live, live_out = _live_subgraph(P)
        on_cycle = _cycle_nodes(P, live)
        for v in sort_ids(on_cycle):
            if len(live_out[v]) != 1:
                return InfinityReport("eset", v, len(live_out[v]))
        paths: dict = {}

        def paths_from(v):
            if v in paths:
                return paths[v]
            if v in on_cycle:
                paths[v] = (("cyc", v),)
                return paths[v]
            out = []
            for e in live_out[v]:
                for t in paths_from(P.tgt(e)):
                    out.append(("step", e, t))
            paths[v] = tuple(out)
            return paths[v]

        nodes = []
        for v in sort_ids(live):
            nodes.extend(paths_from(v))
        nodes = sort_ids(set(nodes))
        succ = {}
        for nd in nodes:
            if nd[0] == "cyc":
                v = nd[1]
                succ[nd] = ("cyc", P.tgt(live_out[v][0]))
            else:
                succ[nd] = nd[2]
        return evolutive_graph(nodes, succ)

    raise DomainError(f"unknown coreflection target {target!r}")


# ---------------------------------------------------------------------------
# reflections over an acyclic base graph

def _is_acyclic(G: FinGraph) -> bool:
    color = {v: 0 for v in G.nodes}

    def dfs(v):
        color[v] = 1
        for e in G.out_edges[v]:
            w = G.tgt(e)
            if color[w] == 1:
                return False
            if color[w] == 0 and not dfs(w):
                return False
        color[v] = 2
        return True

    return all(color[v] != 0 or dfs(v) for v in G.nodes)


def reflect_graph_over_acyclic(m: GraphMorphism):
    """Opfibration reflection of a graph over an acyclic base graph.

    Fibers at each base node are the components of the comma of paths into
    the node with the total graph; the action along a base edge extends the
    path.  Cyclic bases are rejected (their path sets are infinite); the
    one-loop base is handled by ``reflect_eset``.
    """
    X = m.codomain
    if not _is_acyclic(X):
        raise DomainError(
            "cyclic base graphs are unsupported; for the one-loop base use "
            "reflect_eset and friends")
    P = m.domain
    # paths into x, as (start, tuple of edges)
    paths_into: dict = {x: [] for x in X.nodes}

    def collect(x):
        out = [(x, ())]
        for e in X.in_edges[x]:
            for (s, es) in collect(X.src(e)):
                out.append((s, es + (e,)))
        return out

    for x in X.nodes:
        paths_into[x] = collect(x)
    comps = {}
    fibers = {}
    for x in X.nodes:
        # comma nodes: (total node a, path q) with m(a) = start of q
        cnodes = [(a, q) for a in P.nodes for q in paths_into[x]
                  if m.node_map[a] == q[0]]
        cedges = []
        for u, (a, b) in P.edges.items():
            fe = m.edge_map[u]
            for (s, es) in paths_into[x]:
                if es and es[0] == fe and s == X.src(fe):
                    # q' starts with the image of u
                    q2 = (X.tgt(fe), es[1:])
                    cedges.append(((a, (s, es)), (b, q2)))
        comp = _components_of(cnodes, cedges)
        comps[x] = comp
        fibers[x] = comp.classes
    actions = {}
    for e, (x, y) in X.edges.items():
        act = {}
        for cls in fibers[x]:
            a, (s, es) = cls
            act[cls] = comps[y].class_of[(a, (s, es + (e,)))]
        actions[e] = act
    return fibers, actions
