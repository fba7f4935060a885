"""Dual resolution graphs of rational double points and their blow-ups.

A :class:`ResolutionGraph` is a weighted tree (self-intersection numbers on the
vertices) decorated with arrows (strict transforms of curve branches, each
meeting its component transversally at a smooth point) and divisorial marks.
Vertex ids are strings; the vertices of the minimal resolution keep the
numbering ``"1" .. "n"`` of the usual Dynkin pictures and blown-up components
are numbered consecutively after them.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property


class GraphError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class AdeType:
    family: str
    rank: int

    def __post_init__(self):
        ok = (
            (self.family == "A" and self.rank >= 1)
            or (self.family == "D" and self.rank >= 4)
            or (self.family == "E" and self.rank in (6, 7, 8))
        )
        if not ok:
            raise GraphError(f"no ADE type {self.family}{self.rank}")

    @classmethod
    def parse(cls, text: str) -> "AdeType":
        m = re.fullmatch(r"\s*([ADEade])_?(\d+)\s*", text)
        if not m:
            raise GraphError(f"cannot parse ADE type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self):
        return f"{self.family}{self.rank}"

    def base_edges(self):
        k = self.rank
        if self.family == "A":
            return [(i, i + 1) for i in range(1, k)]
        if self.family == "D":
            return [(i, i + 1) for i in range(1, k - 2)] + [(k - 2, k - 1), (k - 2, k)]
        chain = [1, 2, 3] + list(range(5, k + 1))
        return list(zip(chain, chain[1:])) + [(3, 4)]

    def ends(self):
        k = self.rank
        return {"A": [1, k] if k > 1 else [1], "D": [1, k - 1, k], "E": [1, 4, k]}[self.family]


@dataclass(frozen=True)
class BlowupStep:
    """``kind`` is ``"free"`` (``at`` = vertex id), ``"edge"`` (``at`` = pair of
    vertex ids) or ``"arrow"`` (``at`` = arrow id)."""

    kind: str
    at: object

    def __post_init__(self):
        if self.kind not in ("free", "edge", "arrow"):
            raise GraphError(f"unknown blow-up kind {self.kind!r}")
        if self.kind == "edge":
            object.__setattr__(self, "at", tuple(self.at))

    def to_json(self):
        return {"op": self.kind, "at": list(self.at) if self.kind == "edge" else self.at}

    @classmethod
    def from_json(cls, doc):
        return cls(doc["op"], doc["at"])


def FreePoint(v) -> BlowupStep:
    return BlowupStep("free", str(v))


def EdgePoint(u, v) -> BlowupStep:
    return BlowupStep("edge", (str(u), str(v)))


def ArrowPoint(a) -> BlowupStep:
    return BlowupStep("arrow", a)


def _edge(u, v):
    return (u, v) if _vkey(u) <= _vkey(v) else (v, u)


def _vkey(v):
    return (0, int(v), v) if v.isdigit() else (1, 0, v)


_MATRIX_CACHES = ("weight", "neighbours", "_order", "_pivot_result", "_mcols", "_lineage")


@dataclass(frozen=True)
class ResolutionGraph:
    ade: AdeType
    weights: tuple  # ((id, self_intersection), ...)
    edges: tuple  # sorted pairs
    arrows: tuple = ()  # ((arrow_id, vertex_id), ...)
    divisorial: tuple = ()  # (vertex_id, ...)
    script: tuple = ()  # (BlowupStep, ...)
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted({_edge(*e) for e in self.edges})))
        if self.validate:
            self.check()

    # -- structure --------------------------------------------------------

    @cached_property
    def weight(self) -> dict:
        return dict(self.weights)

    @property
    def vertex_ids(self):
        return [v for v, _ in self.weights]

    @cached_property
    def neighbours(self) -> dict:
        adj = {v: [] for v, _ in self.weights}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    @cached_property
    def arrows_at(self) -> dict:
        out = {v: [] for v, _ in self.weights}
        for a, v in self.arrows:
            out[v].append(a)
        return out

    def arrow_vertex(self, arrow_id) -> str:
        for a, v in self.arrows:
            if a == arrow_id:
                return v
        raise GraphError(f"no arrow {arrow_id!r}")

    def valency(self, v) -> int:
        return len(self.neighbours[v]) + len(self.arrows_at[v])

    def check(self):
        ids = [v for v, _ in self.weights]
        if len(set(ids)) != len(ids) or not ids:
            raise GraphError("vertex ids must be distinct and nonempty")
        for v, w in self.weights:
            if not isinstance(w, int) or w > -1:
                raise GraphError(f"self-intersection of {v} must be an integer <= -1")
        known = set(ids)
        for u, v in self.edges:
            if u == v or u not in known or v not in known:
                raise GraphError(f"bad edge {(u, v)}")
        if len(self.edges) != len(ids) - 1 or not self._connected():
            raise GraphError("graph is not a tree")
        seen = set()
        for a, v in self.arrows:
            if a in seen or v not in known:
                raise GraphError(f"bad arrow {(a, v)}")
            seen.add(a)
        if len(set(self.divisorial)) != len(self.divisorial) or not set(self.divisorial) <= known:
            raise GraphError("bad divisorial marks")
        if not self._pivot_result[1]:
            raise GraphError("intersection matrix is not negative definite")

    def _connected(self):
        start = self.weights[0][0]
        seen, stack = {start}, [start]
        while stack:
            for w in self.neighbours[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.weights)

    # -- linear algebra on the tree -----------------------------------------

    @cached_property
    def _order(self):
        """Vertices in BFS order from the first vertex, with parent map."""
        root = self.weights[0][0]
        order, parent = [root], {root: None}
        for v in order:
            for w in self.neighbours[v]:
                if w not in parent:
                    parent[w] = v
                    order.append(w)
        return order, parent

    def _tree_pivots(self):
        # Gaussian elimination of -(E.E) from the leaves inwards; a tree has no
        # fill-in, and all pivots positive <=> negative definite intersection form.
        order, parent = self._order
        pivot = {v: Fraction(-self.weight[v]) for v in order}
        for v in reversed(order):
            if pivot[v] <= 0:
                return pivot, False
            p = parent[v]
            if p is not None:
                pivot[p] -= 1 / pivot[v]
        return pivot, True

    @cached_property
    def _pivot_result(self):
        return self._tree_pivots()

    @property
    def pivots(self):
        return self._pivot_result[0]

    def m_column(self, tau) -> dict:
        """``m_{sigma tau}`` for all sigma: solves ``-(E.E) x = e_tau``."""
        cache = self.__dict__.setdefault("_mcols", {})
        if tau in cache:
            return cache[tau]
        if "_lineage" in self.__dict__:
            cache[tau] = x = self._column_after_blowup(tau, *self._lineage)
            return x
        order, parent = self._order
        piv = self.pivots
        rhs = {v: Fraction(0) for v in order}
        rhs[tau] = Fraction(1)
        for v in reversed(order):
            p = parent[v]
            if p is not None and rhs[v]:
                rhs[p] += rhs[v] / piv[v]
        x = {}
        for v in order:
            p = parent[v]
            x[v] = (rhs[v] + (x[p] if p is not None else 0)) / piv[v]
        cache[tau] = x
        return x

    def _column_after_blowup(self, tau, parent, new, centres):
        # old entries survive a blow-up; the new row is the sum of the centre
        # rows and the new diagonal entry gains one
        if tau != new:
            col = dict(parent.m_column(tau))
            col[new] = sum(col[c] for c in centres)
            return col
        cols = [parent.m_column(c) for c in centres]
        col = {s: sum(c[s] for c in cols) for s in cols[0]}
        col[new] = sum(col[c] for c in centres) + 1
        return col

    def m(self, sigma, delta) -> Fraction:
        return self.m_column(delta)[sigma]

    # -- derived graphs -----------------------------------------------------

    def _new_id(self):
        nums = [int(v) for v, _ in self.weights if v.isdigit()]
        return str(max(nums, default=0) + 1)

    def replace(self, **kw) -> "ResolutionGraph":
        base = dict(
            ade=self.ade, weights=self.weights, edges=self.edges, arrows=self.arrows,
            divisorial=self.divisorial, script=self.script, validate=self.validate,
        )
        base.update(kw)
        validate = base.pop("validate")
        g = ResolutionGraph(**base, validate=False)
        object.__setattr__(g, "validate", validate)
        if g.weights == self.weights and g.edges == self.edges:
            # same intersection matrix: keep the linear algebra already done
            for name in _MATRIX_CACHES:
                if name in self.__dict__:
                    g.__dict__[name] = self.__dict__[name]
        if validate:
            g.check()
        return g

    def with_arrow(self, vertex, arrow_id=None) -> "ResolutionGraph":
        vertex = str(vertex)
        if vertex not in self.weight:
            raise GraphError(f"no vertex {vertex!r}")
        arrow_id = arrow_id or f"C{len(self.arrows) + 1}"
        return self.replace(arrows=self.arrows + ((arrow_id, vertex),))

    def with_mark(self, vertex) -> "ResolutionGraph":
        vertex = str(vertex)
        if vertex not in self.weight:
            raise GraphError(f"no vertex {vertex!r}")
        return self.replace(divisorial=self.divisorial + (vertex,))

    @property
    def n_vertices(self):
        return len(self.weights)

    def __str__(self):
        return render_graph(self)


def build_minimal(t) -> ResolutionGraph:
    if isinstance(t, str):
        t = AdeType.parse(t)
    weights = tuple((str(i), -2) for i in range(1, t.rank + 1))
    edges = tuple((str(a), str(b)) for a, b in t.base_edges())
    return ResolutionGraph(t, weights, edges)


def blow_up(g: ResolutionGraph, step: BlowupStep) -> ResolutionGraph:
    new = g._new_id()
    w = dict(g.weights)
    edges = list(g.edges)
    arrows = list(g.arrows)
    if step.kind == "free":
        v = step.at
        if v not in w:
            raise GraphError(f"no vertex {v!r}")
        w[v] -= 1
        edges.append((v, new))
        centres = (v,)
    elif step.kind == "edge":
        u, v = step.at
        e = _edge(u, v)
        if e not in g.edges:
            raise GraphError(f"no edge {step.at!r}")
        edges.remove(e)
        w[u] -= 1
        w[v] -= 1
        edges += [(u, new), (v, new)]
        centres = e
    else:
        v = g.arrow_vertex(step.at)
        w[v] -= 1
        edges.append((v, new))
        arrows = [(a, new if a == step.at else x) for a, x in arrows]
        centres = (v,)
    w[new] = -1
    # a blow-up of a valid graph is valid, so the checks are skipped
    h = g.replace(
        weights=tuple(w.items()), edges=tuple(edges), arrows=tuple(arrows),
        script=g.script + (step,), validate=False,
    )
    object.__setattr__(h, "validate", g.validate)
    h.__dict__["_lineage"] = (g, new, centres)
    return h


def apply_script(g: ResolutionGraph, steps) -> ResolutionGraph:
    for s in steps:
        g = blow_up(g, s)
    return g


def contractible(g: ResolutionGraph):
    """Vertices that can be blown down without leaving normal crossings."""
    return [
        v for v, e2 in g.weights
        if e2 == -1 and g.valency(v) <= 2 and v not in g.divisorial and g.n_vertices > 1
        and len(g.neighbours[v]) >= 1
    ]


def is_minimal(g: ResolutionGraph) -> bool:
    return not contractible(g)


def contract(g: ResolutionGraph, v) -> ResolutionGraph:
    """Blow down the (-1)-component ``v``; inverse of :func:`blow_up`."""
    if v not in contractible(g):
        raise GraphError(f"vertex {v!r} is not contractible")
    nb = g.neighbours[v]
    w = {x: e for x, e in g.weights if x != v}
    for x in nb:
        w[x] += 1
    edges = [e for e in g.edges if v not in e]
    if len(nb) == 2:
        edges.append(tuple(nb))
    arrows = tuple((a, nb[0] if x == v else x) for a, x in g.arrows)
    return g.replace(weights=tuple(w.items()), edges=tuple(edges), arrows=arrows, script=())


def minimize(g: ResolutionGraph) -> ResolutionGraph:
    while True:
        c = contractible(g)
        if not c:
            return g
        g = contract(g, c[0])


def intersection_matrix(g: ResolutionGraph):
    """``(E_s . E_d)`` as a list of integer rows in vertex order."""
    ids = g.vertex_ids
    idx = {v: i for i, v in enumerate(ids)}
    rows = [[0] * len(ids) for _ in ids]
    for v, e2 in g.weights:
        rows[idx[v]][idx[v]] = e2
    for u, v in g.edges:
        rows[idx[u]][idx[v]] = rows[idx[v]][idx[u]] = 1
    return rows


def m_matrix(g: ResolutionGraph):
    """``-(E.E)^{-1}`` with exact rational entries, rows in vertex order."""
    ids = g.vertex_ids
    cols = {v: g.m_column(v) for v in ids}
    return [[cols[d][s] for d in ids] for s in ids]


def determinant(g: ResolutionGraph) -> int:
    # unchanged by blow-ups
    while "_lineage" in g.__dict__ and "_pivot_result" not in g.__dict__:
        g = g._lineage[0]
    d = Fraction(1)
    for p in g.pivots.values():
        d *= p
    assert d.denominator == 1
    return int(d)


def euler_chi(g: ResolutionGraph, v) -> int:
    """Euler characteristic of the smooth part of ``E_v``: divisorial marks do
    not remove points."""
    return 2 - g.valency(str(v))


# -- symmetries ------------------------------------------------------------------

@dataclass(frozen=True)
class GraphAutomorphism:
    mapping: tuple  # ((id, image), ...)

    def __call__(self, v):
        return dict(self.mapping)[str(v)]

    @property
    def as_dict(self):
        return dict(self.mapping)


def _perm(pairs, n):
    m = {str(i): str(i) for i in range(1, n + 1)}
    m.update({str(a): str(b) for a, b in pairs})
    return GraphAutomorphism(tuple(sorted(m.items(), key=lambda kv: int(kv[0]))))


def automorphism_group(t) -> list:
    if isinstance(t, str):
        t = AdeType.parse(t)
    k = t.rank
    ident = _perm([], k)
    if t.family == "A":
        if k == 1:
            return [ident]
        return [ident, _perm([(i, k + 1 - i) for i in range(1, k + 1)], k)]
    if t.family == "D":
        if k == 4:
            out = []
            for p in itertools.permutations([1, 3, 4]):
                out.append(_perm(list(zip([1, 3, 4], p)), k))
            return sorted(out, key=lambda a: a.mapping)
        return [ident, _perm([(k - 1, k), (k, k - 1)], k)]
    if k == 6:
        return [ident, _perm([(1, 6), (6, 1), (2, 5), (5, 2)], k)]
    return [ident]


def brute_force_automorphisms(g: ResolutionGraph) -> list:
    """Edge- and weight-preserving vertex permutations, by backtracking."""
    ids = g.vertex_ids
    edges = set(g.edges)
    out = []

    def extend(assign, used):
        if len(assign) == len(ids):
            out.append(GraphAutomorphism(tuple(sorted(assign.items(), key=lambda kv: _vkey(kv[0])))))
            return
        v = ids[len(assign)]
        for img in ids:
            if img in used or g.weight[img] != g.weight[v]:
                continue
            if len(g.neighbours[img]) != len(g.neighbours[v]):
                continue
            if all((_edge(assign[u], img) in edges) == (_edge(u, v) in edges) for u in assign):
                assign[v] = img
                used.add(img)
                extend(assign, used)
                del assign[v]
                used.discard(img)

    extend({}, set())
    return sorted(out, key=lambda a: a.mapping)


# -- canonical form of decorated trees ----------------------------------------------

def canonical_key(g: ResolutionGraph, marker=None) -> str:
    """A string equal for two graphs iff they are isomorphic as decorated
    trees (weights, labelled arrows, labelled divisorial marks and an optional
    marked vertex).  Since the contraction to the minimal resolution is
    canonical, such an isomorphism restricts to a symmetry of the Dynkin
    graph."""
    arrow_pos = {}
    for i, (_, v) in enumerate(g.arrows):
        arrow_pos.setdefault(v, []).append(i)
    mark_pos = {v: i for i, v in enumerate(g.divisorial)}
    label = {}
    for v, e2 in g.weights:
        a = ",".join(map(str, arrow_pos.get(v, [])))
        d = mark_pos.get(v, "")
        label[v] = f"{e2}|{a}|{d}|{'*' if v == marker else ''}"
    nb = g.neighbours

    def encode(v, parent):
        kids = sorted(encode(w, v) for w in nb[v] if w != parent)
        return "(" + label[v] + "".join(kids) + ")"

    return str(g.ade) + ":" + min(encode(c, None) for c in _centres(g))


def _centres(g):
    nb = g.neighbours
    deg = {v: len(nb[v]) for v in nb}
    layer = [v for v in nb if deg[v] <= 1]
    remaining = len(nb)
    removed = set()
    while remaining > 2:
        nxt = []
        for v in layer:
            removed.add(v)
            remaining -= 1
            for w in nb[v]:
                if w not in removed:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    return [v for v in nb if v not in removed]


def isomorphic_up_to_symmetry(g1: ResolutionGraph, g2: ResolutionGraph, t=None) -> bool:
    if t is not None:
        t = AdeType.parse(t) if isinstance(t, str) else t
        if g1.ade != t or g2.ade != t:
            return False
    return canonical_key(g1) == canonical_key(g2)


# -- graph documents -----------------------------------------------------------

def graph_to_doc(g: ResolutionGraph) -> dict:
    return {
        "ade": str(g.ade),
        "vertices": [{"id": v, "e2": e2} for v, e2 in g.weights],
        "edges": [list(e) for e in g.edges],
        "arrows": [{"id": a, "at": v} for a, v in g.arrows],
        "divisorial": list(g.divisorial),
        "script": [s.to_json() for s in g.script],
    }


def render_graph(g: ResolutionGraph) -> str:
    return json.dumps(graph_to_doc(g), indent=2) + "\n"


def graph_from_doc(doc: dict) -> ResolutionGraph:
    return ResolutionGraph(
        AdeType.parse(doc["ade"]),
        tuple((str(v["id"]), int(v["e2"])) for v in doc["vertices"]),
        tuple((str(a), str(b)) for a, b in doc["edges"]),
        tuple((str(a["id"]), str(a["at"])) for a in doc.get("arrows", [])),
        tuple(str(v) for v in doc.get("divisorial", [])),
        tuple(BlowupStep.from_json(s) for s in doc.get("script", [])),
    )


def parse_graph(text: str) -> ResolutionGraph:
    return graph_from_doc(json.loads(text))
