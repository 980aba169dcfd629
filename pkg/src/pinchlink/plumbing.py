"""Plumbing graphs for graph manifolds with boundary.

Graphs are trees (forests when disconnected) of genus-decorated
vertices with integer Euler weights; arrows mark boundary tori.  The
module computes intersection matrices and first-homology presentations,
performs Dehn filling along framed boundary tori, and applies a small
set of reduction moves (blow-downs and S^3 recognition).

Conventions fixed project-wide: an arrow's framing is (mu, lambda)
with mu the boundary meridian generator and lambda the fiber of the
arrow's vertex; a slope (p, q) is the curve p*mu + q*lambda; relation
matrices carry relations as columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateFillingError, ValidationError
from .lattice import AbelianGroup, IntMatrix, cokernel

__all__ = [
    "PlumbingGraph",
    "ArrowFraming",
    "H1Presentation",
    "Slope",
    "ReductionResult",
    "intersection_matrix",
    "h1_presentation",
    "dehn_fill",
    "reduce",
    "is_s3_certificate",
]


@dataclass(frozen=True)
class PlumbingGraph:
    """Weighted forest with genus decorations and labelled arrows.

    vertices: (euler_weight, genus) pairs; edges: unordered index
    pairs; arrows: (vertex, label) with unique labels.  Edges are
    canonicalized to sorted pairs in sorted order, arrows to label
    order, so equal graphs compare equal.
    """

    vertices: tuple[tuple[int, int], ...] = ()
    edges: tuple[tuple[int, int], ...] = ()
    arrows: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        vertices = tuple((int(e), int(g)) for e, g in self.vertices)
        n = len(vertices)
        for e, g in vertices:
            if g < 0:
                raise ValidationError("vertex genus must be nonnegative")
        edges = tuple(sorted((min(a, b), max(a, b)) for a, b in self.edges))
        arrows = tuple(sorted(((int(v), str(lab)) for v, lab in self.arrows), key=lambda a: a[1]))
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise ValidationError(f"edge ({a},{b}) out of range")
            if a == b:
                raise ValidationError(f"self-loop at vertex {a}")
        if len(set(edges)) != len(edges):
            raise ValidationError("duplicate edge")
        labels = [lab for _, lab in arrows]
        if len(set(labels)) != len(labels):
            raise ValidationError("duplicate arrow label")
        for v, lab in arrows:
            if not 0 <= v < n:
                raise ValidationError(f"arrow {lab!r} at out-of-range vertex {v}")
        # forest check: every edge must join two distinct components
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in edges:
            ra, rb = find(a), find(b)
            if ra == rb:
                raise ValidationError("graph contains a cycle; only trees are supported")
            parent[ra] = rb
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "arrows", arrows)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def arrow_labels(self) -> list[str]:
        return [lab for _, lab in self.arrows]

    def arrow_vertex(self, label: str) -> int:
        for v, lab in self.arrows:
            if lab == label:
                return v
        raise ValidationError(f"unknown arrow label {label!r}")

    def neighbors(self, v: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return out

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex-index lists, ordered
        by smallest member."""
        adj = {i: [] for i in range(self.n_vertices)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = set()
        comps = []
        for start in range(self.n_vertices):
            if start in seen:
                continue
            stack = [start]
            comp = []
            seen.add(start)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def induced_subgraph(self, vertex_indices) -> "PlumbingGraph":
        """Subgraph on the given vertices, indices compacted in
        ascending order; arrows at kept vertices are carried over."""
        keep = sorted(set(vertex_indices))
        remap = {old: new for new, old in enumerate(keep)}
        return PlumbingGraph(
            vertices=tuple(self.vertices[i] for i in keep),
            edges=tuple(
                (remap[a], remap[b]) for a, b in self.edges if a in remap and b in remap
            ),
            arrows=tuple((remap[v], lab) for v, lab in self.arrows if v in remap),
        )

    def to_json(self) -> dict:
        return {
            "vertices": [{"e": e, "g": g} for e, g in self.vertices],
            "edges": [[a, b] for a, b in self.edges],
            "arrows": [{"v": v, "label": lab} for v, lab in self.arrows],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PlumbingGraph":
        if not isinstance(doc, dict):
            raise ValidationError("plumbing graph document must be an object")
        try:
            vertices = tuple((int(v["e"]), int(v.get("g", 0))) for v in doc.get("vertices", []))
            edges = tuple((int(a), int(b)) for a, b in doc.get("edges", []))
            arrows = tuple((int(a["v"]), str(a["label"])) for a in doc.get("arrows", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed plumbing graph: {exc}") from exc
        return cls(vertices, edges, arrows)


def intersection_matrix(g: PlumbingGraph) -> IntMatrix:
    """Symmetric matrix with Euler weights on the diagonal and edge
    counts off it."""
    n = g.n_vertices
    rows = [[0] * n for _ in range(n)]
    for i, (e, _) in enumerate(g.vertices):
        rows[i][i] = e
    for a, b in g.edges:
        rows[a][b] += 1
        rows[b][a] += 1
    return IntMatrix.from_rows(rows)


@dataclass(frozen=True)
class ArrowFraming:
    """Classes of one arrow's boundary basis in presentation
    coordinates: the meridian generator mu and the vertex fiber."""

    label: str
    meridian: tuple[int, ...]
    fiber: tuple[int, ...]


@dataclass(frozen=True)
class H1Presentation:
    """First-homology presentation of a plumbed manifold.

    Generators: one fiber class t_v per vertex, one meridian mu_a per
    arrow, and 2*genus free symbols per vertex.  One relation per
    vertex.  Relations are the columns of `relations`.
    """

    generators: tuple[str, ...]
    relations: IntMatrix
    framings: tuple[ArrowFraming, ...]

    def framing(self, label: str) -> ArrowFraming:
        for fr in self.framings:
            if fr.label == label:
                return fr
        raise ValidationError(f"unknown arrow label {label!r}")

    def group(self) -> AbelianGroup:
        return cokernel(self.relations)

    def with_relations(self, columns) -> "H1Presentation":
        """New presentation with extra relation columns appended."""
        cols = [list(c) for c in columns]
        n = len(self.generators)
        for c in cols:
            if len(c) != n:
                raise ValidationError("relation column has wrong length")
        rows = self.relations.to_rows()
        for i in range(n):
            rows[i].extend(c[i] for c in cols)
        return H1Presentation(
            self.generators,
            IntMatrix.from_rows(rows) if rows else IntMatrix(0, 0, ()),
            self.framings,
        )

    def fill(self, label: str, s: "Slope") -> "H1Presentation":
        """Presentation-level Dehn filling: impose p*mu + q*lambda = 0
        on the arrow's boundary torus and retire its framing."""
        fr = self.framing(label)
        col = [s.p * m + s.q * f for m, f in zip(fr.meridian, fr.fiber)]
        filled = self.with_relations([col])
        return H1Presentation(
            filled.generators,
            filled.relations,
            tuple(f for f in self.framings if f.label != label),
        )


def h1_presentation(g: PlumbingGraph) -> H1Presentation:
    """Standard presentation: per vertex v the relation
    e_v*t_v + sum of adjacent t_w + sum of mu_a over arrows at v = 0;
    genus symbols are free."""
    n = g.n_vertices
    gen_names = [f"t{v}" for v in range(n)]
    mu_index = {}
    for v, lab in g.arrows:
        mu_index[lab] = len(gen_names)
        gen_names.append(f"mu.{lab}")
    for v, (_, genus) in enumerate(g.vertices):
        for i in range(2 * genus):
            gen_names.append(f"s{v}.{i}")
    ngen = len(gen_names)
    cols = []
    for v in range(n):
        col = [0] * ngen
        col[v] = g.vertices[v][0]
        for a, b in g.edges:
            if a == v:
                col[b] += 1
            elif b == v:
                col[a] += 1
        for w, lab in g.arrows:
            if w == v:
                col[mu_index[lab]] += 1
        cols.append(col)
    rows = [[cols[j][i] for j in range(n)] for i in range(ngen)]
    relations = IntMatrix.from_rows(rows) if ngen else IntMatrix(0, n, ())
    framings = []
    for v, lab in g.arrows:
        mer = [0] * ngen
        mer[mu_index[lab]] = 1
        fib = [0] * ngen
        fib[v] = 1
        framings.append(ArrowFraming(lab, tuple(mer), tuple(fib)))
    return H1Presentation(tuple(gen_names), relations, tuple(framings))


@dataclass(frozen=True)
class Slope:
    """Primitive boundary slope p*mu + q*lambda, normalized so that
    p >= 0, and q >= 0 when p == 0."""

    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if (p, q) == (0, 0):
            raise ValidationError("slope (0,0) is not a curve")
        if math.gcd(p, q) != 1:
            raise ValidationError(f"slope ({p},{q}) is not primitive")
        if p < 0 or (p == 0 and q < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def is_degenerate(self) -> bool:
        return self.q == 0


def _neg_continued_fraction(x: Fraction) -> list[int]:
    """x = b_1 - 1/(b_2 - 1/(... - 1/b_k)) with b_i >= 2 for i >= 2."""
    terms = []
    while True:
        b = math.ceil(x)
        terms.append(b)
        r = b - x
        if r == 0:
            return terms
        x = 1 / r


def filling_chain_weights(s: Slope) -> list[int]:
    """Euler weights of the chain that realizes filling along `s`.

    The chain imposes the relation p*mu + q*lambda = 0 on the filled
    torus; the expansion target -p/q is what makes the graph-level
    filling agree with the presentation-level one.
    """
    if s.is_degenerate:
        raise DegenerateFillingError(
            f"slope ({s.p},{s.q}) is a degenerate filling (S^1 x S^2 summand)"
        )
    return [-b for b in _neg_continued_fraction(Fraction(-s.p, s.q))]


def dehn_fill(g: PlumbingGraph, label: str, s: Slope) -> PlumbingGraph:
    """Fill the boundary torus of the given arrow along slope s.

    The arrow is removed and replaced by a chain of genus-0 vertices
    hanging off the arrow's vertex; filling along the fiber (0,1)
    degenerates to a single weight-0 vertex.
    """
    v = g.arrow_vertex(label)
    weights = filling_chain_weights(s)
    vertices = list(g.vertices)
    edges = list(g.edges)
    prev = v
    for w in weights:
        vertices.append((w, 0))
        edges.append((prev, len(vertices) - 1))
        prev = len(vertices) - 1
    arrows = tuple(a for a in g.arrows if a[1] != label)
    return PlumbingGraph(tuple(vertices), tuple(edges), arrows)


@dataclass(frozen=True)
class ReductionResult:
    """Outcome of `reduce`: the irreducible graph, the number of S^3
    components recognized and removed, and a move transcript."""

    graph: PlumbingGraph
    s3_count: int
    moves: tuple[str, ...]


def reduce(g: PlumbingGraph) -> ReductionResult:
    """Apply blow-downs of genus-0 weight +-1 vertices of valence <= 2
    and S^3 recognition (isolated +-1 vertex, (0,0)-chain component)
    until no move applies.  Preserves first homology."""
    if g.arrows:
        raise ValidationError("reduce requires an arrow-free graph")
    if __debug__:
        before = h1_presentation(g).group()
    # mutable working copy: alive flags, weights, genera, adjacency sets
    alive = [True] * g.n_vertices
    weight = [e for e, _ in g.vertices]
    genus = [gv for _, gv in g.vertices]
    adj = {i: set() for i in range(g.n_vertices)}
    for a, b in g.edges:
        adj[a].add(b)
        adj[b].add(a)
    moves = []
    s3 = 0
    budget = 10 * max(1, g.n_vertices)
    while True:
        if len(moves) > budget:
            raise ValidationError("reduction move budget exceeded")
        move = None
        for v in range(g.n_vertices):
            if not alive[v] or genus[v] != 0:
                continue
            deg = len(adj[v])
            if weight[v] in (1, -1) and deg <= 2:
                move = ("blowdown", v)
                break
            if weight[v] == 0 and deg == 1:
                w = next(iter(adj[v]))
                if weight[w] == 0 and genus[w] == 0 and len(adj[w]) == 1:
                    move = ("zero-chain", v, w)
                    break
        if move is None:
            break
        count_before = sum(alive)
        if move[0] == "blowdown":
            v = move[1]
            eps = weight[v]
            nbrs = sorted(adj[v])
            for w in nbrs:
                weight[w] -= eps
                adj[w].discard(v)
            if len(nbrs) == 2:
                adj[nbrs[0]].add(nbrs[1])
                adj[nbrs[1]].add(nbrs[0])
            alive[v] = False
            adj[v] = set()
            if not nbrs:
                s3 += 1
                moves.append(f"delete isolated v{v} (e={eps}): S^3")
            else:
                moves.append(f"blow down v{v} (e={eps}) into {nbrs}")
        else:
            _, v, w = move
            alive[v] = alive[w] = False
            adj[v] = adj[w] = set()
            s3 += 1
            moves.append(f"remove (0,0)-chain v{v}-v{w}: S^3")
        assert sum(alive) < count_before
    keep = [i for i in range(g.n_vertices) if alive[i]]
    remap = {old: new for new, old in enumerate(keep)}
    reduced = PlumbingGraph(
        vertices=tuple((weight[i], genus[i]) for i in keep),
        edges=tuple(
            sorted((remap[a], remap[b]) for a in keep for b in adj[a] if a < b)
        ),
    )
    if __debug__:
        after = h1_presentation(reduced).group()
        assert before == after, f"reduction changed H1: {before} -> {after}"
    return ReductionResult(reduced, s3, tuple(moves))


def is_s3_certificate(g: PlumbingGraph) -> str:
    """"yes" when the move subset reduces `g` to a single recognized
    S^3; "no" when H1 obstructs; "undetermined" otherwise (the move
    subset is not a complete S^3 recognizer)."""
    if g.arrows:
        raise ValidationError("is_s3_certificate requires an arrow-free graph")
    r = reduce(g)
    if r.graph.is_empty and r.s3_count == 1:
        return "yes"
    if not h1_presentation(g).group().is_trivial:
        return "no"
    return "undetermined"
