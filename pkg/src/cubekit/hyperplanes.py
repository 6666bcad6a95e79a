"""Hyperplanes of a median graph via the square-opposition edge relation.

Two edges are parallel if they are opposite sides of some 4-cycle; the
transitive closure partitions edges into classes.  Each class is a
hyperplane: deleting its edges splits the graph into exactly two convex
sides (the halfspaces).  Every edge of a class is stored with a consistent
orientation, so "which side of hyperplane c does the head of this oriented
edge lie on" is an O(1) lookup.  Side vertex sets are computed lazily and
cached, which keeps large fixtures (e.g. big tree balls) cheap as long as
only a few hyperplanes are actually touched.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .median import MedianGraph, bfs_distances

_SIDE_CACHE_BUDGET = 4_000_000  # total vertices held across cached side sets


class HyperplaneError(Exception):
    pass


class Arrangement:
    """All hyperplane classes of one validated median graph.

    Attributes:
      edge_class: class id per edge index (ids numbered by least edge).
      orientation: per edge, the (tail, head) order consistent within its
        class; side 1 of a class is the side containing every head.
      class_edges: edge index lists per class.
      squares: list of (a, b, c, d) 4-cycles, a minimal, (a,b,c,d) cyclic.
      cross: per class, the set of classes it crosses.
    """

    def __init__(self, g: MedianGraph):
        g.require_validated()
        self.graph = g
        self.squares = _find_squares(g)
        self._build_classes()
        self._side_cache: dict[tuple[int, int], frozenset[int]] = {}
        self._side_cache_load = 0

    # -- construction -----------------------------------------------------

    def _build_classes(self):
        g = self.graph
        m = g.m
        parent = list(range(m))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        # Opposition links with endpoint correspondence for orientation.
        opp: list[list[tuple[int, int, int, int, int]]] = [[] for _ in range(m)]

        def link(p, q, r, s):
            # edge (p,q) opposite edge (r,s), correspondence p<->r, q<->s
            e1 = g.edge_index[(p, q) if p < q else (q, p)]
            e2 = g.edge_index[(r, s) if r < s else (s, r)]
            pa, pb = find(e1), find(e2)
            if pa != pb:
                parent[pa] = pb
            opp[e1].append((e2, p, q, r, s))
            opp[e2].append((e1, r, s, p, q))

        for a, b, c, d in self.squares:
            # cycle a-b-c-d: (a,b) opposite (d,c); (b,c) opposite (a,d)
            link(a, b, d, c)
            link(b, c, a, d)

        roots: dict[int, int] = {}
        self.edge_class = [0] * m
        class_edges: list[list[int]] = []
        for e in range(m):
            r = find(e)
            if r not in roots:
                roots[r] = len(class_edges)
                class_edges.append([])
            c = roots[r]
            self.edge_class[e] = c
            class_edges[c].append(e)
        self.class_edges = class_edges
        self.n_classes = len(class_edges)

        # Propagate a consistent orientation within each class from the
        # least edge, oriented low->high.
        self.orientation: list[Optional[tuple[int, int]]] = [None] * m
        for c, members in enumerate(class_edges):
            rep = members[0]
            self.orientation[rep] = g.edges[rep]
            q = deque([rep])
            while q:
                e = q.popleft()
                t, h = self.orientation[e]
                for (f, p, qq, r, s) in opp[e]:
                    want = (r, s) if (p, qq) == (t, h) else (s, r)
                    if self.orientation[f] is None:
                        self.orientation[f] = want
                        q.append(f)
                    elif self.orientation[f] != want:
                        raise HyperplaneError(
                            "inconsistent edge orientations; graph is not median")

        self.cross: list[set[int]] = [set() for _ in range(self.n_classes)]
        for a, b, c, d in self.squares:
            c1 = self.class_of_edge(a, b)
            c2 = self.class_of_edge(b, c)
            if c1 == c2:
                raise HyperplaneError("square with both edge pairs parallel")
            self.cross[c1].add(c2)
            self.cross[c2].add(c1)

    # -- lookups ----------------------------------------------------------

    def class_of_edge(self, u: int, v: int) -> int:
        return self.edge_class[self.graph.edge_index[(u, v) if u < v else (v, u)]]

    def rep_oriented(self, c: int) -> tuple[int, int]:
        """Canonical (tail, head) of the least edge of class c."""
        return self.orientation[self.class_edges[c][0]]

    def halfspace_of_oriented_edge(self, tail: int, head: int) -> "Halfspace":
        e = self.graph.edge_index[(tail, head) if tail < head else (head, tail)]
        t, h = self.orientation[e]
        side = 1 if head == h else 0
        return Halfspace(self, self.edge_class[e], side)

    def carrier_vertices(self, c: int) -> frozenset[int]:
        out = set()
        for e in self.class_edges[c]:
            u, v = self.graph.edges[e]
            out.add(u)
            out.add(v)
        return frozenset(out)

    def side_vertices(self, c: int, side: int) -> frozenset[int]:
        """Vertex set of one side of class c (lazy, cached)."""
        key = (c, side)
        cached = self._side_cache.get(key)
        if cached is not None:
            return cached
        g = self.graph
        cut = set(self.class_edges[c])
        t, h = self.rep_oriented(c)
        start = h if side == 1 else t
        seen = bytearray(g.n)
        seen[start] = 1
        q = deque([start])
        comp = [start]
        eidx = g.edge_index
        while q:
            u = q.popleft()
            for v in g.adj[u]:
                if not seen[v]:
                    e = eidx[(u, v) if u < v else (v, u)]
                    if e in cut:
                        continue
                    seen[v] = 1
                    comp.append(v)
                    q.append(v)
        out = frozenset(comp)
        # budgeted eviction: bound total cached vertices, not entry count
        while self._side_cache and \
                self._side_cache_load + len(out) > _SIDE_CACHE_BUDGET:
            _, old = self._side_cache.popitem()
            self._side_cache_load -= len(old)
        self._side_cache[key] = out
        self._side_cache_load += len(out)
        return out

    def halfspace(self, c: int, side: int) -> "Halfspace":
        if not (0 <= c < self.n_classes and side in (0, 1)):
            raise ValueError("bad halfspace id")
        return Halfspace(self, c, side)

    def hyperplanes(self) -> list["Hyperplane"]:
        return [Hyperplane(self, c) for c in range(self.n_classes)]


def arrangement(g: MedianGraph) -> Arrangement:
    """The (cached) hyperplane arrangement of a validated graph."""
    if g._arrangement is None:
        g._arrangement = Arrangement(g)
    return g._arrangement


def _find_squares(g: MedianGraph) -> list[tuple[int, int, int, int]]:
    """All 4-cycles (a, b, c, d), a the least corner, b < d."""
    out = []
    for a in range(g.n):
        nbrs = [x for x in g.adj[a] if x > a]
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                b, d = nbrs[i], nbrs[j]
                common = set(g.adj[b]) & set(g.adj[d])
                for c in sorted(common):
                    if c != a and c > a:
                        out.append((a, b, c, d))
    return out


# -- hyperplane / halfspace views ----------------------------------------

@dataclass(frozen=True)
class Hyperplane:
    arr: Arrangement
    cls: int

    @property
    def id(self) -> int:
        return self.cls

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [self.arr.graph.edges[e] for e in self.arr.class_edges[self.cls]]

    @property
    def carrier(self) -> frozenset[int]:
        return self.arr.carrier_vertices(self.cls)

    def side(self, s: int) -> "Halfspace":
        return Halfspace(self.arr, self.cls, s)

    @property
    def sides(self) -> tuple["Halfspace", "Halfspace"]:
        return (self.side(0), self.side(1))

    def __eq__(self, other):
        return isinstance(other, Hyperplane) and \
            self.arr is other.arr and self.cls == other.cls

    def __hash__(self):
        return hash((id(self.arr), self.cls))

    def __repr__(self):
        return f"H{self.cls}"


@dataclass(frozen=True)
class Halfspace:
    arr: Arrangement
    cls: int
    side_id: int

    @property
    def key(self) -> tuple[int, int]:
        return (self.cls, self.side_id)

    @property
    def hyperplane(self) -> Hyperplane:
        return Hyperplane(self.arr, self.cls)

    @property
    def vertices(self) -> frozenset[int]:
        return self.arr.side_vertices(self.cls, self.side_id)

    @property
    def complement(self) -> "Halfspace":
        return Halfspace(self.arr, self.cls, 1 - self.side_id)

    def oriented_rep(self) -> tuple[int, int]:
        """(tail, head) of the rep edge with head inside this halfspace."""
        t, h = self.arr.rep_oriented(self.cls)
        return (t, h) if self.side_id == 1 else (h, t)

    def contains(self, v: int) -> bool:
        return v in self.vertices

    def __eq__(self, other):
        return isinstance(other, Halfspace) and self.arr is other.arr \
            and self.cls == other.cls and self.side_id == other.side_id

    def __hash__(self):
        return hash((id(self.arr), self.cls, self.side_id))

    def __repr__(self):
        return f"H{self.cls}{'+' if self.side_id else '-'}"


def parse_halfspace(arr: Arrangement, token: str) -> Halfspace:
    """'H3+' / 'H3-' notation used by the CLI and certificates."""
    tok = token.strip()
    if not tok.startswith("H") or tok[-1] not in "+-":
        raise ValueError(f"bad halfspace token '{token}'")
    return arr.halfspace(int(tok[1:-1]), 1 if tok[-1] == "+" else 0)


def compute_hyperplanes(g: MedianGraph) -> list[Hyperplane]:
    """Every hyperplane of a validated graph, ordered by class id."""
    return arrangement(g).hyperplanes()


# -- relations ------------------------------------------------------------

def crosses(h1: Hyperplane, h2: Hyperplane) -> bool:
    _same_arr(h1, h2)
    return h2.cls in h1.arr.cross[h1.cls]


def strongly_separated(h1: Hyperplane, h2: Hyperplane) -> bool:
    """Distinct, non-crossing, and no third hyperplane crossing both.

    Hyperplane disjointness here is non-crossing of edge classes; this is
    the notion under which all pairs in a tree are strongly separated.
    """
    _same_arr(h1, h2)
    if h1.cls == h2.cls:
        return False
    arr = h1.arr
    if h2.cls in arr.cross[h1.cls]:
        return False
    return not (arr.cross[h1.cls] & arr.cross[h2.cls])


def halfspaces_disjoint(a: Halfspace, b: Halfspace) -> bool:
    """Vertex-set disjointness, decided from O(1) membership probes."""
    _same_arr(a, b)
    arr = a.arr
    if a.cls == b.cls:
        return a.side_id != b.side_id
    if b.cls in arr.cross[a.cls]:
        return False
    bt, bh = b.oriented_rep()
    av = a.vertices
    if bt in av or bh in av:
        return False
    at, ah = a.oriented_rep()
    bv = b.vertices
    return at not in bv and ah not in bv


def halfspace_leq(a: Halfspace, b: Halfspace) -> bool:
    """a ⊆ b."""
    _same_arr(a, b)
    arr = a.arr
    if a.cls == b.cls:
        return a.side_id == b.side_id
    if b.cls in arr.cross[a.cls]:
        return False
    at, ah = a.oriented_rep()
    bv = b.vertices
    if at not in bv or ah not in bv:
        return False
    bt, bh = b.oriented_rep()
    av = a.vertices
    return bt not in av and bh not in av


def _same_arr(x, y):
    if x.arr is not y.arr:
        raise ValueError("objects belong to different graphs")


# -- facing tuples --------------------------------------------------------

def facing_tuples(g: MedianGraph, k: int,
                  classes: Optional[Iterable[int]] = None,
                  limit: Optional[int] = None) -> list[tuple[Halfspace, ...]]:
    """All k-tuples of pairwise vertex-disjoint halfspaces of pairwise
    distinct hyperplanes, in canonical (class id, side) order.  The two
    sides of a single hyperplane are vertex-disjoint but do not face each
    other (so Q3, where all hyperplanes cross, has no facing pairs).
    ``classes`` restricts the hyperplanes searched (used on large
    fixtures); ``limit`` stops after that many tuples."""
    if k < 2:
        raise ValueError("k must be >= 2")
    arr = arrangement(g)
    cand_classes = sorted(classes) if classes is not None \
        else list(range(arr.n_classes))
    halves = [arr.halfspace(c, s) for c in cand_classes for s in (0, 1)]
    out: list[tuple[Halfspace, ...]] = []

    def extend(start: int, chosen: list[Halfspace]):
        if limit is not None and len(out) >= limit:
            return
        if len(chosen) == k:
            out.append(tuple(chosen))
            return
        for i in range(start, len(halves)):
            h = halves[i]
            if all(h.cls != c.cls and halfspaces_disjoint(h, c)
                   for c in chosen):
                chosen.append(h)
                extend(i + 1, chosen)
                chosen.pop()
                if limit is not None and len(out) >= limit:
                    return

    extend(0, [])
    return out


# -- projection between strongly separated hyperplanes --------------------

def projection_pair(h1: Hyperplane, h2: Hyperplane
                    ) -> tuple[tuple[int, int], tuple[int, int]]:
    """The unique pair of dual edges realizing the mutual projection of two
    strongly separated hyperplanes.

    The gates of carrier(h2) into carrier(h1) all land inside a single dual
    edge of h1 (and symmetrically); that dual edge is returned for each.
    """
    if not strongly_separated(h1, h2):
        raise ValueError("hyperplanes are not strongly separated")
    e1 = _projection_edge(h1, h2)
    e2 = _projection_edge(h2, h1)
    return e1, e2


def _projection_edge(target: Hyperplane, source: Hyperplane) -> tuple[int, int]:
    g = target.arr.graph
    tset = target.carrier
    gates = set()
    for v in source.carrier:
        dv = g.dist_from(v)
        best = min(tset, key=lambda x: (dv[x], x))
        ties = [x for x in tset if dv[x] == dv[best]]
        if len(ties) != 1:
            raise HyperplaneError("carrier gate is not unique")
        gates.add(best)
    # gates must lie within one dual edge of the target class
    for e in target.arr.class_edges[target.cls]:
        u, v = g.edges[e]
        if gates <= {u, v}:
            return (u, v)
    raise HyperplaneError("projection image spans more than one dual edge")


def separating_classes(g: MedianGraph, u: int, v: int) -> set[int]:
    """Classes whose two sides separate u from v."""
    arr = arrangement(g)
    out = set()
    for c in range(arr.n_classes):
        sv = arr.side_vertices(c, 1)
        if (u in sv) != (v in sv):
            out.add(c)
    return out


# -- irreducible product decomposition ------------------------------------

@dataclass
class Decomposition:
    partition: list[list[int]]            # class ids per factor
    factors: list[MedianGraph]
    coordinates: list[tuple[int, ...]]    # vertex -> tuple of factor vertices

    @property
    def r(self) -> int:
        return len(self.factors)


def irreducible_decomposition(g: MedianGraph) -> Decomposition:
    """Partition hyperplanes into the components of the complement of the
    crossing graph; rebuild each factor and the product isomorphism."""
    arr = arrangement(g)
    k = arr.n_classes
    comp = _complement_components(arr.cross, k)
    partition = [sorted(c) for c in comp]
    partition.sort(key=lambda c: c[0])

    factors = []
    coords = [[0] * len(partition) for _ in range(g.n)]
    for fi, cls_ids in enumerate(partition):
        keep = set()
        for c in cls_ids:
            keep.update(arr.class_edges[c])
        # contract all edges outside this factor's classes
        label = [-1] * g.n
        nf = 0
        for s in range(g.n):
            if label[s] >= 0:
                continue
            label[s] = nf
            q = deque([s])
            while q:
                u = q.popleft()
                for v in g.adj[u]:
                    e = g.edge_index[(u, v) if u < v else (v, u)]
                    if e in keep or label[v] >= 0:
                        continue
                    label[v] = nf
                    q.append(v)
            nf += 1
        fedges = set()
        for e in keep:
            u, v = g.edges[e]
            a, b = label[u], label[v]
            if a == b:
                raise HyperplaneError("factor edge collapsed; decomposition bug")
            fedges.add((a, b) if a < b else (b, a))
        factor = MedianGraph(nf, sorted(fedges),
                             labels=[f"f{fi}.{i}" for i in range(nf)])
        factor._mark_validated(f"factor of {g!r}")
        factors.append(factor)
        for v in range(g.n):
            coords[v][fi] = label[v]

    dec = Decomposition(partition, factors, [tuple(c) for c in coords])
    _verify_product_isomorphism(g, dec)
    return dec


def _complement_components(cross: list[set[int]], k: int) -> list[list[int]]:
    """Connected components of the complement graph in O(k + edges)."""
    remaining = set(range(k))
    comps = []
    while remaining:
        s = min(remaining)
        remaining.discard(s)
        comp = [s]
        q = deque([s])
        while q:
            u = q.popleft()
            reach = remaining - cross[u]
            remaining -= reach
            for v in reach:
                comp.append(v)
                q.append(v)
        comps.append(sorted(comp))
    return comps


def _verify_product_isomorphism(g: MedianGraph, dec: Decomposition):
    n_prod = 1
    for f in dec.factors:
        n_prod *= f.n
    if n_prod != g.n or len(set(dec.coordinates)) != g.n:
        raise HyperplaneError("coordinate map is not a bijection onto the product")
    for u, v in g.edges:
        diffs = [i for i in range(dec.r)
                 if dec.coordinates[u][i] != dec.coordinates[v][i]]
        if len(diffs) != 1:
            raise HyperplaneError("edge does not move exactly one coordinate")
        i = diffs[0]
        if not dec.factors[i].has_edge(dec.coordinates[u][i], dec.coordinates[v][i]):
            raise HyperplaneError("edge image missing in factor")
    m_prod = 0
    for i, f in enumerate(dec.factors):
        other = 1
        for j, f2 in enumerate(dec.factors):
            if j != i:
                other *= f2.n
        m_prod += f.m * other
    if m_prod != g.m:
        raise HyperplaneError("edge count differs from product of factors")


def product_graph(a: MedianGraph, b: MedianGraph) -> MedianGraph:
    """Cartesian product; median whenever both inputs are."""
    n = a.n * b.n

    def vid(x, y):
        return x * b.n + y

    edges = []
    for x in range(a.n):
        for (u, v) in b.edges:
            edges.append((vid(x, u), vid(x, v)))
    for y in range(b.n):
        for (u, v) in a.edges:
            edges.append((vid(u, y), vid(v, y)))
    labels = [f"{a.labels[x]},{b.labels[y]}"
              for x in range(a.n) for y in range(b.n)]
    frontier = [vid(x, y) for x in range(a.n) for y in range(b.n)
                if x in a.frontier or y in b.frontier]
    g = MedianGraph(n, edges, labels, frontier)
    if a.validated and b.validated:
        g._mark_validated("product of validated graphs")
    return g


def hyperplane_report(g: MedianGraph) -> str:
    """One line per hyperplane: id, dual edges, side sizes."""
    arr = arrangement(g)
    lines = []
    for c in range(arr.n_classes):
        es = ",".join(f"{g.labels[u]}-{g.labels[v]}"
                      for u, v in (g.edges[e] for e in arr.class_edges[c]))
        a = len(arr.side_vertices(c, 0))
        b = len(arr.side_vertices(c, 1))
        lines.append(f"H{c}: edges={es} sideA={a} sideB={b}")
    return "\n".join(lines)
