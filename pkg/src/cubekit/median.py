"""Median graphs: the 1-skeleta we compute with.

A median graph is a connected graph in which every vertex triple (u, v, w)
has a unique vertex lying simultaneously on shortest paths between each
pair.  All geometric structure used elsewhere in the package (hyperplanes,
halfspaces, gates, dual complexes) is derived from this combinatorial
property, with the graph metric playing the role of the ambient distance.

Vertices are dense integer ids.  Original labels from input files are kept
in a side table for reporting.  Graphs are immutable once built; every
query here is a pure function of the graph.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class GraphError(Exception):
    """Raised for malformed graph input (parse errors, loops, duplicates)."""


class NotValidatedError(Exception):
    """Raised when an operation requires a validated median graph."""


_DIST_CACHE_CAP = 256


class MedianGraph:
    """Immutable simple connected graph with optional median validation.

    ``validated`` is only set by :func:`check_median` or by builders that
    construct graphs median-by-construction (trees, hypercubes, products);
    ``validated_reason`` records which.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]],
                 labels: Optional[Sequence[str]] = None,
                 frontier: Iterable[int] = ()):
        self.n = n
        canon = []
        seen = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop edge at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            canon.append(e)
        canon.sort()
        self.edges: tuple[tuple[int, int], ...] = tuple(canon)
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = [sorted(a) for a in adj]
        self.labels: tuple[str, ...] = tuple(labels) if labels is not None \
            else tuple(str(i) for i in range(n))
        if len(self.labels) != n:
            raise GraphError("label table length mismatch")
        self.label_index = {lab: i for i, lab in enumerate(self.labels)}
        self.frontier = frozenset(frontier)
        self.validated = False
        self.validated_reason: Optional[str] = None
        self._dist_cache: dict[int, list[int]] = {}
        self._arrangement = None  # set lazily by hyperplanes.arrangement()
        if n > 0 and not self.is_connected():
            raise GraphError("graph is disconnected")

    # -- basic queries ----------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = bytearray(self.n)
        seen[0] = 1
        q = deque([0])
        count = 1
        while q:
            u = q.popleft()
            for v in self.adj[u]:
                if not seen[v]:
                    seen[v] = 1
                    count += 1
                    q.append(v)
        return count == self.n

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edge_index

    def dist_from(self, src: int) -> list[int]:
        """BFS distance array from ``src`` (cached, bounded cache)."""
        d = self._dist_cache.get(src)
        if d is not None:
            return d
        d = bfs_distances(self.adj, [src])
        if len(self._dist_cache) >= _DIST_CACHE_CAP:
            self._dist_cache.pop(next(iter(self._dist_cache)))
        self._dist_cache[src] = d
        return d

    def dist(self, u: int, v: int) -> int:
        return self.dist_from(u)[v]

    def interval(self, u: int, v: int) -> frozenset[int]:
        """I(u, v): vertices on shortest u-v paths."""
        du = self.dist_from(u)
        dv = self.dist_from(v)
        duv = du[v]
        return frozenset(x for x in range(self.n) if du[x] + dv[x] == duv)

    def is_bipartite(self) -> bool:
        color = [-1] * self.n
        for s in range(self.n):
            if color[s] >= 0:
                continue
            color[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for v in self.adj[u]:
                    if color[v] < 0:
                        color[v] = color[u] ^ 1
                        q.append(v)
                    elif color[v] == color[u]:
                        return False
        return True

    def frontier_distances(self) -> list[int]:
        """Distance of each vertex to the truncation frontier (inf if none)."""
        if not self.frontier:
            return [self.n + 1] * self.n
        return bfs_distances(self.adj, sorted(self.frontier))

    def digest(self) -> str:
        h = hashlib.sha256()
        for lab in self.labels:
            h.update(b"v:" + lab.encode() + b"\n")
        for u, v in self.edges:
            h.update(f"e:{self.labels[u]}|{self.labels[v]}\n".encode())
        return h.hexdigest()

    def require_validated(self):
        if not self.validated:
            raise NotValidatedError("graph has not passed median validation")

    def _mark_validated(self, reason: str):
        self.validated = True
        self.validated_reason = reason

    def __repr__(self):
        tag = "median" if self.validated else "unvalidated"
        return f"MedianGraph(n={self.n}, m={self.m}, {tag})"


def bfs_distances(adj: Sequence[Sequence[int]], sources: Iterable[int]) -> list[int]:
    n = len(adj)
    d = [-1] * n
    q = deque()
    for s in sources:
        if d[s] < 0:
            d[s] = 0
            q.append(s)
    while q:
        u = q.popleft()
        du1 = d[u] + 1
        for v in adj[u]:
            if d[v] < 0:
                d[v] = du1
                q.append(v)
    return d


# -- file format ----------------------------------------------------------

def load_graph(text: str) -> MedianGraph:
    """Parse the line-oriented graph format.

    ``# ...`` comment, ``v <label>`` optional declaration, ``e <a> <b>``
    edge.  A comment of the form ``# frontier: <labels...>`` marks
    truncation-frontier vertices.  Dense ids are assigned in order of first
    appearance.  The returned graph is unvalidated.
    """
    labels: list[str] = []
    index: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    frontier_labels: list[str] = []

    def vid(lab: str) -> int:
        i = index.get(lab)
        if i is None:
            i = len(labels)
            index[lab] = i
            labels.append(lab)
        return i

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("frontier:"):
                frontier_labels.extend(body[len("frontier:"):].split())
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 2:
            vid(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            a, b = vid(parts[1]), vid(parts[2])
            if a == b:
                raise GraphError(f"line {lineno}: loop edge '{line}'")
            e = (a, b) if a < b else (b, a)
            if e in set((min(x, y), max(x, y)) for x, y in edges):
                raise GraphError(f"line {lineno}: duplicate edge '{line}'")
            edges.append(e)
        else:
            raise GraphError(f"line {lineno}: cannot parse '{line}'")
    frontier = []
    for lab in frontier_labels:
        if lab not in index:
            raise GraphError(f"frontier label '{lab}' is not a vertex")
        frontier.append(index[lab])
    return MedianGraph(len(labels), edges, labels, frontier)


def graph_to_text(g: MedianGraph) -> str:
    lines = [f"v {lab}" for lab in g.labels]
    lines += [f"e {g.labels[u]} {g.labels[v]}" for u, v in g.edges]
    if g.frontier:
        labs = " ".join(g.labels[v] for v in sorted(g.frontier))
        lines.append(f"# frontier: {labs}")
    return "\n".join(lines) + "\n"


# -- median validation ----------------------------------------------------

@dataclass
class MedianCheckResult:
    ok: bool
    counterexample: Optional[tuple[int, int, int]] = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_median(g: MedianGraph) -> MedianCheckResult:
    """Validate the median property, or return the first bad triple.

    Bipartiteness is checked first as a cheap rejection.  The main scan
    walks triples in lexicographic order so the reported counterexample is
    schedule-independent.  On success the graph is marked validated.
    """
    if g.n == 0:
        raise GraphError("empty graph")
    if not g.is_bipartite():
        # An odd cycle gives a medianless triple; find one lexicographically.
        res = _scan_triples(g)
        assert res is not None
        return MedianCheckResult(False, res, "graph is not bipartite")
    res = _scan_triples(g)
    if res is not None:
        return MedianCheckResult(False, res, "triple without unique median")
    g._mark_validated("all-triples scan")
    return MedianCheckResult(True)


def _scan_triples(g: MedianGraph) -> Optional[tuple[int, int, int]]:
    n = g.n
    dist = [g.dist_from(v) for v in range(n)]
    # Precompute intervals for pairs u < v as sets.
    intervals: dict[tuple[int, int], frozenset[int]] = {}

    def ival(a, b):
        key = (a, b) if a < b else (b, a)
        s = intervals.get(key)
        if s is None:
            da, db = dist[key[0]], dist[key[1]]
            dab = da[key[1]]
            s = frozenset(x for x in range(n) if da[x] + db[x] == dab)
            intervals[key] = s
        return s

    for u in range(n):
        for v in range(u, n):
            iuv = ival(u, v)
            for w in range(v, n):
                med = iuv & ival(v, w) & ival(u, w)
                if len(med) != 1:
                    return (u, v, w)
    return None


def brute_force_median_oracle(g: MedianGraph) -> Optional[tuple[int, int, int]]:
    """Independent oracle: tensor count of medians per triple via numpy.

    Returns the lexicographically first triple whose median count is not 1,
    or None.  Kept structurally separate from :func:`check_median` so the
    two can cross-check each other.
    """
    import numpy as np
    n = g.n
    D = np.array([g.dist_from(v) for v in range(n)], dtype=np.int64)
    # B[a, b, x] == 1 iff x lies on a geodesic from a to b.
    B = (D[:, None, :] + D[None, :, :] == D[:, :, None]).astype(np.uint8)
    counts = np.einsum("uvx,vwx,uwx->uvw", B, B, B)
    bad = np.argwhere(counts != 1)
    best = None
    for u, v, w in bad:
        if u <= v <= w:
            t = (int(u), int(v), int(w))
            if best is None or t < best:
                best = t
    return best


def median(g: MedianGraph, u: int, v: int, w: int) -> int:
    """The unique vertex in I(u,v) ∩ I(v,w) ∩ I(u,w)."""
    g.require_validated()
    du, dv, dw = g.dist_from(u), g.dist_from(v), g.dist_from(w)
    duv, dvw, duw = du[v], dv[w], du[w]
    for x in range(g.n):
        if du[x] + dv[x] == duv and dv[x] + dw[x] == dvw and du[x] + dw[x] == duw:
            return x
    raise AssertionError("validated graph has a medianless triple")


# -- convexity and gates --------------------------------------------------

def is_convex(g: MedianGraph, s: Iterable[int]) -> bool:
    """True iff every interval between members of ``s`` stays in ``s``."""
    g.require_validated()
    members = sorted(set(s))
    if not members:
        raise ValueError("empty vertex set")
    mset = set(members)
    for i, u in enumerate(members):
        du = g.dist_from(u)
        for v in members[i + 1:]:
            dv = g.dist_from(v)
            duv = du[v]
            for x in range(g.n):
                if x not in mset and du[x] + dv[x] == duv:
                    return False
    return True


def gate(g: MedianGraph, s: Iterable[int], v: int, *,
         assume_convex: bool = False) -> int:
    """Nearest-point projection of ``v`` onto the convex set ``s``.

    The gate is the unique nearest member and lies on every shortest path
    from ``v`` into ``s``.  Raises ``ValueError`` for non-convex input
    (skipped when ``assume_convex`` is set by callers that already know).
    """
    g.require_validated()
    members = set(s)
    if not members:
        raise ValueError("empty vertex set")
    if not assume_convex and not is_convex(g, members):
        raise ValueError("gate requires a convex vertex set")
    dv = g.dist_from(v)
    best = min(members, key=lambda x: (dv[x], x))
    ties = [x for x in members if dv[x] == dv[best]]
    if len(ties) != 1:
        raise ValueError("no unique nearest point; set is not gated")
    return best


def gate_table(g: MedianGraph, s: Iterable[int]) -> dict[int, int]:
    members = set(s)
    return {v: gate(g, members, v, assume_convex=True) for v in range(g.n)}


@dataclass
class ConvexSubset:
    """A convex vertex set with an optional precomputed gate table."""
    members: frozenset[int]
    gates: dict[int, int] = field(default_factory=dict)

    @classmethod
    def of(cls, g: MedianGraph, s: Iterable[int]) -> "ConvexSubset":
        members = frozenset(s)
        if not is_convex(g, members):
            raise ValueError("vertex set is not convex")
        return cls(members, gate_table(g, members))


# -- cube enumeration -----------------------------------------------------

def enumerate_cubes(g: MedianGraph, dim: int) -> list[tuple[int, ...]]:
    """All induced subgraphs isomorphic to the ``dim``-cube, as sorted
    vertex tuples in lexicographic order, each reported once."""
    g.require_validated()
    if dim < 1:
        raise ValueError("dim must be >= 1")
    # dimension 1: the edges themselves.
    cubes = {frozenset(e) for e in g.edges}
    for _ in range(dim - 1):
        cubes = _extend_cubes(g, cubes)
        if not cubes:
            break
    out = sorted(tuple(sorted(c)) for c in cubes)
    return out


def _extend_cubes(g: MedianGraph, cubes: set[frozenset[int]]) -> set[frozenset[int]]:
    """(k+1)-cubes as matched parallel pairs of k-cubes."""
    bigger: set[frozenset[int]] = set()
    for cube in cubes:
        verts = sorted(cube)
        root = verts[0]
        droot = g.dist_from(root)
        order = sorted(verts, key=lambda x: (droot[x], x))
        for w0 in g.adj[root]:
            if w0 in cube:
                continue
            t = {root: w0}
            ok = True
            for x in order[1:]:
                # image of x: a neighbor of x adjacent to images of all
                # already-mapped cube-neighbors of x
                req = [t[y] for y in g.adj[x] if y in t and y in cube]
                cands = [z for z in g.adj[x]
                         if z not in cube and z != x
                         and all(g.has_edge(z, r) for r in req)]
                cands = [z for z in cands if z not in t.values()]
                if len(req) == 0 or len(cands) != 1:
                    ok = False
                    break
                t[x] = cands[0]
            if not ok:
                continue
            new = cube | set(t.values())
            if len(new) != 2 * len(cube):
                continue
            if _is_induced_cube(g, new):
                bigger.add(frozenset(new))
    return bigger


def _is_induced_cube(g: MedianGraph, verts: set[int]) -> bool:
    k = (len(verts)).bit_length() - 1
    if len(verts) != 1 << k:
        return False
    inner = 0
    for u in verts:
        deg = sum(1 for v in g.adj[u] if v in verts)
        if deg != k:
            return False
        inner += deg
    return inner == k * (1 << k)
