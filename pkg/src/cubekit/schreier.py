"""Schreier graphs of hyperplane stabilizers, with spectral estimates.

The coset graph of the side-preserving stabilizer is realized as the orbit
graph of an oriented hyperplane: words with the same oriented image give
the same coset, so nodes are distinct oriented halfspaces and generator
edges follow the action.  Nonamenability cannot be decided from a finite
ball, so the module reports two separate channels of evidence — rigorous
finite-range free-action certificates and Dirichlet spectral estimates
with their radius series — and never a verdict.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .hyperplanes import Halfspace, arrangement
from .action import (PartialAction, Word, invert_word, reduce_word,
                     reduced_words, word_str)


class SchreierError(Exception):
    pass


@dataclass
class SchreierGraph:
    action: PartialAction
    base_key: tuple[int, int]
    radius: int
    keys: list[tuple[int, int]]            # node id -> (class, side)
    witness: list[Word]                    # shortest witness word per node
    depth: list[int]
    edges: dict[str, list[int]]            # generator -> image node (or -1)
    frontier: set[int]

    @property
    def n(self) -> int:
        return len(self.keys)

    def interior(self) -> list[int]:
        return [v for v in range(self.n) if v not in self.frontier]

    def degree_names(self) -> tuple[str, ...]:
        return self.action.gens.names


def build_schreier(a: PartialAction, hs: Halfspace,
                   radius: int) -> SchreierGraph:
    """BFS over cosets of the side-preserving stabilizer.

    The coset of w corresponds to the oriented halfspace w^-1(hs), so the
    edge labelled s at node x leads to s^-1(x).  Nodes whose expansion was
    stopped (by the radius or by the domain boundary) are frontier."""
    arr = hs.arr
    g = arr.graph
    eidx = g.edge_index
    ecls = arr.edge_class
    orient = arr.orientation
    cedges = arr.class_edges

    def step(cls: int, side: int, mp) -> Optional[tuple[int, int]]:
        # image oriented halfspace via any in-domain dual edge of the class
        for e in cedges[cls]:
            t, h = orient[e]
            if side == 0:
                t, h = h, t
            it, ih = mp[t], mp[h]
            if it >= 0 and ih >= 0:
                f = eidx[(it, ih) if it < ih else (ih, it)]
                return (ecls[f], 1 if ih == orient[f][1] else 0)
        return None

    keys = [hs.key]
    witness: list[Word] = [()]
    depth = [0]
    index = {hs.key: 0}
    gens = a.gens
    edges: dict[str, list[int]] = {nm: [] for nm in gens.names}
    frontier: set[int] = set()
    q = deque([0])
    while q:
        node = q.popleft()
        d = depth[node]
        for nm in gens.names:
            _pad(edges[nm], node)
        if d >= radius:
            frontier.add(node)
            continue
        cls, side = keys[node]
        for nm in gens.names:
            key = step(cls, side, a.maps[gens.inv[nm]])
            if key is None:
                frontier.add(node)
                continue
            j = index.get(key)
            if j is None:
                j = len(keys)
                index[key] = j
                keys.append(key)
                witness.append(witness[node] + (nm,))
                depth.append(d + 1)
                q.append(j)
            edges[nm][node] = j
    for nm in gens.names:
        _pad(edges[nm], len(keys) - 1)
    return SchreierGraph(a, hs.key, radius, keys, witness, depth, edges,
                         frontier)


def _pad(lst: list[int], node: int):
    while len(lst) <= node:
        lst.append(-1)


def schreier_to_text(sg: SchreierGraph) -> str:
    """Export in the graph file format; node labels are the shortest
    witness words, with `# frontier:` marking truncation."""
    labels = [word_str(w) for w in sg.witness]
    lines = [f"v {lab}" for lab in labels]
    seen = set()
    for nm in sg.action.gens.names:
        col = sg.edges[nm]
        for u in range(sg.n):
            v = col[u]
            if v < 0 or v == u:
                continue
            e = (u, v) if u < v else (v, u)
            if e not in seen:
                seen.add(e)
                lines.append(f"e {labels[e[0]]} {labels[e[1]]}")
    if sg.frontier:
        lines.append("# frontier: " +
                     " ".join(labels[v] for v in sorted(sg.frontier)))
    return "\n".join(lines) + "\n"


# -- spectral estimates ---------------------------------------------------

@dataclass
class SpectralEstimate:
    radius: int
    estimate: float
    iterations: int
    residual: float
    interior_nodes: int

    def csv_line(self) -> str:
        return f"{self.radius},{self.estimate:.6f},{self.residual:.2e}"


def spectral_estimate(sg: SchreierGraph, tol: float = 1e-8,
                      max_iter: int = 100000) -> SpectralEstimate:
    """Dirichlet spectral radius of the simple random walk killed outside
    the interior nodes, by shifted power iteration.

    The walk takes each generator edge (loops included) with equal weight,
    so the operator restricted to the interior is symmetric and its top
    eigenvalue is a lower bound for the walk-operator norm of the full
    (infinite) Schreier graph."""
    interior = sg.interior()
    if not interior:
        raise SchreierError("no interior nodes at this radius")
    k = len(interior)
    pos = {v: i for i, v in enumerate(interior)}
    rows, cols = [], []
    for nm in sg.degree_names():
        col = sg.edges[nm]
        for u in interior:
            v = col[u]
            if v >= 0 and v in pos:
                rows.append(pos[u])
                cols.append(pos[v])
    deg = len(sg.degree_names())
    from scipy.sparse import coo_matrix
    P = coo_matrix((np.full(len(rows), 1.0 / deg),
                    (np.array(rows), np.array(cols))),
                   shape=(k, k)).tocsr()
    x = np.full(k, 1.0 / np.sqrt(k))
    lam = 0.0
    res = np.inf
    it = 0
    while it < max_iter:
        it += 1
        # shift by I to kill the bipartite sign flip
        y = P @ x + x
        ny = np.linalg.norm(y)
        if ny == 0:
            break
        x = y / ny
        px = P @ x
        lam = float(x @ px)
        res = float(np.linalg.norm(px - lam * x))
        if res < tol:
            break
    return SpectralEstimate(sg.radius, lam, it, res, k)


def spectral_series(a: PartialAction, hs: Halfspace, radii: Sequence[int],
                    tol: float = 1e-8) -> list[SpectralEstimate]:
    """Estimates at increasing radii (the series should be monotone
    nondecreasing — domain monotonicity of the Dirichlet problem)."""
    out = []
    for r in sorted(radii):
        sg = build_schreier(a, hs, r)
        out.append(spectral_estimate(sg, tol))
    return out


# -- free-action certificates ---------------------------------------------

@dataclass
class FreeActionCertificate:
    ok: bool
    L: int
    words_checked: int
    fixed: list[tuple[Word, int]]          # (word, fixed interior node)
    unverifiable: list[Word]               # truncation losses
    min_displaced_fraction: float

    def render(self) -> str:
        lines = [f"free action on cosets: "
                 f"{'certified' if self.ok else 'REFUTED'} up to length "
                 f"{self.L} ({self.words_checked} words)"]
        for w, node in self.fixed:
            lines.append(f"fixed: {word_str(w)} fixes node {node}")
        for w in self.unverifiable:
            lines.append(f"unverifiable (truncation): {word_str(w)}")
        lines.append(f"min displaced fraction: "
                     f"{self.min_displaced_fraction:.3f}")
        return "\n".join(lines)


def free_action_cert(sg: SchreierGraph, f_words: tuple[Word, Word],
                     L: int) -> FreeActionCertificate:
    """No nontrivial word in the free pair of length <= L may fix an
    interior node.  Node maps are composed as numpy arrays; nodes whose
    trajectory leaves the ball are excluded and reported."""
    g_w, h_w = f_words
    gens = sg.action.gens
    letters = {"g": g_w, "G": invert_word(g_w, gens),
               "h": h_w, "H": invert_word(h_w, gens)}
    # node-level map of one action-generator letter: follow the edge arrays
    base_maps = {}
    for nm in gens.names:
        base_maps[nm] = np.array(sg.edges[nm], dtype=np.int64)
    n = sg.n

    def word_map(w: Word) -> np.ndarray:
        out = np.arange(n, dtype=np.int64)
        for tok in w:
            mp = base_maps[tok]
            valid = out >= 0
            out = np.where(valid, mp[np.maximum(out, 0)], -1)
        return out

    interior = np.zeros(n, dtype=bool)
    interior[sg.interior()] = True
    from .action import Generators
    f_gens = Generators([("g", "G"), ("h", "H")])
    fixed = []
    unverifiable = []
    checked = 0
    min_frac = 1.0
    for fw in reduced_words(f_gens, L, min_len=1):
        expanded = reduce_word(
            sum((letters[t] for t in fw), ()), gens)
        checked += 1
        if not expanded:
            fixed.append((fw, 0))
            continue
        m = word_map(expanded)
        idx = np.arange(n)
        defined = m >= 0
        fix_mask = interior & defined & (m == idx)
        lost = interior & ~defined
        if lost.any() and not fix_mask.any():
            unverifiable.append(fw)
        if fix_mask.any():
            fixed.append((fw, int(np.argmax(fix_mask))))
        tested = interior & defined
        if tested.any():
            frac = float((m[tested] != idx[tested]).mean())
            min_frac = min(min_frac, frac)
    return FreeActionCertificate(not fixed, L, checked, fixed,
                                 unverifiable, min_frac)
