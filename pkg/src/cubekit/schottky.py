"""Ping-pong certificates and the stabilizer (Sigma/A/U) machinery.

Everything here is finite-range and certificate-shaped: searches produce
explicit words and halfspaces, and a verification pass re-checks every
claimed inclusion or disjointness directly on the action data, without
reference to how the witnesses were found.  Truncation is never hidden —
each certificate records the margin of the data it inspected and which
checks were cut short by the ball boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .median import bfs_distances
from .hyperplanes import (Halfspace, Hyperplane, arrangement, crosses,
                          halfspace_leq, halfspaces_disjoint, parse_halfspace,
                          projection_pair, strongly_separated)
from .action import (FiniteQuotient, PartialAction, SearchResult, Word,
                     find_double_skewer, find_flipping, invert_word,
                     parse_word, proper_subhalfspace, reduce_word,
                     reduced_words, stabilizer_words, word_str)


class SchottkyError(Exception):
    pass


def _hs_token(hs: Halfspace) -> str:
    return f"H{hs.cls}{'+' if hs.side_id else '-'}"


def hyperplanes_disjoint(h1: Hyperplane, h2: Hyperplane) -> bool:
    """Two distinct hyperplanes either cross or are disjoint."""
    return h1.cls != h2.cls and not crosses(h1, h2)


# -- Sigma / A machinery --------------------------------------------------

@dataclass
class SigmaData:
    base: Halfspace                # a side of the base hyperplane
    test: Halfspace                # the test halfspace k
    sigma: list[Word]
    a_words: list[Word]            # subgroup generated by sigma, in budget
    a_orbit: list[Halfspace]       # distinct images a(k)
    fixed_edge: tuple[int, int]    # projection edge p on the base hyperplane
    fixes_p_ok: bool
    separea_checked: list[Word]
    separea_ok: bool
    inconclusive: list[str]

    def render(self, graph) -> str:
        lines = [f"sigma analysis: base={_hs_token(self.base)} "
                 f"test={_hs_token(self.test)}",
                 "sigma: " + " ".join(word_str(w) for w in self.sigma),
                 f"A-orbit size: {len(self.a_orbit)}",
                 "A-orbit: " + " ".join(_hs_token(h) for h in self.a_orbit),
                 f"fixed edge p: {graph.labels[self.fixed_edge[0]]}-"
                 f"{graph.labels[self.fixed_edge[1]]}",
                 f"all sigma fix p: {'yes' if self.fixes_p_ok else 'NO'}",
                 f"separation outside A: "
                 f"{'verified' if self.separea_ok else 'VIOLATED'} on "
                 f"{len(self.separea_checked)} sampled words"]
        lines.extend(f"inconclusive: {s}" for s in self.inconclusive)
        return "\n".join(lines)


def sigma_analysis(a: PartialAction, base_hs: Halfspace, test_hs: Halfspace,
                   L: int) -> SigmaData:
    """Stabilizer words of the base hyperplane whose action fails to move
    the test halfspace off itself, the finite orbit they generate, and the
    projection-edge fixed-point check."""
    if not strongly_separated(base_hs.hyperplane, test_hs.hyperplane):
        raise SchottkyError("base and test hyperplanes are not "
                            "strongly separated")
    inconclusive: list[str] = []
    p_edge, _ = projection_pair(base_hs.hyperplane, test_hs.hyperplane)

    stab = stabilizer_words(a, base_hs, L)
    sigma: list[Word] = []
    for w in stab:
        res = a.transport_halfspace(w, test_hs)
        if not res.ok:
            inconclusive.append(f"could not transport test by {word_str(w)}")
            continue
        if not halfspaces_disjoint(res.halfspace, test_hs):
            sigma.append(w)

    # close sigma under multiplication within the word budget
    a_words: list[Word] = [()]
    seen = {()}
    frontier_words = [()]
    while frontier_words:
        nxt = []
        for w in frontier_words:
            for s in sigma:
                if not s:
                    continue
                prod = reduce_word(w + s, a.gens)
                if len(prod) <= L and prod not in seen:
                    seen.add(prod)
                    a_words.append(prod)
                    nxt.append(prod)
        frontier_words = nxt
        if len(a_words) > 500:
            inconclusive.append("A-subgroup closure budget exhausted")
            break
    a_words.sort(key=lambda w: (len(w), tuple(a.gens.rank(t) for t in w)))

    orbit_keys = {}
    a_orbit: list[Halfspace] = []
    for w in a_words:
        res = a.transport_halfspace(w, test_hs)
        if not res.ok:
            inconclusive.append(f"A-orbit truncated at {word_str(w)}")
            continue
        if res.halfspace.key not in orbit_keys:
            orbit_keys[res.halfspace.key] = w
            a_orbit.append(res.halfspace)

    fixes_p = True
    for w in sigma:
        for v in p_edge:
            img, _ = a.apply(w, v)
            if img != v:
                fixes_p = False

    # Spot check: stabilizer words outside A must move
    # U = union of the A-orbit completely off itself.
    separea_ok = True
    checked = []
    aset = set(a_words)
    for w in stab:
        if w in aset:
            continue
        checked.append(w)
        for h in a_orbit:
            r2 = a.transport_halfspace(w, h)
            if not r2.ok:
                inconclusive.append(
                    f"separation check truncated at {word_str(w)}")
                break
            if any(not halfspaces_disjoint(r2.halfspace, h2)
                   for h2 in a_orbit):
                separea_ok = False
                break
    return SigmaData(base_hs, test_hs, sigma, a_words, a_orbit, p_edge,
                     fixes_p, checked, separea_ok, inconclusive)


# -- quadruple construction -----------------------------------------------

@dataclass
class QuadrupleResult:
    quadruple: tuple[Halfspace, Halfspace, Halfspace, Halfspace]
    k_word: Word
    g_word: Optional[Word]
    h_word: Optional[Word]
    refined: bool
    truncated: bool


def _pairwise_strongly_separated(halves: Sequence[Halfspace]) -> bool:
    return all(strongly_separated(x.hyperplane, y.hyperplane)
               for i, x in enumerate(halves) for y in halves[i + 1:])


def build_quadruple(a: PartialAction,
                    triple: tuple[Halfspace, Halfspace, Halfspace],
                    L: int) -> QuadrupleResult:
    """Facing quadruple from a facing triple (h, h1, h2): flip h by some k
    and adjoin k(h1), k(h2); then, if the four pairs are not already
    strongly separated, refine each member to a smaller halfspace using a
    transported strongly separated nested pair."""
    h, h1, h2 = triple
    for x, y in ((h, h1), (h, h2), (h1, h2)):
        if x.cls == y.cls or not halfspaces_disjoint(x, y):
            raise SchottkyError("input is not a facing triple "
                                f"({_hs_token(x)} meets {_hs_token(y)})")
    flip = find_flipping(a, h, L)
    if not flip.found:
        raise SchottkyError("no flipping element found for "
                            f"{_hs_token(h)} within length {L}")
    r1 = a.transport_halfspace(flip.word, h1)
    r2 = a.transport_halfspace(flip.word, h2)
    if not (r1.ok and r2.ok):
        raise SchottkyError("flip image of the facing triple is truncated")
    h3, h4 = r1.halfspace, r2.halfspace
    quad = (h1, h2, h3, h4)
    for i, x in enumerate(quad):
        for y in quad[i + 1:]:
            if x.cls == y.cls or not halfspaces_disjoint(x, y):
                raise SchottkyError(
                    f"flip output is not facing: {_hs_token(x)} meets "
                    f"{_hs_token(y)}")
    refined = False
    if not _pairwise_strongly_separated(quad):
        quad = _refine_quadruple(a, quad, L)
        refined = True
    g = find_double_skewer(a, quad[0], quad[1].complement, L)
    h_el = find_double_skewer(a, quad[2], quad[3].complement, L)
    truncated = flip.truncated or g.truncated or h_el.truncated
    return QuadrupleResult(quad, flip.word,
                           g.word if g.found else None,
                           h_el.word if h_el.found else None,
                           refined, truncated)


def _refine_quadruple(a: PartialAction, quad, L: int):
    """Replace each member by a strongly separated smaller halfspace found
    by transporting a nested strongly separated pair into it."""
    inner = _find_ss_nested(a, quad, L)
    if inner is None:
        raise SchottkyError("refinement failed: no strongly separated "
                            "nested pair within budget")
    out = []
    for hj in quad:
        cand = None
        for w in reduced_words(a.gens, L):
            res = a.transport_halfspace(w, inner)
            if res.ok and halfspace_leq(res.halfspace, hj):
                cand = res.halfspace
                break
        if cand is None:
            raise SchottkyError("refinement failed: could not transport the "
                                f"nested pair into {_hs_token(hj)}")
        out.append(cand)
    quad2 = tuple(out)
    if not _pairwise_strongly_separated(quad2):
        raise SchottkyError("refinement failed: transported halfspaces are "
                            "not pairwise strongly separated")
    return quad2


def _find_ss_nested(a: PartialAction, quad, L: int) -> Optional[Halfspace]:
    """A halfspace sitting strictly inside another with the two hyperplanes
    strongly separated, searched among orbit images of the quadruple."""
    cands = list(quad)
    for hs in quad:
        for w in reduced_words(a.gens, min(L, 3), min_len=1):
            res = a.transport_halfspace(w, hs)
            if res.ok:
                cands.append(res.halfspace)
            if len(cands) > 40:
                break
    for x in cands:
        for y in cands:
            if x.key != y.key and halfspace_leq(x, y) and \
                    strongly_separated(x.hyperplane, y.hyperplane):
                return x
    return None


# -- ping-pong certification ----------------------------------------------

CERT_PINGPONG = "cubekit-pingpong v1"
CERT_STABLE = "cubekit-stable v1"


@dataclass
class PingPongCertificate:
    graph_digest: str
    action_digest: str
    quadruple: tuple[Halfspace, Halfspace, Halfspace, Halfspace]
    g: Word
    h: Word
    m_max: int
    inclusions: list[tuple[str, int, str, str]]  # (gen, n, image, target)
    displacement: list[tuple[int, int]]          # (m, distance to dU)
    delta_witness: int
    margin: Optional[int]
    truncation_notes: list[str]

    def to_text(self) -> str:
        q = " ".join(_hs_token(h) for h in self.quadruple)
        lines = [CERT_PINGPONG,
                 f"graph: {self.graph_digest}",
                 f"action: {self.action_digest}",
                 f"quadruple: {q}",
                 f"g: {word_str(self.g)}",
                 f"h: {word_str(self.h)}",
                 f"m-max: {self.m_max}"]
        for gen, n, img, tgt in self.inclusions:
            lines.append(f"incl {gen}^{n}: {img} <= {tgt}")
        for m, d in self.displacement:
            lines.append(f"disp {m}: {d}")
        lines.append(f"delta-witness: {self.delta_witness}")
        lines.append("margin: " +
                     ("exact" if self.margin is None else str(self.margin)))
        for note in self.truncation_notes:
            lines.append(f"note: {note}")
        return "\n".join(lines) + "\n"


@dataclass
class PingPongRefutation:
    reason: str

    @property
    def ok(self):
        return False


def pingpong_certify(a: PartialAction, quadruple, g: Word, h: Word,
                     m_max: int):
    """Verify the Schottky inclusions g^n(V) ⊆ U, h^n(U) ⊆ V for
    0 < |n| <= m_max, measure the displacement margin of x = gh, and emit
    a certificate (or the exact failing inclusion).

    This function performs no search: it only checks the supplied data, so
    it doubles as the certificate verifier."""
    h1, h2, h3, h4 = quadruple
    for i, x in enumerate(quadruple):
        for y in quadruple[i + 1:]:
            if not halfspaces_disjoint(x, y):
                return PingPongRefutation(
                    f"quadruple is not facing: {_hs_token(x)} meets "
                    f"{_hs_token(y)}")
            if not strongly_separated(x.hyperplane, y.hyperplane):
                return PingPongRefutation(
                    f"pair {_hs_token(x)},{_hs_token(y)} is not strongly "
                    "separated")
    if not g or not h:
        return PingPongRefutation("g and h must be nontrivial words")
    notes: list[str] = []
    margins: list[int] = []
    inclusions: list[tuple[str, int, str, str]] = []

    def power(w: Word, n: int) -> Word:
        base = w if n > 0 else invert_word(w, a.gens)
        out: Word = ()
        for _ in range(abs(n)):
            out = reduce_word(out + base, a.gens)
        return out

    def check(gen_label: str, w: Word, n: int, sources, targets) -> Optional[str]:
        word = power(w, n)
        for hs in sources:
            res = a.transport_halfspace(word, hs)
            if not res.ok:
                notes.append(f"{gen_label}^{n}({_hs_token(hs)}) truncated; "
                             "inclusion unverified")
                continue
            if res.margin is not None:
                margins.append(res.margin)
            img = res.halfspace
            tgt = next((t for t in targets if halfspace_leq(img, t)), None)
            if tgt is None:
                return (f"{gen_label}^{n}({_hs_token(hs)}) = "
                        f"{_hs_token(img)} not inside "
                        f"{'/'.join(_hs_token(t) for t in targets)}")
            inclusions.append((gen_label, n, _hs_token(img), _hs_token(tgt)))
        return None

    U, V = (h1, h2), (h3, h4)
    for n_abs in range(1, m_max + 1):
        for n in (n_abs, -n_abs):
            fail = check("g", g, n, V, U)
            if fail:
                return PingPongRefutation(fail)
            fail = check("h", h, n, U, V)
            if fail:
                return PingPongRefutation(fail)

    # displacement of x = gh relative to the boundary of U
    graph = a.graph
    arr = h1.arr
    boundary = sorted(arr.carrier_vertices(h1.cls) |
                      arr.carrier_vertices(h2.cls))
    dB = bfs_distances(graph.adj, boundary)
    x = reduce_word(g + h, a.gens)
    displacement: list[tuple[int, int]] = []
    for m in range(1, m_max + 1):
        word = power(x, m)
        dists = []
        ok = True
        for hs in U:
            res = a.transport_halfspace(word, hs)
            if not res.ok:
                notes.append(f"displacement at m={m} truncated")
                ok = False
                break
            if res.margin is not None:
                margins.append(res.margin)
            dists.append(min(dB[v] for v in res.halfspace.vertices))
        if not ok:
            break
        displacement.append((m, min(dists)))
    if not displacement:
        return PingPongRefutation("no displacement data within the ball")
    delta = min(d // m for m, d in displacement)
    if delta < 1:
        return PingPongRefutation(
            f"displacement margin {delta} < 1 (x does not move U off its "
            "boundary)")
    for m, d in displacement:
        if d < m * delta:
            return PingPongRefutation(
                f"displacement at m={m} is {d} < {m}*{delta}")
    return PingPongCertificate(
        graph.digest(), a.digest(), tuple(quadruple), g, h, m_max,
        inclusions, displacement, delta,
        min(margins) if margins else None, notes)


# -- stable hyperplane certificates ---------------------------------------

@dataclass
class StableHyperplaneCertificate:
    graph_digest: str
    action_digest: str
    hyperplane: int
    quadruple: tuple[Halfspace, Halfspace, Halfspace, Halfspace]
    g: Word
    h: Word
    sample_len: int
    verified: list[tuple[Word, int]]   # (word in generators, image class)
    vacuous: bool
    margin: Optional[int]

    def to_text(self) -> str:
        q = " ".join(_hs_token(hs) for hs in self.quadruple)
        lines = [CERT_STABLE,
                 f"graph: {self.graph_digest}",
                 f"action: {self.action_digest}",
                 f"hyperplane: H{self.hyperplane}",
                 f"quadruple: {q}",
                 f"g: {word_str(self.g)}",
                 f"h: {word_str(self.h)}",
                 f"sample-len: {self.sample_len}"]
        for w, cls in self.verified:
            lines.append(f"moved {word_str(w)}: H{cls}")
        if self.vacuous:
            lines.append("note: empty sample (vacuous certificate)")
        lines.append("margin: " +
                     ("exact" if self.margin is None else str(self.margin)))
        return "\n".join(lines) + "\n"


def commutator_sample(g: Word, h: Word, gens, sample_len: int) -> list[Word]:
    """The sampled derived-subgroup words: commutators [u, v] for u in
    {g, g^-1}, v in {h, h^-1}, and their inverses, capped at sample_len
    letters.  A sample, not an enumeration — soundness lives in the
    per-word verification."""
    gi, hi = invert_word(g, gens), invert_word(h, gens)
    out = []
    seen = set()
    for u in (g, gi):
        for v in (h, hi):
            for w in (u + v + invert_word(u, gens) + invert_word(v, gens),
                      v + u + invert_word(v, gens) + invert_word(u, gens)):
                rw = reduce_word(w, gens)
                if rw and len(rw) <= sample_len and rw not in seen:
                    seen.add(rw)
                    out.append(rw)
    return out


def stable_certify(a: PartialAction, h_hyp: Hyperplane,
                   cert: PingPongCertificate, sample_len: int
                   ) -> StableHyperplaneCertificate:
    """Check that every sampled derived-subgroup word of the certified free
    pair moves the hyperplane completely off itself."""
    arr = h_hyp.arr
    carrier = arr.carrier_vertices(h_hyp.cls)
    for hs in cert.quadruple:
        if carrier & hs.vertices:
            raise SchottkyError(
                f"hyperplane H{h_hyp.cls} meets {_hs_token(hs)}; it must "
                "avoid U and V")
    sample = commutator_sample(cert.g, cert.h, a.gens, sample_len)
    base = h_hyp.side(1)
    verified = []
    margins = []
    for w in sample:
        res = a.transport_halfspace(w, base)
        if not res.ok:
            raise SchottkyError(f"cannot transport H{h_hyp.cls} by "
                                f"{word_str(w)}: out of domain")
        if res.margin is not None:
            margins.append(res.margin)
        img = res.halfspace
        if not hyperplanes_disjoint(img.hyperplane, h_hyp):
            raise SchottkyError(
                f"word {word_str(w)} does not displace H{h_hyp.cls}")
        verified.append((w, img.cls))
    return StableHyperplaneCertificate(
        a.graph.digest(), a.digest(), h_hyp.cls, cert.quadruple,
        cert.g, cert.h, sample_len, verified, not sample,
        min(margins) if margins else None)


# -- certificate parsing and standalone verification ----------------------

def _parse_cert_lines(text: str) -> tuple[str, dict, list[str]]:
    lines = text.splitlines()
    if not lines:
        raise SchottkyError("empty certificate")
    kind = lines[0].strip()
    fields: dict[str, str] = {}
    extras: list[str] = []
    for line in lines[1:]:
        line = line.rstrip()
        if not line:
            continue
        if line.startswith(("incl ", "disp ", "moved ", "note:")):
            extras.append(line)
        elif ":" in line:
            k, v = line.split(":", 1)
            fields[k.strip()] = v.strip()
        else:
            raise SchottkyError(f"cannot parse certificate line '{line}'")
    return kind, fields, extras


def verify_certificate(a: PartialAction, text: str) -> tuple[bool, str]:
    """Re-run all certificate checks from the echoed inputs and compare the
    regenerated certificate byte-for-byte with the supplied one."""
    kind, fields, _ = _parse_cert_lines(text)
    arr = arrangement(a.graph)
    try:
        if fields.get("graph") != a.graph.digest():
            return False, "graph digest mismatch"
        if fields.get("action") != a.digest():
            return False, "action digest mismatch"
        quad = tuple(parse_halfspace(arr, t)
                     for t in fields["quadruple"].split())
        g = parse_word(fields["g"], a.gens)
        h = parse_word(fields["h"], a.gens)
        if kind == CERT_PINGPONG:
            res = pingpong_certify(a, quad, g, h, int(fields["m-max"]))
            if isinstance(res, PingPongRefutation):
                return False, res.reason
            regen = res.to_text()
        elif kind == CERT_STABLE:
            cls = int(fields["hyperplane"].lstrip("H"))
            pp = PingPongCertificate(a.graph.digest(), a.digest(), quad,
                                     g, h, 0, [], [], 0, None, [])
            res = stable_certify(a, arr.hyperplanes()[cls], pp,
                                 int(fields["sample-len"]))
            regen = res.to_text()
        else:
            return False, f"unknown certificate kind '{kind}'"
    except (SchottkyError, KeyError, ValueError) as exc:
        return False, f"verification error: {exc}"
    if regen != text:
        for i, (x, y) in enumerate(zip(regen.splitlines(),
                                       text.splitlines()), start=1):
            if x != y:
                return False, f"line {i} differs: expected '{x}' got '{y}'"
        return False, "certificate length differs from regenerated form"
    return True, "certificate verified"


# -- elliptic fixed points ------------------------------------------------

@dataclass
class EllipticResult:
    kind: str                      # 'vertex' | 'edge' | 'square' | 'not-found'
    locus: Optional[tuple[int, ...]] = None

    @property
    def found(self):
        return self.kind != "not-found"


def elliptic_fixed_point(a: PartialAction, words: Sequence[Word],
                         orbit_L: int,
                         hyperplane: Optional[Hyperplane] = None
                         ) -> EllipticResult:
    """Common fixed locus of a set of words.

    With a hyperplane supplied, first checks whether every word preserves
    it side-wise and fixes its representative dual edge (the projection
    locus of the two-strongly-separated-hyperplanes argument); otherwise
    falls back to a direct search for a fixed vertex, edge, or square."""
    g = a.graph
    if hyperplane is not None:
        arr = hyperplane.arr
        t, hd = arr.rep_oriented(hyperplane.cls)
        if all(a.apply(w, t)[0] == t and a.apply(w, hd)[0] == hd
               for w in words):
            return EllipticResult("edge", (t, hd))
    imgs = []
    for w in words:
        img = [a.apply(w, v)[0] for v in range(g.n)]
        imgs.append(img)
    fixed = [v for v in range(g.n)
             if all(im[v] == v for im in imgs)]
    if fixed:
        v = a.base if a.base in fixed else min(fixed)
        return EllipticResult("vertex", (v,))
    for u, v in g.edges:
        if all(im[u] is not None and im[v] is not None and
               {im[u], im[v]} == {u, v} for im in imgs):
            return EllipticResult("edge", (u, v))
    for sq in arrangement(g).squares:
        s = set(sq)
        if all(all(im[v] is not None for v in sq) and
               {im[v] for v in sq} == s for im in imgs):
            return EllipticResult("square", sq)
    return EllipticResult("not-found")


# -- separated translates under a finite quotient -------------------------

@dataclass
class SeparatedTranslateResult:
    word: Word
    n0: int
    companions: tuple[Halfspace, Halfspace]
    translate: Halfspace
    margin: Optional[int]


def find_separated_translate(a: PartialAction, h_hs: Halfspace,
                             q: FiniteQuotient, L: int,
                             companions: Optional[tuple[Halfspace, Halfspace]]
                             = None,
                             search_radius: int = 1
                             ) -> Optional[SeparatedTranslateResult]:
    """A power of a double-skewer element that lands in the kernel of the
    finite quotient and carries the hyperplane to a strongly separated
    translate.

    The halfspace must be part of a facing triple whose companions are
    pairwise strongly separated; companions are searched near the carrier
    when not supplied."""
    arr = h_hs.arr
    if companions is None:
        companions = _find_companions(a, h_hs, search_radius)
        if companions is None:
            return None
    k1, k2 = companions
    for x, y in ((h_hs, k1), (h_hs, k2), (k1, k2)):
        if not halfspaces_disjoint(x, y):
            raise SchottkyError(f"{_hs_token(x)} and {_hs_token(y)} do not "
                                "form a facing triple")
    for x, y in ((h_hs, k1), (h_hs, k2), (k1, k2)):
        if not strongly_separated(x.hyperplane, y.hyperplane):
            raise SchottkyError("companions are not strongly separated")
    ds = find_double_skewer(a, k1, k2.complement, L)
    if not ds.found:
        return None
    x = ds.word
    n0 = None
    for n in range(1, 2 * q.size + 3):
        word = x * n
        if q.in_kernel(reduce_word(word, a.gens)):
            n0 = n
            break
    if n0 is None:
        return None
    full = reduce_word(x * n0, a.gens)
    res = a.transport_halfspace(full, h_hs)
    if not res.ok:
        return None
    if not strongly_separated(res.halfspace.hyperplane, h_hs.hyperplane):
        return None
    return SeparatedTranslateResult(x, n0, companions, res.halfspace,
                                    res.margin)


def _find_companions(a: PartialAction, h_hs: Halfspace, radius: int
                     ) -> Optional[tuple[Halfspace, Halfspace]]:
    """First (class, side)-ordered pair of candidate halfspaces near the
    carrier forming a facing triple with h_hs."""
    g = a.graph
    arr = h_hs.arr
    carrier = sorted(arr.carrier_vertices(h_hs.cls))
    dc = bfs_distances(g.adj, carrier)
    near = [v for v in range(g.n) if 0 <= dc[v] <= radius]
    classes = sorted({arr.class_of_edge(u, v) for x in near
                      for u, v in ((x, y) for y in g.adj[x])})
    cands = [arr.halfspace(c, s) for c in classes for s in (0, 1)
             if (c, s) != h_hs.key and (c, 1 - s) != h_hs.key]
    cands = [h for h in cands if halfspaces_disjoint(h, h_hs)]
    for i, x in enumerate(cands):
        for y in cands[i + 1:]:
            if halfspaces_disjoint(x, y) and \
                    strongly_separated(x.hyperplane, y.hyperplane) and \
                    strongly_separated(x.hyperplane, h_hs.hyperplane) and \
                    strongly_separated(y.hyperplane, h_hs.hyperplane):
                return (x, y)
    return None
