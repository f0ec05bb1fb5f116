"""Independent homotopy certification.

Everything here is deliberately decoupled from the removal pipeline: maps
are compared through their induced homomorphisms on free fundamental
groups (graphs are aspherical, so free homotopy classes of maps are
conjugacy classes of homomorphisms), and the grid oracle re-evaluates
both maps pointwise without touching the exact solver.

Words live in a free group with numbered generators: letter +i or -i is
the i-th generator (1-based) or its inverse.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _kernel
from .graphs import Dart, Graph, classify, GraphClass, spanning_tree, tree_path
from .plmap import PLMap, EdgeTrack
from .points import GraphPoint, InteriorPoint, VertexPoint

Word = tuple[int, ...]


def free_reduce(w) -> Word:
    return tuple(_kernel.free_reduce_ints(list(w)))


def w_inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def w_concat(*words) -> Word:
    out: list[int] = []
    for w in words:
        out.extend(w)
    return free_reduce(out)


def conjugate(c: Word, w: Word) -> Word:
    return w_concat(c, w, w_inverse(c))


def cyclic_core(w: Word) -> tuple[Word, Word]:
    """Split w = c . core . c^-1 with the core cyclically reduced."""
    w = free_reduce(w)
    c: list[int] = []
    while len(w) >= 2 and w[0] == -w[-1]:
        c.append(w[0])
        w = w[1:-1]
    return w, tuple(c)


def primitive_root(w: Word) -> Word:
    """Smallest word r with w = r^k; w must be cyclically reduced."""
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class InducedHom:
    map_name: str
    domain_generators: tuple[str, ...]    # non-tree edge ids of the domain
    codomain_generators: tuple[str, ...]  # non-tree edge ids of the codomain
    basepoint: str
    images: tuple[Word, ...]

    @property
    def rank(self) -> int:
        return len(self.domain_generators)


def _track_runs(track: EdgeTrack, cod: Graph):
    """Maximal sub-sweeps between vertex visits: (edge, c_start, c_end).

    Interior junctions never change the carrier, so every run stays in
    one edge.  A run whose net motion returns to its starting endpoint
    is nullhomotopic inside that edge and spells nothing.
    """
    segs = track.segments
    runs = []
    i = 0
    while i < len(segs):
        j = i
        while j + 1 < len(segs) and isinstance(
            cod.point(segs[j].edge, segs[j].a1), InteriorPoint
        ):
            j += 1
        runs.append((segs[i].edge, segs[i].a0, segs[j].a1))
        i = j + 1
    return runs


def _spell_track(m: PLMap, eid: str, letter_of: dict[str, int], tree) -> list[int]:
    """Reduced-spelling letters of the image path of one domain edge.

    A path end at an interior point is anchored to the origin end of its
    edge; the anchor legs of consecutive darts cancel, so concatenating
    per-edge spellings is sound.
    """
    runs = _track_runs(m.track(eid), m.codomain)
    letters: list[int] = []
    for k, (edge, c0, c1) in enumerate(runs):
        if k == 0 and 0 < c0 < 1:
            c0 = Fraction(0)
        if k == len(runs) - 1 and 0 < c1 < 1:
            c1 = Fraction(0)
        if c0 == c1 or edge in tree:
            continue
        letters.append(letter_of[edge] if c1 > c0 else -letter_of[edge])
    return letters


def induced_hom(m: PLMap) -> InducedHom:
    dom_tree, dom_gens = spanning_tree(m.domain)
    cod_tree, cod_gens = spanning_tree(m.codomain)
    letter_of = {d.edge: i + 1 for i, d in enumerate(cod_gens)}
    base = min(m.domain.vertices)
    spelled: dict[tuple[str, bool], list[int]] = {}

    def dart_letters(d: Dart) -> list[int]:
        key = (d.edge, d.forward)
        if key not in spelled:
            fwd = _spell_track(m, d.edge, letter_of, cod_tree)
            spelled[(d.edge, True)] = fwd
            spelled[(d.edge, False)] = [-x for x in reversed(fwd)]
        return spelled[key]

    images = []
    for gen in dom_gens:
        rec = m.domain.edge(gen.edge)
        loop_darts = (
            tree_path(m.domain, dom_tree, base, rec.origin)
            + (gen,)
            + tree_path(m.domain, dom_tree, rec.terminus, base)
        )
        letters: list[int] = []
        for d in loop_darts:
            letters.extend(dart_letters(d))
        images.append(free_reduce(letters))
    return InducedHom(
        map_name=m.name,
        domain_generators=tuple(d.edge for d in dom_gens),
        codomain_generators=tuple(d.edge for d in cod_gens),
        basepoint=base,
        images=tuple(images),
    )


def simultaneously_conjugate(us, vs) -> Word | None:
    """A word c with c u_i c^-1 = v_i for every i, or None.

    Solved on the first nontrivial pair: all solutions of c x c^-1 = y
    for cyclically reduced x, y form a coset root(y)^m . c0, and word
    lengths grow strictly beyond the cancellation range, so only
    exponents m within an explicit bound need testing against the
    remaining pairs.
    """
    us = [free_reduce(u) for u in us]
    vs = [free_reduce(v) for v in vs]
    if len(us) != len(vs):
        raise ValueError("sequences must have equal length")
    pairs = list(zip(us, vs))
    nontrivial = [(u, v) for u, v in pairs if u or v]
    if not nontrivial:
        return ()
    for u, v in nontrivial:
        if not u or not v:
            return None

    def check(c: Word) -> bool:
        return all(conjugate(c, u) == v for u, v in pairs)

    u1, v1 = min(nontrivial, key=lambda p: len(cyclic_core(p[0])[0]))
    x, a = cyclic_core(u1)
    y, b = cyclic_core(v1)
    if len(x) != len(y):
        return None
    base = None
    for k in range(len(x)):
        if x[k:] + x[:k] == y:
            prefix = x[:k]
            base = w_concat(b, w_inverse(prefix), w_inverse(a))
            break
    if base is None:
        return None
    if check(base):
        return base
    rho = primitive_root(y)
    root = w_concat(b, rho, w_inverse(b))
    # For a non-commuting pair, |rho^m q rho^-m| >= 2m|rho| - 2|q| with
    # |q| <= |u| + 2|base| + 2|b|, and that length must equal |v|; beyond
    # this bound every exponent fails, so the scan is complete.
    bound = 1 + max(
        (len(v) + 2 * len(u) + 4 * len(base) + 4 * len(b)) // (2 * len(rho))
        for u, v in pairs
    )
    for mag in range(1, bound + 1):
        for sig in (1, -1):
            power = root if sig > 0 else w_inverse(root)
            c = base
            for _ in range(mag):
                c = w_concat(power, c)
            if check(c):
                return c
    return None


def brute_force_conjugator(us, vs, rank: int, max_len: int) -> Word | None:
    """Exhaustive search over all conjugators up to max_len.

    Independent slow route used to cross-check simultaneously_conjugate;
    do not replace either with the other.
    """
    us = [list(free_reduce(u)) for u in us]
    vs = [list(free_reduce(v)) for v in vs]
    hit = _kernel.brute_conjugator(us, vs, rank, max_len)
    return None if hit is None else tuple(hit)


def maps_homotopic(m1: PLMap, m2: PLMap) -> tuple[bool, Word | None]:
    """Freely homotopic iff induced homomorphisms are simultaneously conjugate."""
    if m1.domain != m2.domain or m1.codomain != m2.codomain:
        raise ValueError("maps must share domain and codomain")
    h1 = induced_hom(m1)
    h2 = induced_hom(m2)
    c = simultaneously_conjugate(h1.images, h2.images)
    return c is not None, c


def circle_degree(m: PLMap) -> int:
    """Winding degree; requires a circle codomain.

    For a circle domain this is the classical degree.  For other domains
    it is the common exponent sum of the generator images when they all
    agree; a tree domain gives 0.
    """
    if classify(m.codomain) is not GraphClass.CIRCLE:
        raise ValueError("codomain is not a circle")
    hom = induced_hom(m)
    if hom.rank == 0:
        return 0
    sums = {sum((1 if x > 0 else -1) for x in w) for w in hom.images}
    if len(sums) != 1:
        raise ValueError("generator images wind differently; no single degree")
    return sums.pop()


def nielsen_circle(f: PLMap, g: PLMap) -> int:
    if classify(f.domain) is not GraphClass.CIRCLE:
        raise ValueError("domain is not a circle")
    return abs(circle_degree(f) - circle_degree(g))


# ---------------------------------------------------------------------------
# Grid oracle: direct pointwise evaluation, independent of the solver.


def _pack_track(track: EdgeTrack, edge_index: dict[str, int]):
    return [
        (
            s.t0.numerator,
            s.t0.denominator,
            s.t1.numerator,
            s.t1.denominator,
            edge_index[s.edge],
            s.a0.numerator,
            s.a0.denominator,
            s.a1.numerator,
            s.a1.denominator,
        )
        for s in track.segments
    ]


def grid_oracle(f: PLMap, g: PLMap, resolution: int) -> list[GraphPoint]:
    """Domain points on the 1/resolution grid where f and g agree exactly."""
    if resolution < 1:
        raise ValueError("resolution must be positive")
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ValueError("maps must share domain and codomain")
    cod = f.codomain
    vertex_index = {v: i for i, v in enumerate(sorted(cod.vertices))}
    edge_ids = sorted(e.id for e in cod.edges)
    edge_index = {eid: i for i, eid in enumerate(edge_ids)}
    edge_ends = [
        (vertex_index[cod.edge(eid).origin], vertex_index[cod.edge(eid).terminus])
        for eid in edge_ids
    ]
    agree: list[GraphPoint] = []
    for v in sorted(f.domain.vertices):
        if f.vertex_image(v) == g.vertex_image(v):
            agree.append(VertexPoint(v))
    for e in sorted(f.domain.edges, key=lambda e: e.id):
        vals_f = _kernel.eval_track_grid(
            _pack_track(f.track(e.id), edge_index), resolution, edge_ends
        )
        vals_g = _kernel.eval_track_grid(
            _pack_track(g.track(e.id), edge_index), resolution, edge_ends
        )
        for k in range(1, resolution):
            if vals_f[k] == vals_g[k]:
                agree.append(InteriorPoint(e.id, Fraction(k, resolution)))
    return agree


# ---------------------------------------------------------------------------
# Certificate rendering.


def word_text(w: Word | None, names) -> str:
    if w is None:
        return "none"
    if not w:
        return "1"
    parts = []
    for x in w:
        name = names[abs(x) - 1]
        parts.append(name if x > 0 else f"{name}^-1")
    return " ".join(parts)


def render_certificate(h1: InducedHom, h2: InducedHom, conjugator: Word | None) -> str:
    """Stable text record of a homotopy comparison."""
    names = h1.codomain_generators
    lines = [
        "certificate",
        f"maps: {h1.map_name} vs {h2.map_name}",
        f"basepoint: {h1.basepoint}",
        f"domain-generators: {' '.join(h1.domain_generators) or '(none)'}",
        f"codomain-generators: {' '.join(names) or '(none)'}",
    ]
    for label, hom in (("hom-1", h1), ("hom-2", h2)):
        if hom.images:
            body = "; ".join(
                f"{gen} -> {word_text(w, names)}"
                for gen, w in zip(hom.domain_generators, hom.images)
            )
        else:
            body = "(trivial)"
        lines.append(f"{label}: {body}")
    lines.append(f"conjugator: {word_text(conjugator, names)}")
    lines.append(
        "verdict: " + ("homotopic" if conjugator is not None else "not-homotopic")
    )
    return "\n".join(lines) + "\n"
