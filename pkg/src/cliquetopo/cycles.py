"""Minimal 2-cycles, their classification, small bubbles and the b2 = 0 census.

Minimal cycles are taken over the rationals: a pure 2-complex Z with
b2(Z; Q) = 1 such that deleting any triangle leaves b2 = 0.  (Over GF(2)
the projective plane would itself be a minimal cycle.)
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .collapse import collapse_2_cascade
from .complex import Complex, Simplex, edge_degrees, graph_betti1, nu_tilde, triangle_components
from .homology import GF2, Q, b2_triangles, betti, rank_q, triangle_boundary

SPHERE_LIKE = "sphere_like"
SPHERE_WEDGE_CIRCLE = "sphere_wedge_circle"
P2_UNION_DISC = "p2_union_disc"
QUOTIENT_P2_UNION_DISC = "quotient_p2_union_disc"
UNCLASSIFIED = "unclassified"

THIRD = Fraction(1, 3)


def _edges_of(t: Simplex) -> tuple[Simplex, Simplex, Simplex]:
    a, b, c = t
    return (a, b), (a, c), (b, c)


def _pure(triangles: Iterable[Simplex]) -> Complex:
    tris = sorted(set(triangles))
    return Complex.from_simplices(tris, dim_cap=2) if tris else Complex.empty()


def closed_core(triangles: Sequence[Simplex]) -> list[Simplex]:
    """Triangles left after the free-edge collapse cascade."""
    if not triangles:
        return []
    return list(collapse_2_cascade(_pure(triangles)).residue.triangles)


# --------------------------------------------------------------------------
# kernels with incremental deletion


def _kernel_q(triangles: Sequence[Simplex]) -> list[dict[int, int]]:
    """Integer basis of ker d2 over Q, vectors as {triangle index: coefficient}."""
    cols, _ = triangle_boundary(triangles, signed=True)
    pivots: dict[int, tuple[dict[int, int], dict[int, int]]] = {}
    basis = []
    for j, raw in enumerate(cols):
        col, combo = dict(raw), {j: 1}
        while col:
            top = max(col)
            hit = pivots.get(top)
            if hit is None:
                pivots[top] = (col, combo)
                break
            pc, pk = hit
            a, b = col[top], pc[top]
            col = _lincomb(col, b, pc, -a)
            combo = _lincomb(combo, b, pk, -a)
            g = math.gcd(*col.values(), *combo.values()) if col else math.gcd(*combo.values())
            if g > 1:
                col = {r: v // g for r, v in col.items()}
                combo = {r: v // g for r, v in combo.items()}
        if not col:
            basis.append(combo)
    if len(triangles) - rank_q(cols) != len(basis):
        raise ArithmeticError("kernel dimension disagrees with the checked rank")
    return basis


def _lincomb(x: dict[int, int], a: int, y: dict[int, int], b: int) -> dict[int, int]:
    out = {r: a * v for r, v in x.items()}
    for r, v in y.items():
        nv = out.get(r, 0) + b * v
        if nv:
            out[r] = nv
        else:
            out.pop(r, None)
    return out


def _drop_q(basis: list[dict[int, int]], j: int) -> list[dict[int, int]]:
    """Kernel of the matrix with column j deleted, from a kernel basis."""
    hit = next((i for i, vec in enumerate(basis) if j in vec), None)
    if hit is None:
        return basis
    piv = basis[hit]
    out = []
    for i, vec in enumerate(basis):
        if i == hit:
            continue
        if j in vec:
            vec = _lincomb(vec, piv[j], piv, -vec[j])
            g = math.gcd(*vec.values())
            vec = {r: v // g for r, v in vec.items()}
        out.append(vec)
    return out


def _kernel_gf2(triangles: Sequence[Simplex]) -> list[int]:
    from .homology import kernel_gf2

    cols, _ = triangle_boundary(triangles)
    return kernel_gf2(cols)


def _drop_gf2(basis: list[int], j: int) -> list[int]:
    hit = next((i for i, vec in enumerate(basis) if vec >> j & 1), None)
    if hit is None:
        return basis
    piv = basis[hit]
    return [vec ^ piv if vec >> j & 1 else vec for i, vec in enumerate(basis) if i != hit]


def _greedy_support(triangles: Sequence[Simplex], order: Sequence[int], field_name: str) -> list[Simplex]:
    """Delete triangles in ``order`` while b2 stays positive; return the rest.

    Deletion is free while the kernel has dimension >= 2; once it is one
    dimensional the survivors are exactly the support of its vector.
    """
    if field_name == Q:
        basis = _kernel_q(triangles)
        drop, supp = _drop_q, (lambda vec: set(vec))
    else:
        basis = _kernel_gf2(triangles)
        drop = _drop_gf2
        supp = lambda vec: {j for j in range(len(triangles)) if vec >> j & 1}  # noqa: E731
    if not basis:
        return []
    for j in order:
        if len(basis) == 1:
            break
        basis = drop(basis, j)
    return sorted(triangles[j] for j in supp(basis[0]))


# --------------------------------------------------------------------------
# minimal cycles


@dataclass(frozen=True)
class MinimalCycle:
    triangles: tuple[Simplex, ...]
    type: str
    classification: str = UNCLASSIFIED
    witness_face: Simplex | None = None

    @property
    def support(self) -> Complex:
        return _pure(self.triangles)


def is_minimal_cycle(triangles: Sequence[Simplex]) -> bool:
    """b2(Q) = 1 and every single-triangle deletion gives b2 = 0."""
    tris = sorted(set(triangles))
    if b2_triangles(tris, Q) != 1:
        return False
    return all(b2_triangles(tris[:i] + tris[i + 1:], Q) == 0 for i in range(len(tris)))


def cycle_type(triangles: Sequence[Simplex]) -> str:
    """B when some proper closed 2-subcomplex exists, else A.

    A proper closed subcomplex misses some triangle t and survives the
    collapse cascade of Z - t; the cascade residue is always closed.
    """
    tris = sorted(set(triangles))
    for i in range(len(tris)):
        if closed_core(tris[:i] + tris[i + 1:]):
            return "B"
    return "A"


def extract_minimal_cycle(x: Complex) -> MinimalCycle | None:
    """Minimal rational 2-cycle of ``x``, or None when b2(x; Q) = 0.

    Starts from the collapse-cascade core and deletes triangles in
    lexicographic order while b2 >= 1, tracking the kernel incrementally.
    """
    core = closed_core(list(x.triangles))
    if not core:
        return None
    keep = _greedy_support(core, range(len(core)), Q)
    if not keep:
        return None
    return MinimalCycle(tuple(keep), cycle_type(keep))


# --------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class CycleClassification:
    classification: str
    status: str
    nu_tilde: Fraction
    type: str
    witness_face: Simplex | None = None
    details: dict = field(default_factory=dict)


def _residue_graph_b1(triangles: Sequence[Simplex], full: Complex) -> int | None:
    """b1 of the graph left by collapsing Z - sigma, None if triangles survive."""
    faces = list(full.edges) + list(triangles)
    x = Complex.from_simplices(faces, dim_cap=2)
    res = collapse_2_cascade(x).residue
    return None if res.triangles else graph_betti1(res)


def _boundary_in_span(rest: Sequence[Simplex], sigma: Simplex) -> bool:
    cols, edges = triangle_boundary(list(rest) + [sigma], signed=True)
    return rank_q(cols[:-1]) == rank_q(cols)


def witness_face(z: Sequence[Simplex]) -> Simplex | None:
    """First triangle whose boundary is null-homotopic in Z - int(sigma).

    Certified when Z - sigma collapses to a graph of first Betti number at
    most 1 (abelian fundamental group) and d(sigma) is a rational boundary
    there.
    """
    tris = sorted(z)
    full = _pure(tris)
    for i, sigma in enumerate(tris):
        rest = tris[:i] + tris[i + 1:]
        b1 = _residue_graph_b1(rest, full)
        if b1 is not None and b1 <= 1 and _boundary_in_span(rest, sigma):
            return sigma
    return None


def _single_cycle(edges: Sequence[Simplex]) -> bool:
    if not edges:
        return False
    adj: dict[int, list[int]] = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    if any(len(v) != 2 for v in adj.values()):
        return False
    start = next(iter(adj))
    seen, stack = {start}, [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def split_disc(triangles: Sequence[Simplex]) -> tuple[list[Simplex], list[Simplex]] | None:
    """Split a P2-union-disc into (disc, projective part) along degree-3 edges."""
    deg = edge_degrees(_pure(triangles))
    high = {e for e, d in deg.items() if d == 3}
    by_edge: dict[Simplex, list[int]] = defaultdict(list)
    for i, t in enumerate(triangles):
        for e in _edges_of(t):
            by_edge[e].append(i)
    parent = list(range(len(triangles)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for e, members in by_edge.items():
        if e in high:
            continue
        for j in members[1:]:
            parent[find(j)] = find(members[0])
    groups: dict[int, list[Simplex]] = defaultdict(list)
    for i, t in enumerate(triangles):
        groups[find(i)].append(t)
    for group in groups.values():
        hits = defaultdict(int)
        for t in group:
            for e in _edges_of(t):
                if e in high:
                    hits[e] += 1
        if set(hits) == high and all(v == 1 for v in hits.values()):
            disc = sorted(group)
            rest = sorted(t for t in triangles if t not in set(group))
            return disc, rest
    return None


def classify_minimal_cycle(z: MinimalCycle | Sequence[Simplex], require_nu: bool = True) -> CycleClassification:
    """Structural classification of a minimal cycle with nu-tilde > 1/3.

    Type A: sphere-like (GF2 Betti (1,0,1), chi 2) or sphere wedge circle
    ((1,1,1), chi 1), with a witness face.  Type B: degree-3 edges forming
    one cycle of length 3-5 with a disc and a projective part, or an edge
    of degree >= 4 with L in {-3,-4,-5} (the quotient case).
    """
    tris = tuple(sorted(z.triangles if isinstance(z, MinimalCycle) else z))
    x = _pure(tris)
    nt = nu_tilde(x)
    kind = z.type if isinstance(z, MinimalCycle) else cycle_type(tris)
    if require_nu and not nt > THIRD:
        return CycleClassification(UNCLASSIFIED, "hypothesis_violation", nt, kind)
    b = betti(x, GF2).b
    chi = len(x.vertices) - len(x.edges) + len(x.triangles)
    L = 2 * len(x.edges) - 3 * len(x.triangles)
    deg = edge_degrees(x)
    details = {"gf2_betti": b, "chi": chi, "L": L}
    if kind == "A":
        if b == (1, 0, 1) and chi == 2:
            cls = SPHERE_LIKE
        elif b == (1, 1, 1) and chi == 1:
            cls = SPHERE_WEDGE_CIRCLE
        else:
            return CycleClassification(UNCLASSIFIED, "ok", nt, kind, None, details)
        return CycleClassification(cls, "ok", nt, kind, witness_face(tris), details)
    high = sorted(e for e, d in deg.items() if d == 3)
    details["degree3_edges"] = high
    if max(deg.values()) >= 4:
        cls = QUOTIENT_P2_UNION_DISC if L in (-3, -4, -5) else UNCLASSIFIED
        return CycleClassification(cls, "ok", nt, kind, None, details)
    if _single_cycle(high) and 3 <= len(high) <= 5:
        details["disc_boundary_length"] = len(high)
        parts = split_disc(tris)
        if parts is not None:
            disc, proj = parts
            pp = _pure(proj)
            chi_p = len(pp.vertices) - len(pp.edges) + len(pp.triangles)
            details["projective_part_betti"] = betti(pp, GF2).b
            if betti(pp, GF2).b == (1, 1, 1) and chi_p == 1 and betti(_pure(disc), Q).b == (1, 0, 0):
                return CycleClassification(P2_UNION_DISC, "ok", nt, kind, None, details)
    return CycleClassification(UNCLASSIFIED, "ok", nt, kind, None, details)


# --------------------------------------------------------------------------
# small bubbles


@dataclass(frozen=True)
class BubbleReport:
    triangles: tuple[Simplex, ...]
    edge_count: int
    reason: str
    certified: bool
    nu_tilde: Fraction

    @property
    def subcomplex(self) -> Complex:
        return _pure(self.triangles)


def _edge_count(triangles: Iterable[Simplex]) -> int:
    return len({e for t in triangles for e in _edges_of(t)})


def _triangle_distances(triangles: Sequence[Simplex], start: int) -> list[int]:
    by_edge: dict[Simplex, list[int]] = defaultdict(list)
    for i, t in enumerate(triangles):
        for e in _edges_of(t):
            by_edge[e].append(i)
    dist = [-1] * len(triangles)
    dist[start] = 0
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for e in _edges_of(triangles[i]):
            for j in by_edge[e]:
                if dist[j] < 0:
                    dist[j] = dist[i] + 1
                    queue.append(j)
    return dist


def bubble_reason(triangles: Sequence[Simplex]) -> tuple[str, bool, Fraction] | None:
    """Reason a GF2 cycle support is non-aspherical, or None.

    Q b2 >= 1 gives ``minimal_cycle`` (certified when nu-tilde > 1/3; a
    torus has b2 = 1 yet is aspherical).  Q b2 = 0 with the projective
    signature (GF2 Betti (1,1,1), chi 1) gives ``projective_plane`` for
    L = 0 and ``p2_quotient`` for L = -2.
    """
    x = _pure(triangles)
    nt = nu_tilde(x)
    if betti(x, Q)[2] >= 1:
        return "minimal_cycle", nt > THIRD, nt
    chi = len(x.vertices) - len(x.edges) + len(x.triangles)
    L = 2 * len(x.edges) - 3 * len(x.triangles)
    if betti(x, GF2).b == (1, 1, 1) and chi == 1:
        if L == 0:
            return "projective_plane", True, nt
        if L == -2:
            return "p2_quotient", True, nt
    return None


def _report(tris: Sequence[Simplex], edge_cap: int) -> BubbleReport | None:
    ec = _edge_count(tris)
    if not tris or ec > edge_cap:
        return None
    why = bubble_reason(tris)
    if why is None:
        return None
    return BubbleReport(tuple(sorted(tris)), ec, why[0], why[1], why[2])


def _better(a: BubbleReport | None, b: BubbleReport | None) -> BubbleReport | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b, key=lambda r: (r.edge_count, len(r.triangles), r.triangles))


def find_small_bubble(y: Complex, edge_cap: int) -> BubbleReport | None:
    """Smallest non-aspherical cycle support found with at most ``edge_cap`` edges.

    From every triangle of the collapse core, triangles are deleted
    farthest-first while a GF(2) 2-cycle survives, leaving a localized
    minimal support; supports within the cap are classified by
    :func:`bubble_reason`.  None is an asphericity indicator at this cap,
    not a proof.
    """
    if edge_cap < 6:
        return None
    core = closed_core(list(y.triangles))
    best = None
    seen: set[tuple[Simplex, ...]] = set()
    for comp in triangle_components(core):
        if not _kernel_gf2(comp):
            continue
        for s in range(len(comp)):
            dist = _triangle_distances(comp, s)
            order = sorted(range(len(comp)), key=lambda j: (-dist[j], comp[j]))
            supp = tuple(_greedy_support(comp, order, GF2))
            if supp in seen:
                continue
            seen.add(supp)
            best = _better(best, _report(supp, edge_cap))
    return best


def exhaustive_bubble(y: Complex, edge_cap: int) -> BubbleReport | None:
    """Oracle: scan every triangle subset spanning at most ``edge_cap`` edges."""
    if edge_cap < 6:
        return None
    tris = closed_core(list(y.triangles))
    best = None

    def walk(i: int, chosen: list[Simplex], edges: frozenset) -> None:
        nonlocal best
        if i == len(tris):
            if chosen and b2_triangles(chosen, GF2) >= 1:
                best = _better(best, _report(chosen, edge_cap))
            return
        walk(i + 1, chosen, edges)
        new = edges | set(_edges_of(tris[i]))
        if len(new) <= edge_cap:
            chosen.append(tris[i])
            walk(i + 1, chosen, frozenset(new))
            chosen.pop()

    walk(0, [], frozenset())
    return best


# --------------------------------------------------------------------------
# odd torsion screen


@dataclass(frozen=True)
class TorsionVerdict:
    certified: bool
    nu_tilde: Fraction | float
    message: str


def odd_torsion_screen(y: Complex) -> TorsionVerdict:
    nt = nu_tilde(y)
    if nt > THIRD:
        return TorsionVerdict(
            True, nt, "nu-tilde > 1/3: fundamental group is a free product of Z's and Z2's, no odd torsion"
        )
    return TorsionVerdict(False, nt, "no certificate")


# --------------------------------------------------------------------------
# census of closed complexes with b2 = 0


@dataclass(frozen=True)
class CensusEntry:
    triangles: tuple[Simplex, ...]
    v: int
    e: int
    L: int
    gf2_betti: tuple[int, ...]
    q_betti: tuple[int, ...]

    @property
    def signature_ok(self) -> bool:
        chi = self.v - self.e + len(self.triangles)
        return self.gf2_betti == (1, 1, 1) and chi == 1


@dataclass(frozen=True)
class CensusResult:
    max_vertices: int
    states: int
    closed: int
    entries: tuple[CensusEntry, ...]

    @property
    def all_projective(self) -> bool:
        return all(e.signature_ok for e in self.entries)


def enumerate_closed(max_vertices: int, max_excess: int = 2):
    """Closed strongly connected pure 2-complexes with edge-degree excess bounded.

    Complexes are grown from triangle (0, 1, 2) by always closing the
    smallest boundary edge (third vertex existing or the next new label),
    and at closed states by adding a triangle on any existing edge.
    Labelled states are memoized; every complex in the class is reached
    up to relabelling.  Yields (triangles, vertex count, edge count) for
    each closed state, plus the number of states visited at the end via
    ``StopIteration.value``.
    """
    seen: set[frozenset] = set()
    stack = [frozenset({(0, 1, 2)})]
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        deg: dict[Simplex, int] = defaultdict(int)
        verts: set[int] = set()
        for t in state:
            verts.update(t)
            for e in _edges_of(t):
                deg[e] += 1
        nv = len(verts)
        labels = range(nv + (nv < max_vertices))
        free = min((e for e, d in deg.items() if d == 1), default=None)
        if free is not None:
            choices = [(free, w) for w in labels if w not in free]
        else:
            yield tuple(sorted(state)), nv, len(deg)
            choices = [(edge, w) for edge in sorted(deg) for w in labels if w not in edge]
        spare = max_excess - sum(d - 2 for d in deg.values() if d > 2)
        for (a, b), w in choices:
            t = tuple(sorted((a, b, w)))
            if t in state:
                continue
            extra = sum(1 for e in _edges_of(t) if deg.get(e, 0) >= 2)
            if extra > spare:
                continue
            stack.append(state | {t})
    return len(seen)


def census_b2_zero(max_vertices: int = 8, max_excess: int = 2) -> CensusResult:
    """Closed strongly connected pure 2-complexes with b2(Q) = 0 and nu > 1/3.

    With b2 = 0 and nu > 1/3, 3 chi + L > 0 forces b1 = 0 and L >= -2, so
    the total edge-degree excess sum(deg - 2) is at most 2 and
    :func:`enumerate_closed` covers the whole class.
    """
    entries = []
    closed_count = 0
    gen = enumerate_closed(max_vertices, max_excess)
    while True:
        try:
            tris, nv, e = next(gen)
        except StopIteration as stop:
            states = stop.value
            break
        closed_count += 1
        if e < 3 * nv and b2_triangles(tris, Q) == 0:
            x = _pure(tris)
            entries.append(
                CensusEntry(tris, nv, e, 2 * e - 3 * len(tris), betti(x, GF2).b, betti(x, Q).b)
            )
    entries.sort(key=lambda c: (c.v, c.e, c.triangles))
    return CensusResult(max_vertices, states, closed_count, tuple(entries))
