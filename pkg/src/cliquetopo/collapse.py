"""Free-face collapses: tetrahedra onto triangles, then the triangle cascade.

Both phases break ties by taking the lexicographically smallest free face,
so traces are reproducible.  A trace can be dumped as ``COLLAPSE`` lines
and replayed with validity checks.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .complex import Complex, DensityReport, Simplex, density_report, graph_betti1, pure_part

GRAPH = "graph"
CLOSED = "closed_2_complex"
MIXED = "mixed"


@dataclass(frozen=True)
class CollapseTrace:
    steps: tuple[tuple[Simplex, Simplex], ...]
    residue: Complex
    residue_kind: str
    failures: tuple[Simplex, ...] = ()

    def dump(self) -> str:
        return "".join(
            f"COLLAPSE {' '.join(map(str, face))} | {' '.join(map(str, coface))}\n"
            for face, coface in self.steps
        )


def parse_trace(text: str) -> list[tuple[Simplex, Simplex]]:
    steps = []
    for line in text.splitlines():
        if not line.startswith("COLLAPSE "):
            continue
        face, coface = line[len("COLLAPSE "):].split("|")
        steps.append((tuple(map(int, face.split())), tuple(map(int, coface.split()))))
    return steps


def _faces_of(s: Simplex) -> list[Simplex]:
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def _kind(x: Complex) -> str:
    if not x.triangles:
        return GRAPH
    deg: dict[Simplex, int] = defaultdict(int)
    for a, b, c in x.triangles:
        for e in ((a, b), (a, c), (b, c)):
            deg[e] += 1
    covered_v = {v for t in x.triangles for v in t}
    pure = len(deg) == len(x.edges) and len(covered_v) == len(x.vertices)
    if pure and min(deg.values()) >= 2 and not x.tetrahedra:
        return CLOSED
    return MIXED


def _rebuild(x: Complex, removed: set[Simplex], dim_cap: int) -> Complex:
    levels = [tuple(s for s in level if s not in removed) for level in x.simplices]
    while len(levels) > 1 and not levels[-1]:
        levels.pop()
    return Complex(tuple(levels), dim_cap)


def collapse_3_to_2(x: Complex) -> tuple[Complex, CollapseTrace]:
    """Remove every tetrahedron through a free triangle, if possible.

    Passes sweep the surviving tetrahedra in sorted order, each taking its
    smallest free triangle, until a pass makes no progress.  Tetrahedra
    left over have no free face and are reported as failures.
    """
    if x.dim > 3:
        raise ValueError("collapse_3_to_2 needs a complex of dimension at most 3")
    tets = list(x.tetrahedra)
    cofaces: dict[Simplex, int] = defaultdict(int)
    for t in tets:
        for f in _faces_of(t):
            cofaces[f] += 1
    alive = set(tets)
    steps: list[tuple[Simplex, Simplex]] = []
    removed: set[Simplex] = set()
    progress = True
    while alive and progress:
        progress = False
        for t in sorted(alive):
            free = [f for f in _faces_of(t) if cofaces[f] == 1]
            if not free:
                continue
            face = min(free)
            steps.append((face, t))
            removed.update((face, t))
            alive.discard(t)
            for f in _faces_of(t):
                cofaces[f] -= 1
            progress = True
    residue = _rebuild(x, removed, 2 if not alive else x.dim_cap)
    trace = CollapseTrace(tuple(steps), residue, _kind(residue), tuple(sorted(alive)))
    return residue, trace


def collapse_2_cascade(x: Complex) -> CollapseTrace:
    """Collapse (degree-1 edge, triangle) pairs until no free edge is left."""
    if x.tetrahedra:
        raise ValueError("collapse_2_cascade needs a 2-dimensional complex")
    tris_of: dict[Simplex, set[Simplex]] = defaultdict(set)
    for t in x.triangles:
        for e in _faces_of(t):
            tris_of[e].add(t)
    heap = [e for e, ts in tris_of.items() if len(ts) == 1]
    heapq.heapify(heap)
    steps = []
    removed: set[Simplex] = set()
    while heap:
        e = heapq.heappop(heap)
        if e in removed or len(tris_of[e]) != 1:
            continue
        (t,) = tris_of[e]
        steps.append((e, t))
        removed.update((e, t))
        for f in _faces_of(t):
            tris_of[f].discard(t)
            if f != e and len(tris_of[f]) == 1:
                heapq.heappush(heap, f)
    residue = _rebuild(x, removed, 2)
    return CollapseTrace(tuple(steps), residue, _kind(residue))


def replay(x: Complex, steps: Sequence[tuple[Simplex, Simplex]]) -> Iterator[Complex]:
    """Yield the complex after each step, checking every step is a free collapse."""
    faces = {s for level in x.simplices for s in level}
    cap = x.dim_cap
    for face, coface in steps:
        if face not in faces or coface not in faces or face not in _faces_of(coface):
            raise ValueError(f"step {face} -> {coface} does not match the complex")
        holders = [s for s in faces if len(s) == len(face) + 1 and set(face) < set(s)]
        if holders != [coface]:
            raise ValueError(f"{face} is not free: cofaces {holders}")
        faces -= {face, coface}
        yield Complex.from_simplices(sorted(faces), dim_cap=cap) if faces else Complex.empty()


# --------------------------------------------------------------------------
# S1 / S2 containment and the certificate


def sphere_patterns(x: Complex) -> tuple[tuple[int, ...] | None, tuple[int, ...] | None]:
    """Find a tetrahedron boundary (S1) and a 5-vertex bipyramid (S2) in ``x``.

    Both are cones over a 3-cycle abc: S1 a single apex with abc a
    triangle, S2 two apices.  Returns witness vertex tuples or ``None``.
    """
    tri_set = set(x.triangles)
    apices: dict[Simplex, list[int]] = defaultdict(list)
    link_edges: dict[int, set[Simplex]] = defaultdict(set)
    for a, b, c in x.triangles:
        link_edges[a].add((b, c))
        link_edges[b].add((a, c))
        link_edges[c].add((a, b))
    for w, edges in link_edges.items():
        nbr: dict[int, set[int]] = defaultdict(set)
        for p, q in edges:
            nbr[p].add(q)
            nbr[q].add(p)
        for p, q in edges:
            for r in nbr[p] & nbr[q]:
                if r > q:
                    apices[(p, q, r)].append(w)
    s1 = s2 = None
    for cyc in sorted(apices):
        ws = sorted(apices[cyc])
        if s1 is None and cyc in tri_set:
            s1 = tuple(sorted(cyc + (ws[0],)))
        if s2 is None and len(ws) >= 2:
            s2 = cyc + (ws[0], ws[1])
        if s1 and s2:
            break
    return s1, s2


@dataclass(frozen=True)
class FreenessCertificate:
    """Outcome of both collapse phases.

    ``kind`` is ``collapsed_to_graph`` (free fundamental group of rank
    ``free_rank``), ``residual_closed_part`` or ``obstructed`` (a
    tetrahedron without free face, or dimension above 3).
    """

    kind: str
    free_rank: int | None
    phase3: CollapseTrace | None
    phase2: CollapseTrace | None
    closed_report: DensityReport | None = None
    contains_s1: tuple[int, ...] | None = None
    contains_s2: tuple[int, ...] | None = None
    corollary_holds: bool = True

    @property
    def collapsed(self) -> bool:
        return self.kind == "collapsed_to_graph"


def freeness_certificate(x: Complex) -> FreenessCertificate:
    if x.dim > 3 or x.truncated:
        return FreenessCertificate("obstructed", None, None, None)
    phase3 = None
    two = x
    if x.dim == 3:
        two, phase3 = collapse_3_to_2(x)
        if phase3.failures:
            return FreenessCertificate("obstructed", None, phase3, None)
    phase2 = collapse_2_cascade(two)
    residue = phase2.residue
    if phase2.residue_kind == GRAPH:
        return FreenessCertificate("collapsed_to_graph", graph_betti1(residue), phase3, phase2)
    closed = pure_part(residue)
    report = density_report(closed)
    s1, s2 = sphere_patterns(closed)
    holds = not (report.nu_tilde > Fraction(1, 2)) or bool(s1 or s2)
    return FreenessCertificate(
        "residual_closed_part", None, phase3, phase2, report, s1, s2, holds
    )
