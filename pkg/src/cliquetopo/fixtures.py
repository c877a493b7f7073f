"""Deterministic test complexes: discs, surfaces and the special 2-cycles.

Every generator output passes its declared validators before it is
returned.  Triangulations taken from outside (the 11-vertex projective
plane, the 7-vertex torus) are checked the same way as generated ones.
The shipped ``.cx`` files under ``data/fixtures/v1`` are regenerated by
:func:`write_all` and re-validated on load.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .collapse import collapse_2_cascade
from .complex import (
    Complex,
    Simplex,
    barycentric_subdivision,
    edge_degrees,
    euler_characteristic,
    graph_betti1,
    is_clean,
    is_closed_surface,
    is_strongly_connected,
)
from .graph import max_density_subgraph
from .homology import GF2, Q, betti, boundary_gf2, rank_gf2

FIXTURE_VERSION = "v1"


class FixtureError(ValueError):
    """A generated or loaded complex failed a validator."""


def _tris(faces: Iterable[Sequence[int]]) -> Complex:
    return Complex.from_simplices(faces, dim_cap=2)


def relabel_dense(x: Complex) -> Complex:
    """Relabel vertices to 0..v-1 in sorted order."""
    return x.relabel({v: i for i, v in enumerate(x.vertices)})


# --------------------------------------------------------------------------
# validators


def _betti_is(field_name: str, expected: tuple[int, ...]) -> Callable[[Complex], bool]:
    def check(x: Complex) -> bool:
        return tuple(betti(x, field_name).b) == expected

    check.__name__ = f"betti_{field_name}_{''.join(map(str, expected))}"
    return check


def _is_disc(x: Complex) -> bool:
    deg = edge_degrees(x)
    v, e = len(x.vertices), len(x.edges)
    boundary = [s for s, d in deg.items() if d == 1]
    v_int = v - len({u for s in boundary for u in s})
    residue = collapse_2_cascade(x).residue
    tree = not residue.triangles and graph_betti1(residue) == 0
    return (
        all(d in (1, 2) for d in deg.values())
        and e == 2 * v + v_int - 3
        and tree
        and tuple(betti(x, Q).b) == (1, 0, 0)
    )


VALIDATORS: dict[str, Callable[[Complex], bool]] = {
    "clean": is_clean,
    "closed_surface": is_closed_surface,
    "strongly_connected": is_strongly_connected,
    "disc": _is_disc,
    "sphere_gf2": _betti_is(GF2, (1, 0, 1)),
    "sphere_q": _betti_is(Q, (1, 0, 1)),
    "p2_gf2": _betti_is(GF2, (1, 1, 1)),
    "p2_q": _betti_is(Q, (1, 0, 0)),
    "torus_gf2": _betti_is(GF2, (1, 2, 1)),
    "torus_q": _betti_is(Q, (1, 2, 1)),
    "klein_q": _betti_is(Q, (1, 1, 0)),
    "genus2_q": _betti_is(Q, (1, 4, 1)),
    "one_q_cycle": lambda x: betti(x, Q)[2] == 1,
}


def validate(x: Complex, predicates: Iterable[str], name: str = "complex") -> Complex:
    for pred in predicates:
        if not VALIDATORS[pred](x):
            raise FixtureError(f"{name} fails validator {pred}")
    return x


# --------------------------------------------------------------------------
# discs


def generate_disc(r: int, boundary: int = 4) -> Complex:
    """Clean disc with ``r`` interior vertices on a path.

    Boundary square a=0, b=1, c=2, d=3 and interior path w_1..w_r; every
    w_i is joined to b and d, w_1 to a and w_r to c, so e = 3r + 5.  With
    r = 0 the square is split by the diagonal ac.  ``boundary=3`` allows
    only r = 0 (a single triangle): any disc on a 3-cycle with interior
    vertices leaves that 3-cycle unfilled.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if boundary == 3:
        if r:
            raise ValueError("a clean disc on a 3-cycle has no interior vertices")
        return validate(_tris([(0, 1, 2)]), ("disc", "clean"), "disc")
    if boundary != 4:
        raise ValueError("boundary must be 3 or 4")
    a, b, c, d = 0, 1, 2, 3
    if r == 0:
        faces = [(a, b, c), (a, c, d)]
    else:
        w = list(range(4, 4 + r))
        faces = [(a, b, w[0]), (a, d, w[0]), (w[-1], b, c), (w[-1], c, d)]
        for x, y in zip(w, w[1:]):
            faces += [(x, y, b), (x, y, d)]
    return validate(_tris(faces), ("disc", "clean"), "disc")


def random_disc(seed: int, steps: int) -> Complex:
    """Random triangulated disc grown by ear additions and ear closures."""
    rng = random.Random(seed)
    faces = [(0, 1, 2)]
    boundary = [0, 1, 2]
    edges = {(0, 1), (0, 2), (1, 2)}
    nxt = 3
    for _ in range(steps):
        k = len(boundary)
        i = rng.randrange(k)
        x, y = boundary[i], boundary[(i + 1) % k]
        z = boundary[(i + 2) % k]
        close = k > 3 and rng.random() < 0.4 and tuple(sorted((x, z))) not in edges
        if close:
            faces.append((x, y, z))
            edges.add(tuple(sorted((x, z))))
            boundary.pop((i + 1) % k)
        else:
            faces.append((x, y, nxt))
            edges.update({tuple(sorted((x, nxt))), tuple(sorted((y, nxt)))})
            boundary.insert(i + 1, nxt)
            nxt += 1
    return validate(_tris(faces), ("disc",), "random disc")


def annulus(length: int = 6) -> Complex:
    """Two concentric ``length``-cycles joined by a zigzag of triangles."""
    faces = []
    for i in range(length):
        j = (i + 1) % length
        faces += [(i, j, length + i), (j, length + i, length + j)]
    return _tris(faces)


# --------------------------------------------------------------------------
# surfaces


def tetrahedron_boundary() -> Complex:
    return validate(_tris(combinations(range(4), 3)), ("closed_surface", "sphere_gf2", "clean"), "S1")


def bipyramid() -> Complex:
    """Five-vertex sphere: two cones over the 3-cycle 0-1-2."""
    faces = [(0, 1, 3), (1, 2, 3), (0, 2, 3), (0, 1, 4), (1, 2, 4), (0, 2, 4)]
    return validate(_tris(faces), ("closed_surface", "sphere_gf2"), "S2")


def octahedron() -> Complex:
    faces = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    return validate(_tris(faces), ("closed_surface", "sphere_gf2", "clean"), "octahedron")


def icosahedron() -> Complex:
    faces = []
    for i in range(5):
        u, u2 = 1 + i, 1 + (i + 1) % 5
        lo, lo2 = 6 + i, 6 + (i + 1) % 5
        faces += [(0, u, u2), (u, u2, lo), (u2, lo, lo2), (11, lo, lo2)]
    return validate(_tris(faces), ("closed_surface", "sphere_gf2", "clean"), "icosahedron")


RP2_6 = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
         (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]

# An 11-vertex flag triangulation of the projective plane, obtained from the
# 6-vertex one by edge subdivisions and flips.
RP2_11 = [(1, 4, 7), (1, 4, 9), (1, 7, 8), (1, 8, 11), (1, 9, 11), (2, 5, 6), (2, 5, 8),
          (2, 6, 11), (2, 8, 11), (3, 5, 8), (3, 5, 9), (3, 7, 8), (3, 7, 10), (3, 9, 10),
          (4, 5, 6), (4, 5, 9), (4, 6, 7), (6, 7, 10), (6, 10, 11), (9, 10, 11)]


def projective_plane_6() -> Complex:
    x = relabel_dense(_tris(RP2_6))
    return validate(x, ("closed_surface", "p2_gf2", "p2_q"), "RP2_6")


def projective_plane_clean() -> Complex:
    x = relabel_dense(_tris(RP2_11))
    validate(x, ("closed_surface", "p2_gf2", "p2_q", "clean"), "RP2_11")
    if x.f_vector != (11, 30, 20):
        raise FixtureError(f"RP2_11 has f-vector {x.f_vector}")
    return x


def torus_7() -> Complex:
    faces = []
    for i in range(7):
        faces += [(i, (i + 1) % 7, (i + 3) % 7), (i, (i + 2) % 7, (i + 3) % 7)]
    return validate(_tris(faces), ("closed_surface", "torus_gf2", "torus_q"), "T7")


def _grid(rows: int, cols: int, twist: bool) -> list[Simplex]:
    def vid(i: int, j: int) -> int:
        if i >= rows:
            i -= rows
            if twist:
                j = -j
        return i * cols + j % cols

    faces = []
    for i in range(rows):
        for j in range(cols):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i, j + 1), vid(i + 1, j + 1)
            faces += [(a, b, d), (a, c, d)]
    return faces


def torus_grid(rows: int = 4, cols: int = 4) -> Complex:
    x = _tris(_grid(rows, cols, False))
    return validate(x, ("closed_surface", "torus_gf2", "torus_q", "clean"), "torus grid")


def klein_grid(rows: int = 4, cols: int = 4) -> Complex:
    x = _tris(_grid(rows, cols, True))
    return validate(x, ("closed_surface", "torus_gf2", "klein_q", "clean"), "Klein grid")


def genus_surface(g: int) -> Complex:
    """Chain of ``g`` 7-vertex tori joined by connected sums.

    Each copy is glued along its triangle (0, 1, 3) onto the previous
    copy's triangle (2, 4, 5); the two are vertex-disjoint in the torus.
    """
    if g < 1:
        raise ValueError("genus must be at least 1")
    t7 = torus_7().triangles
    faces = list(t7)
    spare: Simplex = (2, 4, 5)
    nxt = 7
    for _ in range(1, g):
        faces.remove(spare)
        mapping = dict(zip((0, 1, 3), spare))
        for v in (2, 4, 5, 6):
            mapping[v] = nxt
            nxt += 1
        faces += [tuple(sorted(mapping[v] for v in t)) for t in t7 if t != (0, 1, 3)]
        spare = tuple(sorted(mapping[v] for v in (2, 4, 5)))
    x = _tris(faces)
    return validate(x, ("closed_surface",), f"genus {g}") if betti(x, Q).b == (1, 2 * g, 1) else _fail(g)


def _fail(g: int) -> Complex:
    raise FixtureError(f"genus {g} surface has wrong homology")


def clean_genus_surface(g: int) -> Complex:
    x = barycentric_subdivision(genus_surface(g))
    return validate(x, ("closed_surface", "clean"), f"clean genus {g}")


def surface_with_degree3_vertex(g: int = 2) -> Complex:
    """Clean genus-g surface with one triangle stellarly subdivided.

    The new vertex has degree 3, so deleting it raises the vertex/edge
    ratio and the 1-skeleton stops being balanced.
    """
    x = clean_genus_surface(g)
    t = x.triangles[0]
    w = max(x.vertices) + 1
    faces = [s for s in x.triangles if s != t]
    a, b, c = t
    faces += [(a, b, w), (a, c, w), (b, c, w)]
    return validate(_tris(faces), ("closed_surface",), "stellar surface")


def generate_surface(kind: str, clean: bool = True) -> Complex:
    """Named surface fixture.

    ``kind`` is sphere, torus, projective_plane, klein or genus_<g>.
    ``clean=False`` selects the small non-flag models where they differ.
    """
    if kind == "sphere":
        return tetrahedron_boundary()
    if kind == "torus":
        return torus_grid() if clean else torus_7()
    if kind == "projective_plane":
        return projective_plane_clean() if clean else projective_plane_6()
    if kind == "klein":
        return klein_grid()
    if kind.startswith("genus_"):
        g = int(kind.split("_", 1)[1])
        return clean_genus_surface(g) if clean else genus_surface(g)
    raise ValueError(f"unknown surface kind {kind!r}")


# --------------------------------------------------------------------------
# Remark construction: a clean non-balanced surface


@dataclass(frozen=True)
class UnbalancedSurface:
    complex: Complex
    r: int
    removed_edge: Simplex
    nu_cut: Fraction
    nu_glued: Fraction
    crossover_bound: Fraction
    balanced: bool
    note: str = ""


def _cut_edge(s: Complex) -> tuple[Simplex, Simplex, Simplex]:
    """First edge whose two opposite vertices are non-adjacent."""
    edges = set(s.edges)
    apex: dict[Simplex, list[int]] = {}
    for a, b, c in s.triangles:
        for e, o in (((a, b), c), ((a, c), b), ((b, c), a)):
            apex.setdefault(e, []).append(o)
    for e in s.edges:
        c, d = apex[e]
        if tuple(sorted((c, d))) not in edges:
            return e, (c,), (d,)
    raise FixtureError("no edge with non-adjacent opposite vertices")


def generate_unbalanced_clean_surface(g: int, r: int) -> UnbalancedSurface:
    """Cut an edge and its two faces from a clean genus-g surface, glue a disc.

    The disc from :func:`generate_disc` with ``r`` interior vertices is
    glued along the square left by the cut with its corners a, c on the
    cut edge's ends, so the disc never puts that edge back.  The glued
    complex stops being balanced once r exceeds v/(-3 chi - 1).
    """
    if g < 2:
        raise ValueError("needs a surface with negative Euler characteristic")
    s = clean_genus_surface(g)
    (p, q), (c,), (d,) = _cut_edge(s)
    x_faces = [t for t in s.triangles if not {p, q} <= set(t)]
    disc = generate_disc(r)
    off = max(s.vertices) + 1
    corner = {0: p, 1: c, 2: q, 3: d}
    mapping = {v: corner.get(v, v - 4 + off) for v in disc.vertices}
    faces = x_faces + [tuple(mapping[v] for v in t) for t in disc.triangles]
    glued = _tris(faces)
    v, e = len(s.vertices), len(s.edges)
    chi = euler_characteristic(s)
    bound = Fraction(v, -3 * chi - 1)
    res = max_density_subgraph(glued.one_skeleton()[0], check_strict=False)
    validate(glued, ("clean", "closed_surface"), "glued surface")
    note = "" if not res.balanced else "still balanced at this r"
    return UnbalancedSurface(
        glued, r, (p, q), Fraction(v, e - 1), Fraction(len(glued.vertices), len(glued.edges)),
        bound, res.balanced, note,
    )


def unbalanced_crossover(g: int = 2, r_max: int | None = None) -> int:
    """Smallest r at which the glued surface is certified non-balanced."""
    s = clean_genus_surface(g)
    bound = Fraction(len(s.vertices), -3 * euler_characteristic(s) - 1)
    limit = r_max if r_max is not None else int(bound) + 2
    for r in range(limit + 1):
        if not generate_unbalanced_clean_surface(g, r).balanced:
            return r
    raise FixtureError(f"no crossover up to r = {limit}")


# --------------------------------------------------------------------------
# special 2-cycles


def _homologically_nontrivial_gf2(x: Complex, cycle: Sequence[int]) -> bool:
    idx = x.index[1]
    vec = 0
    for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        vec ^= 1 << idx[tuple(sorted((a, b)))]
    cols = boundary_gf2(x, 2)
    return rank_gf2(cols + [vec]) > rank_gf2(cols)


def _cycles(x: Complex, length: int) -> Iterable[tuple[int, ...]]:
    g, labels = x.one_skeleton()
    for start in range(g.n):
        def extend(path):
            if len(path) == length:
                if g.has_edge(path[-1], path[0]) and path[1] < path[-1]:
                    yield tuple(labels[v] for v in path)
                return
            for w in g.neighbors(path[-1]):
                if w > start and w not in path:
                    yield from extend(path + [w])

        yield from extend([start])


def noncontractible_cycle(x: Complex, length: int) -> tuple[int, ...]:
    """First cycle of ``length`` that is non-zero in GF(2) homology."""
    for cyc in _cycles(x, length):
        if _homologically_nontrivial_gf2(x, cyc):
            return cyc
    raise FixtureError(f"no non-contractible {length}-cycle")


def cone_on(x: Complex, cycle: Sequence[int]) -> Complex:
    w = max(x.vertices) + 1
    faces = list(x.triangles)
    faces += [(a, b, w) for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]])]
    return _tris(faces)


def p2_union_disc(length: int = 3) -> Complex:
    """Projective plane with a cone glued on a non-contractible ``length``-cycle.

    Length 3 uses the 6-vertex plane (L = -3); lengths 4 and 5 use the
    11-vertex flag plane (L = -4, -5).
    """
    base = projective_plane_6() if length == 3 else projective_plane_clean()
    x = cone_on(base, noncontractible_cycle(base, length))
    validate(x, ("one_q_cycle", "strongly_connected"), "P2 union disc")
    if 2 * len(x.edges) - 3 * len(x.triangles) != -length:
        raise FixtureError("P2 union disc has the wrong L")
    return x


def identify_vertices(x: Complex, keep: int, drop: int) -> Complex:
    faces = [tuple(keep if v == drop else v for v in t) for t in x.triangles]
    if any(len(set(t)) < 3 for t in faces) or len({tuple(sorted(t)) for t in faces}) != len(faces):
        raise FixtureError("identification collapses a triangle")
    return relabel_dense(_tris(faces))


def _common(x: Complex, a: int, b: int) -> set[int]:
    g, labels = x.one_skeleton()
    pos = {v: i for i, v in enumerate(labels)}
    return {labels[i] for i in range(g.n) if g.has_edge(i, pos[a]) and g.has_edge(i, pos[b])}


def _single_common_pair(x: Complex, candidates: Iterable[tuple[int, int]]) -> tuple[int, int]:
    edges = set(x.edges)
    for a, b in candidates:
        if (a, b) not in edges and len(_common(x, a, b)) == 1:
            return a, b
    raise FixtureError("no vertex pair with exactly one common neighbour")


def p2_quotient() -> Complex:
    """A projective plane with two adjacent edges a-b, b-c identified.

    The 11-vertex flag plane has no vertex pair sharing exactly one
    neighbour, so the model starts from the barycentric subdivision of the
    6-vertex plane.
    """
    x = relabel_dense(barycentric_subdivision(projective_plane_6()))
    a, c = _single_common_pair(x, combinations(x.vertices, 2))
    y = identify_vertices(x, a, c)
    validate(y, ("p2_gf2", "p2_q", "strongly_connected"), "P2 quotient")
    if (len(y.vertices), len(y.edges), len(y.triangles)) != (
        len(x.vertices) - 1, len(x.edges) - 1, len(x.triangles)
    ):
        raise FixtureError("P2 quotient has the wrong counts")
    return y


def projective_plane_7() -> Complex:
    """6-vertex plane with the edge 1-2 subdivided (vertex 7)."""
    faces = [t for t in RP2_6 if not {1, 2} <= set(t)]
    faces += [(1, 7, 3), (7, 2, 3), (1, 6, 7), (7, 6, 2)]
    x = relabel_dense(_tris(faces))
    return validate(x, ("closed_surface", "p2_gf2", "p2_q"), "RP2_7")


def p2_union_disc_quotient() -> Complex:
    """P2 union a cone on a 3-cycle, then the apex merged with a vertex.

    The apex and the merged vertex share one neighbour, so two adjacent
    edges fold into one edge of degree 4 and L drops from -3 to -5.  The
    first non-contractible 3-cycle admitting such a vertex is used.
    """
    base = projective_plane_7()
    for cyc in _cycles(base, 3):
        if not _homologically_nontrivial_gf2(base, cyc):
            continue
        x = cone_on(base, cyc)
        apex = max(x.vertices)
        try:
            keep, drop = _single_common_pair(x, ((v, apex) for v in x.vertices if v != apex))
        except FixtureError:
            continue
        y = identify_vertices(x, keep, drop)
        validate(y, ("one_q_cycle", "strongly_connected"), "P2 union disc quotient")
        if 2 * len(y.edges) - 3 * len(y.triangles) != -5 or max(edge_degrees(y).values()) < 4:
            raise FixtureError("quotient does not have L = -5 with a degree-4 edge")
        return y
    raise FixtureError("no 3-cycle admits the quotient")


def pinched_sphere() -> Complex:
    """Icosahedron with two antipodal vertices identified (S2 wedge S1)."""
    y = identify_vertices(icosahedron(), 0, 11)
    return validate(y, ("one_q_cycle", "p2_gf2"), "pinched sphere")


def wedge_of_spheres() -> Complex:
    faces = list(combinations(range(4), 3)) + list(combinations((0, 4, 5, 6), 3))
    return _tris(faces)


def sphere_with_flap() -> Complex:
    return _tris(list(combinations(range(4), 3)) + [(0, 1, 4)])


# --------------------------------------------------------------------------
# registry and files


@dataclass(frozen=True)
class FixtureSpec:
    name: str
    build: Callable[[], Complex]
    predicates: tuple[str, ...] = ()
    params: dict = field(default_factory=dict)


FIXTURES: dict[str, FixtureSpec] = {
    spec.name: spec
    for spec in (
        FixtureSpec("tetrahedron_boundary", tetrahedron_boundary, ("closed_surface", "sphere_gf2", "clean")),
        FixtureSpec("bipyramid", bipyramid, ("closed_surface", "sphere_gf2")),
        FixtureSpec("octahedron", octahedron, ("closed_surface", "sphere_gf2", "clean")),
        FixtureSpec("icosahedron", icosahedron, ("closed_surface", "sphere_gf2", "clean")),
        FixtureSpec("rp2_6", projective_plane_6, ("closed_surface", "p2_gf2", "p2_q")),
        FixtureSpec("rp2_11", projective_plane_clean, ("closed_surface", "p2_gf2", "p2_q", "clean")),
        FixtureSpec("torus_7", torus_7, ("closed_surface", "torus_gf2", "torus_q")),
        FixtureSpec("torus_grid", torus_grid, ("closed_surface", "torus_q", "clean")),
        FixtureSpec("klein_grid", klein_grid, ("closed_surface", "klein_q", "clean")),
        FixtureSpec("genus_2", lambda: genus_surface(2), ("closed_surface", "genus2_q"), {"g": 2}),
        FixtureSpec("genus_2_clean", lambda: clean_genus_surface(2), ("closed_surface", "genus2_q", "clean"), {"g": 2}),
        FixtureSpec("disc_r0", lambda: generate_disc(0), ("disc", "clean"), {"r": 0}),
        FixtureSpec("disc_r1", lambda: generate_disc(1), ("disc", "clean"), {"r": 1}),
        FixtureSpec("disc_r5", lambda: generate_disc(5), ("disc", "clean"), {"r": 5}),
        FixtureSpec("annulus", annulus, ()),
        FixtureSpec("p2_disc_3", lambda: p2_union_disc(3), ("one_q_cycle",), {"length": 3}),
        FixtureSpec("p2_disc_4", lambda: p2_union_disc(4), ("one_q_cycle",), {"length": 4}),
        FixtureSpec("p2_disc_5", lambda: p2_union_disc(5), ("one_q_cycle",), {"length": 5}),
        FixtureSpec("p2_disc_quotient", p2_union_disc_quotient, ("one_q_cycle",)),
        FixtureSpec("p2_quotient", p2_quotient, ("p2_gf2", "p2_q")),
        FixtureSpec("pinched_sphere", pinched_sphere, ("one_q_cycle",)),
        FixtureSpec("wedge_of_spheres", wedge_of_spheres, ()),
        FixtureSpec("sphere_with_flap", sphere_with_flap, ()),
        FixtureSpec("stellar_genus_2", surface_with_degree3_vertex, ("closed_surface",)),
    )
}


def build(name: str) -> Complex:
    spec = FIXTURES[name]
    return validate(spec.build(), spec.predicates, name)


def fixture_dir() -> Path:
    return Path(str(resources.files("cliquetopo") / "data" / "fixtures" / FIXTURE_VERSION))


def write_all(directory: Path | None = None) -> list[Path]:
    out = directory or fixture_dir()
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in FIXTURES:
        path = out / f"{name}.cx"
        path.write_text(build(name).to_text())
        paths.append(path)
    return paths


def load(name: str, directory: Path | None = None) -> Complex:
    """Read a shipped fixture and re-run its validators."""
    path = (directory or fixture_dir()) / f"{name}.cx"
    x = Complex.from_text(path.read_text())
    return validate(x, FIXTURES[name].predicates, name)
