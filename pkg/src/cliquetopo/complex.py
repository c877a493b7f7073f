"""Simplicial complexes and their combinatorial invariants.

A :class:`Complex` stores one sorted tuple of simplices per dimension.
Every simplex is a strictly increasing tuple of integer labels and the
lists are downward closed.  Clique complexes come from
:func:`clique_complex`; fixtures and patterns are built with
:meth:`Complex.from_simplices`.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .graph import EdgelessGraphError, Graph, _max_density, iter_bits

Simplex = tuple[int, ...]

SECTION_NAMES = ("vertices", "edges", "triangles", "tetrahedra", "4-simplices", "5-simplices")
MAX_DIM = 5


class ComplexError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Complex:
    """Finite simplicial complex; ``simplices[k]`` lists the k-simplices.

    ``dim_cap`` is the largest dimension retained.  ``truncated`` records
    that the source had simplices above the cap (clique complexes only).
    """

    simplices: tuple[tuple[Simplex, ...], ...]
    dim_cap: int = 2
    truncated: bool = False

    # construction ------------------------------------------------------

    @classmethod
    def from_simplices(cls, faces: Iterable[Sequence[int]], dim_cap: int | None = None) -> "Complex":
        """Downward closure of ``faces``."""
        levels: list[set[Simplex]] = [set() for _ in range(MAX_DIM + 1)]
        for face in faces:
            s = tuple(sorted(face))
            if len(set(s)) != len(s):
                raise ComplexError(f"repeated vertex in {face}")
            if not s:
                continue
            if len(s) - 1 > MAX_DIM:
                raise ComplexError(f"dimension above {MAX_DIM}: {face}")
            levels[len(s) - 1].add(s)
        top = max((k for k in range(MAX_DIM + 1) if levels[k]), default=0)
        for k in range(top, 0, -1):
            for s in levels[k]:
                for i in range(k + 1):
                    levels[k - 1].add(s[:i] + s[i + 1:])
        cap = top if dim_cap is None else dim_cap
        if top > cap:
            raise ComplexError(f"faces of dimension {top} exceed dim_cap {cap}")
        return cls(tuple(tuple(sorted(levels[k])) for k in range(top + 1)), max(cap, 0))

    @classmethod
    def empty(cls) -> "Complex":
        return cls(((),), 0)

    # basic access --------------------------------------------------------

    def faces(self, k: int) -> tuple[Simplex, ...]:
        return self.simplices[k] if 0 <= k < len(self.simplices) else ()

    @property
    def vertices(self) -> list[int]:
        return [s[0] for s in self.faces(0)]

    @property
    def edges(self) -> tuple[Simplex, ...]:
        return self.faces(1)

    @property
    def triangles(self) -> tuple[Simplex, ...]:
        return self.faces(2)

    @property
    def tetrahedra(self) -> tuple[Simplex, ...]:
        return self.faces(3)

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.simplices)

    @property
    def dim(self) -> int:
        """Largest k with a k-simplex (-1 for the empty complex)."""
        for k in range(len(self.simplices) - 1, -1, -1):
            if self.simplices[k]:
                return k
        return -1

    @cached_property
    def face_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(level) for level in self.simplices)

    @cached_property
    def index(self) -> tuple[dict, ...]:
        return tuple({s: i for i, s in enumerate(level)} for level in self.simplices)

    def contains(self, simplex: Sequence[int]) -> bool:
        s = tuple(sorted(simplex))
        k = len(s) - 1
        return 0 <= k < len(self.simplices) and s in self.face_sets[k]

    # derived complexes ---------------------------------------------------

    def skeleton(self, k: int) -> "Complex":
        levels = self.simplices[: k + 1]
        return Complex(tuple(levels), min(self.dim_cap, k), self.truncated and k >= self.dim_cap)

    def with_triangles(self, triangles: Iterable[Simplex], keep_graph: bool = True) -> "Complex":
        """2-complex on this 1-skeleton (or the closure of ``triangles``)."""
        tris = tuple(sorted(set(triangles)))
        if keep_graph:
            return Complex((self.faces(0), self.faces(1), tris), 2)
        return Complex.from_simplices(tris, dim_cap=2) if tris else Complex.empty()

    def relabel(self, mapping: dict[int, int]) -> "Complex":
        faces = [tuple(mapping[v] for v in s) for level in self.simplices for s in level]
        return Complex.from_simplices(faces, dim_cap=self.dim_cap)

    def one_skeleton(self) -> tuple[Graph, list[int]]:
        """1-skeleton as a :class:`Graph` on ``0..v-1`` plus the label list."""
        labels = self.vertices
        pos = {v: i for i, v in enumerate(labels)}
        return Graph.from_edges(len(labels), ((pos[a], pos[b]) for a, b in self.edges)), labels

    def __repr__(self) -> str:
        return f"Complex(f={self.f_vector}, dim_cap={self.dim_cap})"

    def same_as(self, other: "Complex") -> bool:
        k = max(len(self.simplices), len(other.simplices))
        return all(set(self.faces(i)) == set(other.faces(i)) for i in range(k))

    # serialization -------------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for k in range(max(len(self.simplices), 4)):
            lines.append(SECTION_NAMES[k])
            lines.extend(" ".join(map(str, s)) for s in self.faces(k))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Complex":
        sections: dict[str, list[Simplex]] = {name: [] for name in SECTION_NAMES}
        current = None
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line in sections:
                current = line
                continue
            if current is None:
                raise ComplexError(f"simplex before any section header: {line!r}")
            s = tuple(int(t) for t in line.split())
            k = SECTION_NAMES.index(current)
            if len(s) != k + 1:
                raise ComplexError(f"section {current} expects {k + 1} labels, got {line!r}")
            sections[current].append(s)
        faces = [s for name in SECTION_NAMES for s in sections[name]]
        top = max((k for k, name in enumerate(SECTION_NAMES) if sections[name]), default=0)
        x = cls.from_simplices(faces, dim_cap=max(top, 2) if top >= 2 else top)
        for k, name in enumerate(SECTION_NAMES):
            listed = sections[name]
            if sorted(set(listed)) != list(x.faces(k)):
                raise ComplexError(f"section {name} is not downward closed or has duplicates")
        return x


def check_downward_closed(x: Complex) -> bool:
    for k in range(1, len(x.simplices)):
        lower = x.face_sets[k - 1]
        for s in x.simplices[k]:
            if any(s[:i] + s[i + 1:] not in lower for i in range(k + 1)):
                return False
    return all(
        all(len(s) == k + 1 and all(a < b for a, b in zip(s, s[1:])) for s in level)
        and list(level) == sorted(set(level))
        for k, level in enumerate(x.simplices)
    )


# --------------------------------------------------------------------------
# clique complexes


def clique_complex(g: Graph, dim_cap: int = 3) -> Complex:
    """All cliques of ``g`` with at most ``dim_cap + 1`` vertices.

    Cliques are grown from their smallest vertex through the bitset of
    higher neighbours, so each is produced once.  Whether a larger clique
    exists is answered by an existence query without enumerating it.
    """
    if not 1 <= dim_cap <= MAX_DIM:
        raise ComplexError(f"dim_cap must be in 1..{MAX_DIM}")
    levels: list[list[Simplex]] = [[] for _ in range(dim_cap + 1)]
    levels[0] = [(v,) for v in range(g.n)]
    higher = [row >> (v + 1) << (v + 1) for v, row in enumerate(g.adjacency)]
    adj = g.adjacency
    truncated = False

    def grow(clique: Simplex, cand: int) -> None:
        nonlocal truncated
        k = len(clique) - 1
        if k == dim_cap:
            if cand and not truncated:
                truncated = True
            return
        for w in iter_bits(cand):
            s = clique + (w,)
            levels[k + 1].append(s)
            grow(s, cand & higher[w])

    for v in range(g.n):
        grow((v,), higher[v])
    return Complex(tuple(tuple(sorted(level)) for level in levels), dim_cap, truncated)


def has_clique(g: Graph, size: int) -> bool:
    """Existence query for a clique on ``size`` vertices."""
    higher = [row >> (v + 1) << (v + 1) for v, row in enumerate(g.adjacency)]

    def search(cand: int, need: int) -> bool:
        if need == 0:
            return True
        if cand.bit_count() < need:
            return False
        for w in iter_bits(cand):
            if search(cand & higher[w], need - 1):
                return True
        return False

    return search((1 << g.n) - 1, size)


def dimension(x: Complex) -> int:
    return x.dim


def clique_dimension(g: Graph, dim_cap: int) -> tuple[int, bool]:
    """(dimension capped at ``dim_cap``, whether a larger clique exists)."""
    if g.n == 0:
        return -1, False
    d = 0
    while d < dim_cap and has_clique(g, d + 2):
        d += 1
    return d, d == dim_cap and has_clique(g, dim_cap + 2)


# --------------------------------------------------------------------------
# 2-complex invariants


def euler_characteristic(x: Complex, up_to: int | None = None) -> int:
    top = len(x.simplices) - 1 if up_to is None else min(up_to, len(x.simplices) - 1)
    return sum((-1) ** k * len(x.simplices[k]) for k in range(top + 1))


def edge_degrees(x: Complex) -> dict[Simplex, int]:
    deg = {e: 0 for e in x.edges}
    for a, b, c in x.triangles:
        deg[(a, b)] += 1
        deg[(a, c)] += 1
        deg[(b, c)] += 1
    return deg


@dataclass(frozen=True)
class DensityReport:
    v: int
    e: int
    f: int
    chi: int
    chi2: int
    L: int
    nu: Fraction | None
    nu_tilde: Fraction | float
    boundary_edges: tuple[Simplex, ...]
    closed: bool
    witness: tuple[int, ...] = ()


def density_report(x: Complex) -> DensityReport:
    """Counts, Euler characteristics, L = 2e - 3f, nu and nu-tilde.

    ``nu`` is ``None`` for an edgeless complex and ``nu_tilde`` is then
    ``math.inf``.
    """
    v, e, f = len(x.faces(0)), len(x.faces(1)), len(x.faces(2))
    deg = edge_degrees(x)
    boundary = tuple(s for s, d in deg.items() if d == 1)
    if e == 0:
        nu = None
        nt: Fraction | float = math.inf
        witness: tuple[int, ...] = ()
    else:
        nu = Fraction(v, e)
        g, labels = x.one_skeleton()
        dens, mask = _max_density(g)
        nt = 1 / dens
        witness = tuple(labels[i] for i in iter_bits(mask))
    return DensityReport(
        v=v,
        e=e,
        f=f,
        chi=euler_characteristic(x),
        chi2=euler_characteristic(x, 2),
        L=2 * e - 3 * f,
        nu=nu,
        nu_tilde=nt,
        boundary_edges=boundary,
        closed=not boundary,
        witness=witness,
    )


def nu(x: Complex) -> Fraction:
    if not x.edges:
        raise EdgelessGraphError("nu undefined without edges")
    return Fraction(len(x.faces(0)), len(x.edges))


def nu_tilde(x: Complex) -> Fraction | float:
    if not x.edges:
        return math.inf
    g, _ = x.one_skeleton()
    return 1 / _max_density(g)[0]


def nu_identity_rhs(x: Complex) -> Fraction:
    """1/3 + (3*chi_2 + L) / (3e), evaluated exactly."""
    e, f = len(x.edges), len(x.triangles)
    chi2 = euler_characteristic(x, 2)
    return Fraction(1, 3) + Fraction(3 * chi2 + 2 * e - 3 * f, 3 * e)


def is_clean(x: Complex) -> bool:
    """Every 3-clique of the 1-skeleton spans a triangle of ``x``."""
    g, labels = x.one_skeleton()
    tris = x.face_sets[2] if len(x.simplices) > 2 else frozenset()
    for a, b in g.edges():
        common = g.adjacency[a] & g.adjacency[b]
        for c in iter_bits(common >> (b + 1) << (b + 1)):
            if (labels[a], labels[b], labels[c]) not in tris:
                return False
    return True


def vertex_link(x: Complex, v: int) -> Complex:
    """Link of ``v`` in the 2-skeleton (a graph when ``x`` is 2-dimensional)."""
    faces = []
    for s in x.triangles:
        if v in s:
            faces.append(tuple(w for w in s if w != v))
    for s in x.edges:
        if v in s:
            faces.append(tuple(w for w in s if w != v))
    return Complex.from_simplices(faces, dim_cap=1) if faces else Complex.empty()


@dataclass(frozen=True)
class LinkData:
    links: dict[int, tuple[Graph, list[int]]]
    degrees: dict[Simplex, int]


def links_degrees(x: Complex) -> LinkData:
    """Per-vertex link graphs (with labels) and per-edge triangle degrees."""
    nbrs: dict[int, list[Simplex]] = defaultdict(list)
    for a, b, c in x.triangles:
        nbrs[a].append((b, c))
        nbrs[b].append((a, c))
        nbrs[c].append((a, b))
    links = {}
    adjacent: dict[int, set[int]] = defaultdict(set)
    for a, b in x.edges:
        adjacent[a].add(b)
        adjacent[b].add(a)
    for v in x.vertices:
        labels = sorted(adjacent[v])
        pos = {w: i for i, w in enumerate(labels)}
        links[v] = (Graph.from_edges(len(labels), [(pos[p], pos[q]) for p, q in nbrs[v]]), labels)
    return LinkData(links, edge_degrees(x))


def is_cycle_graph(g: Graph) -> bool:
    return g.n >= 3 and g.is_connected() and all(g.degree(v) == 2 for v in range(g.n))


def is_closed_surface(x: Complex) -> bool:
    """All edges of degree 2 and every vertex link a single cycle."""
    if not x.triangles or x.dim > 2:
        return False
    data = links_degrees(x)
    return all(d == 2 for d in data.degrees.values()) and all(
        is_cycle_graph(g) for g, _ in data.links.values()
    )


def pure_part(x: Complex) -> Complex:
    """Closure of the triangles of ``x``."""
    if not x.triangles:
        return Complex.empty()
    return Complex.from_simplices(x.triangles, dim_cap=2)


def triangle_components(triangles: Sequence[Simplex]) -> list[list[Simplex]]:
    """Partition triangles into classes connected through shared edges."""
    by_edge: dict[Simplex, list[int]] = defaultdict(list)
    for i, (a, b, c) in enumerate(triangles):
        for e in ((a, b), (a, c), (b, c)):
            by_edge[e].append(i)
    parent = list(range(len(triangles)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for members in by_edge.values():
        r = find(members[0])
        for j in members[1:]:
            parent[find(j)] = r
    groups: dict[int, list[Simplex]] = defaultdict(list)
    for i, t in enumerate(triangles):
        groups[find(i)].append(t)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def strongly_connected_components(x: Complex) -> list[Complex]:
    return [Complex.from_simplices(group, dim_cap=2) for group in triangle_components(x.triangles)]


def is_strongly_connected(x: Complex) -> bool:
    return len(triangle_components(x.triangles)) == 1 and len(pure_part(x).vertices) == len(x.vertices)


def graph_betti1(x: Complex) -> int:
    """First Betti number of the 1-skeleton, e - v + components."""
    g, _ = x.one_skeleton()
    return g.edge_count - g.n + len(g.components())


def barycentric_subdivision(x: Complex) -> Complex:
    """First barycentric subdivision; always a clique complex."""
    cells = [s for level in x.simplices for s in level]
    label = {s: i for i, s in enumerate(cells)}
    faces = []
    top = [s for s in cells if not any(set(s) < set(t) for t in _cofaces(x, s))]
    for s in top:
        for chain in _flags(s):
            faces.append(tuple(label[c] for c in chain))
    return Complex.from_simplices(faces, dim_cap=max(x.dim, 0))


def _cofaces(x: Complex, s: Simplex) -> list[Simplex]:
    k = len(s)
    return [t for t in x.faces(k) if set(s) <= set(t)]


def _flags(s: Simplex) -> list[list[Simplex]]:
    if len(s) == 1:
        return [[s]]
    out = []
    for i in range(len(s)):
        sub = s[:i] + s[i + 1:]
        for chain in _flags(sub):
            out.append(chain + [s])
    return out


def induced_subcomplex(x: Complex, vertices: Iterable[int]) -> Complex:
    keep = set(vertices)
    faces = [s for level in x.simplices for s in level if set(s) <= keep]
    return Complex.from_simplices(faces, dim_cap=x.dim_cap) if faces else Complex.empty()


def all_triples(vertices: Sequence[int]) -> list[Simplex]:
    return [tuple(t) for t in combinations(sorted(vertices), 3)]
