"""Random graphs G(n, p), bitset graphs and the exact densest-subgraph solver.

Graphs are immutable. Adjacency rows are Python ints used as bitsets, so
neighbourhood intersections are single ``&`` operations.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import networkx as nx
import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class GraphError(ValueError):
    """Invalid graph input or an undefined graph quantity."""


class EdgelessGraphError(GraphError):
    """Density of an edgeless graph is undefined (nu-tilde is +inf)."""


# --------------------------------------------------------------------------
# counter-based RNG


def splitmix64(x: int) -> int:
    """Finalizer of SplitMix64 applied to a 64-bit state."""
    z = x & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def splitmix64_stream(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of SplitMix64 seeded with ``seed``.

    Output k is ``splitmix64(seed + (k + 1) * GOLDEN_GAMMA)``; this is the
    reference SplitMix64 sequence, computed counter-style so any output can
    be produced without the preceding ones.
    """
    with np.errstate(over="ignore"):
        k = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(seed & MASK64) + k * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return z


def uniform_stream(seed: int, count: int) -> np.ndarray:
    """Doubles in [0, 1) from the top 53 bits of the SplitMix64 stream."""
    return (splitmix64_stream(seed, count) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def derive_seed(*parts: int) -> int:
    """Fold integers into one 64-bit seed (used for per-trial seeds)."""
    h = 0x6A09E667F3BCC909
    for part in parts:
        h = splitmix64((h ^ (part & MASK64)) + GOLDEN_GAMMA)
    return h


# --------------------------------------------------------------------------
# Graph


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1`` with bitset rows."""

    n: int
    adjacency: tuple[int, ...]
    edge_count: int

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        rows = [0] * n
        for i, j in edges:
            if i == j:
                raise GraphError(f"loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"edge ({i}, {j}) out of range for n={n}")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        m = sum(r.bit_count() for r in rows) // 2
        return cls(n, tuple(rows), m)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i] >> j & 1)

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adjacency[v]))

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(i, j)`` with ``i < j`` in lexicographic order."""
        out = []
        for i, row in enumerate(self.adjacency):
            out.extend((i, j) for j in iter_bits(row >> (i + 1) << (i + 1)))
        return out

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled ``0..k-1`` in the given order."""
        index = {v: k for k, v in enumerate(vertices)}
        edges = [(index[i], index[j]) for i, j in self.edges() if i in index and j in index]
        return Graph.from_edges(len(vertices), edges)

    def edges_within(self, mask: int) -> int:
        return sum((self.adjacency[v] & mask).bit_count() for v in iter_bits(mask)) // 2

    def components(self) -> list[list[int]]:
        seen = 0
        comps = []
        for v in range(self.n):
            if seen >> v & 1:
                continue
            comp = 1 << v
            frontier = comp
            while frontier:
                nxt = 0
                for u in iter_bits(frontier):
                    nxt |= self.adjacency[u]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(list(iter_bits(comp)))
        return comps

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def to_networkx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(range(self.n))
        h.add_edges_from(self.edges())
        return h

    def digest(self) -> str:
        """SHA-256 of the edge-list serialization."""
        return hashlib.sha256(to_edgelist(self).encode()).hexdigest()


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# --------------------------------------------------------------------------
# sampling


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """Sample G(n, p) reproducibly.

    Pairs ``(i, j)``, ``i < j``, are visited in lexicographic order; pair k
    is an edge iff the k-th SplitMix64 uniform of ``seed`` is below ``p``.
    """
    if n < 1:
        raise GraphError("n must be at least 1")
    if not 0.0 < p < 1.0:
        raise GraphError(f"p must lie in (0, 1), got {p}")
    iu, ju = np.triu_indices(n, 1)
    keep = uniform_stream(seed, iu.size) < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def p_from_alpha(n: int, alpha: float) -> float:
    """p = n**alpha, clamped into the open unit interval."""
    p = math.exp(alpha * math.log(n))
    return min(max(p, 1e-300), 1.0 - 1e-12)


# --------------------------------------------------------------------------
# densest subgraph


@dataclass(frozen=True)
class DensitySolverResult:
    max_density: Fraction
    witness: tuple[int, ...]
    balanced: bool
    strictly_balanced: bool

    @property
    def nu_tilde(self) -> Fraction:
        return 1 / self.max_density


def _denser_subset(g: Graph, guess: Fraction) -> int:
    """Vertex bitmask S maximizing e(S) - guess*|S| when that is positive, else 0.

    Goldberg's network scaled by the guess denominator b: s->v with
    capacity b*m, v->t with b*m + 2a - b*deg(v), and capacity b on both
    arcs of every edge.  A cut with source side S costs
    b*m*n + 2(a|S| - b e(S)).
    """
    a, b = guess.numerator, guess.denominator
    m = g.edge_count
    net = nx.DiGraph()
    s, t = "s", "t"
    for v in range(g.n):
        net.add_edge(s, v, capacity=b * m)
        net.add_edge(v, t, capacity=b * m + 2 * a - b * g.degree(v))
    for i, j in g.edges():
        net.add_edge(i, j, capacity=b)
        net.add_edge(j, i, capacity=b)
    cut, (source_side, _) = nx.minimum_cut(net, s, t)
    if cut >= b * m * g.n:
        return 0
    mask = 0
    for v in source_side:
        if v != s:
            mask |= 1 << v
    return mask


def _max_density(g: Graph) -> tuple[Fraction, int]:
    if g.edge_count == 0:
        raise EdgelessGraphError("density undefined for an edgeless graph (nu-tilde = +inf)")
    full = (1 << g.n) - 1
    best_mask = full
    lo = Fraction(g.edge_count, g.n)
    hi = Fraction(g.n - 1, 2)
    gap = Fraction(1, g.n * max(g.n - 1, 1))
    while hi - lo >= gap:
        mid = (lo + hi) / 2
        mask = _denser_subset(g, mid)
        if mask:
            best_mask = mask
            lo = Fraction(g.edges_within(mask), mask.bit_count())
        else:
            hi = mid
    return lo, best_mask


def max_density_subgraph(g: Graph, check_strict: bool = True) -> DensitySolverResult:
    """Exact maximum of e(H)/v(H) over vertex subsets H, with a witness.

    Binary search over rational guesses; a min cut decides whether some
    subset beats the guess.  Distinct candidate densities differ by at
    least 1/(n(n-1)), which bounds the search.  ``check_strict=False``
    skips the per-vertex uniqueness cuts and reports ``strictly_balanced``
    as False.
    """
    best, mask = _max_density(g)
    witness = tuple(iter_bits(mask))
    whole = Fraction(g.edge_count, g.n)
    balanced = whole == best
    # every proper vertex subset lies inside some G - v
    strictly = balanced and check_strict and not any(_reaches(g, v, best) for v in range(g.n))
    return DensitySolverResult(best, witness, balanced, strictly)


def _reaches(g: Graph, removed: int, density: Fraction) -> bool:
    """Does G - removed have a subset of density >= ``density``?

    One cut at ``density - gap/2``: every candidate density is either
    >= density or <= density - gap.
    """
    h = g.induced([v for v in range(g.n) if v != removed])
    if h.edge_count == 0:
        return False
    gap = Fraction(1, 2 * g.n * (g.n - 1))
    return bool(_denser_subset(h, density - gap))


@dataclass(frozen=True)
class BalanceReport:
    balanced: bool
    strictly: bool
    components: tuple[tuple[tuple[int, ...], bool, bool], ...] = ()


def is_balanced(g: Graph) -> BalanceReport:
    """Balancedness of ``g``; strictness by single-vertex deletions.

    Disconnected input gets a per-component report next to the whole-graph
    verdict.
    """
    res = max_density_subgraph(g)
    comps: tuple = ()
    if not g.is_connected():
        parts = []
        for comp in g.components():
            h = g.induced(comp)
            if h.edge_count == 0:
                parts.append((tuple(comp), False, False))
                continue
            r = max_density_subgraph(h)
            parts.append((tuple(comp), r.balanced, r.strictly_balanced))
        comps = tuple(parts)
    return BalanceReport(res.balanced, res.strictly_balanced, comps)


def nu_tilde(g: Graph) -> Fraction | float:
    """min over subgraphs of v/e; ``math.inf`` for an edgeless graph."""
    if g.edge_count == 0:
        return math.inf
    return _max_density(g)[0] ** -1


def brute_force_max_density(g: Graph) -> Fraction:
    """Exhaustive maximum of e(S)/|S| over nonempty vertex subsets."""
    best = Fraction(0)
    for mask in range(1, 1 << g.n):
        d = Fraction(g.edges_within(mask), mask.bit_count())
        if d > best:
            best = d
    return best


# --------------------------------------------------------------------------
# edge-list format


def to_edgelist(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines.extend(f"{i} {j}" for i, j in edges)
    return "\n".join(lines) + "\n"


def from_edgelist(text: str) -> Graph:
    rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise GraphError("edge list must start with 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    edges = [(int(a), int(b)) for a, b in rows[1:]]
    if len(edges) != m:
        raise GraphError(f"header promises {m} edges, found {len(edges)}")
    for i, j in edges:
        if i >= j:
            raise GraphError(f"edge line '{i} {j}' must satisfy i < j")
    if edges != sorted(edges):
        raise GraphError("edges must be sorted lexicographically")
    if len(set(edges)) != len(edges):
        raise GraphError("duplicate edge")
    return Graph.from_edges(n, edges)
