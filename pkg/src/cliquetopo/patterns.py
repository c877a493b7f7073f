"""Pattern library and labeled embedding counts.

A pattern is a small complex.  An injective map of its 1-skeleton into a
graph carries every simplex onto a clique, so counting graph embeddings
counts simplicial embeddings into the clique complex.  Counting is a
backtracking search over bitset candidate sets compiled with numba; the
search state lives in arrays so it can be paused and resumed against a
wall-clock deadline.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

import numba
import numpy as np

from .complex import Complex, euler_characteristic, nu_tilde
from .fixtures import VALIDATORS, FixtureError, bipyramid, projective_plane_clean, tetrahedron_boundary
from .graph import Graph, derive_seed, p_from_alpha, sample_gnp

MASK64 = (1 << 64) - 1
_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)
_CTZ_TABLE = np.zeros(64, dtype=np.int64)
for _i in range(64):
    _CTZ_TABLE[(((1 << _i) * 0x03F79D71B4CB0A89) & MASK64) >> 58] = _i

DONE, PAUSED, CAPPED = 0, 1, 2


class PatternError(ValueError):
    pass


# --------------------------------------------------------------------------
# compiled search


@numba.njit(cache=True)
def _ctz(word, table):
    low = word & (~word + np.uint64(1))
    return table[(low * _DEBRUIJN) >> np.uint64(58)]


@numba.njit(cache=True)
def _search(adj, allowed, back_ptr, back_idx, cand, cursor, mapping, used, state, budget, cap, out, table):
    """Resumable depth-first embedding search.

    state = [depth, count, started, nodes].  Returns DONE, PAUSED (node
    budget spent) or CAPPED (count reached ``cap``).
    """
    k = allowed.shape[0]
    words = allowed.shape[1]
    one = np.uint64(1)
    nodes = 0
    if state[2] == 0:
        for w in range(words):
            cand[0, w] = allowed[0, w]
        cursor[0] = 0
        state[0] = 0
        state[2] = 1
    while True:
        if nodes >= budget:
            state[3] += nodes
            return 1
        d = state[0]
        c = cursor[d]
        wi = c >> 6
        found = -1
        while wi < words:
            word = cand[d, wi]
            if wi == c >> 6:
                shift = np.uint64(c & 63)
                word &= ~((one << shift) - one)
            if word != 0:
                found = wi * 64 + _ctz(word, table)
                break
            wi += 1
        if found < 0:
            if d == 0:
                state[3] += nodes
                return 0
            d -= 1
            state[0] = d
            v = mapping[d]
            used[v >> 6] &= ~(one << np.uint64(v & 63))
            continue
        cursor[d] = found + 1
        nodes += 1
        mapping[d] = found
        if d == k - 1:
            n_out = state[1]
            if n_out < out.shape[0]:
                for j in range(k):
                    out[n_out, j] = mapping[j]
            state[1] += 1
            if cap > 0 and state[1] >= cap:
                state[3] += nodes
                return 2
            continue
        used[found >> 6] |= one << np.uint64(found & 63)
        nd = d + 1
        for w in range(words):
            x = allowed[nd, w] & ~used[w]
            for j in range(back_ptr[nd], back_ptr[nd + 1]):
                x &= adj[mapping[back_idx[j]], w]
            cand[nd, w] = x
        cursor[nd] = 0
        state[0] = nd


def _words(mask: int, words: int) -> np.ndarray:
    return np.frombuffer(mask.to_bytes(8 * words, "little"), dtype="<u8").astype(np.uint64)


def host_arrays(g: Graph) -> tuple[np.ndarray, int]:
    words = max(1, (g.n + 63) // 64)
    adj = np.zeros((max(g.n, 1), words), dtype=np.uint64)
    for v, row in enumerate(g.adjacency):
        adj[v] = _words(row, words)
    return adj, words


def search_order(p: Graph) -> list[int]:
    """Highest degree first, then most already-placed neighbours."""
    if p.n == 0:
        return []
    order = [max(range(p.n), key=lambda v: (p.degree(v), -v))]
    placed = 1 << order[0]
    while len(order) < p.n:
        best = max(
            (v for v in range(p.n) if not placed >> v & 1),
            key=lambda v: ((p.adjacency[v] & placed).bit_count(), p.degree(v), -v),
        )
        order.append(best)
        placed |= 1 << best
    return order


@dataclass
class _Search:
    adj: np.ndarray
    allowed: np.ndarray
    back_ptr: np.ndarray
    back_idx: np.ndarray
    order: list[int]
    out: np.ndarray

    def run(self, cap: int, deadline: float | None, slice_nodes: int) -> tuple[int, int, int]:
        k, words = self.allowed.shape
        cand = np.zeros((k, words), dtype=np.uint64)
        cursor = np.zeros(k, dtype=np.int64)
        mapping = np.zeros(k, dtype=np.int64)
        used = np.zeros(words, dtype=np.uint64)
        state = np.zeros(4, dtype=np.int64)
        while True:
            code = _search(
                self.adj, self.allowed, self.back_ptr, self.back_idx, cand, cursor,
                mapping, used, state, slice_nodes, cap, self.out, _CTZ_TABLE,
            )
            if code != PAUSED:
                return code, int(state[1]), int(state[3])
            if deadline is not None and time.monotonic() > deadline:
                return PAUSED, int(state[1]), int(state[3])


def _prepare(
    host: Graph, pat: Graph, fixed: dict[int, int] | None = None, store: int = 0,
    arrays: tuple[np.ndarray, int] | None = None,
) -> _Search:
    adj, words = arrays or host_arrays(host)
    order = search_order(pat)
    pos = {v: i for i, v in enumerate(order)}
    k = len(order)
    allowed = np.zeros((k, words), dtype=np.uint64)
    by_degree: dict[int, np.ndarray] = {}
    for i, v in enumerate(order):
        if fixed and v in fixed:
            allowed[i] = _words(1 << fixed[v], words)
            continue
        d = pat.degree(v)
        if d not in by_degree:
            mask = sum(1 << u for u in range(host.n) if host.degree(u) >= d)
            by_degree[d] = _words(mask, words)
        allowed[i] = by_degree[d]
    back_ptr = np.zeros(k + 1, dtype=np.int64)
    back: list[int] = []
    for i, v in enumerate(order):
        back.extend(pos[u] for u in pat.neighbors(v) if pos[u] < i)
        back_ptr[i + 1] = len(back)
    out = np.zeros((store, k), dtype=np.int64)
    return _Search(adj, allowed, back_ptr, np.array(back, dtype=np.int64), order, out)


# --------------------------------------------------------------------------
# patterns


@dataclass(frozen=True)
class Pattern:
    name: str
    complex: Complex
    nu: Fraction
    nu_tilde: Fraction
    predicates: tuple[str, ...] = ()

    @property
    def threshold_exponent(self) -> Fraction:
        return -self.nu_tilde

    @property
    def graph(self) -> Graph:
        return self.complex.one_skeleton()[0]

    @property
    def v(self) -> int:
        return len(self.complex.vertices)

    @property
    def e(self) -> int:
        return len(self.complex.edges)


def make_pattern(name: str, x: Complex, predicates: Sequence[str] = ()) -> Pattern:
    for pred in predicates:
        if not PATTERN_VALIDATORS[pred](x):
            raise PatternError(f"pattern {name} fails {pred}")
    g = x.one_skeleton()[0]
    if not g.is_connected():
        raise PatternError(f"pattern {name} has a disconnected 1-skeleton")
    return Pattern(name, x, Fraction(len(x.vertices), len(x.edges)), nu_tilde(x), tuple(predicates))


def _complete(x: Complex) -> bool:
    v = len(x.vertices)
    return all(len(x.faces(k)) == math.comb(v, k + 1) for k in range(min(v, x.dim_cap + 1)))


PATTERN_VALIDATORS = dict(VALIDATORS)
PATTERN_VALIDATORS.update(
    {
        "complete": _complete,
        "counts_11_30_20": lambda x: x.f_vector[:3] == (11, 30, 20),
    }
)


def builtin_patterns() -> dict[str, tuple[Complex, tuple[str, ...]]]:
    k4 = Complex.from_simplices([(0, 1, 2, 3)], dim_cap=3)
    return {
        "triangle": (Complex.from_simplices([(0, 1, 2)]), ("complete",)),
        "two_triangles": (Complex.from_simplices([(0, 1, 2), (1, 2, 3)]), ("strongly_connected",)),
        "k4": (k4, ("complete",)),
        "s1": (tetrahedron_boundary(), ("closed_surface", "sphere_gf2")),
        "s2": (bipyramid(), ("closed_surface", "sphere_gf2")),
        "p2": (projective_plane_clean(), ("closed_surface", "clean", "p2_gf2", "p2_q", "counts_11_30_20")),
    }


def pattern_dir() -> Path:
    return Path(str(resources.files("cliquetopo") / "data" / "patterns"))


def write_registry(directory: Path | None = None) -> Path:
    out = directory or pattern_dir()
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for name, (x, preds) in builtin_patterns().items():
        (out / f"{name}.cx").write_text(x.to_text())
        rows.append((name, f"{name}.cx", str(nu_tilde(x)), ",".join(preds)))
    reg = out / "registry.tsv"
    with reg.open("w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(("name", "path", "nu_tilde", "predicates"))
        w.writerows(rows)
    return reg


def load_registry(directory: Path | None = None) -> dict[str, Pattern]:
    """Load every registered pattern, re-validating it and its declared nu-tilde."""
    base = directory or pattern_dir()
    out = {}
    with (base / "registry.tsv").open() as fh:
        for row in csv.DictReader(fh, delimiter="\t"):
            x = Complex.from_text((base / row["path"]).read_text())
            preds = tuple(p for p in row["predicates"].split(",") if p)
            pat = make_pattern(row["name"], x, preds)
            if pat.nu_tilde != Fraction(row["nu_tilde"]):
                raise PatternError(
                    f"{row['name']}: declared nu-tilde {row['nu_tilde']}, computed {pat.nu_tilde}"
                )
            out[pat.name] = pat
    return out


_REGISTRY: dict[str, Pattern] | None = None


def get_pattern(name: str) -> Pattern:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = load_registry()
    try:
        return _REGISTRY[name]
    except KeyError:
        raise PatternError(f"unknown pattern {name!r}; known: {sorted(_REGISTRY)}") from None


# --------------------------------------------------------------------------
# counting


@dataclass(frozen=True)
class EmbeddingCount:
    pattern: str
    count: int
    expected: float | None
    saturated: bool
    timed_out: bool
    nodes: int

    @property
    def found(self) -> bool:
        return self.count > 0


def expected_count(pat: Pattern | Complex, n: int, p: float) -> float:
    """E(T) = C(n, v) v! p^e."""
    x = pat.complex if isinstance(pat, Pattern) else pat
    return math.perm(n, len(x.vertices)) * p ** len(x.edges)


def count_embeddings(
    g: Graph,
    pat: Pattern,
    cap: int = 0,
    p: float | None = None,
    time_budget: float | None = None,
    slice_nodes: int = 5_000_000,
    arrays: tuple[np.ndarray, int] | None = None,
) -> EmbeddingCount:
    """Labeled injective embeddings of the pattern's 1-skeleton into ``g``.

    ``cap`` > 0 stops at that many (``saturated``); ``time_budget`` in
    seconds stops the search between node slices (``timed_out``, the count
    is then a lower bound).
    """
    pg = pat.graph
    expected = expected_count(pat, g.n, p) if p is not None else None
    if pg.n > g.n:
        return EmbeddingCount(pat.name, 0, expected, False, False, 0)
    search = _prepare(g, pg, arrays=arrays)
    deadline = time.monotonic() + time_budget if time_budget is not None else None
    code, count, nodes = search.run(cap, deadline, slice_nodes)
    return EmbeddingCount(pat.name, count, expected, code == CAPPED, code == PAUSED, nodes)


def list_embeddings(g: Graph, pat_graph: Graph, limit: int, fixed: dict[int, int] | None = None) -> list[dict[int, int]]:
    """Up to ``limit`` embeddings as {pattern vertex: host vertex}."""
    search = _prepare(g, pat_graph, fixed, store=limit)
    code, count, _ = search.run(limit, None, 10**9)
    rows = search.out[: min(count, limit)]
    return [{v: int(row[i]) for i, v in enumerate(search.order)} for row in rows]


def automorphism_count(pat: Pattern) -> int:
    return count_embeddings(pat.graph, pat).count


def unlabeled_count(c: EmbeddingCount, pat: Pattern) -> Fraction:
    """Automorphism-deduplicated view of a labeled count."""
    return Fraction(c.count, automorphism_count(pat))


def naive_count(g: Graph, pat_graph: Graph) -> int:
    """All-injections oracle."""
    from itertools import permutations

    edges = pat_graph.edges()
    return sum(
        all(g.has_edge(m[a], m[b]) for a, b in edges)
        for m in permutations(range(g.n), pat_graph.n)
    )


# --------------------------------------------------------------------------
# relative density and the count comparison


def is_labeled_subcomplex(s2: Complex, s1: Complex) -> bool:
    return all(s1.contains(s) for level in s2.simplices for s in level)


def relative_nu(s1: Complex, s2: Complex) -> Fraction:
    """(v1 - v2)/(e1 - e2) for s2 inside s1, checked against chi and L.

    The identity is 1/3 + (3 dchi + dL)/(3 de) with 2-skeleton Euler
    characteristics and L = 2e - 3f.
    """
    if not is_labeled_subcomplex(s2, s1):
        raise PatternError("s2 is not a labeled subcomplex of s1")
    dv = len(s1.vertices) - len(s2.vertices)
    de = len(s1.edges) - len(s2.edges)
    if de <= 0:
        raise PatternError("relative density undefined: s1 and s2 have the same edges")
    value = Fraction(dv, de)
    dchi = euler_characteristic(s1, 2) - euler_characteristic(s2, 2)
    d_l = (2 * len(s1.edges) - 3 * len(s1.triangles)) - (2 * len(s2.edges) - 3 * len(s2.triangles))
    if value != Fraction(1, 3) + Fraction(3 * dchi + d_l, 3 * de):
        raise ArithmeticError("relative density identity failed")
    return value


@dataclass(frozen=True)
class ComparisonSummary:
    n: int
    alpha: float
    trials: int
    p_t1_less: float
    se_t1_less: float
    p_nonextendable: float
    se_nonextendable: float
    mean_t1: float
    mean_t2: float
    expected_ratio: float
    in_sandwich: bool
    warning: str = ""


def count_comparison_experiment(
    s1: Pattern, s2: Pattern, n: int, alpha: float, trials: int, seed: int = 0,
    list_cap: int = 100_000,
) -> ComparisonSummary:
    """Monte Carlo estimate of P(T1 < T2) and of a non-extendable s2 copy.

    T1, T2 are labeled embedding counts of s1 and s2 in G(n, n^alpha).
    """
    if s1.complex.same_as(s2.complex):
        raise PatternError("s2 must be a proper subcomplex of s1")
    rel = relative_nu(s1.complex, s2.complex)
    lo, hi = -float(s2.nu_tilde), -float(rel)
    in_sandwich = s2.nu_tilde > rel and lo < alpha < hi
    warning = "" if in_sandwich else f"alpha outside ({lo:.4f}, {hi:.4f})"
    p = p_from_alpha(n, alpha)
    less = nonext = 0
    t1s, t2s = [], []
    g1 = s1.graph
    for t in range(trials):
        g = sample_gnp(n, p, derive_seed(seed, n, t))
        arrays = host_arrays(g)
        t1 = count_embeddings(g, s1, arrays=arrays).count
        t2 = count_embeddings(g, s2, arrays=arrays).count
        t1s.append(t1)
        t2s.append(t2)
        less += t1 < t2
        found = False
        for emb in list_embeddings(g, s2.graph, list_cap):
            if not list_embeddings(g, g1, 1, fixed=emb):
                found = True
                break
        nonext += found
    f_less, f_non = less / trials, nonext / trials
    return ComparisonSummary(
        n, alpha, trials, f_less, math.sqrt(f_less * (1 - f_less) / trials),
        f_non, math.sqrt(f_non * (1 - f_non) / trials),
        float(np.mean(t1s)), float(np.mean(t2s)),
        expected_count(s1, n, p) / expected_count(s2, n, p), in_sandwich, warning,
    )
