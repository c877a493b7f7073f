"""Exact small filling areas of loops in 2-complexes.

A loop is a cyclic vertex word.  Its area is the fewest triangles in a
simplicial van Kampen diagram with that boundary; backtracking spurs
(x, y, x) cost nothing, so words are kept freely reduced.  The search
fixes one boundary edge (a, b) and branches on how a minimal diagram
uses it:

* a triangle abc with c interior: replace a->b by a->c->b, area + 1;
* a triangle abc with c = w_j on the boundary: split into two words;
* no triangle: (a, b) is traversed back as (b, a) later, split for free.

Results are memoized per word up to rotation and reversal, as an exact
value or a lower bound, and searched by iterative deepening on the area.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .complex import Complex, Simplex
from .homology import boundary_gf2

Word = tuple[int, ...]

FILLED = "filled"
NOT_FILLABLE = "not_fillable_within"
NOT_NULLHOMOTOPIC = "not_nullhomotopic"


@dataclass(frozen=True)
class LoopSpec:
    vertices: Word

    @property
    def length(self) -> int:
        return len(self.vertices)

    def validate(self, x: Complex) -> None:
        if len(self.vertices) < 3:
            raise ValueError("a loop needs at least 3 vertices")
        edges = x.face_sets[1]
        w = self.vertices
        for a, b in zip(w, w[1:] + w[:1]):
            if tuple(sorted((a, b))) not in edges:
                raise ValueError(f"loop step {a}-{b} is not an edge")


@dataclass(frozen=True)
class FillingResult:
    loop: LoopSpec
    status: str
    area: int | None
    cap: int
    disc: tuple[tuple[int, int, int], ...] = ()

    @property
    def filled(self) -> bool:
        return self.status == FILLED


def free_reduce(word: Sequence[int]) -> Word:
    """Cyclically remove backtracks x -> y -> x (and x -> x repeats)."""
    out: list[int] = []
    for v in word:
        if out and out[-1] == v:
            continue
        if len(out) >= 2 and out[-2] == v:
            out.pop()
            continue
        out.append(v)
    changed = True
    while changed and out:
        changed = False
        if len(out) >= 2 and out[0] == out[-1]:
            out.pop()
            changed = True
        elif len(out) >= 3 and out[1] == out[-1]:
            out.pop(0)
            out.pop(0)
            changed = True
        elif len(out) >= 3 and out[0] == out[-2]:
            out.pop()
            out.pop()
            changed = True
    if len(out) <= 2:
        return ()
    return tuple(out)


def canonical(word: Word) -> Word:
    """Least rotation of the word or its reverse."""
    n = len(word)
    best = word
    for w in (word, word[::-1]):
        for i in range(n):
            r = w[i:] + w[:i]
            if r < best:
                best = r
    return best


class _Filler:
    def __init__(self, x: Complex, use_homology: bool = True):
        self.x = x
        self.third: dict[Simplex, list[int]] = defaultdict(list)
        for a, b, c in x.triangles:
            self.third[(a, b)].append(c)
            self.third[(a, c)].append(b)
            self.third[(b, c)].append(a)
        self.exact: dict[Word, int] = {}
        self.lower: dict[Word, int] = {}
        self.choice: dict[Word, tuple] = {}
        self.use_homology = use_homology
        self.edge_index = x.index[1] if len(x.index) > 1 else {}
        self._pivots: dict[int, int] = {}
        # per edge index: values of an integral basis of Q-cocycles
        self._cocycle_values: list[tuple[int, ...]] = []
        if use_homology:
            for col in boundary_gf2(x, 2):
                self._reduce(col, insert=True)
            basis = [_integral(y) for y in _cocycles_q(x)]
            self._cocycle_values = [tuple(y.get(i, 0) for y in basis) for i in range(len(self.edge_index))]

    def _reduce(self, vec: int, insert: bool = False) -> int:
        while vec:
            top = vec.bit_length() - 1
            p = self._pivots.get(top)
            if p is None:
                if insert:
                    self._pivots[top] = vec
                return vec
            vec ^= p
        return 0

    def null_homologous(self, word: Word) -> bool:
        """Zero in H1 over GF2 and over Q; both are necessary for null-homotopy."""
        vec = 0
        for a, b in zip(word, word[1:] + word[:1]):
            vec ^= 1 << self.edge_index[(a, b) if a < b else (b, a)]
        if self._reduce(vec):
            return False
        if not self._cocycle_values or not self._cocycle_values[0]:
            return True
        acc = [0] * len(self._cocycle_values[0])
        for a, b in zip(word, word[1:] + word[:1]):
            if a < b:
                for k, v in enumerate(self._cocycle_values[self.edge_index[(a, b)]]):
                    acc[k] += v
            else:
                for k, v in enumerate(self._cocycle_values[self.edge_index[(b, a)]]):
                    acc[k] -= v
        return not any(acc)

    @staticmethod
    def lower_bound(word: Word) -> int:
        """Edges not matched by a reverse traversal each need their own triangle side."""
        n = len(word)
        steps = [(word[i], word[(i + 1) % n]) for i in range(n)]
        pool = defaultdict(int)
        for s in steps:
            pool[s] += 1
        unmatched = 0
        for a, b in steps:
            if not pool.get((b, a)):
                unmatched += 1
        return math.ceil(unmatched / 3)

    def _pick_rotation(self, word: Word) -> Word:
        """Rotate so the fixed edge has the fewest triangles on it."""
        n = len(word)
        best, best_key = word, None
        for i in range(n):
            a, b = word[i], word[(i + 1) % n]
            k = len(self.third.get((a, b) if a < b else (b, a), ()))
            if best_key is None or k < best_key:
                best, best_key = word[i:] + word[:i], k
        return best

    def solve(self, word: Word, budget: int) -> int | None:
        """Exact area if it is at most ``budget``, else None."""
        word = free_reduce(word)
        if not word:
            return 0
        key = canonical(word)
        if key in self.exact:
            v = self.exact[key]
            return v if v <= budget else None
        lb = max(self.lower_bound(key), self.lower.get(key, 0))
        if lb > budget:
            return None
        if self.use_homology and not self.null_homologous(key):
            self.lower[key] = math.inf
            return None
        w = self._pick_rotation(key)
        n = len(w)
        a, b = w[0], w[1]
        best: int | None = None
        pick = None
        # (a, b) traversed back later: cut the edge
        for j in range(2, n):
            if w[j] == b and w[(j + 1) % n] == a:
                s1 = w[1:j]
                s2 = w[j + 1:]
                got = self._pair(s1, s2, budget if best is None else best - 1, 0)
                if got is not None:
                    best, pick = got, ("bridge", j)
        edge = (a, b) if a < b else (b, a)
        for c in self.third.get(edge, ()):
            limit = (budget if best is None else best - 1) - 1
            if limit < 0:
                break
            for j in range(2, n):
                if w[j] == c:
                    got = self._pair(w[1:j + 1], (a,) + w[j:], limit, 1)
                    if got is not None and (best is None or got < best):
                        best, pick = got, ("split", c, j)
                        limit = best - 2
            if limit < 0:
                continue
            sub = self.solve((a, c) + w[1:], limit)
            if sub is not None and (best is None or sub + 1 < best):
                best, pick = sub + 1, ("insert", c)
        if best is None:
            self.lower[key] = max(self.lower.get(key, 0), budget + 1)
            return None
        self.exact[key] = best
        self.choice[key] = (w, pick)
        return best

    def _pair(self, s1: Word, s2: Word, budget: int, cost: int) -> int | None:
        if budget - cost < 0:
            return None
        r1 = free_reduce(s1)
        r2 = free_reduce(s2)
        lb2 = self.lower_bound(r2) if r2 else 0
        a1 = self.solve(r1, budget - cost - lb2)
        if a1 is None:
            return None
        a2 = self.solve(r2, budget - cost - a1)
        if a2 is None:
            return None
        return cost + a1 + a2

    def area(self, word: Word, cap: int) -> int | None:
        word = free_reduce(word)
        if not word:
            return 0
        for budget in range(self.lower_bound(canonical(word)), cap + 1):
            got = self.solve(word, budget)
            if got is not None:
                return got
            if self.lower.get(canonical(word)) == math.inf:
                return None
        return None

    def disc(self, word: Word) -> list[tuple[int, int, int]]:
        """Oriented triangles of a minimal diagram, rebuilt from the memo."""
        word = free_reduce(word)
        if not word:
            return []
        key = canonical(word)
        if not _same_direction(word, key):
            return [(a, c, b) for a, b, c in self.disc(word[::-1])]
        w, pick = self.choice[key]
        if pick[0] == "bridge":
            j = pick[1]
            return self.disc(w[1:j]) + self.disc(w[j + 1:])
        a, b = w[0], w[1]
        if pick[0] == "split":
            _, c, j = pick
            return [(a, b, c)] + self.disc(w[1:j + 1]) + self.disc((a,) + w[j:])
        c = pick[1]
        return [(a, b, c)] + self.disc((a, c) + w[1:])


def _same_direction(word: Word, key: Word) -> bool:
    """True when ``key`` is a rotation of ``word`` (not only of its reverse)."""
    n = len(word)
    return any(word[i:] + word[:i] == key for i in range(n))


def _cocycles_q(x: Complex) -> list[dict[int, Fraction]]:
    """Basis of {y : y . boundary(t) = 0 for every triangle t} over Q.

    A 1-cycle is a rational boundary iff it pairs to zero with all of them
    (pairing with coboundaries vanishes on cycles automatically).
    """
    edges = x.index[1] if len(x.index) > 1 else {}
    m = len(edges)
    rows: list[dict[int, Fraction]] = []
    for a, b, c in x.triangles:
        rows.append({edges[(b, c)]: Fraction(1), edges[(a, c)]: Fraction(-1), edges[(a, b)]: Fraction(1)})
    # reduced row echelon form of the triangle-by-edge matrix
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        row = dict(row)
        for col, prow in pivots.items():
            f = row.get(col)
            if f:
                for k, v in prow.items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        if not row:
            continue
        col = min(row)
        inv = 1 / row[col]
        row = {k: v * inv for k, v in row.items()}
        for other in pivots.values():
            f = other.get(col)
            if f:
                for k, v in row.items():
                    nv = other.get(k, 0) - f * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        pivots[col] = row
    basis = []
    for free in range(m):
        if free in pivots:
            continue
        y = {free: Fraction(1)}
        for col, prow in pivots.items():
            f = prow.get(free)
            if f:
                y[col] = -f
        basis.append(y)
    return basis


def _integral(y: dict[int, Fraction]) -> dict[int, int]:
    scale = math.lcm(*(v.denominator for v in y.values()))
    return {k: int(v * scale) for k, v in y.items()}


def chain_boundary(triangles: Iterable[tuple[int, int, int]]) -> dict[Simplex, int]:
    """Integer 1-chain sum of oriented triangle boundaries."""
    acc: dict[Simplex, int] = defaultdict(int)
    for a, b, c in triangles:
        for p, q in ((a, b), (b, c), (c, a)):
            if p < q:
                acc[(p, q)] += 1
            else:
                acc[(q, p)] -= 1
    return {e: v for e, v in acc.items() if v}


def loop_chain(word: Sequence[int]) -> dict[Simplex, int]:
    acc: dict[Simplex, int] = defaultdict(int)
    n = len(word)
    for i in range(n):
        p, q = word[i], word[(i + 1) % n]
        if p < q:
            acc[(p, q)] += 1
        else:
            acc[(q, p)] -= 1
    return {e: v for e, v in acc.items() if v}


def filling_area(x: Complex, loop: LoopSpec | Sequence[int], area_cap: int = 12, use_homology: bool = True) -> FillingResult:
    """Minimal filling area of ``loop`` in ``x`` up to ``area_cap`` triangles.

    With ``use_homology`` a loop that is non-zero in H1 over GF2 or Q is
    reported as not null-homotopic without searching.  A filled result
    carries the diagram's oriented triangles; their boundaries sum to the
    loop as an integer chain.
    """
    spec = loop if isinstance(loop, LoopSpec) else LoopSpec(tuple(loop))
    spec.validate(x)
    solver = _Filler(x, use_homology)
    word = spec.vertices
    if use_homology and free_reduce(word) and not solver.null_homologous(free_reduce(word)):
        return FillingResult(spec, NOT_NULLHOMOTOPIC, None, area_cap)
    area = solver.area(word, area_cap)
    if area is None:
        return FillingResult(spec, NOT_FILLABLE, None, area_cap)
    return FillingResult(spec, FILLED, area, area_cap, tuple(solver.disc(word)))


def simple_cycles(x: Complex, max_length: int) -> list[Word]:
    """Simple cycles of length 3..max_length, one per rotation/reversal class."""
    g, labels = x.one_skeleton()
    out = []
    for start in range(g.n):
        stack = [(start, [start])]
        while stack:
            v, path = stack.pop()
            for w in g.neighbors(v):
                if w == start and len(path) >= 3 and path[1] < path[-1]:
                    out.append(tuple(labels[u] for u in path))
                elif w > start and w not in path and len(path) < max_length:
                    stack.append((w, path + [w]))
    return sorted(set(out), key=lambda c: (len(c), c))


@dataclass(frozen=True)
class RatioResult:
    ratio: Fraction | None
    loop: Word | None
    area: int | None
    loops_checked: int
    loops_filled: int


def restricted_isoperimetric_ratio(x: Complex, length_cap: int, area_cap: int) -> RatioResult:
    """min |gamma| / A(gamma) over simple loops of length <= length_cap
    fillable within area_cap.  An upper bound on the isoperimetric constant.
    """
    best = None
    arg = None
    filled = 0
    cycles = simple_cycles(x, length_cap)
    solver = _Filler(x, True)
    for cyc in cycles:
        if not solver.null_homologous(cyc):
            continue
        area = solver.area(cyc, area_cap)
        if not area:
            continue
        filled += 1
        r = Fraction(len(cyc), area)
        if best is None or r < best:
            best, arg = r, (cyc, area)
    return RatioResult(best, arg[0] if arg else None, arg[1] if arg else None, len(cycles), filled)
