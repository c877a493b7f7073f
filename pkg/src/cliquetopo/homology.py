"""Betti numbers over GF(2) and over the rationals.

GF(2) boundary columns are Python ints used as bit vectors (bit i is the
i-th face in sorted order), reduced with the highest set bit as pivot.
Rational ranks use fraction-free sparse column elimination and are
cross-checked against ranks modulo two large primes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .complex import Complex, Simplex, euler_characteristic

GF2 = "GF2"
Q = "Q"
CHECK_PRIMES = (1_000_000_007, 2_147_483_647)


class RankUncertainError(ArithmeticError):
    """Exact and modular ranks disagree."""


@dataclass(frozen=True)
class BettiVector:
    field: str
    b: tuple[int, ...]
    euler_check: bool

    def __getitem__(self, k: int) -> int:
        return self.b[k] if 0 <= k < len(self.b) else 0

    def __iter__(self):
        return iter(self.b)

    def as_list(self) -> list[int]:
        return list(self.b)


# --------------------------------------------------------------------------
# boundary matrices


def boundary_gf2(x: Complex, k: int) -> list[int]:
    """Columns of the k-th boundary map over GF(2) as bit vectors."""
    if k <= 0:
        return []
    lower = x.index[k - 1] if k - 1 < len(x.index) else {}
    cols = []
    for s in x.faces(k):
        col = 0
        for i in range(k + 1):
            col |= 1 << lower[s[:i] + s[i + 1:]]
        cols.append(col)
    return cols


def boundary_signed(x: Complex, k: int) -> list[dict[int, int]]:
    """Columns of the k-th oriented boundary map as sparse {row: sign}."""
    if k <= 0:
        return []
    lower = x.index[k - 1]
    cols = []
    for s in x.faces(k):
        cols.append({lower[s[:i] + s[i + 1:]]: (-1) ** i for i in range(k + 1)})
    return cols


def triangle_boundary(triangles: Sequence[Simplex], signed: bool = False):
    """Boundary of a triangle list against its own edge set."""
    edges = sorted({e for a, b, c in triangles for e in ((a, b), (a, c), (b, c))})
    pos = {e: i for i, e in enumerate(edges)}
    if signed:
        cols = [{pos[(b, c)]: 1, pos[(a, c)]: -1, pos[(a, b)]: 1} for a, b, c in triangles]
    else:
        cols = [(1 << pos[(b, c)]) | (1 << pos[(a, c)]) | (1 << pos[(a, b)]) for a, b, c in triangles]
    return cols, edges


# --------------------------------------------------------------------------
# ranks


def rank_gf2(columns: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            top = col.bit_length() - 1
            other = pivots.get(top)
            if other is None:
                pivots[top] = col
                rank += 1
                break
            col ^= other
    return rank


def kernel_gf2(columns: Sequence[int]) -> list[int]:
    """Basis of the GF(2) kernel; each vector is a bitmask over column indices."""
    pivots: dict[int, tuple[int, int]] = {}
    basis = []
    for j, col in enumerate(columns):
        combo = 1 << j
        while col:
            top = col.bit_length() - 1
            hit = pivots.get(top)
            if hit is None:
                pivots[top] = (col, combo)
                break
            col ^= hit[0]
            combo ^= hit[1]
        if not col:
            basis.append(combo)
    return basis


def rank_mod_p(columns: Iterable[dict[int, int]], prime: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    for raw in columns:
        col = {r: v % prime for r, v in raw.items() if v % prime}
        while col:
            top = max(col)
            piv = pivots.get(top)
            if piv is None:
                inv = pow(col[top], -1, prime)
                pivots[top] = {r: v * inv % prime for r, v in col.items()}
                break
            f = col[top]
            for r, v in piv.items():
                nv = (col.get(r, 0) - f * v) % prime
                if nv:
                    col[r] = nv
                else:
                    col.pop(r, None)
    return len(pivots)


def rank_q_exact(columns: Iterable[dict[int, int]]) -> int:
    """Rank over Q by fraction-free elimination with gcd normalization."""
    pivots: dict[int, dict[int, int]] = {}
    for raw in columns:
        col = {r: v for r, v in raw.items() if v}
        while col:
            top = max(col)
            piv = pivots.get(top)
            if piv is None:
                pivots[top] = col
                break
            a, b = col[top], piv[top]
            new = {r: b * v for r, v in col.items()}
            for r, v in piv.items():
                nv = new.get(r, 0) - a * v
                if nv:
                    new[r] = nv
                else:
                    new.pop(r, None)
            g = 0
            for v in new.values():
                g = math.gcd(g, v)
                if g == 1:
                    break
            col = {r: v // g for r, v in new.items()} if g > 1 else new
    return len(pivots)


def rank_q(columns: Sequence[dict[int, int]], check: bool = True) -> int:
    """Exact rational rank, confirmed by the modular ranks at two primes."""
    cols = list(columns)
    exact = rank_q_exact(cols)
    if check:
        for prime in CHECK_PRIMES:
            r = rank_mod_p(cols, prime)
            if r != exact:
                raise RankUncertainError(f"rank over Q is {exact} but {r} mod {prime}")
    return exact


# --------------------------------------------------------------------------
# Betti numbers


def boundary_ranks(x: Complex, field: str = GF2) -> list[int]:
    """ranks[k] = rank of the k-th boundary map (ranks[0] = 0)."""
    top = len(x.simplices) - 1
    ranks = [0]
    for k in range(1, top + 1):
        if field == GF2:
            ranks.append(rank_gf2(boundary_gf2(x, k)))
        elif field == Q:
            ranks.append(rank_q(boundary_signed(x, k)))
        else:
            raise ValueError(f"unknown field {field!r}")
    return ranks


def betti(x: Complex, field: str = GF2) -> BettiVector:
    """b_k = dim C_k - rank d_k - rank d_{k+1} for k up to the stored dimension.

    The top entry is only a true Betti number when nothing above the cap
    was truncated.
    """
    if x.dim < 0:
        return BettiVector(field, (), True)
    ranks = boundary_ranks(x, field) + [0]
    top = x.dim
    b = tuple(len(x.faces(k)) - ranks[k] - ranks[k + 1] for k in range(top + 1))
    chi = euler_characteristic(x, top)
    return BettiVector(field, b, sum((-1) ** k * v for k, v in enumerate(b)) == chi)


def betti_pair(x: Complex) -> tuple[BettiVector, BettiVector]:
    return betti(x, GF2), betti(x, Q)


def two_cycle_space(x: Complex) -> list[tuple[Simplex, ...]]:
    """GF(2) basis of the kernel of d_2, each vector as a triangle tuple.

    Triangles are processed in sorted order so the basis is reproducible.
    """
    tris = x.triangles
    out = []
    for combo in kernel_gf2(boundary_gf2(x, 2)):
        out.append(tuple(tris[j] for j in range(len(tris)) if combo >> j & 1))
    return out


def b2_triangles(triangles: Sequence[Simplex], field: str = Q) -> int:
    """b_2 of the pure complex spanned by ``triangles``."""
    if not triangles:
        return 0
    if field == GF2:
        cols, _ = triangle_boundary(triangles)
        return len(triangles) - rank_gf2(cols)
    cols, _ = triangle_boundary(triangles, signed=True)
    return len(triangles) - rank_q(cols)


def composite_is_zero(x: Complex, k: int) -> bool:
    """d_{k-1} d_k = 0 over the integers."""
    if k < 2 or k >= len(x.simplices):
        return True
    lower = boundary_signed(x, k - 1)
    for col in boundary_signed(x, k):
        acc: dict[int, int] = {}
        for r, v in col.items():
            for rr, vv in lower[r].items():
                acc[rr] = acc.get(rr, 0) + v * vv
        if any(acc.values()):
            return False
    return True
