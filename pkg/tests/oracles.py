"""Independent brute-force oracles shared by the test modules.

None of these call the library routine they are used to check.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

from cliquetopo.complex import Complex
from cliquetopo.filling import canonical, free_reduce


def subset_densities(n: int, edges: list[tuple[int, int]]) -> dict[frozenset, Fraction]:
    """e(S)/|S| for every nonempty vertex subset S."""
    out = {}
    for k in range(1, n + 1):
        for s in combinations(range(n), k):
            ss = set(s)
            e = sum(1 for i, j in edges if i in ss and j in ss)
            out[frozenset(s)] = Fraction(e, k)
    return out


def density_oracle(n: int, edges: list[tuple[int, int]]) -> tuple[Fraction, bool, bool]:
    """(max density, balanced, strictly balanced) by exhaustive enumeration."""
    dens = subset_densities(n, edges)
    best = max(dens.values())
    whole = frozenset(range(n))
    balanced = dens[whole] == best
    strictly = balanced and all(d < best for s, d in dens.items() if s != whole)
    return best, balanced, strictly


def injection_count(host_n: int, host_edges: set, pat_n: int, pat_edges: list) -> int:
    """Injective maps pattern -> host sending edges to edges."""
    count = 0
    for img in permutations(range(host_n), pat_n):
        if all((min(img[a], img[b]), max(img[a], img[b])) in host_edges for a, b in pat_edges):
            count += 1
    return count


def triangle_scan(n: int, edges: set) -> int:
    return sum(
        1
        for a, b, c in combinations(range(n), 3)
        if (a, b) in edges and (a, c) in edges and (b, c) in edges
    )


def disc_words(x: Complex, max_triangles: int) -> dict[tuple, int]:
    """Boundary words of diagrams grown one glued triangle at a time.

    Level k holds the freely reduced boundary words (up to rotation and
    reversal) of diagrams with k triangles; every minimal diagram of a
    loop can be built this way, shelling off one triangle at a time.
    Returns word -> least k.
    """
    third: dict[tuple, list[int]] = {}
    for a, b, c in x.triangles:
        for (p, q), r in (((a, b), c), ((a, c), b), ((b, c), a)):
            third.setdefault((p, q), []).append(r)
    best: dict[tuple, int] = {}
    level = {canonical(t) for t in x.triangles}
    for k in range(1, max_triangles + 1):
        for w in level:
            best.setdefault(w, k)
        if k == max_triangles:
            break
        nxt = set()
        for w in level:
            n = len(w)
            for i in range(n):
                a, b = w[i], w[(i + 1) % n]
                for c in third.get((min(a, b), max(a, b)), ()):
                    new = free_reduce(w[: i + 1] + (c,) + w[i + 1:])
                    if new:
                        nxt.add(canonical(new))
        level = nxt
    return best


def gf2_rank(rows: list[int]) -> int:
    """Plain Gaussian elimination on int bitmasks (lowest-bit pivots)."""
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        pivot = rows.pop()
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
        rank += 1
    return rank


def q_rank(matrix: list[list[int]]) -> int:
    """Rank over Q with Fractions, dense."""
    m = [[Fraction(v) for v in row] for row in matrix]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def betti_dense(x: Complex, field: str) -> tuple[int, ...]:
    """Betti numbers from dense boundary matrices, independent of the library."""
    levels = [list(x.faces(k)) for k in range(x.dim + 1)]
    ranks = [0]
    for k in range(1, len(levels)):
        idx = {s: i for i, s in enumerate(levels[k - 1])}
        if field == "GF2":
            rows = []
            for s in levels[k]:
                v = 0
                for i in range(len(s)):
                    v |= 1 << idx[s[:i] + s[i + 1:]]
                rows.append(v)
            ranks.append(gf2_rank(rows))
        else:
            mat = []
            for s in levels[k]:
                row = [0] * len(levels[k - 1])
                for i in range(len(s)):
                    row[idx[s[:i] + s[i + 1:]]] = (-1) ** i
                mat.append(row)
            ranks.append(q_rank(mat) if mat else 0)
    ranks.append(0)
    return tuple(len(levels[k]) - ranks[k] - ranks[k + 1] for k in range(len(levels)))


def canonical_triangles(tris) -> tuple:
    """Relabelling-invariant form: lexicographically least relabelled face list."""
    verts = sorted({v for t in tris for v in t})
    best = None
    for perm in permutations(range(len(verts))):
        label = dict(zip(verts, perm))
        form = tuple(sorted(tuple(sorted(label[v] for v in t)) for t in tris))
        if best is None or form < best:
            best = form
    return best


def closed_b2_zero_census(n: int) -> set:
    """Every closed strongly connected pure 2-complex on <= n vertices with b2(Q) = 0
    and v/e > 1/3, by scanning all subsets of the triangles of the full simplex.
    b2 is the corank of the signed triangle boundary (small float rank is exact here)."""
    import numpy as np

    tris = list(combinations(range(n), 3))
    edges = list(combinations(range(n), 2))
    eidx = {e: i for i, e in enumerate(edges)}
    inc = np.zeros((len(tris), len(edges)), dtype=np.int16)
    vinc = np.zeros((len(tris), n), dtype=np.int16)
    signed = np.zeros((len(tris), len(edges)))
    for i, t in enumerate(tris):
        vinc[i, list(t)] = 1
        for e in combinations(t, 2):
            inc[i, eidx[e]] = 1
        a, b, c = t
        signed[i, [eidx[(b, c)], eidx[(a, c)], eidx[(a, b)]]] = (1, -1, 1)
    found = set()
    masks = np.arange(1, 1 << len(tris), dtype=np.int64)
    for lo in range(0, len(masks), 1 << 16):
        chunk = masks[lo:lo + (1 << 16)]
        bits = ((chunk[:, None] >> np.arange(len(tris))) & 1).astype(np.int16)
        deg = bits @ inc
        nv = np.count_nonzero(bits @ vinc, axis=1)
        ne = np.count_nonzero(deg, axis=1)
        ok = ~np.any(deg == 1, axis=1) & (3 * nv > ne)
        for row in np.nonzero(ok)[0]:
            chosen = [tris[i] for i in range(len(tris)) if bits[row, i]]
            if not _strongly_connected(chosen):
                continue
            rows = [i for i in range(len(tris)) if bits[row, i]]
            if np.linalg.matrix_rank(signed[rows]) == len(rows):
                found.add(canonical_triangles(chosen))
    return found


def _strongly_connected(tris) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j, t in enumerate(tris):
            if j not in seen and len(set(tris[i]) & set(t)) == 2:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(tris)
