import random
from fractions import Fraction

import pytest

from cliquetopo.complex import Complex
from cliquetopo.filling import (
    FILLED,
    NOT_FILLABLE,
    NOT_NULLHOMOTOPIC,
    LoopSpec,
    canonical,
    chain_boundary,
    filling_area,
    free_reduce,
    loop_chain,
    restricted_isoperimetric_ratio,
    simple_cycles,
)
from cliquetopo.fixtures import build
from oracles import betti_dense, disc_words

ORACLE_CAPS = [
    ("tetrahedron_boundary", 8),
    ("bipyramid", 8),
    ("octahedron", 8),
    ("disc_r5", 8),
    ("rp2_6", 7),
    ("icosahedron", 6),
    ("torus_7", 6),
    ("torus_grid", 6),
]


def _nonzero_in_h1(x: Complex, loop) -> bool:
    # loop is a GF2 or Q boundary iff adding it to the image of d2 does not raise the rank
    import numpy as np

    edges = list(x.edges)
    idx = {e: i for i, e in enumerate(edges)}
    cols = [chain_boundary([t]) for t in x.triangles]
    mat = np.zeros((len(cols), len(edges)))
    for i, c in enumerate(cols):
        for e, v in c.items():
            mat[i, idx[e]] = v
    vec = np.zeros(len(edges))
    for e, v in loop_chain(loop).items():
        vec[idx[e]] = v
    q = np.linalg.matrix_rank(np.vstack([mat, vec])) > np.linalg.matrix_rank(mat)
    m2 = (np.abs(mat) % 2).astype(np.uint8)
    v2 = (np.abs(vec) % 2).astype(np.uint8)
    return q or _gf2_rank(np.vstack([m2, v2])) > _gf2_rank(m2)


def _gf2_rank(m):
    m = m.copy()
    r = 0
    for c in range(m.shape[1]):
        piv = next((i for i in range(r, m.shape[0]) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        for i in range(m.shape[0]):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
    return r


@pytest.mark.parametrize("name,cap", ORACLE_CAPS)
def test_matches_disc_oracle(name, cap):
    x = build(name)
    oracle = disc_words(x, cap)
    for loop in simple_cycles(x, 6):
        expected = oracle.get(canonical(free_reduce(loop)))
        plain = filling_area(x, loop, cap, use_homology=False)
        if expected is None:
            assert plain.status == NOT_FILLABLE
        else:
            assert plain.status == FILLED and plain.area == expected
            assert chain_boundary(plain.disc) == loop_chain(loop)
            assert len(plain.disc) == plain.area
        pruned = filling_area(x, loop, cap)
        if pruned.status == NOT_NULLHOMOTOPIC:
            assert expected is None and _nonzero_in_h1(x, loop)
        else:
            assert (pruned.status, pruned.area) == (plain.status, plain.area)


def test_every_triangle_boundary_has_area_one():
    for name in ("icosahedron", "torus_grid", "rp2_11", "p2_disc_4"):
        x = build(name)
        for t in x.triangles:
            r = filling_area(x, t, 4)
            assert r.status == FILLED and r.area == 1


def test_bipyramid_equator_area_three():
    x = build("bipyramid")
    equator = next(t for t in simple_cycles(x, 3) if t not in x.triangles and tuple(sorted(t)) not in x.triangles)
    assert filling_area(x, equator, 8).area == 3


def test_projective_plane_essential_loop():
    x = build("rp2_11")
    # the clean triangulation has no empty 3-cycles; the shortest essential loop has length 4
    short = [c for c in simple_cycles(x, 4) if _nonzero_in_h1(x, c)]
    assert short and min(len(c) for c in short) == 4
    loop = short[0]
    assert filling_area(x, loop, 16).status == NOT_NULLHOMOTOPIC
    assert filling_area(x, loop, 16, use_homology=False).status == NOT_FILLABLE
    assert all(len(c) > 3 or c in x.triangles or tuple(sorted(c)) in x.triangles for c in simple_cycles(x, 3))


def test_monotone_in_cap():
    x = build("octahedron")
    rng = random.Random(0)
    loops = simple_cycles(x, 6)
    for loop in rng.sample(loops, 10):
        areas = [filling_area(x, loop, cap, use_homology=False).area for cap in range(1, 9)]
        seen = [a for a in areas if a is not None]
        assert seen == sorted(seen, reverse=True) or len(set(seen)) == 1
        # once filled, larger caps keep the same minimum
        first = next((i for i, a in enumerate(areas) if a is not None), None)
        if first is not None:
            assert all(a == areas[first] for a in areas[first:])


def test_loop_validation():
    x = build("tetrahedron_boundary")
    with pytest.raises(ValueError):
        LoopSpec((0, 1)).validate(x)
    with pytest.raises(ValueError):
        filling_area(build("octahedron"), (0, 1, 5), 4)


def test_single_triangle_ratio():
    r = restricted_isoperimetric_ratio(Complex.from_simplices([(0, 1, 2)]), 6, 8)
    assert r.ratio == 3 and r.loops_checked == 1


def test_tetrahedron_ratio_matches_oracle():
    x = build("tetrahedron_boundary")
    r = restricted_isoperimetric_ratio(x, 4, 8)
    oracle = disc_words(x, 8)
    expected = min(Fraction(len(c), oracle[canonical(c)]) for c in simple_cycles(x, 4))
    assert r.ratio == expected == 2
    assert len(r.loop) == 4 and r.area == 2


@pytest.mark.parametrize(
    "length_cap,area_cap,ratio",
    [(6, 6, Fraction(1)), (8, 8, Fraction(1)), (10, 10, Fraction(4, 5))],
)
def test_torus_ratio_at_caps(length_cap, area_cap, ratio):
    r = restricted_isoperimetric_ratio(build("torus_grid"), length_cap, area_cap)
    assert r.ratio == ratio


@pytest.mark.slow
def test_torus_ratio_non_increasing_to_cap_12():
    x = build("torus_grid")
    ratios = [restricted_isoperimetric_ratio(x, lc, ac).ratio for lc, ac in [(6, 6), (8, 8), (10, 12)]]
    assert ratios == sorted(ratios, reverse=True)
    assert ratios[-1] == Fraction(4, 5)


def test_nullhomologous_detection_agrees_with_oracle():
    for name in ("torus_7", "klein_grid", "rp2_6", "genus_2"):
        x = build(name)
        for loop in simple_cycles(x, 5)[:60]:
            r = filling_area(x, loop, 2)
            assert (r.status == NOT_NULLHOMOTOPIC) == _nonzero_in_h1(x, loop)
