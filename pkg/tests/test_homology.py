import random

import pytest
from hypothesis import given, settings

from cliquetopo.complex import Complex, clique_complex, euler_characteristic
from cliquetopo.fixtures import build
from cliquetopo.graph import p_from_alpha, sample_gnp
from cliquetopo.homology import (
    CHECK_PRIMES,
    GF2,
    Q,
    RankUncertainError,
    betti,
    boundary_signed,
    composite_is_zero,
    rank_mod_p,
    rank_q,
    rank_q_exact,
    two_cycle_space,
)
from oracles import betti_dense
from strategies import complexes, random_complex


def test_tetrahedron_boundary():
    x = build("tetrahedron_boundary")
    assert betti(x, GF2).b == (1, 0, 1)
    assert betti(x, Q).b == (1, 0, 1)


@pytest.mark.parametrize("name", ["rp2_6", "rp2_11", "p2_quotient"])
def test_projective_planes(name):
    x = build(name)
    assert betti(x, GF2).b == (1, 1, 1)
    assert betti(x, Q).b == (1, 0, 0)


def test_torus_and_klein():
    assert betti(build("torus_7"), GF2).b == (1, 2, 1)
    assert betti(build("torus_7"), Q).b == (1, 2, 1)
    assert betti(build("klein_grid"), GF2).b == (1, 2, 1)
    assert betti(build("klein_grid"), Q).b == (1, 1, 0)


def test_full_simplex_is_acyclic():
    x = Complex.from_simplices([(0, 1, 2, 3, 4)])
    assert betti(x, GF2).b == (1, 0, 0, 0, 0)


@settings(max_examples=80, deadline=None)
@given(complexes(max_vertices=12))
def test_betti_matches_dense_oracle(x):
    for field in (GF2, Q):
        bv = betti(x, field)
        assert bv.b == betti_dense(x, field)
        assert bv.euler_check
        assert sum((-1) ** k * b for k, b in enumerate(bv.b)) == euler_characteristic(x)


@settings(max_examples=60, deadline=None)
@given(complexes(max_vertices=16))
def test_boundary_squared_zero(x):
    for k in range(2, len(x.simplices)):
        assert composite_is_zero(x, k)


@settings(max_examples=60, deadline=None)
@given(complexes(max_vertices=16))
def test_b0_counts_components(x):
    g, _ = x.one_skeleton()
    assert betti(x, GF2)[0] == betti(x, Q)[0] == len(g.components())


def test_q_rank_agrees_with_primes_on_samples():
    rng = random.Random(7)
    for _ in range(40):
        x = random_complex(rng, 30)
        for k in range(1, len(x.simplices)):
            cols = boundary_signed(x, k)
            r = rank_q_exact(cols)
            assert all(rank_mod_p(cols, p) == r for p in CHECK_PRIMES)


def test_rank_uncertain_error_on_disagreement():
    # 2x2 matrix with determinant 1_000_000_007: full rank over Q, rank 1 mod that prime
    cols = [{0: 1, 1: 0}, {0: 3, 1: 1_000_000_007}]
    cols = [{r: v for r, v in c.items() if v} for c in cols]
    assert rank_q(cols, check=False) == 2
    with pytest.raises(RankUncertainError):
        rank_q(cols)


def test_two_cycle_space_examples():
    tet = build("tetrahedron_boundary")
    assert two_cycle_space(tet) == [tet.triangles]
    assert two_cycle_space(Complex.from_simplices([(0, 1, 2)])) == []
    wedge = build("wedge_of_spheres")
    basis = two_cycle_space(wedge)
    assert len(basis) == 2
    spheres = sorted(tuple(sorted(b)) for b in basis)
    assert all(len(s) == 4 for s in spheres)
    assert set(spheres[0]).isdisjoint(spheres[1])


def test_kahle_b1_small_sample():
    # alpha = -0.8 lies in the window where H_1 over Q is nonzero
    n = 60
    p = p_from_alpha(n, -0.8)
    hits = sum(betti(clique_complex(sample_gnp(n, p, s), 2), Q)[1] > 0 for s in range(20))
    assert hits >= 16
