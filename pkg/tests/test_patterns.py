import math
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from cliquetopo.complex import Complex, clique_complex, density_report, euler_characteristic, is_closed_surface
from cliquetopo.fixtures import build
from cliquetopo.graph import Graph, derive_seed, p_from_alpha, sample_gnp
from cliquetopo.patterns import (
    PatternError,
    automorphism_count,
    count_comparison_experiment,
    count_embeddings,
    expected_count,
    get_pattern,
    list_embeddings,
    load_registry,
    make_pattern,
    relative_nu,
    unlabeled_count,
    write_registry,
)
from oracles import injection_count

PATTERN_NAMES = ["triangle", "two_triangles", "k4", "s1", "s2", "p2"]


def test_registry_loads_and_validates():
    reg = load_registry()
    assert sorted(reg) == sorted(PATTERN_NAMES)
    assert reg["p2"].nu_tilde == Fraction(11, 30)
    assert reg["p2"].complex.f_vector == (11, 30, 20)
    assert reg["k4"].nu_tilde == Fraction(2, 3)
    assert reg["s2"].nu_tilde == Fraction(5, 9)
    assert reg["k4"].threshold_exponent == Fraction(-2, 3)


def test_registry_rejects_wrong_declared_value(tmp_path):
    write_registry(tmp_path)
    reg = tmp_path / "registry.tsv"
    reg.write_text(reg.read_text().replace("11/30", "1/3"))
    with pytest.raises(PatternError):
        load_registry(tmp_path)


def test_make_pattern_rejects_disconnected():
    x = Complex.from_simplices([(0, 1, 2), (3, 4, 5)])
    with pytest.raises(PatternError):
        make_pattern("split", x)


def test_k3_into_k4():
    assert count_embeddings(Graph.complete(4), get_pattern("triangle")).count == 24


def test_k4_into_triangle_free():
    g = Graph.from_edges(6, [(i, j) for i in range(3) for j in range(3, 6)])
    res = count_embeddings(g, get_pattern("k4"))
    assert res.count == 0 and not res.found


def test_automorphisms():
    counts = {name: automorphism_count(get_pattern(name)) for name in PATTERN_NAMES}
    assert counts == {"triangle": 6, "two_triangles": 4, "k4": 24, "s1": 24, "s2": 12, "p2": 8}


def test_unlabeled_view():
    c = count_embeddings(Graph.complete(5), get_pattern("k4"))
    assert unlabeled_count(c, get_pattern("k4")) == 5


def test_cap_saturates():
    res = count_embeddings(Graph.complete(7), get_pattern("k4"), cap=10)
    assert res.count == 10 and res.saturated


def test_counts_match_injection_oracle():
    rng = random.Random(17)
    pats = [get_pattern(n) for n in ("triangle", "two_triangles", "k4", "s1", "s2")]
    for _ in range(60):
        n = rng.randint(4, 9)
        p = rng.uniform(0.3, 0.9)
        g = sample_gnp(n, p, rng.randrange(2**32))
        hedges = set(g.edges())
        for pat in pats:
            expected = injection_count(n, hedges, pat.v, pat.graph.edges()) if pat.v <= n else 0
            assert count_embeddings(g, pat).count == expected


def test_p2_self_and_complete_host():
    # self-embeddings are automorphisms; checked against networkx isomorphism enumeration
    p2 = get_pattern("p2")
    h = nx.Graph(p2.graph.edges())
    autos = sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(h, h).isomorphisms_iter())
    assert count_embeddings(p2.graph, p2).count == autos == 8
    assert count_embeddings(Graph.complete(11), p2).count == math.factorial(11)


def test_list_embeddings_are_embeddings():
    g = sample_gnp(30, 0.4, 9)
    pat = get_pattern("s2")
    for emb in list_embeddings(g, pat.graph, 50):
        assert len(set(emb.values())) == pat.v
        assert all(g.has_edge(emb[a], emb[b]) for a, b in pat.graph.edges())


def test_p2_containment_window():
    p2 = get_pattern("p2")
    hi = lo = 0
    for t in range(10):
        hi += count_embeddings(sample_gnp(300, p_from_alpha(300, -0.33), derive_seed(1, t)), p2, cap=1).found
        lo += count_embeddings(sample_gnp(300, p_from_alpha(300, -0.42), derive_seed(2, t)), p2, cap=1).found
    assert hi >= 8 and lo <= 2


def test_expected_count_formula():
    assert expected_count(get_pattern("triangle"), 10, 0.5) == pytest.approx(720 * 0.125)


# -- relative density ---------------------------------------------------------


def test_relative_nu_p2_disc():
    x = build("p2_disc_3")
    core = build("rp2_6")
    assert euler_characteristic(x, 2) == 2 and euler_characteristic(core, 2) == 1
    assert relative_nu(x, core) == Fraction(1, 3)


def test_relative_nu_rejects_equal_edges():
    x = Complex.from_simplices([(0, 1, 2)])
    y = Complex.from_simplices([(0, 1), (1, 2), (0, 2)])
    with pytest.raises(PatternError):
        relative_nu(x, y)
    with pytest.raises(PatternError):
        relative_nu(y, Complex.from_simplices([(5, 6)]))


@st.composite
def nested_pairs(draw):
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    n = rng.randint(5, 14)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.45]
    x = clique_complex(Graph.from_edges(n, edges), 2)
    keep = [v for v in range(n) if rng.random() < 0.6]
    faces = [s for level in x.simplices for s in level if set(s) <= set(keep) and rng.random() < 0.8]
    y = Complex.from_simplices(faces, dim_cap=2) if faces else Complex.empty()
    y = Complex.from_simplices([s for s in faces if all(y.contains(f) for f in _subfaces(s))], dim_cap=2) if faces else y
    return x, y


def _subfaces(s):
    return [s[:i] + s[i + 1:] for i in range(len(s)) if len(s) > 1]


@settings(max_examples=500, deadline=None)
@given(nested_pairs())
def test_relative_nu_interval(pair):
    s1, s2 = pair
    if len(s1.edges) - len(s2.edges) <= 0 or not s2.edges:
        return
    rel = relative_nu(s1, s2)
    nu1 = Fraction(len(s1.vertices), len(s1.edges))
    nu2 = Fraction(len(s2.vertices), len(s2.edges))
    assert min(nu2, rel) <= nu1 <= max(nu2, rel)


CLOSED_PIECES = ["tetrahedron_boundary", "rp2_6", "torus_7", "octahedron", "rp2_11"]


def _glue(base: Complex, piece: Complex, k: int, rng: random.Random) -> Complex:
    # attach a relabelled copy of piece, identifying one (k-1)-simplex of each
    tau = rng.choice(base.simplices[k - 1])
    sigma = rng.choice(piece.simplices[k - 1])
    fresh = max(base.vertices) + 1
    label = {}
    for v in piece.vertices:
        if v in sigma:
            label[v] = tau[sigma.index(v)]
        else:
            label[v] = fresh
            fresh += 1
    faces = list(base.triangles) + [tuple(sorted(label[v] for v in t)) for t in piece.triangles]
    return Complex.from_simplices(faces, dim_cap=2)


@st.composite
def closed_over_surface(draw):
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    s2 = build(rng.choice(CLOSED_PIECES))
    s1 = s2
    for _ in range(rng.randint(1, 3)):
        s1 = _glue(s1, build(rng.choice(CLOSED_PIECES)), rng.randint(1, 3), rng)
    return s1, s2


@settings(max_examples=200, deadline=None)
@given(closed_over_surface())
def test_relative_nu_closed_over_pseudosurface(pair):
    s1, s2 = pair
    assert density_report(s1).closed and is_closed_surface(s2)
    chi1, chi2 = euler_characteristic(s1, 2), euler_characteristic(s2, 2)
    if chi1 > chi2:
        return
    rel = relative_nu(s1, s2)
    assert rel <= Fraction(1, 3)
    if chi1 < chi2 or density_report(s1).L < 0:
        assert rel < Fraction(1, 3)


def test_relative_nu_equality_case():
    # two projective planes wedged at a vertex: same chi and L = 0, so the ratio is exactly 1/3
    s2 = build("rp2_6")
    s1 = Complex.from_simplices(list(s2.triangles) + [tuple(v + 5 if v else 0 for v in t) for t in s2.triangles])
    assert density_report(s1).closed and density_report(s1).L == 0
    assert euler_characteristic(s1, 2) == euler_characteristic(s2, 2)
    assert relative_nu(s1, s2) == Fraction(1, 3)


def test_comparison_experiment_in_sandwich():
    s1, s2 = get_pattern("two_triangles"), get_pattern("triangle")
    res = count_comparison_experiment(s1, s2, n=200, alpha=-0.75, trials=30, seed=3)
    assert res.in_sandwich and not res.warning
    assert res.p_t1_less >= 0.9
    rel = relative_nu(s1.complex, s2.complex)
    n, p = 200, p_from_alpha(200, -0.75)
    de = s1.e - s2.e
    assert res.expected_ratio == pytest.approx((n ** float(rel) * p) ** de, rel=0.05)


def test_comparison_rejects_trivial_nesting():
    s = get_pattern("triangle")
    with pytest.raises(PatternError):
        count_comparison_experiment(s, s, 50, -0.7, 1)
