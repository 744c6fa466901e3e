from collections import Counter
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bettiwalk import CliqueComplex, EmptyDimensionError, GeneralComplex, InputError
from bettiwalk import instances

from families import brute_force_faces, clique_family, general_family


def test_contains_examples(hollow):
    triangle_graph = instances.complete_graph(3)
    assert triangle_graph.contains((1, 2, 3))
    assert not hollow.contains((1, 2, 3))
    assert not instances.path_graph(3).contains((1, 3))


def test_contains_rejects_out_of_range(hollow):
    with pytest.raises(InputError):
        hollow.contains((1, 4))
    with pytest.raises(InputError):
        instances.path_graph(3).contains((0, 1))


def test_contains_normalizes_order(hollow):
    assert hollow.contains((2, 1))


def test_enumerate_examples(hollow):
    assert hollow.faces(1) == [(1, 2), (1, 3), (2, 3)]
    k4 = instances.complete_graph(4)
    assert k4.faces(2) == brute_force_faces(k4, 2)
    assert len(k4.faces(2)) == 4
    assert instances.path_graph(3).faces(1) == [(1, 2), (2, 3)]
    assert hollow.faces(2) == []


def test_enumeration_is_cached(hollow):
    assert hollow.faces(1) is hollow.faces(1)


@pytest.mark.parametrize("cplx", clique_family(8, seed=5) + general_family(8, seed=6), ids=repr)
def test_enumeration_matches_brute_force(cplx):
    for k in range(cplx.dim + 2):
        assert cplx.faces(k) == brute_force_faces(cplx, k)
        assert cplx.num_faces(k) <= comb(cplx.n, k + 1)


@pytest.mark.parametrize("cplx", general_family(10, seed=9), ids=repr)
def test_downward_closed(cplx):
    for k in range(1, cplx.dim + 1):
        for f in cplx.faces(k):
            for sub in combinations(f, k):
                assert cplx.contains(sub)


def test_uniform_sampling_three_faces(hollow, rng):
    draws = Counter(hollow.sample_face(1, rng) for _ in range(30000))
    se = np.sqrt((1 / 3) * (2 / 3) / 30000)
    for f in hollow.faces(1):
        assert abs(draws[f] / 30000 - 1 / 3) <= 3 * se


def test_sampling_degenerate_support(full, rng):
    assert all(full.sample_face(2, rng) == (1, 2, 3) for _ in range(20))


def test_sampling_coupon_collector(rng):
    k4 = instances.complete_graph(4)
    assert {k4.sample_face(2, rng) for _ in range(1000)} == set(k4.faces(2))


def test_sampling_empty_dimension(hollow, rng):
    with pytest.raises(EmptyDimensionError):
        hollow.sample_face(2, rng)


def test_sampling_deterministic(hollow):
    a = [hollow.sample_face(1, np.random.default_rng(3)) for _ in range(5)]
    b = [hollow.sample_face(1, np.random.default_rng(3)) for _ in range(5)]
    assert a == b


def test_sampling_chi_squared():
    scipy_stats = pytest.importorskip("scipy.stats")
    g = instances.complete_graph(7)  # 35 triangles
    faces = g.faces(2)
    rng = np.random.default_rng(99)
    idx = {f: i for i, f in enumerate(faces)}
    counts = np.zeros(len(faces))
    for _ in range(100_000):
        counts[idx[g.sample_face(2, rng)]] += 1
    assert scipy_stats.chisquare(counts).pvalue > 0.01


def test_up_degree_examples(full, hollow):
    assert full.up_degree((1, 2)) == 1
    assert hollow.up_degree((1, 2)) == 0
    k5 = instances.complete_graph(5)
    for e in k5.faces(1):
        brute = sum(1 for t in k5.faces(2) if set(e) <= set(t))
        assert k5.up_degree(e) == brute == 3


def test_up_degree_rejects_non_face(hollow):
    with pytest.raises(InputError):
        hollow.up_degree((1, 2, 3))


@pytest.mark.parametrize("cplx", clique_family(10, seed=11) + general_family(10, seed=12), ids=repr)
def test_max_up_degree_bound(cplx):
    for k in range(cplx.dim + 1):
        assert cplx.max_up_degree(k) + k + 1 <= cplx.n


def test_general_complex_facets_and_duplicates():
    c = GeneralComplex(4, [(1, 2, 3), (3, 2, 1), (1, 2), (4,)])
    assert c.facets == [(1, 2, 3), (4,)]
    assert c.faces(0) == [(1,), (2,), (3,), (4,)]
    assert c.dim == 2


def test_clique_rejects_self_loop():
    with pytest.raises(InputError):
        CliqueComplex(3, [(1, 1)])


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 8), st.data())
def test_clique_faces_are_cliques(n, data):
    pairs = list(combinations(range(1, n + 1), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True))
    g = CliqueComplex(n, edges)
    es = set(edges)
    for k in range(g.dim + 1):
        for f in g.faces(k):
            assert all(p in es for p in combinations(f, 2))
