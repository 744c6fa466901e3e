import json
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bettiwalk import OracleScaleError, instances
from bettiwalk import oracle
from bettiwalk.oracle import (
    build_boundary,
    exact_betti,
    exact_spectrum,
    exact_trace_power,
    integer_rank,
    laplacian_parts,
)

from families import clique_family, general_family


def test_boundary_examples(hollow, full):
    b = build_boundary(hollow, 1)
    assert b.shape == (3, 3)
    assert b.matrix.T.tolist() == [[-1, 1, 0], [-1, 0, 1], [0, -1, 1]]
    assert build_boundary(full, 2).matrix.ravel().tolist() == [1, -1, 1]
    assert build_boundary(hollow, 0).shape == (0, 3)


@pytest.mark.parametrize("cplx", clique_family(6, seed=51) + general_family(6, seed=52), ids=repr)
def test_chain_identity(cplx):
    for k in range(1, cplx.dim + 1):
        assert not np.any(build_boundary(cplx, k).matrix @ build_boundary(cplx, k + 1).matrix)


def test_betti_examples(hollow, full):
    assert integer_rank(build_boundary(hollow, 1).matrix) == 2
    assert exact_betti(hollow, 1) == 1
    assert integer_rank(build_boundary(full, 2).matrix) == 1
    assert exact_betti(full, 1) == 0
    assert exact_betti(instances.cycle_graph(6), 1) == 1
    assert exact_spectrum(instances.cycle_graph(6), 1).betti_spectral == 1


def test_octahedron_is_a_sphere():
    octa = instances.octahedron()
    assert [exact_betti(octa, k) for k in range(3)] == [1, 0, 1]
    assert octa.num_faces(2) == 8


def test_betti0_counts_components():
    assert exact_betti(instances.disjoint_edges(2), 0) == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.data())
def test_integer_rank_matches_sympy(rows, cols, data):
    sympy = pytest.importorskip("sympy")
    m = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=cols, max_size=cols), min_size=rows, max_size=rows))
    assert integer_rank(m) == sympy.Matrix(m).rank()


def test_integer_rank_degenerate():
    assert integer_rank(np.zeros((0, 4), dtype=int)) == 0
    assert integer_rank([[0, 0], [0, 0]]) == 0
    assert integer_rank([[2, 4], [1, 2]]) == 1


def test_spectrum_hollow(hollow):
    s = exact_spectrum(hollow, 1)
    assert s.eigenvalues == pytest.approx([0, 3, 3], abs=1e-12)
    assert s.lambda_max == pytest.approx(3)
    assert s.gap == pytest.approx(3)
    assert s.betti_spectral == 1
    assert json.loads(json.dumps(s.to_dict()))["betti_spectral"] == 1


@pytest.mark.parametrize("cplx", clique_family(8, seed=61) + general_family(8, seed=62), ids=repr)
def test_spectral_facts(cplx):
    for k in range(1, cplx.dim + 1):
        s = exact_spectrum(cplx, k)
        assert cplx.max_up_degree(k) + k + 1 - 1e-9 <= s.lambda_max <= cplx.n + 1e-9
        assert min(s.eigenvalues) >= -1e-9 * s.lambda_max
        assert s.betti_spectral == exact_betti(cplx, k)
        down, up = laplacian_parts(cplx, k)
        assert not np.any(down @ up)
        top = max(np.linalg.eigvalsh(down.astype(float))[-1], np.linalg.eigvalsh(up.astype(float))[-1] if up.size else 0)
        assert s.lambda_max == pytest.approx(top, abs=1e-8)


def test_trace_power_examples(hollow):
    assert exact_trace_power(hollow, 1, 0, 3.0) == pytest.approx(1.0)
    assert exact_trace_power(hollow, 1, 2, 3.0) == pytest.approx(1 / 3)
    assert exact_trace_power(hollow, 1, 200, 3.0) == pytest.approx(1 / 3)


@pytest.mark.parametrize("cplx", clique_family(5, seed=71), ids=repr)
def test_trace_power_matrix_vs_eigen(cplx):
    k = 1
    lam = exact_spectrum(cplx, k).lambda_max
    h = oracle.dense_h(cplx, k, lam)
    evals = np.linalg.eigvalsh(h)
    for z in (1, 3, 7, 64):
        assert exact_trace_power(cplx, k, z, lam) == pytest.approx(np.sum(evals**z) / len(evals), abs=1e-12)


def test_trace_power_brute_force_walk_sum(hollow):
    # sum over all closed index sequences of the product of H entries
    h = oracle.dense_h(hollow, 1, 3.0)
    d = h.shape[0]
    for z in (1, 2, 3):
        total = 0.0
        for seq in product(range(d), repeat=z):
            for i in range(d):
                path = (i,) + seq
                if path[-1] == i:
                    total += np.prod([h[path[t + 1], path[t]] for t in range(z)])
        assert exact_trace_power(hollow, 1, z, 3.0) == pytest.approx(total / d)


def test_scale_limits(monkeypatch):
    k6 = instances.complete_graph(6)
    monkeypatch.setattr(oracle, "MAX_DENSE_ENTRIES", 10)
    with pytest.raises(OracleScaleError):
        build_boundary(k6, 1)
    monkeypatch.setattr(oracle, "MAX_SPECTRUM_FACES", 5)
    with pytest.raises(OracleScaleError):
        exact_spectrum(k6, 1)
