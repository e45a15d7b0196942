import math
import random

import numpy as np
import pytest

from randext import expander
from randext.bits import BitString
from randext.expander import ExpanderSpec


def test_build_rounds_to_square():
    spec = ExpanderSpec.build(10)
    assert spec.n == 16 and spec.base_m == 4
    spec2 = ExpanderSpec.build(25)
    assert spec2.n == 25


def test_zero_vertex_fixed_by_first_map():
    # (0,0) under label 0 ("x += 2y") stays put
    spec = ExpanderSpec.build(9)
    assert spec.base_m == 3
    assert expander.neighbor(0, 0, spec) == 0


def test_neighbor_range_checks():
    spec = ExpanderSpec.build(16)
    with pytest.raises(ValueError):
        expander.neighbor(16, 0, spec)
    with pytest.raises(ValueError):
        expander.neighbor(0, spec.D, spec)


def test_undirected_consistency():
    rng = random.Random(0)
    spec = ExpanderSpec.build(49, max_lambda=0.7)  # power > 1
    for _ in range(200):
        v = rng.randrange(spec.n)
        e = rng.randrange(spec.D)
        w = expander.neighbor(v, e, spec)
        einv = expander.inverse_label(e, spec)
        assert expander.neighbor(w, einv, spec) == v


def test_degree_regularity_full_scan():
    spec = ExpanderSpec.build(25)
    assert spec.n == 25
    for v in range(spec.n):
        nbrs = [expander.neighbor(v, e, spec) for e in range(spec.D)]
        assert len(nbrs) == spec.D
        # every neighbor is a valid vertex
        assert all(0 <= w < spec.n for w in nbrs)


def test_in_degree_equals_out_degree():
    # the 8 maps pair into inverses, so the multigraph is symmetric
    spec = ExpanderSpec.build(49)
    counts = {}
    for v in range(spec.n):
        for e in range(spec.D):
            w = expander.neighbor(v, e, spec)
            counts[w] = counts.get(w, 0) + 1
    assert all(c == spec.D for c in counts.values())


def test_walk_length_zero_parses_start():
    spec = ExpanderSpec.build(16)
    seed = BitString(5, spec.start_bits)
    assert expander.walk(seed, 0, spec) == [5 % spec.n]


def test_walk_all_zero_seed():
    spec = ExpanderSpec.build(16)
    seed = BitString.zeros(spec.seed_bits(2))
    vs = expander.walk(seed, 2, spec)
    v0 = 0
    v1 = expander.neighbor(v0, 0, spec)
    v2 = expander.neighbor(v1, 0, spec)
    assert vs == [v0, v1, v2]


def test_walk_edges_are_edges():
    rng = random.Random(1)
    spec = ExpanderSpec.build(100, max_lambda=0.8)
    for _ in range(50):
        t = rng.randrange(0, 6)
        seed = BitString(rng.getrandbits(spec.seed_bits(t)), spec.seed_bits(t))
        vs = expander.walk(seed, t, spec)
        assert len(vs) == t + 1
        for a, b in zip(vs, vs[1:]):
            assert any(
                expander.neighbor(a, e, spec) == b for e in range(spec.D)
            )


def test_walk_rejects_short_seed():
    spec = ExpanderSpec.build(16)
    with pytest.raises(ValueError):
        expander.walk(BitString.zeros(4), 1, spec)


def test_walk_deterministic():
    spec = ExpanderSpec.build(64)
    nbits = spec.seed_bits(3)
    seed = BitString(0xDEADBEEFCAFE & ((1 << nbits) - 1), nbits)
    assert expander.walk(seed, 3, spec) == expander.walk(seed, 3, spec)


def _normalized_adjacency(spec):
    from scipy.sparse import coo_matrix

    rows, cols = [], []
    base = ExpanderSpec(
        n=spec.n, D=8, lam=expander.BASE_LAMBDA, power=1, base_m=spec.base_m
    )
    for v in range(spec.n):
        for e in range(8):
            rows.append(v)
            cols.append(expander.neighbor(v, e, base))
    data = np.full(len(rows), 1.0 / 8.0)
    return coo_matrix((data, (rows, cols)), shape=(spec.n, spec.n)).tocsr()


@pytest.mark.slow
def test_spectral_sanity_at_n_1e4():
    # second singular value of the powered normalized adjacency <= lam + 0.05
    from scipy.sparse.linalg import LinearOperator, svds

    spec = ExpanderSpec.build(10_000, max_lambda=0.5)
    assert spec.n == 10_000
    A = _normalized_adjacency(spec)

    def matvec(x):
        for _ in range(spec.power):
            x = A @ x
        return x

    op = LinearOperator((spec.n, spec.n), matvec=matvec, rmatvec=matvec)
    s = svds(op, k=2, return_singular_vectors=False, maxiter=5000, tol=1e-8)
    second = sorted(s)[0]
    assert second <= spec.lam + 0.05
    # and the base bound itself holds empirically
    s1 = svds(
        LinearOperator((spec.n, spec.n), matvec=lambda x: A @ x, rmatvec=lambda x: A @ x),
        k=2,
        return_singular_vectors=False,
        maxiter=5000,
        tol=1e-8,
    )
    assert sorted(s1)[0] <= expander.BASE_LAMBDA + 0.05
