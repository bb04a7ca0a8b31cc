import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubhom.chains import (
    Chain,
    assemble_complex,
    boundary,
    boundary_matrix,
    compute_homology,
    cube_boundary_raw,
    cube_boundary_terms,
    homology,
    homology_two_point,
)
from cubhom.cubes import CubeBasis, Restriction, enumerate_cubes, is_degenerate
from cubhom.errors import ClosednessError, DomainError, ResourceLimitError
from cubhom.graph import Graph, gen_complete, gen_cycle, gen_hypercube, gen_named, gen_path, gen_wheel

from conftest import random_connected_graph

DD_GRAPHS = [
    gen_cycle(3), gen_cycle(4), gen_cycle(5), gen_cycle(6), gen_path(3),
    gen_complete(4), gen_wheel(5), gen_named("petersen"), gen_hypercube(3),
]


def test_golden_boundary():
    # two triangle-like faces cancel partially on the pentagon
    got = boundary(Chain.of((2, 3, 1, 2)))
    want = Chain(1, {(1, 2): -1, (2, 1): -1, (2, 3): 1, (3, 2): 1})
    assert got == want
    assert not boundary(Chain.of((1, 2, 2, 3)))
    assert not boundary(Chain.of((1, 2, 1, 2)))  # degenerate, so the zero chain


def test_one_cube_boundary():
    assert boundary(Chain.of((0, 1))) == Chain(0, {(1,): 1, (0,): -1})


def test_quotient_drops_degenerate_faces():
    cube = (0, 0, 0, 1)
    raw = cube_boundary_raw(cube)
    normal = cube_boundary_terms(cube)
    assert set(normal) == {f for f in raw if not is_degenerate(f)}
    for f in normal:
        assert normal[f] == raw[f]


@pytest.mark.parametrize("G", DD_GRAPHS, ids=lambda G: G.name)
def test_dd_zero_full_complex(G):
    X = assemble_complex(G, 3)
    assert X.check_dd_zero()


def test_dd_zero_octahedron_low():
    assert assemble_complex(gen_named("octahedron"), 2).check_dd_zero()


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 10**9))
def test_dd_zero_random_chains(seed):
    rng = random.Random(seed)
    G = DD_GRAPHS[rng.randrange(len(DD_GRAPHS))]
    d = rng.randint(1, 4)
    cubes = random_cubes(rng, G, d, rng.randint(1, 6))
    c = Chain(d, [(cube, rng.randint(-5, 5)) for cube in cubes])
    assert not boundary(boundary(c))


def random_cubes(rng, G, d, k):
    out = []
    while len(out) < k:
        labels = [rng.randrange(G.vertex_count)]
        for pos in range(1, 1 << d):
            low = pos & (pos - 1)
            cand = [v for v in [labels[low], *G.adjacency[labels[low]]]
                    if all(G.adjacent_or_equal(v, labels[pos ^ (1 << i)])
                           for i in range(d) if pos >> i & 1)]
            if not cand:
                break
            labels.append(rng.choice(cand))
        else:
            out.append(tuple(labels))
    return out


def test_chain_algebra():
    a = Chain.of((0, 1))
    b = Chain.of((1, 2), 3)
    assert (a + b) - b == a
    assert 2 * a == a + a
    assert (a - a) == Chain(5)
    assert Chain.of((1, 1)) == Chain(1)
    assert Chain.from_json((a + b).to_json()) == a + b
    with pytest.raises(DomainError):
        _ = Chain.of((0, 1)) + Chain.of((0, 1, 1, 2))


def test_chain_mod_p():
    c = Chain(1, {(0, 1): 3}, ring="gf:3")
    assert not c


def test_boundary_matrix_matches_chain_boundary(c5):
    hi, lo = enumerate_cubes(c5, 3), enumerate_cubes(c5, 2)
    M = boundary_matrix(hi, lo)
    for j in range(0, len(hi), 97):
        col = {lo[i]: v for i, v in M.cols[j].items()}
        assert Chain(2, col) == boundary(Chain.of(hi[j]))


def test_boundary_matrix_closedness():
    G = gen_cycle(5)
    hi = enumerate_cubes(G, 2)
    lo = CubeBasis(1, [(0, 1), (1, 0)])
    with pytest.raises(ClosednessError):
        boundary_matrix(hi, lo)


def test_pentagon_homology_z(c5):
    got = [compute_homology(c5, d, "z") for d in range(3)]
    assert [h.betti for h in got] == [1, 1, 0]
    assert all(h.torsion == [] for h in got)
    assert got[1].ranks == {1: 4, 2: 5}
    assert got[2].ranks == {2: 5, 3: 65}


@pytest.mark.parametrize("ring", ["z", "q", "gf:2", "gf:3", "gf:5"])
def test_ring_consistency(ring):
    G = gen_cycle(5)
    X = assemble_complex(G, 3)
    assert [homology(X, d, ring).betti for d in range(3)] == [1, 1, 0]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_universal_coefficients(seed):
    """Betti over GF(p) equals rational Betti plus torsion contributions."""
    G = random_connected_graph(random.Random(seed), max_n=6)
    X = assemble_complex(G, 2)
    for d in range(2):
        hz = homology(X, d, "z")
        prev = homology(X, d - 1, "z") if d > 0 else None
        for p in (2, 3):
            hp = homology(X, d, f"gf:{p}")
            extra = sum(1 for t in hz.torsion if t % p == 0)
            extra += sum(1 for t in (prev.torsion if prev else []) if t % p == 0)
            assert hp.betti == hz.betti + extra


def test_two_point_block_decomposition():
    """Above degree 0 the two-point complex splits into one copy of K_2 per edge."""
    G = gen_cycle(5)
    K2 = Graph.from_edges(2, [(0, 1)])
    for d in (1, 2, 3):
        per_edge = len(enumerate_cubes(K2, d))
        assert len(enumerate_cubes(G, d, "two_point")) == len(G.edges) * per_edge
        blocks = enumerate_cubes(G, d, "two_point").cubes
        for cube in blocks:
            assert len(set(cube)) == 2
    assert [homology_two_point(G, d, "z").betti for d in range(3)] == [1, 1, 0]


def test_two_point_boundary_stays_in_block():
    G = gen_named("petersen")
    for cube in enumerate_cubes(G, 3, "two_point"):
        for f in cube_boundary_terms(cube):
            assert set(f) == set(cube)


def test_homology_needs_complex_range():
    X = assemble_complex(gen_cycle(5), 2)
    with pytest.raises(DomainError):
        homology(X, 2)


def test_certified_strategy_agrees_with_full():
    G = gen_cycle(4)
    full = compute_homology(G, 2, "z", strategy="full")
    cert = compute_homology(G, 2, "z", strategy="certified", full_limit=0)
    assert full.betti == cert.betti == 0
    assert cert.method in ("certified", "full")


def test_certified_cannot_prove_nonvanishing():
    with pytest.raises(ResourceLimitError):
        compute_homology(gen_cycle(5), 1, "q", strategy="certified")


def test_resource_limit_reported():
    with pytest.raises(ResourceLimitError):
        compute_homology(gen_named("octahedron"), 2, "q", strategy="full", max_cubes=1000)


def test_restricted_subset():
    G = gen_cycle(6)
    r = Restriction.subset({0, 1, 2})
    # a path on three vertices is contractible
    assert [compute_homology(G, d, "z", restriction=r).betti for d in range(3)] == [1, 0, 0]


def test_two_point_matches_full_in_degree_one():
    G = gen_cycle(5)
    assert homology_two_point(G, 1, "z").betti == compute_homology(G, 1, "z").betti


def test_two_point_single_edge():
    K2 = gen_path(1)
    assert [homology_two_point(K2, d, "z").betti for d in range(3)] == [1, 0, 0]


def test_dim_one_boundary_matrix_shape():
    X = assemble_complex(gen_cycle(5), 2)
    d1 = X.boundaries[1]
    assert (d1.nrows, d1.ncols) == (5, 10)
    assert all(sorted(col.values()) == [-1, 1] for col in d1.cols)


def test_pre_quotient_projection_equals_boundary():
    """Boundary through the full (degenerate-keeping) formula, then projected, agrees."""
    rng = random.Random(3)
    for G in DD_GRAPHS:
        for d in (2, 3):
            for cube in random_cubes(rng, G, d, 20):
                raw = Chain(d - 1)
                for f, s in cube_boundary_raw(cube).items():
                    raw = raw + Chain(d - 1, {f: s})
                assert raw == boundary(Chain.of(cube)) or is_degenerate(cube)
