"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed even
without ``-s``) or directly with ``python3 tests/test_acceptance.py``.
"""

import io
import json
import random
import sys
import time

import pytest

from cubhom.cellular import compare_covering_cellular, covering_complex_homology, mv_span_check
from cubhom.chains import Chain, assemble_complex, boundary, compute_homology
from cubhom.cli import run
from cubhom.cover import UniversalCover, lift_cube, tree_distance
from cubhom.cubes import cube_edges, enumerate_cubes
from cubhom.errors import LiftObstruction
from cubhom.graph import (
    gen_complete,
    gen_cycle,
    gen_hypercube,
    gen_named,
    gen_wheel,
    times_construction,
)
from cubhom.subdivision import Subdivider, grid_extend, max_edge_length, prism_grid

sys.path.insert(0, __file__.rsplit("/", 1)[0])
from conftest import random_connected_graph  # noqa: E402

C5 = gen_cycle(5)
PETERSEN = gen_named("petersen")
SAMPLES = 200


def sample(G, d, k=SAMPLES, seed=0):
    cubes = enumerate_cubes(G, d).cubes
    return cubes if len(cubes) <= k else random.Random(seed).sample(cubes, k)


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


# criterion checks; each returns (ok, detail) --------------------------------


def c1_pentagon():
    def work():
        return {(d, r): compute_homology(C5, d, r) for d in range(3) for r in ("q", "z")}

    res, secs = timed(work)
    betti = [res[(d, "z")].betti for d in range(3)]
    ok = all(res[(d, r)].betti == (1, 1, 0)[d] and not res[(d, r)].torsion for (d, r) in res)
    return ok and secs < 10, f"betti {betti} over q and z, no torsion, {secs:.1f}s"


def c1_stretch():
    (hz, hq), secs = timed(lambda: (compute_homology(C5, 3, "z"), compute_homology(C5, 3, "q")))
    ok = hz.betti == hq.betti == 0 and not hz.torsion and secs < 1800
    return ok, f"H3 betti {hz.betti} ({hz.method}), {secs:.1f}s"


def c2_girth5():
    graphs = [gen_cycle(6), gen_cycle(7), PETERSEN]
    res, secs = timed(lambda: [compute_homology(G, 2, "z") for G in graphs])
    ok = all(h.betti == 0 and not h.torsion for h in res) and secs < 300
    return ok, ", ".join(f"{h.graph} {h.betti}" for h in res) + f", {secs:.1f}s"


def c3_small_cycles():
    cases = [(n, d) for n in (3, 4) for d in (2, 3)]
    res, secs = timed(lambda: [compute_homology(gen_cycle(n), d, "z") for n, d in cases])
    ok = all(h.betti == 0 and not h.torsion for h in res) and secs < 60
    detail = ", ".join(f"H{d}(C{n})={h.betti}[{h.method}]" for (n, d), h in zip(cases, res))
    return ok, f"{detail}, {secs:.1f}s"


def c4_tower():
    graphs = [times_construction(C5, 4), times_construction(C5, 3)]
    res, secs = timed(lambda: [compute_homology(G, 2, "z") for G in graphs])
    ok = all(h.betti == 1 and not h.torsion for h in res) and secs < 1200
    return ok, ", ".join(f"{h.graph} {h.betti}" for h in res) + f", {secs:.1f}s"


def c5_q3_octahedron():
    q3, oct_ = gen_hypercube(3), gen_named("octahedron")

    def work():
        return (
            compute_homology(q3, 2, "z").betti,
            covering_complex_homology(q3, 2, "z").betti,
            compute_homology(oct_, 2, "z").betti,
            compare_covering_cellular(oct_, 2, "z"),
        )

    (a, b, c, rep), secs = timed(work)
    cov, cell = rep["rows"][2]["cubical"]["betti"], rep["rows"][2]["cellular"]["betti"]
    ok = (a, b, c, cov, cell) == (0, 1, 0, 4, 4) and secs < 600
    return ok, f"Q3 full {a} covering {b}; octahedron full {c} covering {cov} cellular {cell}, {secs:.1f}s"


def c6_golden():
    got = Subdivider(C5).subdivide(Chain.of((1, 2, 2, 3)), 3)
    want = Chain(2, {(1, 1, 1, 2): 2, (1, 2, 2, 2): 3, (2, 2, 2, 3): 1})
    return got == want, repr(got)


DD_GRAPHS = [
    gen_cycle(3), gen_cycle(4), C5, gen_cycle(6), gen_cycle(7), PETERSEN, gen_hypercube(3),
    gen_named("octahedron"), gen_complete(4), gen_wheel(5), gen_wheel(6), times_construction(C5, 3),
]


def c7_dd_complexes():
    bad = [G.name for G in DD_GRAPHS if not assemble_complex(G, 3).check_dd_zero()]
    return not bad, f"{len(DD_GRAPHS)} graphs through d=3" + (f", failing {bad}" if bad else "")


def c7_dd_random():
    rng = random.Random(1)
    failures = 0
    for _ in range(1000):
        G = rng.choice(DD_GRAPHS[:7])
        d = rng.randint(1, 3)
        cubes = enumerate_cubes(G, d).cubes
        c = Chain(d, [(rng.choice(cubes), rng.randint(-5, 5)) for _ in range(rng.randint(1, 6))])
        failures += bool(boundary(boundary(c)))
    return failures == 0, f"1000 random chains, {failures} failures"


def _chain_map(G, d, cubes, mode="independent"):
    sub = Subdivider(G)
    bad = [(c, N) for c in cubes for N in (2, 3, 4) if sub.chain_map_defect(c, N, mode)]
    return bad


def c7_chainmap_c5_full():
    bad = _chain_map(C5, 1, enumerate_cubes(C5, 1).cubes) + _chain_map(C5, 2, enumerate_cubes(C5, 2).cubes)
    return not bad, f"all 80 cubes of dim 1 and 2, N=2,3,4, {len(bad)} failures"


def c7_chainmap_c5_dim3():
    bad = _chain_map(C5, 3, sample(C5, 3))
    return not bad, f"{SAMPLES} cubes, N=2,3,4, {len(bad)} failures"


def c7_chainmap_c6():
    G = gen_cycle(6)
    bad = _chain_map(G, 2, sample(G, 2)) + _chain_map(G, 3, sample(G, 3))
    return not bad, f"{SAMPLES} cubes each of dim 2 and 3, {len(bad)} failures"


def c7_chainmap_petersen():
    bad = _chain_map(PETERSEN, 2, sample(PETERSEN, 2)) + _chain_map(PETERSEN, 3, sample(PETERSEN, 3))
    detail = f"independent lifts, {len(bad)} of {3 * (200 + 200)} checks fail"
    if bad:
        detail += f", e.g. {bad[0][0]} N={bad[0][1]}"
    return not bad, detail


def c7_chainmap_petersen_inherited():
    bad = _chain_map(PETERSEN, 2, sample(PETERSEN, 2), "inherited")
    bad += _chain_map(PETERSEN, 3, sample(PETERSEN, 3), "inherited")
    return not bad, f"inherited lifts, {len(bad)} failures"


def _residuals(G, cubes, mode="independent"):
    sub = Subdivider(G)
    return [c for c in cubes if sub.residual(c, mode)]


def c7_residual_c5_full():
    bad = _residuals(C5, enumerate_cubes(C5, 2).cubes)
    return not bad, f"all 70 cubes of dim 2, {len(bad)} failures"


def c7_residual_cycles():
    total, bad = 0, []
    for n in (5, 6, 7):
        G = gen_cycle(n)
        for d in (2, 3):
            cubes = sample(G, d, seed=n + d)
            total += len(cubes)
            bad += _residuals(G, cubes)
    return not bad, f"{total} cubes on C5, C6, C7, {len(bad)} failures"


def c7_residual_petersen():
    cubes = sample(PETERSEN, 2) + sample(PETERSEN, 3)
    bad = _residuals(PETERSEN, cubes)
    detail = f"independent lifts, {len(bad)} of {len(cubes)} cubes fail"
    if bad:
        detail += f", e.g. {bad[0]}"
    return not bad, detail


def c7_residual_petersen_inherited():
    cubes = sample(PETERSEN, 2) + sample(PETERSEN, 3)
    bad = _residuals(PETERSEN, cubes, "inherited")
    return not bad, f"inherited lifts, {len(cubes)} cubes, {len(bad)} failures"


def c7_two_point():
    bad, total = 0, 0
    for G in (C5, gen_cycle(6), PETERSEN):
        sub = Subdivider(G)
        for d in (1, 2, 3):
            for c in sample_two_point(G, d):
                total += 1
                s = sub.subdivide(Chain.of(c), d)
                h = sub.prism(Chain.of(c))
                bad += not (s.image_sizes() <= {2} and h.image_sizes() <= {2})
    return bad == 0, f"{total} two-point cubes, S and h stay two-point, {bad} failures"


def sample_two_point(G, d):
    cubes = enumerate_cubes(G, d, "two_point").cubes
    return cubes if len(cubes) <= SAMPLES else random.Random(d).sample(cubes, SAMPLES)


def c7_lipschitz():
    grids, worst_ratio, worst_prism = 0, 0, 0
    for G in (C5, gen_cycle(6), PETERSEN):
        sub = Subdivider(G)
        for d in (1, 2, 3):
            for c in sample(G, d, 60, seed=d):
                L = sub.lift(c)
                for N in (2, 3, 4):
                    worst_ratio = max(worst_ratio, max_edge_length(grid_extend(L, N)) * N)
                    grids += 1
                worst_prism = max(worst_prism, max_edge_length(prism_grid(L, max(d, 1))))
                grids += 1
    ok = worst_ratio <= 1 and worst_prism <= 1
    return ok, f"{grids} grids, max N*edge {worst_ratio}, max prism edge {worst_prism}"


def c7_lift():
    checked = 0
    for G in (C5, gen_cycle(7), PETERSEN):
        cover = UniversalCover(G)
        for d in (1, 2, 3):
            for c in sample(G, d, seed=d):
                L = lift_cube(c, cover=cover)
                ok = L.projection() == c and lift_cube(c, cover=cover, anchor=L.anchor) == L
                ok &= all(
                    L.labels[a] == L.labels[b] or UniversalCover.adjacent(L.labels[a], L.labels[b])
                    for a, b in cube_edges(d)
                )
                other = lift_cube(c, cover=cover, anchor=cover.anchor(c[0], 9)[0])
                P, Q = L.points(), other.points()
                ok &= other.projection() == c and all(
                    tree_distance(P[i], P[j]) == tree_distance(Q[i], Q[j])
                    for i in range(len(P)) for j in range(i)
                )
                if not ok:
                    return False, f"lift check failed on {G.name} {c}"
                checked += 1
    try:
        lift_cube((0, 1, 0, 2), gen_cycle(3))
        raised = False
    except LiftObstruction:
        raised = True
    return raised, f"{checked} cubes round-trip and unique; triangle 2-cube obstruction raised={raised}"


def c7_mv():
    G = times_construction(C5, 4)
    res = [mv_span_check(G, k) for k in range(4)]
    return all(res), f"k=0..3: {res}"


def c7_covering_cellular():
    graphs = [gen_named("octahedron"), gen_hypercube(3), gen_complete(4), gen_wheel(5), gen_wheel(6)]
    rng = random.Random(62)
    graphs += [random_connected_graph(rng, max_n=8) for _ in range(20)]
    bad = [G.name for G in graphs if not compare_covering_cellular(G, 2, "z")["all_match"]]
    return not bad, f"{len(graphs)} graphs, d<=2, mismatches {bad}"


def _cli(argv):
    out = io.StringIO()
    code = run(argv, stdout=out, stderr=io.StringIO())
    doc = json.loads(out.getvalue())
    doc.pop("elapsed_ms", None)
    return code, doc


DETERMINISM_RUNS = [
    ["homology", "--gen", "cycle:5", "--dim", "2", "--ring", "z"],
    ["homology", "--gen", "cycle:5", "--dim", "3", "--ring", "z"],
    ["homology", "--gen", "petersen", "--dim", "2", "--ring", "z"],
    ["homology", "--gen", "cycle:3", "--dim", "3", "--ring", "z"],
    ["homology", "--gen", "times:cycle:5:3", "--dim", "2", "--ring", "q"],
    ["compare-covering", "--gen", "hypercube:3", "--dmax", "2"],
    ["subdivide", "--gen", "cycle:5", "--cube", "1,2,2,3", "--N", "3"],
    ["verify-homotopy", "--gen", "cycle:6", "--dim", "3", "--samples", "50"],
    ["mv-check", "--gen", "times:cycle:5:4", "--k", "3"],
]


def c8_determinism():
    bad = []
    for argv in DETERMINISM_RUNS:
        if _cli(argv + ["--threads", "1"]) != _cli(argv + ["--threads", "2"]):
            bad.append(argv[0] + " " + argv[2])
    return not bad, f"{len(DETERMINISM_RUNS)} commands at 1 and 2 threads, differing {bad}"


CHECKS = [
    ("1", "pentagon H0..H2 = 1,1,0 under 10s", c1_pentagon),
    ("1-stretch", "pentagon H3 = 0 under 30 min", c1_stretch),
    ("2", "H2 of C6, C7, Petersen vanish under 5 min", c2_girth5),
    ("3", "H2, H3 of C3, C4 vanish under 1 min", c3_small_cycles),
    ("4", "H2 of C5 x4 and C5 x3 is rank 1 under 20 min", c4_tower),
    ("5", "Q3 and octahedron full vs covering H2", c5_q3_octahedron),
    ("6", "S^3(1,2,2,3) golden chain", c6_golden),
    ("7a-complexes", "dd = 0 on full complexes through d=3", c7_dd_complexes),
    ("7a-random", "dd = 0 on 1000 random chains", c7_dd_random),
    ("7b-c5-full", "chain map, C5 full bases d<=2", c7_chainmap_c5_full),
    ("7b-c5-dim3", "chain map, C5 sampled d=3", c7_chainmap_c5_dim3),
    ("7b-c6", "chain map, C6 sampled", c7_chainmap_c6),
    ("7b-petersen", "chain map, Petersen sampled", c7_chainmap_petersen),
    ("7b-petersen-inherited", "chain map, Petersen sampled, lifts inherited from the parent", c7_chainmap_petersen_inherited),
    ("7c-c5-full", "homotopy residual, C5 full d=2 basis", c7_residual_c5_full),
    ("7c-cycles", "homotopy residual, cycles sampled d=2,3", c7_residual_cycles),
    ("7c-petersen", "homotopy residual, Petersen sampled d=2,3", c7_residual_petersen),
    ("7c-petersen-inherited", "homotopy residual, Petersen, lifts inherited from the parent", c7_residual_petersen_inherited),
    ("7c-two-point", "S and h preserve two-point chains", c7_two_point),
    ("7d", "grid edges <= 1/N, prism edges <= 1", c7_lipschitz),
    ("7e", "lift round trip, uniqueness, triangle obstruction", c7_lift),
    ("7f", "span check on C5 x4 for k<=3", c7_mv),
    ("7g", "covering vs cellular homology on 25 graphs", c7_covering_cellular),
    ("8", "thread count does not change JSON", c8_determinism),
]


def report(cid, desc, ok, detail):
    return f"{'PASS' if ok else 'FAIL'}  criterion {cid}: {desc} -- {detail}"


@pytest.mark.parametrize("cid, desc, fn", CHECKS, ids=[c[0] for c in CHECKS])
def test_acceptance(cid, desc, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + report(cid, desc, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for cid, desc, fn in CHECKS:
        ok, detail = fn()
        failed += not ok
        print(report(cid, desc, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
