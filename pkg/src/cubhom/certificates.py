"""Spanning sets of (d+1)-cubes that certify vanishing homology.

If unit-pivot elimination on the boundaries of some set of (d+1)-cubes
reaches the dimension of the d-cycles, the image of those boundaries is a
saturated sublattice of the cycles with full rank, hence equal to them, and
the homology vanishes over every ring. Two sources of such sets:

* Retraction prisms. A graph map ``psi`` with ``psi(v)`` adjacent or equal
  to ``v`` gives a (d+1)-cube for every d-cube: ``sigma`` at the bottom,
  ``psi o sigma`` at the top. Their boundaries move every cycle onto its
  image under ``psi``. A chain of such maps ending in a single vertex
  therefore spans all cycles in positive dimension.
* Random cubes, drawn by :func:`sample_cubes`.
"""

from __future__ import annotations

import random

from .cubes import _coerce_restriction, _lower_neighbors, enumerate_cubes, is_degenerate
from .graph import Graph


def find_retraction(G: Graph, vertices, budget: int = 200_000) -> dict | None:
    """A non-injective graph map of ``G[vertices]`` into itself moving each
    vertex at most one step, or None if none is found within ``budget``
    search nodes.

    Folds (``v -> w`` whenever the closed neighbourhood of ``v`` sits inside
    that of ``w``) are tried first since they are found instantly.
    """
    vs = sorted(vertices)
    vset = set(vs)
    closed = {v: (set(G.adjacency[v]) & vset) | {v} for v in vs}
    for v in vs:
        for w in sorted(closed[v] - {v}):
            if closed[v] <= closed[w]:
                return {u: (w if u == v else u) for u in vs}

    order = vs
    psi = {}
    nodes = [0]

    def rec(k, used):
        nodes[0] += 1
        if nodes[0] > budget:
            return None
        if k == len(order):
            return dict(psi) if len(set(psi.values())) < len(order) else None
        v = order[k]
        placed = [u for u in G.adjacency[v] if u in psi]
        cands = [w for w in sorted(closed[v]) if all(G.adjacent_or_equal(w, psi[u]) for u in placed)]
        # prefer images already in use so the map collapses quickly
        cands.sort(key=lambda w: (w not in used, w))
        for w in cands:
            psi[v] = w
            found = rec(k + 1, used | {w})
            if found is not None:
                return found
            del psi[v]
        return None

    return rec(0, frozenset())


def retraction_chain(G: Graph, budget: int = 200_000) -> list | None:
    """Maps ``psi_1, psi_2, ...`` collapsing ``G`` to one vertex, or None.

    Each map is defined on the image of the previous one.
    """
    current = set(range(G.vertex_count))
    chain = []
    while len(current) > 1:
        psi = find_retraction(G, current, budget)
        if psi is None:
            return None
        chain.append(psi)
        current = set(psi.values())
    return chain


def retraction_prisms(G: Graph, d: int, chain: list) -> list:
    """Sorted non-degenerate (d+1)-cubes joining each d-cube to its image."""
    out = set()
    current = set(range(G.vertex_count))
    for psi in chain:
        sub, labels = G.induced(current)
        for cube in enumerate_cubes(sub, d, max_cubes=None):
            bottom = tuple(labels[v] for v in cube)
            prism = bottom + tuple(psi[v] for v in bottom)
            if not is_degenerate(prism):
                out.add(prism)
        current = set(psi.values())
    return sorted(out)


def sample_cubes(G: Graph, d: int, count: int, seed: int = 0, restriction=None, max_tries=None):
    """Sorted list of up to ``count`` distinct random non-degenerate d-cubes.

    Each sample assigns labels position by position, choosing uniformly
    among the labels compatible with the already placed lower neighbours and
    restarting on a dead end. The distribution is not uniform over cubes,
    which does not matter here: the samples only need to span.
    """
    restriction = _coerce_restriction(restriction)
    rng = random.Random(seed)
    if restriction.kind == "all":
        groups = [tuple(range(G.vertex_count))]
    elif restriction.kind == "two_point":
        groups = [tuple(e) for e in G.sorted_edges()]
    else:
        groups = [tuple(sorted(s)) for s in restriction.vertex_sets]
    groups = [g for g in groups if g]
    if not groups:
        return []
    closed = [frozenset(G.adjacency[v]) | {v} for v in range(G.vertex_count)]
    lower = _lower_neighbors(d)
    found = set()
    tries = 0
    max_tries = max_tries or 50 * count + 1000
    while len(found) < count and tries < max_tries:
        tries += 1
        allowed = rng.choice(groups)
        labels = [rng.choice(allowed)]
        cand_base = frozenset(allowed)
        for k in range(1, 1 << d):
            cand = cand_base
            for j in lower[k]:
                cand = cand & closed[labels[j]]
            if not cand:
                break
            labels.append(rng.choice(sorted(cand)))
        else:
            cube = tuple(labels)
            if d == 0 or not is_degenerate(cube):
                found.add(cube)
    return sorted(found)
