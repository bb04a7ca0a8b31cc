"""Subdivision of singular cubes and the prism homotopy.

A cube is lifted to the universal cover, its corners are spread over the
grid ``{0..N}^d`` by averaging along lines (axis 1 first, then axis 2, ...),
every grid point is rounded towards the root and projected back, and the
``N^d`` small cubes of the resulting grid labelling are summed.

The prism over a cube is a (d+1)-dimensional grid whose bottom is the
subdivided cube and whose top is the plateau labelling ``a -> sigma(abar)``
with ``abar_i = min(a_i, 1)``; vertical lines are filled by equally spaced
averages. With ``h_k = (-1)^k * (sum of small prism cubes)`` one gets
``sigma - S(sigma) = h(boundary sigma) + boundary(h sigma)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .chains import Chain, boundary
from .cover import (
    LiftedCube,
    UniversalCover,
    convex_combination,
    lift_cube,
    round_toward_root,
    tree_distance,
)
from .cubes import cube_dim, is_degenerate
from .errors import DomainError
from .graph import Graph


@dataclass
class GridMap:
    """Values on the grid ``{0..N}^dim``; point ``a`` sits at ``sum a_i (N+1)^(i-1)``."""

    dim: int
    N: int
    values: list

    def index(self, a) -> int:
        k = 0
        for i in reversed(range(self.dim)):
            k = k * (self.N + 1) + a[i]
        return k

    def __getitem__(self, a):
        return self.values[self.index(a)]

    def points(self):
        """Grid points in index order, as tuples ``(a_1, ..., a_dim)``."""
        for t in itertools.product(range(self.N + 1), repeat=self.dim):
            yield t[::-1]

    def items(self):
        return ((a, self.values[self.index(a)]) for a in self.points())

    def edges(self):
        """Pairs of grid points one unit apart."""
        for a in self.points():
            for i in range(self.dim):
                if a[i] < self.N:
                    b = a[:i] + (a[i] + 1,) + a[i + 1:]
                    yield a, b

    def small_cubes(self):
        """Label tuples of the ``N^dim`` unit subcubes, corners in colex order."""
        offsets = [tuple((k >> i) & 1 for i in range(self.dim)) for k in range(1 << self.dim)]
        for t in itertools.product(range(self.N), repeat=self.dim):
            base = t[::-1]
            yield tuple(self[tuple(b + o for b, o in zip(base, off))] for off in offsets)

    def face(self, i: int, eps: int) -> "GridMap":
        """Restriction to the face ``a_i = 0`` (eps 0) or ``a_i = N`` (eps 1)."""
        fixed = self.N if eps else 0
        vals = []
        for a in GridMap(self.dim - 1, self.N, []).points():
            full = a[: i - 1] + (fixed,) + a[i - 1:]
            vals.append(self[full])
        return GridMap(self.dim - 1, self.N, vals)

    def map(self, fn) -> "GridMap":
        return GridMap(self.dim, self.N, [fn(v) for v in self.values])


def _corner_grid(dim: int, N: int, corner_value, fill=None) -> list:
    size = (N + 1) ** dim
    vals = [fill] * size
    for k in range(1 << dim):
        idx = 0
        for i in reversed(range(dim)):
            idx = idx * (N + 1) + (N if k >> i & 1 else 0)
        vals[idx] = corner_value(k)
    return vals


def _fill_lines(grid: GridMap, axes, combine):
    """Fill ``grid`` along each axis in turn between already known endpoints.

    When axis ``i`` is processed, coordinates below ``i`` range freely (they
    were filled earlier) and coordinates above ``i`` sit at 0 or N.
    """
    N, dim = grid.N, grid.dim
    for i in axes:
        ranges = []
        for j in range(dim):
            if j < i:
                ranges.append(range(N + 1))
            elif j == i:
                ranges.append([0])
            else:
                ranges.append([0, N])
        for base in itertools.product(*ranges):
            lo = grid.index(base)
            hi = grid.index(base[:i] + (N,) + base[i + 1:])
            x, y = grid.values[lo], grid.values[hi]
            step = (N + 1) ** i
            for t in range(1, N):
                grid.values[lo + t * step] = combine(x, y, Fraction(t, N))


def grid_extend(L: LiftedCube, N: int) -> GridMap:
    """Spread the lifted corners over ``{0..N}^d`` by tree averages along lines."""
    if N < 1:
        raise DomainError("subdivision parameter must be positive")
    points = L.points()
    grid = GridMap(L.dim, N, _corner_grid(L.dim, N, lambda k: points[k]))
    _fill_lines(grid, range(L.dim), convex_combination)
    return grid


def grid_round_project(M: GridMap) -> GridMap:
    """Round every tree point towards the root and project it to the graph."""
    return M.map(lambda x: round_toward_root(x)[-1])


def top_face(L: LiftedCube, N: int) -> GridMap:
    """Plateau labelling ``a -> L(abar)`` where ``abar_i`` is 0 if ``a_i`` is 0 and 1 otherwise."""
    points = L.points()
    vals = []
    grid = GridMap(L.dim, N, [])
    for a in grid.points():
        k = sum(1 << i for i, ai in enumerate(a) if ai >= 1)
        vals.append(points[k])
    grid.values = vals
    return grid


def prism_grid(L: LiftedCube, N: int) -> GridMap:
    """Tree-valued grid on ``{0..N}^(d+1)``: subdivided bottom, plateau top."""
    bottom = grid_extend(L, N)
    top = top_face(L, N)
    d = L.dim
    grid = GridMap(d + 1, N, [None] * (N + 1) ** (d + 1))
    layer = (N + 1) ** d
    for k in range(layer):
        x, y = bottom.values[k], top.values[k]
        grid.values[k] = x
        grid.values[N * layer + k] = y
        for t in range(1, N):
            grid.values[t * layer + k] = convex_combination(x, y, Fraction(t, N))
    return grid


def grid_chain(labels: GridMap, sign: int = 1) -> Chain:
    """Sum of the small cubes of a graph-valued grid (degenerate ones vanish)."""
    out = Chain(labels.dim)
    for cube in labels.small_cubes():
        out._add_term(cube, sign)
    return out


class Subdivider:
    """Subdivision and prism operators for one graph.

    ``lifts`` chooses how faces of a generator are lifted when an operator
    is applied to a boundary: ``"independent"`` lifts every cube on its own
    with the deterministic anchor rule, ``"inherited"`` restricts the lift
    of the parent cube (only meaningful through :meth:`residual` and
    :meth:`chain_map_defect`).
    """

    def __init__(self, G: Graph, cover: UniversalCover | None = None):
        self.graph = G
        self.cover = cover or UniversalCover(G)
        self._lifts = {}

    def lift(self, cube) -> LiftedCube:
        cube = tuple(cube)
        if cube not in self._lifts:
            self._lifts[cube] = lift_cube(cube, cover=self.cover)
        return self._lifts[cube]

    # operators on lifted cubes
    @staticmethod
    def subdivide_lifted(L: LiftedCube, N: int) -> Chain:
        return grid_chain(grid_round_project(grid_extend(L, N)))

    @staticmethod
    def prism_lifted(L: LiftedCube, N: int) -> Chain:
        sign = -1 if L.dim % 2 else 1
        return grid_chain(grid_round_project(prism_grid(L, N)), sign)

    # operators on chains, each generator lifted independently
    def subdivide(self, c, N: int) -> Chain:
        c = _as_chain(c)
        out = Chain(c.dim)
        for cube, coeff in c.terms.items():
            for small, k in self.subdivide_lifted(self.lift(cube), N).terms.items():
                out._add_term(small, coeff * k)
        return out

    def prism(self, c, N: int | None = None) -> Chain:
        c = _as_chain(c)
        out = Chain(c.dim + 1)
        for cube, coeff in c.terms.items():
            n = N if N is not None else cube_dim(cube)
            for small, k in self.prism_lifted(self.lift(cube), n).terms.items():
                out._add_term(small, coeff * k)
        return out

    # checks
    def chain_map_defect(self, cube, N: int, lifts: str = "independent") -> Chain:
        """``boundary(S cube) - S(boundary cube)``; zero when S commutes with the boundary."""
        L = self.lift(cube)
        lhs = boundary(self.subdivide_lifted(L, N))
        return lhs - self._apply_to_faces(L, lifts, lambda F: self.subdivide_lifted(F, N))

    def residual(self, cube, lifts: str = "independent") -> Chain:
        """``sigma - S sigma - h(boundary sigma) - boundary(h sigma)`` with parameter ``d``."""
        cube = tuple(cube)
        d = cube_dim(cube)
        if d == 0:
            return Chain(0)
        L = self.lift(cube)
        sigma = Chain.of(cube)
        s = self.subdivide_lifted(L, d)
        dh = boundary(self.prism_lifted(L, d))
        hd = self._apply_to_faces(L, lifts, lambda F: self.prism_lifted(F, d))
        return sigma - s - hd - dh

    def _apply_to_faces(self, L: LiftedCube, lifts: str, op) -> Chain:
        d = L.dim
        out = None
        for i in range(1, d + 1):
            sgn = -1 if i % 2 else 1
            for eps, s in ((0, sgn), (1, -sgn)):
                if lifts == "inherited":
                    F = L.face(i, eps)
                elif lifts == "independent":
                    F = self.lift(L.face(i, eps).projection())
                else:
                    raise DomainError(f"unknown lift mode {lifts!r}")
                if d > 1 and is_degenerate(F.projection()):
                    continue
                term = op(F) * s
                out = term if out is None else out + term
        # an empty chain compares equal to every zero chain
        return out if out is not None else Chain(0)


def _as_chain(c) -> Chain:
    if isinstance(c, Chain):
        return c
    return Chain.of(tuple(c))


def subdivide_cube(cube, N: int, G: Graph | None = None, subdivider: Subdivider | None = None) -> Chain:
    sub = subdivider or Subdivider(G)
    return sub.subdivide(Chain.of(tuple(cube)), N)


def subdivide_chain(c: Chain, N: int, G: Graph | None = None, subdivider: Subdivider | None = None) -> Chain:
    sub = subdivider or Subdivider(G)
    return sub.subdivide(c, N)


def prism(cube, G: Graph | None = None, N: int | None = None, subdivider: Subdivider | None = None) -> Chain:
    """The homotopy operator on one cube; parameter defaults to the cube's dimension."""
    sub = subdivider or Subdivider(G)
    return sub.prism(Chain.of(tuple(cube)), N)


def verify_homotopy_identity(cube, G: Graph | None = None, subdivider: Subdivider | None = None, lifts: str = "independent") -> Chain:
    sub = subdivider or Subdivider(G)
    return sub.residual(tuple(cube), lifts)


# metric checks ---------------------------------------------------------------


def max_edge_length(grid: GridMap) -> Fraction:
    """Largest tree distance between neighbouring grid points."""
    best = Fraction(0)
    for a, b in grid.edges():
        best = max(best, tree_distance(grid[a], grid[b]))
    return best


def max_label_jump(grid: GridMap) -> Fraction:
    """Largest depth difference between neighbouring grid points."""
    best = Fraction(0)
    for a, b in grid.edges():
        best = max(best, abs(grid[a].depth - grid[b].depth))
    return best


# integer line pipeline for cycles --------------------------------------------


def line_lift(cube, n: int) -> list:
    """Lift a cube on the n-cycle to the integers, starting at its first label."""
    cube = tuple(cube)
    out = [cube[0]]
    for k in range(1, len(cube)):
        base = out[k & (k - 1)]
        delta = (cube[k] - base) % n
        if delta == 0:
            out.append(base)
        elif delta == 1:
            out.append(base + 1)
        elif delta == n - 1:
            out.append(base - 1)
        else:
            raise DomainError(f"{cube} is not a cube on the {n}-cycle")
    return out


def line_grid(cube, n: int, N: int) -> GridMap:
    """Rational grid values from the product-weight formula on the integer line."""
    lifted = line_lift(cube, n)
    d = cube_dim(cube)
    grid = GridMap(d, N, [])
    vals = []
    for a in grid.points():
        total = Fraction(0)
        for k in range(1 << d):
            w = Fraction(1)
            for i in range(d):
                w *= Fraction(a[i], N) if k >> i & 1 else 1 - Fraction(a[i], N)
            total += w * lifted[k]
        vals.append(total)
    grid.values = vals
    return grid


def line_subdivide_cube(cube, n: int, N: int) -> Chain:
    """Subdivision on the n-cycle computed with floors on the integer line."""
    grid = line_grid(cube, n, N).map(lambda x: floor(x) % n)
    return grid_chain(grid)
