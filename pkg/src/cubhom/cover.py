"""The universal covering tree of a graph, handled lazily.

A cover vertex is a non-backtracking walk from the basepoint, stored as a
tuple of graph vertices that starts with the basepoint; its projection is the
last entry. Points of the metric tree are pairs ``(walk, up)`` where ``up``
in ``[0, 1)`` is the distance travelled from the end of ``walk`` back
towards its parent. All arithmetic is exact (``Fraction``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .cubes import cube_dim, cube_edges
from .errors import DomainError, LiftObstruction
from .graph import Graph, bfs_distances


@dataclass(frozen=True, order=True)
class TreePoint:
    path: tuple
    up: Fraction = Fraction(0)

    def __post_init__(self):
        up = Fraction(self.up)
        if not 0 <= up < 1:
            raise DomainError(f"edge offset {up} outside [0, 1)")
        if up and len(self.path) < 2:
            raise DomainError("the root has no parent edge")
        object.__setattr__(self, "up", up)

    @classmethod
    def vertex(cls, path) -> "TreePoint":
        return cls(tuple(path), Fraction(0))

    @classmethod
    def on_edge(cls, lower, upper, offset) -> "TreePoint":
        """Point at distance ``offset`` from cover vertex ``lower`` towards the
        adjacent cover vertex ``upper`` (either may be the parent)."""
        lower, upper = tuple(lower), tuple(upper)
        offset = Fraction(offset)
        if not 0 <= offset <= 1:
            raise DomainError("offset must lie in [0, 1]")
        if upper[:-1] == lower:
            child, from_child = upper, 1 - offset
        elif lower[:-1] == upper:
            child, from_child = lower, offset
        else:
            raise DomainError("cover vertices are not adjacent")
        if from_child == 1:
            return cls(child[:-1])
        return cls(child, from_child)

    @property
    def depth(self) -> Fraction:
        return len(self.path) - 1 - self.up

    @property
    def is_vertex(self) -> bool:
        return self.up == 0

    def __repr__(self):
        if self.up:
            return f"TreePoint({self.path}, up={self.up})"
        return f"TreePoint({self.path})"


def _common_prefix(p, q) -> int:
    n = min(len(p), len(q))
    i = 0
    while i < n and p[i] == q[i]:
        i += 1
    return i


def tree_distance(x: TreePoint, y: TreePoint) -> Fraction:
    dx, dy = x.depth, y.depth
    h = _common_prefix(x.path, y.path) - 1
    m = min(h, dx, dy)
    return (dx - m) + (dy - m)


def point_on_ray(path, depth) -> TreePoint:
    """The point at the given depth on the root ray through ``path``."""
    depth = Fraction(depth)
    top = ceil(depth)
    return TreePoint(tuple(path[: top + 1]), top - depth)


def convex_combination(x: TreePoint, y: TreePoint, alpha) -> TreePoint:
    """The point ``p`` on the geodesic from ``x`` to ``y`` with ``d(x, p) = alpha * d(x, y)``."""
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise DomainError(f"weight {alpha} outside [0, 1]")
    if alpha == 0:
        return x
    if alpha == 1:
        return y
    dx, dy = x.depth, y.depth
    h = _common_prefix(x.path, y.path) - 1
    m = min(h, dx, dy)
    t = alpha * ((dx - m) + (dy - m))
    if t <= dx - m:
        return point_on_ray(x.path, dx - t)
    return point_on_ray(y.path, m + (t - (dx - m)))


def round_toward_root(x: TreePoint) -> tuple:
    """Interior edge points go to the endpoint nearer the root."""
    return x.path[:-1] if x.up else x.path


def project(x) -> int:
    path = x.path if isinstance(x, TreePoint) else x
    return path[-1]


def is_tree(G: Graph) -> bool:
    return G.is_connected() and len(G.edges) == G.vertex_count - 1


class UniversalCover:
    """Lazy universal cover of a connected graph rooted at ``basepoint``.

    For a finite tree the default basepoint is the least vertex of largest
    eccentricity, so that anchors can sit as deep as the tree allows.
    """

    def __init__(self, G: Graph, basepoint: int | None = None):
        if G.vertex_count == 0 or not G.is_connected():
            raise DomainError("the universal cover needs a connected nonempty graph")
        self.graph = G
        self.tree = is_tree(G)
        if basepoint is None:
            basepoint = 0
            if self.tree:
                ecc = [max(bfs_distances(G, v).values()) for v in range(G.vertex_count)]
                basepoint = ecc.index(max(ecc))
        self.basepoint = basepoint
        self.root = (basepoint,)
        self._anchor_cache = {}

    def is_vertex(self, path) -> bool:
        path = tuple(path)
        if not path or path[0] != self.basepoint:
            return False
        G = self.graph
        for i in range(1, len(path)):
            if not G.has_edge(path[i - 1], path[i]):
                return False
            if i >= 2 and path[i] == path[i - 2]:
                return False
        return True

    def neighbors(self, path) -> list:
        path = tuple(path)
        out = [path[:-1]] if len(path) > 1 else []
        back = path[-2] if len(path) > 1 else None
        out += [path + (w,) for w in self.graph.adjacency[path[-1]] if w != back]
        return out

    @staticmethod
    def adjacent(p, q) -> bool:
        return (len(p) == len(q) + 1 and p[:-1] == q) or (len(q) == len(p) + 1 and q[:-1] == p)

    def step(self, path, w) -> tuple:
        """The unique cover neighbour of ``path`` projecting to ``w``."""
        if len(path) > 1 and path[-2] == w:
            return path[:-1]
        if not self.graph.has_edge(path[-1], w):
            raise DomainError(f"{path[-1]} and {w} are not adjacent")
        return path + (w,)

    def root_path(self, x: int) -> tuple:
        """A shortest walk from the basepoint to ``x`` (least in lexicographic order)."""
        G = self.graph
        dist = bfs_distances(G, x)
        path = [self.basepoint]
        while path[-1] != x:
            cur = path[-1]
            path.append(min(w for w in G.adjacency[cur] if dist[w] == dist[cur] - 1))
        return tuple(path)

    def anchor(self, x: int, depth: int) -> tuple[tuple, bool]:
        """Deterministic cover vertex over ``x`` at depth at least ``depth``.

        Builds the non-backtracking walk from the basepoint greedily, always
        taking the least next vertex from which ``x`` can still be reached
        within ``depth + 2|E|`` steps, and stops the first time it stands on
        ``x`` with length at least ``depth``. Returns the walk and a flag that
        is True when no walk is long enough (finite trees), in which case
        the shortest walk is returned instead.
        """
        key = (x, depth)
        if key not in self._anchor_cache:
            self._anchor_cache[key] = self._compute_anchor(x, depth)
        return self._anchor_cache[key]

    def _compute_anchor(self, x, depth):
        G = self.graph
        if depth <= 0 or self.tree:
            path = self.root_path(x)
            return path, len(path) - 1 < depth
        limit = depth + 2 * len(G.edges)
        # ok[L][(prev, cur)]: from state (prev, cur) with L steps taken the
        # walk can still stop at x at some length in [depth, limit]
        states = [(-1, self.basepoint)] + [(u, v) for u in range(G.vertex_count) for v in G.adjacency[u]]
        ok = [None] * (limit + 1)
        ok[limit] = {s: s[1] == x for s in states}
        for L in range(limit - 1, -1, -1):
            nxt = ok[L + 1]
            row = {}
            for prev, cur in states:
                if cur == x and L >= depth:
                    row[(prev, cur)] = True
                    continue
                row[(prev, cur)] = any(nxt[(cur, w)] for w in G.adjacency[cur] if w != prev)
            ok[L] = row
        if not ok[0][(-1, self.basepoint)]:
            path = self.root_path(x)
            return path, True
        walk = [self.basepoint]
        prev = -1
        L = 0
        while not (walk[-1] == x and L >= depth):
            cur = walk[-1]
            w = min(w for w in G.adjacency[cur] if w != prev and ok[L + 1][(cur, w)])
            walk.append(w)
            prev, L = cur, L + 1
        return tuple(walk), False


@dataclass(frozen=True)
class LiftedCube:
    """A graph map from Q_d into the cover, one walk per cube position."""

    dim: int
    labels: tuple
    anchor: tuple
    shallow: bool = False

    def projection(self) -> tuple:
        return tuple(p[-1] for p in self.labels)

    def points(self) -> list:
        return [TreePoint.vertex(p) for p in self.labels]

    def face(self, i: int, eps: int) -> "LiftedCube":
        from .cubes import face_positions

        pos = face_positions(self.dim, i, eps)
        labels = tuple(self.labels[k] for k in pos)
        return LiftedCube(self.dim - 1, labels, labels[0], self.shallow)


def lift_from(cover: UniversalCover, labels, start: tuple) -> LiftedCube:
    """Lift a cube given the cover vertex for position 0; checks every cube edge."""
    labels = tuple(labels)
    d = cube_dim(labels)
    if start[-1] != labels[0]:
        raise DomainError("the anchor does not project to the first label")
    out = [start]
    for k in range(1, len(labels)):
        base = out[k & (k - 1)]
        w = labels[k]
        if w == base[-1]:
            out.append(base)
        else:
            out.append(cover.step(base, w))
    for a, b in cube_edges(d):
        pa, pb = out[a], out[b]
        if pa != pb and not UniversalCover.adjacent(pa, pb):
            square = (a, b) if b & (b - 1) == a else _square(a, b)
            cycle = tuple(labels[k] for k in square)
            raise LiftObstruction(
                f"cube edge {a}-{b} cannot be lifted consistently; "
                f"positions {square} carry labels {cycle}",
                cycle=square,
            )
    return LiftedCube(d, tuple(out), start)


def _square(a: int, b: int) -> tuple:
    """The 2-face of Q_d through edge a-b and the tree edge into ``b``."""
    flip = a ^ b
    low = b & -b
    base = b & ~flip & ~low
    return (base, base | low, base | low | flip, base | flip)


def lift_cube(
    labels,
    G: Graph | None = None,
    anchor_depth: int | None = None,
    cover: UniversalCover | None = None,
    anchor=None,
) -> LiftedCube:
    """Lift a singular cube to the universal cover.

    The first position goes to ``anchor`` if given, else to
    ``cover.anchor(labels[0], anchor_depth)`` with default depth ``d + 2``.
    Raises :class:`LiftObstruction` when some cube edge would join two
    non-adjacent cover vertices, which happens when the cube wraps a short
    cycle.
    """
    if cover is None:
        if G is None:
            raise DomainError("need a graph or a cover")
        cover = UniversalCover(G)
    labels = tuple(labels)
    d = cube_dim(labels)
    if anchor is None:
        depth = d + 2 if anchor_depth is None else anchor_depth
        anchor, shallow = cover.anchor(labels[0], depth)
    else:
        anchor = tuple(anchor)
        if not cover.is_vertex(anchor):
            raise DomainError(f"{anchor} is not a non-backtracking walk from the basepoint")
        shallow = False
    lifted = lift_from(cover, labels, anchor)
    return LiftedCube(d, lifted.labels, anchor, shallow)
