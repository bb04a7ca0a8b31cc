"""Finite simple graphs: parsing, generators and structural queries."""

from __future__ import annotations

import hashlib
import itertools
from collections import deque
from dataclasses import dataclass, field

from .errors import DomainError, GraphParseError, ResourceLimitError

HYPERCUBE_MAX_DIM = 16


@dataclass(frozen=True)
class Graph:
    """An immutable simple undirected graph on vertices ``0..n-1``.

    ``poles`` is set for graphs built by :func:`times_construction` and holds
    the indices of the two collapsed end layers.
    """

    vertex_count: int
    edges: frozenset
    adjacency: tuple = field(compare=False, repr=False)
    name: str = field(default="", compare=False)
    poles: tuple | None = field(default=None, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges, name: str = "", poles=None) -> "Graph":
        if n < 0:
            raise DomainError("vertex count must be non-negative")
        norm = set()
        for u, v in edges:
            if u == v:
                raise DomainError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range for {n} vertices")
            norm.add((min(u, v), max(u, v)))
        adj = [[] for _ in range(n)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        adjacency = tuple(tuple(sorted(a)) for a in adj)
        return cls(n, frozenset(norm), adjacency, name, poles)

    @property
    def n(self) -> int:
        return self.vertex_count

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def adjacent_or_equal(self, u: int, v: int) -> bool:
        return u == v or (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def to_text(self) -> str:
        lines = [f"{self.vertex_count} {len(self.edges)}"]
        lines += [f"{u} {v}" for u, v in self.sorted_edges()]
        return "\n".join(lines) + "\n"

    def digest(self) -> bytes:
        """16-byte content hash, stable across runs and platforms."""
        return hashlib.sha256(self.to_text().encode()).digest()[:16]

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        return len(bfs_distances(self, 0)) == self.vertex_count

    def induced(self, vertices) -> tuple["Graph", list]:
        """Induced subgraph, relabelled to ``0..k-1``; also returns the old labels."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        es = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph.from_edges(len(keep), es), keep

    def __str__(self):
        return self.name or f"Graph(n={self.vertex_count}, m={len(self.edges)})"


def bfs_distances(G: Graph, source: int) -> dict:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in G.adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def distance(G: Graph, u: int, v: int) -> int | None:
    return bfs_distances(G, u).get(v)


def parse_graph(text: str, name: str = "") -> Graph:
    """Parse an edge list: a header line ``n m`` then ``m`` lines ``u v``.

    Blank lines and ``#`` comments are ignored. Errors carry the 1-based line
    number of the offending line.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line))
    if not rows:
        raise GraphParseError("empty document", 1)

    def ints(lineno, line):
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"expected two integers, got {line!r}", lineno)
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"expected two integers, got {line!r}", lineno) from None

    lineno, header = rows[0]
    n, m = ints(lineno, header)
    if n < 0 or m < 0:
        raise GraphParseError("negative size in header", lineno)
    if len(rows) - 1 != m:
        last = rows[-1][0]
        raise GraphParseError(f"header announces {m} edges, found {len(rows) - 1}", last)
    seen = set()
    for lineno, line in rows[1:]:
        u, v = ints(lineno, line)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"vertex index out of range in {line!r}", lineno)
        if u == v:
            raise GraphParseError(f"loop at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(f"duplicate edge {key}", lineno)
        seen.add(key)
    return Graph.from_edges(n, seen, name=name)


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise DomainError(f"cycle length must be at least 3, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], name=f"cycle:{n}")


def gen_path(n: int) -> Graph:
    """Path with vertices ``0..n`` (so ``n`` edges)."""
    if n < 0:
        raise DomainError("path length must be non-negative")
    return Graph.from_edges(n + 1, [(i, i + 1) for i in range(n)], name=f"path:{n}")


def gen_complete(n: int) -> Graph:
    if n < 1:
        raise DomainError("complete graph needs at least one vertex")
    return Graph.from_edges(n, itertools.combinations(range(n), 2), name=f"complete:{n}")


def gen_wheel(n: int) -> Graph:
    """Hub vertex 0 joined to every vertex of the rim cycle ``1..n``."""
    if n < 3:
        raise DomainError("wheel rim must have at least 3 vertices")
    rim = [(1 + i, 1 + (i + 1) % n) for i in range(n)]
    spokes = [(0, 1 + i) for i in range(n)]
    return Graph.from_edges(n + 1, rim + spokes, name=f"wheel:{n}")


def gen_hypercube(d: int) -> Graph:
    """The discrete cube Q_d.

    Vertex ``k`` is the 0/1 tuple whose coordinate ``i`` (1-based) is bit
    ``i-1`` of ``k``, so vertices are in colexicographic order.
    """
    if d < 0:
        raise DomainError("hypercube dimension must be non-negative")
    if d > HYPERCUBE_MAX_DIM:
        raise ResourceLimitError(
            f"hypercube dimension {d} exceeds cap {HYPERCUBE_MAX_DIM}", estimate=1 << d
        )
    edges = [(k, k | (1 << i)) for k in range(1 << d) for i in range(d) if not k >> i & 1]
    return Graph.from_edges(1 << d, edges, name=f"hypercube:{d}")


def hypercube_vertex(k: int, d: int) -> tuple:
    return tuple((k >> i) & 1 for i in range(d))


def gen_octahedron() -> Graph:
    # K_{2,2,2}: antipodal pairs {0,1}, {2,3}, {4,5}
    edges = [(u, v) for u, v in itertools.combinations(range(6), 2) if u // 2 != v // 2]
    return Graph.from_edges(6, edges, name="octahedron")


def gen_petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner, name="petersen")


def gen_named(name: str) -> Graph:
    if name == "octahedron":
        return gen_octahedron()
    if name == "petersen":
        return gen_petersen()
    if name.startswith("path:"):
        return gen_path(_int_arg(name, name[5:]))
    raise DomainError(f"unknown graph name {name!r}")


def box_product(G: Graph, H: Graph) -> Graph:
    """Cartesian product; vertex ``(g, h)`` gets index ``g * |H| + h``."""
    if G.vertex_count == 0 or H.vertex_count == 0:
        raise DomainError("box product needs nonempty factors")
    nh = H.vertex_count
    edges = []
    for g in range(G.vertex_count):
        for a, b in H.edges:
            edges.append((g * nh + a, g * nh + b))
    for a, b in G.edges:
        for h in range(nh):
            edges.append((a * nh + h, b * nh + h))
    name = f"({G})x({H})" if G.name or H.name else ""
    return Graph.from_edges(G.vertex_count * nh, edges, name=name)


def times_construction(G: Graph, N: int) -> Graph:
    """G box path(N) with both end layers collapsed to a single point.

    Index 0 is the bottom pole, the last index is the top pole, and layer
    ``L`` (1 <= L <= N-1) vertex ``v`` sits at ``1 + (L-1)*n + v``.
    """
    if N < 2:
        raise DomainError("times construction needs N >= 2")
    if G.vertex_count == 0 or not G.is_connected():
        raise DomainError("times construction needs a connected nonempty graph")
    n = G.vertex_count
    top = 1 + (N - 1) * n

    def at(layer, v):
        if layer == 0:
            return 0
        if layer == N:
            return top
        return 1 + (layer - 1) * n + v

    edges = set()
    for layer in range(1, N):
        for u, v in G.edges:
            edges.add((at(layer, u), at(layer, v)))
    for layer in range(N):
        for v in range(n):
            edges.add((at(layer, v), at(layer + 1, v)))
    name = f"times:{G.name}:{N}" if G.name else ""
    return Graph.from_edges(top + 1, edges, name=name, poles=(0, top))


def triangles(G: Graph) -> list:
    out = []
    for u, v in G.sorted_edges():
        for w in G.adjacency[v]:
            if w > v and G.has_edge(u, w):
                out.append((u, v, w))
    return out


def four_cycles(G: Graph) -> list:
    """All 4-cycles as tuples ``(a, b, c, d)`` with ``a`` least and ``b < d``."""
    out = []
    adj = G.adjacency
    for a in range(G.vertex_count):
        for b, d in itertools.combinations(adj[a], 2):
            if b < a or d < a:
                continue
            for c in adj[b]:
                if c > a and c != d and G.has_edge(c, d):
                    out.append((a, b, c, d))
    return out


def chordless_four_cycles(G: Graph) -> list:
    return [q for q in four_cycles(G) if not G.has_edge(q[0], q[2]) and not G.has_edge(q[1], q[3])]


def has_short_cycles(G: Graph) -> dict:
    return {"has_triangle": bool(triangles(G)), "has_square": bool(four_cycles(G))}


def girth(G: Graph) -> int | None:
    """Length of a shortest cycle, or None for a forest."""
    best = None
    for s in range(G.vertex_count):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in G.adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < best:
                        best = length
    return best


@dataclass(frozen=True)
class CoverMember:
    kind: str  # "edge", "triangle" or "quad"
    vertices: tuple  # cyclic order for triangles and quads

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def edges(self) -> list:
        k = len(self.vertices)
        if k == 2:
            return [tuple(sorted(self.vertices))]
        return [tuple(sorted((self.vertices[i], self.vertices[(i + 1) % k]))) for i in range(k)]


@dataclass(frozen=True)
class CoveringFamily:
    members: tuple

    def count(self, kind: str) -> int:
        return sum(1 for m in self.members if m.kind == kind)

    def vertex_sets(self) -> list:
        return [m.vertex_set for m in self.members]

    def maximal_vertex_sets(self) -> list:
        """Member vertex sets not strictly contained in another member."""
        sets = sorted(set(self.vertex_sets()), key=lambda s: (-len(s), sorted(s)))
        out = []
        for s in sets:
            if not any(s < t for t in out):
                out.append(s)
        return out


def covering_by_short_cycles(G: Graph) -> CoveringFamily:
    """Edges, 3-cycles and chordless 4-cycles of ``G``."""
    members = [CoverMember("edge", e) for e in G.sorted_edges()]
    members += [CoverMember("triangle", t) for t in triangles(G)]
    members += [CoverMember("quad", q) for q in chordless_four_cycles(G)]
    return CoveringFamily(tuple(members))


def _int_arg(token: str, s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise DomainError(f"bad integer {s!r} in graph token {token!r}") from None


def graph_from_token(token: str) -> Graph:
    """Build a graph from a generator token such as ``cycle:5`` or ``times:cycle:5:4``."""
    head, _, rest = token.partition(":")
    if head == "cycle":
        return gen_cycle(_int_arg(token, rest))
    if head == "hypercube":
        return gen_hypercube(_int_arg(token, rest))
    if head == "complete":
        return gen_complete(_int_arg(token, rest))
    if head == "wheel":
        return gen_wheel(_int_arg(token, rest))
    if head in ("octahedron", "petersen") and not rest:
        return gen_named(head)
    if head == "path":
        return gen_path(_int_arg(token, rest))
    if head == "times":
        inner, _, n = rest.rpartition(":")
        if not inner:
            raise DomainError(f"times token needs a base graph and N: {token!r}")
        return times_construction(graph_from_token(inner), _int_arg(token, n))
    raise DomainError(f"unknown graph token {token!r}")
