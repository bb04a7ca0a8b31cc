"""Singular cubes: validation, faces, degeneracy and enumeration.

A singular d-cube is stored as a plain tuple of ``2**d`` vertex labels.
Position ``k`` holds the value on the vertex of Q_d whose coordinate ``i``
is bit ``i-1`` of ``k`` (colexicographic order).
"""

from __future__ import annotations

import os
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, ResourceLimitError
from .graph import CoveringFamily, Graph

DEFAULT_MEMORY_BYTES = 8 << 30


def cube_dim(labels) -> int:
    size = len(labels)
    if size == 0 or size & (size - 1):
        raise DomainError(f"cube must have a power-of-two number of labels, got {size}")
    return size.bit_length() - 1


@lru_cache(maxsize=None)
def face_positions(d: int, i: int, eps: int) -> tuple:
    """Positions of the ``d``-cube read by the face with coordinate ``i`` fixed to ``eps``."""
    low_mask = (1 << (i - 1)) - 1
    out = []
    for m in range(1 << (d - 1)):
        low = m & low_mask
        high = m >> (i - 1)
        out.append(low | (eps << (i - 1)) | (high << i))
    return tuple(out)


@lru_cache(maxsize=None)
def cube_edges(d: int) -> tuple:
    """Edges of Q_d as position pairs ``(k, k + 2**i)``."""
    return tuple((k, k | (1 << i)) for i in range(d) for k in range(1 << d) if not k >> i & 1)


@lru_cache(maxsize=None)
def _degeneracy_pairs(d: int) -> tuple:
    return tuple(
        tuple((k, k | (1 << i)) for k in range(1 << d) if not k >> i & 1) for i in range(d)
    )


def face(labels, i: int, sign) -> tuple:
    """Face map: fix coordinate ``i`` (1-based) to 0 for sign ``-`` and to 1 for ``+``."""
    d = cube_dim(labels)
    if d == 0:
        raise DomainError("a 0-cube has no faces")
    if not 1 <= i <= d:
        raise DomainError(f"face direction {i} out of range 1..{d}")
    eps = _sign_bit(sign)
    return tuple(labels[k] for k in face_positions(d, i, eps))


def _sign_bit(sign) -> int:
    if sign in ("+", 1, True):
        return 1
    if sign in ("-", 0, -1, False):
        return 0
    raise DomainError(f"bad face sign {sign!r}")


def is_degenerate(labels) -> bool:
    d = cube_dim(labels)
    for pairs in _degeneracy_pairs(d):
        if all(labels[a] == labels[b] for a, b in pairs):
            return True
    return False


def validate_cube(labels, d: int, G: Graph) -> tuple:
    """Check that ``labels`` is a graph map Q_d -> G and return it as a tuple."""
    labels = tuple(labels)
    if len(labels) != 1 << d:
        raise DomainError(f"a {d}-cube needs {1 << d} labels, got {len(labels)}")
    for v in labels:
        if not (isinstance(v, int) and 0 <= v < G.vertex_count):
            raise DomainError(f"label {v!r} is not a vertex of the graph")
    for a, b in cube_edges(d):
        if not G.adjacent_or_equal(labels[a], labels[b]):
            raise DomainError(
                f"cube edge between positions {a} and {b} maps to non-adjacent "
                f"vertices {labels[a]} and {labels[b]}"
            )
    return labels


def is_cube(labels, G: Graph) -> bool:
    d = cube_dim(labels)
    return all(G.adjacent_or_equal(labels[a], labels[b]) for a, b in cube_edges(d))


# restrictions ---------------------------------------------------------------


@dataclass(frozen=True)
class Restriction:
    """Which cubes to keep.

    kind is one of ``all``, ``two_point``, ``subset`` (image inside
    ``vertex_sets[0]``) or ``subgraph_list`` (image inside some member of
    ``vertex_sets``).
    """

    kind: str = "all"
    vertex_sets: tuple = ()

    @classmethod
    def all(cls):
        return cls("all")

    @classmethod
    def two_point(cls):
        return cls("two_point")

    @classmethod
    def subset(cls, vertices):
        return cls("subset", (frozenset(vertices),))

    @classmethod
    def subgraph_list(cls, family):
        if isinstance(family, CoveringFamily):
            sets = family.maximal_vertex_sets()
        else:
            sets = [frozenset(s) for s in family]
        sets = sorted(set(sets), key=lambda s: (len(s), sorted(s)))
        return cls("subgraph_list", tuple(sets))

    def tag(self) -> str:
        if self.kind in ("all", "two_point"):
            return self.kind
        body = ";".join(",".join(map(str, sorted(s))) for s in self.vertex_sets)
        return f"{self.kind}[{body}]"

    def admits(self, labels) -> bool:
        image = set(labels)
        if self.kind == "all":
            return True
        if self.kind == "two_point":
            return len(image) <= 2
        return any(image <= s for s in self.vertex_sets)

    def __str__(self):
        return self.kind


_TAG_CODES = {"all": 0, "two_point": 1, "subset": 2, "subgraph_list": 3}


# enumeration ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _lower_neighbors(d: int) -> tuple:
    return tuple(tuple(k ^ (1 << i) for i in range(d) if k >> i & 1) for k in range(1 << d))


def _closed_masks(G: Graph) -> list:
    masks = []
    for v in range(G.vertex_count):
        m = 1 << v
        for w in G.adjacency[v]:
            m |= 1 << w
        masks.append(m)
    return masks


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _enumerate_masked(G: Graph, d: int, allowed: int, first: int | None, cap: int | None):
    """All non-degenerate d-cubes with image inside ``allowed`` (a vertex bitmask).

    Output is in lexicographic order because labels are tried in increasing
    order at every position. If ``first`` is given only cubes starting with
    that label are produced.
    """
    size = 1 << d
    masks = _closed_masks(G)
    lower = _lower_neighbors(d)
    pairs = _degeneracy_pairs(d)
    labels = [0] * size
    out = []
    starts = [first] if first is not None else list(_bits(allowed))

    def rec(k):
        if k == size:
            for ps in pairs:
                for a, b in ps:
                    if labels[a] != labels[b]:
                        break
                else:
                    return
            out.append(tuple(labels))
            if cap is not None and len(out) > cap:
                raise ResourceLimitError(
                    f"more than {cap} non-degenerate {d}-cubes", estimate=len(out)
                )
            return
        cand = allowed
        for j in lower[k]:
            cand &= masks[labels[j]]
        while cand:
            low = cand & -cand
            labels[k] = low.bit_length() - 1
            rec(k + 1)
            cand ^= low

    for s in starts:
        if not allowed >> s & 1:
            continue
        labels[0] = s
        if d == 0:
            out.append((s,))
        else:
            rec(1)
    return out


def _worker(args):
    G, d, allowed, first, cap = args
    return _enumerate_masked(G, d, allowed, first, cap)


def _enumerate_allowed(G, d, allowed, threads, cap):
    if threads <= 1 or d == 0:
        return _enumerate_masked(G, d, allowed, None, cap)
    jobs = [(G, d, allowed, s, cap) for s in _bits(allowed)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(_worker, jobs))
    out = []
    for part in parts:  # parts are ordered by first label, so the join is sorted
        out.extend(part)
        if cap is not None and len(out) > cap:
            raise ResourceLimitError(f"more than {cap} non-degenerate {d}-cubes", len(out))
    return out


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def default_cube_cap(d: int, memory_bytes: int = DEFAULT_MEMORY_BYTES) -> int:
    # rough Python cost of one stored cube: tuple header, ints, index entry,
    # plus a column of the boundary matrix
    per_cube = 120 + 8 * (1 << d) + 48 * 2 * d
    return max(1, memory_bytes // per_cube)


class CubeBasis:
    """Sorted, duplicate-free list of non-degenerate d-cubes with an index."""

    def __init__(self, dim: int, cubes, restriction: Restriction | None = None):
        self.dim = dim
        self.cubes = list(cubes)
        self.restriction = restriction or Restriction.all()
        self._index = None

    @property
    def index(self) -> dict:
        if self._index is None:
            self._index = {c: i for i, c in enumerate(self.cubes)}
        return self._index

    def __len__(self):
        return len(self.cubes)

    def __iter__(self):
        return iter(self.cubes)

    def __getitem__(self, i):
        return self.cubes[i]

    def __contains__(self, cube):
        return tuple(cube) in self.index

    def __eq__(self, other):
        return isinstance(other, CubeBasis) and self.dim == other.dim and self.cubes == other.cubes

    def __repr__(self):
        return f"CubeBasis(dim={self.dim}, size={len(self.cubes)}, {self.restriction})"


def enumerate_cubes(
    G: Graph,
    d: int,
    restriction: Restriction | str | None = None,
    threads: int = 1,
    max_cubes: int | None = None,
    cache_dir: str | None = None,
) -> CubeBasis:
    """Enumerate the non-degenerate singular d-cubes of ``G`` under a restriction."""
    if d < 0:
        raise DomainError("dimension must be non-negative")
    restriction = _coerce_restriction(restriction)
    if max_cubes is None:
        max_cubes = default_cube_cap(d)
    if cache_dir is None:
        cache_dir = os.environ.get("CUBHOM_CACHE_DIR") or None
    if cache_dir:
        cached = load_cached_basis(cache_dir, G, d, restriction)
        if cached is not None:
            return cached

    full = _mask(range(G.vertex_count))
    if restriction.kind == "all":
        cubes = _enumerate_allowed(G, d, full, threads, max_cubes)
    elif restriction.kind == "subset":
        cubes = _enumerate_allowed(G, d, _mask(restriction.vertex_sets[0]), threads, max_cubes)
    else:
        if restriction.kind == "two_point":
            if d == 0:
                groups = [frozenset([v]) for v in range(G.vertex_count)]
            else:
                groups = [frozenset(e) for e in G.sorted_edges()]
        else:
            groups = restriction.vertex_sets
        found = set()
        for s in groups:
            found.update(_enumerate_masked(G, d, _mask(s), None, max_cubes))
            if len(found) > max_cubes:
                raise ResourceLimitError(
                    f"more than {max_cubes} non-degenerate {d}-cubes", estimate=len(found)
                )
        cubes = sorted(found)

    basis = CubeBasis(d, cubes, restriction)
    if cache_dir:
        save_cached_basis(cache_dir, G, basis)
    return basis


def _coerce_restriction(r) -> Restriction:
    if r is None:
        return Restriction.all()
    if isinstance(r, Restriction):
        return r
    if r in ("all", "two_point"):
        return Restriction(r)
    raise DomainError(f"unknown restriction {r!r}")


def count_cubes(G: Graph, d: int, restriction=None, max_cubes: int | None = None) -> int:
    return len(enumerate_cubes(G, d, restriction, max_cubes=max_cubes))


# cache ----------------------------------------------------------------------

CACHE_MAGIC = b"CUBH"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sB16sBB16sQB")


def _restriction_digest(r: Restriction) -> bytes:
    import hashlib

    return hashlib.sha256(r.tag().encode()).digest()[:16]


def cache_path(cache_dir: str, G: Graph, d: int, r: Restriction) -> str:
    name = f"{G.digest().hex()}-{d}-{_restriction_digest(r).hex()}.cubes"
    return os.path.join(cache_dir, name)


def save_cached_basis(cache_dir: str, G: Graph, basis: CubeBasis) -> str:
    """Write a basis as a binary record file and return its path.

    Layout: fixed header (magic, version byte, graph hash, dimension,
    restriction kind, restriction hash, record count, label width in bytes)
    followed by ``count`` records of ``2**d`` little-endian labels each.
    """
    os.makedirs(cache_dir, exist_ok=True)
    r = basis.restriction
    width = 1 if G.vertex_count <= 0x100 else 2 if G.vertex_count <= 0x10000 else 4
    header = _HEADER.pack(
        CACHE_MAGIC, CACHE_VERSION, G.digest(), basis.dim, _TAG_CODES[r.kind],
        _restriction_digest(r), len(basis), width,
    )
    fmt = {1: "B", 2: "H", 4: "I"}[width]
    rec = struct.Struct("<" + fmt * (1 << basis.dim))
    path = cache_path(cache_dir, G, basis.dim, r)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(header)
        for c in basis.cubes:
            fh.write(rec.pack(*c))
    os.replace(tmp, path)
    return path


def load_cached_basis(cache_dir: str, G: Graph, d: int, r: Restriction) -> CubeBasis | None:
    path = cache_path(cache_dir, G, d, r)
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError:
        return None
    if len(data) < _HEADER.size:
        return None
    magic, version, gdig, dim, kind, rdig, count, width = _HEADER.unpack_from(data)
    if (magic, version, gdig, dim, kind, rdig) != (
        CACHE_MAGIC, CACHE_VERSION, G.digest(), d, _TAG_CODES[r.kind], _restriction_digest(r)
    ):
        return None
    fmt = {1: "B", 2: "H", 4: "I"}.get(width)
    if fmt is None:
        return None
    rec = struct.Struct("<" + fmt * (1 << d))
    if len(data) != _HEADER.size + count * rec.size:
        return None
    cubes = [t for t in rec.iter_unpack(data[_HEADER.size:])]
    return CubeBasis(d, cubes, r)
