"""Chains, the cubical boundary, chain complexes and homology."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .cubes import (
    CubeBasis,
    Restriction,
    cube_dim,
    default_cube_cap,
    enumerate_cubes,
    face_positions,
    is_degenerate,
    _coerce_restriction,
)
from .errors import ClosednessError, DomainError, ResourceLimitError
from .graph import Graph
from .certificates import retraction_chain, retraction_prisms, sample_cubes
from .linalg import QQ, ZZ, Ring, SparseMatrix, rank_and_torsion, unit_eliminate


class Chain:
    """A finite formal sum of non-degenerate cubes of one dimension.

    Coefficients are integers; over GF(p) they are kept reduced mod p.
    Degenerate cubes are silently dropped since they are zero in the
    quotient, and so are zero coefficients.
    """

    __slots__ = ("dim", "terms", "ring")

    def __init__(self, dim: int, terms=None, ring: Ring = ZZ):
        self.dim = dim
        self.ring = Ring.parse(ring)
        self.terms = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for cube, coeff in items:
                self._add_term(tuple(cube), coeff)

    @classmethod
    def of(cls, cube, coeff: int = 1, ring: Ring = ZZ) -> "Chain":
        cube = tuple(cube)
        return cls(cube_dim(cube), {cube: coeff}, ring)

    def _add_term(self, cube, coeff):
        if len(cube) != 1 << self.dim:
            raise DomainError(f"cube {cube} does not have dimension {self.dim}")
        if is_degenerate(cube):
            return
        v = self.ring.reduce(self.terms.get(cube, 0) + coeff)
        if v:
            self.terms[cube] = v
        else:
            self.terms.pop(cube, None)

    def copy(self) -> "Chain":
        c = Chain(self.dim, ring=self.ring)
        c.terms = dict(self.terms)
        return c

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, cube):
        return self.terms.get(tuple(cube), 0)

    def _check(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if other.dim != self.dim and self.terms and other.terms:
            raise DomainError(f"cannot combine chains of dimension {self.dim} and {other.dim}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = self.copy() if self.terms or not other.terms else Chain(other.dim, ring=self.ring)
        for cube, c in other.terms.items():
            out._add_term(cube, c)
        return out

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        out = Chain(self.dim, ring=self.ring)
        for cube, c in self.terms.items():
            out._add_term(cube, c * k)
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.dim == other.dim and self.terms == other.terms

    def __repr__(self):
        body = " + ".join(f"{c}*{cube}" for cube, c in self)
        return f"Chain(dim={self.dim}: {body or '0'})"

    def image_sizes(self) -> set:
        return {len(set(cube)) for cube in self.terms}

    def to_json(self) -> list:
        return [{"labels": list(cube), "coeff": c} for cube, c in self]

    @classmethod
    def from_json(cls, records, dim: int | None = None, ring: Ring = ZZ) -> "Chain":
        records = list(records)
        if dim is None:
            if not records:
                raise DomainError("cannot infer the dimension of an empty chain")
            dim = cube_dim(records[0]["labels"])
        return cls(dim, [(r["labels"], r["coeff"]) for r in records], ring)


def cube_boundary_terms(cube) -> dict:
    """Boundary of one cube as ``{face: coeff}`` with degenerate faces dropped."""
    d = cube_dim(cube)
    out = {}
    if d == 0:
        return out
    for i in range(1, d + 1):
        sign = -1 if i % 2 else 1
        for eps, s in ((0, sign), (1, -sign)):
            f = tuple(cube[k] for k in face_positions(d, i, eps))
            if d > 1 and is_degenerate(f):
                continue
            out[f] = out.get(f, 0) + s
    return {f: c for f, c in out.items() if c}


def cube_boundary_raw(cube) -> dict:
    """Boundary keeping degenerate faces (before passing to the quotient)."""
    d = cube_dim(cube)
    out = {}
    for i in range(1, d + 1):
        sign = -1 if i % 2 else 1
        for eps, s in ((0, sign), (1, -sign)):
            f = tuple(cube[k] for k in face_positions(d, i, eps))
            out[f] = out.get(f, 0) + s
    return {f: c for f, c in out.items() if c}


def boundary(c: Chain) -> Chain:
    if c.dim == 0 or not c.terms:
        return Chain(max(c.dim - 1, 0), ring=c.ring)
    out = Chain(c.dim - 1, ring=c.ring)
    for cube, coeff in c.terms.items():
        for f, s in cube_boundary_terms(cube).items():
            out._add_term(f, coeff * s)
    return out


def boundary_matrix(hi: CubeBasis, lo: CubeBasis, strict: bool = True) -> SparseMatrix:
    """Matrix of the boundary from ``hi`` (columns) to ``lo`` (rows).

    With ``strict`` a non-degenerate face missing from ``lo`` raises
    :class:`ClosednessError`; otherwise it is ignored.
    """
    index = lo.index
    d = hi.dim
    tables = [
        (face_positions(d, i, eps), (-1 if i % 2 else 1) * (1 if eps == 0 else -1))
        for i in range(1, d + 1)
        for eps in (0, 1)
    ]
    cols = []
    for cube in hi.cubes:
        col = {}
        for pos, s in tables:
            f = tuple(cube[k] for k in pos)
            j = index.get(f)
            if j is None:
                if strict and (d == 1 or not is_degenerate(f)):
                    raise ClosednessError(f"face {f} of {cube} lies outside the restricted basis")
                continue
            col[j] = col.get(j, 0) + s
        cols.append({j: v for j, v in col.items() if v})
    return SparseMatrix(len(lo), len(hi), cols)


@dataclass
class ChainComplex:
    graph: Graph
    restriction: Restriction
    bases: dict
    boundaries: dict  # d -> matrix from C_d to C_{d-1}, for d >= 1

    @property
    def d_max(self) -> int:
        return max(self.bases)

    def basis_sizes(self) -> list:
        return [len(self.bases[d]) for d in sorted(self.bases)]

    def boundary_matrix(self, d: int) -> SparseMatrix:
        if d == 0:
            return SparseMatrix.zero(0, len(self.bases[0]))
        if d not in self.boundaries:
            raise DomainError(f"boundary in dimension {d} was not assembled")
        return self.boundaries[d]

    def chain_vector(self, c: Chain) -> dict:
        index = self.bases[c.dim].index
        out = {}
        for cube, coeff in c.terms.items():
            if cube not in index:
                raise DomainError(f"cube {cube} is not in the basis of this complex")
            out[index[cube]] = coeff
        return out

    def check_dd_zero(self) -> bool:
        for d in range(2, self.d_max + 1):
            if not self.boundaries[d - 1].compose(self.boundaries[d]).is_zero():
                return False
        return True


def assemble_complex(
    G: Graph,
    d_max: int,
    restriction=None,
    ring=None,
    d_min: int = 0,
    threads: int = 1,
    max_cubes: int | None = None,
    cache_dir: str | None = None,
) -> ChainComplex:
    """Enumerate bases for dimensions ``d_min..d_max`` and their boundary matrices.

    ``ring`` is accepted for interface symmetry; matrices are always stored
    with integer entries and reduced at solve time.
    """
    if d_max < 0 or d_min < 0 or d_min > d_max:
        raise DomainError("need 0 <= d_min <= d_max")
    restriction = _coerce_restriction(restriction)
    bases = {
        d: enumerate_cubes(G, d, restriction, threads=threads, max_cubes=max_cubes, cache_dir=cache_dir)
        for d in range(d_min, d_max + 1)
    }
    boundaries = {d: boundary_matrix(bases[d], bases[d - 1]) for d in range(d_min + 1, d_max + 1)}
    return ChainComplex(G, restriction, bases, boundaries)


@dataclass
class HomologyResult:
    dim: int
    ring: str
    betti: int
    torsion: list
    basis_sizes: dict
    ranks: dict
    elapsed_ms: float = 0.0
    graph: str = ""
    restriction: str = "all"
    method: str = "full"

    def to_json(self) -> dict:
        return {
            "graph": self.graph,
            "restriction": self.restriction,
            "dim": self.dim,
            "ring": self.ring,
            "betti": self.betti,
            "torsion": list(self.torsion),
            "basis_sizes": {str(k): v for k, v in sorted(self.basis_sizes.items())},
            "ranks": {str(k): v for k, v in sorted(self.ranks.items())},
            "method": self.method,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def homology(X: ChainComplex, d: int, ring=QQ) -> HomologyResult:
    """Homology of an assembled complex in dimension ``d``."""
    start = time.perf_counter()
    ring = Ring.parse(ring)
    if d not in X.bases or d + 1 not in X.bases:
        raise DomainError(f"complex must be assembled through dimension {d + 1}")
    if d > 0 and d - 1 not in X.bases:
        raise DomainError(f"complex must be assembled from dimension {d - 1}")
    n_d = len(X.bases[d])
    rank_d = rank_and_torsion(X.boundaries[d], ring).rank if d > 0 else 0
    upper = rank_and_torsion(X.boundaries[d + 1], ring)
    sizes = {k: len(X.bases[k]) for k in (d - 1, d, d + 1) if k in X.bases}
    return HomologyResult(
        dim=d,
        ring=str(ring),
        betti=n_d - rank_d - upper.rank,
        torsion=upper.torsion,
        basis_sizes=sizes,
        ranks={d: rank_d, d + 1: upper.rank},
        elapsed_ms=(time.perf_counter() - start) * 1000,
        graph=X.graph.name,
        restriction=X.restriction.kind,
    )


def homology_two_point(G: Graph, d: int, ring=QQ, **kw) -> HomologyResult:
    return compute_homology(G, d, ring, restriction=Restriction.two_point(), **kw)


def compute_homology(
    G: Graph,
    d: int,
    ring=QQ,
    restriction=None,
    strategy: str = "auto",
    threads: int = 1,
    max_cubes: int | None = None,
    full_limit: int = 400_000,
    cache_dir: str | None = None,
    sample_sizes=(20_000, 60_000, 150_000),
    seed: int = 0,
) -> HomologyResult:
    """Homology of the (restricted) cubical complex of ``G`` in dimension ``d``.

    strategy ``full`` enumerates the (d+1)-cubes and eliminates the whole
    boundary. ``certified`` only eliminates the boundaries of a spanning
    candidate set (see :mod:`cubhom.certificates`) and can therefore only
    prove vanishing. ``auto`` goes full when there are at most
    ``full_limit`` (d+1)-cubes, tries a certificate otherwise, and falls back
    to full enumeration up to ``max_cubes`` if the certificate falls short.
    """
    start = time.perf_counter()
    ring = Ring.parse(ring)
    restriction = _coerce_restriction(restriction)
    if d < 0:
        raise DomainError("dimension must be non-negative")
    if strategy not in ("auto", "full", "certified"):
        raise DomainError(f"unknown strategy {strategy!r}")
    if max_cubes is None:
        max_cubes = default_cube_cap(d + 1)
    kw = dict(threads=threads, cache_dir=cache_dir)
    lo = enumerate_cubes(G, d - 1, restriction, max_cubes=max_cubes, **kw) if d > 0 else None
    mid = enumerate_cubes(G, d, restriction, max_cubes=max_cubes, **kw)
    rank_d = rank_and_torsion(boundary_matrix(mid, lo), ring).rank if d > 0 else 0
    cycles = len(mid) - rank_d
    sizes = {d: len(mid)}
    if lo is not None:
        sizes[d - 1] = len(lo)

    top = None
    if strategy == "full":
        top = enumerate_cubes(G, d + 1, restriction, max_cubes=max_cubes, **kw)
    elif strategy == "auto":
        try:
            top = enumerate_cubes(G, d + 1, restriction, max_cubes=min(full_limit, max_cubes), **kw)
        except ResourceLimitError:
            top = None

    method = "full"
    rank_up = None
    torsion = []
    if top is None:
        rank_up = _certified_rank(G, d, mid, cycles, ring, restriction, sample_sizes, seed)
        if rank_up is not None:
            method = "certified"
            sizes[d + 1] = None
        elif strategy == "certified":
            raise ResourceLimitError(
                f"no certificate found for vanishing in dimension {d}", estimate=None
            )
        else:
            top = enumerate_cubes(G, d + 1, restriction, max_cubes=max_cubes, **kw)
    if top is not None:
        upper = rank_and_torsion(boundary_matrix(top, mid), ring)
        sizes[d + 1] = len(top)
        rank_up, torsion = upper.rank, upper.torsion

    return HomologyResult(
        dim=d,
        ring=str(ring),
        betti=cycles - rank_up,
        torsion=torsion,
        basis_sizes=sizes,
        ranks={d: rank_d, d + 1: rank_up},
        elapsed_ms=(time.perf_counter() - start) * 1000,
        graph=G.name,
        restriction=restriction.kind,
        method=method,
    )


def _certified_rank(G, d, mid, cycles, ring, restriction, sample_sizes, seed):
    """Return ``cycles`` if some candidate column set provably spans the cycles."""
    if cycles == 0:
        return 0
    candidates = set()
    if restriction.kind == "all" and d >= 1:
        chain = retraction_chain(G)
        if chain is not None:
            candidates.update(retraction_prisms(G, d, chain))
            if _unit_rank(candidates, d, mid, ring) == cycles:
                return cycles
    for size in sample_sizes:
        cubes = sample_cubes(G, d + 1, size, seed=seed, restriction=restriction)
        candidates.update(cubes)
        if _unit_rank(candidates, d, mid, ring) == cycles:
            return cycles
        if len(cubes) < size:  # the sampler ran dry
            break
    return None


def _unit_rank(cubes, d, mid, ring):
    basis = CubeBasis(d + 1, sorted(cubes))
    return unit_eliminate(boundary_matrix(basis, mid), ring.modulus).rank
