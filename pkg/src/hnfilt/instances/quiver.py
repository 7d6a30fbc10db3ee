"""Quiver representations over GF(p) with a stability weight.

The category is abelian and the forgetful functor is the identity, so every
subrepresentation is strict.  Rank is total dimension and the degree is the
weight pairing ``sum_v theta[v] * dims[v]``.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache

from hnfilt.engine import SlopeCategory
from hnfilt.errors import AxiomViolation, EnumerationBound, InvalidInput
from hnfilt.fflinalg import (
    MatrixFF,
    Subspace,
    check_prime,
    enumerate_subspaces,
    image,
    solve_kernel,
    subspace_intersect,
    subspace_sum,
)

MAX_SUBREP_CANDIDATES = 200_000
MAX_HOM_UNKNOWNS = 64


@dataclass(frozen=True)
class QuiverShape:
    vertices: int
    arrows: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.vertices < 0:
            raise InvalidInput("vertex count must be nonnegative")
        for a in self.arrows:
            if len(a) != 2 or not all(0 <= v < self.vertices for v in a):
                raise InvalidInput(f"arrow {a} has an endpoint outside 0..{self.vertices - 1}")


@dataclass(frozen=True)
class QuiverRep:
    """``maps[a]`` is a ``dims[dst] x dims[src]`` matrix acting on column vectors."""

    shape: QuiverShape
    p: int
    dims: tuple[int, ...]
    maps: tuple[MatrixFF, ...]
    theta: tuple[int, ...]

    def __post_init__(self):
        check_prime(self.p)
        n = self.shape.vertices
        if len(self.dims) != n or len(self.theta) != n:
            raise InvalidInput(f"dims and theta need one entry per vertex ({n})")
        if any(d < 0 for d in self.dims):
            raise InvalidInput("dimensions must be nonnegative")
        if len(self.maps) != len(self.shape.arrows):
            raise InvalidInput(f"expected {len(self.shape.arrows)} arrow maps, got {len(self.maps)}")
        for k, ((s, t), m) in enumerate(zip(self.shape.arrows, self.maps)):
            if m.p != self.p or m.shape != (self.dims[t], self.dims[s]):
                raise InvalidInput(
                    f"map of arrow {k} ({s}->{t}) must be {self.dims[t]}x{self.dims[s]} over GF({self.p}), got {m.shape}"
                )

    @classmethod
    def build(cls, p: int, vertices: int, arrows, dims, maps, theta) -> QuiverRep:
        arrows = tuple(tuple(a) for a in arrows)
        dims = tuple(dims)
        mats = []
        for (s, t), rows in zip(arrows, maps):
            if dims[t] == 0:
                mats.append(MatrixFF.zero(0, dims[s], p))
            elif dims[s] == 0 and all(len(r) == 0 for r in rows):
                # Accept both [] and [[], ...] for maps out of a zero space.
                mats.append(MatrixFF.zero(dims[t], 0, p))
            else:
                mats.append(MatrixFF.from_rows(rows, p, dims[s]))
        return cls(QuiverShape(vertices, arrows), p, dims, tuple(mats), tuple(theta))

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def to_dict(self) -> dict:
        return {
            "instance": "quiver",
            "p": self.p,
            "vertices": self.shape.vertices,
            "arrows": [list(a) for a in self.shape.arrows],
            "dims": list(self.dims),
            "maps": [m.tolist() for m in self.maps],
            "theta": list(self.theta),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> QuiverRep:
        try:
            p, vertices = data["p"], data["vertices"]
            arrows, dims, maps, theta = data["arrows"], data["dims"], data["maps"], data["theta"]
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"quiver object is missing a field: {exc}") from exc
        if len(maps) != len(arrows):
            raise InvalidInput(f"expected {len(arrows)} arrow maps, got {len(maps)}")
        try:
            return cls.build(p, vertices, arrows, dims, maps, theta)
        except (TypeError, IndexError) as exc:
            raise InvalidInput(f"malformed quiver object: {exc}") from exc


def qr_degree(x: QuiverRep) -> int:
    return sum(t * d for t, d in zip(x.theta, x.dims))


@dataclass(frozen=True)
class QuiverSub:
    parent: QuiverRep
    parts: tuple[Subspace, ...]

    @cached_property
    def rank(self) -> int:
        return sum(s.dim for s in self.parts)

    @cached_property
    def degree(self) -> int:
        return sum(t * s.dim for t, s in zip(self.parent.theta, self.parts))


@dataclass(frozen=True)
class QuiverMorphism:
    """Per-vertex matrices ``blocks[v]: source.dims[v] -> target.dims[v]`` commuting with arrows."""

    source: QuiverRep
    target: QuiverRep
    blocks: tuple[MatrixFF, ...]

    def __post_init__(self):
        x, y = self.source, self.target
        if x.shape != y.shape or x.p != y.p:
            raise InvalidInput("morphisms need representations of the same quiver over the same field")
        for v, b in enumerate(self.blocks):
            if b.shape != (y.dims[v], x.dims[v]):
                raise InvalidInput(f"block at vertex {v} must be {y.dims[v]}x{x.dims[v]}")
        for (s, t), hx, hy in zip(x.shape.arrows, x.maps, y.maps):
            if hy @ self.blocks[s] != self.blocks[t] @ hx:
                raise InvalidInput(f"blocks do not commute with arrow {s}->{t}")


def _arrow_stable(x: QuiverRep, parts: Sequence[Subspace], upto: int) -> bool:
    """Arrow-stability for every arrow whose endpoints are both below ``upto``."""
    for (s, t), m in zip(x.shape.arrows, x.maps):
        if s < upto and t < upto and not image(m, parts[s]) <= parts[t]:
            return False
    return True


def qr_strict_subs(x: QuiverRep) -> list[QuiverSub]:
    """All subrepresentations, pruned vertex by vertex in index order."""
    per_vertex = [enumerate_subspaces(d, x.p) for d in x.dims]
    total = 1
    for choices in per_vertex:
        total *= len(choices)
    if total > MAX_SUBREP_CANDIDATES:
        raise EnumerationBound(f"{total} candidate subspace tuples exceed the bound {MAX_SUBREP_CANDIDATES}")
    out: list[QuiverSub] = []

    def extend(prefix: list[Subspace]):
        v = len(prefix)
        if v == len(per_vertex):
            out.append(QuiverSub(x, tuple(prefix)))
            return
        for w in per_vertex[v]:
            prefix.append(w)
            if _arrow_stable(x, prefix, v + 1):
                extend(prefix)
            prefix.pop()

    extend([])
    return out


# Representations and subrepresentations are immutable; chains and axiom
# checks revisit the same quotients many times.
_QUOTIENT_CACHE = 1 << 14


@lru_cache(maxsize=_QUOTIENT_CACHE)
def _restrict(x: QuiverRep, parts: tuple[Subspace, ...]) -> QuiverRep:
    """The subrepresentation on ``parts`` in RREF coordinates."""
    maps = []
    for (s, t), m in zip(x.shape.arrows, x.maps):
        cols = [parts[t].coords(m.apply(v)) for v in parts[s].basis]
        maps.append(_from_columns(cols, x.p, parts[t].dim, parts[s].dim))
    return QuiverRep(x.shape, x.p, tuple(w.dim for w in parts), tuple(maps), x.theta)


@lru_cache(maxsize=_QUOTIENT_CACHE)
def qr_quotient(x: QuiverRep, s: QuiverSub) -> QuiverRep:
    maps = []
    for (a, b), m in zip(x.shape.arrows, x.maps):
        wa, wb = s.parts[a], s.parts[b]
        cols = [wb.quotient_coords(m.apply(wa.lift(e))) for e in _unit_vectors(x.dims[a] - wa.dim)]
        maps.append(_from_columns(cols, x.p, x.dims[b] - wb.dim, x.dims[a] - wa.dim))
    dims = tuple(d - w.dim for d, w in zip(x.dims, s.parts))
    return QuiverRep(x.shape, x.p, dims, tuple(maps), x.theta)


def qr_hom_basis(x: QuiverRep, y: QuiverRep) -> list[QuiverMorphism]:
    """Basis of the per-vertex maps commuting with every arrow."""
    if x.shape != y.shape or x.p != y.p:
        raise InvalidInput("hom needs representations of the same quiver over the same field")
    if x.theta != y.theta:
        raise InvalidInput("hom needs representations with the same stability weight")
    p = x.p
    offsets, n_unknowns = [], 0
    for v in range(x.shape.vertices):
        offsets.append(n_unknowns)
        n_unknowns += x.dims[v] * y.dims[v]
    if n_unknowns > MAX_HOM_UNKNOWNS:
        raise EnumerationBound(f"hom space with {n_unknowns} unknowns exceeds the bound {MAX_HOM_UNKNOWNS}")
    if n_unknowns == 0:
        return []

    def index(v: int, row: int, col: int) -> int:
        return offsets[v] + row * x.dims[v] + col

    # For arrow s->t: (h_y f_s - f_t h_x)[i][j] = 0.
    constraints = []
    for (s, t), hx, hy in zip(x.shape.arrows, x.maps, y.maps):
        for i in range(y.dims[t]):
            for j in range(x.dims[s]):
                row = [0] * n_unknowns
                for k in range(y.dims[s]):
                    row[index(s, k, j)] += hy.rows[i][k]
                for k in range(x.dims[t]):
                    row[index(t, i, k)] -= hx.rows[k][j]
                constraints.append(tuple(c % p for c in row))
    sol = solve_kernel(MatrixFF(p, n_unknowns, tuple(constraints)))
    out = []
    for vec in sol.basis:
        blocks = []
        for v in range(x.shape.vertices):
            rows = tuple(
                tuple(vec[index(v, r, c)] for c in range(x.dims[v])) for r in range(y.dims[v])
            )
            blocks.append(MatrixFF(p, x.dims[v], rows))
        out.append(QuiverMorphism(x, y, tuple(blocks)))
    return out


def _unit_vectors(n: int) -> list[tuple[int, ...]]:
    return [tuple(int(i == j) for i in range(n)) for j in range(n)]


def _from_columns(cols, p: int, nrows: int, ncols: int) -> MatrixFF:
    if ncols == 0:
        return MatrixFF.zero(nrows, 0, p)
    return MatrixFF.from_columns(cols, p, nrows)


class QuiverCategory(SlopeCategory):
    name = "quiver"

    def rank(self, x: QuiverRep) -> int:
        return x.total_dim

    def base_degree(self, x: QuiverRep) -> int:
        return qr_degree(x)

    @lru_cache(maxsize=4096)
    def strict_subs(self, x: QuiverRep) -> list[QuiverSub]:
        return qr_strict_subs(x)

    def zero_sub(self, x):
        return QuiverSub(x, tuple(Subspace.zero(d, x.p) for d in x.dims))

    def whole_sub(self, x):
        return QuiverSub(x, tuple(Subspace.full(d, x.p) for d in x.dims))

    def contains(self, big, small) -> bool:
        _same_parent(big, small)
        return all(a <= b for a, b in zip(small.parts, big.parts))

    def factors_through(self, small, big) -> bool:
        _same_parent(big, small)
        blocks = []
        for w, u in zip(small.parts, big.parts):
            if not all(u.contains_vector(v) for v in w.basis):
                return False
            blocks.append(_from_columns([u.coords(v) for v in w.basis], w.p, u.dim, w.dim))
        try:
            QuiverMorphism(self.sub_object(small), self.sub_object(big), tuple(blocks))
        except InvalidInput:
            return False
        return True

    def sub_object(self, s):
        return _restrict(s.parent, s.parts)

    def quotient(self, x, s):
        _check_parent(x, s)
        return qr_quotient(x, s)

    def preimage(self, x, s, t):
        _check_parent(x, s)
        parts = tuple(
            Subspace.span(w.basis + tuple(w.lift(c) for c in tv.basis), x.p, d)
            for w, tv, d in zip(s.parts, t.parts, x.dims)
        )
        return QuiverSub(x, parts)

    def pushforward(self, x, s, u):
        _check_parent(x, s)
        _check_parent(x, u)
        if not self.contains(u, s):
            raise InvalidInput("pushforward needs u to contain s")
        q = qr_quotient(x, s)
        parts = tuple(
            Subspace.span([w.quotient_coords(v) for v in uv.basis], x.p, qd)
            for w, uv, qd in zip(s.parts, u.parts, q.dims)
        )
        return QuiverSub(q, parts)

    def intersect(self, s, t):
        _same_parent(s, t)
        return QuiverSub(s.parent, tuple(subspace_intersect(a, b) for a, b in zip(s.parts, t.parts)))

    def saturated_sum(self, s, t):
        _same_parent(s, t)
        return QuiverSub(s.parent, tuple(subspace_sum(a, b) for a, b in zip(s.parts, t.parts)))

    def direct_sum(self, x: QuiverRep, y: QuiverRep):
        if x.shape != y.shape or x.p != y.p or x.theta != y.theta:
            raise InvalidInput("direct sums need the same quiver, field and stability weight")
        p = x.p
        maps = []
        for (s, t), hx, hy in zip(x.shape.arrows, x.maps, y.maps):
            rows = [r + (0,) * y.dims[s] for r in hx.rows] + [(0,) * x.dims[s] + r for r in hy.rows]
            maps.append(MatrixFF(p, x.dims[s] + y.dims[s], tuple(rows)))
        dims = tuple(a + b for a, b in zip(x.dims, y.dims))
        total = QuiverRep(x.shape, p, dims, tuple(maps), x.theta)
        first = tuple(Subspace.span(_unit_vectors(d)[: x.dims[v]], p, d) for v, d in enumerate(dims))
        second = tuple(Subspace.span(_unit_vectors(d)[x.dims[v] :], p, d) for v, d in enumerate(dims))
        return total, QuiverSub(total, first), QuiverSub(total, second)

    def describe_sub(self, s):
        return {"parts": [w.tolist() for w in s.parts]}

    # -- morphisms ---------------------------------------------------------

    def hom_basis(self, x, y):
        return qr_hom_basis(x, y)

    def identity(self, x):
        return QuiverMorphism(x, x, tuple(MatrixFF.identity(d, x.p) for d in x.dims))

    def compose(self, g, f):
        if f.target != g.source:
            raise InvalidInput("morphisms are not composable")
        return QuiverMorphism(f.source, g.target, tuple(b @ a for a, b in zip(f.blocks, g.blocks)))

    def linear_combination(self, coeffs, morphisms, x, y):
        blocks = [MatrixFF.zero(y.dims[v], x.dims[v], x.p) for v in range(x.shape.vertices)]
        for c, f in zip(coeffs, morphisms):
            blocks = [acc + b.scaled(c) for acc, b in zip(blocks, f.blocks)]
        return QuiverMorphism(x, y, tuple(blocks))

    def is_zero_morphism(self, f) -> bool:
        return all(b.is_zero() for b in f.blocks)

    def kernel(self, f):
        return QuiverSub(f.source, tuple(solve_kernel(b) for b in f.blocks))

    def image_saturated(self, f):
        return self.image_of_sub(f, self.whole_sub(f.source))

    def image_of_sub(self, f, s):
        _check_parent(f.source, s)
        return QuiverSub(f.target, tuple(image(b, w) for b, w in zip(f.blocks, s.parts)))

    def induced_map(self, f, lo_x, hi_x, lo_y, hi_y):
        x, y = f.source, f.target
        if not self.contains(lo_y, self.image_of_sub(f, lo_x)) or not self.contains(hi_y, self.image_of_sub(f, hi_x)):
            raise AxiomViolation("the morphism does not respect the given subquotients")
        src = self.pushforward(x, lo_x, hi_x)
        dst = self.pushforward(y, lo_y, hi_y)
        blocks = []
        for v, b in enumerate(f.blocks):
            cols = [
                dst.parts[v].coords(lo_y.parts[v].quotient_coords(b.apply(lo_x.parts[v].lift(u))))
                for u in src.parts[v].basis
            ]
            blocks.append(_from_columns(cols, x.p, dst.parts[v].dim, src.parts[v].dim))
        return QuiverMorphism(self.sub_object(src), self.sub_object(dst), tuple(blocks))


def _check_parent(x, s) -> None:
    if s.parent != x:
        raise InvalidInput("subobject handle belongs to a different object")


def _same_parent(s, t) -> None:
    if s.parent != t.parent:
        raise InvalidInput("subobject handles belong to different objects")


def a2_identity(p: int, theta: tuple[int, int]) -> QuiverRep:
    """``GF(p) --id--> GF(p)`` on the quiver ``0 -> 1``."""
    return QuiverRep.build(p, 2, [(0, 1)], (1, 1), [[[1]]], theta)


def all_reps(shape: QuiverShape, p: int, dims: Sequence[int], theta: Sequence[int]):
    """Every representation with the given dimension vector (all arrow matrices)."""
    sizes = [dims[t] * dims[s] for s, t in shape.arrows]
    for values in itertools.product(range(p), repeat=sum(sizes)):
        maps, k = [], 0
        for (s, t), n in zip(shape.arrows, sizes):
            flat = values[k : k + n]
            k += n
            rows = tuple(tuple(flat[r * dims[s] : (r + 1) * dims[s]]) for r in range(dims[t]))
            maps.append(MatrixFF(p, dims[s], rows))
        yield QuiverRep(shape, p, tuple(dims), tuple(maps), tuple(theta))
