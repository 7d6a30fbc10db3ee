"""Exact linear algebra over prime fields GF(p).

Vectors are tuples of ints reduced mod p.  Matrices act on column vectors;
subspaces are stored as the reduced row-echelon basis of their row span,
which makes equality and hashing canonical.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cache, cached_property, lru_cache

from hnfilt.errors import EnumerationBound, InvalidInput

Vector = tuple[int, ...]

MAX_PRIME = 17

# Largest ambient dimension enumerate_subspaces accepts for each prime.
ENUMERATION_BOUNDS = {2: 5, 3: 4, 5: 3, 7: 3}
DEFAULT_ENUMERATION_BOUND = 2


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or p < 2 or p > MAX_PRIME:
        raise InvalidInput(f"p must be a prime in [2, {MAX_PRIME}], got {p!r}")
    if any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise InvalidInput(f"p must be prime, got {p}")
    return p


def inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(a, p - 2, p)


def reduce_vector(v: Iterable[int], p: int) -> Vector:
    return tuple(int(x) % p for x in v)


def dot(u: Sequence[int], v: Sequence[int], p: int) -> int:
    return sum(a * b for a, b in zip(u, v)) % p


def add(u: Sequence[int], v: Sequence[int], p: int) -> Vector:
    return tuple((a + b) % p for a, b in zip(u, v))


def scale(c: int, v: Sequence[int], p: int) -> Vector:
    return tuple((c * a) % p for a in v)


@dataclass(frozen=True)
class MatrixFF:
    """A ``len(rows) x ncols`` matrix over GF(p), row-major."""

    p: int
    ncols: int
    rows: tuple[Vector, ...]

    def __post_init__(self):
        check_prime(self.p)
        for r in self.rows:
            if len(r) != self.ncols:
                raise InvalidInput(f"row {r} does not have {self.ncols} entries")
            if any(not 0 <= x < self.p for x in r):
                raise InvalidInput(f"row {r} is not reduced mod {self.p}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], p: int, ncols: int | None = None) -> MatrixFF:
        rows = tuple(reduce_vector(r, p) for r in rows)
        if ncols is None:
            if not rows:
                raise InvalidInput("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        return cls(p, ncols, rows)

    @classmethod
    def identity(cls, n: int, p: int) -> MatrixFF:
        return cls(p, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, nrows: int, ncols: int, p: int) -> MatrixFF:
        return cls(p, ncols, tuple((0,) * ncols for _ in range(nrows)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], p: int, nrows: int) -> MatrixFF:
        return cls(p, len(columns), tuple(tuple(c[i] % p for c in columns) for i in range(nrows)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.ncols:
            raise InvalidInput(f"vector of length {len(v)} for a matrix with {self.ncols} columns")
        return tuple(dot(r, v, self.p) for r in self.rows)

    def transpose(self) -> MatrixFF:
        return MatrixFF(self.p, self.nrows, tuple(self.columns()))

    def __matmul__(self, other: MatrixFF) -> MatrixFF:
        if self.ncols != other.nrows or self.p != other.p:
            raise InvalidInput(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        return MatrixFF(self.p, other.ncols, tuple(tuple(dot(r, c, self.p) for c in cols) for r in self.rows))

    def __add__(self, other: MatrixFF) -> MatrixFF:
        if self.shape != other.shape:
            raise InvalidInput(f"cannot add {self.shape} and {other.shape}")
        return MatrixFF(self.p, self.ncols, tuple(add(a, b, self.p) for a, b in zip(self.rows, other.rows)))

    def scaled(self, c: int) -> MatrixFF:
        return MatrixFF(self.p, self.ncols, tuple(scale(c, r, self.p) for r in self.rows))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def _rref_rows(rows: Sequence[Sequence[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        k = inv(m[r][c], p)
        m[r] = [(k * x) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rref(m: MatrixFF) -> MatrixFF:
    """Reduced row-echelon form with zero rows dropped."""
    rows, _ = _rref_rows(m.rows, m.ncols, m.p)
    return MatrixFF(m.p, m.ncols, tuple(tuple(r) for r in rows))


def rank(m: MatrixFF) -> int:
    return rref(m).nrows


def solve_kernel(m: MatrixFF) -> Subspace:
    """Kernel of ``v -> m v`` as a subspace of GF(p)^ncols."""
    rows, pivots = _rref_rows(m.rows, m.ncols, m.p)
    p = m.p
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * m.ncols
        v[f] = 1
        for row, pc in zip(rows, pivots):
            v[pc] = (-row[f]) % p
        basis.append(v)
    return Subspace.span(basis, p, m.ncols)


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(p)^ambient, held by its canonical RREF basis."""

    p: int
    ambient: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], p: int, ambient: int) -> Subspace:
        vectors = [reduce_vector(v, p) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise InvalidInput(f"vector {v} does not live in GF({p})^{ambient}")
        rows, _ = _rref_rows(vectors, ambient, p)
        return cls(p, ambient, tuple(tuple(r) for r in rows))

    @classmethod
    def zero(cls, ambient: int, p: int) -> Subspace:
        return cls(p, ambient, ())

    @classmethod
    def full(cls, ambient: int, p: int) -> Subspace:
        return cls(p, ambient, MatrixFF.identity(ambient, p).rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis)

    @cached_property
    def nonpivots(self) -> tuple[int, ...]:
        piv = set(self.pivots)
        return tuple(j for j in range(self.ambient) if j not in piv)

    def matrix(self) -> MatrixFF:
        return MatrixFF(self.p, self.ambient, self.basis)

    def reduce(self, v: Sequence[int]) -> Vector:
        """Normal form of ``v`` modulo this subspace (zero at every pivot)."""
        w = list(reduce_vector(v, self.p))
        for row, pc in zip(self.basis, self.pivots):
            if w[pc]:
                f = w[pc]
                w = [(a - f * b) % self.p for a, b in zip(w, row)]
        return tuple(w)

    def contains_vector(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def __le__(self, other: Subspace) -> bool:
        _check_compatible(self, other)
        return _contained(self, other)

    def __lt__(self, other: Subspace) -> bool:
        return self <= other and self.dim < other.dim

    def coords(self, v: Sequence[int]) -> Vector:
        """Coordinates of ``v`` in the RREF basis; ``v`` must lie in the subspace."""
        if not self.contains_vector(v):
            raise InvalidInput(f"{tuple(v)} is not in the subspace")
        return tuple(v[pc] % self.p for pc in self.pivots)

    def from_coords(self, c: Sequence[int]) -> Vector:
        v = [0] * self.ambient
        for ci, row in zip(c, self.basis):
            if ci:
                v = [(a + ci * b) % self.p for a, b in zip(v, row)]
        return tuple(v)

    def quotient_coords(self, v: Sequence[int]) -> Vector:
        """Image of ``v`` in GF(p)^ambient / self, in non-pivot coordinates."""
        w = self.reduce(v)
        return tuple(w[j] for j in self.nonpivots)

    def lift(self, c: Sequence[int]) -> Vector:
        """Section of :meth:`quotient_coords`: place ``c`` at the non-pivot columns."""
        v = [0] * self.ambient
        for ci, j in zip(c, self.nonpivots):
            v[j] = ci % self.p
        return tuple(v)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.basis]


def _check_compatible(a: Subspace, b: Subspace) -> None:
    if a.p != b.p or a.ambient != b.ambient:
        raise InvalidInput(
            f"subspaces of GF({a.p})^{a.ambient} and GF({b.p})^{b.ambient} cannot be compared"
        )


# Subspaces are immutable and the instances ask the same lattice questions
# many times over, so the lattice primitives are memoized.
_LATTICE_CACHE = 1 << 16


@lru_cache(maxsize=_LATTICE_CACHE)
def _contained(a: Subspace, b: Subspace) -> bool:
    return a.dim <= b.dim and all(b.contains_vector(v) for v in a.basis)


@lru_cache(maxsize=_LATTICE_CACHE)
def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_compatible(a, b)
    return Subspace.span(a.basis + b.basis, a.p, a.ambient)


@lru_cache(maxsize=_LATTICE_CACHE)
def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_compatible(a, b)
    p, n = a.p, a.ambient
    if not a.basis or not b.basis:
        return Subspace.zero(n, p)
    # x in a∩b  <=>  x = sum s_i a_i = sum t_j b_j; solve for (s, t) in the left kernel.
    stacked = MatrixFF(p, n, a.basis + b.basis)
    relations = solve_kernel(stacked.transpose())
    k = a.dim
    vectors = [a.from_coords(rel[:k]) for rel in relations.basis]
    return Subspace.span(vectors, p, n)


def image(m: MatrixFF, s: Subspace) -> Subspace:
    if s.ambient != m.ncols:
        raise InvalidInput(f"cannot map a subspace of dimension {s.ambient} by a {m.shape} matrix")
    return Subspace.span([m.apply(v) for v in s.basis], m.p, m.nrows)


def gaussian_binomial(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def subspace_count(n: int, p: int) -> int:
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


def enumeration_bound(p: int) -> int:
    return ENUMERATION_BOUNDS.get(p, DEFAULT_ENUMERATION_BOUND)


def enumerate_subspaces(ambient_dim: int, p: int) -> list[Subspace]:
    """Every subspace of GF(p)^ambient_dim exactly once, sorted by RREF basis."""
    check_prime(p)
    if ambient_dim < 0:
        raise InvalidInput("ambient dimension must be nonnegative")
    if ambient_dim > enumeration_bound(p):
        raise EnumerationBound(
            f"subspace enumeration of GF({p})^{ambient_dim} exceeds the bound "
            f"dim <= {enumeration_bound(p)} ({subspace_count(ambient_dim, p)} subspaces)"
        )
    return list(_enumerate_cached(ambient_dim, p))


@cache
def _enumerate_cached(n: int, p: int) -> tuple[Subspace, ...]:
    out = []
    for k in range(n + 1):
        for pivots in itertools.combinations(range(n), k):
            # Free entries sit right of each row's pivot, outside pivot columns.
            slots = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n) if c not in pivots]
            for values in itertools.product(range(p), repeat=len(slots)):
                rows = [[0] * n for _ in range(k)]
                for r, c in enumerate(pivots):
                    rows[r][c] = 1
                for (r, c), x in zip(slots, values):
                    rows[r][c] = x
                out.append(Subspace(p, n, tuple(tuple(r) for r in rows)))
    out.sort(key=lambda s: s.basis)
    return tuple(out)
