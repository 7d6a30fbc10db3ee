"""Filtered vector spaces over GF(p).

An object is a finite-dimensional space with a decreasing, exhaustive and
separated integer-indexed filtration.  The forgetful functor to vector
spaces identifies strict subobjects with subspaces carrying the induced
filtration; morphisms are linear maps respecting the filtration.

Degree is the weighted sum of jumps, ``sum_i i * dim gr^i``.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
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

MAX_HOM_UNKNOWNS = 64


@dataclass(frozen=True)
class FiltVecObject:
    """``fil[k]`` is the filtration step of index ``imin + k``, for ``k = 0 .. imax-imin+1``."""

    p: int
    dim: int
    imin: int
    imax: int
    fil: tuple[Subspace, ...]

    def __post_init__(self):
        check_prime(self.p)
        if self.dim < 0:
            raise InvalidInput(f"dimension must be nonnegative, got {self.dim}")
        if self.imax < self.imin - 1:
            raise InvalidInput(f"empty weight range [{self.imin}, {self.imax}]")
        if len(self.fil) != self.imax - self.imin + 2:
            raise InvalidInput(
                f"expected {self.imax - self.imin + 2} filtration steps for "
                f"i in [{self.imin}, {self.imax + 1}], got {len(self.fil)}"
            )
        for k, step in enumerate(self.fil):
            if step.p != self.p or step.ambient != self.dim:
                raise InvalidInput(f"fil({self.imin + k}) is not a subspace of GF({self.p})^{self.dim}")
        if self.fil[0].dim != self.dim:
            raise InvalidInput(f"fil({self.imin}) must be the whole space")
        if self.fil[-1].dim != 0:
            raise InvalidInput(f"fil({self.imax + 1}) must be zero")
        for k in range(len(self.fil) - 1):
            if not self.fil[k + 1] <= self.fil[k]:
                raise InvalidInput(
                    f"filtration is not decreasing: fil({self.imin + k + 1}) is not inside fil({self.imin + k})"
                )

    @classmethod
    def from_steps(cls, p: int, dim: int, imin: int, steps: Sequence[Sequence[Sequence[int]]]) -> FiltVecObject:
        """Build from spanning vectors of ``fil(imin), fil(imin+1), ...``; the last must be empty."""
        fil = tuple(Subspace.span(rows, p, dim) for rows in steps)
        return cls(p, dim, imin, imin + len(fil) - 2, fil)

    @classmethod
    def split(cls, p: int, weights: Sequence[int]) -> FiltVecObject:
        """``GF(p)^n`` with ``e_j`` in weight ``weights[j]``."""
        dim = len(weights)
        if not weights:
            return cls(p, 0, 0, -1, (Subspace.zero(0, p),))
        lo, hi = min(weights), max(weights)
        unit = [tuple(int(i == j) for i in range(dim)) for j in range(dim)]
        fil = tuple(
            Subspace.span([unit[j] for j, w in enumerate(weights) if w >= i], p, dim)
            for i in range(lo, hi + 2)
        )
        return cls(p, dim, lo, hi, fil)

    @classmethod
    def zero(cls, p: int) -> FiltVecObject:
        return cls.split(p, [])

    def fil_at(self, i: int) -> Subspace:
        if i <= self.imin:
            return self.fil[0]
        if i > self.imax:
            return Subspace.zero(self.dim, self.p)
        return self.fil[i - self.imin]

    def jumps(self) -> dict[int, int]:
        """``{i: dim gr^i}`` for the nonzero graded pieces."""
        out = {}
        for i in range(self.imin, self.imax + 1):
            d = self.fil_at(i).dim - self.fil_at(i + 1).dim
            if d:
                out[i] = d
        return out

    def to_dict(self) -> dict:
        return {
            "instance": "filtvec",
            "p": self.p,
            "dim": self.dim,
            "imin": self.imin,
            "imax": self.imax,
            "fil": [{"i": self.imin + k, "basis": s.tolist()} for k, s in enumerate(self.fil)],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> FiltVecObject:
        try:
            p, dim, imin, imax = (data[k] for k in ("p", "dim", "imin", "imax"))
            entries = {int(e["i"]): e["basis"] for e in data["fil"]}
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"filtvec object is missing a field: {exc}") from exc
        for name, value in (("p", p), ("dim", dim), ("imin", imin), ("imax", imax)):
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidInput(f"filtvec field {name!r} must be an integer")
        expected = set(range(imin, imax + 2))
        if set(entries) != expected:
            raise InvalidInput(
                f"fil must list every i in [{imin}, {imax + 1}] exactly once, got {sorted(entries)}"
            )
        check_prime(p)
        fil = []
        for i in range(imin, imax + 2):
            rows = entries[i]
            if any(len(r) != dim for r in rows):
                raise InvalidInput(f"basis rows of fil({i}) must have length {dim}")
            fil.append(Subspace.span(rows, p, dim))
        return cls(p, dim, imin, imax, tuple(fil))


def _degree_of_steps(steps: Mapping[int, int], lo: int, hi: int) -> int:
    """``sum_i i * (d(i) - d(i+1))`` for a dimension profile on ``[lo, hi+1]``."""
    return sum(i * (steps[i] - steps[i + 1]) for i in range(lo, hi + 1))


def fv_degree(x: FiltVecObject) -> int:
    """Weighted jump sum, cross-checked against its Abel-summed form."""
    direct = _degree_of_steps({i: x.fil_at(i).dim for i in range(x.imin, x.imax + 2)}, x.imin, x.imax)
    abel = sum(x.fil_at(i).dim for i in range(1, x.imax + 1)) - sum(
        x.dim - x.fil_at(i).dim for i in range(x.imin + 1, 1)
    )
    if direct != abel:
        raise AxiomViolation(f"degree formulas disagree: {direct} vs {abel}")
    return direct


@dataclass(frozen=True)
class FiltVecSub:
    """A strict subobject: a subspace with the induced filtration."""

    parent: FiltVecObject
    subspace: Subspace

    @property
    def rank(self) -> int:
        return self.subspace.dim

    @cached_property
    def degree(self) -> int:
        x = self.parent
        dims = {i: subspace_intersect(x.fil_at(i), self.subspace).dim for i in range(x.imin, x.imax + 2)}
        return _degree_of_steps(dims, x.imin, x.imax)


@dataclass(frozen=True)
class FiltVecMorphism:
    source: FiltVecObject
    target: FiltVecObject
    matrix: MatrixFF

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise InvalidInput(
                f"a map from dimension {self.source.dim} to {self.target.dim} needs a "
                f"{self.target.dim}x{self.source.dim} matrix, got {self.matrix.shape}"
            )
        for i in range(self.source.imin, self.source.imax + 1):
            if not image(self.matrix, self.source.fil_at(i)) <= self.target.fil_at(i):
                raise InvalidInput(f"the matrix does not map fil({i}) of the source into fil({i}) of the target")


def fv_strict_subs(x: FiltVecObject) -> list[FiltVecSub]:
    return [FiltVecSub(x, w) for w in enumerate_subspaces(x.dim, x.p)]


def _induced(x: FiltVecObject, w: Subspace) -> FiltVecObject:
    """``w`` with the induced filtration, in the coordinates of its RREF basis."""
    fil = tuple(
        Subspace.span([w.coords(v) for v in subspace_intersect(x.fil_at(i), w).basis], x.p, w.dim)
        for i in range(x.imin, x.imax + 2)
    )
    return FiltVecObject(x.p, w.dim, x.imin, x.imax, fil)


def fv_quotient(x: FiltVecObject, s: FiltVecSub) -> FiltVecObject:
    """``x/s`` with the image filtration, in the non-pivot coordinates of ``s``."""
    w = s.subspace
    qdim = x.dim - w.dim
    fil = tuple(
        Subspace.span([w.quotient_coords(v) for v in x.fil_at(i).basis], x.p, qdim)
        for i in range(x.imin, x.imax + 2)
    )
    return FiltVecObject(x.p, qdim, x.imin, x.imax, fil)


def fv_hom_basis(x: FiltVecObject, y: FiltVecObject) -> list[FiltVecMorphism]:
    """GF(p)-basis of the filtration-compatible maps ``x -> y``."""
    if x.p != y.p:
        raise InvalidInput("objects over different fields")
    n, m = x.dim, y.dim
    if n * m > MAX_HOM_UNKNOWNS:
        raise EnumerationBound(f"hom space with {n * m} unknowns exceeds the bound {MAX_HOM_UNKNOWNS}")
    if n * m == 0:
        return []
    p = x.p
    # Unknown M[a][b] sits at index a*n + b.  For each i, every u in fil_x(i)
    # and every z annihilating fil_y(i) give the equation z . (M u) = 0.
    constraints = []
    for i in range(min(x.imin, y.imin), max(x.imax, y.imax) + 2):
        ann = solve_kernel(y.fil_at(i).matrix())
        for u in x.fil_at(i).basis:
            for z in ann.basis:
                constraints.append(tuple((z[a] * u[b]) % p for a in range(m) for b in range(n)))
    solutions = solve_kernel(MatrixFF(p, n * m, tuple(constraints)) if constraints else MatrixFF.zero(0, n * m, p))
    return [
        FiltVecMorphism(x, y, MatrixFF(p, n, tuple(tuple(v[a * n : (a + 1) * n]) for a in range(m))))
        for v in solutions.basis
    ]


def fv_saturation_gap(x: FiltVecObject, subspace: Subspace, sub_filtration: Mapping[int, Subspace]) -> tuple[int, int]:
    """Degrees of ``subspace`` under a smaller filtration and under the induced one.

    ``sub_filtration`` maps indices to subspaces of the ambient space; below
    its smallest index it is the whole ``subspace``, above its largest it is
    zero.  It must be decreasing and pointwise inside the induced filtration.
    """
    if subspace.ambient != x.dim or subspace.p != x.p:
        raise InvalidInput("subspace does not live in the object's space")
    if not sub_filtration:
        raise InvalidInput("empty sub-filtration")
    lo, hi = min(sub_filtration), max(sub_filtration)

    def given(i: int) -> Subspace:
        if i < lo:
            return subspace
        if i > hi:
            return Subspace.zero(x.dim, x.p)
        return sub_filtration.get(i, Subspace.zero(x.dim, x.p))

    if given(lo) != subspace or given(hi).dim != 0:
        raise InvalidInput("sub-filtration must start at the subspace and end at zero")
    start, stop = min(lo, x.imin), max(hi, x.imax + 1)
    for i in range(start, stop + 1):
        g = given(i)
        if not g <= subspace_intersect(x.fil_at(i), subspace):
            raise InvalidInput(f"sub-filtration step {i} is not inside the induced filtration")
        if not given(i + 1) <= g:
            raise InvalidInput(f"sub-filtration is not decreasing at {i}")
    small = _degree_of_steps({i: given(i).dim for i in range(start, stop + 2)}, start, stop)
    return small, FiltVecSub(x, subspace).degree


class FiltVecCategory(SlopeCategory):
    name = "filtvec"

    def rank(self, x: FiltVecObject) -> int:
        return x.dim

    def base_degree(self, x: FiltVecObject) -> int:
        return fv_degree(x)

    @lru_cache(maxsize=4096)
    def strict_subs(self, x: FiltVecObject) -> list[FiltVecSub]:
        return fv_strict_subs(x)

    def zero_sub(self, x):
        return FiltVecSub(x, Subspace.zero(x.dim, x.p))

    def whole_sub(self, x):
        return FiltVecSub(x, Subspace.full(x.dim, x.p))

    def contains(self, big: FiltVecSub, small: FiltVecSub) -> bool:
        _same_parent(big, small)
        return small.subspace <= big.subspace

    def factors_through(self, small: FiltVecSub, big: FiltVecSub) -> bool:
        _same_parent(big, small)
        w, u = small.subspace, big.subspace
        if not all(u.contains_vector(v) for v in w.basis):
            return False
        g = MatrixFF.from_columns([u.coords(v) for v in w.basis], w.p, u.dim) if w.dim else MatrixFF.zero(u.dim, 0, w.p)
        try:
            FiltVecMorphism(self.sub_object(small), self.sub_object(big), g)
        except InvalidInput:
            return False
        return True

    def sub_object(self, s: FiltVecSub) -> FiltVecObject:
        return _induced(s.parent, s.subspace)

    def quotient(self, x, s: FiltVecSub) -> FiltVecObject:
        _check_parent(x, s)
        return fv_quotient(x, s)

    def preimage(self, x, s: FiltVecSub, t: FiltVecSub) -> FiltVecSub:
        _check_parent(x, s)
        w = s.subspace
        if t.subspace.ambient != x.dim - w.dim:
            raise InvalidInput("t is not a subobject of x/s")
        return FiltVecSub(x, Subspace.span(w.basis + tuple(w.lift(c) for c in t.subspace.basis), x.p, x.dim))

    def pushforward(self, x, s: FiltVecSub, u: FiltVecSub) -> FiltVecSub:
        _check_parent(x, s)
        _check_parent(x, u)
        if not s.subspace <= u.subspace:
            raise InvalidInput("pushforward needs u to contain s")
        w = s.subspace
        q = fv_quotient(x, s)
        return FiltVecSub(q, Subspace.span([w.quotient_coords(v) for v in u.subspace.basis], x.p, q.dim))

    def intersect(self, s, t):
        _same_parent(s, t)
        return FiltVecSub(s.parent, subspace_intersect(s.subspace, t.subspace))

    def saturated_sum(self, s, t):
        _same_parent(s, t)
        return FiltVecSub(s.parent, subspace_sum(s.subspace, t.subspace))

    def direct_sum(self, x: FiltVecObject, y: FiltVecObject):
        if x.p != y.p:
            raise InvalidInput("objects over different fields")
        p, n, m = x.p, x.dim, y.dim
        lo, hi = min(x.imin, y.imin), max(x.imax, y.imax)
        fil = tuple(
            Subspace.span(
                [v + (0,) * m for v in x.fil_at(i).basis] + [(0,) * n + v for v in y.fil_at(i).basis],
                p,
                n + m,
            )
            for i in range(lo, hi + 2)
        )
        total = FiltVecObject(p, n + m, lo, hi, fil)
        unit = MatrixFF.identity(n + m, p).rows
        return (
            total,
            FiltVecSub(total, Subspace.span(unit[:n], p, n + m)),
            FiltVecSub(total, Subspace.span(unit[n:], p, n + m)),
        )

    def saturation_witnesses(self, x: FiltVecObject) -> Iterator[tuple[str, int, int, bool]]:
        for s in self.strict_subs(x):
            w = s.subspace
            induced = {i: subspace_intersect(x.fil_at(i), w) for i in range(x.imin, x.imax + 2)}
            top = max((i for i, g in induced.items() if g.dim), default=x.imin)
            variants = [("induced", induced)]
            for t in range(x.imin, top):
                variants.append((f"truncated above {t}", {i: (g if i <= t else Subspace.zero(x.dim, x.p)) for i, g in induced.items()}))
            variants.append(("shifted down by 1", {i - 1: g for i, g in induced.items()}))
            for label, filt in variants:
                small, strict = fv_saturation_gap(x, w, filt)
                same = all(_step(filt, i, w) == _step(induced, i, w) for i in range(x.imin - 2, x.imax + 3))
                yield f"{w.tolist()} {label}", small, strict, same

    def describe_sub(self, s: FiltVecSub):
        return {"basis": s.subspace.tolist()}

    # -- morphisms ---------------------------------------------------------

    def morphism(self, x, y, rows) -> FiltVecMorphism:
        return FiltVecMorphism(x, y, MatrixFF.from_rows(rows, x.p, x.dim))

    def hom_basis(self, x, y):
        return fv_hom_basis(x, y)

    def identity(self, x):
        return FiltVecMorphism(x, x, MatrixFF.identity(x.dim, x.p))

    def compose(self, g: FiltVecMorphism, f: FiltVecMorphism) -> FiltVecMorphism:
        if f.target != g.source:
            raise InvalidInput("morphisms are not composable")
        return FiltVecMorphism(f.source, g.target, g.matrix @ f.matrix)

    def linear_combination(self, coeffs, morphisms, x, y):
        total = MatrixFF.zero(y.dim, x.dim, x.p)
        for c, f in zip(coeffs, morphisms):
            total = total + f.matrix.scaled(c)
        return FiltVecMorphism(x, y, total)

    def is_zero_morphism(self, f) -> bool:
        return f.matrix.is_zero()

    def kernel(self, f):
        return FiltVecSub(f.source, solve_kernel(f.matrix))

    def image_saturated(self, f):
        return FiltVecSub(f.target, image(f.matrix, Subspace.full(f.source.dim, f.source.p)))

    def image_of_sub(self, f, s):
        _check_parent(f.source, s)
        return FiltVecSub(f.target, image(f.matrix, s.subspace))

    def induced_map(self, f, lo_x, hi_x, lo_y, hi_y):
        x, y = f.source, f.target
        for s in (lo_x, hi_x):
            _check_parent(x, s)
        for s in (lo_y, hi_y):
            _check_parent(y, s)
        if not image(f.matrix, lo_x.subspace) <= lo_y.subspace or not image(f.matrix, hi_x.subspace) <= hi_y.subspace:
            raise AxiomViolation("the morphism does not respect the given subquotients")
        src = self.pushforward(x, lo_x, hi_x)
        dst = self.pushforward(y, lo_y, hi_y)
        columns = []
        for u in src.subspace.basis:
            w = f.matrix.apply(lo_x.subspace.lift(u))
            columns.append(dst.subspace.coords(lo_y.subspace.quotient_coords(w)))
        g_src, g_dst = self.sub_object(src), self.sub_object(dst)
        if not columns:
            return FiltVecMorphism(g_src, g_dst, MatrixFF.zero(g_dst.dim, 0, x.p))
        return FiltVecMorphism(g_src, g_dst, MatrixFF.from_columns(columns, x.p, g_dst.dim))


def _step(filt: Mapping[int, Subspace], i: int, w: Subspace) -> Subspace:
    if i in filt:
        return filt[i]
    if i < min(filt):
        return w
    return Subspace.zero(w.ambient, w.p)


def _check_parent(x, s) -> None:
    if s.parent != x:
        raise InvalidInput("subobject handle belongs to a different object")


def _same_parent(s, t) -> None:
    if s.parent != t.parent:
        raise InvalidInput("subobject handles belong to different objects")
