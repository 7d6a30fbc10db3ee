"""Deterministic fixture corpora for the exhaustive and seeded test suites."""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator

from hnfilt.errors import InvalidInput
from hnfilt.fflinalg import MatrixFF, Subspace, enumerate_subspaces
from hnfilt.instances.filtvec import FiltVecCategory, FiltVecObject
from hnfilt.instances.phimod import PhiModObject, SingularMatrix
from hnfilt.instances.quiver import QuiverRep, QuiverShape, all_reps


def _chains(top: Subspace, length: int, p: int) -> Iterator[tuple[Subspace, ...]]:
    """Decreasing chains ``top ⊇ W_1 ⊇ ... ⊇ W_length``."""
    if length == 0:
        yield ()
        return
    for w in enumerate_subspaces(top.ambient, p):
        if w <= top:
            for rest in _chains(w, length - 1, p):
                yield (w,) + rest


def filtvec_exhaustive(p: int = 2, max_dim: int = 3, weights: tuple[int, int] = (0, 2)) -> list[FiltVecObject]:
    """Every filtration with jumps in ``[lo, hi]`` on ``GF(p)^n`` for ``1 <= n <= max_dim``.

    Each object is stored on the full index range ``[lo, hi]`` so that equal
    filtrations are equal values.
    """
    lo, hi = weights
    out = []
    for n in range(1, max_dim + 1):
        full, zero = Subspace.full(n, p), Subspace.zero(n, p)
        for middle in _chains(full, hi - lo, p):
            out.append(FiltVecObject(p, n, lo, hi, (full,) + middle + (zero,)))
    return out


def random_quivers(count: int = 500, seed: int = 0, p: int = 2, max_total: int = 4) -> list[QuiverRep]:
    """Seeded random representations: 1-3 vertices, up to 3 arrows (loops allowed), theta in [-2, 2]."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        nv = rng.randint(1, 3)
        arrows = tuple((rng.randrange(nv), rng.randrange(nv)) for _ in range(rng.randint(0, 3)))
        total = rng.randint(1, max_total)
        dims = [0] * nv
        for _ in range(total):
            dims[rng.randrange(nv)] += 1
        maps = tuple(
            MatrixFF(
                p,
                dims[s],
                tuple(tuple(rng.randrange(p) for _ in range(dims[s])) for _ in range(dims[t])),
            )
            for s, t in arrows
        )
        theta = tuple(rng.randint(-2, 2) for _ in range(nv))
        out.append(QuiverRep(QuiverShape(nv, arrows), p, tuple(dims), maps, theta))
    return out


SMALL_SHAPES = (
    (QuiverShape(1, ()), ((0,), (1,))),
    (QuiverShape(1, ((0, 0),)), ((0,), (-1,))),
    (QuiverShape(2, ((0, 1),)), ((-1, 1), (1, -1), (0, 0))),
)


def quiver_small(p: int = 2, max_total: int = 2) -> list[QuiverRep]:
    """Every representation of a few small quivers with total dimension in ``[1, max_total]``."""
    out = []
    for shape, thetas in SMALL_SHAPES:
        for dims in itertools.product(range(max_total + 1), repeat=shape.vertices):
            if not 1 <= sum(dims) <= max_total:
                continue
            for theta in thetas:
                out.extend(all_reps(shape, p, dims, theta))
    return out


def quiver_pairs(reps: list[QuiverRep]) -> list[tuple[QuiverRep, QuiverRep]]:
    """Ordered pairs sharing the quiver and the stability weight (so Hom is defined)."""
    return [(x, y) for x in reps for y in reps if x.shape == y.shape and x.theta == y.theta]


def random_phimods(count: int = 20, seed: int = 0, p: int = 2, q: int = 2, max_len: int = 3) -> list[PhiModObject]:
    """Seeded rank-2 modules with polynomial entries of length at most ``max_len``; singular draws are skipped."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        entries = [[[rng.randrange(p) for _ in range(rng.randint(0, max_len))] for _ in range(2)] for _ in range(2)]
        try:
            out.append(PhiModObject.build(p, q, entries))
        except SingularMatrix:
            continue
    return out


def broken_degree_category(sample: list[FiltVecObject]) -> FiltVecCategory:
    """The filtered-vector-space instance with the degree of ``sample[0]`` raised by one.

    Whenever ``sample[0]`` is nonzero its whole-object handle disagrees with
    the perturbed degree, so the additivity check must report a witness.
    """
    if not sample:
        raise InvalidInput("the broken-degree instance needs at least one object")
    base = FiltVecCategory()
    return FiltVecCategory(degree_overrides={sample[0]: base.degree(sample[0]) + 1})
