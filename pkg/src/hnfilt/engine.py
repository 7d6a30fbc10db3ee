"""Generic Harder-Narasimhan machinery over a slope category.

A slope category is anything implementing :class:`SlopeCategory`: objects
with an additive rank and degree, a finite lattice of strict subobjects that
can be enumerated, quotients, and (optionally) morphisms.  Every algorithm
here only talks to that contract, so the same code runs on filtered vector
spaces, quiver representations and phi-modules.

Slopes are :class:`fractions.Fraction` values; degrees are integers.
"""

from __future__ import annotations

import abc
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from hnfilt.errors import AxiomViolation, HNError, InvalidInput, ZeroObject
from hnfilt.polygon import PolygonFn, upper_hull

Slope = Fraction


def format_slope(mu: Fraction) -> str:
    """Exact ``num/den`` text, always with the denominator."""
    mu = Fraction(mu)
    return f"{mu.numerator}/{mu.denominator}"


def parse_slope(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"not a slope: {text!r}") from exc


class SlopeCategory(abc.ABC):
    """The operations an instance provides to the HN engine.

    Subobject handles returned by an instance are hashable, compare equal
    exactly when they denote the same strict subobject, and carry ``parent``,
    ``rank`` and ``degree`` attributes.  Morphisms carry ``source`` and
    ``target``.

    ``degree_overrides`` replaces the degree of specific objects; it exists
    to build deliberately broken instances for negative tests.
    """

    name = "abstract"

    def __init__(self, degree_overrides: Mapping[Any, int] | None = None):
        self.degree_overrides = dict(degree_overrides or {})

    # -- objects -----------------------------------------------------------

    @abc.abstractmethod
    def rank(self, x) -> int: ...

    @abc.abstractmethod
    def base_degree(self, x) -> int: ...

    def degree(self, x) -> int:
        if x in self.degree_overrides:
            return self.degree_overrides[x]
        return self.base_degree(x)

    @abc.abstractmethod
    def direct_sum(self, x, y) -> tuple[Any, Any, Any]:
        """``(x ⊕ y, handle of x, handle of y)``."""

    # -- strict subobjects -------------------------------------------------

    @abc.abstractmethod
    def strict_subs(self, x) -> list:
        """Every strict subobject of ``x``, zero and ``x`` included."""

    @abc.abstractmethod
    def zero_sub(self, x): ...

    @abc.abstractmethod
    def whole_sub(self, x): ...

    @abc.abstractmethod
    def contains(self, big, small) -> bool:
        """Containment read off the underlying (forgetful) level."""

    @abc.abstractmethod
    def factors_through(self, small, big) -> bool:
        """Whether the inclusion of ``small`` factors through ``big`` as a morphism."""

    @abc.abstractmethod
    def sub_object(self, s): ...

    @abc.abstractmethod
    def quotient(self, x, s): ...

    @abc.abstractmethod
    def preimage(self, x, s, t):
        """Strict subobject of ``x`` lying over ``t``, a strict subobject of ``x/s``."""

    @abc.abstractmethod
    def pushforward(self, x, s, u):
        """Image of ``u ⊇ s`` in ``x/s``."""

    @abc.abstractmethod
    def intersect(self, s, t): ...

    @abc.abstractmethod
    def saturated_sum(self, s, t): ...

    def subquotient(self, x, lo, hi):
        """The object ``hi/lo`` for strict ``lo ⊆ hi ⊆ x``."""
        return self.sub_object(self.pushforward(x, lo, hi))

    def saturation_witnesses(self, x) -> Iterator[tuple[str, int, int, bool]]:
        """Pairs (non-strict degree, strict degree) over one F-class.

        Yields ``(label, degree_of_smaller, degree_of_saturation, same_object)``.
        Instances without non-strict subobjects yield nothing.
        """
        return iter(())

    def describe_sub(self, s) -> Any:
        return repr(s)

    # -- morphisms ---------------------------------------------------------

    def hom_basis(self, x, y) -> list:
        raise InvalidInput(f"the {self.name} instance does not provide morphisms")

    def identity(self, x):
        raise InvalidInput(f"the {self.name} instance does not provide morphisms")

    def compose(self, g, f):
        raise InvalidInput(f"the {self.name} instance does not provide morphisms")

    def linear_combination(self, coeffs: Sequence[int], morphisms: Sequence, x, y):
        raise InvalidInput(f"the {self.name} instance does not provide morphisms")

    def is_zero_morphism(self, f) -> bool:
        raise InvalidInput(f"the {self.name} instance does not provide morphisms")

    def kernel(self, f):
        raise InvalidInput(f"the {self.name} instance does not provide morphisms")

    def image_saturated(self, f):
        raise InvalidInput(f"the {self.name} instance does not provide morphisms")

    def image_of_sub(self, f, s):
        """Saturation of ``f(s)`` inside the target."""
        raise InvalidInput(f"the {self.name} instance does not provide morphisms")

    def induced_map(self, f, lo_x, hi_x, lo_y, hi_y):
        """The map ``hi_x/lo_x -> hi_y/lo_y`` induced by ``f``."""
        raise InvalidInput(f"the {self.name} instance does not provide morphisms")


def slope(inst: SlopeCategory, x) -> Fraction:
    r = inst.rank(x)
    if r == 0:
        raise ZeroObject("the zero object has no slope")
    return Fraction(inst.degree(x), r)


def sub_slope(s) -> Fraction:
    if s.rank == 0:
        raise ZeroObject("the zero subobject has no slope")
    return Fraction(s.degree, s.rank)


def _nonzero(inst: SlopeCategory, x) -> None:
    if inst.rank(x) == 0:
        raise ZeroObject("HN data is only defined for nonzero objects")


def is_semistable(inst: SlopeCategory, x) -> bool:
    """No nonzero proper strict subobject has slope above ``mu(x)``."""
    _nonzero(inst, x)
    mu = slope(inst, x)
    whole = inst.whole_sub(x)
    return all(sub_slope(s) <= mu for s in inst.strict_subs(x) if s.rank > 0 and s != whole)


def max_slope_subs(inst: SlopeCategory, x) -> tuple[Fraction, list]:
    """The maximal slope over nonzero strict subobjects and all its achievers."""
    _nonzero(inst, x)
    candidates = [s for s in inst.strict_subs(x) if s.rank > 0]
    mu_max = max(sub_slope(s) for s in candidates)
    return mu_max, [s for s in candidates if sub_slope(s) == mu_max]


def scss(inst: SlopeCategory, x):
    """The largest strict subobject of maximal slope."""
    _, achievers = max_slope_subs(inst, x)
    for s in sorted(achievers, key=lambda s: -s.rank):
        if all(inst.contains(s, t) for t in achievers):
            return s
    raise AxiomViolation(
        f"no subobject of maximal slope contains all the others ({len(achievers)} achievers)"
    )


@dataclass(frozen=True)
class HNFiltration:
    """``0 = steps[0] ⊊ ... ⊊ steps[N] = X`` with graded slopes and ranks."""

    steps: tuple
    graded_slopes: tuple[Fraction, ...]
    graded_ranks: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.graded_slopes)

    @property
    def parent(self):
        return self.steps[-1].parent

    def graded(self) -> list[tuple[Fraction, int]]:
        return list(zip(self.graded_slopes, self.graded_ranks))


def _hn_steps(inst: SlopeCategory, x) -> HNFiltration:
    first = scss(inst, x)
    whole, zero = inst.whole_sub(x), inst.zero_sub(x)
    if first == whole:
        return HNFiltration((zero, whole), (slope(inst, x),), (inst.rank(x),))
    rest = _hn_steps(inst, inst.quotient(x, first))
    steps = (zero,) + tuple(inst.preimage(x, first, t) for t in rest.steps)
    slopes = (sub_slope(first),) + rest.graded_slopes
    if slopes[0] <= slopes[1]:
        raise AxiomViolation(f"graded slopes {format_slope(slopes[0])}, {format_slope(slopes[1])} do not decrease")
    return HNFiltration(steps, slopes, (first.rank,) + rest.graded_ranks)


def hn_filtration(inst: SlopeCategory, x) -> HNFiltration:
    """The HN filtration: the SCSS, then preimages of the HN steps of the quotient."""
    _nonzero(inst, x)
    filt = _hn_steps(inst, x)
    if not verify_hn(inst, x, filt):
        raise AxiomViolation("the assembled filtration fails the HN conditions")
    return filt


def verify_hn(inst: SlopeCategory, x, cand: HNFiltration) -> bool:
    """Whether ``cand`` is an HN filtration of ``x``; malformed input gives False."""
    try:
        steps = tuple(cand.steps)
        n = len(steps) - 1
        if n < 1 or len(cand.graded_slopes) != n or len(cand.graded_ranks) != n:
            return False
        if steps[0] != inst.zero_sub(x) or steps[-1] != inst.whole_sub(x):
            return False
        strict = set(inst.strict_subs(x))
        if any(s not in strict for s in steps):
            return False
        for lo, hi, mu, r in zip(steps, steps[1:], cand.graded_slopes, cand.graded_ranks):
            if hi.rank <= lo.rank or not inst.contains(hi, lo):
                return False
            gr = inst.subquotient(x, lo, hi)
            if inst.rank(gr) != r or slope(inst, gr) != mu or not is_semistable(inst, gr):
                return False
        return all(a > b for a, b in zip(cand.graded_slopes, cand.graded_slopes[1:]))
    except (HNError, TypeError, AttributeError):
        return False


def slope_index(filt: HNFiltration, mu) -> Any:
    """``X^(mu)``: the largest step whose graded slopes are all ``>= mu``."""
    k = sum(1 for m in filt.graded_slopes if m >= mu)
    return filt.steps[k]


def graded_bounds(filt: HNFiltration, mu) -> tuple[Any, Any]:
    """``(X^(mu+), X^(mu))``; equal when ``mu`` is not an HN slope."""
    k = sum(1 for m in filt.graded_slopes if m >= mu)
    if k and filt.graded_slopes[k - 1] == mu:
        return filt.steps[k - 1], filt.steps[k]
    return filt.steps[k], filt.steps[k]


def gr_map(
    inst: SlopeCategory,
    f,
    mu,
    source_filt: HNFiltration | None = None,
    target_filt: HNFiltration | None = None,
):
    """The map ``Gr^(mu)(X) -> Gr^(mu)(Y)`` induced by ``f: X -> Y``."""
    source_filt = source_filt or hn_filtration(inst, f.source)
    target_filt = target_filt or hn_filtration(inst, f.target)
    lo_x, hi_x = graded_bounds(source_filt, mu)
    lo_y, hi_y = graded_bounds(target_filt, mu)
    return inst.induced_map(f, lo_x, hi_x, lo_y, hi_y)


def hom_vanishes_predicted(filt_x: HNFiltration, filt_y: HNFiltration) -> bool:
    return min(filt_x.graded_slopes) > max(filt_y.graded_slopes)


def hn_polygon(filt: HNFiltration) -> PolygonFn:
    return PolygonFn.from_segments(filt.graded())


def oracle_polygon(inst: SlopeCategory, x) -> PolygonFn:
    """Upper convex hull of ``(rank, degree)`` over nonzero strict subobjects."""
    _nonzero(inst, x)
    return upper_hull((s.rank, s.degree) for s in inst.strict_subs(x) if s.rank > 0)


def chain_graded(inst: SlopeCategory, x, chain: Sequence) -> list[tuple[int, int]]:
    """``(rank, degree)`` of each graded piece of a chain of strict subobjects."""
    return [
        (inst.rank(g), inst.degree(g))
        for g in (inst.subquotient(x, lo, hi) for lo, hi in zip(chain, chain[1:]))
    ]


def weighted_slope_identity(inst: SlopeCategory, x, chain: Sequence) -> bool:
    """``mu(x)`` is the rank-weighted average of the graded slopes, and degrees add."""
    graded = chain_graded(inst, x, chain)
    if any(r == 0 for r, _ in graded):
        return False
    rk = inst.rank(x)
    average = sum(Fraction(r, rk) * Fraction(d, r) for r, d in graded)
    return sum(d for _, d in graded) == inst.degree(x) and average == slope(inst, x)


def slope_sandwich(mu_sub: Fraction, mu: Fraction, mu_quot: Fraction) -> bool:
    """Exactly one of ``sub < x < quot``, ``quot < x < sub`` or all equal."""
    cases = (
        mu_sub < mu < mu_quot,
        mu_quot < mu < mu_sub,
        mu_sub == mu == mu_quot,
    )
    return sum(cases) == 1


def strict_chains(inst: SlopeCategory, x) -> Iterator[tuple]:
    """Every chain ``0 ⊊ ... ⊊ x`` of strict subobjects."""
    subs = inst.strict_subs(x)
    whole = inst.whole_sub(x)
    above: dict = {}

    def successors(s):
        if s not in above:
            above[s] = [t for t in subs if t.rank > s.rank and inst.contains(t, s)]
        return above[s]

    def extend(chain):
        last = chain[-1]
        if last == whole:
            yield chain
            return
        for t in successors(last):
            yield from extend(chain + (t,))

    yield from extend((inst.zero_sub(x),))
