"""phi-modules over GF(p)[[X]] with phi(X) = X**q acting trivially on GF(p).

An object is a square matrix ``A`` of polynomials: the structure map sends
``phi^* e_j`` to column ``j`` of ``A``.  The degree is ``-v(det A)``.  Strict
subobjects of a rank-2 module are ``0``, the module, and the saturated
phi-stable lines, found by solving ``A phi(v) = lambda v`` one coefficient
at a time.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any

from hnfilt.engine import HNFiltration, SlopeCategory, hn_filtration
from hnfilt.errors import AxiomViolation, EnumerationBound, InvalidInput, PrecisionExhausted
from hnfilt.fflinalg import check_prime
from hnfilt.instances import series as S
from hnfilt.instances.series import Poly

DEFAULT_PRECISION = 32
MAX_PRECISION = 1024
MAX_BRANCHES = 4096


class SingularMatrix(InvalidInput):
    """The structure matrix has zero determinant, so it is not an isogeny."""


def _det(rows: Sequence[Sequence[Poly]], p: int) -> Poly:
    """Determinant by cofactor expansion along the first row."""
    n = len(rows)
    if n == 0:
        return (1,)
    if n == 1:
        return rows[0][0]
    total: Poly = ()
    for j, entry in enumerate(rows[0]):
        if not entry:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = S.mul(entry, _det(minor, p), p)
        total = S.add(total, term if j % 2 == 0 else S.neg(term, p), p)
    return total


@dataclass(frozen=True)
class PhiModObject:
    p: int
    q: int
    n: int
    phi: tuple[tuple[Poly, ...], ...]

    def __post_init__(self):
        check_prime(self.p)
        if self.q < 2:
            raise InvalidInput(f"q must be at least 2, got {self.q}")
        if self.n < 0 or len(self.phi) != self.n or any(len(r) != self.n for r in self.phi):
            raise InvalidInput(f"phi must be a {self.n}x{self.n} matrix")
        for r in self.phi:
            for e in r:
                if S.poly(e, self.p) != e:
                    raise InvalidInput(f"entry {e} is not a reduced polynomial mod {self.p}")
        if not self.det:
            raise SingularMatrix("det(phi) = 0: the structure map is not an isogeny")

    @classmethod
    def build(cls, p: int, q: int, entries) -> PhiModObject:
        check_prime(p)
        phi = tuple(tuple(S.poly(e, p) for e in row) for row in entries)
        return cls(p, q, len(phi), phi)

    @classmethod
    def zero(cls, p: int, q: int) -> PhiModObject:
        return cls(p, q, 0, ())

    @classmethod
    def rank_one(cls, p: int, q: int, entry: Poly) -> PhiModObject:
        return cls(p, q, 1, ((entry,),))

    @cached_property
    def det(self) -> Poly:
        return _det(self.phi, self.p)

    @property
    def det_valuation(self) -> int:
        return S.series_val(self.det)

    def to_dict(self) -> dict:
        return {
            "instance": "phimod",
            "p": self.p,
            "q": self.q,
            "rank": self.n,
            "phi": [[list(e) for e in row] for row in self.phi],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> PhiModObject:
        try:
            p, q, n, entries = data["p"], data["q"], data["rank"], data["phi"]
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"phimod object is missing a field: {exc}") from exc
        if not isinstance(entries, list) or len(entries) != n:
            raise InvalidInput(f"phi must have {n} rows")
        try:
            return cls.build(p, q, entries)
        except TypeError as exc:
            raise InvalidInput(f"malformed phimod object: {exc}") from exc


def pm_degree(m: PhiModObject) -> int:
    return -m.det_valuation


def pm_saturate_line(v: Sequence[Poly]) -> tuple[Poly, ...]:
    """Divide a nonzero vector by the largest power of X dividing every entry."""
    vals = [S.series_val(e) for e in v if e]
    if not vals:
        raise InvalidInput("cannot saturate the zero vector")
    k = min(vals)
    return tuple(S.shift_down(e, k) if e else () for e in v)


def block_diagonal(a: PhiModObject, b: PhiModObject) -> PhiModObject:
    if (a.p, a.q) != (b.p, b.q):
        raise InvalidInput("block sums need the same p and q")
    rows = [r + ((),) * b.n for r in a.phi] + [((),) * a.n + r for r in b.phi]
    return PhiModObject(a.p, a.q, a.n + b.n, tuple(rows))


@dataclass(frozen=True)
class PhiLine:
    """A saturated phi-stable line with ``A phi(v) = lambda v`` and ``v(lambda) = valuation``.

    ``generator`` is known modulo ``X**certified``; ``exact`` records whether
    the truncated generator already satisfies the equation on the nose.
    """

    generator: tuple[Poly, Poly]
    valuation: int
    certified: int
    exact: bool
    chart: int = field(compare=False)


def _chart_matrix(a: PhiModObject, chart: int) -> tuple[Poly, Poly, Poly, Poly]:
    (a11, a12), (a21, a22) = a.phi
    if chart == 1:
        return a11, a12, a21, a22
    return a22, a21, a12, a11


def _lam_and_residual(coeffs: tuple[Poly, Poly, Poly, Poly], b: Poly, p: int, q: int, limit: int):
    """``lambda = A11 + A12 phi(b)`` and ``E = lambda b - A21 - A22 phi(b)`` mod ``X**limit``."""
    a11, a12, a21, a22 = coeffs
    fb = S.truncate(S.frobenius(b, q), limit)
    lam = S.truncate(S.add(a11, S.mul(a12, fb, p, limit), p), limit)
    resid = S.sub(S.mul(lam, b, p, limit), S.add(a21, S.mul(a22, fb, p, limit), p), p)
    return lam, S.truncate(resid, limit)


def _search_chart(m: PhiModObject, chart: int, precision: int, bound: int) -> list[PhiLine]:
    p, q = m.p, m.q
    coeffs = _chart_matrix(m, chart)
    branches: list[list[int]] = [[]]
    for n in range(precision):
        grown = []
        for prefix in branches:
            choices = (0,) if chart == 2 and n == 0 else range(p)
            for c in choices:
                cand = prefix + [c]
                lam, resid = _lam_and_residual(coeffs, S.poly(cand, p), p, q, n + 1)
                if resid:
                    continue
                if not lam and n + 1 > bound:
                    continue
                grown.append(cand)
        if len(grown) > MAX_BRANCHES:
            raise EnumerationBound(f"line search keeps {len(grown)} branches alive at X^{n + 1}")
        branches = grown

    found: dict[tuple, PhiLine] = {}
    for prefix in branches:
        b = S.poly(prefix, p)
        lam, _ = _lam_and_residual(coeffs, b, p, q, precision)
        if not lam:
            raise PrecisionExhausted(f"eigenvalue valuation undecided at X^{precision}")
        s = S.series_val(lam)
        if (precision - s - 1) * (q - 1) <= s:
            raise PrecisionExhausted(
                f"a line with eigenvalue valuation {s} is not certified at X^{precision}"
            )
        kept = S.truncate(b, precision - s)
        key = (s, kept)
        if key in found:
            continue
        exact = not _exact_residual(coeffs, kept, p, q)
        gen = ((1,), kept) if chart == 1 else (kept, (1,))
        found[key] = PhiLine(gen, s, precision - s, exact, chart)
    return list(found.values())


def _exact_residual(coeffs, b: Poly, p: int, q: int) -> Poly:
    a11, a12, a21, a22 = coeffs
    fb = S.frobenius(b, q)
    lam = S.add(a11, S.mul(a12, fb, p), p)
    return S.sub(S.mul(lam, b, p), S.add(a21, S.mul(a22, fb, p), p), p)


def search_bound(m: PhiModObject) -> int:
    """``v(det) + (largest valuation of a nonzero entry) + 1``."""
    vals = [S.series_val(e) for row in m.phi for e in row if e]
    return m.det_valuation + max(vals, default=0) + 1


def pm_stable_lines(m: PhiModObject, precision: int = DEFAULT_PRECISION, retry: bool = True) -> list[PhiLine]:
    """Saturated phi-stable lines of a rank-2 module, sorted by (valuation, generator).

    A stable line's eigenvalue divides ``det A`` up to a unit, so branches
    whose eigenvalue vanishes past ``min(v(det), search_bound)`` are dropped.
    On PrecisionExhausted the search is retried once at twice the precision.
    """
    if m.n != 2:
        raise InvalidInput(f"line search needs a rank-2 module, got rank {m.n}")
    if not 1 <= precision <= MAX_PRECISION:
        raise InvalidInput(f"precision must lie in [1, {MAX_PRECISION}], got {precision}")
    bound = min(m.det_valuation, search_bound(m))
    try:
        lines = _search_chart(m, 1, precision, bound) + _search_chart(m, 2, precision, bound)
    except PrecisionExhausted:
        if retry and 2 * precision <= MAX_PRECISION:
            return pm_stable_lines(m, 2 * precision, retry=False)
        raise
    return sorted(lines, key=lambda ln: (ln.valuation, ln.generator))


@dataclass(frozen=True)
class PhiSub:
    parent: PhiModObject
    rank: int
    degree: int
    line: PhiLine | None = None


class PhiModCategory(SlopeCategory):
    name = "phimod"

    def __init__(self, precision: int = DEFAULT_PRECISION, degree_overrides=None):
        super().__init__(degree_overrides)
        self.precision = precision

    def rank(self, x: PhiModObject) -> int:
        return x.n

    def base_degree(self, x: PhiModObject) -> int:
        return pm_degree(x)

    def lines(self, x: PhiModObject) -> list[PhiLine]:
        return _lines_cached(x, self.precision)

    @lru_cache(maxsize=1024)
    def strict_subs(self, x: PhiModObject) -> list[PhiSub]:
        if x.n > 2:
            raise InvalidInput(f"subobject search is implemented up to rank 2, got rank {x.n}")
        subs = [self.zero_sub(x)]
        if x.n == 2:
            subs += [PhiSub(x, 1, -ln.valuation, ln) for ln in self.lines(x)]
        if x.n > 0:
            subs.append(self.whole_sub(x))
        return subs

    def zero_sub(self, x):
        return PhiSub(x, 0, 0)

    def whole_sub(self, x):
        return PhiSub(x, x.n, self.degree(x)) if x.n else self.zero_sub(x)

    def contains(self, big, small) -> bool:
        _same_parent(big, small)
        return small.rank == 0 or big.rank == big.parent.n or big == small

    def factors_through(self, small, big) -> bool:
        # Generically a line sits inside another line only when they agree.
        _same_parent(big, small)
        if small.rank == 0 or big.rank == big.parent.n:
            return True
        return small.rank == big.rank and small.line.generator == big.line.generator

    def sub_object(self, s):
        x = s.parent
        if s.rank == 0:
            return PhiModObject.zero(x.p, x.q)
        if s.rank == x.n:
            return x
        lam, _ = _line_data(x, s.line)
        return PhiModObject.rank_one(x.p, x.q, lam)

    def quotient(self, x, s):
        _check_parent(x, s)
        if s.rank == 0:
            return x
        if s.rank == x.n:
            return PhiModObject.zero(x.p, x.q)
        _, beta = _line_data(x, s.line)
        return PhiModObject.rank_one(x.p, x.q, beta)

    def preimage(self, x, s, t):
        _check_parent(x, s)
        if s.rank == 0:
            _check_parent(x, t)
            return t
        if s.rank == x.n:
            return s
        return s if t.rank == 0 else self.whole_sub(x)

    def pushforward(self, x, s, u):
        _check_parent(x, s)
        _check_parent(x, u)
        if not self.contains(u, s):
            raise InvalidInput("pushforward needs u to contain s")
        q = self.quotient(x, s)
        if s.rank == 0:
            return u
        return self.whole_sub(q) if u.rank > s.rank else self.zero_sub(q)

    def intersect(self, s, t):
        _same_parent(s, t)
        if self.contains(s, t):
            return t
        if self.contains(t, s):
            return s
        return self.zero_sub(s.parent)

    def saturated_sum(self, s, t):
        _same_parent(s, t)
        if self.contains(s, t):
            return s
        if self.contains(t, s):
            return t
        return self.whole_sub(s.parent)

    def direct_sum(self, x, y):
        total = block_diagonal(x, y)
        if total.n != 2:
            raise InvalidInput("summand handles are only available when the sum has rank 2")
        handles = []
        for gen in (((1,), ()), ((), (1,))):
            match = [s for s in self.strict_subs(total) if s.line and s.line.generator == gen]
            if len(match) != 1:
                raise AxiomViolation(f"coordinate line {gen} is not among the stable lines")
            handles.append(match[0])
        return total, handles[0], handles[1]

    def saturation_witnesses(self, x):
        """Submodules ``R X^k v`` of a rank-1 strict ``R v``: degree drops by ``(q-1) k``."""
        if x.n == 1:
            rank_one = [("whole", self.degree(x))]
        else:
            rank_one = [(str(s.line.generator), s.degree) for s in self.strict_subs(x) if s.rank == 1]
        for label, d in rank_one:
            for k in range(3):
                yield f"X^{k} * {label}", d - (x.q - 1) * k, d, k == 0

    def describe_sub(self, s):
        if s.line is None:
            return {"rank": s.rank}
        return {
            "generator": [list(e) for e in s.line.generator],
            "lambda_valuation": s.line.valuation,
            "certified_mod_X": s.line.certified,
            "exact": s.line.exact,
        }


@lru_cache(maxsize=1024)
def _lines_cached(x: PhiModObject, precision: int) -> list[PhiLine]:
    return pm_stable_lines(x, precision)


def _line_data(x: PhiModObject, line: PhiLine) -> tuple[Poly, Poly]:
    """Eigenvalue of the line and the quotient's structure entry, each to its valuation."""
    coeffs = _chart_matrix(x, line.chart)
    b = line.generator[1] if line.chart == 1 else line.generator[0]
    lam, _ = _lam_and_residual(coeffs, b, x.p, x.q, line.certified)
    _, a12, _, a22 = coeffs
    beta = S.truncate(S.sub(a22, S.mul(a12, b, x.p), x.p), line.certified)
    expected = x.det_valuation - line.valuation
    if not lam or S.series_val(lam) != line.valuation:
        raise AxiomViolation("eigenvalue valuation changed after truncation")
    if not beta or S.series_val(beta) != expected:
        raise PrecisionExhausted(
            f"quotient entry valuation undecided: need v = {expected} modulo X^{line.certified}"
        )
    return S.truncate(lam, line.valuation + 1), S.truncate(beta, expected + 1)


def pm_hn_rank2(m: PhiModObject, precision: int = DEFAULT_PRECISION) -> HNFiltration:
    """HN filtration of a rank-2 module: semistable, or ``0 < L < M`` for the best line."""
    if m.n != 2:
        raise InvalidInput(f"pm_hn_rank2 needs rank 2, got rank {m.n}")
    return hn_filtration(PhiModCategory(precision), m)


def rank_one_sub_degree(m: PhiModObject, r: Poly) -> int:
    """Degree of the submodule generated by ``r v`` in the rank-1 module ``R v``."""
    if m.n != 1:
        raise InvalidInput("needs a rank-1 module")
    # phi(r v) = phi(r) a v = (phi(r) a / r) (r v)
    return pm_degree(m) - (m.q - 1) * S.series_val(r)


def _check_parent(x, s) -> None:
    if s.parent != x:
        raise InvalidInput("subobject handle belongs to a different object")


def _same_parent(s, t) -> None:
    if s.parent != t.parent:
        raise InvalidInput("subobject handles belong to different objects")


def phimod_example(name: str, p: int = 2, q: int = 2) -> PhiModObject:
    """Named rank-2 fixtures used in tests and docs."""
    table: dict[str, Any] = {
        "identity": [[[1], []], [[], [1]]],
        "diag_1_X": [[[1], []], [[], [0, 1]]],
        "upper_1_1_X": [[[1], [1]], [[], [0, 1]]],
    }
    if name not in table:
        raise InvalidInput(f"unknown example {name!r}")
    return PhiModObject.build(p, q, table[name])
