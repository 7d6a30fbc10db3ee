from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hnfilt.corpus import random_phimods
from hnfilt.engine import hn_filtration, hn_polygon, is_semistable, oracle_polygon, slope, verify_hn
from hnfilt.errors import InvalidInput, PrecisionExhausted
from hnfilt.instances import series as S
from hnfilt.instances.phimod import (
    PhiModCategory,
    PhiModObject,
    SingularMatrix,
    block_diagonal,
    phimod_example,
    pm_degree,
    pm_hn_rank2,
    pm_saturate_line,
    pm_stable_lines,
    rank_one_sub_degree,
)
from hnfilt.polygon import PolygonFn, polygon_join

PM = PhiModCategory()
RANDOM = random_phimods(40, seed=11)

nonzero_polys = st.lists(st.integers(0, 1), min_size=1, max_size=8).filter(any)


def diag(a, b, p=2, q=2):
    return PhiModObject.build(p, q, [[a, []], [[], b]])


def rank_one_polygon(degree):
    return PolygonFn(((0, 0), (1, degree)))


def cross_residual(m, gen):
    """``w0 v1 - w1 v0`` for ``w = A phi(v)``: zero exactly when ``A phi(v)`` is a multiple of ``v``."""
    p, q = m.p, m.q
    fv = [oracles.substitute_power(list(c) or [0], q) for c in gen]
    w = []
    for row in m.phi:
        acc = [0]
        for a, f in zip(row, fv):
            acc = oracles.polysub(acc, oracles.polysub([0], oracles.polymul(list(a) or [0], f, p), p), p)
        w.append(acc)
    v0, v1 = (list(c) or [0] for c in gen)
    return oracles.polysub(oracles.polymul(w[0], v1, p), oracles.polymul(w[1], v0, p), p)


def brute_exact_lines(m, max_len=4):
    """Generators (1, b) and (a, 1) with a(0) = 0 and short polynomial entries solving the equation exactly."""
    p = m.p
    found = set()
    for n in range(max_len + 1):
        for coeffs in itertools.product(range(p), repeat=n):
            b = S.poly(coeffs, p)
            if oracles.is_zero(cross_residual(m, ((1,), b))):
                found.add(((1,), b))
            if (not b or b[0] == 0) and oracles.is_zero(cross_residual(m, (b, (1,)))):
                found.add((b, (1,)))
    return found


class TestSeries:
    @pytest.mark.parametrize("coeffs,val", [((0, 0, 0, 1, 0, 1), 3), ((1, 1), 0), ((0, 2), 1)])
    def test_valuation(self, coeffs, val):
        assert S.series_val(S.poly(coeffs, 3)) == val

    def test_zero_has_no_valuation(self):
        with pytest.raises(InvalidInput):
            S.series_val(())

    @given(nonzero_polys, st.integers(2, 5))
    def test_valuation_scales_under_phi(self, coeffs, q):
        a = S.poly(coeffs, 2)
        assert S.series_val(S.frobenius(a, q)) == q * S.series_val(a)

    @pytest.mark.parametrize("p,q", [(2, 2), (3, 3), (5, 2)])
    def test_valuation_scales_seeded(self, p, q):
        rng = random.Random(p * 100 + q)
        for _ in range(200):
            coeffs = [rng.randrange(p) for _ in range(rng.randint(1, 10))]
            if not any(coeffs):
                coeffs[-1] = 1
            ours = S.series_val(S.frobenius(S.poly(coeffs, p), q))
            assert ours == q * oracles.valuation(coeffs)
            assert ours == oracles.valuation(oracles.substitute_power(coeffs, q))

    @given(nonzero_polys, nonzero_polys)
    def test_multiplication_matches_oracle(self, a, b):
        assert S.mul(S.poly(a, 2), S.poly(b, 2), 2) == S.poly(oracles.polymul(a, b, 2), 2)

    def test_truncated_product(self):
        assert S.mul((1, 1), (1, 1), 3, limit=2) == (1, 2)


class TestDegree:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_identity(self, n):
        rows = [[[1] if i == j else [] for j in range(n)] for i in range(n)]
        assert pm_degree(PhiModObject.build(2, 2, rows)) == 0

    def test_diag_1_x(self):
        assert pm_degree(phimod_example("diag_1_X")) == -1

    @pytest.mark.parametrize("a,b", [(0, 0), (1, 2), (3, 0), (2, 5)])
    def test_diag_monomials(self, a, b):
        assert pm_degree(diag(S.monomial(a), S.monomial(b), p=3, q=3)) == -(a + b)

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            PhiModObject.build(2, 2, [[[1], [1]], [[1], [1]]])

    def test_q_must_be_at_least_two(self):
        with pytest.raises(InvalidInput):
            PhiModObject.build(2, 1, [[[1]]])

    @given(st.lists(nonzero_polys, min_size=4, max_size=4), st.lists(nonzero_polys, min_size=1, max_size=1))
    def test_block_diagonal_is_additive(self, two_by_two, one_by_one):
        try:
            a = PhiModObject.build(2, 2, [two_by_two[:2], two_by_two[2:]])
        except SingularMatrix:
            return
        b = PhiModObject.build(2, 2, [one_by_one])
        assert pm_degree(block_diagonal(a, b)) == pm_degree(a) + pm_degree(b)
        assert pm_degree(block_diagonal(b, a)) == pm_degree(a) + pm_degree(b)

    def test_det_against_oracle_product(self):
        for m in RANDOM:
            (a, b), (c, d) = ([list(e) or [0] for e in row] for row in m.phi)
            ref = oracles.polysub(oracles.polymul(a, d, 2), oracles.polymul(b, c, 2), 2)
            assert pm_degree(m) == -oracles.valuation(ref)


class TestSaturate:
    def test_divides_by_x(self):
        assert pm_saturate_line(((0, 1), (0, 0, 1))) == ((1,), (0, 1))

    def test_already_saturated(self):
        assert pm_saturate_line(((1,), (0, 1))) == ((1,), (0, 1))

    def test_single_entry(self):
        assert pm_saturate_line(((0, 0, 0, 1), ())) == ((1,), ())

    def test_zero_vector(self):
        with pytest.raises(InvalidInput):
            pm_saturate_line(((), ()))

    @given(nonzero_polys, st.lists(st.integers(0, 1), max_size=6), st.integers(0, 4))
    def test_result_has_a_unit_entry(self, a, b, k):
        v = (S.poly([0] * k + a, 2), S.poly([0] * k + b, 2))
        sat = pm_saturate_line(v)
        assert min(S.series_val(e) for e in sat if e) == 0
        assert all(S.mul(s, S.monomial(k), 2) == e for s, e in zip(sat, v) if oracles.valuation(a) == 0)


class TestStableLines:
    def test_diag_1_x(self):
        lines = pm_stable_lines(phimod_example("diag_1_X"))
        gens = {ln.generator: ln.valuation for ln in lines}
        assert gens[((1,), ())] == 0
        assert gens[((), (1,))] == 1
        # a(X^2) = X a(X) also has the solution a = X.
        assert gens == {((1,), ()): 0, ((), (1,)): 1, ((0, 1), (1,)): 1}
        assert all(ln.exact for ln in lines)

    def test_upper_triangular(self):
        lines = pm_stable_lines(phimod_example("upper_1_1_X"))
        assert lines[0].generator == ((1,), ()) and lines[0].valuation == 0
        assert all(ln.valuation >= 1 for ln in lines[1:])

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_identity_has_every_rational_direction(self, p):
        lines = pm_stable_lines(PhiModObject.build(p, p, [[[1], []], [[], [1]]]))
        assert len(lines) == p + 1
        assert all(ln.valuation == 0 and ln.exact for ln in lines)

    def test_sorted(self):
        for m in RANDOM:
            lines = pm_stable_lines(m)
            keys = [(ln.valuation, ln.generator) for ln in lines]
            assert keys == sorted(keys)

    @pytest.mark.parametrize("m", RANDOM, ids=lambda m: str(m.phi))
    def test_residual_vanishes_to_certified_precision(self, m):
        for ln in pm_stable_lines(m):
            resid = cross_residual(m, ln.generator)
            assert not any(resid[: ln.certified])
            assert oracles.is_zero(resid) == ln.exact

    @pytest.mark.parametrize("m", RANDOM, ids=lambda m: str(m.phi))
    def test_every_short_exact_line_is_found(self, m):
        found = {ln.generator for ln in pm_stable_lines(m)}
        assert brute_exact_lines(m) <= found

    def test_rank_must_be_two(self):
        with pytest.raises(InvalidInput):
            pm_stable_lines(PhiModObject.build(2, 2, [[[1]]]))

    def test_precision_exhausted(self):
        with pytest.raises(PrecisionExhausted):
            pm_stable_lines(phimod_example("diag_1_X"), precision=1)

    def test_precision_retry_doubles(self):
        lines = pm_stable_lines(phimod_example("diag_1_X"), precision=3)
        assert {ln.generator for ln in lines} >= {((1,), ()), ((), (1,))}

    def test_precision_range(self):
        with pytest.raises(InvalidInput):
            pm_stable_lines(phimod_example("identity"), precision=0)


class TestHN:
    def test_diag_1_x(self):
        m = phimod_example("diag_1_X")
        f = pm_hn_rank2(m)
        assert f.graded_slopes == (0, -1)
        assert f.steps[1].line.generator == ((1,), ())
        poly = hn_polygon(f)
        assert poly.vertices == ((0, 0), (1, 0), (2, -1))
        assert poly == polygon_join(rank_one_polygon(0), rank_one_polygon(-1))

    def test_upper_triangular(self):
        f = pm_hn_rank2(phimod_example("upper_1_1_X"))
        assert f.graded_slopes == (0, -1)
        assert f.steps[1].line.generator == ((1,), ())
        assert hn_polygon(f) == polygon_join(rank_one_polygon(0), rank_one_polygon(-1))

    def test_identity_is_semistable(self):
        m = phimod_example("identity")
        assert is_semistable(PM, m)
        assert pm_hn_rank2(m).graded_slopes == (0,)

    @pytest.mark.parametrize("a,b", [(0, 1), (0, 3), (2, 1), (1, 1)])
    def test_diagonal_is_join_of_pieces(self, a, b):
        m = diag(S.monomial(a), S.monomial(b))
        high, low = sorted((-a, -b), reverse=True)
        assert hn_polygon(pm_hn_rank2(m)) == polygon_join(rank_one_polygon(high), rank_one_polygon(low))

    def test_rank_must_be_two(self):
        with pytest.raises(InvalidInput):
            pm_hn_rank2(PhiModObject.build(2, 2, [[[1]]]))

    def test_rank_three_subobjects_unsupported(self):
        m = PhiModObject.build(2, 2, [[[1], [], []], [[], [1], []], [[], [], [1]]])
        with pytest.raises(InvalidInput):
            PM.strict_subs(m)

    @pytest.mark.parametrize("m", RANDOM, ids=lambda m: str(m.phi))
    def test_verified_and_strictly_decreasing(self, m):
        f = pm_hn_rank2(m)
        assert verify_hn(PM, m, f)
        assert all(a > b for a, b in zip(f.graded_slopes, f.graded_slopes[1:]))
        assert hn_polygon(f) == oracle_polygon(PM, m)
        assert hn_polygon(f).vertices[-1] == (2, pm_degree(m))

    @pytest.mark.parametrize("m", RANDOM, ids=lambda m: str(m.phi))
    def test_sub_and_quotient_degrees_add_up(self, m):
        for s in PM.strict_subs(m):
            sub, quo = PM.sub_object(s), PM.quotient(m, s)
            assert s.rank + quo.n == 2
            assert PM.degree(sub) == s.degree
            assert PM.degree(sub) + PM.degree(quo) == pm_degree(m)


class TestRankOneWitness:
    @given(nonzero_polys, st.integers(2, 4))
    @settings(max_examples=80)
    def test_sub_degree_drop(self, r_coeffs, q):
        m = PhiModObject.rank_one(2, q, (1, 1))
        r = S.poly(r_coeffs, 2)
        d = rank_one_sub_degree(m, r)
        assert d <= pm_degree(m)
        assert (d == pm_degree(m)) == (S.series_val(r) == 0)

    @pytest.mark.parametrize("seed", range(10))
    def test_structure_entry_of_sub(self, seed):
        # phi(r v) = phi(r) a v = c (r v) with c = phi(r) a / r; check v(c) on the nose.
        rng = random.Random(seed)
        q = rng.randint(2, 3)
        a = [rng.randrange(2) for _ in range(3)] + [1]
        r = [0] * rng.randint(0, 3) + [1] + [rng.randrange(2) for _ in range(2)]
        m = PhiModObject.rank_one(2, q, S.poly(a, 2))
        numerator = oracles.polymul(oracles.substitute_power(r, q), a, 2)
        c_val = oracles.valuation(numerator) - oracles.valuation(r)
        assert rank_one_sub_degree(m, S.poly(r, 2)) == -c_val

    def test_needs_rank_one(self):
        with pytest.raises(InvalidInput):
            rank_one_sub_degree(phimod_example("identity"), (1,))

    def test_saturation_witnesses(self):
        for _, small, strict, same in PM.saturation_witnesses(phimod_example("diag_1_X")):
            assert small <= strict and (small == strict) == same


class TestCategory:
    def test_direct_sum_handles(self):
        a, b = PhiModObject.rank_one(2, 2, (1,)), PhiModObject.rank_one(2, 2, (0, 1))
        total, first, second = PM.direct_sum(a, b)
        assert total == phimod_example("diag_1_X")
        assert (first.degree, second.degree) == (0, -1)
        assert PM.intersect(first, second) == PM.zero_sub(total)
        assert PM.saturated_sum(first, second) == PM.whole_sub(total)

    def test_hom_is_unsupported(self):
        m = phimod_example("identity")
        with pytest.raises(InvalidInput):
            PM.hom_basis(m, m)

    def test_slopes_are_exact(self):
        assert slope(PM, diag((1,), (0, 0, 1))) == Fraction(-1)
        assert slope(PM, phimod_example("diag_1_X")) == Fraction(-1, 2)

    def test_json_round_trip(self):
        for m in RANDOM[:10]:
            assert PhiModObject.from_dict(m.to_dict()) == m

    def test_json_wrong_row_count(self):
        data = phimod_example("identity").to_dict()
        data["phi"] = data["phi"][:1]
        with pytest.raises(InvalidInput):
            PhiModObject.from_dict(data)

    def test_hn_agrees_with_engine(self):
        for m in RANDOM[:10]:
            assert pm_hn_rank2(m) == hn_filtration(PM, m)
