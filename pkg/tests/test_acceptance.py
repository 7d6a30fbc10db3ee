"""Acceptance criteria 1-10, each timed against its budget.

Every test prints one ``criterion N: PASS|FAIL`` line (also echoed in the
pytest terminal summary) and fails if the check or the time budget fails.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from fractions import Fraction


from conftest import ACCEPTANCE_LINES, FIXTURES
from hnfilt.axioms import check_instance_axioms
from hnfilt.cli import main
from hnfilt.corpus import (
    broken_degree_category,
    filtvec_exhaustive,
    quiver_pairs,
    quiver_small,
    random_phimods,
    random_quivers,
)
from hnfilt.engine import (
    HNFiltration,
    hn_filtration,
    hn_polygon,
    hom_vanishes_predicted,
    is_semistable,
    oracle_polygon,
    scss,
    slope,
    slope_sandwich,
    strict_chains,
    sub_slope,
    verify_hn,
    weighted_slope_identity,
)
from hnfilt.instances import series as S
from hnfilt.instances.filtvec import FiltVecCategory
from hnfilt.instances.phimod import PhiModCategory, phimod_example, pm_hn_rank2
from hnfilt.instances.quiver import QuiverCategory
from hnfilt.polygon import PolygonFn, filtration_polygon, polygon_join, polygon_leq

FV, QV, PM = FiltVecCategory(), QuiverCategory(), PhiModCategory()


def corpus():
    """(category, object) for the filtvec corpus, 500 seeded quivers and 20 phi-modules."""
    out = [(FV, x) for x in filtvec_exhaustive(2, 3)]
    out += [(QV, x) for x in random_quivers(500, seed=0)]
    out += [(PM, x) for x in random_phimods(20, seed=0)]
    return out


def run_criterion(number, title, budget, check):
    """Run ``check`` (which returns a short detail string) and record a PASS/FAIL line."""
    start = time.perf_counter()
    error = None
    try:
        detail = check()
    except AssertionError as exc:
        detail, error = f"assertion failed: {exc}", exc
    elapsed = time.perf_counter() - start
    ok = error is None and elapsed < budget
    if error is None and not ok:
        detail += "; over budget"
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {title} ({elapsed:.1f}s of {budget}s) {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    if error is not None:
        raise error
    assert ok, line


# -- 1 ---------------------------------------------------------------------------


def test_criterion_01_oracle_equivalence():
    def check():
        fv = filtvec_exhaustive(2, 3)
        qv = random_quivers(500, seed=0)
        assert len(fv) == 81
        for inst, objs in ((FV, fv), (QV, qv)):
            for x in objs:
                engine, oracle = hn_polygon(hn_filtration(inst, x)), oracle_polygon(inst, x)
                assert engine == oracle, (inst.name, x, engine, oracle)
        return f"{len(fv)} filtvec + {len(qv)} quiver objects"

    run_criterion(1, "oracle equivalence", 60, check)


# -- 2 ---------------------------------------------------------------------------


def perturbations(inst, x, filt):
    """Filtrations that differ from ``filt``: swapped, replaced, reordered and inserted steps."""
    steps, slopes, ranks = filt.steps, filt.graded_slopes, filt.graded_ranks
    out = []
    for i in range(1, len(steps) - 2):
        swapped = steps[: i] + (steps[i + 1], steps[i]) + steps[i + 2 :]
        out.append(HNFiltration(swapped, slopes, ranks))
    subs = inst.strict_subs(x)
    for i in range(1, len(steps) - 1):
        for t in subs:
            if t != steps[i]:
                out.append(HNFiltration(steps[:i] + (t,) + steps[i + 1 :], slopes, ranks))
    if len(slopes) > 1:
        out.append(HNFiltration(steps, tuple(reversed(slopes)), ranks))
        out.append(HNFiltration(steps, (slopes[-1],) + slopes[1:-1] + (slopes[0],), ranks))
    for i in range(len(steps) - 1):
        lo, hi = steps[i], steps[i + 1]
        for t in subs:
            if t.rank > lo.rank and t.rank < hi.rank and inst.contains(t, lo) and inst.contains(hi, t):
                chain = steps[: i + 1] + (t,) + steps[i + 1 :]
                pieces = [inst.subquotient(x, a, b) for a, b in zip(chain, chain[1:])]
                out.append(
                    HNFiltration(chain, tuple(slope(inst, g) for g in pieces), tuple(inst.rank(g) for g in pieces))
                )
                break
    return out


def test_criterion_02_uniqueness():
    def check():
        tried = 0
        for inst, x in corpus():
            filt = hn_filtration(inst, x)
            assert verify_hn(inst, x, filt)
            for cand in perturbations(inst, x, filt):
                tried += 1
                assert not verify_hn(inst, x, cand), (x, cand)
        for x in filtvec_exhaustive(2, 2):
            hn = hn_filtration(FV, x)
            for chain in strict_chains(FV, x):
                pieces = [FV.subquotient(x, lo, hi) for lo, hi in zip(chain, chain[1:])]
                cand = HNFiltration(chain, tuple(slope(FV, g) for g in pieces), tuple(FV.rank(g) for g in pieces))
                assert verify_hn(FV, x, cand) == (cand == hn)
        return f"{tried} perturbed filtrations rejected"

    run_criterion(2, "uniqueness", 30, check)


# -- 3 ---------------------------------------------------------------------------


def test_criterion_03_first_step():
    def check():
        count = 0
        for inst, x in corpus():
            if is_semistable(inst, x):
                continue
            count += 1
            assert hn_filtration(inst, x).steps[1] == scss(inst, x)
        assert count > 0
        return f"{count} non-semistable objects"

    run_criterion(3, "first step is the scss", 10, check)


# -- 4 ---------------------------------------------------------------------------


def nested_between_steps(inst, filt, s):
    return any(
        inst.contains(s, lo) and inst.contains(hi, s) for lo, hi in zip(filt.steps, filt.steps[1:])
    )


def test_criterion_04_polygon_dominance():
    def check():
        counts = dict.fromkeys(("endpoint", "nesting", "subobject", "filtration", "extension"), 0)
        for inst, x in corpus():
            filt = hn_filtration(inst, x)
            poly = hn_polygon(filt)
            for s in inst.strict_subs(x):
                if s.rank == 0:
                    continue
                assert s.degree <= poly(s.rank)
                counts["endpoint"] += 1
                if s.degree == poly(s.rank):
                    assert nested_between_steps(inst, filt, s), (x, s)
                    counts["nesting"] += 1
                sub_poly = hn_polygon(hn_filtration(inst, inst.sub_object(s)))
                assert polygon_leq(sub_poly, poly.restrict(s.rank))
                counts["subobject"] += 1
                if s.rank < inst.rank(x):
                    total, _, _ = inst.direct_sum(inst.sub_object(s), inst.quotient(x, s))
                    assert polygon_leq(poly, hn_polygon(hn_filtration(inst, total)))
                    counts["extension"] += 1
        for x in filtvec_exhaustive(2, 3):
            poly = hn_polygon(hn_filtration(FV, x))
            for chain in strict_chains(FV, x):
                pieces = [FV.subquotient(x, lo, hi) for lo, hi in zip(chain, chain[1:])]
                if not all(is_semistable(FV, g) for g in pieces):
                    continue
                fpoly = filtration_polygon([(slope(FV, g), FV.rank(g)) for g in pieces])
                assert polygon_leq(poly, fpoly)
                assert fpoly.vertices[-1] == poly.vertices[-1]
                counts["filtration"] += 1
        return ", ".join(f"{k}: {v}" for k, v in counts.items())

    run_criterion(4, "polygon dominance", 120, check)


# -- 5 ---------------------------------------------------------------------------


def semistable_pairs():
    """(category, X, Y) with X, Y semistable of equal slope and a defined Hom."""
    out = []
    for p, max_dim in ((2, 3), (3, 2)):
        fv = [x for x in filtvec_exhaustive(p, max_dim) if is_semistable(FV, x)]
        out += [(FV, x, y) for x, y in itertools.product(fv, repeat=2) if slope(FV, x) == slope(FV, y)]
    qv = [x for x in quiver_small(2, 2) + random_quivers(500, seed=0) if is_semistable(QV, x)]
    by_key = {}
    for x in qv:
        by_key.setdefault((x.shape, x.theta, slope(QV, x)), []).append(x)
    for group in by_key.values():
        out += [(QV, x, y) for x, y in itertools.product(group, repeat=2)]
    return out


def morphisms(inst, x, y):
    basis = inst.hom_basis(x, y)
    if x.p ** len(basis) <= 64:
        return [inst.linear_combination(c, basis, x, y) for c in itertools.product(range(x.p), repeat=len(basis))]
    return basis


def test_criterion_05_abelian_semistable():
    def check():
        pairs, maps = semistable_pairs(), 0
        for inst, x, y in pairs:
            mu = slope(inst, x)
            for f in morphisms(inst, x, y):
                maps += 1
                for s in (inst.kernel(f), inst.image_saturated(f)):
                    if s.rank:
                        piece = inst.sub_object(s)
                        assert slope(inst, piece) == mu and is_semistable(inst, piece), (x, y, f)
        return f"{len(pairs)} pairs, {maps} morphisms"

    run_criterion(5, "kernels and images of semistable maps", 60, check)


# -- 6 ---------------------------------------------------------------------------


def test_criterion_06_hom_vanishing():
    def check():
        fv = filtvec_exhaustive(2, 2)
        pairs = [(FV, x, y) for x, y in itertools.product(fv, repeat=2)]
        pairs += [(QV, x, y) for x, y in quiver_pairs(quiver_small(2, 2))]
        predicted = 0
        for inst, x, y in pairs:
            basis = inst.hom_basis(x, y)
            fx, fy = hn_filtration(inst, x), hn_filtration(inst, y)
            if hom_vanishes_predicted(fx, fy):
                predicted += 1
                assert basis == [], (x, y)
            if basis and fx.length == 1 and fy.length == 1:
                assert slope(inst, x) <= slope(inst, y), (x, y)
        return f"{len(pairs)} pairs, {predicted} predicted to vanish"

    run_criterion(6, "hom vanishing", 60, check)


# -- 7 ---------------------------------------------------------------------------


def test_criterion_07_axiom_checker():
    def check():
        fv = filtvec_exhaustive(2, 3)
        qv = quiver_small(2, 3) + random_quivers(200, seed=0)
        for inst, objs in ((FV, fv), (QV, qv)):
            report = check_instance_axioms(inst, objs)
            assert report.passed, [(c.name, c.witness) for c in report.checks if not c.passed]
        broken = check_instance_axioms(broken_degree_category(fv), fv)
        additivity = broken.check("additivity")
        assert not additivity.passed and additivity.witness is not None
        return f"{len(fv)} filtvec + {len(qv)} quiver objects pass; broken-degree witness {additivity.witness}"

    run_criterion(7, "axiom checker", 30, check)


# -- 8 ---------------------------------------------------------------------------


def rank_one_polygon(degree):
    return PolygonFn(((0, 0), (1, degree)))


def test_criterion_08_phimod():
    def check():
        rng = random.Random(0)
        for _ in range(200):
            p, q = rng.choice([2, 3, 5]), rng.randint(2, 4)
            coeffs = [rng.randrange(p) for _ in range(rng.randint(1, 12))]
            coeffs[rng.randrange(len(coeffs))] = 1
            a = S.poly(coeffs, p)
            assert S.series_val(S.frobenius(a, q)) == q * S.series_val(a)
        join = polygon_join(rank_one_polygon(0), rank_one_polygon(-1))
        for name in ("diag_1_X", "upper_1_1_X"):
            f = pm_hn_rank2(phimod_example(name))
            assert f.graded_slopes == (Fraction(0), Fraction(-1)), name
            assert hn_polygon(f) == join, name
        ident = phimod_example("identity")
        f = pm_hn_rank2(ident)
        assert is_semistable(PM, ident) and f.graded_slopes == (0,)
        return "200 valuation samples; diag, upper-triangular and identity fixtures"

    run_criterion(8, "phi-module instance", 10, check)


# -- 9 ---------------------------------------------------------------------------


def test_criterion_09_averages():
    def check():
        chains = subs = 0
        for inst, x in corpus():
            for chain in strict_chains(inst, x):
                chains += 1
                assert weighted_slope_identity(inst, x, chain), (x, chain)
            mu = slope(inst, x)
            for s in inst.strict_subs(x):
                if 0 < s.rank < inst.rank(x):
                    subs += 1
                    assert slope_sandwich(sub_slope(s), mu, slope(inst, inst.quotient(x, s))), (x, s)
        return f"{chains} chains, {subs} subobjects"

    run_criterion(9, "weighted average and slope sandwich", 30, check)


# -- 10 --------------------------------------------------------------------------


def cli(capsys, *argv):
    code = main(list(argv))
    out, _ = capsys.readouterr()
    return code, out


def test_criterion_10_cli(capsys):
    def check():
        fv, qv, pm = (str(FIXTURES / d) for d in ("filtvec", "quiver", "phimod"))
        runs = [
            ("compute", "filtvec", fv), ("compute", "quiver", qv), ("compute", "phimod", pm),
            ("oracle", "filtvec", fv), ("polygon", "quiver", qv), ("axioms", "quiver", None),
        ]
        for command, instance, path in runs:
            for fmt in ("json", "tsv"):
                argv = [command, "--instance", instance, "--format", fmt, "--seed", "5"]
                argv += ["--input", path] if path else ["--samples", "12"]
                first, second = cli(capsys, *argv), cli(capsys, *argv)
                assert first == second and first[0] == 0, argv
        a2 = str(FIXTURES / "quiver" / "a2_pos.json")
        hom = ["hom", "--instance", "quiver", "--input", a2, "--input", a2]
        assert cli(capsys, *hom) == cli(capsys, *hom)

        neg = FIXTURES / "negative"
        codes = {
            1: cli(capsys, "axioms", "--instance", "broken-degree")[0],
            2: cli(capsys, "compute", "--instance", "filtvec", "--input", str(neg / "nonnested.json"))[0],
            3: cli(capsys, "compute", "--instance", "filtvec", "--input", str(neg / "dim6.json"))[0],
            4: cli(capsys, "compute", "--instance", "filtvec", "--input", str(neg / "declared_degree.json"))[0],
        }
        codes_extra = {
            2: cli(capsys, "compute", "--instance", "filtvec", "--input", str(neg / "zero_object.json"))[0],
            3: cli(capsys, "compute", "--instance", "phimod", "--input", str(neg / "phimod_low_precision.json"))[0],
        }
        assert all(k == v for k, v in codes.items()), codes
        assert all(k == v for k, v in codes_extra.items()), codes_extra
        assert json.loads(cli(capsys, "compute", "--instance", "filtvec", "--input", fv)[1])["schema"]
        return "byte-identical reruns; exit codes 1, 2, 3, 4 reached"

    run_criterion(10, "cli determinism and exit codes", 10, check)

