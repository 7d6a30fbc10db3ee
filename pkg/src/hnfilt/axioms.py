"""Executable checks that an instance satisfies the slope-category axioms."""

from __future__ import annotations

import itertools
import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

from hnfilt.engine import SlopeCategory
from hnfilt.errors import HNError

AXIOMS = ("additivity", "poset", "saturation", "lattice")


@dataclass
class AxiomCheck:
    name: str
    passed: bool = True
    checked: int = 0
    witness: dict[str, Any] | None = None

    def record(self, ok: bool, witness_fn) -> None:
        self.checked += 1
        if not ok and self.passed:
            self.passed = False
            self.witness = witness_fn()


@dataclass
class AxiomReport:
    instance: str
    objects: int
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> AxiomCheck:
        return next(c for c in self.checks if c.name == name)


def _pairs(items: Sequence, limit: int, rng: random.Random) -> list[tuple]:
    n = len(items)
    if n * n <= limit:
        return list(itertools.product(items, repeat=2))
    return [(rng.choice(items), rng.choice(items)) for _ in range(limit)]


def check_instance_axioms(
    inst: SlopeCategory,
    sample: Sequence,
    seed: int = 0,
    pair_limit: int = 400,
) -> AxiomReport:
    """Run every axiom check over ``sample``; failures carry the first witness.

    Pairs of subobjects are taken exhaustively when there are at most
    ``pair_limit`` of them and drawn from ``random.Random(seed)`` otherwise.
    """
    rng = random.Random(seed)
    checks = {name: AxiomCheck(name) for name in AXIOMS}
    report = AxiomReport(inst.name, len(sample), list(checks.values()))
    for idx, x in enumerate(sample):
        try:
            subs = inst.strict_subs(x)
        except HNError as exc:
            checks["additivity"].record(False, lambda idx=idx, msg=str(exc): {"object": idx, "error": msg})
            continue
        _check_additivity(inst, x, idx, subs, checks["additivity"])
        pairs = _pairs(subs, pair_limit, rng)
        _check_poset(inst, idx, pairs, checks["poset"])
        _check_saturation(inst, x, idx, checks["saturation"])
        _check_lattice(inst, x, idx, subs, pairs, rng, checks["lattice"])
    return report


def _check_additivity(inst, x, idx, subs, check: AxiomCheck) -> None:
    rk, deg = inst.rank(x), inst.degree(x)
    for s in subs:
        sub, quot = inst.sub_object(s), inst.quotient(x, s)
        rs, ds = inst.rank(sub), inst.degree(sub)
        rq, dq = inst.rank(quot), inst.degree(quot)

        def witness(s=s, rs=rs, ds=ds, rq=rq, dq=dq):
            return {
                "object": idx,
                "sub": inst.describe_sub(s),
                "sub_rank_degree": [rs, ds],
                "object_rank_degree": [rk, deg],
                "quotient_rank_degree": [rq, dq],
                "handle_rank_degree": [s.rank, s.degree],
            }

        ok = (
            rs + rq == rk
            and ds + dq == deg
            and (s.rank, s.degree) == (rs, ds)
            and (rs == 0) == (s == inst.zero_sub(x))
        )
        check.record(ok, witness)


def _check_poset(inst, idx, pairs, check: AxiomCheck) -> None:
    for s, t in pairs:
        check.record(
            inst.contains(s, t) == inst.factors_through(t, s),
            lambda s=s, t=t: {"object": idx, "big": inst.describe_sub(s), "small": inst.describe_sub(t)},
        )


def _check_saturation(inst, x, idx, check: AxiomCheck) -> None:
    for label, small, strict, same in inst.saturation_witnesses(x):
        ok = small <= strict and (small == strict) == same
        check.record(
            ok,
            lambda label=label, small=small, strict=strict: {
                "object": idx,
                "subobject": label,
                "degree": small,
                "saturation_degree": strict,
            },
        )


def _check_lattice(inst, x, idx, subs, pairs, rng, check: AxiomCheck) -> None:
    strict = set(subs)
    for s, t in pairs:
        meet, join = inst.intersect(s, t), inst.saturated_sum(s, t)
        u = rng.choice(subs)
        ok = (
            meet in strict
            and join in strict
            and inst.contains(s, meet)
            and inst.contains(t, meet)
            and inst.contains(join, s)
            and inst.contains(join, t)
            and (not (inst.contains(s, u) and inst.contains(t, u)) or inst.contains(meet, u))
            and (not (inst.contains(u, s) and inst.contains(u, t)) or inst.contains(u, join))
        )
        check.record(
            ok,
            lambda s=s, t=t, u=u: {
                "object": idx,
                "pair": [inst.describe_sub(s), inst.describe_sub(t)],
                "probe": inst.describe_sub(u),
            },
        )
    for s, u in pairs:
        if not inst.contains(u, s):
            continue
        back = inst.preimage(x, s, inst.pushforward(x, s, u))
        check.record(
            back == u,
            lambda s=s, u=u: {
                "object": idx,
                "law": "preimage(pushforward(u)) = u",
                "base": inst.describe_sub(s),
                "u": inst.describe_sub(u),
            },
        )
