"""Command-line front end: ``hn <command> --instance NAME --input PATH ...``.

Exit codes: 0 success, 1 an oracle or axiom comparison came out unequal,
2 invalid input (including zero objects), 3 enumeration bound or precision
exhausted, 4 axiom violation.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from hnfilt import corpus
from hnfilt.axioms import check_instance_axioms
from hnfilt.engine import (
    SlopeCategory,
    format_slope,
    hn_filtration,
    hn_polygon,
    hom_vanishes_predicted,
    is_semistable,
    oracle_polygon,
    slope,
)
from hnfilt.errors import (
    AxiomViolation,
    EnumerationBound,
    HNError,
    InvalidInput,
    PrecisionExhausted,
)
from hnfilt.instances.filtvec import FiltVecCategory
from hnfilt.instances.phimod import DEFAULT_PRECISION, PhiModCategory
from hnfilt.instances.quiver import QuiverCategory
from hnfilt.objfile import LoadedObject, expand_inputs, load_object
from hnfilt.polygon import first_divergence
from hnfilt.report import envelope, polygon_json, polygon_svg, render_json, render_tsv

COMMANDS = ("compute", "oracle", "axioms", "hom", "polygon")
INSTANCES = ("filtvec", "quiver", "phimod", "broken-degree")

EXIT_OK, EXIT_UNEQUAL, EXIT_INVALID, EXIT_BOUND, EXIT_AXIOM = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    instance: str
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    format: str = "json"
    svg: str | None = None
    seed: int = 0
    samples: int = 20
    precision: int | None = None

    @property
    def file_instance(self) -> str:
        """The object-file format read for this instance."""
        return "filtvec" if self.instance == "broken-degree" else self.instance


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hn", description="Harder-Narasimhan filtrations of small exact objects.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--instance", required=True, choices=INSTANCES)
    parser.add_argument("--input", action="append", default=[], dest="inputs", metavar="PATH",
                        help="object file or directory of *.json files; repeatable")
    parser.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "tsv"), default="json")
    parser.add_argument("--svg", metavar="PATH", help="write the polygon as SVG (a directory for several inputs)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=20, help="generated sample count for axioms without --input")
    parser.add_argument("--precision", type=int, default=None, help="phimod working precision (X-adic digits)")
    return parser


def make_category(config: RunConfig, loaded: LoadedObject | None = None) -> SlopeCategory:
    overrides = {}
    if loaded is not None and loaded.declared_degree is not None:
        overrides[loaded.obj] = loaded.declared_degree
    if config.file_instance == "filtvec":
        return FiltVecCategory(degree_overrides=overrides)
    if config.instance == "quiver":
        return QuiverCategory(degree_overrides=overrides)
    precision = config.precision or (loaded.precision if loaded else None) or DEFAULT_PRECISION
    return PhiModCategory(precision, degree_overrides=overrides)


def load_inputs(config: RunConfig) -> list[LoadedObject]:
    paths = expand_inputs(config.inputs)
    if not paths:
        raise InvalidInput("no input objects given")
    loaded = [load_object(path, config.file_instance) for path in paths]
    if config.instance == "broken-degree":
        first = loaded[0]
        base = FiltVecCategory().degree(first.obj)
        loaded[0] = LoadedObject(first.name, first.obj, base + 1, first.precision)
    return loaded


def check_declared_degree(inst: SlopeCategory, item: LoadedObject) -> None:
    """A declared degree must be consistent with additivity over every strict subobject."""
    if item.declared_degree is None:
        return
    x = item.obj
    for s in inst.strict_subs(x):
        sub, quot = inst.sub_object(s), inst.quotient(x, s)
        total = inst.degree(sub) + inst.degree(quot)
        if total != inst.degree(x):
            raise AxiomViolation(
                f"{item.name}: degree additivity fails: declared deg X = {inst.degree(x)} but "
                f"deg S + deg X/S = {total} for S = {inst.describe_sub(s)}"
            )


# -- commands --------------------------------------------------------------


def _prepared(config: RunConfig) -> list[tuple[LoadedObject, SlopeCategory]]:
    out = []
    for item in load_inputs(config):
        inst = make_category(config, item)
        check_declared_degree(inst, item)
        out.append((item, inst))
    return out


def cmd_compute(config: RunConfig) -> tuple[int, str, list]:
    results, rows, polys = [], [], []
    for item, inst in _prepared(config):
        x = item.obj
        filt = hn_filtration(inst, x)
        poly = hn_polygon(filt)
        polys.append((item.name, poly))
        results.append({
            "input": item.name,
            "rank": inst.rank(x),
            "degree": inst.degree(x),
            "slope": format_slope(slope(inst, x)),
            "semistable": filt.length == 1,
            "steps": [inst.describe_sub(s) for s in filt.steps],
            "slopes": [format_slope(m) for m in filt.graded_slopes],
            "ranks": list(filt.graded_ranks),
            "polygon": polygon_json(poly),
        })
        for k, (mu, r) in enumerate(filt.graded(), start=1):
            rows.append([item.name, k, r, int(mu * r), mu])
    text = _render(config, "compute", results, ["input", "step", "rank", "degree", "slope"], rows)
    return EXIT_OK, text, polys


def cmd_polygon(config: RunConfig) -> tuple[int, str, list]:
    results, rows, polys = [], [], []
    for item, inst in _prepared(config):
        poly = hn_polygon(hn_filtration(inst, item.obj))
        polys.append((item.name, poly))
        results.append({"input": item.name, "polygon": polygon_json(poly)})
        rows += [[item.name, x, y] for x, y in poly.vertices]
    text = _render(config, "polygon", results, ["input", "x", "y"], rows)
    return EXIT_OK, text, polys


def cmd_oracle(config: RunConfig) -> tuple[int, str, list]:
    results, rows, polys = [], [], []
    all_equal = True
    for item, inst in _prepared(config):
        engine = hn_polygon(hn_filtration(inst, item.obj))
        oracle = oracle_polygon(inst, item.obj)
        diverge = first_divergence(engine, oracle)
        status = "EQUAL" if diverge is None else "NOT EQUAL"
        all_equal = all_equal and diverge is None
        polys.append((item.name, engine))
        results.append({
            "input": item.name,
            "status": status,
            "engine": polygon_json(engine),
            "oracle": polygon_json(oracle),
            "first_divergence": diverge,
        })
        rows.append([item.name, status, "" if diverge is None else diverge,
                     polygon_json(engine), polygon_json(oracle)])
    text = _render(config, "oracle", results, ["input", "status", "first_divergence", "engine", "oracle"], rows)
    return (EXIT_OK if all_equal else EXIT_UNEQUAL), text, polys


def _generated_samples(config: RunConfig) -> tuple[list[str], list]:
    rng = random.Random(config.seed)
    n = max(config.samples, 1)
    if config.file_instance == "filtvec":
        pool = corpus.filtvec_exhaustive(2, 2)
        objs = pool if n >= len(pool) else rng.sample(pool, n)
    elif config.instance == "quiver":
        objs = corpus.random_quivers(n, config.seed)
    else:
        objs = corpus.random_phimods(n, config.seed)
    return [f"sample-{k}" for k in range(len(objs))], objs


def cmd_axioms(config: RunConfig) -> tuple[int, str, list]:
    if config.inputs:
        loaded = load_inputs(config)
        names, objs = [item.name for item in loaded], [item.obj for item in loaded]
        overrides = {item.obj: item.declared_degree for item in loaded if item.declared_degree is not None}
    else:
        names, objs = _generated_samples(config)
        overrides = {}
        if config.instance == "broken-degree":
            overrides = corpus.broken_degree_category(objs).degree_overrides
    inst = make_category(config)
    inst.degree_overrides.update(overrides)
    report = check_instance_axioms(inst, objs, config.seed)
    results = []
    for c in report.checks:
        witness = dict(c.witness) if c.witness else None
        if witness and "object" in witness:
            witness["object"] = names[witness["object"]]
        results.append({"axiom": c.name, "status": "PASS" if c.passed else "FAIL",
                        "checked": c.checked, "witness": witness})
    rows = [[r["axiom"], r["status"], r["checked"], r["witness"] or ""] for r in results]
    text = _render(config, "axioms", results, ["axiom", "status", "checked", "witness"], rows,
                   objects=names, passed=report.passed)
    return (EXIT_OK if report.passed else EXIT_UNEQUAL), text, []


def _morphism_json(f) -> Any:
    if hasattr(f, "matrix"):
        return f.matrix.tolist()
    return [b.tolist() for b in f.blocks]


def cmd_hom(config: RunConfig) -> tuple[int, str, list]:
    prepared = _prepared(config)
    if len(prepared) != 2:
        raise InvalidInput(f"hom needs exactly two objects (source, target), got {len(prepared)}")
    (src, inst), (dst, _) = prepared
    inst.degree_overrides.update(make_category(config, dst).degree_overrides)
    basis = inst.hom_basis(src.obj, dst.obj)
    fx, fy = hn_filtration(inst, src.obj), hn_filtration(inst, dst.obj)
    predicted = hom_vanishes_predicted(fx, fy)
    if predicted and basis:
        raise AxiomViolation("Hom is nonzero although every slope of the source exceeds every slope of the target")
    result = {
        "source": src.name,
        "target": dst.name,
        "dimension": len(basis),
        "basis": [_morphism_json(f) for f in basis],
        "source_slopes": [format_slope(m) for m in fx.graded_slopes],
        "target_slopes": [format_slope(m) for m in fy.graded_slopes],
        "source_semistable": is_semistable(inst, src.obj),
        "target_semistable": is_semistable(inst, dst.obj),
        "vanishing_predicted": predicted,
    }
    rows = [[src.name, dst.name, len(basis), predicted]]
    text = _render(config, "hom", [result], ["source", "target", "dimension", "vanishing_predicted"], rows)
    return EXIT_OK, text, []


HANDLERS = {
    "compute": cmd_compute,
    "oracle": cmd_oracle,
    "axioms": cmd_axioms,
    "hom": cmd_hom,
    "polygon": cmd_polygon,
}


def _render(config: RunConfig, command: str, results: list, header: list[str], rows: list, **extra) -> str:
    if config.format == "tsv":
        return render_tsv(header, rows)
    return render_json(envelope(command, config.instance, results, **extra))


def _write_svgs(target: str, polys: list) -> None:
    if not polys:
        return
    path = Path(target)
    if len(polys) == 1:
        path.write_text(polygon_svg(polys[0][1], polys[0][0]))
        return
    path.mkdir(parents=True, exist_ok=True)
    for name, poly in polys:
        (path / (Path(name).stem + ".svg")).write_text(polygon_svg(poly, name))


def exit_code_for(exc: HNError) -> int:
    if isinstance(exc, InvalidInput):
        return EXIT_INVALID
    if isinstance(exc, (EnumerationBound, PrecisionExhausted)):
        return EXIT_BOUND
    if isinstance(exc, AxiomViolation):
        return EXIT_AXIOM
    return EXIT_INVALID


def run(config: RunConfig) -> tuple[int, str]:
    """Execute a command; returns the exit code and the report text (empty on error)."""
    code, text, polys = HANDLERS[config.command](config)
    if config.svg:
        _write_svgs(config.svg, polys)
    return code, text


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        instance=args.instance,
        inputs=args.inputs,
        output=args.output,
        format=args.format,
        svg=args.svg,
        seed=args.seed,
        samples=args.samples,
        precision=args.precision,
    )
    try:
        if config.precision is not None and config.precision < 1:
            raise InvalidInput("--precision must be positive")
        code, text = run(config)
        if config.output:
            Path(config.output).write_text(text)
        else:
            sys.stdout.write(text)
    except HNError as exc:
        print(f"hn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"hn: InvalidInput: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return code


if __name__ == "__main__":
    sys.exit(main())
