"""Reading object files and corpus directories."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from hnfilt.errors import InvalidInput
from hnfilt.instances.filtvec import FiltVecObject
from hnfilt.instances.phimod import PhiModObject
from hnfilt.instances.quiver import QuiverRep

LOADERS = {
    "filtvec": FiltVecObject.from_dict,
    "quiver": QuiverRep.from_dict,
    "phimod": PhiModObject.from_dict,
}


@dataclass(frozen=True)
class LoadedObject:
    name: str
    obj: Any
    declared_degree: int | None = None
    precision: int | None = None


def expand_inputs(paths: list[str]) -> list[Path]:
    """Files as given; directories become their ``*.json`` files sorted by name."""
    out: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            out.extend(sorted(path.glob("*.json"), key=lambda p: p.name))
        elif path.is_file():
            out.append(path)
        else:
            raise InvalidInput(f"input {raw} does not exist")
    return out


def parse_object(data: Any, instance: str, name: str = "<object>") -> LoadedObject:
    if not isinstance(data, dict):
        raise InvalidInput(f"{name}: an object file must hold a JSON object")
    declared = data.get("instance")
    if declared != instance:
        raise InvalidInput(f"{name}: file is for instance {declared!r}, expected {instance!r}")
    degree = data.get("degree")
    if degree is not None and not isinstance(degree, int):
        raise InvalidInput(f"{name}: declared degree must be an integer")
    precision = data.get("precision")
    if precision is not None and (not isinstance(precision, int) or precision < 1):
        raise InvalidInput(f"{name}: precision must be a positive integer")
    try:
        obj = LOADERS[instance](data)
    except InvalidInput as exc:
        raise InvalidInput(f"{name}: {exc}") from exc
    return LoadedObject(name, obj, degree, precision)


def load_object(path: Path, instance: str) -> LoadedObject:
    try:
        data = json.loads(path.read_text())
    except (OSError, UnicodeDecodeError) as exc:
        raise InvalidInput(f"{path.name}: cannot read: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path.name}: not valid JSON: {exc}") from exc
    return parse_object(data, instance, path.name)


def dump_object(obj: Any) -> str:
    return json.dumps(obj.to_dict(), indent=2) + "\n"
