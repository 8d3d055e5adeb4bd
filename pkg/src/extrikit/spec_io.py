"""JSON ingestion: quiver specifications and scenario pipelines.

A quiver spec is the cross-language contract: versioned format field,
prime, vertices, named arrows, and relations as coefficient/path terms.
A scenario names the base construction, an ordered list of steps
(restrict / relative / quotient), and the requested outputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import linalg
from .quiver import Quiver, QuiverError, RelationSet

QUIVER_FORMAT = "extrikit-quiver/1"
SCENARIO_FORMAT = "extrikit-scenario/1"


class SpecError(ValueError):
    pass


@dataclass
class QuiverSpec:
    prime: int
    vertices: list[str]
    arrows: list[dict]
    relations: list[list[dict]]

    def to_dict(self) -> dict:
        return {
            "format": QUIVER_FORMAT,
            "prime": self.prime,
            "vertices": list(self.vertices),
            "arrows": [dict(a) for a in self.arrows],
            "relations": [[dict(t) for t in rel] for rel in self.relations],
        }

    def build(self, len_cap: int = 32):
        from .quiver import build_algebra
        q = Quiver(self.vertices, [(a["name"], a["from"], a["to"]) for a in self.arrows])
        rels = [[(t["coeff"], tuple(t["path"])) for t in rel] for rel in self.relations]
        return build_algebra(q, rels, p=self.prime, len_cap=len_cap)


def parse_quiver_spec(data: dict, prime_override: int | None = None) -> QuiverSpec:
    if not isinstance(data, dict):
        raise SpecError("quiver spec must be a JSON object")
    if data.get("format") != QUIVER_FORMAT:
        raise SpecError(f"unsupported quiver format {data.get('format')!r}")
    prime = prime_override if prime_override is not None else data.get("prime", linalg.DEFAULT_PRIME)
    if not linalg.is_prime(int(prime)):
        raise SpecError(f"{prime} is not prime")
    vertices = data.get("vertices")
    if not isinstance(vertices, list) or not vertices:
        raise SpecError("vertices: expected a nonempty list")
    arrows = data.get("arrows", [])
    for i, a in enumerate(arrows):
        for key in ("name", "from", "to"):
            if key not in a:
                raise SpecError(f"arrows[{i}]: missing {key!r}")
    relations = data.get("relations", [])
    for i, rel in enumerate(relations):
        if not isinstance(rel, list) or not rel:
            raise SpecError(f"relations[{i}]: expected a nonempty list of terms")
        for j, t in enumerate(rel):
            if "path" not in t or not isinstance(t["path"], list):
                raise SpecError(f"relations[{i}][{j}]: missing path")
            t.setdefault("coeff", 1)
    spec = QuiverSpec(int(prime), [str(v) for v in vertices], arrows, relations)
    # run full structural validation now so errors carry spec context
    try:
        q = Quiver(spec.vertices, [(a["name"], a["from"], a["to"]) for a in spec.arrows])
        RelationSet(q, [[(t["coeff"], tuple(t["path"])) for t in rel] for rel in spec.relations])
    except QuiverError as e:
        raise SpecError(str(e)) from e
    return spec


@dataclass
class Scenario:
    base: str
    steps: list[dict] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"format": SCENARIO_FORMAT, "base": self.base,
                "steps": [dict(s) for s in self.steps], "outputs": list(self.outputs)}


BASES = ("module", "two-term", "hereditary-slice")
OUTPUTS = ("ar-quiver", "mutation-graph", "report", "extriangles")


def parse_scenario(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise SpecError("scenario must be a JSON object")
    if data.get("format") != SCENARIO_FORMAT:
        raise SpecError(f"unsupported scenario format {data.get('format')!r}")
    base = data.get("base")
    if base not in BASES:
        raise SpecError(f"base must be one of {BASES}")
    steps = data.get("steps", [])
    for i, s in enumerate(steps):
        kinds = [k for k in ("restrict", "relative", "quotient") if k in s]
        if len(kinds) != 1:
            raise SpecError(f"steps[{i}]: expected exactly one of restrict/relative/quotient")
        if "relative" in s:
            mode = s["relative"].get("mode", "E_D")
            if mode not in ("E_D", "E^D", "both"):
                raise SpecError(f"steps[{i}]: bad relative mode {mode!r}")
    outputs = data.get("outputs", ["report"])
    for o in outputs:
        if o not in OUTPUTS:
            raise SpecError(f"unknown output {o!r}")
    return Scenario(base, steps, outputs)


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as e:
            raise SpecError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e


def dump_json(data, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
