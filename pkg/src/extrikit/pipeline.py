"""Scenario execution: chain constructors and collect artifacts.

Selectors resolve to canonical object labels either literally or through
the standard-module forms {"projective_at": v}, {"injective_at": v},
{"simple_at": v}; restriction additionally accepts the hom-vanishing
predicate form used to carve out exact subcategories.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import artheory as art
from . import builders, constructions as con
from . import homological as hml
from . import reps
from .category import ExtCategory
from .spec_io import QuiverSpec, Scenario, SpecError


class PipelineError(ValueError):
    def __init__(self, message: str, step: int | None = None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


@dataclass
class PipelineRun:
    cat: ExtCategory
    algebra: object
    records: list[dict] = field(default_factory=list)
    module_cat: ExtCategory | None = None


def _module_backend(run: PipelineRun):
    if run.module_cat is None:
        return None
    return run.module_cat.backend


def resolve_entry(entry, run: PipelineRun) -> str:
    if isinstance(entry, str):
        if entry not in run.cat.objects:
            raise SpecError(f"unknown object label {entry!r}")
        return entry
    if isinstance(entry, dict):
        backend = _module_backend(run)
        if backend is None:
            raise SpecError("standard-module selectors need a module base")
        alg = backend.alg
        if "projective_at" in entry:
            rep = reps.projective(alg, entry["projective_at"])
        elif "injective_at" in entry:
            rep = reps.injective(alg, entry["injective_at"])
        elif "simple_at" in entry:
            rep = reps.simple(alg, entry["simple_at"])
        else:
            raise SpecError(f"bad selector entry {entry!r}")
        label, _ = backend.label_of(rep)
        if label not in run.cat.objects:
            raise SpecError(f"selector resolves to {label!r}, not in the current category")
        return label
    raise SpecError(f"bad selector entry {entry!r}")


def resolve_restrict(selector, run: PipelineRun) -> list[str]:
    if isinstance(selector, dict) and ("hom_vanishes_from" in selector
                                       or "hom_vanishes_from_after_tau" in selector):
        backend = _module_backend(run)
        if backend is None or run.cat is not run.module_cat:
            raise SpecError("predicate restriction applies to the module base")
        from_labels = [resolve_entry(e, run) for e in selector.get("hom_vanishes_from", [])]
        tau_entries = selector.get("hom_vanishes_from_after_tau", [])
        tau_reps = []
        for e in tau_entries:
            lab = resolve_entry(e, run)
            tau_reps.append(backend.rep_of[lab])
        members = []
        for lab in run.cat.objects:
            if any(run.cat.hom_dim(x, lab) for x in from_labels):
                continue
            m = backend.rep_of[lab]
            tm = hml.ar_translate_general(m)
            if any(reps.hom_basis(x, tm) for x in tau_reps):
                continue
            members.append(lab)
        return members
    if isinstance(selector, dict) and "objects" in selector:
        return [resolve_entry(e, run) for e in selector["objects"]]
    if isinstance(selector, list):
        return [resolve_entry(e, run) for e in selector]
    raise SpecError(f"bad restrict selector {selector!r}")


def run_scenario_data(spec: QuiverSpec, scenario: Scenario, cap: int = 512) -> PipelineRun:
    alg = spec.build()
    if scenario.base == "module":
        cat = builders.from_module_category(alg, cap)
        run = PipelineRun(cat, alg, module_cat=cat)
    elif scenario.base == "two-term":
        cat = builders.two_term_category(alg, cap)
        run = PipelineRun(cat, alg)
    else:
        cat = builders.hereditary_slice(alg, cap)
        run = PipelineRun(cat, alg)
    run.records.append({
        "op": "base",
        "inputs": {"base": scenario.base, "prime": spec.prime},
        "result": {"objects": list(run.cat.objects)},
        "checks": [],
    })
    for idx, step in enumerate(scenario.steps):
        try:
            _run_step(run, step)
        except (SpecError, con.ConstructionError, art.ARTheoryError) as e:
            raise PipelineError(str(e), step=idx) from e
    return run


def _run_step(run: PipelineRun, step: dict):
    if "restrict" in step:
        members = resolve_restrict(step["restrict"], run)
        run.cat = con.restrict_extension_closed(run.cat, members)
        run.records.append({
            "op": "restrict",
            "inputs": {"selector": step["restrict"]},
            "result": {"objects": list(run.cat.objects)},
            "checks": [{"name": "extension-closed", "pass": True}],
        })
    elif "relative" in step:
        data = step["relative"]
        objs = [resolve_entry(e, run) for e in data.get("objects", [])]
        lower, upper, both = con.relative_subfunctors(run.cat, objs)
        mode = data.get("mode", "E_D")
        sub = {"E_D": lower, "E^D": upper, "both": both}[mode]
        report = con.is_closed(run.cat, sub)
        if not report.closed:
            raise PipelineError("subfunctor not closed: " + "; ".join(report.failures[:3]))
        run.cat = con.relative_category(run.cat, sub, checked=False)
        run.records.append({
            "op": "relative",
            "inputs": {"mode": mode, "objects": objs},
            "result": {"objects": list(run.cat.objects)},
            "checks": [
                {"name": "subfunctor stable", "pass": report.stable},
                {"name": "closed left", "pass": report.left_closed},
                {"name": "closed right", "pass": report.right_closed},
            ],
        })
    elif "quotient" in step:
        sel = step["quotient"]
        if sel == "proj-inj":
            projs, injs = run.cat.pi_objects()
            objs = sorted(set(projs) & set(injs))
        else:
            objs = [resolve_entry(e, run) for e in (sel if isinstance(sel, list) else sel.get("objects", []))]
        run.cat = con.ideal_quotient_category(run.cat, objs)
        run.records.append({
            "op": "quotient",
            "inputs": {"objects": objs},
            "result": {"objects": list(run.cat.objects)},
            "checks": [{"name": "D inside Proj and Inj", "pass": True}],
        })
    else:
        raise SpecError(f"unknown step {step!r}")


def extriangle_inventory(cat: ExtCategory) -> list[dict]:
    """Realized nonzero basis classes between indecomposables, as signatures."""
    out = []
    for c in cat.objects:
        for a in cat.objects:
            de = cat.e_dim(c, a)
            for i in range(de):
                conf = cat.realize(cat.basis_class(c, a, i))
                out.append({
                    "start": a,
                    "middle": sorted(conf.b),
                    "end": c,
                    "e_dim": de,
                    "signature": art.conflation_signature(cat, conf),
                })
    return out


def collect_artifacts(run: PipelineRun, outputs) -> dict:
    arts: dict[str, object] = {}
    if "ar-quiver" in outputs:
        arts["ar-quiver.dot"] = art.ar_quiver(run.cat).to_dot()
    if "mutation-graph" in outputs:
        _, graph = art.rigid_and_mutation(run.cat)
        arts["mutation-graph.dot"] = graph.to_dot()
    if "extriangles" in outputs:
        arts["extriangles.json"] = extriangle_inventory(run.cat)
    if "report" in outputs:
        projs, injs = run.cat.pi_objects()
        arts["report.json"] = {
            "records": run.records,
            "objects": list(run.cat.objects),
            "e_projectives": sorted(projs),
            "e_injectives": sorted(injs),
        }
    return arts
