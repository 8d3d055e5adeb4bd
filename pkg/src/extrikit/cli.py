"""Command line interface.

    extrikit run SPEC SCENARIO --out DIR
    extrikit audit SPEC [SCENARIO] [--et4-brute]
    extrikit ar-quiver SPEC [SCENARIO]
    extrikit almost-split SPEC --at LABEL [SCENARIO]
    extrikit ars SPEC [SCENARIO]
    extrikit rigid SPEC [SCENARIO] [--mutation-graph]

SPEC and SCENARIO are JSON files; SPEC may also name a preset
(ka3-line, ka3-rad2, blossom).  Exit code 0 on success, 1 with a
structured error report otherwise.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import artheory as art
from . import audit as audit_mod
from . import pipeline, presets, spec_io


def _load_spec(spec_arg: str, prime: int | None):
    if spec_arg in presets.PRESETS:
        data = presets.PRESETS[spec_arg]()
    else:
        data = spec_io.load_json(spec_arg)
    return spec_io.parse_quiver_spec(data, prime_override=prime)


def _load_scenario(scenario_arg: str | None):
    if scenario_arg is None:
        return spec_io.Scenario("module", [], ["report"])
    return spec_io.parse_scenario(spec_io.load_json(scenario_arg))


def _fail(message: str, step=None):
    payload = {"error": message}
    if step is not None:
        payload["step"] = step
    click.echo(json.dumps(payload, sort_keys=True), err=True)
    sys.exit(1)


def _build(spec_arg, scenario_arg, prime, cap):
    try:
        spec = _load_spec(spec_arg, prime)
        scenario = _load_scenario(scenario_arg)
        run = pipeline.run_scenario_data(spec, scenario, cap=cap)
        return spec, scenario, run
    except pipeline.PipelineError as e:
        _fail(str(e), step=e.step)
    except (spec_io.SpecError, ValueError) as e:
        _fail(str(e))


common = [
    click.option("--prime", type=int, default=None, help="override the base field prime"),
    click.option("--cap", type=int, default=512, help="indecomposable cap"),
]


def add_common(fn):
    for deco in reversed(common):
        fn = deco(fn)
    return fn


@click.group()
def main():
    """Finite extriangulated categories from bound quiver algebras."""


@main.command("run")
@click.argument("spec_path")
@click.argument("scenario_path")
@click.option("--out", "out_dir", default=".", help="output directory")
@add_common
def run_cmd(spec_path, scenario_path, out_dir, prime, cap):
    """Execute a scenario and write its requested artifacts."""
    spec, scenario, run = _build(spec_path, scenario_path, prime, cap)
    arts = pipeline.collect_artifacts(run, scenario.outputs)
    os.makedirs(out_dir, exist_ok=True)
    for name, content in sorted(arts.items()):
        path = os.path.join(out_dir, name)
        if name.endswith(".json"):
            spec_io.dump_json(content, path)
        else:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(content)
        click.echo(path)


@main.command("audit")
@click.argument("spec_path")
@click.argument("scenario_path", required=False)
@click.option("--et4-brute", is_flag=True, help="bounded brute (ET4) search")
@add_common
def audit_cmd(spec_path, scenario_path, et4_brute, prime, cap):
    """Run the axiom audit on the category a scenario produces."""
    spec, scenario, run = _build(spec_path, scenario_path, prime, cap)
    report = audit_mod.axiom_audit(run.cat, et4_brute=et4_brute)
    click.echo(report.summary())
    if not report.ok:
        sys.exit(1)


@main.command("ar-quiver")
@click.argument("spec_path")
@click.argument("scenario_path", required=False)
@add_common
def ar_quiver_cmd(spec_path, scenario_path, prime, cap):
    """Print the AR quiver as DOT."""
    spec, scenario, run = _build(spec_path, scenario_path, prime, cap)
    click.echo(art.ar_quiver(run.cat).to_dot(), nl=False)


@main.command("almost-split")
@click.argument("spec_path")
@click.argument("scenario_path", required=False)
@click.option("--at", "at_label", required=True, help="end object label")
@add_common
def almost_split_cmd(spec_path, scenario_path, at_label, prime, cap):
    """The almost split conflation ending at an object."""
    spec, scenario, run = _build(spec_path, scenario_path, prime, cap)
    try:
        res = art.almost_split_ending_at(run.cat, at_label)
    except art.ARTheoryError as e:
        _fail(str(e))
    if res is None:
        _fail(f"no almost split extension ends at {at_label}")
    a, w = res
    click.echo(json.dumps({
        "start": a,
        "middle": sorted(w.conflation.b),
        "end": at_label,
        "checks": {k: bool(v) for k, v in w.checks.items()},
    }, sort_keys=True))


@main.command("ars")
@click.argument("spec_path")
@click.argument("scenario_path", required=False)
@add_common
def ars_cmd(spec_path, scenario_path, prime, cap):
    """Construct and verify the Auslander-Reiten-Serre duality."""
    spec, scenario, run = _build(spec_path, scenario_path, prime, cap)
    try:
        d = art.ars_duality(run.cat)
    except art.ARTheoryError as e:
        _fail(str(e))
    report = art.verify_ars(run.cat, d)
    click.echo(json.dumps({
        "tau": d.tau,
        "pairs_checked": report.pair_count,
        "ok": report.ok,
        "failures": report.failures,
    }, sort_keys=True))
    if not report.ok:
        sys.exit(1)


@main.command("rigid")
@click.argument("spec_path")
@click.argument("scenario_path", required=False)
@click.option("--mutation-graph", "with_graph", is_flag=True)
@add_common
def rigid_cmd(spec_path, scenario_path, with_graph, prime, cap):
    """Basic maximal E-rigid objects, optionally with the mutation graph."""
    spec, scenario, run = _build(spec_path, scenario_path, prime, cap)
    maximal, graph = art.rigid_and_mutation(run.cat)
    click.echo(json.dumps({
        "maximal_rigid": ["+".join(t) for t in maximal],
        "count": len(maximal),
        "edges": len(graph.undirected_edge_set()),
    }, sort_keys=True))
    if with_graph:
        click.echo(graph.to_dot(), nl=False)


if __name__ == "__main__":
    main()
