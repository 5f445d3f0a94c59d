"""Command-line entry point: reproducible batch workflows over split files.

Every subcommand that writes an artifact also writes a run manifest next to
it (content hashes of inputs and outputs, resolved config, tool version, no
timestamps), so identical inputs and flags always produce identical files.
"""

from __future__ import annotations

import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import click

from . import __version__, bezier, coverset, metrics, predictors, prompts, raster, scene
from .errors import SceneKitError
from .tokenization import default_token_counter

# Fixed default seed: the core pipeline is deterministic, the flag exists so
# callers can thread reproducible randomness into extensions and manifests.
DEFAULT_SEED = 1337


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(anchor: Path, subcommand: str, config: dict,
                   inputs: Sequence[Path], outputs: Sequence[Path]) -> Path:
    """Write ``<anchor>.manifest.json`` (or ``manifest.json`` inside a
    directory anchor) describing one completed run."""
    if anchor.is_dir():
        manifest_path = anchor / "manifest.json"
        root = anchor
    else:
        manifest_path = anchor.with_name(anchor.name + ".manifest.json")
        root = anchor.parent
    payload = {
        "tool": "scenekit",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "inputs": {str(p): _sha256(Path(p)) for p in inputs},
        "outputs": {
            str(Path(p).relative_to(root) if Path(p).is_relative_to(root) else Path(p)): _sha256(Path(p))
            for p in outputs
        },
    }
    with open(manifest_path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest_path


def _map_ordered(fn: Callable, items: Sequence, jobs: int) -> list:
    """Apply fn to items, in parallel when jobs > 1, preserving input order."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _load_split(path: str) -> list[scene.PredictionInstance]:
    try:
        return scene.load_split(path)
    except SceneKitError as exc:
        raise click.ClickException(str(exc)) from exc


@click.group()
@click.version_option(__version__)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True,
              help="Seed recorded in manifests and passed to any randomized extension.")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Per-instance parallelism; outputs keep input order.")
@click.pass_context
def main(ctx: click.Context, seed: int, jobs: int) -> None:
    """Scene representation and evaluation toolkit."""
    ctx.ensure_object(dict)
    ctx.obj["seed"] = seed
    ctx.obj["jobs"] = max(1, jobs)


@main.command("fit-bezier")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def fit_bezier_cmd(ctx: click.Context, in_path: str, out_path: str) -> None:
    """Fit cubic control points to every lane in a split."""
    instances = _load_split(in_path)

    def one(inst: scene.PredictionInstance) -> dict:
        try:
            current = (bezier.fit_lane(inst.current_lane.polyline).control_points.tolist()
                       if inst.current_lane else None)
            outgoing = [bezier.fit_lane(lane.polyline).control_points.tolist()
                        for lane in inst.outgoing_lanes]
        except SceneKitError as exc:
            raise click.ClickException(f"instance {inst.instance_id!r}: {exc}") from exc
        return {"instance_id": inst.instance_id,
                "current_lane": current, "outgoing_lanes": outgoing}

    records = _map_ordered(one, instances, ctx.obj["jobs"])
    out = Path(out_path)
    with open(out, "w") as fh:
        json.dump(records, fh)
        fh.write("\n")
    write_manifest(out, "fit-bezier", {"seed": ctx.obj["seed"]}, [Path(in_path)], [out])


@main.command("prompt")
@click.option("--variant", type=click.Choice(prompts.VARIANTS), default="bezier",
              show_default=True)
@click.option("--max-tokens", type=int, default=512, show_default=True)
@click.option("--spacing", type=float, default=1.0, show_default=True,
              help="Discretized-variant sample spacing in meters.")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def prompt_cmd(ctx: click.Context, variant: str, max_tokens: int, spacing: float,
               in_path: str, out_path: str) -> None:
    """Render text prompts, one JSONL record per instance."""
    instances = _load_split(in_path)
    config = prompts.PromptConfig(variant, max_tokens, spacing)
    counter = default_token_counter()

    def one(inst: scene.PredictionInstance) -> dict:
        try:
            rendered = prompts.render_prompt(inst, config, counter)
        except SceneKitError as exc:
            raise click.ClickException(f"instance {inst.instance_id!r}: {exc}") from exc
        return {"instance_id": inst.instance_id, "text": rendered.text,
                "token_count": rendered.token_count, "truncated": rendered.truncated}

    records = _map_ordered(one, instances, ctx.obj["jobs"])
    out = Path(out_path)
    with open(out, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    write_manifest(out, "prompt",
                   {"variant": variant, "max_tokens": max_tokens, "spacing": spacing,
                    "seed": ctx.obj["seed"]},
                   [Path(in_path)], [out])


@main.command("raster")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--format", "image_format", type=click.Choice(["png", "ppm"]), default="png",
              show_default=True)
@click.pass_context
def raster_cmd(ctx: click.Context, in_path: str, out_dir: str, image_format: str) -> None:
    """Render one agent-centric raster image per instance."""
    instances = _load_split(in_path)
    config = raster.RasterConfig()
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)

    def one(inst: scene.PredictionInstance) -> Path:
        try:
            image = raster.render(inst, config)
        except SceneKitError as exc:
            raise click.ClickException(f"instance {inst.instance_id!r}: {exc}") from exc
        path = directory / f"{inst.instance_id}.{image_format}"
        if image_format == "png":
            image.save_png(path)
        else:
            image.save_ppm(path)
        return path

    paths = _map_ordered(one, instances, ctx.obj["jobs"])
    write_manifest(directory, "raster",
                   {"format": image_format, "seed": ctx.obj["seed"]},
                   [Path(in_path)], paths)


@main.group("coverset")
def coverset_group() -> None:
    """Cover-set construction over observed futures."""


@coverset_group.command("build")
@click.option("--epsilon", type=float, required=True, help="Coverage radius in meters.")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def coverset_build_cmd(ctx: click.Context, epsilon: float, in_path: str, out_path: str) -> None:
    """Greedily cover the split's ground-truth trajectories."""
    instances = _load_split(in_path)
    futures = [inst.ground_truth for inst in instances if inst.ground_truth is not None]
    if not futures:
        raise click.ClickException("split contains no ground-truth trajectories to cover")
    try:
        base = coverset.TrajectorySet(tuple(futures))
        cover = coverset.greedy_cover(base, epsilon)
        out = Path(out_path)
        coverset.save_coverset(out, cover, base_size=len(base))
    except SceneKitError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"covered {len(base)} trajectories with {len(cover)} at epsilon {epsilon}")
    write_manifest(out, "coverset build",
                   {"epsilon": epsilon, "seed": ctx.obj["seed"]},
                   [Path(in_path)], [out])


_MODEL_CHOICES = [kind.value for kind in predictors.KinematicModelKind] + [
    "physics_oracle", "nearest_oracle"]


@main.command("predict")
@click.option("--model", type=click.Choice(_MODEL_CHOICES), required=True)
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--modes", "modes_path", type=click.Path(exists=True, dir_okay=False),
              help="Cover-set file; required for nearest_oracle.")
@click.pass_context
def predict_cmd(ctx: click.Context, model: str, in_path: str, out_path: str,
                modes_path: str | None) -> None:
    """Run a baseline or oracle over a split and write predictions."""
    instances = _load_split(in_path)
    mode_set = None
    if model == "nearest_oracle":
        if not modes_path:
            raise click.ClickException("nearest_oracle requires --modes")
        try:
            mode_set = coverset.load_coverset(modes_path)
        except SceneKitError as exc:
            raise click.ClickException(str(exc)) from exc

    def one(inst: scene.PredictionInstance) -> dict:
        try:
            if model == "physics_oracle":
                traj = predictors.physics_oracle(inst.agent, inst.ground_truth)
                return {"instance_id": inst.instance_id,
                        "trajectory": traj.points.tolist()}
            if model == "nearest_oracle":
                scores = predictors.score_modes_nearest_oracle(inst.ground_truth, mode_set)
                return {"instance_id": inst.instance_id,
                        "ranking": scores.ranking().tolist(),
                        "scores": scores.scores.tolist()}
            traj = predictors.rollout(model, inst.agent)
            return {"instance_id": inst.instance_id, "trajectory": traj.points.tolist()}
        except SceneKitError as exc:
            raise click.ClickException(f"instance {inst.instance_id!r}: {exc}") from exc

    evaluable = [inst for inst in instances if inst.ground_truth is not None]
    records = _map_ordered(one, evaluable, ctx.obj["jobs"])
    payload: dict[str, Any] = {"model": model, "records": records}
    if mode_set is not None:
        payload["modes"] = [t.points.tolist() for t in mode_set.trajectories]
    out = Path(out_path)
    with open(out, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")
    inputs = [Path(in_path)] + ([Path(modes_path)] if modes_path else [])
    write_manifest(out, "predict", {"model": model, "seed": ctx.obj["seed"]},
                   inputs, [out])


@main.command("evaluate")
@click.option("--predictions", "pred_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--split", "split_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def evaluate_cmd(ctx: click.Context, pred_path: str, split_path: str, out_path: str) -> None:
    """Score predictions against a split and emit a metrics report."""
    instances = _load_split(split_path)
    try:
        payload = metrics.load_predictions(pred_path)
        report = metrics.evaluate_predictions(payload, instances)
    except SceneKitError as exc:
        raise click.ClickException(str(exc)) from exc
    out = Path(out_path)
    with open(out, "w") as fh:
        json.dump(report.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    click.echo(report.format_table())
    write_manifest(out, "evaluate", {"seed": ctx.obj["seed"]},
                   [Path(pred_path), Path(split_path)], [out])


if __name__ == "__main__":
    main()
