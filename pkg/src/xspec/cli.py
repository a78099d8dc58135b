"""Command-line entry point: generate, train, render, evaluate, poses.

Exit codes: 0 success, 1 usage error, 2 I/O or format error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

log = logging.getLogger("xspec")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="xspec", description="Cross-spectral radiance fields.")
    p.add_argument("--seed", type=int, default=None, help="global seed (falls back to $XSPEC_SEED)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    g = sub.add_parser("generate", help="raytrace a synthetic multi-camera dataset")
    g.add_argument("--spec", required=True, help="scene JSON (full scene or preset)")
    g.add_argument("--out", required=True)

    t = sub.add_parser("train", help="fit a field and relative poses")
    t.add_argument("--data", required=True)
    t.add_argument("--config", help="JSON file of training options")
    t.add_argument("--out", required=True)
    t.add_argument("--variant", choices=["mlp", "grid"])
    t.add_argument("--coords", choices=["ndc", "nxdc"])
    t.add_argument("--bootstrap", help="MLP checkpoint whose poses seed the grid variant")

    r = sub.add_parser("render", help="render views from a checkpoint")
    r.add_argument("--checkpoint", required=True)
    r.add_argument("--pose", required=True, help="view id, or 'i:j:alpha' to interpolate between views")
    r.add_argument("--modality", default="all", help="modality id or 'all'")
    r.add_argument("--resolution", type=int, help="camera (modality id) whose pose and intrinsics cast the rays")
    r.add_argument("--out", required=True)
    r.add_argument("--samples", type=int)

    e = sub.add_parser("evaluate", help="PSNR/SSIM/MI report on held-out views")
    e.add_argument("--checkpoint", required=True)
    e.add_argument("--data", required=True)
    e.add_argument("--report", required=True)

    q = sub.add_parser("poses", help="print learned relative poses")
    q.add_argument("--checkpoint", required=True)
    q.add_argument("--groundtruth", help="ground-truth directory (default: next to the training data)")
    return p


def resolve_seed(arg: int | None) -> int | None:
    if arg is not None:
        return arg
    env = os.environ.get("XSPEC_SEED")
    if env is None or env == "":
        return None
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"XSPEC_SEED must be an integer, got {env!r}") from None


# -- subcommands ----------------------------------------------------------------------
def cmd_generate(args, seed):
    from .synth import default_scene, generate_dataset, scene_from_dict, single_sphere_scene

    doc = json.loads(Path(args.spec).read_text())
    if "primitives" in doc:
        if seed is not None:
            doc["seed"] = seed
        scene = scene_from_dict(doc)
    else:
        presets = {"default": default_scene, "one-sphere": single_sphere_scene}
        name = doc.pop("preset", "default")
        if name not in presets:
            raise UsageError(f"unknown scene preset {name!r}")
        if seed is not None:
            doc["seed"] = seed
        scene = presets[name](**doc)
    data_dir, gt_dir = generate_dataset(scene, args.out)
    print(f"dataset: {data_dir}\ngroundtruth: {gt_dir}")


def cmd_train(args, seed):
    from .io import load_dataset
    from .trainer import TrainConfig, load_state, save_state, train, write_pose_log

    ds = load_dataset(args.data)
    cfg = json.loads(Path(args.config).read_text()) if args.config else {}
    if args.variant:
        cfg["variant"] = args.variant
    if args.coords:
        cfg["coords"] = args.coords
    if seed is not None:
        cfg["seed"] = seed
    try:
        config = TrainConfig.from_dict(cfg)
    except (TypeError, ValueError) as e:
        raise UsageError(f"bad training config: {e}") from None
    boot = load_state(args.bootstrap)[0] if args.bootstrap else None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def report(st):
        losses = " ".join(f"{ds.cameras[m].name}={h[-1]:.4g}" for m, h in st.loss_history.items() if h)
        log.info("epoch %d %s", st.epoch, losses)

    state = train(ds, config, callback=report, bootstrap_state=boot)
    extra = {"data": str(Path(args.data).resolve()), "scene": ds.name,
             "ref_poses": np.asarray(ds.ref_poses).tolist(), "test_views": ds.test_views}
    save_state(out / "checkpoint.npz", state, extra)
    write_pose_log(out / "poses.log", state)
    (out / "losses.json").write_text(json.dumps({ds.cameras[m].name: h for m, h in state.loss_history.items()}))
    finals = ", ".join(f"{ds.cameras[m].name} {h[-1]:.6g}" for m, h in state.loss_history.items() if h)
    print(f"trained {state.epoch} epochs ({state.step} steps) in {state.wall_time:.1f}s; final loss: {finals or 'n/a'}")
    print(f"checkpoint: {out / 'checkpoint.npz'}")


def parse_pose(spec: str, ref_poses: np.ndarray):
    from .geometry import Pose, interpolate_pose

    n = len(ref_poses)
    try:
        parts = spec.split(":")
        if len(parts) == 1:
            i = int(parts[0])
            if not 0 <= i < n:
                raise UsageError(f"view id {i} out of range 0..{n - 1}")
            return Pose.from_matrix(ref_poses[i])
        if len(parts) == 3:
            i, j, a = int(parts[0]), int(parts[1]), float(parts[2])
            if not (0 <= i < n and 0 <= j < n):
                raise UsageError(f"view ids must lie in 0..{n - 1}")
            return interpolate_pose(Pose.from_matrix(ref_poses[i]), Pose.from_matrix(ref_poses[j]), a)
    except ValueError:
        pass
    raise UsageError(f"bad pose spec {spec!r}; expected <view-id> or <i>:<j>:<alpha>")


def cmd_render(args, seed):
    from .io import export_png, write_xct
    from .trainer import load_state, render_modality

    state, payload = load_state(args.checkpoint)
    meta = payload["meta"]
    if "ref_poses" not in meta:
        raise UsageError("checkpoint carries no reference poses to render from")
    pose = parse_pose(args.pose, np.array(meta["ref_poses"], dtype=np.float32))
    n_mod = len(state.cameras)
    if args.modality == "all":
        mods = list(range(n_mod))
    else:
        try:
            mods = [int(args.modality)]
        except ValueError:
            raise UsageError(f"--modality must be an id or 'all', got {args.modality!r}") from None
    if any(not 0 <= m < n_mod for m in mods):
        raise UsageError(f"modality ids must lie in 0..{n_mod - 1}")
    if args.resolution is not None and not 0 <= args.resolution < n_mod:
        raise UsageError(f"--resolution must lie in 0..{n_mod - 1}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for m in mods:
        via = m if args.resolution is None else args.resolution
        img, depth = render_modality(state, pose, m, via=via, N=args.samples)
        if not np.all(np.isfinite(img)):
            raise FloatingPointError(f"non-finite render for modality {m}")
        name = state.cameras[m].name
        write_xct(out / f"{name}.xct", img)
        write_xct(out / f"{name}_depth.xct", depth)
        export_png(out / f"{name}.png", img)
        print(f"{name}: {img.shape[1]}x{img.shape[0]}x{img.shape[2]} -> {out / (name + '.xct')}")


def cmd_evaluate(args, seed):
    from .io import load_dataset
    from .metrics import alignment_score, format_report, quality_table
    from .trainer import load_state

    state, payload = load_state(args.checkpoint)
    ds = load_dataset(args.data)
    if [c.to_dict() for c in ds.cameras] != [c.to_dict() for c in state.cameras]:
        raise UsageError("dataset cameras do not match the checkpoint")
    quality = quality_table(state, ds, ds.test_views)
    align = alignment_score(state, ds, ds.test_views) if len(ds.cameras) > 1 else {}
    label = f"{payload['meta']['variant']}/{state.config.coords}"
    text = format_report(ds.name, label, quality, align, ds.cameras)
    Path(args.report).write_text(text)
    print(text, end="")


def cmd_poses(args, seed):
    from .geometry import pose_error
    from .synth import load_groundtruth
    from .trainer import load_state

    state, payload = load_state(args.checkpoint)
    gt = None
    gt_dir = Path(args.groundtruth) if args.groundtruth else None
    if gt_dir is None and "data" in payload["meta"]:
        gt_dir = Path(payload["meta"]["data"]).parent / "groundtruth"
    if gt_dir is not None and (gt_dir / "groundtruth.json").exists():
        gt = load_groundtruth(gt_dir)
    elif args.groundtruth:
        raise FileNotFoundError(f"no groundtruth.json in {gt_dir}")
    print(f"epoch {state.epoch}, reference {state.cameras[state.reference].name}")
    for m in sorted(state.poses):
        aa, t = state.poses[m].values()
        line = (f"{state.cameras[m].name}: axis_angle [{aa[0]:+.6f} {aa[1]:+.6f} {aa[2]:+.6f}] "
                f"translation [{t[0]:+.6f} {t[1]:+.6f} {t[2]:+.6f}]")
        if gt is not None and m in gt.relative_poses:
            rot, tr = pose_error(state.relative_pose(m), gt.relative_poses[m])
            line += f"  error {rot:.4f} deg, {tr:.5f} ({100 * tr / gt.scene_scale:.3f}% of scene scale)"
        print(line)


COMMANDS = {"generate": cmd_generate, "train": cmd_train, "render": cmd_render,
            "evaluate": cmd_evaluate, "poses": cmd_poses}


def main(argv=None) -> int:
    from .io import FormatError
    from .trainer import NumericalError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
        seed = resolve_seed(args.seed)
        COMMANDS[args.command](args, seed)
        return EXIT_OK
    except UsageError as e:
        print(f"error: {e}".rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, FloatingPointError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, FormatError, json.JSONDecodeError, KeyError) as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
