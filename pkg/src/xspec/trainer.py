"""Optimization loops: interleaved per-modality ray batches, squared-error
loss, learned relative poses for non-reference sensors, grid regularization
and the MLP-to-grid pose bootstrap."""

from __future__ import annotations

import logging
import time
import warnings
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Callable

import numpy as np

from . import autodiff as ad
from .autodiff import AdamState, Tensor
from .coords import NdcParams, params_for
from .fields import EncodingConfig, GridField, MlpField
from .geometry import Pose, PoseParam, compose_pose, pixel_to_ray, se3_exp
from .io import Dataset
from .renderer import render_image, render_rays

log = logging.getLogger(__name__)


class NumericalError(RuntimeError):
    pass


@dataclass
class TrainConfig:
    variant: str = "mlp"  # "mlp" | "grid"
    coords: str = "nxdc"  # "nxdc" | "ndc"
    epochs: int = 5000
    batch_rays: int = 1024
    samples_per_ray: int = 128
    jitter: bool = True
    seed: int = 0
    near: float = 1.0
    learning_rate: float = 5e-4
    final_learning_rate: float = 5e-5
    pose_learning_rate: float = 1e-3
    final_pose_learning_rate: float | None = None  # None keeps the pose lr constant
    bootstrap_epochs: int = 250
    # grid variant
    grid_learning_rate: float = 0.1
    decoder_learning_rate: float = 1e-3
    tv_weight: float = 1e-5
    tv_every: int = 1
    color_threshold: float = 1e-4  # grid only: skip colour queries below this compositing weight
    # field shapes
    mlp_width: int = 128
    mlp_depth: int = 8
    L_pos: int = 10
    L_dir: int = 4
    grid_planes: int = 128
    grid_height: int = 128
    grid_width: int = 128
    grid_features: int = 12
    grid_hidden: int = 128
    grid_L_pos: int = 10
    # overrides applied to the MLP run that bootstraps grid poses
    bootstrap_batch_rays: int | None = None
    bootstrap_samples_per_ray: int | None = None

    def __post_init__(self):
        if self.epochs < 0 or self.batch_rays <= 0:
            raise ValueError("epochs must be >= 0 and batch_rays > 0")
        if self.variant not in ("mlp", "grid"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.coords not in ("nxdc", "ndc"):
            raise ValueError(f"unknown coordinate mode {self.coords!r}")
        if self.tv_weight < 0:
            raise ValueError("tv_weight must be non-negative")

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrainState:
    field: object
    poses: dict  # modality -> PoseParam, non-reference modalities only
    field_opts: list  # [(params, AdamState, base_lr)]
    pose_opts: dict  # modality -> AdamState
    config: TrainConfig
    cameras: list
    reference: int
    epoch: int = 0
    step: int = 0
    frozen_poses: bool = False
    loss_history: dict = field(default_factory=dict)  # modality -> per-epoch mean loss
    pose_log: list = field(default_factory=list)  # (epoch, modality, axis_angle(3), translation(3))
    wall_time: float = 0.0
    bootstrap_epochs: int = 0

    def relative_pose(self, m: int) -> Pose:
        if m == self.reference or m not in self.poses:
            return Pose.identity()
        with ad.no_grad():
            return se3_exp(self.poses[m]).numpy()

    def coords_for(self, m: int) -> NdcParams:
        return params_for(self.config.coords, self.cameras, self.cameras[m], self.config.near)


def make_field(config: TrainConfig, n_channels: int, variant: str | None = None):
    variant = variant or config.variant
    if variant == "mlp":
        return MlpField(n_channels, width=config.mlp_width, depth=config.mlp_depth,
                        encoding=EncodingConfig(config.L_pos, config.L_dir, True), seed=config.seed)
    return GridField(n_channels, config.grid_planes, config.grid_height, config.grid_width,
                     features=config.grid_features, hidden=config.grid_hidden,
                     encoding=EncodingConfig(config.grid_L_pos, config.L_dir, True), seed=config.seed)


def _field_optimizers(fld, config: TrainConfig) -> list:
    if isinstance(fld, GridField):
        groups = [(fld.grid_parameters(), config.grid_learning_rate), (fld.mlp_parameters(), config.decoder_learning_rate)]
    else:
        groups = [(fld.parameters(), config.learning_rate)]
    return [(ps, AdamState.for_params(ps, learning_rate=lr), lr) for ps, lr in groups]


def init_state(dataset: Dataset, config: TrainConfig, variant: str | None = None) -> TrainState:
    fld = make_field(config, dataset.n_channels, variant)
    poses = {m: PoseParam() for m in dataset.modalities() if m != dataset.reference}
    pose_opts = {m: AdamState.for_params(p.parameters(), learning_rate=config.pose_learning_rate) for m, p in poses.items()}
    st = TrainState(fld, poses, _field_optimizers(fld, config), pose_opts, config, list(dataset.cameras),
                    dataset.reference, loss_history={m: [] for m in dataset.modalities()})
    _log_poses(st)
    return st


# -- losses ---------------------------------------------------------------------
def photometric_loss(pred, target) -> Tensor:
    """Total squared error over rays and channels (a sum, not a mean)."""
    pred = ad.as_tensor(pred)
    target = np.asarray(target)
    if pred.shape != target.shape:
        raise ValueError(f"prediction shape {pred.shape} does not match target {target.shape}")
    diff = pred - target
    return (diff * diff).sum()


def tv_loss(grid) -> Tensor:
    """Sum over axes of the mean (over positions) squared forward difference,
    summed over channels, for a (D, H, W, C) grid."""
    grid = ad.as_tensor(grid)
    if grid.ndim != 4 or min(grid.shape[:3]) < 2:
        raise ValueError("tv_loss needs a (D, H, W, C) grid with at least two nodes per axis")
    total = None
    for axis in range(3):
        n = grid.shape[axis]
        hi = [slice(None)] * 4
        lo = [slice(None)] * 4
        hi[axis] = slice(1, n)
        lo[axis] = slice(0, n - 1)
        diff = grid[tuple(hi)] - grid[tuple(lo)]
        positions = diff.size // grid.shape[3]
        term = (diff * diff).sum() * (1.0 / positions)
        total = term if total is None else total + term
    return total


def normalize_dataset(raw: dict, train_views) -> tuple[dict, dict]:
    """Clip every modality at its 99th-percentile training intensity and divide by it."""
    images, divisors = {}, {}
    for m, stack in raw.items():
        stack = np.asarray(stack, dtype=np.float32)
        p99 = float(np.percentile(stack[list(train_views)].astype(np.float64), 99))
        if p99 <= 0:
            warnings.warn(f"modality {m} is all zero; using divisor 1")
            p99 = 1.0
        divisors[m] = p99
        images[m] = (np.clip(stack, 0.0, p99) / p99).astype(np.float32)
    return images, divisors


# -- batches and steps ------------------------------------------------------------
def sample_ray_batch(dataset: Dataset, m: int, batch_rays: int, rng: np.random.Generator, view: int | None = None):
    """(pixel centres (B, 2), camera, view index, targets (B, C_m)) from one training image."""
    views = dataset.train_views
    if not views or m not in dataset.images:
        raise ValueError(f"no training views for modality {m}")
    if view is None:
        view = int(views[rng.integers(len(views))])
    cam = dataset.camera(m)
    n_pix = cam.width * cam.height
    flat = rng.choice(n_pix, size=batch_rays, replace=batch_rays > n_pix)
    rows, cols = np.divmod(flat, cam.width)
    pixels = np.stack([cols + 0.5, rows + 0.5], axis=-1)
    targets = dataset.images[m][view][rows, cols]
    return pixels, cam, view, targets


def modality_pose(state: TrainState, dataset: Dataset, m: int, view: int, differentiable: bool = False) -> Pose:
    ref = dataset.ref_pose(view)
    if m == state.reference or m not in state.poses:
        return ref
    if differentiable and not state.frozen_poses:
        return compose_pose(se3_exp(state.poses[m]), ref)
    return compose_pose(state.relative_pose(m), ref).numpy()


def _lr_factor(config: TrainConfig, epoch: int, epochs: int) -> float:
    if epochs <= 0 or config.learning_rate <= 0:
        return 1.0
    return (config.final_learning_rate / config.learning_rate) ** (epoch / epochs)


def pose_lr(config: TrainConfig, epoch: int, epochs: int) -> float:
    """Pose step size, constant or decaying exponentially to ``final_pose_learning_rate``."""
    if config.final_pose_learning_rate is None or epochs <= 0 or config.pose_learning_rate <= 0:
        return config.pose_learning_rate
    return config.pose_learning_rate * (config.final_pose_learning_rate / config.pose_learning_rate) ** (epoch / epochs)


def train_step(state: TrainState, dataset: Dataset, m: int, rng: np.random.Generator, view: int | None = None,
               config: TrainConfig | None = None, lr_factor: float = 1.0, pose_rate: float | None = None) -> float:
    cfg = config or state.config
    pixels, cam, view, targets = sample_ray_batch(dataset, m, cfg.batch_rays, rng, view)
    learn_pose = m in state.poses and not state.frozen_poses
    pose = modality_pose(state, dataset, m, view, differentiable=learn_pose)
    o, d = pixel_to_ray(cam, pose, pixels)
    res = render_rays(state.field, o, d, state.coords_for(m), cfg.samples_per_ray, jitter=cfg.jitter, rng=rng,
                      channel_slice=cam.channel_slice, color_threshold=_color_threshold(state))
    loss = photometric_loss(res.channels, targets)
    if isinstance(state.field, GridField) and cfg.tv_weight > 0 and state.step % max(cfg.tv_every, 1) == 0:
        dens, feat = _grid_views(state.field)
        loss = loss + cfg.tv_weight * (tv_loss(dens) + tv_loss(feat))
    value = float(loss.data)
    if not np.isfinite(value):
        raise NumericalError(f"non-finite loss at step {state.step} (modality {m})")
    params = [p for ps, _, _ in state.field_opts for p in ps]
    if learn_pose:
        params += state.poses[m].parameters()
    for p in params:
        p.zero_grad()
    try:
        loss.backward()
    except ad.GradientError as e:
        raise NumericalError(str(e)) from e
    for ps, opt, base_lr in state.field_opts:
        for p in ps:
            if p.grad is None:
                p.grad = np.zeros_like(p.data)
        ad.adam_step(ps, opt, lr=base_lr * lr_factor)
    if learn_pose:
        ad.adam_step(state.poses[m].parameters(), state.pose_opts[m], lr=pose_rate)
    state.step += 1
    return value


def _grid_views(fld: GridField):
    d, h, w = fld.shape
    return fld.density_grid.reshape(d, h, w, 1), fld.feature_grid.reshape(d, h, w, fld.features)


def _log_poses(state: TrainState) -> None:
    for m in sorted(state.poses):
        aa, t = state.poses[m].values()
        state.pose_log.append((state.epoch, m, *map(float, aa), *map(float, t)))


def epoch_schedule(dataset: Dataset, rng: np.random.Generator) -> list[tuple[int, int]]:
    """(modality, view) steps for one epoch: every training image once, modalities round-robin."""
    mods = dataset.modalities()
    orders = {m: list(rng.permutation(dataset.train_views)) for m in mods}
    steps = []
    for k in range(max(len(o) for o in orders.values())):
        for m in mods:
            if k < len(orders[m]):
                steps.append((m, int(orders[m][k])))
    return steps


def run_epochs(state: TrainState, dataset: Dataset, epochs: int, rng: np.random.Generator, config: TrainConfig | None = None,
               callback: Callable | None = None) -> TrainState:
    cfg = config or state.config
    start_epoch = state.epoch
    for e in range(epochs):
        t0 = time.perf_counter()
        factor = _lr_factor(cfg, e, epochs)
        prate = pose_lr(cfg, e, epochs)
        sums: dict[int, list] = {m: [] for m in dataset.modalities()}
        for m, v in epoch_schedule(dataset, rng):
            sums[m].append(train_step(state, dataset, m, rng, view=v, config=cfg, lr_factor=factor,
                                      pose_rate=prate))
        state.epoch = start_epoch + e + 1
        for m, vals in sums.items():
            state.loss_history.setdefault(m, []).append(float(np.mean(vals)) if vals else float("nan"))
        _log_poses(state)
        state.wall_time += time.perf_counter() - t0
        if callback is not None:
            callback(state)
    return state


def bootstrap_config(config: TrainConfig) -> TrainConfig:
    return replace(config, variant="mlp", epochs=config.bootstrap_epochs,
                   batch_rays=config.bootstrap_batch_rays or config.batch_rays,
                   samples_per_ray=config.bootstrap_samples_per_ray or config.samples_per_ray)


def train(dataset: Dataset, config: TrainConfig, callback: Callable | None = None,
          bootstrap_state: TrainState | None = None) -> TrainState:
    """Full schedule. The grid variant first learns poses with an MLP run of
    ``bootstrap_epochs`` (or takes them from ``bootstrap_state``), then
    freezes them and optimizes a fresh grid."""
    rng = np.random.default_rng(config.seed)
    if config.variant == "mlp":
        state = init_state(dataset, config)
        return run_epochs(state, dataset, config.epochs, rng, callback=callback)
    if bootstrap_state is None:
        bcfg = bootstrap_config(config)
        bootstrap_state = init_state(dataset, bcfg)
        if config.epochs > 0:
            run_epochs(bootstrap_state, dataset, bcfg.epochs, rng)
    state = init_state(dataset, config, "grid")
    for m, p in state.poses.items():
        src = bootstrap_state.poses[m]
        p.axis_angle.data[:] = src.axis_angle.data
        p.translation.data[:] = src.translation.data
    state.frozen_poses = True
    state.wall_time = bootstrap_state.wall_time
    state.pose_log = list(bootstrap_state.pose_log)
    state.bootstrap_epochs = bootstrap_state.epoch
    return run_epochs(state, dataset, config.epochs, rng, callback=callback)


# -- rendering helpers ---------------------------------------------------------------
def view_pose(state: TrainState, ref_pose: Pose, m: int) -> Pose:
    """Camera-to-world pose of sensor ``m`` at a rig placement given by ``ref_pose``."""
    if m == state.reference:
        return ref_pose.numpy()
    return compose_pose(state.relative_pose(m), ref_pose).numpy()


def render_modality(state: TrainState, ref_pose: Pose, m: int, via: int | None = None, N: int | None = None):
    """Render modality ``m``'s channels from the viewpoint and intrinsics of sensor ``via``.

    NXDC models warp with the shared parameters; NDC models warp with the
    parameters of the camera casting the rays.
    """
    via = m if via is None else via
    cam_m, cam_v = state.cameras[m], state.cameras[via]
    pose = view_pose(state, ref_pose, via)
    return render_image(state.field, cam_m, pose, state.coords_for(via), N or state.config.samples_per_ray,
                        resolution=cam_v, color_threshold=_color_threshold(state))


def _color_threshold(state: TrainState) -> float:
    return state.config.color_threshold if isinstance(state.field, GridField) else 0.0


# -- checkpoints -----------------------------------------------------------------------
def state_to_payload(state: TrainState, extra: dict | None = None) -> dict:
    arrays = {}
    for i, p in enumerate(state.field.parameters()):
        arrays[f"field/{i}"] = p.data
    for m, pp in state.poses.items():
        arrays[f"pose/{m}/axis_angle"] = pp.axis_angle.data
        arrays[f"pose/{m}/translation"] = pp.translation.data
    opt_meta = []
    for g, (_, opt, base_lr) in enumerate(state.field_opts):
        for j, (m1, m2) in enumerate(zip(opt.first_moment, opt.second_moment)):
            arrays[f"opt/field/{g}/{j}/m"] = m1
            arrays[f"opt/field/{g}/{j}/v"] = m2
        opt_meta.append({"step_count": opt.step_count, "learning_rate": opt.learning_rate, "base_lr": base_lr})
    pose_opt_meta = {}
    for m, opt in state.pose_opts.items():
        for j, (m1, m2) in enumerate(zip(opt.first_moment, opt.second_moment)):
            arrays[f"opt/pose/{m}/{j}/m"] = m1
            arrays[f"opt/pose/{m}/{j}/v"] = m2
        pose_opt_meta[str(m)] = {"step_count": opt.step_count, "learning_rate": opt.learning_rate}
    meta = {
        "variant": state.field.kind,
        "field": state.field.config(),
        "config": state.config.to_dict(),
        "cameras": [c.to_dict() for c in state.cameras],
        "reference": state.reference,
        "epoch": state.epoch,
        "step": state.step,
        "frozen_poses": state.frozen_poses,
        "bootstrap_epochs": state.bootstrap_epochs,
        "wall_time": state.wall_time,
        "loss_history": {str(m): v for m, v in state.loss_history.items()},
        "pose_log": [list(r) for r in state.pose_log],
        "field_optimizers": opt_meta,
        "pose_optimizers": pose_opt_meta,
    }
    meta.update(extra or {})
    return {"arrays": arrays, "meta": meta}


def state_from_payload(payload: dict) -> TrainState:
    from .fields import build_field
    from .geometry import Camera

    meta, arrays = payload["meta"], payload["arrays"]
    config = TrainConfig.from_dict(meta["config"])
    fld = build_field(meta["field"], seed=config.seed)
    params = fld.parameters()
    for i, p in enumerate(params):
        a = arrays[f"field/{i}"]
        if a.shape != p.data.shape:
            raise ValueError(f"checkpoint tensor field/{i} has shape {a.shape}, expected {p.data.shape}")
        p.data = a.astype(p.data.dtype)
    cams = [Camera.from_dict(c) for c in meta["cameras"]]
    poses, pose_opts = {}, {}
    for key, om in meta["pose_optimizers"].items():
        m = int(key)
        pp = PoseParam(arrays[f"pose/{m}/axis_angle"], arrays[f"pose/{m}/translation"])
        poses[m] = pp
        opt = AdamState(learning_rate=om["learning_rate"], step_count=om["step_count"])
        opt.first_moment = [arrays[f"opt/pose/{m}/{j}/m"] for j in range(2)]
        opt.second_moment = [arrays[f"opt/pose/{m}/{j}/v"] for j in range(2)]
        pose_opts[m] = opt
    field_opts = []
    groups = _field_optimizers(fld, config)
    for g, ((ps, _, _), om) in enumerate(zip(groups, meta["field_optimizers"])):
        opt = AdamState(learning_rate=om["learning_rate"], step_count=om["step_count"])
        opt.first_moment = [arrays[f"opt/field/{g}/{j}/m"] for j in range(len(ps))]
        opt.second_moment = [arrays[f"opt/field/{g}/{j}/v"] for j in range(len(ps))]
        field_opts.append((ps, opt, om["base_lr"]))
    return TrainState(fld, poses, field_opts, pose_opts, config, cams, int(meta["reference"]),
                      epoch=int(meta["epoch"]), step=int(meta["step"]), frozen_poses=bool(meta["frozen_poses"]),
                      loss_history={int(k): list(v) for k, v in meta["loss_history"].items()},
                      pose_log=[tuple(r) for r in meta["pose_log"]], wall_time=float(meta["wall_time"]),
                      bootstrap_epochs=int(meta.get("bootstrap_epochs", 0)))


def save_state(path, state: TrainState, extra: dict | None = None) -> None:
    from .io import save_checkpoint

    save_checkpoint(path, state_to_payload(state, extra))


def load_state(path) -> tuple[TrainState, dict]:
    from .io import load_checkpoint

    payload = load_checkpoint(path)
    return state_from_payload(payload), payload


def write_pose_log(path, state: TrainState) -> None:
    """One line per (epoch, modality): epoch, modality, axis-angle xyz, translation xyz."""
    with open(path, "w") as f:
        f.write("# epoch modality ax ay az tx ty tz\n")
        for row in state.pose_log:
            e, m, *vals = row
            f.write(f"{int(e)} {int(m)} " + " ".join(f"{v:.8e}" for v in vals) + "\n")


def read_pose_log(path) -> list[tuple]:
    rows = []
    for line in Path(path).read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        rows.append((int(parts[0]), int(parts[1]), *map(float, parts[2:])))
    return rows
