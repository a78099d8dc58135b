"""Analytic cross-spectral scene oracle.

Emissive spheres, boxes and a background wall carry sampled emission spectra;
each modality integrates them against its channel response curves. A rig of
cameras with known relative poses is moved through forward-facing views to
produce ground-truth datasets and depth maps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import Camera, Pose, compose_pose, pixel_grid, pixel_to_ray, rotation_from_axis_angle
from .io import Dataset, save_dataset, write_xct

WAVELENGTHS = np.linspace(400.0, 1100.0, 64)
N_TEST_VIEWS = 5


def gaussian_curve(center: float, width: float, height: float = 1.0, grid=WAVELENGTHS) -> np.ndarray:
    return height * np.exp(-0.5 * ((grid - center) / width) ** 2)


def box_curve(lo: float, hi: float, grid=WAVELENGTHS) -> np.ndarray:
    return ((grid >= lo) & (grid <= hi)).astype(np.float64)


@dataclass
class SpectralMaterial:
    spectrum: np.ndarray
    gloss_weight: float = 0.0
    gloss_exponent: float = 1.0
    # optional smooth intensity pattern 1 + a sin(f x) sin(f y) over world x, y
    pattern_amplitude: float = 0.0
    pattern_frequency: float = 0.0

    def __post_init__(self):
        self.spectrum = np.asarray(self.spectrum, dtype=np.float64)
        if np.any(self.spectrum < 0):
            raise ValueError("spectrum values must be non-negative")

    @classmethod
    def from_peaks(cls, base: float, peaks=(), **kw) -> "SpectralMaterial":
        s = np.full_like(WAVELENGTHS, base)
        for c, w, h in peaks:
            s = s + gaussian_curve(c, w, h)
        return cls(s, **kw)

    def to_dict(self) -> dict:
        return {"spectrum": self.spectrum.tolist(), "gloss_weight": self.gloss_weight,
                "gloss_exponent": self.gloss_exponent, "pattern_amplitude": self.pattern_amplitude,
                "pattern_frequency": self.pattern_frequency}

    @classmethod
    def from_dict(cls, d: dict) -> "SpectralMaterial":
        return cls(np.array(d["spectrum"]), d.get("gloss_weight", 0.0), d.get("gloss_exponent", 1.0),
                   d.get("pattern_amplitude", 0.0), d.get("pattern_frequency", 0.0))


@dataclass
class ModalityResponse:
    curves: np.ndarray  # (C, K)

    def __post_init__(self):
        self.curves = np.atleast_2d(np.asarray(self.curves, dtype=np.float64))
        if np.any(self.curves < 0) or np.any(self.curves.max(axis=1) <= 0):
            raise ValueError("response curves must be non-negative with a positive sample")

    @property
    def channels(self) -> int:
        return self.curves.shape[0]

    def integrate(self, spectrum: np.ndarray) -> np.ndarray:
        """Normalized inner product: mean over the wavelength grid of spectrum x curve."""
        return self.curves @ np.asarray(spectrum, dtype=np.float64) / self.curves.shape[1]


@dataclass
class Sphere:
    center: tuple
    radius: float
    material: SpectralMaterial


@dataclass
class Box:
    lo: tuple
    hi: tuple
    material: SpectralMaterial


@dataclass
class Wall:
    """Infinite plane z = ``z`` facing +z."""

    z: float
    material: SpectralMaterial


@dataclass
class RigCamera:
    camera: Camera
    response: ModalityResponse
    relative_axis_angle: tuple = (0.0, 0.0, 0.0)  # radians
    relative_translation: tuple = (0.0, 0.0, 0.0)

    def relative_pose(self) -> Pose:
        return Pose(rotation_from_axis_angle(self.relative_axis_angle).astype(np.float32),
                    np.asarray(self.relative_translation, dtype=np.float32))


@dataclass
class SceneSpec:
    primitives: list
    rig: list[RigCamera]
    reference: int = 0
    n_views: int = 10
    jitter_translation: tuple = (0.12, 0.12, 0.03)
    jitter_rotation_deg: tuple = (1.5, 1.5, 0.5)
    near: float = 1.0
    seed: int = 0
    name: str = "synthetic"
    scene_scale: float = 4.0
    supersample: int = 3  # s x s rays per pixel, box filtered like a real sensor

    @property
    def cameras(self) -> list[Camera]:
        return [r.camera for r in self.rig]


# -- intersection -------------------------------------------------------------------
def _hit_sphere(o, d, s: Sphere):
    c = np.asarray(s.center, dtype=np.float64)
    oc = o - c
    b = np.einsum("ij,ij->i", oc, d)
    cc = np.einsum("ij,ij->i", oc, oc) - s.radius**2
    disc = b * b - cc
    t = np.full(len(o), np.inf)
    ok = disc >= 0
    sq = np.sqrt(np.where(ok, disc, 0.0))
    t0, t1 = -b - sq, -b + sq
    near = np.where(t0 > 1e-9, t0, t1)
    valid = ok & (near > 1e-9)
    t[valid] = near[valid]
    return t


def _sphere_normal(p, s: Sphere):
    n = p - np.asarray(s.center, dtype=np.float64)
    return n / np.linalg.norm(n, axis=-1, keepdims=True)


def _hit_box(o, d, b: Box):
    lo, hi = np.asarray(b.lo, dtype=np.float64), np.asarray(b.hi, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / d
        t1 = (lo - o) * inv
        t2 = (hi - o) * inv
    tmin = np.nanmax(np.minimum(t1, t2), axis=1)
    tmax = np.nanmin(np.maximum(t1, t2), axis=1)
    t = np.full(len(o), np.inf)
    valid = (tmax >= tmin) & (tmax > 1e-9)
    tt = np.where(tmin > 1e-9, tmin, tmax)
    t[valid] = tt[valid]
    return t


def _box_normal(p, b: Box):
    lo, hi = np.asarray(b.lo, dtype=np.float64), np.asarray(b.hi, dtype=np.float64)
    c, h = (lo + hi) / 2, (hi - lo) / 2
    q = (p - c) / h
    axis = np.argmax(np.abs(q), axis=1)
    n = np.zeros_like(p)
    n[np.arange(len(p)), axis] = np.sign(q[np.arange(len(p)), axis])
    return n


def _hit_wall(o, d, w: Wall):
    t = np.full(len(o), np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        tt = (w.z - o[:, 2]) / d[:, 2]
    valid = (d[:, 2] < 0) & (tt > 1e-9)
    t[valid] = tt[valid]
    return t


def intersect(primitives, o: np.ndarray, d: np.ndarray):
    """Nearest hit per ray: (t, primitive index or -1). ``d`` must be unit length."""
    best = np.full(len(o), np.inf)
    which = np.full(len(o), -1)
    for k, p in enumerate(primitives):
        if isinstance(p, Sphere):
            t = _hit_sphere(o, d, p)
        elif isinstance(p, Box):
            t = _hit_box(o, d, p)
        elif isinstance(p, Wall):
            t = _hit_wall(o, d, p)
        else:
            raise TypeError(f"unknown primitive {type(p).__name__}")
        closer = t < best
        best[closer] = t[closer]
        which[closer] = k
    return best, which


def _normal(p, prim):
    if isinstance(prim, Sphere):
        return _sphere_normal(p, prim)
    if isinstance(prim, Box):
        return _box_normal(p, prim)
    return np.tile([0.0, 0.0, 1.0], (len(p), 1))


def shade(prim, response: ModalityResponse, points: np.ndarray, view: np.ndarray) -> np.ndarray:
    """Channel values (n, C) of a primitive seen along unit directions ``view``."""
    m = prim.material
    base = response.integrate(m.spectrum)
    factor = np.ones(len(points))
    if m.gloss_weight:
        n = _normal(points, prim)
        cosv = np.clip(-np.einsum("ij,ij->i", n, view), 0.0, 1.0)
        factor = factor * ((1.0 - m.gloss_weight) + m.gloss_weight * cosv**m.gloss_exponent)
    if m.pattern_amplitude:
        f = m.pattern_frequency
        factor = factor * (1.0 + m.pattern_amplitude * np.sin(f * points[:, 0]) * np.sin(f * points[:, 1]))
    return factor[:, None] * base[None, :]


def trace_rays(primitives, response: ModalityResponse, o: np.ndarray, d: np.ndarray):
    """Channel values (R, C) and hit distances (R,) for unit-direction rays."""
    t, which = intersect(primitives, o, d)
    out = np.zeros((len(o), response.channels))
    for k, prim in enumerate(primitives):
        sel = which == k
        if np.any(sel):
            p = o[sel] + t[sel, None] * d[sel]
            out[sel] = shade(prim, response, p, d[sel])
    return out, t


def raytrace(scene: SceneSpec, cam: Camera, pose: Pose, modality: int | ModalityResponse):
    """Render (H, W, C) channel values and (H, W) ray-distance depth.

    Channel values average ``scene.supersample``^2 stratified rays over each
    pixel's footprint; depth comes from the pixel-centre ray.
    """
    response = scene.rig[modality].response if isinstance(modality, int) else modality
    centres = pixel_grid(cam).reshape(-1, 2)
    s = max(int(scene.supersample), 1)
    offsets = (np.arange(s) + 0.5) / s - 0.5
    acc = 0.0
    for dv in offsets:
        for du in offsets:
            vals, _ = _trace_pixels(scene, cam, pose, response, centres + np.array([du, dv]))
            acc = acc + vals
    _, t = _trace_pixels(scene, cam, pose, response, centres)
    return (acc / (s * s)).reshape(cam.height, cam.width, -1), t.reshape(cam.height, cam.width)


def _trace_pixels(scene, cam, pose, response, pix):
    o, d = pixel_to_ray(cam, pose.numpy(), pix)
    o = o.data.astype(np.float64)
    d = d.data.astype(np.float64)
    d = d / np.linalg.norm(d, axis=-1, keepdims=True)
    return trace_rays(scene.primitives, response, o, d)


# -- datasets ----------------------------------------------------------------------
def _primitive_max_z(p) -> float:
    if isinstance(p, Sphere):
        return p.center[2] + p.radius
    if isinstance(p, Box):
        return p.hi[2]
    return p.z


def check_scene(scene: SceneSpec, poses: list[Pose]) -> None:
    for p in scene.primitives:
        if _primitive_max_z(p) >= -scene.near:
            raise ValueError(f"scene content reaches z={_primitive_max_z(p):.3f}, in front of the near plane z={-scene.near}")
    for pose in poses:
        if float(pose.numpy().translation[2]) <= -scene.near:
            raise ValueError("camera centre lies beyond the near plane")


def sample_reference_poses(scene: SceneSpec) -> list[Pose]:
    rng = np.random.default_rng(scene.seed)
    jt = np.asarray(scene.jitter_translation)
    jr = np.radians(np.asarray(scene.jitter_rotation_deg))
    poses = []
    for _ in range(scene.n_views):
        t = rng.uniform(-1, 1, 3) * jt
        w = rng.uniform(-1, 1, 3) * jr
        poses.append(Pose(rotation_from_axis_angle(w).astype(np.float32), t.astype(np.float32)))
    return poses


def modality_pose(scene: SceneSpec, m: int, ref: Pose) -> Pose:
    if m == scene.reference:
        return ref
    return compose_pose(scene.rig[m].relative_pose(), ref).numpy()


@dataclass
class GroundTruth:
    relative_poses: dict  # modality -> Pose (identity for the reference)
    depths: dict  # modality -> (V, H, W)
    scene_scale: float
    scene: SceneSpec | None = None


def render_views(scene: SceneSpec):
    """Raw images and depths for every view, camera and modality."""
    if scene.n_views < N_TEST_VIEWS + 1:
        raise ValueError(f"need at least {N_TEST_VIEWS + 1} views")
    refs = sample_reference_poses(scene)
    all_poses = [modality_pose(scene, m, r) for r in refs for m in range(len(scene.rig))]
    check_scene(scene, all_poses)
    raw, depth = {}, {}
    for m, rc in enumerate(scene.rig):
        imgs, deps = [], []
        for r in refs:
            img, dep = raytrace(scene, rc.camera, modality_pose(scene, m, r), m)
            imgs.append(img)
            deps.append(dep)
        raw[m] = np.stack(imgs).astype(np.float32)
        depth[m] = np.stack(deps).astype(np.float32)
    return refs, raw, depth


def build_dataset(scene: SceneSpec) -> tuple[Dataset, GroundTruth, dict]:
    """In-memory dataset, its ground truth and the raw (un-normalized) images."""
    from .trainer import normalize_dataset

    refs, raw, depth = render_views(scene)
    n_train = scene.n_views - N_TEST_VIEWS
    train = list(range(n_train))
    test = list(range(n_train, scene.n_views))
    images, divisors = normalize_dataset(raw, train)
    ref_mats = np.stack([r.matrix()[:3, :4] for r in refs]).astype(np.float32)
    ds = Dataset(scene.name, scene.cameras, scene.reference, ref_mats, images, train, test, divisors)
    rel = {m: (rc.relative_pose() if m != scene.reference else Pose.identity()) for m, rc in enumerate(scene.rig)}
    gt = GroundTruth(rel, depth, scene.scene_scale, scene)
    return ds, gt, raw


def generate_dataset(scene: SceneSpec, out) -> tuple[Path, Path]:
    """Write ``out/dataset`` (training payload) and ``out/groundtruth`` (sidecar)."""
    out = Path(out)
    ds, gt, raw = build_dataset(scene)
    data_dir = save_dataset(ds, out / "dataset", raw_images=raw)
    gt_dir = out / "groundtruth"
    save_groundtruth(gt, gt_dir, scene)
    return data_dir, gt_dir


def save_groundtruth(gt: GroundTruth, gt_dir, scene: SceneSpec) -> None:
    gt_dir = Path(gt_dir)
    for m, rc in enumerate(scene.rig):
        d = gt_dir / "depth" / rc.camera.name
        d.mkdir(parents=True, exist_ok=True)
        for i, dep in enumerate(gt.depths[m]):
            write_xct(d / f"view_{i:03d}.xct", np.where(np.isfinite(dep), dep, -1.0))
    doc = {
        "scene_scale": gt.scene_scale,
        "relative_poses": {str(m): p.matrix()[:3, :4].tolist() for m, p in gt.relative_poses.items()},
        "scene": scene_to_dict(scene),
    }
    (gt_dir / "groundtruth.json").write_text(json.dumps(doc, indent=2))


def load_groundtruth(gt_dir) -> GroundTruth:
    from .io import read_xct

    gt_dir = Path(gt_dir)
    doc = json.loads((gt_dir / "groundtruth.json").read_text())
    scene = scene_from_dict(doc["scene"])
    rel = {int(m): Pose.from_matrix(np.vstack([np.array(v), [0, 0, 0, 1]])) for m, v in doc["relative_poses"].items()}
    depths = {}
    for m, rc in enumerate(scene.rig):
        files = sorted((gt_dir / "depth" / rc.camera.name).glob("view_*.xct"))
        depths[m] = np.stack([read_xct(f)[..., 0] for f in files]) if files else None
    return GroundTruth(rel, depths, float(doc["scene_scale"]), scene)


# -- scene (de)serialization ---------------------------------------------------------
def scene_to_dict(scene: SceneSpec) -> dict:
    prims = []
    for p in scene.primitives:
        if isinstance(p, Sphere):
            prims.append({"type": "sphere", "center": list(p.center), "radius": p.radius, "material": p.material.to_dict()})
        elif isinstance(p, Box):
            prims.append({"type": "box", "lo": list(p.lo), "hi": list(p.hi), "material": p.material.to_dict()})
        else:
            prims.append({"type": "wall", "z": p.z, "material": p.material.to_dict()})
    rig = [{"camera": r.camera.to_dict(), "response": r.response.curves.tolist(),
            "relative_axis_angle": list(r.relative_axis_angle), "relative_translation": list(r.relative_translation)}
           for r in scene.rig]
    return {"name": scene.name, "primitives": prims, "rig": rig, "reference": scene.reference,
            "n_views": scene.n_views, "jitter_translation": list(scene.jitter_translation),
            "jitter_rotation_deg": list(scene.jitter_rotation_deg), "near": scene.near, "seed": scene.seed,
            "scene_scale": scene.scene_scale, "supersample": scene.supersample}


def scene_from_dict(d: dict) -> SceneSpec:
    prims = []
    for p in d["primitives"]:
        mat = SpectralMaterial.from_dict(p["material"])
        if p["type"] == "sphere":
            prims.append(Sphere(tuple(p["center"]), float(p["radius"]), mat))
        elif p["type"] == "box":
            prims.append(Box(tuple(p["lo"]), tuple(p["hi"]), mat))
        elif p["type"] == "wall":
            prims.append(Wall(float(p["z"]), mat))
        else:
            raise ValueError(f"unknown primitive type {p['type']!r}")
    rig = [RigCamera(Camera.from_dict(r["camera"]), ModalityResponse(np.array(r["response"])),
                     tuple(r.get("relative_axis_angle", (0, 0, 0))), tuple(r.get("relative_translation", (0, 0, 0))))
           for r in d["rig"]]
    return SceneSpec(prims, rig, int(d.get("reference", 0)), int(d.get("n_views", 10)),
                     tuple(d.get("jitter_translation", (0.12, 0.12, 0.03))),
                     tuple(d.get("jitter_rotation_deg", (1.5, 1.5, 0.5))), float(d.get("near", 1.0)),
                     int(d.get("seed", 0)), d.get("name", "synthetic"), float(d.get("scene_scale", 4.0)),
                     int(d.get("supersample", 3)))


# -- default rig and scene -------------------------------------------------------------
def rgb_response() -> ModalityResponse:
    return ModalityResponse(np.stack([gaussian_curve(c, 35.0) for c in (610.0, 545.0, 465.0)]))


def ms_response() -> ModalityResponse:
    return ModalityResponse(np.stack([gaussian_curve(c, 12.0) for c in np.linspace(430.0, 690.0, 10)]))


def ir_response() -> ModalityResponse:
    return ModalityResponse(gaussian_curve(850.0, 40.0)[None, :])


def default_rig(scale: float = 1.0) -> list[RigCamera]:
    """RGB (reference, mid FoV), MS (10 channels, narrowest FoV), IR (1 channel, widest FoV).

    ``scale`` multiplies every image size while keeping each field of view.
    """
    def cam(mid, name, w, h, ratio, ch, off):
        w, h = int(round(w * scale)), int(round(h * scale))
        f = ratio * w
        return Camera(mid, f, f, w / 2.0, h / 2.0, w, h, ch, off, name)

    deg = np.radians
    return [
        RigCamera(cam(0, "rgb", 160, 120, 0.9, 3, 0), rgb_response()),
        RigCamera(cam(1, "ms", 64, 48, 1.3, 10, 3), ms_response(),
                  tuple(deg([1.0, -2.0, 0.5])), (0.14, 0.05, 0.0)),
        RigCamera(cam(2, "ir", 96, 72, 0.6, 1, 13), ir_response(),
                  tuple(deg([-1.5, 1.5, -0.8])), (-0.12, 0.08, 0.01)),
    ]


def default_materials() -> dict[str, SpectralMaterial]:
    M = SpectralMaterial.from_peaks
    return {
        "wall": M(0.25, [(560.0, 120.0, 0.25), (900.0, 80.0, 0.35)], pattern_amplitude=0.35, pattern_frequency=4.0),
        "red": M(0.05, [(620.0, 30.0, 0.9), (850.0, 60.0, 0.15)]),
        "blue": M(0.05, [(460.0, 25.0, 0.8), (860.0, 50.0, 0.9)]),
        "green": M(0.08, [(530.0, 30.0, 0.8), (780.0, 60.0, 0.5)]),
        "gold": M(0.05, [(585.0, 35.0, 0.9), (500.0, 40.0, 0.3)], gloss_weight=0.35, gloss_exponent=3.0),
    }


def default_scene(n_views: int = 10, seed: int = 0, image_scale: float = 1.0,
                  jitter_translation: tuple = (0.12, 0.12, 0.03), jitter_rotation_deg: tuple = (1.5, 1.5, 0.5)) -> SceneSpec:
    mats = default_materials()
    prims = [
        Wall(-4.0, mats["wall"]),
        Sphere((-0.55, 0.25, -2.2), 0.35, mats["red"]),
        Sphere((0.6, -0.2, -2.8), 0.45, mats["blue"]),
        Sphere((0.1, -0.35, -1.9), 0.25, mats["gold"]),
        Box((-0.9, -0.9, -3.3), (-0.2, -0.35, -2.9), mats["green"]),
    ]
    return SceneSpec(prims, default_rig(image_scale), n_views=n_views, seed=seed, name="default",
                     jitter_translation=tuple(jitter_translation), jitter_rotation_deg=tuple(jitter_rotation_deg))


def single_sphere_scene(n_views: int = 6, seed: int = 0, image_scale: float = 0.25) -> SceneSpec:
    mats = default_materials()
    prims = [Wall(-4.0, mats["wall"]), Sphere((0.0, 0.0, -2.5), 0.6, mats["red"])]
    return SceneSpec(prims, default_rig(image_scale), n_views=n_views, seed=seed, name="one-sphere")
