"""File formats: XCT1 tensors, the dataset manifest, checkpoints and PNG previews.

XCT1 layout (all little-endian)::

    bytes 0..3    b"XCT1"
    bytes 4..15   uint32 H, W, C
    bytes 16..    float32 payload, row-major, channel fastest

The dataset manifest is a JSON document (``manifest.json``); its schema is
``MANIFEST_SCHEMA`` below and is checked on load.
"""

from __future__ import annotations

import json
import os
import struct
import zipfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .colormaps import MAGMA, VIRIDIS
from .geometry import Camera, Pose, check_channel_partition

XCT_MAGIC = b"XCT1"
CHECKPOINT_VERSION = 1


class FormatError(ValueError):
    pass


# -- XCT1 ---------------------------------------------------------------------
def write_xct(path, tensor) -> None:
    a = np.asarray(tensor)
    if a.ndim == 2:
        a = a[..., None]
    if a.ndim != 3:
        raise FormatError(f"XCT tensors are H x W x C, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise FormatError("refusing to write non-finite values")
    h, w, c = a.shape
    with open(path, "wb") as f:
        f.write(XCT_MAGIC)
        f.write(struct.pack("<III", h, w, c))
        f.write(np.ascontiguousarray(a, dtype="<f4").tobytes())


def read_xct(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < 16:
        raise FormatError(f"{path}: truncated header ({len(raw)} bytes)")
    magic = raw[:4]
    if magic != XCT_MAGIC:
        if magic[:3] == b"XCT":
            raise FormatError(f"{path}: unsupported XCT version {magic!r}")
        raise FormatError(f"{path}: bad magic {magic!r}")
    h, w, c = struct.unpack("<III", raw[4:16])
    expect = 16 + 4 * h * w * c
    if len(raw) != expect:
        raise FormatError(f"{path}: size {len(raw)} does not match header {h}x{w}x{c} ({expect} bytes)")
    return np.frombuffer(raw, dtype="<f4", offset=16).astype(np.float32).reshape(h, w, c)


# -- dataset --------------------------------------------------------------------
@dataclass
class Dataset:
    name: str
    cameras: list[Camera]
    reference: int
    ref_poses: np.ndarray  # (V, 3, 4) camera-to-world of the reference modality
    images: dict[int, np.ndarray]  # modality -> (V, H, W, C), normalized to [0, 1]
    train_views: list[int]
    test_views: list[int]
    divisors: dict[int, float] = field(default_factory=dict)
    root: Path | None = None

    @property
    def n_views(self) -> int:
        return len(self.ref_poses)

    @property
    def n_channels(self) -> int:
        return sum(c.channels for c in self.cameras)

    def camera(self, m: int) -> Camera:
        return self.cameras[m]

    def ref_pose(self, i: int) -> Pose:
        return Pose.from_matrix(self.ref_poses[i])

    def modalities(self) -> list[int]:
        return [c.modality_id for c in self.cameras]


MANIFEST_SCHEMA = {
    "type": "object",
    "required": ["format", "scene", "reference_modality", "cameras", "views", "split", "normalization"],
    "properties": {
        "format": {"const": "xspec-dataset-1"},
        "scene": {"type": "string"},
        "reference_modality": {"type": "integer"},
        "cameras": {
            "type": "array", "minItems": 1,
            "items": {
                "type": "object",
                "required": ["modality_id", "name", "fx", "fy", "cx", "cy", "width", "height", "channels", "channel_offset"],
            },
        },
        "views": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "reference_pose", "files"],
                "properties": {
                    "reference_pose": {"type": "array", "minItems": 3, "maxItems": 3},
                    "files": {"type": "object"},
                },
            },
        },
        "split": {"type": "object", "required": ["train", "test"]},
        "normalization": {"type": "object"},
    },
}


def save_dataset(ds: Dataset, root, raw_images: dict[int, np.ndarray] | None = None) -> Path:
    """Write a dataset directory. ``raw_images`` (pre-normalization) are stored
    when given, otherwise the normalized images are written with divisor 1."""
    root = Path(root)
    views = []
    for m, cam in enumerate(ds.cameras):
        (root / "images" / cam.name).mkdir(parents=True, exist_ok=True)
    for i in range(ds.n_views):
        files = {}
        for cam in ds.cameras:
            rel = f"images/{cam.name}/view_{i:03d}.xct"
            src = raw_images[cam.modality_id][i] if raw_images is not None else ds.images[cam.modality_id][i]
            write_xct(root / rel, src)
            files[str(cam.modality_id)] = rel
        views.append({"id": i, "reference_pose": np.asarray(ds.ref_poses[i], dtype=float).round(9).tolist(), "files": files})
    divisors = ds.divisors if raw_images is not None else {c.modality_id: 1.0 for c in ds.cameras}
    doc = {
        "format": "xspec-dataset-1",
        "scene": ds.name,
        "reference_modality": ds.reference,
        "cameras": [c.to_dict() for c in ds.cameras],
        "views": views,
        "split": {"train": list(map(int, ds.train_views)), "test": list(map(int, ds.test_views))},
        "normalization": {str(k): float(v) for k, v in divisors.items()},
    }
    (root / "manifest.json").write_text(json.dumps(doc, indent=2))
    return root


def validate_manifest(doc: dict) -> None:
    import jsonschema

    try:
        jsonschema.validate(doc, MANIFEST_SCHEMA)
    except jsonschema.ValidationError as e:
        raise FormatError(f"invalid manifest: {e.message}") from None
    cams = [Camera.from_dict(c) for c in doc["cameras"]]
    if [c.modality_id for c in cams] != list(range(len(cams))):
        raise FormatError("camera modality ids must be 0..M-1 in order")
    try:
        check_channel_partition(cams)
    except ValueError as e:
        raise FormatError(f"invalid manifest: {e}") from None
    if not 0 <= doc["reference_modality"] < len(cams):
        raise FormatError("reference modality not among the cameras")


def normalize_images(raw: np.ndarray, divisor: float) -> np.ndarray:
    return (np.clip(raw, 0.0, divisor) / divisor).astype(np.float32)


def load_dataset(root) -> Dataset:
    root = Path(root)
    path = root / "manifest.json"
    if not path.exists():
        raise FileNotFoundError(f"no manifest.json in {root}")
    doc = json.loads(path.read_text())
    validate_manifest(doc)
    cams = [Camera.from_dict(c) for c in doc["cameras"]]
    poses = np.array([v["reference_pose"] for v in doc["views"]], dtype=np.float32)
    divisors = {int(k): float(v) for k, v in doc["normalization"].items()}
    images = {}
    for cam in cams:
        stack = []
        for v in doc["views"]:
            rel = v["files"].get(str(cam.modality_id))
            if rel is None:
                raise FormatError(f"view {v['id']} lists no file for modality {cam.modality_id}")
            a = read_xct(root / rel)
            if a.shape != (cam.height, cam.width, cam.channels):
                raise FormatError(f"{rel}: shape {a.shape} does not match camera {cam.name}")
            stack.append(a)
        images[cam.modality_id] = normalize_images(np.stack(stack), divisors.get(cam.modality_id, 1.0))
    return Dataset(doc["scene"], cams, int(doc["reference_modality"]), poses, images,
                   list(doc["split"]["train"]), list(doc["split"]["test"]), divisors, root)


# -- checkpoints ------------------------------------------------------------------
def save_checkpoint(path, payload: dict) -> None:
    """Store a flat mapping of arrays plus a JSON ``meta`` entry in one .npz file."""
    arrays = {k: np.asarray(v) for k, v in payload["arrays"].items()}
    meta = dict(payload["meta"], format_version=CHECKPOINT_VERSION)
    tmp = str(path) + ".tmp"
    with open(tmp, "wb") as f:
        np.savez(f, __meta__=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8), **arrays)
    os.replace(tmp, path)


def load_checkpoint(path) -> dict:
    if not Path(path).exists():
        raise FileNotFoundError(f"no checkpoint at {path}")
    try:
        with np.load(path, allow_pickle=False) as z:
            meta = json.loads(bytes(z["__meta__"]).decode())
            arrays = {k: z[k].copy() for k in z.files if k != "__meta__"}
    except (ValueError, KeyError, zipfile.BadZipFile, UnicodeDecodeError) as e:
        raise FormatError(f"{path} is not a readable checkpoint: {e}") from e
    if meta.get("format_version") != CHECKPOINT_VERSION:
        raise FormatError(f"unsupported checkpoint version {meta.get('format_version')}")
    return {"meta": meta, "arrays": arrays}


# -- previews ---------------------------------------------------------------------
def colorize(tensor, colormap: str | None = None) -> np.ndarray:
    """Map an (H, W, C) tensor in [0, 1] to 8-bit RGB.

    Three channels without a colormap pass through; otherwise channels are
    averaged and looked up in ``magma`` or ``viridis``.
    """
    a = np.asarray(tensor, dtype=np.float64)
    if a.ndim == 2:
        a = a[..., None]
    a = np.clip(a, 0.0, 1.0)
    if colormap is None:
        if a.shape[-1] != 3:
            raise ValueError("colormap required for non-RGB tensors")
        return np.round(a * 255).astype(np.uint8)
    lut = {"magma": MAGMA, "viridis": VIRIDIS}.get(colormap)
    if lut is None:
        raise ValueError(f"unknown colormap {colormap!r}")
    idx = np.round(a.mean(axis=-1) * 255).astype(np.int64)
    return np.round(lut[idx] * 255).astype(np.uint8)


def default_colormap(channels: int) -> str | None:
    if channels == 3:
        return None
    return "magma" if channels == 1 else "viridis"


def export_png(path, tensor, colormap: str | None = "auto") -> np.ndarray:
    from PIL import Image

    a = np.asarray(tensor)
    if colormap == "auto":
        colormap = default_colormap(a.shape[-1] if a.ndim == 3 else 1)
    rgb = colorize(a, colormap)
    Image.fromarray(rgb, mode="RGB").save(path)
    return rgb
