"""Pinhole cameras, ray generation and rigid-pose algebra.

Conventions: camera-to-world poses, right-handed frames, cameras look down
-z with +y up, image rows grow downward.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor


@dataclass(frozen=True)
class Camera:
    modality_id: int
    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int
    channels: int
    channel_offset: int
    name: str = ""

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise ValueError("principal point outside the image")
        if self.channels <= 0 or self.channel_offset < 0:
            raise ValueError("invalid channel slice")

    @property
    def channel_slice(self) -> slice:
        return slice(self.channel_offset, self.channel_offset + self.channels)

    def to_dict(self) -> dict:
        return {
            "modality_id": self.modality_id, "name": self.name,
            "fx": self.fx, "fy": self.fy, "cx": self.cx, "cy": self.cy,
            "width": self.width, "height": self.height,
            "channels": self.channels, "channel_offset": self.channel_offset,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Camera":
        return cls(int(d["modality_id"]), float(d["fx"]), float(d["fy"]), float(d["cx"]), float(d["cy"]),
                   int(d["width"]), int(d["height"]), int(d["channels"]), int(d["channel_offset"]),
                   str(d.get("name", "")))


def check_channel_partition(cameras) -> int:
    """Raise unless the cameras' channel slices tile [0, total) exactly; return total."""
    spans = sorted((c.channel_offset, c.channel_offset + c.channels) for c in cameras)
    pos = 0
    for lo, hi in spans:
        if lo != pos:
            raise ValueError(f"channel slices overlap or leave a gap at offset {pos}")
        pos = hi
    return pos


@dataclass
class Pose:
    """Camera-to-world rigid transform. Fields may be arrays or Tensors."""

    rotation: object
    translation: object

    @classmethod
    def identity(cls) -> "Pose":
        return cls(np.eye(3, dtype=np.float32), np.zeros(3, dtype=np.float32))

    @classmethod
    def from_matrix(cls, m) -> "Pose":
        m = np.asarray(m, dtype=np.float32)
        return cls(m[:3, :3].copy(), m[:3, 3].copy())

    def matrix(self) -> np.ndarray:
        out = np.eye(4)
        out[:3, :3] = _data(self.rotation)
        out[:3, 3] = _data(self.translation)
        return out

    def numpy(self) -> "Pose":
        return Pose(np.array(_data(self.rotation)), np.array(_data(self.translation)))

    def inverse(self) -> "Pose":
        r = np.asarray(_data(self.rotation), dtype=np.float64)
        t = np.asarray(_data(self.translation), dtype=np.float64)
        return Pose(r.T.astype(np.float32), (-r.T @ t).astype(np.float32))


def _data(x):
    return x.data if isinstance(x, Tensor) else np.asarray(x)


class PoseParam:
    """Learnable 6-DoF relative pose: so(3) axis-angle plus translation."""

    def __init__(self, axis_angle=(0.0, 0.0, 0.0), translation=(0.0, 0.0, 0.0)):
        self.axis_angle = Tensor(np.array(axis_angle), requires_grad=True)
        self.translation = Tensor(np.array(translation), requires_grad=True)

    def parameters(self) -> list[Tensor]:
        return [self.axis_angle, self.translation]

    def values(self) -> tuple[np.ndarray, np.ndarray]:
        return self.axis_angle.data.copy(), self.translation.data.copy()


def _skew(w: Tensor) -> Tensor:
    zero = ad.Tensor(np.zeros(1))
    wx, wy, wz = w[0:1], w[1:2], w[2:3]
    rows = [
        ad.concat([zero, -wz, wy]),
        ad.concat([wz, zero, -wx]),
        ad.concat([-wy, wx, zero]),
    ]
    return ad.stack(rows, axis=0)


_SMALL_THETA_SQ = 1e-2


def so3_exp(w) -> Tensor:
    """Rodrigues exponential R = I + A K + B K^2, with K = [w]x.

    A = sin(th)/th and B = (1 - cos th)/th^2 switch to Taylor series for small
    angles so the map and its gradient stay smooth at zero.
    """
    w = ad.as_tensor(w)
    k = _skew(w)
    th2 = (w * w).sum()
    if float(th2.data) < _SMALL_THETA_SQ:
        a = 1.0 - th2 * (1.0 / 6.0) + th2 * th2 * (1.0 / 120.0) - th2 * th2 * th2 * (1.0 / 5040.0)
        b = 0.5 - th2 * (1.0 / 24.0) + th2 * th2 * (1.0 / 720.0) - th2 * th2 * th2 * (1.0 / 40320.0)
    else:
        th = ad.sqrt(th2)
        a = ad.sin(th) / th
        b = (1.0 - ad.cos(th)) / th2
    return ad.add(np.eye(3), a * k) + b * (k @ k)


def se3_exp(p: PoseParam) -> Pose:
    return Pose(so3_exp(p.axis_angle), ad.as_tensor(p.translation) if not isinstance(p.translation, Tensor) else p.translation)


def compose_pose(rel: Pose, base: Pose) -> Pose:
    """rel x base as 4x4 homogeneous products (rel applied on the left)."""
    r = ad.matmul(rel.rotation, base.rotation)
    t = ad.add(ad.matmul(rel.rotation, base.translation), rel.translation)
    return Pose(r, t)


def camera_directions(cam: Camera, pixels: np.ndarray) -> np.ndarray:
    """Camera-frame ray directions ((u-cx)/fx, -(v-cy)/fy, -1) for (..., 2) pixels."""
    pixels = np.asarray(pixels, dtype=np.float64)
    u, v = pixels[..., 0], pixels[..., 1]
    if np.any(u < 0) or np.any(u >= cam.width) or np.any(v < 0) or np.any(v >= cam.height):
        raise ValueError("pixel outside image bounds")
    d = np.stack([(u - cam.cx) / cam.fx, -(v - cam.cy) / cam.fy, -np.ones_like(u)], axis=-1)
    return d.astype(ad.default_dtype())


def pixel_to_ray(cam: Camera, pose: Pose, pixels) -> tuple[Tensor, Tensor]:
    """World-space (origins, directions) for continuous pixel coordinates (..., 2)."""
    d_cam = camera_directions(cam, pixels)
    shape = d_cam.shape
    flat = d_cam.reshape(-1, 3)
    d = ad.matmul(flat, ad.transpose(ad.as_tensor(pose.rotation)))
    o = ad.broadcast_to(ad.as_tensor(pose.translation), d.shape)
    return o.reshape(shape), d.reshape(shape)


def pixel_grid(cam: Camera) -> np.ndarray:
    """Pixel-centre coordinates (H, W, 2) in row-major order."""
    u, v = np.meshgrid(np.arange(cam.width) + 0.5, np.arange(cam.height) + 0.5)
    return np.stack([u, v], axis=-1)


def project_points(cam: Camera, pose: Pose, points: np.ndarray) -> np.ndarray:
    """Pinhole projection of world points to continuous pixels (inverse of pixel_to_ray)."""
    p = pose.numpy()
    r = np.asarray(p.rotation, dtype=np.float64)
    t = np.asarray(p.translation, dtype=np.float64)
    x = (np.asarray(points, dtype=np.float64) - t) @ r
    u = cam.cx + cam.fx * x[..., 0] / -x[..., 2]
    v = cam.cy - cam.fy * x[..., 1] / -x[..., 2]
    return np.stack([u, v], axis=-1)


def rotation_angle_deg(r: np.ndarray) -> float:
    c = (np.trace(r) - 1.0) / 2.0
    s = 0.5 * np.linalg.norm([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    return float(np.degrees(np.arctan2(s, c)))


def pose_error(a: Pose, b: Pose) -> tuple[float, float]:
    """(rotation angle of Ra Rb^T in degrees, distance between translations)."""
    ra = np.asarray(_data(a.rotation), dtype=np.float64)
    rb = np.asarray(_data(b.rotation), dtype=np.float64)
    dt = np.asarray(_data(a.translation), dtype=np.float64) - np.asarray(_data(b.translation), dtype=np.float64)
    return rotation_angle_deg(ra @ rb.T), float(np.linalg.norm(dt))


def rotation_from_axis_angle(w) -> np.ndarray:
    """Non-differentiable float64 Rodrigues, for data generation."""
    w = np.asarray(w, dtype=np.float64)
    th = np.linalg.norm(w)
    if th < 1e-12:
        return np.eye(3)
    k = w / th
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(th) * kx + (1 - np.cos(th)) * kx @ kx


def axis_angle_from_rotation(r) -> np.ndarray:
    """Inverse of rotation_from_axis_angle for angles below pi."""
    r = np.asarray(r, dtype=np.float64)
    v = 0.5 * np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    s = np.linalg.norm(v)
    th = np.arctan2(s, (np.trace(r) - 1.0) / 2.0)
    if s < 1e-12:
        return np.zeros(3)
    return v / s * th


def interpolate_pose(a: Pose, b: Pose, alpha: float) -> Pose:
    """Geodesic rotation interpolation plus linear translation, alpha in [0, 1]."""
    a, b = a.numpy(), b.numpy()
    ra = np.asarray(a.rotation, dtype=np.float64)
    rb = np.asarray(b.rotation, dtype=np.float64)
    w = axis_angle_from_rotation(rb @ ra.T)
    r = rotation_from_axis_angle(alpha * w) @ ra
    t = (1 - alpha) * np.asarray(a.translation, dtype=np.float64) + alpha * np.asarray(b.translation, dtype=np.float64)
    return Pose(r.astype(np.float32), t.astype(np.float32))
