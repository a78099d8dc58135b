"""Perspective projection and the NDC / NXDC ray warps for forward-facing scenes.

With the far plane at infinity a world point maps to
``(ax * x / z, ay * y / z, 1 + 2n / z)``. Per-camera NDC takes ``ax = -2 fx / W``
and ``ay = -2 fy / H`` from one camera; NXDC takes both from the rig-wide
minimum focal/size ratios so every device shares one warped space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor
from .geometry import Camera


@dataclass(frozen=True)
class NdcParams:
    near: float
    ax: float
    ay: float
    source: str = "nxdc"  # "ndc" (per camera) or "nxdc" (shared minimum ratios)

    def __post_init__(self):
        if self.near <= 0:
            raise ValueError("near plane must be positive")
        if self.ax >= 0 or self.ay >= 0:
            raise ValueError("ax and ay must be negative")

    def to_dict(self) -> dict:
        return {"near": self.near, "ax": self.ax, "ay": self.ay, "source": self.source}

    @classmethod
    def from_dict(cls, d: dict) -> "NdcParams":
        return cls(float(d["near"]), float(d["ax"]), float(d["ay"]), str(d["source"]))


def shared_ratios(cameras: Sequence[Camera]) -> tuple[float, float]:
    """Minimum fx/W and fy/H over the rig; the two may come from different cameras."""
    cameras = list(cameras)
    if not cameras:
        raise ValueError("need at least one camera")
    return min(c.fx / c.width for c in cameras), min(c.fy / c.height for c in cameras)


def ndc_params(cam: Camera, near: float = 1.0) -> NdcParams:
    return NdcParams(near, -2.0 * cam.fx / cam.width, -2.0 * cam.fy / cam.height, "ndc")


def nxdc_params(cameras: Sequence[Camera], near: float = 1.0) -> NdcParams:
    rw, rh = shared_ratios(cameras)
    return NdcParams(near, -2.0 * rw, -2.0 * rh, "nxdc")


def params_for(mode: str, cameras: Sequence[Camera], cam: Camera, near: float = 1.0) -> NdcParams:
    """Warp parameters used for rays of ``cam`` under coordinate ``mode``."""
    if mode == "nxdc":
        return nxdc_params(cameras, near)
    if mode == "ndc":
        return ndc_params(cam, near)
    raise ValueError(f"unknown coordinate mode {mode!r}")


def perspective_project(x, params: NdcParams) -> np.ndarray:
    """Warp world points (..., 3) with z < 0 into the NDC cube."""
    x = np.asarray(x, dtype=np.float64)
    z = x[..., 2]
    if np.any(z >= 0):
        raise ValueError("point at or behind the camera plane (z >= 0)")
    return np.stack([params.ax * x[..., 0] / z, params.ay * x[..., 1] / z, 1.0 + 2.0 * params.near / z], axis=-1)


def shift_to_near(o, d, near: float):
    """Advance origins to the plane z = -near along their directions."""
    o, d = ad.as_tensor(o), ad.as_tensor(d)
    dz = d[..., 2:3]
    if np.any(dz.data == 0):
        raise ValueError("ray parallel to the image plane (d.z = 0)")
    t0 = -(o[..., 2:3] + near) / dz
    return o + t0 * d


def warp_ray(o, d, params: NdcParams) -> tuple[Tensor, Tensor]:
    """(o', d') with perspective_project(o + t d) == o' + t'(t) d'.

    ``o`` must already sit on the near plane (see ``shift_to_near``).
    """
    o, d = ad.as_tensor(o), ad.as_tensor(d)
    ox, oy, oz = o[..., 0:1], o[..., 1:2], o[..., 2:3]
    dx, dy, dz = d[..., 0:1], d[..., 1:2], d[..., 2:3]
    if np.any(dz.data == 0):
        raise ValueError("ray parallel to the image plane (d.z = 0)")
    n = params.near
    inv_oz = ad.reciprocal(oz)
    inv_dz = ad.reciprocal(dz)
    ox_oz = ox * inv_oz
    oy_oz = oy * inv_oz
    o_w = ad.concat([params.ax * ox_oz, params.ay * oy_oz, 1.0 + (2.0 * n) * inv_oz], axis=-1)
    d_w = ad.concat([params.ax * (dx * inv_dz - ox_oz), params.ay * (dy * inv_dz - oy_oz), (-2.0 * n) * inv_oz], axis=-1)
    return o_w, d_w


def warp_t(t, o, d) -> np.ndarray:
    """Warped parameter t' = t dz / (oz + t dz) for world parameter t."""
    t = np.asarray(t, dtype=np.float64)
    oz = np.asarray(o, dtype=np.float64)[..., 2]
    dz = np.asarray(d, dtype=np.float64)[..., 2]
    return t * dz / (oz + t * dz)
