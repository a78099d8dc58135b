"""Differentiable volume rendering along warped rays."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor
from .coords import NdcParams, shift_to_near, warp_ray
from .geometry import Camera, Pose, pixel_grid, pixel_to_ray

TERMINAL_DELTA = 1e10
FAR_SENTINEL = 1.0


@dataclass
class RenderResult:
    channels: Tensor  # (R, C)
    depth: Tensor  # (R,) expected warped parameter t'
    weights: Tensor  # (R, N)
    transmittance_final: Tensor  # (R,)


def sample_along_ray(N: int, n_rays: int = 1, jitter: bool = False, rng: np.random.Generator | None = None) -> np.ndarray:
    """Bin centres (or one uniform draw per bin) of N equal bins over [0, 1)."""
    if N < 2:
        raise ValueError("need at least two samples per ray")
    edges = np.arange(N, dtype=np.float64) / N
    if jitter:
        if rng is None:
            raise ValueError("jittered sampling needs an rng")
        t = edges[None, :] + rng.random((n_rays, N)) / N
    else:
        t = np.broadcast_to(edges + 0.5 / N, (n_rays, N))
    return np.ascontiguousarray(t, dtype=ad.default_dtype())


def sample_deltas(t: np.ndarray, terminal: float = TERMINAL_DELTA) -> np.ndarray:
    d = np.empty_like(t)
    d[..., :-1] = t[..., 1:] - t[..., :-1]
    d[..., -1] = terminal
    return d


def composite(sigmas, channels, t_values, deltas) -> RenderResult:
    """Front-to-back alpha compositing of (R, N) samples with (R, N, C) channels."""
    sigmas = ad.as_tensor(sigmas)
    if np.any(sigmas.data < 0):
        raise ValueError("negative density passed to composite")
    t_values = np.asarray(t_values)
    od = sigmas * deltas  # optical depth per sample
    # exclusive prefix sum built directly: subtracting the huge terminal term would cancel
    head = ad.cumsum(od[..., :-1], axis=-1)
    excl = ad.concat([np.zeros(od.shape[:-1] + (1,)), head], axis=-1)
    alpha = 1.0 - ad.exp(-od)
    trans = ad.exp(-excl)
    w = trans * alpha
    c = (ad.expand_dims(w, -1) * channels).sum(axis=-2)
    wsum = w.sum(axis=-1)
    depth = (w * t_values).sum(axis=-1) / ad.maximum(wsum, 1e-10)
    empty = wsum.data < 1e-10
    if np.any(empty):
        depth = ad.where(empty, np.full(depth.shape, FAR_SENTINEL), depth)
    t_final = ad.exp(-(excl[..., -1] + od[..., -1]))
    return RenderResult(c, depth, w, t_final)


def render_rays(field, origins, directions, params: NdcParams, N: int, jitter: bool = False,
                rng: np.random.Generator | None = None, channel_slice: slice | None = None,
                terminal_delta: float = TERMINAL_DELTA, color_threshold: float = 0.0) -> RenderResult:
    """Render world-space rays (R, 3): near-plane shift, warp, sample, query, composite.

    A positive ``color_threshold`` skips colour queries for low-weight samples
    on fields that can evaluate density alone.
    """
    o = shift_to_near(origins, directions, params.near)
    o_w, d_w = warp_ray(o, directions, params)
    n_rays = o_w.shape[0]
    t = sample_along_ray(N, n_rays, jitter, rng)
    pts = ad.expand_dims(o_w, 1) + ad.expand_dims(d_w, 1) * t[..., None]  # (R, N, 3)
    d = ad.as_tensor(directions)
    viewdirs = d * ad.reciprocal(ad.sqrt((d * d).sum(axis=-1, keepdims=True)))
    vd = ad.broadcast_to(ad.expand_dims(viewdirs, 1), pts.shape)
    deltas = sample_deltas(t, terminal_delta)
    if color_threshold > 0 and hasattr(field, "color"):
        sigma, col = _query_skipping(field, pts.reshape(-1, 3), vd.reshape(-1, 3), deltas, color_threshold)
    else:
        sigma, col = field.query(pts.reshape(-1, 3), vd.reshape(-1, 3))
    sigma = sigma.reshape(n_rays, N)
    col = col.reshape(n_rays, N, col.shape[-1])
    if channel_slice is not None:
        col = col[:, :, channel_slice]
    return composite(sigma, col, t, deltas)


def _query_skipping(field, x, d, deltas, threshold):
    """Density everywhere, colour only where the compositing weight exceeds ``threshold``.

    Skipped samples get colour 0; their contribution to the pixel is below
    the threshold, so this only trims negligible terms.
    """
    sigma = field.density(x)
    w = _weights(sigma.data.reshape(deltas.shape), deltas).reshape(-1)
    keep = np.flatnonzero(w > threshold)
    n_ch = field.n_channels
    if len(keep) == 0:
        return sigma, ad.as_tensor(np.zeros((len(w), n_ch)))
    slot = np.zeros(len(w), dtype=np.int64)
    slot[keep] = np.arange(1, len(keep) + 1)
    picked = field.color(ad.gather(x, keep), ad.gather(d, keep))
    table = ad.concat([np.zeros((1, n_ch)), picked], axis=0)
    return sigma, ad.gather(table, slot)


def _weights(sigma: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    od = sigma * deltas
    excl = np.concatenate([np.zeros(od.shape[:-1] + (1,)), np.cumsum(od[..., :-1], axis=-1)], axis=-1)
    return np.exp(-excl) * (1.0 - np.exp(-od))


def render_ray(field, cam: Camera, pose: Pose, pixel, params: NdcParams, N: int, **kw) -> RenderResult:
    """Single-pixel render restricted to ``cam``'s channel slice."""
    o, d = pixel_to_ray(cam, pose, np.asarray(pixel, dtype=np.float64).reshape(1, 2))
    return render_rays(field, o, d, params, N, channel_slice=cam.channel_slice, **kw)


def render_image(field, cam: Camera, pose: Pose, params: NdcParams, N: int, channel_slice: slice | None = None,
                 chunk: int = 1024, resolution: Camera | None = None,
                 color_threshold: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Render an (H, W, C) image and (H, W) warped-depth map with jitter off.

    ``resolution`` overrides the intrinsics used to cast rays (e.g. render one
    modality's channels through another camera); ``cam`` selects the default
    channel slice.
    """
    ray_cam = resolution if resolution is not None else cam
    sl = cam.channel_slice if channel_slice is None else channel_slice
    pix = pixel_grid(ray_cam).reshape(-1, 2)
    pose = pose.numpy()
    outs, depths = [], []
    with ad.no_grad():
        for s in range(0, len(pix), chunk):
            o, d = pixel_to_ray(ray_cam, pose, pix[s:s + chunk])
            res = render_rays(field, o, d, params, N, channel_slice=sl, color_threshold=color_threshold)
            outs.append(res.channels.data)
            depths.append(res.depth.data)
    img = np.concatenate(outs).reshape(ray_cam.height, ray_cam.width, -1)
    return img, np.concatenate(depths).reshape(ray_cam.height, ray_cam.width)


def warped_depth_to_z(t_prime, params: NdcParams):
    """World z of an axial warped parameter (near-plane origin): z' = -1 + 2 t'."""
    zp = -1.0 + 2.0 * np.asarray(t_prime, dtype=np.float64)
    with np.errstate(divide="ignore"):
        return 2.0 * params.near / (zp - 1.0)
