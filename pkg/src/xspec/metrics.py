"""Image quality (PSNR, SSIM), histogram mutual information over the common
field of view, and pose-recovery scoring."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .geometry import Camera, pose_error

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_C1 = 0.01 ** 2
SSIM_C2 = 0.03 ** 2
MI_BINS = 32


def _pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def psnr(a, b) -> float:
    """10 log10(1 / MSE) for images in [0, 1]; identical images give +inf."""
    a, b = _pair(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return float("inf")
    return 10.0 * np.log10(1.0 / mse)


def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    x = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-0.5 * (x / sigma) ** 2)
    return g / g.sum()


def _filter_valid(img: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Separable correlation of (H, W, C) with g along both image axes, valid region only."""
    k = len(g)
    h, w = img.shape[:2]
    rows = sum(g[i] * img[i:h - k + 1 + i] for i in range(k))
    return sum(g[j] * rows[:, j:w - k + 1 + j] for j in range(k))


def ssim(a, b) -> float:
    """Mean local SSIM (Gaussian window) averaged over channels."""
    a, b = _pair(a, b)
    if a.ndim == 2:
        a, b = a[..., None], b[..., None]
    if a.shape[0] < SSIM_WINDOW or a.shape[1] < SSIM_WINDOW:
        raise ValueError(f"image {a.shape[:2]} smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} window")
    g = gaussian_window()
    mu_a, mu_b = _filter_valid(a, g), _filter_valid(b, g)
    var_a = _filter_valid(a * a, g) - mu_a ** 2
    var_b = _filter_valid(b * b, g) - mu_b ** 2
    cov = _filter_valid(a * b, g) - mu_a * mu_b
    num = (2 * mu_a * mu_b + SSIM_C1) * (2 * cov + SSIM_C2)
    den = (mu_a ** 2 + mu_b ** 2 + SSIM_C1) * (var_a + var_b + SSIM_C2)
    return float(np.mean(num / den))


@dataclass
class Histogram2D:
    counts: np.ndarray  # (B, B)
    bins: int
    ranges: tuple = ((0.0, 1.0), (0.0, 1.0))

    @classmethod
    def from_images(cls, a, b, bins: int = MI_BINS, ranges=((0.0, 1.0), (0.0, 1.0))) -> "Histogram2D":
        a, b = _pair(a, b)
        counts = np.zeros((bins, bins), dtype=np.int64)
        ia, ib = _bin_index(a.ravel(), bins, ranges[0]), _bin_index(b.ravel(), bins, ranges[1])
        np.add.at(counts, (ia, ib), 1)
        return cls(counts, bins, tuple(ranges))

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def _bin_index(x: np.ndarray, bins: int, rng) -> np.ndarray:
    lo, hi = rng
    idx = np.floor((x - lo) / (hi - lo) * bins).astype(np.int64)
    return np.clip(idx, 0, bins - 1)


def reduce_channels(img) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    return img.mean(axis=-1) if img.ndim == 3 else img


def mutual_information(a, b, bins: int = MI_BINS) -> float:
    """Histogram MI in nats between two scalar images (multi-channel inputs are channel-averaged)."""
    a, b = reduce_channels(a), reduce_channels(b)
    hist = Histogram2D.from_images(a, b, bins)
    n = hist.total
    c = hist.counts
    cx = c.sum(axis=1)
    cy = c.sum(axis=0)
    i, j = np.nonzero(c)
    cij = c[i, j].astype(np.float64)
    # integer marginals and a correctly rounded sum keep MI(a, b) == MI(b, a) bit for bit
    mi = math.fsum((cij / n) * np.log(cij * n / (cx[i] * cy[j]).astype(np.float64)))
    return max(mi, 0.0)


def entropy(a, bins: int = MI_BINS) -> float:
    a = reduce_channels(a).ravel()
    counts = np.bincount(_bin_index(a, bins, (0.0, 1.0)), minlength=bins)
    p = counts[counts > 0] / a.size
    return float(-np.sum(p * np.log(p)))


# -- common field of view ------------------------------------------------------------
def narrowest_camera(cameras: list[Camera]) -> Camera:
    return min(cameras, key=lambda c: (c.width / (2 * c.fx)) * (c.height / (2 * c.fy)))


def common_fov_crop(cam: Camera, narrow: Camera) -> tuple[slice, slice]:
    """Pixel rows/cols of ``cam`` covering the half-angles of ``narrow``'s frustum."""
    hx = cam.fx * (narrow.width / 2.0) / narrow.fx
    hy = cam.fy * (narrow.height / 2.0) / narrow.fy
    c0 = max(int(round(cam.cx - hx)), 0)
    c1 = min(int(round(cam.cx + hx)), cam.width)
    r0 = max(int(round(cam.cy - hy)), 0)
    r1 = min(int(round(cam.cy + hy)), cam.height)
    return slice(r0, r1), slice(c0, c1)


def pairwise_mi(images: dict, bins: int = MI_BINS) -> dict:
    return {(i, j): mutual_information(images[i], images[j], bins) for i, j in itertools.combinations(sorted(images), 2)}


def alignment_score(state, dataset, views, bins: int = MI_BINS, N: int | None = None) -> dict:
    """Average pairwise MI per rendering camera.

    For each viewpoint and each camera k, every modality is rendered through
    k's pose and intrinsics, cropped to the narrowest camera's footprint and
    reduced to one channel; pair MIs are averaged, then viewpoints.
    """
    from .trainer import render_modality

    cams = dataset.cameras
    if len(cams) < 2:
        raise ValueError("alignment needs at least two modalities")
    narrow = narrowest_camera(cams)
    scores = {}
    for k, cam in enumerate(cams):
        rs, cs = common_fov_crop(cam, narrow)
        per_view = []
        for v in views:
            renders = {m: render_modality(state, dataset.ref_pose(v), m, via=k, N=N)[0][rs, cs] for m in range(len(cams))}
            per_view.append(np.mean(list(pairwise_mi(renders, bins).values())))
        scores[k] = float(np.mean(per_view))
    return scores


def pose_scores(state, truth: dict) -> dict:
    """modality -> (rotation error in degrees, translation error) against ground-truth relative poses."""
    return {m: pose_error(state.relative_pose(m), truth[m]) for m in sorted(state.poses)}


def quality_table(state, dataset, views, N: int | None = None) -> dict:
    from .trainer import render_modality

    out = {}
    for m in dataset.modalities():
        p, s = [], []
        for v in views:
            img, _ = render_modality(state, dataset.ref_pose(v), m, N=N)
            p.append(psnr(img, dataset.images[m][v]))
            s.append(ssim(img, dataset.images[m][v]))
        out[m] = (float(np.mean(p)), float(np.mean(s)))
    return out


def format_report(scene: str, variant: str, quality: dict, alignment: dict, cameras: list[Camera]) -> str:
    lines = [f"scene: {scene}", f"variant: {variant}", "",
             f"{'modality':<10}{'PSNR':>10}{'SSIM':>10}"]
    for m, (p, s) in quality.items():
        lines.append(f"{cameras[m].name:<10}{p:>10.2f}{s:>10.4f}")
    lines += ["", f"{'resolution':<10}{'MI':>10}"]
    for k, mi in alignment.items():
        lines.append(f"{cameras[k].name:<10}{mi:>10.4f}")
    if alignment:
        lines.append(f"{'average':<10}{np.mean(list(alignment.values())):>10.4f}")
    return "\n".join(lines) + "\n"
