"""Radiance fields emitting one shared density and all modality channels.

``MlpField`` is the coordinate-MLP variant over Fourier-encoded warped
coordinates; ``GridField`` stores density and features on multi-plane grids
over the warped cube and decodes colour with a shallow MLP.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor


@dataclass(frozen=True)
class EncodingConfig:
    L_pos: int = 10
    L_dir: int = 4
    include_input: bool = True

    def width(self, L: int, components: int = 3) -> int:
        return components * (2 * L + (1 if self.include_input else 0))


def positional_encoding(p, L: int, include_input: bool = False) -> Tensor:
    """Per-component (sin(2^0 pi p), cos(2^0 pi p), ..., sin(2^(L-1) pi p), cos(...)).

    Input (..., k) gives (..., k * (2L + include_input)); the raw component,
    when included, precedes its own sin/cos terms.
    """
    if L < 0:
        raise ValueError("L must be non-negative")
    p = ad.as_tensor(p)
    scalar = p.ndim == 0
    if scalar:
        p = p.reshape(1)
    parts = []
    if L > 0:
        freqs = (2.0 ** np.arange(L)) * np.pi
        arg = ad.expand_dims(p, -1) * freqs  # (..., k, L)
        enc = ad.stack([ad.sin(arg), ad.cos(arg)], axis=-1)  # (..., k, L, 2)
        parts.append(enc.reshape(p.shape + (2 * L,)))
    if include_input:
        parts.insert(0, ad.expand_dims(p, -1))
    if not parts:
        out = ad.Tensor(np.zeros(p.shape + (0,)))
    else:
        out = ad.concat(parts, axis=-1) if len(parts) > 1 else parts[0]
    shape = p.shape[:-1] + (p.shape[-1] * out.shape[-1],)
    out = out.reshape(shape)
    return out.reshape(out.shape[-1:]) if scalar else out


def _dense(rng: np.random.Generator, fan_in: int, fan_out: int, zero: bool = False):
    bound = 1.0 / np.sqrt(fan_in)
    if zero:
        w = np.zeros((fan_in, fan_out))
        b = np.zeros(fan_out)
    else:
        w = rng.uniform(-bound, bound, size=(fan_in, fan_out))
        b = rng.uniform(-bound, bound, size=fan_out)
    return Tensor(w, requires_grad=True), Tensor(b, requires_grad=True)


class MlpField:
    """NeRF topology at reduced width: ``depth`` position layers with a skip
    connection, a density head, a feature layer and a direction-conditioned
    colour head of half width."""

    kind = "mlp"

    def __init__(self, n_channels: int, width: int = 128, depth: int = 8, skip: int = 4,
                 encoding: EncodingConfig = EncodingConfig(), seed: int = 0,
                 zero_output: bool = False, density_bias: float = 0.0):
        self.n_channels = n_channels
        self.width = width
        self.depth = depth
        self.skip = skip
        self.encoding = encoding
        rng = np.random.default_rng(seed)
        in_pos = encoding.width(encoding.L_pos)
        in_dir = encoding.width(encoding.L_dir)
        self.pos_layers = []
        fan = in_pos
        for i in range(depth):
            self.pos_layers.append(_dense(rng, fan, width))
            fan = width + (in_pos if i == skip else 0)
        self.sigma_head = _dense(rng, width, 1)
        self.sigma_head[1].data[:] = density_bias
        self.feature = _dense(rng, width, width)
        half = max(width // 2, 1)
        self.dir_layer = _dense(rng, width + in_dir, half)
        self.out_layer = _dense(rng, half, n_channels, zero=zero_output)

    def parameters(self) -> list[Tensor]:
        ps = []
        for w, b in self.pos_layers + [self.sigma_head, self.feature, self.dir_layer, self.out_layer]:
            ps += [w, b]
        return ps

    def density(self, x) -> tuple[Tensor, Tensor]:
        ex = positional_encoding(x, self.encoding.L_pos, self.encoding.include_input)
        h = ex
        for i, (w, b) in enumerate(self.pos_layers):
            h = ad.relu(ad.linear(h, w, b))
            if i == self.skip:
                h = ad.concat([ex, h], axis=-1)
        sigma = ad.softplus(ad.linear(h, *self.sigma_head))[..., 0]
        return sigma, h

    def query(self, x, d) -> tuple[Tensor, Tensor]:
        """x: (P, 3) warped points, d: (P, 3) unit view dirs -> sigma (P,), channels (P, C)."""
        sigma, h = self.density(x)
        e = ad.linear(h, *self.feature)
        ed = positional_encoding(d, self.encoding.L_dir, self.encoding.include_input)
        h2 = ad.relu(ad.linear(ad.concat([e, ed], axis=-1), *self.dir_layer))
        return sigma, ad.sigmoid(ad.linear(h2, *self.out_layer))

    # -- serialization ---------------------------------------------------
    def config(self) -> dict:
        return {"kind": self.kind, "n_channels": self.n_channels, "width": self.width, "depth": self.depth,
                "skip": self.skip, "L_pos": self.encoding.L_pos, "L_dir": self.encoding.L_dir,
                "include_input": self.encoding.include_input}


def grid_corners(shape: tuple[int, int, int], x):
    """Flat corner indices (8, P) and differentiable trilinear weights (8, P)
    for points x (P, 3) over [-1, 1]^3, borders clamped.

    Axis order of the grid is (z, y, x): depth planes first.
    """
    x = ad.as_tensor(x)
    d, h, w = shape
    sizes = np.array([w, h, d])
    pos = ad.clip((x + 1.0) * (0.5 * (sizes - 1)), 0.0, sizes - 1)
    base = np.floor(pos.data).astype(np.int64)
    base = np.minimum(base, np.maximum(sizes - 2, 0))
    frac = pos - base.astype(pos.data.dtype)
    fx, fy, fz = frac[:, 0], frac[:, 1], frac[:, 2]
    gx, gy, gz = 1.0 - fx, 1.0 - fy, 1.0 - fz
    idx, wts = [], []
    for dz in (0, 1):
        for dy in (0, 1):
            for dx in (0, 1):
                iz = np.minimum(base[:, 2] + dz, d - 1)
                iy = np.minimum(base[:, 1] + dy, h - 1)
                ix = np.minimum(base[:, 0] + dx, w - 1)
                idx.append((iz * h + iy) * w + ix)
                wts.append((fz if dz else gz) * (fy if dy else gy) * (fx if dx else gx))
    return np.stack(idx), ad.stack(wts, axis=0)


def grid_interp(table, shape: tuple[int, int, int], x) -> Tensor:
    """Trilinear interpolation of a (D*H*W, C) table laid out as (D, H, W, C)."""
    table = ad.as_tensor(table)
    idx, wts = grid_corners(shape, x)
    return ad.weighted_gather(table, idx, wts)


class GridField:
    """Density and feature multi-plane grids over the warped cube plus a
    two-hidden-layer colour decoder.

    Density is ``scale * softplus(interp + shift)`` with ``scale`` equal to the
    number of plane intervals, so the optimized density value is expressed
    per voxel step.
    """

    kind = "grid"

    def __init__(self, n_channels: int, depth_planes: int = 128, height: int = 128, width: int = 128,
                 features: int = 12, hidden: int = 128, encoding: EncodingConfig = EncodingConfig(),
                 density_shift: float = -10.0, seed: int = 0):
        self.n_channels = n_channels
        self.shape = (depth_planes, height, width)
        self.features = features
        self.hidden = hidden
        self.encoding = encoding
        self.density_shift = density_shift
        self.density_scale = float(max(depth_planes - 1, 1))
        rng = np.random.default_rng(seed)
        n = depth_planes * height * width
        self.density_grid = Tensor(np.zeros((n, 1)), requires_grad=True, sparse_grad=True)
        self.feature_grid = Tensor(rng.uniform(-1e-4, 1e-4, size=(n, features)), requires_grad=True, sparse_grad=True)
        fan = features + encoding.width(encoding.L_pos) + encoding.width(encoding.L_dir)
        self.l1 = _dense(rng, fan, hidden)
        self.l2 = _dense(rng, hidden, hidden)
        self.l3 = _dense(rng, hidden, n_channels)

    def parameters(self) -> list[Tensor]:
        return [self.density_grid, self.feature_grid, *self.l1, *self.l2, *self.l3]

    def grid_parameters(self) -> list[Tensor]:
        return [self.density_grid, self.feature_grid]

    def mlp_parameters(self) -> list[Tensor]:
        return [*self.l1, *self.l2, *self.l3]

    def density(self, x) -> Tensor:
        raw = grid_interp(self.density_grid, self.shape, x)[..., 0]
        return ad.softplus(raw + self.density_shift) * self.density_scale

    def query(self, x, d) -> tuple[Tensor, Tensor]:
        x = ad.as_tensor(x)
        idx, wts = grid_corners(self.shape, x)
        raw = ad.weighted_gather(self.density_grid, idx, wts)[..., 0]
        sigma = ad.softplus(raw + self.density_shift) * self.density_scale
        feat = ad.weighted_gather(self.feature_grid, idx, wts)
        return sigma, self._decode(feat, x, d)

    def color(self, x, d) -> Tensor:
        """Decoder output alone, for callers that already have the density."""
        x = ad.as_tensor(x)
        return self._decode(grid_interp(self.feature_grid, self.shape, x), x, d)

    def _decode(self, feat, x, d) -> Tensor:
        ex = positional_encoding(x, self.encoding.L_pos, self.encoding.include_input)
        ed = positional_encoding(d, self.encoding.L_dir, self.encoding.include_input)
        h = ad.relu(ad.linear(ad.concat([feat, ex, ed], axis=-1), *self.l1))
        h = ad.relu(ad.linear(h, *self.l2))
        return ad.sigmoid(ad.linear(h, *self.l3))

    def grid_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        d, h, w = self.shape
        return self.density_grid.data.reshape(d, h, w, 1), self.feature_grid.data.reshape(d, h, w, self.features)

    def config(self) -> dict:
        d, h, w = self.shape
        return {"kind": self.kind, "n_channels": self.n_channels, "depth_planes": d, "height": h, "width": w,
                "features": self.features, "hidden": self.hidden, "L_pos": self.encoding.L_pos,
                "L_dir": self.encoding.L_dir, "include_input": self.encoding.include_input,
                "density_shift": self.density_shift}


def build_field(cfg: dict, seed: int = 0):
    cfg = dict(cfg)
    kind = cfg.pop("kind")
    enc = EncodingConfig(cfg.pop("L_pos", 10), cfg.pop("L_dir", 4), cfg.pop("include_input", True))
    if kind == "mlp":
        return MlpField(encoding=enc, seed=seed, **cfg)
    if kind == "grid":
        return GridField(encoding=enc, seed=seed, **cfg)
    raise ValueError(f"unknown field kind {kind!r}")
