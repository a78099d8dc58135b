import numpy as np
import pytest
from hypothesis import given, strategies as st

from xspec import autodiff as ad
from xspec.fields import GridField
from xspec.synth import build_dataset, single_sphere_scene
from xspec.trainer import (NumericalError, TrainConfig, epoch_schedule, init_state, load_state, normalize_dataset,
                           photometric_loss, read_pose_log, render_modality, run_epochs, sample_ray_batch, save_state,
                           train, train_step, tv_loss, write_pose_log)

TINY = dict(batch_rays=64, samples_per_ray=16, mlp_width=32, mlp_depth=2, L_pos=4, L_dir=2,
            grid_planes=8, grid_height=8, grid_width=8, grid_features=4, grid_hidden=16, grid_L_pos=2)


@pytest.fixture(scope="module")
def data():
    ds, gt, raw = build_dataset(single_sphere_scene(n_views=8, image_scale=0.15))
    return ds, gt


def tiny(**kw):
    return TrainConfig(**{**TINY, **kw})


# -- batches ------------------------------------------------------------------------
def test_sample_ray_batch_contract(data, rng):
    ds, _ = data
    for m in ds.modalities():
        pixels, cam, view, targets = sample_ray_batch(ds, m, 50, rng)
        assert view in ds.train_views
        assert pixels.shape == (50, 2) and targets.shape == (50, cam.channels)
        assert np.all((pixels >= 0.5) & (pixels <= [cam.width - 0.5, cam.height - 0.5]))
        assert np.all(np.mod(pixels, 1.0) == 0.5)
        cols, rows = (pixels - 0.5).astype(int).T
        assert np.array_equal(targets, ds.images[m][view][rows, cols])
        assert len({tuple(p) for p in pixels}) == 50


def test_sample_ray_batch_oversized_and_uniform(data, rng):
    ds, _ = data
    cam = ds.camera(1)
    n_pix = cam.width * cam.height
    pixels, *_ = sample_ray_batch(ds, 1, n_pix * 3, rng)
    assert len(pixels) == n_pix * 3
    counts = np.zeros(n_pix)
    for _ in range(400):
        p, *_ = sample_ray_batch(ds, 1, 10, rng)
        idx = (p[:, 1] - 0.5).astype(int) * cam.width + (p[:, 0] - 0.5).astype(int)
        np.add.at(counts, idx, 1)
    expected = 4000 / n_pix
    chi2 = np.sum((counts - expected) ** 2 / expected)
    # chi-square with n_pix - 1 dof; mean n_pix - 1, generous upper bound
    assert chi2 < 2 * n_pix


# -- losses -------------------------------------------------------------------------
def test_photometric_loss_matches_loop(rng):
    for _ in range(10):
        a, b = rng.random((7, 3)), rng.random((7, 3))
        ref = sum((a[i, j] - b[i, j]) ** 2 for i in range(7) for j in range(3))
        with ad.precision(np.float64):
            assert abs(float(photometric_loss(a, b).data) - ref) < 1e-9
    with pytest.raises(ValueError):
        photometric_loss(np.zeros((3, 2)), np.zeros((3, 1)))


def test_tv_loss_matches_loop(rng):
    g = rng.random((3, 4, 5, 2))
    total = 0.0
    for axis in range(3):
        d = np.diff(g, axis=axis)
        s = 0.0
        for idx in np.ndindex(d.shape):
            s += d[idx] ** 2
        total += s / (d.size // 2)
    with ad.precision(np.float64):
        assert abs(float(tv_loss(g).data) - total) < 1e-9
    assert float(tv_loss(np.ones((3, 3, 3, 1))).data) == 0.0
    with pytest.raises(ValueError):
        tv_loss(np.ones((1, 3, 3, 1)))


def test_tv_loss_gradient():
    from conftest import assert_grads_match

    g = np.random.default_rng(0).random((3, 3, 4, 2))
    assert_grads_match(lambda x: tv_loss(x), [g])


def test_normalize_dataset():
    raw = {0: np.linspace(0, 2, 200).reshape(2, 10, 10, 1), 1: np.zeros((2, 3, 3, 1))}
    with pytest.warns(UserWarning, match="all zero"):
        imgs, div = normalize_dataset(raw, [0, 1])
    assert div[1] == 1.0 and np.all(imgs[1] == 0)
    assert imgs[0].max() == 1.0 and imgs[0].min() == 0.0
    assert abs(div[0] - np.percentile(raw[0].astype(np.float32).astype(np.float64), 99)) < 1e-12
    assert np.mean(imgs[0] == 1.0) <= 0.02
    # divisor from the training views only
    imgs, div = normalize_dataset({0: np.stack([np.ones((2, 2, 1)), 5 * np.ones((2, 2, 1))])}, [0])
    assert div[0] == 1.0 and np.all(imgs[0][1] == 1.0)


# -- steps and epochs ---------------------------------------------------------------
def test_epoch_schedule_interleaving(data, rng):
    ds, _ = data
    steps = epoch_schedule(ds, rng)
    mods = ds.modalities()
    assert len(steps) == len(mods) * len(ds.train_views)
    for m in mods:
        assert sorted(v for mm, v in steps if mm == m) == sorted(ds.train_views)
    assert [m for m, _ in steps[:len(mods)]] == list(mods)
    counts = {m: 0 for m in mods}
    for m, _ in steps:
        counts[m] += 1
        assert max(counts.values()) - min(counts.values()) <= 1


def test_zero_epochs_returns_initial_state(data):
    ds, _ = data
    state = train(ds, tiny(epochs=0))
    assert state.epoch == 0 and state.step == 0
    for p in state.poses.values():
        aa, t = p.values()
        assert np.all(aa == 0) and np.all(t == 0)
    fresh = init_state(ds, tiny(epochs=0))
    for a, b in zip(state.field.parameters(), fresh.field.parameters()):
        assert np.array_equal(a.data, b.data)


def test_reference_step_leaves_poses(data):
    ds, _ = data
    state = init_state(ds, tiny())
    before = {m: p.values() for m, p in state.poses.items()}
    train_step(state, ds, ds.reference, np.random.default_rng(0))
    for m, p in state.poses.items():
        assert all(np.array_equal(a, b) for a, b in zip(p.values(), before[m]))


def test_non_reference_step_moves_only_its_pose(data):
    ds, _ = data
    state = init_state(ds, tiny())
    train_step(state, ds, 1, np.random.default_rng(0))
    aa, t = state.poses[1].values()
    assert np.any(aa != 0) and np.any(t != 0)
    aa2, t2 = state.poses[2].values()
    assert np.all(aa2 == 0) and np.all(t2 == 0)


def test_pose_gradient_reaches_parameters(data):
    ds, _ = data
    state = init_state(ds, tiny(jitter=False))
    from xspec.geometry import pixel_to_ray
    from xspec.renderer import render_rays
    from xspec.trainer import modality_pose

    pixels, cam, view, targets = sample_ray_batch(ds, 2, 32, np.random.default_rng(0))
    pose = modality_pose(state, ds, 2, view, differentiable=True)
    o, d = pixel_to_ray(cam, pose, pixels)
    res = render_rays(state.field, o, d, state.coords_for(2), 16, channel_slice=cam.channel_slice)
    photometric_loss(res.channels, targets).backward()
    for p in state.poses[2].parameters():
        assert p.grad is not None and np.all(np.isfinite(p.grad)) and np.any(p.grad != 0)


def test_frozen_poses_untouched(data):
    ds, _ = data
    boot = train(ds, tiny(epochs=2))
    state = train(ds, tiny(variant="grid", epochs=2), bootstrap_state=boot)
    assert state.frozen_poses and state.bootstrap_epochs == 2
    for m, p in state.poses.items():
        for a, b in zip(p.values(), boot.poses[m].values()):
            assert np.array_equal(a, b)
    assert isinstance(state.field, GridField)
    assert state.wall_time >= boot.wall_time


def test_grid_variant_bootstraps_itself(data):
    ds, _ = data
    state = train(ds, tiny(variant="grid", epochs=1, bootstrap_epochs=1))
    assert state.bootstrap_epochs == 1 and state.frozen_poses
    assert any(np.any(p.values()[1] != 0) for p in state.poses.values())


def test_numerical_failure_raises(data):
    ds, _ = data
    state = init_state(ds, tiny())
    state.field.parameters()[0].data[:] = np.nan
    with pytest.raises(NumericalError):
        train_step(state, ds, 0, np.random.default_rng(0))


def test_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(variant="voxel")
    with pytest.raises(ValueError):
        TrainConfig(coords="pixel")
    with pytest.raises(ValueError):
        TrainConfig.from_dict({"epochs": 3, "bogus": 1})
    assert TrainConfig.from_dict(TrainConfig(epochs=3).to_dict()) == TrainConfig(epochs=3)


# -- end to end ---------------------------------------------------------------------
def test_short_run_reduces_loss(data):
    ds, _ = data
    state = train(ds, tiny(epochs=40, learning_rate=5e-3, final_learning_rate=1e-3))
    for m in ds.modalities():
        h = state.loss_history[m]
        assert len(h) == 40
        assert np.mean(h[-5:]) < 0.5 * np.mean(h[:3])
    assert state.step == 40 * len(ds.modalities()) * len(ds.train_views)
    assert len(state.pose_log) == 41 * 2


def test_determinism(data):
    ds, _ = data
    a = train(ds, tiny(epochs=3, seed=5))
    b = train(ds, tiny(epochs=3, seed=5))
    c = train(ds, tiny(epochs=3, seed=6))
    for m in ds.modalities():
        assert a.loss_history[m] == b.loss_history[m]
    assert a.loss_history != c.loss_history
    for pa, pb in zip(a.field.parameters(), b.field.parameters()):
        assert np.array_equal(pa.data, pb.data)


@pytest.mark.parametrize("variant", ["mlp", "grid"])
def test_checkpoint_round_trip(data, tmp_path, variant):
    ds, _ = data
    state = train(ds, tiny(variant=variant, epochs=2, bootstrap_epochs=1))
    save_state(tmp_path / "c.npz", state, {"note": "x"})
    back, payload = load_state(tmp_path / "c.npz")
    assert payload["meta"]["note"] == "x"
    assert back.epoch == state.epoch and back.step == state.step and back.config == state.config
    assert back.loss_history == state.loss_history
    for m in ds.modalities():
        a, _ = render_modality(state, ds.ref_pose(0), m)
        b, _ = render_modality(back, ds.ref_pose(0), m)
        assert a.tobytes() == b.tobytes()
    # resumed training matches uninterrupted training
    r1, r2 = np.random.default_rng(9), np.random.default_rng(9)
    run_epochs(state, ds, 1, r1)
    run_epochs(back, ds, 1, r2)
    for m in ds.modalities():
        assert state.loss_history[m][-1] == back.loss_history[m][-1]


def test_pose_log_round_trip(data, tmp_path):
    ds, _ = data
    state = train(ds, tiny(epochs=2))
    write_pose_log(tmp_path / "poses.log", state)
    rows = read_pose_log(tmp_path / "poses.log")
    assert len(rows) == len(state.pose_log)
    for r, s in zip(rows, state.pose_log):
        assert r[:2] == s[:2]
        np.testing.assert_allclose(r[2:], s[2:], rtol=1e-7, atol=1e-12)


_PROPERTY_DATA = []


def _property_dataset():
    if not _PROPERTY_DATA:
        _PROPERTY_DATA.append(build_dataset(single_sphere_scene(n_views=6, image_scale=0.15))[0])
    return _PROPERTY_DATA[0]


@given(st.integers(1, 400), st.integers(0, 2), st.integers(0, 2**31))
def test_batch_size_property(n, m, seed):
    ds = _property_dataset()
    pixels, cam, view, targets = sample_ray_batch(ds, m, n, np.random.default_rng(seed))
    assert len(pixels) == len(targets) == n
    if n <= cam.width * cam.height:
        assert len({tuple(p) for p in pixels}) == n
