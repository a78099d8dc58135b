import json
import struct

import numpy as np
import pytest

from xspec.colormaps import MAGMA, VIRIDIS
from xspec.io import (FormatError, colorize, export_png, load_checkpoint, load_dataset, read_xct, save_checkpoint,
                      save_dataset, validate_manifest, write_xct)
from xspec.synth import build_dataset, single_sphere_scene


def test_xct_small_round_trip(tmp_path):
    a = np.arange(6, dtype=np.float32).reshape(2, 3, 1) * 0.1
    write_xct(tmp_path / "a.xct", a)
    b = read_xct(tmp_path / "a.xct")
    assert b.dtype == np.float32 and np.array_equal(a.view(np.uint32), b.view(np.uint32))
    raw = (tmp_path / "a.xct").read_bytes()
    assert raw[:4] == b"XCT1" and struct.unpack("<III", raw[4:16]) == (2, 3, 1)
    assert len(raw) == 16 + 4 * 6


def test_xct_random_byte_identical(tmp_path, rng):
    for i in range(10):
        a = rng.normal(size=tuple(rng.integers(1, 9, 3))).astype(np.float32)
        write_xct(tmp_path / f"{i}.xct", a)
        b = read_xct(tmp_path / f"{i}.xct")
        assert a.tobytes() == b.tobytes()
        write_xct(tmp_path / f"{i}b.xct", b)
        assert (tmp_path / f"{i}.xct").read_bytes() == (tmp_path / f"{i}b.xct").read_bytes()


def test_xct_errors(tmp_path):
    p = tmp_path / "x.xct"
    p.write_bytes(b"XCT2" + struct.pack("<III", 1, 1, 1) + b"\0" * 4)
    with pytest.raises(FormatError, match="unsupported"):
        read_xct(p)
    p.write_bytes(b"ABCD" + struct.pack("<III", 1, 1, 1) + b"\0" * 4)
    with pytest.raises(FormatError, match="magic"):
        read_xct(p)
    p.write_bytes(b"XCT1" + struct.pack("<II", 1, 1))
    with pytest.raises(FormatError, match="truncated"):
        read_xct(p)
    p.write_bytes(b"XCT1" + struct.pack("<III", 2, 2, 1) + b"\0" * 4)
    with pytest.raises(FormatError, match="size"):
        read_xct(p)
    with pytest.raises(FormatError):
        write_xct(p, np.array([[[np.nan]]]))


def test_colormap_examples(tmp_path):
    png = export_png(tmp_path / "ir.png", np.zeros((3, 4, 1)))
    assert np.all(png == np.round(MAGMA[0] * 255).astype(np.uint8))
    png = export_png(tmp_path / "ms.png", np.ones((3, 4, 10)))
    assert np.all(png == np.round(VIRIDIS[255] * 255).astype(np.uint8))
    mid = colorize(np.full((1, 1, 1), 127 / 255), "viridis")
    assert np.array_equal(mid[0, 0], np.round(VIRIDIS[127] * 255).astype(np.uint8))
    rgb = export_png(tmp_path / "rgb.png", np.full((2, 2, 3), 0.5))
    assert np.all(rgb == 128)
    from PIL import Image
    assert Image.open(tmp_path / "rgb.png").size == (2, 2)


def test_colormap_tables_match_published_values():
    # a few entries of the standard 256-entry tables
    np.testing.assert_allclose(MAGMA[0], [0.001462, 0.000466, 0.013866], atol=1e-6)
    np.testing.assert_allclose(MAGMA[255], [0.987053, 0.991438, 0.749504], atol=1e-6)
    np.testing.assert_allclose(VIRIDIS[0], [0.267004, 0.004874, 0.329415], atol=1e-6)
    np.testing.assert_allclose(VIRIDIS[127], [0.128729, 0.563265, 0.551229], atol=1e-6)
    np.testing.assert_allclose(VIRIDIS[255], [0.993248, 0.906157, 0.143936], atol=1e-6)
    assert MAGMA.shape == VIRIDIS.shape == (256, 3)


@pytest.fixture(scope="module")
def small_dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("data")
    ds, gt, raw = build_dataset(single_sphere_scene(n_views=6, image_scale=0.15))
    save_dataset(ds, root, raw_images=raw)
    return ds, root


def test_dataset_round_trip(small_dataset):
    ds, root = small_dataset
    back = load_dataset(root)
    assert back.cameras == ds.cameras
    assert back.train_views == ds.train_views and back.test_views == ds.test_views
    for m in ds.images:
        np.testing.assert_allclose(back.images[m], ds.images[m], atol=1e-6)
    np.testing.assert_allclose(back.ref_poses, ds.ref_poses, atol=1e-6)


def test_manifest_rejects_overlapping_channels(small_dataset):
    _, root = small_dataset
    doc = json.loads((root / "manifest.json").read_text())
    validate_manifest(doc)
    doc["cameras"][1]["channel_offset"] = 2
    with pytest.raises(FormatError, match="overlap"):
        validate_manifest(doc)
    bad = json.loads((root / "manifest.json").read_text())
    del bad["split"]
    with pytest.raises(FormatError):
        validate_manifest(bad)
    bad = json.loads((root / "manifest.json").read_text())
    bad["reference_modality"] = 7
    with pytest.raises(FormatError):
        validate_manifest(bad)


def test_missing_file_reported(small_dataset, tmp_path):
    ds, _ = small_dataset
    save_dataset(ds, tmp_path)
    (tmp_path / "images" / "ir" / "view_002.xct").unlink()
    with pytest.raises(FileNotFoundError):
        load_dataset(tmp_path)


def test_checkpoint_round_trip(tmp_path, rng):
    arrays = {"a": rng.normal(size=(3, 2)).astype(np.float32), "b/c": np.arange(4)}
    save_checkpoint(tmp_path / "c.npz", {"arrays": arrays, "meta": {"variant": "mlp", "x": [1, 2]}})
    back = load_checkpoint(tmp_path / "c.npz")
    assert back["meta"]["variant"] == "mlp" and back["meta"]["format_version"] == 1
    for k, v in arrays.items():
        assert np.array_equal(back["arrays"][k], v)
