"""CLI, report serialization, feature cache and fixture generator."""

import csv
import io
import json
import shutil

import numpy as np
import pytest
from PIL import Image

from vsumeval import cli
from vsumeval.cache import CacheDirectory, directory_fingerprint, read_cache, write_cache
from vsumeval.dataset_io import decode_frame
from vsumeval.errors import CacheError, EXIT_CODES
from vsumeval.features import extract_directory
from vsumeval.fixtures import frame_scores, make_fixture


def run(*argv):
    return cli.main([str(a) for a in argv])


@pytest.fixture(scope="module")
def fixtures(tmp_path_factory):
    root = tmp_path_factory.mktemp("fixtures")
    return {k: make_fixture(k, root / k) for k in ("shuffle_collision", "identical", "disjoint", "worked_example")}


def evaluate(manifest, out, *extra):
    assert run("evaluate", "--manifest", manifest, "--report-json", out, *extra) == 0
    return json.loads(out.read_text())


@pytest.mark.parametrize("kind, expected", [("identical", 1.0), ("disjoint", 0.0), ("shuffle_collision", 0.0)])
def test_fixture_f_values(fixtures, tmp_path, kind, expected):
    rep = evaluate(fixtures[kind], tmp_path / "r.json")
    assert rep["overall_mean_f"] == expected


def test_report_schema(fixtures, tmp_path):
    rep = evaluate(fixtures["worked_example"], tmp_path / "r.json")
    assert set(rep) == {"config", "pairs", "per_video_mean_f", "overall_mean_f"}
    assert rep["config"] == {
        "color_threshold": 0.97,
        "texture_threshold": 0.97,
        "match_mode": "color_and_texture",
        "aggregation": "per-video",
    }
    (pair,) = rep["pairs"]
    assert set(pair) == {"video", "auto", "user", "n_auto", "n_user", "n_matched", "precision", "recall", "f"}
    assert (pair["n_auto"], pair["n_user"], pair["n_matched"]) == (8, 7, 6)
    assert rep["per_video_mean_f"] == {"worked_example": 0.8}


def test_config_echo_reflects_flags(fixtures, tmp_path):
    rep = evaluate(
        fixtures["identical"], tmp_path / "r.json",
        "--color-threshold", "0.9", "--texture-threshold", "0.95", "--match-mode", "color_or_texture",
        "--aggregation", "flat",
    )
    assert rep["config"] == {
        "color_threshold": 0.9,
        "texture_threshold": 0.95,
        "match_mode": "color_or_texture",
        "aggregation": "flat",
    }


def test_color_only_beats_default_on_collision(fixtures, tmp_path):
    f_and = evaluate(fixtures["shuffle_collision"], tmp_path / "a.json")["overall_mean_f"]
    f_color = evaluate(fixtures["shuffle_collision"], tmp_path / "c.json", "--match-mode", "color_only")["overall_mean_f"]
    assert f_color > f_and


def test_json_is_byte_identical_across_runs(fixtures, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    evaluate(fixtures["worked_example"], a, "--jobs", "1")
    evaluate(fixtures["worked_example"], b, "--jobs", "4")
    assert a.read_bytes() == b.read_bytes()


def test_json_to_stdout(fixtures, capsys):
    assert run("evaluate", "--manifest", fixtures["identical"]) == 0
    assert json.loads(capsys.readouterr().out)["overall_mean_f"] == 1.0


def test_csv_report(fixtures, tmp_path):
    out = tmp_path / "r.csv"
    assert run("evaluate", "--manifest", fixtures["worked_example"], "--report-json", tmp_path / "r.json",
               "--report-csv", out) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [r["row"] for r in rows] == ["pair", "video_mean", "overall"]
    assert rows[0]["n_matched"] == "6"
    assert float(rows[-1]["f"]) == pytest.approx(0.8)


def test_multi_video_manifest(fixtures, tmp_path):
    ident = fixtures["identical"].parent
    disj = fixtures["disjoint"].parent
    doc = {
        "videos": [
            {"id": "A", "automatic": [{"label": "algo", "dir": str(ident / "frames")}],
             "user": [{"label": "u1", "dir": str(ident / "frames")}, {"label": "u2", "dir": str(disj / "user")}]},
            {"id": "B", "automatic": [{"label": "algo", "dir": str(disj / "auto")}],
             "user": [{"label": "u1", "dir": str(disj / "user")}]},
        ]
    }
    m = tmp_path / "m.json"
    m.write_text(json.dumps(doc))
    rep = evaluate(m, tmp_path / "r.json")
    assert len(rep["pairs"]) == 3
    assert rep["per_video_mean_f"] == {"A": 0.5, "B": 0.0}
    assert rep["overall_mean_f"] == 0.25
    flat = evaluate(m, tmp_path / "f.json", "--aggregation", "flat")
    assert flat["overall_mean_f"] == pytest.approx(1 / 3)


# --- exit codes ---------------------------------------------------------------


def test_missing_manifest_exit_code(tmp_path):
    assert run("evaluate", "--manifest", tmp_path / "nope.json") == EXIT_CODES["ManifestNotFoundError"]


def test_schema_violation_exit_code(tmp_path):
    m = tmp_path / "m.json"
    m.write_text('{"videos": 3}')
    assert run("evaluate", "--manifest", m) == EXIT_CODES["SchemaViolationError"]


def test_corrupt_image_exit_code(fixtures, tmp_path):
    d = tmp_path / "copy"
    shutil.copytree(fixtures["identical"].parent, d)
    (d / "frames" / "frame0300.png").write_bytes(b"\x89PNG broken")
    assert run("evaluate", "--manifest", d / "manifest.json") == EXIT_CODES["CorruptImageError"]


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        run("evaluate", "--manifest", "m.json", "--color-threshold", "1.5")
    assert exc.value.code == 2


def test_exit_codes_are_distinct_and_nonzero():
    codes = list(EXIT_CODES.values())
    assert len(set(codes)) == len(codes)
    assert 0 not in codes and 2 not in codes


# --- feature cache ------------------------------------------------------------


def test_features_command_writes_one_record_per_frame(fixtures, tmp_path):
    d = fixtures["worked_example"].parent / "auto"
    out = tmp_path / "auto.vsfc"
    assert run("features", "--dir", d, "--out", out) == 0
    fp, frames = read_cache(out)
    assert fp == directory_fingerprint(d)
    assert len(frames) == 8
    assert [f.features.frame_id for f in frames] == sorted(f.features.frame_id for f in frames)
    assert all(f.features.color.shape == (256,) and f.features.texture.shape == (192,) for f in frames)

    again = tmp_path / "again.vsfc"
    assert run("features", "--dir", d, "--out", again) == 0
    assert out.read_bytes() == again.read_bytes()


def test_cache_header_layout(fixtures, tmp_path):
    d = fixtures["shuffle_collision"].parent / "auto"
    out = tmp_path / "c.vsfc"
    assert run("features", "--dir", d, "--out", out) == 0
    buf = out.read_bytes()
    assert buf[:8] == b"VSUMFEAT"
    assert int.from_bytes(buf[8:12], "little") == 1
    assert int.from_bytes(buf[12:16], "little") == 256
    assert int.from_bytes(buf[16:20], "little") == 192
    assert int.from_bytes(buf[20:24], "little") == 1
    name_len = int.from_bytes(buf[56 + 9 : 56 + 11], "little")
    assert len(buf) == 56 + 11 + name_len + 8 * (256 + 192)


def test_cache_round_trip_is_exact(fixtures, tmp_path):
    d = fixtures["worked_example"].parent / "user"
    frames = extract_directory(d)
    write_cache(tmp_path / "x.vsfc", b"\x01" * 32, frames)
    fp, back = read_cache(tmp_path / "x.vsfc")
    assert fp == b"\x01" * 32
    for a, b in zip(frames, back):
        assert a.features.frame_id == b.features.frame_id
        assert np.array_equal(a.features.color, b.features.color)
        assert np.array_equal(a.features.texture, b.features.texture)


def test_cached_run_matches_uncached(fixtures, tmp_path):
    cache_dir = tmp_path / "cache"
    plain = tmp_path / "plain.json"
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    evaluate(fixtures["worked_example"], plain)
    evaluate(fixtures["worked_example"], first, "--cache", cache_dir)
    assert len(list(cache_dir.glob("*.vsfc"))) == 2
    evaluate(fixtures["worked_example"], second, "--cache", cache_dir)
    assert plain.read_bytes() == first.read_bytes() == second.read_bytes()


def test_cache_from_features_command_is_used(fixtures, tmp_path, monkeypatch):
    root = fixtures["worked_example"].parent
    cache_dir = tmp_path / "cache"
    cache_dir.mkdir()
    for side in ("auto", "user"):
        assert run("features", "--dir", root / side, "--out", cache_dir / f"{side}.vsfc") == 0

    import vsumeval.pipeline as pipeline

    def boom(*a, **k):
        raise AssertionError("features recomputed despite cache")

    monkeypatch.setattr(pipeline, "extract_directory", boom)
    rep = evaluate(fixtures["worked_example"], tmp_path / "r.json", "--cache", cache_dir)
    assert rep["pairs"][0]["n_matched"] == 6


def test_stale_cache_is_not_trusted(fixtures, tmp_path):
    root = tmp_path / "ds"
    shutil.copytree(fixtures["identical"].parent, root)
    cache_dir = tmp_path / "cache"
    evaluate(root / "manifest.json", tmp_path / "a.json", "--cache", cache_dir)
    # replace one frame with a different image of the same name
    Image.new("RGB", (20, 20), (0, 0, 255)).save(root / "frames" / "frame0100.png")
    CacheDirectory(cache_dir)  # index still loads
    rep = evaluate(root / "manifest.json", tmp_path / "b.json", "--cache", cache_dir)
    uncached = evaluate(root / "manifest.json", tmp_path / "c.json")
    assert rep == uncached
    assert len(list(cache_dir.glob("*.vsfc"))) == 2


def test_corrupt_cache_rejected(tmp_path):
    p = tmp_path / "bad.vsfc"
    p.write_bytes(b"VSUMFEAT" + b"\x00" * 10)
    with pytest.raises(CacheError):
        read_cache(p)
    p.write_bytes(b"NOTCACHE" + b"\x00" * 60)
    with pytest.raises(CacheError):
        read_cache(p)


def test_black_frame_warning(tmp_path, caplog):
    d = tmp_path / "black"
    d.mkdir()
    Image.new("RGB", (10, 10), (0, 0, 0)).save(d / "frame1.png")
    out = tmp_path / "b.vsfc"
    assert run("features", "--dir", d, "--out", out) == 0
    assert "black frame" in caplog.text
    _, (frame,) = read_cache(out)
    assert frame.black_frame
    assert np.allclose(frame.features.texture, 1 / 192)


# --- fixtures -----------------------------------------------------------------


def test_make_fixture_command(tmp_path, capsys):
    assert run("make-fixture", "--kind", "shuffle_collision", "--out", tmp_path / "fx", "--seed", "3") == 0
    manifest = tmp_path / "fx" / "manifest.json"
    assert capsys.readouterr().out.strip() == str(manifest)
    a = decode_frame(tmp_path / "fx" / "auto" / "frame0001.png").pixels
    u = decode_frame(tmp_path / "fx" / "user" / "frame0001.png").pixels
    assert not np.array_equal(a, u)
    # same multiset of pixels
    key = lambda px: np.sort(px.reshape(-1, 3).view([("r", "u1"), ("g", "u1"), ("b", "u1")]).ravel())
    assert np.array_equal(key(a), key(u))
    color, texture = frame_scores(a, u)
    assert color == 1.0 and texture < 0.97


def test_fixture_generation_is_deterministic(tmp_path):
    make_fixture("worked_example", tmp_path / "a")
    make_fixture("worked_example", tmp_path / "b")
    for p in sorted((tmp_path / "a").rglob("*.png")):
        assert p.read_bytes() == (tmp_path / "b" / p.relative_to(tmp_path / "a")).read_bytes()
