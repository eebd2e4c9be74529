"""Synthetic keyframe datasets for demos and tests.

``shuffle_collision`` writes an image and a seeded pixel permutation of it:
both have exactly the same color histogram but different spatial layout, so
color-only matching calls them a match and color+texture matching does not.

``worked_example`` reproduces the shape of a real evaluation: 8 automatic
frames, 7 user frames, 6 genuine matches, plus one automatic frame that is a
pixel shuffle of a user frame (a color-only false positive).
"""

from __future__ import annotations

import json
from enum import Enum
from pathlib import Path

import numpy as np
from PIL import Image

from .color_features import color_histogram
from .dataset_io import HsvImage, rgb_array_to_hsv
from .errors import IOFailureError
from .similarity import DEFAULT_THRESHOLD, bhattacharyya
from .texture_features import resize_to_64, texture_descriptor

SCENE_SHAPE = (96, 128)
MAX_SEED_ATTEMPTS = 100


class FixtureKind(str, Enum):
    SHUFFLE_COLLISION = "shuffle_collision"
    IDENTICAL = "identical"
    DISJOINT = "disjoint"
    WORKED_EXAMPLE = "worked_example"


def hsv_to_rgb_array(hsv: np.ndarray) -> np.ndarray:
    """Inverse hexcone conversion to uint8 RGB; H in degrees, S and V in [0, 1]."""
    h = (np.asarray(hsv[..., 0], dtype=np.float64) % 360.0) / 60.0
    s = hsv[..., 1]
    v = hsv[..., 2]
    i = np.floor(h).astype(int) % 6
    f = h - np.floor(h)
    p = v * (1 - s)
    q = v * (1 - s * f)
    t = v * (1 - s * (1 - f))
    choices = [
        np.stack([v, t, p], -1),
        np.stack([q, v, p], -1),
        np.stack([p, v, t], -1),
        np.stack([p, q, v], -1),
        np.stack([t, p, v], -1),
        np.stack([v, p, q], -1),
    ]
    out = np.zeros(hsv.shape, dtype=np.float64)
    for k, c in enumerate(choices):
        out[i == k] = c[i == k]
    return np.clip(np.rint(out * 255.0), 0, 255).astype(np.uint8)


def make_scene(hue: float, shape=SCENE_SHAPE, black_corner: bool = True) -> np.ndarray:
    """Structured RGB image built around one base hue.

    The top half uses ``hue`` and the bottom half ``hue + 20``; brightness
    alternates over a 2x2 checker, a pale disk lowers saturation and the
    top-left quadrant is black. Keep ``hue`` within [0, 340] so the scene
    never straddles the 0/360 seam.
    """
    rows, cols = shape
    yy, xx = np.mgrid[0:rows, 0:cols]
    top = yy < rows // 2
    left = xx < cols // 2
    hsv = np.empty((rows, cols, 3))
    hsv[..., 0] = np.where(top, hue, hue + 20.0)
    disk = (yy - 0.6 * rows) ** 2 + (xx - 0.65 * cols) ** 2 < (0.25 * rows) ** 2
    hsv[..., 1] = np.where(disk, 0.4, 0.95)
    hsv[..., 2] = np.where(top == left, 0.45, 0.95)
    if black_corner:
        hsv[top & left] = 0.0
    return hsv_to_rgb_array(hsv)


def shuffle_pixels(rgb: np.ndarray, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    flat = rgb.reshape(-1, 3)
    return flat[rng.permutation(flat.shape[0])].reshape(rgb.shape)


def jitter(rgb: np.ndarray, seed: int, amplitude: int = 1) -> np.ndarray:
    """Small per-pixel brightness noise, as from re-encoding a neighbouring frame.

    The same offset is added to R, G and B so channel differences (and hue)
    survive except where clipping occurs.
    """
    rng = np.random.default_rng(seed)
    noise = rng.integers(-amplitude, amplitude + 1, size=rgb.shape[:2] + (1,))
    return np.clip(rgb.astype(int) + noise, 0, 255).astype(np.uint8)


def frame_scores(rgb_a: np.ndarray, rgb_b: np.ndarray) -> tuple[float, float]:
    """(color, texture) Bhattacharyya coefficients between two RGB arrays."""
    ha = HsvImage.from_array(rgb_array_to_hsv(rgb_a))
    hb = HsvImage.from_array(rgb_array_to_hsv(rgb_b))
    color = bhattacharyya(color_histogram(ha), color_histogram(hb))
    texture = bhattacharyya(texture_descriptor(resize_to_64(ha)), texture_descriptor(resize_to_64(hb)))
    return color, texture


def _save(rgb: np.ndarray, path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(rgb).save(path, format="PNG")


def _manifest(video_id: str, auto: list[tuple[str, str]], user: list[tuple[str, str]]) -> dict:
    return {
        "videos": [
            {
                "id": video_id,
                "automatic": [{"label": l, "dir": d} for l, d in auto],
                "user": [{"label": l, "dir": d} for l, d in user],
            }
        ]
    }


def shuffle_collision_pair(seed: int = 0) -> tuple[np.ndarray, np.ndarray, int]:
    """Scene + shuffled copy whose texture score is below the default threshold.

    Returns ``(original, shuffled, seed_used)``; the seed is advanced until the
    texture score drops below 0.97.
    """
    original = make_scene(hue=210.0)
    for s in range(seed, seed + MAX_SEED_ATTEMPTS):
        shuffled = shuffle_pixels(original, s)
        _, texture = frame_scores(original, shuffled)
        if texture < DEFAULT_THRESHOLD:
            return original, shuffled, s
    raise RuntimeError("could not generate a texture-distinct shuffle")  # pragma: no cover


# (frame id, hue) of the user summary in the worked example; 1861 is the
# frame that a shuffled automatic frame collides with on color.
WORKED_USER = [(120, 10.0), (480, 55.0), (905, 100.0), (1290, 145.0), (1620, 190.0), (1861, 235.0), (2210, 280.0)]
WORKED_AUTO_MATCHES = {130: 120, 470: 480, 911: 905, 1300: 1290, 1633: 1620, 2200: 2210}
WORKED_COLLISION = (1921, 1861)
WORKED_NOVEL = (2500, 325.0)


def make_fixture(kind, out_dir, seed: int = 0) -> Path:
    """Write a fixture dataset plus ``manifest.json`` under ``out_dir``.

    Returns the manifest path.
    """
    kind = FixtureKind(kind)
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if kind is FixtureKind.SHUFFLE_COLLISION:
            original, shuffled, _ = shuffle_collision_pair(seed)
            _save(original, out / "auto" / "frame0001.png")
            _save(shuffled, out / "user" / "frame0001.png")
            manifest = _manifest("shuffle", [("auto", "auto")], [("user", "user")])

        elif kind is FixtureKind.IDENTICAL:
            for k, hue in enumerate((10.0, 75.0, 140.0, 205.0, 270.0)):
                _save(make_scene(hue), out / "frames" / f"frame{100 * (k + 1):04d}.png")
            manifest = _manifest("identical", [("auto", "frames")], [("user", "frames")])

        elif kind is FixtureKind.DISJOINT:
            for k in range(3):
                _save(make_scene(10.0, black_corner=False), out / "auto" / f"frame{k + 1:04d}.png")
                _save(make_scene(240.0, black_corner=False), out / "user" / f"frame{k + 1:04d}.png")
            manifest = _manifest("disjoint", [("auto", "auto")], [("user", "user")])

        else:
            scenes = {fid: make_scene(h) for fid, h in WORKED_USER}
            for fid, img in scenes.items():
                _save(img, out / "user" / f"frame{fid}.png")
            for auto_id, user_id in WORKED_AUTO_MATCHES.items():
                _save(jitter(scenes[user_id], seed + auto_id), out / "auto" / f"frame{auto_id}.png")
            auto_id, user_id = WORKED_COLLISION
            _save(shuffle_pixels(scenes[user_id], seed), out / "auto" / f"frame{auto_id}.png")
            auto_id, hue = WORKED_NOVEL
            _save(make_scene(hue), out / "auto" / f"frame{auto_id}.png")
            manifest = _manifest("worked_example", [("auto", "auto")], [("user", "user")])

        manifest_path = out / "manifest.json"
        manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IOFailureError(f"cannot write fixture to {out}: {exc}") from exc
    return manifest_path
