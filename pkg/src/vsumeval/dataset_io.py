"""Manifest loading, keyframe decoding and RGB -> HSV conversion."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    CorruptImageError,
    EmptySummaryDirectoryError,
    ManifestNotFoundError,
    SchemaViolationError,
    UnsupportedFormatError,
)
from .similarity import EvalConfig

SUPPORTED_EXTENSIONS = {".png", ".jpg", ".jpeg", ".bmp", ".ppm"}
# PIL format names accepted after sniffing the file content
_SUPPORTED_PIL_FORMATS = {"PNG", "JPEG", "BMP", "PPM"}

_TRAILING_DIGITS = re.compile(r"(\d+)$")


@dataclass(frozen=True)
class FrameImage:
    """One decoded keyframe.

    ``pixels`` is a ``(height, width, 3)`` uint8 array in row-major order.
    """

    frame_id: int
    width: int
    height: int
    pixels: np.ndarray
    source_path: str = ""

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"frame must be at least 1x1, got {self.width}x{self.height}")
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError(
                f"pixel array shape {self.pixels.shape} does not match "
                f"{self.height}x{self.width}x3"
            )


@dataclass(frozen=True)
class HsvImage:
    """HSV raster with H in degrees [0, 360), S and V in [0, 1].

    ``pixels`` is a ``(height, width, 3)`` float64 array.
    """

    width: int
    height: int
    pixels: np.ndarray

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "HsvImage":
        arr = np.asarray(arr, dtype=np.float64)
        return cls(width=arr.shape[1], height=arr.shape[0], pixels=arr)


@dataclass(frozen=True)
class SummaryRef:
    label: str
    dir: Path


@dataclass(frozen=True)
class VideoEntry:
    video_id: str
    automatic: list[SummaryRef]
    user: list[SummaryRef]


@dataclass
class EvaluationJob:
    video_entries: list[VideoEntry]
    config: EvalConfig = field(default_factory=EvalConfig)

    def pairs(self):
        """Yield ``(video_id, auto_ref, user_ref)`` for every pair to evaluate."""
        for entry in self.video_entries:
            for auto in entry.automatic:
                for user in entry.user:
                    yield entry.video_id, auto, user

    @property
    def n_pairs(self) -> int:
        return sum(len(e.automatic) * len(e.user) for e in self.video_entries)


# ---------------------------------------------------------------------------
# manifest


def _expect(cond: bool, where: str, msg: str):
    if not cond:
        raise SchemaViolationError(f"manifest field {where}: {msg}")


def _parse_refs(raw, where: str, base: Path) -> list[SummaryRef]:
    _expect(isinstance(raw, list), where, "expected a list")
    _expect(len(raw) > 0, where, "expected at least one summary")
    refs = []
    for i, item in enumerate(raw):
        loc = f"{where}[{i}]"
        _expect(isinstance(item, dict), loc, "expected an object")
        for key in ("label", "dir"):
            _expect(key in item, f"{loc}.{key}", "missing")
            _expect(
                isinstance(item[key], str) and item[key] != "",
                f"{loc}.{key}",
                "expected a non-empty string",
            )
        path = Path(item["dir"])
        if not path.is_absolute():
            path = base / path
        refs.append(SummaryRef(label=item["label"], dir=path))
    return refs


def list_images(directory: Path) -> list[Path]:
    """Image files (supported extensions) directly inside ``directory``, sorted by name."""
    return sorted(
        (p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in SUPPORTED_EXTENSIONS),
        key=lambda p: p.name,
    )


def _check_summary_dir(ref: SummaryRef, where: str):
    if not ref.dir.is_dir():
        raise SchemaViolationError(f"manifest field {where}.dir: directory not found: {ref.dir}")
    if not list_images(ref.dir):
        raise EmptySummaryDirectoryError(f"summary directory contains no images: {ref.dir}")


def load_manifest(path, config: EvalConfig | None = None) -> EvaluationJob:
    """Read and validate a JSON manifest.

    Relative summary directories are resolved against the manifest's own
    directory. Raises :class:`ManifestNotFoundError`,
    :class:`SchemaViolationError` (naming the offending field) or
    :class:`EmptySummaryDirectoryError`.
    """
    path = Path(path)
    if not path.is_file():
        raise ManifestNotFoundError(f"manifest not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaViolationError(f"manifest is not valid JSON: {exc}") from exc

    _expect(isinstance(doc, dict), "<root>", "expected an object")
    _expect("videos" in doc, "videos", "missing")
    videos = doc["videos"]
    _expect(isinstance(videos, list), "videos", "expected a list")
    _expect(len(videos) > 0, "videos", "expected at least one video")

    base = path.parent
    entries = []
    seen_videos = set()
    for i, raw in enumerate(videos):
        loc = f"videos[{i}]"
        _expect(isinstance(raw, dict), loc, "expected an object")
        _expect("id" in raw, f"{loc}.id", "missing")
        _expect(isinstance(raw["id"], str) and raw["id"] != "", f"{loc}.id", "expected a non-empty string")
        _expect(raw["id"] not in seen_videos, f"{loc}.id", f"duplicate video id {raw['id']!r}")
        seen_videos.add(raw["id"])
        for kind in ("automatic", "user"):
            _expect(kind in raw, f"{loc}.{kind}", "missing")
        automatic = _parse_refs(raw["automatic"], f"{loc}.automatic", base)
        user = _parse_refs(raw["user"], f"{loc}.user", base)

        labels = set()
        for kind, refs in (("automatic", automatic), ("user", user)):
            for j, ref in enumerate(refs):
                where = f"{loc}.{kind}[{j}]"
                _expect(ref.label not in labels, f"{where}.label", f"duplicate label {ref.label!r}")
                labels.add(ref.label)
                _check_summary_dir(ref, where)
        entries.append(VideoEntry(video_id=raw["id"], automatic=automatic, user=user))

    return EvaluationJob(video_entries=entries, config=config or EvalConfig())


# ---------------------------------------------------------------------------
# frames


def parse_frame_id(path) -> int | None:
    """Trailing digit run of the filename stem, or None."""
    m = _TRAILING_DIGITS.search(Path(path).stem)
    return int(m.group(1)) if m else None


def decode_frame(path, fallback_id: int | None = None) -> FrameImage:
    """Decode a PNG/JPEG/BMP/PPM keyframe into an 8-bit RGB :class:`FrameImage`.

    The frame id comes from the trailing digits of the filename stem. Files
    without digits get ``fallback_id`` (the caller passes the lexicographic
    position within the summary directory), or 0 when decoding standalone.
    """
    path = Path(path)
    if path.suffix.lower() not in SUPPORTED_EXTENSIONS:
        raise UnsupportedFormatError(f"unsupported image format: {path}")
    try:
        with Image.open(path) as im:
            if im.format not in _SUPPORTED_PIL_FORMATS:
                raise UnsupportedFormatError(f"unsupported image format {im.format}: {path}")
            im.load()
            rgb = np.asarray(im.convert("RGB"), dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise CorruptImageError(f"cannot identify image: {path}") from exc
    except (OSError, SyntaxError, ValueError) as exc:
        raise CorruptImageError(f"corrupt image {path}: {exc}") from exc

    frame_id = parse_frame_id(path)
    if frame_id is None:
        frame_id = fallback_id if fallback_id is not None else 0
    h, w = rgb.shape[:2]
    return FrameImage(frame_id=frame_id, width=w, height=h, pixels=rgb, source_path=str(path))


def summary_frame_paths(directory) -> list[tuple[int, Path]]:
    """Frame ids and paths of a summary directory in matching order.

    Order is frame id ascending, ties broken by filename. Duplicate frame ids
    are rejected because matched pairs are reported by frame id.
    """
    files = list_images(Path(directory))
    if not files:
        raise EmptySummaryDirectoryError(f"summary directory contains no images: {directory}")
    ids = []
    for pos, p in enumerate(files):
        fid = parse_frame_id(p)
        ids.append((pos if fid is None else fid, p))
    ids.sort(key=lambda t: (t[0], t[1].name))
    for (a, pa), (b, pb) in zip(ids, ids[1:]):
        if a == b:
            raise SchemaViolationError(
                f"duplicate frame id {a} in {directory}: {pa.name}, {pb.name}"
            )
    return ids


# ---------------------------------------------------------------------------
# color conversion


def rgb_array_to_hsv(rgb: np.ndarray) -> np.ndarray:
    """Hexcone RGB -> HSV on an ``(..., 3)`` uint8 array.

    Returns float64 with H in degrees [0, 360) (0 for achromatic pixels),
    S and V in [0, 1].
    """
    x = np.asarray(rgb, dtype=np.float64) / 255.0
    r, g, b = x[..., 0], x[..., 1], x[..., 2]
    v = x.max(axis=-1)
    mn = x.min(axis=-1)
    delta = v - mn

    s = np.zeros_like(v)
    np.divide(delta, v, out=s, where=v > 0)

    chroma = delta > 0
    safe = np.where(chroma, delta, 1.0)
    h = np.zeros_like(v)
    rmax = chroma & (v == r)
    gmax = chroma & (v == g) & ~rmax
    bmax = chroma & ~rmax & ~gmax
    h[rmax] = np.mod((g[rmax] - b[rmax]) / safe[rmax], 6.0)
    h[gmax] = (b[gmax] - r[gmax]) / safe[gmax] + 2.0
    h[bmax] = (r[bmax] - g[bmax]) / safe[bmax] + 4.0
    h *= 60.0
    h[h >= 360.0] -= 360.0
    return np.stack([h, s, v], axis=-1)


def rgb_to_hsv(img: FrameImage) -> HsvImage:
    return HsvImage(width=img.width, height=img.height, pixels=rgb_array_to_hsv(img.pixels))
