"""Per-frame feature extraction and summary loading."""

from __future__ import annotations

from concurrent.futures import Executor
from dataclasses import dataclass
from pathlib import Path

from .color_features import color_histogram
from .dataset_io import decode_frame, rgb_to_hsv, summary_frame_paths
from .matching import FrameFeatures, SummarySet
from .texture_features import is_zero_frame, resize_to_64, texture_descriptor


@dataclass(frozen=True)
class ExtractedFrame:
    features: FrameFeatures
    black_frame: bool = False


def extract_frame(path, frame_id: int) -> ExtractedFrame:
    """Decode one keyframe and compute its color histogram and texture descriptor."""
    frame = decode_frame(path, fallback_id=frame_id)
    hsv = rgb_to_hsv(frame)
    small = resize_to_64(hsv)
    black = is_zero_frame(small)
    feats = FrameFeatures(
        frame_id=frame_id,
        color=color_histogram(hsv),
        texture=texture_descriptor(small),
        name=Path(path).name,
    )
    return ExtractedFrame(feats, black)


def extract_directory(directory, executor: Executor | None = None) -> list[ExtractedFrame]:
    """Features for every image in a summary directory, in matching order."""
    items = summary_frame_paths(directory)
    if executor is None:
        return [extract_frame(p, fid) for fid, p in items]
    futures = [executor.submit(extract_frame, p, fid) for fid, p in items]
    return [f.result() for f in futures]


def black_frame_warnings(directory, frames: list[ExtractedFrame]) -> list[str]:
    return [
        f"black frame {f.features.name} in {directory}: uniform texture descriptor substituted"
        for f in frames
        if f.black_frame
    ]


def to_summary_set(video_id: str, kind: str, label: str, frames: list[ExtractedFrame]) -> SummarySet:
    return SummarySet(video_id=video_id, kind=kind, label=label, frames=[f.features for f in frames])
