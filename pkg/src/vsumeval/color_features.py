"""Joint HSV color histogram with 32 hue x 4 saturation x 2 value bins."""

import numpy as np

from .errors import FeatureError

H_BINS, S_BINS, V_BINS = 32, 4, 2
N_COLOR_BINS = H_BINS * S_BINS * V_BINS


def quantize_hsv(h: float, s: float, v: float) -> int:
    """Bin index of one HSV triple, H-major: ``hi * 8 + si * 2 + vi``.

    Values on the upper edge (s == 1, v == 1) fall in the top bin.
    """
    if not (0.0 <= h < 360.0 and 0.0 <= s <= 1.0 and 0.0 <= v <= 1.0):
        raise ValueError(f"HSV triple out of range: ({h}, {s}, {v})")
    hi = min(int(h / 360.0 * H_BINS), H_BINS - 1)
    si = min(int(s * S_BINS), S_BINS - 1)
    vi = min(int(v * V_BINS), V_BINS - 1)
    return hi * (S_BINS * V_BINS) + si * V_BINS + vi


def quantize_hsv_array(hsv: np.ndarray) -> np.ndarray:
    """Vectorized :func:`quantize_hsv` over an ``(..., 3)`` array."""
    h, s, v = hsv[..., 0], hsv[..., 1], hsv[..., 2]
    hi = np.minimum((h / 360.0 * H_BINS).astype(np.int64), H_BINS - 1)
    si = np.minimum((s * S_BINS).astype(np.int64), S_BINS - 1)
    vi = np.minimum((v * V_BINS).astype(np.int64), V_BINS - 1)
    return hi * (S_BINS * V_BINS) + si * V_BINS + vi


def color_histogram(img) -> np.ndarray:
    """L1-normalized 256-bin histogram of an :class:`~vsumeval.dataset_io.HsvImage`.

    Computed at full resolution; the result sums to 1.
    """
    pixels = img.pixels.reshape(-1, 3)
    n = pixels.shape[0]
    if n == 0:
        raise FeatureError("cannot build a color histogram of an empty image")
    counts = np.bincount(quantize_hsv_array(pixels), minlength=N_COLOR_BINS)
    return counts.astype(np.float64) / n
