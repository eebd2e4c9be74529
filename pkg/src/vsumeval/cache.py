"""Binary feature cache.

Layout (all integers and floats little-endian)::

    header   magic b"VSUMFEAT" | version u32 | n_color u32 | n_texture u32
             | n_records u32 | fingerprint 32 bytes (sha256)
    record   frame_id u64 | flags u8 | name_len u16 | name utf-8
             | n_color x f64 | n_texture x f64

``flags`` bit 0 marks a black frame whose texture descriptor was replaced by
the uniform vector. The fingerprint covers the names, sizes and content
hashes of the directory's image files, so a cache is only reused when the
images are unchanged.
"""

from __future__ import annotations

import hashlib
import struct
from pathlib import Path

import numpy as np

from .color_features import N_COLOR_BINS
from .dataset_io import list_images
from .errors import CacheError, IOFailureError
from .features import ExtractedFrame
from .matching import FrameFeatures
from .texture_features import N_TEXTURE_VALUES

MAGIC = b"VSUMFEAT"
VERSION = 1
CACHE_SUFFIX = ".vsfc"

_HEADER = struct.Struct("<8sIIII32s")
_RECORD_HEAD = struct.Struct("<QBH")
_FLAG_BLACK = 0x01


def directory_fingerprint(directory) -> bytes:
    """sha256 over (name, size, sha256(content)) of every image, by name."""
    outer = hashlib.sha256()
    for p in list_images(Path(directory)):
        data = p.read_bytes()
        outer.update(p.name.encode("utf-8") + b"\0")
        outer.update(struct.pack("<Q", len(data)))
        outer.update(hashlib.sha256(data).digest())
    return outer.digest()


def write_cache(path, fingerprint: bytes, frames: list[ExtractedFrame]):
    chunks = [_HEADER.pack(MAGIC, VERSION, N_COLOR_BINS, N_TEXTURE_VALUES, len(frames), fingerprint)]
    for fr in frames:
        f = fr.features
        name = f.name.encode("utf-8")
        chunks.append(_RECORD_HEAD.pack(f.frame_id, _FLAG_BLACK if fr.black_frame else 0, len(name)))
        chunks.append(name)
        chunks.append(np.asarray(f.color, dtype="<f8").tobytes())
        chunks.append(np.asarray(f.texture, dtype="<f8").tobytes())
    try:
        Path(path).write_bytes(b"".join(chunks))
    except OSError as exc:
        raise IOFailureError(f"cannot write feature cache {path}: {exc}") from exc


def read_cache(path) -> tuple[bytes, list[ExtractedFrame]]:
    """Return ``(fingerprint, frames)`` stored in a cache file."""
    try:
        buf = Path(path).read_bytes()
    except OSError as exc:
        raise CacheError(f"cannot read feature cache {path}: {exc}") from exc
    if len(buf) < _HEADER.size:
        raise CacheError(f"truncated feature cache header: {path}")
    magic, version, n_color, n_texture, n_records, fingerprint = _HEADER.unpack_from(buf, 0)
    if magic != MAGIC:
        raise CacheError(f"not a feature cache: {path}")
    if version != VERSION or n_color != N_COLOR_BINS or n_texture != N_TEXTURE_VALUES:
        raise CacheError(
            f"incompatible feature cache {path}: version {version}, sizes {n_color}/{n_texture}"
        )
    off = _HEADER.size
    frames = []
    try:
        for _ in range(n_records):
            frame_id, flags, name_len = _RECORD_HEAD.unpack_from(buf, off)
            off += _RECORD_HEAD.size
            name = buf[off : off + name_len].decode("utf-8")
            off += name_len
            color = np.frombuffer(buf, dtype="<f8", count=n_color, offset=off).astype(np.float64)
            off += 8 * n_color
            texture = np.frombuffer(buf, dtype="<f8", count=n_texture, offset=off).astype(np.float64)
            off += 8 * n_texture
            frames.append(
                ExtractedFrame(FrameFeatures(frame_id, color, texture, name), bool(flags & _FLAG_BLACK))
            )
    except (struct.error, ValueError, UnicodeDecodeError) as exc:
        raise CacheError(f"corrupt feature cache {path}: {exc}") from exc
    if off != len(buf):
        raise CacheError(f"trailing bytes in feature cache {path}")
    return fingerprint, frames


class CacheDirectory:
    """Directory of cache files, looked up by directory fingerprint.

    Any ``*.vsfc`` file in the directory is indexed, so caches written by the
    ``features`` command can be dropped in by hand. Missing entries are
    written as ``<fingerprint hex>.vsfc``.
    """

    def __init__(self, root):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IOFailureError(f"cannot create cache directory {root}: {exc}") from exc
        self._index: dict[bytes, Path] = {}
        for p in sorted(self.root.glob("*" + CACHE_SUFFIX)):
            try:
                fp, _ = read_cache(p)
            except CacheError:
                continue
            self._index.setdefault(fp, p)

    def get(self, fingerprint: bytes) -> list[ExtractedFrame] | None:
        p = self._index.get(fingerprint)
        if p is None:
            return None
        fp, frames = read_cache(p)
        return frames if fp == fingerprint else None

    def put(self, fingerprint: bytes, frames: list[ExtractedFrame]) -> Path:
        p = self.root / (fingerprint.hex() + CACHE_SUFFIX)
        write_cache(p, fingerprint, frames)
        self._index[fingerprint] = p
        return p
