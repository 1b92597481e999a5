"""Grayscale image files: 8-bit PGM (P2/P5) read and write, PNG read."""

from __future__ import annotations

import os

import numpy as np

from momentcs.errors import ImageFormatError, MalformedHeader, TruncatedData, UnsupportedDepth

_WHITESPACE = b" \t\n\r\v\f"


class _HeaderReader:
    def __init__(self, data, path):
        self.data = data
        self.pos = 2
        self.path = path

    def _skip(self):
        data = self.data
        while self.pos < len(data):
            ch = data[self.pos : self.pos + 1]
            if ch in _WHITESPACE:
                self.pos += 1
            elif ch == b"#":
                while self.pos < len(data) and data[self.pos : self.pos + 1] not in (b"\n", b"\r"):
                    self.pos += 1
            else:
                break

    def integer(self, what):
        self._skip()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos : self.pos + 1].isdigit():
            self.pos += 1
        if self.pos == start:
            raise MalformedHeader(f"expected {what}", self.path, start)
        return int(self.data[start : self.pos])


def _read_pgm(data, path):
    magic = data[:2]
    hdr = _HeaderReader(data, path)
    width = hdr.integer("width")
    height = hdr.integer("height")
    maxval_at = hdr.pos
    maxval = hdr.integer("maxval")
    if width < 1 or height < 1:
        raise MalformedHeader(f"invalid dimensions {width}x{height}", path, 2)
    if maxval != 255:
        raise UnsupportedDepth(f"only 8-bit PGM (maxval 255) is supported, got maxval {maxval}", path, maxval_at)
    count = width * height

    if magic == b"P5":
        if hdr.pos >= len(data) or data[hdr.pos] not in _WHITESPACE:
            raise MalformedHeader("missing whitespace after maxval", path, hdr.pos)
        start = hdr.pos + 1
        raster = data[start : start + count]
        if len(raster) < count:
            raise TruncatedData(f"expected {count} pixel bytes, found {len(raster)}", path, start + len(raster))
        return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).astype(np.float64)

    values = np.empty(count, dtype=np.float64)
    for i in range(count):
        try:
            v = hdr.integer("pixel value")
        except MalformedHeader as exc:
            raise TruncatedData(f"expected {count} pixel values, found {i}", path, exc.offset) from None
        if v > maxval:
            raise ImageFormatError(f"pixel value {v} exceeds maxval {maxval}", path, hdr.pos)
        values[i] = v
    return values.reshape(height, width)


def load_image(path):
    """Read a grayscale image as a float64 array on the [0, 255] scale.

    PGM (P2 or P5, maxval 255) is parsed directly; PNG goes through Pillow
    and is converted to luminance. A missing file raises ``FileNotFoundError``.
    """
    path = os.fspath(path)
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] in (b"P2", b"P5"):
        return _read_pgm(data, path)
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        return _read_png(path)
    if data[:1] == b"P" and data[1:2].isdigit():
        raise ImageFormatError(f"unsupported netpbm variant {data[:2].decode()}", path, 0)
    raise ImageFormatError("unrecognized image format", path, 0)


def _read_png(path):
    from PIL import Image

    with Image.open(path) as im:
        if im.mode in ("I;16", "I;16B", "I;16L", "I"):
            raise UnsupportedDepth(f"only 8-bit PNG is supported, got mode {im.mode}", path)
        return np.asarray(im.convert("L"), dtype=np.float64)


def to_uint8(img):
    """Round half away from zero, then clamp to [0, 255]."""
    img = np.asarray(img, dtype=np.float64)
    rounded = np.sign(img) * np.floor(np.abs(img) + 0.5)
    return np.clip(rounded, 0, 255).astype(np.uint8)


def save_image(img, path):
    """Write ``img`` as binary PGM (P5)."""
    pixels = to_uint8(img)
    if pixels.ndim != 2:
        raise ValueError(f"expected a 2D grayscale image, got shape {pixels.shape}")
    h, w = pixels.shape
    path = os.fspath(path)
    try:
        with open(path, "wb") as fh:
            fh.write(b"P5\n%d %d\n255\n" % (w, h))
            fh.write(pixels.tobytes())
    except OSError as exc:
        raise OSError(f"cannot write image {path}: {exc.strerror or exc}") from exc
