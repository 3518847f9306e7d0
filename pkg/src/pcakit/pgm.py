"""Greyscale Netpbm (PGM) reading and writing, 8-bit only."""
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, NonFiniteError, ShapeError
from .linalg import frozen

_WHITESPACE = b" \t\n\r\v\f"


@dataclass(frozen=True)
class GrayImage:
    """Pixel intensities in [0, 255], indexed ``[row, column]``."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.array(self.pixels, dtype=np.float64)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ShapeError(f"image must be a non-empty 2-D array, got shape {px.shape}")
        if not np.all(np.isfinite(px)):
            raise NonFiniteError("image contains NaN or infinite pixels")
        if px.min() < 0.0 or px.max() > 255.0:
            raise ShapeError(f"pixel values must lie in [0, 255], got [{px.min()}, {px.max()}]")
        object.__setattr__(self, "pixels", frozen(px))

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]


class _Reader:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def skip_space(self):
        data = self.data
        while self.pos < len(data):
            ch = data[self.pos : self.pos + 1]
            if ch == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            elif ch in _WHITESPACE:
                self.pos += 1
            else:
                break

    def token(self, what):
        self.skip_space()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos : self.pos + 1] not in _WHITESPACE + b"#":
            self.pos += 1
        tok = self.data[start : self.pos]
        if not tok:
            raise FormatError(f"truncated header: missing {what}")
        return tok

    def integer(self, what):
        tok = self.token(what)
        if not tok.isdigit():
            raise FormatError(f"invalid {what}: {tok[:20]!r}")
        return int(tok)


def decode_pgm(data):
    """Decode P2 (ASCII) or P5 (binary) bytes. Values are not rescaled by maxval."""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"bad magic number {magic!r}: expected b'P2' or b'P5'")
    rd = _Reader(data)
    rd.pos = 2
    width = rd.integer("width")
    height = rd.integer("height")
    maxval = rd.integer("maxval")
    if width < 1 or height < 1:
        raise FormatError(f"image dimensions must be positive, got {width}x{height}")
    if not 1 <= maxval <= 255:
        raise FormatError(f"maxval {maxval} unsupported: only 8-bit images (maxval <= 255) are accepted")
    count = width * height

    if magic == b"P5":
        if rd.pos >= len(data) or data[rd.pos : rd.pos + 1] not in _WHITESPACE:
            raise FormatError("missing whitespace after maxval")
        start = rd.pos + 1
        raster = data[start : start + count]
        if len(raster) < count:
            raise FormatError(f"truncated payload: expected {count} pixel bytes, found {len(raster)}")
        px = np.frombuffer(raster, dtype=np.uint8).astype(np.float64)
    else:
        values = []
        for i in range(count):
            rd.skip_space()
            if rd.pos >= len(data):
                raise FormatError(f"truncated payload: expected {count} pixel values, found {i}")
            values.append(rd.integer(f"pixel {i}"))
        px = np.array(values, dtype=np.float64)
    if px.max() > maxval:
        raise FormatError(f"pixel value {int(px.max())} exceeds maxval {maxval}")
    return GrayImage(px.reshape(height, width))


def load_pgm(path):
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        return decode_pgm(data)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def quantize(pixels):
    """Round half away from zero, then clamp to [0, 255]."""
    px = np.asarray(pixels, dtype=np.float64)
    rounded = np.sign(px) * np.floor(np.abs(px) + 0.5)
    return np.clip(rounded, 0, 255).astype(np.uint8)


def encode_pgm(pixels):
    """Binary P5 encoding with maxval 255. Accepts a GrayImage or any real array."""
    px = pixels.pixels if isinstance(pixels, GrayImage) else np.asarray(pixels, dtype=np.float64)
    if px.ndim != 2:
        raise ShapeError(f"image must be 2-D, got shape {px.shape}")
    if not np.all(np.isfinite(px)):
        raise NonFiniteError("image contains NaN or infinite pixels")
    header = f"P5\n{px.shape[1]} {px.shape[0]}\n255\n".encode("ascii")
    return header + quantize(px).tobytes()


def save_pgm(image, path):
    with open(path, "wb") as fh:
        fh.write(encode_pgm(image))
