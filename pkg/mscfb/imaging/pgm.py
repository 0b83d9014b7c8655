import io
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike, NDArray
from PIL import Image

from mscfb.exceptions import (
    BadMagicError,
    InvalidGeometryError,
    MalformedHeaderError,
    TruncatedDataError,
    UnsupportedMaxvalError,
)

PGM_MAGIC = b"P5"
PGM_MAXVAL = 255
WHITESPACE = b" \t\n\r\v\f"


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale raster held as a (height, width) uint8 array, row-major"""

    pixels: NDArray[np.uint8]

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2 or pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise InvalidGeometryError(f"Image must be a non-empty 2-D raster, got {pixels.shape}")
        if pixels.dtype != np.uint8:
            if pixels.size and (pixels.min() < 0 or pixels.max() > 255):
                raise InvalidGeometryError("Pixel intensities must lie in [0, 255]")
            pixels = pixels.astype(np.uint8)
        pixels = np.ascontiguousarray(pixels)
        pixels.setflags(write=False)
        object.__setattr__(self, "pixels", pixels)

    @classmethod
    def from_values(cls, width: int, height: int, values: ArrayLike) -> "GrayImage":
        """Builds an image from a flat row-major sequence of intensities"""
        flat = np.asarray(values)
        if flat.size != width * height:
            raise InvalidGeometryError(
                f"{flat.size} pixel values cannot fill a {width}x{height} image"
            )
        return cls(flat.reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __hash__(self) -> int:
        return hash((self.pixels.shape, self.pixels.tobytes()))


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Reads one header token, skipping whitespace and '#' comments"""
    while pos < len(data):
        if data[pos] in WHITESPACE:
            pos += 1
        elif data[pos] == ord("#"):
            end = data.find(b"\n", pos)
            if end == -1:
                raise MalformedHeaderError("Header comment is not terminated")
            pos = end + 1
        else:
            break

    start = pos
    while pos < len(data) and data[pos] not in WHITESPACE and data[pos] != ord("#"):
        pos += 1
    if start == pos:
        raise MalformedHeaderError("Header ended before all fields were read")

    return data[start:pos], pos


def _header_int(token: bytes, field: str) -> int:
    if not token.isdigit():
        raise MalformedHeaderError(f"PGM {field} is not a decimal integer: {token!r}")
    return int(token)


def load_pgm(data: bytes) -> GrayImage:
    """Decodes a binary (P5) PGM with maxval 255"""
    if data[:2] != PGM_MAGIC:
        raise BadMagicError(f"Not a binary PGM: magic is {data[:2]!r}, expected {PGM_MAGIC!r}")

    pos = 2
    if pos >= len(data) or (data[pos] not in WHITESPACE and data[pos] != ord("#")):
        raise MalformedHeaderError("Magic number must be followed by whitespace")

    token, pos = _next_token(data, pos)
    width = _header_int(token, "width")
    token, pos = _next_token(data, pos)
    height = _header_int(token, "height")
    token, pos = _next_token(data, pos)
    maxval = _header_int(token, "maxval")

    if width < 1 or height < 1:
        raise MalformedHeaderError(f"Image dimensions must be positive, got {width}x{height}")
    if maxval != PGM_MAXVAL:
        raise UnsupportedMaxvalError(f"Only maxval {PGM_MAXVAL} is supported, got {maxval}")
    if pos >= len(data) or data[pos] not in WHITESPACE:
        raise MalformedHeaderError("maxval must be followed by a single whitespace byte")
    pos += 1

    expected = width * height
    available = len(data) - pos
    if available < expected:
        raise TruncatedDataError(
            f"Raster holds {available} bytes, expected {expected} ({width}x{height})"
        )

    raster = np.frombuffer(data, dtype=np.uint8, count=expected, offset=pos)

    return GrayImage(raster.reshape(height, width))


def read_pgm(path: str | Path) -> GrayImage:
    """Reads and decodes a PGM file"""
    return load_pgm(Path(path).read_bytes())


def encode_pgm(img: GrayImage) -> bytes:
    """Encodes an image as binary PGM"""
    buffer = io.BytesIO()
    Image.fromarray(np.asarray(img.pixels, dtype=np.uint8)).save(buffer, format="PPM")
    return buffer.getvalue()


def save_pgm(img: GrayImage, path: str | Path) -> str:
    """Writes an image to ``path`` as binary PGM"""
    Path(path).write_bytes(encode_pgm(img))
    logging.debug(f"Saved {img.width}x{img.height} PGM to {path}")
    return str(path)
