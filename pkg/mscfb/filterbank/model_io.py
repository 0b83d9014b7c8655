"""Binary persistence of a FilterBankSet.

Layout (little-endian)::

    b"MSCFB1"
    u32 format version (1)
    u32 C, M, D, block_width, block_height, image_width, image_height
    f64 alpha
    C x (u32 byte length, UTF-8 class id)
    C*M*D f64 coefficients: banks in class order, filters in block order, pixels in order
"""

import logging
import struct
from pathlib import Path

import numpy as np

from mscfb.exceptions import ModelFormatError
from mscfb.filterbank.bank import CorrelationFilterBank, FilterBankSet
from mscfb.imaging.blocks import BlockSpec

MODEL_MAGIC = b"MSCFB1"
MODEL_VERSION = 1

_HEADER = struct.Struct("<I7Id")
_LENGTH = struct.Struct("<I")


def encode_model(banks: FilterBankSet) -> bytes:
    spec = banks.spec
    parts = [
        MODEL_MAGIC,
        _HEADER.pack(
            MODEL_VERSION,
            len(banks),
            spec.m,
            spec.d,
            spec.block_width,
            spec.block_height,
            spec.image_width,
            spec.image_height,
            float(banks.alpha),
        ),
    ]
    for class_id in banks.class_ids:
        encoded = class_id.encode("utf-8")
        parts.append(_LENGTH.pack(len(encoded)))
        parts.append(encoded)
    parts.append(np.ascontiguousarray(banks.matrix, dtype="<f8").tobytes())

    return b"".join(parts)


def decode_model(data: bytes) -> FilterBankSet:
    if data[: len(MODEL_MAGIC)] != MODEL_MAGIC:
        raise ModelFormatError(f"Not a model file: magic is {data[: len(MODEL_MAGIC)]!r}")
    pos = len(MODEL_MAGIC)

    try:
        version, c, m, d, bw, bh, iw, ih, alpha = _HEADER.unpack_from(data, pos)
    except struct.error as err:
        raise ModelFormatError(f"Model header is truncated: {err}") from err
    pos += _HEADER.size

    if version != MODEL_VERSION:
        raise ModelFormatError(f"Unsupported model format version {version}")

    spec = BlockSpec(bw, bh, iw, ih)
    if (spec.m, spec.d) != (m, d):
        raise ModelFormatError(f"Header M={m}, D={d} disagree with block geometry {spec}")

    class_ids = []
    try:
        for _ in range(c):
            (length,) = _LENGTH.unpack_from(data, pos)
            pos += _LENGTH.size
            raw = data[pos : pos + length]
            if len(raw) != length:
                raise ModelFormatError("Class id table is truncated")
            class_ids.append(raw.decode("utf-8"))
            pos += length
    except (struct.error, UnicodeDecodeError) as err:
        raise ModelFormatError(f"Class id table is unreadable: {err}") from err

    expected = c * m * d * 8
    if len(data) - pos != expected:
        raise ModelFormatError(
            f"Coefficient block holds {len(data) - pos} bytes, expected {expected}"
        )
    coefficients = np.frombuffer(data, dtype="<f8", count=c * m * d, offset=pos)
    coefficients = coefficients.astype(np.float64).reshape(c, m * d)

    banks = tuple(
        CorrelationFilterBank(class_id, row, spec)
        for class_id, row in zip(class_ids, coefficients, strict=True)
    )
    return FilterBankSet(banks, alpha, spec)


def save_model(banks: FilterBankSet, path: str | Path) -> str:
    Path(path).write_bytes(encode_model(banks))
    logging.info(f"Saved {len(banks)} filter banks to {path}")
    return str(path)


def load_model(path: str | Path) -> FilterBankSet:
    banks = decode_model(Path(path).read_bytes())
    logging.info(f"Loaded {len(banks)} filter banks from {path}")
    return banks
