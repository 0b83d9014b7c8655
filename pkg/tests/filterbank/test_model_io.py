import struct

import numpy as np
import pytest

from mscfb.exceptions import ModelFormatError, SpecMismatchError, UnknownClassError
from mscfb.filterbank.bank import CorrelationFilterBank, FilterBankSet
from mscfb.filterbank.model_io import (
    MODEL_MAGIC,
    decode_model,
    encode_model,
    load_model,
    save_model,
)
from mscfb.imaging.blocks import BlockSpec


@pytest.fixture
def banks():
    spec = BlockSpec(2, 3, 4, 3)
    rng = np.random.default_rng(0)
    return FilterBankSet(
        tuple(
            CorrelationFilterBank(class_id, rng.standard_normal(spec.md), spec)
            for class_id in ("s01", "s02", "sujet-é")
        ),
        0.6,
        spec,
    )


def test_encode_model__layout(banks):
    data = encode_model(banks)

    assert data[:6] == MODEL_MAGIC
    header = struct.unpack_from("<I7Id", data, 6)
    assert header == (1, 3, 2, 6, 2, 3, 4, 3, 0.6)
    assert len(data) == 6 + 40 + 3 * 4 + len("s01s02sujet-é".encode()) + 3 * 12 * 8
    np.testing.assert_array_equal(
        np.frombuffer(data[-3 * 12 * 8 :], dtype="<f8"), banks.matrix.ravel()
    )


def test_model__byte_identical_round_trip(banks):
    data = encode_model(banks)
    decoded = decode_model(data)

    assert decoded.class_ids == banks.class_ids
    assert decoded.spec == banks.spec
    assert decoded.alpha == banks.alpha
    assert encode_model(decoded) == data


def test_save_model__load_back(banks, tmp_path):
    path = tmp_path / "faces.model"

    save_model(banks, path)

    np.testing.assert_array_equal(load_model(path).matrix, banks.matrix)


@pytest.mark.parametrize(
    "mutate",
    [
        pytest.param(lambda data: b"NOTCFB" + data[6:], id="bad_magic"),
        pytest.param(lambda data: data[:20], id="truncated_header"),
        pytest.param(lambda data: data[:6] + struct.pack("<I", 2) + data[10:], id="version"),
        pytest.param(lambda data: data[:-8], id="short_coefficients"),
        pytest.param(lambda data: data + b"\x00", id="trailing_bytes"),
        pytest.param(lambda data: data[:10] + struct.pack("<I", 5) + data[14:], id="count"),
        pytest.param(lambda data: data[:14] + struct.pack("<I", 7) + data[18:], id="m"),
    ],
)
def test_decode_model__failure(banks, mutate):
    with pytest.raises(ModelFormatError):
        decode_model(mutate(encode_model(banks)))


def test_bank__subregion_filters(banks):
    bank = banks.bank("s02")

    assert bank.filters.shape == (2, 6)
    np.testing.assert_array_equal(bank.filter(1), bank.g[6:12])
    with pytest.raises(IndexError):
        bank.filter(2)


def test_bank_set__failure_unknown_class(banks):
    with pytest.raises(UnknownClassError) as excinfo:
        banks.bank("nobody")

    assert str(excinfo.value) == "No bank for class 'nobody'"


def test_bank_set__failure_mixed_specs():
    spec = BlockSpec(1, 1, 2, 1)
    other = BlockSpec(2, 1, 2, 1)

    with pytest.raises(SpecMismatchError):
        FilterBankSet(
            (
                CorrelationFilterBank("a", [1.0, 2.0], spec),
                CorrelationFilterBank("b", [1.0, 2.0], other),
            ),
            0.6,
            spec,
        )
