import numpy as np
import pytest

from mscfb.exceptions import (
    BadMagicError,
    InvalidGeometryError,
    MalformedHeaderError,
    TruncatedDataError,
    UnsupportedMaxvalError,
)
from mscfb.imaging.pgm import GrayImage, encode_pgm, load_pgm, read_pgm, save_pgm


@pytest.fixture
def make_pgm():
    """Factory for P5 bytes with a canonical header"""

    def _make(width, height, raster, maxval=255):
        return b"P5\n%d %d\n%d\n" % (width, height, maxval) + bytes(raster)

    return _make


def test_load_pgm__single_pixel():
    img = load_pgm(b"P5 1 1 255 \x7f")

    assert (img.width, img.height) == (1, 1)
    assert img.pixels[0, 0] == 127


def test_load_pgm__row_major(make_pgm):
    img = load_pgm(make_pgm(2, 2, [0, 64, 128, 255]))

    assert img.pixels.tolist() == [[0, 64], [128, 255]]


def test_load_pgm__comments_and_whitespace():
    data = b"P5 # made by hand\n3\t# width\n1\r\n255\n" + bytes([1, 2, 3])

    assert load_pgm(data).pixels.tolist() == [[1, 2, 3]]


def test_load_pgm__ignores_trailing_bytes(make_pgm):
    img = load_pgm(make_pgm(2, 1, [5, 6]) + b"extra")

    assert img.pixels.tolist() == [[5, 6]]


def test_load_pgm__failure_bad_magic():
    with pytest.raises(BadMagicError):
        load_pgm(b"P2\n1 1\n255\n7")


def test_load_pgm__failure_unsupported_maxval(make_pgm):
    with pytest.raises(UnsupportedMaxvalError):
        load_pgm(make_pgm(1, 1, [0, 0], maxval=65535))


def test_load_pgm__failure_truncated(make_pgm):
    with pytest.raises(TruncatedDataError):
        load_pgm(make_pgm(4, 4, range(15)))


@pytest.mark.parametrize(
    "data",
    [
        pytest.param(b"P5\nab 2\n255\n\x00\x00", id="non_numeric"),
        pytest.param(b"P5\n2 2\n", id="missing_maxval"),
        pytest.param(b"P5\n0 2\n255\n", id="zero_width"),
        pytest.param(b"P52 2 255\n\x00", id="no_separator"),
        pytest.param(b"P5 # never ends", id="open_comment"),
    ],
)
def test_load_pgm__failure_malformed_header(data):
    with pytest.raises(MalformedHeaderError):
        load_pgm(data)


def test_encode_pgm__canonical_header():
    img = GrayImage.from_values(3, 2, [0, 1, 2, 3, 4, 255])

    assert encode_pgm(img) == b"P5\n3 2\n255\n" + bytes([0, 1, 2, 3, 4, 255])


def test_pgm__byte_identical_round_trip(make_pgm):
    rng = np.random.default_rng(3)
    data = make_pgm(7, 5, rng.integers(0, 256, 35, dtype=np.uint8))

    assert encode_pgm(load_pgm(data)) == data


def test_save_pgm__read_back(tmp_path):
    img = GrayImage(np.arange(12, dtype=np.uint8).reshape(3, 4))
    path = tmp_path / "face.pgm"

    save_pgm(img, path)

    assert read_pgm(path) == img


@pytest.mark.parametrize(
    "pixels",
    [
        pytest.param(np.zeros((0, 3), dtype=np.uint8), id="empty"),
        pytest.param(np.zeros(4, dtype=np.uint8), id="flat"),
        pytest.param(np.array([[0, 300]]), id="out_of_range"),
    ],
)
def test_gray_image__failure_invalid(pixels):
    with pytest.raises(InvalidGeometryError):
        GrayImage(pixels)


def test_gray_image__failure_wrong_value_count():
    with pytest.raises(InvalidGeometryError):
        GrayImage.from_values(2, 2, [1, 2, 3])


def test_gray_image__read_only():
    img = GrayImage.from_values(2, 1, [1, 2])

    with pytest.raises(ValueError):
        img.pixels[0, 0] = 9
