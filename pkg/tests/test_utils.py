import logging

import pytest

from mscfb.utils import (
    MAX_SEED,
    check_seed,
    derive_trial_seed,
    get_list_of_files,
    make_rng,
    parse_block,
)


def test_get_list_of_files(fs):
    top_level_path = "/home/faces"
    paths = [
        "/home/faces/s02/1.pgm",
        "/home/faces/s01/2.PGM",
        "/home/faces/s01/1.pgm",
        "/home/faces/s01/notes.txt",
        "/home/faces/manifest.csv",
    ]
    for p in paths:
        fs.create_file(p)

    list_of_files = get_list_of_files([top_level_path])

    assert list_of_files == [
        "/home/faces/s01/1.pgm",
        "/home/faces/s01/2.PGM",
        "/home/faces/s02/1.pgm",
    ]


def test_get_list_of_files__other_suffix(fs):
    fs.create_file("/data/a.csv")
    fs.create_file("/data/b.pgm")

    assert get_list_of_files(["/data/a.csv", "/data"], suffix=".csv") == [
        "/data/a.csv",
        "/data/a.csv",
    ]


def test_get_list_of_files__invalid_path(fs, caplog):
    with caplog.at_level(logging.ERROR):
        assert get_list_of_files(["/nowhere"]) == []

    assert "/nowhere not recognised" in caplog.text


@pytest.mark.parametrize(
    "text,expected",
    [
        pytest.param("16x11", (16, 11)),
        pytest.param("8X11", (8, 11)),
        pytest.param(" 4 x 4 ", (4, 4)),
    ],
)
def test_parse_block(text, expected):
    assert parse_block(text) == expected


@pytest.mark.parametrize("text", ["16", "16x", "ax11", "0x11", "16x-1", "16*11"])
def test_parse_block__failure(text):
    with pytest.raises(ValueError):
        parse_block(text)


@pytest.mark.parametrize("seed", [-1, MAX_SEED + 1])
def test_check_seed__failure(seed):
    with pytest.raises(ValueError):
        check_seed(seed)


def test_make_rng__reproducible():
    first = make_rng(2**64 - 1).integers(0, 1000, 10)
    second = make_rng(2**64 - 1).integers(0, 1000, 10)

    assert first.tolist() == second.tolist()
    assert make_rng(1).integers(0, 2**32, 4).tolist() != make_rng(2).integers(0, 2**32, 4).tolist()


@pytest.mark.parametrize(
    "seed,trial,expected",
    [
        pytest.param(0, 0, 0),
        pytest.param(0, 5, 5),
        pytest.param(12, 5, 9),
        pytest.param(MAX_SEED, 1, MAX_SEED - 1),
    ],
)
def test_derive_trial_seed(seed, trial, expected):
    assert derive_trial_seed(seed, trial) == expected
