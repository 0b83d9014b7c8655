import numpy as np
import pytest

from mscfb.exceptions import (
    BadMagicError,
    DataError,
    DimensionMismatchError,
    DuplicatePathError,
    MalformedRowError,
)
from mscfb.harness.manifest import (
    DatasetManifest,
    ManifestEntry,
    index_directory,
    load_manifest,
    load_samples,
    read_images,
    write_manifest,
)
from mscfb.imaging.pgm import GrayImage, save_pgm


@pytest.fixture
def write_csv(tmp_path):
    def _write(text, name="manifest.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def write_images(tmp_path):
    """Factory writing random PGMs under tmp_path and returning their manifest"""

    def _write(labels, width=4, height=4, seed=0):
        rng = np.random.default_rng(seed)
        entries = []
        for i, label in enumerate(labels):
            (tmp_path / label).mkdir(exist_ok=True)
            path = f"{label}/{i}.pgm"
            pixels = rng.integers(0, 256, (height, width), dtype=np.uint8)
            save_pgm(GrayImage(pixels), tmp_path / path)
            entries.append(ManifestEntry(path, label))
        return DatasetManifest(tuple(entries), str(tmp_path))

    return _write


def test_load_manifest__one_class(write_csv):
    manifest = load_manifest(write_csv("a.pgm,s1\nb.pgm,s1\n"))

    assert len(manifest) == 2
    assert manifest.class_ids == ("s1",)
    assert manifest.entries[1] == ManifestEntry("b.pgm", "s1")


def test_load_manifest__first_seen_class_order(write_csv, tmp_path):
    manifest = load_manifest(write_csv("x.pgm,s2\ny.pgm,s1\nz.pgm,s2\n"))

    assert manifest.class_index == {"s2": 0, "s1": 1}
    assert manifest.indices_by_subject() == {"s2": [0, 2], "s1": [1]}
    assert manifest.resolve(manifest.entries[0]) == tmp_path / "x.pgm"


def test_load_manifest__empty_file(write_csv):
    assert len(load_manifest(write_csv(""))) == 0


def test_load_manifest__utf8_labels(write_csv):
    manifest = load_manifest(write_csv("a.pgm,José\n"))

    assert manifest.labels == ("José",)


@pytest.mark.parametrize(
    "text",
    [
        pytest.param("a.pgm,s1,extra\n", id="three_fields"),
        pytest.param("a.pgm,s1\nb.pgm,s1,extra\n", id="ragged"),
        pytest.param("a.pgm\n", id="one_field"),
        pytest.param("a.pgm,\n", id="empty_label"),
    ],
)
def test_load_manifest__failure_malformed_row(write_csv, text):
    with pytest.raises(MalformedRowError):
        load_manifest(write_csv(text))


def test_load_manifest__failure_duplicate_path(write_csv):
    with pytest.raises(DuplicatePathError):
        load_manifest(write_csv("a.pgm,s1\na.pgm,s2\n"))


def test_load_manifest__failure_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_manifest(tmp_path / "absent.csv")


def test_write_manifest__round_trip(tmp_path):
    manifest = DatasetManifest(
        (ManifestEntry("s1/a.pgm", "s1"), ManifestEntry("s2/b.pgm", "s2")), str(tmp_path)
    )
    path = tmp_path / "out.csv"

    write_manifest(manifest, path)

    assert path.read_text() == "s1/a.pgm,s1\ns2/b.pgm,s2\n"
    assert load_manifest(path) == manifest


def test_dataset_manifest__subset():
    manifest = DatasetManifest(tuple(ManifestEntry(f"{i}.pgm", "s") for i in range(4)))

    assert manifest.subset([3, 1]).entries == (
        ManifestEntry("3.pgm", "s"),
        ManifestEntry("1.pgm", "s"),
    )


def test_index_directory(fs):
    paths = ["/faces/s01/1.pgm", "/faces/s01/2.pgm", "/faces/s02/1.pgm", "/faces/s02/notes.txt"]
    for path in paths:
        fs.create_file(path)

    manifest = index_directory("/faces")

    assert manifest.base_dir == "/faces"
    assert manifest.entries == (
        ManifestEntry("s01/1.pgm", "s01"),
        ManifestEntry("s01/2.pgm", "s01"),
        ManifestEntry("s02/1.pgm", "s02"),
    )


def test_index_directory__failure_loose_image(fs):
    fs.create_file("/faces/s01/1.pgm")
    fs.create_file("/faces/stray.pgm")

    with pytest.raises(DataError):
        index_directory("/faces")


def test_read_images__uniform_geometry(write_images):
    manifest = write_images(["s1", "s1", "s2"])

    images = read_images(manifest)

    assert [img.pixels.shape for img in images] == [(4, 4)] * 3


def test_read_images__failure_mixed_geometry(write_images, tmp_path):
    manifest = write_images(["s1", "s2"])
    save_pgm(GrayImage(np.zeros((2, 4), dtype=np.uint8)), tmp_path / "s2" / "1.pgm")

    with pytest.raises(DimensionMismatchError):
        read_images(manifest)


def test_read_images__failure_names_the_file(write_images, tmp_path):
    manifest = write_images(["s1", "s2"])
    (tmp_path / "s2" / "1.pgm").write_bytes(b"JFIF")

    with pytest.raises(BadMagicError) as excinfo:
        read_images(manifest)

    assert "s2/1.pgm" in excinfo.value.__notes__[0]


def test_load_samples(write_images):
    manifest = write_images(["s1", "s1", "s2"], width=4, height=6)

    samples = load_samples(manifest, 2, 3)

    assert [s.label for s in samples] == ["s1", "s1", "s2"]
    assert samples[0].blocks.shape == (4, 6)
    assert samples[2].source_id == "s2/2.pgm"


def test_load_samples__failure_empty_manifest():
    with pytest.raises(DataError):
        load_samples(DatasetManifest(()), 2, 2)
