import numpy as np
import pytest

from mscfb.exceptions import DimensionMismatchError, EmptyGalleryError, ZeroVectorError
from mscfb.recognition.classify import (
    Gallery,
    classify_cosine_nn,
    classify_max,
    cosine_scores,
    cosine_similarity,
)


@pytest.fixture
def make_gallery():
    def _make(features, labels=None):
        features = np.asarray(features, dtype=np.float64)
        labels = labels or [f"s{i}" for i in range(len(features))]
        return Gallery(features, tuple(labels), tuple(f"{label}.pgm" for label in labels))

    return _make


@pytest.mark.parametrize(
    "features,expected",
    [
        pytest.param([0.1, 0.9, 0.3], 1, id="middle"),
        pytest.param([0.5, 0.5], 0, id="tie_goes_low"),
        pytest.param([-3.0], 0, id="singleton"),
    ],
)
def test_classify_max(features, expected):
    assert classify_max(features) == expected


@pytest.mark.parametrize(
    "y1,y2,expected",
    [
        pytest.param([3.0, 4.0], [3.0, 4.0], 1.0, id="self"),
        pytest.param([1.0, 0.0], [0.0, 1.0], 0.0, id="orthogonal"),
        pytest.param([2.0, 4.0], [1.0, 2.0], 1.0, id="scaled"),
        pytest.param([1.0, 0.0], [-2.0, 0.0], -1.0, id="opposite"),
    ],
)
def test_cosine_similarity(y1, y2, expected):
    assert cosine_similarity(y1, y2) == pytest.approx(expected, abs=1e-15)


def test_cosine_similarity__positive_scale_invariance():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        size = int(rng.integers(1, 40))
        y1, y2 = rng.standard_normal((2, size))
        a, b = 10.0 ** rng.uniform(-6, 6, 2)

        difference = cosine_similarity(a * y1, b * y2) - cosine_similarity(y1, y2)

        assert abs(difference) <= 1e-12


def test_cosine_similarity__failure_zero_vector():
    with pytest.raises(ZeroVectorError):
        cosine_similarity([0.0, 0.0], [1.0, 2.0])


def test_cosine_similarity__failure_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        cosine_similarity([1.0, 2.0], [1.0, 2.0, 3.0])


def test_classify_cosine_nn__probe_in_gallery(make_gallery):
    gallery = make_gallery([[1.0, 0.2, 0.0], [0.0, 1.0, 0.5], [0.3, 0.3, 1.0]])

    label, similarity = classify_cosine_nn([0.0, 1.0, 0.5], gallery)

    assert label == "s1"
    assert similarity == pytest.approx(1.0)


def test_classify_cosine_nn__tie_goes_to_earliest(make_gallery):
    gallery = make_gallery([[0.0, 1.0], [1.0, 0.0], [2.0, 0.0]], ["a", "b", "c"])

    assert classify_cosine_nn([5.0, 0.0], gallery)[0] == "b"


def test_classify_cosine_nn__matches_exhaustive_scan(make_gallery):
    rng = np.random.default_rng(1)
    gallery = make_gallery(rng.standard_normal((50, 8)))
    probe = rng.standard_normal(8)

    scores = [
        float(row @ probe) / (np.linalg.norm(row) * np.linalg.norm(probe))
        for row in gallery.features
    ]
    best = max(range(50), key=lambda i: (scores[i], -i))

    label, similarity = classify_cosine_nn(probe, gallery)

    assert label == gallery.labels[best]
    assert similarity == pytest.approx(scores[best], rel=1e-12)


def test_classifiers__positive_scaling_invariance(make_gallery):
    rng = np.random.default_rng(2)
    gallery = make_gallery(rng.standard_normal((30, 6)))
    for _ in range(10000):
        f = rng.standard_normal(6)
        scale = float(rng.uniform(1e-3, 1e3))

        assert classify_max(scale * f) == classify_max(f)
        assert classify_cosine_nn(scale * f, gallery)[0] == classify_cosine_nn(f, gallery)[0]

    scores = cosine_scores(rng.standard_normal(6), gallery)
    assert np.all(scores >= -1 - 1e-12)
    assert np.all(scores <= 1 + 1e-12)


def test_cosine_scores__failure_empty_gallery():
    with pytest.raises(EmptyGalleryError):
        cosine_scores([1.0], Gallery(np.empty((0, 1)), (), ()))


def test_cosine_scores__failure_zero_gallery_entry(make_gallery):
    gallery = make_gallery([[1.0, 0.0], [0.0, 0.0]])

    with pytest.raises(ZeroVectorError, match="s1.pgm"):
        cosine_scores([1.0, 1.0], gallery)


def test_cosine_scores__failure_zero_probe(make_gallery):
    with pytest.raises(ZeroVectorError):
        cosine_scores([0.0, 0.0], make_gallery([[1.0, 0.0]]))


def test_cosine_scores__failure_dimension_mismatch(make_gallery):
    with pytest.raises(DimensionMismatchError):
        cosine_scores([1.0, 0.0, 0.0], make_gallery([[1.0, 0.0]]))


def test_gallery__failure_label_count():
    with pytest.raises(DimensionMismatchError):
        Gallery(np.ones((2, 3)), ("a",), ("a.pgm",))
