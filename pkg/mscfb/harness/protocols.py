import logging
import time
from typing import Mapping, Sequence

import dask
import numpy as np
import pandas as pd

from mscfb.exceptions import (
    DataError,
    InsufficientSamplesError,
    MsCfbError,
    UnseenSubjectsRequireNNError,
)
from mscfb.filterbank.training import TrainingView, train_all
from mscfb.harness.config import ExperimentConfig
from mscfb.harness.manifest import (
    DatasetManifest,
    ManifestEntry,
    load_samples,
    preprocess_images,
    read_images,
)
from mscfb.harness.report import ExperimentReport, GalleryProbeReport
from mscfb.imaging.blocks import BlockSpec, SubregionSample
from mscfb.recognition.classify import Gallery, classify_cosine_nn, classify_max
from mscfb.recognition.features import build_gallery, extract_feature_matrix
from mscfb.utils import derive_trial_seed, make_rng


def split_indices(
    manifest: DatasetManifest, t: int, trial_seed: int
) -> tuple[list[int], list[int]]:
    """Draws t training images per subject without replacement; the rest form the test set.

    Subjects are visited in first-seen order and all draws come from one Philox stream keyed by
    ``trial_seed``. Both index lists are returned in manifest order.
    """
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    if not len(manifest):
        raise DataError("Cannot split an empty manifest")

    rng = make_rng(trial_seed)
    train = []
    for subject, indices in manifest.indices_by_subject().items():
        if len(indices) <= t:
            raise InsufficientSamplesError(subject, len(indices), t)
        chosen = rng.choice(len(indices), size=t, replace=False)
        train.extend(indices[i] for i in chosen)

    train.sort()
    chosen_set = set(train)
    test = [i for i in range(len(manifest)) if i not in chosen_set]
    return train, test


def random_split(
    manifest: DatasetManifest, t: int, trial_seed: int
) -> tuple[list[ManifestEntry], list[ManifestEntry]]:
    train, test = split_indices(manifest, t, trial_seed)
    return [manifest.entries[i] for i in train], [manifest.entries[i] for i in test]


def _predict(
    features: np.ndarray, class_ids: Sequence[str], gallery: Gallery, classifier: str
) -> list[str | None]:
    if classifier == "max":
        return [class_ids[classify_max(f)] for f in features]
    return [classify_cosine_nn(f, gallery)[0] for f in features]


def _accuracy(predicted: Sequence[str | None], truth: Sequence[str | None]) -> float:
    correct = sum(p == y for p, y in zip(predicted, truth, strict=True))
    return correct / len(truth)


def _run_trial(
    manifest: DatasetManifest,
    samples: Sequence[SubregionSample],
    config: ExperimentConfig,
    trial: int,
) -> dict:
    trial_seed = derive_trial_seed(config.seed, trial)
    try:
        train_idx, test_idx = split_indices(manifest, config.t, trial_seed)
        train = [samples[i] for i in train_idx]
        test = [samples[i] for i in test_idx]

        start = time.perf_counter()
        view = TrainingView.from_samples(train, class_ids=manifest.class_ids)
        banks = train_all(view, config.alpha, config.solve_path)
        train_seconds = time.perf_counter() - start

        start = time.perf_counter()
        gallery = build_gallery(train, banks)
        predicted = _predict(
            extract_feature_matrix(test, banks), banks.class_ids, gallery, config.classifier
        )
        accuracy = _accuracy(predicted, [sample.label for sample in test])
        test_seconds = time.perf_counter() - start
    except MsCfbError as err:
        err.add_note(f"in trial {trial} (seed {trial_seed})")
        raise

    logging.info(f"Trial {trial}: accuracy {accuracy:.4f} on {len(test)} test images")
    return {
        "accuracy": accuracy,
        "trial_seed": trial_seed,
        "n_train": len(train),
        "n_test": len(test),
        "train_seconds": train_seconds,
        "test_seconds": test_seconds,
    }


def _run_trials(
    manifest: DatasetManifest, samples: Sequence[SubregionSample], config: ExperimentConfig
) -> list[dict]:
    if config.workers > 1:
        shared = [dask.delayed(value, traverse=False) for value in (manifest, list(samples))]
        tasks = [
            dask.delayed(_run_trial)(*shared, config, trial) for trial in range(config.trials)
        ]
        return list(dask.compute(*tasks, scheduler="threads", num_workers=config.workers))
    return [_run_trial(manifest, samples, config, trial) for trial in range(config.trials)]


def run_repeated_trials(
    manifest: DatasetManifest,
    config: ExperimentConfig,
    samples: Sequence[SubregionSample] | None = None,
) -> ExperimentReport:
    """Repeated random t-per-subject splits: train, featurize, classify, aggregate.

    ``samples`` may carry the manifest already preprocessed, in manifest order.
    """
    start = time.perf_counter()
    if samples is None:
        samples = load_samples(manifest, config.block_width, config.block_height)

    results = _run_trials(manifest, samples, config)

    report = ExperimentReport.from_trials(
        [r["accuracy"] for r in results],
        config=config,
        trial_seeds=[r["trial_seed"] for r in results],
        n_classes=len(manifest.class_ids),
        n_train=[r["n_train"] for r in results],
        n_test=[r["n_test"] for r in results],
        wall_seconds=time.perf_counter() - start,
        train_seconds=sum(r["train_seconds"] for r in results),
        test_seconds=sum(r["test_seconds"] for r in results),
    )
    logging.info(
        f"{config.trials} trials: accuracy {100 * report.mean:.2f}% +- {100 * report.std:.2f}"
    )
    return report


def run_gallery_probe(
    train_manifest: DatasetManifest,
    gallery_manifest: DatasetManifest,
    probe_manifests: Mapping[str, DatasetManifest] | DatasetManifest,
    config: ExperimentConfig,
) -> GalleryProbeReport:
    """Trains on one set of subjects, then matches probes to a gallery by cosine nearest neighbour.

    Gallery and probe subjects need not appear in training, so the max-component rule is
    refused.
    """
    if config.classifier != "cosine":
        raise UnseenSubjectsRequireNNError(
            "The gallery/probe protocol needs the cosine nearest-neighbour classifier; "
            "the max-component rule cannot name subjects absent from training"
        )
    if isinstance(probe_manifests, DatasetManifest):
        probe_manifests = {"probe": probe_manifests}

    start = time.perf_counter()
    train = load_samples(train_manifest, config.block_width, config.block_height)
    view = TrainingView.from_samples(train, class_ids=train_manifest.class_ids)
    banks = train_all(view, config.alpha, config.solve_path, workers=config.workers)
    train_seconds = time.perf_counter() - start

    start = time.perf_counter()
    gallery = build_gallery(
        load_samples(gallery_manifest, config.block_width, config.block_height), banks
    )
    gallery_labels = set(gallery.labels)

    accuracies, counts = {}, {}
    for name, probe_manifest in probe_manifests.items():
        probes = load_samples(probe_manifest, config.block_width, config.block_height)
        missing = {p.label for p in probes} - gallery_labels
        if missing:
            logging.warning(f"Probe set {name}: {len(missing)} subject(s) absent from the gallery")
        predicted = _predict(extract_feature_matrix(probes, banks), (), gallery, "cosine")
        accuracies[name] = _accuracy(predicted, [p.label for p in probes])
        counts[name] = len(probes)
        logging.info(f"Probe set {name}: rank-1 accuracy {accuracies[name]:.4f}")
    test_seconds = time.perf_counter() - start

    return GalleryProbeReport(
        accuracies=accuracies,
        n_probes=counts,
        n_gallery=len(gallery),
        n_train=view.n,
        n_classes=len(banks),
        config=config,
        wall_seconds=train_seconds + test_seconds,
        train_seconds=train_seconds,
        test_seconds=test_seconds,
    )


def run_parameter_sweep(
    manifest: DatasetManifest,
    config: ExperimentConfig,
    blocks: Sequence[tuple[int, int]],
    alphas: Sequence[float],
) -> pd.DataFrame:
    """Repeated-trial accuracy over a grid of block sizes and alpha values.

    Images are decoded once; every grid point reuses the same trial seeds.
    """
    images = read_images(manifest)
    if not images:
        raise DataError("The manifest lists no images")

    rows = []
    for block_width, block_height in blocks:
        spec = BlockSpec.for_image(images[0], block_width, block_height)
        samples = preprocess_images(images, manifest, spec)
        for alpha in alphas:
            point = ExperimentConfig(
                **config.model_dump()
                | {
                    "block_width": block_width,
                    "block_height": block_height,
                    "alpha": alpha,
                    "workers": config.workers,
                }
            )
            report = run_repeated_trials(manifest, point, samples)
            rows.append(
                {
                    "block_width": block_width,
                    "block_height": block_height,
                    "alpha": alpha,
                    "mean": report.mean,
                    "std": report.std,
                }
            )

    return pd.DataFrame(rows)
