import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from mscfb.exceptions import ConfigurationError
from mscfb.harness.manifest import DatasetManifest, ManifestEntry, write_manifest
from mscfb.imaging.blocks import BlockSpec
from mscfb.imaging.pgm import GrayImage, save_pgm
from mscfb.utils import make_rng

TEMPLATE_BASE = 128.0
MANIFEST_NAME = "manifest.csv"


@dataclass(frozen=True)
class LabelledImage:
    image: GrayImage
    label: str
    source_id: str


def generate_synthetic(
    classes: int,
    per_class: int,
    spec: BlockSpec,
    separation: float,
    noise: float,
    seed: int,
) -> list[LabelledImage]:
    """Random class templates plus independent Gaussian noise, quantized to 8 bits.

    Each template is mid-grey plus ``separation`` times a standard normal field; each sample adds
    ``noise`` times another one. All templates are drawn before any sample, from one Philox
    stream keyed by ``seed``.
    """
    if classes < 2 or per_class < 1:
        raise ConfigurationError(
            f"Need at least 2 classes and 1 image per class, got {classes} and {per_class}"
        )
    if separation < 0 or noise < 0:
        raise ConfigurationError("separation and noise must be non-negative")

    rng = make_rng(seed)
    shape = (spec.image_height, spec.image_width)
    templates = TEMPLATE_BASE + separation * rng.standard_normal((classes, *shape))

    width = len(str(max(classes, per_class)))
    images = []
    for c in range(classes):
        label = f"s{c + 1:0{width}d}"
        for j in range(per_class):
            sample = templates[c] + noise * rng.standard_normal(shape)
            pixels = np.rint(np.clip(sample, 0, 255)).astype(np.uint8)
            source_id = f"{label}/{label}_{j + 1:0{width}d}.pgm"
            images.append(LabelledImage(GrayImage(pixels), label, source_id))

    logging.info(
        f"Generated {len(images)} synthetic {spec.image_width}x{spec.image_height} images "
        f"in {classes} classes"
    )
    return images


def write_synthetic(images: Sequence[LabelledImage], out_dir: str | Path) -> DatasetManifest:
    """Writes the images as PGMs under ``out_dir`` along with a manifest.csv"""
    out_dir = os.path.abspath(out_dir)
    entries = []
    for item in images:
        target = os.path.join(out_dir, item.source_id)
        os.makedirs(os.path.dirname(target), exist_ok=True)
        save_pgm(item.image, target)
        entries.append(ManifestEntry(item.source_id, item.label))

    manifest = DatasetManifest(tuple(entries), out_dir)
    write_manifest(manifest, os.path.join(out_dir, MANIFEST_NAME))
    logging.info(f"Wrote {len(entries)} images and {MANIFEST_NAME} to {out_dir}")
    return manifest
