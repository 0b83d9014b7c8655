import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import pandas as pd

from mscfb.exceptions import (
    DataError,
    DimensionMismatchError,
    DuplicatePathError,
    MalformedRowError,
)
from mscfb.imaging.blocks import BlockSpec, SubregionSample, preprocess
from mscfb.imaging.pgm import GrayImage, read_pgm
from mscfb.utils import get_list_of_files


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    label: str


@dataclass(frozen=True)
class DatasetManifest:
    """Image paths with subject labels; relative paths resolve against ``base_dir``"""

    entries: tuple[ManifestEntry, ...]
    base_dir: str = "."

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        seen = set()
        for entry in self.entries:
            if not entry.label:
                raise MalformedRowError(f"Entry '{entry.path}' has an empty label")
            if entry.path in seen:
                raise DuplicatePathError(f"Path '{entry.path}' is listed more than once")
            seen.add(entry.path)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(entry.label for entry in self.entries)

    @property
    def class_ids(self) -> tuple[str, ...]:
        """Distinct labels in first-seen order"""
        return tuple(dict.fromkeys(self.labels))

    @property
    def class_index(self) -> dict[str, int]:
        return {label: index for index, label in enumerate(self.class_ids)}

    def indices_by_subject(self) -> dict[str, list[int]]:
        groups: dict[str, list[int]] = {label: [] for label in self.class_ids}
        for index, entry in enumerate(self.entries):
            groups[entry.label].append(index)
        return groups

    def resolve(self, entry: ManifestEntry) -> Path:
        path = Path(entry.path)
        return path if path.is_absolute() else Path(self.base_dir) / path

    def subset(self, indices: Iterable[int]) -> "DatasetManifest":
        return DatasetManifest(tuple(self.entries[i] for i in indices), self.base_dir)


def load_manifest(path: str | Path) -> DatasetManifest:
    """Reads a headerless two-column (path,label) UTF-8 CSV"""
    base_dir = os.path.dirname(os.path.abspath(path))
    try:
        frame = pd.read_csv(
            path, header=None, dtype=str, keep_default_na=False, encoding="utf-8"
        )
    except pd.errors.EmptyDataError:
        logging.info(f"Manifest {path} is empty")
        return DatasetManifest((), base_dir)
    except pd.errors.ParserError as err:
        raise MalformedRowError(f"Malformed row in {path}: {err}") from err

    if frame.shape[1] != 2:
        raise MalformedRowError(f"{path} must have exactly two columns, found {frame.shape[1]}")
    if frame.isna().any().any():
        row = int(frame.isna().any(axis=1).to_numpy().nonzero()[0][0])
        raise MalformedRowError(f"Row {row + 1} of {path} is missing a field")

    entries = [ManifestEntry(str(p), str(label)) for p, label in frame.itertuples(index=False)]
    for row, entry in enumerate(entries, start=1):
        if not entry.path or not entry.label:
            raise MalformedRowError(f"Row {row} of {path} has an empty field")

    manifest = DatasetManifest(tuple(entries), base_dir)
    logging.info(f"Loaded {len(manifest)} entries in {len(manifest.class_ids)} classes from {path}")
    return manifest


def write_manifest(manifest: DatasetManifest, path: str | Path) -> str:
    frame = pd.DataFrame(
        [(entry.path, entry.label) for entry in manifest.entries], columns=["path", "label"]
    )
    frame.to_csv(path, header=False, index=False, encoding="utf-8")
    return str(path)


def index_directory(root: str | Path, suffix: str = ".pgm") -> DatasetManifest:
    """Manifest of every image under ``root``, labelled by its parent directory name"""
    root = os.path.abspath(root)
    files = get_list_of_files([root], suffix=suffix)
    entries = []
    for file in files:
        relative = os.path.relpath(file, root)
        label = os.path.basename(os.path.dirname(file))
        if os.path.dirname(relative) == "":
            raise DataError(f"{file} is not inside a subject directory under {root}")
        entries.append(ManifestEntry(Path(relative).as_posix(), label))

    logging.info(f"Indexed {len(entries)} images under {root}")
    return DatasetManifest(tuple(entries), root)


def read_images(manifest: DatasetManifest) -> list[GrayImage]:
    """Decodes every manifest image and checks they share one geometry"""
    images = []
    for entry in manifest.entries:
        try:
            images.append(read_pgm(manifest.resolve(entry)))
        except DataError as err:
            err.add_note(f"while reading '{entry.path}'")
            raise

    if images:
        shapes = {(img.width, img.height) for img in images}
        if len(shapes) > 1:
            raise DimensionMismatchError(f"Images do not share one geometry: {sorted(shapes)}")
    logging.info(f"Read {len(images)} images")
    return images


def preprocess_images(
    images: Sequence[GrayImage], manifest: DatasetManifest, spec: BlockSpec
) -> list[SubregionSample]:
    return [
        preprocess(img, spec, label=entry.label, source_id=entry.path)
        for img, entry in zip(images, manifest.entries, strict=True)
    ]


def load_samples(
    manifest: DatasetManifest, block_width: int, block_height: int
) -> list[SubregionSample]:
    """Reads, equalizes and partitions every manifest image"""
    images = read_images(manifest)
    if not images:
        raise DataError("The manifest lists no images")
    spec = BlockSpec.for_image(images[0], block_width, block_height)
    return preprocess_images(images, manifest, spec)
