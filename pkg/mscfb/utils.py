import logging
import os
import re

import numpy as np

MAX_SEED = 2**64 - 1

_BLOCK_PATTERN = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


def get_list_of_files(inputs: list, suffix: str = ".pgm") -> list[str]:
    """Searches the provided paths for files ending in ``suffix``, descending into directories"""
    files = []

    error_message = "%s not recognised. Ensure that path is valid"

    def process_input(i):
        if os.path.isdir(i):
            for file in sorted(os.listdir(i)):
                process_input(os.path.join(i, file))
        elif os.path.isfile(i):
            if i.lower().endswith(suffix):
                files.append(i)
        else:
            logging.error(error_message, i)

    for i in inputs:
        process_input(i)

    return files


def parse_block(text: str) -> tuple[int, int]:
    """Parses a 'WxH' block size"""
    match = _BLOCK_PATTERN.match(text)
    if not match:
        raise ValueError(f"Block size must look like WxH (e.g. 16x11), got '{text}'")
    width, height = int(match.group(1)), int(match.group(2))
    if width < 1 or height < 1:
        raise ValueError(f"Block sides must be positive, got '{text}'")
    return width, height


def check_seed(seed: int) -> int:
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"Seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def make_rng(seed: int) -> np.random.Generator:
    """Generator on the counter-based Philox4x64 bit generator, keyed directly by ``seed``"""
    return np.random.Generator(np.random.Philox(key=check_seed(seed)))


def derive_trial_seed(seed: int, trial: int) -> int:
    """trial_seed = seed XOR trial index; each trial then owns an independent Philox stream"""
    return check_seed(seed) ^ trial
