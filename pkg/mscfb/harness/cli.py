import argparse
import logging
import sys
from typing import Sequence

from pydantic import ValidationError

from mscfb.exceptions import ConfigurationError, DataError, NumericalError
from mscfb.filterbank.model_io import load_model, save_model
from mscfb.filterbank.training import DEFAULT_ALPHA, TrainingView, train_all
from mscfb.harness.config import DEFAULT_T, DEFAULT_TRIALS, ExperimentConfig
from mscfb.harness.manifest import index_directory, load_manifest, load_samples, write_manifest
from mscfb.harness.protocols import run_gallery_probe, run_parameter_sweep, run_repeated_trials
from mscfb.harness.report import REAL_FORMAT, emit_report
from mscfb.harness.synthetic import generate_synthetic, write_synthetic
from mscfb.imaging.blocks import DEFAULT_BLOCK_HEIGHT, DEFAULT_BLOCK_WIDTH, BlockSpec
from mscfb.recognition.features import write_features_csv
from mscfb.utils import parse_block

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

DEFAULT_BLOCK = f"{DEFAULT_BLOCK_WIDTH}x{DEFAULT_BLOCK_HEIGHT}"


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser whose usage errors surface as exit code 1 instead of 2"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _block(text: str) -> tuple[int, int]:
    try:
        return parse_block(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from err


def _add_block_alpha(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--block", type=_block, default=DEFAULT_BLOCK, help="subregion size WxH")
    parser.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="regularization")


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--path", choices=["dense", "woodbury", "auto"], default="auto")
    parser.add_argument("--workers", type=int, default=1, help="worker threads")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--no-timing", action="store_true", help="leave timings out of the report")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="mscfb", description="Multi-subregion correlation filter banks")
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default="INFO",
        help="logging level",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    train = commands.add_parser("train", help="design filter banks and save a model")
    train.add_argument("--manifest", required=True, help="training manifest CSV")
    _add_block_alpha(train)
    train.add_argument("--path", choices=["dense", "woodbury", "auto"], default="auto")
    train.add_argument("--workers", type=int, default=1, help="worker threads")
    train.add_argument("--out", required=True, help="model file")

    extract = commands.add_parser("extract", help="write feature vectors for a manifest")
    extract.add_argument("--model", required=True, help="model file")
    extract.add_argument("--manifest", required=True, help="manifest CSV")
    extract.add_argument("--out", required=True, help="feature CSV")

    evaluate = commands.add_parser("evaluate", help="repeated random-split evaluation")
    evaluate.add_argument("--manifest", required=True, help="manifest CSV")
    evaluate.add_argument("--t", type=int, default=DEFAULT_T, help="training images per subject")
    evaluate.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="number of trials")
    evaluate.add_argument("--seed", type=int, default=0, help="master seed")
    evaluate.add_argument("--classifier", choices=["max", "cosine"], default="cosine")
    _add_block_alpha(evaluate)
    evaluate.add_argument("--report", required=True, help="report file")
    _add_run_options(evaluate)

    gallery = commands.add_parser("gallery-probe", help="gallery/probe evaluation")
    gallery.add_argument("--train", required=True, help="training manifest CSV")
    gallery.add_argument("--gallery", required=True, help="gallery manifest CSV")
    gallery.add_argument(
        "--probe",
        required=True,
        action="append",
        help="probe manifest CSV, optionally NAME=CSV; may repeat",
    )
    gallery.add_argument("--classifier", choices=["max", "cosine"], default="cosine")
    _add_block_alpha(gallery)
    gallery.add_argument("--report", required=True, help="report file")
    _add_run_options(gallery)

    synth = commands.add_parser("synth", help="generate a synthetic labelled dataset")
    synth.add_argument("--classes", type=int, required=True)
    synth.add_argument("--per-class", type=int, required=True)
    synth.add_argument("--width", type=int, required=True)
    synth.add_argument("--height", type=int, required=True)
    synth.add_argument("--separation", type=float, required=True)
    synth.add_argument("--noise", type=float, required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True, help="output folder")

    index = commands.add_parser("index", help="build a manifest from subject folders")
    index.add_argument("--root", required=True, help="folder with one subfolder per subject")
    index.add_argument("--out", required=True, help="manifest CSV")

    sweep = commands.add_parser("sweep", help="evaluate a grid of block sizes and alphas")
    sweep.add_argument("--manifest", required=True, help="manifest CSV")
    sweep.add_argument("--blocks", type=_block, nargs="+", required=True, help="WxH values")
    sweep.add_argument("--alphas", type=float, nargs="+", required=True)
    sweep.add_argument("--t", type=int, default=DEFAULT_T)
    sweep.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--classifier", choices=["max", "cosine"], default="cosine")
    sweep.add_argument("--path", choices=["dense", "woodbury", "auto"], default="auto")
    sweep.add_argument("--workers", type=int, default=1)
    sweep.add_argument("--out", required=True, help="table CSV")

    return parser


def _config(args, **fields) -> ExperimentConfig:
    block_width, block_height = args.block
    return ExperimentConfig(
        block_width=block_width,
        block_height=block_height,
        alpha=args.alpha,
        solve_path=args.path,
        workers=args.workers,
        **fields,
    )


def _probe_sets(values: Sequence[str]) -> dict:
    probes = {}
    for position, value in enumerate(values, start=1):
        name, sep, path = value.partition("=")
        if not sep:
            name, path = ("probe" if len(values) == 1 else f"probe{position}"), value
        if name in probes:
            raise ConfigurationError(f"Probe set '{name}' is given more than once")
        probes[name] = load_manifest(path)
    return probes


def train(args) -> None:
    block_width, block_height = args.block
    samples = load_samples(load_manifest(args.manifest), block_width, block_height)
    banks = train_all(TrainingView.from_samples(samples), args.alpha, args.path, args.workers)
    save_model(banks, args.out)


def extract(args) -> None:
    banks = load_model(args.model)
    spec = banks.spec
    samples = load_samples(load_manifest(args.manifest), spec.block_width, spec.block_height)
    write_features_csv(samples, banks, args.out)


def evaluate(args) -> None:
    config = _config(
        args, t=args.t, trials=args.trials, seed=args.seed, classifier=args.classifier
    )
    report = run_repeated_trials(load_manifest(args.manifest), config)
    emit_report(report, args.report, args.format, include_timing=not args.no_timing)


def gallery_probe(args) -> None:
    config = _config(args, classifier=args.classifier)
    report = run_gallery_probe(
        load_manifest(args.train),
        load_manifest(args.gallery),
        _probe_sets(args.probe),
        config,
    )
    emit_report(report, args.report, args.format, include_timing=not args.no_timing)


def synth(args) -> None:
    spec = BlockSpec(args.width, args.height, args.width, args.height)
    images = generate_synthetic(
        args.classes, args.per_class, spec, args.separation, args.noise, args.seed
    )
    write_synthetic(images, args.out)


def index(args) -> None:
    write_manifest(index_directory(args.root), args.out)


def sweep(args) -> None:
    config = ExperimentConfig(
        t=args.t,
        trials=args.trials,
        seed=args.seed,
        classifier=args.classifier,
        solve_path=args.path,
        workers=args.workers,
    )
    table = run_parameter_sweep(load_manifest(args.manifest), config, args.blocks, args.alphas)
    table.to_csv(args.out, index=False, float_format=REAL_FORMAT)
    logging.info(f"Wrote a {len(table)}-point sweep to {args.out}")


COMMANDS = {
    "train": train,
    "extract": extract,
    "evaluate": evaluate,
    "gallery-probe": gallery_probe,
    "synth": synth,
    "index": index,
    "sweep": sweep,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Runs one subcommand and returns its exit code"""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=args.log_level, format="%(levelname)s %(message)s")

    try:
        COMMANDS[args.command](args)
    except (ConfigurationError, ValidationError) as err:
        logging.error(f"Invalid configuration: {err}")
        return EXIT_USAGE
    except (DataError, OSError) as err:
        logging.error(f"Data error: {err}")
        return EXIT_DATA
    except ValueError as err:
        logging.error(f"Invalid argument: {err}")
        return EXIT_USAGE
    except NumericalError as err:
        logging.error(f"Numerical failure: {err}")
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
