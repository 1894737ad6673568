"""Batch command-line front end.

Segment an image::

    starseg --input test1.jpg --gt test1GT.jpg --first 1 --last 3

writes ``test1_D{i}.png`` (rescaled detail planes), ``test1_R{i}.png``
(masks) and, with a ground truth, ``test1_COMP{i}.png`` plus
``test1_mcc.csv`` for every level ``i`` in the range.

Generate a synthetic fixture::

    starseg synth --kind blobs --seed 7 --out fixtures/
"""

import argparse
import csv
import io
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from . import __version__
from .evaluation import comp_image, mlsos
from .image_io import (
    ImageReadError,
    ImageWriteError,
    load_grayscale,
    load_ground_truth,
    output_path,
    save_plane,
)
from .mlss import LevelRange, MlssMode, mlss
from .synth import FixtureKind, FixtureSpec, PlacementError, generate
from .wavelet import starlet_decompose

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_VALIDATION = 3

CSV_HEADER = ("level", "tp", "tn", "fp", "fn", "mcc_percent", "optimal")


class UsageError(Exception):
    pass


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of printing usage and exiting 2."""

    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    input_path: Path
    gt_path: Path | None = None
    first_level: int = 1
    last_level: int = 5
    mode: MlssMode = MlssMode.ORIGINAL
    threshold: float = 0.0
    output_dir: Path | None = None
    emit: frozenset = field(default_factory=lambda: frozenset({"D", "R"}))
    dump_raw: bool = False

    @property
    def evaluate(self):
        return self.gt_path is not None

    @property
    def levels(self):
        return LevelRange(self.first_level, self.last_level)

    @property
    def out_dir(self):
        return self.output_dir if self.output_dir is not None else self.input_path.parent


def _build_parser():
    parser = _Parser(
        prog="starseg",
        description="Starlet multi-level segmentation (MLSS) with optional "
                    "MCC-based optimal level selection (MLSOS).",
        epilog="Use 'starseg synth --help' for the synthetic fixture generator.",
    )
    parser.add_argument("--input", metavar="PATH", help="photomicrograph (PNG, JPEG or PGM)")
    parser.add_argument("--gt", metavar="PATH",
                        help="ground-truth image; enables MCC scoring and COMP output")
    parser.add_argument("--first", metavar="N", type=int, default=1,
                        help="first detail level used in the sums (default: 1)")
    parser.add_argument("--last", metavar="N", type=int, default=5,
                        help="last detail level (default: 5)")
    parser.add_argument("--variant", action="store_true",
                        help="derivative MLSS (no subtraction of the input image)")
    parser.add_argument("--threshold", metavar="X", type=float, default=0.0,
                        help="mask is raw > X (default: 0)")
    parser.add_argument("--out", metavar="DIR",
                        help="output directory (default: alongside the input)")
    parser.add_argument("--no-details", action="store_true", help="skip D images")
    parser.add_argument("--no-masks", action="store_true", help="skip R images")
    parser.add_argument("--comp", action="store_true",
                        help="require COMP images (implied by --gt)")
    parser.add_argument("--dump-raw", action="store_true",
                        help="also save raw signed R planes as {stem}_raw.npz")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def parse_args(argv):
    """Translate command-line flags into a :class:`RunConfig`.

    Raises
    ------
    UsageError
        Missing ``--input`` or malformed values.
    ValidationError
        Inconsistent level range or COMP requested without ``--gt``.
    """
    args = _build_parser().parse_args(argv)
    if args.input is None:
        raise UsageError("the following argument is required: --input")
    if args.first < 1:
        raise ValidationError(f"--first must be >= 1 (got {args.first})")
    if args.first > args.last:
        raise ValidationError(f"--first ({args.first}) must not exceed --last ({args.last})")
    if args.comp and args.gt is None:
        raise ValidationError("COMP images need a ground truth: pass --gt")

    emit = set()
    if not args.no_details:
        emit.add("D")
    if not args.no_masks:
        emit.add("R")
    if args.gt is not None:
        emit.update({"COMP", "CSV"})
    return RunConfig(
        input_path=Path(args.input),
        gt_path=Path(args.gt) if args.gt is not None else None,
        first_level=args.first,
        last_level=args.last,
        mode=MlssMode.DERIVATIVE if args.variant else MlssMode.ORIGINAL,
        threshold=args.threshold,
        output_dir=Path(args.out) if args.out is not None else None,
        emit=frozenset(emit),
        dump_raw=args.dump_raw,
    )


def _write_csv_atomic(path, report):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for score in report.per_level:
        c = score.counts
        writer.writerow([score.level, c.tp, c.tn, c.fp, c.fn, repr(score.mcc_percent),
                         int(score.level == report.optimal_level)])
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        os.replace(tmp, path)
    except OSError as exc:
        Path(tmp).unlink(missing_ok=True)
        raise ImageWriteError(f"{path}: cannot write CSV ({exc})") from exc


def run(config, out=None):
    """Decompose, segment, optionally score, and write outputs.

    Returns the :class:`~starseg.evaluation.MccReport` when a ground truth
    was given, otherwise ``None``.
    """
    out = out or sys.stdout
    levels = config.levels
    image = load_grayscale(config.input_path).pixels
    gt = None
    if config.evaluate:
        gt = load_ground_truth(config.gt_path).mask
        if gt.shape != image.shape:
            raise ValidationError(
                f"ground truth shape {gt.shape} does not match image shape {image.shape}")

    stem = config.input_path.stem
    out_dir = config.out_dir
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ImageWriteError(f"{out_dir}: cannot create output directory ({exc})") from exc

    mode_name = "derivative" if config.mode is MlssMode.DERIVATIVE else "original"
    print(f"Applying starlet decomposition, levels {levels.first}..{levels.last}...", file=out)
    decomposition = starlet_decompose(image, levels.last)
    print(f"Applying MLSS ({mode_name})...", file=out)
    stack = mlss(image, decomposition, levels, config.mode, config.threshold)

    report = mlsos(stack, gt) if gt is not None else None
    for level in levels:
        saved = []
        if "D" in config.emit:
            save_plane(decomposition.detail(level), output_path(stem, "D", level, out_dir))
            saved.append("D")
        if "R" in config.emit:
            save_plane(stack.mask_at(level), output_path(stem, "R", level, out_dir))
            saved.append("R")
        if "COMP" in config.emit:
            save_plane(comp_image(stack.mask_at(level), gt),
                       output_path(stem, "COMP", level, out_dir))
            saved.append("COMP")
        line = f"Level {level}: saved {', '.join(saved) if saved else 'nothing'}"
        if report is not None:
            line += f"; MCC {report.per_level[level - levels.first].mcc_percent:.2f}%"
        print(line, file=out)

    if config.dump_raw:
        np.savez(out_dir / f"{stem}_raw.npz",
                 levels=np.arange(levels.first, levels.last + 1), raw=stack.raw)
    if report is not None:
        _write_csv_atomic(out_dir / f"{stem}_mcc.csv", report)
        best = report.optimal
        print(f"Optimal segmentation level: {best.level} (MCC {best.mcc_percent:.2f}%)", file=out)
    return report


def _build_synth_parser():
    parser = _Parser(prog="starseg synth",
                     description="Write a synthetic fixture image and its ground truth as PNG.")
    parser.add_argument("--kind", choices=[k.value for k in FixtureKind], default="blobs")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", metavar="DIR", default=".")
    parser.add_argument("--name", help="file stem (default: {kind}{seed})")
    parser.add_argument("--width", type=int, default=256)
    parser.add_argument("--height", type=int, default=256)
    parser.add_argument("--count", type=int, default=None,
                        help="number of shapes (default: 5 blobs / 8 tracks)")
    parser.add_argument("--size", type=float, default=None,
                        help="disk radius or track thickness (default: 8 / 2)")
    parser.add_argument("--foreground", type=float, default=0.9)
    parser.add_argument("--background", type=float, default=0.1)
    parser.add_argument("--noise", type=float, default=0.05, help="Gaussian noise sigma")
    parser.add_argument("--blur", action="store_true", help="3x3 box blur before noise")
    return parser


def synth_main(argv, out=None):
    out = out or sys.stdout
    args = _build_synth_parser().parse_args(argv)
    blobs = args.kind == FixtureKind.BLOBS.value
    try:
        spec = FixtureSpec(
            kind=args.kind,
            width=args.width,
            height=args.height,
            count=args.count if args.count is not None else (5 if blobs else 8),
            size=args.size if args.size is not None else (8 if blobs else 2),
            foreground=args.foreground,
            background=args.background,
            noise_sigma=args.noise,
            blur=args.blur,
            seed=args.seed,
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    image, gt = generate(spec)
    stem = args.name or f"{args.kind}{args.seed}"
    out_dir = Path(args.out)
    image_path = out_dir / f"{stem}.png"
    gt_path = out_dir / f"{stem}GT.png"
    # quantise to 8 bits without the per-plane rescale used for detail planes
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        Image.fromarray(np.floor(image * 255.0 + 0.5).astype(np.uint8), mode="L").save(image_path)
    except OSError as exc:
        raise ImageWriteError(f"{image_path}: cannot write image ({exc})") from exc
    save_plane(gt, gt_path)
    print(f"wrote {image_path} and {gt_path}", file=out)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and argv[0] == "synth":
            synth_main(argv[1:])
        else:
            run(parse_args(argv))
    except UsageError as exc:
        print(f"starseg: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ImageReadError, ImageWriteError) as exc:
        print(f"starseg: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationError, ValueError, PlacementError) as exc:
        print(f"starseg: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
