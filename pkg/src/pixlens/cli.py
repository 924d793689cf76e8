"""Command-line surface: evaluate, disentangle, aggregate, grid."""

from __future__ import annotations

import argparse
import glob
import json
import sys
from pathlib import Path

from .dataset import SOURCES, load_edit_dataset
from .detections import load_archive
from .disentanglement.report import run_disentanglement
from .disentanglement.vocabulary import build_prompt_grid, grid_to_dict
from .errors import PixlensError
from .evaluators import SizeParams
from .pipeline import RunConfig, run_evaluation
from .report import EvaluationReport, aggregate, render, render_aggregate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the documented code is 1.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="pixlens", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    evaluate = sub.add_parser("evaluate", help="score an edit dataset")
    evaluate.add_argument("--edits", required=True, help="edit dataset JSON file")
    evaluate.add_argument("--images", required=True, help="input images directory")
    evaluate.add_argument("--edited", required=True, help="edited images directory")
    evaluate.add_argument("--detections-input", required=True, help="input detection archive")
    evaluate.add_argument("--detections-edited", required=True, help="edited detection archive")
    evaluate.add_argument("--threshold", type=float, default=0.1)
    evaluate.add_argument("--out", help="output file (default: stdout)")
    evaluate.add_argument("--workers", type=int, default=1)
    evaluate.add_argument("--format", choices=("json", "markdown", "csv"), default="json")
    evaluate.add_argument("--source", choices=SOURCES, default="editval")
    evaluate.add_argument("--model", default="model", help="model label for the report")
    evaluate.add_argument("--size-delta", type=float, default=0.1)
    evaluate.add_argument("--containment-threshold", type=float, default=0.9)

    disentangle = sub.add_parser("disentangle", help="score a latent archive")
    disentangle.add_argument("--latents", required=True, help="latent archive directory")
    disentangle.add_argument("--epochs", type=int, default=50)
    disentangle.add_argument("--test-split", type=float, default=0.3)
    disentangle.add_argument("--seed", type=int, default=0)
    disentangle.add_argument("--class-cap", type=int, default=2000)
    disentangle.add_argument("--out", help="output file (default: stdout)")

    agg = sub.add_parser("aggregate", help="combine evaluation reports")
    agg.add_argument("--reports", required=True, help="glob of report JSON files")
    agg.add_argument("--group-by", choices=("edit_type", "model"), default="edit_type")
    agg.add_argument("--format", choices=("json", "markdown", "csv"), default="markdown")
    agg.add_argument("--out", help="output file (default: stdout)")

    grid = sub.add_parser("grid", help="emit the disentanglement prompt grid")
    grid.add_argument("--out", help="output file (default: stdout)")
    return parser


def _emit(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


def _cmd_evaluate(args: argparse.Namespace) -> int:
    if not 0.0 <= args.threshold <= 1.0:
        print(f"pixlens: error: threshold {args.threshold} outside [0, 1]", file=sys.stderr)
        return EXIT_USAGE
    dataset = load_edit_dataset(args.edits, source=args.source)
    for edit_id in sorted(dataset.violations):
        problems = ", ".join(dataset.violations[edit_id])
        print(f"warning: {edit_id}: {problems}", file=sys.stderr)
    config = RunConfig(
        model=args.model,
        threshold=args.threshold,
        size_params=SizeParams(args.size_delta, args.containment_threshold),
        workers=args.workers,
    )
    report = run_evaluation(
        dataset,
        args.images,
        args.edited,
        load_archive(args.detections_input),
        load_archive(args.detections_edited),
        config,
    )
    _emit(render(report, args.format), args.out)
    return EXIT_OK


def _cmd_disentangle(args: argparse.Namespace) -> int:
    result = run_disentanglement(
        args.latents,
        epochs=args.epochs,
        test_fraction=args.test_split,
        seed=args.seed,
        class_cap=args.class_cap,
    )
    _emit(json.dumps(result, indent=2, sort_keys=True).encode("utf-8"), args.out)
    return EXIT_OK


def _cmd_aggregate(args: argparse.Namespace) -> int:
    paths = sorted(glob.glob(args.reports))
    if not paths:
        raise PixlensError(f"no reports match {args.reports!r}")
    reports = []
    for path in paths:
        try:
            reports.append(EvaluationReport.from_dict(json.loads(Path(path).read_text())))
        except (json.JSONDecodeError, KeyError) as exc:
            raise PixlensError(f"unreadable report {path}: {exc}") from exc
    table = aggregate(reports, group_by=args.group_by)
    _emit(render_aggregate(table, args.format), args.out)
    return EXIT_OK


def _cmd_grid(args: argparse.Namespace) -> int:
    payload = grid_to_dict(build_prompt_grid())
    _emit(json.dumps(payload, indent=2, sort_keys=True).encode("utf-8"), args.out)
    return EXIT_OK


_COMMANDS = {
    "evaluate": _cmd_evaluate,
    "disentangle": _cmd_disentangle,
    "aggregate": _cmd_aggregate,
    "grid": _cmd_grid,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PixlensError as exc:
        print(f"pixlens: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
