"""Command-line entry point.

Exit codes: 0 success, 1 config error, 2 data error, 3 training error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline
from .config import load_config
from .errors import ScriptSwitchError, StageError, TrainingError

log = logging.getLogger("scriptswitch")


def _add_config_args(p):
    p.add_argument("--config", "-c", required=True, help="experiment config (JSON)")
    p.add_argument("--out", dest="output_dir", help="output directory (overrides config)")
    p.add_argument("--seed", type=int)
    p.add_argument("--languages", nargs="+", metavar="LANG")
    p.add_argument("--variants", nargs="+", choices=["baseline", "synthetic", "organic"], type=str.lower)
    p.add_argument("--scopes", nargs="+", choices=["mono", "multi"], type=str.lower)
    p.add_argument("--sample-fraction", type=float)
    p.add_argument("--vocab-size", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--eval-every", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--learning-rate", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scriptswitch", description="Run script-switching detection experiments and label new text."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("stats", "corpus summary, class distribution and script-mix reports"),
        ("augment", "build the baseline and synthetic adaptation corpora"),
        ("mine", "build language profiles and mine the organic corpus"),
        ("adapt", "fit one feature model per adaptation corpus"),
        ("train", "train mono and multi classifiers for every variant"),
        ("evaluate", "score every grid cell on the held-out test parts"),
        ("select", "pick per-language winners and the nominated configuration"),
        ("run", "full pipeline"),
    ]:
        _add_config_args(sub.add_parser(name, help=help_text))

    p = sub.add_parser("predict", help="label every line of a text file with a trained model")
    p.add_argument("model")
    p.add_argument("input")
    p.add_argument("--output", "-o", help="write JSON lines here instead of stdout")

    p = sub.add_parser("fixtures", help="write the generated desk-scale fixture corpus")
    p.add_argument("directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=0.1)
    return parser


def _config(args):
    cfg = load_config(args.config)
    return cfg.with_overrides(
        output_dir=args.output_dir,
        seed=args.seed,
        languages=args.languages,
        variants=args.variants,
        scopes=args.scopes,
        sample_fraction=args.sample_fraction,
        vocab_size=args.vocab_size,
        epochs=args.epochs,
        eval_every=args.eval_every,
        batch_size=args.batch_size,
        learning_rate=args.learning_rate,
    )


def _dispatch(args) -> int:
    if args.command == "predict":
        records = pipeline.run_predict(args.model, args.input)
        text = "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in records)
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return 0
    if args.command == "fixtures":
        from .fixtures import write_fixture

        path = write_fixture(args.directory, seed=args.seed, scale=args.scale)
        print(f"fixture config: {path}")
        return 0

    cfg = _config(args)
    if args.command == "run":
        manifest = pipeline.run_experiment(cfg)
        print(f"nominated: {manifest['stages']['select']['nominated']}")
        print(f"output: {cfg.output_dir}")
    else:
        record = pipeline.run_stage(args.command, cfg)
        print(json.dumps(record, indent=2, sort_keys=True, ensure_ascii=False))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _dispatch(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ScriptSwitchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (FloatingPointError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return TrainingError.exit_code


if __name__ == "__main__":
    sys.exit(main())
