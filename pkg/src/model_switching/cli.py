"""
Command-line front end.

    model-switching generate    --samples N --features D --informative K --out data.csv
    model-switching train       --model rf|gbt|svm --data train.csv --out model.json
    model-switching evaluate    --model-file model.json --data val.csv
    model-switching switch      --current model.json --train t.csv --val v.csv
    model-switching experiment  --name exp1|exp2|sweep [--repeat K] [--report r.json]

Exit codes: 0 success, 1 unexpected failure, 2 usage or validation error,
3 file system error. Accuracy lines go to stdout; log events go to stderr.
"""

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd
import structlog

from . import __version__
from .dataset import DatasetSpec, NoiseSpec, generate, read_csv, write_csv
from .errors import InvalidArgumentError, ModelSwitchingError, StageError
from .experiments import ExperimentReport, format_stage_summary, run_named
from .learners import PARAMS_TYPES, make_trainer, resolve_kind
from .log import configure_logging
from .metrics import evaluate, format_accuracy
from .persistence import load_model, save_model
from .rng import rng_from_seed
from .switching import SwitchPolicy, switch_models

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3

# hyperparameter field -> command-line flag
PARAM_FLAGS = {
    "n_estimators": "--n-estimators",
    "max_depth": "--max-depth",
    "min_samples_leaf": "--min-samples-leaf",
    "min_samples_split": "--min-samples-split",
    "features_per_split": "--features-per-split",
    "bootstrap": "--no-bootstrap",
    "learning_rate": "--learning-rate",
    "subsample": "--subsample",
    "colsample_bytree": "--colsample",
    "reg_lambda": "--reg-lambda",
    "gamma": "--gamma",
    "base_score": "--base-score",
    "epochs": "--epochs",
}


def _say(args, line: str) -> None:
    if not args.quiet:
        print(line)


def _require_out(args) -> Path:
    if not args.out:
        raise InvalidArgumentError(f"{args.command} needs --out")
    return Path(args.out)


def params_from_args(kind: str, args):
    """
    Hyperparameters for ``kind`` from the flags that were given.

    Flags left unset keep the kind's defaults; ``--seed`` always applies.

    :raises InvalidArgumentError: If a given flag does not apply to ``kind``.
    """
    params_type = PARAMS_TYPES[kind]
    known = {f.name for f in fields(params_type)}
    values = {"seed": args.seed}
    for name, flag in PARAM_FLAGS.items():
        value = getattr(args, name, None)
        if value is None:
            continue
        if name not in known:
            raise InvalidArgumentError(f"{flag} does not apply to model kind {kind}")
        values[name] = value
    return params_type(**values)


def _write_rows(rows: List[dict], path: Path) -> None:
    pd.DataFrame(rows).to_csv(path, index=False, lineterminator="\n")


def _write_json(doc, path: Path) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def cmd_generate(args) -> int:
    spec = DatasetSpec(
        n_samples=args.samples,
        n_features=args.features,
        n_informative=args.informative,
        n_redundant=args.redundant,
        n_clusters_per_class=args.clusters_per_class,
        class_sep=args.class_sep,
        seed=args.seed,
        draw=args.draw,
    )
    out = _require_out(args)
    data = generate(spec)
    write_csv(data, out)
    zeros, ones = data.class_counts()
    _say(
        args,
        f"Wrote {data.n_samples} rows x {data.n_features} features to {out} "
        f"(class 0: {zeros}, class 1: {ones})",
    )
    return EXIT_OK


def cmd_train(args) -> int:
    kind = resolve_kind(args.model)
    out = _require_out(args)
    train = read_csv(args.data)
    trainer = make_trainer(kind, params_from_args(kind, args), n_jobs=args.jobs)
    model = trainer(train)
    save_model(model, out)
    result = evaluate(model, train)
    logger.info("model_trained", model_kind=kind, n_rows=train.n_samples, out=str(out))
    _say(args, f"Training accuracy: {format_accuracy(result.accuracy)}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    model = load_model(args.model_file)
    data = read_csv(args.data)
    result = evaluate(model, data)
    _say(args, f"Accuracy: {format_accuracy(result.accuracy)}")
    if args.out:
        doc = {"model_kind": model.kind, **result.to_dict()}
        if args.format == "csv":
            _write_rows([doc], Path(args.out))
        else:
            _write_json(doc, Path(args.out))
    return EXIT_OK


def cmd_switch(args) -> int:
    current = load_model(args.current)
    train = read_csv(args.train)
    val = read_csv(args.val)
    kind = resolve_kind(args.candidate)
    trainer = make_trainer(kind, params_from_args(kind, args), n_jobs=args.jobs)
    policy = SwitchPolicy(
        accuracy_threshold=args.threshold,
        require_threshold=not args.no_threshold_gate,
        margin=args.margin,
    )
    noise = NoiseSpec(args.noise) if args.noise is not None else None
    rng = rng_from_seed(args.seed).split("noise/candidate")
    retained, report = switch_models(
        current, train, val, policy, trainer, candidate_noise=noise, rng=rng
    )
    for line in report.log_lines():
        _say(args, line)
    if args.report:
        Path(args.report).write_text(report.to_json(args.timings), encoding="utf-8")
    if args.out:
        save_model(retained, Path(args.out))
    return EXIT_OK


def _parse_sizes(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InvalidArgumentError(
            f"--sizes must be comma-separated integers, got {text!r}"
        ) from None


def _report_path(base: Path, seed: int, repeat: int) -> Path:
    if repeat == 1:
        return base
    return base.with_name(f"{base.stem}-seed{seed}{base.suffix}")


def _report_rows(reports: Sequence[ExperimentReport]) -> List[dict]:
    rows = []
    for report in reports:
        for stage in report.stages:
            rows.append(
                {
                    "name": report.config.name,
                    "seed": report.config.seed,
                    "stage": stage.index,
                    "n_samples": stage.n_samples,
                    "current_accuracy": stage.switch.current_accuracy,
                    "candidate_accuracy": stage.switch.candidate_accuracy,
                    "action": stage.switch.decision.action.value,
                    "reason": stage.switch.decision.reason.value,
                    "final_model_kind": report.final_model_kind,
                }
            )
    return rows


def cmd_experiment(args) -> int:
    if args.repeat < 1:
        raise InvalidArgumentError(f"--repeat must be >= 1, got {args.repeat}")
    if args.sizes is not None and args.name != "sweep":
        raise InvalidArgumentError(
            f"--sizes only applies to --name sweep, not {args.name!r}"
        )
    sizes = _parse_sizes(args.sizes)
    for offset in range(args.repeat):
        seed = args.seed + offset
        reports = run_named(
            args.name, seed, n_jobs=args.jobs, simple=args.simple, sizes=sizes
        )
        if args.repeat > 1:
            _say(args, f"[{args.name} seed={seed}]")
        for report in reports:
            for line in report.log_lines():
                _say(args, line)
        if args.repeat > 1:
            for report in reports:
                _say(args, format_stage_summary(report))
        if args.report:
            path = _report_path(Path(args.report), seed, args.repeat)
            if args.format == "csv":
                _write_rows(_report_rows(reports), path)
            elif args.name == "sweep":
                _write_json([r.to_dict(args.timings) for r in reports], path)
            else:
                path.write_text(reports[0].to_json(args.timings), encoding="utf-8")
    return EXIT_OK


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group(
        "hyperparameters (unset flags keep the model defaults)"
    )
    group.add_argument("--n-estimators", type=int, dest="n_estimators")
    group.add_argument("--max-depth", type=int, dest="max_depth")
    group.add_argument("--min-samples-leaf", type=int, dest="min_samples_leaf")
    group.add_argument("--min-samples-split", type=int, dest="min_samples_split")
    group.add_argument("--features-per-split", type=int, dest="features_per_split")
    group.add_argument(
        "--no-bootstrap",
        dest="bootstrap",
        action="store_const",
        const=False,
        default=None,
        help="forest: train every tree on all rows",
    )
    group.add_argument("--learning-rate", type=float, dest="learning_rate")
    group.add_argument("--subsample", type=float)
    group.add_argument("--colsample", type=float, dest="colsample_bytree")
    group.add_argument("--reg-lambda", type=float, dest="reg_lambda")
    group.add_argument("--gamma", type=float)
    group.add_argument("--base-score", type=float, dest="base_score")
    group.add_argument("--epochs", type=int)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=42, help="64-bit seed (default: 42)"
    )
    common.add_argument("--out", help="output file")
    common.add_argument(
        "--format",
        choices=["json", "csv"],
        default="json",
        help="format of result files (default: json)",
    )
    common.add_argument(
        "--quiet", action="store_true", help="only print warnings and errors"
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="more log output on stderr"
    )
    common.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="worker threads for forest training (-1 = all cores)",
    )
    common.add_argument(
        "--timings", action="store_true", help="include elapsed times in reports"
    )

    parser = argparse.ArgumentParser(
        prog="model-switching",
        description="Switch between a simple and a complex classifier "
        "by validation accuracy",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s generate --samples 5000 --features 20 --informative 10 --out d.csv
  %(prog)s train --model gbt --data d.csv --max-depth 10 --out m.json
  %(prog)s experiment --name exp2 --seed 42 --report r.json
""",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    gen = subparsers.add_parser(
        "generate", parents=[common], help="write a synthetic dataset"
    )
    gen.add_argument("--samples", type=int, default=5000)
    gen.add_argument("--features", type=int, default=20)
    gen.add_argument("--informative", type=int, default=10)
    gen.add_argument("--redundant", type=int, default=0)
    gen.add_argument("--clusters-per-class", type=int, default=1)
    gen.add_argument("--class-sep", type=float, default=1.0)
    gen.add_argument(
        "--draw", type=int, default=0, help="sample draw of the same distribution"
    )
    gen.set_defaults(func=cmd_generate)

    train = subparsers.add_parser(
        "train", parents=[common], help="fit a model on a CSV file"
    )
    train.add_argument("--model", required=True, help="rf, gbt, svm or tree")
    train.add_argument("--data", required=True)
    _add_param_flags(train)
    train.set_defaults(func=cmd_train)

    ev = subparsers.add_parser("evaluate", parents=[common], help="score a saved model")
    ev.add_argument("--model-file", required=True)
    ev.add_argument("--data", required=True)
    ev.set_defaults(func=cmd_evaluate)

    sw = subparsers.add_parser(
        "switch", parents=[common], help="run one switching round"
    )
    sw.add_argument("--current", required=True, help="current model file")
    sw.add_argument("--train", required=True)
    sw.add_argument("--val", required=True)
    sw.add_argument("--threshold", type=float, default=0.8)
    sw.add_argument(
        "--no-threshold-gate",
        action="store_true",
        help="switch on improvement alone",
    )
    sw.add_argument("--margin", type=float, default=0.0)
    sw.add_argument(
        "--candidate", default="gbt", help="candidate model kind (default: gbt)"
    )
    sw.add_argument(
        "--noise",
        type=float,
        help="train the candidate on data with this noise level",
    )
    sw.add_argument("--report", help="write the switch report here")
    _add_param_flags(sw)
    sw.set_defaults(func=cmd_switch)

    exp = subparsers.add_parser(
        "experiment", parents=[common], help="run a scripted experiment"
    )
    exp.add_argument("--name", required=True, help="exp1, exp2 or sweep")
    exp.add_argument("--sizes", help="sweep sizes, e.g. 1000,5000,25000")
    exp.add_argument("--repeat", type=int, default=1, help="run seeds seed..seed+K-1")
    exp.add_argument(
        "--simple", default="forest", help="initial model: rf (default) or svm"
    )
    exp.add_argument(
        "--report", help="report file; suffixed with the seed when repeating"
    )
    exp.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    configure_logging(-1 if args.quiet else args.verbose)
    try:
        return args.func(args)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        cause: BaseException = exc
        while isinstance(cause, StageError) and cause.__cause__ is not None:
            cause = cause.__cause__
        if isinstance(cause, InvalidArgumentError):
            return EXIT_USAGE
        return EXIT_IO if isinstance(cause, OSError) else EXIT_FAILURE
    except ModelSwitchingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as exc:
        logger.exception("command_failed", command=args.command)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
