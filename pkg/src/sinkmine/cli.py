"""Command-line entry point.

Exit codes: 0 success, 2 configuration problem (bad flags, unreadable
inputs), 3 stage failure (a pipeline stage raised while processing).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from .config import ConfigError, PipelineConfig, load_config, show_config
from .evaluation import UnlabeledPrediction, eval_boosted, simulate_triage
from .lp import LpError
from .pipeline import (PipelineStageError, boosted_eval_sets, load_ep_store,
                       load_predictions, read_seed_specs, run_infer, run_mine,
                       run_pipeline, run_predict, run_refine)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STAGE = 3


def _add_common(p: argparse.ArgumentParser, min_score_default: float | None = None):
    p.add_argument("--corpus")
    p.add_argument("--test-corpus", dest="test_corpus")
    p.add_argument("--seeds", action="append",
                   help="seed-spec file; repeatable, first file is the active query")
    p.add_argument("--seeds-old", dest="seeds_old")
    p.add_argument("--seeds-new", dest="seeds_new")
    p.add_argument("--c", type=float, dest="c")
    p.add_argument("--lambda", type=float, dest="lam")
    p.add_argument("--alpha", type=float)
    p.add_argument("--min-score", type=float, dest="min_score",
                   default=min_score_default)
    p.add_argument("--coarseness-cutoff", type=float, dest="coarseness_cutoff")
    p.add_argument("--embeddings")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sinkmine",
        description="Mine likely taint-sink specifications from client code "
                    "and triage the predictions.")
    parser.add_argument("--config", help="key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("mine", "infer", "predict", "refine", "run"):
        _add_common(sub.add_parser(name))
    serve = sub.add_parser("serve")
    _add_common(serve)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8787)
    _add_common(sub.add_parser("eval"), min_score_default=None)
    _add_common(sub.add_parser("triage-sim"), min_score_default=None)
    config_cmd = sub.add_parser("config")
    config_sub = config_cmd.add_subparsers(dest="config_command", required=True)
    _add_common(config_sub.add_parser("show"))
    return parser


def merge_config(args: argparse.Namespace) -> PipelineConfig:
    config = load_config(args.config) if args.config else PipelineConfig()
    for name in ("corpus", "test_corpus", "seeds_old", "seeds_new", "c", "lam",
                 "alpha", "min_score", "coarseness_cutoff", "embeddings",
                 "out", "jobs"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(config, name, value)
    if getattr(args, "seeds", None):
        config.seeds = list(args.seeds)
    config.validate()
    return config


def _print(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _cmd_serve(config: PipelineConfig, args) -> int:
    import uvicorn

    from .service import create_app
    from .triage import TriageSession

    out = Path(config.out)
    predictions = load_predictions(out / "refined.jsonl")
    e_p = load_ep_store(out / "ep.manifest.json")
    session = TriageSession(predictions, e_p, audit_path=out / "audit.jsonl")
    uvicorn.run(create_app(session), host=args.host, port=args.port)
    return EXIT_OK


def _cmd_eval(config: PipelineConfig) -> int:
    if not config.seeds_old or not config.seeds_new:
        raise ConfigError("eval requires --seeds-old and --seeds-new")
    if getattr(config, "min_score", None) is None:
        config.min_score = 0.5
    old, boosted, new = boosted_eval_sets(config)
    report = eval_boosted(old, boosted, new)
    record = asdict(report)
    for key in ("precision", "recall"):
        if record[key] is None:
            record[key] = "n/a"
    _print(record)
    return EXIT_OK


def _cmd_triage_sim(config: PipelineConfig) -> int:
    if not config.seeds_new:
        raise ConfigError("triage-sim requires --seeds-new for TP labels")
    out = Path(config.out)
    predictions = load_predictions(out / "refined.jsonl")
    e_p = load_ep_store(out / "ep.manifest.json")
    new_reps = {s["rep"] for s in read_seed_specs(config.seeds_new)
                if s["kind"] == "snk"}
    labels = {p.id: p.rep in new_reps for p in predictions}
    report = simulate_triage(predictions, labels, e_p,
                             score_cutoff=config.min_score,
                             coarseness_cutoff=config.coarseness_cutoff,
                             alpha=config.alpha)
    _print(asdict(report))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = merge_config(args)
        # eval and triage-sim screen at the practical 0.5 cutoff by default
        if args.command in ("eval", "triage-sim") and args.min_score is None:
            config.min_score = 0.5

        if args.command == "config":
            print(show_config(config), end="")
            return EXIT_OK
        if args.command == "mine":
            _print(run_mine(config))
            return EXIT_OK
        if args.command == "infer":
            _print(run_infer(config))
            return EXIT_OK
        if args.command == "predict":
            _print(run_predict(config))
            return EXIT_OK
        if args.command == "refine":
            _print(run_refine(config))
            return EXIT_OK
        if args.command == "run":
            _print(run_pipeline(config))
            return EXIT_OK
        if args.command == "serve":
            return _cmd_serve(config, args)
        if args.command == "eval":
            return _cmd_eval(config)
        if args.command == "triage-sim":
            return _cmd_triage_sim(config)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, FileNotFoundError, UnlabeledPrediction) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (PipelineStageError, LpError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_STAGE
    except Exception as err:  # anything else mid-run is a stage failure
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
