"""Command-line entry points for learning, exact bases, evaluation and serving.

Every command is deterministic given its full flag set including
``--seed``.  Exit codes: 0 success, 1 validation or I/O error, 2 abort
(budget exceeded or a learning run stopped by its counterexample cap).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import evaluate as ev
from . import io as hio
from .core import Universe
from .exact import BudgetExceededError, dataset_closure, dg_basis, reduced
from .learner import LearnerConfig, pac_horn_approximation
from .oracle import DatasetOracle

DATA_DIR_ENV = "HORNPAC_DATA_DIR"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ABORT = 2


class CliError(Exception):
    pass


def resolve_data_path(value: str) -> Path:
    """A literal path, a file under $HORNPAC_DATA_DIR, or a packaged dataset name."""
    path = Path(value)
    if path.exists():
        return path
    env_dir = os.environ.get(DATA_DIR_ENV)
    if env_dir:
        candidate = Path(env_dir) / value
        if candidate.exists():
            return candidate
    try:
        return hio.packaged_dataset_path(value)
    except FileNotFoundError:
        raise CliError(f"dataset {value!r} not found") from None


def _load_document(args) -> hio.ContextDocument:
    data_path = resolve_data_path(args.data)
    scaling = getattr(args, "scaling", None)
    if scaling is None and data_path.suffix.lower() == ".csv":
        # A packaged dataset ships its scaling spec next to it.
        try:
            scaling = hio.packaged_scaling_path(data_path.stem)
        except FileNotFoundError:
            raise CliError(f"CSV dataset {data_path} needs --scaling") from None
    try:
        return hio.load_context(data_path, scaling)
    except (hio.ParseError, ValueError, OSError) as exc:
        raise CliError(str(exc)) from None


def _learner_config(args) -> LearnerConfig:
    overrides = {}
    if getattr(args, "config", None):
        try:
            base = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"bad learner config: {exc}") from None
        overrides.update(base)
    overrides.update(
        epsilon=args.epsilon,
        delta=args.delta,
        mode=args.mode,
        seed=args.seed,
        valid_hypothesis=args.valid_hypothesis,
        cache_counterexamples=args.cache,
        cache_confirmed=args.cache,
        max_counterexamples=args.max_counterexamples,
    )
    try:
        return LearnerConfig(**overrides)
    except (TypeError, ValueError) as exc:
        raise CliError(str(exc)) from None


def cmd_learn(args) -> int:
    doc = _load_document(args)
    config = _learner_config(args)
    oracle = DatasetOracle(doc.family)
    formula, report = pac_horn_approximation(oracle, config)
    Path(args.out).write_text(hio.serialize_formula(formula), encoding="utf-8")
    report_path = Path(args.report) if args.report else Path(str(args.out) + ".report.json")
    report_path.write_text(hio.report_to_json(report), encoding="utf-8")
    print(
        f"{len(formula)} implications in {report.rounds} rounds, "
        f"{report.total_queries} queries, {report.wall_time:.2f}s -> {args.out}",
        file=sys.stderr,
    )
    if not report.terminated:
        print("aborted: counterexample cap reached", file=sys.stderr)
        return EXIT_ABORT
    return EXIT_OK


def cmd_exact_basis(args) -> int:
    doc = _load_document(args)
    started = time.perf_counter()
    try:
        basis = dg_basis(dataset_closure(doc.family), doc.universe, budget=args.budget)
    except BudgetExceededError as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    if args.reduced:
        basis = reduced(basis)
    Path(args.out).write_text(hio.serialize_formula(basis), encoding="utf-8")
    print(
        f"{len(basis)} implications in {time.perf_counter() - started:.2f}s -> {args.out}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    doc = _load_document(args)
    try:
        basis_text = Path(args.basis).read_text(encoding="utf-8")
        formula = hio.parse_formula(basis_text, doc.universe)
        config = ev.EvalConfig(eta=args.eta, t=args.t, samples=args.samples, seed=args.seed)
    except (OSError, hio.ParseError, ValueError) as exc:
        raise CliError(str(exc)) from None
    n = config.sample_size()
    rng = np.random.default_rng(config.seed)
    precision = ev.estimate_precision(formula, doc.family, n, rng)
    recall = ev.estimate_recall(formula, doc.family, n, rng)
    payload = {
        "basis": str(args.basis),
        "implications": len(formula),
        "samples": n,
        "precision": precision,
        "recall": recall,
        "fraction_valid": ev.fraction_valid(formula, doc.family),
        "seed": config.seed,
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_gen_random(args) -> int:
    if not 0.0 <= args.density <= 1.0:
        raise CliError(f"density must be in [0, 1], got {args.density}")
    universe = Universe([f"a{k}" for k in range(args.attrs)])
    rng = np.random.default_rng(args.seed)
    family = ev.generate_random_dataset(args.rows, universe, args.density, rng)
    doc = hio.ContextDocument(
        universe,
        family,
        tuple(f"o{k}" for k in range(args.rows)),
        {"title": f"random({args.rows}x{args.attrs}, density={args.density}, seed={args.seed})"},
    )
    Path(args.out).write_text(hio.write_burmeister(doc), encoding="utf-8")
    print(f"{args.rows} rows x {args.attrs} attributes -> {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    doc = _load_document(args)
    epsilons = [float(x) for x in args.epsilons.split(",") if x]
    deltas = [float(x) for x in args.deltas.split(",") if x]
    if args.extreme:
        extreme_eps = 1e-4
        if extreme_eps not in epsilons:
            epsilons.append(extreme_eps)
        print(
            "warning: the 1e-4 cell issues tens of millions of queries and can run for hours",
            file=sys.stderr,
        )
    grid = [(eps, delta) for eps in epsilons for delta in deltas]
    try:
        config = ev.EvalConfig(eta=args.eta, t=args.t, samples=args.samples, seed=args.seed)
        report = ev.run_experiment(
            doc.family,
            grid,
            args.reps,
            config,
            mode=args.mode,
            valid_hypothesis=args.valid_hypothesis,
            max_counterexamples=args.max_counterexamples,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if args.out:
        Path(args.out).write_text(hio.experiment_to_jsonl(report), encoding="utf-8")
    print(hio.summary_table(report), end="")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    default_dataset = None
    if args.data:
        default_dataset = _load_document(args)
    app = create_app(
        state_dir=args.state_dir,
        default_dataset=default_dataset,
        ui_dir=args.ui_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hornpac",
        description="Horn envelopes from implication queries: exact bases, PAC learning, "
        "evaluation, and an interactive expert service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data_flags(p, scaling=True):
        p.add_argument("--data", required=True,
                       help="dataset path (.cxt or .csv), name under $HORNPAC_DATA_DIR, "
                            "or packaged name like 'zoo'")
        if scaling:
            p.add_argument("--scaling", default=None, help="scaling spec JSON for CSV input")

    p = sub.add_parser("learn", help="run the PAC learner against a dataset-backed expert")
    add_data_flags(p)
    p.add_argument("--epsilon", type=float, required=True, help="approximation tolerance in (0, 1]")
    p.add_argument("--delta", type=float, required=True, help="failure probability in (0, 1]")
    p.add_argument("--mode", choices=["approx", "strong"], default="approx",
                   help="plain or strong equivalence sampling")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache", action="store_true",
                   help="cache counterexamples and confirmed implications")
    p.add_argument("--valid-hypothesis", action="store_true", dest="valid_hypothesis",
                   help="keep every hypothesis implication valid in the domain")
    p.add_argument("--max-counterexamples", type=int, default=None)
    p.add_argument("--config", default=None, help="learner config JSON (flags override)")
    p.add_argument("--out", required=True, help="output formula file (JSON records)")
    p.add_argument("--report", default=None, help="run report path (default: OUT.report.json)")
    p.set_defaults(handler=cmd_learn)

    p = sub.add_parser("exact-basis", help="compute the canonical basis of a dataset")
    add_data_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--budget", type=int, default=None, help="cap on visited sets")
    p.add_argument("--reduced", action="store_true", help="strip premises from conclusions")
    p.set_defaults(handler=cmd_exact_basis)

    p = sub.add_parser("eval", help="estimate precision/recall of a formula on a dataset")
    add_data_flags(p)
    p.add_argument("--basis", required=True, help="formula file to evaluate")
    p.add_argument("--eta", type=float, default=0.001, help="Hoeffding confidence parameter")
    p.add_argument("--t", type=float, default=0.01, help="Hoeffding tolerance parameter")
    p.add_argument("--samples", type=int, default=None, help="explicit sample count override")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("gen-random", help="generate a random dataset in Burmeister form")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--attrs", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_gen_random)

    p = sub.add_parser("bench", help="run the learner over an (epsilon, delta) grid")
    add_data_flags(p)
    p.add_argument("--epsilons", default="0.01,0.001", help="comma-separated epsilon values")
    p.add_argument("--deltas", default="0.1", help="comma-separated delta values")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--mode", choices=["approx", "strong"], default="approx")
    p.add_argument("--valid-hypothesis", action="store_true", dest="valid_hypothesis")
    p.add_argument("--max-counterexamples", type=int, default=None)
    p.add_argument("--eta", type=float, default=0.001)
    p.add_argument("--t", type=float, default=0.01)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--extreme", action="store_true",
                   help="add the epsilon=1e-4 cell (tens of millions of queries)")
    p.add_argument("--out", default=None, help="JSONL record output")
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("serve", help="serve the interactive expert-session API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data", default=None, help="optional default dataset for sessions")
    p.add_argument("--scaling", default=None)
    p.add_argument("--state-dir", default=None, help="directory for append-only session logs")
    p.add_argument("--ui-dir", default=None, help="directory with the built browser UI")
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except BrokenPipeError:
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
