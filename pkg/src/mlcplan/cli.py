"""Command-line interface: ``mlcplan {run,eval,losses,bayes,space,synth}``.

Exit codes: 0 success, 1 configuration or data fault (one JSON line on
stderr), 2 when a search finished without any successful candidate.
"""
from __future__ import annotations

import argparse
import datetime
import json
import math
import sys
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from ._common import derive_seed
from .bayes import ConditionalDistribution, summarize
from .data import Dataset, label_stats, load_csv, load_meka_arff, save_csv, split_indices
from .errors import AllRepeatsFailed, MlcPlanError
from .evaluate import PipelineEvaluator, compile_instance, fit_pipeline, mccv
from .losses import CANONICAL_KINDS, LossKind, all_losses, subset_k_loss, threshold_scores
from .optimize import (
    OptConfig,
    best_first,
    hyperband,
    random_search,
    successive_halving,
)
from .searchspace import (
    ComponentInstance,
    builtin_registry,
    count_leaves,
    edge_count,
    export_dag_dot,
    load_registry,
    random_completion,
    root_node,
)
from .synth import SYNTH_KINDS, synth_generate

RESULT_FORMAT = "mlcplan-result/1"
OPTIMIZERS = ("best-first", "random", "sh", "hyperband")
LOSS_CHOICES = ("hamming", "subset01", "f1i", "f1l", "f1micro")
TEST_FRACTION = 0.2
EXIT_OK, EXIT_FAULT, EXIT_NO_CANDIDATE = 0, 1, 2


class CliError(MlcPlanError):
    """Bad command-line input."""


def resource_path(name: str) -> Path:
    """Path of a file bundled in ``mlcplan/resources``."""
    return Path(str(resources.files("mlcplan") / "resources" / name))


def result_schema() -> dict:
    return json.loads(resource_path("result.schema.json").read_text())


# ---------------------------------------------------------------------------
# shared helpers

def load_dataset(path, fmt="csv", labels=None, label_pos="suffix") -> Dataset:
    if fmt == "arff":
        return load_meka_arff(path)
    if labels is None:
        raise CliError("--labels is required for CSV data")
    return load_csv(path, labels, label_pos)


def load_registry_file(path):
    if path is None:
        return builtin_registry()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read registry {path}: {exc}") from exc
    try:
        return load_registry(text)
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise CliError(f"malformed registry {path}: {exc!r}") from exc


def _read_matrix(path) -> np.ndarray:
    """Numeric CSV with one header row."""
    path = Path(path)
    if not path.is_file():
        raise CliError(f"no such file: {path}")
    try:
        M = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from exc
    return M


def _fault(exc) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
    return EXIT_FAULT


# ---------------------------------------------------------------------------
# run

@dataclass
class RunConfig:
    data: str
    format: str = "csv"
    labels: int | None = None
    label_pos: str = "suffix"
    loss: str = "hamming"
    optimizer: str = "best-first"
    timeout: float = 60.0
    eval_timeout: float | None = 30.0
    seed: int = 0
    completions: int = 3
    workers: int = 1
    registry: str | None = None
    tau: float = 0.5
    out: str = "result.json"
    max_evals: int | None = None
    repeats: int = 1
    guard: bool = True
    eta: int = 2
    b_min: float = 0.25
    candidates: int = 16

    def validate(self):
        if self.format not in ("csv", "arff"):
            raise CliError(f"unknown format {self.format!r}")
        if self.optimizer not in OPTIMIZERS:
            raise CliError(f"unknown optimizer {self.optimizer!r}")
        if self.loss not in LOSS_CHOICES:
            raise CliError(f"unknown loss {self.loss!r}")
        if not 0.0 <= self.tau <= 1.0:
            raise CliError("tau must lie in [0, 1]")
        if self.repeats < 1 or self.candidates < 1:
            raise CliError("repeats and candidates must be positive")
        if not Path(self.data).is_file():
            raise CliError(f"no such dataset: {self.data}")


def _opt_config(cfg: RunConfig) -> OptConfig:
    return OptConfig(kind=cfg.loss, time_budget_s=cfg.timeout, eval_timeout_s=cfg.eval_timeout,
                     n_completions=cfg.completions, workers=cfg.workers, seed=cfg.seed,
                     max_evaluations=cfg.max_evals, eta=cfg.eta, b_min=cfg.b_min)


def _search(cfg: RunConfig, registry, evaluator, opt: OptConfig):
    if cfg.optimizer == "best-first":
        return best_first(registry, evaluator, opt)
    if cfg.optimizer == "random":
        return random_search(registry, evaluator, opt)
    root = root_node(registry)

    def sampler(seed):
        return random_completion(registry, root, seed, opt.completion_mode)

    if cfg.optimizer == "sh":
        cands = [sampler(derive_seed(cfg.seed, 2, i)) for i in range(cfg.candidates)]
        return successive_halving(cands, evaluator.budgeted, opt.eta, opt.b_min, opt.b_max,
                                  opt.time_budget_s, opt.max_evaluations, opt.workers)
    return hyperband(sampler, evaluator.budgeted, opt.eta, opt.b_max, opt.b_min, cfg.seed,
                     opt.time_budget_s, opt.max_evaluations, opt.workers)


def _test_losses(best, registry, search: Dataset, test: Dataset, tau, seed):
    spec = compile_instance(best, registry)
    fitted = fit_pipeline(spec, search, derive_seed(seed, 3))
    _, hard = fitted.predict(test.features, tau)
    return all_losses(test.labels, hard)


def cmd_run(cfg: RunConfig) -> int:
    cfg.validate()
    ds = load_dataset(cfg.data, cfg.format, cfg.labels, cfg.label_pos)
    registry = load_registry_file(cfg.registry)
    opt = _opt_config(cfg)
    # the test rows never reach the optimizer
    search_rows, test_rows = split_indices(ds.n_rows, 1.0 - TEST_FRACTION, cfg.seed)
    search, test = ds.take(search_rows), ds.take(test_rows)
    evaluator = PipelineEvaluator(search, opt.kind, cfg.eval_timeout, cfg.tau,
                                  derive_seed(cfg.seed, 1), registry, cfg.repeats, guard=cfg.guard)
    result = _search(cfg, registry, evaluator, opt)

    test_losses = None
    if result.best is not None:
        test_losses = _test_losses(result.best, registry, search, test, cfg.tau, cfg.seed)
    status = "ok" if result.best is not None else "no_candidate_completed"
    doc = {
        "format": RESULT_FORMAT,
        "status": status,
        "optimizer": cfg.optimizer,
        "config": asdict(cfg),
        "dataset": {"path": str(cfg.data), "n_rows": ds.n_rows, "n_features": ds.n_features,
                    "n_labels": ds.n_labels, "n_search_rows": search.n_rows,
                    "n_test_rows": test.n_rows,
                    "test_label_density": label_stats(test).density},
        "best": result.best.to_dict() if result.best is not None else None,
        "search_loss": result.best_loss,
        "test_losses": test_losses,
        "n_evaluated": result.n_evaluated,
        "elapsed_s": result.elapsed_s,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "trace": [e.to_dict() for e in result.trace],
    }
    out = Path(cfg.out)
    out.write_text(json.dumps(doc, indent=1) + "\n")
    out.with_suffix(".trace.jsonl").write_text(result.trace_jsonl())
    if result.best is None:
        print(f"no candidate completed ({result.n_evaluated} evaluations); wrote {out}")
        return EXIT_NO_CANDIDATE
    print(f"best: {result.best}")
    print(f"search {cfg.loss}: {result.best_loss:.4f}  evaluated: {result.n_evaluated}")
    print("test  " + "  ".join(f"{k}={v:.4f}" for k, v in test_losses.items()))
    return EXIT_OK


# ---------------------------------------------------------------------------
# other subcommands

def _load_instance(path) -> ComponentInstance:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read pipeline {path}: {exc}") from exc
    if isinstance(doc, dict) and doc.get("format") == RESULT_FORMAT:
        doc = doc.get("best")
        if doc is None:
            raise CliError(f"{path} holds no best pipeline")
    try:
        return ComponentInstance.from_dict(doc)
    except (KeyError, TypeError, AttributeError) as exc:
        raise CliError(f"malformed pipeline {path}: {exc!r}") from exc


def cmd_eval(args) -> int:
    inst = _load_instance(args.pipeline)
    ds = load_dataset(args.data, args.format, args.labels, args.label_pos)
    registry = load_registry_file(args.registry)
    compile_instance(inst, registry)
    try:
        _, records = mccv(inst, ds, args.repeats, args.train_ratio, args.seed, args.loss,
                          args.eval_timeout, args.tau, registry)
    except AllRepeatsFailed as exc:
        print(json.dumps({"error": "AllRepeatsFailed", "message": str(exc)}), file=sys.stderr)
        return EXIT_NO_CANDIDATE
    ok = [r for r in records if r.ok]
    for kind in CANONICAL_KINDS:
        print(f"{kind.value:<12}{np.mean([r.losses[kind.value] for r in ok]):.6f}")
    print(f"{'repeats_ok':<12}{len(ok)}/{len(records)}")
    return EXIT_OK


def cmd_losses(args) -> int:
    Y = _read_matrix(args.truth)
    P = _read_matrix(args.pred)
    if Y.shape != P.shape:
        raise CliError(f"truth shape {Y.shape} differs from prediction shape {P.shape}")
    Yhat = threshold_scores(P, args.tau)
    table = all_losses(Y, Yhat)
    if args.subset_k is not None:
        table[f"subset_k={args.subset_k}"] = subset_k_loss(Y, Yhat, args.subset_k)
    print(json.dumps(table))
    return EXIT_OK


def cmd_bayes(args) -> int:
    path = Path(args.distribution) if args.distribution else resource_path("landscape_distribution.json")
    try:
        text = path.read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    try:
        dist = ConditionalDistribution.from_json(text)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, MlcPlanError):
            raise
        raise CliError(f"malformed distribution {path}: {exc!r}") from exc
    summary = summarize(dist)
    if args.json:
        print(json.dumps(summary))
        return EXIT_OK
    for kind in CANONICAL_KINDS:
        row = summary[kind.value]
        print(f"{kind.value:<12}{tuple(row['prediction'])!s:<24}{row['risk']:.6f}")
    print(f"{'marginals':<12}" + " ".join(f"{q:.6f}" for q in summary["marginals"]))
    return EXIT_OK


def cmd_space(args) -> int:
    registry = load_registry_file(args.registry)
    if args.action == "dot":
        sys.stdout.write(export_dag_dot(registry))
        return EXIT_OK
    n = count_leaves(registry)
    if args.action == "validate":
        print(f"ok: {len(registry.components)} components, {n} leaves")
        return EXIT_OK
    for comp in registry.components:
        req = ", ".join(f"{s}:{i}" for s, i in comp.requires) or "-"
        params = ", ".join(p.name for p in comp.params) or "-"
        print(f"{comp.name:<18}provides {'/'.join(comp.provides):<28}requires {req:<40}params {params}")
    print(f"leaves: {n}  edges: {edge_count(registry)}")
    return EXIT_OK


def cmd_synth(args) -> int:
    ds = synth_generate(args.kind, args.rows, args.features, args.labels, args.seed)
    save_csv(ds, args.out)
    print(f"wrote {args.out}: {ds.n_rows} rows, {ds.n_features} features, {ds.n_labels} labels "
          f"(density {label_stats(ds).density:.4f})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _positive_float(text):
    v = float(text)
    if not math.isfinite(v) or v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return v


def _data_args(p, required=True):
    p.add_argument("--data", required=required, help="dataset path")
    p.add_argument("--format", choices=("csv", "arff"), default="csv")
    p.add_argument("--labels", type=int, help="number of label columns (CSV)")
    p.add_argument("--label-pos", choices=("prefix", "suffix"), default="suffix")
    p.add_argument("--registry", help="component registry JSON (default: built-in)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlcplan", description="Multi-label AutoML by decomposition search.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="search for a pipeline and report held-out losses")
    _data_args(p)
    p.add_argument("--loss", choices=LOSS_CHOICES, default="hamming")
    p.add_argument("--optimizer", choices=OPTIMIZERS, default="best-first")
    p.add_argument("--timeout", type=_positive_float, default=60.0, help="total budget in seconds")
    p.add_argument("--eval-timeout", type=_positive_float, default=30.0, help="per-candidate limit in seconds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--completions", type=int, default=3, help="random completions per node")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--out", default="result.json")
    p.add_argument("--max-evals", type=int, help="stop after this many evaluations")
    p.add_argument("--repeats", type=int, default=1, help="holdout repeats per evaluation")
    p.add_argument("--no-guard", action="store_true", help="disable the runtime guard")
    p.add_argument("--eta", type=int, default=2)
    p.add_argument("--b-min", type=float, default=0.25, help="smallest training fraction (sh, hyperband)")
    p.add_argument("--candidates", type=int, default=16, help="initial candidates for sh")

    p = sub.add_parser("eval", help="evaluate one pipeline by repeated holdout")
    p.add_argument("--pipeline", required=True, help="pipeline JSON or a run result")
    _data_args(p)
    p.add_argument("--loss", choices=LOSS_CHOICES, default="hamming")
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--train-ratio", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eval-timeout", type=_positive_float, default=None)

    p = sub.add_parser("losses", help="loss table for truth and prediction CSV files")
    p.add_argument("--truth", required=True)
    p.add_argument("--pred", required=True, help="0/1 predictions or scores in [0, 1]")
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--subset-k", type=int)

    p = sub.add_parser("bayes", help="Bayes-optimal predictions for a label distribution")
    p.add_argument("distribution", nargs="?", help="JSON list of {y, p} (default: bundled example)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("space", help="inspect a component registry")
    p.add_argument("action", choices=("show", "validate", "dot"))
    p.add_argument("--registry")

    p = sub.add_parser("synth", help="write a synthetic dataset as CSV")
    p.add_argument("--kind", choices=SYNTH_KINDS, default="blobs")
    p.add_argument("--rows", type=int, default=500)
    p.add_argument("--features", type=int, default=10)
    p.add_argument("--labels", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = RunConfig(data=args.data, format=args.format, labels=args.labels,
                            label_pos=args.label_pos, loss=args.loss, optimizer=args.optimizer,
                            timeout=args.timeout, eval_timeout=args.eval_timeout or None,
                            seed=args.seed, completions=args.completions, workers=args.workers,
                            registry=args.registry, tau=args.tau, out=args.out,
                            max_evals=args.max_evals, repeats=args.repeats, guard=not args.no_guard,
                            eta=args.eta, b_min=args.b_min, candidates=args.candidates)
            return cmd_run(cfg)
        handlers = {"eval": cmd_eval, "losses": cmd_losses, "bayes": cmd_bayes,
                    "space": cmd_space, "synth": cmd_synth}
        return handlers[args.command](args)
    except (MlcPlanError, OSError, ValueError) as exc:
        return _fault(exc)


if __name__ == "__main__":
    sys.exit(main())
