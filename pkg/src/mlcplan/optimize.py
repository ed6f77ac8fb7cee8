"""Optimizers over the component search space.

* :func:`best_first` - best-first search over the decomposition graph, each
  new inner node scored by evaluating a few seeded random completions,
* :func:`random_search` - independent random completions of the root,
* :func:`successive_halving` and :func:`hyperband` - budgeted tournaments in
  which the budget is the fraction of training rows used,
* :func:`expected_improvement` - the closed-form acquisition utility.

Evaluators are callables ``instance -> record``. A record is anything with
``status``, ``loss``, ``runtime_ms`` and ``error`` attributes (for instance
:class:`~mlcplan.evaluate.EvaluationRecord`); plain numbers are accepted as
successful losses and ``None`` as a failure, which keeps test doubles short.
"""
from __future__ import annotations

import heapq
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._common import derive_seed
from .errors import DeadEnd, EmptyCandidates, EmptySpace, InvalidConfig, NegativeSigma
from .losses import LossKind
from .searchspace import (
    ComponentInstance,
    ComponentRegistry,
    materialize,
    random_completion,
    root_node,
    successors,
)

STATUS_OK = "ok"
# no evaluation finished inside the budget
STATUS_BUDGET_EXHAUSTED = "budget_exhausted"
# evaluations ran, none succeeded
STATUS_NO_SUCCESS = "no_success"


@dataclass
class OptConfig:
    kind: object = LossKind.HAMMING
    time_budget_s: float = 60.0
    eval_timeout_s: float | None = None
    n_completions: int = 3
    aggregation: str = "min"
    workers: int = 1
    seed: int = 0
    # optional caps on top of the wall-clock budget; they make runs reproducible
    max_evaluations: int | None = None
    max_iterations: int | None = None
    completion_mode: str = "sample"
    eta: int = 2
    b_min: float = 0.25
    b_max: float = 1.0

    def __post_init__(self):
        if isinstance(self.kind, str):
            self.kind = LossKind.parse(self.kind)
        if self.time_budget_s is None or self.time_budget_s < 0:
            raise InvalidConfig(f"time budget must be >= 0, got {self.time_budget_s}")
        if self.eval_timeout_s is not None and self.eval_timeout_s <= 0:
            raise InvalidConfig("candidate timeout must be positive")
        if int(self.n_completions) < 1:
            raise InvalidConfig("n_completions must be at least 1")
        if self.aggregation not in ("min", "mean"):
            raise InvalidConfig(f"unknown aggregation {self.aggregation!r}")
        if int(self.workers) < 1:
            raise InvalidConfig("workers must be at least 1")
        if self.completion_mode not in ("descend", "sample"):
            raise InvalidConfig(f"unknown completion mode {self.completion_mode!r}")
        if int(self.eta) < 2:
            raise InvalidConfig("eta must be at least 2")
        if not 0.0 < self.b_min <= self.b_max <= 1.0:
            raise InvalidConfig(f"need 0 < b_min <= b_max <= 1, got {self.b_min}, {self.b_max}")
        for name in ("max_evaluations", "max_iterations"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise InvalidConfig(f"{name} must be >= 0")


@dataclass
class TraceEvent:
    timestamp: float  # seconds since the optimizer started
    candidate: ComponentInstance
    status: str
    loss: float | None = None
    reason: str | None = None
    runtime_ms: float = 0.0
    node_id: int | None = None
    rollout: int | None = None
    budget: float | None = None

    def to_dict(self) -> dict:
        d = {"timestamp": self.timestamp, "candidate": self.candidate.to_dict(),
             "status": self.status, "loss": self.loss, "runtime_ms": self.runtime_ms,
             "node_id": self.node_id, "rollout": self.rollout}
        if self.reason is not None:
            d["reason"] = self.reason
        if self.budget is not None:
            d["budget"] = self.budget
        return d


@dataclass
class OptResult:
    best: ComponentInstance | None
    best_loss: float | None
    n_evaluated: int
    trace: list = field(default_factory=list)
    status: str = STATUS_OK
    elapsed_s: float = 0.0
    rounds: list = field(default_factory=list)  # SH / Hyperband bookkeeping

    def to_dict(self) -> dict:
        return {"status": self.status,
                "best": self.best.to_dict() if self.best is not None else None,
                "best_loss": self.best_loss, "n_evaluated": self.n_evaluated,
                "elapsed_s": self.elapsed_s, "rounds": self.rounds,
                "trace": [e.to_dict() for e in self.trace]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def trace_jsonl(self) -> str:
        return "".join(json.dumps(e.to_dict()) + "\n" for e in self.trace)


def best_so_far(trace) -> list:
    """Running minimum of successful losses (``None`` until the first success)."""
    out, best = [], None
    for e in trace:
        if e.loss is not None and (best is None or e.loss < best):
            best = e.loss
        out.append(best)
    return out


@dataclass
class _Outcome:
    status: str
    loss: float | None
    runtime_ms: float
    reason: str | None


def _normalize(out) -> _Outcome:
    if out is None:
        return _Outcome("error", None, 0.0, "evaluator returned nothing")
    if isinstance(out, (int, float, np.integer, np.floating)) and not isinstance(out, bool):
        loss = float(out)
        if math.isfinite(loss):
            return _Outcome(STATUS_OK, loss, 0.0, None)
        return _Outcome("error", None, 0.0, "non-finite loss")
    status = getattr(out, "status", "error")
    loss = getattr(out, "loss", None)
    if status == STATUS_OK and (loss is None or not math.isfinite(loss)):
        status, loss = "error", None
    return _Outcome(status, float(loss) if status == STATUS_OK else None,
                    float(getattr(out, "runtime_ms", 0.0) or 0.0),
                    None if status == STATUS_OK else (getattr(out, "error", None) or status))


class _Run:
    """Bookkeeping shared by all optimizers: clock, cache, trace, incumbent."""

    def __init__(self, evaluate, time_budget_s, max_evaluations=None, workers=1):
        self.evaluate = evaluate
        self.start = time.perf_counter()
        self.deadline = self.start + time_budget_s
        self.max_evaluations = max_evaluations
        self.workers = workers
        self.cache = {}
        self.trace = []
        self.best = None
        self.best_loss = None
        self.n_evaluated = 0

    def exhausted(self) -> bool:
        if self.max_evaluations is not None and self.n_evaluated >= self.max_evaluations:
            return True
        return time.perf_counter() >= self.deadline

    def _record(self, key, cand, outcome, node_id, rollout, budget):
        self.cache[key] = outcome
        self.n_evaluated += 1
        self.trace.append(TraceEvent(time.perf_counter() - self.start, cand, outcome.status,
                                     outcome.loss, outcome.reason, outcome.runtime_ms,
                                     node_id, rollout, budget))
        if outcome.loss is not None and (self.best_loss is None or outcome.loss < self.best_loss):
            self.best, self.best_loss = cand, outcome.loss

    def run_batch(self, jobs):
        """Evaluate ``jobs`` = [(candidate, node_id, rollout, budget), ...] in order.

        Returns one outcome per job; ``None`` marks jobs dropped because the
        budget ran out. Already seen (candidate, budget) pairs are served
        from the cache and leave no trace event.
        """
        results = [None] * len(jobs)
        pending = []  # (job index, key)
        scheduled = set()
        for i, (cand, node_id, rollout, budget) in enumerate(jobs):
            key = (cand.key(), budget)
            if key in self.cache:
                results[i] = self.cache[key]
            elif key not in scheduled:
                scheduled.add(key)
                pending.append((i, key))
        if self.workers == 1:
            for i, key in pending:
                if self.exhausted():
                    break
                cand, node_id, rollout, budget = jobs[i]
                self._record(key, cand, _normalize(self.evaluate(cand, budget)),
                             node_id, rollout, budget)
        else:
            allowed = []
            for i, key in pending:
                if self.exhausted() or (self.max_evaluations is not None and
                                        self.n_evaluated + len(allowed) >= self.max_evaluations):
                    break
                allowed.append((i, key))
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                futures = [pool.submit(self.evaluate, jobs[i][0], jobs[i][3]) for i, _ in allowed]
                for (i, key), fut in zip(allowed, futures):
                    cand, node_id, rollout, budget = jobs[i]
                    self._record(key, cand, _normalize(fut.result()), node_id, rollout, budget)
        for i, (cand, _, _, budget) in enumerate(jobs):
            if results[i] is None:
                results[i] = self.cache.get((cand.key(), budget))
        return results

    def result(self, status=None, rounds=None) -> OptResult:
        if status is None:
            if self.best is not None:
                status = STATUS_OK
            elif self.n_evaluated == 0:
                status = STATUS_BUDGET_EXHAUSTED
            else:
                status = STATUS_NO_SUCCESS
        return OptResult(self.best, self.best_loss, self.n_evaluated, self.trace, status,
                         time.perf_counter() - self.start, rounds or [])


def _full_budget(evaluator):
    return lambda cand, budget: evaluator(cand)


def _aggregate(losses, how):
    if not losses:
        return math.inf
    return min(losses) if how == "min" else float(np.mean(losses))


def _completion(registry, node, seed, mode):
    try:
        return random_completion(registry, node, seed, mode)
    except DeadEnd:
        return None


def best_first(registry: ComponentRegistry, evaluator, cfg: OptConfig) -> OptResult:
    """Best-first search with random-completion scoring of new inner nodes.

    The open list is keyed by (f, creation index). Each pop expands the node;
    leaf successors are evaluated directly, inner successors get
    f = aggregate of the losses of ``cfg.n_completions`` random completions
    (failed completions are left out; all failing means f = inf and the node
    is dropped). f-values are assigned once and never revised. The search ends
    when the budget runs out or the open list is empty, and returns the best
    candidate evaluated at any point, rollouts included.
    """
    root = root_node(registry)
    first = successors(registry, root)
    if not first or _completion(registry, root, derive_seed(cfg.seed, 0), cfg.completion_mode) is None:
        raise EmptySpace("the root task has no completion")
    run = _Run(_full_budget(evaluator), cfg.time_budget_s, cfg.max_evaluations, cfg.workers)
    open_list = [(0.0, 0, root)]
    next_id = 1
    while open_list and not run.exhausted():
        _, node_id, node = heapq.heappop(open_list)
        children = first if node is root else successors(registry, node)
        ids = list(range(next_id, next_id + len(children)))
        next_id += len(children)
        jobs, owner = [], []
        for child, cid in zip(children, ids):
            if child.is_leaf:
                jobs.append((materialize(child, registry), cid, None, None))
                owner.append(cid)
                continue
            for r in range(cfg.n_completions):
                cand = _completion(registry, child, derive_seed(cfg.seed, cid, r), cfg.completion_mode)
                if cand is not None:
                    jobs.append((cand, cid, r, None))
                    owner.append(cid)
        outcomes = run.run_batch(jobs)
        losses = {cid: [] for cid in ids}
        for cid, out in zip(owner, outcomes):
            if out is not None and out.loss is not None:
                losses[cid].append(out.loss)
        for child, cid in zip(children, ids):
            if child.is_leaf:
                continue
            f = _aggregate(losses[cid], cfg.aggregation)
            if math.isfinite(f):
                heapq.heappush(open_list, (f, cid, child))
    return run.result()


def random_search(registry: ComponentRegistry, evaluator, cfg: OptConfig) -> OptResult:
    """Evaluate independent random completions of the root until the budget ends.

    Draw ``i`` uses seed ``derive_seed(cfg.seed, i)``. ``cfg.max_iterations``
    caps the number of draws, repeated candidates included.
    """
    root = root_node(registry)
    if not successors(registry, root) or \
            _completion(registry, root, derive_seed(cfg.seed, 0), cfg.completion_mode) is None:
        raise EmptySpace("the root task has no completion")
    run = _Run(_full_budget(evaluator), cfg.time_budget_s, cfg.max_evaluations, cfg.workers)
    i = 0
    while not run.exhausted():
        if cfg.max_iterations is not None and i >= cfg.max_iterations:
            break
        n = cfg.workers if cfg.max_iterations is None else min(cfg.workers, cfg.max_iterations - i)
        jobs = []
        for j in range(i, i + n):
            cand = _completion(registry, root, derive_seed(cfg.seed, j), cfg.completion_mode)
            if cand is not None:
                jobs.append((cand, 0, j, None))
        i += n
        run.run_batch(jobs)
    return run.result()


def _sh_rounds(run, candidates, eta, b_min, b_max, bracket=None):
    """Core halving loop on an existing run; returns (winner, loss, rounds)."""
    survivors = list(range(len(candidates)))
    rounds = []
    r = 0
    last = {}
    while True:
        budget = min(b_min * eta ** r, b_max)
        jobs = [(candidates[i], bracket, None, budget) for i in survivors]
        outcomes = run.run_batch(jobs)
        if any(o is None for o in outcomes):
            # out of budget mid-round: rank what finished this round
            finished = [(i, o) for i, o in zip(survivors, outcomes) if o is not None]
            if not finished:
                break
            survivors = [i for i, _ in finished]
            outcomes = [o for _, o in finished]
        for i, o in zip(survivors, outcomes):
            last[i] = o.loss if o.loss is not None else math.inf
        rounds.append({"budget": budget, "n": len(survivors)})
        if len(survivors) == 1 or budget >= b_max or run.exhausted():
            break
        keep = math.ceil(len(survivors) / eta)
        # stable sort: equal losses keep list order
        survivors = sorted(survivors, key=lambda i: last[i])[:keep]
        survivors.sort()
        r += 1
    if not last:
        return None, None, rounds
    final = [i for i in survivors if i in last]
    winner = min(final, key=lambda i: (last[i], i))
    loss = last[winner]
    return candidates[winner], (None if math.isinf(loss) else loss), rounds


def _budgeted(budgeted_evaluator):
    return lambda cand, budget: budgeted_evaluator(cand, budget)


def successive_halving(candidates, budgeted_evaluator, eta: int = 2, b_min: float = 0.25,
                       b_max: float = 1.0, time_budget_s: float = math.inf,
                       max_evaluations: int | None = None, workers: int = 1) -> OptResult:
    """Successive halving over a fixed candidate list.

    Round ``r`` evaluates every survivor at budget ``min(b_min * eta**r, b_max)``
    and keeps the ``ceil(n / eta)`` lowest losses (failures rank last, ties go
    to the earlier list position). It stops once a single survivor has been
    evaluated or a round ran at ``b_max``; the winner is the best survivor by
    its last evaluation, and ``best_loss`` is that last loss.
    """
    candidates = list(candidates)
    if not candidates:
        raise EmptyCandidates("successive halving needs at least one candidate")
    if int(eta) < 2:
        raise InvalidConfig("eta must be at least 2")
    if not 0.0 < b_min <= b_max <= 1.0:
        raise InvalidConfig(f"need 0 < b_min <= b_max <= 1, got {b_min}, {b_max}")
    run = _Run(_budgeted(budgeted_evaluator), time_budget_s, max_evaluations, workers)
    winner, loss, rounds = _sh_rounds(run, candidates, eta, b_min, b_max)
    res = run.result(rounds=rounds)
    res.best, res.best_loss = (winner, loss) if loss is not None else (None, None)
    if res.best is None and res.n_evaluated:
        res.status = STATUS_NO_SUCCESS
    return res


def hyperband_brackets(eta: int, s_max: int, b_max: float = 1.0) -> list:
    """[(s, n_s, starting budget)] for s = s_max .. 0.

    ``n_s = ceil((s_max + 1) / (s + 1) * eta**s)`` and the starting budget is
    ``b_max * eta**-s``.
    """
    return [(s, math.ceil((s_max + 1) / (s + 1) * eta ** s), b_max * float(eta) ** -s)
            for s in range(s_max, -1, -1)]


def hyperband_s_max(eta: int, b_max: float, b_min: float) -> int:
    # small epsilon so exact powers such as 1 / 0.25 are not floored away
    return int(math.floor(math.log(b_max / b_min, eta) + 1e-9))


def hyperband(sampler, budgeted_evaluator, eta: int = 2, b_max: float = 1.0, b_min: float = 0.25,
              seed: int = 0, time_budget_s: float = math.inf, max_evaluations: int | None = None,
              workers: int = 1) -> OptResult:
    """Hyperband: successive halving brackets trading candidates against budget.

    ``sampler(seed)`` returns a fresh candidate. Bracket ``s`` samples
    ``n_s`` candidates with seeds ``derive_seed(seed, s, i)``. The result is
    the best bracket winner by its last (highest-budget) loss.
    """
    if int(eta) < 2:
        raise InvalidConfig("eta must be at least 2")
    if not 0.0 < b_min <= b_max <= 1.0:
        raise InvalidConfig(f"need 0 < b_min <= b_max <= 1, got {b_min}, {b_max}")
    s_max = hyperband_s_max(eta, b_max, b_min)
    run = _Run(_budgeted(budgeted_evaluator), time_budget_s, max_evaluations, workers)
    best, best_loss, rounds = None, None, []
    for s, n_s, b0 in hyperband_brackets(eta, s_max, b_max):
        if run.exhausted():
            break
        cands = [sampler(derive_seed(seed, s, i)) for i in range(n_s)]
        if not cands:
            raise EmptyCandidates("sampler produced no candidates")
        winner, loss, sh_rounds = _sh_rounds(run, cands, eta, b0, b_max, bracket=s)
        rounds.append({"bracket": s, "n": n_s, "b0": b0, "rounds": sh_rounds})
        if loss is not None and (best_loss is None or loss < best_loss):
            best, best_loss = winner, loss
    res = run.result(rounds=rounds)
    res.best, res.best_loss = best, best_loss
    if best is None and res.n_evaluated:
        res.status = STATUS_NO_SUCCESS
    return res


def _phi(z):
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def _Phi(z):
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def expected_improvement(mu: float, sigma: float, best: float) -> float:
    """E[max(best - f, 0)] for f ~ N(mu, sigma^2), minimization."""
    if sigma < 0:
        raise NegativeSigma(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return max(best - mu, 0.0)
    z = (best - mu) / sigma
    return max(sigma * (z * _Phi(z) + _phi(z)), 0.0)
