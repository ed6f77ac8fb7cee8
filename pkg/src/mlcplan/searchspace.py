"""Recursive component registry and its HTN-style search graph.

A registry declares components, the interface each provides, the interfaces
its slots require, and its hyper-parameters. Configuring a classifier for the
root interface becomes a totally ordered task network that forward
decomposition refines one task at a time, always the first one:

* ``ResolveInterface`` -> one child per providing component,
* ``SetCategorical``   -> one child per value,
* ``RefineNumeric``    -> halve the interval, or fix its midpoint once the
  interval is no wider than ``g`` times the full range.

Leaves (empty networks) materialize into :class:`ComponentInstance` trees.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import (
    DeadEnd,
    DuplicateComponent,
    ExplosionGuard,
    LeafNode,
    MalformedParam,
    NotALeaf,
    UnknownInterface,
    UnsatisfiableInterface,
)

DEFAULT_G = 1.0 / 16.0
DEFAULT_MAX_DEPTH = 5
DEFAULT_ENUM_CAP = 10 ** 6
ROOT_INTERFACE = "MLC"
# float slack when comparing interval widths
_EPS = 1e-12


# ---------------------------------------------------------------------------
# declarations

@dataclass(frozen=True)
class ParamDef:
    name: str
    kind: str  # "categorical" | "numeric"
    values: tuple = ()
    min: float = 0.0
    max: float = 1.0
    log: bool = False
    integer: bool = False
    g: float = DEFAULT_G

    def __post_init__(self):
        if self.kind == "categorical":
            if not self.values or len(set(self.values)) != len(self.values):
                raise MalformedParam(f"{self.name}: categorical values must be non-empty and distinct")
        elif self.kind == "numeric":
            if not self.min < self.max:
                raise MalformedParam(f"{self.name}: min {self.min} must be < max {self.max}")
            if not 0.0 < self.g <= 1.0:
                raise MalformedParam(f"{self.name}: g={self.g} outside (0, 1]")
            if self.log and self.min <= 0:
                raise MalformedParam(f"{self.name}: log scale needs a positive range")
            if self.log and self.integer:
                raise MalformedParam(f"{self.name}: log-scale integers are not supported")
            if self.integer and (self.min != int(self.min) or self.max != int(self.max)):
                raise MalformedParam(f"{self.name}: integer bounds must be integral")
        else:
            raise MalformedParam(f"{self.name}: unknown kind {self.kind!r}")

    @property
    def default(self):
        if self.kind == "categorical":
            return self.values[0]
        return self.midpoint(self.min, self.max)

    def _t(self, v):
        return math.log(v) if self.log else v

    def width(self, lo, hi):
        return self._t(hi) - self._t(lo)

    def full_width(self):
        return self.width(self.min, self.max)

    def midpoint(self, lo, hi):
        if self.integer:
            return (int(lo) + int(hi)) // 2
        if self.log:
            return math.sqrt(lo * hi)
        return 0.5 * (lo + hi)

    def is_final(self, lo, hi):
        """Whether the interval is narrow enough to be fixed at its midpoint."""
        if self.integer:
            return hi - lo <= self.g * (self.max - self.min) + _EPS
        return self.width(lo, hi) <= self.g * self.full_width() * (1 + _EPS)

    def halves(self, lo, hi):
        if self.integer:
            mid = (int(lo) + int(hi)) // 2
            return (int(lo), mid), (mid + 1, int(hi))
        mid = self.midpoint(lo, hi)
        return (lo, mid), (mid, hi)

    def to_dict(self):
        if self.kind == "categorical":
            return {"name": self.name, "kind": "categorical", "values": list(self.values)}
        d = {"name": self.name, "kind": "numeric", "min": self.min, "max": self.max,
             "log": self.log, "g": self.g}
        if self.integer:
            d["integer"] = True
        return d


@dataclass(frozen=True)
class ComponentDef:
    name: str
    provides: tuple
    requires: tuple = ()  # ((slot, interface), ...)
    params: tuple = ()
    max_repeat: int | None = None

    def __post_init__(self):
        slots = [s for s, _ in self.requires]
        if len(set(slots)) != len(slots):
            raise MalformedParam(f"{self.name}: duplicate slot names {slots}")
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise MalformedParam(f"{self.name}: duplicate parameter names {names}")

    def param(self, name) -> ParamDef:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(name)

    def to_dict(self):
        d = {
            "name": self.name,
            "provides": self.provides[0] if len(self.provides) == 1 else list(self.provides),
            "requires": [{"slot": s, "interface": i} for s, i in self.requires],
            "params": [p.to_dict() for p in self.params],
        }
        if self.max_repeat is not None:
            d["max_repeat"] = self.max_repeat
        return d


class ComponentRegistry:
    """Validated, immutable set of components."""

    def __init__(self, components, forbid=(), max_depth=DEFAULT_MAX_DEPTH):
        self.components = tuple(components)
        self.forbid = frozenset(tuple(f) for f in forbid)
        self.max_depth = int(max_depth)
        self.by_name = {}
        for comp in self.components:
            if comp.name in self.by_name:
                raise DuplicateComponent(comp.name)
            self.by_name[comp.name] = comp
        self.interfaces = frozenset(i for c in self.components for i in c.provides)
        for comp in self.components:
            for slot, iface in comp.requires:
                if iface not in self.interfaces:
                    raise UnsatisfiableInterface(
                        f"{comp.name}.{slot} requires {iface!r}, which no component provides")
        for outer, inner in self.forbid:
            for name in (outer, inner):
                if name not in self.by_name:
                    raise MalformedParam(f"forbid rule names unknown component {name!r}")
        self._feasible = lru_cache(maxsize=None)(self._feasible_uncached)
        for iface in sorted(self.interfaces):
            if not any(self.admissible(c, 0, ()) for c in self.providers(iface)):
                raise UnsatisfiableInterface(
                    f"interface {iface!r} admits no finite derivation within depth {self.max_depth}")

    def providers(self, interface):
        return [c for c in self.components if interface in c.provides]

    def with_components(self, extra=(), drop=()) -> "ComponentRegistry":
        comps = [c for c in self.components if c.name not in set(drop)] + list(extra)
        forbid = [f for f in self.forbid if not set(f) & set(drop)]
        return ComponentRegistry(comps, forbid, self.max_depth)

    # -- admissibility ---------------------------------------------------

    def admissible(self, comp: ComponentDef, depth: int, ancestors: tuple) -> bool:
        """Can ``comp`` be placed at ``depth`` below ``ancestors`` and still complete?"""
        counts = Counter(ancestors)
        key = tuple(sorted(counts.items()))
        return self._feasible(comp.name, depth, key)

    def _feasible_uncached(self, name, depth, ancestor_counts):
        comp = self.by_name[name]
        counts = dict(ancestor_counts)
        if any(counts.get(outer) for outer, inner in self.forbid if inner == name):
            return False
        if comp.max_repeat is not None and counts.get(name, 0) + 1 > comp.max_repeat:
            return False
        if not comp.requires:
            return depth <= self.max_depth
        if depth + 1 > self.max_depth:
            return False
        counts[name] = counts.get(name, 0) + 1
        child_key = tuple(sorted(counts.items()))
        return all(
            any(self._feasible(p.name, depth + 1, child_key) for p in self.providers(iface))
            for _, iface in comp.requires
        )

    # -- serialization -----------------------------------------------------

    def to_dict(self):
        return {
            "components": [c.to_dict() for c in self.components],
            "forbid": [{"outer": o, "inner": i} for o, i in sorted(self.forbid)],
            "max_depth": self.max_depth,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)


def _parse_param(d):
    try:
        kind = d["kind"]
        if kind == "categorical":
            return ParamDef(d["name"], "categorical", tuple(d["values"]))
        if kind == "numeric":
            return ParamDef(d["name"], "numeric", min=float(d["min"]), max=float(d["max"]),
                            log=bool(d.get("log", False)), integer=bool(d.get("integer", False)),
                            g=float(d.get("g", DEFAULT_G)))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedParam(f"bad parameter declaration {d!r}: {exc}") from None
    raise MalformedParam(f"unknown parameter kind in {d!r}")


def load_registry(document) -> ComponentRegistry:
    """Build a registry from its JSON text (or an already parsed dict)."""
    doc = json.loads(document) if isinstance(document, str) else document
    comps = []
    for c in doc.get("components", []):
        provides = c["provides"]
        provides = (provides,) if isinstance(provides, str) else tuple(provides)
        requires = tuple((r["slot"], r["interface"]) for r in c.get("requires", []))
        params = tuple(_parse_param(p) for p in c.get("params", []))
        comps.append(ComponentDef(c["name"], provides, requires, params, c.get("max_repeat")))
    forbid = [(f["outer"], f["inner"]) for f in doc.get("forbid", [])]
    return ComponentRegistry(comps, forbid, doc.get("max_depth", DEFAULT_MAX_DEPTH))


# ---------------------------------------------------------------------------
# instances

@dataclass(frozen=True)
class ComponentInstance:
    """A fully configured component tree."""

    name: str
    params: tuple = ()    # sorted ((param, value), ...)
    children: tuple = ()  # sorted ((slot, ComponentInstance), ...)

    @classmethod
    def build(cls, name, params=None, children=None):
        return cls(name, tuple(sorted((params or {}).items())),
                   tuple(sorted((children or {}).items())))

    @property
    def param_dict(self):
        return dict(self.params)

    @property
    def child_dict(self):
        return dict(self.children)

    def size(self) -> int:
        """Number of components in the tree."""
        return 1 + sum(c.size() for _, c in self.children)

    def component_names(self):
        yield self.name
        for _, child in self.children:
            yield from child.component_names()

    def to_dict(self):
        d = {"name": self.name, "params": {k: v for k, v in self.params}}
        if self.children:
            d["children"] = {s: c.to_dict() for s, c in self.children}
        return d

    @classmethod
    def from_dict(cls, d):
        children = {s: cls.from_dict(c) for s, c in d.get("children", {}).items()}
        return cls.build(d["name"], d.get("params", {}), children)

    def key(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __str__(self):
        params = ",".join(f"{k}={_fmt(v)}" for k, v in self.params)
        inner = " ".join(f"{s}:{c}" for s, c in self.children)
        body = " ".join(x for x in (params, inner) if x)
        return f"{self.name}({body})" if body else self.name


def _fmt(v):
    return f"{v:.4g}" if isinstance(v, float) else str(v)


# ---------------------------------------------------------------------------
# search graph

@dataclass(frozen=True)
class ResolveInterface:
    path: tuple
    interface: str


@dataclass(frozen=True)
class SetCategorical:
    path: tuple
    param: str


@dataclass(frozen=True)
class RefineNumeric:
    path: tuple
    param: str
    lo: float
    hi: float


@dataclass(frozen=True)
class SearchNode:
    """Plan prefix (decisions so far) plus the ordered open task network."""

    prefix: tuple = ()
    network: tuple = field(default=())

    @property
    def is_leaf(self):
        return not self.network

    def components_by_path(self):
        return {d[1]: d[2] for d in self.prefix if d[0] == "component"}


def root_node(registry: ComponentRegistry, target: str = ROOT_INTERFACE) -> SearchNode:
    if target not in registry.interfaces:
        raise UnknownInterface(target)
    return SearchNode((), (ResolveInterface((), target),))


def _ancestors(node, path):
    comps = node.components_by_path()
    return tuple(comps[path[:i]] for i in range(len(path)))


def _component_tasks(comp, path):
    tasks = []
    for p in comp.params:
        if p.kind == "categorical":
            tasks.append(SetCategorical(path, p.name))
        else:
            tasks.append(RefineNumeric(path, p.name, p.min, p.max))
    tasks.extend(ResolveInterface(path + (slot,), iface) for slot, iface in comp.requires)
    return tuple(tasks)


def _param_def(registry, node, path, name):
    return registry.by_name[node.components_by_path()[path]].param(name)


def successors(registry: ComponentRegistry, node: SearchNode) -> list:
    """Children of ``node`` obtained by refining its first open task."""
    if node.is_leaf:
        raise LeafNode("a leaf node has no successors")
    task, rest = node.network[0], node.network[1:]
    out = []
    if isinstance(task, ResolveInterface):
        ancestors = _ancestors(node, task.path)
        for comp in registry.providers(task.interface):
            if not registry.admissible(comp, len(task.path), ancestors):
                continue
            out.append(SearchNode(node.prefix + (("component", task.path, comp.name),),
                                  _component_tasks(comp, task.path) + rest))
    elif isinstance(task, SetCategorical):
        pdef = _param_def(registry, node, task.path, task.param)
        for value in pdef.values:
            out.append(SearchNode(node.prefix + (("param", task.path, task.param, value),), rest))
    else:
        pdef = _param_def(registry, node, task.path, task.param)
        if pdef.is_final(task.lo, task.hi):
            value = pdef.midpoint(task.lo, task.hi)
            out.append(SearchNode(node.prefix + (("param", task.path, task.param, value),), rest))
        else:
            for lo, hi in pdef.halves(task.lo, task.hi):
                out.append(SearchNode(
                    node.prefix + (("interval", task.path, task.param, lo, hi),),
                    (RefineNumeric(task.path, task.param, lo, hi),) + rest))
    return out


def materialize(leaf: SearchNode, registry: ComponentRegistry | None = None) -> ComponentInstance:
    """Assemble the component tree fixed by a leaf's plan prefix."""
    if not leaf.is_leaf:
        raise NotALeaf(f"node still has {len(leaf.network)} open tasks")
    comps = leaf.components_by_path()
    params = {}
    for d in leaf.prefix:
        if d[0] == "param":
            params.setdefault(d[1], {})[d[2]] = d[3]

    def build(path):
        name = comps[path]
        p = dict(params.get(path, {}))
        if registry is not None:
            for pdef in registry.by_name[name].params:
                p.setdefault(pdef.name, pdef.default)
        children = {q[-1]: build(q) for q in comps if len(q) == len(path) + 1 and q[:-1] == path}
        return ComponentInstance.build(name, p, children)

    if () not in comps:
        raise NotALeaf("leaf has no root component")
    return build(())


def _sample_numeric(pdef, lo, hi, rng):
    if pdef.integer:
        return int(rng.integers(int(lo), int(hi) + 1))
    if pdef.log:
        return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))
    return float(rng.uniform(lo, hi))


def random_completion(registry: ComponentRegistry, node: SearchNode, seed,
                      mode: str = "sample") -> ComponentInstance:
    """Complete ``node`` to a leaf by uniformly random refinements.

    In ``"sample"`` mode numeric parameters are drawn uniformly (log-uniformly
    on log scales) from their current interval in one step; ``"descend"``
    follows the interval-halving tree like every other task.
    """
    if mode not in ("sample", "descend"):
        raise ValueError(f"unknown completion mode {mode!r}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while not node.is_leaf:
        task = node.network[0]
        if mode == "sample" and isinstance(task, RefineNumeric):
            pdef = _param_def(registry, node, task.path, task.param)
            value = _sample_numeric(pdef, task.lo, task.hi, rng)
            node = SearchNode(node.prefix + (("param", task.path, task.param, value),),
                              node.network[1:])
            continue
        children = successors(registry, node)
        if not children:
            raise DeadEnd(f"no admissible refinement for {task}")
        node = children[int(rng.integers(len(children)))]
    return materialize(node, registry)


# ---------------------------------------------------------------------------
# enumeration oracle

def numeric_grid(pdef: ParamDef, lo=None, hi=None) -> list:
    """Every value the interval-halving refinement can fix, in left-to-right order."""
    lo = pdef.min if lo is None else lo
    hi = pdef.max if hi is None else hi
    if pdef.is_final(lo, hi):
        return [pdef.midpoint(lo, hi)]
    (a, b), (c, d) = pdef.halves(lo, hi)
    return numeric_grid(pdef, a, b) + numeric_grid(pdef, c, d)


def _param_choices(pdef):
    return list(pdef.values) if pdef.kind == "categorical" else numeric_grid(pdef)


def _allowed(registry, comp, depth, ancestors, max_depth):
    if any(o in ancestors for o, i in registry.forbid if i == comp.name):
        return False
    if comp.max_repeat is not None and ancestors.count(comp.name) + 1 > comp.max_repeat:
        return False
    return not (comp.requires and depth + 1 > max_depth)


def count_leaves(registry, target=ROOT_INTERFACE, max_depth=None) -> int:
    """Number of distinct derivations of ``target`` (no materialization)."""
    max_depth = registry.max_depth if max_depth is None else max_depth

    @lru_cache(maxsize=None)
    def count_iface(iface, depth, ancestors):
        return sum(count_comp(c.name, depth, ancestors) for c in registry.providers(iface))

    @lru_cache(maxsize=None)
    def count_comp(name, depth, ancestors):
        comp = registry.by_name[name]
        if not _allowed(registry, comp, depth, ancestors, max_depth):
            return 0
        total = math.prod(len(_param_choices(p)) for p in comp.params)
        for _, iface in comp.requires:
            total *= count_iface(iface, depth + 1, ancestors + (name,))
        return total

    if target not in registry.interfaces:
        raise UnknownInterface(target)
    return count_iface(target, 0, ())


def enumerate_leaves(registry, target=ROOT_INTERFACE, max_depth=None,
                     cap=DEFAULT_ENUM_CAP, count_only=False):
    """Exhaustive depth-first enumeration of every derivation of ``target``.

    Built directly from the grammar, independently of :func:`successors`, so
    it can serve as an oracle for the forward decomposition.
    """
    max_depth = registry.max_depth if max_depth is None else max_depth
    n = count_leaves(registry, target, max_depth)
    if n > cap:
        raise ExplosionGuard(f"{n} leaves exceed the cap of {cap}")
    if count_only:
        return n

    def gen_iface(iface, depth, ancestors):
        for comp in registry.providers(iface):
            yield from gen_comp(comp, depth, ancestors)

    def gen_comp(comp, depth, ancestors):
        if not _allowed(registry, comp, depth, ancestors, max_depth):
            return
        param_lists = [[(p.name, v) for v in _param_choices(p)] for p in comp.params]
        child_lists = [[(slot, inst) for inst in gen_iface(iface, depth + 1, ancestors + (comp.name,))]
                       for slot, iface in comp.requires]
        for params in itertools.product(*param_lists):
            for children in itertools.product(*child_lists):
                yield ComponentInstance.build(comp.name, dict(params), dict(children))

    return list(gen_iface(target, 0, ()))


def reachable_leaves(registry, target=ROOT_INTERFACE, cap=DEFAULT_ENUM_CAP) -> list:
    """Materialize every leaf reachable from the root via :func:`successors`."""
    out = []
    stack = [root_node(registry, target)]
    while stack:
        node = stack.pop()
        if node.is_leaf:
            out.append(materialize(node, registry))
            if len(out) > cap:
                raise ExplosionGuard(f"more than {cap} reachable leaves")
            continue
        stack.extend(reversed(successors(registry, node)))
    return out


# ---------------------------------------------------------------------------
# DOT export

def export_dag_dot(registry: ComponentRegistry, name: str = "search_space") -> str:
    """GraphViz digraph: one node per component, one edge per (component, slot, provider)."""
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    for comp in registry.components:
        label = comp.name + "\\n[" + ",".join(comp.provides) + "]"
        lines.append(f'  "{comp.name}" [label="{label}"];')
    for comp in registry.components:
        for slot, iface in comp.requires:
            for prov in registry.providers(iface):
                lines.append(f'  "{comp.name}" -> "{prov.name}" [label="{slot}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def edge_count(registry: ComponentRegistry) -> int:
    return sum(len(registry.providers(iface)) for c in registry.components for _, iface in c.requires)


# ---------------------------------------------------------------------------
# bundled registries

def _num(name, lo, hi, log=False, integer=False, g=DEFAULT_G):
    d = {"name": name, "kind": "numeric", "min": lo, "max": hi, "log": log, "g": g}
    if integer:
        d["integer"] = True
    return d


def _cat(name, values):
    return {"name": name, "kind": "categorical", "values": list(values)}


SLC_PARAMS = {
    "logistic": [_num("learning_rate", 1e-4, 1.0, log=True), _num("iterations", 50, 1000, integer=True),
                 _num("l2", 0.0, 1.0)],
    "tree": [_num("max_depth", 1, 12, integer=True), _num("min_leaf", 1, 20, integer=True)],
    "gaussian_nb": [_num("var_smoothing", 1e-12, 1e-3, log=True)],
    "knn": [_num("k", 1, 25, integer=True), _cat("distance", ["euclidean", "manhattan"])],
}


def builtin_document(max_chain: int = 3) -> dict:
    """The default search space as a registry document."""
    both = ["SLC-binary", "SLC-multiclass"]
    comps = [
        {"name": "pipeline", "provides": "MLC", "max_repeat": max_chain,
         "requires": [{"slot": "preprocessor", "interface": "Preprocessor"},
                      {"slot": "classifier", "interface": "MLC"}]},
        {"name": "br", "provides": "MLC",
         "requires": [{"slot": "base", "interface": "SLC-binary"}]},
        {"name": "libre", "provides": "MLC", "params": [_num("selection_ratio", 0.5, 0.9)]},
        {"name": "cc", "provides": "MLC",
         "requires": [{"slot": "base", "interface": "SLC-binary"}]},
        {"name": "ecc", "provides": "MLC", "params": [_num("ensemble_size", 1, 10, integer=True)],
         "requires": [{"slot": "base", "interface": "SLC-binary"}]},
        {"name": "lp", "provides": "MLC",
         "requires": [{"slot": "base", "interface": "SLC-multiclass"}]},
    ]
    comps += [{"name": n, "provides": both, "params": p} for n, p in SLC_PARAMS.items()]
    comps += [
        {"name": "nd_ensemble", "provides": "SLC-multiclass",
         "params": [_num("ensemble_size", 1, 10, integer=True)],
         "requires": [{"slot": "inner", "interface": "SLC-binary"}]},
        {"name": "standardize", "provides": "Preprocessor"},
        {"name": "minmax", "provides": "Preprocessor"},
        {"name": "variance_threshold", "provides": "Preprocessor",
         "params": [_num("threshold", 0.0, 1.0)]},
    ]
    return {"components": comps, "forbid": [], "max_depth": DEFAULT_MAX_DEPTH}


def builtin_registry(max_chain: int = 3) -> ComponentRegistry:
    return load_registry(builtin_document(max_chain))


def toy_registry() -> ComponentRegistry:
    """BR over two learners with one two-valued categorical each: 4 leaves."""
    return load_registry({"components": [
        {"name": "br", "provides": "MLC", "requires": [{"slot": "base", "interface": "SLC-binary"}]},
        {"name": "tree", "provides": "SLC-binary", "params": [_cat("max_depth", [1, 3])]},
        {"name": "knn", "provides": "SLC-binary", "params": [_cat("distance", ["euclidean", "manhattan"])]},
    ]})


def chain_registry(max_chain: int = 2) -> ComponentRegistry:
    """Preprocessor chains of length 0..max_chain over 3 preprocessors, ending in BR(tree)."""
    return load_registry({"components": [
        {"name": "pipeline", "provides": "MLC", "max_repeat": max_chain,
         "requires": [{"slot": "preprocessor", "interface": "Preprocessor"},
                      {"slot": "classifier", "interface": "MLC"}]},
        {"name": "br", "provides": "MLC", "requires": [{"slot": "base", "interface": "SLC-binary"}]},
        {"name": "tree", "provides": "SLC-binary"},
        {"name": "standardize", "provides": "Preprocessor"},
        {"name": "minmax", "provides": "Preprocessor"},
        {"name": "variance_threshold", "provides": "Preprocessor"},
    ]})


# documented leaf count of restricted_registry(): 2 MLC x (3 tree + 2*2 knn) = 14
RESTRICTED_LEAF_COUNT = 14


def restricted_registry() -> ComponentRegistry:
    """The built-in space cut down to {br, cc} x {tree, knn} with categorical params only."""
    return load_registry({"components": [
        {"name": "br", "provides": "MLC", "requires": [{"slot": "base", "interface": "SLC-binary"}]},
        {"name": "cc", "provides": "MLC", "requires": [{"slot": "base", "interface": "SLC-binary"}]},
        {"name": "tree", "provides": "SLC-binary", "params": [_cat("max_depth", [2, 4, 8])]},
        {"name": "knn", "provides": "SLC-binary",
         "params": [_cat("k", [1, 5]), _cat("distance", ["euclidean", "manhattan"])]},
    ]})


def sleeper_registry(seconds: float = 5.0) -> ComponentRegistry:
    """{br, cc} over tree, knn, gaussian_nb and a sleeping test learner.

    Used to exercise timeouts and the runtime guard. The sleep length is a
    numeric parameter around ``seconds`` so the space holds many distinct
    sleeper candidates.
    """
    base = ["SLC-binary"]
    return load_registry({"components": [
        {"name": "br", "provides": "MLC", "requires": [{"slot": "base", "interface": "SLC-binary"}]},
        {"name": "cc", "provides": "MLC", "requires": [{"slot": "base", "interface": "SLC-binary"}]},
        {"name": "tree", "provides": base, "params": SLC_PARAMS["tree"]},
        {"name": "knn", "provides": base, "params": SLC_PARAMS["knn"]},
        {"name": "gaussian_nb", "provides": base, "params": SLC_PARAMS["gaussian_nb"]},
        {"name": "sleeper", "provides": base,
         "params": [_num("seconds", 0.9 * seconds, 1.1 * seconds)]},
    ]})
