"""Dual graphs of curve configurations and rivers of blow-up trees."""
from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .blowup import TransformState, exc_id, validate_snc
from .configuration import Configuration, PointCluster
from .lattice import PreconditionError, is_negative_semidefinite_matrix, sectional_genus

__all__ = [
    "CNNSCase", "Configuration", "DualGraph", "PointCluster", "RiverGraph", "RiverVertex",
    "Verdict", "build_dual_graph", "build_river", "build_rivers", "split_check",
    "classify_cnns", "counts", "dual_graph_of_state", "reduced_square_check",
    "m_formula", "m_oracle", "n_of_d", "non_cutpoints", "theta",
]


@dataclass(frozen=True)
class DualGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        vs = set(self.vertices)
        norm = []
        for a, b in self.edges:
            if a not in vs or b not in vs:
                raise ValueError(f"edge ({a}, {b}) leaves the vertex set")
            if a == b:
                raise ValueError("loops are not edges of a dual graph")
            norm.append((a, b) if a <= b else (b, a))
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def multiplicity(self, a: str, b: str) -> int:
        key = (a, b) if a <= b else (b, a)
        return sum(1 for e in self.edges if e == key)

    def neighbours(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def components(self, without: str | None = None) -> int:
        adj = self.neighbours()
        seen: set[str] = set()
        count = 0
        for v in self.vertices:
            if v == without or v in seen:
                continue
            count += 1
            stack = [v]
            seen.add(v)
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y != without and y not in seen:
                        seen.add(y)
                        stack.append(y)
        return count

    def is_connected(self) -> bool:
        return bool(self.vertices) and self.components() == 1

    def to_adjacency_text(self) -> str:
        adj = Counter(self.edges)
        lines = [f"vertices {' '.join(self.vertices)}"]
        for (a, b), k in sorted(adj.items()):
            lines.append(f"edge {a} {b} x{k}")
        return "\n".join(lines) + "\n"

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines += [f'  "{v}";' for v in self.vertices]
        lines += [f'  "{a}" -- "{b}";' for a, b in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_dual_graph(cfg: Configuration) -> DualGraph:
    """One vertex per component, one edge per shared point per pair."""
    edges = []
    for p in cfg.point_clusters:
        for a, b in itertools.combinations(p.curves, 2):
            edges.append((a, b))
    return DualGraph(cfg.ids, tuple(edges))


def dual_graph_of_state(state: TransformState) -> DualGraph:
    """Dual graph of the reduced total transform of a simple normal crossing state.

    In that situation every meeting point is transverse, so the number of
    points between two components equals their intersection number.
    """
    X = state.surface
    classes = dict(state.strict_classes)
    for k, cls in state.exc_classes.items():
        if state.exc_mult_in_total[k] > 0:
            classes[exc_id(k)] = cls
    names = list(classes)
    edges = []
    for a, b in itertools.combinations(names, 2):
        edges += [(a, b)] * max(0, X.pair(classes[a], classes[b]))
    return DualGraph(tuple(names), tuple(edges))


def counts(g: DualGraph) -> tuple[int, int, int]:
    """(vertex count, edge count, cycle rank)."""
    o, e = len(g.vertices), len(g.edges)
    return o, e, e - o + g.components()


def non_cutpoints(g: DualGraph) -> set[str]:
    """Vertices whose removal leaves the graph connected.

    Articulation points come from a depth-first search with low-links;
    a connected graph with two or more vertices always keeps at least two
    non-cutpoints (the two ends of a longest path in a spanning tree), and
    anything less is reported as an internal error.
    """
    if len(g.vertices) < 2 or not g.is_connected():
        raise PreconditionError("need a connected graph with at least two vertices")
    adj = g.neighbours()
    order: dict[str, int] = {}
    low: dict[str, int] = {}
    cut: set[str] = set()

    def visit(v: str, parent: str | None) -> None:
        order[v] = low[v] = len(order)
        kids = 0
        for w in adj[v]:
            if w not in order:
                kids += 1
                visit(w, v)
                low[v] = min(low[v], low[w])
                if parent is not None and low[w] >= order[v]:
                    cut.add(v)
            elif w != parent:
                low[v] = min(low[v], order[w])
        if parent is None and kids > 1:
            cut.add(v)

    visit(g.vertices[0], None)
    result = set(g.vertices) - cut
    if len(result) < 2:
        raise AssertionError(f"connected graph with only {len(result)} non-cutpoints: {g}")
    return result


class CNNSCase(str, enum.Enum):
    NOT_CNNS = "not_cnns"
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"


def classify_cnns(cfg: Configuration) -> CNNSCase:
    if not cfg.components or not build_dual_graph(cfg).is_connected():
        return CNNSCase.NOT_CNNS
    if is_negative_semidefinite_matrix(cfg.gram()):
        return CNNSCase.NOT_CNNS
    X = cfg.surface
    positive = sum(r for c, r in cfg.components if X.square(c.cls) > 0)
    if positive >= 2:
        return CNNSCase.ALPHA
    return CNNSCase.BETA if positive == 1 else CNNSCase.GAMMA


def n_of_d(cfg: Configuration) -> int:
    """Sum of ``C^2 + 2`` over the distinct components (multiplicities ignored)."""
    X = cfg.surface
    return sum(X.square(c.cls) + 2 for c, _ in cfg.components)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    margin: int
    value: int
    bound: int
    applicable: bool = True
    detail: Mapping[str, object] = field(default_factory=dict)


def split_check(cfg: Configuration, split: tuple[Iterable[str], Iterable[str]]) -> Verdict:
    """Bound N(D) by 4 (or 3) from the signs of the reduced squares of a split.

    ``split`` lists the component ids of D_1 and D_2; they must be non-empty,
    disjoint, connected and together exhaust D.
    """
    first, second = (tuple(part) for part in split)
    if not first or not second:
        raise PreconditionError("both parts of the split must be non-zero")
    if set(first) & set(second):
        raise PreconditionError(f"parts share components {sorted(set(first) & set(second))}")
    if set(first) | set(second) != set(cfg.ids) or len(first) + len(second) != len(cfg.ids):
        raise PreconditionError("the parts do not add up to D")
    parts = (cfg.sub(first), cfg.sub(second))
    for p in parts:
        if not build_dual_graph(p).is_connected():
            raise PreconditionError(f"part {p.ids} is not connected")
    X = cfg.surface
    squares = [X.square(p.reduced) for p in parts]
    N = n_of_d(cfg)
    detail = {"reduced_squares": squares, "n_parts": [n_of_d(p) for p in parts]}
    if max(squares) > 0:
        return Verdict(True, 0, N, 0, applicable=False, detail=detail)
    bound = 3 if min(squares) < 0 else 4
    return Verdict(N <= bound, bound - N, N, bound, detail=detail)


@dataclass
class RiverVertex:
    event: str
    level: int
    index: int
    e: int
    parent: str | None
    children: list[str] = field(default_factory=list)
    u: int = 0
    eps: int = 0
    m: int = 0

    @property
    def label(self) -> tuple[int, int]:
        return self.level, self.index


def theta(w: int) -> int:
    return w - 1 if w >= 1 else 0


@dataclass
class RiverGraph:
    """Rooted tree of the exceptional curves over one base point.

    Edges point from each exceptional curve to the one carrying its centre
    at the previous level; ``u`` is the E-multiplicity minus the weights
    strictly above.
    """

    point: str
    root: str
    vertices: dict[str, RiverVertex]

    def path(self, v: str) -> list[str]:
        out = [v]
        while self.vertices[out[-1]].parent is not None:
            out.append(self.vertices[out[-1]].parent)
        return out

    def degree(self, v: str) -> int:
        x = self.vertices[v]
        return len(x.children) + (x.parent is not None)

    def w(self, v: str) -> int:
        d = self.degree(v)
        return d if v == self.root else d - 1

    def path_sum(self, v: str) -> int:
        return sum(self.vertices[p].u for p in self.path(v))

    def dump(self) -> list[dict]:
        rows = []
        for v, x in self.vertices.items():
            w = self.w(v)
            rows.append({
                "vertex": list(x.label), "event": v, "parent": x.parent, "e": x.e,
                "u": x.u, "w": w, "theta": theta(w), "eps": x.eps, "m": x.m,
            })
        return rows


def build_river(state: TransformState, y: str) -> RiverGraph:
    roots = [ev.id for ev in state.events if ev.base_point == y]
    if not roots:
        raise PreconditionError(f"{y} is not a blow-up centre")
    root = roots[0]
    verts: dict[str, RiverVertex] = {}
    per_level: Counter = Counter()
    for ev in state.events:
        if state.tree_of[ev.id] != y:
            continue
        level = 0 if ev.parent is None else verts[ev.parent].level + 1
        per_level[level] += 1
        eps, m = state.e_curve[ev.id]
        verts[ev.id] = RiverVertex(
            ev.id, level, per_level[level], state.exc_mult_in_total[ev.id], ev.parent, eps=eps, m=m
        )
        if ev.parent is not None:
            verts[ev.parent].children.append(ev.id)
    river = RiverGraph(y, root, verts)
    for v in verts:  # events arrive parents-first
        above = river.path(v)[1:]
        verts[v].u = verts[v].e - sum(verts[p].u for p in above)
    return river


def build_rivers(state: TransformState) -> list[RiverGraph]:
    return [build_river(state, y) for y in sorted(state.blown_up_points())]


def m_formula(rivers: RiverGraph | Iterable[RiverGraph], theta_fn: Callable[[int], int] = theta) -> int:
    """Sum of (-1)-curve multiplicities predicted from river weights alone."""
    if isinstance(rivers, RiverGraph):
        rivers = [rivers]
    total = 0
    for r in rivers:
        for v in r.vertices:
            total += r.path_sum(v) * theta_fn(r.w(v))
            total += r.vertices[v].u
    return total


def m_oracle(state: TransformState) -> int:
    """Sum of total-transform multiplicities of the current (-1)-curves."""
    return sum(state.exc_mult_in_total[k] for k in state.minus_one_events())


def reduced_square_check(state: TransformState, l: int | None = None) -> Verdict:
    """Upper bound on the square of the reduced total transform.

    The state must be simple normal crossing and its base configuration a
    CNNS-divisor.  ``b_i`` is the multiplicity of the reduced total
    transform at the i-th centre minus one (the new exceptional curve joins
    the reduced divisor), and the sum of ``C'^2 + 2`` runs over every
    component of the reduced total transform, exceptional ones included.
    """
    cfg = state.base
    if classify_cnns(cfg) is CNNSCase.NOT_CNNS:
        raise PreconditionError("base configuration is not a CNNS-divisor")
    if not validate_snc(state):
        raise PreconditionError("the plan does not reach a simple normal crossing state")
    X0, X = cfg.surface, state.surface
    if l is None:
        l = sectional_genus(X0, cfg.reduced) - X0.irregularity
    comps = list(state.strict_classes.values())
    comps += [c for k, c in state.exc_classes.items() if state.exc_mult_in_total[k] > 0]
    red = comps[0]
    for c in comps[1:]:
        red = red + c
    lhs = X.square(red)
    bs = [max(r - 1, 0) for r in state.red_mult.values()]
    weight = sum(X.square(c) + 2 for c in comps)
    rhs = 2 * l - 2 - sum(b * (b - 1) for b in bs) + weight
    o, e, _ = counts(dual_graph_of_state(state))
    detail = {
        "l": l, "b": bs, "components": len(comps), "edges": e,
        "cycle_bound": e - o + 1 + sum(b * (b - 1) // 2 for b in bs),
    }
    return Verdict(lhs <= rhs, rhs - lhs, lhs, rhs, detail=detail)
