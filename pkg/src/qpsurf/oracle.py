"""Brute-force references for the formula-driven operations.

``oracle_m`` and ``oracle_genus`` never call :func:`qpsurf.blowup.blow_up`:
they rebuild the final lattice in one go from the plan and read the
answers off the Gram matrix and an exact linear solve.
"""
from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .blowup import BlowupEvent, BlowupPlan, apply_plan
from .configuration import Configuration, PointCluster
from .graphs import build_rivers, m_formula, m_oracle, theta
from .lattice import (
    CurveRecord, DivisorClass, ModelError, PreconditionError, SurfaceModel,
    sectional_genus, solve_exact,
)

SEED_ENV = "QPSURF_SEED"


@dataclass(frozen=True)
class CorpusConfig:
    depth: int = 5
    branching: int = 3
    max_mult: int = 4
    seeds: int = 1000
    max_events: int = 16


CORPUS = CorpusConfig()


@dataclass(frozen=True)
class OracleReport:
    operation: str
    formula_value: int
    oracle_value: int
    agree: bool
    seed: int | None = None


@dataclass
class _Replay:
    gram: list[list[int]]
    canonical: list[int]
    strict: dict[str, list[int]]
    exc: dict[str, list[int]]
    total: list[int]

    def pair(self, a: Sequence[int], b: Sequence[int]) -> int:
        return sum(x * self.gram[i][j] * y for i, x in enumerate(a) if x for j, y in enumerate(b) if y)


def _replay(plan: BlowupPlan) -> _Replay:
    cfg = plan.base
    X = cfg.surface
    n, t = X.rank, len(plan.events)
    idx = {ev.id: n + k for k, ev in enumerate(plan.events)}
    gram = [list(row) + [0] * t for row in X.gram]
    gram += [[0] * (n + t) for _ in range(t)]
    for k in range(t):
        gram[n + k][n + k] = -1
    width = n + t

    def up(D) -> list[int]:
        return list(D.coeffs) + [0] * t

    clusters = {p.id: p for p in cfg.point_clusters}
    strict = {c.id: up(c.cls) for c, _ in cfg.components}
    exc = {}
    for ev in plan.events:
        j = idx[ev.id]
        if ev.base_point is not None and ev.base_point in clusters:
            mults = clusters[ev.base_point].mults
        else:
            mults = ev.passing
        for a, m in mults.items():
            strict[a][j] -= m
        vec = [0] * width
        vec[j] = 1
        exc[ev.id] = vec
        for x in ev.exc_passing:
            exc[x][j] -= 1
    K = up(X.canonical)
    for k in range(t):
        K[n + k] += 1
    total = [0] * width
    for c, r in cfg.components:
        for i, v in enumerate(up(c.cls)):
            total[i] += r * v
    return _Replay(gram, K, strict, exc, total)


def oracle_exc_multiplicities(plan: BlowupPlan) -> dict[str, Fraction]:
    """Coefficients of the exceptional strict transforms in the total transform."""
    rep = _replay(plan)
    cfg = plan.base
    rest = list(rep.total)
    for c, r in cfg.components:
        rest = [x - r * y for x, y in zip(rest, rep.strict[c.id])]
    ids = list(rep.exc)
    if not ids:
        return {}
    A = [[rep.exc[k][i] for k in ids] for i in range(len(rest))]
    x = solve_exact(A, rest)
    if x is None:
        raise ModelError("total transform is not supported on the exceptional curves")
    return dict(zip(ids, x))


def oracle_m(plan: BlowupPlan) -> int:
    rep = _replay(plan)
    coeff = oracle_exc_multiplicities(plan)
    total = sum(coeff[k] for k, v in rep.exc.items() if rep.pair(v, v) == -1)
    if Fraction(total).denominator != 1:
        raise ModelError("non-integral exceptional multiplicity")
    return int(total)


def oracle_genus(plan: BlowupPlan, D: DivisorClass | None = None) -> int:
    """Sectional genus of the pullback of ``D`` (default: the configuration)."""
    rep = _replay(plan)
    if D is None:
        vec = rep.total
    else:
        vec = list(D.coeffs) + [0] * (len(rep.gram) - len(D))
    twice = rep.pair([a + b for a, b in zip(rep.canonical, vec)], vec)
    return 1 + twice // 2


def oracle_strict_genus(plan: BlowupPlan, curve: str) -> int:
    rep = _replay(plan)
    v = rep.strict[curve]
    return 1 + rep.pair([a + b for a, b in zip(rep.canonical, v)], v) // 2


def semidef_witness(G: Sequence[Sequence[int]], box: int) -> tuple[int, ...] | None:
    n = len(G)
    if n > 6 or box > 5:
        raise PreconditionError(f"witness search budget exceeded (n={n}, box={box})")
    for v in itertools.product(range(-box, box + 1), repeat=n):
        if any(v) and sum(v[i] * G[i][j] * v[j] for i in range(n) for j in range(n)) > 0:
            return v
    return None


def oracle_semidef(G: Sequence[Sequence[int]], box: int) -> bool:
    """False iff some non-zero v in [-box, box]^n has v^T G v > 0."""
    return semidef_witness(G, box) is None


# -- random corpus -----------------------------------------------------------

def _lattice_for(
    rng: random.Random,
    curves: Sequence[str],
    meet: dict[frozenset, int],
    delta: dict[str, int],
) -> tuple[SurfaceModel, dict[str, CurveRecord]]:
    """A lattice spanned by the curves and K realising the given meetings.

    The curve block is made diagonally dominant negative, so the form has
    exactly one positive direction once K^2 clears the Schur complement.
    """
    n = len(curves)
    s = {}
    for a in curves:
        others = sum(meet.get(frozenset((a, b)), 0) for b in curves if b != a)
        s[a] = -others - 2 - rng.randint(0, 2)
    k = {a: -s[a] - 2 + 2 * delta[a] + 2 * rng.randint(0, 1) for a in curves}
    G = [[s[a] if a == b else meet.get(frozenset((a, b)), 0) for b in curves] for a in curves]
    y = solve_exact(G, [k[a] for a in curves])
    schur = sum(Fraction(k[a]) * y[i] for i, a in enumerate(curves))
    K2 = int(schur) + 1 + rng.randint(0, 3)
    gram = [row + [k[a]] for row, a in zip(G, curves)] + [[k[a] for a in curves] + [K2]]
    recs = {a: CurveRecord(a, DivisorClass.basis(n + 1, i)) for i, a in enumerate(curves)}
    X = SurfaceModel(
        gram=tuple(tuple(r) for r in gram),
        canonical=DivisorClass.basis(n + 1, n),
        irregularity=0,
        kodaira_dim=2,
        minimal=True,
        basis_names=tuple(curves) + ("K",),
        curves=tuple(recs.values()),
    )
    return X, recs


def random_plan(
    seed: int,
    depth: int = CORPUS.depth,
    branching: int = CORPUS.branching,
    max_mult: int = CORPUS.max_mult,
    max_events: int = CORPUS.max_events,
) -> BlowupPlan:
    """A valid random plan over a random configuration, reproducible from ``seed``.

    Trees over each base point have at most ``depth`` levels and ``branching``
    children per vertex; curve multiplicities at base points are at most
    ``max_mult``.  Satellite centres are mixed in when the geometry allows.
    """
    rng = random.Random(seed)
    curves = [f"C{i}" for i in range(1, rng.randint(1, 3) + 1)]
    r = {a: rng.randint(1, 3) for a in curves}
    points = {}
    for y in range(rng.randint(1, 3)):
        chosen = [a for a in curves if rng.random() < 0.7] or [rng.choice(curves)]
        points[f"y{y}"] = {a: rng.randint(1, max_mult) for a in chosen}

    contact: dict[tuple[str, str], int] = {}
    level: dict[str, int] = {}
    kids: dict[str, int] = {}
    untouched: dict[str, bool] = {}
    meets: set[frozenset] = set()
    tree: dict[str, str] = {}
    used: dict[str, list[dict[str, int]]] = {y: [] for y in points}
    events: list[BlowupEvent] = []
    open_points = list(points)
    budget = rng.randint(1, max_events)

    def born(eid: str, y: str, mults: dict[str, int], lev: int) -> None:
        level[eid], kids[eid], untouched[eid], tree[eid] = lev, 0, True, y
        for a in curves:
            contact[(a, eid)] = mults.get(a, 0)
        used[y].append(mults)

    while len(events) < budget:
        options: list[tuple] = [("base", y) for y in open_points]
        options += [("near", p) for p in level if level[p] < depth - 1 and kids[p] < branching]
        if not options:
            break
        kind, where = rng.choice(options)
        eid = f"b{len(events)}"
        if kind == "base":
            open_points.remove(where)
            events.append(BlowupEvent(eid, base_point=where))
            born(eid, where, points[where], 0)
            continue
        p = where
        sat = None
        if untouched[p]:
            partners = sorted(s for pair in meets if p in pair for s in pair if s != p)
            if partners and rng.random() < 0.4:
                sat = rng.choice(partners)
        mults = {}
        for a in curves:
            cap = contact[(a, p)]
            if sat is not None:
                cap = min(cap, contact[(a, sat)])
            if cap and rng.random() < 0.75:
                mults[a] = rng.randint(1, cap)
        for a, m in mults.items():
            contact[(a, p)] -= m
            if sat is not None:
                contact[(a, sat)] -= m
        untouched[p] = False
        kids[p] += 1
        if sat is not None:
            untouched[sat] = False
            meets.discard(frozenset((p, sat)))
            meets.add(frozenset((eid, sat)))
        meets.add(frozenset((eid, p)))
        events.append(BlowupEvent(eid, parent=p, satellite=sat, passing=mults))
        born(eid, tree[p], mults, level[p] + 1)

    clusters = []
    meet_total: dict[frozenset, int] = {}
    delta = {a: 0 for a in curves}
    for y, mults in points.items():
        local = {}
        for a, b in itertools.combinations(sorted(mults), 2):
            v = sum(m.get(a, 0) * m.get(b, 0) for m in used[y]) or mults[a] * mults[b]
            v += rng.randint(0, 1)
            local[frozenset((a, b))] = v
            meet_total[frozenset((a, b))] = meet_total.get(frozenset((a, b)), 0) + v
        clusters.append(PointCluster(y, mults, local))
        for m in used[y] or [mults]:
            for a, v in m.items():
                delta[a] += v * (v - 1) // 2
    X, recs = _lattice_for(rng, curves, meet_total, delta)
    cfg = Configuration(X, tuple((recs[a], r[a]) for a in curves), tuple(clusters))
    return BlowupPlan(cfg, tuple(events))


def check_plan(seed: int, theta_fn: Callable[[int], int] = theta, **params) -> list[OracleReport]:
    plan = random_plan(seed, **params)
    state = apply_plan(plan)
    formula = m_formula(build_rivers(state), theta_fn)
    direct = oracle_m(plan)
    reports = [
        OracleReport("m_formula", formula, direct, formula == direct, seed),
        OracleReport("m_state", m_oracle(state), direct, m_oracle(state) == direct, seed),
    ]
    base = sectional_genus(plan.base.surface, plan.base.divisor)
    up = oracle_genus(plan)
    reports.append(OracleReport("pullback_genus", base, up, base == up, seed))
    return reports


def seed_base() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def run_corpus(
    seeds: int = CORPUS.seeds,
    depth: int = CORPUS.depth,
    theta_fn: Callable[[int], int] = theta,
    start: int | None = None,
) -> Iterator[OracleReport]:
    first = seed_base() if start is None else start
    for seed in range(first, first + seeds):
        yield from check_plan(seed, theta_fn, depth=depth)


def mutant_theta(w: int) -> int:
    """Off-by-one θ used to prove the corpus can catch a broken formula."""
    return w if w >= 1 else 0
