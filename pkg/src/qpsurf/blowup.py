"""Point blow-ups over a configuration, tracked purely numerically.

Each blow-up adds a basis vector ``e`` with ``e^2 = -1`` orthogonal to the
old lattice; the canonical class becomes ``K + e``, every curve through the
centre with multiplicity ``m`` loses ``m e`` and every earlier exceptional
curve through the centre loses ``e``.

Geometry enters only through declared data.  A centre is either a point
cluster of the base configuration or a point on an earlier exceptional
curve (optionally also on a second, older one -- a satellite point).
Contacts of a strict transform with an exceptional curve that no later
event claims are taken to be transverse and at distinct points.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .configuration import Configuration
from .lattice import CurveRecord, DivisorClass, ModelError, PreconditionError, SurfaceModel


@dataclass(frozen=True)
class BlowupEvent:
    id: str
    base_point: str | None = None
    parent: str | None = None
    satellite: str | None = None
    passing: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if (self.base_point is None) == (self.parent is None):
            raise ModelError(f"event {self.id}: give exactly one of base_point / parent")
        if self.satellite is not None and self.parent is None:
            raise ModelError(f"event {self.id}: a satellite centre needs a parent")
        if self.satellite is not None and self.satellite == self.parent:
            raise ModelError(f"event {self.id}: satellite equals parent")
        passing = {k: int(v) for k, v in dict(self.passing).items() if int(v) != 0}
        if any(v < 0 for v in passing.values()):
            raise ModelError(f"event {self.id}: multiplicities must be positive")
        object.__setattr__(self, "passing", passing)

    @property
    def exc_passing(self) -> tuple[str, ...]:
        return tuple(x for x in (self.parent, self.satellite) if x is not None)


@dataclass(frozen=True)
class BlowupPlan:
    base: Configuration
    events: tuple[BlowupEvent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        seen: set[str] = set()
        roots: set[str] = set()
        for ev in self.events:
            if ev.id in seen:
                raise ModelError(f"duplicate event id {ev.id}")
            for ref in ev.exc_passing:
                if ref not in seen:
                    raise ModelError(f"event {ev.id} refers to {ref} before it happens")
            if ev.base_point is not None:
                if ev.base_point in roots:
                    raise ModelError(f"base point {ev.base_point} blown up twice")
                roots.add(ev.base_point)
            seen.add(ev.id)

    def event(self, eid: str) -> BlowupEvent:
        for ev in self.events:
            if ev.id == eid:
                return ev
        raise KeyError(eid)

    @property
    def base_points(self) -> tuple[str, ...]:
        return tuple(ev.base_point for ev in self.events if ev.base_point is not None)


def exc_id(eid: str) -> str:
    return f"E:{eid}"


@dataclass(frozen=True)
class TransformState:
    """Everything known after a sequence of blow-ups.

    ``exc_mult_in_total[k]`` is the coefficient of the k-th exceptional curve
    in the total transform of D (its E-multiplicity); ``red_mult[k]`` the
    multiplicity at the k-th centre of the reduced total transform just
    before blowing it up.  ``residual`` holds, per base point and pair of
    components, the local intersection not yet separated.
    """

    base: Configuration
    surface: SurfaceModel
    strict_classes: Mapping[str, DivisorClass]
    exc_classes: Mapping[str, DivisorClass] = field(default_factory=dict)
    exc_mult_in_total: Mapping[str, int] = field(default_factory=dict)
    is_minus_one: Mapping[str, bool] = field(default_factory=dict)
    events: tuple[BlowupEvent, ...] = ()
    residual: Mapping[tuple[str, frozenset], int] = field(default_factory=dict)
    tree_of: Mapping[str, str] = field(default_factory=dict)
    red_mult: Mapping[str, int] = field(default_factory=dict)
    e_curve: Mapping[str, tuple[int, int]] = field(default_factory=dict)
    total: DivisorClass | None = None

    @classmethod
    def initial(cls, config: Configuration) -> "TransformState":
        return cls(
            base=config,
            surface=config.surface,
            strict_classes={c.id: c.cls for c, _ in config.components},
            total=config.divisor,
        )

    @property
    def event_ids(self) -> tuple[str, ...]:
        return tuple(ev.id for ev in self.events)

    def event(self, eid: str) -> BlowupEvent:
        for ev in self.events:
            if ev.id == eid:
                return ev
        raise KeyError(eid)

    def blown_up_points(self) -> set[str]:
        return {ev.base_point for ev in self.events if ev.base_point is not None}

    def children(self, eid: str) -> list[str]:
        return [ev.id for ev in self.events if ev.parent == eid]

    def minus_one_events(self) -> list[str]:
        return [k for k in self.event_ids if self.is_minus_one[k]]

    def pullback(self, D: DivisorClass) -> DivisorClass:
        extra = self.surface.rank - len(D)
        return DivisorClass(tuple(D.coeffs) + (0,) * extra)


def _extend_all(classes: Mapping[str, DivisorClass]) -> dict[str, DivisorClass]:
    return {k: v.extend() for k, v in classes.items()}


def _resolve_passing(state: TransformState, event: BlowupEvent) -> tuple[dict[str, int], str]:
    cfg = state.base
    if event.base_point is not None:
        y = event.base_point
        if y in state.blown_up_points():
            raise ModelError(f"base point {y} already blown up")
        try:
            cluster = cfg.cluster(y)
        except KeyError:
            if len(event.passing) > 1:
                raise ModelError(
                    f"event {event.id}: several curves through {y}, which is not a declared cluster"
                ) from None
            passing = dict(event.passing)
        else:
            passing = dict(cluster.mults)
            if event.passing and event.passing != passing:
                raise ModelError(
                    f"event {event.id}: multiplicities {event.passing} contradict cluster {y} {cluster.mults}"
                )
        return passing, y
    for ref in event.exc_passing:
        if ref not in state.exc_classes:
            raise ModelError(f"event {event.id}: exceptional curve {ref} does not exist")
    return dict(event.passing), state.tree_of[event.parent]


def blow_up(state: TransformState, event: BlowupEvent) -> TransformState:
    """Blow up the centre described by ``event`` and return the new state."""
    if event.id in state.exc_classes:
        raise ModelError(f"event id {event.id} reused")
    X = state.surface
    cfg = state.base
    passing, y = _resolve_passing(state, event)
    unknown = set(passing) - set(cfg.ids)
    if unknown:
        raise ModelError(f"event {event.id}: unknown curves {sorted(unknown)}")

    through = event.exc_passing
    if event.satellite is not None:
        meet = X.pair(state.exc_classes[event.parent], state.exc_classes[event.satellite])
        if meet != 1:
            raise ModelError(
                f"event {event.id}: {event.parent} and {event.satellite} do not meet at an unblown point"
            )
    heavy = [x for x in through if not state.is_minus_one[x]]
    if len(heavy) > 1:
        raise ModelError(
            f"event {event.id}: two non-(-1) exceptional curves {heavy} through one centre"
        )
    # remaining contact of each strict transform with the exceptional curves through the centre
    for x in through:
        for a, m in passing.items():
            have = X.pair(state.strict_classes[a], state.exc_classes[x])
            if m > have:
                raise ModelError(
                    f"event {event.id}: {a} has multiplicity {m} but only {have} contact left with {x}"
                )

    residual = dict(state.residual)
    if event.base_point is not None and event.base_point in {p.id for p in cfg.point_clusters}:
        cluster = cfg.cluster(event.base_point)
        for key, v in cluster.local.items():
            residual[(y, key)] = v
    names = sorted(passing)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            key = (y, frozenset((a, b)))
            left = residual.get(key, 0) - passing[a] * passing[b]
            if left < 0:
                raise ModelError(
                    f"event {event.id}: exceeds the local intersection budget of {a}, {b} over {y}"
                )
            residual[key] = left

    e_mult = sum(cfg.multiplicity(a) * m for a, m in passing.items())
    e_mult += sum(state.exc_mult_in_total[x] for x in through)
    red = sum(passing.values()) + sum(1 for x in through if state.exc_mult_in_total[x] > 0)
    eps = (1, state.exc_mult_in_total[heavy[0]]) if heavy else (0, 0)

    n = X.rank
    e = DivisorClass.basis(n + 1, n)
    gram = tuple(tuple(row) + (0,) for row in X.gram) + ((0,) * n + (-1,),)
    strict = _extend_all(state.strict_classes)
    for a, m in passing.items():
        strict[a] = strict[a] - e * m
    excs = _extend_all(state.exc_classes)
    for x in through:
        excs[x] = excs[x] - e
    excs[event.id] = e

    curves = []
    strict_ids = set(strict)
    for c in X.curves:
        if c.id in strict_ids or c.id.startswith("E:"):
            continue
        curves.append(c.extend())
    curves += [CurveRecord(cid, cls) for cid, cls in strict.items()]
    curves += [CurveRecord(exc_id(k), cls) for k, cls in excs.items()]

    surface = SurfaceModel(
        gram=gram,
        canonical=X.canonical.extend() + e,
        irregularity=X.irregularity,
        kodaira_dim=X.kodaira_dim,
        minimal=False,
        geom_genus=X.geom_genus,
        is_curve_product=False,
        basis_names=X.basis_names + (f"E_{event.id}",),
        curves=tuple(curves),
    )
    for a in passing:
        for x in list(through) + [event.id]:
            if surface.pair(strict[a], excs[x]) < 0:
                raise ModelError(f"event {event.id}: {a} would meet {x} negatively")

    mults = dict(state.exc_mult_in_total)
    mults[event.id] = e_mult
    minus_one = {k: surface.square(v) == -1 for k, v in excs.items()}
    resolved = replace(event, passing=passing)
    return TransformState(
        base=cfg,
        surface=surface,
        strict_classes=strict,
        exc_classes=excs,
        exc_mult_in_total=mults,
        is_minus_one=minus_one,
        events=state.events + (resolved,),
        residual=residual,
        tree_of={**state.tree_of, event.id: y},
        red_mult={**state.red_mult, event.id: red},
        e_curve={**state.e_curve, event.id: eps},
        total=state.total.extend(),
    )


def apply_plan(plan: BlowupPlan) -> TransformState:
    state = TransformState.initial(plan.base)
    for ev in plan.events:
        state = blow_up(state, ev)
    return state


def genus_drop(g: int, m: int) -> int:
    """Arithmetic genus of a strict transform through a point of multiplicity m."""
    return g - m * (m - 1) // 2


def _state_of(plan_or_state) -> TransformState:
    return apply_plan(plan_or_state) if isinstance(plan_or_state, BlowupPlan) else plan_or_state


def residual_between(state: TransformState, c1: str, c2: str) -> int:
    """Local intersection of the two strict transforms still unseparated."""
    key = frozenset((c1, c2))
    blown = state.blown_up_points()
    left = sum(v for (y, k), v in state.residual.items() if k == key)
    left += sum(p.local_number(c1, c2) for p in state.base.point_clusters if p.id not in blown)
    return left


def separation_data(plan_or_state, c1: str, c2: str) -> list[tuple[int, int]]:
    """Multiplicity pairs (b_i, d_i) of ``c1``, ``c2`` at each shared centre."""
    state = _state_of(plan_or_state)
    if residual_between(state, c1, c2):
        raise PreconditionError(f"the plan does not separate {c1} and {c2}")
    out = []
    for ev in state.events:
        b, d = ev.passing.get(c1, 0), ev.passing.get(c2, 0)
        if b and d:
            out.append((b, d))
    return out


def validate_snc(state: TransformState, curves: Sequence[str] | None = None) -> bool:
    """Whether the strict transforms of ``curves`` and the exceptional curves
    form a simple normal crossing configuration.

    Violations are read off the point data: an untouched cluster with a
    singular curve, three curves, or a non-transverse pair; or a blown-up
    point over which some pair still has unseparated intersection (that
    intersection sits on an exceptional curve, so it is a triple point).
    """
    state = _state_of(state)
    wanted = set(state.base.ids if curves is None else curves)
    blown = state.blown_up_points()
    for p in state.base.point_clusters:
        if p.id in blown:
            continue
        here = [c for c in p.curves if c in wanted]
        if any(p.mults[c] > 1 for c in here):
            return False
        if len(here) > 2:
            return False
        if len(here) == 2 and p.local_number(*here) != 1:
            return False
    for (y, key), v in state.residual.items():
        if v and key <= wanted:
            return False
    return True
