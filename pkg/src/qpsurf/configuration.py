"""Effective divisors together with point-level intersection data."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .lattice import CurveRecord, DivisorClass, ModelError, SurfaceModel


def _pair(a: str, b: str) -> frozenset:
    return frozenset((a, b))


@dataclass(frozen=True)
class PointCluster:
    """A point of X and the components of D through it.

    ``mults`` maps curve id to its multiplicity at the point; ``local``
    maps an unordered pair of curve ids to their local intersection number
    there (default: the product of multiplicities, i.e. distinct tangents).
    """

    id: str
    mults: Mapping[str, int]
    local: Mapping[frozenset, int] = field(default_factory=dict)

    def __post_init__(self):
        mults = dict(self.mults)
        if any(m < 1 for m in mults.values()):
            raise ModelError(f"cluster {self.id}: multiplicities must be positive")
        local = {}
        for k, v in dict(self.local).items():
            key = frozenset(k)
            if len(key) != 2 or not key <= set(mults):
                raise ModelError(f"cluster {self.id}: bad pair {sorted(key)}")
            local[key] = int(v)
        for a, b in itertools.combinations(sorted(mults), 2):
            key = _pair(a, b)
            local.setdefault(key, mults[a] * mults[b])
            if local[key] < mults[a] * mults[b]:
                raise ModelError(
                    f"cluster {self.id}: i({a},{b}) = {local[key]} below mult product {mults[a] * mults[b]}"
                )
        object.__setattr__(self, "mults", mults)
        object.__setattr__(self, "local", local)

    @property
    def curves(self) -> tuple[str, ...]:
        return tuple(sorted(self.mults))

    def local_number(self, a: str, b: str) -> int:
        return self.local.get(_pair(a, b), 0)


@dataclass(frozen=True)
class Configuration:
    """``D = sum r_i C_i`` on ``surface`` with its intersection points.

    Per pair of distinct components the local numbers over all clusters
    must add up to the lattice intersection number.
    """

    surface: SurfaceModel
    components: tuple[tuple[CurveRecord, int], ...]
    point_clusters: tuple[PointCluster, ...] = ()

    def __post_init__(self):
        comps = tuple((c, int(r)) for c, r in self.components)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "point_clusters", tuple(self.point_clusters))
        ids = [c.id for c, _ in comps]
        if len(set(ids)) != len(ids):
            raise ModelError("components must be distinct curves")
        if any(r < 1 for _, r in comps):
            raise ModelError("component multiplicities must be positive")
        X = self.surface
        for c, _ in comps:
            if len(c.cls) != X.rank:
                raise ModelError(f"component {c.id} has the wrong rank")
        known = set(ids)
        seen = set()
        for p in self.point_clusters:
            if p.id in seen:
                raise ModelError(f"duplicate cluster id {p.id}")
            seen.add(p.id)
            if not set(p.mults) <= known:
                raise ModelError(f"cluster {p.id} names unknown curves {sorted(set(p.mults) - known)}")
        for (a, _), (b, _) in itertools.combinations(comps, 2):
            lattice = X.pair(a.cls, b.cls)
            if lattice < 0:
                raise ModelError(f"distinct curves {a.id}, {b.id} meet negatively ({lattice})")
            local = sum(p.local_number(a.id, b.id) for p in self.point_clusters)
            if local != lattice:
                raise ModelError(
                    f"{a.id}.{b.id} = {lattice} but point clusters account for {local}"
                )

    @classmethod
    def transverse(cls, X: SurfaceModel, multiplicities: Mapping[str, int]) -> "Configuration":
        """Registered curves with every intersection split into simple points."""
        comps = tuple((X.curve(cid), r) for cid, r in multiplicities.items())
        clusters = []
        for (a, _), (b, _) in itertools.combinations(comps, 2):
            for k in range(X.pair(a.cls, b.cls)):
                clusters.append(PointCluster(f"{a.id}*{b.id}#{k}", {a.id: 1, b.id: 1}))
        return cls(X, comps, tuple(clusters))

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c, _ in self.components)

    def curve(self, cid: str) -> CurveRecord:
        for c, _ in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def multiplicity(self, cid: str) -> int:
        for c, r in self.components:
            if c.id == cid:
                return r
        raise KeyError(cid)

    def cluster(self, pid: str) -> PointCluster:
        for p in self.point_clusters:
            if p.id == pid:
                return p
        raise KeyError(pid)

    @property
    def divisor(self) -> DivisorClass:
        total = DivisorClass.zero(self.surface.rank)
        for c, r in self.components:
            total = total + c.cls * r
        return total

    @property
    def reduced(self) -> DivisorClass:
        total = DivisorClass.zero(self.surface.rank)
        for c, _ in self.components:
            total = total + c.cls
        return total

    def sub(self, ids: Iterable[str]) -> "Configuration":
        keep = set(ids)
        if not keep <= set(self.ids):
            raise KeyError(sorted(keep - set(self.ids)))
        comps = tuple((c, r) for c, r in self.components if c.id in keep)
        clusters = []
        for p in self.point_clusters:
            mults = {k: v for k, v in p.mults.items() if k in keep}
            if len(mults) >= 1 and (len(mults) >= 2 or len(p.mults) == 1):
                local = {k: v for k, v in p.local.items() if k <= keep}
                clusters.append(PointCluster(p.id, mults, local))
        return Configuration(self.surface, comps, tuple(clusters))

    def gram(self) -> list[list[int]]:
        X = self.surface
        return [[X.pair(a.cls, b.cls) for b, _ in self.components] for a, _ in self.components]
