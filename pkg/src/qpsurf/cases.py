"""Named fixtures: the closed-form surfaces and configurations used as golden cases."""
from __future__ import annotations

from .blowup import BlowupEvent, BlowupPlan
from .configuration import Configuration, PointCluster
from .lattice import CurveRecord, DivisorClass, SurfaceModel, append_curve, product_surface


def tangential_pair_surface(x: int) -> SurfaceModel:
    """Two curves of square 0 with ``C1.C2 = x`` and ``K = k(C1 + C2)``.

    ``q = kx + 2`` puts ``D = C1 + C2`` exactly on ``K.D = 2q - 4``; k is 3,
    or 4 when x is odd (parity).
    """
    k = 4 if x % 2 else 3
    return SurfaceModel(
        gram=((0, x), (x, 0)),
        canonical=DivisorClass((k, k)),
        irregularity=k * x + 2,
        kodaira_dim=2,
        minimal=True,
        basis_names=("C1", "C2"),
        curves=(CurveRecord("C1", DivisorClass((1, 0))), CurveRecord("C2", DivisorClass((0, 1)))),
    )


def tangential_pair(b: int, d: int) -> BlowupPlan:
    """``C1 + C2`` meeting at one point with multiplicities (b, d), separated by one blow-up."""
    X = tangential_pair_surface(b * d)
    cfg = Configuration(
        X,
        ((X.curve("C1"), 1), (X.curve("C2"), 1)),
        (PointCluster("x", {"C1": b, "C2": d}, {("C1", "C2"): b * d}),),
    )
    return BlowupPlan(cfg, (BlowupEvent("1", base_point="x"),))


def crossing_fibres(gF: int = 2, gC: int = 2) -> Configuration:
    """``f + c`` on a product of curves: two fibres meeting once, at ``x``."""
    X = product_surface(gF, gC)
    return Configuration(X, ((X.curve("f"), 1), (X.curve("c"), 1)),
                         (PointCluster("x", {"f": 1, "c": 1}),))


def star_with_tail() -> Configuration:
    """An irreducible ``C = f + c`` on the genus (2, 2) product plus a (-2)-curve meeting it once."""
    X = product_surface(2, 2)
    X = X.with_curves(CurveRecord("C", X.cls(f=1, c=1)))
    X = append_curve(X, "T", -2, {"C": 1}, canonical_degree=0)
    return Configuration.transverse(X, {"C": 1, "T": 1})
