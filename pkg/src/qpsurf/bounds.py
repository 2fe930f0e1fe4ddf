"""Lower bounds for K_X L and upper bounds for L^2, checked on lattice models.

Each checker returns a :class:`BoundReport`: the premises it verified (with
values), the two sides of the inequality, and the margin ``lhs - rhs``; the
inequality holds iff the margin is non-negative.  Inequalities of the form
``a <= b`` are stored as ``lhs = b``, ``rhs = a``.

Theorem identifiers
-------------------
``kl-conjecture``   K.L >= 2q - 4, equivalently L^2 <= 2m + 2 (not proved in general)
``kappa-0-1``       K.L >= 2q - 4 for kappa in {0, 1}
``pencil``          K.L >= 2q - 2 for kappa = 2 and h^0(L) >= 2
``cnns-alpha``      K.D >= 2q - 1, at least two positive components counted with multiplicity
``cnns-gamma``      K.D >= 2q - 4, no positive component but one of square zero
``cnns-negative``   K.D >= 2q - 3, every component negative
``n-of-d``          D^2 <= 2m - 2 + N(D) for CNNS D
``star-degree``     D^2 <= 4m + 4 for D of star type
``curve-degree``    C^2 <= 4m + 4 for an irreducible C with C^2 > 0
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .blowup import BlowupPlan, separation_data
from .configuration import Configuration
from .graphs import CNNSCase, Verdict, build_dual_graph, classify_cnns, n_of_d
from .lattice import (
    DivisorClass, PreconditionError, SurfaceModel, is_l_minimal, is_nef_on_registered,
    is_negative_semidefinite_matrix, sectional_genus,
)

THEOREMS = (
    "kl-conjecture", "kappa-0-1", "pencil", "cnns-alpha", "cnns-gamma", "cnns-negative",
    "n-of-d", "star-degree", "curve-degree",
)


class UndecidableDispatch(Exception):
    def __init__(self, missing: Sequence[str], why: str = ""):
        self.missing = list(missing)
        super().__init__(f"cannot choose a bound, missing declarations: {', '.join(self.missing)}"
                         + (f" ({why})" if why else ""))


@dataclass(frozen=True)
class Declarations:
    nef: bool | None = None
    big: bool | None = None
    h0: int | None = None
    l_minimal: bool | None = None


@dataclass(frozen=True)
class Premise:
    name: str
    value: object
    ok: bool = True


@dataclass(frozen=True)
class EqualityCase:
    name: str
    details: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    hypothesis_trace: tuple[Premise, ...]
    bound_lhs: int
    bound_rhs: int
    relation: str
    equality_case: EqualityCase | None = None
    conjectural: bool = False
    detail: Mapping[str, object] = field(default_factory=dict)

    @property
    def margin(self) -> int:
        return self.bound_lhs - self.bound_rhs

    @property
    def holds(self) -> bool:
        return self.margin >= 0


def _divisor(target) -> tuple[DivisorClass, Configuration | None]:
    if isinstance(target, Configuration):
        return target.divisor, target
    return target, None


def _m(X: SurfaceModel, D: DivisorClass) -> int:
    return sectional_genus(X, D) - X.irregularity


def check_conjecture(X: SurfaceModel, L, decl: Declarations | None = None) -> BoundReport:
    """Both forms of the conjectured bound; their verdicts always coincide."""
    L, _ = _divisor(L)
    decl = decl or Declarations()
    L2 = X.square(L)
    if L2 <= 0:
        raise PreconditionError(f"L^2 = {L2} is not positive, L is not big")
    KL = X.pair(X.canonical, L)
    q = X.irregularity
    m = _m(X, L)
    trace = (
        Premise("kappa", X.kodaira_dim),
        Premise("L^2 > 0", L2),
        Premise("L nef on registered curves", is_nef_on_registered(X, L), is_nef_on_registered(X, L)),
        Premise("declared nef", decl.nef, decl.nef is not False),
        Premise("m = g(L) - q", m),
    )
    degree_form = {"lhs": 2 * m + 2, "rhs": L2, "holds": L2 <= 2 * m + 2}
    return BoundReport(
        "kl-conjecture", trace, KL, 2 * q - 4, "K.L >= 2q - 4",
        conjectural=True, detail={"degree_form": degree_form},
    )


def _needs_polarisation(decl: Declarations) -> list[str]:
    return [name for name in ("nef", "big") if getattr(decl, name) is not True]


def _polarised(X: SurfaceModel, D: DivisorClass) -> list[Premise]:
    L2 = X.square(D)
    nef = is_nef_on_registered(X, D)
    if L2 <= 0 or not nef:
        raise PreconditionError(f"declared nef-big divisor fails a check (L^2 = {L2}, nef on registered = {nef})")
    return [Premise("nef and big (declared)", True), Premise("L^2", L2), Premise("nef on registered curves", nef)]


def _kl_report(X, theorem, D, rhs, trace, relation, detail=None):
    return BoundReport(theorem, tuple(trace), X.pair(X.canonical, D), rhs, relation,
                       detail=detail or {})


def _configuration_bound(X: SurfaceModel, cfg: Configuration, via: tuple[str, ...] = ()):
    """Best bound on K.D for an effective D on a minimal surface of general type.

    Returns (theorem, rhs, trace) or None when only the star type is left.
    A disconnected D, or the negative part of a beta-case D, is handled via
    a CNNS sub-divisor: K is nef, so K.D is at least K of any sub-divisor.
    """
    q = X.irregularity
    case = classify_cnns(cfg)
    trace = [Premise("sub-divisor", list(via)) ] if via else []
    trace.append(Premise("cnns case", case.value))
    squares = {c.id: X.square(c.cls) for c, _ in cfg.components}
    if case is CNNSCase.ALPHA:
        return "cnns-alpha", 2 * q - 1, trace
    if case is CNNSCase.GAMMA:
        if any(v == 0 for v in squares.values()):
            return "cnns-gamma", 2 * q - 4, trace + [Premise("component of square 0", True)]
        return "cnns-negative", 2 * q - 3, trace + [Premise("all components negative", True)]
    if case is CNNSCase.BETA:
        (pos,) = [cid for cid, v in squares.items() if v > 0]
        rest = [cid for cid in cfg.ids if cid != pos]
        if not rest:
            return None
        sub = cfg.sub(rest)
        if is_negative_semidefinite_matrix(sub.gram()):
            return None
        return _best_over_parts(X, sub, via + (pos + " removed",))
    if len(cfg.ids) and not build_dual_graph(cfg).is_connected():
        return _best_over_parts(X, cfg, via)
    return None


def _connected_parts(cfg: Configuration) -> list[list[str]]:
    g = build_dual_graph(cfg)
    adj = g.neighbours()
    seen, parts = set(), []
    for v in g.vertices:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        parts.append(sorted(comp))
    return parts


def _best_over_parts(X, cfg, via):
    best = None
    for part in _connected_parts(cfg):
        sub = cfg.sub(part)
        if classify_cnns(sub) is CNNSCase.NOT_CNNS:
            continue
        found = _configuration_bound(X, sub, via + ("+".join(part),))
        if found and (best is None or found[1] > best[1]):
            best = found
    return best


def candidate_bounds(X: SurfaceModel, target, decl: Declarations | None = None) -> list[BoundReport]:
    """Every proved bound on K.D whose premises the model and declarations meet."""
    decl = decl or Declarations()
    D, cfg = _divisor(target)
    q = X.irregularity
    h0 = decl.h0 if decl.h0 is not None else X.h0(D)
    base = [Premise("kappa", X.kodaira_dim), Premise("minimal", X.minimal)]
    if X.kodaira_dim in (0, 1):
        missing = _needs_polarisation(decl)
        if missing:
            raise UndecidableDispatch(missing, "kappa <= 1 needs a quasi-polarisation")
        trace = base + _polarised(X, D)
        return [_kl_report(X, "kappa-0-1", D, 2 * q - 4, trace, "K.L >= 2q - 4")]

    candidates = []
    if h0 is not None and h0 >= 2:
        missing = _needs_polarisation(decl)
        if missing:
            raise UndecidableDispatch(missing, "the pencil bound needs a quasi-polarisation")
        trace = base + [Premise("h0 (declared)", h0)] + _polarised(X, D)
        candidates.append(_kl_report(X, "pencil", D, 2 * q - 2, trace, "K.L >= 2q - 2"))
    if cfg is not None and X.minimal:
        found = _configuration_bound(X, cfg)
        if found:
            name, rhs, trace = found
            candidates.append(_kl_report(X, name, D, rhs, base + trace, f"K.D >= {rhs}"))
    if not candidates and cfg is None and h0 is None:
        raise UndecidableDispatch(["h0", "configuration"], "kappa = 2")
    return candidates


def applicable_theorem(X: SurfaceModel, target, decl: Declarations | None = None) -> BoundReport:
    """Strongest proved bound on K.D that the declarations allow.

    ``target`` is a divisor class or a :class:`Configuration`.  Falls back
    to :func:`check_conjecture` when nothing proved applies (star type,
    non-minimal general type without a pencil).
    """
    decl = decl or Declarations()
    candidates = candidate_bounds(X, target, decl)
    if not candidates:
        return _with_equality(X, check_conjecture(X, target, decl), target, decl)
    best = max(candidates, key=lambda r: r.bound_rhs)
    return _with_equality(X, best, target, decl)


def named_bound(X: SurfaceModel, target, theorem: str, decl: Declarations | None = None) -> BoundReport:
    """Run one checker by identifier; raises if its premises fail."""
    decl = decl or Declarations()
    _, cfg = _divisor(target)
    if theorem == "kl-conjecture":
        return check_conjecture(X, target, decl)
    if theorem in ("n-of-d", "star-degree", "curve-degree"):
        if cfg is None:
            raise PreconditionError(f"{theorem} needs a configuration")
        report = n_of_d_check(X, cfg) if theorem == "n-of-d" else star_degree_check(X, cfg)
        if report.theorem != theorem:
            raise PreconditionError(f"{theorem} does not apply, this is {report.theorem}")
        return report
    if theorem not in THEOREMS:
        raise PreconditionError(f"unknown theorem identifier {theorem!r}")
    for report in candidate_bounds(X, target, decl):
        if report.theorem == theorem:
            return _with_equality(X, report, target, decl)
    raise PreconditionError(f"the premises of {theorem} are not met")


def _with_equality(X, report: BoundReport, target, decl) -> BoundReport:
    if report.margin != 0:
        return report
    case = _equality_case(X, report, target, decl)
    return BoundReport(report.theorem, report.hypothesis_trace, report.bound_lhs, report.bound_rhs,
                       report.relation, case, report.conjectural, report.detail)


def n_of_d_check(X: SurfaceModel, cfg: Configuration) -> BoundReport:
    if not X.minimal:
        raise PreconditionError("surface is not minimal")
    case = classify_cnns(cfg)
    if case is CNNSCase.NOT_CNNS:
        raise PreconditionError("divisor is not CNNS")
    D = cfg.divisor
    m, N, D2 = _m(X, D), n_of_d(cfg), X.square(D)
    trace = (Premise("minimal", True), Premise("kappa", X.kodaira_dim), Premise("cnns case", case.value),
             Premise("m", m), Premise("N(D)", N), Premise("D^2", D2))
    return BoundReport("n-of-d", trace, 2 * m - 2 + N, D2, "D^2 <= 2m - 2 + N(D)")


def pair_inequality(pairs: Sequence[tuple[int, int]]) -> Verdict:
    """``2x - sum_{i<n} a_i(a_i - 1) - (a_n - 1)(a_n - 2) <= 2`` with a = b + d, x = sum b d."""
    if not pairs:
        raise PreconditionError("need at least one (b, d) pair")
    if any(b < 1 or d < 1 for b, d in pairs):
        raise PreconditionError("multiplicities must be positive")
    a = [b + d for b, d in pairs]
    x = sum(b * d for b, d in pairs)
    value = 2 * x - sum(ai * (ai - 1) for ai in a[:-1]) - (a[-1] - 1) * (a[-1] - 2)
    return Verdict(value <= 2, 2 - value, value, 2, detail={"x": x})


def star_degree_check(X: SurfaceModel, cfg: Configuration) -> BoundReport:
    if not (X.minimal and X.kodaira_dim == 2):
        raise PreconditionError("needs a minimal surface of general type")
    positive = [(c, r) for c, r in cfg.components if X.square(c.cls) > 0]
    if len(positive) != 1 or positive[0][1] != 1:
        raise PreconditionError("star type needs exactly one reduced component of positive square")
    c1 = positive[0][0]
    rest = [cid for cid in cfg.ids if cid != c1.id]
    if rest and not is_negative_semidefinite_matrix(cfg.sub(rest).gram()):
        raise PreconditionError("the remaining components are not negative semidefinite")
    D = cfg.divisor
    m, D2 = _m(X, D), X.square(D)
    name = "star-degree" if rest else "curve-degree"
    trace = (Premise("positive component", c1.id), Premise("rest negative semidefinite", True),
             Premise("m", m), Premise("D^2", D2))
    return BoundReport(name, trace, 4 * m + 4, D2, "D^2 <= 4m + 4")


def _factor_roles(X: SurfaceModel, genus: int) -> tuple[str, str] | None:
    """(fibre basis name of the factor of given genus, the other) for product models."""
    if X.product_genera is None or not X.is_curve_product:
        return None
    gF, gC = X.product_genera
    if gF == genus:
        return "f", "c"
    if gC == genus:
        return "c", "f"
    return None


def _equality_case(X, report: BoundReport, target, decl: Declarations) -> EqualityCase:
    D, cfg = _divisor(target)
    lmin = decl.l_minimal if decl.l_minimal is not None else is_l_minimal(X, D)
    if report.theorem == "kappa-0-1":
        if not lmin:
            return EqualityCase("unclassified-equality", {"reason": "not L-minimal"})
        if X.kodaira_dim == 0 and X.minimal and X.irregularity == 2 and X.canonical.is_zero():
            return EqualityCase("abelian")
        roles = _factor_roles(X, 1)
        if X.kodaira_dim == 1 and roles:
            ell, other = roles
            m = _m(X, D)
            want = X.cls(**{other: 1, ell: m + 1})
            if D == want:
                return EqualityCase("elliptic-product", {"m": m})
    if report.theorem == "pencil":
        roles = _factor_roles(X, 2)
        if lmin and roles:
            two, other = roles
            other_genus = X.product_genera[1] if two == "f" else X.product_genera[0]
            if other_genus >= 2 and D == X.cls(**{other: 1, two: 2}):
                return EqualityCase("genus-two-product")
    if report.theorem == "cnns-gamma" and cfg is not None:
        return _gamma_equality(X, cfg)
    return EqualityCase("unclassified-equality")


def _gamma_equality(X: SurfaceModel, cfg: Configuration, plan: BlowupPlan | None = None) -> EqualityCase:
    if len(cfg.components) != 2 or any(r != 1 for _, r in cfg.components):
        return EqualityCase("unclassified-equality", {"reason": "not a sum of two reduced curves"})
    (c1, _), (c2, _) = cfg.components
    if X.square(c1.cls) or X.square(c2.cls):
        return EqualityCase("unclassified-equality", {"reason": "a component has non-zero square"})
    x = X.pair(c1.cls, c2.cls)
    m = _m(X, cfg.divisor)
    if plan is not None:
        pairs = separation_data(plan, c1.id, c2.id)
    else:
        pairs = [(p.mults[c1.id], p.mults[c2.id]) for p in cfg.point_clusters
                 if c1.id in p.mults and c2.id in p.mults]
    if len(pairs) == 1 and pairs[0][0] * pairs[0][1] == x:
        b, d = pairs[0]
        if (b, d) == (1, 1):
            return EqualityCase("gamma-smooth", {"m": m, "points": 1})
        if sorted((b, d)) == [1, 2]:
            sing = c2.id if d == 2 else c1.id
            return EqualityCase("gamma-one-double-point", {"m": m, "singular": sing, "mult": 2, "C1.C2": x})
        if (b, d) == (2, 2):
            return EqualityCase("gamma-two-double-points", {"m": m, "mult": 2, "C1.C2": x})
        return EqualityCase("unclassified-equality", {"pairs": pairs})
    if all(p == (1, 1) for p in pairs):
        return EqualityCase("gamma-smooth", {"m": m, "points": len(pairs)})
    return EqualityCase("unclassified-equality", {"pairs": pairs})


def classify_equality(X: SurfaceModel, target, decl: Declarations | None = None,
                      plan: BlowupPlan | None = None) -> EqualityCase:
    decl = decl or Declarations()
    report = applicable_theorem(X, target, decl)
    if report.margin != 0:
        raise PreconditionError(f"{report.theorem} holds with margin {report.margin}, not equality")
    if plan is not None and report.theorem == "cnns-gamma":
        return _gamma_equality(X, plan.base, plan)
    return report.equality_case
