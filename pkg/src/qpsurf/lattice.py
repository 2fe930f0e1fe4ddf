"""Numerical divisor theory of a smooth projective surface.

A surface is modelled by a finite-rank integer lattice carrying the
intersection form, together with the class of the canonical divisor and a
handful of declared invariants (irregularity, Kodaira dimension, minimality).
Everything here is exact: integers for the pairing, :class:`fractions.Fraction`
for elimination.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class ModelError(ValueError):
    """The lattice data cannot come from a surface (parity, symmetry, ...)."""


class UnsupportedModel(ModelError):
    pass


class DimensionError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class DivisorClass:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))

    @classmethod
    def zero(cls, rank: int) -> "DivisorClass":
        return cls((0,) * rank)

    @classmethod
    def basis(cls, rank: int, i: int) -> "DivisorClass":
        return cls(1 if j == i else 0 for j in range(rank))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def _check(self, other: "DivisorClass") -> None:
        if len(other) != len(self):
            raise DimensionError(f"rank mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-a for a in self.coeffs)

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(k * a for a in self.coeffs)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def extend(self, extra: int = 1, value: int = 0) -> "DivisorClass":
        """Embed into a lattice with ``extra`` more basis vectors."""
        return DivisorClass(self.coeffs + (value,) + (0,) * (extra - 1)) if extra else self

    def __repr__(self) -> str:
        return f"DivisorClass({list(self.coeffs)})"


@dataclass(frozen=True)
class CurveRecord:
    id: str
    cls: DivisorClass
    irreducible: bool = True
    reduced: bool = True

    def extend(self, extra: int = 1) -> "CurveRecord":
        return replace(self, cls=self.cls.extend(extra))


def _as_class(D) -> DivisorClass:
    if isinstance(D, DivisorClass):
        return D
    if isinstance(D, CurveRecord):
        return D.cls
    return DivisorClass(D)


@dataclass(frozen=True)
class SurfaceModel:
    """Integer intersection lattice of a surface plus declared invariants.

    ``gram`` is the intersection form in the chosen basis and ``canonical``
    the coordinates of K_X.  Construction rejects data that no surface can
    carry: an asymmetric form, odd ``D^2 + K.D``, kappa outside {0, 1, 2},
    ``q > 2`` with kappa 0, or a non-nef canonical class on a minimal model of
    non-negative Kodaira dimension (tested against registered curves only).
    """

    gram: tuple[tuple[int, ...], ...]
    canonical: DivisorClass
    irregularity: int
    kodaira_dim: int
    minimal: bool = True
    geom_genus: int | None = None
    is_curve_product: bool = False
    basis_names: tuple[str, ...] = ()
    curves: tuple[CurveRecord, ...] = ()
    h0_declared: Mapping[DivisorClass, int] = field(default_factory=dict, compare=False)
    product_genera: tuple[int, int] | None = None

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "canonical", _as_class(self.canonical))
        object.__setattr__(self, "curves", tuple(self.curves))
        n = len(gram)
        if n == 0:
            raise ModelError("lattice must have positive rank")
        if any(len(row) != n for row in gram):
            raise ModelError("gram matrix is not square")
        for i, j in itertools.combinations(range(n), 2):
            if gram[i][j] != gram[j][i]:
                raise ModelError(f"gram matrix is not symmetric at ({i}, {j})")
        if not self.basis_names:
            object.__setattr__(self, "basis_names", tuple(f"e{i}" for i in range(n)))
        if len(self.basis_names) != n:
            raise ModelError("basis_names length differs from rank")
        if len(self.canonical) != n:
            raise DimensionError("canonical class has wrong length")
        if self.kodaira_dim not in (0, 1, 2):
            raise UnsupportedModel(f"Kodaira dimension {self.kodaira_dim!r} not in {{0, 1, 2}}")
        if self.irregularity < 0:
            raise ModelError("irregularity must be non-negative")
        if self.kodaira_dim == 0 and self.irregularity > 2:
            raise ModelError(f"kappa = 0 forces q <= 2, got q = {self.irregularity}")
        # D^2 + K.D mod 2 is additive in D, so the basis decides parity.
        for i in range(n):
            e = DivisorClass.basis(n, i)
            if (self.pair(e, e) + self.pair(self.canonical, e)) % 2:
                raise ModelError(
                    f"parity violation: D^2 + K.D is odd for D = {self.basis_names[i]}"
                )
        for c in self.curves:
            if len(c.cls) != n:
                raise DimensionError(f"curve {c.id} has wrong rank")
            if c.irreducible and c.reduced and arithmetic_genus(self, c) < 0:
                raise ModelError(f"curve {c.id} has negative arithmetic genus")
            if self.minimal and self.kodaira_dim >= 1 and c.irreducible and self.pair(self.canonical, c.cls) < 0:
                raise ModelError(f"K.{c.id} < 0 on a minimal model with kappa >= 1")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, D, E) -> int:
        D, E = _as_class(D), _as_class(E)
        n = self.rank
        if len(D) != n or len(E) != n:
            raise DimensionError(f"expected classes of length {n}")
        total = 0
        for i, d in enumerate(D.coeffs):
            if d:
                row = self.gram[i]
                total += d * sum(row[j] * e for j, e in enumerate(E.coeffs) if e)
        return total

    def square(self, D) -> int:
        return self.pair(D, D)

    def cls(self, **coeffs: int) -> DivisorClass:
        """Class from basis-name keywords, e.g. ``X.cls(c=1, f=2)``."""
        unknown = set(coeffs) - set(self.basis_names)
        if unknown:
            raise KeyError(f"unknown basis names {sorted(unknown)}")
        return DivisorClass(coeffs.get(name, 0) for name in self.basis_names)

    def curve(self, cid: str) -> CurveRecord:
        for c in self.curves:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def with_curves(self, *curves: CurveRecord) -> "SurfaceModel":
        return replace(self, curves=self.curves + tuple(curves))

    def h0(self, D) -> int | None:
        return self.h0_declared.get(_as_class(D))

    @property
    def K(self) -> DivisorClass:
        return self.canonical

    def K2(self) -> int:
        return self.square(self.canonical)


def pairing(X: SurfaceModel, D, E) -> int:
    return X.pair(D, E)


def sectional_genus(X: SurfaceModel, D) -> int:
    """``1 + (K + D).D / 2``."""
    D = _as_class(D)
    twice = X.pair(X.canonical + D, D)
    if twice % 2:
        raise ModelError(f"(K + D).D is odd for {D!r}")
    return 1 + twice // 2


def arithmetic_genus(X: SurfaceModel, C: CurveRecord) -> int:
    g = sectional_genus(X, C.cls)
    if g < 0 and C.irreducible and C.reduced:
        raise ModelError(f"irreducible reduced curve {C.id} has arithmetic genus {g}")
    return g


def hodge_index_check(X: SurfaceModel, D, L) -> bool:
    L2 = X.square(L)
    if L2 <= 0:
        raise PreconditionError("hodge_index_check needs L^2 > 0")
    return X.pair(D, L) ** 2 >= X.square(D) * L2


def inertia(matrix: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """Exact (positive, negative, zero) counts of a symmetric matrix.

    Congruence diagonalisation over the rationals: eliminate on a non-zero
    diagonal pivot; when the whole diagonal vanishes but some ``a_ij`` does
    not, add row/column j to i first so that the new pivot is ``2 a_ij``.
    """
    a = [[Fraction(x) for x in row] for row in matrix]
    pos = neg = 0
    while a:
        n = len(a)
        k = next((i for i in range(n) if a[i][i] != 0), None)
        if k is None:
            hit = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if hit is None:
                return pos, neg, n
            i, j = hit
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            k = i
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [t for t in range(n) if t != k]
        a = [[a[r][c] - a[r][k] * a[k][c] / p for c in rest] for r in rest]
    return pos, neg, 0


def is_negative_semidefinite_matrix(matrix: Sequence[Sequence[int]]) -> bool:
    if not matrix:
        raise PreconditionError("empty matrix")
    return inertia(matrix)[0] == 0


def gram_submatrix(X: SurfaceModel, classes: Sequence) -> list[list[int]]:
    return [[X.pair(a, b) for b in classes] for a in classes]


def is_negative_semidefinite(X: SurfaceModel, curves: Sequence) -> bool:
    """Negative semidefiniteness of the intersection matrix of ``curves`` (ids or classes)."""
    if not curves:
        raise PreconditionError("need at least one curve")
    classes = [X.curve(c).cls if isinstance(c, str) else c for c in curves]
    return is_negative_semidefinite_matrix(gram_submatrix(X, classes))


@dataclass(frozen=True)
class Violation:
    rule: str
    inequality: str
    lhs: int
    rhs: int
    subject: str = "X"

    def __str__(self) -> str:
        return f"{self.rule}: {self.inequality} fails for {self.subject} ({self.lhs} < {self.rhs})"


def validate_surface(X: SurfaceModel) -> list[Violation]:
    """Every classical numerical constraint the declared invariants break.

    Checks the Hodge index signature (at most one positive direction) on
    every model, and on minimal surfaces of general type the Debarre bounds
    ``K^2 >= 2 p_g`` and ``K^2 >= 2q``, the bound ``K^2 >= 6q - 13`` for
    non-products, and ``K.C >= (3/2) q - 3`` for registered irreducible
    reduced curves of positive square.
    """
    out: list[Violation] = []
    pos, _, _ = inertia(X.gram)
    if pos > 1:
        out.append(Violation("hodge-index", "at most one positive eigenvalue", 1, pos))
    if not (X.minimal and X.kodaira_dim == 2):
        return out
    q, K2 = X.irregularity, X.K2()
    if X.geom_genus is not None and q >= 1 and K2 < 2 * X.geom_genus:
        out.append(Violation("debarre", "K_{X}^{2}\\geq 2p_{g}(X)", K2, 2 * X.geom_genus))
    if K2 < 2 * q:
        out.append(Violation("debarre", "K_{X}^{2}\\geq 2q(X)", K2, 2 * q))
    if not X.is_curve_product and K2 < 6 * q - 13:
        out.append(Violation("non-product", "K_{X}^{2}\\geq 6q(X)-13", K2, 6 * q - 13))
    for c in X.curves:
        if c.irreducible and c.reduced and X.square(c.cls) > 0:
            kc = X.pair(X.canonical, c.cls)
            # K.C >= 3q/2 - 3, cleared of the denominator
            if 2 * kc < 3 * q - 6:
                out.append(Violation("positive-curve", "K_{X}C\\geq (3/2)q(X)-3", 2 * kc, 3 * q - 6, c.id))
    return out


def _kodaira_of_product(gF: int, gC: int) -> int:
    if gF < 1 or gC < 1:
        raise UnsupportedModel("a rational factor gives kappa = -infinity")
    ones = (gF == 1) + (gC == 1)
    return {2: 0, 1: 1, 0: 2}[ones]


def product_surface(gF: int, gC: int) -> SurfaceModel:
    """F x C with basis f (a fibre F x pt) and c (a section pt x C).

    ``f.c = 1``, both squares vanish and ``K = (2 gC - 2) f + (2 gF - 2) c``.
    The fibre and section are registered as curves ``"f"`` and ``"c"``.
    """
    kappa = _kodaira_of_product(gF, gC)
    K = DivisorClass((2 * gC - 2, 2 * gF - 2))
    return SurfaceModel(
        gram=((0, 1), (1, 0)),
        canonical=K,
        irregularity=gF + gC,
        kodaira_dim=kappa,
        minimal=True,
        geom_genus=gF * gC,
        is_curve_product=True,
        basis_names=("f", "c"),
        curves=(CurveRecord("f", DivisorClass((1, 0))), CurveRecord("c", DivisorClass((0, 1)))),
        product_genera=(gF, gC),
    )


def abelian_surface() -> SurfaceModel:
    """A product of two elliptic curves viewed as an abelian surface."""
    return SurfaceModel(
        gram=((0, 1), (1, 0)),
        canonical=DivisorClass((0, 0)),
        irregularity=2,
        kodaira_dim=0,
        minimal=True,
        geom_genus=1,
        is_curve_product=True,
        basis_names=("f", "c"),
        curves=(CurveRecord("f", DivisorClass((1, 0))), CurveRecord("c", DivisorClass((0, 1)))),
        product_genera=(1, 1),
    )


def append_curve(
    X: SurfaceModel,
    cid: str,
    square: int,
    meets: Mapping[str, int],
    canonical_degree: int | None = None,
) -> SurfaceModel:
    """Adjoin an irreducible curve with prescribed numerics.

    A new basis vector ``t`` orthogonal to the old lattice is added and the
    curve gets class ``v + t`` where ``v`` is solved from ``meets`` (curve id
    -> intersection number) against the registered curves.  ``t^2`` is fixed
    by ``square``; it must come out negative so the Hodge signature survives.
    ``canonical_degree``, when given, sets ``K.C`` through the K-coefficient
    of ``t``.
    """
    ids = list(meets)
    rows = [X.curve(i).cls for i in ids]
    # any integral v with v.C_i = meets[i] will do
    G = [[X.pair(r, DivisorClass.basis(X.rank, j)) for j in range(X.rank)] for r in rows]
    v = _integral_solution(G, [meets[i] for i in ids], X.rank)
    if v is None:
        raise ModelError(f"no integral class meets {dict(meets)} as required")
    v = DivisorClass(v)
    t2 = square - X.square(v)
    if t2 >= 0:
        raise ModelError("adjoined direction would be non-negative")
    n = X.rank
    gram = [list(row) + [0] for row in X.gram] + [[0] * n + [t2]]
    kcoef = 0
    if canonical_degree is not None:
        diff = canonical_degree - X.pair(X.canonical, v)
        if diff % t2:
            raise ModelError("canonical degree not reachable with an integral K")
        kcoef = diff // t2
    K = DivisorClass(X.canonical.coeffs + (kcoef,))
    new = CurveRecord(cid, DivisorClass(v.coeffs + (1,)))
    return replace(
        X,
        gram=tuple(tuple(r) for r in gram),
        canonical=K,
        basis_names=X.basis_names + (f"t_{cid}",),
        curves=tuple(c.extend() for c in X.curves) + (new,),
        h0_declared={},
        is_curve_product=X.is_curve_product,
    )


def _integral_solution(A: list[list[int]], b: list[int], n: int) -> list[int] | None:
    x = solve_exact(A, b)
    if x is None or any(v.denominator != 1 for v in x):
        return None
    return [int(v) for v in x]


def solve_exact(A: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """Rational solution of ``A x = b`` with free variables set to zero."""
    n = len(A[0]) if A else 0
    m = len(A)
    rows = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(m)]
    pivots, r = [], 0
    for col in range(n):
        k = next((i for i in range(r, m) if rows[i][col] != 0), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        p = rows[r][col]
        rows[r] = [x / p for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(all(x == 0 for x in row[:-1]) and row[-1] != 0 for row in rows):
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = rows[i][-1]
    return x


def is_nef_on_registered(X: SurfaceModel, L) -> bool:
    return all(X.pair(L, c.cls) >= 0 for c in X.curves if c.irreducible)


def minus_one_curves(X: SurfaceModel) -> list[CurveRecord]:
    return [
        c for c in X.curves
        if c.irreducible and X.square(c.cls) == -1 and X.pair(X.canonical, c.cls) == -1
    ]


def is_l_minimal(X: SurfaceModel, L) -> bool:
    """``L.E > 0`` for every registered (-1)-curve E."""
    return all(X.pair(L, E.cls) > 0 for E in minus_one_curves(X))
