from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qpsurf.lattice import (
    CurveRecord, DivisorClass, ModelError, PreconditionError, SurfaceModel, UnsupportedModel,
    abelian_surface, append_curve, arithmetic_genus, hodge_index_check, inertia,
    is_l_minimal, is_nef_on_registered, is_negative_semidefinite, is_negative_semidefinite_matrix,
    pairing, product_surface, sectional_genus, solve_exact, validate_surface,
)


def test_product_numerics():
    X = product_surface(2, 3)
    f, c = X.cls(f=1), X.cls(c=1)
    assert X.square(f) == 0 and X.pair(f, c) == 1
    # K = (2gC - 2) f + (2gF - 2) c
    assert X.pair(X.canonical, f) == 2 and X.pair(X.canonical, c) == 4
    assert X.K2() == 2 * 2 * 4
    assert X.irregularity == 5 and X.geom_genus == 6 and X.kodaira_dim == 2
    assert sectional_genus(X, f) == 2 and sectional_genus(X, c) == 3


def test_kodaira_of_products():
    assert product_surface(1, 4).kodaira_dim == 1
    assert product_surface(3, 1).kodaira_dim == 1
    assert product_surface(2, 2).kodaira_dim == 2
    with pytest.raises(UnsupportedModel):
        product_surface(0, 3)


def test_abelian():
    A = abelian_surface()
    assert A.canonical.is_zero() and A.irregularity == 2 and A.kodaira_dim == 0
    assert validate_surface(A) == []


def test_sectional_genus_of_c_plus_two_f():
    X = product_surface(1, 3)
    L = X.cls(c=1, f=2)
    assert pairing(X, X.canonical, L) == 4
    assert X.square(L) == 4
    assert sectional_genus(X, L) == 5


def test_inertia_examples():
    assert inertia([[0, 1], [1, 0]]) == (1, 1, 0)
    assert inertia([[-2, 1], [1, -2]]) == (0, 2, 0)
    assert inertia([[0, 0], [0, 0]]) == (0, 0, 2)
    assert inertia([[-1]]) == (0, 1, 0)
    assert inertia([[-1, 1], [1, -1]]) == (0, 1, 1)


def test_semidefinite_examples():
    assert not is_negative_semidefinite_matrix([[0, 1], [1, 0]])
    assert is_negative_semidefinite_matrix([[-2, 1], [1, -2]])
    assert is_negative_semidefinite_matrix([[0]])
    # A_3 chain of (-2)-curves and the affine D_4 (only semidefinite)
    assert is_negative_semidefinite_matrix([[-2, 1, 0], [1, -2, 1], [0, 1, -2]])
    d4 = [[-2, 1, 1, 1, 1]] + [[1] + [(-2 if i == j else 0) for j in range(4)] for i in range(4)]
    assert inertia(d4) == (0, 4, 1)


def test_semidefinite_on_curves():
    X = product_surface(2, 2)
    assert is_negative_semidefinite(X, ["f"])
    assert not is_negative_semidefinite(X, ["f", "c"])


def test_parity_violation_names_class():
    with pytest.raises(ModelError, match="parity violation.*D = c"):
        SurfaceModel(gram=((0, 1), (1, 0)), canonical=DivisorClass((1, 0)), irregularity=1,
                     kodaira_dim=2, basis_names=("f", "c"))


@pytest.mark.parametrize("kwargs", [
    dict(gram=((0, 1), (2, 0)), canonical=DivisorClass((2, 2)), irregularity=1, kodaira_dim=2),
    dict(gram=((0, 1), (1, 0)), canonical=DivisorClass((0, 0)), irregularity=3, kodaira_dim=0),
    dict(gram=((0, 1), (1, 0)), canonical=DivisorClass((2, 2)), irregularity=1, kodaira_dim=3),
    dict(gram=((0, 1), (1, 0)), canonical=DivisorClass((2, 2, 0)), irregularity=1, kodaira_dim=2),
    dict(gram=((0, 1), (1,)), canonical=DivisorClass((2, 2)), irregularity=1, kodaira_dim=2),
])
def test_malformed_models_rejected(kwargs):
    with pytest.raises(ValueError):
        SurfaceModel(**kwargs)


def test_non_nef_canonical_on_minimal_model_rejected():
    # K.f < 0 for a registered curve
    with pytest.raises(ModelError):
        SurfaceModel(gram=((0, 1), (1, 0)), canonical=DivisorClass((2, -2)), irregularity=1,
                     kodaira_dim=1, curves=(CurveRecord("f", DivisorClass((1, 0))),))


def test_hodge_index_violation_reported():
    X = SurfaceModel(gram=((2, 0), (0, 2)), canonical=DivisorClass((2, 2)), irregularity=0, kodaira_dim=2)
    rules = {v.rule for v in validate_surface(X)}
    assert "hodge-index" in rules


def test_small_k_squared_flagged():
    X = SurfaceModel(gram=((0, 1), (1, 0)), canonical=DivisorClass((2, 2)), irregularity=4, kodaira_dim=2)
    v = [v for v in validate_surface(X) if v.inequality == "K_{X}^{2}\\geq 6q(X)-13"]
    assert len(v) == 1 and (v[0].lhs, v[0].rhs) == (8, 11)
    # products are exempt from that bound
    assert validate_surface(product_surface(2, 2)) == []


def test_debarre_bound_needs_pg():
    X = SurfaceModel(gram=((0, 1), (1, 0)), canonical=DivisorClass((2, 2)), irregularity=1,
                     kodaira_dim=2, geom_genus=5)
    assert "K_{X}^{2}\\geq 2p_{g}(X)" in {v.inequality for v in validate_surface(X)}


def test_curve_canonical_degree_bound():
    # an irreducible positive curve with K.C = 0 and q = 4 breaks 2K.C >= 3q - 6
    X = product_surface(2, 2)
    X = append_curve(X, "B", 2, {"f": 1, "c": 2}, canonical_degree=0)
    assert any(v.subject == "B" for v in validate_surface(X))


def test_hodge_index_check():
    X = product_surface(2, 2)
    L = X.cls(f=1, c=1)
    for a in range(-3, 4):
        for b in range(-3, 4):
            assert hodge_index_check(X, X.cls(f=a, c=b), L)
    with pytest.raises(PreconditionError):
        hodge_index_check(X, L, X.cls(f=1))


def test_append_curve():
    X = product_surface(2, 2)
    X = X.with_curves(CurveRecord("C", X.cls(f=1, c=1)))
    Y = append_curve(X, "T", -2, {"C": 1}, canonical_degree=0)
    T, C = Y.curve("T").cls, Y.curve("C").cls
    assert Y.rank == 3
    assert Y.square(T) == -2 and Y.pair(T, C) == 1 and Y.pair(Y.canonical, T) == 0
    assert arithmetic_genus(Y, Y.curve("T")) == 0
    with pytest.raises(ModelError):
        append_curve(X, "P", 5, {"C": 1})


def test_solve_exact():
    assert solve_exact([[2, 1], [1, 1]], [3, 2]) == [Fraction(1), Fraction(1)]
    assert solve_exact([[1, 1], [2, 2]], [1, 3]) is None
    assert solve_exact([[2, 0]], [1]) == [Fraction(1, 2), Fraction(0)]


def test_nef_and_l_minimal_on_products():
    X = product_surface(2, 2)
    assert is_nef_on_registered(X, X.cls(f=1, c=1))
    assert not is_nef_on_registered(X, X.cls(f=-1, c=2))
    assert is_l_minimal(X, X.cls(f=1, c=1))


def test_class_arithmetic():
    a, b = DivisorClass((1, 2)), DivisorClass((3, -1))
    assert a + b == DivisorClass((4, 1)) and a - b == DivisorClass((-2, 3))
    assert a * 3 == DivisorClass((3, 6)) and -a == DivisorClass((-1, -2))
    assert a.extend(2, 5) == DivisorClass((1, 2, 5, 0))
    with pytest.raises(ValueError):
        a + DivisorClass((1, 2, 3))


genera = st.integers(1, 8)
coef = st.integers(-6, 6)


@settings(max_examples=200, deadline=None)
@given(genera, genera, coef, coef)
def test_parity_holds_for_every_class(gF, gC, a, b):
    X = product_surface(gF, gC)
    D = X.cls(f=a, c=b)
    assert (X.square(D) + X.pair(X.canonical, D)) % 2 == 0


@settings(max_examples=200, deadline=None)
@given(genera, genera, coef, coef, st.integers(1, 5), st.integers(1, 5))
def test_hodge_index_inequality(gF, gC, a, b, x, y):
    X = product_surface(gF, gC)
    D, L = X.cls(f=a, c=b), X.cls(f=x, c=y)
    assert X.pair(D, L) ** 2 >= X.square(D) * X.square(L)


@settings(max_examples=100, deadline=None)
@given(genera, genera, coef, coef, coef, coef)
def test_genus_of_sum(gF, gC, a, b, x, y):
    # g(D + E) = g(D) + g(E) + D.E - 1
    X = product_surface(gF, gC)
    D, E = X.cls(f=a, c=b), X.cls(f=x, c=y)
    assert sectional_genus(X, D + E) == sectional_genus(X, D) + sectional_genus(X, E) + X.pair(D, E) - 1


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inertia_counts_sum_to_rank(rows):
    n = len(rows)
    sym = [[rows[i][j] + rows[j][i] for j in range(n)] for i in range(n)]
    p, m, z = inertia(sym)
    assert p + m + z == n
    # negating swaps positive and negative parts
    assert inertia([[-x for x in r] for r in sym]) == (m, p, z)
