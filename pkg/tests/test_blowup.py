import pytest
from hypothesis import given, settings, strategies as st

from qpsurf.blowup import (
    BlowupEvent, BlowupPlan, apply_plan, blow_up, genus_drop, residual_between, separation_data,
    validate_snc, TransformState,
)
from qpsurf.cases import crossing_fibres, tangential_pair
from qpsurf.configuration import Configuration, PointCluster
from qpsurf.lattice import CurveRecord, ModelError, PreconditionError, product_surface, sectional_genus
from qpsurf.oracle import oracle_genus, oracle_strict_genus, random_plan


def tangent_pair():
    """c and c + 2f on the genus (2, 2) product, tangent at one point."""
    X = product_surface(2, 2).with_curves(CurveRecord("C2", product_surface(2, 2).cls(f=2, c=1)))
    return Configuration(
        X, ((X.curve("c"), 1), (X.curve("C2"), 1)),
        (PointCluster("y", {"c": 1, "C2": 1}, {("c", "C2"): 2}),),
    )


def test_transverse_splits_points():
    cfg = Configuration.transverse(product_surface(2, 2), {"f": 2, "c": 1})
    assert len(cfg.point_clusters) == 1
    assert cfg.divisor == cfg.surface.cls(f=2, c=1)
    assert cfg.multiplicity("f") == 2 and cfg.reduced == cfg.surface.cls(f=1, c=1)


def test_cluster_sum_must_match_lattice():
    X = product_surface(2, 2)
    with pytest.raises(ModelError):
        Configuration(X, ((X.curve("f"), 1), (X.curve("c"), 1)),
                      (PointCluster("x", {"f": 1, "c": 1}, {("f", "c"): 2}),))


def test_local_number_below_mult_product():
    with pytest.raises(ModelError):
        PointCluster("x", {"a": 2, "b": 2}, {("a", "b"): 3})


def test_single_blowup_numerics():
    state = apply_plan(BlowupPlan(crossing_fibres(), (BlowupEvent("1", base_point="x"),)))
    X = state.surface
    E = state.exc_classes["1"]
    assert X.square(E) == -1 and X.pair(X.canonical, E) == -1
    assert X.square(state.strict_classes["f"]) == -1
    assert X.pair(state.strict_classes["f"], state.strict_classes["c"]) == 0
    assert state.exc_mult_in_total == {"1": 2}
    assert not X.minimal and X.K2() == 8 - 1
    # pullback keeps numerics
    D = crossing_fibres().divisor
    assert X.square(state.pullback(D)) == 2
    assert sectional_genus(X, state.pullback(D)) == sectional_genus(crossing_fibres().surface, D)


def test_tangent_pair_separation():
    cfg = tangent_pair()
    assert not validate_snc(TransformState.initial(cfg))
    plan = BlowupPlan(cfg, (BlowupEvent("1", base_point="y"),
                            BlowupEvent("2", parent="1", passing={"c": 1, "C2": 1})))
    state = apply_plan(plan)
    assert validate_snc(state)
    assert state.exc_mult_in_total == {"1": 2, "2": 4}
    assert state.red_mult == {"1": 2, "2": 3}
    assert separation_data(plan, "c", "C2") == [(1, 1), (1, 1)]
    assert state.is_minus_one == {"1": False, "2": True}
    assert state.surface.square(state.exc_classes["1"]) == -2


def test_half_separated_tangent_pair_is_not_snc():
    plan = BlowupPlan(tangent_pair(), (BlowupEvent("1", base_point="y"),))
    state = apply_plan(plan)
    assert residual_between(state, "c", "C2") == 1
    assert not validate_snc(state)
    with pytest.raises(PreconditionError):
        separation_data(plan, "c", "C2")


def test_tangential_cases_separate_in_one_step():
    for b, d in [(1, 2), (2, 2)]:
        plan = tangential_pair(b, d)
        assert separation_data(plan, "C1", "C2") == [(b, d)]
        assert validate_snc(apply_plan(plan))


def test_genus_drop():
    assert genus_drop(5, 1) == 5 and genus_drop(5, 2) == 4 and genus_drop(5, 3) == 2
    plan = tangential_pair(1, 2)
    before = sectional_genus(plan.base.surface, plan.base.surface.curve("C2").cls)
    assert oracle_strict_genus(plan, "C2") == before - 1


def test_satellite_centre():
    # the node of f + c, then the point where E1 meets the strict transform of c,
    # then the satellite point E1 cap E2
    cfg = crossing_fibres()
    plan = BlowupPlan(cfg, (
        BlowupEvent("1", base_point="x"),
        BlowupEvent("2", parent="1", passing={"c": 1}),
        BlowupEvent("3", parent="2", satellite="1"),
    ))
    state = apply_plan(plan)
    assert state.exc_mult_in_total == {"1": 2, "2": 3, "3": 5}
    assert state.surface.square(state.exc_classes["1"]) == -3


@pytest.mark.parametrize("events, message", [
    ((BlowupEvent("1", base_point="x"), BlowupEvent("2", base_point="x")), "blown up twice"),
    ((BlowupEvent("2", parent="1"),), "before it happens"),
    ((BlowupEvent("1", base_point="x"), BlowupEvent("1", parent="1")), "duplicate"),
])
def test_bad_plans(events, message):
    with pytest.raises(ModelError, match=message):
        BlowupPlan(crossing_fibres(), events)


def test_contact_budget_enforced():
    cfg = crossing_fibres()
    state = apply_plan(BlowupPlan(cfg, (BlowupEvent("1", base_point="x"),)))
    with pytest.raises(ModelError, match="contact"):
        blow_up(state, BlowupEvent("2", parent="1", passing={"f": 2}))
    # f and c no longer meet, so no point of E1 carries both
    with pytest.raises(ModelError):
        blow_up(state, BlowupEvent("2", parent="1", passing={"f": 1, "c": 1}))


def test_satellite_must_meet():
    cfg = crossing_fibres()
    state = apply_plan(BlowupPlan(cfg, (
        BlowupEvent("1", base_point="x"),
        BlowupEvent("2", parent="1", passing={"c": 1}),
        BlowupEvent("3", parent="2", satellite="1"),
    )))
    # E1 and E2 were separated by the third blow-up
    with pytest.raises(ModelError, match="do not meet"):
        blow_up(state, BlowupEvent("4", parent="2", satellite="1"))


def test_event_needs_one_anchor():
    with pytest.raises(ModelError):
        BlowupEvent("1")
    with pytest.raises(ModelError):
        BlowupEvent("1", base_point="x", parent="0")
    with pytest.raises(ModelError):
        BlowupEvent("1", base_point="x", satellite="0")


def test_unknown_point_with_single_curve():
    cfg = crossing_fibres()
    state = apply_plan(BlowupPlan(cfg, (BlowupEvent("1", base_point="p", passing={"f": 1}),)))
    assert state.exc_mult_in_total == {"1": 1}
    with pytest.raises(ModelError):
        apply_plan(BlowupPlan(cfg, (BlowupEvent("1", base_point="p", passing={"f": 1, "c": 1}),)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_pullback_invariance_on_random_plans(seed):
    plan = random_plan(seed)
    X = plan.base.surface
    assert oracle_genus(plan) == sectional_genus(X, plan.base.divisor)
    state = apply_plan(plan)
    # K^2 drops by one per blow-up, every exceptional class is effective of negative square
    assert state.surface.K2() == X.K2() - len(plan.events)
    assert all(state.surface.square(v) < 0 for v in state.exc_classes.values())
    # reduced multiplicity never exceeds the E-multiplicity
    assert all(state.red_mult[k] <= state.exc_mult_in_total[k] for k in state.event_ids)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_strict_genus_drops_by_multiplicities(seed):
    plan = random_plan(seed)
    state = apply_plan(plan)
    X = plan.base.surface
    for c, _ in plan.base.components:
        g = sectional_genus(X, c.cls)
        for ev in state.events:
            g = genus_drop(g, ev.passing.get(c.id, 0))
        assert oracle_strict_genus(plan, c.id) == g
