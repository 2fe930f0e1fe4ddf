"""Two curves of square zero meeting at one bad point.

Blowing up the point separates them; the multiplicities (b, d) seen at the
centre decide which equality case the pair falls into.

Run: python demos/tangential_pairs.py
"""
from qpsurf import BlowupPlan, apply_plan, applicable_theorem, classify_equality, separation_data, validate_snc
from qpsurf.bounds import pair_inequality
from qpsurf.cases import tangential_pair

for b, d in [(1, 1), (1, 2), (2, 2)]:
    plan = tangential_pair(b, d)
    X, cfg = plan.base.surface, plan.base
    state = apply_plan(plan)
    r = applicable_theorem(X, cfg)
    case = classify_equality(X, cfg, plan=plan)
    print(f"(b, d) = ({b}, {d}), C1.C2 = {b * d}")
    print(f"  snc before: {validate_snc(BlowupPlan(cfg))}, after: {validate_snc(state)}")
    print(f"  separation data {separation_data(plan, 'C1', 'C2')}, E-multiplicity {state.exc_mult_in_total['1']}")
    print(f"  [{r.theorem}] K.D = {r.bound_lhs}, bound {r.bound_rhs}, margin {r.margin}")
    print(f"  equality case {case.name}, m = {case.details.get('m')}")
    print(f"  pair inequality value {pair_inequality([(b, d)]).value} (never above 2)")
