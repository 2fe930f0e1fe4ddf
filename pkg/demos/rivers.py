"""River graphs over a blown-up point and the multiplicity identity.

The sum of total-transform multiplicities of the final (-1)-curves can be
read off the river weights alone; the oracle replays the lattice to check.

Run: python demos/rivers.py
"""
from qpsurf import BlowupEvent, BlowupPlan, apply_plan, build_river, m_formula, m_oracle
from qpsurf.cases import crossing_fibres
from qpsurf.graphs import dual_graph_of_state
from qpsurf.oracle import oracle_m

cfg = crossing_fibres()
plan = BlowupPlan(cfg, (
    BlowupEvent("1", base_point="x"),
    BlowupEvent("2", parent="1", passing={"f": 1}),
    BlowupEvent("3", parent="1", passing={"c": 1}),
    BlowupEvent("4", parent="3", satellite="1"),
))
state = apply_plan(plan)
river = build_river(state, "x")

print(f"{'vertex':>8} {'e':>3} {'u':>3} {'w':>3} {'theta':>5}")
for row in river.dump():
    print(f"{str(tuple(row['vertex'])):>8} {row['e']:>3} {row['u']:>3} {row['w']:>3} {row['theta']:>5}")

print(f"\nM from weights: {m_formula(river)}")
print(f"M from state:   {m_oracle(state)}")
print(f"M from replay:  {oracle_m(plan)}")

# the dual graph of the reduced total transform, ready for graphviz
print()
print(dual_graph_of_state(state).to_dot("total_transform"))
