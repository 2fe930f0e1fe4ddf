"""Random blow-up plans against the oracle, and a planted bug.

Run: python demos/fuzz_corpus.py [seeds]
"""
import sys
from collections import Counter

from qpsurf.oracle import mutant_theta, run_corpus

seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 300

tally = Counter()
for r in run_corpus(seeds=seeds, start=0):
    tally[(r.operation, r.agree)] += 1
for (op, agree), n in sorted(tally.items()):
    print(f"{op:>15}: {n} {'agree' if agree else 'DISAGREE'}")

# shift theta by one on w >= 1: the identity breaks almost immediately
for r in run_corpus(seeds=seeds, theta_fn=mutant_theta, start=0):
    if not r.agree:
        print(f"\nmutant caught at seed {r.seed}: formula {r.formula_value}, oracle {r.oracle_value}")
        break
