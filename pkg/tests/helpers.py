"""Shared builders for configuration corpora."""
import random

from qpsurf.configuration import Configuration
from qpsurf.lattice import CurveRecord, product_surface


def fibre_configuration(gF, gC, f_mults, c_mults):
    """Distinct fibres of both rulings with given multiplicities, all points transverse."""
    X = product_surface(gF, gC)
    curves = [CurveRecord(f"f{i}", X.cls(f=1)) for i in range(len(f_mults))]
    curves += [CurveRecord(f"c{i}", X.cls(c=1)) for i in range(len(c_mults))]
    X = X.with_curves(*curves)
    mults = {f"f{i}": r for i, r in enumerate(f_mults)}
    mults.update({f"c{i}": r for i, r in enumerate(c_mults)})
    return Configuration.transverse(X, mults)


def random_fibre_configuration(rng: random.Random, positive=False):
    lo = 2 if positive else 1
    gF, gC = rng.randint(lo, 6), rng.randint(lo, 6)
    f_mults = [rng.randint(1, 4) for _ in range(rng.randint(1, 3))]
    c_mults = [rng.randint(1, 4) for _ in range(rng.randint(1, 3))]
    if positive and sum(f_mults) + sum(c_mults) == 2:
        f_mults[0] += 1
    return fibre_configuration(gF, gC, f_mults, c_mults)


def random_product_configuration(rng: random.Random):
    """Components among f, c and irreducible classes a f + b c with a, b >= 1."""
    X = product_surface(rng.randint(1, 4), rng.randint(1, 4))
    curves, mults = [], {}
    for i in range(rng.randint(1, 4)):
        a, b = rng.choice([(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (rng.randint(0, 3), rng.randint(1, 3))])
        cid = f"C{i}"
        curves.append(CurveRecord(cid, X.cls(f=a, c=b)))
        mults[cid] = rng.randint(1, 3)
    X = X.with_curves(*curves)
    return Configuration.transverse(X, mults)
