"""Where K.L meets its lower bound: products of curves and abelian surfaces.

Run: python demos/equality_families.py
"""
from qpsurf import Declarations, abelian_surface, applicable_theorem, product_surface, sectional_genus

POLARISED = Declarations(nef=True, big=True)

# An abelian surface: K is trivial and q = 2, so K.L = 0 = 2q - 4 for every ample L.
A = abelian_surface()
for coeffs in [(1, 1), (2, 1), (3, 2)]:
    L = A.cls(f=coeffs[0], c=coeffs[1])
    r = applicable_theorem(A, L, POLARISED)
    print(f"abelian, L = {coeffs}: K.L = {r.bound_lhs}, bound {r.bound_rhs}, case {r.equality_case.name}")

# Elliptic curve times a curve of genus gC: L = c + (m+1) f sits on the bound
# and has sectional genus q + m.
print()
for gC in (2, 3, 5):
    X = product_surface(1, gC)
    for m in (0, 2):
        L = X.cls(c=1, f=m + 1)
        r = applicable_theorem(X, L, POLARISED)
        print(f"E x C_{gC}, m = {m}: K.L = {r.bound_lhs} = 2q - 4 = {r.bound_rhs}, "
              f"g(L) = {sectional_genus(X, L)}, q + m = {X.irregularity + m}")

# Genus 2 times genus gC with a declared pencil: the bound improves to 2q - 2
# and L = c + 2f reaches it.
print()
for gC in (2, 4, 7):
    X = product_surface(2, gC)
    L = X.cls(c=1, f=2)
    r = applicable_theorem(X, L, Declarations(nef=True, big=True, h0=2))
    print(f"C_2 x C_{gC}: [{r.theorem}] K.L = {r.bound_lhs}, 2q - 2 = {r.bound_rhs}, L^2 = {X.square(L)}")

# Without that pencil the general-type dispatcher refuses rather than guesses.
X = product_surface(2, 2)
try:
    applicable_theorem(X, X.cls(c=1, f=2), POLARISED)
except Exception as exc:
    print(f"\nno pencil declared: {exc}")
