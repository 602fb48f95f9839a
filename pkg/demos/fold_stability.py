"""Stability of a map germ two ways: the module criterion on the symplectic
germ, and versality of the generating family it induces.

    python3 demos/fold_stability.py
"""
from reticular.geometry import MapGermSpec, family_from_generating_function, generating_function, stability_criterion_check
from reticular.jet_algebra import parse_poly
from reticular.unfoldings import stability_verdict

SRC = ("Q1", "P1")
MAPS = {
    "rotation (P, -Q)": ("P1", "-Q1"),
    "fold (Q - 3P^2, P)": ("Q1 - 3*P1^2", "P1"),
    "identity": ("Q1", "P1"),
}

for name, (q, p) in MAPS.items():
    S = MapGermSpec("symplectic", 1, {"q1": parse_poly(q, 0, 0, SRC), "p1": parse_poly(p, 0, 0, SRC)})
    H = generating_function(S)
    F = family_from_generating_function(H, r=0, n=1)
    v = stability_verdict(F)
    print(f"{name}:")
    print(f"  generating function H = {H}")
    print(f"  family F = {F.F}   class of F(., 0): {v['class']}")
    print(f"  module criterion: {stability_criterion_check(S, 2)}   family versal: {v['stable']}")
