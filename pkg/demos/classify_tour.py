"""Walk through the algebra: codimension, determinacy, classification, unfoldings.

    python3 demos/classify_tour.py
"""
from reticular import classify, codimension, determinacy_bound, parse_poly
from reticular.unfoldings import build_versal, check_versality

GERMS = [
    ("x1^2 + y1^3", 1, 1),          # boundary germ F4 on a half-line
    ("x1*y1 - y1^4", 1, 1),         # C4, minus sign
    ("-x1^3 + x1^5", 1, 0),         # B3 with a removable tail
    ("y1^2*y2 + y2^4 + y3^2", 0, 3),  # D5 after splitting off y3^2
    ("x1*y1", 1, 1),                # infinite codimension
]

for text, r, k in GERMS:
    f = parse_poly(text, r, k)
    rep = codimension(f, "Rplus")
    print(f"{text:28s} R: {str(classify(f, 'R')):10s} K: {str(classify(f, 'K')):10s} codim {rep.codim}")
    if rep.codim == "INFINITE":
        continue
    print(f"{'':28s} quotient basis {rep.basis}, R-determined at degree {determinacy_bound(f, 'R')}")
    F = build_versal(f, "Rplus", prefix="q")
    print(f"{'':28s} miniversal family {F.F}  (versal: {check_versality(F)})")
    if F.F.params:
        G = F.drop_parameter(F.F.params[0])
        print(f"{'':28s} without {F.F.params[0]}: versal {check_versality(G)}")
