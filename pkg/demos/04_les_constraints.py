"""Long-exact-sequence constraint solving for the characteristic fibers.

The solver propagates only what exactness implies (rank additivity,
order counting, subgroup/quotient/exponent bounds, split extensions with
free quotient), so its conclusions are certificates, not guesses.

Run with:  python demos/04_les_constraints.py
"""

from a1bordism import les

for key in ("gm", "kt-minus", "kt-plus"):
    problem = les.FIGURES[key]()
    sol = les.solve_les(problem)
    print(f"== {problem.name}")
    for s in sol.slots:
        if not s.label.startswith("pi"):
            continue
        if s.determined is not None:
            print(f"   {s.label} = {s.determined}")
        else:
            extra = f"  candidates: {', '.join(s.candidates)}" if s.candidates else ""
            print(f"   {s.label}: order {s.order}{extra}")
    print()

# The solver also detects impossible sequences: rank counting is the
# arithmetic form of tensoring with Q.
bad = les.solve_les(les.gm_nonexact_problem())
print("previously published sequence:", bad.contradiction)

# Problems can come from text too:
text = """
LES quotient-demo
SLOT 0 A = 0
SLOT 1 B = Z/8
SLOT 2 X = ?
SLOT 3 C = Z/2
SLOT 4 D = 0
"""
sol = les.solve_les(les.parse_les(text))
x = sol.slot("X")
print(f"0 -> Z/8 -> X -> Z/2 -> 0 gives |X| = {x.order}, "
      f"candidates {', '.join(x.candidates)}")
