"""Exact minimums on king's tori, with a SAT export for cross-checking.

Run with:  python demos/torus_solver.py
"""

from fractions import Fraction

from ftdetect import DetectorSet, Kind, king_torus, verify
from ftdetect.solver import SolveRequest, branch_and_bound_min, to_dimacs

for rows, cols in [(5, 5), (6, 6)]:
    g = king_torus(rows, cols)
    for kind in Kind:
        sol = branch_and_bound_min(SolveRequest(g, kind, 1))
        ok = verify(DetectorSet.of(g, kind, sol.witness), 1)
        print(f"{rows}x{cols} {kind.value:6}: {sol.size} detectors "
              f"(density {Fraction(sol.size, g.n)}), witness {ok.status}, {sol.nodes} nodes")

# The same instance as CNF: any SAT solver can confirm that 8 detectors
# are not enough on the 5x5 torus.
text = to_dimacs(king_torus(5, 5), Kind.OPEN, 1, size=8)
print(text.splitlines()[2])
