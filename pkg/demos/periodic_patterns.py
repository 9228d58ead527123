"""Periodic detector patterns on the infinite king's grid.

A pattern is a set of residues in a fundamental rectangle, repeated over
the whole plane.  Run with:  python demos/periodic_patterns.py
"""

from ftdetect import Kind, builtin_patterns, density, lift_to_torus, pattern_search, verify
from ftdetect import verify_infinite
from ftdetect.periodic import faithful_copies, isomorphic

for name, p in builtin_patterns().items():
    verdicts = {k.value: verify_infinite(p, k, 1).status for k in Kind}
    print(f"{name}: {p.period_rows}x{p.period_cols}, density {density(p)}, {verdicts}")
    print(p.to_ascii())

# The infinite check only looks at pairs within distance 2.  Lifting to a
# torus with sides of at least 5 gives the same answer on a finite graph.
a = builtin_patterns()["pattern-a"]
ds = lift_to_torus(a, *faithful_copies(a))
print(f"pattern-a on a {ds.graph.grid} torus: {len(ds)} detectors, "
      f"{verify(ds, 1).status}")

# Exhaustive search finds every minimum pattern of a given period.
found = pattern_search(3, 6, Kind.CLOSED, 1)
print(f"3x6 closed: {len(found)} minimum patterns at density {density(found[0])}")
print("pattern-a among them:", any(isomorphic(p, a) for p in found))

# Nothing beats 1/3 on small periods, and nothing comes close to the floors.
for kind in Kind:
    best = min((density(pattern_search(r, c, kind, 1)[0]), (r, c))
               for r in range(1, 5) for c in range(1, 5))
    print(f"{kind.value}: best density over periods up to 4x4 is {best[0]} at {best[1]}")
