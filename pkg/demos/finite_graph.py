"""Detection systems on a small graph, from verification to exact minimums.

Run with:  python demos/finite_graph.py
"""

from ftdetect import DetectorSet, Kind, graph_from_edge_list, share, verify
from ftdetect.detection import average_share, density, locating_code
from ftdetect.solver import Mode, SolveRequest, branch_and_bound_min

# Eight vertices, labelled v1..v8 in prose and 0..7 in code.
EDGES = [(1, 2), (2, 3), (2, 4), (2, 6), (1, 4), (3, 4), (4, 8), (5, 6), (6, 7),
         (1, 7), (3, 5), (5, 8), (7, 8)]
g = graph_from_edge_list(8, [(a - 1, b - 1) for a, b in EDGES])

# Put detectors on v2, v4 and v6 and watch the open neighbourhoods.
s = DetectorSet.of(g, Kind.OPEN, [1, 3, 5])
for u in range(g.n):
    code = sorted(f"v{w + 1}" for w in locating_code(s, u))
    print(f"v{u + 1} is seen by {code}")

# Every vertex is seen, so the shares are defined.  They add up to the
# vertex count, so the average share is the reciprocal of the density.
for x in s.vertices:
    print(f"share(v{x + 1}) = {share(s, x)}")
print(f"average share {average_share(s)}, density {density(s)}")

# v1 and v3 are seen by the same pair, so this set does not locate.
verdict = verify(s, 0)
print(f"verdict: {verdict.status}, {verdict.reason} at {verdict.witness}")

# The exact minimums for each kind, plain and with one spare detector.
for kind in Kind:
    for red in (0, 1):
        sol = branch_and_bound_min(SolveRequest(g, kind, red))
        picked = " ".join(f"v{w + 1}" for w in sol.witness)
        print(f"{kind.value:6} redundancy {red}: minimum {sol.size}  ({picked})")

# Decision mode answers "is there one with at most N detectors?".
for size in (4, 5):
    sol = branch_and_bound_min(SolveRequest(g, Kind.OPEN, 0, Mode.DECISION, size))
    print(f"open set with <= {size} detectors: {'yes' if sol.feasible else 'no'}")
