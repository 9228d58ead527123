"""Certifying a density floor by exhausting every 5x5 window.

Each detector's share depends only on the 5x5 window around it, so the
largest share over all locally feasible windows bounds the average share
of any fault-tolerant system.  The density is at least its reciprocal.
This takes about half a minute per kind.  Run with:
    python demos/share_bound.py
"""

from fractions import Fraction

from ftdetect import Kind, certified_max_share, classify_high_share, lemma_bound

# The counting lemma: a cells that all see the same d detectors, with
# codes k apart, carry at most this much share.
print("lemma_bound(4, 2, 2) =", lemma_bound(4, 2, 2))

for kind in Kind:
    cert = certified_max_share(kind, workers=4)
    print(cert.render(limit=1))

# Open windows above 10/3 are rare.  Each has two adjacent detectors whose
# own share is at most 13/4, which lets the excess be averaged away.
report = classify_high_share(Kind.OPEN, Fraction(10, 3), workers=4)
values = ", ".join(str(x) for x in sorted(report.values))
print(f"open windows above 10/3: {len(report.entries)}, values {values}")
print("all can be averaged:", report.all_ok)
