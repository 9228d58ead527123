import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from ftdetect.detection import share
from ftdetect.graph import Kind
from ftdetect.periodic import builtin_patterns, faithful_copies, lift_to_torus, verify_infinite
from ftdetect.share_bound import (
    CENTER_BIT,
    CORE,
    DIHEDRAL,
    SHARE_SCALE,
    CoreConstraint,
    Patch,
    bit,
    certified_max_share,
    classify_high_share,
    counter_to_mask,
    enumerate_chunk,
    enumerate_patches,
    lemma_bound,
    mask_to_counter,
    patch_is_feasible,
    region_mask,
    summarize,
)
from oracles import lemma_oracle, realizable_max


# --- lemma bound -------------------------------------------------------------

@pytest.mark.parametrize("k", range(4))
def test_lemma_matches_oracle(k):
    for a in range(1, 7):
        for d in range(1, 7):
            assert lemma_bound(a, d, k) == lemma_oracle(a, d, k), (a, d, k)
            assert realizable_max(a, d, k) <= lemma_bound(a, d, k)


def test_lemma_sample_values():
    assert lemma_bound(4, 2, 2) == Fraction(4, 3)
    assert lemma_bound(3, 2, 2) == 1
    assert lemma_bound(2, 1, 1) == Fraction(3, 2)


def test_lemma_rejects_bad_arguments():
    for args in [(0, 1, 1), (1, 0, 1), (1, 1, -1)]:
        with pytest.raises(ValueError):
            lemma_bound(*args)


# --- window encoding ----------------------------------------------------------

def test_counter_mask_round_trip():
    ks = np.arange(0, 1 << 24, 9973, dtype=np.uint32)
    ms = counter_to_mask(ks)
    assert all(m & CENTER_BIT for m in ms.tolist())
    assert [mask_to_counter(m) for m in ms.tolist()] == ks.tolist()
    assert len(set(ms.tolist())) == len(ks)


def test_patch_ascii_and_dom():
    p = Patch.from_ascii("X....\n.....\n..X..\n...X.\n....X")
    assert Patch.from_ascii(p.to_ascii()) == p
    assert p.dom(2, 2, Kind.OPEN) == 1
    assert p.dom(2, 2, Kind.CLOSED) == 2
    assert p.dom(3, 3, Kind.OPEN) == 2
    with pytest.raises(ValueError):
        Patch(0)


def test_constraint_parse():
    c = CoreConstraint.parse("?X?/?X?/-??")
    assert c.require == bit(1, 2) | CENTER_BIT
    assert c.forbid == bit(3, 1)
    assert str(c) == "?X?/?X?/-??"
    with pytest.raises(ValueError):
        CoreConstraint.parse("???/?-?/???")
    with pytest.raises(ValueError):
        CoreConstraint.parse("??/??")


# --- completeness against the scalar reference -----------------------------------

OUTSIDE = [(4, c) for c in range(5)] + [(r, 4) for r in range(4)]
INSIDE = [(r, c) for r in range(4) for c in range(4) if (r, c) != (2, 2)]


@pytest.mark.parametrize("kind", list(Kind))
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_vector_enumerator_matches_scalar_on_subwindow(kind, seed):
    # fix the 9 cells outside the top-left 4x4 block, leave 15 cells free
    rng = random.Random(seed)
    on = [cell for cell in OUTSIDE if rng.random() < 0.5]
    off = [cell for cell in OUTSIDE if cell not in on]
    con = CoreConstraint(sum(bit(*c) for c in on), sum(bit(*c) for c in off))
    got = {p.mask: s for p, s in enumerate_patches(kind, con)}
    want = {}
    base = CENTER_BIT | con.require
    for choice in range(1 << len(INSIDE)):
        m = base | sum(bit(*INSIDE[i]) for i in range(len(INSIDE)) if choice >> i & 1)
        p = Patch(m)
        if patch_is_feasible(p, kind):
            want[m] = p.share(kind)
    assert got == want


def test_enumerate_chunk_shares_are_exact():
    masks, num = enumerate_chunk(Kind.OPEN, 37)
    rng = random.Random(5)
    for i in rng.sample(range(len(masks)), 300):
        p = Patch(int(masks[i]))
        assert patch_is_feasible(p, Kind.OPEN)
        assert Fraction(int(num[i]), SHARE_SCALE) == p.share(Kind.OPEN)


# --- symmetry -----------------------------------------------------------------

def test_dihedral_group():
    cells = [(r, c) for r in range(-2, 3) for c in range(-2, 3)]
    images = {tuple(op(r, c) for r, c in cells) for op in DIHEDRAL}
    assert len(images) == 8


@pytest.mark.parametrize("kind", list(Kind))
def test_symmetry_closure_sampled(kind):
    rng = random.Random(11)
    for chunk in rng.sample(range(64), 3):
        masks, _ = enumerate_chunk(kind, chunk)
        for i in rng.sample(range(len(masks)), 100):
            p = Patch(int(masks[i]))
            for q in p.orbit():
                assert patch_is_feasible(q, kind)
                assert q.share(kind) == p.share(kind)


# --- full enumeration -----------------------------------------------------------

@pytest.mark.parametrize("kind", list(Kind))
def test_top_windows_closed_under_symmetry(kind):
    s = summarize(kind)
    for num, masks in s.top.items():
        ms = set(masks)
        for m in masks:
            assert {q.mask for q in Patch(m).orbit()} <= ms
        assert Fraction(num, SHARE_SCALE) > Fraction(10, 3)


def test_open_certificate():
    cert = certified_max_share(Kind.OPEN)
    assert cert.max_share == Fraction(7, 2)
    assert cert.density_bound == Fraction(2, 7)
    assert cert.feasible == 12_403_319
    assert cert.argmax_count == 16
    assert len(cert.argmax_classes) == 3


def test_closed_certificate():
    cert = certified_max_share(Kind.CLOSED)
    assert cert.max_share == Fraction(7, 2)
    assert cert.max_share <= Fraction(11, 3)
    assert cert.density_bound == Fraction(2, 7)
    assert cert.feasible == 6_689_971
    assert cert.argmax_count == 4
    assert len(cert.argmax_classes) == 1


def test_closed_shares_above_threshold():
    assert summarize(Kind.CLOSED).shares_above(Fraction(10, 3)) == {
        Fraction(95, 28): 4, Fraction(41, 12): 12, Fraction(69, 20): 4, Fraction(7, 2): 4}


def test_open_high_share_report():
    rep = classify_high_share(Kind.OPEN)
    assert rep.values == {Fraction(69, 20), Fraction(7, 2)}
    assert len(rep.entries) == 24
    assert len(rep.classes()) == 4
    assert rep.all_ok
    assert not classify_high_share(Kind.OPEN, Fraction(7, 2)).entries


def test_class_maxima():
    s = summarize(Kind.OPEN)
    assert s.class_max([(0, 1)]) == Fraction(13, 4)
    assert s.class_max([(-1, 0)]) == Fraction(13, 4)
    assert s.class_max([(-1, 1)]) == Fraction(7, 2)
    # adding required neighbours can only shrink the class
    assert s.class_max([(0, 1), (0, -1)]) <= s.class_max([(0, 1)])


def test_constrained_certificate():
    cert = certified_max_share(Kind.OPEN, "???/?XX/???")
    assert cert.max_share == Fraction(13, 4)
    assert str(cert.constraint) == "???/?XX/???"
    # an open centre with no adjacent detector is never dominated
    with pytest.raises(ValueError):
        certified_max_share(Kind.OPEN, "---/-X-/---")


def test_workers_identical():
    one = certified_max_share(Kind.CLOSED, "?X?/???/???")
    two = certified_max_share(Kind.CLOSED, "?X?/???/???", workers=2)
    assert one.to_json() == two.to_json()
    assert one.render() == two.render()


@pytest.mark.parametrize("kind", list(Kind))
def test_against_scalar_oracle(kind):
    from patch_oracle import sweep

    feasible, best, above = sweep(kind is Kind.CLOSED, 10 * SHARE_SCALE // 3)
    s = summarize(kind)
    assert feasible == s.feasible
    assert best == max(s.histogram)
    assert above == {n: c for n, c in s.histogram.items() if n > 10 * SHARE_SCALE // 3}


# --- soundness on known patterns ---------------------------------------------------

@pytest.mark.parametrize("name", sorted(builtin_patterns()))
@pytest.mark.parametrize("kind", list(Kind))
def test_windows_of_valid_patterns_are_feasible(name, kind):
    p = builtin_patterns()[name]
    if not verify_infinite(p, kind, 1):
        return
    ds = lift_to_torus(p, *faithful_copies(p), kind)
    cols = ds.graph.grid[1]
    for r, c in p.detectors:
        m = 0
        for dr in range(-2, 3):
            for dc in range(-2, 3):
                if p.is_detector(r + dr, c + dc):
                    m |= bit(2 + dr, 2 + dc)
        patch = Patch(m)
        assert patch_is_feasible(patch, kind)
        assert patch.share(kind) == share(ds, r * cols + c)
        assert patch.share(kind) <= certified_max_share(kind).max_share


# --- lemma against real windows --------------------------------------------------------

@pytest.mark.parametrize("kind", list(Kind))
def test_lemma_holds_on_feasible_windows(kind):
    # D = {centre, w}: every core cell seeing both has partial share within the lemma
    rng = random.Random(3)
    masks, _ = enumerate_chunk(kind, rng.randrange(64))
    centre_region = region_mask(2, 2, kind)
    for i in rng.sample(range(len(masks)), 400):
        p = Patch(int(masks[i]))
        for w in CORE:
            if w == (2, 2) or not p.is_detector(*w):
                continue
            pair = CENTER_BIT | bit(*w)
            area = [u for u in CORE if centre_region & bit(*u)
                    and region_mask(*u, kind) & pair == pair]
            for size in range(1, len(area) + 1):
                for sub in itertools.combinations(area, size):
                    total = sum(Fraction(1, p.dom(*u, kind)) for u in sub)
                    assert total <= lemma_bound(len(sub), 2, 2)
