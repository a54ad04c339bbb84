"""End-to-end acceptance checks, one test per criterion.

Every criterion prints a single PASS/FAIL line (repeated in the terminal
summary).  Derived values are recomputed with the independent routines in
``oracles.py``.
"""

import random

import pytest
from conftest import random_braid_word, random_letters, record
from oracles import GROUPS, abelian_oracle, artin_naive, brute_force_homs

from quadmono import (
    Braid,
    FullTwistSpec,
    Presentation,
    Word,
    abelianization,
    artin_apply,
    bigness_certificate,
    builtin_table,
    fingerprint,
    formula_relations,
    fulltwist,
    involution_transform,
    present,
    simplify,
    target_presentation,
)
from quadmono.braids import CONVENTIONS, fixed_product
from quadmono.invariants import free_abelian_times_z2, free_times_z2, parse_battery
from quadmono.presentation import canonical_labels, parse_presentation, render_text
from quadmono.words import commutator

A2_TARGET = "< a1, a2 | (a1 a2)^2 = e >"
C3_TARGET = ("< a1, a2, a3 | [a2,a3] = e, (a1 a2 a3)^2 = e, (a1 a2)^2 = (a2 a1)^2, "
             "(a1 a3)^2 = (a3 a1)^2 >")
C4_TARGET = ("< a1, a2, a3, a4 | [a2,a3] = e, [a2,a4] = e, [a3,a4] = e, (a1 a2)^2 = (a2 a1)^2, "
             "(a1 a2 a3 a4)^2 = e, (a1 a3)^2 = (a3 a1)^2, (a1 a4)^2 = (a4 a1)^2 >")


def simplified(p):
    return canonical_labels(simplify(p))


def letters(p):
    return [list(r.letters) for r in p.relators]


def s3_oracle(p):
    return brute_force_homs(p.rank, letters(p), GROUPS["s3"]())


# ------------------------------------------------------------------ 1, 2, 3

def test_criterion_1_a2():
    braid = present(builtin_table("A2"))
    seven = formula_relations("A", 2)
    closure_ok = len(seven.relators) == 7 and set(seven.relators) <= set(braid.relators)
    # every extra braid relator already follows from the seven
    base = simplified(seven)
    extras_ok = all(simplified(seven.with_relators([r])) == base for r in braid.relators)
    final = render_text(simplified(braid))
    ok = closure_ok and extras_ok and final == A2_TARGET and render_text(base) == A2_TARGET
    record(1, ok, f"A2 braid presentation reduces to {final}")
    assert ok


def test_criterion_2_b2_c2():
    got = {case: render_text(simplified(present(builtin_table(case)))) for case in ("B2", "C2")}
    ok = all(v == A2_TARGET for v in got.values())
    record(2, ok, "; ".join(f"{k} -> {v}" for k, v in got.items()))
    assert ok


def test_criterion_3_c3_c4():
    c3 = render_text(simplified(present(builtin_table("C3"))))
    c4 = render_text(simplified(formula_relations("C", 4)))
    counts = (c3.count("["), c4.count("["))
    ok = c3 == C3_TARGET and c4 == C4_TARGET and counts == (1, 3)
    record(3, ok, f"braid C3 and formula C4 match, commutator counts {counts}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the numerically reconstructed C4 braid table yields a proper "
                                        "quotient: homs to s3 168 vs 174, to s4 3360 vs 3384")
def test_braid_c4_fingerprint_matches_target():
    braid = simplified(present(builtin_table("C4")))
    target = target_presentation("C", 4)
    assert fingerprint(braid) == fingerprint(target)


# --------------------------------------------------------------------- 4, 5

def test_criterion_4_formula_fingerprints():
    bad = []
    for fam in "ABC":
        for n in range(1, 7):
            target = target_presentation(fam, n)
            fp = fingerprint(simplified(formula_relations(fam, n)))
            ab = fp.abelian
            if fp != fingerprint(target):
                bad.append(f"{fam}{n} fingerprint")
            if (ab.free_rank, ab.torsion) != (n - 1, (2,)):
                bad.append(f"{fam}{n} abelianization {ab}")
            if abelian_oracle(n, letters(target)) != (n - 1, (2,)):
                bad.append(f"{fam}{n} oracle")
            if n <= 3 and dict(fp.counts)["s3"] != s3_oracle(target):
                bad.append(f"{fam}{n} s3 oracle")
    record(4, not bad, "A/B/C n=1..6 formula fingerprints equal the targets, H1 = Z^(n-1) + Z2"
           if not bad else ", ".join(bad))
    assert not bad


def test_criterion_5_redundant_relations():
    drops = {"A": (("an5",), ("an6-an8",), ("an5", "an6-an8")), "B": (("bn1",),)}
    bad = []
    for fam, options in drops.items():
        for n in range(2, 6):
            ref = fingerprint(formula_relations(fam, n))
            for drop in options:
                smaller = formula_relations(fam, n, drop=drop)
                if len(smaller.relators) >= len(formula_relations(fam, n).relators) \
                        or fingerprint(smaller) != ref:
                    bad.append(f"{fam}{n} without {'+'.join(drop)}")
    record(5, not bad, "dropping an5, an6-an8 (A) or bn1 (B) keeps the fingerprint for n=2..5"
           if not bad else ", ".join(bad))
    assert not bad


# --------------------------------------------------------------------- 6, 7

def test_criterion_6_bigness():
    bad = []
    for fam in "ABC":
        for n in range(2, 6):
            cert = bigness_certificate(target_presentation(fam, n), ("a1", "a2"))
            if not cert.ok:
                bad.append(f"{fam}{n}: {cert.reason}")
        z2 = Presentation(("a",), (Word.gen(1, 2),))
        if fingerprint(target_presentation(fam, 1)) != fingerprint(z2):
            bad.append(f"{fam}1 is not Z2")
    # the reference itself, Z * Z2 = < a, b | (ab)^2 >, checked with the oracles
    zz2 = parse_presentation("< a, b | (a b)^2 >")
    if abelian_oracle(2, letters(zz2)) != (1, (2,)) or s3_oracle(zz2) != dict(fingerprint(zz2).counts)["s3"]:
        bad.append("Z * Z2 reference")
    record(6, not bad, "bigness certificates hold for n=2..5 in A/B/C, n=1 gives Z2"
           if not bad else ", ".join(bad))
    assert not bad


def test_criterion_7_involution():
    p = parse_presentation("< m1 | m1 >")
    base = involution_transform(p)
    ab = abelianization(base)
    bad = [] if (ab.free_rank, ab.torsion) == (0, (2,)) else [f"<m1|m1> gives {ab}"]
    rng = random.Random(7)
    for _ in range(200):
        rank = rng.randint(2, 3)
        prod = Word.product(range(1, rank + 1))
        rels = []
        for _ in range(rng.randint(0, 3)):
            u, v, c = (Word.from_letters(random_letters(rng, rank, 4)) for _ in range(3))
            rels.append(commutator(u, v).conjugate(c))
        q = Presentation(tuple(f"m{i}" for i in range(1, rank + 1)), tuple(rels) + (prod,), {}, prod)
        got = abelianization(involution_transform(q))
        expected = abelian_oracle(rank + 1, letters(q) + [[rank + 1, rank + 1]])
        if (got.free_rank, got.torsion) != expected:
            bad.append(render_text(q))
    record(7, not bad, "<m1|m1> gives Z2; 200 random 2-3 generator inputs gain exactly one Z2"
           if not bad else f"{len(bad)} mismatches, first {bad[0]}")
    assert not bad


# ------------------------------------------------------------------------ 8

def test_criterion_8_properties():
    rng = random.Random(8)
    bad = []
    for conv in CONVENTIONS:
        c = fixed_product(6, conv)
        for i in range(500):
            b = Braid(6, tuple(random_braid_word(rng, 6, 12)))
            if artin_apply(b, c, conv) != c:
                bad.append(f"product not fixed ({conv})")
            if i % 10 == 0 and artin_naive(b.word, list(c.letters), conv) != list(c.letters):
                bad.append(f"oracle disagrees on product ({conv})")
    for _ in range(1000):
        conv = rng.choice(CONVENTIONS)
        p = rng.randint(2, 6)
        b1, b2 = (Braid(p, tuple(random_braid_word(rng, p, 8))) for _ in range(2))
        u, v = (Word.from_letters(random_letters(rng, p, 8)) for _ in range(2))
        if artin_apply(b1 * b2, u, conv) != artin_apply(b1, artin_apply(b2, u, conv), conv):
            bad.append("composition law")
        if artin_apply(b1, u * v, conv) != artin_apply(b1, u, conv) * artin_apply(b1, v, conv):
            bad.append("word homomorphism")
        if artin_apply(b1.inverse(), artin_apply(b1, u, conv), conv) != u:
            bad.append("inverse law")
    for p in range(2, 6):
        ft = fulltwist(FullTwistSpec(p, 1, p))
        for _ in range(40):
            b = Braid(p, tuple(random_braid_word(rng, p, 8)))
            if any((ft * b).images(conv) != (b * ft).images(conv) for conv in CONVENTIONS):
                bad.append(f"full twist not central in B{p}")
    s3 = parse_battery("s3")
    for _ in range(200):
        rank = rng.randint(1, 3)
        rels = [Word.from_letters(random_letters(rng, rank, 7)) for _ in range(rng.randint(0, 3))]
        q = Presentation(tuple(f"g{i}" for i in range(1, rank + 1)), tuple(rels))
        out = simplify(q)
        before = (abelian_oracle(q.rank, letters(q)), s3_oracle(q))
        after = (abelian_oracle(out.rank, letters(out)), s3_oracle(out))
        if before != after or fingerprint(out, s3, presimplify=False) != fingerprint(q, s3, presimplify=False):
            bad.append(f"simplify changed {render_text(q)}")
    record(8, not bad, "1000 B6 braids fix the product, 1000 homomorphism/inverse cases, "
           "central full twist p<=5, simplify keeps 200 fingerprints"
           if not bad else f"{len(bad)} failures, first {bad[0]}")
    assert not bad


# ------------------------------------------------------------------------ 9

def test_criterion_9_a3_candidates():
    a3 = simplified(formula_relations("A", 3))
    free, abel = free_times_z2(2), free_abelian_times_z2(2)
    fp = fingerprint(a3)
    counts = {name: s3_oracle(q) for name, q in (("A3", a3), ("F2*Z2", free), ("Z^2*Z2", abel))}
    consistent = fp == fingerprint(free) and counts["A3"] == counts["F2*Z2"]
    distinguished = fp != fingerprint(abel) and counts["A3"] != counts["Z^2*Z2"]
    ok = consistent and distinguished
    record(9, ok, f"A3 consistent with F2*Z2; Z^2*Z2 distinguished: {'yes' if distinguished else 'no'} "
           f"(homs to s3: A3 {counts['A3']}, F2*Z2 {counts['F2*Z2']}, Z^2*Z2 {counts['Z^2*Z2']})")
    assert ok
