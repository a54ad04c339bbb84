import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from conftest import random_letters
from oracles import GROUPS, abelian_oracle, brute_force_homs, invariant_factors
from quadmono.invariants import (
    AbelianInvariants,
    CapExceeded,
    CertificateError,
    FiniteGroup,
    abelianization,
    bigness_certificate,
    builtin_group,
    compare_candidates,
    count_homs,
    enumeration_size,
    fingerprint,
    free_abelian_times_z2,
    free_times_z2,
    load_group,
    parse_battery,
    smith_normal_form,
)
from quadmono.monodromy import target_presentation
from quadmono.presentation import Presentation, parse_presentation
from quadmono.words import Word

P = parse_presentation


class TestSmith:
    def test_row_of_twos(self):
        for n in range(1, 6):
            assert smith_normal_form([[2] * n]) == ([2], 1)

    def test_zero(self):
        assert smith_normal_form([[0, 0], [0, 0]]) == ([], 0)
        assert smith_normal_form([]) == ([], 0)

    def test_coprime_diagonal(self):
        assert smith_normal_form([[2, 0], [0, 3]]) == ([1, 6], 2)
        assert invariant_factors([[2, 0], [0, 3]]) == [1, 6]

    def test_divisibility_fixup(self):
        diag, rank = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        assert (diag, rank) == ([2, 6, 12], 3)


@settings(max_examples=80)
@given(st.randoms(use_true_random=False))
def test_smith_matches_oracles(rng):
    rows, cols = rng.randint(1, 4), rng.randint(1, 4)
    m = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
    diag, rank = smith_normal_form(m)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert diag == invariant_factors(m)
    snf = sympy_snf(Matrix(m), domain=ZZ)
    ref = [abs(snf[i, i]) for i in range(min(rows, cols)) if snf[i, i] != 0]
    assert diag == ref


class TestAbelianization:
    def test_a1_is_z2(self):
        assert abelianization(target_presentation("A", 1)) == AbelianInvariants(0, (2,))

    def test_c3(self):
        assert abelianization(target_presentation("C", 3)) == AbelianInvariants(2, (2,))

    def test_free(self):
        assert abelianization(Presentation.free(2)) == AbelianInvariants(2, ())

    def test_str_and_json(self):
        assert str(AbelianInvariants(3, (2,))) == "Z^3 + Z2"
        assert str(AbelianInvariants(1, ())) == "Z"
        assert str(AbelianInvariants(0, ())) == "0"
        assert AbelianInvariants(1, (2, 4)).to_json() == {"free_rank": 1, "torsion": [2, 4]}


class TestGroups:
    @pytest.mark.parametrize("name, order", [("s3", 6), ("s4", 24), ("a4", 12), ("d4", 8),
                                             ("z6", 6), ("trivial", 1), ("z5", 5)])
    def test_orders(self, name, order):
        assert builtin_group(name).order == order

    @pytest.mark.parametrize("name", ["s3", "s4", "a4", "d4", "z6"])
    def test_matches_permutation_models(self, name):
        # commuting pairs and involution counts pin down the group among these
        g = builtin_group(name)
        elems = GROUPS[name]()
        comm = P("< a, b | [a,b] >")
        inv = P("< a | a^2 >")
        assert count_homs(comm, g) == brute_force_homs(2, [(1, 2, -1, -2)], elems)
        assert count_homs(inv, g) == brute_force_homs(1, [(1, 1)], elems)
        assert sorted(g.element_orders()) == sorted(order_of(p) for p in elems)

    def test_validation(self):
        with pytest.raises(ValueError):
            FiniteGroup("bad", [[0, 1], [0, 1]])
        with pytest.raises(ValueError):
            FiniteGroup("bad", [[1, 0], [0, 1]])
        with pytest.raises(ValueError):
            FiniteGroup("bad", [[0, 1, 2], [1, 2, 0]])
        # a Latin square with identity that is not associative
        loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
        with pytest.raises(ValueError):
            FiniteGroup("loop", loop)
        with pytest.raises(ValueError):
            builtin_group("q8x")

    def test_load_json(self, tmp_path):
        path = tmp_path / "z3.json"
        path.write_text(json.dumps({"name": "z3", "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}))
        g = load_group(str(path))
        assert g.order == 3 and g.name == "z3"
        assert json.loads(json.dumps(g.to_json()))["table"][1] == [1, 2, 0]

    def test_battery(self):
        assert [g.name for g in parse_battery(None)] == ["s3", "s4", "a4", "d4", "z6"]
        assert [g.name for g in parse_battery("s3, z2")] == ["s3", "z2"]


def order_of(p):
    k, q = 1, p
    e = tuple(range(len(p)))
    while q != e:
        q = tuple(p[i] for i in q)
        k += 1
    return k


class TestCountHoms:
    def test_involutions_in_s3(self):
        assert count_homs(P("< a | a^2 >"), builtin_group("s3")) == 4

    def test_product_square_in_s3(self):
        assert count_homs(P("< a, b | (a b)^2 >"), builtin_group("s3")) == 24

    def test_trivial_target(self):
        assert count_homs(target_presentation("C", 3), builtin_group("trivial")) == 1

    def test_no_generators(self):
        assert count_homs(P("< | >"), builtin_group("s4")) == 1

    def test_cap(self):
        p = Presentation.free(4)
        assert enumeration_size(p, builtin_group("s4")) > 1000
        with pytest.raises(CapExceeded):
            count_homs(p, builtin_group("s4"), cap=1000)

    def test_free_group(self):
        assert count_homs(Presentation.free(3), builtin_group("s3")) == 6 ** 3

    @pytest.mark.parametrize("text", [
        "< a, b, c, d | (a b c d)^2, [a,b] >",
        "< a, b, c, d, e | [a,b], [b,c], [c,d], [d,e], (a b c d e)^2 >",
        "< a, b, c, d | a b a^-1 c^-1, [b, d] d^2 >",
    ])
    def test_wide_presentations(self, text):
        p = P(text)
        rels = [r.letters for r in p.relators]
        assert count_homs(p, builtin_group("s3")) == brute_force_homs(p.rank, rels, GROUPS["s3"]())


@settings(max_examples=60)
@given(st.randoms(use_true_random=False))
def test_count_homs_matches_naive_oracle(rng):
    rank = rng.randint(1, 3)
    rels = [Word.from_letters(random_letters(rng, rank, 7)) for _ in range(rng.randint(0, 3))]
    p = Presentation.free(rank).with_relators(rels)
    letters = [r.letters for r in p.relators]
    for name in ("s3", "d4"):
        assert count_homs(p, builtin_group(name)) == brute_force_homs(rank, letters, GROUPS[name]())
    assert (abelianization(p).free_rank, abelianization(p).torsion) == abelian_oracle(rank, letters)


class TestFingerprint:
    def test_a2_is_zz2(self):
        ref = fingerprint(P("< a, b | (a b)^2 >"))
        assert fingerprint(target_presentation("A", 2)) == ref
        assert str(ref) == "Z + Z2; homs s3:24, s4:240, a4:48, d4:48, z6:12"

    def test_a3_is_f2_z2(self):
        assert fingerprint(target_presentation("A", 3)) == fingerprint(free_times_z2(2))

    def test_trivial(self):
        fp = fingerprint(P("< | >"))
        assert fp.abelian == AbelianInvariants(0, ()) and all(c == 1 for _, c in fp.counts)

    def test_diff_and_json(self):
        a = fingerprint(free_times_z2(2))
        b = fingerprint(free_abelian_times_z2(2))
        assert not a.consistent_with(b)
        assert "homs to s3: 144 vs 72" in a.diff(b)
        assert a.to_json()["hom_counts"]["s3"] == 144

    def test_single_group_battery(self):
        fp = fingerprint(target_presentation("A", 2), parse_battery("s3"))
        assert fp.counts == (("s3", 24),)


class TestBigness:
    def test_a4(self):
        cert = bigness_certificate(target_presentation("A", 4), ("a1", "a2"))
        assert cert.ok and cert.killed == ("a3", "a4")
        assert cert.to_json()["quotient"]["generators"] == ["a1", "a2"]

    def test_c3(self):
        assert bigness_certificate(target_presentation("C", 3), ("a1", "a2")).ok

    def test_failure_is_reported(self):
        cert = bigness_certificate(P("< a, b | [a,b] >"))
        assert not cert.ok and "abelianization" in cert.reason

    def test_preconditions(self):
        with pytest.raises(CertificateError):
            bigness_certificate(P("< a | a^2 >"))
        with pytest.raises(CertificateError):
            bigness_certificate(P("< a, b | >"), ("a", "a"))


class TestCandidates:
    def test_remark_candidates(self):
        res = compare_candidates(target_presentation("A", 3),
                                 {"free": free_times_z2(2), "abelian": free_abelian_times_z2(2)})
        assert res["free"] == (True, [])
        assert res["abelian"][0] is False

    def test_candidate_presentations(self):
        assert free_times_z2(2).relators == (Word.gen(3, 2),)
        assert len(free_abelian_times_z2(3).relators) == 4
