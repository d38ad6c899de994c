import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cslkit import certify as c
from cslkit.errors import InvalidInput

F = Fraction


class TestInterval:
    def test_ops(self):
        a = c.RationalInterval(1, 2)
        b = c.RationalInterval(F(1, 2), 3)
        assert a + b == c.RationalInterval(F(3, 2), 5)
        assert a * b == c.RationalInterval(F(1, 2), 6)
        assert a / b == c.RationalInterval(F(1, 3), 4)
        assert a / 2 == c.RationalInterval(F(1, 2), 1)

    def test_empty(self):
        with pytest.raises(ValueError):
            c.RationalInterval(2, 1)

    def test_divide_by_nonpositive(self):
        with pytest.raises(ZeroDivisionError):
            c.RationalInterval(1, 2) / c.RationalInterval(0, 1)

    @given(st.fractions(-3, 3), st.fractions(0, 3), st.fractions(-3, 3), st.fractions(0, 3),
           st.fractions(-3, 3), st.fractions(-3, 3))
    def test_outward(self, a, w1, b, w2, s, t):
        I, J = c.RationalInterval(a, a + w1), c.RationalInterval(b, b + w2)
        u = a + w1 * ((s + 3) / 6)
        v = b + w2 * ((t + 3) / 6)
        assert u + v in I + J
        assert u * v in I * J


class TestTriangular:
    def test_values(self):
        assert c.triangular_e(1) == 1
        assert c.triangular_e(2) == 3
        assert c.triangular_e(4) == 10

    def test_rejects_zero(self):
        with pytest.raises(InvalidInput):
            c.triangular_e(0)

    def test_tail_bound_values(self):
        assert c.triangular_tail_bound(1) == F(1, 4)
        assert c.triangular_tail_bound(2) == F(1, 32)
        assert c.triangular_tail_bound(4) == F(1, 16384)

    @pytest.mark.parametrize("k", range(1, 12))
    def test_tail_bound_strict(self, k):
        partial = sum(F(1, 2 ** (n * (n + 1) // 2)) for n in range(k + 1, k + 21))
        assert partial < c.triangular_tail_bound(k)

    def test_rejects_zero_k(self):
        with pytest.raises(InvalidInput):
            c.triangular_tail_bound(0)


def geometric(r, c0=1):
    return c.NormSeq("geo", lambda n: c0 * r ** n, c.GeometricTail(1, F(c0), r), c.PROVEN)


class TestTailEnclosure:
    def test_zero(self):
        z = c.NormSeq.zero()
        for k in range(0, 5):
            assert c.tail_enclosure(z, k, k + 3) == c.RationalInterval(0, 0)

    def test_triangular(self):
        s = c.NormSeq("t", lambda n: F(1, 2 ** c.triangular_e(n)), c.TriangularTail(), c.PROVEN)
        enc = c.tail_enclosure(s, 1, 4)
        assert enc.lo == F(1, 8) + F(1, 64) + F(1, 1024) == F(145, 1024)
        assert enc.hi == F(145, 1024) + F(1, 16384) == F(2321, 16384)

    def test_geometric(self):
        enc = c.tail_enclosure(geometric(F(1, 4)), 0, 2)
        assert enc.lo == F(5, 16)
        assert enc.hi == F(5, 16) + F(1, 48)

    def test_missing_certificate(self):
        s = c.NormSeq("bare", lambda n: F(1, n * n))
        with pytest.raises(InvalidInput):
            c.tail_enclosure(s, 0, 5)

    def test_depth_too_small(self):
        with pytest.raises(InvalidInput):
            c.tail_enclosure(geometric(F(1, 2)), 3, 3)

    @given(st.integers(1, 9), st.integers(1, 4), st.integers(0, 6), st.integers(1, 15))
    def test_contains_closed_form(self, den, c0, k, extra):
        r = F(1, den + 1)
        s = geometric(r, c0)
        K = k + extra
        exact_tail = c0 * r ** (k + 1) / (1 - r)
        assert exact_tail in c.tail_enclosure(s, k, K)

    @pytest.mark.parametrize("make", [
        lambda: geometric(F(1, 3)),
        lambda: c.construction_A()[0],
        lambda: c.construction_A()[1],
        lambda: c.construction_C()[0],
        lambda: c.construction_C()[1],
        lambda: c.construction_B().x,
    ])
    def test_monotone_in_depth(self, make):
        s = make()
        for k in range(0, 4):
            prev = None
            for K in range(k + 1, k + 25):
                enc = c.tail_enclosure(s, k, K)
                assert enc.lo <= enc.hi
                if prev is not None:
                    assert enc.lo >= prev.lo and enc.hi <= prev.hi
                prev = enc


class TestConstructionA:
    def test_terms(self):
        x, y = c.construction_A()
        assert x(2) == F(1, 16)
        assert y(3) == F(1, 9)
        assert all(y(n) / x(n) == n * n for n in range(1, 30))
        assert x.verify_terms(200) and y.verify_terms(200)

    def test_ratio_k1(self):
        r = c.certify_A_ratio(1, 3)
        want = (F(1, 4) + F(1, 9)) / (F(1, 16) + F(1, 81))
        assert r.ratio == want and want >= 4 and r.ok

    def test_ratio_k2(self):
        r = c.certify_A_ratio(2, 10)
        assert r.ratio >= 9 and r.ok

    def test_ratio_k0(self):
        r = c.certify_A_ratio(0, 1)
        assert r.ratio == 1 and r.threshold == 1 and r.ok

    def test_bad_depth(self):
        with pytest.raises(InvalidInput):
            c.certify_A_ratio(3, 3)

    def test_monotone_in_depth(self):
        for k in (1, 3, 7):
            prev = None
            for K in range(k + 1, k + 40):
                r = c.certify_A_ratio(k, K)
                assert r.ratio >= (k + 1) ** 2
                if prev is not None:
                    assert r.ratio >= prev
                prev = r.ratio

    def test_full_tail_ratio_float(self):
        # full tails via Hurwitz zeta: the true ratio also clears (k+1)^2
        for k in (1, 5, 20):
            num = mpmath.zeta(2, k + 1)
            den = mpmath.zeta(4, k + 1)
            assert num / den >= (k + 1) ** 2

    def test_as_divergence(self):
        x, y = c.construction_A()
        cert = c.certify_divergence(y, x, lambda k: (k + 1) ** 2, range(1, 21), 200, strict=False)
        assert cert.conclusion and cert.status == c.PROVEN


class TestLambdaMu:
    def test_first_values(self):
        lam, mu = c.lambda_mu_sequences(3)
        assert (lam[1], mu[1]) == (F(1, 2), F(1, 2))
        assert (lam[2], mu[2]) == (F(1, 8), F(1, 4))
        assert (lam[3], mu[3]) == (F(1, 16), F(1, 48))

    def test_constraints(self):
        lam, mu = c.lambda_mu_sequences(200)
        for n in range(1, 201):
            assert 0 < lam[n] < lam[n - 1] and 0 < mu[n] < mu[n - 1]
            if n % 2 == 0:
                assert mu[n] / lam[n] >= n
            else:
                assert lam[n] / mu[n] >= n
            assert lam[n] <= F(1, 2 ** n) and mu[n] <= F(1, 2 ** n)


class TestConstructionB:
    def test_summability(self):
        B = c.construction_B()
        assert B.x.verify_terms(100) and B.y.verify_terms(100)
        for n in range(1, 60):
            assert B.x(n) / B.mu(n) ** 2 == F(1, n * n)
            assert B.y(n) / B.lam(n) ** 2 == F(1, n * n)

    def test_exclusion_witnesses(self):
        B = c.construction_B()
        assert B.x(2) / B.lam(2) ** 2 == 1
        assert B.y(3) / B.mu(3) ** 2 == 1

    def test_memberships(self):
        B = c.construction_B()
        xl = c.d_range_membership(B.x, B.lam, 100)
        assert xl.verdict == "outside" and xl.rule == "even n"
        assert [n for n, _ in xl.witnesses] == list(range(2, 101, 2))
        yl = c.d_range_membership(B.y, B.mu, 100)
        assert yl.verdict == "outside" and yl.rule == "odd n"
        xm = c.d_range_membership(B.x, B.mu, 100)
        assert xm.verdict == "inside" and xm.reference == ("inverse-square", 1)
        ym = c.d_range_membership(B.y, B.lam, 100)
        assert ym.verdict == "inside"
        assert all(m.status == c.PROVEN for m in (xl, yl, xm, ym))

    def test_user_sequence_asserted(self):
        s = c.NormSeq("u", lambda n: F(1, 3 ** n))
        d = c.NormSeq("w", lambda n: F(1, n))
        m = c.d_range_membership(s, d, 40)
        assert m.verdict == "inside" and m.status == c.ASSERTED

    def test_divergent_not_inside(self):
        # terms 1/n: harmonic, neither witness class nor stable majorant
        s = c.NormSeq("h", lambda n: F(1, n))
        one = c.NormSeq("one", lambda n: F(1))
        assert c.d_range_membership(s, one, 60).verdict == "undetermined"

    def test_invalid_weights(self):
        s = c.NormSeq.zero()
        with pytest.raises(InvalidInput):
            c.d_range_membership(s, c.NormSeq("inc", lambda n: F(n)), 10)
        with pytest.raises(InvalidInput):
            c.d_range_membership(s, c.NormSeq("neg", lambda n: F(-1)), 10)


class TestConstructionC:
    def test_terms(self):
        a, b = c.construction_C()
        assert [a(n) for n in range(1, 5)] == [F(1, 2), 0, F(1, 64), 0]
        assert b(2) == F(1, 8)
        assert a(2) == 0
        assert a.verify_terms(40) and b.verify_terms(40)

    def test_k1(self):
        a, b = c.construction_C()
        cert = c.certify_divergence(a, b, lambda k: 2 ** k, [1], 3, inclusive=True)
        r = cert.records[0]
        assert r.num_lo == F(33, 64)
        assert r.den_hi == F(65, 512)
        assert r.lower_bound == F(264, 65) and r.ok

    def test_declines_without_separation(self):
        a, _ = c.construction_C()
        cert = c.certify_divergence(a, a, lambda k: 2, range(1, 6), 10)
        assert not cert.conclusion

    def test_zero_denominator(self):
        a, _ = c.construction_C()
        cert = c.certify_divergence(a, c.NormSeq.zero(), lambda k: 2, [1], 5)
        assert cert.records[0].lower_bound == math.inf and cert.conclusion

    def test_both_halves(self):
        odd, even = c.certify_C(25)
        assert odd.conclusion and even.conclusion
        assert [r.k for r in odd.records] == list(range(1, 26, 2))
        assert [r.k for r in even.records] == list(range(2, 26, 2))


class TestNonClosedness:
    def test_eps_tenth(self):
        nc = c.non_closedness_certificate(F(1, 10))
        assert nc.K == 10 and nc.tail_bound == F(1, 10) and nc.ok

    def test_tail_really_below(self):
        nc = c.non_closedness_certificate(F(1, 10))
        assert mpmath.zeta(2, nc.K + 1) <= mpmath.mpf(1) / nc.K

    def test_exclusion_k5(self):
        assert c.certify_A_ratio(5, 15).ratio >= 36

    def test_increment(self):
        x, y = c.construction_A()
        assert all(n * n * x(n) == y(n) for n in range(1, 50))

    def test_too_small(self):
        with pytest.raises(InvalidInput):
            c.non_closedness_certificate(F(1, 10), K=5)
        with pytest.raises(InvalidInput):
            c.non_closedness_certificate(F(1, 10 ** 9), limit=1000)

    def test_env_limit(self, monkeypatch):
        monkeypatch.setenv("CSLKIT_DEPTH_LIMIT", "50")
        with pytest.raises(InvalidInput):
            c.non_closedness_certificate(F(1, 100))
        monkeypatch.setenv("CSLKIT_DEPTH_LIMIT", "nope")
        with pytest.raises(InvalidInput):
            c.depth_limit()
