import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from zvar.errors import BudgetExceededError, PreconditionError
from zvar.ffield import (
    FqPoly,
    b_indicator,
    b_slice,
    b_slice_multiplicative,
    chi2,
    dz_ff,
    dz_slice,
    enumerate_monic,
    factor,
    interval_sum,
    irreducible_census,
    is_irreducible,
    k_q_constant,
    mean_b_check,
    monic_irreducibles,
    variance_brute,
)
from zvar.characters import (
    build_characters,
    l_polynomial,
    rh_check,
    s_n_alpha_chi,
    verify_b_series_identity,
    verify_unitarized_variance,
    verify_variance_identity,
)

T3 = FqPoly(3, (0, 1))


# -- polynomial arithmetic -----------------------------------------------------

def test_poly_mul_divmod_roundtrip():
    rng = random.Random(0)
    for _ in range(50):
        q = rng.choice([3, 5, 7])
        f = FqPoly(q, [rng.randrange(q) for _ in range(5)] + [1])
        g = FqPoly(q, [rng.randrange(q) for _ in range(3)] + [1])
        quo, rem = divmod(f * g + FqPoly(q, (1,)), g)
        assert quo * g + rem == f * g + FqPoly(q, (1,))
        assert rem.degree < g.degree


def test_reversal_involution():
    f = FqPoly(3, (1, 2, 0, 1))
    assert f.reversal().reversal() == f


def test_enumerate_monic():
    assert [p.coeffs for p in enumerate_monic(3, 0)] == [(1,)]
    polys = list(enumerate_monic(3, 2))
    assert len(polys) == 9
    assert all(p.is_monic and p.degree == 2 for p in polys)
    assert 5**8 == 390625  # the degree-8 slice size over F_5
    stream = enumerate_monic(5, 8)
    first = next(stream)
    assert first.coeffs == (0,) * 8 + (1,)


def test_index_roundtrip():
    for idx in range(40):
        f = FqPoly.from_index(5, 3, idx)
        assert f.to_index() == idx


# -- irreducibles and factorization ---------------------------------------------

def necklace_count(q, n):
    def moebius(k):
        out, d = 1, 2
        while d * d <= k:
            if k % d == 0:
                k //= d
                if k % d == 0:
                    return 0
                out = -out
            d += 1
        return -out if k > 1 else out

    return sum(moebius(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def test_irreducible_counts_match_necklace_formula():
    for q in (3, 5):
        for d in (1, 2, 3, 4):
            assert len(monic_irreducibles(q, d)) == necklace_count(q, d)


def test_census_matches_explicit_tables():
    for q in (3, 5):
        pi, plus, minus = irreducible_census(q, 4)
        for d in (1, 2, 3, 4):
            irr = monic_irreducibles(q, d)
            assert pi[d - 1] == len(irr)
            assert plus[d - 1] == sum(1 for p in irr if chi2(p) == 1)
            assert minus[d - 1] == sum(1 for p in irr if chi2(p) == -1)


def test_factor_examples_and_roundtrip():
    t_squared = T3 * T3
    assert factor(t_squared).factors == ((T3, 2),)
    rng = random.Random(7)
    for q in (3, 5):
        irr = monic_irreducibles(q, 2) + monic_irreducibles(q, 3)
        for _ in range(25):
            p1, p2 = rng.sample(irr, 2)
            f = p1 * p2 * p1
            fac = factor(f)
            assert fac.reconstruct(q) == f
            assert dict((p.coeffs, e) for p, e in fac.factors) == {
                p1.coeffs: 2, p2.coeffs: 1
            }


def test_is_irreducible():
    assert is_irreducible(T3)
    assert not is_irreducible(T3 * T3)
    assert is_irreducible(FqPoly(3, (1, 0, 1)))  # T^2 + 1 over F_3


# -- the representability indicator ---------------------------------------------

def test_b_on_t_powers_and_squares():
    for k in range(1, 7):
        tk = FqPoly(3, (0,) * k + (1,))
        assert b_indicator(tk) == 1
    for q in (3, 5):
        for p in monic_irreducibles(q, 2):
            assert b_indicator(p * p) == 1


def direct_representable(q, n):
    """Definition-level oracle: exhaust f = A^2 + T B^2 over ALL A, B with
    the right degrees (arbitrary leading coefficients)."""
    out = set()
    all_polys = [()]
    for d in range((n + 1) // 2 + 1):
        for c in itertools.product(range(q), repeat=d + 1):
            if c[-1] != 0:
                all_polys.append(c)

    def mul(a, b):
        if not a or not b:
            return ()
        out2 = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out2[i + j] += x * y
        return tuple(v % q for v in out2)

    def add(a, b):
        m = max(len(a), len(b))
        out2 = [0] * m
        for i, x in enumerate(a):
            out2[i] += x
        for i, x in enumerate(b):
            out2[i] += x
        return tuple(v % q for v in out2)

    def strip(a):
        a = list(a)
        while a and a[-1] == 0:
            a.pop()
        return tuple(a)

    for A in all_polys:
        for B in all_polys:
            f = strip(add(mul(A, A), mul((0, 1), mul(B, B))))
            if f and len(f) - 1 == n and f[-1] == 1:
                out.add(f[:-1])
    return out


@pytest.mark.parametrize("q,n", [(3, 1), (3, 2), (3, 3), (5, 2), (5, 3)])
def test_b_norm_characterization(q, n):
    rep = direct_representable(q, n)
    for f in enumerate_monic(q, n):
        assert b_indicator(f) == (f.coeffs[:-1] in rep)


def test_b_slice_routes_agree():
    for q, n in ((3, 5), (3, 6), (5, 4), (7, 3)):
        assert (b_slice(q, n) == b_slice_multiplicative(q, n)).all()


def test_b_multiplicative_on_coprime_pairs():
    rng = random.Random(3)
    for q in (3, 5):
        monics = [
            FqPoly.from_index(q, d, rng.randrange(q**d))
            for d in (1, 2, 3)
            for _ in range(40)
        ]
        checked = 0
        for _ in range(1000):
            f, g = rng.choice(monics), rng.choice(monics)
            fac_f = {p.coeffs for p, _ in factor(f).factors}
            fac_g = {p.coeffs for p, _ in factor(g).factors}
            if fac_f & fac_g:
                continue
            checked += 1
            assert b_indicator(f * g) == b_indicator(f) * b_indicator(g)
        assert checked > 300


def test_b_reversal_invariance():
    # exhaustive over q=3, degrees <= 6, polynomials coprime to T
    for n in range(1, 7):
        for f in enumerate_monic(3, n):
            if f.constant_term() == 0:
                continue
            g = f.reversal().monic()
            assert b_indicator(f) == b_indicator(g)


# -- divisor functions ----------------------------------------------------------

def test_dz_values():
    z = Fraction(1, 2)
    p1 = monic_irreducibles(3, 2)[0]
    p2 = monic_irreducibles(3, 3)[0]
    assert dz_ff(p1 * p2, z) == z * z
    assert dz_ff(p1 * p1, z) == z * (z + 1) / 2
    assert dz_ff(FqPoly(3, (1,)), z) == 1


def count_monic_divisors(f):
    out = 1
    for _, e in factor(f).factors:
        out *= e + 1
    return out


def test_d2_is_divisor_count():
    # d_2 equals the number of monic divisors; spot-exhaustive at q=3
    for n in range(1, 5):
        vals = dz_slice(3, n, 2.0)
        for f in enumerate_monic(3, n):
            assert vals[f.to_index()] == count_monic_divisors(f)


def test_dz_slice_matches_pointwise():
    z = Fraction(1, 2)
    vals = dz_slice(5, 4, 0.5)
    for idx in range(0, 5**4, 17):
        f = FqPoly.from_index(5, 4, idx)
        assert abs(vals[idx] - float(dz_ff(f, z))) < 1e-12


# -- intervals and variance -------------------------------------------------------

def test_interval_sum_cardinality_and_whole_slice():
    A = FqPoly(3, (0, 0, 0, 0, 1))  # T^4
    assert interval_sum(lambda f: 1, A, 1) == 9
    total_from_a = interval_sum(lambda f: b_indicator(f), A, 3)
    B = FqPoly(3, (1, 2, 0, 0, 1))
    total_from_b = interval_sum(lambda f: b_indicator(f), B, 3)
    assert total_from_a == total_from_b == int(b_slice(3, 4).sum())


def test_interval_sum_brute_shifts():
    A = FqPoly(3, (0, 0, 0, 0, 1))
    got = interval_sum(lambda f: b_indicator(f), A, 1)
    brute = 0
    for c0 in range(3):
        for c1 in range(3):
            brute += b_indicator(A + FqPoly(3, (c0, c1)))
    assert got == brute


def test_variance_trivial_cases():
    assert variance_brute("b", 3, 4, 3).value == 0.0
    # constant function: d_z at z = 1 is identically 1
    r = variance_brute("dz", 3, 4, 1, z=Fraction(1))
    assert r.exact == 0
    with pytest.raises(BudgetExceededError):
        variance_brute("b", 13, 8, 1, max_enum=10**6)
    with pytest.raises(PreconditionError):
        variance_brute("b", 3, 4, 4)


def test_variance_exact_matches_float():
    ex = variance_brute("dz", 3, 5, 1, z=Fraction(1, 2), exact=True)
    fl = variance_brute("dz", 3, 5, 1, z=Fraction(1, 2), exact=False)
    assert abs(float(ex.exact) - fl.value) < 1e-10


# -- characters -------------------------------------------------------------------

def test_character_counts():
    for q, m in ((3, 3), (3, 4), (5, 3)):
        t = build_characters(q, m)
        assert t.group_order == q ** (m - 1) * (q - 1)
        evens = [a for a in t.characters() if t.is_even(a)]
        assert len(evens) == q ** (m - 1)
        ev_prim = t.even_primitive_indices()
        assert len(ev_prim) == q ** (m - 1) - q ** (m - 2)


def test_character_orthogonality_and_unit_values():
    t = build_characters(3, 3)
    for a in (1, 5, 11):
        vals = t.chi_values(a)
        units = vals[vals != 0]
        assert len(units) == t.group_order
        assert np.allclose(np.abs(units), 1.0)
        if not t.is_trivial(a):
            assert abs(units.sum()) < 1e-9


def test_s_n_alpha_chi_orthogonality():
    t = build_characters(3, 3)
    nontrivial = [a for a in t.characters() if not t.is_trivial(a)][:5]
    for a in nontrivial:
        # full orthogonality once the slice covers all residues
        assert abs(s_n_alpha_chi(t, 4, "b", a)) < 1e6  # finite value
        ones = t.unit_s(4)[a]
        assert abs(ones) < 1e-9
    assert s_n_alpha_chi(t, 0, "b", nontrivial[0]) == pytest.approx(1.0)


def test_l_polynomial_degree_and_rh():
    t = build_characters(3, 3)
    for a in t.characters():
        if t.is_trivial(a):
            continue
        lp = l_polynomial(t, a, order=t.m + 2)
        for k in range(t.m, t.m + 3):
            assert abs(lp.coeffs[k]) < 1e-9
        assert lp.rh_ok()
    with pytest.raises(PreconditionError):
        l_polynomial(t, 0)


def test_rh_check_small():
    for q in (3, 5):
        checked, worst = rh_check(q, 3)
        assert checked == q**2 * (q - 1) - 1
        assert worst < 1e-6


def test_variance_charsum_identity_small():
    for alpha, z in (("b", None), ("dz", Fraction(1, 2)), ("dz", Fraction(2))):
        rep = verify_variance_identity(3, 5, 2, alpha, z=z)
        assert rep.abs_diff <= 1e-6
    with pytest.raises(PreconditionError):
        verify_variance_identity(3, 5, 4, "b")


def test_variance_identity_constant_function_vanishes():
    # z = 1 makes d_z constant: the variance is 0 and so is the char-sum side
    rep = verify_variance_identity(3, 5, 2, "dz", z=Fraction(1))
    assert rep.lhs == 0.0
    assert abs(rep.rhs) < 1e-9


def test_b_series_identity_and_truncation_insensitive():
    rows = verify_b_series_identity(3, 3, 6)
    assert max(r.abs_diff for r in rows) < 1e-6
    rows_full = verify_b_series_identity(3, 3, 6, i_limit=6)
    for r1, r2 in zip(rows, rows_full):
        assert abs(r1.series - r2.series) < 1e-9


def test_unitarized_variance_report():
    rep = verify_unitarized_variance(3, 6, 1)
    assert rep.abs_diff <= 1.0
    assert rep.characters == 3**4 - 3**3
    with pytest.raises(PreconditionError):
        verify_unitarized_variance(3, 6, 5)


def test_mean_b_check():
    from zvar.ffield import _binom_frac

    assert _binom_frac(Fraction(1, 2), 1) == Fraction(1, 2)
    for q in (3, 5, 7, 11, 13):
        kq = k_q_constant(q)
        assert 1.0 < kq < 1.5
    rep = mean_b_check(7, 6)
    assert rep.rel_error <= 3 / (7 * 6)


def test_census_hand_values_q3():
    pi, plus, minus = irreducible_census(3, 2)
    assert pi == (3, 3)
    assert plus == (1, 1)
    assert minus == (1, 2)
