"""Arithmetic over F_q[T] at small odd prime q, and everything built on it:

* monic-slice enumeration with a base-q index encoding (low digits = low
  coefficients, so a short interval is a contiguous index block),
* the sums-of-"squares" indicator via direct A^2 + T B^2 marking and,
  independently, via the multiplicative prime-power rule,
* divisor functions d_z through a smallest-irreducible-factor sieve,
* short-interval variance by exhaustive enumeration,
* Dirichlet characters modulo T^m with L-polynomials, and the two-route
  verification of the variance/character-sum and generating-series
  identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .errors import BudgetExceededError, InternalCheckError, PreconditionError

SUPPORTED_Q = (3, 5, 7, 11, 13)

DEFAULT_MAX_ENUM = 10**8
DEFAULT_MAX_GROUP = 10**7


def _check_q(q: int):
    if q not in SUPPORTED_Q:
        raise PreconditionError(f"q must be an odd prime in {SUPPORTED_Q}")


# ---------------------------------------------------------------------------
# polynomials over F_q
# ---------------------------------------------------------------------------

class FqPoly:
    """Polynomial over F_q, little-endian coefficient tuple, no high zeros."""

    __slots__ = ("q", "coeffs")

    def __init__(self, q: int, coeffs):
        _check_q(q)
        c = [int(x) % q for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.q = q
        self.coeffs = tuple(c)

    @classmethod
    def from_index(cls, q: int, n: int, idx: int) -> "FqPoly":
        """Monic polynomial of degree n from its slice index."""
        c = []
        for _ in range(n):
            c.append(idx % q)
            idx //= q
        c.append(1)
        return cls(q, c)

    def to_index(self) -> int:
        if not self.is_monic:
            raise PreconditionError("index encoding requires a monic polynomial")
        idx = 0
        for c in reversed(self.coeffs[:-1]):
            idx = idx * self.q + c
        return idx

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # degree of 0 is -1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "FqPoly":
        if self.is_zero:
            raise PreconditionError("zero polynomial has no monic normalization")
        inv = pow(self.coeffs[-1], self.q - 2, self.q)
        return FqPoly(self.q, [c * inv for c in self.coeffs])

    def __add__(self, other):
        q = self.q
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % q
        return FqPoly(q, out)

    def __sub__(self, other):
        q = self.q
        n = max(len(self.coeffs), len(other.coeffs))
        out = [0] * n
        for i, c in enumerate(self.coeffs):
            out[i] = c
        for i, c in enumerate(other.coeffs):
            out[i] = (out[i] - c) % q
        return FqPoly(q, out)

    def __mul__(self, other):
        if isinstance(other, int):
            return FqPoly(self.q, [c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return FqPoly(self.q, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return FqPoly(self.q, out)

    def __divmod__(self, other):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = self.q
        rem = list(self.coeffs)
        d = other.degree
        lead_inv = pow(other.coeffs[-1], q - 2, q)
        quo = [0] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i] % q
            if c:
                f = c * lead_inv % q
                quo[i - d] = f
                for j, oc in enumerate(other.coeffs):
                    rem[i - d + j] = (rem[i - d + j] - f * oc) % q
        return FqPoly(q, quo), FqPoly(q, rem)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def reversal(self) -> "FqPoly":
        """T^deg(f) * f(1/T); an involution on polynomials coprime to T."""
        return FqPoly(self.q, tuple(reversed(self.coeffs)))

    def __eq__(self, other):
        return (
            isinstance(other, FqPoly)
            and self.q == other.q
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.q, self.coeffs))

    def __repr__(self):
        if self.is_zero:
            return "FqPoly(0)"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c:
                if i == 0:
                    terms.append(str(c))
                else:
                    t = "T" if i == 1 else f"T^{i}"
                    terms.append(t if c == 1 else f"{c}{t}")
        return f"FqPoly({'+'.join(terms)} mod {self.q})"


def enumerate_monic(q: int, n: int) -> Iterator[FqPoly]:
    """All q^n monic polynomials of degree n, ascending index order."""
    _check_q(q)
    if n < 0:
        raise PreconditionError("n must be >= 0")
    for idx in range(q**n):
        yield FqPoly.from_index(q, n, idx)


@lru_cache(maxsize=None)
def _legendre_table(q: int) -> tuple[int, ...]:
    out = [0] * q
    for c in range(1, q):
        v = pow(c, (q - 1) // 2, q)
        out[c] = 1 if v == 1 else -1
    return tuple(out)


def chi2(f: FqPoly) -> int:
    """The quadratic character modulo T: the residue symbol of f(0)."""
    return _legendre_table(f.q)[f.constant_term()]


# ---------------------------------------------------------------------------
# index-space machinery and the smallest-factor sieve
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _digits(q: int, k: int) -> np.ndarray:
    """(q^k, k) array of base-q digits; row i encodes coefficients of index i."""
    idx = np.arange(q**k, dtype=np.int64)
    out = np.empty((q**k, k), dtype=np.int16)
    for j in range(k):
        out[:, j] = (idx // q**j) % q
    return out


@lru_cache(maxsize=None)
def _qpow(q: int, k: int) -> np.ndarray:
    return q ** np.arange(k, dtype=np.int64)


class _FieldTables:
    """Per-q factorization tables over index space, grown degree by degree.

    For every monic f of degree 1..nmax the tables hold the global id of its
    smallest irreducible factor P (ordered by degree, then index), the index
    of f/P, the multiplicity of P in f, and the global flat index of the
    P-free part.  Degree-m slices live at flat offset (q^m - 1)/(q - 1).
    """

    def __init__(self, q: int):
        _check_q(q)
        self.q = q
        self.nmax = 0
        self.offsets = [0, 1]  # degree-0 slice holds the unit polynomial
        self.spf = [np.full(1, -2, dtype=np.int32)]
        self.quo = [np.zeros(1, dtype=np.int64)]
        self.mult = [np.zeros(1, dtype=np.int8)]
        self.cof = [np.zeros(1, dtype=np.int64)]
        self.irr_deg: list[int] = []
        self.irr_idx: list[int] = []

    def ensure(self, nmax: int):
        while self.nmax < nmax:
            self._add_degree(self.nmax + 1)
        return self

    def _add_degree(self, m: int):
        q = self.q
        size = q**m
        spf = np.full(size, -1, dtype=np.int32)
        quo = np.zeros(size, dtype=np.int64)
        for d in range(1, m // 2 + 1):
            gd = _digits(q, m - d)
            qp = _qpow(q, m)
            for gid in self._irr_ids_of_degree(d):
                pidx = self.irr_idx[gid]
                pc = self._poly_coeffs(d, pidx)
                # multiply every monic g of degree m-d by P, vectorized
                acc = np.zeros((q ** (m - d), m + 1), dtype=np.int32)
                gfull = np.concatenate(
                    [gd, np.ones((q ** (m - d), 1), dtype=np.int16)], axis=1
                )
                for i, c in enumerate(pc):
                    if c:
                        acc[:, i : i + m - d + 1] += c * gfull
                acc %= q
                fidx = acc[:, :m].astype(np.int64) @ qp
                fresh = spf[fidx] < 0
                spf[fidx[fresh]] = gid
                quo[fidx[fresh]] = np.nonzero(fresh)[0]
        new = np.nonzero(spf < 0)[0]
        first_gid = len(self.irr_deg)
        self.irr_deg.extend([m] * len(new))
        self.irr_idx.extend(int(i) for i in new)
        spf[new] = np.arange(first_gid, first_gid + len(new), dtype=np.int32)
        # quo of an irreducible is the unit polynomial (degree-0 index 0)
        quo[new] = 0
        mult = np.ones(size, dtype=np.int8)
        cof = np.zeros(size, dtype=np.int64)
        irr_deg_arr = np.asarray(self.irr_deg, dtype=np.int16)
        d_of = irr_deg_arr[spf]
        gdeg = m - d_of
        gdeg[spf >= first_gid] = 0  # irreducible: quotient is the unit
        for gd_val in np.unique(gdeg):
            sel = np.nonzero(gdeg == gd_val)[0]
            gq = quo[sel]
            g_spf = self.spf[gd_val][gq]
            same = g_spf == spf[sel]
            mult[sel[same]] = self.mult[gd_val][gq[same]] + 1
            cof[sel[same]] = self.cof[gd_val][gq[same]]
            cof[sel[~same]] = self.offsets[gd_val] + gq[~same]
        self.spf.append(spf)
        self.quo.append(quo)
        self.mult.append(mult)
        self.cof.append(cof)
        self.offsets.append(self.offsets[-1] + size)
        self.nmax = m

    def _irr_ids_of_degree(self, d: int):
        return [g for g in range(len(self.irr_deg)) if self.irr_deg[g] == d]

    def _poly_coeffs(self, d: int, idx: int) -> list[int]:
        q = self.q
        c = []
        for _ in range(d):
            c.append(idx % q)
            idx //= q
        c.append(1)
        return c

    def irreducibles(self, d: int) -> list[FqPoly]:
        self.ensure(d)
        return [
            FqPoly.from_index(self.q, d, self.irr_idx[g])
            for g in self._irr_ids_of_degree(d)
        ]

    def multiplicative_values(self, nmax: int,
                              ppval: Callable[[np.ndarray, np.ndarray], np.ndarray],
                              dtype=np.float64) -> list[np.ndarray]:
        """Value arrays per degree for a multiplicative function given its
        prime-power values ppval(gid, ell)."""
        self.ensure(nmax)
        flat = np.empty(self.offsets[nmax + 1], dtype=dtype)
        flat[0] = 1
        out = [flat[0:1]]
        for m in range(1, nmax + 1):
            sl = slice(self.offsets[m], self.offsets[m + 1])
            pv = ppval(self.spf[m], self.mult[m])
            flat[sl] = flat[self.cof[m]] * pv
            out.append(flat[sl])
        return out

    def irr_chi2(self) -> np.ndarray:
        """chi2(P) for every registered irreducible, by global id."""
        leg = _legendre_table(self.q)
        q = self.q
        out = np.empty(len(self.irr_deg), dtype=np.int8)
        for g, (d, idx) in enumerate(zip(self.irr_deg, self.irr_idx)):
            out[g] = leg[idx % q]
        return out


_FIELD_TABLES: dict[int, _FieldTables] = {}


def field_tables(q: int) -> _FieldTables:
    if q not in _FIELD_TABLES:
        _FIELD_TABLES[q] = _FieldTables(q)
    return _FIELD_TABLES[q]


def monic_irreducibles(q: int, d: int) -> list[FqPoly]:
    """All monic irreducibles of degree d."""
    return field_tables(q).irreducibles(d)


def is_irreducible(f: FqPoly) -> bool:
    if f.is_zero or f.degree < 1:
        return False
    g = f.monic()
    t = field_tables(g.q)
    t.ensure(g.degree)
    gid = int(t.spf[g.degree][g.to_index()])
    return t.irr_deg[gid] == g.degree and t.irr_idx[gid] == g.to_index()


@dataclass(frozen=True)
class Factorization:
    """unit * prod P_i^{e_i} with distinct monic irreducibles, sorted."""

    unit: int
    factors: tuple[tuple[FqPoly, int], ...]

    def reconstruct(self, q: int) -> FqPoly:
        out = FqPoly(q, (self.unit,))
        for p, e in self.factors:
            for _ in range(e):
                out = out * p
        return out


def factor(f: FqPoly) -> Factorization:
    """Complete factorization via the smallest-factor tables."""
    if f.is_zero:
        raise PreconditionError("cannot factor the zero polynomial")
    q = f.q
    unit = f.coeffs[-1]
    g = f.monic()
    t = field_tables(q)
    t.ensure(max(g.degree, 1))
    found: dict[FqPoly, int] = {}
    deg, idx = g.degree, g.to_index() if g.degree > 0 else 0
    while deg > 0:
        gid = int(t.spf[deg][idx])
        p = FqPoly.from_index(q, t.irr_deg[gid], t.irr_idx[gid])
        e = int(t.mult[deg][idx])
        found[p] = found.get(p, 0) + e
        nxt = int(t.cof[deg][idx])
        deg = int(np.searchsorted(t.offsets, nxt, side="right")) - 1
        idx = nxt - t.offsets[deg]
    items = sorted(found.items(), key=lambda pe: (pe[0].degree, pe[0].to_index()))
    return Factorization(unit, tuple(items))


def b_indicator(f: FqPoly) -> int:
    """1 iff every irreducible with residue symbol -1 divides f evenly."""
    if f.is_zero:
        raise PreconditionError("b is undefined at 0")
    if f.degree == 0:
        return 1
    for p, e in factor(f).factors:
        if e % 2 == 1 and chi2(p) == -1:
            return 0
    return 1


def dz_ff(f: FqPoly, z) -> Fraction:
    """d_z(f) = prod over P^l || f of C(l + z - 1, l), exact."""
    if f.is_zero:
        raise PreconditionError("d_z is undefined at 0")
    z = Fraction(z)
    out = Fraction(1)
    if f.degree == 0:
        return out
    for _, e in factor(f).factors:
        out *= _binom_frac(e + z - 1, e)
    return out


def _binom_frac(top, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= (top - i) / (k - i)
    return out


# ---------------------------------------------------------------------------
# slice values
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def b_slice(q: int, n: int, max_enum: int = DEFAULT_MAX_ENUM) -> np.ndarray:
    """Indicator of A^2 + T B^2 representability over the degree-n monic slice.

    Definition-level marking over arbitrary A, B in F_q[T]: scaling A or B by
    a unit multiplies its square by a square unit, so it suffices to combine
    monic-or-zero squares with every square-unit multiple on the
    non-degree-carrying side.  (For q = 3 the only square unit is 1 and this
    reduces to monic pairs; for q = 1 mod 4 the extra multiples genuinely
    enlarge the set.)
    """
    _check_q(q)
    if n < 0:
        raise PreconditionError("n must be >= 0")
    if q**n > max_enum:
        raise BudgetExceededError(f"slice size {q**n} exceeds budget {max_enum}")
    if n == 0:
        return np.array([True])
    bits = np.zeros(q**n, dtype=bool)
    qp = _qpow(q, n)
    square_units = sorted({c * c % q for c in range(1, q)})

    def sq_coeffs(deg: int) -> np.ndarray:
        # squares of all monic polynomials of given degree, coefficient rows
        g = np.concatenate(
            [_digits(q, deg), np.ones((q**deg, 1), dtype=np.int16)], axis=1
        ).astype(np.int32)
        out = np.zeros((q**deg, 2 * deg + 1), dtype=np.int32)
        for i in range(deg + 1):
            out[:, i : i + deg + 1] += g * g[:, i : i + 1]
        return out % q

    if n % 2 == 0:
        a = n // 2
        main = sq_coeffs(a)[:, :n]  # leading coefficient 1 dropped
        pieces = [np.zeros((1, n), dtype=np.int32)]  # B = 0
        for bdeg in range((n - 2) // 2 + 1):
            tb2 = np.zeros((q**bdeg, n), dtype=np.int32)
            tb2[:, 1 : 2 * bdeg + 2] = sq_coeffs(bdeg)
            for s in square_units:
                pieces.append(s * tb2 % q)
        others = np.concatenate(pieces, axis=0)
    else:
        bdeg = (n - 1) // 2
        tb2 = np.zeros((q**bdeg, n + 1), dtype=np.int32)
        tb2[:, 1:] = sq_coeffs(bdeg)
        main = tb2[:, :n]  # leading coefficient 1 dropped
        pieces = [np.zeros((1, n), dtype=np.int32)]  # A = 0
        for adeg in range((n - 1) // 2 + 1):
            a2 = np.zeros((q**adeg, n), dtype=np.int32)
            a2[:, : 2 * adeg + 1] = sq_coeffs(adeg)
            for s in square_units:
                pieces.append(s * a2 % q)
        others = np.concatenate(pieces, axis=0)
    chunk = max(1, (1 << 22) // max(len(others), 1))
    for lo in range(0, len(main), chunk):
        block = (main[lo : lo + chunk, None, :] + others[None, :, :]) % q
        idx = block.reshape(-1, n).astype(np.int64) @ qp
        bits[idx] = True
    return bits


def b_slice_multiplicative(q: int, n: int) -> np.ndarray:
    """b over the degree-n slice from the prime-power rule; oracle route."""
    t = field_tables(q).ensure(n)
    c2 = t.irr_chi2()

    def ppval(gid, ell):
        return ((ell % 2 == 0) | (c2[gid] != -1)).astype(np.float64)

    return t.multiplicative_values(n, ppval)[n] > 0.5


def dz_slice(q: int, n: int, z: float) -> np.ndarray:
    """d_z over the degree-n monic slice (float)."""
    t = field_tables(q).ensure(n)
    bin_table = np.empty(n + 1)
    bin_table[0] = 1.0
    for ell in range(1, n + 1):
        bin_table[ell] = bin_table[ell - 1] * (ell + z - 1) / ell

    def ppval(gid, ell):
        return bin_table[ell.astype(np.int64)]

    return t.multiplicative_values(n, ppval)[n]


def alpha_slice(q: int, n: int, alpha: str, z=None) -> np.ndarray:
    """Float value array for alpha in {"b", "dz"} over the monic slice."""
    if alpha == "b":
        return b_slice(q, n).astype(np.float64)
    if alpha == "dz":
        if z is None:
            raise PreconditionError("dz slice needs z")
        return dz_slice(q, n, float(z))
    raise PreconditionError(f"unknown arithmetic function {alpha!r}")


def alpha_on_t_power(alpha: str, k: int, z=None) -> float:
    """alpha(T^k) for the character-sum weights."""
    if alpha == "b":
        return 1.0
    if alpha == "dz":
        out = 1.0
        for i in range(k):
            out *= (float(z) + k - 1 - i) / (k - i)
        return out
    raise PreconditionError(f"unknown arithmetic function {alpha!r}")


def interval_sum(alpha: Callable[[FqPoly], object], A: FqPoly, h: int):
    """Sum of alpha over the short interval {A + g : deg g <= h}."""
    if not A.is_monic:
        raise PreconditionError("interval center must be monic")
    n = A.degree
    if not 0 <= h <= n - 1:
        raise PreconditionError("need 0 <= h <= n-1")
    q = A.q
    total = None
    for gidx in range(q ** (h + 1)):
        g = FqPoly(q, [(gidx // q**j) % q for j in range(h + 1)])
        v = alpha(A + g)
        total = v if total is None else total + v
    return total


@dataclass(frozen=True)
class VarianceResult:
    value: float
    exact: Fraction | None
    mean: float
    cosets: int


def variance_brute(alpha: str, q: int, n: int, h: int, *, z=None,
                   exact: bool | None = None,
                   max_enum: int = DEFAULT_MAX_ENUM) -> VarianceResult:
    """Population variance of interval sums over all monic degree-n centers.

    Interval membership depends only on the coefficients above degree h, so
    the slice reshapes into q^(n-h-1) cosets of size q^(h+1).
    """
    _check_q(q)
    if not 0 <= h <= n - 1:
        raise PreconditionError("need 0 <= h <= n-1")
    if q**n > max_enum:
        raise BudgetExceededError(f"slice size {q**n} exceeds budget {max_enum}")
    cosets = q ** (n - h - 1)
    if alpha == "b":
        vals = b_slice(q, n, max_enum=max_enum)
        nu = vals.reshape(cosets, q ** (h + 1)).sum(axis=1, dtype=np.int64)
        s = int(nu.sum())
        s2 = int((nu.astype(object) ** 2).sum())
        exact_var = Fraction(cosets * s2 - s * s, cosets * cosets)
        return VarianceResult(float(exact_var), exact_var, s / cosets, cosets)
    if alpha != "dz":
        raise PreconditionError(f"unknown arithmetic function {alpha!r}")
    if exact is None:
        exact = q**n <= 100_000
    if exact:
        zf = Fraction(z)
        fac_cache = _factor_shapes(q, n)
        nu = [Fraction(0)] * cosets
        width = q ** (h + 1)
        for idx, shape in enumerate(fac_cache):
            v = Fraction(1)
            for e in shape:
                v *= _binom_frac(e + zf - 1, e)
            nu[idx // width] += v
        s = sum(nu)
        mean = s / cosets
        var = sum((x - mean) ** 2 for x in nu) / cosets
        return VarianceResult(float(var), var, float(mean), cosets)
    vals = dz_slice(q, n, float(z))
    nu = vals.reshape(cosets, q ** (h + 1)).sum(axis=1)
    mean = float(nu.mean())
    var = float(np.mean((nu - mean) ** 2))
    return VarianceResult(var, None, mean, cosets)


@lru_cache(maxsize=32)
def _factor_shapes(q: int, n: int) -> tuple[tuple[int, ...], ...]:
    """Multiplicity multiset of every monic degree-n polynomial, by index."""
    t = field_tables(q).ensure(n)
    out = []
    offsets = t.offsets
    for idx in range(q**n):
        shape = []
        deg, i = n, idx
        while deg > 0:
            shape.append(int(t.mult[deg][i]))
            nxt = int(t.cof[deg][i])
            deg = int(np.searchsorted(offsets, nxt, side="right")) - 1
            i = nxt - offsets[deg]
        out.append(tuple(shape))
    return tuple(out)


# ---------------------------------------------------------------------------
# irreducible census and the mean of b
# ---------------------------------------------------------------------------

def _moebius(n: int) -> int:
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


@lru_cache(maxsize=None)
def irreducible_census(q: int, dmax: int):
    """(pi_d, plus_d, minus_d) for d = 1..dmax: total number of monic
    irreducibles and the counts with residue symbol +1 / -1.

    The symbol-weighted counts follow from the degree-d coefficient of
    u d/du log L(u, chi2) being zero (that L-function is identically 1).
    """
    pi = [0] * (dmax + 1)
    plus = [0] * (dmax + 1)
    minus = [0] * (dmax + 1)
    for d in range(1, dmax + 1):
        pi[d] = sum(_moebius(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0) // d
        rest = 0
        for e in range(1, d):
            if d % e == 0:
                sign = 1 if (d // e) % 2 == 0 else -1
                rest += e * (plus[e] + sign * minus[e])
        diff = -rest // d  # plus_d - minus_d
        tot = pi[d] - (1 if d == 1 else 0)  # exclude T, whose symbol is 0
        plus[d] = (tot + diff) // 2
        minus[d] = (tot - diff) // 2
        if plus[d] + minus[d] != tot or (tot + diff) % 2:
            raise InternalCheckError(f"census inconsistency at q={q}, d={d}")
    return tuple(pi[1:]), tuple(plus[1:]), tuple(minus[1:])


def k_q_constant(q: int, cutoff: int = 24) -> float:
    """K_q = (1-1/q)^(-1/2) prod_{chi2(P)=-1} (1 - q^(-2 deg P))^(-1/2)."""
    _, _, minus = irreducible_census(q, cutoff)
    log_k = -0.5 * math.log1p(-1.0 / q)
    for d, md in enumerate(minus, start=1):
        log_k += -0.5 * md * math.log1p(-float(q) ** (-2 * d))
    return math.exp(log_k)


@dataclass(frozen=True)
class MeanBReport:
    q: int
    n: int
    empirical: float
    k_q: float
    central_binomial: float
    predicted: float
    rel_error: float


def mean_b_check(q: int, n: int, cutoff: int = 24) -> MeanBReport:
    """Empirical mean of b over the degree-n slice against K_q * C(n-1/2, n)."""
    emp = float(b_slice(q, n).mean())
    kq = k_q_constant(q, cutoff)
    binom = float(_binom_frac(Fraction(n) - Fraction(1, 2), n))
    pred = kq * binom
    return MeanBReport(q, n, emp, kq, binom, pred, abs(emp - pred) / pred)
