"""Measures on integer partitions built from squared dimensions and contents.

Exact rational arithmetic drives everything at small weight n (enumeration
over all partitions).  Beyond the enumeration limit the cumulative
distribution of the largest part is obtained from a unitary-group generating
function: a Toeplitz determinant with truncated-series entries (stable for
parameters inside the unit interval), a row-bounded exact enumeration for
small integer parameters, and a direct-or-tail enumeration with log weights
otherwise.  The routes cross-check each other in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceededError, PreconditionError

#: largest weight handled by full enumeration over partitions
EXACT_ENUM_LIMIT = 36

#: integer measure parameters up to this size use row/column-bounded enumeration
ROW_BOUND_LIMIT = 4

#: partition-visit budget for the large-n direct/tail float route
ENUM_FLOAT_BUDGET = 2_000_000


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

class Partition:
    """A weakly decreasing tuple of positive parts; the empty partition is ()."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        for i, p in enumerate(parts):
            if p < 1:
                raise PreconditionError(f"parts must be positive, got {p}")
            if i and parts[i - 1] < p:
                raise PreconditionError(f"parts must be weakly decreasing: {parts}")
        self.parts = parts

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def largest_part(self) -> int:
        return self.parts[0] if self.parts else 0

    def conjugate(self) -> "Partition":
        return Partition(_conjugate(self.parts))

    def contents(self) -> tuple[int, ...]:
        return _contents(self.parts)

    def dim(self) -> int:
        return _dim(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        if isinstance(other, tuple):
            return self.parts == other
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Partition({list(self.parts)!r})"


def _partition_tuples(n: int, cap: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(cap, n), 0, -1):
        for rest in _partition_tuples(n - first, first):
            yield (first,) + rest


def enumerate_partitions(n: int, cap: int | None = None) -> Iterator[Partition]:
    """All partitions of n with largest part <= cap, largest-first order."""
    if n < 0:
        raise PreconditionError("n must be >= 0")
    for t in _partition_tuples(n, n if cap is None else cap):
        yield Partition(t)


def enumerate_partitions_split(n: int, cap: int | None = None):
    """(first_part, iterator) groups; disjoint union equals enumerate_partitions.

    The groups can be consumed by independent workers and reduced
    associatively.
    """
    if n == 0:
        yield 0, iter([Partition(())])
        return
    for first in range(min(cap if cap is not None else n, n), 0, -1):
        yield first, (
            Partition((first,) + rest) for rest in _partition_tuples(n - first, first)
        )


@lru_cache(maxsize=None)
def count_partitions(n: int, cap: int) -> int:
    """Number of partitions of n into parts <= cap (dynamic program)."""
    if n == 0:
        return 1
    if cap == 0 or n < 0:
        return 0
    return count_partitions(n - cap, min(cap, n - cap)) + count_partitions(n, cap - 1)


def _conjugate(parts: tuple[int, ...]) -> tuple[int, ...]:
    if not parts:
        return ()
    conj = [0] * parts[0]
    for p in parts:
        for j in range(p):
            conj[j] += 1
    return tuple(conj)


def _contents(parts: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for i, p in enumerate(parts):
        out.extend(j - i for j in range(p))
    return tuple(out)


def _dim(parts: tuple[int, ...]) -> int:
    """Number of standard Young tableaux, by the hook length formula."""
    n = sum(parts)
    if n == 0:
        return 1
    conj = _conjugate(parts)
    hooks = 1
    for i, p in enumerate(parts):
        for j in range(p):
            hooks *= (p - j) + (conj[j] - i) - 1
    return factorial(n) // hooks


def dim(lam) -> int:
    return _dim(_parts_of(lam))


def _parts_of(lam) -> tuple[int, ...]:
    if isinstance(lam, Partition):
        return lam.parts
    return Partition(lam).parts


# ---------------------------------------------------------------------------
# scalar parameters
# ---------------------------------------------------------------------------

def _canon_scalar(z):
    """Normalize a measure parameter: exact rationals where faithfully possible."""
    if isinstance(z, bool):
        raise PreconditionError("boolean is not a valid parameter")
    if isinstance(z, int):
        return Fraction(z)
    if isinstance(z, Fraction):
        return z
    if isinstance(z, float):
        fr = Fraction(z)
        return fr if fr.denominator <= 1 << 20 else z
    if isinstance(z, complex):
        if z.imag == 0:
            return _canon_scalar(z.real)
        return z
    raise PreconditionError(f"unsupported parameter type {type(z)!r}")


@dataclass(frozen=True)
class ZParams:
    """Measure parameter pair; zprime defaults to the complex conjugate of z."""

    z: object
    zprime: object

    @classmethod
    def of(cls, z, zprime=None) -> "ZParams":
        z = _canon_scalar(z)
        if zprime is None:
            zprime = z.conjugate() if isinstance(z, complex) else z
        else:
            zprime = _canon_scalar(zprime)
        return cls(z, zprime)

    @property
    def exact(self) -> bool:
        return isinstance(self.z, Fraction) and isinstance(self.zprime, Fraction)

    def validate(self):
        zz = self.z * self.zprime
        if isinstance(zz, Fraction):
            if zz.denominator == 1 and zz <= 0:
                raise PreconditionError(f"z*zprime = {zz} is a nonpositive integer")
        elif isinstance(zz, complex):
            if zz.imag == 0 and zz.real <= 0 and zz.real == int(zz.real):
                raise PreconditionError(f"z*zprime = {zz} is a nonpositive integer")
        else:
            if zz <= 0 and zz == int(zz):
                raise PreconditionError(f"z*zprime = {zz} is a nonpositive integer")
        return self


def pochhammer(x, j: int):
    """Rising factorial (x)_j = x (x+1) ... (x+j-1); (x)_0 = 1."""
    if j < 0:
        raise PreconditionError("j must be >= 0")
    out = Fraction(1) if isinstance(x, (int, Fraction)) else type(x)(1)
    for k in range(j):
        out = out * (x + k)
    return out


def content_product(lam, t):
    """prod over boxes of (t + content); 1 for the empty partition."""
    out = Fraction(1) if isinstance(t, (int, Fraction)) else 1
    for c in _contents(_parts_of(lam)):
        out = out * (t + c)
    return out


# ---------------------------------------------------------------------------
# exact measure values (enumeration route)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _partition_data(n: int):
    """(parts, largest, dim^2, contents) for every partition of n."""
    out = []
    for parts in _partition_tuples(n, n):
        d = _dim(parts)
        out.append((parts, parts[0] if parts else 0, d * d, _contents(parts)))
    return tuple(out)


def _int_content_product(contents, a: int, b: int) -> int:
    prod = 1
    for c in contents:
        prod *= a + c * b
    return prod


@lru_cache(maxsize=256)
def _weight_hist_exact(n: int, za: int, zb: int, zpa: int, zpb: int):
    """Integer weights grouped by largest part, for rational z = za/zb etc.

    Returns (hist, den) with P(lambda_1 <= N) = sum(hist[:N+1]) / den.
    """
    hist = [0] * (n + 1)
    for parts, lam1, dim2, contents in _partition_data(n):
        w = dim2 * _int_content_product(contents, za, zb)
        w *= _int_content_product(contents, zpa, zpb)
        hist[lam1] += w
    den = factorial(n)
    bb = zb * zpb
    aa = za * zpa
    for k in range(n):
        den *= aa + k * bb
    return tuple(hist), den


@lru_cache(maxsize=256)
def _weight_hist_float(n: int, z, zp):
    """Complex/float weights grouped by largest part; returns (hist, den)."""
    hist = [0j] * (n + 1)
    for parts, lam1, dim2, contents in _partition_data(n):
        w = complex(dim2)
        for c in contents:
            w *= (z + c) * (zp + c)
        hist[lam1] += w
    den = float(factorial(n)) * complex(pochhammer(complex(z) * complex(zp), n))
    return tuple(hist), den


def z_measure(n: int, p, lam, zprime=None):
    """Probability of one partition of n under the measure with parameters p.

    Exact Fraction for rational parameters, complex/float otherwise.
    """
    params = p if isinstance(p, ZParams) else ZParams.of(p, zprime)
    params.validate()
    parts = _parts_of(lam)
    if sum(parts) != n:
        raise PreconditionError(f"partition {parts} does not have weight {n}")
    if n == 0:
        return Fraction(1) if params.exact else 1.0
    z, zp = params.z, params.zprime
    dim2 = _dim(parts) ** 2
    contents = _contents(parts)
    if params.exact:
        num = dim2 * _int_content_product(contents, z.numerator, z.denominator)
        num *= _int_content_product(contents, zp.numerator, zp.denominator)
        den = factorial(n)
        bb = z.denominator * zp.denominator
        aa = z.numerator * zp.numerator
        for k in range(n):
            den *= aa + k * bb
        return Fraction(num, den)
    w = complex(dim2)
    for c in contents:
        w *= (z + c) * (zp + c)
    val = w / (float(factorial(n)) * complex(pochhammer(complex(z) * complex(zp), n)))
    return val.real if abs(val.imag) < 1e-12 * (1 + abs(val.real)) else val


# ---------------------------------------------------------------------------
# large-n CDF routes
# ---------------------------------------------------------------------------

def _binom_row(z: complex, kmax: int, dtype) -> np.ndarray:
    out = np.empty(kmax + 1, dtype=dtype)
    out[0] = 1
    for k in range(1, kmax + 1):
        out[k] = out[k - 1] * (z - (k - 1)) / k
    return out


@lru_cache(maxsize=16)
def _toeplitz_cdf_table(z: complex, zp: complex, nmax: int, Nmax: int) -> np.ndarray:
    """Float table P[N, n] of the largest-part CDF via a Toeplitz determinant.

    The generating function sum_n t^n (z zp)_n / n! P^{(n)}(lambda_1 <= N)
    equals an N x N Toeplitz determinant with truncated-series entries
    g_m(t) = sum_b C(z, m+b) C(zp, b) t^b.  Numerically reliable only for
    parameters of modulus < 1 (validated against enumeration in tests).
    """
    dtype = complex if (isinstance(z, complex) or isinstance(zp, complex)) else float
    z = complex(z) if dtype is complex else float(np.real(z))
    zp = complex(zp) if dtype is complex else float(np.real(zp))
    order = nmax
    cz = _binom_row(z, order + Nmax, dtype)
    czp = _binom_row(zp, order + Nmax, dtype)
    A = np.zeros((max(Nmax, 1), max(Nmax, 1), order + 1), dtype=dtype)
    for m in range(-(Nmax - 1), Nmax):
        coef = np.zeros(order + 1, dtype=dtype)
        for b in range(max(0, -m), order + 1):
            if m + b > order + Nmax:
                break
            coef[b] = cz[m + b] * czp[b]
        for j in range(max(0, m), min(Nmax, Nmax + m)):
            A[j, j - m] = coef
    nfft = 1
    while nfft < 2 * order + 2:
        nfft *= 2
    fft = np.fft.fft if dtype is complex else np.fft.rfft
    ifft = np.fft.ifft if dtype is complex else np.fft.irfft

    def conv_rows(rows, other_f):
        prod = fft(rows, nfft, axis=-1) * other_f
        out = ifft(prod, nfft, axis=-1)[..., : order + 1]
        return out

    pivots = np.zeros((max(Nmax, 1), order + 1), dtype=dtype)
    pivots[:, 0] = 1
    for k in range(Nmax):
        piv = A[k, k].copy()
        pivots[k] = piv
        if k == Nmax - 1:
            break
        pinv = np.zeros(order + 1, dtype=dtype)
        pinv[0] = 1 / piv[0]
        for m in range(1, order + 1):
            pinv[m] = -np.dot(piv[1 : m + 1], pinv[m - 1 :: -1]) / piv[0]
        L = conv_rows(A[k + 1 :, k], fft(pinv, nfft))
        Rf = fft(A[k, k + 1 :], nfft, axis=-1)
        updf = fft(L, nfft, axis=-1)[:, None, :] * Rf[None, :, :]
        A[k + 1 :, k + 1 :] -= ifft(updf, nfft, axis=-1)[..., : order + 1]

    zz = z * zp
    poch = np.empty(order + 1, dtype=dtype)
    poch[0] = 1
    for k in range(1, order + 1):
        poch[k] = poch[k - 1] * (zz + k - 1)
    factn = np.array([float(factorial(k)) for k in range(order + 1)])
    table = np.zeros((Nmax + 1, order + 1))
    det = np.zeros(order + 1, dtype=dtype)
    det[0] = 1
    table[0, 0] = 1.0
    for N in range(1, Nmax + 1):
        det = np.convolve(det, pivots[N - 1])[: order + 1]
        table[N] = np.real(det * factn / poch)
    np.clip(table, 0.0, 1.0, out=table)
    return table


def _bounded_tuples(n: int, rows: int, cap: int) -> Iterator[tuple[int, ...]]:
    """Partitions of n with at most `rows` parts, each part <= cap."""
    if rows * cap < n:
        return
    if n == 0:
        yield ()
        return
    lo = -(-n // rows)  # smallest admissible first part
    for first in range(min(cap, n), lo - 1, -1):
        for rest in _bounded_tuples(n - first, rows - 1, first):
            yield (first,) + rest


@lru_cache(maxsize=64)
def _prob_row_bounded(n: int, k: int, N: int) -> Fraction:
    """P_{k,k}(lambda_1 <= N) for integer k >= 1, where the measure is
    supported on partitions with at most k rows (contents below row k kill
    the weight)."""
    num = Fraction(0)
    for parts in _bounded_tuples(n, k, n):
        if parts and parts[0] > N:
            continue
        w = Fraction(_dim(parts)) ** 2
        for c in _contents(parts):
            w *= Fraction((k + c) * (k + c))
        num += w
    den = Fraction(factorial(n)) * pochhammer(Fraction(k * k), n)
    return num / den


@lru_cache(maxsize=64)
def _prob_col_bounded(n: int, m: int, N: int) -> Fraction:
    """P_{-m,-m}(lambda_1 <= N): the measure lives on partitions with parts
    <= m, so enumerate those directly."""
    if N >= m:
        return Fraction(1)
    num = Fraction(0)
    den = Fraction(0)
    for parts in _partition_tuples(n, m):
        w = Fraction(_dim(parts)) ** 2
        for c in _contents(parts):
            w *= Fraction((c - m) * (c - m))
        den += w
        if (parts[0] if parts else 0) <= N:
            num += w
    # den equals n! (m^2)_n; summing it avoids a second formula
    return num / den


def _log_weight(parts: tuple[int, ...], z: float, logden: float) -> float:
    d = _dim(parts)
    lw = 2.0 * math.log(float(d)) - logden
    for c in _contents(parts):
        v = z + c
        if v == 0.0:
            return -math.inf
        lw += 2.0 * math.log(abs(v))
    return lw


def _prob_enum_float(n: int, z: float, N: int) -> float:
    """Direct or complementary enumeration with log weights (z real, zp=z)."""
    direct_count = count_partitions(n, N)
    tail_count = sum(count_partitions(n - a, a) for a in range(N + 1, n + 1))
    if min(direct_count, tail_count) > ENUM_FLOAT_BUDGET:
        raise BudgetExceededError(
            f"largest-part CDF at n={n}, N={N}: {min(direct_count, tail_count)} "
            f"partitions exceeds budget {ENUM_FLOAT_BUDGET}"
        )
    logden = math.lgamma(n + 1)
    zz = z * z
    for k in range(n):
        logden += math.log(zz + k)
    if direct_count <= tail_count:
        lws = [
            _log_weight(parts, z, logden) for parts in _partition_tuples(n, N)
        ]
        if not lws:
            return 0.0
        top = max(lws)
        if top == -math.inf:
            return 0.0
        return math.exp(top) * math.fsum(math.exp(lw - top) for lw in lws)
    acc = []
    for a in range(N + 1, n + 1):
        for rest in _partition_tuples(n - a, a):
            acc.append(_log_weight((a,) + rest, z, logden))
    if not acc:
        return 1.0
    top = max(acc)
    if top == -math.inf:
        return 1.0
    return 1.0 - math.exp(top) * math.fsum(math.exp(lw - top) for lw in acc)


def prob_lambda1_le(n: int, p, N: int, zprime=None, exact: bool | None = None):
    """P^{(n)}_{z,z'}(lambda_1 <= N).

    Exact Fractions whenever the parameters are rational and the weight is
    within the enumeration limit (or an integer-parameter bounded route
    applies); floats otherwise.
    """
    params = p if isinstance(p, ZParams) else ZParams.of(p, zprime)
    params.validate()
    if n < 0 or N < 0:
        raise PreconditionError("n and N must be >= 0")
    if n == 0:
        return Fraction(1) if params.exact else 1.0
    if N >= n:
        return Fraction(1) if params.exact else 1.0
    if N == 0:
        return Fraction(0) if params.exact else 0.0
    z, zp = params.z, params.zprime

    if exact is True and not params.exact:
        raise PreconditionError("exact evaluation requires rational parameters")
    use_enum = n <= EXACT_ENUM_LIMIT if exact is None else exact
    if use_enum:
        if n > EXACT_ENUM_LIMIT:
            raise BudgetExceededError(
                f"exact enumeration limited to n <= {EXACT_ENUM_LIMIT}"
            )
        if params.exact:
            hist, den = _weight_hist_exact(
                n, z.numerator, z.denominator, zp.numerator, zp.denominator
            )
            return Fraction(sum(hist[: N + 1]), den)
        hist, den = _weight_hist_float(n, complex(z), complex(zp))
        val = sum(hist[: N + 1]) / den
        return float(val.real)

    # large-n float routes, restricted to zprime = conjugate(z)
    if isinstance(z, Fraction) and isinstance(zp, Fraction) and z == zp:
        if z.denominator == 1 and 1 <= z <= ROW_BOUND_LIMIT:
            return _prob_row_bounded(n, int(z), N)
        if z.denominator == 1 and z < 0 and -z <= ROW_BOUND_LIMIT:
            return _prob_col_bounded(n, int(-z), N)
        if 0 < z < 1:
            table = _toeplitz_cdf_table(float(z), float(zp), n, n)
            return float(table[N, n])
        if z > 1:
            return _prob_enum_float(n, float(z), N)
    if isinstance(z, float) and z == zp:
        if 0 < z < 1:
            table = _toeplitz_cdf_table(z, z, n, n)
            return float(table[N, n])
        if z > 1:
            return _prob_enum_float(n, z, N)
    if isinstance(z, complex) and zp == z.conjugate() and abs(z) < 1:
        table = _toeplitz_cdf_table(z, complex(zp), n, n)
        return float(table[N, n])
    raise PreconditionError(
        f"largest-part CDF beyond n={EXACT_ENUM_LIMIT} supported only for "
        f"real z with z'=z (or |z|<1 complex); got z={z}, z'={zp}, n={n}"
    )


# ---------------------------------------------------------------------------
# the variance coefficient and finite-n curves
# ---------------------------------------------------------------------------

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


def t_coefficient(n: int, N: int, exact: bool | None = None):
    """Pochhammer-weighted convolution of two largest-part CDFs at z = 1/2.

    T(n;N) = sum_j (1/4)_j (1/4)_{n-j} / (j! (n-j)!)
             * P^{(j)}(lam1 <= N-1) * P^{(n-j)}(lam1 <= N).
    Exact Fraction when n is within the enumeration limit, float otherwise.
    """
    if n < 0 or N < 1:
        raise PreconditionError("need n >= 0 and N >= 1")
    if exact is None:
        exact = n <= EXACT_ENUM_LIMIT
    if exact:
        total = Fraction(0)
        for j in range(n + 1):
            wj = pochhammer(QUARTER, j) / factorial(j)
            wnj = pochhammer(QUARTER, n - j) / factorial(n - j)
            p1 = prob_lambda1_le(j, HALF, N - 1) if N - 1 < j else Fraction(1)
            if p1 == 0:
                continue
            p2 = prob_lambda1_le(n - j, HALF, N) if N < n - j else Fraction(1)
            total += wj * wnj * p1 * p2
        return total
    table = _toeplitz_cdf_table(0.5, 0.5, n, n)  # one cached table per n
    w = np.empty(n + 1)
    w[0] = 1.0
    for j in range(1, n + 1):
        w[j] = w[j - 1] * (0.25 + j - 1) / j
    p1 = np.array(
        [1.0 if N - 1 >= j else table[N - 1, j] for j in range(n + 1)]
    )
    p2 = np.array([1.0 if N >= j else table[N, j] for j in range(n + 1)])
    return float(np.sum(w * w[::-1] * p1 * p2[::-1]))


def _floor_sn(s: float, n: int) -> int:
    return int(math.floor(s * n + 1e-9))


def g_curve(n: int, grid: Sequence[float] | None = None, points: int = 100):
    """Finite-n approximation of the limiting variance profile.

    Returns [(s, T(n; N(s)) / T(n; n))] with N(s) = min(n, max(1, floor(s n)));
    the clamp at n makes value(s >= 1) = 1.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if grid is None:
        grid = [i / points for i in range(1, points + 1)]
    exact = n <= EXACT_ENUM_LIMIT
    tnn = t_coefficient(n, n, exact=exact)
    out = []
    for s in grid:
        N = min(n, max(1, _floor_sn(s, n)))
        out.append((float(s), float(t_coefficient(n, N, exact=exact) / tnn)))
    return out


def fz_curve(
    z,
    n: int,
    grid: Sequence[float] | None = None,
    points: int | None = None,
    with_derivative: bool = False,
):
    """Finite-n largest-part CDF curve: (s, P_z^{(n)}(lambda_1 <= floor(s n))).

    With ``with_derivative`` the discrete derivative between consecutive grid
    points is appended as a third column.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if grid is None:
        points = points or n
        grid = [i / points for i in range(1, points + 1)]
    params = ZParams.of(z)
    vals = []
    for s in grid:
        N = _floor_sn(s, n)
        if N <= 0:
            vals.append(1.0 if n == 0 else 0.0)
        else:
            vals.append(float(prob_lambda1_le(n, params, N)))
    if not with_derivative:
        return [(float(s), v) for s, v in zip(grid, vals)]
    out = []
    for i, (s, v) in enumerate(zip(grid, vals)):
        if len(grid) < 2:
            d = 0.0
        elif i == 0:
            d = (vals[1] - vals[0]) / (grid[1] - grid[0])
        else:
            d = (vals[i] - vals[i - 1]) / (grid[i] - grid[i - 1])
        out.append((float(s), v, d))
    return out


def scaled_t_limit_check(n: int, s: float):
    """sqrt(pi n) * T(n; floor(s n)) next to the normalized curve value."""
    if n < 10:
        raise PreconditionError("n must be >= 10 for the scaled check")
    if not 0 < s <= 1:
        raise PreconditionError("s must lie in (0, 1]")
    N = max(1, _floor_sn(s, n))
    exact = n <= EXACT_ENUM_LIMIT
    t = float(t_coefficient(n, N, exact=exact))
    scaled = math.sqrt(math.pi * n) * t
    ref = float(t / t_coefficient(n, n, exact=exact))
    return scaled, ref


# ---------------------------------------------------------------------------
# slice Monte Carlo for the squared-Vandermonde density
# ---------------------------------------------------------------------------

_BARNES_G = {2: 1.0, 3: 2.0, 4: 12.0}  # G(k+1) = prod_{j<k} j!


def gamma_k_mc(k: int, c: float, samples: int = 100_000, seed: int = 0,
               workers: int = 1):
    """Monte Carlo estimate of the slice integral

        gamma_k(c) = 1/(k! G(k+1)^2) * int_{[0,1]^k} delta_c(sum w) Delta(w)^2.

    Returns (estimate, standard_error).  Supported on c in [0, k]; outside
    that interval the estimate is exactly 0.
    """
    if k not in (2, 3, 4):
        raise PreconditionError("k must be one of 2, 3, 4")
    if samples < 1:
        raise PreconditionError("samples must be positive")
    if c <= 0 or c >= k:
        return 0.0, 0.0
    norm = factorial(k) * _BARNES_G[k] ** 2
    seeds = np.random.SeedSequence(seed).spawn(max(1, workers))
    counts = [samples // len(seeds)] * len(seeds)
    counts[-1] += samples - sum(counts)
    total = 0.0
    total_sq = 0.0
    for ss, m in zip(seeds, counts):
        if m == 0:
            continue
        rng = np.random.default_rng(ss)
        w = rng.random((m, k - 1))
        wk = c - w.sum(axis=1)
        ok = (wk >= 0.0) & (wk <= 1.0)
        full = np.concatenate([w, wk[:, None]], axis=1)
        delta2 = np.ones(m)
        for i in range(k):
            for j in range(i + 1, k):
                delta2 *= (full[:, i] - full[:, j]) ** 2
        vals = np.where(ok, delta2, 0.0)
        total += float(vals.sum())
        total_sq += float((vals**2).sum())
    mean = total / samples
    var = max(total_sq / samples - mean**2, 0.0)
    se = math.sqrt(var / samples)
    return mean / norm, se / norm


def gamma_k_identity_value(k: int, s: float, estimate: float) -> float:
    """(k^2-1)! s^(k^2-1) * gamma_k(1/s): the CDF predicted from a slice value."""
    return factorial(k * k - 1) * s ** (k * k - 1) * estimate
