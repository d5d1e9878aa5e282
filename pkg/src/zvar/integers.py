"""Integer-side sieve experiments: sums of two squares and divisor weights.

A packed bit sieve marks every n = a^2 + b^2 up to X directly; counts come
from word-level popcount prefixes.  The smooth reference count is the real
integral of x^s against the analytically continued Dirichlet series of the
indicator, evaluated by Gauss-Legendre quadrature after a substitution that
removes the endpoint singularity.  Variances over random short intervals,
arithmetic progressions, and the large-modulus correction are computed
exactly or by seeded Monte Carlo and compared against the partition-side
predictions.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetExceededError, InternalCheckError, PreconditionError
from . import partitions

MAX_SIEVE = 2 * 10**9
_SEGMENT_BITS = 1 << 24


# ---------------------------------------------------------------------------
# the bit sieve
# ---------------------------------------------------------------------------

class BitSieve:
    """Packed indicator of sums of two squares on [0, X], with prefix counts.

    Bit n is set iff n = a^2 + b^2 for integers a, b >= 0.  `word_prefix[w]`
    holds the number of set bits strictly below word w, so counting is one
    gather plus one masked popcount.
    """

    def __init__(self, X: int, words: np.ndarray):
        self.X = X
        self.words = words
        pop = np.bitwise_count(words).astype(np.int64)
        self.word_prefix = np.concatenate([[0], np.cumsum(pop)])
        self._elements: np.ndarray | None = None

    def get(self, n: int) -> bool:
        if not 0 <= n <= self.X:
            raise PreconditionError(f"{n} outside sieve range 0..{self.X}")
        return bool((int(self.words[n >> 6]) >> (n & 63)) & 1)

    def count(self, x) -> int:
        """B(x): number of set bits n with 1 <= n <= x."""
        return int(self.count_many(np.array([x]))[0])

    def count_many(self, xs) -> np.ndarray:
        xs = np.floor(np.asarray(xs, dtype=np.float64)).astype(np.int64)
        if (xs < 0).any() or (xs > self.X).any():
            raise PreconditionError("count query outside sieve range")
        w = xs >> 6
        masks = (np.uint64(2) << (xs & 63).astype(np.uint64)) - np.uint64(1)
        partial = np.bitwise_count(self.words[w] & masks).astype(np.int64)
        total = self.word_prefix[w] + partial
        return total - 1  # bit 0 (n = 0 = 0^2+0^2) is excluded from B(x)

    def elements(self) -> np.ndarray:
        """Sorted array of all set n in [1, X]."""
        if self._elements is None:
            chunks = []
            nbits = len(self.words) * 64
            step = _SEGMENT_BITS
            for lo in range(0, nbits, step):
                w = self.words[lo // 64 : (lo + step) // 64]
                bits = np.unpackbits(w.view(np.uint8), bitorder="little")
                idx = np.flatnonzero(bits).astype(np.int64) + lo
                chunks.append(idx)
            els = np.concatenate(chunks)
            els = els[(els >= 1) & (els <= self.X)]
            self._elements = els
        return self._elements


def _mark_segment(lo: int, hi: int) -> np.ndarray:
    """Boolean buffer for [lo, hi): marks a^2 + b^2 with 0 <= a <= b."""
    seg = np.zeros(hi - lo, dtype=bool)
    amax = math.isqrt((hi - 1) // 2)
    for a in range(amax + 1):
        a2 = a * a
        b0 = max(a, math.isqrt(max(lo - a2 - 1, 0)))
        while b0 * b0 + a2 < lo:
            b0 += 1
        b1 = math.isqrt(hi - 1 - a2)
        if b1 < b0:
            continue
        b = np.arange(b0, b1 + 1, dtype=np.int64)
        seg[a2 + b * b - lo] = True
    return seg


def sieve_b(X: int, threads: int = 1) -> BitSieve:
    """Exact indicator of S up to X by direct a^2 + b^2 marking."""
    if X < 1:
        raise PreconditionError("X must be >= 1")
    if X > MAX_SIEVE:
        raise BudgetExceededError(f"X exceeds the memory guard {MAX_SIEVE}")
    nbits = ((X + 1 + 63) // 64) * 64
    ranges = [(lo, min(lo + _SEGMENT_BITS, nbits)) for lo in range(0, nbits, _SEGMENT_BITS)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            segs = list(pool.map(lambda r: _mark_segment(*r), ranges))
    else:
        segs = [_mark_segment(*r) for r in ranges]
    bits = np.concatenate(segs)
    bits[X + 1 :] = False
    words = np.packbits(bits, bitorder="little").view(np.uint64)
    return BitSieve(X, words)


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if is_p[i]:
            is_p[i * i :: i] = False
    return np.flatnonzero(is_p).astype(np.int64)


def next_prime(v: int) -> int:
    v = max(int(v), 2)
    small = primes_upto(math.isqrt(v) + 2)
    while True:
        if all(v % int(p) for p in small[small * small <= v]):
            return v
        v += 1


def spf_sieve(limit: int) -> np.ndarray:
    """Smallest prime factor table, spf[0] = spf[1] = 1."""
    if limit > 10**7 * 2:
        raise BudgetExceededError("spf table capped at 2e7")
    spf = np.zeros(limit + 1, dtype=np.int32)
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == 0:
            view = spf[i * i :: i]
            view[view == 0] = i
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[:2] = 1
    return spf


def _strip_prime_powers(limit: int, spf: np.ndarray, visit):
    """Call visit(indices, prime, exponent) for each maximal prime power
    dividing each n <= limit; vectorized rounds over the whole range."""
    cur = np.arange(limit + 1, dtype=np.int64)
    cur[:2] = 1
    while True:
        act = np.flatnonzero(cur > 1)
        if len(act) == 0:
            break
        p = spf[cur[act]].astype(np.int64)
        rem = cur[act] // p
        e = np.ones(len(act), dtype=np.int64)
        while True:
            m = rem % p == 0
            if not m.any():
                break
            rem[m] //= p[m]
            e[m] += 1
        visit(act, p, e)
        cur[act] = rem


def sieve_b_factorization(limit: int) -> np.ndarray:
    """Oracle sieve: n in S iff every prime p = 3 mod 4 divides n evenly."""
    spf = spf_sieve(limit)
    ok = np.ones(limit + 1, dtype=bool)

    def visit(idx, p, e):
        bad = (p % 4 == 3) & (e % 2 == 1)
        ok[idx[bad]] = False

    _strip_prime_powers(limit, spf, visit)
    ok[0] = True  # 0 = 0^2 + 0^2, matching the marking sieve
    return ok


def dz_values(limit: int, z: float, spf: np.ndarray | None = None) -> np.ndarray:
    """d_z(n) for all n <= limit (float), via the smallest-prime-factor table."""
    if spf is None:
        spf = spf_sieve(limit)
    emax = int(math.log2(max(limit, 2))) + 1
    binom = np.ones(emax + 1)
    for ell in range(1, emax + 1):
        binom[ell] = binom[ell - 1] * (ell + z - 1) / ell
    vals = np.ones(limit + 1)

    def visit(idx, p, e):
        vals[idx] *= binom[e]

    _strip_prime_powers(limit, spf, visit)
    return vals


def dz_int(n: int, z: float, spf: np.ndarray) -> float:
    """d_z of a single integer via the smallest-prime-factor table."""
    if n < 1 or n >= len(spf):
        raise PreconditionError("n outside spf table")
    out = 1.0
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        b = 1.0
        for i in range(e):
            b *= (z + e - 1 - i) / (e - i)
        out *= b
    return out


# ---------------------------------------------------------------------------
# real Dirichlet series values
# ---------------------------------------------------------------------------

_CVZ_TERMS = 48


def _alternating_sum(term, n: int = _CVZ_TERMS) -> float:
    """Accelerated sum of sum_k (-1)^k term(k) for totally monotone terms."""
    d = (3.0 + 2.0 * math.sqrt(2.0)) ** n
    d = (d + 1.0 / d) / 2.0
    b = -1.0
    c = -d
    s = 0.0
    for k in range(n):
        c = b - c
        s += c * term(k)
        b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0))
    return s / d


def zeta_real(s: float) -> float:
    """Riemann zeta on (0.5, 128], s != 1, via the accelerated eta series."""
    if not 0.5 < s <= 128:
        raise PreconditionError("zeta_real domain is (0.5, 128]")
    if abs(s - 1.0) < 1e-12:
        raise PreconditionError("zeta_real pole at s = 1")
    eta = _alternating_sum(lambda k: (k + 1.0) ** -s)
    return eta / (1.0 - 2.0 ** (1.0 - s))


def l4_real(s: float) -> float:
    """L(s, chi_4) on (0.5, 128] via the accelerated alternating series."""
    if not 0.5 < s <= 128:
        raise PreconditionError("l4_real domain is (0.5, 128]")
    return _alternating_sum(lambda k: (2.0 * k + 1.0) ** -s)


def f_real(s: float) -> float:
    """The analytic factor f with F(s) = (s-1)^(-1/2) f(s), for s in (1/2, 1).

    f(s) = sqrt((s-1) zeta(s) L(s,chi4) / (1 - 2^-s))
           * prod_{k>=1} (zeta(2^k s)/L(2^k s,chi4) * (1 - 2^(-2^k s)))^(1/2^(k+1)),
    truncated once 2^k s > 64.  The radicand is positive because zeta < 0 on
    (1/2, 1).
    """
    if not 0.5 < s < 1.0:
        raise PreconditionError("f_real domain is (1/2, 1)")
    radicand = (s - 1.0) * zeta_real(s) * l4_real(s) / (1.0 - 2.0**-s)
    if radicand <= 0:
        raise InternalCheckError(f"nonpositive radicand at s={s}")
    out = math.sqrt(radicand)
    k = 1
    while 2**k * s <= 64:
        sk = 2**k * s
        factor = zeta_real(sk) / l4_real(sk) * (1.0 - 2.0**-sk)
        out *= factor ** (0.5 ** (k + 1))
        k += 1
    return out


class DirichletRealEval:
    """Quadrature nodes and cached f values for the smooth count integral.

    The substitution s = 1 - t^2 removes the (1-s)^(-1/2) endpoint factor;
    a further t = sin(phi)/sqrt(2) softens the (2s-1)^(-1/4) blow-up of f at
    s = 1/2 (inherited from the zeta(2s) pole), after which Gauss-Legendre
    passes the node-doubling gate at 200 nodes.
    """

    def __init__(self, nodes: int = 200):
        x, w = np.polynomial.legendre.leggauss(nodes)
        phi = 0.25 * math.pi * (x + 1.0)
        wphi = 0.25 * math.pi * w
        t = np.sin(phi) / math.sqrt(2.0)
        self.s_nodes = 1.0 - t * t
        self.f_nodes = np.array([f_real(s) for s in self.s_nodes])
        self.coef = (
            (2.0 / math.pi)
            * wphi
            * self.f_nodes
            / self.s_nodes
            * np.cos(phi)
            / math.sqrt(2.0)
        )

    def bbar_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        if (xs < 2).any():
            raise PreconditionError("bbar needs x >= 2")
        return np.exp(np.log(xs)[:, None] * self.s_nodes[None, :]) @ self.coef

    def bbar(self, x: float) -> float:
        return float(self.bbar_many(np.array([x]))[0])


@lru_cache(maxsize=4)
def dirichlet_eval(nodes: int = 200) -> DirichletRealEval:
    return DirichletRealEval(nodes)


def bbar(x: float, nodes: int = 200) -> float:
    """Smooth reference count for B(x)."""
    return dirichlet_eval(nodes).bbar(x)


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def landau_K() -> float:
    """The density constant, through the telescoped Euler product:

    K^2 = 1/2 * prod_{p=3 mod 4} (1-p^-2)^(-1), and the product over p = 3
    mod 4 of (1-p^-s)^(-1) telescopes into zeta/L factors at s = 2^j * 2.
    """
    log_p3 = 0.0  # log prod_{p=3(4)} (1 - p^-2)^(-1)
    j = 1
    while 2.0**j <= 128:
        sj = 2.0**j
        r = zeta_real(sj) * (1.0 - 2.0**-sj) / l4_real(sj)
        log_p3 += math.log(r) / 2.0**j
        j += 1
    return math.exp(0.5 * (log_p3 - math.log(2.0)))


def landau_K_naive(plimit: int = 10**6) -> float:
    """Direct truncated product over primes p = 3 mod 4; sanity route."""
    ps = primes_upto(plimit)
    ps = ps[ps % 4 == 3].astype(np.float64)
    log_prod = -0.5 * np.log1p(-(ps**-2.0)).sum()
    return math.exp(float(log_prod) - 0.5 * math.log(2.0))


def a_z_euler(z: float, prime_cutoff: int = 10**6, lmax: int = 64):
    """a_z = prod_p (1-1/p)^(z^2) sum_l C(l+z-1, l)^2 p^-l, truncated.

    Returns (value, tail_bound_estimate); the tail over p > cutoff is
    O(1/(cutoff log cutoff)).
    """
    if z <= 0:
        raise PreconditionError("a_z needs z > 0")
    if z == 1.0:
        # d_1 is identically 1, the series is zeta, and every Euler factor
        # (1 - 1/p) sum_l p^-l collapses to 1
        return 1.0, 0.0
    ps = primes_upto(prime_cutoff).astype(np.float64)
    binom = np.ones(lmax + 1)
    for ell in range(1, lmax + 1):
        binom[ell] = binom[ell - 1] * (ell + z - 1) / ell
    x = 1.0 / ps
    series = np.zeros_like(ps)
    for ell in range(lmax, -1, -1):
        series = series * x + binom[ell] ** 2
    logs = z * z * np.log1p(-x) + np.log(series)
    value = math.exp(float(logs.sum()))
    c = abs(binom[1] ** 2 - z * z)  # 1/p^2 coefficient scale of each factor
    tail = (c + z**4) / (prime_cutoff * math.log(prime_cutoff))
    return value, tail


def a2_dirichlet_fit(limit: int = 10**7, points: int = 8) -> float:
    """Second route to a_2: the mean square of the divisor count grows like
    x times a cubic in log x; fit the cubic on exact partial sums and read
    off 6 * (leading coefficient)."""
    spf = spf_sieve(limit)
    d = dz_values(limit, 2.0, spf)
    csum = np.cumsum(d * d)
    xs = np.array([limit // 2**j for j in range(points)], dtype=np.float64)
    ys = np.array([csum[int(x)] for x in xs])
    L = np.log(xs)
    A = np.stack([xs * L**3, xs * L**2, xs * L, xs], axis=1)
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    return 6.0 * float(coef[0])


# ---------------------------------------------------------------------------
# variances
# ---------------------------------------------------------------------------

def variance_ap(sieve: BitSieve, p: int, X: int | None = None) -> float:
    """Exact variance of S-counts up to X over reduced residue classes mod p."""
    X = sieve.X if X is None else X
    if X > sieve.X:
        raise PreconditionError("sieve does not cover X")
    if not 2 <= p < X:
        raise PreconditionError("need prime p with 2 <= p < X")
    if p > X // 2:
        return _variance_ap_large(sieve, p, X)
    els = sieve.elements()
    els = els[: int(np.searchsorted(els, X, side="right"))]
    counts = np.bincount(els % p, minlength=p)[1:].astype(np.float64)
    mean = counts.mean()
    return float(np.mean((counts - mean) ** 2))


def _variance_ap_large(sieve: BitSieve, p: int, X: int) -> float:
    """p in (X/2, X): each reduced class holds one or two integers, so the
    variance reduces to counts plus one shifted-pair correlation."""
    total = sieve.count(p - 1) + sieve.count(X) - sieve.count(p)
    pairs = correlation_sum(sieve, p, X)
    sum_sq = total + 2 * pairs
    mean = total / (p - 1)
    return sum_sq / (p - 1) - mean * mean


def correlation_sum(sieve: BitSieve, p: int, x: int) -> int:
    """Number of n <= x - p with both n and n + p in S."""
    els = sieve.elements()
    lo = els[els <= x - p]
    pos = np.searchsorted(els, lo + p)
    ok = (pos < len(els)) & (els[np.minimum(pos, len(els) - 1)] == lo + p)
    return int(ok.sum())


def variance_interval(sieve: BitSieve, X: int, H: float, samples: int = 100_000,
                      seed: int = 0):
    """Monte Carlo variance of S-counts in random intervals (x, x+H],
    centered by the smooth reference count.  Returns (value, se)."""
    if H < 1:
        raise PreconditionError("H must be >= 1")
    if sieve.X < 2 * X + int(H) + 1:
        raise PreconditionError("sieve does not cover 2X + H")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    xs = X + rng.random(samples) * X
    ev = dirichlet_eval()
    db = sieve.count_many(xs + H) - sieve.count_many(xs)
    dref = ev.bbar_many(xs + H) - ev.bbar_many(xs)
    dev2 = (db - dref) ** 2
    return float(dev2.mean()), float(dev2.std() / math.sqrt(samples))


@dataclass(frozen=True)
class ApRow:
    delta: float
    p: int
    normalized: float
    prediction: float


@dataclass(frozen=True)
class IntervalRow:
    delta: float
    H: float
    normalized: float
    se: float
    prediction: float


@lru_cache(maxsize=8)
def _g_table(n: int = 50):
    """T(n; N)/T(n; n) for N = 1..n (the finite-n prediction curve)."""
    tnn = partitions.t_coefficient(n, n, exact=False)
    return tuple(
        partitions.t_coefficient(n, N, exact=False) / tnn for N in range(1, n + 1)
    )


def g_of(s: float, n: int = 50) -> float:
    """Finite-n prediction value at s (default profile size n = 50)."""
    if s >= 1.0:
        return 1.0
    N = min(n, max(1, int(math.floor(s * n + 1e-9))))
    return _g_table(n)[N - 1]


def fig2_rows(sieve: BitSieve, X: int, deltas, gcurve_n: int = 50) -> list[ApRow]:
    """Arithmetic-progression variance against K * G(1 - delta)."""
    K = landau_K()
    rows = []
    for d in deltas:
        p = next_prime(round(X ** (1.0 - d)))
        delta = math.log(X / p) / math.log(X)
        norm = variance_ap(sieve, p, X) / ((X / p) / math.sqrt(math.log(X)))
        rows.append(ApRow(delta, p, norm, K * g_of(1.0 - delta, gcurve_n)))
    return rows


def fig1_rows(sieve: BitSieve, X: int, deltas, samples: int = 100_000,
              seed: int = 0, gcurve_n: int = 50) -> list[IntervalRow]:
    """Short-interval variance against K * G(1 - delta)."""
    K = landau_K()
    rows = []
    for i, d in enumerate(deltas):
        H = X**d
        v, se = variance_interval(sieve, X, H, samples, seed + i)
        scale = H / math.sqrt(math.log(X))
        rows.append(
            IntervalRow(d, H, v / scale, se / scale, K * g_of(1.0 - d, gcurve_n))
        )
    return rows


def hl_prediction(X: int, delta: float) -> float:
    """Large-modulus normalized prediction:
    K + (-K^2 X^delta + 1 - X^-delta)/sqrt(log X)."""
    K = landau_K()
    return K + (-(K**2) * X**delta + 1.0 - X**-delta) / math.sqrt(math.log(X))


def hl_delta_max(X: int) -> float:
    """The prediction increases up to delta = log(1/K)/log(X)."""
    return math.log(1.0 / landau_K()) / math.log(X)


def appendix_c_rows(sieve: BitSieve, X: int, count: int = 10) -> list[ApRow]:
    """Large primes p in (X/2, X): data vs the corrected prediction."""
    dmax = math.log(2.0) / math.log(X)
    rows = []
    for j in range(count):
        d = dmax * (j + 0.5) / count
        p = next_prime(round(X ** (1.0 - d)))
        if p >= X:
            continue
        delta = math.log(X / p) / math.log(X)
        norm = variance_ap(sieve, p, X) / ((X / p) / math.sqrt(math.log(X)))
        rows.append(ApRow(delta, p, norm, hl_prediction(X, delta)))
    return rows


def variance_ap_dz(X: int, p: int, z: float, values: np.ndarray | None = None,
                   spf: np.ndarray | None = None) -> float:
    """Variance of d_z-sums over reduced residue classes modulo prime p."""
    if X > 10**7:
        raise BudgetExceededError("d_z experiments capped at X = 1e7")
    if values is None:
        values = dz_values(X, z, spf)
    n = np.arange(X + 1, dtype=np.int64)
    w = values.copy()
    w[0] = 0.0
    sums = np.bincount(n % p, weights=w, minlength=p)[1:]
    mean = sums.mean()
    return float(np.mean((sums - mean) ** 2))


def dz_variance_rows(X: int, z: float, deltas, gcurve_n: int = 50) -> list[ApRow]:
    """Normalized d_z progression variance against the partition prediction

    a_z * F_z(1 - delta) / Gamma(z^2), with F_z the finite-n CDF curve.
    """
    spf = spf_sieve(X)
    values = dz_values(X, z, spf)
    az, _ = a_z_euler(z)
    rows = []
    for d in deltas:
        p = next_prime(round(X ** (1.0 - d)))
        delta = math.log(X / p) / math.log(X)
        scale = (X / p) * math.log(X) ** (z * z - 1.0)
        norm = variance_ap_dz(X, p, z, values) / scale
        s = 1.0 - delta
        N = max(1, int(math.floor(s * gcurve_n + 1e-9)))
        fz = float(partitions.prob_lambda1_le(gcurve_n, z, N))
        rows.append(ApRow(delta, p, norm, az * fz / math.gamma(z * z)))
    return rows
