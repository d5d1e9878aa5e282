"""Symmetric-function identities and unitary-group Monte Carlo.

The coefficient of u^n in det(1-u g)^z is evaluated two ways: a truncated
product of binomial series in the eigenvalues, and a Schur expansion whose
coefficients come from dimensions and content products.  Haar averages over
the eigenvalue density are estimated by a Metropolis chain on the squared
Vandermonde weight and compared against the closed form supplied by
`partitions`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .errors import PreconditionError
from .partitions import (
    Partition,
    ZParams,
    _contents,
    _dim,
    _parts_of,
    _partition_tuples,
    enumerate_partitions,
    pochhammer,
    prob_lambda1_le,
)
from .series import FormalPowerSeries, one_minus_u_pow


class GaussianRational:
    """Exact complex numbers a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o - self if o is not NotImplemented else o

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self if o is not NotImplemented else o

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


# ---------------------------------------------------------------------------
# coefficient extraction from det(1 - u g)^z
# ---------------------------------------------------------------------------

def a_nz_from_eigenvalues(z, eigenvalues, n: int):
    """[u^n] prod_i (1 - u y_i)^z via truncated binomial series.

    Exact when z and the eigenvalues are Fraction/GaussianRational.
    """
    if n < 0:
        raise PreconditionError("n must be >= 0")
    acc = FormalPowerSeries.one(n)
    for y in eigenvalues:
        acc = acc * one_minus_u_pow(z, n, scale=y)
    return acc[n]


def schur_expand_a(n: int, z) -> dict[Partition, object]:
    """Schur coefficients of the u^n coefficient of det(1-u g)^z.

    Returns {mu: coeff} with the expansion sum_mu coeff(mu) * s_mu, where
    mu runs over partitions of n; coeff(mu) = (-1)^n dim(mu')/n!
    * prod over boxes of mu' of (z + content).
    """
    if n < 0:
        raise PreconditionError("n must be >= 0")
    sign = 1 if n % 2 == 0 else -1
    out = {}
    for lam in _partition_tuples(n, n):
        coeff = Fraction(_dim(lam), factorial(n)) if isinstance(
            z, (int, Fraction)
        ) else _dim(lam) / factorial(n)
        for c in _contents(lam):
            coeff = coeff * (z + c)
        mu = Partition(_conj(lam))
        out[mu] = sign * coeff
    return out


def _conj(parts):
    if not parts:
        return ()
    conj = [0] * parts[0]
    for p in parts:
        for j in range(p):
            conj[j] += 1
    return tuple(conj)


def schur_eval(lam, xs):
    """Schur polynomial s_lam(x_1..x_N) by Jacobi-Trudi over the h basis.

    Returns 0 when the partition has more rows than variables.  Exact for
    Fraction/GaussianRational inputs.
    """
    parts = _parts_of(lam)
    xs = list(xs)
    N = len(xs)
    ell = len(parts)
    if ell == 0:
        return 1
    if ell > N:
        return 0
    hmax = parts[0] + ell - 1
    # E(t) = prod (1 - x_i t); H = 1/E
    e = FormalPowerSeries.one(hmax)
    for x in xs:
        e = e * FormalPowerSeries((1, -1 * x) + (0,) * (hmax - 1))
    h = e.inverse().coeffs

    def h_at(k):
        if k < 0:
            return 0
        return h[k]

    mat = [
        [h_at(parts[i] - (i + 1) + (j + 1)) for j in range(ell)] for i in range(ell)
    ]
    return _det_exact(mat)


def _det_exact(mat):
    """Determinant by elimination with division; works over any field scalars."""
    m = [row[:] for row in mat]
    k = len(m)
    sign = 1
    det = 1
    for col in range(k):
        pivot_row = None
        for r in range(col, k):
            if m[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            return 0 * det
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            sign = -sign
        piv = m[col][col]
        det = det * piv
        for r in range(col + 1, k):
            if m[r][col] != 0:
                factor = m[r][col] / piv
                m[r] = [m[r][c] - factor * m[col][c] for c in range(k)]
    return sign * det


# ---------------------------------------------------------------------------
# the moment identity: closed form and Schur route
# ---------------------------------------------------------------------------

def rmt_integral_exact(n: int, z, zprime, N: int):
    """(z z')_n / n! * P^{(n)}_{z,z'}(lambda_1 <= N): the closed form for the
    Haar average of A_{n,(z)}(g) A_{n,(z')}(g^{-1}) over N x N unitaries."""
    params = ZParams.of(z, zprime).validate()
    zz = params.z * params.zprime
    return pochhammer(zz, n) / factorial(n) * prob_lambda1_le(n, params, min(N, n))


def schur_route_integral(n: int, z, zprime, N: int):
    """Independent evaluation via Schur orthogonality:
    sum over lam |- n with lam_1 <= N of coeff_z(lam) coeff_z'(lam)."""
    total = Fraction(0) if isinstance(z, (int, Fraction)) else 0.0
    for lam in _partition_tuples(n, min(N, n)):
        base = Fraction(_dim(lam), factorial(n))
        cz = base if isinstance(z, (int, Fraction)) else float(base)
        czp = base if isinstance(zprime, (int, Fraction)) else float(base)
        for c in _contents(lam):
            cz = cz * (z + c)
            czp = czp * (zprime + c)
        total = total + cz * czp
    return total


# ---------------------------------------------------------------------------
# eigenvalue sampling on the squared-Vandermonde density
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenangleSample:
    """One eigenangle configuration: sorted angles in [0, 2pi)."""

    N: int
    angles: tuple[float, ...]
    chain: int
    step: int


class CueSampler:
    """Metropolis chains targeting density ~ prod_{j<k} |e^{i a_j} - e^{i a_k}|^2.

    Single-angle proposals; the proposal width is adapted towards ~35%
    acceptance during burn-in and then frozen.  One sample is emitted per
    full sweep of N single-angle updates.  Reproducible for fixed
    (seed, chains).
    """

    def __init__(self, N: int, chains: int = 64, burn_in: int | None = None,
                 seed: int = 0):
        if N < 1 or N > 10:
            raise PreconditionError("N must be in 1..10")
        self.N = N
        self.chains = chains
        self.burn_in = burn_in if burn_in is not None else 1000 * N
        self.rng = np.random.default_rng(np.random.SeedSequence(seed))
        self.angles = self.rng.random((chains, N)) * 2 * np.pi
        # proposal span in radians, adapted during burn-in
        self.width = 2.0 * np.pi / max(N - 1, 1)
        self.accept_count = 0
        self.proposal_count = 0
        self.step = 0
        self._p1_trace: list[float] = []
        self._burned = False

    def _logw_site(self, angles, j):
        # contribution of site j: sum_k != j 2 log |2 sin((a_j - a_k)/2)|
        if self.N == 1:
            return np.zeros(angles.shape[0])
        diff = angles[:, j, None] - np.delete(angles, j, axis=1)
        s = np.abs(2.0 * np.sin(diff / 2.0))
        with np.errstate(divide="ignore"):
            return 2.0 * np.log(s).sum(axis=1)

    def _sweep(self, adapt: bool):
        for j in range(self.N):
            cur = self._logw_site(self.angles, j)
            prop = self.angles[:, j] + self.width * (self.rng.random(self.chains) - 0.5)
            prop %= 2 * np.pi
            trial = self.angles.copy()
            trial[:, j] = prop
            new = self._logw_site(trial, j)
            accept = np.log(self.rng.random(self.chains) + 1e-300) < new - cur
            self.angles[accept, j] = prop[accept]
            self.accept_count += int(accept.sum())
            self.proposal_count += self.chains
        self.step += 1
        if adapt and self.proposal_count:
            rate = self.accept_count / self.proposal_count
            if rate < 0.30:
                self.width *= 0.85
            elif rate > 0.40:
                self.width *= 1.15
            self.width = min(self.width, 2 * np.pi)

    def _ensure_burned(self):
        if self._burned:
            return
        sweeps = max(1, self.burn_in // self.N)
        for _ in range(sweeps):
            self._sweep(adapt=True)
        self.accept_count = 0
        self.proposal_count = 0
        self._burned = True

    def batches(self, samples: int):
        """Yield (chains, N) angle arrays, one sweep apart, burn-in done."""
        self._ensure_burned()
        produced = 0
        while produced < samples:
            self._sweep(adapt=False)
            self._p1_trace.append(float(np.cos(self.angles).sum(axis=1).mean()))
            yield self.angles.copy()
            produced += self.chains

    def diagnostics(self) -> dict:
        rate = self.accept_count / self.proposal_count if self.proposal_count else 0.0
        trace = np.array(self._p1_trace)
        if len(trace) > 2 and trace.std() > 0:
            x = trace - trace.mean()
            ac1 = float(np.dot(x[:-1], x[1:]) / np.dot(x, x))
        else:
            ac1 = 0.0
        return {"acceptance_rate": rate, "proposal_width": self.width,
                "p1_lag1_autocorr": ac1}


def cue_sample(N: int, chains: int = 64, steps: int = 100,
               burn_in: int | None = None, seed: int = 0):
    """Stream of EigenangleSample; `steps` sweeps are emitted per chain."""
    sampler = CueSampler(N, chains, burn_in, seed)
    for batch in sampler.batches(steps * chains):
        for c in range(chains):
            yield EigenangleSample(
                N, tuple(np.sort(batch[c])), c, sampler.step
            )


def _a_coeff_batch(z: complex, eig: np.ndarray, n: int) -> np.ndarray:
    """[u^n] prod_i (1 - u y_i)^z for each row of eigenvalues; vectorized."""
    B, N = eig.shape
    binom = np.empty(n + 1, dtype=complex)
    binom[0] = 1.0
    for k in range(1, n + 1):
        binom[k] = binom[k - 1] * (z - (k - 1)) / k
    P = np.zeros((B, n + 1), dtype=complex)
    P[:, 0] = 1.0
    for i in range(N):
        y = eig[:, i]
        F = binom[None, :] * np.power((-y)[:, None], np.arange(n + 1)[None, :])
        newP = np.zeros_like(P)
        for k in range(n + 1):
            newP[:, k:] += P[:, : n + 1 - k] * F[:, k : k + 1]
        P = newP
    return P[:, n]


def _batch_mean_se(vals: np.ndarray, nbatches: int = 32):
    m = len(vals) // nbatches * nbatches
    if m == 0:
        return float(np.mean(vals)), float(np.std(vals) / math.sqrt(len(vals)))
    batches = vals[:m].reshape(nbatches, -1).mean(axis=1)
    return float(vals[:m].mean()), float(batches.std(ddof=1) / math.sqrt(nbatches))


def mc_verify_thm42(n: int, z, zprime, N: int, samples: int = 100_000,
                    seed: int = 0, m: int | None = None, chains: int = 256,
                    diagnostics: dict | None = None):
    """Monte Carlo for the Haar average of A_{n,(z)}(g) A_{m,(z')}(g^{-1}).

    Returns (estimate, standard_error, reference); the reference is the
    closed form for m == n and 0 for m != n.  Passing a dict as
    ``diagnostics`` fills it with sampler health numbers.
    """
    if n > 6 or N > 10:
        raise PreconditionError("supported range: n <= 6, N <= 10")
    m = n if m is None else m
    sampler = CueSampler(N, chains=chains, seed=seed)
    zc, zpc = complex(z), complex(zprime)
    vals = []
    for batch in sampler.batches(samples):
        eig = np.exp(1j * batch)
        a1 = _a_coeff_batch(zc, eig, n)
        a2 = _a_coeff_batch(zpc, np.conj(eig), m)
        vals.append(np.real(a1 * a2))
    vals = np.concatenate(vals)[:samples]
    est, se = _batch_mean_se(vals)
    if m == n:
        ref = float(rmt_integral_exact(n, z, zprime, N))
    else:
        ref = 0.0
    if diagnostics is not None:
        diagnostics.update(sampler.diagnostics())
    return est, se, ref


def mc_coset_cancellation(j: int, jprime: int, ell: int, N: int,
                          samples: int = 100_000, seed: int = 0,
                          chains: int = 256):
    """Monte Carlo for int A_j(g) conj(A_j'(g)) det(g)^ell dg at z = 1/2.

    The integrand is homogeneous of degree j - j' + N*ell in the
    eigenvalues, so the average vanishes unless that degree is 0.
    """
    sampler = CueSampler(N, chains=chains, seed=seed)
    vals = []
    for batch in sampler.batches(samples):
        eig = np.exp(1j * batch)
        a1 = _a_coeff_batch(0.5, eig, j)
        a2 = np.conj(_a_coeff_batch(0.5, eig, jprime))
        detl = np.exp(1j * ell * batch.sum(axis=1))
        vals.append(np.real(a1 * a2 * detl))
    vals = np.concatenate(vals)[:samples]
    return _batch_mean_se(vals)


def dual_cauchy_check(xs, ys, degree: int = 6) -> bool:
    """prod (1 + t x_i y_j) == sum_lam t^|lam| s_lam(x) s_lam'(y) through
    the given total degree; exact arithmetic."""
    order = degree
    lhs = FormalPowerSeries.one(order)
    for x in xs:
        for y in ys:
            lhs = lhs * FormalPowerSeries((1, x * y) + (0,) * (order - 1))
    rhs = [Fraction(0)] * (order + 1)
    rhs[0] = Fraction(1)
    for nn in range(1, order + 1):
        for lam in enumerate_partitions(nn):
            sx = schur_eval(lam, xs)
            if sx == 0:
                continue
            sy = schur_eval(lam.conjugate(), ys)
            if sy == 0:
                continue
            rhs[nn] = rhs[nn] + sx * sy
    return all(lhs[k] == rhs[k] for k in range(order + 1))
