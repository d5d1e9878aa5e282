"""Dirichlet characters modulo T^m over F_q[T], with L-polynomials.

The unit group (F_q[T]/T^m)^x is written as an explicit direct product: a
lifted generator of the constants times principal units 1 + T^i (i prime to
q).  The candidate basis is not taken on faith: construction enumerates all
products and fails hard unless they hit every unit exactly once.  Character
sums over whole degree slices are then multidimensional DFTs of
residue-class weight vectors, which yields S(n, alpha, chi) for every
character at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetExceededError, InternalCheckError, PreconditionError
from .ffield import (
    DEFAULT_MAX_GROUP,
    FqPoly,
    _check_q,
    _legendre_table,
    _qpow,
    alpha_on_t_power,
    alpha_slice,
    b_slice,
    variance_brute,
)
from .series import FormalPowerSeries, one_minus_u_pow

RH_TOL = 1e-6
ROOT_RESIDUAL_TOL = 1e-8


def _primitive_root(q: int) -> int:
    for g in range(2, q):
        x, order = g, 1
        while x != 1:
            x = x * g % q
            order += 1
        if order == q - 1:
            return g
    raise InternalCheckError(f"no primitive root mod {q}")


class CharacterTable:
    """The dual of (F_q[T]/T^m)^x, indexed by exponent tuples.

    Characters are flat indices into the mixed-radix box prod(dims); the
    character with all-zero exponents is trivial, and evenness (triviality
    on the constants) is exponent 0 on the first axis.
    """

    def __init__(self, q: int, m: int, max_group: int = DEFAULT_MAX_GROUP):
        _check_q(q)
        if m < 1:
            raise PreconditionError("modulus exponent m must be >= 1")
        group_order = q ** (m - 1) * (q - 1)
        if group_order > max_group:
            raise BudgetExceededError(
                f"unit group of order {group_order} exceeds budget {max_group}"
            )
        self.q = q
        self.m = m
        self.size = q**m
        self.group_order = group_order
        gens = [FqPoly(q, (_primitive_root(q),))]
        dims = [q - 1]
        for i in range(1, m):
            if i % q == 0:
                continue
            k = 0
            while i * q**k < m:
                k += 1
            gens.append(FqPoly(q, (1,) + (0,) * (i - 1) + (1,)))
            dims.append(q**k)
        self.gens = gens
        self.dims = tuple(dims)
        self._build_addresses()
        self._unit_s_cache: dict[tuple, np.ndarray] = {}

    # -- construction ------------------------------------------------------

    def _modmul_indices(self, indices: np.ndarray, g: FqPoly) -> np.ndarray:
        q, m = self.q, self.m
        dig = np.empty((len(indices), m), dtype=np.int32)
        for j in range(m):
            dig[:, j] = (indices // q**j) % q
        acc = np.zeros_like(dig)
        for i, c in enumerate(g.coeffs[:m]):
            if c:
                acc[:, i:] += c * dig[:, : m - i]
        acc %= q
        return acc.astype(np.int64) @ _qpow(q, m)

    def _build_addresses(self):
        elems = np.array([1], dtype=np.int64)  # the unit polynomial
        coords = np.zeros((1, 0), dtype=np.int32)
        for g, d in zip(self.gens, self.dims):
            blocks = [elems]
            for _ in range(d - 1):
                blocks.append(self._modmul_indices(blocks[-1], g))
            elems = np.concatenate(blocks)
            base = np.repeat(np.arange(d, dtype=np.int32), len(coords))
            coords = np.concatenate(
                [np.tile(coords, (d, 1)), base[:, None]], axis=1
            )
        if len(elems) != self.group_order:
            raise InternalCheckError("generator orders do not multiply up")
        if (elems % self.q == 0).any():
            raise InternalCheckError("non-unit produced by generators")
        dlog = np.full(self.size, -1, dtype=np.int64)
        flat = np.ravel_multi_index(coords.T, self.dims)
        if len(np.unique(flat)) != self.group_order:
            raise InternalCheckError("generator products collide")
        dlog[elems] = flat
        units = np.nonzero(np.arange(self.size) % self.q != 0)[0]
        if (dlog[units] < 0).any():
            raise InternalCheckError(
                "candidate generators do not span the unit group"
            )
        self.dlog = dlog
        self.units = units
        lcm = 1
        for d in self.dims:
            lcm = lcm * d // math.gcd(lcm, d)
        self._phase_lcm = lcm
        self._phase_weights = np.array(
            [lcm // d for d in self.dims], dtype=np.int64
        )
        # unit coordinates, aligned with self.units
        self._unit_coords = np.stack(
            np.unravel_index(dlog[units], self.dims), axis=1
        ).astype(np.int64)

    # -- basic character queries --------------------------------------------

    def characters(self) -> range:
        return range(self.group_order)

    def char_coords(self, a: int) -> tuple[int, ...]:
        return tuple(int(x) for x in np.unravel_index(a, self.dims))

    def is_trivial(self, a: int) -> bool:
        return a == 0

    def is_even(self, a: int) -> bool:
        return self.char_coords(a)[0] == 0

    def char_pow(self, a: int, e: int) -> int:
        coords = np.array(self.char_coords(a), dtype=np.int64)
        coords = (coords * e) % np.array(self.dims, dtype=np.int64)
        return int(np.ravel_multi_index(coords, self.dims))

    def even_count(self) -> int:
        return self.group_order // (self.q - 1)

    def _subgroup_coords(self) -> np.ndarray:
        """Coordinates of 1 + c T^(m-1), c != 0: the kernel probe for
        primitivity (characters trivial there come from modulus T^(m-1))."""
        if self.m < 2:
            return np.zeros((0, len(self.dims)), dtype=np.int64)
        idx = 1 + np.arange(1, self.q, dtype=np.int64) * self.q ** (self.m - 1)
        return np.stack(
            np.unravel_index(self.dlog[idx], self.dims), axis=1
        ).astype(np.int64)

    def is_primitive(self, a: int) -> bool:
        probes = self._subgroup_coords()
        if len(probes) == 0:
            return not self.is_trivial(a)
        coords = np.array(self.char_coords(a), dtype=np.int64)
        ph = (probes @ (coords * self._phase_weights)) % self._phase_lcm
        return bool((ph != 0).any())

    def primitive_mask(self) -> np.ndarray:
        """Boolean array over all characters."""
        probes = self._subgroup_coords()
        grids = np.indices(self.dims).reshape(len(self.dims), -1).T
        ph = (grids * self._phase_weights) @ probes.T % self._phase_lcm
        out = (ph != 0).any(axis=1)
        return out

    def even_primitive_indices(self) -> np.ndarray:
        mask = self.primitive_mask()
        grids = np.indices(self.dims).reshape(len(self.dims), -1).T
        mask &= grids[:, 0] == 0
        return np.nonzero(mask)[0]

    def chi_values(self, a: int) -> np.ndarray:
        """chi(r) over all q^m residues; zero off the units."""
        coords = np.array(self.char_coords(a), dtype=np.int64)
        ph = (self._unit_coords @ (coords * self._phase_weights)) % self._phase_lcm
        vals = np.zeros(self.size, dtype=complex)
        vals[self.units] = np.exp(2j * np.pi * ph / self._phase_lcm)
        return vals

    def chi2_values(self) -> np.ndarray:
        """The quadratic character modulo T on residues: legendre(r(0))."""
        leg = np.array(_legendre_table(self.q), dtype=np.float64)
        return leg[np.arange(self.size) % self.q]

    # -- character sums over degree slices ----------------------------------

    def residue_indices(self, deg: int) -> np.ndarray:
        """Residue mod T^m of every monic degree-deg polynomial, by index."""
        idx = np.arange(self.q**deg, dtype=np.int64)
        if deg < self.m:
            return idx + self.q**deg
        return idx % self.size

    def s_transform(self, deg: int, weights: np.ndarray) -> np.ndarray:
        """S(deg, alpha, chi) for ALL characters, as an array shaped dims.

        weights is the alpha-value vector over the degree slice; characters
        vanish off units, and the sum over each residue class collapses to a
        bincount followed by a group DFT.
        """
        res = self.residue_indices(deg)
        unit = res % self.q != 0
        w = np.zeros(self.group_order)
        np.add.at(w, self.dlog[res[unit]], weights[unit])
        return np.fft.ifftn(w.reshape(self.dims)) * self.group_order

    def s_transform_weighted(self, deg: int, weights: np.ndarray,
                             residue_factor: np.ndarray) -> np.ndarray:
        res = self.residue_indices(deg)
        unit = res % self.q != 0
        w = np.zeros(self.group_order)
        np.add.at(w, self.dlog[res[unit]], (weights * residue_factor[res])[unit])
        return np.fft.ifftn(w.reshape(self.dims)) * self.group_order

    def unit_s(self, deg: int, twist_chi2: bool = False) -> np.ndarray:
        """S(deg, 1, chi) (or chi*chi2) for all characters, cached."""
        key = (deg, twist_chi2)
        if key not in self._unit_s_cache:
            ones = np.ones(self.q**deg)
            if twist_chi2:
                arr = self.s_transform_weighted(deg, ones, self.chi2_values())
            else:
                arr = self.s_transform(deg, ones)
            self._unit_s_cache[key] = arr.reshape(-1)
        return self._unit_s_cache[key]


@lru_cache(maxsize=32)
def build_characters(q: int, m: int,
                     max_group: int = DEFAULT_MAX_GROUP) -> CharacterTable:
    return CharacterTable(q, m, max_group)


# ---------------------------------------------------------------------------
# L-polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LPolynomial:
    """L(u, chi) = sum_n S(n, 1, chi) u^n, a polynomial for nontrivial chi."""

    q: int
    coeffs: tuple[complex, ...]
    inverse_roots: tuple[complex, ...]
    residual: float

    def rh_ok(self, tol: float = RH_TOL) -> bool:
        """Every inverse root has modulus 1 (trivial) or sqrt(q)."""
        rq = math.sqrt(self.q)
        return all(
            abs(abs(g) - 1.0) <= tol or abs(abs(g) - rq) <= tol
            for g in self.inverse_roots
        )

    def nontrivial_angles(self, tol: float = 1e-4) -> np.ndarray:
        """Inverse roots of modulus sqrt(q), normalized to the unit circle."""
        rq = math.sqrt(self.q)
        out = [g / rq for g in self.inverse_roots if abs(abs(g) - rq) <= tol * rq]
        return np.array(out, dtype=complex)


def _roots_and_residual(coeffs: np.ndarray) -> tuple[np.ndarray, float]:
    c = np.asarray(coeffs, dtype=complex)
    scale = float(np.abs(c).max())
    deg = len(c) - 1
    while deg > 0 and abs(c[deg]) <= 1e-12 * scale:
        deg -= 1
    if deg == 0:
        return np.zeros(0, dtype=complex), 0.0
    poly = c[: deg + 1][::-1]
    roots = np.roots(poly)
    gammas = 1.0 / roots
    vals = np.polyval(poly, roots)
    residual = float(np.abs(vals).max() / max(scale, 1.0))
    return gammas, residual


def l_polynomial(table: CharacterTable, a: int, order: int | None = None) -> LPolynomial:
    """L-polynomial of the nontrivial character with flat index a.

    With order > m-1 the extra coefficients are computed too (they must
    vanish; useful as a consistency check).
    """
    if table.is_trivial(a):
        raise PreconditionError("L(u, chi_0) is not a polynomial; excluded")
    order = table.m - 1 if order is None else order
    coeffs = [complex(table.unit_s(d)[a]) for d in range(order + 1)]
    gammas, residual = _roots_and_residual(np.array(coeffs[: table.m]))
    if residual > ROOT_RESIDUAL_TOL:
        raise InternalCheckError(f"root residual {residual} too large")
    return LPolynomial(table.q, tuple(coeffs), tuple(gammas), residual)


def l_polynomial_twisted(table: CharacterTable, a: int) -> LPolynomial:
    """L-polynomial of chi * chi2 for the character with flat index a."""
    coeffs = [complex(table.unit_s(d, twist_chi2=True)[a]) for d in range(table.m)]
    gammas, residual = _roots_and_residual(np.array(coeffs))
    if residual > ROOT_RESIDUAL_TOL:
        raise InternalCheckError(f"root residual {residual} too large")
    return LPolynomial(table.q, tuple(coeffs), tuple(gammas), residual)


def s_n_alpha_chi(table: CharacterTable, n: int, alpha: str, a: int,
                  z=None) -> complex:
    """S(n, alpha, chi): the alpha-weighted character sum over monic degree n."""
    vals = alpha_slice(table.q, n, alpha, z)
    return complex(table.s_transform(n, vals).reshape(-1)[a])


# ---------------------------------------------------------------------------
# identity verifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    q: int
    n: int
    h: int
    alpha: str
    lhs: float
    rhs: float
    abs_diff: float


def charsum_variance(q: int, n: int, h: int, alpha: str, z=None,
                     max_group: int = DEFAULT_MAX_GROUP) -> float:
    """The even-character-sum formula for the short-interval variance:

    sum over even nontrivial chi mod T^(n-h) of
    |sum_m alpha(T^(n-m)) S(m, alpha, chi)|^2 / q^(2(n-h-1)).
    """
    if not 0 <= h <= n - 2:
        raise PreconditionError("need 0 <= h <= n-2")
    table = build_characters(q, n - h, max_group)
    acc = np.zeros(table.dims, dtype=complex)
    for m in range(n + 1):
        w = alpha_on_t_power(alpha, n - m, z)
        if w == 0.0:
            continue
        vals = alpha_slice(q, m, alpha, z)
        acc += w * table.s_transform(m, vals)
    sq = np.abs(acc) ** 2
    total = float(sq[0].sum() - sq.reshape(-1)[0])  # even chars minus trivial
    return total / float(q) ** (2 * (n - h - 1))


def verify_variance_identity(q: int, n: int, h: int, alpha: str = "b",
                             z=None) -> IdentityReport:
    """Brute-force variance against the character-sum formula."""
    lhs = variance_brute(alpha, q, n, h, z=z).value
    rhs = charsum_variance(q, n, h, alpha, z)
    return IdentityReport(q, n, h, alpha, lhs, rhs, abs(lhs - rhs))


@dataclass(frozen=True)
class BSeriesRow:
    char_index: int
    n: int
    direct: complex
    series: complex
    abs_diff: float


def b_generating_series(table: CharacterTable, a: int, order: int,
                        i_limit: int | None = None) -> FormalPowerSeries:
    """The square-root L-function product whose u^n coefficient is S(n,b,chi).

    The infinite product over i is truncated at ceil(log2(order)) + 1 by
    default: substituting u -> u^(2^i) kills everything below order 2^i.
    """
    if i_limit is None:
        i_limit = max(1, math.ceil(math.log2(max(order, 2))) + 1)

    def l_series(ai: int, twisted: bool) -> FormalPowerSeries:
        lp = l_polynomial_twisted(table, ai) if twisted else l_polynomial(table, ai)
        coeffs = list(lp.coeffs) + [0j] * (order + 1 - len(lp.coeffs))
        return FormalPowerSeries(coeffs[: order + 1])

    out = (l_series(a, False) * l_series(a, True)).pow_fractional(0.5)
    chi_t = 0j  # chi(T) = 0 for characters modulo T^m
    out = out * one_minus_u_pow(-0.5, order, scale=chi_t)
    for i in range(1, i_limit + 1):
        if 2**i > order:
            break
        ai = table.char_pow(a, 2**i)
        if table.is_trivial(ai):
            raise InternalCheckError("character power became trivial")
        ratio = l_series(ai, False) * l_series(ai, True).inverse()
        w = 2.0 ** -(i + 1)
        out = out * ratio.pow_fractional(w).compose_u_power(2**i)
        out = out * one_minus_u_pow(w, order, scale=chi_t).compose_u_power(2**i)
    return out


def verify_b_series_identity(q: int, m: int, n_max: int,
                   i_limit: int | None = None) -> list[BSeriesRow]:
    """S(n, b, chi) two ways, for every even nontrivial chi mod T^m."""
    table = build_characters(q, m)
    out = []
    direct_all = [
        table.s_transform(n, b_slice(q, n).astype(np.float64)).reshape(-1)
        for n in range(n_max + 1)
    ]
    for a in table.characters():
        if table.is_trivial(a) or not table.is_even(a):
            continue
        series = b_generating_series(table, a, n_max, i_limit)
        for n in range(n_max + 1):
            d = complex(direct_all[n][a])
            s = complex(series[n])
            out.append(BSeriesRow(a, n, d, s, abs(d - s)))
    return out


@dataclass(frozen=True)
class UnitarizedVarianceReport:
    q: int
    n: int
    h: int
    lhs: float
    rhs: float
    abs_diff: float
    characters: int


def verify_unitarized_variance(q: int, n: int, h: int) -> UnitarizedVarianceReport:
    """Variance/q^(h+1) against the even-primitive unitarized-root formula.

    For even primitive chi the L-polynomial carries the factor (1-u); the
    remaining inverse roots have modulus sqrt(q) and are normalized onto the
    unit circle by rescaling coefficients, so no root extraction is needed.
    """
    if not 0 <= h <= n - 2:
        raise PreconditionError("need 0 <= h <= n-2")
    m = n - h
    table = build_characters(q, m)
    rq = math.sqrt(q)
    total = 0.0
    chars = table.even_primitive_indices()
    for a in chars:
        lp = l_polynomial(table, int(a))
        # deflate the trivial zero at u = 1: L/(1-u) has partial-sum coeffs
        csum = np.cumsum(np.array(lp.coeffs, dtype=complex))
        if abs(csum[-1]) > 1e-6 * max(1.0, np.abs(csum).max()):
            raise InternalCheckError("even primitive L must vanish at u=1")
        det1 = csum[:-1]  # degree m-2 polynomial, constant term 1
        lpt = l_polynomial_twisted(table, int(a))
        det2 = np.array(lpt.coeffs, dtype=complex)  # degree m-1
        scale1 = det1 * rq ** -np.arange(len(det1))
        scale2 = det2 * rq ** -np.arange(len(det2))
        prod = np.convolve(scale1, scale2)[: n + 1]
        coeffs = list(prod) + [0j] * (n + 1 - len(prod))
        root = FormalPowerSeries(coeffs).pow_fractional(0.5)
        total += abs(complex(root[n])) ** 2
    rhs = total / float(q) ** (n - h - 1)
    lhs = variance_brute("b", q, n, h).value / float(q) ** (h + 1)
    return UnitarizedVarianceReport(q, n, h, lhs, rhs, abs(lhs - rhs), len(chars))


def rh_check(q: int, m: int, tol: float = RH_TOL):
    """RH moduli for every nontrivial character modulo T^m.

    Returns (num_checked, worst_deviation); raises InternalCheckError on a
    violation, which would indicate a bug rather than new mathematics.
    """
    table = build_characters(q, m)
    rq = math.sqrt(q)
    worst = 0.0
    checked = 0
    for a in table.characters():
        if table.is_trivial(a):
            continue
        lp = l_polynomial(table, a)
        checked += 1
        for g in lp.inverse_roots:
            dev = min(abs(abs(g) - 1.0), abs(abs(g) - rq))
            worst = max(worst, dev)
        if not lp.rh_ok(tol):
            raise InternalCheckError(
                f"inverse-root modulus violation at q={q}, m={m}, chi={a}"
            )
    return checked, worst
