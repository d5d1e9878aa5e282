"""Truncated formal power series with exact or floating coefficients.

Coefficients are duck-typed: ``Fraction`` gives exact arithmetic, ``float``
or ``complex`` give IEEE arithmetic, and any field-like scalar type works.
All operations truncate at a fixed order and never read beyond it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError

COMPLEX_TOL = 1e-9  # per-coefficient tolerance for approximate equality


class FormalPowerSeries:
    """A power series known through degree ``order`` (inclusive)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise PreconditionError("series needs at least the constant term")
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value, order: int) -> "FormalPowerSeries":
        return cls((value,) + (0,) * order)

    @classmethod
    def one(cls, order: int) -> "FormalPowerSeries":
        return cls.constant(1, order)

    @classmethod
    def geometric(cls, order: int) -> "FormalPowerSeries":
        """1 + u + u^2 + ..."""
        return cls((1,) * (order + 1))

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def __repr__(self):
        return f"FormalPowerSeries({list(self.coeffs)!r})"

    def __eq__(self, other):
        if not isinstance(other, FormalPowerSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def truncated(self, order: int) -> "FormalPowerSeries":
        if order >= self.order:
            return FormalPowerSeries(self.coeffs + (0,) * (order - self.order))
        return FormalPowerSeries(self.coeffs[: order + 1])

    def _common_order(self, other) -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        m = self._common_order(other)
        return FormalPowerSeries(
            tuple(self.coeffs[i] + other.coeffs[i] for i in range(m + 1))
        )

    def __sub__(self, other):
        m = self._common_order(other)
        return FormalPowerSeries(
            tuple(self.coeffs[i] - other.coeffs[i] for i in range(m + 1))
        )

    def __neg__(self):
        return FormalPowerSeries(tuple(-c for c in self.coeffs))

    def scale(self, factor) -> "FormalPowerSeries":
        return FormalPowerSeries(tuple(factor * c for c in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, FormalPowerSeries):
            return self.scale(other)
        m = self._common_order(other)
        a, b = self.coeffs, other.coeffs
        out = [0] * (m + 1)
        for i in range(m + 1):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(m + 1 - i):
                bj = b[j]
                if bj != 0:
                    out[i + j] = out[i + j] + ai * bj
        return FormalPowerSeries(out)

    __rmul__ = __mul__

    def inverse(self) -> "FormalPowerSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        a = self.coeffs
        if a[0] == 0:
            raise PreconditionError("inverse requires nonzero constant term")
        n = self.order
        inv0 = 1 / Fraction(a[0]) if isinstance(a[0], (int, Fraction)) else 1 / a[0]
        out = [0] * (n + 1)
        out[0] = inv0
        for m in range(1, n + 1):
            s = 0
            for i in range(1, m + 1):
                if a[i] != 0:
                    s = s + a[i] * out[m - i]
            out[m] = -s * inv0
        return FormalPowerSeries(out)

    def _normalized_to_one(self) -> "FormalPowerSeries":
        """Require constant term 1; inexact coefficients get a tolerance and
        are rescaled so the recursions below can assume an exact 1."""
        c0 = self.coeffs[0]
        if isinstance(c0, (int, Fraction)):
            if c0 != 1:
                raise PreconditionError("constant term must be 1")
            return self
        if abs(complex(c0) - 1.0) > COMPLEX_TOL:
            raise PreconditionError("constant term must be 1")
        return FormalPowerSeries((1,) + tuple(c / c0 for c in self.coeffs[1:]))

    def log(self) -> "FormalPowerSeries":
        """log(f) for f with constant term 1, via integrating f'/f."""
        a = self._normalized_to_one().coeffs
        n = self.order
        out = [0] * (n + 1)
        # l_m satisfies m*a_0*l_m = m*a_m - sum_{i=1}^{m-1} i*l_i*a_{m-i}
        for m in range(1, n + 1):
            s = m * a[m]
            for i in range(1, m):
                if a[m - i] != 0 and out[i] != 0:
                    s = s - i * out[i] * a[m - i]
            out[m] = _div_int(s, m)
        return FormalPowerSeries(out)

    def exp(self) -> "FormalPowerSeries":
        """exp(f) for f with constant term 0."""
        if self.coeffs[0] != 0:
            raise PreconditionError("exp requires constant term 0")
        n = self.order
        g = self.coeffs
        out = [0] * (n + 1)
        out[0] = 1
        for m in range(1, n + 1):
            s = 0
            for i in range(1, m + 1):
                if g[i] != 0 and out[m - i] != 0:
                    s = s + i * g[i] * out[m - i]
            out[m] = _div_int(s, m)
        return FormalPowerSeries(out)

    def pow_fractional(self, exponent) -> "FormalPowerSeries":
        """f**exponent via exp(exponent*log f); requires constant term 1.

        The branch is fixed by the result having constant term 1.
        """
        return self._normalized_to_one().log().scale(exponent).exp()

    def compose_u_power(self, k: int) -> "FormalPowerSeries":
        """f(u^k) truncated at the original order."""
        if k < 1:
            raise PreconditionError("compose_u_power requires k >= 1")
        n = self.order
        out = [0] * (n + 1)
        for i, c in enumerate(self.coeffs):
            if i * k > n:
                break
            out[i * k] = c
        return FormalPowerSeries(out)

    def isclose(self, other, tol: float = COMPLEX_TOL) -> bool:
        m = self._common_order(other)
        return all(
            abs(complex(self.coeffs[i]) - complex(other.coeffs[i])) <= tol
            for i in range(m + 1)
        )


def _div_int(value, m: int):
    """value / m, staying exact for int/Fraction values."""
    if isinstance(value, (int, Fraction)):
        return Fraction(value, m) if isinstance(value, int) else value / m
    return value / m


def binomial_series(z, order: int) -> FormalPowerSeries:
    """(1 + u)**z as a truncated series: coefficients C(z, k)."""
    coeffs = [1]
    c = 1
    for k in range(1, order + 1):
        c = c * (z - (k - 1))
        c = Fraction(c, k) if isinstance(c, int) else _div_int(c, k)
        coeffs.append(c)
    return FormalPowerSeries(coeffs)


def one_minus_u_pow(z, order: int, scale=1) -> FormalPowerSeries:
    """(1 - scale*u)**z: coefficients C(z, k) * (-scale)**k."""
    base = binomial_series(z, order)
    s = 1
    out = []
    for k in range(order + 1):
        out.append(base[k] * s)
        s = s * (-scale)
    return FormalPowerSeries(out)
