"""Truncated formal power series over exact arbitrary-precision rationals.

A series carries its truncation order explicitly: coefficients beyond the
order are unknown, not zero, and every operation returns only the order it
can certify from its operands.  Re-running any computation at a higher order
never changes previously computed coefficients.

Coefficients are fractions.Fraction, so identity checks between series are
exact integer arithmetic, no matter how large the coefficients grow.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = ["RationalSeries", "product_series"]

Coeff = Union[Fraction, int]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _rat(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


# ---------------------------------------------------------------------------
# coefficient-list kernels (length = order + 1, index = power)

def _mul_lists(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [_ZERO] * (order + 1)
    for i, ai in enumerate(a):
        if i > order or ai == 0:
            continue
        top = min(order - i, len(b) - 1)
        for j in range(top + 1):
            if b[j]:
                out[i + j] += ai * b[j]
    return out


def _div_lists(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    if b[0] == 0:
        raise ZeroDivisionError("division by a series with zero constant term")
    inv0 = 1 / b[0]
    out = [_ZERO] * (order + 1)
    for n in range(order + 1):
        acc = a[n] if n < len(a) else _ZERO
        for j in range(1, min(n, len(b) - 1) + 1):
            if b[j]:
                acc -= b[j] * out[n - j]
        out[n] = acc * inv0
    return out


def _compose_lists(f: Sequence[Fraction], g: Sequence[Fraction], order: int) -> list[Fraction]:
    # Horner over the outer coefficients; g must have zero constant term.
    out = [_ZERO] * (order + 1)
    for c in reversed(f):
        out = _mul_lists(out, g, order)
        out[0] += c
    return out


def _derive_list(a: Sequence[Fraction]) -> list[Fraction]:
    return [n * a[n] for n in range(1, len(a))]


def _pow_list(a: Sequence[Fraction], exponent: int, order: int) -> list[Fraction]:
    result = [_ONE] + [_ZERO] * order
    base = list(a)
    e = exponent
    while e:
        if e & 1:
            result = _mul_lists(result, base, order)
        e >>= 1
        if e:
            base = _mul_lists(base, base, order)
    return result


@dataclass(frozen=True)
class RationalSeries:
    """Power series sum_n coeffs[n] * var^n, exact through var^order."""

    coeffs: tuple[Fraction, ...]
    var: str = "x"

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(_rat(c) for c in self.coeffs))

    # -- construction -------------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Coeff], var: str = "x") -> "RationalSeries":
        return cls(tuple(_rat(c) for c in coeffs), var)

    @classmethod
    def constant(cls, value: Coeff, order: int, var: str = "x") -> "RationalSeries":
        return cls((_rat(value),) + (_ZERO,) * order, var)

    @classmethod
    def identity(cls, order: int, var: str = "x") -> "RationalSeries":
        if order < 1:
            raise ValueError("the identity series needs order >= 1")
        return cls((_ZERO, _ONE) + (_ZERO,) * (order - 1), var)

    # -- basics --------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, n: int) -> Fraction:
        if not 0 <= n <= self.order:
            raise ValueError(f"coefficient of {self.var}^{n} is beyond truncation order {self.order}")
        return self.coeffs[n]

    def truncate(self, order: int) -> "RationalSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series from order {self.order} to {order}")
        return RationalSeries(self.coeffs[: order + 1], self.var)

    def shift(self) -> "RationalSeries":
        """Multiply by the variable; gains one certified order."""
        return RationalSeries((_ZERO,) + self.coeffs, self.var)

    def _check_var(self, other: "RationalSeries"):
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, RationalSeries):
            self._check_var(other)
            n = min(self.order, other.order)
            return RationalSeries(
                tuple(self.coeffs[i] + other.coeffs[i] for i in range(n + 1)), self.var
            )
        return RationalSeries((self.coeffs[0] + _rat(other),) + self.coeffs[1:], self.var)

    __radd__ = __add__

    def __neg__(self):
        return RationalSeries(tuple(-c for c in self.coeffs), self.var)

    def __sub__(self, other):
        if isinstance(other, RationalSeries):
            return self + (-other)
        return self + (-_rat(other))

    def __rsub__(self, other):
        return (-self) + _rat(other)

    def __mul__(self, other):
        if isinstance(other, RationalSeries):
            self._check_var(other)
            n = min(self.order, other.order)
            return RationalSeries(tuple(_mul_lists(self.coeffs, other.coeffs, n)), self.var)
        c = _rat(other)
        return RationalSeries(tuple(c * v for v in self.coeffs), self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RationalSeries):
            self._check_var(other)
            n = min(self.order, other.order)
            return RationalSeries(tuple(_div_lists(self.coeffs, other.coeffs, n)), self.var)
        c = _rat(other)
        if c == 0:
            raise ZeroDivisionError("division of a series by zero")
        return RationalSeries(tuple(v / c for v in self.coeffs), self.var)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("series powers must be nonnegative integers")
        return RationalSeries(tuple(_pow_list(self.coeffs, exponent, self.order)), self.var)

    # -- calculus and composition --------------------------------------------

    def derivative(self) -> "RationalSeries":
        if self.order < 1:
            raise ValueError("derivative of an order-0 series certifies no coefficients")
        return RationalSeries(tuple(_derive_list(self.coeffs)), self.var)

    def compose(self, inner: "RationalSeries") -> "RationalSeries":
        """self(inner); inner must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("composition needs an inner series with zero constant term")
        n = min(self.order, inner.order)
        return RationalSeries(
            tuple(_compose_lists(self.coeffs[: n + 1], inner.coeffs[: n + 1], n)), inner.var
        )

    def revert(self, var: str | None = None) -> "RationalSeries":
        """Compositional inverse g with self(g) = identity, exact.

        Needs zero constant term and nonzero linear coefficient.  Newton
        iteration with order doubling; each step certifies twice the order of
        the previous one.
        """
        if self.coeffs[0] != 0:
            raise ValueError("reversion needs a series with zero constant term")
        if self.order < 1 or self.coeffs[1] == 0:
            raise ValueError("reversion needs a nonzero linear coefficient")
        n = self.order
        f = list(self.coeffs)
        fp = _derive_list(f)
        g = [_ZERO, 1 / f[1]]
        m = 1
        while m < n:
            m = min(2 * m, n)
            gm = g + [_ZERO] * (m + 1 - len(g))
            resid = _compose_lists(f[: m + 1], gm, m)
            resid[1] -= _ONE
            slope = _compose_lists(fp[: m + 1], gm, m)
            corr = _div_lists(resid, slope, m)
            g = [gi - ci for gi, ci in zip(gm, corr)]
        return RationalSeries(tuple(g), var if var is not None else self.var)

    # -- evaluation and serialization ------------------------------------------

    def __call__(self, x):
        """Horner evaluation; exact for Fraction arguments, float otherwise."""
        if isinstance(x, Fraction) or isinstance(x, int):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def to_json_obj(self) -> dict:
        return {
            "var": self.var,
            "order": self.order,
            "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str) -> "RationalSeries":
        obj = json.loads(text)
        coeffs = [Fraction(int(num), int(den)) for num, den in obj["coeffs"]]
        if len(coeffs) != obj["order"] + 1:
            raise ValueError("JSON series length does not match its order")
        return cls(tuple(coeffs), obj["var"])

    def __str__(self):
        parts = []
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if n == 0:
                parts.append(str(c))
            elif n == 1:
                parts.append(f"{c}*{self.var}")
            else:
                parts.append(f"{c}*{self.var}^{n}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.var}^{self.order + 1})"


def product_series(
    factors: Sequence[tuple[int, int, int, int]],
    power: int,
    order: int,
    var: str = "x",
) -> RationalSeries:
    """Exact series of (prod over factor patterns)^power through var^order.

    Each factor is a tuple (sign, step, offset, exponent) standing for
    prod_{n>=1} (1 + sign * var^(step*n + offset))^exponent with sign and
    exponent in {+1, -1}.  Binomials whose exponent step*n+offset exceeds the
    order cannot touch the kept coefficients, so the truncation is exact.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if not isinstance(power, int) or power < 0:
        raise ValueError("power must be a nonnegative integer")
    acc = [_ONE] + [_ZERO] * order
    for sign, step, offset, exponent in factors:
        if sign not in (1, -1) or exponent not in (1, -1) or step < 1:
            raise ValueError(f"invalid factor descriptor {(sign, step, offset, exponent)}")
        if step + offset < 1:
            raise ValueError("factor exponents must start at a positive power")
        n = 1
        while step * n + offset <= order:
            e = step * n + offset
            if exponent == 1:
                # multiply by (1 + sign*x^e), highest power first so the
                # update reads not-yet-written entries
                for i in range(order, e - 1, -1):
                    if acc[i - e]:
                        acc[i] += sign * acc[i - e]
            else:
                # divide by (1 + sign*x^e)
                for i in range(e, order + 1):
                    if acc[i - e]:
                        acc[i] -= sign * acc[i - e]
            n += 1
    if power != 1:
        acc = _pow_list(acc, power, order)
    return RationalSeries(tuple(acc), var)
