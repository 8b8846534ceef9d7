"""Exact nome-power-series for the canonical normal form near the unstable
equilibrium, plus the matching stable-equilibrium series.

Normalization: every series here sets g = 1 and the action scale 32*I*g = 1
(so I = 1/32).  Under that convention the rate, energy and Jacobian series
all have positive integer coefficients, which is what makes the identity
checks exact.  Physical values are recovered by the scalings

    rate               g0(x')  = g * g0_series(x')
    energy             U(x')   = 32*I*g^2 * energy_series(x')
    phase-area factor  D(x')   = 32*I*g   * jacobian_series(x')
    squared rescale    a^2(x') = 32*I*g   * rescale_sq_series(x')
    action of the map  x(x')   = 32*I*g   * x_of_nome_series(x')
    normal energy      32*I*g^2 * normal_energy_series(x / (32*I*g))

Stable chart: the rotation rate is the hyperbolic rate at negated nome, the
squared rescale carries twice the scale (64*I*g), and the stable normal-form
energy is W with argument x/(64*I*g).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .series import RationalSeries, product_series

__all__ = [
    "NormalFormBundle",
    "StableFormBundle",
    "IdentityReport",
    "g0_series",
    "energy_series",
    "jacobian_series",
    "rescale_sq_series",
    "x_of_nome_series",
    "normal_energy_series",
    "bundle",
    "stable_bundle",
    "rescaling_identity_check",
    "theta_logderiv_check",
    "integer_coefficients_start",
    "alternating_signs_hold",
]

# (sign, step, offset, exponent) patterns; see series.product_series
_G0_FACTORS = ((1, 1, 0, 1), (-1, 1, 0, -1))          # (1+x^n)/(1-x^n)
_ENERGY_FACTORS = ((1, 2, 0, 1), (-1, 2, -1, -1))     # (1+x^(2n))/(1-x^(2n-1))
_STABLE_ENERGY_FACTORS = ((1, 2, 0, 1), (1, 2, -1, -1))

NOME_VAR = "x'"
STABLE_NOME_VAR = "xs'"


@dataclass(frozen=True)
class NormalFormBundle:
    """All hyperbolic-chart series at one truncation order (normalized)."""

    g0: RationalSeries
    energy: RationalSeries
    jacobian: RationalSeries
    rescale_sq: RationalSeries
    x_of_nome: RationalSeries
    normal_energy: RationalSeries


@dataclass(frozen=True)
class StableFormBundle:
    """Stable-chart series (normalized; W carries the 64*I*g argument scale)."""

    g0: RationalSeries
    energy: RationalSeries
    rescale_sq: RationalSeries
    normal_energy: RationalSeries


@dataclass(frozen=True)
class IdentityReport:
    passed: bool
    order: int
    first_mismatch: int | None = None


@lru_cache(maxsize=None)
def g0_series(order: int) -> RationalSeries:
    """Rate series g0/g = prod((1+x'^n)/(1-x'^n))^2 = 1 + 4x' + 12x'^2 + ..."""
    if order < 0:
        raise ValueError("order must be >= 0")
    return product_series(_G0_FACTORS, 2, order, var=NOME_VAR)


@lru_cache(maxsize=None)
def energy_series(order: int) -> RationalSeries:
    """Energy series U/(32 I g^2) = x' prod((1+x'^(2n))/(1-x'^(2n-1)))^8."""
    if order < 1:
        raise ValueError("the energy series starts at first order; need order >= 1")
    return product_series(_ENERGY_FACTORS, 8, order - 1, var=NOME_VAR).shift()


@lru_cache(maxsize=None)
def jacobian_series(order: int) -> RationalSeries:
    """Phase-area factor D/(32 I g) = (dU/dx') / g0; constant term 1."""
    if order < 0:
        raise ValueError("order must be >= 0")
    return energy_series(order + 1).derivative() / g0_series(order)


@lru_cache(maxsize=None)
def rescale_sq_series(order: int) -> RationalSeries:
    """Squared canonical rescale a^2/(32 I g) = (d g0_series/dx') / 4.

    The quarter is the normalization of 8*I*g: the rate derivative at 0 is 4,
    so the constant term is 1, matching the Jacobian at the separatrix.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    return g0_series(order + 1).derivative() / 4


@lru_cache(maxsize=None)
def x_of_nome_series(order: int) -> RationalSeries:
    """The action of the canonical map, x/(32 I g) = x' * rescale_sq(x')."""
    if order < 1:
        raise ValueError("x(x') starts at first order; need order >= 1")
    return rescale_sq_series(order - 1).shift()


@lru_cache(maxsize=None)
def normal_energy_series(order: int) -> RationalSeries:
    """Energy as a function of the normal action x = p*q (normalized):
    x + 2x^2 - 4x^3 + ...; obtained by reverting x(x') into the energy series.
    """
    if order < 2:
        raise ValueError("need order >= 2 to see past the linear term")
    inverse = x_of_nome_series(order).revert(var="x")
    return energy_series(order).compose(inverse)


def bundle(order: int) -> NormalFormBundle:
    return NormalFormBundle(
        g0=g0_series(order),
        energy=energy_series(order),
        jacobian=jacobian_series(order),
        rescale_sq=rescale_sq_series(order),
        x_of_nome=x_of_nome_series(order),
        normal_energy=normal_energy_series(order),
    )


def _alternate(s: RationalSeries, var: str) -> RationalSeries:
    """Exact substitution of the negated variable."""
    return RationalSeries(
        tuple(c if n % 2 == 0 else -c for n, c in enumerate(s.coeffs)), var
    )


@lru_cache(maxsize=None)
def stable_bundle(order: int) -> StableFormBundle:
    """Stable-chart series: rotation rate, energy, squared rescale and W.

    The rate is the hyperbolic one at negated nome.  The squared rescale is
    a_s^2/(64 I g) = rescale_sq(-xs); its doubled scale is why W takes the
    argument x/(64 I g), and W(z) = z (1 - 2z - 4z^2 - 20z^3 - ...).
    """
    if order < 2:
        raise ValueError("need order >= 2 to see past the linear term")
    g0s = _alternate(g0_series(order), STABLE_NOME_VAR)
    energy_s = product_series(
        _STABLE_ENERGY_FACTORS, 8, order - 1, var=STABLE_NOME_VAR
    ).shift()
    a2s = _alternate(rescale_sq_series(order), STABLE_NOME_VAR)
    x_of = a2s.truncate(order - 1).shift()
    w = energy_s.compose(x_of.revert(var="z"))
    return StableFormBundle(g0=g0s, energy=energy_s, rescale_sq=a2s, normal_energy=w)


def rescaling_identity_check(order: int) -> IdentityReport:
    """Coefficient-level check that the phase-area factor D equals
    d/dx' (x' * a^2(x')), i.e. that the rate derivative supplies the
    canonical rescale.  Exact comparison through the given order.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    lhs = jacobian_series(order)
    rhs = x_of_nome_series(order + 1).derivative()
    for n in range(order + 1):
        if lhs.coeffs[n] != rhs.coeffs[n]:
            return IdentityReport(passed=False, order=order, first_mismatch=n)
    return IdentityReport(passed=True, order=order)


def theta_logderiv_check(order: int) -> IdentityReport:
    """Three independent expansions of x' dlog(g0)/dx', compared exactly:

    (i)   from the g0 product series itself;
    (ii)  the divisor sum 4 sum_n n x'^n / (1 - x'^(2n));
    (iii) half the second z-derivative at z = 0 of log theta_4(z, x') with
          theta_4(z, q) = 1 + 2 sum (-1)^n q^(n^2) cos(2nz).
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    via_product = g0_series(order).derivative().shift() / g0_series(order)

    coeffs = [0] * (order + 1)
    for n in range(1, order + 1):
        e = n
        while e <= order:
            coeffs[e] += 4 * n
            e += 2 * n
    via_divisors = RationalSeries.from_coeffs(coeffs, var=NOME_VAR)

    nums = [0] * (order + 1)
    dens = [0] * (order + 1)
    dens[0] = 1
    n = 1
    while n * n <= order:
        sign = -1 if n % 2 else 1
        nums[n * n] += -4 * sign * n * n
        dens[n * n] += 2 * sign
        n += 1
    via_theta = RationalSeries.from_coeffs(nums, var=NOME_VAR) / RationalSeries.from_coeffs(
        dens, var=NOME_VAR
    )

    for n in range(order + 1):
        if not (
            via_product.coeffs[n] == via_divisors.coeffs[n] == via_theta.coeffs[n]
        ):
            return IdentityReport(passed=False, order=order, first_mismatch=n)
    return IdentityReport(passed=True, order=order)


def integer_coefficients_start(s: RationalSeries, start: int = 0) -> bool:
    """True when every coefficient from `start` on is a positive integer."""
    return all(c.denominator == 1 and c > 0 for c in s.coeffs[start:])


def alternating_signs_hold(order: int = 50) -> bool:
    """Observed (not proven) sign pattern of the normal energy: from the
    quadratic term on, coefficients alternate starting positive.
    """
    s = normal_energy_series(order)
    return all(
        (c > 0 if n % 2 == 0 else c < 0) for n, c in enumerate(s.coeffs[2:], start=2)
    )
