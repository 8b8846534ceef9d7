"""Pendulum trajectories in four equivalent representations, and the
canonical map between phase coordinates (B, beta) and hyperbolic normal
coordinates (p, q).

Representations: closed form through the real-modulus Jacobi functions, the
arctan-resummed nome series, normal coordinates with exponential flow, and a
plain adaptive reference integrator.  Angles are tracked unwrapped, so beta
grows without bound along librations.

Convention: the expanding direction of the flow is q (and the contracting
one p), matching the substitutions q' = gamma*sqrt(x'), p' = delta*sqrt(x')
with gamma = exp(g0 t).  With B(0) > 0 the angle then increases from 0, as
Hamilton's equations demand.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.integrate import solve_ivp

from . import elliptic, normal_form
from .elliptic import Modulus

__all__ = [
    "PendulumParams",
    "PhaseState",
    "FlowFactors",
    "ScaledCoords",
    "NormalCoords",
    "TrajectoryRecord",
    "FactorizationReport",
    "wrap_angle",
    "hamiltonian",
    "energy_from_nome",
    "closed_form_state",
    "series_state",
    "series_state_partial_sums",
    "hyperbolic_state",
    "nome_from_action",
    "canonical_from_normal",
    "normal_flow",
    "jacobian_det",
    "normal_energy",
    "normal_energy_slope",
    "factorization_check",
    "stable_scaled_state",
    "stable_state",
    "rk_oracle",
    "trajectory",
]

DEFAULT_ORDER = 48
DEFAULT_NOME_BOUND = 0.5

_TERM_RTOL = 1e-15
_TAIL_EPS = 1e-16
_MAX_TERMS = 10_000
_POLE_EPS = 1e-9


@dataclass(frozen=True)
class PendulumParams:
    """Inertia moment I (energy*time^2) and gravity rate g (1/time)."""

    I: float
    g: float

    def __post_init__(self):
        if not self.I > 0:
            raise ValueError(f"inertia moment must be positive, got {self.I}")
        if not self.g > 0:
            raise ValueError(f"gravity rate must be positive, got {self.g}")

    @property
    def action_scale(self) -> float:
        """32*I*g: the phase-area factor at the separatrix."""
        return 32.0 * self.I * self.g


@dataclass(frozen=True)
class PhaseState:
    """Canonical pair: momentum B = I*dbeta/dt and unwrapped angle beta."""

    B: float
    beta: float


@dataclass(frozen=True)
class FlowFactors:
    """Exponential flow factors gamma = exp(g0 t), delta = exp(-g0 t)."""

    gamma: float
    delta: float

    @classmethod
    def at_time(cls, g0: float, t: float) -> "FlowFactors":
        e = math.exp(g0 * t)
        return cls(gamma=e, delta=1.0 / e)


@dataclass(frozen=True)
class ScaledCoords:
    """Dimensionless coordinates (p', q') with conserved product x' = p'q'."""

    p_prime: float
    q_prime: float

    @property
    def x_prime(self) -> float:
        return self.p_prime * self.q_prime


@dataclass(frozen=True)
class NormalCoords:
    """Canonical normal coordinates (p, q), square roots of action; x = p*q."""

    p: float
    q: float

    @property
    def x(self) -> float:
        return self.p * self.q


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    B: float
    beta: float
    energy: float
    method: str


@dataclass(frozen=True)
class FactorizationReport:
    energy_factored: float
    energy_direct: float
    rel_diff: float


def wrap_angle(beta: float) -> float:
    """The unwrapped angle reduced to (-pi, pi]."""
    wrapped = math.fmod(beta, 2.0 * math.pi)
    if wrapped > math.pi:
        wrapped -= 2.0 * math.pi
    elif wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def hamiltonian(state: PhaseState, par: PendulumParams) -> float:
    """H = B^2/(2I) - I g^2 (1 - cos beta); zero at the unstable point,
    positive for librations, -2 I g^2 at the bottom.
    """
    return state.B**2 / (2.0 * par.I) - par.I * par.g**2 * (1.0 - math.cos(state.beta))


def energy_from_nome(x_prime: float, par: PendulumParams) -> float:
    """Libration energy from the nome: 32 I g^2 x' prod((1+x'^2n)/(1-x'^(2n-1)))^8."""
    if not 0.0 <= x_prime < 1.0:
        raise ValueError(f"nome must lie in [0, 1), got {x_prime}")
    prod = 1.0
    odd = x_prime                        # x'^(2n-1)
    for _ in range(1, _MAX_TERMS):
        num = 1.0 + odd * x_prime        # 1 + x'^(2n)
        den = 1.0 - odd                  # 1 - x'^(2n-1)
        prod *= (num / den) ** 8
        odd *= x_prime * x_prime
        if odd < _TAIL_EPS:
            break
    return par.action_scale * par.g * x_prime * prod


def closed_form_state(t: float, mod: Modulus, par: PendulumParams) -> PhaseState:
    """Libration state at time t from the closed elliptic-function solution,
    for the orbit that crosses beta = 0 at t = 0 with B(0) = 2 I g / k > 0.

    Everything is evaluated through real-modulus Jacobi functions of
    argument v = t g / h'; the angle stays unwrapped.
    """
    if not mod.h > 0.0:
        raise ValueError("closed form needs energy above the separatrix (h > 0)")
    v = t * par.g / mod.h_prime
    am, sn, cn, dn = elliptic.jacobi_elliptic(v, mod.h_prime)
    B = 2.0 * par.I * par.g / (mod.k * dn)
    # bounded angle between the unit vectors (cn, sn) and (cn, h*sn)/dn;
    # adding it to the unwrapped amplitude keeps beta continuous
    correction = math.atan2((mod.h - 1.0) * sn * cn, cn * cn + mod.h * sn * sn)
    return PhaseState(B=B, beta=2.0 * (am + correction))


def series_state(flow: FlowFactors, x_prime: float, par: PendulumParams) -> PhaseState:
    """State from the arctan-resummed nome series.

    B = 4 I g0 sum_m [ za/(1+za^2) + zb/(1+zb^2) ],
    beta = 4 sum_m [ atan(za) - atan(zb) ],
    with za = x'^m gamma sqrt(x'), zb = x'^m delta sqrt(x'); converges for
    any flow factors as long as 0 <= x' < 1.
    """
    if not 0.0 <= x_prime < 1.0:
        raise ValueError(f"series representation needs 0 <= x' < 1, got {x_prime}")
    g0 = elliptic.g0_from_nome(x_prime, par.g)
    root = math.sqrt(x_prime)
    a = flow.gamma * root
    b = flow.delta * root
    s_sum = 0.0
    r_sum = 0.0
    xm = 1.0
    for _ in range(_MAX_TERMS):
        za = xm * a
        zb = xm * b
        s_sum += math.atan(za) - math.atan(zb)
        r_sum += za / (1.0 + za * za) + zb / (1.0 + zb * zb)
        xm *= x_prime
        if xm * (a + b) < _TERM_RTOL * (1.0 + abs(s_sum) + abs(r_sum)):
            break
    else:
        raise RuntimeError("nome series did not converge within the term cap")
    return PhaseState(B=4.0 * par.I * g0 * r_sum, beta=4.0 * s_sum)


def series_state_partial_sums(
    flow: FlowFactors, x_prime: float, par: PendulumParams, terms: int = 80
) -> PhaseState:
    """Direct partial sums of the alternating nome series, before the arctan
    resummation.  Converges only where gamma^2 x' < 1; kept as the
    cross-check companion of series_state.
    """
    if not 0.0 < x_prime < 1.0:
        raise ValueError(f"partial sums need 0 < x' < 1, got {x_prime}")
    if flow.gamma**2 * x_prime >= 1.0 or flow.delta**2 * x_prime >= 1.0:
        raise ValueError("partial sums diverge unless gamma^2 x' < 1 and delta^2 x' < 1")
    g0 = elliptic.g0_from_nome(x_prime, par.g)
    root = math.sqrt(x_prime)
    r_sum = 0.0
    s_sum = 0.0
    for n in range(1, terms + 1):
        sign = -1.0 if n % 2 else 1.0
        xpow = root * x_prime ** (n - 1)          # x'^(n - 1/2)
        gpow = flow.gamma ** (2 * n - 1)
        dpow = flow.delta ** (2 * n - 1)
        den = 1.0 - x_prime ** (2 * n - 1)
        r_sum += sign * xpow * (gpow + dpow) / den
        s_sum += sign * xpow / den * (gpow - dpow) / (2 * n - 1)
    return PhaseState(B=-4.0 * g0 * par.I * r_sum, beta=-4.0 * s_sum)


def hyperbolic_state(coords: ScaledCoords, par: PendulumParams) -> PhaseState:
    """State from scaled hyperbolic coordinates (p', q'), for |p'q'| < 1.

    Same sums as series_state but written in (p', q'); valid for either sign
    of the coordinates.  The rate g0 is taken at the conserved product p'q'.
    """
    p, q = coords.p_prime, coords.q_prime
    x = p * q
    if not abs(x) < 1.0:
        raise ValueError(f"the hyperbolic sums require |p'q'| < 1, got {x}")
    g0 = elliptic.g0_from_nome(x, par.g)
    s_sum = 0.0
    r_sum = 0.0
    xm = 1.0
    for _ in range(_MAX_TERMS):
        zp = xm * p
        zq = xm * q
        s_sum += math.atan(zq) - math.atan(zp)
        r_sum += zp / (1.0 + zp * zp) + zq / (1.0 + zq * zq)
        xm *= x
        if abs(xm) * (abs(p) + abs(q)) < _TERM_RTOL * (1.0 + abs(s_sum) + abs(r_sum)):
            break
    else:
        raise RuntimeError("hyperbolic sums did not converge within the term cap")
    return PhaseState(B=4.0 * par.I * g0 * r_sum, beta=4.0 * s_sum)


def nome_from_action(
    x: float,
    par: PendulumParams,
    order: int = DEFAULT_ORDER,
    nome_bound: float = DEFAULT_NOME_BOUND,
) -> float:
    """Invert the map x = x' a^2(x') for the nome, by safeguarded Newton on
    the truncated series (absolute tolerance 1e-14 on x').
    """
    target = x / par.action_scale
    a2 = normal_form.rescale_sq_series(order)
    coeffs = [float(c) for c in a2.coeffs]

    def f_and_slope(y: float) -> tuple[float, float]:
        acc = 0.0
        slope = 0.0
        for n in range(len(coeffs) - 1, -1, -1):
            slope = slope * y + (n + 1) * coeffs[n]
            acc = acc * y + coeffs[n]
        return y * acc - target, slope

    if target == 0.0:
        return 0.0
    # bracket the root: the map is increasing where the phase-area factor
    # stays positive, which covers the default bound
    if target > 0.0:
        lo, hi = 0.0, min(target, nome_bound)
        if f_and_slope(hi)[0] < 0.0:
            raise ValueError(f"action {x} is outside the invertible range (|x'| <= {nome_bound})")
    else:
        lo = max(target, -nome_bound)
        for _ in range(64):
            if f_and_slope(lo)[0] <= 0.0:
                break
            lo = max(lo * 1.5, -nome_bound)
            if lo == -nome_bound and f_and_slope(lo)[0] > 0.0:
                raise ValueError(
                    f"action {x} is outside the invertible range (|x'| <= {nome_bound})"
                )
        hi = 0.0
    y = min(max(target, lo), hi)
    for _ in range(200):
        val, slope = f_and_slope(y)
        if val > 0.0:
            hi = y
        else:
            lo = y
        step = -val / slope if slope != 0.0 else math.nan
        y_new = y + step
        if not lo <= y_new <= hi:
            y_new = 0.5 * (lo + hi)
        if abs(y_new - y) <= 1e-14 * max(1.0, abs(y_new)):
            return y_new
        y = y_new
    raise RuntimeError("nome inversion did not converge")


def _rescale_factor(x_prime: float, par: PendulumParams, order: int) -> float:
    a2 = par.action_scale * normal_form.rescale_sq_series(order)(x_prime)
    if a2 <= 0.0:
        raise ArithmeticError(f"squared rescale became nonpositive at x' = {x_prime}")
    return math.sqrt(a2)


def canonical_from_normal(
    n: NormalCoords, par: PendulumParams, order: int = DEFAULT_ORDER
) -> PhaseState:
    """Phase state (B, beta) of normal coordinates (p, q): solve the nome
    from x = p*q, divide out the rescale a(x'), and sum the hyperbolic
    series.  The map has unit Jacobian determinant by construction.
    """
    x_prime = nome_from_action(n.x, par, order)
    a = _rescale_factor(x_prime, par, order)
    return hyperbolic_state(ScaledCoords(n.p / a, n.q / a), par)


def normal_flow(
    n: NormalCoords, t: float, par: PendulumParams, order: int = DEFAULT_ORDER
) -> NormalCoords:
    """Time-t flow in normal coordinates: q expands and p contracts at the
    energy-dependent rate g0(x'); the product p*q is invariant.
    """
    x_prime = nome_from_action(n.x, par, order)
    g0 = elliptic.g0_from_nome(x_prime, par.g)
    e = math.exp(g0 * t)
    return NormalCoords(p=n.p / e, q=n.q * e)


def jacobian_det(
    n: NormalCoords,
    par: PendulumParams,
    step: float | None = None,
    order: int = DEFAULT_ORDER,
) -> float:
    """Central-difference Jacobian determinant d(B, beta)/d(p, q) of the
    canonical map at (p, q); the construction forces the value 1.
    """
    if step is None:
        step = 1e-5 * math.sqrt(par.action_scale)

    def at(p: float, q: float) -> PhaseState:
        return canonical_from_normal(NormalCoords(p, q), par, order)

    dB_dp = (at(n.p + step, n.q).B - at(n.p - step, n.q).B) / (2.0 * step)
    dB_dq = (at(n.p, n.q + step).B - at(n.p, n.q - step).B) / (2.0 * step)
    db_dp = (at(n.p + step, n.q).beta - at(n.p - step, n.q).beta) / (2.0 * step)
    db_dq = (at(n.p, n.q + step).beta - at(n.p, n.q - step).beta) / (2.0 * step)
    return dB_dp * db_dq - dB_dq * db_dp


def normal_energy(x: float, par: PendulumParams, order: int = DEFAULT_ORDER) -> float:
    """The normal-form energy at action x = p*q, evaluated through its
    definition: solve the nome from x, then take the product-formula energy.

    The Taylor series of this function around 0 (normal_energy_series) has a
    small convergence radius, about 0.066 * 32*I*g, set by the zero of the
    phase-area factor on the negative axis; the composed route works on the
    whole invertible domain.
    """
    x_prime = nome_from_action(x, par, order)
    if x_prime >= 0.0:
        return energy_from_nome(x_prime, par)
    # oscillation side: same product with alternating signs
    xs = -x_prime
    prod = 1.0
    odd = xs
    for _ in range(1, _MAX_TERMS):
        prod *= ((1.0 + odd * xs) / (1.0 + odd)) ** 8
        odd *= xs * xs
        if odd < _TAIL_EPS:
            break
    return -par.action_scale * par.g * xs * prod


def normal_energy_slope(
    x_prime: float,
    par: PendulumParams,
    order: int = DEFAULT_ORDER,
    step: float | None = None,
) -> tuple[float, float]:
    """Central-difference slope of the normal-form energy at x = x' a^2(x'),
    paired with the rate g0(x') it must equal (canonical conjugacy).
    Returns (slope, g0).
    """
    if step is None:
        step = 1e-5 * par.action_scale
    x = par.action_scale * normal_form.x_of_nome_series(order)(x_prime)
    slope = (
        normal_energy(x + step, par, order) - normal_energy(x - step, par, order)
    ) / (2.0 * step)
    return slope, elliptic.g0_from_nome(x_prime, par.g)


def _lattice_sums(x_prime: float, z: float) -> tuple[float, float]:
    """The even and odd nome-power sums of the energy factorization:
    sum_l x'^(2l) / (1 + (x'^(2l) z)^2) and the same with odd powers."""
    even = 0.0
    odd = 0.0
    xp = 1.0
    for _ in range(_MAX_TERMS):
        even += xp / (1.0 + (xp * z) ** 2)
        xo = xp * x_prime
        odd += xo / (1.0 + (xo * z) ** 2)
        xp *= x_prime * x_prime
        if xp < _TAIL_EPS:
            break
    else:
        raise RuntimeError("factorization sums did not converge")
    return even, odd


def factorization_check(
    x_prime: float, gamma: float, par: PendulumParams
) -> FactorizationReport:
    """Evaluate the two-bracket product form of the libration energy at the
    phase point (gamma, 1/gamma) and compare it against the direct product
    formula; the result must be independent of gamma.
    """
    if not 0.0 < x_prime < 1.0:
        raise ValueError(f"factorization check needs 0 < x' < 1, got {x_prime}")
    if not gamma > 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    root = math.sqrt(x_prime)
    p = root / gamma
    q = root * gamma
    u_p, v_p = _lattice_sums(x_prime, p)
    u_q, v_q = _lattice_sums(x_prime, q)
    g0 = elliptic.g0_from_nome(x_prime, par.g)
    factored = (
        32.0 * par.I * g0 * g0 * (p * u_p + q * v_q) * (p * v_p + q * u_q)
    )
    direct = energy_from_nome(x_prime, par)
    rel = abs(factored - direct) / abs(direct)
    return FactorizationReport(energy_factored=factored, energy_direct=direct, rel_diff=rel)


def stable_scaled_state(coords: ScaledCoords, par: PendulumParams) -> PhaseState:
    """Stable-chart state from scaled coordinates; the amplitude is
    x_s' = p'^2 + q'^2 and the conjugate-pair sums must combine to real
    values (a surviving imaginary part signals a formula error and raises).

    The angle sum carries the inverse hyperbolic tangent: rotating the
    hyperbolic chart to imaginary rate turns atan into atanh, which is what
    pairs with the 1 - w^2 momentum denominators and keeps B = I dbeta/dt.
    """
    p, q = coords.p_prime, coords.q_prime
    xs = p * p + q * q
    if not xs < 1.0:
        raise ValueError(f"stable sums require p'^2 + q'^2 < 1, got {xs}")
    w0 = complex(p, q)
    s_sum = 0 + 0j
    r_sum = 0 + 0j
    rho_pow = 1.0
    sign = 1.0
    for _ in range(_MAX_TERMS):
        w = rho_pow * w0
        wc = w.conjugate()
        for den in (1.0 - w * w, 1.0 - wc * wc):
            if abs(den) < _POLE_EPS:
                raise ValueError(
                    f"stable sum too close to a pole (|1 - w^2| = {abs(den):.2e})"
                )
        s_sum += sign * (cmath.atanh(w) - cmath.atanh(wc))
        r_sum += sign * (w / (1.0 - w * w) + wc / (1.0 - wc * wc))
        rho_pow *= xs
        sign = -sign
        if rho_pow * abs(w0) < _TERM_RTOL * (1.0 + abs(s_sum) + abs(r_sum)):
            break
    else:
        raise RuntimeError("stable sums did not converge within the term cap")
    g0s = elliptic.g0_from_nome(-xs, par.g)
    s_val = 4j * s_sum
    r_val = -4.0 * par.I * g0s * r_sum
    scale = max(1.0, abs(s_val), abs(r_val))
    if abs(s_val.imag) > 1e-12 * scale or abs(r_val.imag) > 1e-12 * scale:
        raise ArithmeticError(
            "conjugate-pair sums left a non-cancelling imaginary part "
            f"({s_val.imag:.2e}, {r_val.imag:.2e})"
        )
    return PhaseState(B=r_val.real, beta=s_val.real)


def stable_state(x_s_prime: float, t: float, par: PendulumParams) -> PhaseState:
    """Small-oscillation state at time t for amplitude x_s': the scaled
    coordinates rotate at the rate g0_s, p' = sqrt(x_s') cos(g0_s t) and
    q' = sqrt(x_s') sin(g0_s t).  The params' rate g plays the stable g_s.
    """
    if not 0.0 <= x_s_prime < 1.0:
        raise ValueError(f"amplitude must lie in [0, 1), got {x_s_prime}")
    g0s = elliptic.g0_from_nome(-x_s_prime, par.g)
    root = math.sqrt(x_s_prime)
    return stable_scaled_state(
        ScaledCoords(root * math.cos(g0s * t), root * math.sin(g0s * t)), par
    )


def rk_oracle(
    state0: PhaseState, par: PendulumParams, t: float, tol: float = 1e-10
) -> PhaseState:
    """Reference endpoint from adaptive high-order integration of the bare
    equations of motion dbeta/dt = B/I, dB/dt = +I g^2 sin(beta).

    The momentum equation carries a plus sign because the angle origin sits
    at the unstable equilibrium: the potential -I g^2 (1 - cos beta) falls
    away from beta = 0, so the momentum grows as the bob drops.
    """
    if not 1e-13 <= tol <= 1e-6:
        raise ValueError(f"tolerance must lie in [1e-13, 1e-6], got {tol}")
    if t == 0.0:
        return state0

    def rhs(_t, y):
        return [y[1] / par.I, par.I * par.g**2 * math.sin(y[0])]

    sol = solve_ivp(
        rhs,
        (0.0, t),
        [state0.beta, state0.B],
        method="DOP853",
        rtol=tol,
        atol=tol * max(1.0, par.I * par.g),
    )
    if not sol.success:
        raise RuntimeError(f"reference integration failed: {sol.message}")
    return PhaseState(B=sol.y[1, -1], beta=sol.y[0, -1])


def _time_grid(t0: float, t1: float, dt: float) -> list[float]:
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    steps = int(math.floor((t1 - t0) / dt + 1e-9))
    return [t0 + i * dt for i in range(steps + 1)]


def trajectory(
    method: str,
    mod: Modulus,
    par: PendulumParams,
    t0: float,
    t1: float,
    dt: float,
    tol: float = 1e-10,
    order: int = DEFAULT_ORDER,
) -> list[TrajectoryRecord]:
    """Sample the libration that crosses beta = 0 at t = 0 with B(0) > 0,
    on a uniform time grid, in the requested representation.
    """
    times = _time_grid(t0, t1, dt)
    if method == "closed":
        states = [closed_form_state(t, mod, par) for t in times]
    elif method == "series":
        x_prime = elliptic.nome_from_h(mod)
        g0 = elliptic.g0_from_nome(x_prime, par.g)
        states = [series_state(FlowFactors.at_time(g0, t), x_prime, par) for t in times]
    elif method == "normal":
        x_prime = elliptic.nome_from_h(mod)
        a = _rescale_factor(x_prime, par, order)
        start = NormalCoords(a * math.sqrt(x_prime), a * math.sqrt(x_prime))
        states = [
            canonical_from_normal(normal_flow(start, t, par, order), par, order)
            for t in times
        ]
    elif method == "rk":
        start = PhaseState(B=2.0 * par.I * par.g / mod.k, beta=0.0)
        states = _rk_batch(start, par, times, tol)
    else:
        raise ValueError(f"unknown trajectory method {method!r}")
    return [
        TrajectoryRecord(t=t, B=s.B, beta=s.beta, energy=hamiltonian(s, par), method=method)
        for t, s in zip(times, states)
    ]


def _rk_batch(
    state0: PhaseState, par: PendulumParams, times: list[float], tol: float
) -> list[PhaseState]:
    """Integrate from the t = 0 initial state and sample at the given
    (nonnegative, increasing) times."""
    if not 1e-13 <= tol <= 1e-6:
        raise ValueError(f"tolerance must lie in [1e-13, 1e-6], got {tol}")
    if times[0] < 0.0:
        raise ValueError("reference trajectories start at t = 0; need t0 >= 0")
    if times[-1] == 0.0:
        return [state0 for _ in times]

    def rhs(_t, y):
        return [y[1] / par.I, par.I * par.g**2 * math.sin(y[0])]

    sol = solve_ivp(
        rhs,
        (0.0, times[-1]),
        [state0.beta, state0.B],
        method="DOP853",
        rtol=tol,
        atol=tol * max(1.0, par.I * par.g),
        t_eval=times,
    )
    if not sol.success:
        raise RuntimeError(f"reference integration failed: {sol.message}")
    return [PhaseState(B=sol.y[1, i], beta=sol.y[0, i]) for i in range(len(times))]
