r"""Bose-Einstein condensation of the charged gas at fixed charge density.

Given a conserved charge density :math:`\rho` in D = 3, the chemical
potential :math:`\mu(T)` is pinned by

.. math::

   \rho = \int\!\frac{d^3p}{(2\pi)^3}\,
          \big[n(\omega-\mu) - n(\omega+\mu)\big],

saturating at :math:`|\mu| = m` below the critical temperature, where the
remainder :math:`\rho_0 = |\rho| - \rho^e` occupies the zero mode.  Two
regimes are supported: the non-relativistic gas, where the excited density
has the closed form :math:`(mT/2\pi)^{3/2}\,\mathrm{Li}_{3/2}(z)` with
fugacity :math:`z = e^{\mu_{NR}/T}`, and the fully relativistic gas solved
by quadrature with the antiparticle branch always included.

The fixed-charge mutual information across a dividing plane of transverse
two-volume :math:`V_2` is assembled here with the boundary normalization

.. math::

   I_m^{thermal} = \frac{\pi}{6}\, V_2 \int\!\frac{d^3p}{(2\pi)^3}\,
                   \frac{n(\omega-\mu)+n(\omega+\mu)}{\omega},

whose temperature derivative is continuous except at :math:`T_C`, where it
jumps by a finite amount.  ``discontinuity_estimate`` measures that jump
with one-sided finite-difference stencils refined by Richardson
extrapolation, and compares it against the closed-form predictions.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, QuadratureError
from .quadrature import RadialIntegralSpec, integrate_radial
from .specfun import AccuracyBudget, DEFAULT_BUDGET, polylog, zeta
from .thermo import (EntropyReport, FieldKind, Geometry, ModelParams,
                     ThermalPoint, _bose, _entropy_weight, _gap_frequencies,
                     _thermal_grid, zero_t_entanglement)

__all__ = [
    "ChargeSpec",
    "CondensateState",
    "DiscontinuityResult",
    "Phase",
    "Regime",
    "SweepRow",
    "SweepTable",
    "charge_density_rel",
    "critical_temperature",
    "discontinuity_estimate",
    "excited_density_nr",
    "mutual_info_at_fixed_charge",
    "solve_chemical_potential",
    "sweep",
]

_ZETA_3_2 = zeta(1.5)

# Auto regime selection: T_C(NR estimate) / m below the first threshold is
# treated as non-relativistic, above the second as relativistic; the band
# in between is refused so the caller must choose explicitly.
_AUTO_NR_MAX = 0.1
_AUTO_REL_MIN = 10.0


class Regime(enum.Enum):
    """Kinematic regime of the charged gas."""

    NON_RELATIVISTIC = "nr"
    RELATIVISTIC = "rel"
    AUTO = "auto"


class Phase(enum.Enum):
    """Thermodynamic phase at the evaluation point."""

    CONDENSED = "condensed"
    GAS = "gas"


@dataclass(frozen=True)
class ChargeSpec:
    """Conserved charge density and how to treat its kinematics.

    Attributes
    ----------
    density : float
        Charge density rho != 0; its sign selects particles/antiparticles.
    regime : Regime
        NON_RELATIVISTIC, RELATIVISTIC, or AUTO (estimate-based with a
        refusal band where neither limit is trustworthy).
    """

    density: float
    regime: Regime = Regime.AUTO

    def __post_init__(self) -> None:
        if not (math.isfinite(self.density) and self.density != 0.0):
            raise ValueError(f"density must be finite and nonzero, "
                             f"got {self.density!r}")
        if not isinstance(self.regime, Regime):
            raise ValueError(f"regime must be a Regime, got {self.regime!r}")


@dataclass(frozen=True)
class CondensateState:
    """Solved chemical potential and charge bookkeeping at one temperature."""

    temperature: float          # T > 0
    mu: float                   # relativistic chemical potential, |mu| <= m
    z_nr: float                 # non-relativistic fugacity e^((|mu|-m)/T)
    excited_density: float      # |charge| carried by excited modes
    condensate_density: float   # |charge| in the zero mode (0 in the gas)
    phase: Phase


@dataclass(frozen=True)
class SweepRow:
    """One temperature row of a fixed-charge sweep.

    ``error`` is None for a clean row; otherwise it holds the failure
    message and the numeric fields are NaN.
    """

    temperature: float
    mu: float
    excited_density: float
    condensate_density: float
    mutual_information: float
    boundary_thermal_part: float
    geometric_entropy: float
    thermal_entropy: float
    error: str | None = None


@dataclass(frozen=True)
class SweepTable:
    """Rows of a temperature sweep plus run-level metadata."""

    rows: tuple[SweepRow, ...]
    metadata: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class DiscontinuityResult:
    """Measured one-sided derivatives of I_m at the critical temperature."""

    critical_temperature: float
    left_derivative: float      # d I_m / dT as T -> T_C from below
    right_derivative: float     # d I_m / dT as T -> T_C from above
    jump: float                 # left_derivative - right_derivative
    analytic_jump: float        # closed-form prediction for the jump
    stencil_orders: dict        # per-side refinement diagnostics, findings


# ----------------------------------------------------------------------
# Densities
# ----------------------------------------------------------------------

def excited_density_nr(temperature: float, mu_nr: float, mass: float,
                       acc: AccuracyBudget = DEFAULT_BUDGET) -> float:
    r"""Non-relativistic excited charge density.

    :math:`\rho^e = (mT/2\pi)^{3/2}\,\mathrm{Li}_{3/2}(e^{\mu_{NR}/T})`
    with :math:`\mu_{NR} \le 0` measured from the mass threshold.
    """
    if not (math.isfinite(temperature) and temperature > 0.0):
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    if not (math.isfinite(mass) and mass > 0.0):
        raise ValueError(f"mass must be positive, got {mass!r}")
    if mu_nr > 0.0:
        raise ValueError(f"mu_nr must be <= 0, got {mu_nr!r}")
    z = math.exp(mu_nr / temperature)
    lam = (mass * temperature / (2.0 * math.pi)) ** 1.5
    return lam * polylog(1.5, z, acc)


def _charge_density_rel_gap(temperature: float, mass: float, gap: float,
                            acc: AccuracyBudget) -> float:
    """Relativistic excited |charge| density at gap g = m - |mu| >= 0."""
    beta = 1.0 / temperature
    a = mass - gap

    def integrand(p: np.ndarray) -> np.ndarray:
        omega, below = _gap_frequencies(mass, a, p)
        return _bose(beta * below) - _bose(beta * (omega + a))

    params = ModelParams(mass, 3, 2.0 * mass, FieldKind.CHARGED_COMPLEX)
    pts, scale = _thermal_grid(params, temperature, a)
    spec = RadialIntegralSpec(3, integrand, singular_points=pts,
                              accuracy=acc, tail_scale=scale)
    return integrate_radial(spec)


def charge_density_rel(point: ThermalPoint, mass: float,
                       acc: AccuracyBudget = DEFAULT_BUDGET) -> float:
    """Signed relativistic charge density at the given (T, mu).

    Particle minus antiparticle occupation integral in D = 3; odd in mu.
    """
    if not (math.isfinite(mass) and mass > 0.0):
        raise ValueError(f"mass must be positive, got {mass!r}")
    a = abs(point.chemical_potential)
    if a > mass:
        raise ValueError(f"|mu| = {a!r} exceeds the mass {mass!r}")
    if a == 0.0:
        return 0.0
    value = _charge_density_rel_gap(point.temperature, mass, mass - a, acc)
    return math.copysign(value, point.chemical_potential)


def _boundary_integral_rel_gap(temperature: float, mass: float, gap: float,
                               acc: AccuracyBudget) -> float:
    """int d^3p/(2pi)^3 [n(omega-mu) + n(omega+mu)] / omega at g = m - |mu|."""
    beta = 1.0 / temperature
    a = mass - gap

    def integrand(p: np.ndarray) -> np.ndarray:
        omega, below = _gap_frequencies(mass, a, p)
        return (_bose(beta * below) + _bose(beta * (omega + a))) / omega

    params = ModelParams(mass, 3, 2.0 * mass, FieldKind.CHARGED_COMPLEX)
    pts, scale = _thermal_grid(params, temperature, a)
    spec = RadialIntegralSpec(3, integrand, singular_points=pts,
                              accuracy=acc, tail_scale=scale)
    return integrate_radial(spec)


# ----------------------------------------------------------------------
# Root finding
# ----------------------------------------------------------------------

def _bisect_secant(fn: Callable[[float], float], lo: float, hi: float,
                   f_lo: float, f_hi: float, *, x_rtol: float,
                   f_stop: Callable[[float], bool],
                   max_iter: int = 200) -> float:
    """Bracketed root finder: bisection with secant acceleration.

    ``fn`` must be monotone-ish with f(lo), f(hi) of opposite sign.  Stops
    when ``f_stop(residual)`` is satisfied or the bracket shrinks to
    ``x_rtol`` relative width.
    """
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise ValueError("root is not bracketed")
    x_prev, f_prev = lo, f_lo
    x_curr, f_curr = hi, f_hi
    for _ in range(max_iter):
        # Secant candidate, accepted only if it lands inside the bracket.
        denom = f_curr - f_prev
        x_new = ((x_curr - f_curr * (x_curr - x_prev) / denom)
                 if denom != 0.0 else 0.5 * (lo + hi))
        span = hi - lo
        if not (lo + 0.01 * span <= x_new <= hi - 0.01 * span):
            x_new = 0.5 * (lo + hi)
        f_new = fn(x_new)
        if f_stop(f_new):
            return x_new
        if f_lo * f_new <= 0.0:
            hi, f_hi = x_new, f_new
        else:
            lo, f_lo = x_new, f_new
        x_prev, f_prev = x_curr, f_curr
        x_curr, f_curr = x_new, f_new
        if hi - lo <= x_rtol * max(abs(lo), abs(hi), 1e-300):
            return 0.5 * (lo + hi)
    raise ConvergenceError("bracketed root search exhausted its iterations",
                           estimate=0.5 * (lo + hi))


def _resolve_regime(charge: ChargeSpec, mass: float) -> Regime:
    if charge.regime is not Regime.AUTO:
        return charge.regime
    tc_nr = _critical_temperature_nr(charge.density, mass)
    ratio = tc_nr / mass
    if ratio <= _AUTO_NR_MAX:
        return Regime.NON_RELATIVISTIC
    if ratio >= _AUTO_REL_MIN:
        return Regime.RELATIVISTIC
    raise ValueError(
        f"Auto regime refused: estimated T_C/m = {ratio:.3g} sits between "
        f"{_AUTO_NR_MAX} and {_AUTO_REL_MIN}, where neither limit is "
        "reliable; pick NON_RELATIVISTIC or RELATIVISTIC explicitly")


def _critical_temperature_nr(density: float, mass: float) -> float:
    return (2.0 * math.pi / mass) * (abs(density) / _ZETA_3_2) ** (2.0 / 3.0)


def _solver_acc(acc: AccuracyBudget) -> AccuracyBudget:
    """Quadrature budget used inside root solves; keeps residuals clean."""
    return AccuracyBudget(
        relative_tolerance=min(1e-12, acc.relative_tolerance),
        max_terms=acc.max_terms,
        max_subdivisions=max(acc.max_subdivisions, 4000))


def _solve_nr(temperature: float, rho_abs: float, mass: float,
              acc: AccuracyBudget, residual_rtol: float
              ) -> tuple[float, float, float, Phase]:
    """Return (mu_nr, excited, condensed, phase) for the NR gas."""
    lam = (mass * temperature / (2.0 * math.pi)) ** 1.5
    capacity = lam * _ZETA_3_2
    if capacity <= rho_abs:
        return 0.0, capacity, rho_abs - capacity, Phase.CONDENSED

    target = rho_abs / lam                 # Li_{3/2}(e^{-d}) target, < zeta(3/2)
    d_hi = max(50.0, -math.log(target / 2.0) + 5.0) if target > 0 else 50.0

    def residual(d: float) -> float:
        return polylog(1.5, math.exp(-d), acc) - target

    d = _bisect_secant(
        residual, 0.0, d_hi, _ZETA_3_2 - target, residual(d_hi),
        x_rtol=1e-14,
        f_stop=lambda r: abs(r) <= residual_rtol * target)
    mu_nr = -temperature * d
    return mu_nr, rho_abs, 0.0, Phase.GAS


def _solve_rel(temperature: float, rho_abs: float, mass: float,
               acc: AccuracyBudget, residual_rtol: float
               ) -> tuple[float, float, float, Phase]:
    """Return (gap, excited, condensed, phase) for the relativistic gas."""
    q_acc = _solver_acc(acc)
    capacity = _charge_density_rel_gap(temperature, mass, 0.0, q_acc)
    if capacity <= rho_abs:
        return 0.0, capacity, rho_abs - capacity, Phase.CONDENSED

    ln_lo = math.log(1e-30 * mass)          # effectively mu -> m
    ln_hi = math.log(mass)                  # mu = 0, zero charge

    def residual(ln_g: float) -> float:
        return _charge_density_rel_gap(temperature, mass, math.exp(ln_g),
                                       q_acc) - rho_abs

    ln_g = _bisect_secant(
        residual, ln_lo, ln_hi, capacity - rho_abs, -rho_abs,
        x_rtol=1e-14,
        f_stop=lambda r: abs(r) <= residual_rtol * rho_abs)
    return math.exp(ln_g), rho_abs, 0.0, Phase.GAS


def solve_chemical_potential(temperature: float, charge: ChargeSpec,
                             mass: float,
                             acc: AccuracyBudget = DEFAULT_BUDGET,
                             residual_rtol: float = 1e-10) -> CondensateState:
    """Solve mu(T) at fixed charge density; condensed below capacity.

    In the gas phase the returned chemical potential reproduces the charge
    density to ``residual_rtol`` (relative); in the condensed phase
    ``|mu| = m`` exactly and the charge excess sits in the condensate.
    """
    if not (math.isfinite(temperature) and temperature > 0.0):
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    if not (math.isfinite(mass) and mass > 0.0):
        raise ValueError(f"mass must be positive, got {mass!r}")
    regime = _resolve_regime(charge, mass)
    rho_abs = abs(charge.density)
    sign = math.copysign(1.0, charge.density)

    if regime is Regime.NON_RELATIVISTIC:
        mu_nr, excited, condensed, phase = _solve_nr(
            temperature, rho_abs, mass, acc, residual_rtol)
        mu_abs = mass + mu_nr
        z_nr = math.exp(mu_nr / temperature)
    else:
        gap, excited, condensed, phase = _solve_rel(
            temperature, rho_abs, mass, acc, residual_rtol)
        mu_abs = mass - gap
        z_nr = math.exp(-gap / temperature)
    return CondensateState(
        temperature=temperature,
        mu=sign * mu_abs,
        z_nr=z_nr,
        excited_density=excited,
        condensate_density=condensed,
        phase=phase,
    )


def critical_temperature(charge: ChargeSpec, mass: float,
                         acc: AccuracyBudget = DEFAULT_BUDGET) -> float:
    r"""Condensation temperature at the given charge density.

    Non-relativistic: the closed form
    :math:`T_C = (2\pi/m)\,(|\rho|/\zeta(3/2))^{2/3}` (series-consistent
    with :func:`excited_density_nr`).  Relativistic: the leading estimate
    :math:`\sqrt{3|\rho|/m}` refined by solving
    ``charge capacity(T_C) = |rho|`` with the full quadrature.
    """
    if not (math.isfinite(mass) and mass > 0.0):
        raise ValueError(f"mass must be positive, got {mass!r}")
    regime = _resolve_regime(charge, mass)
    rho_abs = abs(charge.density)
    if regime is Regime.NON_RELATIVISTIC:
        return _critical_temperature_nr(rho_abs, mass)

    tc0 = math.sqrt(3.0 * rho_abs / mass)
    q_acc = _solver_acc(acc)

    def residual(t: float) -> float:
        return _charge_density_rel_gap(t, mass, 0.0, q_acc) - rho_abs

    lo, hi = 0.5 * tc0, 1.5 * tc0
    f_lo, f_hi = residual(lo), residual(hi)
    return _bisect_secant(residual, lo, hi, f_lo, f_hi, x_rtol=1e-12,
                          f_stop=lambda r: abs(r) <= 1e-11 * rho_abs)


# ----------------------------------------------------------------------
# Fixed-charge mutual information
# ----------------------------------------------------------------------

def _nr_entropy_density(temperature: float, mass: float, z: float,
                        acc: AccuracyBudget) -> float:
    """Non-relativistic gas entropy density (both polylog terms)."""
    lam = (mass * temperature / (2.0 * math.pi)) ** 1.5
    term = 2.5 * polylog(2.5, z, acc)
    if z < 1.0:
        term -= math.log(z) * polylog(1.5, z, acc)
    return lam * term


def _validate_fixed_charge_model(params: ModelParams) -> None:
    if params.dimension != 3:
        raise ValueError("fixed-charge operations are defined in D = 3")
    if params.field_kind is not FieldKind.CHARGED_COMPLEX:
        raise ValueError("fixed-charge operations need field_kind "
                         "CHARGED_COMPLEX")


def _report_at_state(params: ModelParams, geometry: Geometry,
                     state: CondensateState, regime: Regime,
                     acc: AccuracyBudget) -> EntropyReport:
    """Assemble the fixed-charge entropy report at a solved state."""
    t = state.temperature
    m = params.mass
    zero_t = zero_t_entanglement(params, geometry)
    if regime is Regime.NON_RELATIVISTIC:
        boundary = (math.pi / 6.0) * (geometry.two_volume / m) \
            * state.excited_density
        s_density = _nr_entropy_density(t, m, state.z_nr, acc)
    else:
        gap = m - abs(state.mu)
        boundary = (math.pi / 6.0) * geometry.two_volume \
            * _boundary_integral_rel_gap(t, m, gap, acc)
        beta = 1.0 / t
        a = abs(state.mu)

        def integrand(p: np.ndarray) -> np.ndarray:
            omega, below = _gap_frequencies(m, a, p)
            return (_entropy_weight(beta * below)
                    + _entropy_weight(beta * (omega + a)))

        pts, scale = _thermal_grid(params, t, a)
        s_density = integrate_radial(RadialIntegralSpec(
            3, integrand, singular_points=pts, accuracy=acc,
            tail_scale=scale))
    extensive = -0.5 * geometry.subsystem_volume * s_density
    return EntropyReport(
        zero_t_part=zero_t,
        boundary_thermal_part=boundary,
        extensive_thermal_part=extensive,
        geometric_entropy=zero_t + boundary + extensive,
        mutual_information=zero_t + boundary,
    )


def mutual_info_at_fixed_charge(params: ModelParams, geometry: Geometry,
                                temperature: float, charge: ChargeSpec,
                                acc: AccuracyBudget = DEFAULT_BUDGET
                                ) -> EntropyReport:
    """Entropy report at fixed charge density (mu solved internally).

    The thermal boundary part carries the fixed-charge normalization
    ``(pi/6) V_2`` (times the occupation integral; in the NR regime that
    reduces to ``(pi/6) (V_2/m) rho_e`` exactly).
    """
    _validate_fixed_charge_model(params)
    regime = _resolve_regime(charge, params.mass)
    state = solve_chemical_potential(
        temperature, ChargeSpec(charge.density, regime), params.mass, acc)
    return _report_at_state(params, geometry, state, regime, acc)


def sweep(params: ModelParams, geometry: Geometry, charge: ChargeSpec,
          temperatures: Sequence[float],
          acc: AccuracyBudget = DEFAULT_BUDGET) -> SweepTable:
    """Fixed-charge sweep over temperatures; failures recorded per row."""
    _validate_fixed_charge_model(params)
    regime = _resolve_regime(charge, params.mass)
    rows: list[SweepRow] = []
    nan = float("nan")
    for t in temperatures:
        try:
            state = solve_chemical_potential(
                t, ChargeSpec(charge.density, regime), params.mass, acc)
            rep = _report_at_state(params, geometry, state, regime, acc)
            rows.append(SweepRow(
                temperature=t,
                mu=state.mu,
                excited_density=state.excited_density,
                condensate_density=state.condensate_density,
                mutual_information=rep.mutual_information,
                boundary_thermal_part=rep.boundary_thermal_part,
                geometric_entropy=rep.geometric_entropy,
                thermal_entropy=-2.0 * rep.extensive_thermal_part,
            ))
        except (ValueError, ConvergenceError) as exc:
            rows.append(SweepRow(
                temperature=t, mu=nan, excited_density=nan,
                condensate_density=nan, mutual_information=nan,
                boundary_thermal_part=nan, geometric_entropy=nan,
                thermal_entropy=nan, error=str(exc)))
    tc = critical_temperature(ChargeSpec(charge.density, regime), params.mass,
                              acc)
    metadata = {
        "mass": repr(params.mass),
        "uv_cutoff": repr(params.uv_cutoff),
        "charge_density": repr(charge.density),
        "regime": regime.value,
        "critical_temperature": repr(tc),
    }
    return SweepTable(rows=tuple(rows), metadata=metadata)


# ----------------------------------------------------------------------
# Derivative discontinuity at T_C
# ----------------------------------------------------------------------

def _one_sided_stencils(f: Callable[[float], float], tc: float, h0: float,
                        side: float, min_levels: int, max_levels: int,
                        stop_rel: float, cache: dict[float, float]
                        ) -> tuple[float, dict]:
    """One-sided derivative of f at tc from the given side.

    Third-order four-point stencils at step h0 / 2^k, Richardson-refined
    twice; stops when successive top extrapolants agree to ``stop_rel`` or
    the refinement starts amplifying quadrature noise.
    """

    def value(x: float) -> float:
        if x not in cache:
            cache[x] = f(x)
        return cache[x]

    hs: list[float] = []
    raw: list[float] = []
    r1: list[float] = []
    r2: list[float] = []
    diffs: list[float] = []
    best = (math.inf, 0.0, 0)       # (successive diff, estimate, level)
    converged = False
    for k in range(max_levels + 1):
        h = h0 / 2.0 ** k
        f0 = value(tc)
        f1 = value(tc + side * h)
        f2 = value(tc + 2.0 * side * h)
        f3 = value(tc + 3.0 * side * h)
        a = side * (-11.0 * f0 + 18.0 * f1 - 9.0 * f2 + 2.0 * f3) / (6.0 * h)
        hs.append(h)
        raw.append(a)
        r1.append((8.0 * a - raw[-2]) / 7.0 if k >= 1 else a)
        r2.append((16.0 * r1[-1] - r1[-2]) / 15.0 if k >= 2 else r1[-1])
        if k >= 1:
            diff = abs(r2[-1] - r2[-2])
            diffs.append(diff)
            # Floor the convergence scale at the derivative uncertainty
            # implied by ~1e-13 relative noise on the function values.
            scale = max(abs(r2[-1]), 1e-13 * abs(f0) / h, 1e-300)
            if diff < best[0]:
                best = (diff, r2[-1], k)
            if k >= min_levels and diff <= stop_rel * scale:
                converged = True
                break
            # Noise guard: two consecutive growing diffs after the best
            # level means the quadrature noise floor has been reached.
            if (k >= min_levels + 2 and len(diffs) >= 3
                    and diffs[-1] > diffs[-2] > diffs[-3]):
                break
    estimate = r2[-1] if converged else best[1]
    diag = {
        "h": hs,
        "raw": raw,
        "richardson1": r1,
        "richardson2": r2,
        "converged": converged,
        "levels": len(hs),
        "estimate": estimate,
    }
    return estimate, diag


def discontinuity_estimate(params: ModelParams, geometry: Geometry,
                           charge: ChargeSpec,
                           acc: AccuracyBudget = DEFAULT_BUDGET
                           ) -> DiscontinuityResult:
    r"""Measure the jump of :math:`\partial I_m/\partial T` at :math:`T_C`.

    The stencils act on the thermal boundary part alone (the vacuum piece
    is a temperature-independent constant, so excluding it costs nothing
    and avoids cancellation).  Closed-form references: the
    non-relativistic jump :math:`(\pi/4)\,V_2\rho/(m T_C)`, and the
    ultra-relativistic prediction :math:`-(\pi\sqrt3/9)\,V_2\sqrt{|\rho|/m}`
    whose sign is checked against the numeric stencil and reported as a
    finding when they disagree (the stencil is the arbiter of the measured
    value; it is never silently adjusted to match).
    """
    _validate_fixed_charge_model(params)
    regime = _resolve_regime(charge, params.mass)
    m = params.mass
    rho_abs = abs(charge.density)
    v2 = geometry.two_volume
    tc = critical_temperature(ChargeSpec(charge.density, regime), m, acc)

    if regime is Regime.NON_RELATIVISTIC:
        lam_c = math.pi / 6.0 * v2 / m

        def f_below(t: float) -> float:
            return lam_c * (m * t / (2.0 * math.pi)) ** 1.5 * _ZETA_3_2

        def f_above(_t: float) -> float:
            return lam_c * rho_abs

        analytic = 0.25 * math.pi * v2 * rho_abs / (m * tc)
        max_levels = 12
        extra: dict = {
            "nr_rescaled_convention_jump":
                0.5 * math.pi ** 2 * _ZETA_3_2 ** (2.0 / 3.0) * v2
                * rho_abs ** (1.0 / 3.0),
        }
    else:
        tight = AccuracyBudget(relative_tolerance=1e-13,
                               max_terms=acc.max_terms,
                               max_subdivisions=max(acc.max_subdivisions,
                                                    6000))
        coeff = math.pi / 6.0 * v2

        def f_below(t: float) -> float:
            return coeff * _boundary_integral_rel_gap(t, m, 0.0, tight)

        def f_above(t: float) -> float:
            _gap, _exc, _cond, phase = _solve_rel(t, rho_abs, m, tight,
                                                  residual_rtol=3e-13)
            if phase is Phase.CONDENSED:     # only exactly at t == tc
                _gap = 0.0
            return coeff * _boundary_integral_rel_gap(t, m, _gap, tight)

        analytic = -(math.pi * math.sqrt(3.0) / 9.0) * v2 \
            * math.sqrt(rho_abs / m)
        max_levels = 14
        extra = {"critical_temperature_leading":
                 math.sqrt(3.0 * rho_abs / m)}

    h0_left = 0.01 * tc
    if regime is Regime.NON_RELATIVISTIC:
        h0_right = h0_left
    else:
        # Above T_C the solved gap crosses over from a sqrt(T - T_C)
        # branch to a branch linear in T - T_C inside a layer of width
        # ~ (9 / 2 pi^2) m^2 / T_C; the stencil must sample well inside
        # that layer to see the limiting one-sided slope.
        delta_star = 4.5 * m * m / (math.pi ** 2 * tc)
        h0_right = min(h0_left, 0.03 * delta_star)
    # Both sides share the value at T_C itself, taken on the condensation
    # boundary (gap = 0); seeding it also spares the gas-phase solver a
    # borderline bracket exactly at the transition.
    f_tc = f_below(tc)
    cache_left: dict[float, float] = {tc: f_tc}
    cache_right: dict[float, float] = {tc: f_tc}
    left, diag_left = _one_sided_stencils(
        f_below, tc, h0_left, -1.0, 4, max_levels, 0.005, cache_left)
    right, diag_right = _one_sided_stencils(
        f_above, tc, h0_right, +1.0, 4, max_levels, 0.005, cache_right)

    jump = left - right
    finding = None
    if jump * analytic < 0.0:
        finding = (
            f"sign finding: numeric jump {jump:+.6g} and closed-form "
            f"prediction {analytic:+.6g} have opposite signs; magnitudes "
            f"{'agree' if abs(abs(jump / analytic) - 1.0) < 0.05 else 'differ'}"
            " (numeric stencil kept as measured)")
        warnings.warn(finding, stacklevel=2)
    diagnostics = {
        "left": diag_left,
        "right": diag_right,
        "sign_finding": finding,
        **extra,
    }
    return DiscontinuityResult(
        critical_temperature=tc,
        left_derivative=left,
        right_derivative=right,
        jump=jump,
        analytic_jump=analytic,
        stencil_orders=diagnostics,
    )
