r"""Entropy decomposition of a free Bose field split across a flat boundary.

For a field of mass :math:`m` (dispersion :math:`\omega = \sqrt{p^2+m^2}`)
at inverse temperature :math:`\beta`, the entropy of a half-space factors
into three pieces which this module computes and reports separately:

* ``zero_t_part``: the ultraviolet-cut vacuum entanglement across the
  boundary,

  .. math::

     S_0 = \frac{1}{12}\,\frac{A}{(4\pi)^{(D-1)/2}}\, m^{D-1}\,
           \Gamma\!\left(-\tfrac{D-1}{2},\, m^2/\Lambda^2\right),

  per neutral degree of freedom (doubled for a charged field), with
  ``A`` the boundary area and :math:`\Lambda` the momentum cutoff.
* ``boundary_thermal_part``: the finite-temperature area-law correction

  .. math::

     S_b = \frac{\pi}{3}\, A \int \frac{d^Dp}{(2\pi)^D}\,
           \frac{n(\omega)}{\omega},

  with :math:`n` the Bose occupation; for a charged field at chemical
  potential :math:`\mu` the occupation is the particle/antiparticle sum
  :math:`n(\omega-\mu) + n(\omega+\mu)`.
* ``extensive_thermal_part``: minus one half of the ordinary extensive
  thermal entropy of the subsystem volume, the piece that cancels between
  the subsystem entropies and the global one.

``mutual_information`` is the ultraviolet-finite-per-area combination
``zero_t_part + boundary_thermal_part``; ``geometric_entropy`` adds the
extensive piece.  A Matsubara-sum alternate route for the boundary part
and the leading high-temperature expansion are provided for cross-checks.
All entropies are in nats; units are natural (hbar = c = kB = 1).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .quadrature import RadialIntegralSpec, integrate_radial, sum_bilateral
from .specfun import EULER_GAMMA, AccuracyBudget, DEFAULT_BUDGET, gamma_upper

__all__ = [
    "EntropyReport",
    "FieldKind",
    "Geometry",
    "ModelParams",
    "ThermalPoint",
    "boundary_thermal_matsubara",
    "dispersion",
    "high_t_expansion",
    "mutual_info_charged",
    "mutual_info_neutral",
    "thermal_entropy",
    "zero_t_entanglement",
]

_EXP_BIG = 690.0       # e^x representable safely below this


class FieldKind(enum.Enum):
    """Field content: one real scalar, or a complex (charged) scalar."""

    NEUTRAL_REAL = "neutral"
    CHARGED_COMPLEX = "charged"


@dataclass(frozen=True)
class ModelParams:
    """Field and regulator parameters.

    Attributes
    ----------
    mass : float
        Field mass m > 0 (use a small positive mass for massless limits).
    dimension : int
        Spatial dimension D, one of 1, 2, 3.
    uv_cutoff : float
        Momentum cutoff Lambda > m entering only through the regulated
        vacuum piece Gamma(a, m^2/Lambda^2).
    field_kind : FieldKind
        Neutral real scalar or charged complex scalar.
    """

    mass: float
    dimension: int
    uv_cutoff: float
    field_kind: FieldKind = FieldKind.NEUTRAL_REAL

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mass) and self.mass > 0.0):
            raise ValueError(f"mass must be positive, got {self.mass!r}")
        if self.dimension not in (1, 2, 3):
            raise ValueError(
                f"dimension must be 1, 2, or 3, got {self.dimension!r}")
        if not (math.isfinite(self.uv_cutoff) and self.uv_cutoff > self.mass):
            raise ValueError(
                f"uv_cutoff must exceed the mass, got {self.uv_cutoff!r}")
        if not isinstance(self.field_kind, FieldKind):
            raise ValueError(f"field_kind must be a FieldKind, got "
                             f"{self.field_kind!r}")


@dataclass(frozen=True)
class Geometry:
    """Sizes of the bipartitioned system, in natural units.

    Attributes
    ----------
    boundary_area : float
        (D-1)-volume of the dividing surface.
    subsystem_volume : float
        D-volume of the subsystem carrying the extensive entropy.
    two_volume : float
        The transverse two-volume entering fixed-charge mutual-information
        normalizations in D = 3.
    """

    boundary_area: float = 1.0
    subsystem_volume: float = 1.0
    two_volume: float = 1.0

    def __post_init__(self) -> None:
        for name in ("boundary_area", "subsystem_volume", "two_volume"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive, got {v!r}")


@dataclass(frozen=True)
class ThermalPoint:
    """One thermodynamic evaluation point.

    Attributes
    ----------
    temperature : float
        T > 0.
    chemical_potential : float
        mu; must satisfy |mu| <= mass for the charged field (checked at the
        operations, which know the model), and exactly 0 for the neutral.
    """

    temperature: float
    chemical_potential: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.temperature) and self.temperature > 0.0):
            raise ValueError(
                f"temperature must be positive, got {self.temperature!r}")
        if not math.isfinite(self.chemical_potential):
            raise ValueError(f"chemical_potential must be finite, got "
                             f"{self.chemical_potential!r}")


@dataclass(frozen=True)
class EntropyReport:
    """Additive decomposition of the half-space entropy at one point.

    ``geometric_entropy = zero_t_part + boundary_thermal_part +
    extensive_thermal_part`` and ``mutual_information = zero_t_part +
    boundary_thermal_part`` hold by construction.
    """

    zero_t_part: float               # cutoff-regulated vacuum entanglement
    boundary_thermal_part: float     # finite-T area-law correction, >= 0
    extensive_thermal_part: float    # -(1/2) * extensive thermal entropy
    geometric_entropy: float         # sum of the three parts
    mutual_information: float        # vacuum + boundary parts only


def dispersion(params: ModelParams, p):
    """Relativistic dispersion ``omega(p) = sqrt(p^2 + m^2)``.

    Accepts scalars or numpy arrays.
    """
    return np.sqrt(np.asarray(p, dtype=float) ** 2 + params.mass ** 2)


# ----------------------------------------------------------------------
# Stable occupation helpers (vectorized)
# ----------------------------------------------------------------------

def _bose(x: np.ndarray) -> np.ndarray:
    """Bose occupation 1 / (e^x - 1) for x > 0, 0 beyond overflow range."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    ok = x < _EXP_BIG
    out[ok] = 1.0 / np.expm1(x[ok])
    return out


def _entropy_weight(x: np.ndarray) -> np.ndarray:
    """x n(x) - ln(1 - e^-x), the entropy density weight per mode."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    ok = x < _EXP_BIG
    xo = x[ok]
    out[ok] = xo / np.expm1(xo) - np.log1p(-np.exp(-xo))
    return out


def _gap_frequencies(mass: float, a: float, p: np.ndarray):
    """Return (omega, omega - a) with the difference cancellation-free.

    For ``a`` close to the mass, ``omega - a`` loses all precision if formed
    directly; ``(p^2 + g (m + a)) / (omega + a)`` with ``g = m - a`` is
    exact.
    """
    omega = np.sqrt(p * p + mass * mass)
    g = mass - a
    below = (p * p + g * (mass + a)) / (omega + a)
    return omega, below


def _thermal_grid(params: ModelParams, temperature: float, a: float
                  ) -> tuple[tuple[float, ...], float]:
    """Breakpoints and tail decay scale for occupation-weighted integrals."""
    m = params.mass
    pts: list[float] = []
    if a > 0.0:
        g = m - a
        pk = math.sqrt(max(g, 0.0) * (m + a))   # momentum of the gap knee
        if 0.0 < pk:
            pts += [pk, 10.0 * pk]
    scale = max(temperature, math.sqrt(m * temperature))
    return tuple(sorted(pts)), scale


def _validate_point(params: ModelParams, point: ThermalPoint) -> float:
    """Check |mu| against the model; return a = |mu|."""
    a = abs(point.chemical_potential)
    if a > params.mass:
        raise ValueError(
            f"|chemical_potential| = {a!r} exceeds the mass {params.mass!r}")
    if a == params.mass and params.dimension != 3:
        raise ValueError(
            "the critical point mu = +/- mass is integrable only in D = 3; "
            f"got D = {params.dimension}")
    return a


# ----------------------------------------------------------------------
# Entropy pieces
# ----------------------------------------------------------------------

def _entropy_density(params: ModelParams, temperature: float, a: float,
                     acc: AccuracyBudget) -> float:
    """Extensive entropy density for one relativistic Bose species pair.

    Neutral field (a = 0): single species.  Charged field: particle plus
    antiparticle at chemical potential +/- a.
    """
    beta = 1.0 / temperature
    m = params.mass
    charged = params.field_kind is FieldKind.CHARGED_COMPLEX

    def integrand(p: np.ndarray) -> np.ndarray:
        omega, below = _gap_frequencies(m, a, p)
        if charged:
            return (_entropy_weight(beta * below)
                    + _entropy_weight(beta * (omega + a)))
        return _entropy_weight(beta * omega)

    pts, scale = _thermal_grid(params, temperature, a)
    spec = RadialIntegralSpec(params.dimension, integrand,
                              singular_points=pts, accuracy=acc,
                              tail_scale=scale)
    return integrate_radial(spec)


def thermal_entropy(params: ModelParams, geometry: Geometry,
                    point: ThermalPoint,
                    acc: AccuracyBudget = DEFAULT_BUDGET) -> float:
    """Extensive thermal entropy of the subsystem volume at mu = 0.

    The standard positive grand-canonical entropy; the charged field
    carries twice the neutral value.  Massless checks: (2 pi^2 / 45) V T^3
    in D = 3 and (pi / 3) V T in D = 1.
    """
    if point.chemical_potential != 0.0:
        raise ValueError("thermal_entropy is defined at mu = 0; "
                         "use the charged-field report for mu != 0")
    return geometry.subsystem_volume * _entropy_density(
        params, point.temperature, 0.0, acc)


def zero_t_entanglement(params: ModelParams, geometry: Geometry) -> float:
    """Cutoff-regulated vacuum entanglement across the boundary.

    ``(1/12) A (4 pi)^(-(D-1)/2) m^(D-1) Gamma(-(D-1)/2, m^2 / Lambda^2)``
    per neutral degree of freedom; the charged field doubles it.
    """
    m = params.mass
    d = params.dimension
    x = (m / params.uv_cutoff) ** 2
    coeff = (geometry.boundary_area / 12.0
             / (4.0 * math.pi) ** (0.5 * (d - 1)))
    value = coeff * m ** (d - 1) * gamma_upper(-0.5 * (d - 1), x)
    if params.field_kind is FieldKind.CHARGED_COMPLEX:
        value *= 2.0
    return value


def _boundary_integral(params: ModelParams, temperature: float, a: float,
                       acc: AccuracyBudget) -> float:
    """Occupation integral int d^Dp/(2pi)^D n/omega (both species if a-ware)."""
    beta = 1.0 / temperature
    m = params.mass
    charged = params.field_kind is FieldKind.CHARGED_COMPLEX

    def integrand(p: np.ndarray) -> np.ndarray:
        omega, below = _gap_frequencies(m, a, p)
        if charged:
            occ = _bose(beta * below) + _bose(beta * (omega + a))
        else:
            occ = _bose(beta * omega)
        return occ / omega

    pts, scale = _thermal_grid(params, temperature, a)
    spec = RadialIntegralSpec(params.dimension, integrand,
                              singular_points=pts, accuracy=acc,
                              tail_scale=scale)
    return integrate_radial(spec)


def _assemble_report(params: ModelParams, geometry: Geometry,
                     point: ThermalPoint, a: float,
                     acc: AccuracyBudget) -> EntropyReport:
    zero_t = zero_t_entanglement(params, geometry)
    boundary = (math.pi / 3.0) * geometry.boundary_area * _boundary_integral(
        params, point.temperature, a, acc)
    extensive = -0.5 * geometry.subsystem_volume * _entropy_density(
        params, point.temperature, a, acc)
    return EntropyReport(
        zero_t_part=zero_t,
        boundary_thermal_part=boundary,
        extensive_thermal_part=extensive,
        geometric_entropy=zero_t + boundary + extensive,
        mutual_information=zero_t + boundary,
    )


def mutual_info_neutral(params: ModelParams, geometry: Geometry,
                        point: ThermalPoint,
                        acc: AccuracyBudget = DEFAULT_BUDGET) -> EntropyReport:
    """Entropy report for the neutral real scalar (mu is identically 0)."""
    if params.field_kind is not FieldKind.NEUTRAL_REAL:
        raise ValueError("mutual_info_neutral needs field_kind NEUTRAL_REAL")
    if point.chemical_potential != 0.0:
        raise ValueError("the neutral field carries no chemical potential; "
                         "set it to 0")
    return _assemble_report(params, geometry, point, 0.0, acc)


def mutual_info_charged(params: ModelParams, geometry: Geometry,
                        point: ThermalPoint,
                        acc: AccuracyBudget = DEFAULT_BUDGET) -> EntropyReport:
    """Entropy report for the charged scalar at chemical potential mu.

    ``|mu| < m`` anywhere; the critical value ``|mu| = m`` stays integrable
    only in D = 3 and is rejected otherwise.  At ``mu = 0`` every part is
    exactly twice the neutral-field value.
    """
    if params.field_kind is not FieldKind.CHARGED_COMPLEX:
        raise ValueError("mutual_info_charged needs field_kind CHARGED_COMPLEX")
    a = _validate_point(params, point)
    return _assemble_report(params, geometry, point, a, acc)


# ----------------------------------------------------------------------
# Cross-check routes
# ----------------------------------------------------------------------

def boundary_thermal_matsubara(params: ModelParams, geometry: Geometry,
                               point: ThermalPoint,
                               acc: AccuracyBudget | None = None) -> float:
    r"""Boundary thermal part via a Matsubara frequency sum.

    Uses
    :math:`\sum_k \mathrm{Re}\,[(\omega_k + i\mu)^2 + \omega^2]^{-1}
    - \beta/(2\omega) = (\beta/2\omega)\,[n(\omega-\mu) + n(\omega+\mu)]`
    with :math:`\omega_k = 2\pi k/\beta`, so

    .. math::

       S_b = \frac{2\pi}{3\beta}\, A \int \frac{d^Dp}{(2\pi)^D}
             \Big[\sum_k \mathrm{Re}\,\frac{1}{(\omega_k+i\mu)^2+\omega^2}
             - \frac{\beta}{2\omega}\Big]

    for the charged field; the neutral field is half of this at mu = 0.
    Slower than the direct route; intended for validation.
    """
    if acc is None:
        acc = AccuracyBudget(relative_tolerance=1e-9, max_terms=200_000,
                             max_subdivisions=4000)
    a = _validate_point(params, point)
    beta = 1.0 / point.temperature
    m = params.mass
    two_pi_over_beta = 2.0 * math.pi / beta
    sum_acc = AccuracyBudget(relative_tolerance=0.05 * acc.relative_tolerance,
                             max_terms=acc.max_terms,
                             max_subdivisions=acc.max_subdivisions)

    def summed(p: float) -> float:
        omega2 = p * p + m * m
        omega = math.sqrt(omega2)

        def term(k: float) -> float:
            wk = two_pi_over_beta * k
            re_den = omega2 + wk * wk - a * a
            return re_den / (re_den * re_den + 4.0 * wk * wk * a * a)

        return sum_bilateral(term, sum_acc) - 0.5 * beta / omega

    pts, scale = _thermal_grid(params, point.temperature, a)
    spec = RadialIntegralSpec(params.dimension, summed,
                              singular_points=pts, accuracy=acc,
                              tail_scale=scale)
    value = (two_pi_over_beta / 3.0) * geometry.boundary_area \
        * integrate_radial(spec)
    if params.field_kind is FieldKind.NEUTRAL_REAL:
        value *= 0.5
    return value


def high_t_expansion(point: ThermalPoint, mass: float) -> float:
    r"""High-temperature expansion of the charged occupation integral.

    Approximates :math:`J = \int \frac{d^3p}{(2\pi)^3}\,
    \frac{n(\omega-\mu)+n(\omega+\mu)}{\omega}` by

    .. math::

       J \approx \frac{T^2}{6} - \frac{T}{2\pi}\sqrt{m^2-\mu^2}
       - \frac{m^2}{4\pi^2} \ln\frac{C m}{T} + \frac{m^2-\mu^2}{4\pi^2},
       \qquad C = \frac{e^{\gamma_E - 1}}{4\pi}.

    Warns when ``T < 5 m`` where the dropped terms are no longer small.
    """
    t = point.temperature
    mu = point.chemical_potential
    if not (math.isfinite(mass) and mass > 0.0):
        raise ValueError(f"mass must be positive, got {mass!r}")
    if abs(mu) > mass:
        raise ValueError(f"|mu| = {abs(mu)!r} exceeds the mass {mass!r}")
    if t < 5.0 * mass:
        warnings.warn("high_t_expansion used below T = 5 m; dropped terms "
                      "are not negligible there", stacklevel=2)
    s2 = (mass - mu) * (mass + mu)
    c = math.exp(EULER_GAMMA - 1.0) / (4.0 * math.pi)
    return (t * t / 6.0
            - t * math.sqrt(s2) / (2.0 * math.pi)
            - mass * mass / (4.0 * math.pi ** 2) * math.log(c * mass / t)
            + s2 / (4.0 * math.pi ** 2))
