"""Entropy decomposition of the free Bose field across a flat boundary.

Closed-form checks use the massless Stefan-Boltzmann entropies, exact
doubling between the charged and neutral field, and the small-mass
asymptotics of the regulated vacuum piece.  Two frozen full-precision
anchors guard against silent numerical drift.
"""

import math

import numpy as np
import pytest

from bosegas.specfun import AccuracyBudget, EULER_GAMMA, gamma_upper
from bosegas.thermo import (EntropyReport, FieldKind, Geometry, ModelParams,
                            ThermalPoint, boundary_thermal_matsubara,
                            dispersion, high_t_expansion, mutual_info_charged,
                            mutual_info_neutral, thermal_entropy,
                            zero_t_entanglement)


def rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def neutral(mass=1.0, dim=3, cutoff=100.0):
    return ModelParams(mass=mass, dimension=dim, uv_cutoff=cutoff,
                       field_kind=FieldKind.NEUTRAL_REAL)


def charged(mass=1.0, dim=3, cutoff=100.0):
    return ModelParams(mass=mass, dimension=dim, uv_cutoff=cutoff,
                       field_kind=FieldKind.CHARGED_COMPLEX)


GEO = Geometry()


class TestValidation:
    def test_model_params(self):
        with pytest.raises(ValueError):
            ModelParams(mass=0.0, dimension=3, uv_cutoff=10.0)
        with pytest.raises(ValueError):
            ModelParams(mass=1.0, dimension=4, uv_cutoff=10.0)
        with pytest.raises(ValueError):
            ModelParams(mass=1.0, dimension=3, uv_cutoff=1.0)
        with pytest.raises(ValueError):
            ModelParams(mass=1.0, dimension=3, uv_cutoff=10.0,
                        field_kind="neutral")

    def test_geometry(self):
        with pytest.raises(ValueError):
            Geometry(boundary_area=0.0)
        with pytest.raises(ValueError):
            Geometry(subsystem_volume=-1.0)
        with pytest.raises(ValueError):
            Geometry(two_volume=math.inf)

    def test_thermal_point(self):
        with pytest.raises(ValueError):
            ThermalPoint(temperature=0.0)
        with pytest.raises(ValueError):
            ThermalPoint(temperature=1.0, chemical_potential=math.nan)

    def test_field_kind_dispatch(self):
        pt = ThermalPoint(temperature=1.0)
        with pytest.raises(ValueError):
            mutual_info_neutral(charged(), GEO, pt)
        with pytest.raises(ValueError):
            mutual_info_charged(neutral(), GEO, pt)

    def test_neutral_rejects_chemical_potential(self):
        pt = ThermalPoint(temperature=1.0, chemical_potential=0.1)
        with pytest.raises(ValueError):
            mutual_info_neutral(neutral(), GEO, pt)
        with pytest.raises(ValueError):
            thermal_entropy(neutral(), GEO, pt)

    def test_mu_domain(self):
        with pytest.raises(ValueError):
            mutual_info_charged(charged(), GEO,
                                ThermalPoint(1.0, chemical_potential=1.001))
        # the critical point |mu| = m is integrable only in D = 3
        with pytest.raises(ValueError):
            mutual_info_charged(charged(dim=1), GEO,
                                ThermalPoint(1.0, chemical_potential=1.0))
        with pytest.raises(ValueError):
            mutual_info_charged(charged(dim=2), GEO,
                                ThermalPoint(1.0, chemical_potential=-1.0))


class TestDispersion:
    def test_scalar_and_array(self):
        params = neutral(mass=2.0)
        assert rel(float(dispersion(params, 1.5)), math.sqrt(6.25)) < 1e-15
        ps = np.array([0.0, 1.0, 3.0])
        expected = np.sqrt(ps ** 2 + 4.0)
        assert np.allclose(dispersion(params, ps), expected, rtol=1e-15)


class TestDecomposition:
    @pytest.mark.parametrize("maker,mu", [(neutral, 0.0), (charged, 0.7)])
    def test_parts_sum_exactly(self, maker, mu):
        params = maker()
        pt = ThermalPoint(temperature=1.3, chemical_potential=mu)
        fn = mutual_info_charged if mu else mutual_info_neutral
        rep = fn(params, GEO, pt)
        assert isinstance(rep, EntropyReport)
        assert rep.geometric_entropy == (rep.zero_t_part
                                         + rep.boundary_thermal_part
                                         + rep.extensive_thermal_part)
        assert rep.mutual_information == (rep.zero_t_part
                                          + rep.boundary_thermal_part)
        assert rep.boundary_thermal_part > 0.0

    def test_extensive_part_is_minus_half_thermal(self):
        params = neutral()
        pt = ThermalPoint(temperature=2.0)
        rep = mutual_info_neutral(params, GEO, pt)
        s_th = thermal_entropy(params, GEO, pt)
        assert rel(rep.extensive_thermal_part, -0.5 * s_th) < 1e-11

    def test_volume_and_area_scaling(self):
        params = neutral()
        pt = ThermalPoint(temperature=1.0)
        base = mutual_info_neutral(params, GEO, pt)
        scaled = mutual_info_neutral(
            params, Geometry(boundary_area=3.0, subsystem_volume=5.0), pt)
        assert rel(scaled.zero_t_part, 3.0 * base.zero_t_part) < 1e-13
        assert rel(scaled.boundary_thermal_part,
                   3.0 * base.boundary_thermal_part) < 1e-13
        assert rel(scaled.extensive_thermal_part,
                   5.0 * base.extensive_thermal_part) < 1e-13


class TestThermalEntropy:
    def test_massless_blackbody_d3(self):
        # one real scalar: s = (2 pi^2 / 45) T^3
        params = neutral(mass=1e-8, cutoff=1.0)
        for t in (1.0, 2.5):
            s = thermal_entropy(params, GEO, ThermalPoint(t))
            assert rel(s, 2.0 * math.pi ** 2 / 45.0 * t ** 3) < 1e-10

    def test_massless_line_d1(self):
        # one real scalar on a line: s = (pi / 3) T
        params = neutral(mass=1e-8, dim=1, cutoff=1.0)
        s = thermal_entropy(params, GEO, ThermalPoint(1.0))
        assert rel(s, math.pi / 3.0) < 1e-7

    def test_charged_doubles(self):
        pt = ThermalPoint(temperature=0.8)
        s_n = thermal_entropy(neutral(), GEO, pt)
        s_c = thermal_entropy(charged(), GEO, pt)
        assert rel(s_c, 2.0 * s_n) < 1e-12


class TestZeroTemperature:
    def test_d1_log_asymptotics(self):
        # Gamma(0, x) -> -gamma - ln x gives (1/6) ln(Lambda/m) - gamma/12
        params = neutral(mass=1.0, dim=1, cutoff=1e4)
        value = zero_t_entanglement(params, GEO)
        expected = math.log(1e4) / 6.0 - EULER_GAMMA / 12.0
        assert rel(value, expected) < 1e-9

    @pytest.mark.parametrize("dim", [1, 2, 3])
    def test_matches_regulated_formula(self, dim):
        params = neutral(mass=0.7, dim=dim, cutoff=53.0)
        x = (0.7 / 53.0) ** 2
        expected = (1.0 / 12.0) / (4.0 * math.pi) ** (0.5 * (dim - 1)) \
            * 0.7 ** (dim - 1) * gamma_upper(-0.5 * (dim - 1), x)
        assert rel(zero_t_entanglement(params, GEO), expected) < 1e-13

    def test_charged_doubles_and_area_scales(self):
        params_n = neutral()
        params_c = charged()
        v_n = zero_t_entanglement(params_n, GEO)
        v_c = zero_t_entanglement(params_c, GEO)
        assert rel(v_c, 2.0 * v_n) < 1e-15
        v_area = zero_t_entanglement(params_n, Geometry(boundary_area=7.0))
        assert rel(v_area, 7.0 * v_n) < 1e-15


class TestChargedNeutralRelation:
    @pytest.mark.parametrize("mass", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("temp", [0.3, 1.0, 4.0])
    def test_mu_zero_doubling(self, mass, temp):
        pt = ThermalPoint(temperature=temp)
        rep_n = mutual_info_neutral(neutral(mass=mass), GEO, pt)
        rep_c = mutual_info_charged(charged(mass=mass), GEO, pt)
        for field in ("zero_t_part", "boundary_thermal_part",
                      "extensive_thermal_part", "geometric_entropy",
                      "mutual_information"):
            assert rel(getattr(rep_c, field),
                       2.0 * getattr(rep_n, field)) < 1e-10

    def test_mu_sign_symmetry(self):
        params = charged()
        up = mutual_info_charged(params, GEO, ThermalPoint(0.9, 0.6))
        dn = mutual_info_charged(params, GEO, ThermalPoint(0.9, -0.6))
        assert rel(up.mutual_information, dn.mutual_information) < 1e-12


class TestFrozenAnchors:
    """Full-precision regression anchors (frozen from a verified build)."""

    def test_charged_near_critical(self):
        rep = mutual_info_charged(
            charged(), GEO, ThermalPoint(0.5, chemical_potential=0.99))
        assert rel(rep.boundary_thermal_part, 0.055975704137266498) < 1e-9
        assert rel(rep.mutual_information, 132.5573309997028) < 1e-10

    def test_charged_at_critical_mu(self):
        rep = mutual_info_charged(
            charged(), GEO, ThermalPoint(0.5, chemical_potential=1.0))
        assert rel(rep.boundary_thermal_part, 0.06725317406764553) < 1e-9


class TestMatsubaraRoute:
    def test_charged_agrees(self):
        params = charged()
        pt = ThermalPoint(0.8, chemical_potential=0.6)
        direct = mutual_info_charged(params, GEO, pt).boundary_thermal_part
        alt = boundary_thermal_matsubara(params, GEO, pt)
        assert rel(alt, direct) < 1e-7

    def test_neutral_agrees(self):
        params = neutral()
        pt = ThermalPoint(1.1)
        direct = mutual_info_neutral(params, GEO, pt).boundary_thermal_part
        alt = boundary_thermal_matsubara(params, GEO, pt)
        assert rel(alt, direct) < 1e-7


class TestHighTExpansion:
    @pytest.mark.parametrize("mu", [0.0, 0.5, 1.0])
    def test_matches_quadrature_at_high_t(self, mu):
        params = charged(cutoff=10.0)
        pt = ThermalPoint(50.0, chemical_potential=mu)
        boundary = mutual_info_charged(params, GEO, pt).boundary_thermal_part
        j_quad = boundary * 3.0 / math.pi
        assert rel(high_t_expansion(pt, 1.0), j_quad) < 2e-3

    def test_warns_at_low_t(self):
        with pytest.warns(UserWarning):
            high_t_expansion(ThermalPoint(4.9), 1.0)

    def test_domain(self):
        with pytest.raises(ValueError):
            high_t_expansion(ThermalPoint(50.0, chemical_potential=1.5), 1.0)
        with pytest.raises(ValueError):
            high_t_expansion(ThermalPoint(50.0), 0.0)


class TestAccuracyPlumbing:
    def test_loose_budget_still_close(self):
        params = neutral()
        pt = ThermalPoint(1.0)
        tight = mutual_info_neutral(params, GEO, pt)
        loose = mutual_info_neutral(
            params, GEO, pt, acc=AccuracyBudget(relative_tolerance=1e-6))
        assert rel(loose.boundary_thermal_part,
                   tight.boundary_thermal_part) < 1e-5
