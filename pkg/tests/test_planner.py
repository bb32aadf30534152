import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from protectosim import planner
from protectosim.constants import K_B, MASSES
from protectosim.errors import ConfigError

POTASSIUM = planner.ApparatusParams(mu=9.3e-24, grad_B=40.0, d=0.1, T_oven=420.0, B0=10.0,
                                    mass=6.49e-26, gamma=math.pi / 4)


def with_(**kw):
    base = dict(mu=POTASSIUM.mu, grad_B=POTASSIUM.grad_B, d=POTASSIUM.d, T_oven=POTASSIUM.T_oven,
                B0=POTASSIUM.B0, mass=POTASSIUM.mass, gamma=POTASSIUM.gamma)
    base.update(kw)
    return planner.ApparatusParams(**base)


class TestSpeed:
    def test_potassium(self):
        v = planner.most_probable_speed(420.0, 6.49e-26)
        assert v == pytest.approx(math.sqrt(2 * 1.380649e-23 * 420 / 6.49e-26), rel=1e-15)
        assert 415 <= v <= 430

    def test_scaling(self):
        v = planner.most_probable_speed(100.0, 1e-25)
        assert planner.most_probable_speed(400.0, 1e-25) == pytest.approx(2 * v, rel=1e-15)
        assert planner.most_probable_speed(100.0, 4e-25) == pytest.approx(v / 2, rel=1e-15)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            planner.most_probable_speed(0.0, 1e-25)


class TestDisplacement:
    def test_potassium_endpoints(self):
        assert 0.110e-3 <= planner.displacement(POTASSIUM, 0.0) <= 0.118e-3
        assert 0.132e-3 <= planner.displacement(POTASSIUM, 0.2) <= 0.142e-3

    def test_axis_along_gradient_ignores_field(self):
        p = with_(gamma=0.0)
        expect = p.mu * p.grad_B * p.d**2 / (4 * K_B * p.T_oven)
        assert planner.displacement(p, 0.0) == pytest.approx(expect, rel=1e-15)
        assert planner.displacement(p, 3.7) == pytest.approx(expect, rel=1e-15)

    @given(st.floats(0.01, 10), st.floats(0.1, 10))
    def test_dimensional_scaling(self, a, t):
        base = planner.displacement(POTASSIUM, 0.2)
        assert planner.displacement(with_(d=POTASSIUM.d * a), 0.2) == pytest.approx(base * a**2, rel=1e-12)
        assert planner.displacement(with_(T_oven=POTASSIUM.T_oven * t), 0.2) == pytest.approx(
            base / t, rel=1e-12)

    @given(st.floats(0, math.pi), st.floats(-2, 2), st.floats(1, 2000), st.floats(1e-27, 1e-24))
    def test_kinematic_route_agrees(self, g, s, temp, mass):
        p = with_(gamma=g, T_oven=temp, mass=mass)
        a, b = planner.displacement(p, s), planner.displacement_kinematic(p, s)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-300)

    def test_nonlinear_shift(self):
        lin = planner.displacement(POTASSIUM, 0.2)
        assert planner.displacement_nonlinear(POTASSIUM, 0.2) == pytest.approx(lin / math.sqrt(1.04))


class TestXi:
    def test_potassium(self):
        assert planner.field_parameter_xi(POTASSIUM) == pytest.approx(0.4, rel=1e-15)

    def test_scaled_setup(self):
        p = with_(grad_B=0.04, d=1.0, B0=1.0)
        assert planner.field_parameter_xi(p) == pytest.approx(0.04, rel=1e-15)

    def test_small_region(self):
        assert planner.field_parameter_xi(with_(d=1e-9)) == pytest.approx(4e-9)


class TestPlan:
    def test_potassium_report(self):
        rep = planner.plan(POTASSIUM, 0.2)
        assert 415 <= rep.speed <= 430
        assert rep.transit_time == pytest.approx(0.1 / rep.speed)
        assert 0.110e-3 <= rep.displacement_0 <= 0.118e-3
        assert 0.132e-3 <= rep.displacement_env <= 0.142e-3
        assert rep.xi == pytest.approx(0.4)
        assert rep.spread == pytest.approx(rep.displacement_env - rep.displacement_0, rel=1e-12)
        # 0.2 sin(pi/4) of the unit kick; differencing the rounded endpoints would give 0.03 mm.
        unit = 9.3e-24 * 40 * 0.01 / (4 * 1.380649e-23 * 420)
        assert rep.spread == pytest.approx(unit * 0.2 * math.sin(math.pi / 4), rel=1e-12)
        assert rep.spread == pytest.approx(0.0227e-3, abs=0.0005e-3)
        assert rep.relative_change == pytest.approx(0.2, rel=1e-12)
        assert rep.relative_change_nonlinear == pytest.approx(1.2 / math.sqrt(1.04) - 1, rel=1e-12)
        assert rep.relative_change_nonlinear == pytest.approx(0.18, abs=0.005)
        assert rep.disturbance_bound == pytest.approx(0.16, rel=1e-8)
        assert rep.disturbance_at_gamma == pytest.approx(
            (0.16 * 0.5) / (1 + 0.16 + 0.8 * math.cos(math.pi / 4)), rel=1e-12)
        assert not rep.weak_measurement
        assert rep.as_dict()["xi"] == rep.xi

    def test_no_environment(self):
        rep = planner.plan(POTASSIUM, 0.0)
        assert rep.spread == 0.0
        assert rep.displacement_env == rep.displacement_0

    @pytest.mark.parametrize("gamma", [0.3, math.pi / 4, 1.2])
    @pytest.mark.parametrize("s_d", [1e-3, 0.05, 0.2])
    def test_spread_ratio(self, gamma, s_d):
        rep = planner.plan(with_(gamma=gamma), s_d)
        assert rep.spread / rep.displacement_0 == pytest.approx(s_d * math.tan(gamma), rel=1e-12)

    def test_cold_atoms_flagged_weak(self):
        p = planner.ApparatusParams.from_speed(0.01, mu=9.3e-24, grad_B=1e-4, d=0.1, B0=1e-4,
                                               mass=MASSES["Rb-87"], gamma=math.pi / 4)
        assert planner.most_probable_speed(p.T_oven, p.mass) == pytest.approx(0.01, rel=1e-12)
        rep = planner.plan(p, 0.2)
        assert rep.xi == pytest.approx(0.1)
        assert rep.weak_measurement

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            with_(B0=0.0)
        with pytest.raises(ValueError):
            with_(gamma=4.0)
        with pytest.raises(ValueError):
            planner.plan(POTASSIUM, -0.1)


class TestParamParsing:
    full = {"mu": "9.3e-24", "grad_B": "40", "d": "0.1", "T_oven": "420", "B0": "10",
            "mass_or_species": "6.49e-26", "gamma_deg": "45", "s_d": "0.2"}

    def test_round_trip(self):
        p, s_d = planner.params_from_mapping(self.full)
        assert s_d == 0.2
        assert p.gamma == pytest.approx(math.pi / 4)
        assert p == POTASSIUM.__class__(**{**POTASSIUM.__dict__, "gamma": p.gamma})

    def test_species_lookup(self):
        p, _ = planner.params_from_mapping({**self.full, "mass_or_species": "K"})
        assert p.mass == MASSES["K"]
        assert MASSES["K"] == pytest.approx(6.4924e-26, rel=1e-4)

    @pytest.mark.parametrize("key", ["B0", "mu", "grad_B", "d", "gamma_deg", "mass_or_species"])
    def test_missing_key_named(self, key):
        values = dict(self.full)
        del values[key]
        with pytest.raises(ConfigError) as exc:
            planner.params_from_mapping(values)
        assert exc.value.key == key
        assert key in str(exc.value)

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as exc:
            planner.params_from_mapping({**self.full, "colour": "red"})
        assert exc.value.key == "colour"

    def test_bad_number(self):
        with pytest.raises(ConfigError) as exc:
            planner.params_from_mapping({**self.full, "d": "ten"})
        assert exc.value.key == "d"

    def test_unknown_species(self):
        with pytest.raises(ConfigError):
            planner.params_from_mapping({**self.full, "mass_or_species": "Xx-1"})

    def test_speed_or_temperature(self):
        values = dict(self.full)
        del values["T_oven"]
        with pytest.raises(ConfigError):
            planner.params_from_mapping(values)
        with pytest.raises(ConfigError):
            planner.params_from_mapping({**self.full, "speed": "400"})
        p, _ = planner.params_from_mapping({**values, "speed": "400"})
        assert planner.most_probable_speed(p.T_oven, p.mass) == pytest.approx(400.0)

    def test_range_checked(self):
        with pytest.raises(ConfigError):
            planner.params_from_mapping({**self.full, "B0": "-1"})
        with pytest.raises(ConfigError):
            planner.params_from_mapping({**self.full, "s_d": "-1"})
