"""Field-measurement floor and energy-time inequality arithmetic."""

import math

import numpy as np
import pytest

from paradoxlab import bounds
from paradoxlab.constants import PhysicalConstants
from paradoxlab.errors import DomainError


class TestLandauPeierls:
    def test_natural_unit_values(self):
        assert bounds.landau_peierls_min(1.0) == 1.0
        assert bounds.landau_peierls_min(2.0) == 0.25

    def test_monotone_decreasing_to_zero(self):
        durations = np.geomspace(0.01, 1e6, 60)
        values = [bounds.landau_peierls_min(float(t)) for t in durations]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert values[-1] < 1e-11

    def test_loglog_slope_is_minus_two(self):
        durations = np.geomspace(0.1, 1000.0, 25)
        values = [bounds.landau_peierls_min(float(t)) for t in durations]
        slope = np.polyfit(np.log(durations), np.log(values), 1)[0]
        assert abs(slope + 2.0) <= 1e-9

    def test_custom_constants(self):
        k = PhysicalConstants(hbar=4.0, c=2.0)
        assert bounds.landau_peierls_min(1.0, k) == pytest.approx(
            math.sqrt(8.0) / 4.0, rel=1e-15
        )

    def test_nonpositive_duration(self):
        with pytest.raises(DomainError):
            bounds.landau_peierls_min(0.0)
        with pytest.raises(DomainError):
            bounds.landau_peierls_min(-1.0)


class TestEnergyTimeProduct:
    def test_zeno_schedule_products(self):
        # delta_E = 2*mu*B = 2, delta_t = T/N with T = pi/2
        duration = math.pi / 2.0
        one = bounds.energy_time_product(2.0, duration / 1)
        assert one.product == pytest.approx(math.pi, abs=1e-15)
        assert one.satisfied and not one.apparent_violation

        ten = bounds.energy_time_product(2.0, duration / 10)
        assert ten.product == pytest.approx(math.pi / 10.0, abs=1e-15)
        assert not ten.satisfied and ten.apparent_violation
        assert ten.threshold == 0.5

    def test_zero_uncertainty(self):
        report = bounds.energy_time_product(0.0, 5.0)
        assert report.product == 0.0
        assert not report.satisfied

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            bounds.energy_time_product(-1.0, 1.0)
        with pytest.raises(DomainError):
            bounds.energy_time_product(1.0, -1.0)

    def test_scale_exchange_invariance(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            delta_e, delta_t = rng.uniform(0.1, 10.0, size=2)
            scale = rng.uniform(0.1, 10.0)
            base = bounds.energy_time_product(delta_e, delta_t)
            swapped = bounds.energy_time_product(delta_e * scale, delta_t / scale)
            assert abs(base.product - swapped.product) <= 1e-12 * max(1.0, base.product)
