"""Pump steady-state roots, stability map, and the bistability cusp."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jpasim import (NumericalError, PumpDrive, ValidationError, default_branch,
                    detuning_term, find_cusp, pump_amplitude, reflection_s11,
                    solve_photon_number, stability_diagram)
from jpasim.device import DeviceParams, derive
from jpasim.steady_state import _residual_scalar

orders = st.sampled_from([1, 2, 3, math.inf])
r_vals = st.floats(min_value=0.0, max_value=1.3)
omega_vals = st.floats(min_value=0.9, max_value=1.05)


class TestDriveValidation:
    def test_negative_r(self):
        with pytest.raises(ValidationError):
            PumpDrive(r=-0.1, omega_rel=1.0)

    def test_zero_omega(self):
        with pytest.raises(ValidationError):
            PumpDrive(r=0.5, omega_rel=0.0)

    def test_bad_order(self):
        with pytest.raises(ValidationError):
            PumpDrive(r=0.5, omega_rel=1.0, order=0)


class TestRoots:
    def test_unforced_single_zero_root(self, params30):
        states = solve_photon_number(params30, PumpDrive(r=0.0, omega_rel=1.0))
        assert len(states) == 1
        assert states[0].n == 0.0
        assert states[0].stable
        assert states[0].branch_count == 1

    def test_degenerate_cubic_cusp(self, params30):
        # triple root of the order-1 response collapses to n_c = 1/(sqrt(3) Q)
        omega_c = 1.0 - math.sqrt(3.0) / 60.0
        n_c = 1.0 / (math.sqrt(3.0) * 30.0)
        states = solve_photon_number(
            params30, PumpDrive(r=1.0, omega_rel=omega_c, order=1))
        for s in states:
            assert abs(s.n - n_c) < 1e-6

    def test_three_roots_inside_bistable_region(self, params30):
        # point confirmed inside the wedge by an independent 4e5-point
        # sign-scan of the response residual
        states = solve_photon_number(
            params30, PumpDrive(r=1.05, omega_rel=0.9694, order=math.inf))
        assert len(states) == 3
        assert states[0].branch_count == 3
        assert [s.stable for s in states] == [True, False, True]

    def test_roots_sorted_and_tight(self, params30):
        drive = PumpDrive(r=1.05, omega_rel=0.9694, order=math.inf)
        states = solve_photon_number(params30, drive)
        ns = [s.n for s in states]
        assert ns == sorted(ns)
        for s in states:
            assert abs(_residual_scalar(s.n, drive.omega_rel, drive.r,
                                        params30.Q, drive.order)) < 1e-14

    @given(r_vals, omega_vals, orders)
    def test_root_count_and_flags(self, params30, r, omega, order):
        states = solve_photon_number(
            params30, PumpDrive(r=r, omega_rel=omega, order=order))
        assert len(states) in (1, 3)
        assert states[0].branch_count == len(states)
        assert all(s.n >= 0 for s in states)
        # amplitude consistency n = |alpha|^2 * (-K/omega0)
        for s in states:
            got = abs(s.alpha) ** 2 * (-params30.kerr_ratio)
            assert got == pytest.approx(s.n, rel=1e-9, abs=1e-15)

    def test_default_branch_smallest_stable(self, params30):
        states = solve_photon_number(
            params30, PumpDrive(r=1.05, omega_rel=0.965, order=math.inf))
        assert default_branch(states) is states[0]


class TestPumpAmplitude:
    def test_zero_drive(self, params30):
        drive = PumpDrive(r=0.0, omega_rel=1.0)
        assert pump_amplitude(params30, drive, 0.0) == 0

    def test_effective_resonance_magnitude(self, params30):
        # when 1 - omega + shift = 0 the response is purely damping-limited
        drive = PumpDrive(r=0.4, omega_rel=1.0, order=math.inf)
        st_ = default_branch(solve_photon_number(params30, drive))
        omega_res = 1.0 + float(detuning_term(st_.n, math.inf))
        drive2 = PumpDrive(r=0.4, omega_rel=omega_res, order=math.inf)
        st2 = default_branch(solve_photon_number(params30, drive2))
        want = (2 * params30.Q * drive2.r * params30.alpha_in_crit
                / math.sqrt(params30.Q * params30.omega0))
        got = abs(pump_amplitude(params30, drive2, st2.n))
        assert got == pytest.approx(want, rel=2e-3)

    def test_inconsistent_n_rejected(self, params30):
        drive = PumpDrive(r=0.9, omega_rel=0.97, order=math.inf)
        st_ = default_branch(solve_photon_number(params30, drive))
        with pytest.raises(ValidationError):
            pump_amplitude(params30, drive, st_.n * 3.0)

    def test_phase_rotates_amplitude(self, params30):
        drive0 = PumpDrive(r=0.9, omega_rel=0.97, order=math.inf, phase=0.0)
        drive1 = PumpDrive(r=0.9, omega_rel=0.97, order=math.inf, phase=1.1)
        st_ = default_branch(solve_photon_number(params30, drive0))
        a0 = pump_amplitude(params30, drive0, st_.n)
        a1 = pump_amplitude(params30, drive1, st_.n)
        assert a1 == pytest.approx(a0 * complex(math.cos(1.1), math.sin(1.1)),
                                   rel=1e-12)


class TestReflection:
    @given(r_vals, omega_vals, orders)
    def test_unit_modulus(self, params30, r, omega, order):
        drive = PumpDrive(r=r, omega_rel=omega, order=order)
        for s in solve_photon_number(params30, drive):
            assert abs(abs(reflection_s11(drive, s.n, params30.Q)) - 1.0) < 1e-12

    def test_phase_moves_with_power(self, params30):
        # the pump pulls its own resonance, so S11 rotates as r grows
        lo = PumpDrive(r=0.1, omega_rel=0.98, order=math.inf)
        hi = PumpDrive(r=0.9, omega_rel=0.98, order=math.inf)
        s_lo = default_branch(solve_photon_number(params30, lo))
        s_hi = default_branch(solve_photon_number(params30, hi))
        ph_lo = np.angle(reflection_s11(lo, s_lo.n, params30.Q))
        ph_hi = np.angle(reflection_s11(hi, s_hi.n, params30.Q))
        assert abs(ph_hi - ph_lo) > 0.05


class TestStabilityDiagram:
    def test_counts_match_point_solver(self, params30):
        omegas = np.linspace(0.94, 1.0, 9)
        rs = np.linspace(0.8, 1.3, 9)
        diag = stability_diagram(params30, omegas, rs, math.inf)
        assert diag.branch_count.shape == (9, 9)
        assert set(np.unique(diag.branch_count)) <= {1, 3}
        rng = np.random.default_rng(7)
        for _ in range(12):
            i = int(rng.integers(0, 9))
            j = int(rng.integers(0, 9))
            states = solve_photon_number(
                params30,
                PumpDrive(r=float(rs[j]), omega_rel=float(omegas[i]),
                          order=math.inf))
            assert len(states) == diag.branch_count[i, j]

    def test_bistable_region_above_cusp_only(self, params30):
        cusp = find_cusp(params30, math.inf)
        omegas = np.linspace(0.95, 1.0, 13)
        rs = np.linspace(0.8, cusp.r - 1e-4, 7)
        diag = stability_diagram(params30, omegas, rs, math.inf)
        assert np.all(diag.branch_count == 1)


class TestCusp:
    def test_cubic_cusp_analytic(self):
        for q in (10.0, 30.0, 150.0):
            p = derive(DeviceParams(f0=7e9, Ic=2e-6, Q=q))
            c = find_cusp(p, 1)
            assert c.omega_rel == pytest.approx(1 - math.sqrt(3) / (2 * q),
                                                abs=1e-9)
            assert c.r == pytest.approx(1.0, abs=1e-9)
            assert c.n == pytest.approx(1.0 / (math.sqrt(3) * q), abs=1e-9)

    def test_full_sine_cusp_frozen(self, params30):
        # independently confirmed by a 50-digit Newton solve of the same system
        c = find_cusp(params30, math.inf)
        assert c.omega_rel == pytest.approx(0.97087674046476, abs=1e-10)
        assert c.r == pytest.approx(1.01327443150409, abs=1e-10)
        assert c.n == pytest.approx(0.019671222103707, abs=1e-10)

    def test_order_two_cusp_frozen(self, params30):
        c = find_cusp(params30, 2)
        assert c.omega_rel == pytest.approx(0.97087324, abs=1e-6)
        assert c.r == pytest.approx(1.01341162, abs=1e-6)

    def test_high_q_cusp_approaches_cubic(self):
        p = derive(DeviceParams(f0=7e9, Ic=2e-6, Q=150))
        c = find_cusp(p, math.inf)
        assert c.r == pytest.approx(1.0025831583, abs=1e-8)

    def test_residuals_certified(self, params30):
        c = find_cusp(params30, math.inf)
        assert abs(c.residual_fn) < 1e-12
        assert abs(c.residual_fnn) < 1e-12

    def test_wedge_above_cusp(self, params30):
        # wedge measured at r=1.1: three roots on [0.96711, 0.96786]
        states = solve_photon_number(
            params30, PumpDrive(r=1.1, omega_rel=0.9675, order=math.inf))
        assert len(states) == 3
        below = solve_photon_number(
            params30, PumpDrive(r=1.1, omega_rel=0.960, order=math.inf))
        assert len(below) == 1
