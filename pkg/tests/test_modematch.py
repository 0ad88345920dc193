"""Mode matching: axial stiffness, matching matrix, root scan, bound
states, wavefunctions, residuals."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robinstrip import (ConfigError, ContractError, NotAtRootError,
                        ParitySector, PoleError, WellConfig, axial_stiffness,
                        b_coefficients, bound_state_energies, matching_matrix,
                        matching_residual, minimax_brackets, neumann_state_cap,
                        null_vector, transversal_eigenvalues, wavefunction)
from robinstrip.modematch import _channel_value_deriv

SYM = ParitySector.SYMMETRIC
ANTI = ParitySector.ANTISYMMETRIC

WELL = WellConfig(alpha0=20.0, alpha1=5.0, a=0.3, d=1.0)


@pytest.fixture(scope="module")
def reference_ground():
    states = bound_state_energies(WELL, SYM, 32)
    assert len(states) == 1
    return states[0]


class TestWellConfig:
    def test_validation(self):
        with pytest.raises(ConfigError):
            WellConfig(0.0, 1.0, 0.3, 1.0)
        with pytest.raises(ConfigError):
            WellConfig(20.0, 5.0, -0.3, 1.0)
        with pytest.raises(ConfigError):
            WellConfig(20.0, np.nan, 0.3, 1.0)

    def test_is_well(self):
        assert WELL.is_well
        assert not WellConfig(20.0, 20.0, 0.3, 1.0).is_well
        assert not WellConfig(5.0, 20.0, 0.3, 1.0).is_well

    def test_sector_values(self):
        assert SYM.value == "symmetric"
        assert ANTI.value == "antisymmetric"


class TestAxialStiffness:
    def test_evanescent_branch(self):
        # l tanh(l a) and l coth(l a) with l = 2, a = 0.3
        E, lam = 10.0, 6.0
        l = 2.0
        assert axial_stiffness(lam, E, 0.3, SYM) == pytest.approx(l * np.tanh(l * 0.3), rel=1e-14)
        assert axial_stiffness(lam, E, 0.3, ANTI) == pytest.approx(l / np.tanh(l * 0.3), rel=1e-14)

    def test_at_channel_energy(self):
        assert axial_stiffness(4.0, 4.0, 0.5, SYM) == 0.0
        assert axial_stiffness(4.0, 4.0, 0.5, ANTI) == 2.0

    def test_oscillatory_branch(self):
        E, lam, a = 1.0, 5.0, 0.7
        kap = 2.0
        assert axial_stiffness(lam, E, a, SYM) == pytest.approx(-kap * np.tan(kap * a), rel=1e-13)
        assert axial_stiffness(lam, E, a, ANTI) == pytest.approx(kap / np.tan(kap * a), rel=1e-13)

    def test_continuity_across_channel_energy(self):
        E, a = 7.0, 0.4
        for parity in (SYM, ANTI):
            below = axial_stiffness(E - 1e-9, E, a, parity)
            at = axial_stiffness(E, E, a, parity)
            above = axial_stiffness(E + 1e-9, E, a, parity)
            assert abs(below - at) < 1e-8
            assert abs(above - at) < 1e-8

    def test_pole_detection(self):
        a, E = 0.5, 2.0
        sym_pole = E + (0.5 * np.pi / a) ** 2
        anti_pole = E + (np.pi / a) ** 2
        with pytest.raises(PoleError):
            axial_stiffness(sym_pole, E, a, SYM)
        with pytest.raises(PoleError):
            axial_stiffness(anti_pole, E, a, ANTI)
        # the other parity is regular there
        assert np.isfinite(axial_stiffness(sym_pole, E, a, ANTI))
        assert np.isfinite(axial_stiffness(anti_pole, E, a, SYM))

    @given(lam=st.floats(0.1, 60.0), E=st.floats(0.1, 60.0),
           a=st.floats(0.05, 2.0), sym=st.booleans())
    @settings(max_examples=100, deadline=None)
    def test_value_deriv_ratio_is_stiffness(self, lam, E, a, sym):
        parity = SYM if sym else ANTI
        try:
            L = axial_stiffness(lam, E, a, parity)
        except PoleError:
            return
        V, D = _channel_value_deriv(lam, np.array([E]), a, parity)
        if abs(V[0]) < 1e-12:
            return
        scale = max(1.0, abs(L))
        assert abs(D[0] / V[0] - L) <= 1e-9 * scale


class TestMatchingMatrix:
    def test_preconditions(self):
        with pytest.raises(ContractError):
            matching_matrix(WELL, SYM, 6.0, 1)
        E1_out = float(transversal_eigenvalues(WELL.outer, 1)[0])
        with pytest.raises(ContractError):
            matching_matrix(WELL, SYM, E1_out, 8)

    def test_checkerboard_zeros(self):
        sys = matching_matrix(WELL, SYM, 7.0, 8)
        for m in range(8):
            for n in range(8):
                if (m + n) % 2 == 1:
                    assert sys.C[m, n] == 0.0

    def test_null_vector_at_root(self, reference_ground):
        sys = matching_matrix(WELL, SYM, reference_ground.lam, 32)
        v = null_vector(sys)
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12
        assert abs(np.dot(v, reference_ground.a_coeffs)) > 1.0 - 1e-8

    def test_null_vector_off_root(self):
        sys = matching_matrix(WELL, SYM, 6.0, 16)
        with pytest.raises(NotAtRootError):
            null_vector(sys)

    def test_b_coefficients_shape_check(self):
        with pytest.raises(ContractError):
            b_coefficients(np.ones(3), np.eye(4))


class TestBoundStates:
    def test_reference_ground_state(self, reference_ground):
        s = reference_ground
        assert s.lam == pytest.approx(7.679645769, rel=1e-8)
        assert s.parity is SYM
        assert s.a_coeffs[0] > 0.9  # dominated by the first channel
        assert np.linalg.norm(s.a_coeffs) == pytest.approx(1.0, abs=1e-12)
        assert s.sigma_min < 1e-10
        assert s.trunc_err is not None and s.trunc_err < 5e-3
        assert s.richardson() == pytest.approx(s.lam, abs=5e-3)

    def test_no_antisymmetric_state_in_narrow_well(self):
        assert bound_state_energies(WELL, ANTI, 16) == []

    def test_constant_profile_has_no_states(self):
        const = WellConfig(20.0, 20.0, 0.3, 1.0)
        assert bound_state_energies(const, SYM, 8) == []
        assert bound_state_energies(const, ANTI, 8) == []

    def test_near_degenerate_window_is_safe(self):
        cfg = WellConfig(20.0, 20.0 - 1e-9, 0.3, 1.0)
        assert bound_state_energies(cfg, SYM, 8) == []

    def test_shallow_well_state_near_threshold(self):
        # alpha1 = 19.9: binding only a few 1e-6, still resolved
        cfg = WellConfig(20.0, 19.9, 0.3, 1.0)
        states = bound_state_energies(cfg, SYM, 16)
        E1_in = float(transversal_eigenvalues(cfg.inner, 1)[0])
        E1_out = float(transversal_eigenvalues(cfg.outer, 1)[0])
        assert len(states) == 1
        assert E1_in < states[0].lam < E1_out

    def test_binding_weakens_toward_uniform_coupling(self):
        E1_out = float(transversal_eigenvalues(WELL.outer, 1)[0])
        bindings = []
        for alpha1 in (5.0, 10.0, 15.0, 19.0):
            cfg = WellConfig(20.0, alpha1, 0.3, 1.0)
            states = bound_state_energies(cfg, SYM, 16)
            assert len(states) == 1
            bindings.append(E1_out - states[0].lam)
        assert all(b > 0 for b in bindings)
        assert bindings == sorted(bindings, reverse=True)

    def test_parameter_validation(self):
        with pytest.raises(ContractError):
            bound_state_energies(WELL, SYM, 1)
        with pytest.raises(ContractError):
            bound_state_energies(WELL, SYM, 8, scan_points=4)
        with pytest.raises(ContractError):
            bound_state_energies(WELL, SYM, 8, tol=0.0)

    @given(alpha0=st.floats(0.5, 50.0), ratio=st.floats(0.02, 0.9),
           a=st.floats(0.1, 1.6))
    @settings(max_examples=25, deadline=None)
    def test_count_within_rigorous_cap_and_brackets(self, alpha0, ratio, a):
        cfg = WellConfig(alpha0, alpha0 * ratio, a, 1.0)
        states = sorted(
            bound_state_energies(cfg, SYM, 10, scan_points=200)
            + bound_state_energies(cfg, ANTI, 10, scan_points=200),
            key=lambda s: s.lam,
        )
        assert len(states) <= neumann_state_cap(cfg)
        E1_in = float(transversal_eigenvalues(cfg.inner, 1)[0])
        E1_out = float(transversal_eigenvalues(cfg.outer, 1)[0])
        for i, s in enumerate(states, start=1):
            assert E1_in < s.lam < E1_out
            lo, hi = minimax_brackets(cfg, i)
            width = hi - lo
            assert s.lam >= lo - 1e-9 * max(1.0, abs(lo)) - 1e-6 * width
            assert s.lam <= hi + 1e-9 * max(1.0, abs(hi)) + 1e-6 * width


class TestBrackets:
    def test_bracket_contains_ground_state(self, reference_ground):
        lo, hi = minimax_brackets(WELL, 1)
        assert lo < reference_ground.lam < hi

    def test_upper_end_clipped_at_threshold(self):
        E1_out = float(transversal_eigenvalues(WELL.outer, 1)[0])
        _, hi = minimax_brackets(WELL, 4)
        assert hi == E1_out

    def test_empty_bracket_signals_no_guarantee(self):
        lo, hi = minimax_brackets(WELL, 4)
        assert lo >= hi  # no 4th state is guaranteed in the reference well

    def test_cap_counts_bracketed_levels(self):
        assert neumann_state_cap(WELL) == 1
        assert neumann_state_cap(WellConfig(20.0, 20.0, 0.3, 1.0)) == 0
        wide = WellConfig(1e5, 1e-5, 2.0, 1.0)
        assert neumann_state_cap(wide) == 4


class TestWavefunction:
    def test_symmetric_state_is_even_and_decays(self, reference_ground):
        x = np.linspace(-4.0, 4.0, 161)
        y = np.linspace(0.0, 1.0, 41)
        grid = wavefunction(WELL, reference_ground, x, y)
        assert grid.values.shape == (161, 41)
        assert np.allclose(grid.values, grid.values[::-1, :], rtol=0, atol=1e-13)
        nrm = np.sqrt(np.trapezoid(np.trapezoid(grid.values**2, y, axis=1), x))
        assert nrm == pytest.approx(1.0, abs=1e-10)
        mid = np.max(np.abs(grid.values[np.abs(x) < 0.3]))
        far = np.max(np.abs(grid.values[np.abs(x) > 3.0]))
        assert far < 0.2 * mid

    def test_interface_continuity(self, reference_ground):
        eps = 1e-9
        y = np.linspace(0.0, 1.0, 201)
        a = WELL.a
        grid = wavefunction(WELL, reference_ground, np.array([a - eps, a + eps]), y)
        jump = np.max(np.abs(grid.values[0] - grid.values[1]))
        scale = np.max(np.abs(grid.values))
        # pointwise continuity up to the truncation residual (the L2 jump
        # c0 is tested exactly in TestResidual)
        assert jump < 0.05 * scale

    def test_grid_validation(self, reference_ground):
        with pytest.raises(ContractError):
            wavefunction(WELL, reference_ground, np.array([0.0, 0.0, 1.0]),
                         np.linspace(0, 1, 5))
        with pytest.raises(ContractError):
            wavefunction(WELL, reference_ground, np.array([0.2]), np.linspace(0, 1, 5))


class TestResidual:
    def test_value_jump_matches_projection_identity(self, reference_ground):
        # the L2 value jump equals the part of the inner trace outside the
        # span of the outer modes: c0^2 = 1 - ||b||^2 at ||a|| = 1
        c0, _c1 = reference_ground.residual
        b_norm_sq = float(np.dot(reference_ground.b_coeffs, reference_ground.b_coeffs))
        assert c0**2 == pytest.approx(1.0 - b_norm_sq, rel=1e-6, abs=1e-14)

    def test_public_function_matches_stored(self, reference_ground):
        c0, c1 = matching_residual(WELL, reference_ground)
        assert c0 == pytest.approx(reference_ground.residual[0], rel=1e-12)
        assert c1 == pytest.approx(reference_ground.residual[1], rel=1e-12)

    def test_derivative_jump_grows_off_root(self, reference_ground):
        import dataclasses

        # c0 depends only on (a, b) and stays put; c1 carries the lambda
        # sensitivity, rising monotonically above its truncation floor
        c1s = []
        for dlam in (0.0, 0.05, 0.1, 0.3):
            off = dataclasses.replace(reference_ground, lam=reference_ground.lam + dlam)
            c0_off, c1_off = matching_residual(WELL, off)
            assert c0_off == pytest.approx(reference_ground.residual[0], rel=1e-12)
            c1s.append(c1_off)
        assert c1s == sorted(c1s)
        assert c1s[-1] > 5.0 * c1s[0]
