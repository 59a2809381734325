import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from conftest import BASELINE, baseline_fields, scheme_and_table
from mdsr.levels import Manifold
from mdsr.liouville import FieldConfig, assemble_hamiltonian, linear_response_grid
from mdsr.reference import analytic_lambda_chi, dressed_eigenvalues
from mdsr.spectra import channel_group, channel_susceptibility, chi_scale, symmetric_grid


class TestDressedEigenvalues:
    @pytest.mark.parametrize(
        "omega, expected",
        [
            (78.0, (-39, -19.5, 0, 19.5, 39)),
            (0.0, (0, 0, 0, 0, 0)),
            (56.0, (-28, -14, 0, 14, 28)),
        ],
    )
    def test_resonant(self, omega, expected):
        assert tuple(dressed_eigenvalues(omega, 0.0)) == pytest.approx(expected, abs=0)

    def test_negative_rabi(self):
        with pytest.raises(ValueError):
            dressed_eigenvalues(-1.0)

    def test_symmetric_with_zero_middle(self):
        lv = dressed_eigenvalues(31.0)
        assert lv.e3 == 0.0
        assert lv.e1 == -lv.e5 and lv.e2 == -lv.e4

    @pytest.mark.parametrize("omega", [14.0, 31.0, 56.0, 78.0])
    @pytest.mark.parametrize("delta_c", [0.0, 5.0, -5.0])
    def test_matches_numerical_coupling_block(self, omega, delta_c):
        s, t = scheme_and_table()
        H = assemble_hamiltonian(s, t, [FieldConfig.coupling(omega, delta_c)])
        idx = s.indices(Manifold.GROUND_F2) + s.indices(Manifold.EXCITED)
        ev = np.linalg.eigvalsh(H[np.ix_(idx, idx)])
        # the block also holds the undriven b3 level at its bare energy delta_c
        expected = sorted(list(dressed_eigenvalues(omega, delta_c)) + [delta_c])
        distinct = []
        for e in np.sort(ev):
            if not distinct or abs(e - distinct[-1]) > 1e-7:
                distinct.append(e)
        assert distinct == pytest.approx(sorted(set(np.round(expected, 12))), abs=1e-9)


class TestAnalyticLambda:
    def test_dark_state(self):
        chi = analytic_lambda_chi(20.0, 3.0, 3.0, 2.8, 1e-14)
        assert abs(chi) < 1e-12

    def test_two_level_limit(self):
        grid = np.linspace(-10, 10, 2001)
        chi = analytic_lambda_chi(0.0, grid, 0.0, 2.8, 0.04)
        assert grid[np.argmax(chi.imag)] == 0.0
        assert chi[1000] == pytest.approx(0.5j / 2.8)

    @pytest.mark.parametrize("omega_c", [40.0, 78.0])
    def test_autler_townes_peaks(self, omega_c):
        f = lambda d: -analytic_lambda_chi(omega_c, d, 0.0, 2.8, 0.04).imag  # noqa: E731
        for sign in (1, -1):
            res = minimize_scalar(f, bracket=(sign * (omega_c / 2 - 3), sign * omega_c / 2, sign * (omega_c / 2 + 3)))
            assert res.x == pytest.approx(sign * omega_c / 2, abs=0.5)


class TestSolverAgainstOracle:
    @pytest.mark.parametrize("omega_c", [14.0, 31.0, 56.0, 78.0])
    @pytest.mark.parametrize("delta_c", [0.0, 4.0])
    def test_channels_match_closed_form(self, omega_c, delta_c):
        s, t = scheme_and_table()
        fields = baseline_fields(omega_c, delta_c=delta_c)
        grid = symmetric_grid(60, 201)
        coh = linear_response_grid(s, t, fields, BASELINE, grid)
        probe = fields[1]
        for ch, rho in coh.items():
            lo, up = ch
            q = s[up].m - s[lo].m
            d_p = t(lo, up, q)
            m = s[up].m
            d_c = t(s.by_m(Manifold.GROUND_F2, m).label, up, 0)
            chi = channel_susceptibility(channel_group(s, ch), {ch: rho}, s, t, probe, BASELINE)
            # linewidths mapped into the closed form: probe adds to the optical
            # coherence, probe + coupling to the two-photon coherence
            oracle = analytic_lambda_chi(
                abs(d_c) * omega_c,
                grid,
                delta_c,
                BASELINE.gamma_ac + 1.5,
                BASELINE.gamma_ab + 3.0,
                weight=d_p**2 / 3,
                scale=chi_scale(BASELINE),
            )
            assert np.max(np.abs(chi - oracle) / np.abs(oracle)) < 1e-6, ch
