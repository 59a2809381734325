import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BASELINE, baseline_fields, scheme_and_table
from mdsr.levels import Manifold
from mdsr.liouville import (
    FieldConfig,
    ModelParams,
    PopulationModel,
    SolverError,
    assemble_dissipators,
    assemble_hamiltonian,
    assemble_liouvillian,
    dephasing_matrix,
    full_coherences,
    linear_response_coherences,
    linear_response_grid,
    liouvillian,
    spontaneous_emission,
    steady_state,
    trace_functional,
)
from mdsr.reference import two_level_coherence
from mdsr.spectra import symmetric_grid

CHANNELS_FP2 = {("a1", "c1"), ("a3", "c5"), ("a2", "c2"), ("a2", "c4"), ("a3", "c3"), ("a1", "c3")}


def bc_block(scheme, H):
    idx = scheme.indices(Manifold.GROUND_F2) + scheme.indices(Manifold.EXCITED)
    return H[np.ix_(idx, idx)]


class TestHamiltonian:
    def test_no_fields_is_diagonal(self, fp2):
        s, t = fp2
        H = assemble_hamiltonian(s, t, [])
        assert np.count_nonzero(H - np.diag(np.diag(H))) == 0
        assert np.all(np.diag(H) == 0)

    def test_detuning_diagonal(self, fp2):
        s, t = fp2
        H = assemble_hamiltonian(s, t, [FieldConfig.coupling(0.0, 3.0), FieldConfig.probe(0.0, 5.0)])
        for i, st_ in enumerate(s.states):
            expected = {"a": 0.0, "b": -(5.0 - 3.0), "c": -5.0}[st_.manifold.value]
            assert H[i, i] == expected

    @pytest.mark.parametrize(
        "omega, expected",
        [(78.0, [-39, -19.5, 0, 19.5, 39]), (56.0, [-28, -14, 0, 14, 28])],
    )
    def test_coupling_dressing(self, fp2, omega, expected):
        s, t = fp2
        H = assemble_hamiltonian(s, t, [FieldConfig.coupling(omega)])
        ev = np.linalg.eigvalsh(bc_block(s, H))
        distinct = sorted(set(np.round(ev, 9)))
        assert distinct == pytest.approx(expected, abs=1e-9)

    def test_hermitian_and_probe_only_sigma(self, fp2):
        s, t = fp2
        H = assemble_hamiltonian(s, t, baseline_fields(78.0))
        assert np.allclose(H, H.conj().T, atol=0)
        # probe never drives pi (a2 <-> c3), coupling never drives b <-> c with dm != 0
        assert H[s.index["c3"], s.index["a2"]] == 0
        assert H[s.index["c2"], s.index["b1"]] == 0
        assert abs(H[s.index["c1"], s.index["a1"]]) == pytest.approx(2.0 / np.sqrt(2) / 2)

    def test_field_on_absent_manifold(self, fp2):
        s, t = fp2
        with pytest.raises(ValueError):
            assemble_hamiltonian(s, t, [FieldConfig.probe(1.0), FieldConfig.probe(2.0)])
        with pytest.raises(ValueError):
            FieldConfig("coupling", 1.0, polarization={2: 1.0})


class TestDissipators:
    def test_total_decay_rate(self, fp2):
        s, t = fp2
        ops = spontaneous_emission(s, t, BASELINE)
        for up in s.indices(Manifold.EXCITED):
            total = sum(rate for A, rate in ops if A[:, up].any())
            assert total == pytest.approx(5.6, abs=1e-12)

    def test_no_c3_to_b3_branch(self, fp2):
        s, t = fp2
        ops = spontaneous_emission(s, t, BASELINE)
        assert not any(A[s.index["b3"], s.index["c3"]] for A, _ in ops)

    def test_branching_fractions_normalized(self, fp1, fp2):
        for s, t in (fp1, fp2):
            ops = spontaneous_emission(s, t, BASELINE)
            for up in s.indices(Manifold.EXCITED):
                frac = sum(rate for A, rate in ops if A[:, up].any()) / BASELINE.decay_rate
                assert frac == pytest.approx(1.0, abs=1e-12)

    def test_dephasing_structure(self, fp2):
        s, _ = fp2
        D = dephasing_matrix(s, baseline_fields(78.0), BASELINE)
        a, b, c = s.index["a1"], s.index["b2"], s.index["c4"]
        assert D[a, c] == pytest.approx(1.5)
        assert D[b, c] == pytest.approx(1.5 + 0.04)
        assert D[a, b] == pytest.approx(1.5 + 1.5 + 0.04)
        assert np.all(np.diag(D) == 0)
        assert np.allclose(D, D.T)


def _random_density(n, rng):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = A @ A.conj().T
    return rho / np.trace(rho)


class TestLiouvillian:
    @pytest.mark.parametrize("model", list(PopulationModel))
    def test_trace_conservation(self, fp2, model):
        s, t = fp2
        params = ModelParams(population_model=model)
        L = liouvillian(s, t, baseline_fields(56.0), params)
        assert np.max(np.abs(trace_functional(len(s)) @ L)) < 1e-10

    def test_matches_direct_master_equation(self, fp2):
        s, t = fp2
        fields = baseline_fields(31.0)
        H = assemble_hamiltonian(s, t, fields)
        ops = assemble_dissipators(s, t, BASELINE)
        D = dephasing_matrix(s, fields, BASELINE)
        L = assemble_liouvillian(H, ops, D)
        rho = _random_density(len(s), np.random.default_rng(3))
        direct = -1j * (H @ rho - rho @ H) - D * rho
        for A, rate in ops:
            AdA = A.conj().T @ A
            direct += rate * (A @ rho @ A.conj().T - 0.5 * (AdA @ rho + rho @ AdA))
        assert np.allclose((L @ rho.reshape(-1)).reshape(rho.shape), direct, atol=1e-12)

    def test_no_ground_transfer_without_fields(self, fp2):
        s, t = fp2
        params = ModelParams(ground_mixing_rate=0.0)
        L = assemble_liouvillian(
            assemble_hamiltonian(s, t, []), assemble_dissipators(s, t, params)
        )
        rho = np.diag([1 / 3] * 3 + [0.0] * 10).astype(complex)
        assert np.max(np.abs(L @ rho.reshape(-1))) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            assemble_liouvillian(np.zeros((3, 3)), [(np.zeros((2, 2)), 1.0)])
        with pytest.raises(ValueError):
            assemble_liouvillian(np.zeros((3, 3)), [], np.zeros((2, 2)))


def two_level_liouvillian(omega, delta, gamma):
    # |g> = 0, |e> = 1, decay e -> g at 2*gamma so rho_eg decays at gamma
    H = np.array([[0, omega / 2], [omega / 2, -delta]], dtype=complex)
    A = np.array([[0, 1], [0, 0]], dtype=float)
    return assemble_liouvillian(H, [(A, 2 * gamma)])


class TestSteadyState:
    def test_no_fields_fixed_equal_f1(self, fp2):
        s, t = fp2
        rho = steady_state(liouvillian(s, t, [], BASELINE))
        assert np.allclose(np.diag(rho).real, [1 / 3] * 3 + [0] * 10, atol=1e-12)
        assert np.max(np.abs(rho - np.diag(np.diag(rho)))) < 1e-12

    @pytest.mark.parametrize("delta", [0.0, 1.3, -4.0])
    def test_two_level_closed_form(self, delta):
        omega, gamma = 2.0, 2.8
        rho = steady_state(two_level_liouvillian(omega, delta, gamma))
        # saturated two-level steady state with Gamma = 2 gamma
        denom = gamma**2 + delta**2 + omega**2 / 2
        expected = (omega / 2) * (delta - 1j * gamma) / denom
        assert rho[1, 0] == pytest.approx(expected, abs=1e-12)
        assert rho[1, 1].real == pytest.approx((omega**2 / 4) / denom, abs=1e-12)
        if delta == 0.0:
            assert abs(rho[0, 1].imag) == pytest.approx((omega / 2) * gamma / (gamma**2 + omega**2 / 2))

    def test_coupling_only_full_pumping_vs_time_propagation(self, fp2):
        s, t = fp2
        params = ModelParams(population_model="full", ground_mixing_rate=0.04)
        L = liouvillian(s, t, [FieldConfig.coupling(78.0, 0.0, 1.5)], params)
        rho = steady_state(L)
        rho0 = np.eye(len(s), dtype=complex) / len(s)
        rho_t = (scipy.linalg.expm(L * 3000.0) @ rho0.reshape(-1)).reshape(rho.shape)
        assert np.allclose(rho, rho_t, atol=1e-9)
        pops = np.diag(rho).real
        a = pops[s.indices(Manifold.GROUND_F1)].sum()
        b3 = pops[s.index["b3"]]
        assert a + b3 > 0.95
        assert b3 > pops[[s.index[k] for k in ("b1", "b2", "b4", "b5")]].max() * 10

    def test_dark_state_degeneracy_raises(self, fp2):
        s, t = fp2
        params = ModelParams(population_model="full", ground_mixing_rate=0.0)
        with pytest.raises(SolverError):
            steady_state(liouvillian(s, t, [], params))

    @pytest.mark.parametrize("omega_c", [14.0, 78.0])
    @pytest.mark.parametrize("model", list(PopulationModel))
    def test_physicality(self, fp2, omega_c, model):
        s, t = fp2
        params = ModelParams(population_model=model)
        coh, states = full_coherences(
            s, t, baseline_fields(omega_c), params, symmetric_grid(60, 41), return_states=True
        )
        for rho in states:
            assert np.max(np.abs(rho - rho.conj().T)) < 1e-10
            assert abs(np.trace(rho) - 1) < 1e-10
            assert np.diag(rho).real.min() >= -1e-12

    def test_detuning_split_matches_direct_build(self, fp2):
        s, t = fp2
        fields = baseline_fields(56.0)
        params = ModelParams(population_model="full")
        _, states = full_coherences(s, t, fields, params, [7.3], return_states=True)
        L = liouvillian(s, t, [fields[0], fields[1].with_detuning(7.3)], params)
        assert np.allclose(steady_state(L), states[0], atol=1e-13)

    def test_raw_solution_hermitian(self, fp2):
        s, t = fp2
        L = liouvillian(s, t, baseline_fields(78.0), BASELINE)
        rho = steady_state(L, hermitize=False)
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-12


class TestLinearResponse:
    def test_channels(self, fp2):
        s, t = fp2
        coh = linear_response_coherences(s, t, baseline_fields(78.0), BASELINE, 0.0)
        assert set(coh) == CHANNELS_FP2

    def test_perfect_dark_state(self, fp2):
        s, t = fp2
        params = ModelParams(gamma_ab=1e-12)
        fields = baseline_fields(78.0, linewidth=0.0)
        coh = linear_response_coherences(s, t, fields, params, 0.0)
        assert abs(coh[("a2", "c2")]) < 1e-9
        assert abs(coh[("a1", "c1")]) < 1e-9

    def test_central_channel_is_two_level(self, fp2):
        s, t = fp2
        coh = linear_response_coherences(s, t, baseline_fields(78.0), BASELINE, 0.0)
        omega = t("a3", "c3", -1) * 2.0 / np.sqrt(2)
        expected = two_level_coherence(omega, 0.0, 2.8 + 1.5, 1 / 3)
        assert coh[("a3", "c3")] == pytest.approx(complex(expected), rel=1e-12)

    @pytest.mark.filterwarnings("ignore:probe Rabi frequency")
    @settings(max_examples=25, deadline=None)
    @given(
        omega_p=st.floats(0.01, 5.0),
        omega_c=st.floats(0.0, 100.0),
        delta=st.floats(-60, 60),
    )
    def test_probe_linearity(self, omega_p, omega_c, delta):
        s, t = scheme_and_table()
        full = linear_response_coherences(s, t, baseline_fields(omega_c, omega_p=omega_p), BASELINE, delta)
        half = linear_response_coherences(s, t, baseline_fields(omega_c, omega_p=omega_p / 2), BASELINE, delta)
        for ch in full:
            assert half[ch] == pytest.approx(full[ch] / 2, rel=1e-6, abs=1e-300)

    @pytest.mark.parametrize("scheme_id", ["D1_Fp1", "D1_Fp2"])
    def test_two_level_reduction(self, scheme_id):
        s, t = scheme_and_table(scheme_id)
        grid = symmetric_grid(60, 121)
        coh = linear_response_grid(s, t, baseline_fields(0.0), BASELINE, grid)
        for (lo, up), rho in coh.items():
            q = s[up].m - s[lo].m
            omega = t(lo, up, q) * 2.0 / np.sqrt(2)
            expected = two_level_coherence(omega, grid, 2.8 + 1.5, 1 / 3)
            assert np.max(np.abs(rho - expected)) <= 1e-9 * np.max(np.abs(expected))

    def test_mirror_channels(self, fp2):
        s, t = fp2
        grid = symmetric_grid(60, 201)
        coh = linear_response_grid(s, t, baseline_fields(56.0), BASELINE, grid)
        pairs = [(("a1", "c1"), ("a3", "c5")), (("a2", "c2"), ("a2", "c4")), (("a3", "c3"), ("a1", "c3"))]
        for left, right in pairs:
            dl, dr = t(*left), t(*right)
            # rho / d is the mirror-invariant response (Condon-Shortley signs differ)
            assert np.allclose(coh[left] / dl, coh[right] / dr, rtol=1e-12, atol=0)

    def test_requires_fixed_population(self, fp2):
        s, t = fp2
        with pytest.raises(ValueError):
            linear_response_coherences(s, t, baseline_fields(78.0), ModelParams(population_model="full"), 0.0)

    def test_strong_probe_warns(self, fp2):
        s, t = fp2
        with pytest.warns(UserWarning):
            linear_response_coherences(s, t, baseline_fields(5.0, omega_p=2.0), BASELINE, 0.0)
