import numpy as np
import pytest
from scipy.special import zeta as riemann_zeta

from lamellar.errors import DomainError, NotCriticalError
from lamellar.kernels import GreenParams, KernelParams, green_value, kernel_value
from lamellar.potential import solve_potential
from lamellar.profiles import (
    from_interfaces,
    make_equidistributed,
    perturb,
    tangent_project,
)
from lamellar.sharp_energy import (
    EnergyBreakdown,
    ModelParams,
    energy_H,
    energy_K,
    energy_total,
    grad_E,
    grad_K_part,
    hessian_E,
    lagrange_multiplier,
)

from helpers import fd_gradient, fd_hessian, random_profile, random_profile_any_mass


def fourier_H(n, s):
    """Independent oracle: H(U_N) = 4 pi^(2s-2) N^(2s) sum_{j odd} j^(2s-2)."""
    odd_sum = (1 - 2.0 ** (2 * s - 2)) * riemann_zeta(2 - 2 * s)
    return 4 * np.pi ** (2 * s - 2) * n ** (2 * s) * odd_sum


class TestEnergyH:
    def test_fourier_oracle_U2(self):
        h = energy_H(make_equidistributed(2), KernelParams(0.25))
        assert h == pytest.approx(1.7155, abs=2e-4)  # headline value
        assert h == pytest.approx(fourier_H(2, 0.25), rel=1e-10)

    def test_scaling_ratio(self):
        kp = KernelParams(0.25)
        h2 = energy_H(make_equidistributed(2), kp)
        h4 = energy_H(make_equidistributed(4), kp)
        assert h4 / h2 == pytest.approx(2**0.5, rel=1e-10)

    @pytest.mark.parametrize("s", [0.1, 0.25, 0.4])
    def test_fourier_oracle_many(self, s):
        kp = KernelParams(s)
        for n in (2, 4, 8, 16):
            assert energy_H(make_equidistributed(n), kp) == pytest.approx(
                fourier_H(n, s), rel=1e-10
            )

    def test_shift_invariance(self):
        # translate by a multiple of the lattice period 2/N: exact relabeling
        kp = KernelParams(0.3, 500)
        rng = np.random.default_rng(21)
        for _ in range(10):
            p = random_profile(rng, 6, max_shift=0.2)
            tau = rng.uniform(0, 1)
            shifted = np.sort((p.x + tau) % 1.0)
            if np.sum(p.x + tau >= 1.0) % 2 == 1:
                continue  # odd wrap flips the block at 0 out of the class
            if np.min(np.diff(shifted)) < 1e-3 or shifted[0] < 1e-3 or shifted[-1] > 1 - 1e-3:
                continue
            q = from_interfaces(shifted)
            assert energy_H(q, kp) == pytest.approx(energy_H(p, kp), rel=1e-10)

    def test_reflection_invariance(self):
        kp = KernelParams(0.2, 400)
        rng = np.random.default_rng(22)
        for _ in range(10):
            p = random_profile(rng)
            q = from_interfaces(np.sort(1.0 - p.x))
            assert energy_H(q, kp) == pytest.approx(energy_H(p, kp), rel=1e-10)


class TestEnergyK:
    def test_closed_form(self):
        for n in (2, 4, 8, 16, 32):
            for g in (0.01, 0.1, 1.0):
                k = energy_K(make_equidistributed(n), GreenParams(g))
                assert k == pytest.approx(1.0 / (24 * g**2 * n**2), rel=1e-10)

    def test_quarter_gamma_example(self):
        assert energy_K(make_equidistributed(4), GreenParams(0.5)) == pytest.approx(
            1 / 96, rel=1e-12
        )

    def test_gamma_scaling(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            p = random_profile(rng)
            g = float(rng.uniform(0.05, 2.0))
            assert energy_K(p, GreenParams(2 * g)) == pytest.approx(
                energy_K(p, GreenParams(g)) / 4.0, rel=1e-12
            )

    def test_agrees_with_potential_route(self):
        from lamellar.potential import K_from_v

        rng = np.random.default_rng(24)
        for _ in range(100):
            n = int(rng.choice([2, 4, 6, 8]))
            p = random_profile_any_mass(rng, n)
            g = GreenParams(float(rng.uniform(0.05, 2.0)))
            assert energy_K(p, g) == pytest.approx(K_from_v(p, g), rel=1e-10)

    def test_nonnegative(self):
        rng = np.random.default_rng(25)
        for _ in range(50):
            assert energy_K(random_profile(rng), GreenParams(0.3)) >= 0.0


class TestEnergyTotal:
    def test_breakdown(self):
        mp = ModelParams(0.25, 1.0)
        eb = energy_total(make_equidistributed(2), mp)
        assert eb.w == 0.0
        assert eb.k == pytest.approx(1 / 96, rel=1e-12)
        assert eb.h == pytest.approx(1.7155, abs=2e-4)
        assert eb.total == eb.h + eb.k

    def test_scaling_envelope(self):
        # measured two-sided constant against N^(2s) + 1/(gamma^2 N^2)
        for gamma in (0.1, 1.0):
            mp = ModelParams(0.25, gamma)
            worst = 1.0
            for n in range(2, 66, 2):
                e = energy_total(make_equidistributed(n), mp).total
                ref = n**0.5 + 1.0 / (gamma**2 * n**2)
                worst = max(worst, e / ref, ref / e)
            assert worst <= 10.0

    def test_total_invariant_enforced(self):
        with pytest.raises(DomainError):
            EnergyBreakdown(1.0, 0.0, 0.25, 2.0)
        with pytest.raises(DomainError):
            EnergyBreakdown(-1.0, 0.0, 0.25, -0.75)

    def test_serialization(self):
        eb = EnergyBreakdown(1.0, 0.0, 0.25, 1.25)
        assert eb.CSV_HEADER == "h,w,k,total"
        assert eb.to_csv_row() == "1,0,0.25,1.25"
        assert eb.to_json_dict() == {"h": 1.0, "w": 0.0, "k": 0.25, "total": 1.25}


class TestGradient:
    def test_vanishes_at_equidistributed(self):
        mp = ModelParams(0.25, 0.05)
        for n in (2, 4, 8):
            g = tangent_project(grad_E(make_equidistributed(n), mp)).v
            assert np.max(np.abs(g)) < 1e-8

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(26)
        for n in (4, 6):
            for _ in range(5):
                p = random_profile_any_mass(rng, n)
                mp = ModelParams(float(rng.uniform(0.15, 0.45)), float(rng.uniform(0.2, 1.0)))
                g = grad_E(p, mp)
                g_fd = fd_gradient(p, mp)
                assert np.max(np.abs(g - g_fd)) <= 1e-5 * np.max(np.abs(g_fd))

    def test_k_part_is_potential_at_interfaces(self):
        rng = np.random.default_rng(27)
        for _ in range(20):
            n = int(rng.choice([2, 4, 6]))
            p = random_profile_any_mass(rng, n)
            mp = ModelParams(0.3, float(rng.uniform(0.1, 1.0)))
            v = solve_potential(p, mp.green_params())
            signs = np.where(np.arange(1, n + 1) % 2 == 0, -1.0, 1.0)  # (-1)^(i-1)
            expected = 2.0 * signs * v(p.x)
            assert np.max(np.abs(grad_K_part(p, mp) - expected)) < 1e-10


class TestHessian:
    def test_circulant_at_equidistributed(self):
        mp = ModelParams(0.25, 0.05)
        for n in (4, 8, 16):
            h = hessian_E(make_equidistributed(n), mp)
            row0 = h[0]
            for i in range(1, n):
                assert np.max(np.abs(h[i] - np.roll(row0, i))) < 1e-12 * np.max(np.abs(h))

    def test_off_diagonal_entry_formula(self):
        # entry (1,2) at U_4: 4 (-1)^(1+2-1) (C K - G)(x_1 - x_2); the Green
        # part enters with weight one, as finite differences confirm
        mp = ModelParams(0.25, 0.05)
        h = hessian_E(make_equidistributed(4), mp)
        expected = 4.0 * (
            kernel_value(0.25, mp.kernel_params()) - green_value(0.25, mp.green_params())
        )
        assert h[0, 1] == pytest.approx(expected, rel=1e-13)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(28)
        for n in (4, 6):
            for _ in range(3):
                p = random_profile_any_mass(rng, n)
                mp = ModelParams(float(rng.uniform(0.2, 0.45)), float(rng.uniform(0.2, 0.8)))
                h = hessian_E(p, mp)
                h_fd = fd_hessian(p, mp)
                assert np.max(np.abs(h - h_fd)) <= 1e-4 * np.max(np.abs(h_fd))

    def test_row_sums_vanish(self):
        rng = np.random.default_rng(29)
        for _ in range(10):
            p = random_profile(rng)
            h = hessian_E(p, ModelParams(0.3, 0.4))
            assert np.max(np.abs(h.sum(axis=1))) < 1e-10 * np.max(np.abs(h))

    def test_symmetric(self):
        p = random_profile(np.random.default_rng(30), 6)
        h = hessian_E(p, ModelParams(0.2, 0.6))
        np.testing.assert_allclose(h, h.T, rtol=0, atol=0)


class TestLagrangeMultiplier:
    def test_residual_small_at_equidistributed(self):
        mp = ModelParams(0.25, 0.05)
        for n in (2, 4, 8):
            lam = lagrange_multiplier(make_equidistributed(n), mp)
            g = grad_E(make_equidistributed(n), mp)
            signs = np.where(np.arange(1, n + 1) % 2 == 0, -1.0, 1.0)
            assert np.max(np.abs(g + 2.0 * signs * lam)) < 1e-8

    def test_independent_of_interface_choice(self):
        # the defining integral is the same for every interface; since the
        # gradient vanishes identically at U_N it is zero for each of them
        from lamellar.sharp_energy import _u_weighted_integrals

        mp = ModelParams(0.25, 0.05)
        for n in (4, 8):
            j = _u_weighted_integrals(make_equidistributed(n), mp, 1000)
            assert np.max(np.abs(j - j[0])) < 1e-9
            assert np.max(np.abs(j)) < 1e-9

    def test_not_critical_error(self):
        mp = ModelParams(0.25, 0.05)
        p = perturb(
            make_equidistributed(4), tangent_project([1.0, 0.0, 0.0, 0.0]), 0.01
        )
        with pytest.raises(NotCriticalError):
            lagrange_multiplier(p, mp)


class TestValidation:
    def test_model_params(self):
        with pytest.raises(DomainError):
            ModelParams(0.6, 1.0)
        with pytest.raises(DomainError):
            ModelParams(0.25, -1.0)
        with pytest.raises(DomainError):
            ModelParams(0.25, 1.0, 1.5)
        with pytest.raises(DomainError):
            ModelParams(0.25, 1.0, 0.0, -0.1)
