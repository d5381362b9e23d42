import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import BODIES, random_betas
from hardscatter.errors import DomainError, InputError
from hardscatter.geometry import CollisionParam2D, ConvexBody2D, MassInertia, docd
from hardscatter.reduction import (
    DELTA,
    I_STAR,
    EnergyMomentum2,
    H_P,
    conjugation_identity,
    conjugation_residual_from_d,
    gamma_hat,
    gamma_hat_from_d,
    intertwine_2d,
    intertwine_residuals,
    invert_H_P,
    k_hat,
    k_hat_from_d,
    random_admissible,
)
from hardscatter.scattering import sigma_noncanonical

UNIT = MassInertia(1.0, 1.0)
vec4 = st.lists(st.floats(-3, 3), min_size=4, max_size=4).map(np.array)
unit4 = vec4.filter(lambda v: np.linalg.norm(v) > 1e-3).map(lambda v: v / np.linalg.norm(v))
angles = st.floats(0, 2 * math.pi, allow_nan=False)


def test_constants_exact():
    assert I_STAR.tolist() == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]]
    assert DELTA[2, 2] == 1 / math.sqrt(2)
    assert DELTA[0, 0] == DELTA[1, 1] == 1.0


class TestHP:
    def test_unit_normalization(self):
        em = EnergyMomentum2(1.0, np.zeros(2), UNIT)
        y = np.array([0.5, 0.5, 0.5, 0.5])
        H = H_P(em, y)
        assert np.sum((UNIT.weights * H) ** 2) == pytest.approx(1)

    def test_inadmissible(self):
        with pytest.raises(DomainError):
            EnergyMomentum2(0.1, [1.0, 0.0], UNIT)

    def test_zero_y(self):
        with pytest.raises(InputError):
            H_P(EnergyMomentum2(1.0, np.zeros(2), UNIT), np.zeros(4))

    @given(unit4, st.floats(0.2, 5), st.floats(0.1, 3))
    def test_norm_momentum_inverse(self, y, m, J):
        mi = MassInertia(m, J)
        em = random_admissible(np.random.default_rng(0), mi)
        H = H_P(em, y)
        assert np.sum((mi.weights * H) ** 2) == pytest.approx(em.e**2, rel=1e-12)
        assert np.allclose(m * (H[:2] + H[2:4]), em.p, atol=1e-12)
        em2, y2 = invert_H_P(H, mi)
        assert np.allclose(y2, y, atol=1e-10)
        assert em2.e == pytest.approx(em.e, rel=1e-12)

    def test_near_boundary(self):
        mi = MassInertia(2.0, 0.5)
        p = np.array([1.0, 0.5])
        e = math.sqrt(p @ p / (2 * mi.m)) * (1 + 1e-6)
        em = EnergyMomentum2(e, p, mi)
        H = H_P(em, np.array([0, 0, 1.0, 0]))
        assert np.sum((mi.weights * H) ** 2) == pytest.approx(e**2, rel=1e-9)
        assert em.kappa < 1e-2


class TestReflectionVectors:
    def test_k_hat_example(self):
        k, _ = k_hat_from_d(UNIT, 1.0, 0.0)
        assert np.allclose(k, np.array([0, 1, -math.sqrt(2), -math.sqrt(2)]) / math.sqrt(5))

    def test_gamma_hat_example(self):
        g, _ = gamma_hat_from_d(UNIT, 1.0, 0.0)
        assert np.allclose(g, np.array([0, 1, -2]) / math.sqrt(5))

    @given(angles, angles, angles)
    def test_unit_and_involutive(self, psi, th, thb):
        b = BODIES["eccentric"]
        beta = CollisionParam2D(psi, th, thb)
        k, s = k_hat(b.mass_inertia, b, beta)
        g, r = gamma_hat(b.mass_inertia, b, beta)
        assert abs(k @ k - 1) <= 1e-12 and abs(g @ g - 1) <= 1e-12
        assert np.allclose(s @ s, np.eye(4), atol=1e-12)
        assert np.allclose(r @ r, np.eye(3), atol=1e-12)

    def test_uses_geometric_d(self):
        b = BODIES["eccentric"]
        beta = CollisionParam2D(0.7, 0.2, 1.3)
        k, _ = k_hat(b.mass_inertia, b, beta)
        k2, _ = k_hat_from_d(b.mass_inertia, docd(b, beta), 0.7)
        assert np.array_equal(k, k2)


class TestIntertwining:
    """The identity that holds is sigma_x H_P(y) = H_P(-s_beta y)."""

    @pytest.mark.parametrize("name", ["disk", "eccentric", "squareish"])
    def test_negated_reflection_holds(self, name, rng):
        b = BODIES[name]
        mi = b.mass_inertia
        em = random_admissible(rng, mi)
        B = random_betas(rng, 1000)
        y = rng.standard_normal((1000, 4))
        y /= np.linalg.norm(y, axis=1, keepdims=True)
        from hardscatter.geometry import docd_many
        d = docd_many(b, B[:, 0], B[:, 1], B[:, 2])
        assert np.max(intertwine_residuals(mi, d, B[:, 0], em, y, negate_reflection=True)) <= 1e-9

    def test_literal_reflection_is_off_by_sign(self, rng):
        b = BODIES["eccentric"]
        mi = b.mass_inertia
        em = random_admissible(rng, mi)
        beta = CollisionParam2D(0.4, 1.0, 2.0)
        y = np.array([0.5, -0.5, 0.5, 0.5])
        assert intertwine_2d(mi, b, em, y, beta) > 0.1
        assert intertwine_2d(mi, b, em, y, beta, negate_reflection=True) <= 1e-12

    def test_k_hat_direction(self, rng):
        """y = k: s y = -y, so -s y = y and H_P(k) is fixed by the map."""
        b = BODIES["oval"]
        mi = b.mass_inertia
        em = random_admissible(rng, mi)
        beta = CollisionParam2D(1.3, 0.1, 0.9)
        k, _ = k_hat(mi, b, beta)
        assert intertwine_2d(mi, b, em, k, beta, negate_reflection=True) <= 1e-9
        assert intertwine_2d(mi, b, em, k, beta) > 0.1
        H = H_P(em, k)
        assert np.allclose(sigma_noncanonical(mi, b, beta) @ H, H, atol=1e-12)

    def test_orthogonal_to_k_is_negated(self, rng):
        b = BODIES["oval"]
        mi = b.mass_inertia
        em = EnergyMomentum2(2.0, np.zeros(2), mi)
        beta = CollisionParam2D(1.3, 0.1, 0.9)
        k, _ = k_hat(mi, b, beta)
        y = rng.standard_normal(4)
        y -= (y @ k) * k
        y /= np.linalg.norm(y)
        S = sigma_noncanonical(mi, b, beta)
        assert np.allclose(S @ H_P(em, y), -H_P(em, y), atol=1e-12)

    def test_mass_inertia_mismatch(self, rng):
        b = BODIES["disk"]
        em = random_admissible(rng, MassInertia(5.0, 1.0))
        with pytest.raises(InputError):
            intertwine_2d(b.mass_inertia, b, em, np.array([1.0, 0, 0, 0]), CollisionParam2D(0, 0, 0))


class TestConjugation:
    def test_hand_example(self):
        assert conjugation_residual_from_d(UNIT, 1.0, 0.0) <= 1e-14

    def test_disks_sampled(self, rng):
        b = ConvexBody2D.disk(0.5)
        for beta in random_betas(rng, 1000):
            assert conjugation_identity(b.mass_inertia, b, CollisionParam2D(*beta)) <= 1e-12

    @given(st.floats(0.1, 5), st.floats(0.05, 3), st.floats(0.2, 4), angles)
    def test_any_mass_inertia(self, m, J, d, psi):
        assert conjugation_residual_from_d(MassInertia(m, J), d, psi) <= 1e-12

    def test_negative_control(self):
        assert conjugation_residual_from_d(UNIT, 1.0, 0.0, delta=np.eye(3)) > 0.1
