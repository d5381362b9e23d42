import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hardscatter.errors import DomainError, InputError
from hardscatter.spheres import (
    EnergyMomentum3,
    H_sphere,
    default_theta_grid,
    elementwise_sphere,
    intertwine_sphere,
    invert_H_sphere,
    n_sph,
    nu_hat,
    s_n,
    sigma_sphere,
    so3_span_probe,
    sphere_suite,
)

E1 = np.array([1.0, 0.0, 0.0])
vec3 = st.lists(st.floats(-3, 3), min_size=3, max_size=3).map(np.array)
unit3 = vec3.filter(lambda v: np.linalg.norm(v) > 1e-3).map(lambda v: v / np.linalg.norm(v))


def test_head_on_exchange():
    assert np.allclose(sigma_sphere(E1) @ [1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0])


def test_tangential_unchanged():
    V = np.array([0, 1.0, 0, 0, 0, 0])
    assert np.allclose(sigma_sphere(E1) @ V, V)


def test_nu_hat_unit():
    assert np.linalg.norm(nu_hat(n_sph(0.3, 1.2))) == pytest.approx(1, abs=1e-15)


def test_rejects_non_unit_normal():
    with pytest.raises(InputError):
        sigma_sphere([1.0, 1.0, 0.0])


@given(unit3)
def test_reflection_algebra(n):
    S = sigma_sphere(n)
    s = s_n(n)
    assert np.allclose(S @ S, np.eye(6), atol=1e-12)
    assert np.allclose(s @ s, np.eye(3), atol=1e-12)
    assert np.linalg.det(S) == pytest.approx(-1, abs=1e-12)
    assert np.linalg.det(s) == pytest.approx(-1, abs=1e-12)


@given(unit3, vec3, vec3)
def test_elementwise_matches_matrix(n, v, vb):
    out = sigma_sphere(n) @ np.concatenate([v, vb])
    a, b = elementwise_sphere(n, v, vb)
    assert np.allclose(np.concatenate([a, b]), out, atol=1e-12)
    assert (a - b) @ n == pytest.approx(-((v - vb) @ n), abs=1e-12)


@given(unit3, vec3)
def test_equal_velocities_unchanged(n, v):
    a, b = elementwise_sphere(n, v, v)
    assert np.allclose(a, v) and np.allclose(b, v)


@given(unit3, vec3, vec3)
def test_conservation_and_non_penetration(n, v, vb):
    a, b = elementwise_sphere(n, v, vb)
    assert np.allclose(a + b, v + vb, atol=1e-12)
    assert a @ a + b @ b == pytest.approx(v @ v + vb @ vb, abs=1e-12 * (1 + v @ v + vb @ vb))
    if (v - vb) @ n <= 0:
        assert (a - b) @ n >= -1e-12


class TestH:
    def test_example(self):
        em = EnergyMomentum3(1.0, np.zeros(3))
        H = H_sphere(em, E1)
        r = math.sqrt(2) / 2
        assert np.allclose(H, [-r, 0, 0, r, 0, 0])
        assert H @ H == pytest.approx(1)

    def test_inadmissible(self):
        with pytest.raises(DomainError):
            EnergyMomentum3(1.0, [2.0, 0, 0])

    def test_zero_y(self):
        with pytest.raises(InputError):
            H_sphere(EnergyMomentum3(1.0, np.zeros(3)), np.zeros(3))

    @given(vec3, st.floats(0.01, 3), unit3)
    def test_norm_momentum_roundtrip(self, p, extra, y):
        em = EnergyMomentum3(math.sqrt(p @ p / 2) + extra, p)
        H = H_sphere(em, y)
        assert np.allclose(H[:3] + H[3:], p, atol=1e-12)
        assert H @ H == pytest.approx(em.e**2, rel=1e-12)
        e, p2, y2 = invert_H_sphere(H)
        assert e == pytest.approx(em.e, rel=1e-12)
        assert np.allclose(y2, y, atol=1e-10)


class TestIntertwining:
    em = EnergyMomentum3(2.0, np.array([0.3, -0.5, 1.0]))

    def test_orthogonal_normal(self):
        assert intertwine_sphere(self.em, E1, np.array([0, 1.0, 0])) <= 1e-15

    def test_parallel_normal(self):
        assert intertwine_sphere(self.em, E1, E1) <= 1e-12

    def test_sampled(self, rng):
        n = rng.standard_normal((10_000, 3))
        n /= np.linalg.norm(n, axis=1, keepdims=True)
        y = rng.standard_normal((10_000, 3))
        y /= np.linalg.norm(y, axis=1, keepdims=True)
        assert np.max(intertwine_sphere(self.em, y, n)) <= 1e-10


class TestSo3Probe:
    def test_full_grid(self):
        rep, res = so3_span_probe(default_theta_grid(8))
        assert rep.rank == 3
        assert max(res) <= 1e-10
        assert rep.gap >= 1e3

    def test_single_point(self):
        rep, _ = so3_span_probe([(0.4, 1.0)])
        assert rep.rank <= 2
        assert any("< 6" in f for f in rep.flags)

    def test_pole_flagged(self):
        rep, _ = so3_span_probe([(a, 0.0) for a in np.linspace(0, 6, 8)])
        assert any("pole" in f for f in rep.flags)

    def test_empty(self):
        with pytest.raises(InputError):
            so3_span_probe([])


def test_suite_passes():
    out = sphere_suite(n_samples=2000, seed=1)
    assert out["passed"], out["checks"]


def test_suite_corrupt_fails():
    out = sphere_suite(n_samples=2000, seed=1, corrupt=True)
    assert not out["passed"]
    assert not out["checks"]["energy"]
