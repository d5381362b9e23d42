import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BODIES
from hardscatter.errors import InputError
from hardscatter.geometry import CollisionParam2D
from hardscatter.invariants import (
    MONOMIALS_2D,
    BasisSpec,
    CandidateInvariant,
    basis_values,
    characterized_family,
    expected_kernel,
    kernel_recovery_residual,
    nullspace_solve,
    reduced_dependence_check,
    residual,
)
from hardscatter.reduction import EnergyMomentum2
from hardscatter.spheres import EnergyMomentum3

FAMILIES = ["canonical", "noncanonical"]
angles = st.floats(0, 2 * math.pi, allow_nan=False)
velocities = st.lists(st.floats(-3, 3), min_size=6, max_size=6).map(np.array)


def single(spec, name):
    coef = np.zeros(spec.size)
    coef[spec.names().index(name)] = 1.0
    return CandidateInvariant(spec, coef)


class TestBasis:
    def test_sizes(self):
        assert BasisSpec(K=1).size == 3 + 9
        assert BasisSpec(K=2, cross=True).size == 5 + 9 + 4 * 9
        assert BasisSpec(sphere=True).size == 10

    def test_expected_dimension(self):
        assert [BasisSpec(K=k).expected_dimension() for k in range(3)] == [4, 6, 8]
        assert BasisSpec(sphere=True).expected_dimension() == 5

    def test_negative_order(self):
        with pytest.raises(InputError):
            BasisSpec(K=-1)

    def test_values(self):
        spec = BasisSpec(K=1)
        vals = basis_values(spec, np.array([2.0, 3.0]), 5.0, 0.0)
        assert dict(zip(spec.names(), vals)) == {
            "1": 1, "cos1t": 1, "sin1t": 0, "v1": 2, "v2": 3, "w": 5, "v1^2": 4, "v2^2": 9,
            "w^2": 25, "v1*v2": 6, "v1*w": 10, "v2*w": 15}


class TestResidual:
    b = BODIES["eccentric"]
    mi = b.mass_inertia

    @pytest.mark.parametrize("family", FAMILIES)
    @settings(max_examples=15)
    @given(V=velocities, psi=angles, th=angles, thb=angles)
    def test_momentum_energy_orientation(self, family, V, psi, th, thb):
        beta = CollisionParam2D(psi, th, thb)
        spec = BasisSpec(K=1)
        assert abs(residual(single(spec, "v1"), family, self.mi, self.b, V, beta)) <= 1e-12 * (1 + np.abs(V).max())
        energy = characterized_family([0, 0, 0], [0, 0], 1.0, self.mi)
        assert abs(residual(energy, family, self.mi, self.b, V, beta)) <= 1e-10 * (1 + V @ V)
        assert residual(single(spec, "cos1t"), family, self.mi, self.b, V, beta) == 0.0

    def test_spin_not_invariant(self, rng):
        spec = BasisSpec(K=0)
        worst = 0.0
        for _ in range(100):
            beta = CollisionParam2D(*rng.uniform(0, 2 * math.pi, 3))
            worst = max(worst, abs(residual(single(spec, "w"), "noncanonical", self.mi, self.b,
                                            rng.standard_normal(6), beta)))
        assert worst > 1e-3

    @pytest.mark.parametrize("family", FAMILIES)
    def test_characterized_family_sampled(self, family, rng):
        phi = characterized_family([0.3, 1.0, -0.5, 0.2, 0.7], [0.4, -1.1], 0.8, self.mi, cross=True)
        worst = 0.0
        for _ in range(500):
            beta = CollisionParam2D(*rng.uniform(0, 2 * math.pi, 3))
            V = rng.standard_normal(6)
            worst = max(worst, abs(residual(phi, family, self.mi, self.b, V, beta)))
        assert worst <= 1e-10

    def test_even_fourier_length(self):
        with pytest.raises(InputError):
            characterized_family([1, 0], [0, 0], 0, self.mi)

    def test_coefficient_shape(self):
        with pytest.raises(InputError):
            CandidateInvariant(BasisSpec(K=1), np.zeros(5))


class TestNullspace:
    @pytest.mark.parametrize("family", FAMILIES)
    def test_k1_dimension_and_recovery(self, family):
        b = BODIES["oval"]
        res = nullspace_solve(family, b.mass_inertia, b, BasisSpec(K=1), seed=0)
        assert res.dimension == 6
        assert not res.inconclusive and res.gap >= 1e3
        assert max(res.validation_residuals) <= 1e-8
        assert kernel_recovery_residual(res, expected_kernel(family, BasisSpec(K=1), b.mass_inertia)) <= 1e-6
        assert res.passed

    def test_cross_terms_add_nothing(self):
        b = BODIES["eccentric"]
        res = nullspace_solve("noncanonical", b.mass_inertia, b, BasisSpec(K=1, cross=True), seed=2)
        assert res.dimension == 6 and res.passed

    def test_sphere(self):
        res = nullspace_solve("sphere", None, None, BasisSpec(sphere=True), seed=0)
        assert res.dimension == 5 and res.passed
        assert kernel_recovery_residual(res, expected_kernel("sphere", BasisSpec(sphere=True), None)) <= 1e-6

    def test_disk_canonical_has_extra_spin_invariants(self):
        """On disks the canonical map never touches spins, so omega and omega^2 are invariant too."""
        b = BODIES["disk"]
        res = nullspace_solve("canonical", b.mass_inertia, b, BasisSpec(K=0), seed=0)
        assert res.dimension > 4 and not res.passed

    def test_too_few_samples(self):
        b = BODIES["oval"]
        with pytest.raises(InputError):
            nullspace_solve("canonical", b.mass_inertia, b, BasisSpec(K=1), n_samples=50)

    def test_json(self):
        b = BODIES["oval"]
        res = nullspace_solve("noncanonical", b.mass_inertia, b, BasisSpec(K=0), seed=5, n_validate=500)
        d = json.loads(json.dumps(res.to_dict()))
        assert d["seed"] == 5 and d["dimension"] == 4 and len(d["basis_coefficients"]) == 4

    def test_recovery_detects_wrong_span(self):
        b = BODIES["oval"]
        res = nullspace_solve("noncanonical", b.mass_inertia, b, BasisSpec(K=0), seed=1, n_validate=500)
        wrong = expected_kernel("noncanonical", BasisSpec(K=0), b.mass_inertia)
        wrong[-1, 1 + MONOMIALS_2D.index("w^2")] = 0.0
        assert kernel_recovery_residual(res, wrong) > 1e-3


class TestReducedDependence:
    def test_planar(self):
        b = BODIES["eccentric"]
        mi = b.mass_inertia
        em = EnergyMomentum2(2.0, np.array([0.5, -0.3]), mi)
        assert reduced_dependence_check("noncanonical", mi, b, em, seed=3) <= 1e-8

    def test_planar_corrupted(self):
        b = BODIES["eccentric"]
        mi = b.mass_inertia
        em = EnergyMomentum2(2.0, np.array([0.5, -0.3]), mi)
        assert reduced_dependence_check("noncanonical", mi, b, em, seed=3, corrupt=1.0) > 1e-3

    def test_sphere(self):
        em = EnergyMomentum3(2.0, np.array([0.1, 0.2, -0.4]))
        assert reduced_dependence_check("sphere", None, None, em) <= 1e-10
        assert reduced_dependence_check("sphere", None, None, em, corrupt=1.0) > 1e-3

    def test_planar_needs_planar_em(self):
        b = BODIES["oval"]
        with pytest.raises(InputError):
            reduced_dependence_check("noncanonical", b.mass_inertia, b, EnergyMomentum3(2.0, np.zeros(3)))
