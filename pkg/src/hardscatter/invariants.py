"""Collision invariants as the kernel of a sampled linear system.

A candidate invariant is a finite combination of basis functions of one
particle's state ``(v, omega, theta)``.  Its collision residual is linear in
the coefficients, so sampling many collisions gives a matrix whose kernel is
the space of invariants within the basis.  The expected answer is
``a(theta) + b . v + c (m |v|^2 + J omega^2)``, i.e. a kernel of dimension
``(2K + 1) + 3`` for Fourier order ``K``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InputError
from .geometry import ConvexBody2D, MassInertia
from .reduction import EnergyMomentum2, H_P
from .scattering import VelocityState2D, sample_betas, sigma_batch, _check_family

KERNEL_THRESHOLD = 1e-8
GAP_GUARD = 10.0
VALIDATION_TOL = 1e-8

MONOMIALS_2D = ("v1", "v2", "w", "v1^2", "v2^2", "w^2", "v1*v2", "v1*w", "v2*w")
MONOMIALS_3D = ("1", "v1", "v2", "v3", "v1^2", "v2^2", "v3^2", "v1*v2", "v1*v3", "v2*v3")


@dataclass(frozen=True)
class BasisSpec:
    """Fourier order in the orientation and whether to include Fourier x monomial products."""

    K: int = 1
    cross: bool = False
    sphere: bool = False

    def __post_init__(self):
        if self.K < 0:
            raise InputError("Fourier order must be non-negative")

    def names(self) -> list[str]:
        if self.sphere:
            return list(MONOMIALS_3D)
        fourier = ["1"] + [f"{f}{k}t" for k in range(1, self.K + 1) for f in ("cos", "sin")]
        out = fourier + list(MONOMIALS_2D)
        if self.cross:
            out += [f"{f}*{mname}" for f in fourier[1:] for mname in MONOMIALS_2D]
        return out

    @property
    def size(self) -> int:
        return len(self.names())

    def expected_dimension(self) -> int:
        return 5 if self.sphere else (2 * self.K + 1) + 3


def _fourier_values(theta, K):
    cols = [np.ones_like(theta)]
    for k in range(1, K + 1):
        cols += [np.cos(k * theta), np.sin(k * theta)]
    return np.stack(cols, axis=-1)


def _monomials_2d(v, w):
    v1, v2 = v[..., 0], v[..., 1]
    return np.stack([v1, v2, w, v1 * v1, v2 * v2, w * w, v1 * v2, v1 * w, v2 * w], axis=-1)


def _monomials_3d(v):
    v1, v2, v3 = v[..., 0], v[..., 1], v[..., 2]
    return np.stack([np.ones_like(v1), v1, v2, v3, v1 * v1, v2 * v2, v3 * v3, v1 * v2, v1 * v3, v2 * v3], axis=-1)


def basis_values(spec: BasisSpec, v, w=None, theta=None) -> np.ndarray:
    """Basis functions at single-particle states; last axis indexes the basis."""
    v = np.asarray(v, dtype=float)
    if spec.sphere:
        return _monomials_3d(v)
    w = np.asarray(w, dtype=float)
    theta = np.asarray(theta, dtype=float)
    F = _fourier_values(theta, spec.K)
    P = _monomials_2d(v, w)
    cols = [F, P]
    if spec.cross and spec.K > 0:
        cols.append((F[..., 1:, None] * P[..., None, :]).reshape(F.shape[:-1] + (-1,)))
    return np.concatenate(cols, axis=-1)


@dataclass(frozen=True)
class CandidateInvariant:
    spec: BasisSpec
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.shape != (self.spec.size,) or not np.all(np.isfinite(c)):
            raise InputError(f"need {self.spec.size} finite coefficients")
        object.__setattr__(self, "coefficients", c)

    def __call__(self, v, w=None, theta=None):
        return basis_values(self.spec, v, w, theta) @ self.coefficients


def characterized_family(a_coeffs, b, c: float, mi: MassInertia, cross: bool = False) -> CandidateInvariant:
    """``a(theta) + b . v + c (m |v|^2 + J omega^2)``; ``a_coeffs = [a0, cos1, sin1, cos2, ...]``."""
    a = np.asarray(a_coeffs, dtype=float)
    if a.size % 2 != 1:
        raise InputError("a_coeffs must have odd length 2K + 1")
    spec = BasisSpec(K=(a.size - 1) // 2, cross=cross)
    coef = np.zeros(spec.size)
    coef[: a.size] = a
    off = a.size
    coef[off + 0], coef[off + 1] = b
    coef[off + 3] = c * mi.m
    coef[off + 4] = c * mi.m
    coef[off + 5] = c * mi.J
    return CandidateInvariant(spec, coef)


def _split(V):
    return V[..., 0:2], V[..., 2:4], V[..., 4], V[..., 5]


def residual_matrix(spec: BasisSpec, V, Vp, theta, theta_bar) -> np.ndarray:
    """Rows are samples, columns basis functions."""
    v, vb, w, wb = _split(V)
    vp, vbp, wp, wbp = _split(Vp)
    return ((basis_values(spec, vp, wp, theta) - basis_values(spec, v, w, theta))
            + (basis_values(spec, vbp, wbp, theta_bar) - basis_values(spec, vb, wb, theta_bar)))


def residual(phi: CandidateInvariant, family: str, mi: MassInertia, body: ConvexBody2D, V, beta) -> float:
    """``phi(v', w', t) + phi(vb', wb', tb) - phi(v, w, t) - phi(vb, wb, tb)``."""
    V = V.as_array() if isinstance(V, VelocityState2D) else np.asarray(V, dtype=float)
    S = sigma_batch(family, mi, body, beta.psi, beta.theta, beta.theta_bar)[0]
    Vp = S @ V
    return float(residual_matrix(phi.spec, V, Vp, beta.theta, beta.theta_bar) @ phi.coefficients)


def _sample_2d(family, mi, body, n, rng):
    psi, th, thb = sample_betas(rng, n)
    V = rng.standard_normal((n, 6))
    S = sigma_batch(family, mi, body, psi, th, thb)
    return V, np.einsum("nij,nj->ni", S, V), th, thb


def _sample_sphere(n, rng):
    from .spheres import sigma_sphere, sphere_velocity_samples

    nn, V = sphere_velocity_samples(rng, n)
    return V, np.einsum("nij,nj->ni", sigma_sphere(nn), V)


def _system(family, spec, mi, body, n, rng):
    """Residual rows and the single-particle values used for column scaling."""
    if family == "sphere":
        V, Vp = _sample_sphere(n, rng)
        B = [_monomials_3d(V[:, :3]), _monomials_3d(V[:, 3:])]
        R = (_monomials_3d(Vp[:, :3]) + _monomials_3d(Vp[:, 3:])) - (B[0] + B[1])
        return R, np.concatenate(B)
    V, Vp, th, thb = _sample_2d(family, mi, body, n, rng)
    v, vb, w, wb = _split(V)
    B = np.concatenate([basis_values(spec, v, w, th), basis_values(spec, vb, wb, thb)])
    return residual_matrix(spec, V, Vp, th, thb), B


@dataclass
class NullspaceResult:
    dimension: int
    basis_coefficients: np.ndarray
    singular_values: list
    sample_count: int
    seed: int
    family: str
    basis_names: list
    gap: float
    inconclusive: bool
    validation_residuals: list = field(default_factory=list)
    expected_dimension: int | None = None

    @property
    def passed(self) -> bool:
        return (not self.inconclusive and self.dimension == self.expected_dimension
                and all(r <= VALIDATION_TOL for r in self.validation_residuals))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["basis_coefficients"] = np.asarray(self.basis_coefficients).tolist()
        d["passed"] = self.passed
        return d


def nullspace_solve(family: str, mi: MassInertia | None, body: ConvexBody2D | None, spec: BasisSpec,
                    n_samples: int | None = None, seed: int = 0, threshold: float = KERNEL_THRESHOLD,
                    n_validate: int = 10_000) -> NullspaceResult:
    """Kernel of the sampled residual system, certified on an independent sample.

    Columns are scaled to unit empirical second moment before the SVD; the
    returned coefficients refer to the unscaled basis, each row normalized to
    unit max-abs coefficient.  A gap below ``GAP_GUARD`` between the kernel and
    the rest of the spectrum marks the result inconclusive.
    """
    if family == "sphere":
        spec = BasisSpec(sphere=True)
    else:
        _check_family(family)
    size = spec.size
    if n_samples is None:
        n_samples = max(20 * size, 2000)
    if n_samples < 10 * size:
        raise InputError(f"need at least {10 * size} samples for {size} basis functions")
    rng = np.random.default_rng(seed)
    R, B = _system(family, spec, mi, body, n_samples, rng)
    scale = np.sqrt(np.mean(B**2, axis=0))
    scale[scale == 0] = 1.0
    _, s, Vt = np.linalg.svd(R * (1.0 / scale), full_matrices=True)
    s_full = np.zeros(size)
    s_full[: s.size] = s
    smax = s_full.max()
    in_kernel = s_full <= threshold * smax
    dim = int(in_kernel.sum())
    kernel_sv = s_full[in_kernel].max() if dim else 0.0
    rest_sv = s_full[~in_kernel].min() if dim < size else smax
    gap = float(rest_sv / max(kernel_sv, np.finfo(float).eps * smax))
    coef = Vt[in_kernel] / scale
    if dim:
        coef = coef / np.max(np.abs(coef), axis=1, keepdims=True)

    Rv, Bv = _system(family, spec, mi, body, n_validate, np.random.default_rng(seed + 1_000_003))
    val = []
    for c in coef:
        phi_scale = max(float(np.sqrt(np.mean((Bv @ c) ** 2))), 1e-300)
        val.append(float(np.max(np.abs(Rv @ c)) / phi_scale))
    return NullspaceResult(
        dimension=dim, basis_coefficients=coef, singular_values=s_full.tolist(), sample_count=n_samples,
        seed=seed, family=family, basis_names=spec.names() if not spec.sphere else list(MONOMIALS_3D),
        gap=gap, inconclusive=gap < GAP_GUARD, validation_residuals=val,
        expected_dimension=spec.expected_dimension())


def expected_kernel(family: str, spec: BasisSpec, mi: MassInertia | None) -> np.ndarray:
    """Rows spanning the predicted invariants in the unscaled basis."""
    if family == "sphere":
        rows = np.zeros((5, 10))
        for i in range(4):
            rows[i, i] = 1.0
        rows[4, 4:7] = 1.0
        return rows
    nf = 2 * spec.K + 1
    rows = np.zeros((nf + 3, spec.size))
    for i in range(nf):
        rows[i, i] = 1.0
    rows[nf, nf] = 1.0
    rows[nf + 1, nf + 1] = 1.0
    rows[nf + 2, nf + 3] = mi.m
    rows[nf + 2, nf + 4] = mi.m
    rows[nf + 2, nf + 5] = mi.J
    return rows


def kernel_recovery_residual(result: NullspaceResult, expected: np.ndarray) -> float:
    """Worst relative distance of an expected row from the recovered span, and vice versa."""
    K = np.asarray(result.basis_coefficients)
    if K.size == 0:
        return float("inf")

    def dist(rows, span):
        Q, _ = np.linalg.qr(span.T)
        return max(float(np.linalg.norm(r - Q @ (Q.T @ r)) / np.linalg.norm(r)) for r in rows)

    return max(dist(expected, K), dist(K, expected))


def _matched_pairs(rng, n):
    """Unit 4-vectors ``y, y'`` with equal ``y3 y4`` but otherwise unrelated."""
    y = rng.standard_normal((n, 4))
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    t = y[:, 2] * y[:, 3]
    s_new = rng.uniform(2 * np.abs(t), 1.0)
    plus = np.sqrt(s_new + 2 * t)
    minus = np.sqrt(np.maximum(s_new - 2 * t, 0.0)) * rng.choice([-1.0, 1.0], size=n)
    plus *= rng.choice([-1.0, 1.0], size=n)
    y3, y4 = (plus + minus) / 2, (plus - minus) / 2
    a = rng.uniform(0, 2 * math.pi, n)
    rad = np.sqrt(np.maximum(1 - s_new, 0.0))
    yp = np.stack([rad * np.cos(a), rad * np.sin(a), y3, y4], axis=1)
    return y, yp


def reduced_dependence_check(family: str, mi: MassInertia | None, body: ConvexBody2D | None, em,
                             n_samples: int = 1000, seed: int = 0, spec: BasisSpec | None = None,
                             corrupt: float = 0.0) -> float:
    """Largest change of a recovered invariant between matched points of the energy-momentum sphere.

    Each kernel element ``phi`` induces ``Phi(V) = phi(v, w, t) + phi(vb, wb, tb)``.
    In the plane ``Phi`` is compared at ``H_P(e, p, y)`` and ``H_P(e, p, y')``
    with equal ``1 + 2 y3 y4``; for spheres at ``y`` and ``Q y`` with ``Q`` a random
    rotation.  ``corrupt`` adds that multiple of ``v1 * w`` (or ``v1 * v2`` for
    spheres) to every kernel element as a negative control.
    """
    if spec is None:
        spec = BasisSpec(K=1)
    res = nullspace_solve(family, mi, body, spec, seed=seed)
    coefs = np.array(res.basis_coefficients, copy=True)
    rng = np.random.default_rng(seed + 17)
    if family == "sphere":
        from .spheres import H_sphere

        if corrupt:
            coefs[:, MONOMIALS_3D.index("v1*v2")] += corrupt
        y = rng.standard_normal((n_samples, 3))
        y /= np.linalg.norm(y, axis=1, keepdims=True)
        Q = np.linalg.qr(rng.standard_normal((n_samples, 3, 3)))[0]
        yq = np.einsum("nij,nj->ni", Q, y)
        A, Bv = H_sphere(em, y), H_sphere(em, yq)
        f = lambda V: _monomials_3d(V[:, :3]) + _monomials_3d(V[:, 3:])
        return float(np.max(np.abs((f(A) - f(Bv)) @ coefs.T)))
    if not isinstance(em, EnergyMomentum2):
        raise InputError("planar check needs an EnergyMomentum2")
    if corrupt:
        coefs[:, 2 * spec.K + 1 + MONOMIALS_2D.index("v1*w")] += corrupt
    y, yp = _matched_pairs(rng, n_samples)
    th, thb = rng.uniform(0, 2 * math.pi, (2, n_samples))
    A, Bv = H_P(em, y), H_P(em, yp)

    def induced(V):
        v, vb, w, wb = _split(V)
        return basis_values(spec, v, w, th) + basis_values(spec, vb, wb, thb)

    return float(np.max(np.abs((induced(A) - induced(Bv)) @ coefs.T)))
