"""Hard spheres with unit mass and unit diameter.

The pair velocity is ``V = [v, v_bar]`` in R^6.  Collision with normal ``n``
reflects ``V`` across the hyperplane orthogonal to ``[n, -n] / sqrt(2)``.
On the energy-momentum sphere this becomes the 3x3 reflection ``s_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError
from .liealg import RANK_THRESHOLD, SpanReport, span_rank


@dataclass(frozen=True)
class EnergyMomentum3:
    e: float
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (3,):
            raise InputError("p must be a 3-vector")
        object.__setattr__(self, "p", p)
        if not (self.e > 0 and self.e**2 > 0.5 * float(p @ p)):
            raise DomainError("inadmissible energy-momentum pair: need e^2 > |p|^2 / 2")

    @property
    def kappa(self) -> float:
        return math.sqrt(2 * self.e**2 - float(self.p @ self.p))


def _unit3(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    if n.shape[-1] != 3 or np.any(np.abs(np.linalg.norm(n, axis=-1) - 1) > 1e-12):
        raise InputError("collision normal must be a unit 3-vector")
    return n


def nu_hat(n) -> np.ndarray:
    n = _unit3(n)
    return np.concatenate([n, -n], axis=-1) / math.sqrt(2)


def sigma_sphere(n) -> np.ndarray:
    nu = nu_hat(n)
    return np.eye(6) - 2 * nu[..., :, None] * nu[..., None, :]


def s_n(n) -> np.ndarray:
    n = _unit3(n)
    return np.eye(3) - 2 * n[..., :, None] * n[..., None, :]


def elementwise_sphere(n, v, v_bar):
    n = _unit3(n)
    v = np.asarray(v, dtype=float)
    v_bar = np.asarray(v_bar, dtype=float)
    k = np.sum((v - v_bar) * n, axis=-1, keepdims=True) * n
    return v - k, v_bar + k


def H_sphere(em: EnergyMomentum3, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if not np.all(np.linalg.norm(y, axis=-1) > 0):
        raise InputError("y must be non-zero")
    ky = em.kappa * y
    return 0.5 * np.concatenate([em.p - ky, em.p + ky], axis=-1)


def invert_H_sphere(V):
    """Recover ``(e, p, y)`` from a point ``H(e, p, y)`` with ``|y| = 1``."""
    V = np.asarray(V, dtype=float)
    p = V[:3] + V[3:]
    e = float(np.linalg.norm(V))
    em = EnergyMomentum3(e, p)
    return e, p, (V[3:] - V[:3]) / em.kappa


def intertwine_sphere(em: EnergyMomentum3, y, n) -> float:
    """``|sigma_n H(e, p, y) - H(e, p, s_n y)|``; vectorized over leading axes of ``y`` and ``n``."""
    y = np.asarray(y, dtype=float)
    n = _unit3(n)
    lhs = np.einsum("...ij,...j->...i", sigma_sphere(n), H_sphere(em, y))
    rhs = H_sphere(em, np.einsum("...ij,...j->...i", s_n(n), y))
    return np.linalg.norm(lhs - rhs, axis=-1)


# --- so(3) from the reflection curve -----------------------------------------------


def n_sph(theta1, theta2) -> np.ndarray:
    t1, t2 = np.broadcast_arrays(np.asarray(theta1, float), np.asarray(theta2, float))
    return np.stack([np.cos(t1) * np.sin(t2), np.sin(t1) * np.sin(t2), np.cos(t2)], axis=-1)


def _dn(theta1, theta2):
    t1, t2 = np.broadcast_arrays(np.asarray(theta1, float), np.asarray(theta2, float))
    d1 = np.stack([-np.sin(t1) * np.sin(t2), np.cos(t1) * np.sin(t2), np.zeros(t1.shape)], axis=-1)
    d2 = np.stack([np.cos(t1) * np.cos(t2), np.sin(t1) * np.cos(t2), -np.sin(t2)], axis=-1)
    return d1, d2


def sphere_generators(theta_grid) -> list:
    """``dn (x) n - n (x) dn`` for both angles at every grid point."""
    out = []
    for t1, t2 in theta_grid:
        n = n_sph(t1, t2)
        for dn in _dn(t1, t2):
            out.append(np.outer(dn, n) - np.outer(n, dn))
    return out


def so3_basis() -> list:
    e = np.eye(3)
    return [np.outer(e[i], e[j]) - np.outer(e[j], e[i]) for i, j in ((0, 1), (0, 2), (1, 2))]


def default_theta_grid(n: int = 8):
    """``n x n`` grid, polar angle kept off the poles."""
    t1 = np.arange(n) * (2 * math.pi / n)
    t2 = (np.arange(n) + 0.5) * (math.pi / n)
    return [(a, b) for a in t1 for b in t2]


def so3_span_probe(theta_grid=None, threshold: float = RANK_THRESHOLD):
    """Rank of the generator span plus least-squares residuals of ``A1, A2, A3``."""
    if theta_grid is None:
        theta_grid = default_theta_grid()
    theta_grid = [(float(a), float(b)) for a, b in theta_grid]
    if not theta_grid:
        raise InputError("empty theta grid")
    gens = sphere_generators(theta_grid)
    report = span_rank(gens, threshold)
    if len(theta_grid) < 6:
        report.flags.append(f"grid has {len(theta_grid)} < 6 points")
    if any(abs(math.sin(b)) < 1e-12 for _, b in theta_grid):
        report.flags.append("grid touches a pole")
    if report.rank < 3:
        report.flags.append("rank below dim so(3)")
    G = np.stack([g.ravel() for g in gens], axis=1)
    residuals = []
    for A in so3_basis():
        coef, *_ = np.linalg.lstsq(G, A.ravel(), rcond=None)
        residuals.append(float(np.linalg.norm(G @ coef - A.ravel())))
    return report, residuals


def sphere_velocity_samples(rng: np.random.Generator, n: int):
    """Random unit normals and standard normal pair velocities."""
    nn = rng.standard_normal((n, 3))
    nn /= np.linalg.norm(nn, axis=1, keepdims=True)
    return nn, rng.standard_normal((n, 6))


def sphere_suite(n_samples: int = 10_000, seed: int = 0, corrupt: bool = False) -> dict:
    """Every hard-sphere check in one report.

    ``corrupt=True`` drops the ``1/sqrt 2`` normalization of the reflection
    vector, a negative control that must fail.
    """
    rng = np.random.default_rng(seed)
    nn, V = sphere_velocity_samples(rng, n_samples)
    if corrupt:
        nu = np.concatenate([nn, -nn], axis=1)
        S = np.eye(6) - 2 * nu[:, :, None] * nu[:, None, :]
    else:
        S = sigma_sphere(nn)
    Vp = np.einsum("nij,nj->ni", S, V)
    mom = float(np.max(np.abs((Vp[:, :3] + Vp[:, 3:]) - (V[:, :3] + V[:, 3:]))))
    en = float(np.max(np.abs(np.sum(Vp**2, 1) - np.sum(V**2, 1)) / np.sum(V**2, 1)))
    u0 = np.sum((V[:, :3] - V[:, 3:]) * nn, 1)
    u1 = np.sum((Vp[:, :3] - Vp[:, 3:]) * nn, 1)
    halfspace = int(np.sum((u0 <= 0) & (u1 < -1e-12)))
    det = float(np.max(np.abs(np.linalg.det(S) + 1)))
    inv = float(np.max(np.abs(np.einsum("nij,njk->nik", S, S) - np.eye(6))))

    y = rng.standard_normal((n_samples, 3))
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    p = rng.standard_normal(3)
    em = EnergyMomentum3(float(np.linalg.norm(p)) + 1.0, p)
    lhs = np.einsum("nij,nj->ni", S, H_sphere(em, y))
    rhs = H_sphere(em, np.einsum("nij,nj->ni", s_n(nn), y))
    intertwine = float(np.max(np.linalg.norm(lhs - rhs, axis=1)))

    span, proj = so3_span_probe()
    checks = {
        "momentum": mom <= 1e-12,
        "energy": en <= 1e-12,
        "halfspace": halfspace == 0,
        "det": det <= 1e-12,
        "involution": inv <= 1e-12,
        "intertwine": intertwine <= 1e-10,
        "so3_rank": span.rank == 3,
        "so3_projection": max(proj) <= 1e-10,
    }
    return {
        "samples": n_samples,
        "seed": seed,
        "corrupt": corrupt,
        "momentum_residual_max": mom,
        "energy_residual_max": en,
        "halfspace_violations": halfspace,
        "det_residual": det,
        "involution_residual": inv,
        "intertwine_residual_max": intertwine,
        "so3": span.to_dict(),
        "so3_projection_residuals": proj,
        "checks": checks,
        "passed": all(checks.values()),
    }


__all__ = [
    "EnergyMomentum3", "nu_hat", "sigma_sphere", "s_n", "elementwise_sphere", "H_sphere",
    "invert_H_sphere", "intertwine_sphere", "so3_span_probe", "sphere_suite", "SpanReport",
]
