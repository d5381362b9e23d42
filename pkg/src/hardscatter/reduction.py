"""Energy-momentum coordinates for the planar non-canonical map.

Fixing total momentum ``p`` and ``|M V| = e`` leaves a 3-sphere of velocity
states, parametrized by ``H_P(e, p, y)`` with ``|y| = 1``.  The non-canonical
map acts on ``y`` through the reflection built from ``k_hat``, and after
merging the two angular coordinates through the 3x3 reflection built from
``gamma_hat``.

One sign matters.  The non-canonical map keeps the momentum directions and
``E_beta`` and negates their complement, so on the ``y`` sphere it acts as
``-s_beta``, not ``s_beta``.  :func:`intertwine_2d` evaluates the identity with
``s_beta`` by default and takes ``negate_reflection=True`` for the sign that
actually holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError
from .geometry import CollisionParam2D, ConvexBody2D, MassInertia, docd
from .liealg import gamma_vectors, k_vectors
from .scattering import _noncanonical_from_d

I_STAR = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0]])
DELTA = np.diag([1.0, 1.0, 1.0 / math.sqrt(2.0)])


@dataclass(frozen=True)
class EnergyMomentum2:
    e: float
    p: np.ndarray
    mi: MassInertia

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (2,):
            raise InputError("p must be a 2-vector")
        object.__setattr__(self, "p", p)
        if not (self.e > 0 and self.e**2 > float(p @ p) / (2 * self.mi.m)):
            raise DomainError("inadmissible energy-momentum pair: need e^2 > |p|^2 / (2m)")

    @property
    def kappa(self) -> float:
        return math.sqrt(2 * self.mi.m * self.e**2 - float(self.p @ self.p))


def H_P(em: EnergyMomentum2, y) -> np.ndarray:
    """Velocity state with momentum ``p`` and, for unit ``y``, ``|M H| = e``."""
    y = np.asarray(y, dtype=float)
    if not np.all(np.linalg.norm(y, axis=-1) > 0):
        raise InputError("y must be non-zero")
    m, J, k = em.mi.m, em.mi.J, em.kappa
    p = np.broadcast_to(em.p, y.shape[:-1] + (2,))
    lin = k * y[..., :2]
    ang = k * y[..., 2:] / math.sqrt(2 * m * J)
    return np.concatenate([(p + lin) / (2 * m), (p - lin) / (2 * m), ang], axis=-1)


def invert_H_P(V, mi: MassInertia):
    """Recover ``(em, y)`` from a velocity state, assuming ``|y| = 1``."""
    V = np.asarray(V, dtype=float)
    m, J = mi.m, mi.J
    p = m * (V[:2] + V[2:4])
    e = float(np.linalg.norm(mi.weights * V))
    em = EnergyMomentum2(e, p, mi)
    k = em.kappa
    y = np.concatenate([m * (V[:2] - V[2:4]) / k, V[4:] * math.sqrt(2 * m * J) / k])
    return em, y


def k_hat_from_d(mi: MassInertia, d: float, psi: float):
    k = k_vectors(mi, d, psi)
    return k, np.eye(4) - 2 * np.outer(k, k)


def k_hat(mi: MassInertia, body: ConvexBody2D, beta: CollisionParam2D):
    return k_hat_from_d(mi, docd(body, beta), beta.psi)


def gamma_hat_from_d(mi: MassInertia, d: float, psi: float):
    g = gamma_vectors(mi, d, psi)
    return g, np.eye(3) - 2 * np.outer(g, g)


def gamma_hat(mi: MassInertia, body: ConvexBody2D, beta: CollisionParam2D):
    return gamma_hat_from_d(mi, docd(body, beta), beta.psi)


def intertwine_residuals(mi: MassInertia, d, psi, em: EnergyMomentum2, y, negate_reflection: bool = False):
    """Vectorized ``|sigma_x H_P(y) - H_P(+-s_beta y)|`` over arrays ``d, psi, y``."""
    d = np.atleast_1d(np.asarray(d, float))
    psi = np.atleast_1d(np.asarray(psi, float))
    y = np.atleast_2d(np.asarray(y, float))
    S = _noncanonical_from_d(mi, d, psi)
    k = k_vectors(mi, d, psi)
    sy = y - 2 * np.sum(k * y, axis=-1, keepdims=True) * k
    if negate_reflection:
        sy = -sy
    lhs = np.einsum("nij,nj->ni", S, H_P(em, y))
    return np.linalg.norm(lhs - H_P(em, sy), axis=-1)


def intertwine_2d(mi: MassInertia, body: ConvexBody2D, em: EnergyMomentum2, y, beta: CollisionParam2D,
                  negate_reflection: bool = False) -> float:
    if em.mi != mi:
        raise InputError("energy-momentum pair carries a different mass-inertia")
    return float(intertwine_residuals(mi, docd(body, beta), beta.psi, em, y, negate_reflection)[0])


def conjugation_residual_from_d(mi: MassInertia, d: float, psi: float, delta=DELTA) -> float:
    _, s = k_hat_from_d(mi, d, psi)
    _, r = gamma_hat_from_d(mi, d, psi)
    delta = np.asarray(delta, dtype=float)
    return float(np.linalg.norm(I_STAR @ s - np.linalg.inv(delta) @ r @ delta @ I_STAR))


def conjugation_identity(mi: MassInertia, body: ConvexBody2D, beta: CollisionParam2D, delta=DELTA) -> float:
    """Frobenius norm of ``I* s_beta - Delta^-1 r_beta Delta I*``."""
    return conjugation_residual_from_d(mi, docd(body, beta), beta.psi, delta)


def random_admissible(rng: np.random.Generator, mi: MassInertia) -> EnergyMomentum2:
    p = rng.standard_normal(2)
    e = math.sqrt(float(p @ p) / (2 * mi.m)) + rng.uniform(0.1, 2.0)
    return EnergyMomentum2(e, p, mi)
