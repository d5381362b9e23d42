"""Linear scattering maps for a pair of identical convex particles in the plane.

Velocities are concatenated as ``V = [v, v_bar, omega, omega_bar]``.  Both
families are built as ``M^-1 R M`` with ``R`` orthogonal, so ``|M V|^2`` (twice
the kinetic energy) is preserved and ``det = -1``.

The canonical map reflects ``M V`` through the hyperplane orthogonal to
``M^-1 grad F``.  Using the mass-weighted normal here, rather than ``grad F``
itself, is what makes the impulse conserve angular momentum when ``m != J``;
see ``unit_normal_N(..., weighted=True)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InputError
from .geometry import (
    CollisionParam2D,
    ContactData,
    ConvexBody2D,
    MassInertia,
    contact_arrays,
    contact_configuration,
    docd,
    docd_many,
    docd_partials,
    gap_gradient_fd,
    perp,
    unit,
)

FAMILIES = ("canonical", "noncanonical")

TOL_DET = 1e-9
TOL_MOMENTUM = 1e-10
TOL_ANGULAR = 1e-9
TOL_ENERGY = 1e-9
TOL_HALFSPACE = 1e-10


@dataclass(frozen=True)
class VelocityState2D:
    v: np.ndarray
    v_bar: np.ndarray
    omega: float
    omega_bar: float

    def as_array(self) -> np.ndarray:
        return np.array([self.v[0], self.v[1], self.v_bar[0], self.v_bar[1], self.omega, self.omega_bar], dtype=float)

    @classmethod
    def from_array(cls, V) -> VelocityState2D:
        V = np.asarray(V, dtype=float)
        if V.shape != (6,) or not np.all(np.isfinite(V)):
            raise InputError("velocity state must be a finite 6-vector")
        return cls(V[0:2].copy(), V[2:4].copy(), float(V[4]), float(V[5]))


@dataclass(frozen=True)
class ScatteringMatrix2D:
    entries: np.ndarray
    family: str
    beta: CollisionParam2D

    def __matmul__(self, V):
        return self.entries @ np.asarray(V, dtype=float)


def _as_vec(V) -> np.ndarray:
    if isinstance(V, VelocityState2D):
        return V.as_array()
    return np.asarray(V, dtype=float)


def _check_family(family: str):
    if family not in FAMILIES:
        raise InputError(f"family must be one of {FAMILIES}, got {family!r}")


# --- fixed and collision-dependent directions -----------------------------------


def e_hats() -> tuple[np.ndarray, np.ndarray]:
    r = 1.0 / math.sqrt(2.0)
    return np.array([r, 0, r, 0, 0, 0]), np.array([0, r, 0, r, 0, 0])


def e_beta_from_d(mi: MassInertia, d, psi) -> np.ndarray:
    """Vectorized in ``d`` and ``psi``; trailing axis has length 6."""
    d, psi = np.broadcast_arrays(np.asarray(d, float), np.asarray(psi, float))
    sm, sj = math.sqrt(mi.m), math.sqrt(mi.J)
    s, c = np.sin(psi), np.cos(psi)
    twos = np.full(d.shape, 2 * sj)
    E = np.stack([sm * d * s, -sm * d * c, -sm * d * s, sm * d * c, twos, twos], axis=-1)
    return E / np.sqrt(2 * mi.m * d**2 + 8 * mi.J)[..., None]


def e_beta(mi: MassInertia, body: ConvexBody2D, beta: CollisionParam2D) -> np.ndarray:
    return e_beta_from_d(mi, docd(body, beta), beta.psi)


def alpha_vector(mi: MassInertia, d: float, psi: float) -> np.ndarray:
    """Angular momentum about the unbarred centre, ``[0, 0, m d e_perp, J, J]``."""
    ep = perp(unit(psi))
    return np.array([0.0, 0.0, mi.m * d * ep[0], mi.m * d * ep[1], mi.J, mi.J])


def alpha_printed(mi: MassInertia, d: float, psi: float, perp_sense: str = "clockwise") -> np.ndarray:
    """The displayed vector ``[0, -d e_perp, J, J]`` (no mass factor).

    ``perp_sense`` picks how ``e_perp`` is read.  Only the clockwise reading
    coincides with :func:`alpha_vector` at ``m = 1``; see the notes in
    the README.
    """
    ep = perp(unit(psi))
    if perp_sense == "clockwise":
        ep = -ep
    elif perp_sense != "counterclockwise":
        raise InputError("perp_sense must be 'clockwise' or 'counterclockwise'")
    return np.array([0.0, 0.0, -d * ep[0], -d * ep[1], mi.J, mi.J])


# --- gradient of the gap function at contact -------------------------------------


def _gradient_from_contact(n, p, q, d, psi):
    """``grad F`` at the contact configuration, vectorized over leading axes."""
    e = unit(psi)
    scale = 2 * d / np.einsum("...i,...i->...", n, e)
    pn = np.einsum("...i,...i->...", perp(p), n)
    qn = np.einsum("...i,...i->...", perp(q), n)
    return scale[..., None] * np.concatenate([-n, n, -pn[..., None], qn[..., None]], axis=-1)


def _gradient_fd(body: ConvexBody2D, beta: CollisionParam2D) -> np.ndarray:
    d = docd(body, beta)
    dpsi, dth, dthb = docd_partials(body, beta)
    e = beta.direction
    ep = perp(e)
    w = 2 * d * e - 2 * dpsi * ep
    return np.concatenate([-w, w, [-2 * d * dth, -2 * d * dthb]])


def gap_gradient(body: ConvexBody2D, beta: CollisionParam2D, method: str = "contact") -> np.ndarray:
    """``grad F`` at ``[0, d e(psi), theta, theta_bar]``.

    ``method="contact"`` uses the envelope formula in terms of contact data,
    ``"fd"`` the chain rule with finite-difference partials of ``d``, and
    ``"numeric"`` differentiates ``F`` directly.
    """
    if method == "contact":
        n, p, q, d = contact_arrays(body, beta.psi, beta.theta, beta.theta_bar)
        return _gradient_from_contact(n, p, q, d, beta.psi)
    if method == "fd":
        return _gradient_fd(body, beta)
    if method == "numeric":
        return gap_gradient_fd(body, contact_configuration(body, beta))
    raise InputError(f"unknown gradient method {method!r}")


def unit_normal_N(mi: MassInertia, body: ConvexBody2D, beta: CollisionParam2D,
                  method: str = "contact", weighted: bool = False) -> np.ndarray:
    """Unit normal to the contact hypersurface, signed as ``+grad F``.

    Approaching states have ``V . N <= 0``.  With ``weighted=True`` the result
    is ``M^-1 grad F / |M^-1 grad F|``, the direction reflected by the
    canonical map in ``M``-coordinates.
    """
    g = gap_gradient(body, beta, method)
    if weighted:
        g = g / mi.weights
    return g / np.linalg.norm(g)


# --- matrix families ---------------------------------------------------------------


def _canonical_from_gradient(mi: MassInertia, g: np.ndarray) -> np.ndarray:
    w = mi.weights
    N = g / w
    N = N / np.linalg.norm(N, axis=-1, keepdims=True)
    eye = np.eye(6)
    R = eye - 2 * N[..., :, None] * N[..., None, :]
    return R * w / w[:, None]


def _noncanonical_from_d(mi: MassInertia, d, psi) -> np.ndarray:
    w = mi.weights
    E1, E2 = e_hats()
    Eb = e_beta_from_d(mi, d, psi)
    R = 2 * np.outer(E1, E1) + 2 * np.outer(E2, E2) - np.eye(6)
    R = R + 2 * Eb[..., :, None] * Eb[..., None, :]
    return R * w / w[:, None]


def sigma_batch(family: str, mi: MassInertia, body: ConvexBody2D, psi, theta, theta_bar) -> np.ndarray:
    """Stack of scattering matrices, shape ``(n, 6, 6)``."""
    _check_family(family)
    psi = np.atleast_1d(np.asarray(psi, float))
    theta = np.broadcast_to(np.asarray(theta, float), psi.shape)
    theta_bar = np.broadcast_to(np.asarray(theta_bar, float), psi.shape)
    if family == "canonical":
        n, p, q, d = contact_arrays(body, psi, theta, theta_bar)
        return _canonical_from_gradient(mi, _gradient_from_contact(n, p, q, d, psi))
    d = docd_many(body, psi, theta, theta_bar)
    return _noncanonical_from_d(mi, d, psi)


def sigma_canonical(mi: MassInertia, body: ConvexBody2D, beta: CollisionParam2D,
                    method: str = "contact") -> ScatteringMatrix2D:
    """``M^-1 (I - 2 N (x) N) M`` with ``N`` the mass-weighted contact normal."""
    g = gap_gradient(body, beta, method)
    return ScatteringMatrix2D(_canonical_from_gradient(mi, g), "canonical", beta)


def sigma_noncanonical(mi: MassInertia, body: ConvexBody2D, beta: CollisionParam2D) -> ScatteringMatrix2D:
    """``M^-1 (2 E1(x)E1 + 2 E2(x)E2 + 2 Eb(x)Eb - I) M``."""
    E1, E2 = e_hats()
    Eb = e_beta(mi, body, beta)
    gram = np.array([[E1 @ E1, E1 @ E2, E1 @ Eb], [E2 @ E1, E2 @ E2, E2 @ Eb], [Eb @ E1, Eb @ E2, Eb @ Eb]])
    if np.max(np.abs(gram - np.eye(3))) > 1e-12:
        raise ArithmeticError("E1, E2, E_beta are not orthonormal")
    return ScatteringMatrix2D(_noncanonical_from_d(mi, docd(body, beta), beta.psi), "noncanonical", beta)


def sigma(family: str, mi: MassInertia, body: ConvexBody2D, beta: CollisionParam2D) -> ScatteringMatrix2D:
    _check_family(family)
    if family == "canonical":
        return sigma_canonical(mi, body, beta)
    return sigma_noncanonical(mi, body, beta)


def apply(S: ScatteringMatrix2D, V) -> VelocityState2D:
    return VelocityState2D.from_array(S.entries @ _as_vec(V))


# --- element-wise forms --------------------------------------------------------------


def elementwise_noncanonical(mi: MassInertia, d: float, psi: float, V) -> VelocityState2D:
    """Component formulas: swap of linear velocities plus an impulse along ``e_perp``."""
    V = _as_vec(V)
    if not d > 0:
        raise InputError("d must be positive")
    m, J = mi.m, mi.J
    v, vb, w, wb = V[0:2], V[2:4], V[4], V[5]
    ep = perp(unit(psi))
    den = m * d**2 + 4 * J
    k = (m * d * v - 2 * J * w * ep - m * d * vb - 2 * J * wb * ep) @ ep
    v_new = vb + k * d * ep / den
    vb_new = v - k * d * ep / den
    w_new = -w - 2 * k / den
    wb_new = -wb - 2 * k / den
    return VelocityState2D(v_new, vb_new, float(w_new), float(wb_new))


def lambda_value(mi: MassInertia, contact: ContactData, form: str = "half") -> float:
    """Effective inverse mass at the contact.

    ``"unsquared"`` is ``2/m + (p_perp.n)^2/J + (q_perp.n)^2/J``, ``"squared"`` its
    square and ``"half"`` half of it.  Only ``"half"`` reproduces the matrix
    form of the canonical map: the impulse of an elastic contact is
    ``2 u_n / unsquared`` while the element-wise update divides by ``Lambda`` once.
    """
    n = contact.n
    s = 2 / mi.m + float(perp(contact.p) @ n) ** 2 / mi.J + float(perp(contact.q) @ n) ** 2 / mi.J
    if form == "unsquared":
        return s
    if form == "squared":
        return s * s
    if form == "half":
        return 0.5 * s
    raise InputError(f"unknown Lambda form {form!r}")


def elementwise_canonical(mi: MassInertia, contact: ContactData, V, lambda_form: str = "half") -> VelocityState2D:
    V = _as_vec(V)
    m, J = mi.m, mi.J
    n, p, q = contact.n, contact.p, contact.q
    v, vb, w, wb = V[0:2], V[2:4], V[4], V[5]
    pp, qp = perp(p), perp(q)
    lam = lambda_value(mi, contact, lambda_form)
    un = (v + w * pp - vb - wb * qp) @ n
    v_new = v - un * n / (m * lam)
    vb_new = vb + un * n / (m * lam)
    w_new = w - un * (pp @ n) / (J * lam)
    wb_new = wb + un * (qp @ n) / (J * lam)
    return VelocityState2D(v_new, vb_new, float(w_new), float(wb_new))


# --- verification ----------------------------------------------------------------------


@dataclass
class VerificationReport:
    det_residual: float
    momentum_residual_max: float
    angular_residual_max: float
    energy_residual_max: float
    halfspace_violations: int
    samples: int
    seed: int
    family: str = ""
    body_hash: str = ""
    halfspace_checked: int = 0

    def passed(self, tol_det=TOL_DET, tol_momentum=TOL_MOMENTUM, tol_angular=TOL_ANGULAR,
               tol_energy=TOL_ENERGY) -> bool:
        return (self.det_residual <= tol_det and self.momentum_residual_max <= tol_momentum
                and self.angular_residual_max <= tol_angular and self.energy_residual_max <= tol_energy
                and self.halfspace_violations == 0)

    def to_dict(self) -> dict:
        return asdict(self)


def _residuals(S, V, mi, d, psi, Ngeo):
    """Per-sample residuals for stacks ``S (n,6,6)``, ``V (n,6)``."""
    Vp = np.einsum("nij,nj->ni", S, V)
    E1, E2 = e_hats()
    mom = np.maximum(np.abs((Vp - V) @ E1), np.abs((Vp - V) @ E2))
    ep = perp(unit(psi))
    alpha = np.zeros((len(V), 6))
    alpha[:, 2:4] = mi.m * d[:, None] * ep
    alpha[:, 4:] = mi.J
    ang = np.abs(np.einsum("ni,ni->n", Vp - V, alpha)) / (1 + np.linalg.norm(V, axis=1))
    w = mi.weights
    e0 = np.sum((w * V) ** 2, axis=1)
    en = np.abs(np.sum((w * Vp) ** 2, axis=1) - e0) / np.maximum(e0, 1e-300)
    det = np.abs(np.linalg.det(S) + 1)
    viol = checked = 0
    if Ngeo is not None:
        pre = np.einsum("ni,ni->n", V, Ngeo)
        post = np.einsum("ni,ni->n", Vp, Ngeo)
        approach = pre <= 0
        checked = int(approach.sum())
        viol = int(np.sum(approach & (post < -TOL_HALFSPACE)))
    return det, mom, ang, en, viol, checked


def verify_physical(S: ScatteringMatrix2D, mi: MassInertia, body: ConvexBody2D, beta: CollisionParam2D,
                    n_samples: int = 10_000, seed: int = 0) -> VerificationReport:
    """Check one matrix against the defining properties over random velocities.

    The half-space test uses the geometric normal ``grad F / |grad F|`` and is
    skipped (zero checked) for bodies with corners.
    """
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((n_samples, 6))
    Sn = np.broadcast_to(S.entries, (n_samples, 6, 6))
    d = docd(body, beta)
    Ngeo = None
    if body.strictly_convex:
        Ngeo = np.broadcast_to(unit_normal_N(mi, body, beta), (n_samples, 6))
    det, mom, ang, en, viol, checked = _residuals(
        Sn, V, mi, np.full(n_samples, d), np.full(n_samples, beta.psi), Ngeo)
    return VerificationReport(
        det_residual=float(det.max()), momentum_residual_max=float(mom.max()),
        angular_residual_max=float(ang.max()), energy_residual_max=float(en.max()),
        halfspace_violations=viol, samples=n_samples, seed=seed, family=S.family,
        body_hash=body.hash(), halfspace_checked=checked)


def sample_betas(rng: np.random.Generator, n: int):
    return rng.uniform(0, 2 * math.pi, size=(3, n))


def verify_family(family: str, mi: MassInertia, body: ConvexBody2D, n_samples: int = 10_000,
                  seed: int = 0) -> VerificationReport:
    """Joint sampling of ``beta`` (uniform on the torus) and ``V`` (standard normal)."""
    _check_family(family)
    rng = np.random.default_rng(seed)
    psi, th, thb = sample_betas(rng, n_samples)
    V = rng.standard_normal((n_samples, 6))
    if family == "canonical":
        n, p, q, d = contact_arrays(body, psi, th, thb)
        g = _gradient_from_contact(n, p, q, d, psi)
        S = _canonical_from_gradient(mi, g)
        Ngeo = g / np.linalg.norm(g, axis=1, keepdims=True)
    else:
        d = docd_many(body, psi, th, thb)
        S = _noncanonical_from_d(mi, d, psi)
        Ngeo = None
        if body.strictly_convex:
            n, p, q, d2 = contact_arrays(body, psi, th, thb)
            g = _gradient_from_contact(n, p, q, d2, psi)
            Ngeo = g / np.linalg.norm(g, axis=1, keepdims=True)
    det, mom, ang, en, viol, checked = _residuals(S, V, mi, d, psi, Ngeo)
    return VerificationReport(
        det_residual=float(det.max()), momentum_residual_max=float(mom.max()),
        angular_residual_max=float(ang.max()), energy_residual_max=float(en.max()),
        halfspace_violations=viol, samples=n_samples, seed=seed, family=family,
        body_hash=body.hash(), halfspace_checked=checked)


def alpha_probe(mi: MassInertia, body: ConvexBody2D, n_samples: int = 1000, seed: int = 0,
                perp_sense: str = "clockwise") -> dict:
    """Conservation residuals of the printed and the implemented angular momentum under the non-canonical map."""
    rng = np.random.default_rng(seed)
    psi, th, thb = sample_betas(rng, n_samples)
    V = rng.standard_normal((n_samples, 6))
    d = docd_many(body, psi, th, thb)
    S = _noncanonical_from_d(mi, d, psi)
    dV = np.einsum("nij,nj->ni", S, V) - V
    printed = np.array([alpha_printed(mi, di, pi, perp_sense) for di, pi in zip(d, psi)])
    implemented = np.array([alpha_vector(mi, di, pi) for di, pi in zip(d, psi)])
    return {
        "m": mi.m,
        "J": mi.J,
        "perp_sense": perp_sense,
        "printed_residual_max": float(np.max(np.abs(np.einsum("ni,ni->n", dV, printed)))),
        "implemented_residual_max": float(np.max(np.abs(np.einsum("ni,ni->n", dV, implemented)))),
        "samples": n_samples,
        "seed": seed,
    }


def lambda_probe(mi: MassInertia, body: ConvexBody2D, n_samples: int = 1000, seed: int = 0) -> dict:
    """Max disagreement between the canonical matrix and each element-wise ``Lambda`` variant."""
    rng = np.random.default_rng(seed)
    psi, th, thb = sample_betas(rng, n_samples)
    V = rng.standard_normal((n_samples, 6))
    n, p, q, d = contact_arrays(body, psi, th, thb)
    S = _canonical_from_gradient(mi, _gradient_from_contact(n, p, q, d, psi))
    ref = np.einsum("nij,nj->ni", S, V)
    out = {}
    for form in ("half", "unsquared", "squared"):
        worst = 0.0
        for i in range(n_samples):
            c = ContactData(n[i], p[i], q[i], float(d[i]))
            got = elementwise_canonical(mi, c, V[i], form).as_array()
            worst = max(worst, float(np.max(np.abs(got - ref[i]))))
        out[form] = worst
    return out
