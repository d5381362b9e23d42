"""Convex reference particles in the plane and their distance of closest approach.

A body is stored by its support function in the body frame.  Everything the
scattering code needs (touching distance, contact point, contact normal, the
gap function of two placed copies) reduces to one-dimensional problems over
the angle of a direction vector.

Conventions
-----------
* ``unit(a) = (cos a, sin a)``, ``perp(u) = (-u_y, u_x)`` (counter-clockwise).
* A body with orientation ``theta`` is ``R(theta) P``; its support function in
  world direction angle ``phi`` is ``h(phi - theta)``.
* The unbarred particle sits at the origin, the barred one at ``d * unit(psi)``.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError, InputError, UnsupportedBodyError

TWO_PI = 2.0 * math.pi

# grid seeding + golden-section refinement for the closest-approach problem
SEED_GRID = 1024
_GOLDEN_ITERS = 48
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

FD_STEP = 1e-5
QUAD_POINTS = 4096


def unit(a):
    """Unit vector(s) at angle ``a``; trailing axis has length 2."""
    a = np.asarray(a, dtype=float)
    return np.stack([np.cos(a), np.sin(a)], axis=-1)


def perp(u):
    u = np.asarray(u, dtype=float)
    return np.stack([-u[..., 1], u[..., 0]], axis=-1)


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def cross2(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def wrap(a: float) -> float:
    return float(np.mod(a, TWO_PI))


@dataclass(frozen=True)
class MassInertia:
    """Mass ``m`` and scalar moment of inertia ``J`` about the centroid."""

    m: float
    J: float

    def __post_init__(self):
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "J", float(self.J))
        if not (np.isfinite(self.m) and np.isfinite(self.J)) or self.m <= 0 or self.J <= 0:
            raise InputError(f"mass and inertia must be positive, got m={self.m}, J={self.J}")

    @property
    def matrix(self) -> np.ndarray:
        """``diag(sqrt m, sqrt m, sqrt m, sqrt m, sqrt J, sqrt J)``."""
        sm, sj = math.sqrt(self.m), math.sqrt(self.J)
        return np.diag([sm, sm, sm, sm, sj, sj])

    @property
    def matrix_inv(self) -> np.ndarray:
        sm, sj = math.sqrt(self.m), math.sqrt(self.J)
        return np.diag([1 / sm, 1 / sm, 1 / sm, 1 / sm, 1 / sj, 1 / sj])

    @property
    def weights(self) -> np.ndarray:
        """Diagonal of the matrix above as a vector."""
        return np.diag(self.matrix).copy()


@dataclass(frozen=True)
class CollisionParam2D:
    """Collision parameter ``(psi, theta, theta_bar)`` on the 3-torus."""

    psi: float
    theta: float
    theta_bar: float

    def __post_init__(self):
        for name in ("psi", "theta", "theta_bar"):
            val = float(getattr(self, name))
            if not np.isfinite(val):
                raise InputError(f"{name} must be finite")
            object.__setattr__(self, name, wrap(val))

    @property
    def direction(self) -> np.ndarray:
        return unit(self.psi)

    def swapped(self) -> CollisionParam2D:
        """Same configuration seen from the barred particle."""
        return CollisionParam2D(self.psi + math.pi, self.theta_bar, self.theta)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.psi, self.theta, self.theta_bar)


@dataclass(frozen=True)
class ContactData:
    """Contact normal ``n`` and contact point relative to each centre."""

    n: np.ndarray
    p: np.ndarray
    q: np.ndarray
    d: float


# --- descriptors ------------------------------------------------------------


@dataclass(frozen=True)
class Disk:
    r: float

    def __post_init__(self):
        if not (np.isfinite(self.r) and self.r > 0):
            raise InputError(f"disk radius must be positive, got {self.r}")


@dataclass(frozen=True, eq=False)
class Polygon:
    """Counter-clockwise, strictly convex vertex list."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3 or not np.all(np.isfinite(v)):
            raise InputError("polygon needs at least three finite 2-vectors")
        edges = np.roll(v, -1, axis=0) - v
        turns = cross2(edges, np.roll(edges, -1, axis=0))
        scale = float(np.max(np.abs(v))) ** 2
        if np.any(turns <= 1e-14 * scale):
            raise InputError("polygon vertices must be strictly convex and counter-clockwise")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __eq__(self, other):
        return isinstance(other, Polygon) and np.array_equal(self.vertices, other.vertices)

    def __hash__(self):
        return hash(self.vertices.tobytes())


@dataclass(frozen=True)
class SupportFourier:
    """Support function ``h(phi) = c0 + sum_k (cos_k cos k phi + sin_k sin k phi)``.

    ``cos`` holds ``c0, c1, ...``; ``sin`` holds ``s1, s2, ...``.
    """

    cos: tuple
    sin: tuple = ()

    def __post_init__(self):
        c = tuple(float(x) for x in self.cos)
        s = tuple(float(x) for x in self.sin)
        if not c or not all(map(math.isfinite, c + s)):
            raise InputError("support_fourier needs a finite constant term")
        object.__setattr__(self, "cos", c)
        object.__setattr__(self, "sin", s)
        a, b = self._coeffs()
        ks = np.nonzero((a != 0) | (b != 0))[0]
        ks = ks[ks > 0]
        object.__setattr__(self, "_harm", (a[0], ks.astype(float), a[ks], b[ks]))

    def value(self, phi):
        """``h`` alone, the hot path of the closest-approach search."""
        a0, ks, ak, bk = self._harm
        phi = np.asarray(phi, dtype=float)
        if ks.size == 0:
            return np.full(phi.shape, a0)
        kp = phi[..., None] * ks
        return a0 + np.cos(kp) @ ak + np.sin(kp) @ bk

    @property
    def order(self) -> int:
        return max(len(self.cos) - 1, len(self.sin))

    def _coeffs(self):
        K = self.order
        a = np.zeros(K + 1)
        b = np.zeros(K + 1)
        a[: len(self.cos)] = self.cos
        b[1 : len(self.sin) + 1] = self.sin
        return a, b

    def derivatives(self, phi):
        """``h, h', h''`` at body-frame angles ``phi`` (any shape)."""
        phi = np.asarray(phi, dtype=float)
        a, b = self._coeffs()
        h = np.full(phi.shape, a[0])
        h1 = np.zeros(phi.shape)
        h2 = np.zeros(phi.shape)
        for k in range(1, len(a)):
            if a[k] == 0.0 and b[k] == 0.0:
                continue
            ck, sk = np.cos(k * phi), np.sin(k * phi)
            h += a[k] * ck + b[k] * sk
            h1 += k * (b[k] * ck - a[k] * sk)
            h2 -= k * k * (a[k] * ck + b[k] * sk)
        return h, h1, h2

    def shifted(self, c: np.ndarray) -> SupportFourier:
        """Body translated by ``-c`` (support changes by ``-c . u``)."""
        a, b = self._coeffs()
        a = a.copy()
        b = b.copy()
        if len(a) < 2:
            a = np.append(a, 0.0)
            b = np.append(b, 0.0)
        a[1] -= c[0]
        b[1] -= c[1]
        return SupportFourier(tuple(a), tuple(b[1:]))


Descriptor = Union[Disk, Polygon, SupportFourier]


def _fourier_moments(desc: SupportFourier, n: int = QUAD_POINTS):
    """Area, centroid and polar moment about the origin by periodic quadrature.

    The boundary is ``x(phi) = h e + h' e_perp`` with ``x' = (h + h'') e_perp``,
    so ``x cross dx = h (h + h'') dphi``.
    """
    phi = np.arange(n) * (TWO_PI / n)
    h, h1, h2 = desc.derivatives(phi)
    e = unit(phi)
    x = h[:, None] * e + h1[:, None] * perp(e)
    w = h * (h + h2) * (TWO_PI / n)
    area = 0.5 * w.sum()
    centroid = (x * w[:, None]).sum(axis=0) / (3.0 * area)
    polar = 0.25 * (np.einsum("ij,ij->i", x, x) * w).sum()
    return area, centroid, polar


def _polygon_moments(v: np.ndarray):
    x, y = v[:, 0], v[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    c = x * yn - xn * y
    area = 0.5 * c.sum()
    cx = ((x + xn) * c).sum() / (6 * area)
    cy = ((y + yn) * c).sum() / (6 * area)
    polar = ((x * x + x * xn + xn * xn + y * y + y * yn + yn * yn) * c).sum() / 12.0
    return area, np.array([cx, cy]), polar


def _validate_fourier(desc: SupportFourier, n: int = QUAD_POINTS):
    phi = np.arange(n) * (TWO_PI / n)
    h, _, h2 = desc.derivatives(phi)
    if np.any(h <= 0):
        raise InputError("support function must be positive (origin inside the body)")
    if np.any(h + h2 <= 0):
        raise InputError("h + h'' must be positive: body is not strictly convex")


@dataclass(frozen=True)
class ConvexBody2D:
    """A compact convex reference particle with its centroid at the origin.

    ``mass_inertia`` defaults to uniform unit density.  Use the factories
    :meth:`disk`, :meth:`polygon`, :meth:`support_fourier` or
    :func:`body_from_dict`; they translate the descriptor so that the
    centroid sits at the origin.
    """

    descriptor: Descriptor
    mass_inertia: MassInertia = field(default=None)

    def __post_init__(self):
        d = self.descriptor
        if isinstance(d, SupportFourier):
            _validate_fourier(d)
        elif not isinstance(d, (Disk, Polygon)):
            raise InputError(f"unknown descriptor {type(d).__name__}")
        area, centroid, polar = self._moments()
        if np.linalg.norm(centroid) > 1e-9 * self.diameter:
            raise InputError(
                f"centroid {centroid} is not at the origin; build through a factory to recentre"
            )
        if self.mass_inertia is None:
            object.__setattr__(self, "mass_inertia", MassInertia(area, polar - area * centroid @ centroid))

    # -- construction --

    @classmethod
    def disk(cls, r: float, mass_inertia: MassInertia | None = None) -> ConvexBody2D:
        return cls(Disk(float(r)), mass_inertia)

    @classmethod
    def polygon(cls, vertices, mass_inertia: MassInertia | None = None, recentre: bool = True):
        poly = Polygon(vertices)
        if recentre:
            _, c, _ = _polygon_moments(poly.vertices)
            poly = Polygon(poly.vertices - c)
        return cls(poly, mass_inertia)

    @classmethod
    def support_fourier(cls, cos, sin=(), mass_inertia: MassInertia | None = None, recentre: bool = True):
        desc = SupportFourier(tuple(cos), tuple(sin))
        if recentre:
            # translating changes only the first harmonic, so iterate to round-off
            for _ in range(3):
                _, c, _ = _fourier_moments(desc)
                if np.linalg.norm(c) < 1e-15:
                    break
                desc = desc.shifted(c)
        return cls(desc, mass_inertia)

    def with_mass_inertia(self, mi: MassInertia) -> ConvexBody2D:
        return ConvexBody2D(self.descriptor, mi)

    # -- geometry --

    def _moments(self):
        d = self.descriptor
        if isinstance(d, Disk):
            return math.pi * d.r**2, np.zeros(2), 0.5 * math.pi * d.r**4
        if isinstance(d, Polygon):
            return _polygon_moments(d.vertices)
        return _fourier_moments(d)

    @property
    def strictly_convex(self) -> bool:
        """Disks and admissible Fourier bodies; polygons have corners and flat sides."""
        return not isinstance(self.descriptor, Polygon)

    @property
    def max_radius(self) -> float:
        d = self.descriptor
        if isinstance(d, Disk):
            return d.r
        if isinstance(d, Polygon):
            return float(np.max(np.linalg.norm(d.vertices, axis=1)))
        phi = np.arange(QUAD_POINTS) * (TWO_PI / QUAD_POINTS)
        h, h1, _ = d.derivatives(phi)
        return float(np.max(np.hypot(h, h1)))

    @property
    def diameter(self) -> float:
        return 2.0 * self.max_radius

    def h(self, phi):
        """Body-frame support function at angle(s) ``phi``."""
        d = self.descriptor
        phi = np.asarray(phi, dtype=float)
        if isinstance(d, Disk):
            return np.full(phi.shape, d.r)
        if isinstance(d, Polygon):
            return np.max(unit(phi) @ d.vertices.T, axis=-1)
        return d.value(phi)

    def support_point(self, phi):
        """Body-frame boundary point(s) with outward normal ``unit(phi)``.

        On a polygon edge the midpoint of the supporting edge is returned.
        """
        d = self.descriptor
        phi = np.asarray(phi, dtype=float)
        e = unit(phi)
        if isinstance(d, Disk):
            return d.r * e
        if isinstance(d, Polygon):
            vals = e @ d.vertices.T
            top = vals.max(axis=-1, keepdims=True)
            tie = vals >= top - 1e-12 * max(1.0, float(np.max(np.abs(d.vertices))))
            w = tie / tie.sum(axis=-1, keepdims=True)
            return w @ d.vertices
        h, h1, _ = d.derivatives(phi)
        return h[..., None] * e + h1[..., None] * perp(e)

    # -- serialization --

    def to_dict(self, include_mass: bool = True) -> dict:
        d = self.descriptor
        if isinstance(d, Disk):
            out = {"type": "disk", "r": d.r}
        elif isinstance(d, Polygon):
            out = {"type": "polygon", "vertices": d.vertices.tolist()}
        else:
            out = {"type": "support_fourier", "cos": list(d.cos), "sin": list(d.sin)}
        if include_mass:
            out["mass"] = self.mass_inertia.m
            out["inertia"] = self.mass_inertia.J
        return out

    def hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def body_from_dict(spec: dict) -> ConvexBody2D:
    """Build a body from its JSON descriptor; see the README for the schema."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise InputError("body descriptor must be an object with a 'type' field")
    mi = None
    if "mass" in spec or "inertia" in spec:
        if "mass" not in spec or "inertia" not in spec:
            raise InputError("give both 'mass' and 'inertia' or neither")
        mi = MassInertia(float(spec["mass"]), float(spec["inertia"]))
    kind = spec["type"]
    try:
        if kind == "disk":
            return ConvexBody2D.disk(float(spec["r"]), mi)
        if kind == "polygon":
            return ConvexBody2D.polygon(spec["vertices"], mi)
        if kind == "support_fourier":
            return ConvexBody2D.support_fourier(spec["cos"], spec.get("sin", ()), mi)
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad {kind} descriptor: {exc}") from exc
    raise InputError(f"unknown body type {kind!r}")


def load_body(path) -> ConvexBody2D:
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read body file {path}: {exc}") from exc
    return body_from_dict(spec)


# --- support map ------------------------------------------------------------


def support(body: ConvexBody2D, u) -> tuple[float, np.ndarray]:
    """Support value ``h(u)`` and a maximizing boundary point.

    ``h`` is positively homogeneous, so non-unit ``u`` scales the value.
    """
    u = np.asarray(u, dtype=float)
    norm = float(np.hypot(u[0], u[1]))
    if not norm > 0:
        raise InputError("support direction must be non-zero")
    phi = math.atan2(u[1], u[0])
    return float(body.h(phi)) * norm, np.asarray(body.support_point(phi))


def world_h(body: ConvexBody2D, phi, theta):
    return body.h(np.asarray(phi) - np.asarray(theta))


def world_support_point(body: ConvexBody2D, phi, theta):
    """Support point of ``R(theta) P`` in world direction ``phi`` (broadcasts)."""
    theta = np.asarray(theta, dtype=float)
    s = body.support_point(np.asarray(phi) - theta)
    c, sn = np.cos(theta)[..., None], np.sin(theta)[..., None]
    return np.stack([c[..., 0] * s[..., 0] - sn[..., 0] * s[..., 1],
                     sn[..., 0] * s[..., 0] + c[..., 0] * s[..., 1]], axis=-1)


# --- distance of closest approach --------------------------------------------


def _ratio(body, phi, psi, theta, theta_bar):
    # (h_A(u) + h_B(-u)) / (u . e(psi)),  A = R(theta)P, B = R(theta_bar)P
    return (body.h(phi - theta) + body.h(phi + math.pi - theta_bar)) / np.cos(phi - psi)


def _newton_polish(desc: SupportFourier, phi, psi, theta, theta_bar, iters: int = 3):
    """Sharpen the minimizer by Newton steps on the stationarity condition.

    Golden section on a quadratic minimum stalls near sqrt(eps) in angle.  At
    the minimizer the Minkowski-difference boundary point
    ``w = s_A(phi) - s_B(phi + pi)`` lies on the ray ``e(psi)``; with
    ``g = w x e`` one has ``g' = -(rho_A + rho_B) cos(phi - psi)``, where
    ``rho = h + h''`` is the radius of curvature.
    """
    e = unit(psi)
    for _ in range(iters):
        ha, ha1, ha2 = desc.derivatives(phi - theta)
        hb, hb1, hb2 = desc.derivatives(phi + math.pi - theta_bar)
        u = unit(phi)
        up = perp(u)
        w = (ha + hb)[..., None] * u + (ha1 + hb1)[..., None] * up
        g = cross2(w, e)
        dg = -(ha + ha2 + hb + hb2) * np.cos(phi - psi)
        phi = phi - g / dg
    val = _ratio_fourier(desc, phi, psi, theta, theta_bar)
    return phi, val


def _ratio_fourier(desc, phi, psi, theta, theta_bar):
    return (desc.value(phi - theta) + desc.value(phi + math.pi - theta_bar)) / np.cos(phi - psi)


def closest_approach(body: ConvexBody2D, psi, theta, theta_bar):
    """Vectorized touching distance and minimizing normal angle.

    Minimizes ``(h_A(u) + h_B(-u)) / (u . e(psi))`` over the open half circle
    ``u . e(psi) > 0``: seeded on a uniform grid, then golden-section search in
    the bracket around the best grid node.

    Returns ``(d, phi_star)`` arrays with the broadcast shape of the inputs.
    """
    psi, theta, theta_bar = np.broadcast_arrays(
        np.asarray(psi, float), np.asarray(theta, float), np.asarray(theta_bar, float)
    )
    shape = psi.shape
    psi, theta, theta_bar = psi.ravel(), theta.ravel(), theta_bar.ravel()
    n = psi.size
    d_out = np.empty(n)
    phi_out = np.empty(n)
    step = math.pi / SEED_GRID
    offsets = -0.5 * math.pi + step * (np.arange(SEED_GRID) + 0.5)
    chunk = max(1, 2**18 // SEED_GRID)
    for lo in range(0, n, chunk):
        sl = slice(lo, min(n, lo + chunk))
        ps, th, tb = psi[sl, None], theta[sl, None], theta_bar[sl, None]
        grid = ps + offsets
        vals = _ratio(body, grid, ps, th, tb)
        k = np.argmin(vals, axis=1)
        centre = grid[np.arange(len(k)), k]
        lo_lim = ps[:, 0] - 0.5 * math.pi + 1e-12
        hi_lim = ps[:, 0] + 0.5 * math.pi - 1e-12
        a = np.maximum(centre - step, lo_lim)
        b = np.minimum(centre + step, hi_lim)
        args = (ps[:, 0], th[:, 0], tb[:, 0])
        c = b - _INV_PHI * (b - a)
        dd = a + _INV_PHI * (b - a)
        fc = _ratio(body, c, *args)
        fd = _ratio(body, dd, *args)
        for _ in range(_GOLDEN_ITERS):
            left = fc < fd
            b = np.where(left, dd, b)
            a = np.where(left, a, c)
            new_c = b - _INV_PHI * (b - a)
            new_d = a + _INV_PHI * (b - a)
            # reuse the surviving interior point
            c, dd = np.where(left, new_c, dd), np.where(left, c, new_d)
            fnew = _ratio(body, np.where(left, c, dd), *args)
            fc, fd = np.where(left, fnew, fd), np.where(left, fc, fnew)
        best_phi = np.where(fc < fd, c, dd)
        best = np.minimum(fc, fd)
        if isinstance(body.descriptor, SupportFourier):
            best_phi, best = _newton_polish(body.descriptor, best_phi, *args)
        # never worse than the seed node
        seed_best = vals[np.arange(len(k)), k]
        use_seed = seed_best < best
        d_out[sl] = np.where(use_seed, seed_best, best)
        phi_out[sl] = np.where(use_seed, centre, best_phi)
    return d_out.reshape(shape), phi_out.reshape(shape)


def docd(body: ConvexBody2D, beta: CollisionParam2D) -> float:
    """Distance of closest approach ``d_beta`` along ``unit(psi)``."""
    if isinstance(body.descriptor, Disk):
        return 2.0 * body.descriptor.r
    d, _ = closest_approach(body, beta.psi, beta.theta, beta.theta_bar)
    return float(d)


def docd_many(body: ConvexBody2D, psi, theta, theta_bar) -> np.ndarray:
    if isinstance(body.descriptor, Disk):
        shape = np.broadcast(np.asarray(psi), np.asarray(theta), np.asarray(theta_bar)).shape
        return np.full(shape, 2.0 * body.descriptor.r)
    return closest_approach(body, psi, theta, theta_bar)[0]


def _require_smooth(body: ConvexBody2D, what: str):
    if not body.strictly_convex:
        raise UnsupportedBodyError(f"{what} needs a strictly convex body with C1 boundary")


def docd_partials(body: ConvexBody2D, beta: CollisionParam2D, step: float = FD_STEP):
    """Central differences of ``d_beta`` in ``psi``, ``theta``, ``theta_bar``."""
    _require_smooth(body, "docd_partials")
    ps, th, tb = beta.as_tuple()
    eye = np.eye(3) * step
    pts = np.array([ps, th, tb]) + np.concatenate([eye, -eye])
    vals = docd_many(body, pts[:, 0], pts[:, 1], pts[:, 2])
    g = (vals[:3] - vals[3:]) / (2 * step)
    return float(g[0]), float(g[1]), float(g[2])


def contact_arrays(body: ConvexBody2D, psi, theta, theta_bar):
    """Vectorized ``(n, p, q, d)`` for arrays of collision parameters."""
    _require_smooth(body, "contact data")
    psi = np.asarray(psi, float)
    theta = np.asarray(theta, float)
    if isinstance(body.descriptor, Disk):
        d = np.full(np.broadcast(psi, theta, np.asarray(theta_bar)).shape, 2 * body.descriptor.r)
        phi = np.broadcast_to(psi, d.shape)
    else:
        d, phi = closest_approach(body, psi, theta, theta_bar)
    n = unit(phi)
    p = world_support_point(body, phi, np.broadcast_to(theta, d.shape))
    q = p - d[..., None] * unit(np.broadcast_to(psi, d.shape))
    return n, p, q, d


def contact_data(body: ConvexBody2D, beta: CollisionParam2D) -> ContactData:
    """Contact normal and contact point at the touching configuration."""
    n, p, q, d = contact_arrays(body, beta.psi, beta.theta, beta.theta_bar)
    return ContactData(n=np.asarray(n), p=np.asarray(p), q=np.asarray(q), d=float(d))


# --- gap function -------------------------------------------------------------


def psi_of(Y) -> float:
    """Direction angle of the centre line, full quadrant."""
    Y = np.asarray(Y, dtype=float)
    dx, dy = Y[2] - Y[0], Y[3] - Y[1]
    if dx == 0.0 and dy == 0.0:
        raise DomainError("coincident centres: direction of the centre line is undefined")
    return math.atan2(dy, dx)


def gap_function(body: ConvexBody2D, Y) -> float:
    """``F(Y) = |x_bar - x|^2 - d^2`` for ``Y = [x, x_bar, theta, theta_bar]``."""
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (6,):
        raise InputError("Y must be a 6-vector")
    psi = psi_of(Y)
    d = docd(body, CollisionParam2D(psi, Y[4], Y[5]))
    return float((Y[2] - Y[0]) ** 2 + (Y[3] - Y[1]) ** 2 - d * d)


def contact_configuration(body: ConvexBody2D, beta: CollisionParam2D) -> np.ndarray:
    """``Y = [0, 0, d e(psi), theta, theta_bar]`` at the touching distance."""
    d = docd(body, beta)
    e = beta.direction
    return np.array([0.0, 0.0, d * e[0], d * e[1], beta.theta, beta.theta_bar])


def gap_gradient_fd(body: ConvexBody2D, Y, step: float = FD_STEP) -> np.ndarray:
    """All-numeric gradient of the gap function by central differences."""
    Y = np.asarray(Y, dtype=float)
    g = np.empty(6)
    for i in range(6):
        dy = np.zeros(6)
        dy[i] = step
        g[i] = (gap_function(body, Y + dy) - gap_function(body, Y - dy)) / (2 * step)
    return g
