"""Independent reference computations used only by the tests.

Nothing here calls the package's closest-approach or contact code.  Support
functions are re-derived from the raw descriptor so a bug in the package's
evaluation would show up as a disagreement.
"""

import math

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import ConvexHull

DENSE = 2**18


def raw_support(desc, phi):
    """``h, h'`` of the body frame descriptor at angles ``phi``, from first principles."""
    phi = np.asarray(phi, dtype=float)
    kind = type(desc).__name__
    if kind == "Disk":
        return np.full(phi.shape, desc.r), np.zeros(phi.shape)
    if kind == "Polygon":
        u = np.stack([np.cos(phi), np.sin(phi)], -1)
        return np.max(u @ desc.vertices.T, -1), None
    h = np.full(phi.shape, desc.cos[0])
    dh = np.zeros(phi.shape)
    for k, c in enumerate(desc.cos[1:], start=1):
        h = h + c * np.cos(k * phi)
        dh = dh - k * c * np.sin(k * phi)
    for k, s in enumerate(desc.sin, start=1):
        h = h + s * np.sin(k * phi)
        dh = dh + k * s * np.cos(k * phi)
    return h, dh


def separated(body, psi, theta, theta_bar, d, n_dirs=DENSE):
    """True if some direction strictly separates ``R(t)P`` and ``R(tb)P + d e(psi)``."""
    phi = np.arange(n_dirs) * (2 * math.pi / n_dirs)
    hA, _ = raw_support(body.descriptor, phi - theta)
    hB, _ = raw_support(body.descriptor, phi + math.pi - theta_bar)
    ue = np.cos(phi - psi)
    return bool(np.any(hA + hB < d * ue))


def docd_bisection(body, psi, theta, theta_bar, n_dirs=DENSE, tol=1e-13):
    """Touching distance by bisection on the boolean separation test."""
    phi = np.arange(n_dirs) * (2 * math.pi / n_dirs)
    hA, _ = raw_support(body.descriptor, phi - theta)
    hB, _ = raw_support(body.descriptor, phi + math.pi - theta_bar)
    s = hA + hB
    ue = np.cos(phi - psi)
    lo, hi = 0.0, 1.0
    while not np.any(s < hi * ue):
        hi *= 2
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if np.any(s < mid * ue):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _rot(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s], [s, c]])


def polygon_ray_exit(vertices, psi, theta, theta_bar):
    """Exact touching distance for polygons: ray exit from the hull of ``A - B``."""
    A = vertices @ _rot(theta).T
    B = vertices @ _rot(theta_bar).T
    diff = (A[:, None, :] - B[None, :, :]).reshape(-1, 2)
    hull = ConvexHull(diff)
    e = np.array([math.cos(psi), math.sin(psi)])
    best = math.inf
    for a, b, c in hull.equations:
        ne = a * e[0] + b * e[1]
        if ne > 1e-14:
            best = min(best, -c / ne)
    return best


def _boundary_point(desc, phi, orient):
    """World boundary point of ``R(orient) P`` with outward normal at world angle ``phi``."""
    h, dh = raw_support(desc, phi - orient)
    e = np.array([math.cos(phi), math.sin(phi)])
    ep = np.array([-e[1], e[0]])
    return h * e + dh * ep


def contact_oracle(body, psi, theta, theta_bar, n_bracket=4096):
    """Contact normal angle, contact point and distance from the Minkowski-difference boundary.

    The boundary point of ``A - B`` with normal ``u`` is ``s_A(u) - s_B(-u)``; contact
    happens where it lies on the ray along ``e(psi)``.  Roots of the cross product
    are bracketed densely, then refined with ``brentq``.
    """
    desc = body.descriptor
    e = np.array([math.cos(psi), math.sin(psi)])

    def diff(phi):
        return _boundary_point(desc, phi, theta) - _boundary_point(desc, phi + math.pi, theta_bar)

    def f(phi):
        w = diff(phi)
        return w[0] * e[1] - w[1] * e[0]

    grid = psi + np.linspace(-math.pi / 2, math.pi / 2, n_bracket)
    vals = np.array([f(g) for g in grid])
    for i in range(n_bracket - 1):
        if vals[i] == 0 or vals[i] * vals[i + 1] < 0:
            phi = brentq(f, grid[i], grid[i + 1], xtol=1e-15, rtol=1e-15)
            w = diff(phi)
            if w @ e > 0:
                p = _boundary_point(desc, phi, theta)
                return phi, p, float(w @ e)
    raise RuntimeError("no contact found")


def richardson_partials(docd_fn, beta_tuple, h1=1e-5, h2=1e-4):
    """Central differences at two steps; returns both estimates."""
    out = []
    for h in (h1, h2):
        g = []
        for i in range(3):
            b1 = list(beta_tuple)
            b2 = list(beta_tuple)
            b1[i] += h
            b2[i] -= h
            g.append((docd_fn(*b1) - docd_fn(*b2)) / (2 * h))
        out.append(np.array(g))
    return out


def rigid_impulse(m, J, n, p, q, V):
    """Textbook frictionless elastic impulse between two rigid bodies (restitution 1)."""
    v, vb, w, wb = V[0:2], V[2:4], V[4], V[5]
    cross = lambda a, b: a[0] * b[1] - a[1] * b[0]
    rp, rq = cross(p, n), cross(q, n)
    u = (v + w * np.array([-p[1], p[0]]) - vb - wb * np.array([-q[1], q[0]])) @ n
    j = -2 * u / (2 / m + rp**2 / J + rq**2 / J)
    return np.concatenate([v + j * n / m, vb - j * n / m, [w + j * rp / J, wb - j * rq / J]])
