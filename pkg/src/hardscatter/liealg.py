"""Rank probes for the Lie algebras of reduced scattering groups.

Elements of the algebra are produced the way the reflection argument does it:
for a smooth curve of unit vectors ``k(psi)`` the product ``s(psi) s(psi0)``
passes through the identity at ``psi = psi0`` with tangent
``2 (k' (x) k - k (x) k')``.  We only ever look at that tangent, never at a
matrix logarithm.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InputError
from .geometry import FD_STEP, ConvexBody2D, MassInertia, docd_many

RANK_THRESHOLD = 1e-8


@dataclass(frozen=True)
class Generator:
    matrix: np.ndarray
    psi: float
    provenance: str

    def __post_init__(self):
        if np.max(np.abs(self.matrix + self.matrix.T)) > 1e-10:
            raise ArithmeticError("generator is not antisymmetric")


@dataclass
class SpanReport:
    """Singular-value certificate for the span of a list of matrices or vectors.

    ``gap`` is the ratio of the smallest retained singular value to the largest
    discarded one (floored at machine precision times the largest).
    """

    rank: int
    singular_values: list
    threshold: float
    sample_count: int
    gap: float
    flags: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def span_rank(items, threshold: float = RANK_THRESHOLD, expected: int | None = None) -> SpanReport:
    """Numerical rank of the linear span of same-shape arrays."""
    items = [np.asarray(a, dtype=float) for a in items]
    if not items:
        raise InputError("span_rank needs at least one matrix")
    shape = items[0].shape
    if any(a.shape != shape for a in items):
        raise InputError("all items must have the same shape")
    A = np.stack([a.ravel() for a in items])
    s = np.linalg.svd(A, compute_uv=False)
    smax = s[0] if s.size else 0.0
    if smax == 0:
        return SpanReport(0, s.tolist(), threshold, len(items), 0.0, ["all-zero input"])
    rank = int(np.sum(s > threshold * smax))
    floor = np.finfo(float).eps * smax
    below = s[rank] if rank < s.size else 0.0
    gap = float(s[rank - 1] / max(below, floor))
    flags = []
    if expected is not None and len(items) < expected:
        flags.append(f"insufficient samples: {len(items)} < {expected}")
    return SpanReport(rank, s.tolist(), threshold, len(items), gap, flags)


# --- generator curves --------------------------------------------------------------


def k_vectors(mi: MassInertia, d, psi) -> np.ndarray:
    """The 4-D reflection vectors for arrays of ``d`` and ``psi``."""
    d, psi = np.broadcast_arrays(np.asarray(d, float), np.asarray(psi, float))
    sm = math.sqrt(mi.m)
    c = math.sqrt(2 * mi.J)
    k = np.stack([-sm * d * np.sin(psi), sm * d * np.cos(psi), np.full(d.shape, -c), np.full(d.shape, -c)], axis=-1)
    return k / np.sqrt(mi.m * d**2 + 4 * mi.J)[..., None]


def gamma_vectors(mi: MassInertia, d, psi) -> np.ndarray:
    d, psi = np.broadcast_arrays(np.asarray(d, float), np.asarray(psi, float))
    sm = math.sqrt(mi.m)
    g = np.stack([-sm * d * np.sin(psi), sm * d * np.cos(psi), np.full(d.shape, -2 * math.sqrt(mi.J))], axis=-1)
    return g / np.sqrt(mi.m * d**2 + 4 * mi.J)[..., None]


def _require_smooth(body: ConvexBody2D):
    if not body.strictly_convex:
        from .errors import UnsupportedBodyError

        raise UnsupportedBodyError("generator curves need d differentiable in psi")


def _curve(kind, mi, body, theta, theta_bar, psi, step):
    _require_smooth(body)
    psi = np.atleast_1d(np.asarray(psi, float))
    vec = k_vectors if kind == "k_hat" else gamma_vectors
    pts = np.concatenate([psi, psi + step, psi - step])
    d = docd_many(body, pts, theta, theta_bar)
    n = len(psi)
    k0 = vec(mi, d[:n], psi)
    dk = (vec(mi, d[n:2 * n], psi + step) - vec(mi, d[2 * n:], psi - step)) / (2 * step)
    return dk[:, :, None] * k0[:, None, :] - k0[:, :, None] * dk[:, None, :]


def generator4_curve(mi, body, theta, theta_bar, psi, step: float = FD_STEP) -> np.ndarray:
    """Stack of 4x4 generators ``dk (x) k - k (x) dk`` over an array of ``psi``."""
    return _curve("k_hat", mi, body, theta, theta_bar, psi, step)


def generator3_curve(mi, body, theta, theta_bar, psi, step: float = FD_STEP) -> np.ndarray:
    return _curve("gamma_hat", mi, body, theta, theta_bar, psi, step)


def generator4(mi, body, theta, theta_bar, psi, step: float = FD_STEP) -> Generator:
    return Generator(generator4_curve(mi, body, theta, theta_bar, psi, step)[0], float(psi), "k_hat")


def generator3(mi, body, theta, theta_bar, psi, step: float = FD_STEP) -> Generator:
    return Generator(generator3_curve(mi, body, theta, theta_bar, psi, step)[0], float(psi), "gamma_hat")


def k_pattern_project(G: np.ndarray) -> np.ndarray:
    """Orthogonal projection onto ``[[0,-a,-b,-b],[a,0,-c,-c],[b,c,0,0],[b,c,0,0]]``."""
    a = (G[..., 1, 0] - G[..., 0, 1]) / 2
    b = (G[..., 2, 0] + G[..., 3, 0] - G[..., 0, 2] - G[..., 0, 3]) / 4
    c = (G[..., 2, 1] + G[..., 3, 1] - G[..., 1, 2] - G[..., 1, 3]) / 4
    P = np.zeros(G.shape)
    P[..., 1, 0], P[..., 0, 1] = a, -a
    for r in (2, 3):
        P[..., r, 0], P[..., 0, r] = b, -b
        P[..., r, 1], P[..., 1, r] = c, -c
    return P


def k_pattern_residual(G: np.ndarray) -> np.ndarray:
    G = np.asarray(G, dtype=float)
    return np.linalg.norm(G - k_pattern_project(G), axis=(-2, -1))


def psi_grid(n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) * (2 * math.pi / n)


def gamma_direction_rank(mi, body, theta, theta_bar, grid_size: int = 64,
                         threshold: float = RANK_THRESHOLD) -> SpanReport:
    """Rank of the stacked unit vectors ``gamma(psi)`` over a uniform ``psi`` grid."""
    _require_smooth(body)
    psi = psi_grid(grid_size)
    g = gamma_vectors(mi, docd_many(body, psi, theta, theta_bar), psi)
    return span_rank(list(g), threshold, expected=3)


def orientation_grid(n: int = 8):
    t = np.arange(n) * (2 * math.pi / n)
    return [(a, b) for a in t for b in t]


# --- exploratory group sampling -----------------------------------------------------


def group_sample(generators, depth: int = 32, count: int = 256, seed: int = 0) -> dict:
    """Random words in the given reflections; orthogonality, determinants, spread.

    No closure claim is made.  ``distinct`` counts elements up to 1e-9 and is
    only meaningful when the group is finite and small.
    """
    gens = [np.asarray(g, dtype=float) for g in generators]
    if not gens:
        raise InputError("need at least one generator")
    q = gens[0].shape[0]
    if any(g.shape != (q, q) for g in gens):
        raise InputError("generators must share a square shape")
    rng = np.random.default_rng(seed)
    eye = np.eye(q)
    orth = 0.0
    det_dev = 0.0
    parity_ok = True
    seen = []
    elements = []
    for _ in range(count):
        length = int(rng.integers(1, depth + 1))
        W = eye.copy()
        for idx in rng.integers(0, len(gens), size=length):
            W = W @ gens[idx]
        orth = max(orth, float(np.linalg.norm(W.T @ W - eye)))
        det = float(np.linalg.det(W))
        det_dev = max(det_dev, abs(abs(det) - 1))
        gen_dets = [np.sign(np.linalg.det(g)) for g in gens]
        if all(sd < 0 for sd in gen_dets):
            parity_ok &= abs(det - (-1) ** length) < 1e-9
        elements.append(W)
        if len(seen) <= 64 and not any(np.max(np.abs(W - S)) < 1e-9 for S in seen):
            seen.append(W)
    E = np.stack(elements)
    dispersion = float(np.linalg.norm(E.mean(axis=0)))
    return {
        "count": count,
        "depth": depth,
        "seed": seed,
        "orthogonality_max": orth,
        "det_deviation_max": det_dev,
        "det_parity_consistent": bool(parity_ok),
        "distinct": len(seen) if len(seen) <= 64 else None,
        "mean_element_norm": dispersion,
    }
