"""Event-driven motion of two hard particles.

Between events both particles fly freely (straight lines, constant spin).  A
collision is the first time the gap function ``F`` reaches zero while
decreasing; the velocities are then replaced by ``S V`` for the chosen family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidStateError
from .geometry import (CollisionParam2D, ConvexBody2D, MassInertia, contact_arrays, docd, gap_function, perp,
                       psi_of, unit)
from .scattering import alpha_vector, e_hats, sigma

F_TOL = 1e-9
GRAZE_TOL = 1e-12
BISECT_TOL = 1e-12
STEP_FLOOR = 1e-4
SAMPLES_PER_SEGMENT = 64


@dataclass(frozen=True)
class ParticleState:
    x: np.ndarray
    x_bar: np.ndarray
    theta: float
    theta_bar: float
    V: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        for name in ("x", "x_bar", "V"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).copy())
        if self.x.shape != (2,) or self.x_bar.shape != (2,) or self.V.shape != (6,):
            raise InvalidStateError("positions must be 2-vectors and V a 6-vector")

    @property
    def Y(self) -> np.ndarray:
        return np.concatenate([self.x, self.x_bar, [self.theta, self.theta_bar]])

    def advance(self, dt: float) -> ParticleState:
        V = self.V
        return ParticleState(self.x + dt * V[0:2], self.x_bar + dt * V[2:4],
                             self.theta + dt * V[4], self.theta_bar + dt * V[5], V, self.t + dt)

    def with_velocity(self, V) -> ParticleState:
        return replace(self, V=np.asarray(V, dtype=float))


@dataclass
class TrajectoryEvent:
    t_event: float
    beta_at_contact: CollisionParam2D
    V_pre: np.ndarray
    V_post: np.ndarray
    family: str
    F_at_event: float = 0.0
    dFdt_pre: float = 0.0
    dFdt_post: float = 0.0
    flags: list = field(default_factory=list)

    def csv_row(self) -> list:
        b = self.beta_at_contact
        return [self.t_event, b.psi, b.theta, b.theta_bar, *self.V_pre, *self.V_post, "|".join(self.flags)]


CSV_HEADER = (["t", "psi", "theta", "theta_bar"]
              + [f"pre_{c}" for c in ("v1", "v2", "vb1", "vb2", "w", "wb")]
              + [f"post_{c}" for c in ("v1", "v2", "vb1", "vb2", "w", "wb")] + ["flags"])


def gap_at(body: ConvexBody2D, state: ParticleState) -> float:
    return gap_function(body, state.Y)


def dFdt(body: ConvexBody2D, state: ParticleState, h: float = 1e-7) -> float:
    """Rate of change of ``F`` along free flight.

    Strictly convex bodies use the chain rule with the envelope formulas for
    the partials of ``d``; polygons a central difference in time.
    """
    if body.strictly_convex:
        Y, V = state.Y, state.V
        dx, dv = Y[2:4] - Y[0:2], V[2:4] - V[0:2]
        psi = psi_of(Y)
        n, p, q, d = contact_arrays(body, psi, Y[4], Y[5])
        e = unit(psi)
        ep = perp(e)
        ne = float(n @ e)
        d_psi = -d * float(n @ ep) / ne
        d_th = float(perp(p) @ n) / ne
        d_thb = -float(perp(q) @ n) / ne
        psi_dot = float(ep @ dv) / float(np.linalg.norm(dx))
        return float(2 * dx @ dv - 2 * d * (d_psi * psi_dot + d_th * V[4] + d_thb * V[5]))
    return (gap_at(body, state.advance(h)) - gap_at(body, state.advance(-h))) / (2 * h)


def _speed_bound(body: ConvexBody2D, state: ParticleState) -> float:
    V = state.V
    return float(np.linalg.norm(V[2:4] - V[0:2]) + body.max_radius * (abs(V[4]) + abs(V[5]))) + 1e-300


def collision_time(body: ConvexBody2D, state: ParticleState, t_max: float, skip_contact: bool = False):
    """Earliest absolute time in ``[state.t, t_max]`` where ``F`` reaches zero while approaching.

    ``skip_contact`` ignores a contact the state starts on (used right after an
    event, when the particles are touching and separating).
    """
    F0 = gap_at(body, state)
    if F0 < -F_TOL:
        raise InvalidStateError(f"initial overlap: F = {F0:.3e}")
    if F0 <= 0 and not skip_contact:
        return state.t if dFdt(body, state) <= 0 else None
    t_lo = state.t
    F_lo, d_lo = F0, docd_at(body, state)
    speed = _speed_bound(body, state)
    while t_lo < t_max:
        # centre-line gap |dx| - d bounds the time to contact from below
        dist = math.sqrt(max(F_lo, 0.0) + d_lo**2) - d_lo
        step = max(0.1 * dist / speed, STEP_FLOOR)
        t_hi = min(t_lo + step, t_max)
        nxt = state.advance(t_hi - state.t)
        d_hi = docd_at(body, nxt)
        sep = nxt.x_bar - nxt.x
        F_hi = float(sep @ sep) - d_hi**2
        if F_hi <= 0 and F_lo > 0:
            lo, hi = t_lo, t_hi
            while hi - lo > BISECT_TOL:
                mid = 0.5 * (lo + hi)
                if gap_at(body, state.advance(mid - state.t)) > 0:
                    lo = mid
                else:
                    hi = mid
            return lo
        t_lo, F_lo, d_lo = t_hi, F_hi, d_hi
    return None


def docd_at(body: ConvexBody2D, state: ParticleState) -> float:
    Y = state.Y
    return docd(body, CollisionParam2D(psi_of(Y), Y[4], Y[5]))


@dataclass
class SimulationResult:
    events: list
    truncated: bool
    min_F: float
    final_state: ParticleState
    max_momentum_residual: float = 0.0
    max_energy_residual: float = 0.0
    max_angular_residual: float = 0.0

    @property
    def conservation_ok(self) -> bool:
        return self.max_momentum_residual <= 1e-10 and self.max_energy_residual <= 1e-9 and self.max_angular_residual <= 1e-9


def _min_F_segment(body, state, t_end):
    dt = t_end - state.t
    if dt <= 0:
        return math.inf
    ts = np.linspace(0.0, dt, SAMPLES_PER_SEGMENT)
    return min(gap_at(body, state.advance(float(s))) for s in ts)


def simulate(body: ConvexBody2D, mi: MassInertia | None, init: ParticleState, family: str,
             horizon: float, max_events: int = 100) -> SimulationResult:
    """Alternate free flight and scattering until ``init.t + horizon``."""
    if mi is None:
        mi = body.mass_inertia
    t_end = init.t + horizon
    state = init
    events = []
    min_F = math.inf
    mom = en = ang = 0.0
    w = mi.weights
    E1, E2 = e_hats()
    skip = False
    truncated = False
    while True:
        t_star = collision_time(body, state, t_end, skip_contact=skip)
        seg_end = t_end if t_star is None else t_star
        min_F = min(min_F, _min_F_segment(body, state, seg_end))
        if t_star is None:
            state = state.advance(t_end - state.t)
            break
        if len(events) >= max_events:
            truncated = True
            state = state.advance(t_star - state.t)
            break
        state = state.advance(t_star - state.t)
        Y = state.Y
        beta = CollisionParam2D(psi_of(Y), Y[4], Y[5])
        rate = dFdt(body, state)
        F_ev = gap_at(body, state)
        V = state.V
        flags = []
        if abs(rate) < GRAZE_TOL:
            flags.append("grazing")
            Vp = V.copy()
        else:
            Vp = sigma(family, mi, body, beta).entries @ V
        post = state.with_velocity(Vp)
        rate_post = dFdt(body, post) if "grazing" not in flags else rate
        d = docd(body, beta)
        dV = Vp - V
        mom = max(mom, abs(dV @ E1), abs(dV @ E2))
        en = max(en, abs(np.sum((w * Vp) ** 2) - np.sum((w * V) ** 2)) / max(np.sum((w * V) ** 2), 1e-300))
        ang = max(ang, abs(dV @ alpha_vector(mi, d, beta.psi)) / (1 + np.linalg.norm(V)))
        if abs(F_ev) > F_TOL:
            flags.append("F-off-surface")
        if rate_post < -1e-10:
            flags.append("post-approaching")
        events.append(TrajectoryEvent(t_star, beta, V.copy(), Vp.copy(), family, F_ev, rate, rate_post, flags))
        state = post
        skip = True
    return SimulationResult(events, truncated, min_F, state, mom, en, ang)


def reversibility_probe(body: ConvexBody2D, mi: MassInertia | None, init: ParticleState, family: str,
                        horizon: float) -> float:
    """Run forward, negate velocities, run back for the same time; distance to the negated start.

    Uses ``S^2 = I``: the reversed state meets the same contact and is mapped
    back to the negated pre-collision velocity.
    """
    fwd = simulate(body, mi, init, family, horizon)
    end = fwd.final_state
    back_init = ParticleState(end.x, end.x_bar, end.theta, end.theta_bar, -end.V, 0.0)
    back = simulate(body, mi, back_init, family, horizon).final_state
    target = np.concatenate([init.x, init.x_bar, [init.theta, init.theta_bar], -init.V])
    got = np.concatenate([back.x, back.x_bar, [back.theta, back.theta_bar], back.V])
    return float(np.max(np.abs(got - target)))


def scenario(name: str, body: ConvexBody2D) -> ParticleState:
    """Named initial states used by the CLI and the experiment scripts."""
    R = body.max_radius
    if name == "head-on":
        return ParticleState([0, 0], [6 * R, 0], 0.0, 0.0, [1, 0, -1, 0, 0, 0])
    if name == "miss":
        return ParticleState([0, 0], [6 * R, 4 * R], 0.0, 0.0, [1, 0, -1, 0, 0, 0])
    if name == "oblique-spin":
        return ParticleState([0, 0], [6 * R, 0.7 * R], 0.3, 1.1, [1.0, 0.1, -0.8, -0.05, 0.7, -1.3])
    if name == "parallel":
        return ParticleState([0, 0], [0, 4 * R], 0.0, 0.0, [1, 0, 1, 0, 0, 0])
    raise KeyError(f"unknown scenario {name!r}")


SCENARIOS = ("head-on", "miss", "oblique-spin", "parallel")
