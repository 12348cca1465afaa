"""Pursuer and evader policies as pure decision functions over information sets.

A strategy is any object with ``act(info) -> action``.  The engine queries
strategies only at event times; an action holds a constant velocity command
plus an optional absolute ``review_at`` time at which the strategy wants to
be queried again.  Strategies must be pure functions of the info object:
re-querying with the same info must return the same action, which is what
makes event-driven simulation, replay, and exact enumeration sound.

Information hygiene: the pursuer sees its own position and the sensing log
(evader fixes at sensing instants only); the evader additionally sees the
pursuer's position continuously.  A pursuer strategy gets the live evader
position only if it declares ``continuous_observation = True``, which is
reserved for the full-information baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .core import (
    BudgetViolationError,
    GameConfig,
    RegionNotCoveredError,
    Vec2,
    line_of_sight,
    perpendicular,
)
from .value import in_loose_region, reach_factor, trigger_coefficient

__all__ = [
    "ARRIVAL_TOL",
    "SensingLog",
    "PursuerInfo",
    "EvaderInfo",
    "PursuerAction",
    "EvaderAction",
    "ContinuousPursuer",
    "ArrivalSensingPursuer",
    "WaitingPursuer",
    "SelfTriggeredPursuer",
    "RadialEvader",
    "EquilibriumEvader",
    "CaptureAvoidingEvader",
    "ScriptedEvader",
    "trial_rng",
    "theta_stream",
    "PURSUER_NAMES",
    "EVADER_NAMES",
    "build_pursuer",
    "build_evader",
]

# Distance below which "the pursuer has reached the sensed point" holds.
ARRIVAL_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class SensingLog:
    """History of sensor fixes, shared by both information sets.

    ``times[0]`` is always 0: the initial evader position is free.  Each
    later entry cost one unit of budget.  Pursuer positions at the fix
    instants ride along because both players can reconstruct them anyway
    (the pursuer knows its own path; the evader watches the pursuer), and
    the anchor separation they encode is what the strategies steer by.
    """

    times: tuple[float, ...]
    sensed_positions: tuple[Vec2, ...]
    pursuer_positions: tuple[Vec2, ...]
    budget_remaining: int

    def __post_init__(self):
        if not (len(self.times) == len(self.sensed_positions) == len(self.pursuer_positions)):
            raise ValueError("log columns must have equal length")
        if not self.times or self.times[0] != 0.0:
            raise ValueError("log must start with the free fix at t = 0")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("fix times must be strictly increasing")
        if self.budget_remaining < 0:
            raise ValueError("budget cannot be negative")

    @classmethod
    def initial(cls, config: GameConfig) -> "SensingLog":
        return cls((0.0,), (config.x_e0,), (config.x_p0,), config.n)

    def record(self, t: float, evader: Vec2, pursuer: Vec2) -> "SensingLog":
        """New log with one more fix and one less budget unit."""
        if self.budget_remaining <= 0:
            raise BudgetViolationError(f"sensing requested at t={t} with no budget left")
        return SensingLog(
            self.times + (t,),
            self.sensed_positions + (evader,),
            self.pursuer_positions + (pursuer,),
            self.budget_remaining - 1,
        )

    def anchor(self) -> tuple[float, Vec2, Vec2, float]:
        """Latest fix as (time, evader position, pursuer position, separation)."""
        evader = self.sensed_positions[-1]
        pursuer = self.pursuer_positions[-1]
        return self.times[-1], evader, pursuer, pursuer.dist(evader)


class PursuerInfo(NamedTuple):
    time: float
    own: Vec2
    log: SensingLog
    config: GameConfig
    evader: Optional[Vec2] = None  # live position; baseline mode only


class EvaderInfo(NamedTuple):
    time: float
    own: Vec2
    pursuer: Vec2
    log: SensingLog
    config: GameConfig


class PursuerAction(NamedTuple):
    """Constant-velocity command: unit ``heading`` scaled by ``speed_fraction``.

    ``heading`` may be None when parked (speed_fraction 0).  ``sense_now``
    asks the engine to spend one budget unit immediately and re-query.
    ``review_at`` is an absolute time; None means no self-scheduled event.
    """

    heading: Optional[Vec2]
    speed_fraction: float
    sense_now: bool = False
    review_at: Optional[float] = None


class EvaderAction(NamedTuple):
    velocity: Vec2
    review_at: Optional[float] = None


class ContinuousPursuer:
    """Full-information baseline: drive at the evader along the line of sight.

    Reproduces the continuous-sensing capture time (rho0 - r_cap)/(1 - nu).
    Queried on a short review interval so the closed-loop heading stays
    fresh; whenever pursuer, evader and heading are collinear the replanned
    heading is unchanged and the motion is exact.
    """

    continuous_observation = True

    def __init__(self, review_dt: float = 0.01):
        if not review_dt > 0:
            raise ValueError(f"review_dt must be positive, got {review_dt}")
        self.review_dt = review_dt

    def act(self, info: PursuerInfo) -> PursuerAction:
        if info.evader is None:
            raise ValueError("continuous pursuer queried without a live evader position")
        heading = line_of_sight(info.own, info.evader)
        return PursuerAction(heading, 1.0, review_at=info.time + self.review_dt)


class ArrivalSensingPursuer:
    """Dash to the last fix and request a new one on arrival.

    Each arrival contracts the separation by at least nu, and once
    nu * rho <= r_cap one blind dash along the anchor bearing is guaranteed
    to finish, so sensing stops there.  Config name: ``prop1``.
    """

    def act(self, info: PursuerInfo) -> PursuerAction:
        _, anchor_e, anchor_p, rho = info.log.anchor()
        cfg = info.config
        if rho == 0.0:
            return PursuerAction(None, 0.0)  # fix coincides with us: capture is due
        if cfg.nu * rho <= cfg.r_cap:
            # Endgame: the evader cannot escape the capture disc of this ray.
            return PursuerAction(line_of_sight(anchor_p, anchor_e), 1.0)
        remaining = info.own.dist(anchor_e)
        if remaining <= ARRIVAL_TOL:
            if info.log.budget_remaining > 0:
                return PursuerAction(None, 0.0, sense_now=True)
            return PursuerAction(None, 0.0)  # budget exhausted: park at the stale fix
        return PursuerAction(
            line_of_sight(info.own, anchor_e), 1.0, review_at=info.time + remaining
        )


class WaitingPursuer:
    """Budget-and-horizon-aware pursuer: bank spare time at the fix, then sense.

    At each anchor (separation rho, remaining time tau, remaining budget
    ell) it checks whether there is time to spare, i.e. whether
    tau > reach_factor(nu, ell) * rho while the capture region is out of
    reach (nu^(ell+1) * rho > r_cap).  If so it walks to the sensed point,
    parks until t_fix + (1 - nu) * tau / (1 - nu^(ell+1)), and only then
    spends a sensing; with ell = 0 the park simply lasts to the horizon.
    Otherwise it chases exactly like ``ArrivalSensingPursuer``.  Config
    name: ``thm1``.
    """

    def __init__(self):
        self._chaser = ArrivalSensingPursuer()

    def act(self, info: PursuerInfo) -> PursuerAction:
        anchor_t, anchor_e, _, rho = info.log.anchor()
        cfg = info.config
        ell = info.log.budget_remaining
        tau = cfg.t_f - anchor_t
        if rho > 0.0 and self._time_to_spare(rho, tau, ell, cfg):
            remaining = info.own.dist(anchor_e)
            if remaining > ARRIVAL_TOL:
                return PursuerAction(
                    line_of_sight(info.own, anchor_e), 1.0, review_at=info.time + remaining
                )
            t_sense = anchor_t + (1.0 - cfg.nu) * tau / (1.0 - cfg.nu ** (ell + 1))
            if info.time < t_sense - 1e-12 * max(1.0, t_sense):
                return PursuerAction(None, 0.0, review_at=t_sense)
            if ell > 0:
                return PursuerAction(None, 0.0, sense_now=True)
            return PursuerAction(None, 0.0)  # no budget: parked until the horizon
        return self._chaser.act(info)

    @staticmethod
    def _time_to_spare(rho: float, tau: float, ell: int, cfg: GameConfig) -> bool:
        if cfg.nu ** (ell + 1) * rho <= cfg.r_cap:
            return False  # enough budget to corner the evader: just chase
        return tau > reach_factor(cfg.nu, ell) * rho + 1e-12 * max(1.0, tau)


class SelfTriggeredPursuer:
    """Open-loop dash along the anchor bearing with a distance-scaled timer.

    Requests the next fix trigger_coefficient(nu) * rho after each anchor,
    mid-dash, without ever reaching the sensed point.  The scheme itself is
    budget-agnostic; when the engine's budget runs dry this implementation
    keeps the current bearing and stops asking (the sensing-count
    comparisons use the closed form, not this fallback).  Config name:
    ``aleem``.
    """

    def act(self, info: PursuerInfo) -> PursuerAction:
        anchor_t, anchor_e, anchor_p, rho = info.log.anchor()
        cfg = info.config
        if rho == 0.0:
            return PursuerAction(None, 0.0)
        heading = line_of_sight(anchor_p, anchor_e)
        if info.log.budget_remaining == 0:
            return PursuerAction(heading, 1.0)
        t_next = anchor_t + trigger_coefficient(cfg.nu) * rho
        if info.time >= t_next - 1e-12 * max(1.0, t_next):
            return PursuerAction(heading, 1.0, sense_now=True)
        return PursuerAction(heading, 1.0, review_at=t_next)


class RadialEvader:
    """Flee straight away from the pursuer's current position at top speed.

    Against any pursuer that keeps itself on the pursuer-evader line this is
    exact despite the periodic replanning, because the recomputed bearing
    never changes.  Config name: ``radial``.
    """

    def __init__(self, review_dt: float = 0.1):
        if not review_dt > 0:
            raise ValueError(f"review_dt must be positive, got {review_dt}")
        self.review_dt = review_dt

    def act(self, info: EvaderInfo) -> EvaderAction:
        away = line_of_sight(info.pursuer, info.own)
        return EvaderAction(away * info.config.nu, review_at=info.time + self.review_dt)


class EquilibriumEvader:
    """Coin-flip perpendicular dodges, radial flight once fixes stop mattering.

    Motion is constant over each inter-fix interval and anchored on the
    bearing at the latest fix.  The interval is terminal when no further fix
    can arrive in useful time: budget exhausted with tau <= rho, or budget
    left but the fix point unreachable before the horizon (tau < rho).
    There the evader flees along the anchor bearing; everywhere else it
    moves perpendicular to it, with the orientation taken from an explicit
    +/-1 stream indexed by interval, so outcomes can be enumerated exactly.
    Config name: ``equilibrium``.
    """

    def __init__(self, thetas: Sequence[int]):
        thetas = tuple(int(t) for t in thetas)
        if any(t not in (1, -1) for t in thetas):
            raise ValueError(f"thetas must be +1/-1 values, got {thetas}")
        self.thetas = thetas

    def act(self, info: EvaderInfo) -> EvaderAction:
        anchor_t, _, _, rho = info.log.anchor()
        cfg = info.config
        if rho == 0.0:
            return EvaderAction(Vec2(0.0, 0.0))
        tau = cfg.t_f - anchor_t
        ell = info.log.budget_remaining
        bearing = line_of_sight(info.log.pursuer_positions[-1], info.log.sensed_positions[-1])
        terminal = (ell == 0 and tau <= rho) or (ell >= 1 and tau < rho)
        if terminal:
            return EvaderAction(bearing * cfg.nu)
        interval = len(info.log.times) - 1
        if interval >= len(self.thetas):
            raise ValueError(
                f"theta stream exhausted: interval {interval}, only {len(self.thetas)} draws"
            )
        return EvaderAction(perpendicular(bearing, self.thetas[interval]) * cfg.nu)


def _min_distance_linear(offset: Vec2, rel_velocity: Vec2, duration: float) -> float:
    """Minimum of |offset + s * rel_velocity| over s in [0, duration]."""
    speed_sq = rel_velocity.dot(rel_velocity)
    if speed_sq == 0.0 or duration <= 0.0:
        return offset.norm()
    s = min(max(-offset.dot(rel_velocity) / speed_sq, 0.0), duration)
    return (offset + rel_velocity * s).norm()


class CaptureAvoidingEvader:
    """Heuristic dodger for the slack region of the zero-budget bound.

    Models the pursuer as running a go-to-the-fix-and-stop leg.  While the
    predicted closest approach of perpendicular motion against that leg
    stays above r_cap + margin it dodges perpendicular; otherwise it backs
    off radially from the pursuer's current position.  The radial bail-out
    is capture-proof against the modeled leg: closing speed is at most
    1 - nu, the leg lasts rho, so the separation never drops below
    nu * rho > r_cap in the slack region.  Config name: ``safe_heuristic``.
    """

    def __init__(self, margin: float = 0.02, review_dt: float = 0.02, orientation: int = 1):
        if margin < 0:
            raise ValueError(f"margin must be nonnegative, got {margin}")
        if not review_dt > 0:
            raise ValueError(f"review_dt must be positive, got {review_dt}")
        if orientation not in (1, -1):
            raise ValueError(f"orientation must be +1 or -1, got {orientation!r}")
        self.margin = margin
        self.review_dt = review_dt
        self.orientation = orientation

    def act(self, info: EvaderInfo) -> EvaderAction:
        cfg = info.config
        anchor_t, anchor_e, anchor_p, rho = info.log.anchor()
        tau = cfg.t_f - anchor_t
        if len(info.log.times) == 1 and not in_loose_region(rho, tau, cfg.nu, cfg.r_cap):
            raise RegionNotCoveredError(
                f"dodging heuristic covers only the slack region; "
                f"got rho={rho}, tau={tau}, nu={cfg.nu}, r_cap={cfg.r_cap}"
            )
        bearing = line_of_sight(anchor_p, anchor_e)
        dodge = perpendicular(bearing, self.orientation) * cfg.nu
        if self._closest_approach(info, anchor_e, dodge) > cfg.r_cap + self.margin:
            velocity = dodge
        else:
            velocity = line_of_sight(info.pursuer, info.own) * cfg.nu
        return EvaderAction(velocity, review_at=info.time + self.review_dt)

    def _closest_approach(self, info: EvaderInfo, waypoint: Vec2, velocity: Vec2) -> float:
        """Predicted minimum separation if we hold ``velocity`` from now on."""
        horizon = info.config.t_f - info.time
        leg = waypoint - info.pursuer
        leg_len = leg.norm()
        walk = min(leg_len, horizon)
        worst = (info.own - info.pursuer).norm()
        if walk > 0.0:
            v_p = leg * (1.0 / leg_len)
            worst = min(
                worst,
                _min_distance_linear(info.own - info.pursuer, velocity - v_p, walk),
            )
        if horizon > walk:  # pursuer parked at the fix for the rest
            offset = (info.own + velocity * walk) - waypoint
            worst = min(worst, _min_distance_linear(offset, velocity, horizon - walk))
        return worst


class ScriptedEvader:
    """Replay an explicit list of (end_time, velocity) legs, then stand still.

    Used for deviation sweeps and regression scenarios.  Speeds are checked
    against the evader cap at query time, since a script is written before
    it meets a config.  Config name: ``scripted``.
    """

    def __init__(self, legs: Sequence[tuple[float, Vec2]]):
        parsed = []
        last_end = 0.0
        for t_end, velocity in legs:
            t_end = float(t_end)
            if not isinstance(velocity, Vec2):
                raise ValueError(f"leg velocity must be a Vec2, got {velocity!r}")
            if not (math.isfinite(t_end) and t_end > last_end):
                raise ValueError(f"leg end times must be positive and increasing, got {t_end}")
            parsed.append((t_end, velocity))
            last_end = t_end
        self.legs = tuple(parsed)

    def act(self, info: EvaderInfo) -> EvaderAction:
        cap = info.config.nu * (1.0 + 1e-12)
        for t_end, velocity in self.legs:
            if info.time < t_end:
                if velocity.norm() > cap:
                    raise ValueError(
                        f"scripted speed {velocity.norm()} exceeds evader cap {info.config.nu}"
                    )
                return EvaderAction(velocity, review_at=t_end)
        return EvaderAction(Vec2(0.0, 0.0))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent generator for (seed, trial); trials are order-independent."""
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    if not isinstance(trial, int) or trial < 0:
        raise ValueError(f"trial index must be a nonnegative integer, got {trial!r}")
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


def theta_stream(seed: int, trial: int, length: int) -> tuple[int, ...]:
    """Deterministic +/-1 orientation draws for one trial."""
    if length < 0:
        raise ValueError(f"length must be nonnegative, got {length}")
    rng = trial_rng(seed, trial)
    return tuple(int(x) for x in rng.choice((-1, 1), size=length))


PURSUER_NAMES = ("continuous", "prop1", "thm1", "aleem")
EVADER_NAMES = ("radial", "equilibrium", "safe_heuristic", "scripted")


def _split_selector(selector, role: str) -> tuple[str, dict]:
    if isinstance(selector, str):
        return selector, {}
    if isinstance(selector, dict):
        if "name" not in selector:
            raise ValueError(f"{role} object needs a 'name' key, got {sorted(selector)}")
        params = dict(selector)
        return params.pop("name"), params
    raise ValueError(f"{role} must be a name or an object, got {selector!r}")


def _check_params(name: str, params: dict, allowed: tuple[str, ...]) -> None:
    extra = sorted(set(params) - set(allowed))
    if extra:
        raise ValueError(f"{name} got unknown parameters: {extra}")


def build_pursuer(selector, config: GameConfig):
    """Construct a pursuer strategy from its config-file name or object."""
    name, params = _split_selector(selector, "pursuer")
    if name == "continuous":
        _check_params(name, params, ("review_dt",))
        return ContinuousPursuer(**params)
    if name == "prop1":
        _check_params(name, params, ())
        return ArrivalSensingPursuer()
    if name == "thm1":
        _check_params(name, params, ())
        return WaitingPursuer()
    if name == "aleem":
        _check_params(name, params, ())
        return SelfTriggeredPursuer()
    raise ValueError(f"unknown pursuer {name!r}; expected one of {PURSUER_NAMES}")


def build_evader(selector, config: GameConfig):
    """Construct an evader strategy from its config-file name or object.

    The equilibrium evader draws its orientation stream from the config seed
    (trial 0) unless an explicit ``thetas`` list is supplied.
    """
    name, params = _split_selector(selector, "evader")
    if name == "radial":
        _check_params(name, params, ("review_dt",))
        return RadialEvader(**params)
    if name == "equilibrium":
        _check_params(name, params, ("thetas",))
        thetas = params.get("thetas")
        if thetas is None:
            thetas = theta_stream(config.seed, 0, config.n + 1)
        return EquilibriumEvader(thetas)
    if name == "safe_heuristic":
        _check_params(name, params, ("margin", "review_dt", "orientation"))
        return CaptureAvoidingEvader(**params)
    if name == "scripted":
        _check_params(name, params, ("legs",))
        if "legs" not in params:
            raise ValueError("scripted evader needs a 'legs' list of [t_end, [vx, vy]] pairs")
        legs = [(t_end, Vec2(v[0], v[1])) for t_end, v in params["legs"]]
        return ScriptedEvader(legs)
    raise ValueError(f"unknown evader {name!r}; expected one of {EVADER_NAMES}")
