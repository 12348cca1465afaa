"""Event-driven game simulator with exact piecewise-linear capture detection.

Both players move with piecewise-constant velocity between events.  Events
are: a strategy's self-scheduled review time, a sensing instant, capture, or
the horizon.  Between events the relative motion is linear, so the first
crossing of the capture radius is a root of a quadratic and is found in
closed form; there is no integration step and no step-size error.

Sensing is resolved before motion at each event: if the pursuer's action
asks to sense, the fix is recorded and the pursuer re-queried, so the
motion command issued for the interval always reflects the newest fix.  The
evader is queried after the pursuer, and sees the updated log.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .core import EnumerationCapError, GameConfig, PayoffSpec, Vec2, fmt_g
from .strategies import (
    EquilibriumEvader,
    EvaderAction,
    EvaderInfo,
    PursuerAction,
    PursuerInfo,
    SensingLog,
    theta_stream,
)

__all__ = [
    "Segment",
    "Trajectory",
    "Outcome",
    "SimulationResult",
    "detect_capture",
    "simulate",
    "payoff_of",
    "exact_expected_payoff",
    "enumerate_branch_payoffs",
    "mc_expected_payoff",
    "sampled_expected_payoff",
    "write_trajectory_csv",
]

_TIME_EPS = 1e-15


class Segment(NamedTuple):
    """Constant-velocity motion on [t_start, t_end]."""

    t_start: float
    t_end: float
    x0: Vec2
    velocity: Vec2

    def position_at(self, t: float) -> Vec2:
        return self.x0 + self.velocity * (t - self.t_start)

    @property
    def end_position(self) -> Vec2:
        return self.position_at(self.t_end)


@dataclass(frozen=True, slots=True)
class Trajectory:
    """Contiguous chain of segments for one player.

    ``segments`` may be empty (a game that ends at t = 0); ``start_pos``
    then carries the only known position.
    """

    start_time: float
    start_pos: Vec2
    segments: tuple[Segment, ...]

    def __post_init__(self):
        t, x = self.start_time, self.start_pos
        for seg in self.segments:
            if abs(seg.t_start - t) > 1e-12 * max(1.0, abs(t)):
                raise ValueError(f"segment starts at {seg.t_start}, expected {t}")
            if seg.x0.dist(x) > 1e-9:
                raise ValueError("segment does not start where the previous one ended")
            if not seg.t_end > seg.t_start:
                raise ValueError(f"segment must have positive duration, got {seg}")
            t, x = seg.t_end, seg.end_position

    @property
    def end_time(self) -> float:
        return self.segments[-1].t_end if self.segments else self.start_time

    @property
    def end_position(self) -> Vec2:
        return self.segments[-1].end_position if self.segments else self.start_pos

    def position_at(self, t: float) -> Vec2:
        """Position at time t, clamped to the covered interval."""
        if t <= self.start_time or not self.segments:
            return self.start_pos
        for seg in self.segments:
            if t <= seg.t_end:
                return seg.position_at(t)
        return self.end_position

    def path_length(self) -> float:
        return sum(s.velocity.norm() * (s.t_end - s.t_start) for s in self.segments)


@dataclass(frozen=True, slots=True)
class Outcome:
    """Terminal result of one game."""

    captured: bool
    capture_time: Optional[float]
    final_distance: float
    payoff: float
    sensing_times: tuple[float, ...]

    def to_json_dict(self) -> dict:
        return {
            "captured": self.captured,
            "capture_time": self.capture_time,
            "final_distance": self.final_distance,
            "payoff": self.payoff,
            "sensing_times": list(self.sensing_times),
        }


@dataclass(frozen=True, slots=True)
class SimulationResult:
    outcome: Outcome
    pursuer_trajectory: Trajectory
    evader_trajectory: Trajectory
    log: SensingLog


def payoff_of(phi: PayoffSpec, captured: bool, final_distance: float) -> float:
    """Terminal payoff: zero on capture, otherwise the miss penalty."""
    if captured:
        return 0.0
    return phi.evaluate(final_distance)


def _capture_root(
    p0: Vec2, v_p: Vec2, e0: Vec2, v_e: Vec2, r_cap: float, horizon: float
) -> Optional[float]:
    """First s in [0, horizon] with |(e0 - p0) + s (v_e - v_p)| <= r_cap, else None."""
    d0 = e0 - p0
    w = v_e - v_p
    c = d0.dot(d0) - r_cap * r_cap
    if c <= 0.0:
        return 0.0
    a = w.dot(w)
    if a == 0.0:
        return None
    b = 2.0 * d0.dot(w)
    if b >= 0.0:
        return None  # separation is nondecreasing on [0, inf)
    disc = b * b - 4.0 * a * c
    # Grazing contact: the discriminant of a true tangency can round to a
    # tiny negative value, so clamp within a relative tolerance.
    if disc < 0.0:
        if disc < -1e-12 * max(b * b, abs(4.0 * a * c)):
            return None
        disc = 0.0
    s = 2.0 * c / (-b + math.sqrt(disc))  # smaller root, cancellation-free
    if s <= horizon + 1e-12 * max(1.0, horizon):
        return min(s, horizon)
    return None


def detect_capture(p_seg: Segment, e_seg: Segment, r_cap: float) -> Optional[float]:
    """Absolute capture time on the overlap of two segments, or None.

    The segments must overlap in time; capture at the overlap's right
    endpoint counts.
    """
    if not r_cap > 0:
        raise ValueError(f"r_cap must be positive, got {r_cap}")
    t0 = max(p_seg.t_start, e_seg.t_start)
    t1 = min(p_seg.t_end, e_seg.t_end)
    if t1 < t0:
        raise ValueError(f"segments do not overlap: [{p_seg.t_start}, {p_seg.t_end}] "
                         f"vs [{e_seg.t_start}, {e_seg.t_end}]")
    s = _capture_root(
        p_seg.position_at(t0), p_seg.velocity,
        e_seg.position_at(t0), e_seg.velocity,
        r_cap, t1 - t0,
    )
    return None if s is None else t0 + s


def _pursuer_velocity(action: PursuerAction) -> Vec2:
    gamma = action.speed_fraction
    if not (isinstance(gamma, (int, float)) and 0.0 <= gamma <= 1.0):
        raise ValueError(f"speed_fraction must lie in [0, 1], got {gamma!r}")
    if gamma == 0.0:
        return Vec2(0.0, 0.0)
    heading = action.heading
    if not isinstance(heading, Vec2):
        raise ValueError(f"moving action needs a heading vector, got {heading!r}")
    if abs(heading.norm() - 1.0) > 1e-9:
        raise ValueError(f"heading must be a unit vector, norm {heading.norm()}")
    return heading * float(gamma)


def _evader_velocity(action: EvaderAction, config: GameConfig) -> Vec2:
    velocity = action.velocity
    if not isinstance(velocity, Vec2):
        raise ValueError(f"evader velocity must be a Vec2, got {velocity!r}")
    if velocity.norm() > config.nu * (1.0 + 1e-12):
        raise ValueError(
            f"evader speed {velocity.norm()} exceeds the cap {config.nu}"
        )
    return velocity


def _check_review(review_at, t: float):
    if review_at is not None and not (isinstance(review_at, (int, float))
                                      and math.isfinite(review_at)):
        raise ValueError(f"review_at must be a finite time or None, got {review_at!r}")


def simulate(config: GameConfig, pursuer, evader, max_events: int = 200_000) -> SimulationResult:
    """Play one game to capture or to the horizon.

    ``pursuer`` and ``evader`` are strategy objects (see strategies module).
    Raises BudgetViolationError if the pursuer senses beyond its budget, and
    ValueError on malformed actions (non-unit headings, over-cap speeds).
    """
    log = SensingLog.initial(config)
    t = 0.0
    x_p, x_e = config.x_p0, config.x_e0
    p_segments: list[Segment] = []
    e_segments: list[Segment] = []
    continuous = bool(getattr(pursuer, "continuous_observation", False))

    captured = False
    capture_time: Optional[float] = None

    d0 = x_p.dist(x_e)
    if d0 <= config.r_cap:
        captured, capture_time = True, 0.0

    events = 0
    while not captured and t < config.t_f - _TIME_EPS:
        events += 1
        if events > max_events:
            raise RuntimeError(f"event budget {max_events} exhausted at t={t}")

        # Sensing phase: re-query until the pursuer stops asking.  A second
        # request at the same instant is rejected by the log itself.
        for _ in range(3):
            p_info = PursuerInfo(t, x_p, log, config, x_e if continuous else None)
            p_action = pursuer.act(p_info)
            if not p_action.sense_now:
                break
            log = log.record(t, x_e, x_p)
        else:
            raise RuntimeError(f"pursuer kept requesting fixes at t={t}")
        _check_review(p_action.review_at, t)
        v_p = _pursuer_velocity(p_action)

        e_info = EvaderInfo(t, x_e, x_p, log, config)
        e_action = evader.act(e_info)
        _check_review(e_action.review_at, t)
        v_e = _evader_velocity(e_action, config)

        t_next = config.t_f
        for review in (p_action.review_at, e_action.review_at):
            if review is not None and t + _TIME_EPS < review < t_next:
                t_next = review
        t_next = min(t_next, config.t_f)

        s = _capture_root(x_p, v_p, x_e, v_e, config.r_cap, t_next - t)
        if s is not None:
            t_next = t + s
            captured, capture_time = True, t_next
        if t_next > t:
            p_segments.append(Segment(t, t_next, x_p, v_p))
            e_segments.append(Segment(t, t_next, x_e, v_e))
            x_p = x_p + v_p * (t_next - t)
            x_e = x_e + v_e * (t_next - t)
        t = t_next

    final_distance = x_p.dist(x_e)
    payoff = payoff_of(config.phi, captured, final_distance)
    outcome = Outcome(
        captured=captured,
        capture_time=capture_time,
        final_distance=final_distance,
        payoff=payoff,
        sensing_times=log.times[1:],
    )
    return SimulationResult(
        outcome=outcome,
        pursuer_trajectory=Trajectory(0.0, config.x_p0, tuple(p_segments)),
        evader_trajectory=Trajectory(0.0, config.x_e0, tuple(e_segments)),
        log=log,
    )


def _default_evader_factory(thetas: Sequence[int]) -> EquilibriumEvader:
    return EquilibriumEvader(thetas)


def enumerate_branch_payoffs(
    config: GameConfig,
    pursuer,
    evader_factory: Optional[Callable[[tuple[int, ...]], object]] = None,
    enumeration_cap: int = 20,
) -> tuple[float, ...]:
    """Payoff of every orientation branch, in lexicographic (+1 first) order.

    The randomized evader draws one +/-1 orientation per inter-fix interval;
    with budget n there are at most n + 1 intervals, hence 2^(n+1) branches,
    each equally likely.  Raises EnumerationCapError when that exponent
    exceeds ``enumeration_cap``.
    """
    draws = config.n + 1
    if draws > enumeration_cap:
        raise EnumerationCapError(
            f"2^{draws} branches exceed the enumeration cap 2^{enumeration_cap}"
        )
    factory = evader_factory or _default_evader_factory
    payoffs = []
    for thetas in itertools.product((1, -1), repeat=draws):
        result = simulate(config, pursuer, factory(thetas))
        payoffs.append(result.outcome.payoff)
    return tuple(payoffs)


def exact_expected_payoff(
    config: GameConfig,
    pursuer,
    evader_factory: Optional[Callable[[tuple[int, ...]], object]] = None,
    enumeration_cap: int = 20,
) -> float:
    """Expected payoff against the orientation-randomizing evader, exactly.

    Enumerates every orientation branch and averages; no sampling error.
    """
    payoffs = enumerate_branch_payoffs(config, pursuer, evader_factory, enumeration_cap)
    return math.fsum(payoffs) / len(payoffs)


def mc_expected_payoff(
    config: GameConfig,
    pursuer,
    n_draws: int,
    seed: int,
    evader_factory: Optional[Callable[[tuple[int, ...]], object]] = None,
    enumeration_cap: int = 20,
) -> float:
    """Monte Carlo estimate over the same branches, for sanity checks.

    Draws a multinomial over the enumerated branches instead of replaying
    ``n_draws`` games, so a million-draw estimate costs 2^(n+1) simulations.
    """
    if n_draws <= 0:
        raise ValueError(f"n_draws must be positive, got {n_draws}")
    payoffs = enumerate_branch_payoffs(config, pursuer, evader_factory, enumeration_cap)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed))
    counts = rng.multinomial(n_draws, [1.0 / len(payoffs)] * len(payoffs))
    return float(np.dot(counts, payoffs) / n_draws)


def sampled_expected_payoff(
    config: GameConfig,
    pursuer,
    n_draws: int,
    seed: int,
    evader_factory: Optional[Callable[[tuple[int, ...]], object]] = None,
) -> float:
    """Plain Monte Carlo, one simulation per draw.

    For budgets beyond the enumeration cap, where the branch count makes
    exact averaging infeasible.
    """
    if n_draws <= 0:
        raise ValueError(f"n_draws must be positive, got {n_draws}")
    factory = evader_factory or _default_evader_factory
    total = 0.0
    for draw in range(n_draws):
        thetas = theta_stream(seed, draw, config.n + 1)
        total += simulate(config, pursuer, factory(thetas)).outcome.payoff
    return total / n_draws


def write_trajectory_csv(path, result: SimulationResult) -> None:
    """Write both players' motion segments as CSV.

    Columns: player, t_start, t_end, x0, y0, vx, vy.  One row per
    constant-velocity segment, pursuer rows first.
    """
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["player", "t_start", "t_end", "x0", "y0", "vx", "vy"])
        for player, trajectory in (
            ("pursuer", result.pursuer_trajectory),
            ("evader", result.evader_trajectory),
        ):
            for seg in trajectory.segments:
                writer.writerow([
                    player,
                    fmt_g(seg.t_start), fmt_g(seg.t_end),
                    fmt_g(seg.x0.x), fmt_g(seg.x0.y),
                    fmt_g(seg.velocity.x), fmt_g(seg.velocity.y),
                ])
