"""Closed-form quantities for the sensing-budget pursuit game.

This module has three layers:

* sensing-scheme arithmetic: the contraction factor and sensing count of the
  self-triggered dash scheme, the arrival-triggered count, and the travel
  budget of the arrival scheme;
* the value bound: an upper bound on the game value as a function of the
  separation ``rho`` at the last sensing, the remaining time ``tau``, and the
  remaining budget ``ell``, together with the case that produced it and a
  tightness flag (the bound is exact everywhere except in a thin slack
  region);
* degradation metrics: how much payoff the pursuer gives up by having only
  ``n`` sensings instead of continuous observation, and the geometric
  lower-bound coefficient for that loss.

Everything is a pure function of its arguments; no simulation happens here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import PayoffSpec, RegionNotCoveredError

__all__ = [
    "trigger_coefficient",
    "self_triggered_contraction",
    "self_triggered_contraction_raw",
    "sense_count_self_triggered",
    "sense_count_arrival",
    "travel_budget",
    "reach_factor",
    "CAPTURE_REGION",
    "TIME_LIMITED",
    "WAIT_REGION",
    "STAGE0_CAPTURE",
    "STAGE0_STOP",
    "STAGE0_SLACK",
    "STAGE0_CHASE",
    "CASE_TAGS",
    "ValueBound",
    "stage0_bound",
    "in_loose_region",
    "in_loose_region_budgeted",
    "value_bound",
    "matching_sense_count",
    "continuous_sensing_payoff",
    "DegradationReport",
    "degradation_report",
]

# Relative nudge applied before floor/ceil so exact powers do not flip the
# integer by one unit of floating-point noise.
_NUDGE = 1e-12


def _check_nu(nu: float) -> None:
    if not (isinstance(nu, (int, float)) and 0.0 < nu < 1.0):
        raise ValueError(f"nu must lie strictly in (0, 1), got {nu!r}")


def _floor_nudged(q: float) -> int:
    return math.floor(q + _NUDGE * max(1.0, abs(q)))


def _ceil_nudged(q: float) -> int:
    return math.ceil(q - _NUDGE * max(1.0, abs(q)))


def trigger_coefficient(nu: float) -> float:
    """Inter-sensing interval of the self-triggered scheme, per unit separation.

    The scheme dashes toward the last sensed point for this fraction of the
    current separation before asking for the next fix:
    f(nu) = sqrt(1 - nu^2) / (nu + sqrt(1 - nu^2)).  Decreasing in nu: a
    faster evader forces more frequent sensing.
    """
    _check_nu(nu)
    root = math.sqrt(1.0 - nu * nu)
    return root / (nu + root)


def self_triggered_contraction(nu: float) -> float:
    """Worst-case separation shrink factor per self-triggered dash.

    Uses the singularity-free form 1 - (1-nu)*sqrt(1-nu^2)/(nu+sqrt(1-nu^2)),
    which equals ``self_triggered_contraction_raw`` wherever the latter is
    defined; the raw form is 0/0 at nu = 1/sqrt(2) and the singularity is
    removable.  Satisfies nu < value < 1 on all of (0, 1).  Equivalently,
    1 - (1-nu)*trigger_coefficient(nu): after a dash of f(nu)*rho, a radially
    fleeing evader leaves f*rho*nu + (1-f)*rho = contraction*rho between the
    players, and no other evader heading leaves more.
    """
    _check_nu(nu)
    root = math.sqrt(1.0 - nu * nu)
    return 1.0 - (1.0 - nu) * root / (nu + root)


def self_triggered_contraction_raw(nu: float) -> float:
    """Literal textbook form of the contraction factor.

    1 - [nu(1-nu)sqrt(1-nu^2) - (1-nu)(1-nu^2)] / (2nu^2 - 1).  Kept only for
    cross-checking the simplified form; numerically useless near the
    removable singularity at nu = 1/sqrt(2), where the denominator vanishes.
    """
    _check_nu(nu)
    root = math.sqrt(1.0 - nu * nu)
    numerator = nu * (1.0 - nu) * root - (1.0 - nu) * (1.0 - nu * nu)
    return 1.0 - numerator / (2.0 * nu * nu - 1.0)


def _check_radii(rho0: float, r_cap: float) -> None:
    if not (math.isfinite(r_cap) and r_cap > 0):
        raise ValueError(f"r_cap must be positive and finite, got {r_cap}")
    if not (math.isfinite(rho0) and rho0 >= r_cap):
        raise ValueError(f"rho0 must be finite and at least r_cap, got {rho0}")


def sense_count_self_triggered(rho0: float, r_cap: float, nu: float) -> int:
    """Sensings the self-triggered scheme needs to drive rho0 inside r_cap.

    ceil(log(r_cap/rho0) / log(contraction)), clamped at 0.
    """
    _check_nu(nu)
    _check_radii(rho0, r_cap)
    h = self_triggered_contraction(nu)
    q = (math.log(r_cap) - math.log(rho0)) / math.log(h)
    return max(_ceil_nudged(q), 0)


def sense_count_arrival(rho0: float, r_cap: float, nu: float) -> int:
    """Sensings the move-to-last-fix scheme needs: floor(log(r_cap/rho0)/log(nu)).

    Each arrival at the previously sensed point shrinks the separation by at
    least nu, and once nu*rho <= r_cap one blind straight dash finishes the
    capture, so the count is a floor rather than a ceiling.
    """
    _check_nu(nu)
    _check_radii(rho0, r_cap)
    q = (math.log(r_cap) - math.log(rho0)) / math.log(nu)
    return max(_floor_nudged(q), 0)


def travel_budget(rho0: float, r_cap: float, nu: float) -> tuple[int, float]:
    """Sensing count and worst-case pursuer path length of the arrival scheme.

    Returns ``(sensings, max_travel)`` where ``max_travel`` is the geometric
    sum (1 - nu^(dashes+1)) / (1 - nu) * rho0 over the chase legs.  Unlike the
    count functions this accepts r_cap > rho0 (zero dashes, bound rho0).
    """
    _check_nu(nu)
    if not (math.isfinite(r_cap) and r_cap > 0):
        raise ValueError(f"r_cap must be positive and finite, got {r_cap}")
    if not (math.isfinite(rho0) and rho0 > 0):
        raise ValueError(f"rho0 must be positive and finite, got {rho0}")
    if r_cap > rho0:
        dashes = 0
    else:
        q = (math.log(r_cap) - math.log(rho0)) / math.log(nu)
        dashes = _floor_nudged(q) + 1
    sensings = max(dashes - 1, 0)
    max_travel = (1.0 - nu ** (dashes + 1)) / (1.0 - nu) * rho0
    return sensings, max_travel


def reach_factor(nu: float, ell: int) -> float:
    """Geometric sum 1 + nu + ... + nu**ell = (1 - nu^(ell+1)) / (1 - nu).

    Per unit of current separation, the time the pursuer needs to chase down
    the evader through ell more sensings plus the final blind dash.
    """
    _check_nu(nu)
    if not isinstance(ell, int) or ell < 0:
        raise ValueError(f"ell must be a nonnegative integer, got {ell!r}")
    return (1.0 - nu ** (ell + 1)) / (1.0 - nu)


# Case tags; fixed strings, also the vocabulary of the value-grid CSV.
CAPTURE_REGION = "capture_region"
TIME_LIMITED = "time_limited"
WAIT_REGION = "wait_region"
STAGE0_CAPTURE = "stage0_case1"
STAGE0_STOP = "stage0_case2a"
STAGE0_SLACK = "stage0_case2b"
STAGE0_CHASE = "stage0_case3"

CASE_TAGS = (
    CAPTURE_REGION,
    TIME_LIMITED,
    WAIT_REGION,
    STAGE0_CAPTURE,
    STAGE0_STOP,
    STAGE0_SLACK,
    STAGE0_CHASE,
)


@dataclass(frozen=True, slots=True)
class ValueBound:
    """Upper bound on the game value plus which analytic case produced it.

    ``is_tight`` is False exactly when the queried state sits in the slack
    region, where only the upper bound (not the exact value) is known.
    """

    value: float
    case_tag: str
    is_tight: bool

    def __post_init__(self):
        if self.case_tag not in CASE_TAGS:
            raise ValueError(f"unknown case tag {self.case_tag!r}")
        if not (math.isfinite(self.value) and self.value >= 0.0):
            raise ValueError(f"bound value must be nonnegative and finite, got {self.value}")


def _check_state(rho: float, tau: float) -> None:
    if not (math.isfinite(rho) and rho >= 0):
        raise ValueError(f"rho must be nonnegative and finite, got {rho}")
    if not (math.isfinite(tau) and tau >= 0):
        raise ValueError(f"tau must be nonnegative and finite, got {tau}")


def in_loose_region(rho: float, tau: float, nu: float, r_cap: float) -> bool:
    """Zero-budget slack region: tau >= rho and r_cap < nu*rho <= sqrt(1+nu^2)*r_cap.

    Inside it the evader is too close to dodge cleanly but too far to be
    cornered, and the stage-0 bound is not known to be attained.
    """
    _check_nu(nu)
    return tau >= rho and r_cap < nu * rho <= math.sqrt(1.0 + nu * nu) * r_cap


def in_loose_region_budgeted(rho: float, tau: float, ell: int, nu: float, r_cap: float) -> bool:
    """Slack region test used for budgets ell >= 1, with its own scaling.

    tau >= reach_factor(nu, ell)*rho and r_cap <= rho <= sqrt(1+nu^2)*r_cap.
    Note the left inequality is on rho itself, not nu*rho as in the
    zero-budget region; both predicates are exposed so callers can compare.
    """
    if not isinstance(ell, int) or ell < 1:
        raise ValueError(f"ell must be a positive integer here, got {ell!r}")
    return (
        tau >= reach_factor(nu, ell) * rho
        and r_cap <= rho <= math.sqrt(1.0 + nu * nu) * r_cap
    )


def stage0_bound(rho: float, tau: float, phi: PayoffSpec, nu: float) -> ValueBound:
    """Value bound with an exhausted sensing budget.

    Case split: 0 if the pursuer can corner the evader (tau >= rho and
    nu*rho <= r_cap); otherwise phi(nu*tau + max(rho - tau, 0)), which is the
    chase outcome when time is short (tau < rho) and the go-to-the-point-and-
    stop outcome when it is not.  The stop case is tight only outside the
    slack region.
    """
    _check_nu(nu)
    _check_state(rho, tau)
    r_cap = phi.r_cap
    if tau >= rho and nu * rho <= r_cap:
        return ValueBound(0.0, STAGE0_CAPTURE, True)
    value = phi.evaluate(nu * tau + max(rho - tau, 0.0))
    if tau < rho:
        return ValueBound(value, STAGE0_CHASE, True)
    if nu * rho > math.sqrt(1.0 + nu * nu) * r_cap:
        return ValueBound(value, STAGE0_STOP, True)
    return ValueBound(value, STAGE0_SLACK, False)


def value_bound(rho: float, tau: float, ell: int, phi: PayoffSpec, nu: float) -> ValueBound:
    """Value bound for separation rho, remaining time tau, remaining budget ell.

    For ell >= 1 the cases are:

    * capture_region: 0 when tau >= reach_factor(nu, ell)*rho and
      nu^(ell+1)*rho <= r_cap (enough time and enough sensings to corner);
    * time_limited: phi(nu*tau + rho - tau) when tau <= reach_factor*rho
      (chasing is all the pursuer can do with the time left);
    * wait_region: phi((1-nu)/(1-nu^(ell+1)) * nu^(ell+1) * tau) otherwise
      (the pursuer banks time at the sensed point before spending sensings).

    Queries on the time_limited/wait_region boundary resolve to time_limited;
    the two branches agree there (both give phi(nu^(ell+1)*rho)).  A query
    with rho <= r_cap is capture at the query instant and returns 0.
    ell = 0 delegates verbatim to ``stage0_bound``.
    """
    if not isinstance(ell, int) or ell < 0:
        raise ValueError(f"ell must be a nonnegative integer, got {ell!r}")
    if ell == 0:
        return stage0_bound(rho, tau, phi, nu)
    _check_nu(nu)
    _check_state(rho, tau)
    r_cap = phi.r_cap
    # The tightness flag follows the budgeted slack predicate even where the
    # value itself comes from a short-circuit below.
    tight = not in_loose_region_budgeted(rho, tau, ell, nu, r_cap)
    if rho <= r_cap:
        return ValueBound(0.0, CAPTURE_REGION, tight)
    shrink = nu ** (ell + 1)
    reach = reach_factor(nu, ell) * rho
    if tau >= reach and shrink * rho <= r_cap:
        return ValueBound(0.0, CAPTURE_REGION, tight)
    tol = _NUDGE * max(1.0, tau)
    if tau <= reach + tol:
        return ValueBound(phi.evaluate(nu * tau + rho - tau), TIME_LIMITED, tight)
    pooled = (1.0 - nu) / (1.0 - shrink) * shrink * tau
    return ValueBound(phi.evaluate(pooled), WAIT_REGION, tight)


def matching_sense_count(rho0: float, t_f: float, nu: float, r_cap: float) -> int:
    """Smallest budget whose bound matches the continuous-sensing payoff.

    Requires nu*rho0 > sqrt(1+nu^2)*r_cap (the initial state must sit clear
    of the slack region); outside that precondition the closed form is not
    covered and a RegionNotCoveredError is raised.
    """
    _check_nu(nu)
    if not (math.isfinite(r_cap) and r_cap > 0):
        raise ValueError(f"r_cap must be positive and finite, got {r_cap}")
    if not (math.isfinite(rho0) and rho0 > 0):
        raise ValueError(f"rho0 must be positive and finite, got {rho0}")
    if not (math.isfinite(t_f) and t_f >= 0):
        raise ValueError(f"t_f must be nonnegative and finite, got {t_f}")
    if nu * rho0 <= math.sqrt(1.0 + nu * nu) * r_cap:
        raise RegionNotCoveredError(
            f"need nu*rho0 > sqrt(1+nu^2)*r_cap, got {nu * rho0} <= "
            f"{math.sqrt(1.0 + nu * nu) * r_cap}"
        )
    if t_f < (rho0 - r_cap) / (1.0 - nu):
        gap = rho0 - (1.0 - nu) * t_f
        q = (math.log(gap) - math.log(rho0)) / math.log(nu)
    else:
        q = (math.log(r_cap) - math.log(rho0)) / math.log(nu)
    return max(_floor_nudged(q), 0)


def continuous_sensing_payoff(rho0: float, t_f: float, nu: float, phi: PayoffSpec) -> float:
    """Payoff when the pursuer observes continuously: phi(max(rho0-(1-nu)t_f, 0))."""
    _check_nu(nu)
    if not (math.isfinite(rho0) and rho0 >= 0):
        raise ValueError(f"rho0 must be nonnegative and finite, got {rho0}")
    if not (math.isfinite(t_f) and t_f >= 0):
        raise ValueError(f"t_f must be nonnegative and finite, got {t_f}")
    return phi.evaluate(max(rho0 - (1.0 - nu) * t_f, 0.0))


@dataclass(frozen=True, slots=True)
class DegradationReport:
    """Payoff degradation per budget n = 0 .. n_star, against continuous sensing.

    ``deltas[n]`` is the value-bound excess over the continuous-sensing
    payoff; ``betas[n]`` is the geometric lower-bound coefficient, empty when
    the final continuous-sensing separation is zero (beta undefined).
    """

    n_star: int
    deltas: tuple[float, ...]
    betas: tuple[float, ...]
    continuous_payoff: float

    def __post_init__(self):
        if self.betas and len(self.betas) != len(self.deltas):
            raise ValueError("betas must be empty or aligned with deltas")
        for n, delta in enumerate(self.deltas):
            if self.betas:
                floor = self.betas[n] * self.continuous_payoff
                if delta < floor - 1e-9 * max(1.0, abs(floor)):
                    raise ValueError(
                        f"degradation floor violated at n={n}: "
                        f"delta={delta} < beta*continuous={floor}"
                    )


def degradation_report(rho0: float, t_f: float, nu: float, phi: PayoffSpec) -> DegradationReport:
    """Evaluate the degradation metrics for budgets n = 0 .. n_star inclusive.

    Cross-checks itself: below n_star the state must land in the wait branch
    of the value bound, so the delta recomputed from the pooled-wait formula
    has to agree to 1e-12.
    """
    r_cap = phi.r_cap
    n_star = matching_sense_count(rho0, t_f, nu, r_cap)
    payoff_continuous = continuous_sensing_payoff(rho0, t_f, nu, phi)
    gap = rho0 - (1.0 - nu) * t_f
    deltas = []
    betas = []
    for n in range(n_star + 1):
        bound = value_bound(rho0, t_f, n, phi, nu)
        delta = bound.value - payoff_continuous
        deltas.append(delta)
        if gap > 0:
            shrink = nu ** (n + 1)
            betas.append(shrink / (1.0 - shrink) * ((1.0 - nu) * t_f / gap) - 1.0)
        if n < n_star:
            pooled = (1.0 - nu) / (1.0 - nu ** (n + 1)) * nu ** (n + 1) * t_f
            direct = phi.evaluate(pooled) - payoff_continuous
            if abs(direct - delta) > 1e-12 * max(1.0, abs(direct)):
                raise RuntimeError(
                    f"internal: wait-form delta {direct} disagrees with "
                    f"value-bound delta {delta} at n={n}"
                )
    return DegradationReport(
        n_star=n_star,
        deltas=tuple(deltas),
        betas=tuple(betas),
        continuous_payoff=payoff_continuous,
    )
