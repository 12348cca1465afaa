"""Geometric primitives, configuration, and payoff functions for the pursuit game.

Everything downstream works in the nondimensional frame: the pursuer's top
speed is 1, the evader's is ``nu`` with 0 < nu < 1, and capture occurs as soon
as the players come within ``r_cap`` of each other.  ``normalize_speeds`` maps
a game stated in physical units into this frame by dilating time with the
pursuer's top speed; lengths are unchanged.

All types here are immutable values and safe to share between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

__all__ = [
    "DegenerateDirectionError",
    "SlowPursuerError",
    "BudgetViolationError",
    "EnumerationCapError",
    "RegionNotCoveredError",
    "Vec2",
    "PAYOFF_KINDS",
    "PayoffSpec",
    "GameConfig",
    "RawSpeeds",
    "normalize_speeds",
    "physical_time",
    "physical_velocity",
    "line_of_sight",
    "perpendicular",
    "fmt_g",
]


def fmt_g(value: float) -> str:
    """Compact 9-significant-digit rendering used by all emitters."""
    return format(float(value), ".9g")


class DegenerateDirectionError(ValueError):
    """A direction was requested between coincident points."""


class SlowPursuerError(ValueError):
    """The evader is at least as fast as the pursuer; the game is degenerate."""


class BudgetViolationError(RuntimeError):
    """A pursuer strategy tried to sense with no sensing budget left."""


class EnumerationCapError(ValueError):
    """Exact enumeration was requested over too many randomized intervals."""


class RegionNotCoveredError(ValueError):
    """A closed-form result was queried outside its region of validity."""


@dataclass(frozen=True, slots=True)
class Vec2:
    """Immutable planar vector with finite float components."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"components must be finite, got ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


PAYOFF_KINDS = ("hinge", "quadratic-above-capture")


@dataclass(frozen=True, slots=True)
class PayoffSpec:
    """Terminal payoff as a function of the final inter-player distance.

    Both kinds vanish on [0, r_cap] and are convex and non-decreasing above
    it: ``hinge`` is max(x - r_cap, 0) and ``quadratic-above-capture`` is its
    square.  The payoff is what the evader maximizes and the pursuer
    minimizes; capture forces it to 0.
    """

    kind: str
    r_cap: float

    def __post_init__(self):
        if self.kind not in PAYOFF_KINDS:
            raise ValueError(f"unknown payoff kind {self.kind!r}; expected one of {PAYOFF_KINDS}")
        object.__setattr__(self, "r_cap", float(self.r_cap))
        if not (math.isfinite(self.r_cap) and self.r_cap > 0):
            raise ValueError(f"r_cap must be positive and finite, got {self.r_cap}")

    def evaluate(self, distance: float) -> float:
        if distance < 0:
            raise ValueError(f"distance must be nonnegative, got {distance}")
        excess = max(distance - self.r_cap, 0.0)
        if self.kind == "hinge":
            return excess
        return excess * excess


def _vec_from(value, key: str) -> Vec2:
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise ValueError(f"{key} must be a pair [x, y], got {value!r}")
    return Vec2(float(value[0]), float(value[1]))


_CONFIG_KEYS = ("nu", "r_cap", "x_p0", "x_e0", "t_f", "n", "phi", "seed")


@dataclass(frozen=True, slots=True)
class GameConfig:
    """Complete description of one game instance in the nondimensional frame.

    ``n`` is the sensing budget: the maximum number of remote-sensor requests
    the pursuer may issue after the free time-0 observation.  ``seed`` feeds
    every stream of randomness derived for this game.
    """

    nu: float
    r_cap: float
    x_p0: Vec2
    x_e0: Vec2
    t_f: float
    n: int
    phi: PayoffSpec
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.nu < 1.0):
            raise ValueError(f"nu must lie strictly in (0, 1), got {self.nu}")
        if not (math.isfinite(self.r_cap) and self.r_cap > 0):
            raise ValueError(f"r_cap must be positive and finite, got {self.r_cap}")
        if not isinstance(self.x_p0, Vec2) or not isinstance(self.x_e0, Vec2):
            raise ValueError("x_p0 and x_e0 must be Vec2 instances")
        if not (math.isfinite(self.t_f) and self.t_f >= 0):
            raise ValueError(f"t_f must be nonnegative and finite, got {self.t_f}")
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"n must be a nonnegative integer, got {self.n!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an integer in [0, 2**64), got {self.seed!r}")
        if self.phi.r_cap != self.r_cap:
            raise ValueError(
                f"phi.r_cap ({self.phi.r_cap}) must equal the game's r_cap ({self.r_cap})"
            )

    @property
    def initial_distance(self) -> float:
        return self.x_p0.dist(self.x_e0)

    @classmethod
    def from_dict(cls, data: dict) -> "GameConfig":
        """Build a config from the JSON object layout used by the CLI."""
        if not isinstance(data, dict):
            raise ValueError(f"config must be a JSON object, got {type(data).__name__}")
        unknown = sorted(set(data) - set(_CONFIG_KEYS))
        if unknown:
            raise ValueError(f"unknown config keys: {unknown}")
        missing = sorted(k for k in _CONFIG_KEYS if k != "seed" and k not in data)
        if missing:
            raise ValueError(f"missing config keys: {missing}")
        phi_obj = data["phi"]
        if not isinstance(phi_obj, dict) or "kind" not in phi_obj:
            raise ValueError("phi must be an object with a 'kind' key")
        extra = sorted(set(phi_obj) - {"kind"})
        if extra:
            raise ValueError(f"unknown phi keys: {extra}")
        r_cap = float(data["r_cap"])
        return cls(
            nu=float(data["nu"]),
            r_cap=r_cap,
            x_p0=_vec_from(data["x_p0"], "x_p0"),
            x_e0=_vec_from(data["x_e0"], "x_e0"),
            t_f=float(data["t_f"]),
            n=int(data["n"]),
            phi=PayoffSpec(kind=phi_obj["kind"], r_cap=r_cap),
            seed=int(data.get("seed", 0)),
        )

    def to_dict(self) -> dict:
        return {
            "nu": self.nu,
            "r_cap": self.r_cap,
            "x_p0": [self.x_p0.x, self.x_p0.y],
            "x_e0": [self.x_e0.x, self.x_e0.y],
            "t_f": self.t_f,
            "n": self.n,
            "phi": {"kind": self.phi.kind},
            "seed": self.seed,
        }


class RawSpeeds(NamedTuple):
    """Physical top speeds of the two players before nondimensionalization."""

    v_p_max: float
    v_e_max: float


def normalize_speeds(raw: RawSpeeds, config: GameConfig) -> GameConfig:
    """Rescale a physically-parameterized game into the unit-speed frame.

    ``config.t_f`` is interpreted as a physical duration; the returned config
    has the time axis dilated by c = v_p_max (t_bar = c * t) so the pursuer's
    top speed becomes 1 and the evader's becomes v_e_max / v_p_max.  Lengths
    are untouched, so positions carry over as-is.
    """
    if not (raw.v_p_max > 0 and raw.v_e_max > 0):
        raise ValueError(f"speeds must be positive, got {raw}")
    if raw.v_e_max >= raw.v_p_max:
        raise SlowPursuerError(
            f"evader top speed {raw.v_e_max} must be strictly below "
            f"pursuer top speed {raw.v_p_max}"
        )
    return replace(config, nu=raw.v_e_max / raw.v_p_max, t_f=raw.v_p_max * config.t_f)


def physical_time(t_bar: float, raw: RawSpeeds) -> float:
    """Map a nondimensional time back to physical units."""
    return t_bar / raw.v_p_max


def physical_velocity(v_bar: Vec2, raw: RawSpeeds) -> Vec2:
    """Map a nondimensional velocity back to physical units."""
    return v_bar * raw.v_p_max


def line_of_sight(x_p: Vec2, x_e: Vec2) -> Vec2:
    """Unit vector pointing from the pursuer's position to the evader's."""
    d = x_e - x_p
    norm = d.norm()
    if norm == 0.0:
        raise DegenerateDirectionError("line of sight undefined for coincident points")
    return d * (1.0 / norm)


def perpendicular(r: Vec2, orientation: int) -> Vec2:
    """Unit vector perpendicular to the unit vector ``r``.

    ``orientation`` +1 rotates counterclockwise ((1,0) -> (0,1)), -1 clockwise.
    """
    if orientation not in (1, -1):
        raise ValueError(f"orientation must be +1 or -1, got {orientation!r}")
    if abs(r.norm() - 1.0) > 1e-9:
        raise ValueError(f"r must be a unit vector, got norm {r.norm()}")
    return Vec2(-r.y * orientation, r.x * orientation)
