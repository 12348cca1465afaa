"""Shared fixtures and helpers for the test suite."""

import json

import pytest

from intermittent_pursuit import GameConfig, PayoffSpec, Vec2


def make_config(
    nu: float = 0.7,
    r_cap: float = 0.1,
    rho0: float = 1.0,
    t_f: float = 5.0,
    n: int = 2,
    kind: str = "hinge",
    seed: int = 0,
) -> GameConfig:
    """Standard head-to-head layout: pursuer at origin, evader on +x axis."""
    return GameConfig(
        nu=nu,
        r_cap=r_cap,
        x_p0=Vec2(0.0, 0.0),
        x_e0=Vec2(rho0, 0.0),
        t_f=t_f,
        n=n,
        phi=PayoffSpec(kind=kind, r_cap=r_cap),
        seed=seed,
    )


@pytest.fixture
def wait_region_config() -> GameConfig:
    # rho=1, tau=5, ell=2 at nu=0.7 sits strictly inside the wait region
    return make_config()


@pytest.fixture
def config_json(tmp_path):
    """Writes a config dict to a temp JSON file, returns the path as str."""

    def _write(payload: dict, name: str = "game.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return _write


def default_config_payload(**overrides) -> dict:
    payload = {
        "nu": 0.7,
        "r_cap": 0.1,
        "x_p0": [0.0, 0.0],
        "x_e0": [1.0, 0.0],
        "t_f": 5.0,
        "n": 2,
        "phi": {"kind": "hinge"},
        "seed": 42,
    }
    payload.update(overrides)
    return payload
