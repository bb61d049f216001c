"""Session configuration.

Everything lives in a JSON config file except adapter endpoint URLs and
credentials, which may come from MICA_*_ENDPOINT / MICA_API_KEY environment
variables. "mock" as an endpoint selects the deterministic mock adapter.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import StartupFailure

ADAPTER_ROLES = ("classifier", "generator", "perceiver", "describer", "tts")


@dataclass
class SessionConfig:
    recipe_path: str
    tick_period: float = 2.0
    idle_timeout: float = 5.0
    tts_speed: float = 1.0
    context_budget: int = 512
    alert_cooldown: float = 30.0
    adapters: dict = field(default_factory=lambda: {role: "mock" for role in ADAPTER_ROLES})
    trace_dir: str = "."

    def validate(self) -> None:
        if self.tick_period <= 0:
            raise StartupFailure("tick_period must be positive")
        if self.idle_timeout <= 0:
            raise StartupFailure("idle_timeout must be positive")
        if not 0.5 <= self.tts_speed <= 3.0:
            raise StartupFailure("tts_speed must be within [0.5, 3.0]")
        if self.context_budget <= 0:
            raise StartupFailure("context_budget must be positive")
        for role in self.adapters:
            if role not in ADAPTER_ROLES:
                raise StartupFailure(f"unknown adapter role {role!r}")


def load_config(path: str | Path, *, env: dict | None = None) -> SessionConfig:
    env = os.environ if env is None else env
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise StartupFailure(f"cannot read config {path}: {exc}") from exc
    cfg = SessionConfig(
        recipe_path=data["recipe_path"],
        tick_period=data.get("tick_period", 2.0),
        idle_timeout=data.get("idle_timeout", 5.0),
        tts_speed=data.get("tts_speed", 1.0),
        context_budget=data.get("context_budget", 512),
        alert_cooldown=data.get("alert_cooldown", 30.0),
        adapters={role: data.get("adapters", {}).get(role, "mock") for role in ADAPTER_ROLES},
        trace_dir=data.get("trace_dir", "."),
    )
    for role in ADAPTER_ROLES:
        override = env.get(f"MICA_{role.upper()}_ENDPOINT")
        if override:
            cfg.adapters[role] = override
    cfg.validate()
    return cfg
