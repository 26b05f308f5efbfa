"""Run configuration: JSON file, then ``SALTKIT_*`` environment overrides, then flags.

Secrets never live in the file. An endpoint names the environment variable
holding its token (``token_env``) and the client reads it at request time.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional

from .llm import LlmEndpoint
from .salt import DEFAULT_TOKEN_BUDGET

ROLES = ("decompiler", "cef", "bef", "symbols")
SECRET_KEYS = {"api_key", "token", "secret", "password", "authorization"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    endpoints: dict = field(default_factory=dict)  # role -> LlmEndpoint
    compiler: str = "gcc"
    token_budget: Optional[int] = DEFAULT_TOKEN_BUDGET
    jobs: int = 4
    scratch: Optional[Path] = None
    templates: Optional[Path] = None
    dataset: dict = field(default_factory=dict)

    def endpoint(self, role: str) -> LlmEndpoint:
        if role not in ROLES:
            raise ConfigError(f"unknown role {role!r}")
        ep = self.endpoints.get(role)
        if ep is None:
            raise ConfigError(f"no endpoint configured for role {role!r}")
        return ep


def _endpoint(raw: Mapping, where: str) -> LlmEndpoint:
    if not isinstance(raw, Mapping):
        raise ConfigError(f"{where}: expected an object")
    leaked = SECRET_KEYS & {k.lower() for k in raw}
    if leaked:
        raise ConfigError(f"{where}: secrets belong in environment variables, not {sorted(leaked)}")
    unknown = set(raw) - {"base_url", "model", "token_env", "timeout", "max_retries", "temperature"}
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    if "base_url" not in raw or "model" not in raw:
        raise ConfigError(f"{where}: base_url and model are required")
    try:
        return LlmEndpoint(**raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _resolve(p: Optional[str], base: Path) -> Optional[Path]:
    if p is None:
        return None
    path = Path(os.path.expanduser(p))
    return (path if path.is_absolute() else base / path).resolve()


def _positive_int(value, where: str) -> int:
    try:
        n = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: expected an integer, got {value!r}") from None
    if n <= 0:
        raise ConfigError(f"{where}: must be positive")
    return n


def load_config(path: Optional[os.PathLike] = None, env: Optional[Mapping[str, str]] = None) -> Config:
    env = os.environ if env is None else env
    raw: dict = {}
    base = Path.cwd()
    if path is not None:
        p = Path(path)
        try:
            raw = json.loads(p.read_text())
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {p}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{p}: invalid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{p}: top level must be an object")
        base = p.resolve().parent

    # "default" fills every role that is not configured on its own
    eps_raw = dict(raw.get("endpoints", {}))
    env_default = {}
    if "SALTKIT_BASE_URL" in env:
        env_default["base_url"] = env["SALTKIT_BASE_URL"]
    if "SALTKIT_MODEL" in env:
        env_default["model"] = env["SALTKIT_MODEL"]
    if env_default:
        eps_raw["default"] = {**eps_raw.get("default", {}), **env_default}
    endpoints = {}
    for role in ROLES:
        merged = {**eps_raw.get("default", {}), **eps_raw.get(role, {})}
        prefix = f"SALTKIT_{role.upper()}_"
        if prefix + "BASE_URL" in env:
            merged["base_url"] = env[prefix + "BASE_URL"]
        if prefix + "MODEL" in env:
            merged["model"] = env[prefix + "MODEL"]
        if merged:
            endpoints[role] = _endpoint(merged, f"endpoints.{role}")
    unknown = set(eps_raw) - set(ROLES) - {"default"}
    if unknown:
        raise ConfigError(f"endpoints: unknown roles {sorted(unknown)}")

    paths = raw.get("paths", {})
    budget = env.get("SALTKIT_TOKEN_BUDGET", raw.get("token_budget", DEFAULT_TOKEN_BUDGET))
    return Config(
        endpoints=endpoints,
        compiler=env.get("SALTKIT_COMPILER", raw.get("compiler", "gcc")),
        token_budget=None if budget is None else _positive_int(budget, "token_budget"),
        jobs=_positive_int(env.get("SALTKIT_JOBS", raw.get("jobs", 4)), "jobs"),
        scratch=_resolve(paths.get("scratch"), base),
        templates=_resolve(paths.get("templates"), base),
        dataset=dict(raw.get("dataset", {})),
    )


def with_overrides(cfg: Config, **flags) -> Config:
    """Apply command-line values; ``None`` means the flag was not given."""
    given = {k: v for k, v in flags.items() if v is not None}
    if "jobs" in given:
        given["jobs"] = _positive_int(given["jobs"], "--jobs")
    if "token_budget" in given:
        given["token_budget"] = _positive_int(given["token_budget"], "--token-budget")
    return replace(cfg, **given)
