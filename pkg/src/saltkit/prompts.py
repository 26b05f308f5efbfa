"""Prompt templates for the decompiler and the fixer models.

Templates live as data files under ``templates/``; the instruction sentence
of each is kept byte-exact and the per-call material (SALT text, compiler
errors, code) is bound through ``{placeholder}`` slots.
"""

from __future__ import annotations

import hashlib
import re
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional

ROLES = ("decompile", "cef", "bef", "rename", "comment")
PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


class UnboundPlaceholder(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unbound placeholder {{{self.name}}}"


class UnknownRole(KeyError):
    pass


@lru_cache(maxsize=None)
def _load(role: str, directory: Optional[str]) -> str:
    if role not in ROLES:
        raise UnknownRole(role)
    if directory is None:
        return resources.files("saltkit").joinpath("templates").joinpath(f"{role}.txt").read_text(encoding="utf-8")
    return (Path(directory) / f"{role}.txt").read_text(encoding="utf-8")


def template(role: str, directory: Optional[str] = None) -> str:
    return _load(role, None if directory is None else str(directory))


def placeholders(role: str, directory: Optional[str] = None) -> list[str]:
    return PLACEHOLDER.findall(template(role, directory))


def checksum(role: str, directory: Optional[str] = None) -> str:
    return hashlib.sha256(template(role, directory).encode("utf-8")).hexdigest()


def get_prompt(role: str, bindings: Mapping[str, str], directory: Optional[str] = None) -> str:
    text = template(role, directory)

    def sub(m: re.Match) -> str:
        name = m.group(1)
        if name not in bindings:
            raise UnboundPlaceholder(name)
        return str(bindings[name])

    # single pass: bound values are never rescanned for braces
    return PLACEHOLDER.sub(sub, text)
