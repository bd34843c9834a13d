"""Global name -> factory registries for tasks, models, tokenizers and metrics.

Each kind owns an independent namespace.  Built-ins are registered once via
``ncc.install_builtins()``; after that the registries are read-only by
convention and safe for concurrent lookup.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable

from .errors import DuplicateName, InvalidName, UnknownName

_NAME_RE = re.compile(r"^[a-z0-9_]+$")


class RegistryKind(Enum):
    TASK = "task"
    MODEL = "model"
    TOKENIZER = "tokenizer"
    METRIC = "metric"


@dataclass(frozen=True)
class RegistryEntry:
    kind: RegistryKind
    name: str
    factory: Callable[..., Any]
    description: str = ""


# insertion order is the registration order, used for listing
_REGISTRIES: dict[RegistryKind, dict[str, RegistryEntry]] = {k: {} for k in RegistryKind}


def register(kind: RegistryKind, name: str, factory: Callable[..., Any], description: str = "") -> None:
    """Register ``factory`` under ``(kind, name)``.

    Raises DuplicateName if the pair is taken and InvalidName if ``name``
    does not match ``[a-z0-9_]+``.
    """
    if not name or not _NAME_RE.match(name):
        raise InvalidName(f"{kind.value} name {name!r} must match [a-z0-9_]+")
    table = _REGISTRIES[kind]
    if name in table:
        raise DuplicateName(f"duplicate {kind.value} name {name!r}")
    table[name] = RegistryEntry(kind, name, factory, description)


def resolve(kind: RegistryKind, name: str) -> Callable[..., Any]:
    """Return the factory registered under ``(kind, name)`` without constructing."""
    table = _REGISTRIES[kind]
    if name not in table:
        raise UnknownName(
            f"unknown {kind.value} {name!r}; available: {list(table)}"
        )
    return table[name].factory


def entries(kind: RegistryKind) -> list[RegistryEntry]:
    """All entries of one kind, in registration order."""
    return list(_REGISTRIES[kind].values())


def names(kind: RegistryKind) -> list[str]:
    return list(_REGISTRIES[kind])


def registry_decorator(kind: RegistryKind, name: str, description: str = ""):
    """Decorator form of :func:`register`, for module-level class definitions."""

    def wrap(factory):
        register(kind, name, factory, description)
        return factory

    return wrap


def _reset_for_tests() -> None:
    # test hook only; production code never unregisters
    for table in _REGISTRIES.values():
        table.clear()
