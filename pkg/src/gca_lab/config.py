"""Exhaustive-search budgets.

Defaults finish the full ``verify`` suite in seconds. Each field can be
overridden through a ``GCA_LAB_*`` environment variable, and CLI flags
override the environment.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace

DEFAULT_MAX_CONFIGURATIONS = 1 << 20

_ENV_FIELDS = {
    "max_order": "GCA_LAB_MAX_ORDER",
    "alphabet_size": "GCA_LAB_Q",
    "max_memory": "GCA_LAB_MAX_MEMORY",
    "max_configurations": "GCA_LAB_MAX_CONFIGURATIONS",
    "samples": "GCA_LAB_SAMPLES",
    "seed": "GCA_LAB_SEED",
}


@dataclass(frozen=True)
class Budget:
    """Limits for exhaustive enumeration.

    Attributes:
        max_order: Largest group order included in verification sweeps.
        alphabet_size: Alphabet size q used by the sweeps.
        max_memory: Largest memory set size |T| enumerated.
        max_configurations: Largest configuration space q^|G| enumerated.
        compose_cell_warning: Composed memory size that triggers a warning.
        max_compositions: Largest number of compositions in closure tests.
        samples: Random GCA instances drawn by the composition suite.
        seed: Seed for every random draw.
    """

    max_order: int = 6
    alphabet_size: int = 2
    max_memory: int = 2
    max_configurations: int = DEFAULT_MAX_CONFIGURATIONS
    compose_cell_warning: int = 20
    max_compositions: int = 2_000_000
    samples: int = 500
    seed: int = 0

    def __post_init__(self) -> None:
        if self.alphabet_size < 2:
            raise ValueError("alphabet_size must be at least 2")
        if self.max_order < 1:
            raise ValueError("max_order must be positive")
        if self.max_memory < 0:
            raise ValueError("max_memory must be non-negative")

    @classmethod
    def from_env(cls, **overrides: int | None) -> Budget:
        """Build a budget from defaults, environment, then explicit overrides.

        Args:
            **overrides: Field values; ``None`` entries are ignored.

        Returns:
            The resulting Budget.

        Raises:
            ValueError: If an environment value is not an integer.
        """
        values: dict[str, int] = {}
        for field_name, env_name in _ENV_FIELDS.items():
            raw = os.environ.get(env_name)
            if raw:
                try:
                    values[field_name] = int(raw)
                except ValueError:
                    raise ValueError(f"{env_name} must be an integer, got {raw!r}") from None
        values.update({k: v for k, v in overrides.items() if v is not None})
        return replace(cls(), **values)

    def to_dict(self) -> dict:
        """Convert to dictionary."""
        return asdict(self)
