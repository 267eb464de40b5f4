"""Resource budgets for basis computations."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    """Hard budgets; exceeding either raises ResourceLimit, never truncates."""

    max_pairs: int = 100_000
    max_degree: int = 40


DEFAULT_LIMITS = Limits()
