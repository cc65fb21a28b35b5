"""Shared generators for the test suite.

Two kinds of random systems appear throughout: systems induced by a
random ranking distribution, which are representable by construction
and come with their own ground truth, and systems with independently
random cells, which are valid but usually not representable.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest

from bwrum import (
    BWSystem,
    RankingDistribution,
    SeededRng,
    new_system,
    random_distribution,
    system_from_distribution,
)
from bwrum.core import choice_subsets, ordered_pairs


def random_induced(
    n: int, seed: int, support_size: int | None = None
) -> tuple[RankingDistribution, BWSystem]:
    """A random distribution and the system it induces (always representable)."""
    rng = SeededRng(seed)
    dist = random_distribution(n, rng, support_size=support_size)
    return dist, system_from_distribution(dist)


def random_valid_system(n: int, rng: SeededRng, resolution: int = 1000) -> BWSystem:
    """A valid system with independently random cells; rarely representable."""
    entries = []
    for mask in choice_subsets(n):
        pairs = list(ordered_pairs(mask))
        weights = [1 + rng.randrange(resolution) for _ in pairs]
        total = sum(weights)
        for (a, b), w in zip(pairs, weights):
            entries.append((mask, (a, b), Fraction(w, total)))
    return new_system(n, entries)


@pytest.fixture(scope="session")
def generated_battery() -> list[tuple[int, RankingDistribution, BWSystem]]:
    """105 seeded distribution/system pairs shared by several slow tests."""
    out = []
    for n, count in ((3, 40), (4, 40), (5, 25)):
        rng = SeededRng(987600 + n)
        for _ in range(count):
            size = 1 + rng.randrange(factorial(n))
            dist = random_distribution(n, rng, support_size=size)
            out.append((n, dist, system_from_distribution(dist)))
    return out
