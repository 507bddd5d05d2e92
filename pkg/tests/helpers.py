"""Deterministic random generators shared across the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from subsetcurrents import Subgroup, Word
from subsetcurrents.cylinders import RationalCurrent


def random_word(rng: random.Random, rank: int = 2, max_len: int = 5) -> Word:
    length = rng.randint(1, max_len)
    letters: list[int] = []
    while len(letters) < length:
        m = rng.choice([i for i in range(-rank, rank + 1) if i])
        if letters and m == -letters[-1]:
            continue
        letters.append(m)
    return Word(rank, tuple(letters))


def random_subgroup(rng: random.Random, rank: int = 2, max_gens: int = 3,
                    max_len: int = 5) -> Subgroup:
    count = rng.randint(1, max_gens)
    return Subgroup([random_word(rng, rank, max_len) for _ in range(count)],
                    rank)


def random_current(rng: random.Random, rank: int = 2, max_terms: int = 3,
                   max_len: int = 4) -> RationalCurrent:
    terms = [(Fraction(rng.randint(1, 3), rng.randint(1, 3)),
              random_subgroup(rng, rank, max_len=max_len))
             for _ in range(rng.randint(1, max_terms))]
    return RationalCurrent(terms, rank)
