"""Prefix generation helpers, factor complexity and letter frequencies.

This is the evidence layer: finite-prefix computations that verify
certificates and attach empirical witnesses to otherwise undecided inputs.
Complexity counts over a finite prefix are lower bounds on the true factor
complexity and are labelled as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .words import MorphicSpec

VALIDITY_FACTOR = 4  # required ratio between prefix length and window size


@dataclass(frozen=True)
class ComplexityProfile:
    """p(n) for 1 <= n <= n_max, counted over a prefix of fixed length."""

    n_max: int
    counts: tuple[int, ...]
    prefix_length: int

    @property
    def validity_margin(self) -> int:
        return self.prefix_length - self.n_max

    def p(self, n: int) -> int:
        return self.counts[n - 1]

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "counts": list(self.counts),
            "prefix_length": self.prefix_length,
            "validity_margin": self.validity_margin,
            "lower_bound_only": True,
        }


def prefix_equal(first, second, n: int) -> bool:
    """Whether two generators agree on their first n output letters.

    Accepts anything with a ``prefix(n) -> tuple[str, ...]`` method
    (morphic specs, uniform representations, block morphisms).
    """
    return first.prefix(n) == second.prefix(n)


def factor_complexity(spec, n_max: int = 30, prefix_length: int = 10_000) -> ComplexityProfile:
    """Count distinct factors of each length up to n_max in a prefix.

    The prefix must be at least four times as long as the window, a margin
    against the worst undercounting near the end of the prefix.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    if prefix_length < VALIDITY_FACTOR * n_max:
        raise ValueError(
            f"prefix length {prefix_length} is too short for windows up to {n_max}; "
            f"need at least {VALIDITY_FACTOR * n_max}"
        )
    word = spec.prefix(prefix_length)
    counts = []
    for n in range(1, n_max + 1):
        counts.append(len({word[i : i + n] for i in range(len(word) - n + 1)}))
    return ComplexityProfile(n_max, tuple(counts), prefix_length)


def sturmian_witness(
    spec, n_max: int = 30, prefix_length: int = 10_000
) -> tuple[bool, ComplexityProfile]:
    """Evidence (not proof) of Sturmian complexity: p(n) == n + 1 up to n_max."""
    profile = factor_complexity(spec, n_max, prefix_length)
    ok = all(profile.p(n) == n + 1 for n in range(1, n_max + 1))
    return ok, profile


def empirical_frequencies(spec: MorphicSpec, prefix_length: int) -> tuple[Fraction, ...]:
    """Letter counts over a prefix, divided by its length, in output-alphabet
    order."""
    if prefix_length < 1:
        raise ValueError("prefix length must be positive")
    word = spec.prefix(prefix_length)
    letters = spec.output_alphabet.letters
    counts = {tok: 0 for tok in letters}
    for tok in word:
        counts[tok] += 1
    return tuple(Fraction(counts[tok], prefix_length) for tok in letters)
