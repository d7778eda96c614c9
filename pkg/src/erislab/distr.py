"""Finite-support discrete subdistributions with exact rational weights.

All weights are `fractions.Fraction`; nothing in this module touches
floating point.  A subdistribution may have mass strictly below 1; the
deficit models divergence.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Generic, Hashable, Iterable, Iterator, Mapping, TypeVar

T = TypeVar("T", bound=Hashable)
U = TypeVar("U", bound=Hashable)

ZERO = Fraction(0)
ONE = Fraction(1)

__all__ = ["Distr", "dret", "dbind", "dmap", "mass", "restrict", "pr",
           "expectation", "pgl", "uniform", "ZERO", "ONE"]


class Distr(Generic[T]):
    """Immutable map from outcomes to positive rational weights, total ≤ 1."""

    __slots__ = ("_w",)

    def __init__(self, weights: Mapping[T, Fraction] | Iterable[tuple[T, Fraction]] = ()):
        items = weights.items() if isinstance(weights, Mapping) else weights
        w: dict[T, Fraction] = {}
        for k, p in items:
            p = Fraction(p)
            if p < 0:
                raise ValueError(f"negative weight {p} for {k!r}")
            if p == 0:
                continue
            w[k] = w.get(k, ZERO) + p
        total = sum(w.values(), ZERO)
        if total > 1:
            raise ValueError(f"total mass {total} exceeds 1")
        self._w = w

    @staticmethod
    def ret(x: T) -> "Distr[T]":
        return dret(x)

    def weight(self, x: T) -> Fraction:
        return self._w.get(x, ZERO)

    def support(self) -> list[T]:
        return list(self._w.keys())

    def items(self) -> Iterator[tuple[T, Fraction]]:
        return iter(self._w.items())

    def mass(self) -> Fraction:
        return sum(self._w.values(), ZERO)

    def is_zero(self) -> bool:
        return not self._w

    def bind(self, f: Callable[[T], "Distr[U]"]) -> "Distr[U]":
        return dbind(self, f)

    def map(self, f: Callable[[T], U]) -> "Distr[U]":
        return dmap(self, f)

    def restrict(self, p: Callable[[T], bool]) -> "Distr[T]":
        return restrict(self, p)

    def pr(self, p: Callable[[T], bool]) -> Fraction:
        return pr(self, p)

    def expectation(self, f: Callable[[T], Fraction]) -> Fraction:
        return expectation(self, f)

    def __eq__(self, other) -> bool:
        return isinstance(other, Distr) and self._w == other._w

    def __hash__(self):
        return hash(frozenset(self._w.items()))

    def __len__(self) -> int:
        return len(self._w)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {p}" for k, p in self._w.items())
        return f"Distr({{{inner}}})"


def dret(x: T) -> Distr[T]:
    """Point mass at x."""
    return Distr(((x, ONE),))


def dbind(mu: Distr[T], f: Callable[[T], Distr[U]]) -> Distr[U]:
    """Monadic bind: weight of y is sum over x of mu(x) * f(x)(y)."""
    acc: dict[U, Fraction] = {}
    for x, p in mu.items():
        for y, q in f(x).items():
            acc[y] = acc.get(y, ZERO) + p * q
    return Distr(acc)


def dmap(mu: Distr[T], f: Callable[[T], U]) -> Distr[U]:
    acc: dict[U, Fraction] = {}
    for x, p in mu.items():
        y = f(x)
        acc[y] = acc.get(y, ZERO) + p
    return Distr(acc)


def mass(mu: Distr[T]) -> Fraction:
    return mu.mass()


def restrict(mu: Distr[T], p: Callable[[T], bool]) -> Distr[T]:
    """Keep the weights of outcomes satisfying p, drop the rest."""
    return Distr({x: w for x, w in mu.items() if p(x)})


def pr(mu: Distr[T], p: Callable[[T], bool]) -> Fraction:
    """Probability of a predicate: mass of the restriction to p."""
    return restrict(mu, p).mass()


def expectation(mu: Distr[T], f: Callable[[T], Fraction]) -> Fraction:
    return sum((w * Fraction(f(x)) for x, w in mu.items()), ZERO)


def pgl(mu: Distr[T], eps: Fraction, p: Callable[[T], bool]) -> bool:
    """Graded lifting: the probability of violating p is at most eps."""
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("error grade must be nonnegative")
    return pr(mu, lambda x: not p(x)) <= eps


def uniform(n: int) -> Distr[int]:
    """Uniform distribution over {0, ..., n}."""
    if n < 0:
        raise ValueError("uniform bound must be a natural")
    w = Fraction(1, n + 1)
    return Distr((i, w) for i in range(n + 1))
