"""Descending Kleene iteration on finite lattices."""

from __future__ import annotations

from typing import Callable, TypeVar

T = TypeVar("T")


def greatest_fixpoint(f: Callable[[T], T], top: T, max_iter: int | None = None) -> tuple[T, int]:
    """Iterate ``f`` from ``top`` until two successive values are equal.

    ``f`` must be monotone on a finite lattice whose top element is ``top``;
    the chain ``top >= f(top) >= f(f(top)) >= ...`` then stabilizes at the
    greatest fixed point.  Returns ``(fixed_point, applications_of_f)``.
    """
    x = top
    n = 0
    while True:
        y = f(x)
        n += 1
        if y == x:
            return x, n
        if max_iter is not None and n >= max_iter:
            raise RuntimeError(f"no fixed point after {n} iterations; is f monotone?")
        x = y
