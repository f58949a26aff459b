"""Hand-built classic LTSs and the seeded random corpus."""

from __future__ import annotations

from .lts import LTS, generate_random

DENSITIES = (0.15, 0.3, 0.5)


def two_state_chain() -> LTS:
    """``0 -a-> 1``."""
    return LTS.build(2, [(0, "a", 1)])


def ab_loop() -> LTS:
    """One state with an ``a`` and a ``b`` self-loop."""
    return LTS.build(1, [(0, "a", 0), (0, "b", 0)])


def a_loop() -> LTS:
    return LTS.build(1, [(0, "a", 0)])


def branching_choice() -> LTS:
    """``a.(b+c)`` rooted at 0 versus ``a.b + a.c`` rooted at 4."""
    return LTS.build(9, [
        (0, "a", 1), (1, "b", 2), (1, "c", 3),
        (4, "a", 5), (5, "b", 6), (4, "a", 7), (7, "c", 8),
    ])


def ab_vs_ab_plus_a() -> LTS:
    """``a.b`` rooted at 0 versus ``a.b + a`` rooted at 3."""
    return LTS.build(7, [
        (0, "a", 1), (1, "b", 2),
        (3, "a", 4), (4, "b", 5), (3, "a", 6),
    ])


def classics() -> dict[str, LTS]:
    return {
        "two-state chain": two_state_chain(),
        "one-state a,b-loop": ab_loop(),
        "a.(b+c) vs a.b+a.c": branching_choice(),
        "a.b vs a.b+a": ab_vs_ab_plus_a(),
    }


def random_corpus(
    count: int = 200,
    max_states: int = 8,
    actions: tuple[str, ...] = ("a", "b"),
    densities: tuple[float, ...] = DENSITIES,
    seed: int = 0,
) -> list[tuple[str, LTS]]:
    """``count`` random LTSs cycling through sizes ``1..max_states`` and the
    given densities.  Instance ``k`` uses seed ``seed + k``."""
    out = []
    for k in range(count):
        n = 1 + k % max_states
        dens = densities[k % len(densities)]
        s = seed + k
        out.append((f"random n={n} d={dens} seed={s}", generate_random(n, actions, dens, s)))
    return out


def full_corpus(count: int = 200, seed: int = 0) -> list[tuple[str, LTS]]:
    return list(classics().items()) + random_corpus(count, seed=seed)
