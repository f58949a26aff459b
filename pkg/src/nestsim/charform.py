"""Characteristic declarations for the simulation family.

For each relation kind we build a nested declaration system over the index
set ``I = P`` whose target level's greatest fixed point, read row-wise,
is exactly that relation.  ``phi`` turns a relation into an interpretation
(row ``p`` becomes the set assigned to ``X_p``) and ``phi_inverse`` undoes it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .declarations import Declaration, NestedSystem, derived_function, elaborate
from .logic import And, Box, ConstName, ConstantEnv, Diamond, Interpretation, NuConst, Var, conj, disj
from .lts import LTS, members
from .relations import Kind, Relation, Transformer, apply, parse_kind, random_relation

__all__ = [
    "CharSystem",
    "phi",
    "phi_inverse",
    "decl_sim",
    "decl_opsim",
    "decl_bisim",
    "decl_simeq",
    "char_system",
    "characterized_relation",
    "expresses_check",
    "expresses_witness",
]


@dataclass(frozen=True)
class CharSystem:
    system: NestedSystem
    target_level: int

    def __post_init__(self) -> None:
        if not 0 <= self.target_level < len(self.system):
            raise ValueError(f"target level {self.target_level} outside the system")

    @property
    def target(self) -> Declaration:
        return self.system[self.target_level]

    def constant(self, p: int) -> ConstName:
        """The constant whose meaning is the characteristic set of ``p``."""
        return ConstName(self.target_level, p)


def phi(s: Relation) -> dict[int, int]:
    return {p: row for p, row in enumerate(s.rows)}


def phi_inverse(sigma: Interpretation, n: int | None = None) -> Relation:
    if n is None:
        n = len(sigma)
    if sorted(sigma) != list(range(n)):
        raise ValueError("interpretation is not indexed by the process set")
    return Relation(n, tuple(sigma[p] for p in range(n)))


def _level(d: Declaration, level: int) -> Declaration:
    return Declaration(level, d.body)


def decl_sim(lts: LTS, level: int = 0) -> Declaration:
    """``X_p = AND over moves p -a-> p' of <a>X_p'``."""
    return Declaration(level, {
        p: conj(Diamond(a, Var(q)) for a, q in lts.out(p))
        for p in lts.processes
    })


def decl_opsim(lts: LTS, level: int = 0) -> Declaration:
    """``X_p = AND over a of [a](OR over p -a-> p' of X_p')``."""
    return Declaration(level, {
        p: conj(
            Box(a, disj(Var(q) for q in members(lts.succ_mask(p, a))))
            for a in lts.alphabet
        )
        for p in lts.processes
    })


def decl_bisim(lts: LTS, level: int = 0) -> Declaration:
    sim, opsim = decl_sim(lts), decl_opsim(lts)
    return Declaration(level, {p: And(sim.body[p], opsim.body[p]) for p in lts.processes})


def decl_simeq(lts: LTS) -> CharSystem:
    top = Declaration(2, {
        p: And(NuConst(ConstName(0, p)), NuConst(ConstName(1, p))) for p in lts.processes
    })
    return CharSystem(NestedSystem((decl_sim(lts, 0), decl_opsim(lts, 1), top)), 2)


def _nested_levels(lts: LTS, upto: int) -> list[Declaration]:
    """Levels ``0..upto`` of the interleaved nested-simulation system.

    Level ``2i-2`` characterizes i-nested simulation and level ``2i-1`` its
    inverse; each new level conjoins the base body with the constant of the
    opposite kind one nesting depth lower.
    """
    sim, opsim = decl_sim(lts), decl_opsim(lts)
    out: list[Declaration] = []
    for level in range(upto + 1):
        base = sim if level % 2 == 0 else opsim
        if level < 2:
            out.append(_level(base, level))
            continue
        # D_(i+1)sim at 2i uses nu D_(i)opsim at 2i-1;
        # D_(i+1)opsim at 2i+1 uses nu D_(i)sim at 2i-2.
        ref = level - 1 if level % 2 == 0 else level - 3
        out.append(Declaration(level, {
            p: And(base.body[p], NuConst(ConstName(ref, p))) for p in lts.processes
        }))
    return out


def char_system(kind: Kind | str, lts: LTS) -> CharSystem:
    if isinstance(kind, str):
        kind = parse_kind(kind)
    k = kind.normalized()
    if k.name == "bisim":
        return CharSystem(NestedSystem((decl_bisim(lts),)), 0)
    if k.name == "simeq":
        return decl_simeq(lts)
    if k.name in ("sim", "nsim"):
        target = 2 * k.n - 2
    else:
        target = 2 * k.n - 1
    return CharSystem(NestedSystem(tuple(_nested_levels(lts, target))), target)


def characterized_relation(cs: CharSystem, lts: LTS, trace: list | None = None) -> Relation:
    """Elaborate ``cs`` and read the target level's solution as a relation."""
    if cs.system.indices != tuple(lts.processes):
        raise ValueError("characteristic systems must be indexed by the process set")
    env = elaborate(cs.system, lts, trace)
    sigma = {p: env[cs.constant(p)] for p in lts.processes}
    return phi_inverse(sigma, lts.n_states)


def _samples(n: int, samples: int, seed: int):
    yield Relation.empty(n)
    yield Relation.full(n)
    rng = random.Random(seed)
    for _ in range(samples):
        yield random_relation(n, rng)


def expresses_witness(
    d: Declaration,
    t: Transformer,
    lts: LTS,
    samples: int = 50,
    seed: int = 0,
    env: ConstantEnv | None = None,
) -> Relation | None:
    """First sampled relation on which ``d`` and ``t`` disagree, or None."""
    f = derived_function(d, lts, env)
    for s in _samples(lts.n_states, samples, seed):
        if apply(t, lts, s) != phi_inverse(f(phi(s)), lts.n_states):
            return s
    return None


def expresses_check(
    d: Declaration,
    t: Transformer,
    lts: LTS,
    samples: int = 50,
    seed: int = 0,
    env: ConstantEnv | None = None,
) -> bool:
    """Sampled test of ``apply(t, S) == phi^-1([[d]](phi(S)))``.

    The empty and full relations are always among the samples.  ``env``
    binds lower-level constants when ``d`` is nested.
    """
    return expresses_witness(d, t, lts, samples, seed, env) is None
