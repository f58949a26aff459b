"""Behavioural relations as greatest fixed points over P x P.

This module is the relational side of the cross-check: it never touches
formulae.  A relation is a bit matrix stored row-wise, so ``rows[p]`` is the
mask of all ``q`` with ``(p, q)`` in the relation.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Union

from .fixpoint import greatest_fixpoint
from .lts import LTS

__all__ = [
    "Relation",
    "BaseF",
    "Tilde",
    "CapConst",
    "CapFun",
    "Transformer",
    "Kind",
    "parse_kind",
    "step_F",
    "inverse",
    "apply",
    "gfp_rel",
    "gfp_rel_counted",
    "preorder",
    "random_relation",
    "render_pairs",
    "render_summary",
]


@dataclass(frozen=True)
class Relation:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        if any(r & ~full for r in self.rows):
            raise ValueError("row mask exceeds the process range")

    @classmethod
    def empty(cls, n: int) -> "Relation":
        return cls(n, (0,) * n)

    @classmethod
    def full(cls, n: int) -> "Relation":
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def identity(cls, n: int) -> "Relation":
        return cls(n, tuple(1 << p for p in range(n)))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Relation":
        rows = [0] * n
        for p, q in pairs:
            if not (0 <= p < n and 0 <= q < n):
                raise ValueError(f"pair ({p},{q}) outside 0..{n - 1}")
            rows[p] |= 1 << q
        return cls(n, tuple(rows))

    def __contains__(self, pair: tuple[int, int]) -> bool:
        p, q = pair
        return bool(self.rows[p] >> q & 1)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs())

    def __len__(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def pairs(self) -> list[tuple[int, int]]:
        return [(p, q) for p in range(self.n) for q in range(self.n) if self.rows[p] >> q & 1]

    def _same_dim(self, other: "Relation") -> None:
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __and__(self, other: "Relation") -> "Relation":
        self._same_dim(other)
        return Relation(self.n, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def __or__(self, other: "Relation") -> "Relation":
        self._same_dim(other)
        return Relation(self.n, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __le__(self, other: "Relation") -> bool:
        self._same_dim(other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    @property
    def T(self) -> "Relation":
        return inverse(self)

    def is_reflexive(self) -> bool:
        return all(self.rows[p] >> p & 1 for p in range(self.n))

    def is_symmetric(self) -> bool:
        return self == inverse(self)

    def is_transitive(self) -> bool:
        for p in range(self.n):
            reach = 0
            for q in range(self.n):
                if self.rows[p] >> q & 1:
                    reach |= self.rows[q]
            if reach & ~self.rows[p]:
                return False
        return True


def inverse(s: Relation) -> Relation:
    rows = [0] * s.n
    for p in range(s.n):
        for q in range(s.n):
            if s.rows[p] >> q & 1:
                rows[q] |= 1 << p
    return Relation(s.n, tuple(rows))


def _check(lts: LTS, s: Relation) -> None:
    if s.n != lts.n_states:
        raise ValueError(f"dimension mismatch: relation over {s.n}, LTS has {lts.n_states}")


def step_F(lts: LTS, s: Relation) -> Relation:
    """One application of the simulation functional.

    ``(p, q)`` is kept iff every move ``p -a-> p'`` is matched by some
    ``q -a-> q'`` with ``(p', q')`` in ``s``.
    """
    _check(lts, s)
    n = lts.n_states
    moves: list[list[tuple[str, int]]] = [[] for _ in range(n)]
    for src, a, dst in lts.transitions:
        moves[src].append((a, dst))
    rows = [0] * n
    for p in range(n):
        for q in range(n):
            # every p -a-> p2 needs some q -a-> q2 with q2 in row p2 of s
            if all(lts.succ_mask(q, a) & s.rows[p2] for a, p2 in moves[p]):
                rows[p] |= 1 << q
    return Relation(lts.n_states, tuple(rows))


@dataclass(frozen=True)
class BaseF:
    def __str__(self) -> str:
        return "F"


@dataclass(frozen=True)
class Tilde:
    inner: "Transformer"

    def __str__(self) -> str:
        return f"~({self.inner})"


@dataclass(frozen=True)
class CapConst:
    inner: "Transformer"
    const: Relation

    def __str__(self) -> str:
        return f"({self.inner} & <{len(self.const)} pairs>)"


@dataclass(frozen=True)
class CapFun:
    left: "Transformer"
    right: "Transformer"

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


Transformer = Union[BaseF, Tilde, CapConst, CapFun]


def apply(t: Transformer, lts: LTS, s: Relation) -> Relation:
    _check(lts, s)
    if isinstance(t, BaseF):
        return step_F(lts, s)
    if isinstance(t, Tilde):
        return inverse(apply(t.inner, lts, inverse(s)))
    if isinstance(t, CapConst):
        return apply(t.inner, lts, s) & t.const
    if isinstance(t, CapFun):
        return apply(t.left, lts, s) & apply(t.right, lts, s)
    raise TypeError(f"not a transformer: {t!r}")


def gfp_rel_counted(t: Transformer, lts: LTS) -> tuple[Relation, int]:
    """Greatest fixed point of ``t`` and the number of applications used."""
    n = lts.n_states
    return greatest_fixpoint(lambda s: apply(t, lts, s), Relation.full(n), max_iter=n * n + 1)


def gfp_rel(t: Transformer, lts: LTS) -> Relation:
    return gfp_rel_counted(t, lts)[0]


@dataclass(frozen=True)
class Kind:
    """One of ``sim``, ``opsim``, ``bisim``, ``simeq``, ``nsim:N``, ``nopsim:N``."""

    name: str
    n: int = 1

    def __post_init__(self) -> None:
        if self.name not in ("sim", "opsim", "bisim", "simeq", "nsim", "nopsim"):
            raise ValueError(f"unknown relation kind {self.name!r}")
        if self.n < 1:
            raise ValueError(f"nesting depth must be >= 1, got {self.n}")
        if self.name not in ("nsim", "nopsim") and self.n != 1:
            raise ValueError(f"{self.name} takes no nesting depth")

    def __str__(self) -> str:
        return f"{self.name}:{self.n}" if self.name in ("nsim", "nopsim") else self.name

    def normalized(self) -> "Kind":
        """Collapse ``nsim:1``/``nopsim:1`` onto ``sim``/``opsim``."""
        if self.n == 1 and self.name in ("nsim", "nopsim"):
            return Kind(self.name[1:])
        return self


_KIND = re.compile(r"^(sim|opsim|bisim|simeq)$|^(nsim|nopsim):(-?\d+)$")


def parse_kind(text: str) -> Kind:
    m = _KIND.match(text.strip())
    if m is None:
        raise ValueError(f"cannot parse relation kind {text!r}")
    if m.group(1):
        return Kind(m.group(1))
    return Kind(m.group(2), int(m.group(3)))


@lru_cache(maxsize=512)
def _nested(lts: LTS, depth: int) -> tuple[tuple[Relation, ...], tuple[Relation, ...]]:
    """``sims[k]``, ``opsims[k]`` for k = 1..depth (index 0 unused)."""
    if depth <= 1:
        sims = (Relation.empty(lts.n_states), gfp_rel(BaseF(), lts))
        opsims = (Relation.empty(lts.n_states), gfp_rel(Tilde(BaseF()), lts))
        return sims, opsims
    sims, opsims = _nested(lts, depth - 1)
    k = depth - 1
    return (
        sims + (gfp_rel(CapConst(BaseF(), opsims[k]), lts),),
        opsims + (gfp_rel(CapConst(Tilde(BaseF()), sims[k]), lts),),
    )


def preorder(kind: Kind | str, lts: LTS) -> Relation:
    """The behavioural relation named by ``kind``, computed relationally."""
    if isinstance(kind, str):
        kind = parse_kind(kind)
    k = kind.normalized()
    if k.name == "bisim":
        return gfp_rel(CapFun(BaseF(), Tilde(BaseF())), lts)
    if k.name == "simeq":
        sims, opsims = _nested(lts, 1)
        return sims[1] & opsims[1]
    if k.name in ("sim", "opsim"):
        k = Kind("n" + k.name, 1)
    sims, opsims = _nested(lts, k.n)
    return sims[k.n] if k.name == "nsim" else opsims[k.n]


def transformer_for(kind: Kind | str, lts: LTS) -> Transformer | None:
    """The functional whose gfp is ``kind``; ``None`` for ``simeq``, which
    is an intersection of two fixed points rather than a fixed point."""
    if isinstance(kind, str):
        kind = parse_kind(kind)
    k = kind.normalized()
    if k.name == "sim":
        return BaseF()
    if k.name == "opsim":
        return Tilde(BaseF())
    if k.name == "bisim":
        return CapFun(BaseF(), Tilde(BaseF()))
    if k.name == "simeq":
        return None
    sims, opsims = _nested(lts, k.n - 1)
    if k.name == "nsim":
        return CapConst(BaseF(), opsims[k.n - 1])
    return CapConst(Tilde(BaseF()), sims[k.n - 1])


def random_relation(n: int, rng: random.Random, p: float = 0.5) -> Relation:
    """Each pair included independently with probability ``p``."""
    return Relation(n, tuple(
        sum(1 << q for q in range(n) if rng.random() < p) for _ in range(n)
    ))


def render_pairs(r: Relation, names=None) -> str:
    fmt = (lambda p: names[p]) if names else str
    return "".join(f"{fmt(p)} {fmt(q)}\n" for p, q in r.pairs())


def render_summary(r: Relation, names=None) -> str:
    fmt = (lambda p: names[p]) if names else str
    out = []
    for p in range(r.n):
        qs = [fmt(q) for q in range(r.n) if r.rows[p] >> q & 1]
        out.append(f"{fmt(p)}: {' '.join(qs)}".rstrip() + "\n")
    return "".join(out)
