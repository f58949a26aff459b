"""Finite labelled transition systems.

Processes are dense integer ids ``0..n-1`` and sets of processes are plain
``int`` bitmasks (bit ``p`` set iff process ``p`` is a member).  All set
operations are therefore exact.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

__all__ = [
    "LTS",
    "AutParseError",
    "mask_of",
    "members",
    "parse_aut",
    "render_aut",
    "read_aut",
    "read_names",
    "successors",
    "may",
    "must",
    "generate_random",
]


def mask_of(ps: Iterable[int]) -> int:
    m = 0
    for p in ps:
        m |= 1 << p
    return m


def members(mask: int) -> list[int]:
    """Ascending list of the ids whose bit is set in ``mask``."""
    out = []
    p = 0
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return out


@dataclass(frozen=True)
class LTS:
    """An immutable finite LTS over a fixed alphabet.

    ``transitions`` holds ``(source, label, target)`` triples.  The alphabet
    may contain labels that occur on no transition.
    """

    n_states: int
    alphabet: tuple[str, ...]
    transitions: frozenset[tuple[int, str, int]]
    initial: int = 0
    names: tuple[str, ...] | None = None
    _succ: dict[str, tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n_states < 1:
            raise ValueError("an LTS needs at least one process")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError(f"duplicate action labels in {self.alphabet!r}")
        if any(not a for a in self.alphabet):
            raise ValueError("action labels must be nonempty")
        if not 0 <= self.initial < self.n_states:
            raise ValueError(f"initial state {self.initial} out of range")
        if self.names is not None:
            if len(self.names) != self.n_states:
                raise ValueError("need exactly one display name per process")
            if len(set(self.names)) != len(self.names):
                raise ValueError("display names must be unique")
        acts = set(self.alphabet)
        succ = {a: [0] * self.n_states for a in self.alphabet}
        for src, a, dst in self.transitions:
            if a not in acts:
                raise ValueError(f"transition label {a!r} not in alphabet")
            if not (0 <= src < self.n_states and 0 <= dst < self.n_states):
                raise ValueError(f"transition ({src},{a!r},{dst}) leaves the process range")
            succ[a][src] |= 1 << dst
        object.__setattr__(self, "_succ", {a: tuple(row) for a, row in succ.items()})

    @classmethod
    def build(
        cls,
        n_states: int,
        transitions: Iterable[tuple[int, str, int]],
        alphabet: Iterable[str] = (),
        **kw,
    ) -> "LTS":
        """Construct an LTS, taking the alphabet as the sorted union of
        ``alphabet`` and every label used by a transition."""
        transitions = frozenset(transitions)
        labels = set(alphabet) | {a for _, a, _ in transitions}
        return cls(n_states, tuple(sorted(labels)), transitions, **kw)

    @property
    def full(self) -> int:
        """Mask of the whole process set."""
        return (1 << self.n_states) - 1

    @property
    def processes(self) -> range:
        return range(self.n_states)

    def succ_mask(self, p: int, a: str) -> int:
        try:
            row = self._succ[a]
        except KeyError:
            raise KeyError(f"unknown action {a!r}") from None
        if not 0 <= p < self.n_states:
            raise KeyError(f"unknown process {p!r}")
        return row[p]

    def out(self, p: int) -> Iterator[tuple[str, int]]:
        """All ``(label, target)`` pairs leaving ``p``, in sorted order."""
        for a in self.alphabet:
            for q in members(self._succ[a][p]):
                yield a, q

    def name(self, p: int) -> str:
        return self.names[p] if self.names is not None else str(p)

    def process_id(self, token: str) -> int:
        """Resolve a display name or a decimal id to a process id."""
        if self.names is not None and token in self.names:
            return self.names.index(token)
        try:
            p = int(token)
        except ValueError:
            raise KeyError(f"unknown process {token!r}") from None
        if not 0 <= p < self.n_states:
            raise KeyError(f"unknown process {token!r}")
        return p

    def with_names(self, names: Sequence[str] | None) -> "LTS":
        return LTS(self.n_states, self.alphabet, self.transitions, self.initial,
                   tuple(names) if names is not None else None)

    def with_alphabet(self, extra: Iterable[str]) -> "LTS":
        labels = sorted(set(self.alphabet) | set(extra))
        return LTS(self.n_states, tuple(labels), self.transitions, self.initial, self.names)


def successors(lts: LTS, p: int, a: str) -> set[int]:
    return set(members(lts.succ_mask(p, a)))


def may(lts: LTS, a: str, m: int) -> int:
    """Processes with at least one ``a``-successor in ``m``."""
    try:
        row = lts._succ[a]
    except KeyError:
        raise KeyError(f"unknown action {a!r}") from None
    out = 0
    for p, s in enumerate(row):
        if s & m:
            out |= 1 << p
    return out


def must(lts: LTS, a: str, m: int) -> int:
    """Processes all of whose ``a``-successors lie in ``m``.

    Defined as the complement of ``may`` applied to the complement.
    """
    full = lts.full
    return full & ~may(lts, a, full & ~m)


class AutParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


_HEADER = re.compile(r"^\s*des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_EDGE = re.compile(r'^\s*\(\s*(\d+)\s*,\s*"([^"]*)"\s*,\s*(\d+)\s*\)\s*$')


def parse_aut(text: str, alphabet: Iterable[str] = ()) -> LTS:
    """Parse an Aldebaran ``.aut`` document.

    Extra labels in ``alphabet`` are added to the frozen alphabet even if no
    transition uses them.
    """
    lines = text.splitlines()
    # ignore trailing blank lines only
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise AutParseError(1, "empty document, expected 'des (I,T,S)' header")
    m = _HEADER.match(lines[0])
    if m is None:
        raise AutParseError(1, f"malformed header {lines[0]!r}")
    init, n_trans, n_states = (int(g) for g in m.groups())
    if n_states < 1:
        raise AutParseError(1, "state count must be at least 1")
    if init >= n_states:
        raise AutParseError(1, f"initial state {init} out of range 0..{n_states - 1}")
    body = lines[1:]
    if len(body) != n_trans:
        raise AutParseError(
            len(lines), f"header declares {n_trans} transitions, found {len(body)}"
        )
    trans = []
    for lineno, line in enumerate(body, start=2):
        m = _EDGE.match(line)
        if m is None:
            if line.count('"') == 1:
                raise AutParseError(lineno, "unterminated quoted label")
            raise AutParseError(lineno, f"malformed transition {line!r}")
        src, label, dst = int(m.group(1)), m.group(2), int(m.group(3))
        if not label:
            raise AutParseError(lineno, "empty action label")
        for idx in (src, dst):
            if idx >= n_states:
                raise AutParseError(lineno, f"state {idx} out of range 0..{n_states - 1}")
        trans.append((src, label, dst))
    return LTS.build(n_states, trans, alphabet, initial=init)


def render_aut(lts: LTS) -> str:
    trans = sorted(lts.transitions, key=lambda t: (t[0], t[1], t[2]))
    lines = [f"des ({lts.initial},{len(trans)},{lts.n_states})"]
    lines += [f'({s},"{a}",{d})' for s, a, d in trans]
    return "\n".join(lines) + "\n"


def read_aut(path: str, alphabet: Iterable[str] = ()) -> LTS:
    with open(path, encoding="utf-8") as fh:
        return parse_aut(fh.read(), alphabet)


def read_names(path: str, n_states: int) -> list[str]:
    """Read a sidecar names file: one ``<id> <name>`` pair per line."""
    names: list[str | None] = [None] * n_states
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(None, 1)
            if len(parts) != 2 or not parts[0].isdigit():
                raise ValueError(f"{path}:{lineno}: expected '<id> <name>'")
            p = int(parts[0])
            if p >= n_states:
                raise ValueError(f"{path}:{lineno}: process {p} out of range")
            names[p] = parts[1]
    return [n if n is not None else str(p) for p, n in enumerate(names)]


def generate_random(n_states: int, actions: Sequence[str], density: float, seed: int) -> LTS:
    """Random LTS: each candidate ``(p, a, q)`` is kept with probability
    ``density``.  Deterministic in its arguments."""
    if n_states < 1:
        raise ValueError("n_states must be >= 1")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    rng = random.Random(seed)
    acts = sorted(set(actions))
    trans = [
        (p, a, q)
        for p in range(n_states)
        for a in acts
        for q in range(n_states)
        if rng.random() < density
    ]
    return LTS.build(n_states, trans, acts)
