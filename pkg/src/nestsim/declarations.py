"""Declarations, their greatest fixed points, and nested declaration systems."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .fixpoint import greatest_fixpoint
from .logic import (
    And,
    Box,
    ConstName,
    ConstantEnv,
    Diamond,
    Formula,
    FormulaSyntaxError,
    Interpretation,
    NuConst,
    Or,
    UnboundConstantError,
    Var,
    _eval,
    check_level,
    constants,
    parse_formula,
    render,
    variables,
)
from .lts import LTS

__all__ = [
    "Declaration",
    "NestedSystem",
    "FixpointResult",
    "derived_function",
    "gfp",
    "elaborate",
    "DeclarationFile",
    "parse_declarations",
    "render_declarations",
    "DeclSyntaxError",
    "unfold",
]


@dataclass(frozen=True)
class Declaration:
    """A map from a finite index set to formulae, living at ``level``.

    Bodies may mention variables of the index set and constants of strictly
    lower levels.
    """

    level: int
    body: Mapping[int, Formula]

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError("declaration level must be >= 0")
        object.__setattr__(self, "body", dict(sorted(self.body.items())))
        for i, f in self.body.items():
            if not check_level(f, self.level):
                raise ValueError(
                    f"X{i} at level {self.level} references a constant of level >= {self.level}"
                )
            stray = variables(f) - self.body.keys()
            if stray:
                raise ValueError(f"X{i} mentions undeclared variables {sorted(stray)}")

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(self.body)


@dataclass(frozen=True)
class NestedSystem:
    """Declarations at levels ``0..N-1``, all over the same index set."""

    levels: tuple[Declaration, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "levels", tuple(self.levels))
        for j, d in enumerate(self.levels):
            if d.level != j:
                raise ValueError(f"declaration in position {j} has level {d.level}")
            if d.indices != self.levels[0].indices:
                raise ValueError("all levels must share one index set")

    def __len__(self) -> int:
        return len(self.levels)

    def __getitem__(self, j: int) -> Declaration:
        return self.levels[j]

    @property
    def indices(self) -> tuple[int, ...]:
        return self.levels[0].indices if self.levels else ()


@dataclass(frozen=True)
class FixpointResult:
    solution: dict[int, int]
    iterations: int


def _check_env(d: Declaration, env: ConstantEnv) -> None:
    for i, f in d.body.items():
        for c in constants(f):
            if c not in env:
                raise UnboundConstantError(f"X{i} at level {d.level}: unbound constant {c}")


def derived_function(
    d: Declaration,
    lts: LTS,
    env: ConstantEnv | None = None,
    order: Sequence[int] | None = None,
) -> Callable[[Interpretation], dict[int, int]]:
    """The map ``sigma -> (i -> [[d(i)]] sigma)`` on interpretations.

    ``order`` only changes the order in which indices are evaluated; every
    index reads the same input ``sigma``.
    """
    env = dict(env or {})
    _check_env(d, env)
    idx = list(order) if order is not None else list(d.indices)
    if sorted(idx) != list(d.indices):
        raise ValueError("order must be a permutation of the index set")

    def step(sigma: Interpretation) -> dict[int, int]:
        memo: dict = {}
        out = {i: _eval(d.body[i], lts, env, sigma, memo) for i in idx}
        return dict(sorted(out.items()))

    return step


def gfp(
    d: Declaration,
    lts: LTS,
    env: ConstantEnv | None = None,
    order: Sequence[int] | None = None,
) -> FixpointResult:
    f = derived_function(d, lts, env, order)
    top = {i: lts.full for i in d.indices}
    bound = len(d.indices) * lts.n_states + 1
    sol, n = greatest_fixpoint(f, top, max_iter=bound)
    return FixpointResult(sol, n)


def elaborate(
    sys: NestedSystem,
    lts: LTS,
    trace: list[FixpointResult] | None = None,
) -> dict[ConstName, int]:
    """Solve every level in increasing order and bind its constants.

    When ``trace`` is given, the per-level fixpoint results are appended.
    """
    env: dict[ConstName, int] = {}
    for d in sys.levels:
        res = gfp(d, lts, env)
        if trace is not None:
            trace.append(res)
        for i, v in res.solution.items():
            env[ConstName(d.level, i)] = v
    return env


# -- file format -------------------------------------------------------------
#
#   # comment
#   target-level: 2          (optional header)
#   level 0:
#   X0 = <a>X1 ;
#   X1 = tt ;
#   level 1:
#   ...
#   target: nu2:0            (optional, repeatable)
#
# A formula may span several lines; it is terminated by ';'.


class DeclSyntaxError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass
class DeclarationFile:
    system: NestedSystem
    target_level: int | None = None
    targets: list[ConstName] = field(default_factory=list)


_LEVEL = re.compile(r"^level\s+(\d+)\s*:$")
_TARGET_LEVEL = re.compile(r"^target-level\s*:\s*(\d+)$")
_TARGET = re.compile(r"^target\s*:\s*nu(\d+):(\d+)$")
_EQN = re.compile(r"^X(\d+)\s*=(.*)$", re.S)


def parse_declarations(text: str) -> DeclarationFile:
    blocks: list[dict[int, Formula]] = []
    target_level = None
    targets: list[ConstName] = []
    pending = ""
    pending_line = 0

    def finish(stmt: str, lineno: int) -> None:
        stmt = stmt.strip()
        m = _EQN.match(stmt)
        if m is None:
            raise DeclSyntaxError(lineno, f"expected 'X<i> = <formula> ;', got {stmt!r}")
        if not blocks:
            raise DeclSyntaxError(lineno, "equation before any 'level <n>:' header")
        i = int(m.group(1))
        if i in blocks[-1]:
            raise DeclSyntaxError(lineno, f"X{i} declared twice in level {len(blocks) - 1}")
        try:
            blocks[-1][i] = parse_formula(m.group(2))
        except FormulaSyntaxError as e:
            raise DeclSyntaxError(lineno, str(e)) from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not pending.strip():
            if m := _LEVEL.match(line):
                n = int(m.group(1))
                if n != len(blocks):
                    raise DeclSyntaxError(lineno, f"expected 'level {len(blocks)}:', got level {n}")
                blocks.append({})
                continue
            if m := _TARGET_LEVEL.match(line):
                target_level = int(m.group(1))
                continue
            if m := _TARGET.match(line):
                targets.append(ConstName(int(m.group(1)), int(m.group(2))))
                continue
            pending_line = lineno
        pending += " " + line
        while ";" in pending:
            stmt, pending = pending.split(";", 1)
            finish(stmt, pending_line)
            pending_line = lineno
    if pending.strip():
        raise DeclSyntaxError(pending_line, "missing ';' at end of equation")
    try:
        system = NestedSystem(tuple(Declaration(j, b) for j, b in enumerate(blocks)))
    except ValueError as e:
        raise DeclSyntaxError(0, str(e)) from None
    return DeclarationFile(system, target_level, targets)


def render_declarations(
    sys: NestedSystem,
    target_level: int | None = None,
    targets: Iterable[ConstName] = (),
) -> str:
    lines = []
    if target_level is not None:
        lines.append(f"target-level: {target_level}")
    for d in sys.levels:
        lines.append(f"level {d.level}:")
        lines += [f"X{i} = {render(f)} ;" for i, f in d.body.items()]
    lines += [f"target: {c}" for c in targets]
    return "\n".join(lines) + "\n"


def unfold(sys: NestedSystem, const: ConstName, depth: int) -> Formula:
    """Unfold ``const`` ``depth`` times into its defining equations.

    Variables of a level stand for that level's own constants, so the result
    is closed and denotes the same set as ``const``; constants left at depth
    zero stay symbolic.
    """
    def go(f: Formula, level: int, k: int) -> Formula:
        if isinstance(f, Var):
            return go(NuConst(ConstName(level, f.index)), level, k)
        if isinstance(f, NuConst):
            if k == 0:
                return f
            c = f.ref
            return go(sys[c.level].body[c.index], c.level, k - 1)
        if isinstance(f, And):
            return And(go(f.lhs, level, k), go(f.rhs, level, k))
        if isinstance(f, Or):
            return Or(go(f.lhs, level, k), go(f.rhs, level, k))
        if isinstance(f, Diamond):
            return Diamond(f.action, go(f.body, level, k))
        if isinstance(f, Box):
            return Box(f.action, go(f.body, level, k))
        return f

    return go(NuConst(const), const.level, depth)
