"""Modal formulae with variables and nested greatest-fixed-point constants.

Formulae are immutable trees.  ``eval_open`` interprets a formula as a set of
processes (an int mask) given an environment for the ``nu`` constants and an
interpretation for the variables; ``eval_closed`` is the variable-free case.
There is no negation: every connective is monotone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .lts import LTS, may, must

__all__ = [
    "TT", "FF", "Var", "NuConst", "And", "Or", "Diamond", "Box", "Formula",
    "ConstName", "Interpretation", "ConstantEnv",
    "conj", "disj", "eval_closed", "eval_open", "check_level",
    "variables", "constants", "actions_of",
    "parse_formula", "FormulaSyntaxError", "UnboundConstantError", "render",
]


@dataclass(frozen=True)
class _TT:
    def __repr__(self) -> str:
        return "TT"


@dataclass(frozen=True)
class _FF:
    def __repr__(self) -> str:
        return "FF"


TT = _TT()
FF = _FF()


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True, order=True)
class ConstName:
    """Names the constant ``nu D_level(index)``."""

    level: int
    index: int

    def __str__(self) -> str:
        return f"nu{self.level}:{self.index}"


@dataclass(frozen=True)
class NuConst:
    ref: ConstName


@dataclass(frozen=True)
class And:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Or:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Diamond:
    action: str
    body: "Formula"


@dataclass(frozen=True)
class Box:
    action: str
    body: "Formula"


Formula = Union[_TT, _FF, Var, NuConst, And, Or, Diamond, Box]
Interpretation = Mapping[int, int]
ConstantEnv = Mapping[ConstName, int]


def nu(level: int, index: int) -> NuConst:
    return NuConst(ConstName(level, index))


def conj(fs: Iterable[Formula]) -> Formula:
    """Right-folded conjunction; the empty conjunction is ``TT``."""
    fs = list(fs)
    if not fs:
        return TT
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(fs: Iterable[Formula]) -> Formula:
    """Right-folded disjunction; the empty disjunction is ``FF``."""
    fs = list(fs)
    if not fs:
        return FF
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


class UnboundConstantError(KeyError):
    pass


def _eval(f: Formula, lts: LTS, env: ConstantEnv, sigma: Interpretation | None, memo: dict) -> int:
    key = id(f)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    if f is TT or isinstance(f, _TT):
        v = lts.full
    elif f is FF or isinstance(f, _FF):
        v = 0
    elif isinstance(f, Var):
        if sigma is None:
            raise TypeError(f"variable X{f.index} in a formula given to the closed evaluator")
        try:
            v = sigma[f.index]
        except KeyError:
            raise KeyError(f"X{f.index} is outside the index set") from None
    elif isinstance(f, NuConst):
        try:
            v = env[f.ref]
        except KeyError:
            raise UnboundConstantError(f"unbound constant {f.ref}") from None
    elif isinstance(f, And):
        v = _eval(f.lhs, lts, env, sigma, memo) & _eval(f.rhs, lts, env, sigma, memo)
    elif isinstance(f, Or):
        v = _eval(f.lhs, lts, env, sigma, memo) | _eval(f.rhs, lts, env, sigma, memo)
    elif isinstance(f, Diamond):
        v = may(lts, f.action, _eval(f.body, lts, env, sigma, memo))
    elif isinstance(f, Box):
        v = must(lts, f.action, _eval(f.body, lts, env, sigma, memo))
    else:
        raise TypeError(f"not a formula: {f!r}")
    # keep f alive so its id cannot be recycled within this call
    memo[key] = (f, v)
    return v


def eval_closed(f: Formula, lts: LTS, env: ConstantEnv | None = None) -> int:
    return _eval(f, lts, env or {}, None, {})


def eval_open(f: Formula, lts: LTS, env: ConstantEnv | None, sigma: Interpretation) -> int:
    return _eval(f, lts, env or {}, sigma, {})


def _walk(f: Formula):
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, (And, Or)):
            stack += (g.rhs, g.lhs)
        elif isinstance(g, (Diamond, Box)):
            stack.append(g.body)


def variables(f: Formula) -> set[int]:
    return {g.index for g in _walk(f) if isinstance(g, Var)}


def constants(f: Formula) -> set[ConstName]:
    return {g.ref for g in _walk(f) if isinstance(g, NuConst)}


def actions_of(f: Formula) -> set[str]:
    return {g.action for g in _walk(f) if isinstance(g, (Diamond, Box))}


def check_level(f: Formula, level: int, closed: bool = False) -> bool:
    """True iff every constant in ``f`` lives strictly below ``level``.

    With ``closed=True`` the formula must also be variable-free, i.e. belong
    to the closed logic of that level.
    """
    for g in _walk(f):
        if isinstance(g, NuConst) and g.ref.level >= level:
            return False
        if closed and isinstance(g, Var):
            return False
    return True


# -- concrete syntax ---------------------------------------------------------
#
#   F ::= tt | ff | X<int> | nu<int>:<int> | F & F | F '|' F
#       | <label>F | [label]F | (F)
#
# '&' binds tighter than '|', modalities tightest.  Both binary operators
# associate to the right so that printing and parsing round-trip exactly.


class FormulaSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at position {pos}: {text[:pos]}<HERE>{text[pos:]}")
        self.pos = pos
        self.msg = msg


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str, pos: int | None = None):
        return FormulaSyntaxError(self.text, self.pos if pos is None else pos, msg)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])

    def parse(self) -> Formula:
        f = self.disjunction()
        if self.peek():
            raise self.error("unexpected trailing input")
        return f

    def disjunction(self) -> Formula:
        lhs = self.conjunction()
        if self.peek() == "|":
            self.pos += 1
            return Or(lhs, self.disjunction())
        return lhs

    def conjunction(self) -> Formula:
        lhs = self.unary()
        if self.peek() == "&":
            self.pos += 1
            return And(lhs, self.conjunction())
        return lhs

    def label(self, close: str) -> str:
        start = self.pos
        end = self.text.find(close, start)
        if end < 0:
            raise self.error(f"unterminated modality, expected {close!r}")
        lab = self.text[start:end].strip()
        if not lab:
            raise self.error("empty action label")
        self.pos = end + 1
        return lab

    def unary(self) -> Formula:
        ch = self.peek()
        if ch == "<":
            self.pos += 1
            return Diamond(self.label(">"), self.unary())
        if ch == "[":
            self.pos += 1
            return Box(self.label("]"), self.unary())
        if ch == "(":
            self.pos += 1
            f = self.disjunction()
            self.expect(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        self.skip()
        rest = self.text[self.pos:]
        if rest.startswith("X"):
            self.pos += 1
            return Var(self.integer())
        if rest.startswith("nu"):
            self.pos += 2
            level = self.integer()
            if self.pos >= len(self.text) or self.text[self.pos] != ":":
                raise self.error("expected ':' in constant name")
            self.pos += 1
            return NuConst(ConstName(level, self.integer()))
        for word, val in (("tt", TT), ("ff", FF)):
            if rest.startswith(word) and not rest[2:3].isalnum():
                self.pos += 2
                return val
        raise self.error("expected a formula")


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


_PREC = {Or: 1, And: 2}


def render(f: Formula) -> str:
    """Print ``f`` in the concrete syntax accepted by ``parse_formula``."""
    if isinstance(f, _TT):
        return "tt"
    if isinstance(f, _FF):
        return "ff"
    if isinstance(f, Var):
        return f"X{f.index}"
    if isinstance(f, NuConst):
        return str(f.ref)
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        mine = _PREC[type(f)]
        left = render(f.lhs)
        # the left operand needs parens at equal precedence (right assoc)
        if type(f.lhs) in _PREC and _PREC[type(f.lhs)] <= mine:
            left = f"({left})"
        right = render(f.rhs)
        if type(f.rhs) in _PREC and _PREC[type(f.rhs)] < mine:
            right = f"({right})"
        return left + op + right
    if isinstance(f, (Diamond, Box)):
        head = f"<{f.action}>" if isinstance(f, Diamond) else f"[{f.action}]"
        body = render(f.body)
        if type(f.body) in _PREC:
            body = f"({body})"
        return head + body
    raise TypeError(f"not a formula: {f!r}")
