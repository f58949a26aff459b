"""Command-line front end.

Exit status: 0 on success (or a ``yes`` verdict), 1 on a ``no`` verdict or a
failed verification, 2 on usage and input errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .charform import char_system
from .corpus import DENSITIES, classics, random_corpus
from .declarations import DeclSyntaxError, elaborate, parse_declarations, render_declarations, unfold
from .logic import (
    ConstName,
    FormulaSyntaxError,
    UnboundConstantError,
    actions_of,
    eval_closed,
    parse_formula,
    render,
    variables,
)
from .lts import LTS, AutParseError, generate_random, members, read_aut, read_names, render_aut
from .relations import Kind, parse_kind, preorder, render_pairs, render_summary
from .verify import DEFAULT_KINDS, pair_verdicts, verify_corpus

USAGE_ERROR = 2


class UsageError(Exception):
    pass


def _csv(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _kind(text: str) -> Kind:
    try:
        return parse_kind(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _load(args, extra_actions: Sequence[str] = ()) -> LTS:
    try:
        lts = read_aut(args.lts, list(extra_actions) + _csv(args.extra_actions or ""))
    except OSError as e:
        raise UsageError(f"cannot read {args.lts}: {e.strerror}") from None
    except AutParseError as e:
        raise UsageError(f"{args.lts}: {e}") from None
    if getattr(args, "names", None):
        try:
            lts = lts.with_names(read_names(args.names, lts.n_states))
        except (OSError, ValueError) as e:
            raise UsageError(str(e)) from None
    return lts


def _process(lts: LTS, token: str) -> int:
    try:
        return lts.process_id(token)
    except KeyError as e:
        raise UsageError(e.args[0]) from None


def cmd_check(args) -> int:
    kind = _kind(args.kind)
    lts = _load(args)
    parts = args.pair.split(",")
    if len(parts) != 2:
        raise UsageError(f"--pair expects '<p>,<q>', got {args.pair!r}")
    p, q = (_process(lts, t.strip()) for t in parts)
    yes = (p, q) in preorder(kind, lts)
    print("yes" if yes else "no")
    return 0 if yes else 1


def cmd_relation(args) -> int:
    kind = _kind(args.kind)
    lts = _load(args)
    rel = preorder(kind, lts)
    names = lts.names
    out = render_pairs(rel, names) if args.format == "pairs" else render_summary(rel, names)
    sys.stdout.write(out)
    return 0


def cmd_charformula(args) -> int:
    kind = _kind(args.kind)
    if args.unfold is not None and args.unfold < 0:
        raise UsageError("--unfold must be >= 0")
    lts = _load(args)
    procs = [_process(lts, args.process)] if args.process is not None else None
    cs = char_system(kind, lts)
    targets = [cs.constant(p) for p in procs] if procs else []
    sys.stdout.write(render_declarations(cs.system, cs.target_level, targets))
    if args.unfold is not None:
        for p in procs or lts.processes:
            f = unfold(cs.system, cs.constant(p), args.unfold)
            print(f"# unfold {args.unfold} of {cs.constant(p)}: {render(f)}")
    return 0


def cmd_mc(args) -> int:
    text = args.formula
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {text[1:]}: {e.strerror}") from None
    try:
        f = parse_formula(text)
    except FormulaSyntaxError as e:
        raise UsageError(f"formula: {e}") from None
    if variables(f):
        raise UsageError("formula must not contain variables X<i>")
    decls = None
    if args.decls:
        try:
            with open(args.decls, encoding="utf-8") as fh:
                decls = parse_declarations(fh.read())
        except OSError as e:
            raise UsageError(f"cannot read {args.decls}: {e.strerror}") from None
        except DeclSyntaxError as e:
            raise UsageError(f"{args.decls}: {e}") from None
    # labels mentioned by the formula or declarations join the alphabet
    labels = set(actions_of(f))
    if decls is not None:
        for d in decls.system.levels:
            for g in d.body.values():
                labels |= actions_of(g)
    lts = _load(args, sorted(labels))
    env: dict[ConstName, int] = {}
    if decls is not None:
        try:
            env = elaborate(decls.system, lts)
        except UnboundConstantError as e:
            raise UsageError(f"{args.decls}: {e.args[0]}") from None
    try:
        sat = eval_closed(f, lts, env)
    except UnboundConstantError as e:
        hint = "" if decls else " (pass --decls)"
        raise UsageError(f"{e.args[0]}{hint}") from None
    print(" ".join(lts.name(p) for p in members(sat)))
    return 0


def cmd_verify(args) -> int:
    kinds = [_kind(k) for k in _csv(args.kinds)] if args.kinds else [parse_kind(k) for k in DEFAULT_KINDS]
    if args.lts and args.random is not None:
        raise UsageError("--lts and --random are mutually exclusive")
    try:
        densities = [float(d) for d in _csv(args.density)]
    except ValueError:
        raise UsageError(f"bad --density {args.density!r}") from None
    if not densities or any(not 0 <= d <= 1 for d in densities):
        raise UsageError("densities must lie in [0, 1]")
    if args.max_states < 1 or args.samples < 0:
        raise UsageError("--max-states must be >= 1 and --samples >= 0")
    pair = None
    if args.pair:
        pair = _csv(args.pair)
        if len(pair) != 2:
            raise UsageError(f"--pair expects '<p>,<q>', got {args.pair!r}")
    corpus: list[tuple[str, LTS]] = []
    if args.lts:
        corpus.append((args.lts, _load(args)))
    if args.classics:
        corpus += list(classics().items())
    if args.random is not None or not corpus:
        count = args.random if args.random is not None else 200
        corpus += random_corpus(count, args.max_states, tuple(_csv(args.actions)),
                                tuple(densities), args.seed)
    if pair is not None:
        for name, lts in corpus[:1]:
            p, q = (_process(lts, t) for t in pair)
            print(f"# {name}")
            for line in pair_verdicts(lts, kinds, p, q):
                print(line)
    rep = verify_corpus(corpus, kinds, args.samples, args.seed)
    print(f"checked {len(corpus)} LTS(s), kinds: {', '.join(map(str, kinds))}")
    sys.stdout.write(rep.summary())
    for fl in rep.failures:
        print(fl)
    return 0 if rep.ok else 1


def cmd_gen(args) -> int:
    if args.states < 1:
        raise UsageError("--states must be >= 1")
    if not 0 <= args.density <= 1:
        raise UsageError("--density must lie in [0, 1]")
    acts = _csv(args.actions)
    if not acts:
        raise UsageError("--actions needs at least one label")
    text = render_aut(generate_random(args.states, acts, args.density, args.seed))
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise UsageError(f"cannot write {args.out}: {e.strerror}") from None
    print(args.out)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nestsim", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def lts_args(p, required=True):
        p.add_argument("--lts", required=required, help="Aldebaran .aut file")
        p.add_argument("--names", help="sidecar file of '<id> <name>' lines")
        p.add_argument("--extra-actions", help="labels to add to the alphabet (csv)")

    p = sub.add_parser("check", help="decide (p,q) membership in a preorder")
    lts_args(p)
    p.add_argument("--kind", required=True)
    p.add_argument("--pair", required=True, help="<p>,<q>")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("relation", help="list a behavioural relation")
    lts_args(p)
    p.add_argument("--kind", required=True)
    p.add_argument("--format", choices=("pairs", "summary"), default="pairs")
    p.set_defaults(func=cmd_relation)

    p = sub.add_parser("charformula", help="print a characteristic equation system")
    lts_args(p)
    p.add_argument("--kind", required=True)
    p.add_argument("--process")
    p.add_argument("--unfold", type=int)
    p.set_defaults(func=cmd_charformula)

    p = sub.add_parser("mc", help="model-check a closed formula")
    lts_args(p)
    p.add_argument("--formula", required=True, help="formula text or @path")
    p.add_argument("--decls", help="declaration file binding nu<L>:<i> constants")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("verify", help="cross-check both routes on a corpus")
    lts_args(p, required=False)
    p.add_argument("--random", type=int, help="number of random LTSs")
    p.add_argument("--classics", action="store_true", help="include the hand-built classics")
    p.add_argument("--max-states", type=int, default=8)
    p.add_argument("--actions", default="a,b")
    p.add_argument("--density", default=",".join(map(str, DENSITIES)),
                   help="csv of densities, cycled over the random instances")
    p.add_argument("--kinds", help="csv of kinds (default: all up to depth 4)")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pair", help="also report both routes' verdicts for <p>,<q>")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a random LTS")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--actions", required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"nestsim: error: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
