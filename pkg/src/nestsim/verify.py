"""Cross-verification harness: relational oracle vs characteristic systems."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .charform import (
    char_system,
    characterized_relation,
    decl_opsim,
    decl_sim,
    expresses_witness,
    phi,
    phi_inverse,
)
from .declarations import FixpointResult, NestedSystem, elaborate, gfp
from .lts import LTS, render_aut
from .relations import (
    BaseF,
    CapConst,
    CapFun,
    Kind,
    Relation,
    Tilde,
    apply,
    gfp_rel_counted,
    inverse,
    parse_kind,
    preorder,
    random_relation,
    transformer_for,
)

__all__ = ["Failure", "Report", "verify_lts", "verify_corpus", "pair_verdicts", "DEFAULT_KINDS"]

DEFAULT_KINDS = ("sim", "opsim", "bisim", "simeq", "nsim:2", "nsim:3", "nsim:4",
                 "nopsim:2", "nopsim:3", "nopsim:4")


@dataclass
class Failure:
    prop: str
    lts_name: str
    lts: LTS
    detail: str
    kind: str | None = None

    def __str__(self) -> str:
        head = f"FAIL {self.prop} on {self.lts_name}"
        if self.kind:
            head += f" kind={self.kind}"
        return f"{head}: {self.detail}\n{render_aut(self.lts)}"


@dataclass
class Report:
    counts: dict[str, Counter] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def record(self, prop: str, ok: bool, failure: Callable[[], Failure] | None = None) -> None:
        """Count one check; ``failure`` builds the witness and is only
        called when the check failed."""
        self.counts.setdefault(prop, Counter())["pass" if ok else "fail"] += 1
        if not ok and failure is not None:
            self.failures.append(failure())

    def merge(self, other: "Report") -> None:
        for prop, c in other.counts.items():
            self.counts.setdefault(prop, Counter()).update(c)
        self.failures += other.failures
        self.notes += other.notes

    @property
    def ok(self) -> bool:
        return all(c["fail"] == 0 for c in self.counts.values())

    def summary(self) -> str:
        lines = []
        for prop in sorted(self.counts):
            c = self.counts[prop]
            status = "PASS" if c["fail"] == 0 else "FAIL"
            lines.append(f"{status} {prop}: {c['pass']} passed, {c['fail']} failed")
        return "\n".join(lines) + "\n"


def _first_diff(a: Relation, b: Relation) -> str:
    only_a = [pq for pq in a.pairs() if pq not in b]
    only_b = [pq for pq in b.pairs() if pq not in a]
    if only_a:
        return f"pair {only_a[0]} only in the characterized relation"
    return f"pair {only_b[0]} only in the oracle relation"


def _nesting_depth(kinds: Iterable[Kind]) -> int:
    return max([k.n for k in kinds if k.name in ("nsim", "nopsim")] + [1])


def verify_lts(
    name: str,
    lts: LTS,
    kinds: Sequence[Kind | str] = DEFAULT_KINDS,
    samples: int = 50,
    seed: int = 0,
) -> Report:
    rep = Report()
    kinds = [parse_kind(k) if isinstance(k, str) else k for k in kinds]
    n = lts.n_states
    rng = random.Random(seed)

    def fail(prop, detail, kind=None):
        return Failure(prop, name, lts, detail, str(kind) if kind else None)

    rel_bound = n * n + 1
    decl_bound = n * n + 1  # |I| = |P|

    for k in kinds:
        # characterization: logic route == relational route
        cs = char_system(k, lts)
        trace: list[FixpointResult] = []
        got = characterized_relation(cs, lts, trace)
        want = preorder(k, lts)
        rep.record("characterization", got == want,
                   lambda: fail("characterization", _first_diff(got, want), k))

        worst = max(r.iterations for r in trace)
        rep.record("decl-gfp-bound", worst <= decl_bound,
                   lambda: fail("decl-gfp-bound", f"{worst} rounds > {decl_bound}", k))

        t = transformer_for(k, lts)
        if t is None:
            continue
        rel, iters = gfp_rel_counted(t, lts)
        rep.record("rel-gfp-bound", iters <= rel_bound,
                   lambda: fail("rel-gfp-bound", f"{iters} rounds > {rel_bound}", k))

        # the target declaration expresses t, and phi transfers the gfp
        env = elaborate(NestedSystem(cs.system.levels[:cs.target_level]), lts)
        wit = expresses_witness(cs.target, t, lts, samples, rng.randrange(2**63), env)
        rep.record("expresses", wit is None,
                   lambda: fail("expresses", f"disagree on S={wit.pairs() if wit else None}", k))
        sol = gfp(cs.target, lts, env).solution
        rep.record("phi-transfer", phi(rel) == sol,
                   lambda: fail("phi-transfer", "phi(gfp_rel(t)) != gfp(d)", k))

        # nu tilde-t = (nu t)^-1
        rel_t, _ = gfp_rel_counted(Tilde(t), lts)
        rep.record("inverse-gfp", rel_t == inverse(rel),
                   lambda: fail("inverse-gfp", "gfp(~t) != gfp(t)^-1", k))

        # tilde(t & A) = tilde(t) & A^-1 pointwise
        bad = None
        for _ in range(samples):
            s, a = random_relation(n, rng), random_relation(n, rng)
            lhs = apply(Tilde(CapConst(t, a)), lts, s)
            rhs = apply(CapConst(Tilde(t), inverse(a)), lts, s)
            if lhs != rhs:
                bad = (s, a)
                break
        rep.record("inverse-cap", bad is None,
                   lambda: fail("inverse-cap", f"S={bad[0].pairs()} A={bad[1].pairs()}" if bad else "", k))

    # the two base lemmas, independently of the requested kinds
    for prop, d, t in (("expresses-sim", decl_sim(lts), BaseF()),
                       ("expresses-opsim", decl_opsim(lts), Tilde(BaseF()))):
        wit = expresses_witness(d, t, lts, samples, rng.randrange(2**63))
        rep.record(prop, wit is None, lambda: fail(prop, f"disagree on S={wit.pairs() if wit else None}"))

    # phi is a bijection and respects intersection
    ok_rt, ok_cap = True, True
    for _ in range(samples):
        a1, a2 = random_relation(n, rng), random_relation(n, rng)
        ok_rt &= phi_inverse(phi(a1), n) == a1
        pa, pb = phi(a1), phi(a2)
        ok_cap &= phi(a1 & a2) == {p: pa[p] & pb[p] for p in range(n)}
    rep.record("phi-roundtrip", ok_rt, lambda: fail("phi-roundtrip", "phi_inverse(phi(S)) != S"))
    rep.record("phi-intersection", ok_cap, lambda: fail("phi-intersection", "phi(A1&A2) != phi(A1)&phi(A2)"))

    _check_hierarchy(rep, lts, _nesting_depth(kinds), fail)
    return rep


def _check_hierarchy(rep: Report, lts: LTS, depth: int, fail) -> None:
    depth = max(depth, 2)
    sim = preorder("sim", lts)
    bisim = preorder("bisim", lts)
    simeq = preorder("simeq", lts)
    nsims = [preorder(Kind("nsim", i), lts) for i in range(1, depth + 1)]
    nopsims = [preorder(Kind("nopsim", i), lts) for i in range(1, depth + 1)]

    for i in range(depth - 1):
        rep.record("hierarchy", nsims[i + 1] <= nsims[i],
                   lambda: fail("hierarchy", f"nsim:{i + 2} not within nsim:{i + 1}"))
    for i, r in enumerate(nsims, start=1):
        rep.record("hierarchy", bisim <= r, lambda: fail("hierarchy", f"bisim not within nsim:{i}"))
    rep.record("hierarchy", bisim <= simeq <= sim, lambda: fail("hierarchy", "bisim <= simeq <= sim broken"))
    for label, r in [("sim", sim), ("bisim", bisim), ("simeq", simeq)] + \
            [(f"nsim:{i}", r) for i, r in enumerate(nsims, 1)] + \
            [(f"nopsim:{i}", r) for i, r in enumerate(nopsims, 1)]:
        rep.record("hierarchy", r.is_reflexive() and r.is_transitive(),
                   lambda: fail("hierarchy", f"{label} is not a preorder"))
    rep.record("hierarchy", bisim.is_symmetric() and simeq.is_symmetric(),
               lambda: fail("hierarchy", "bisim or simeq not symmetric"))


def pair_verdicts(lts: LTS, kinds: Sequence[Kind | str], p: int, q: int) -> list[str]:
    """One line per kind: membership of ``(p, q)`` by both routes."""
    out = []
    for k in kinds:
        k = parse_kind(k) if isinstance(k, str) else k
        oracle = (p, q) in preorder(k, lts)
        logic = (p, q) in characterized_relation(char_system(k, lts), lts)
        yn = lambda b: "yes" if b else "no"
        out.append(f"{k} ({lts.name(p)},{lts.name(q)}): oracle={yn(oracle)} charsys={yn(logic)}")
    return out


def verify_corpus(
    corpus: Iterable[tuple[str, LTS]],
    kinds: Sequence[Kind | str] = DEFAULT_KINDS,
    samples: int = 50,
    seed: int = 0,
) -> Report:
    rep = Report()
    for k, (name, lts) in enumerate(corpus):
        rep.merge(verify_lts(name, lts, kinds, samples, seed + k))
    return rep
