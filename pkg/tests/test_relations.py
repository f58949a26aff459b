import random

import pytest
from hypothesis import given, settings, strategies as st

from nestsim.lts import LTS
from nestsim.relations import (
    BaseF,
    CapConst,
    CapFun,
    Kind,
    Relation,
    Tilde,
    apply,
    gfp_rel,
    gfp_rel_counted,
    inverse,
    parse_kind,
    preorder,
    random_relation,
    render_pairs,
    render_summary,
    step_F,
)

import oracles
from strategies import ltss

R = Relation.from_pairs


def test_step_F_examples(chain):
    assert step_F(chain, Relation.empty(2)) == R(2, [(1, 0), (1, 1)])
    assert step_F(chain, Relation.full(2)) == R(2, [(0, 0), (1, 0), (1, 1)])


@given(ltss())
def test_step_F_full_contains_identity(lts):
    assert Relation.identity(lts.n_states) <= step_F(lts, Relation.full(lts.n_states))


def test_step_F_dimension_mismatch(chain):
    with pytest.raises(ValueError):
        step_F(chain, Relation.full(3))


def test_inverse_examples():
    assert inverse(Relation.empty(3)) == Relation.empty(3)
    assert inverse(Relation.identity(3)) == Relation.identity(3)
    assert inverse(R(2, [(0, 1)])) == R(2, [(1, 0)])


def test_apply_examples(chain):
    full = Relation.full(2)
    assert apply(Tilde(BaseF()), chain, full) == R(2, [(0, 0), (0, 1), (1, 1)])
    assert apply(CapFun(BaseF(), Tilde(BaseF())), chain, full) == R(2, [(0, 0), (1, 1)])
    for s in (Relation.empty(2), full, R(2, [(0, 1)])):
        assert apply(CapConst(BaseF(), Relation.empty(2)), chain, s) == Relation.empty(2)


def test_gfp_rel_examples(chain, aloop):
    assert gfp_rel(BaseF(), chain) == R(2, [(0, 0), (1, 0), (1, 1)])
    assert gfp_rel(BaseF(), aloop) == Relation.full(1)
    assert gfp_rel(CapFun(BaseF(), Tilde(BaseF())), chain) == Relation.identity(2)


def test_preorder_abab(abab):
    assert (0, 3) not in preorder("bisim", abab)
    assert (3, 0) not in preorder("bisim", abab)
    simeq = preorder("simeq", abab)
    assert (0, 3) in simeq and (3, 0) in simeq
    assert (3, 0) not in preorder("nsim:2", abab)
    assert (0, 3) in preorder("nsim:2", abab)


def test_abab_matches_coinductive_oracle(abab):
    for kind, n in [("sim", 1), ("bisim", 1), ("simeq", 1), ("nsim", 2), ("nsim", 3), ("nopsim", 2)]:
        k = Kind(kind, n) if kind in ("nsim", "nopsim") else Kind(kind)
        assert set(preorder(k, abab).pairs()) == oracles.relation_pairs(abab, kind, n), k


@pytest.mark.parametrize("text, kind", [
    ("sim", Kind("sim")),
    ("nsim:3", Kind("nsim", 3)),
    ("nopsim:1", Kind("nopsim", 1)),
])
def test_parse_kind(text, kind):
    assert parse_kind(text) == kind


@pytest.mark.parametrize("text", ["nsim:0", "nsim:-2", "nsim", "foo", "sim:2"])
def test_parse_kind_errors(text):
    with pytest.raises(ValueError):
        parse_kind(text)


def test_nested_depth_one_is_plain(abab):
    assert preorder("nsim:1", abab) == preorder("sim", abab)
    assert preorder("nopsim:1", abab) == preorder("opsim", abab)


@settings(max_examples=40, deadline=None)
@given(ltss(max_states=3))
def test_sim_bisim_match_exhaustive_enumeration(lts):
    sim = oracles.largest(lts, oracles.is_simulation)
    bis = oracles.largest(lts, oracles.is_bisimulation)
    assert set(preorder("sim", lts).pairs()) == sim
    assert set(preorder("bisim", lts).pairs()) == bis


@settings(max_examples=60, deadline=None)
@given(ltss(max_states=5))
def test_matches_coinductive_oracle(lts):
    for kind, n in [("sim", 1), ("opsim", 1), ("bisim", 1), ("simeq", 1),
                    ("nsim", 2), ("nsim", 3), ("nopsim", 2), ("nopsim", 3)]:
        k = Kind(kind, n) if kind in ("nsim", "nopsim") else Kind(kind)
        assert set(preorder(k, lts).pairs()) == oracles.relation_pairs(lts, kind, n), k


def transformers(lts, rng):
    n = lts.n_states
    a = random_relation(n, rng)
    return [
        BaseF(),
        Tilde(BaseF()),
        CapConst(BaseF(), a),
        CapFun(BaseF(), Tilde(BaseF())),
        Tilde(CapConst(Tilde(BaseF()), a)),
        CapFun(CapConst(BaseF(), a), Tilde(BaseF())),
    ]


@settings(max_examples=50, deadline=None)
@given(ltss(max_states=5), st.integers(0, 2**32))
def test_transformer_lemmas(lts, seed):
    rnd = random.Random(seed)
    n = lts.n_states
    for t in transformers(lts, rnd):
        g, iters = gfp_rel_counted(t, lts)
        assert apply(t, lts, g) == g
        assert iters <= n * n + 1
        # nu tilde-t == (nu t)^-1
        assert gfp_rel(Tilde(t), lts) == inverse(g)
        for _ in range(5):
            s1, s2 = random_relation(n, rnd), random_relation(n, rnd)
            lo, hi = s1 & s2, s1 | s2
            assert apply(t, lts, lo) <= apply(t, lts, hi)
            a = random_relation(n, rnd)
            assert apply(Tilde(CapConst(t, a)), lts, s1) == apply(CapConst(Tilde(t), inverse(a)), lts, s1)
        # random post-fixed points lie below the gfp
        for _ in range(5):
            s = random_relation(n, rnd)
            while not s <= apply(t, lts, s):
                s = s & apply(t, lts, s)
            assert s <= g


@settings(max_examples=60, deadline=None)
@given(ltss(max_states=6))
def test_hierarchy(lts):
    sim, bisim, simeq = (preorder(k, lts) for k in ("sim", "bisim", "simeq"))
    nsims = [preorder(Kind("nsim", i), lts) for i in range(1, 5)]
    for hi, lo in zip(nsims, nsims[1:]):
        assert lo <= hi
    for r in nsims:
        assert bisim <= r
    assert bisim <= simeq <= sim
    for r in [sim, bisim, simeq, preorder("opsim", lts), *nsims]:
        assert r.is_reflexive() and r.is_transitive()
    assert bisim.is_symmetric() and simeq.is_symmetric()


def test_relation_helpers():
    r = R(3, [(0, 1), (2, 2), (0, 0)])
    assert len(r) == 3 and (0, 1) in r and (1, 0) not in r
    assert r.pairs() == [(0, 0), (0, 1), (2, 2)]
    assert render_pairs(r) == "0 0\n0 1\n2 2\n"
    assert render_summary(r, ["x", "y", "z"]) == "x: x y\ny:\nz: z\n"
    with pytest.raises(ValueError):
        R(2, [(0, 2)])
    with pytest.raises(ValueError):
        r & Relation.full(2)


def test_random_relation_reproducible():
    a = random_relation(6, random.Random(5))
    assert a == random_relation(6, random.Random(5))
