import random

import pytest
from hypothesis import given, settings, strategies as st

from nestsim.charform import (
    char_system,
    characterized_relation,
    decl_bisim,
    decl_opsim,
    decl_sim,
    decl_simeq,
    expresses_check,
    phi,
    phi_inverse,
)
from nestsim.declarations import NestedSystem, derived_function, elaborate, gfp
from nestsim.logic import FF, TT, And, Box, ConstName, Diamond, NuConst, Or, Var
from nestsim.lts import LTS, generate_random
from nestsim.relations import (
    BaseF,
    CapFun,
    Relation,
    Tilde,
    gfp_rel,
    inverse,
    preorder,
    random_relation,
    transformer_for,
)

from strategies import ltss

R = Relation.from_pairs
ALL_KINDS = ["sim", "opsim", "bisim", "simeq", "nsim:2", "nsim:3", "nsim:4",
             "nopsim:2", "nopsim:3", "nopsim:4"]


def test_phi_examples():
    assert phi(Relation.empty(3)) == {0: 0, 1: 0, 2: 0}
    assert phi(Relation.full(2)) == {0: 0b11, 1: 0b11}
    assert phi(R(2, [(0, 1)])) == {0: 0b10, 1: 0}


def test_phi_inverse_examples():
    assert phi_inverse({0: 0b11, 1: 0b11}) == Relation.full(2)
    assert phi_inverse({0: 0b10, 1: 0}) == R(2, [(0, 1)])
    with pytest.raises(ValueError):
        phi_inverse({1: 0, 2: 0})


def test_phi_roundtrip_random():
    rng = random.Random(0)
    for n in range(1, 9):
        for _ in range(100):
            s = random_relation(n, rng)
            assert phi_inverse(phi(s), n) == s


@given(st.integers(1, 8), st.integers(0, 2**32))
def test_phi_respects_intersection(n, seed):
    rng = random.Random(seed)
    a1, a2 = random_relation(n, rng), random_relation(n, rng)
    p1, p2 = phi(a1), phi(a2)
    assert phi(a1 & a2) == {p: p1[p] & p2[p] for p in range(n)}


def test_decl_sim_examples(chain, aloop):
    dead = LTS.build(1, [], ["a"])
    assert decl_sim(dead).body == {0: TT}
    assert decl_sim(chain).body == {0: Diamond("a", Var(1)), 1: TT}
    assert decl_sim(aloop).body == {0: Diamond("a", Var(0))}


def test_decl_opsim_examples(chain):
    dead = LTS.build(1, [], ["a"])
    assert decl_opsim(dead).body == {0: Box("a", FF)}
    assert decl_opsim(chain).body == {0: Box("a", Var(1)), 1: Box("a", FF)}
    fork = LTS.build(3, [(0, "a", 1), (0, "a", 2)])
    assert decl_opsim(fork).body[0] == Box("a", Or(Var(1), Var(2)))


def test_decl_bisim_examples(chain):
    dead = LTS.build(1, [], ["a"])
    assert decl_bisim(dead).body == {0: And(TT, Box("a", FF))}
    assert decl_bisim(chain).body[0] == And(Diamond("a", Var(1)), Box("a", Var(1)))
    sol = gfp(decl_bisim(chain), chain).solution
    assert phi_inverse(sol, 2) == Relation.identity(2)


def test_decl_simeq(chain, abab):
    cs = decl_simeq(chain)
    assert cs.target_level == 2 and len(cs.system) == 3
    assert cs.target.body[0] == And(NuConst(ConstName(0, 0)), NuConst(ConstName(1, 0)))
    assert characterized_relation(cs, chain) == Relation.identity(2)
    trace = []
    rel = characterized_relation(decl_simeq(abab), abab, trace)
    assert (0, 3) in rel and (3, 0) in rel
    # constant level: the first application already yields the fixed point,
    # the second only confirms it
    top = trace[2]
    first = derived_function(decl_simeq(abab).target, abab, elaborate(
        NestedSystem(decl_simeq(abab).system.levels[:2]), abab))({p: abab.full for p in abab.processes})
    assert top.solution == first
    assert top.iterations == 2


def test_char_system_structure(chain):
    assert char_system("nsim:1", chain).system == NestedSystem((decl_sim(chain),))
    cs = char_system("nsim:3", chain)
    assert cs.target_level == 4 and len(cs.system) == 5
    # level 2 = D_(2)sim = D & nu D_(1)opsim, level 3 = D~ & nu D_(1)sim
    assert cs.system[2].body[0] == And(decl_sim(chain).body[0], NuConst(ConstName(1, 0)))
    assert cs.system[3].body[0] == And(decl_opsim(chain).body[0], NuConst(ConstName(0, 0)))
    assert cs.system[4].body[1] == And(decl_sim(chain).body[1], NuConst(ConstName(3, 1)))
    assert char_system("nopsim:2", chain).target_level == 3
    assert char_system("opsim", chain).target_level == 1


def test_char_system_rejects_depth_zero(chain):
    with pytest.raises(ValueError):
        char_system("nsim:0", chain)


def test_characterized_relation_examples(chain, aloop, abab):
    assert characterized_relation(char_system("sim", chain), chain) == R(2, [(0, 0), (1, 0), (1, 1)])
    assert characterized_relation(char_system("bisim", aloop), aloop) == Relation.full(1)
    assert (3, 0) not in characterized_relation(char_system("nsim:2", abab), abab)
    lts = generate_random(6, ["a", "b"], 0.3, 2024)
    assert characterized_relation(char_system("nsim:3", lts), lts) == preorder("nsim:3", lts)


def test_nopsim_is_inverse_of_nsim(abab):
    a = characterized_relation(char_system("nsim:2", abab), abab)
    b = characterized_relation(char_system("nopsim:2", abab), abab)
    assert b == inverse(a)


@settings(max_examples=40, deadline=None)
@given(ltss(max_states=6))
def test_characterization_all_kinds(lts):
    for k in ALL_KINDS:
        assert characterized_relation(char_system(k, lts), lts) == preorder(k, lts), k


@settings(max_examples=40, deadline=None)
@given(ltss(max_states=6))
def test_bisim_within_intersection_route(lts):
    b = characterized_relation(char_system("bisim", lts), lts)
    s = characterized_relation(char_system("sim", lts), lts)
    o = characterized_relation(char_system("opsim", lts), lts)
    assert b <= s & o
    assert b <= characterized_relation(char_system("simeq", lts), lts)


def test_expresses_examples(chain, abab):
    for lts in (chain, abab):
        assert expresses_check(decl_sim(lts), BaseF(), lts)
        assert expresses_check(decl_opsim(lts), Tilde(BaseF()), lts)
        assert expresses_check(decl_bisim(lts), CapFun(BaseF(), Tilde(BaseF())), lts)
    assert not expresses_check(decl_sim(chain), Tilde(BaseF()), chain)
    # the witness S = full alone suffices
    assert not expresses_check(decl_sim(chain), Tilde(BaseF()), chain, samples=0)


@settings(max_examples=30, deadline=None)
@given(ltss(max_states=5))
def test_nested_levels_express_their_functionals(lts):
    for k in ("nsim:2", "nsim:3", "nopsim:2", "nopsim:3"):
        cs = char_system(k, lts)
        env = elaborate(NestedSystem(cs.system.levels[:cs.target_level]), lts)
        t = transformer_for(k, lts)
        assert expresses_check(cs.target, t, lts, samples=10, seed=1, env=env)
        assert phi(gfp_rel(t, lts)) == gfp(cs.target, lts, env).solution
