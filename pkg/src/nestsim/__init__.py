"""Simulation-family preorders on finite LTSs, computed both as relational
greatest fixed points and through nested characteristic declarations."""

from .charform import (
    CharSystem,
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
from .declarations import Declaration, NestedSystem, elaborate, gfp
from .logic import eval_closed, eval_open, parse_formula
from .lts import LTS, generate_random, may, must, parse_aut, render_aut
from .relations import Kind, Relation, gfp_rel, parse_kind, preorder

__version__ = "0.1.0"
