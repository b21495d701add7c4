"""Exact arithmetic layer: number fields, differential rings, polynomials,
rational functions."""

from .numberfield import NumberField, PRESETS, QQ, QQ_I, QQ_W, widened_field
from .ring import FORMAL, TERMINAL, UNIT, ZERO, DiffSymbol, Ring, sym_name
from .poly import MultiPoly
from .gcd import poly_gcd
from .ratfn import (
    RationalFn,
    evaluate_numeric,
    poly_eval_numeric,
    rat_reduce,
    ratfn_const,
    ratfn_var,
    substitute,
)

__all__ = [
    "NumberField", "PRESETS", "QQ", "QQ_I", "QQ_W", "widened_field",
    "DiffSymbol", "Ring", "sym_name", "FORMAL", "TERMINAL", "ZERO", "UNIT",
    "MultiPoly", "poly_gcd",
    "RationalFn", "rat_reduce", "substitute", "evaluate_numeric",
    "poly_eval_numeric", "ratfn_const", "ratfn_var",
]
