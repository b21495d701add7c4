"""Differential coefficient rings.

A :class:`Ring` is a commutative polynomial ring over a number field whose
generators are, in canonical order: the chart variables, the independent
variable ``z``, and the derivative symbols of every declared coefficient
function (``alpha``, ``alpha'``, ...).  All generators commute; the
z-derivation is a separate layer on top of ordinary polynomial arithmetic.

Derivative symbols are materialised up to ``max_order`` at construction;
asking the derivation to go beyond that is an error rather than silent
truncation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import AlgebraError, DerivativeOrderExceeded
from .numberfield import NumberField, QQ

FORMAL = "formal"
TERMINAL = "terminal"
ZERO = "zero"
UNIT = "unit"  # algebraic unit: zero derivative plus a binomial power relation


@dataclass(frozen=True)
class DiffSymbol:
    """Declaration of one coefficient symbol of the differential ring."""

    base: str
    rule: str = FORMAL
    terminal_value: Fraction = Fraction(1)
    relation: tuple | None = None  # (power d, Fraction kappa): base^d = kappa

    def __post_init__(self):
        if self.rule not in (FORMAL, TERMINAL, ZERO, UNIT):
            raise AlgebraError(f"unknown derivative rule {self.rule!r}")
        if self.rule == UNIT and self.relation is None:
            raise AlgebraError("unit symbols need a power relation")


def sym_name(base: str, order: int) -> str:
    return base + "'" * order


class Ring:
    """Polynomial ring ``field[chart_vars, z, symbols]`` with a z-derivation."""

    _cache: dict = {}

    def __new__(cls, field: NumberField, chart_vars=(), symbols=(), max_order=4):
        chart_vars = tuple(chart_vars)
        symbols = tuple(sorted(symbols, key=lambda s: s.base))
        key = (field, chart_vars, symbols, max_order)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        self = super().__new__(cls)
        self._init(field, chart_vars, symbols, max_order)
        cls._cache[key] = self
        return self

    def _init(self, field, chart_vars, symbols, max_order):
        if len(set(chart_vars)) != len(chart_vars):
            raise AlgebraError("duplicate chart variable")
        bases = [s.base for s in symbols]
        if len(set(bases)) != len(bases):
            raise AlgebraError("duplicate symbol declaration")
        if "z" in bases or "z" in chart_vars:
            raise AlgebraError("'z' is implicit and cannot be redeclared")
        self.field = field
        self.chart_vars = chart_vars
        self.symbols = symbols
        self.max_order = max_order

        names = list(chart_vars) + ["z"]
        kinds = ["chart"] * len(chart_vars) + [TERMINAL]
        meta = [None] * len(chart_vars) + [(Fraction(1),)]
        for s in symbols:
            if s.rule == FORMAL:
                for k in range(max_order + 1):
                    names.append(sym_name(s.base, k))
                    kinds.append(FORMAL)
                    meta.append((s.base, k))
            else:
                names.append(s.base)
                kinds.append(s.rule)
                meta.append((s.terminal_value,) if s.rule == TERMINAL else s.relation)
        if len(set(names)) != len(names):
            raise AlgebraError(f"generator name collision in {names}")
        self.gen_names = tuple(names)
        self.gen_kinds = tuple(kinds)
        self._gen_meta = tuple(meta)
        self.index = {n: i for i, n in enumerate(names)}
        self.ngens = len(names)
        self.z_pos = len(chart_vars)

        # derivation table: pos -> None (kills the factor) | ("const", scalar)
        # | ("shift", pos of next-order symbol)
        deriv = []
        for i, kind in enumerate(kinds):
            if kind == "chart" or kind == ZERO or kind == UNIT:
                deriv.append(None)
            elif kind == TERMINAL:
                deriv.append(("const", field.from_fraction(meta[i][0])))
            else:
                base, order = meta[i]
                if order < max_order:
                    deriv.append(("shift", i + 1))
                else:
                    deriv.append(("overflow", sym_name(base, order)))
        self._deriv = tuple(deriv)
        # power relations: pos -> (d, kappa scalar)
        self.relations = {
            i: (meta[i][0], field.from_fraction(meta[i][1]))
            for i, kind in enumerate(kinds) if kind == UNIT
        }
        from .poly import MultiPoly  # local import to avoid a cycle
        self._poly_cls = MultiPoly
        self.zero = MultiPoly(self, {})
        self.one = MultiPoly(self, {(0,) * self.ngens: field.one})

    # -- constructors --------------------------------------------------------

    def const(self, value):
        """Constant polynomial from an int, Fraction or raw field scalar."""
        if isinstance(value, (int, Fraction)):
            value = self.field.from_fraction(Fraction(value))
        if self.field.is_zero(value):
            return self.zero
        return self._poly_cls(self, {(0,) * self.ngens: value})

    def var(self, name):
        pos = self.index.get(name)
        if pos is None:
            raise AlgebraError(f"unknown generator {name!r} in ring {self.gen_names}")
        exp = [0] * self.ngens
        exp[pos] = 1
        return self._poly_cls(self, {tuple(exp): self.field.one})

    def sym(self, base, order=0):
        return self.var(sym_name(base, order))

    def z(self):
        return self.var("z")

    # -- variants -------------------------------------------------------------

    def with_chart(self, chart_vars):
        return Ring(self.field, chart_vars, self.symbols, self.max_order)

    def coefficient_ring(self):
        return self.with_chart(())

    def widen(self, field: NumberField):
        return Ring(field, self.chart_vars, self.symbols, self.max_order)

    def with_symbols(self, extra_symbols):
        return Ring(self.field, self.chart_vars, self.symbols + tuple(extra_symbols),
                    self.max_order)

    # -- embeddings -----------------------------------------------------------

    def embed(self, poly):
        """Re-express a polynomial of a compatible ring in this ring.

        Every generator of the source must exist here by name; scalars are
        coerced when the field widens.
        """
        if poly.ring is self:
            return poly
        src = poly.ring
        posmap = []
        for name in src.gen_names:
            pos = self.index.get(name)
            if pos is None:
                raise AlgebraError(f"generator {name!r} missing from target ring")
            posmap.append(pos)
        same_field = src.field == self.field
        terms = {}
        for exp, coeff in poly.terms.items():
            new = [0] * self.ngens
            for i, e in enumerate(exp):
                if e:
                    new[posmap[i]] = e
            if not same_field:
                coeff = self.field.coerce(coeff, src.field)
            terms[tuple(new)] = coeff
        return self._poly_cls(self, self.normalize_terms(terms))

    # -- term normalisation -----------------------------------------------

    def normalize_terms(self, terms):
        """Drop zero coefficients and apply unit-symbol power relations."""
        if not self.relations:
            return {e: c for e, c in terms.items() if not self.field.is_zero(c)}
        out = {}
        for exp, coeff in terms.items():
            reduce_positions = [p for p in self.relations if exp[p] >= self.relations[p][0]]
            if reduce_positions:
                exp = list(exp)
                for p in reduce_positions:
                    d, kappa = self.relations[p]
                    q, r = divmod(exp[p], d)
                    exp[p] = r
                    coeff = self.field.mul(coeff, self.field.pow(kappa, q))
                exp = tuple(exp)
            if self.field.is_zero(coeff):
                continue
            acc = out.get(exp)
            coeff = coeff if acc is None else self.field.add(acc, coeff)
            if self.field.is_zero(coeff):
                out.pop(exp, None)
            else:
                out[exp] = coeff
        return out

    # -- derivation --------------------------------------------------------

    def derivative_of_gen(self, pos):
        """D(generator) as (kind, payload); None when the factor dies."""
        rule = self._deriv[pos]
        if rule is not None and rule[0] == "overflow":
            raise DerivativeOrderExceeded(
                f"derivative of {rule[1]} exceeds max order {self.max_order}")
        return rule

    def __repr__(self):
        return f"Ring({self.field.name}; {', '.join(self.gen_names)})"
