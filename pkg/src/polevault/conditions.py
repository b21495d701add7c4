"""Resonance condition sets: canonical generators, derivative closure, and
the monomial rewriting used to impose them on systems.

Generators are coefficient-ring polynomials set to zero.  The canonical form
is the reduced row echelon basis of their span over the number field (with
monomials in the derivative symbols as columns, ordered canonically), which
makes set comparison exact.  Imposing solves each relation for one symbol
occurring linearly with a scalar coefficient and substitutes everywhere.
"""
from __future__ import annotations

from .algebra import FORMAL, MultiPoly, RationalFn, Ring, substitute
from .errors import DerivativeOrderExceeded, NonlinearInHighest


class ConditionSet:
    def __init__(self, ring: Ring, generators, closure, rewrites):
        self.ring = ring                # coefficient ring (no chart variables)
        self.generators = generators    # canonical RREF basis, list[MultiPoly]
        self.closure = closure          # generators plus their formal derivatives
        self.rewrites = rewrites        # symbol name -> MultiPoly replacement

    def is_empty(self):
        return not self.generators

    def render_generators(self):
        return [g.render() for g in self.generators]

    def same_span(self, other: "ConditionSet"):
        return [g.terms for g in self.generators] == [g.terms for g in other.generators]

    def rewrite(self, value):
        """Apply the closure rewrites; polynomials stay polynomials."""
        ring = value.ring
        rules = self._rules_for(ring)
        if not rules:
            return value
        out = substitute(value, rules, ring)
        if isinstance(value, MultiPoly):
            return out.as_poly()
        return out

    def _rules_for(self, ring):
        return {name: ring.embed(rhs) for name, rhs in self.rewrites.items()
                if name in ring.index}


def condition_set(ring: Ring, exprs) -> ConditionSet:
    """Canonicalise a family of vanishing conditions and build its closure."""
    cring = ring.coefficient_ring()
    gens = []
    for e in exprs:
        if isinstance(e, RationalFn):
            e = e.num
        p = cring.embed(e)
        if not p.is_zero():
            gens.append(p)
    basis = _rref(cring, gens)
    closure = _derivative_closure(cring, basis)
    rewrites = _solve_rewrites(cring, closure)
    return ConditionSet(cring, basis, closure, rewrites)


def _rref(ring, gens):
    """Reduced row echelon basis of the span, rows monic, leading monomials
    strictly decreasing."""
    f = ring.field
    rows = [dict(g.terms) for g in gens if g.terms]
    basis = {}  # leading exponent -> row dict
    for row in rows:
        row = dict(row)
        while row:
            lead = max(row)
            hit = basis.get(lead)
            if hit is None:
                inv = f.inv(row[lead])
                row = {e: f.mul(c, inv) for e, c in row.items()}
                basis[lead] = row
                break
            coef = row[lead]
            for e, c in hit.items():
                acc = row.get(e)
                val = f.sub(acc, f.mul(coef, c)) if acc is not None else f.neg(f.mul(coef, c))
                if f.is_zero(val):
                    row.pop(e, None)
                else:
                    row[e] = val
    # back-substitute for full reduction
    leads = sorted(basis, reverse=True)
    for i, lead in enumerate(leads):
        row = basis[lead]
        for other in leads[:i]:
            orow = basis[other]
            coef = orow.get(lead)
            if coef is None:
                continue
            for e, c in row.items():
                acc = orow.get(e)
                val = f.sub(acc, f.mul(coef, c)) if acc is not None else f.neg(f.mul(coef, c))
                if f.is_zero(val):
                    orow.pop(e, None)
                else:
                    orow[e] = val
    return [MultiPoly(ring, basis[lead]) for lead in sorted(basis, reverse=True)]


def _derivative_closure(ring, basis):
    out = list(basis)
    for g in basis:
        cur = g
        while True:
            try:
                cur = cur.derivative()
            except DerivativeOrderExceeded:
                break
            if cur.is_zero():
                break
            out.append(cur)
    return out


def _symbol_candidates(ring, poly):
    """Formal-symbol generators occurring in poly, best solve target first."""
    cands = []
    for i, kind in enumerate(ring.gen_kinds):
        if kind != FORMAL:
            continue
        name = ring.gen_names[i]
        if poly.involves(name):
            base, order = ring._gen_meta[i]
            cands.append((order, base, name))
    cands.sort(reverse=True)
    return [name for _, _, name in cands]


def _solve_rewrites(ring, relations):
    """Solve each relation for one symbol (linear, scalar coefficient) and
    compose the substitutions to a confluent rule set."""
    rules = {}
    for rel in relations:
        rel = _apply_rules(rel, rules)
        if rel.is_zero():
            continue
        solved = False
        for name in _symbol_candidates(ring, rel):
            uni = rel.as_univariate(name)
            if max(uni) != 1:
                continue
            coeff = uni[1]
            if not coeff.is_constant():
                continue
            rest = uni.get(0, ring.zero)
            rhs = (-rest).div_scalar(coeff.constant_value())
            rules[name] = rhs
            # keep existing right-hand sides reduced w.r.t. the new rule
            for k in list(rules):
                if k != name and rules[k].involves(name):
                    rules[k] = substitute(rules[k], {name: rhs}, ring).as_poly()
            solved = True
            break
        if not solved:
            raise NonlinearInHighest(
                f"cannot solve condition {rel.render()} for a top symbol")
    return rules


def _apply_rules(poly, rules):
    ring = poly.ring
    live = {n: r for n, r in rules.items() if poly.involves(n)}
    if not live:
        return poly
    return substitute(poly, live, ring).as_poly()
