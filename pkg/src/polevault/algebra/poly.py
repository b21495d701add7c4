"""Sparse multivariate polynomials over a differential coefficient ring.

Terms map exponent tuples to nonzero field scalars.  The canonical term
order is lexicographic in the ring's generator order (chart variables first,
then z, then derivative symbols), which makes printing deterministic.
"""
from __future__ import annotations

from fractions import Fraction

from ..errors import AlgebraError
from .ring import Ring


def _coerce_other(ring, other):
    if isinstance(other, MultiPoly):
        if other.ring is ring:
            return other
        return ring.embed(other)
    if isinstance(other, (int, Fraction)):
        return ring.const(other)
    return None


class MultiPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        """The scalar value of a constant polynomial."""
        if not self.terms:
            return self.ring.field.zero
        [(exp, coeff)] = self.terms.items()
        if any(exp):
            raise AlgebraError("polynomial is not constant")
        return coeff

    def is_one(self):
        if len(self.terms) != 1:
            return False
        [(exp, coeff)] = self.terms.items()
        return not any(exp) and self.ring.field.eq(coeff, self.ring.field.one)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = _coerce_other(self.ring, other)
        if other is None:
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- arithmetic -----------------------------------------------------------

    def __neg__(self):
        f = self.ring.field
        return MultiPoly(self.ring, {e: f.neg(c) for e, c in self.terms.items()})

    def __add__(self, other):
        other = _coerce_other(self.ring, other)
        if other is None:
            return NotImplemented
        f = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            acc = out.get(e)
            if acc is None:
                out[e] = c
            else:
                s = f.add(acc, c)
                if f.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_other(self.ring, other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_other(self.ring, other)
        if other is None:
            return NotImplemented
        f = self.ring.field
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                c = f.mul(ca, cb)
                acc = out.get(e)
                c = c if acc is None else f.add(acc, c)
                if f.is_zero(c):
                    out.pop(e, None)
                else:
                    out[e] = c
        if self.ring.relations:
            out = self.ring.normalize_terms(out)
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def mul_scalar(self, scalar):
        f = self.ring.field
        if isinstance(scalar, (int, Fraction)):
            scalar = f.from_fraction(Fraction(scalar))
        if f.is_zero(scalar):
            return self.ring.zero
        return MultiPoly(self.ring, {e: f.mul(c, scalar) for e, c in self.terms.items()})

    def div_scalar(self, scalar):
        f = self.ring.field
        if isinstance(scalar, (int, Fraction)):
            scalar = f.from_fraction(Fraction(scalar))
        return self.mul_scalar(f.inv(scalar))

    def __pow__(self, n):
        if n < 0:
            raise AlgebraError("negative power of a polynomial")
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            if n > 1:
                base = base * base
            n >>= 1
        return out

    # -- structure -----------------------------------------------------------

    def degree_in(self, name):
        pos = self.ring.index[name]
        return max((e[pos] for e in self.terms), default=-1)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self):
        """Names of generators that actually occur."""
        ring = self.ring
        seen = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    seen.add(i)
        return [ring.gen_names[i] for i in sorted(seen)]

    def involves(self, name):
        pos = self.ring.index[name]
        return any(e[pos] for e in self.terms)

    def leading(self):
        """(exponent, coefficient) of the lex-largest term."""
        if not self.terms:
            raise AlgebraError("zero polynomial has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def monic(self):
        """Divide by the leading coefficient (canonical term order)."""
        if not self.terms:
            return self
        _, lc = self.leading()
        f = self.ring.field
        if f.eq(lc, f.one):
            return self
        return self.mul_scalar(f.inv(lc))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def as_univariate(self, name):
        """Split as a polynomial in one generator: {degree: coefficient poly}."""
        pos = self.ring.index[name]
        out = {}
        for e, c in self.terms.items():
            d = e[pos]
            e0 = e[:pos] + (0,) + e[pos + 1:]
            acc = out.setdefault(d, {})
            acc[e0] = c  # exponents unique per degree, no accumulation needed
        return {d: MultiPoly(self.ring, t) for d, t in out.items()}

    def coefficient_of(self, name, power):
        return self.as_univariate(name).get(power, self.ring.zero)

    # -- restriction and simple division ------------------------------------

    def set_var_zero(self, name):
        """Restriction to {name = 0}: keep terms free of the generator."""
        pos = self.ring.index[name]
        return MultiPoly(self.ring, {e: c for e, c in self.terms.items() if not e[pos]})

    def divisible_by_var(self, name):
        pos = self.ring.index[name]
        return bool(self.terms) and all(e[pos] for e in self.terms)

    def divide_by_var(self, name, power=1):
        pos = self.ring.index[name]
        out = {}
        for e, c in self.terms.items():
            if e[pos] < power:
                raise AlgebraError(f"not divisible by {name}^{power}")
            out[e[:pos] + (e[pos] - power,) + e[pos + 1:]] = c
        return MultiPoly(self.ring, out)

    def min_degree_in(self, name):
        pos = self.ring.index[name]
        return min((e[pos] for e in self.terms), default=0)

    def monomial_content(self):
        """Exponent vector of the largest common monomial factor."""
        it = iter(self.terms)
        try:
            mins = list(next(it))
        except StopIteration:
            return (0,) * self.ring.ngens
        for e in it:
            for i, k in enumerate(e):
                if k < mins[i]:
                    mins[i] = k
            if not any(mins):
                break
        return tuple(mins)

    def divide_by_monomial(self, mon):
        if not any(mon):
            return self
        return MultiPoly(self.ring, {
            tuple(x - y for x, y in zip(e, mon)): c for e, c in self.terms.items()})

    def divide_exact(self, divisor):
        """Exact multivariate division; returns None when not divisible."""
        divisor = _coerce_other(self.ring, divisor)
        if divisor is None or divisor.is_zero():
            raise AlgebraError("division by zero polynomial")
        if divisor.is_constant():
            return self.div_scalar(divisor.constant_value())
        f = self.ring.field
        lead_e, lead_c = divisor.leading()
        lead_c_inv = f.inv(lead_c)
        rem = dict(self.terms)
        quo = {}
        while rem:
            e = max(rem)
            c = rem[e]
            qe = tuple(x - y for x, y in zip(e, lead_e))
            if any(x < 0 for x in qe):
                return None
            qc = f.mul(c, lead_c_inv)
            quo[qe] = qc
            for de, dc in divisor.terms.items():
                te = tuple(x + y for x, y in zip(qe, de))
                acc = rem.get(te)
                val = f.neg(f.mul(qc, dc)) if acc is None else f.sub(acc, f.mul(qc, dc))
                if f.is_zero(val):
                    rem.pop(te, None)
                else:
                    rem[te] = val
        return MultiPoly(self.ring, quo)

    # -- derivation -----------------------------------------------------------

    def derivative(self):
        """Apply the z-derivation: chart variables are constants, D(z) = 1,
        formal symbols shift order, parameters die."""
        ring = self.ring
        f = ring.field
        out = {}
        for e, c in self.terms.items():
            for pos, k in enumerate(e):
                if not k:
                    continue
                rule = ring.derivative_of_gen(pos)
                if rule is None:
                    continue
                coeff = f.mul_fraction(c, Fraction(k))
                if rule[0] == "const":
                    coeff = f.mul(coeff, rule[1])
                    ne = e[:pos] + (k - 1,) + e[pos + 1:]
                else:  # shift to the next-order symbol
                    tgt = rule[1]
                    ne = list(e)
                    ne[pos] = k - 1
                    ne[tgt] += 1
                    ne = tuple(ne)
                acc = out.get(ne)
                coeff = coeff if acc is None else f.add(acc, coeff)
                if f.is_zero(coeff):
                    out.pop(ne, None)
                else:
                    out[ne] = coeff
        return MultiPoly(ring, out)

    def partial(self, name):
        """Formal partial derivative with respect to one generator."""
        pos = self.ring.index[name]
        f = self.ring.field
        out = {}
        for e, c in self.terms.items():
            k = e[pos]
            if k:
                out[e[:pos] + (k - 1,) + e[pos + 1:]] = f.mul_fraction(c, Fraction(k))
        return MultiPoly(self.ring, out)

    # -- rendering -----------------------------------------------------------

    def render(self):
        if not self.terms:
            return "0"
        f = self.ring.field
        names = self.ring.gen_names
        pieces = []
        for e, c in self.sorted_terms():
            mon = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(names, e) if k)
            ctext = f.render(c)
            if mon:
                if ctext == "1":
                    text = mon
                elif ctext == "-1":
                    text = "-" + mon
                else:
                    if not f.is_atom(c) and not f.is_atom(f.neg(c)):
                        ctext = f"({ctext})"
                        text = f"{ctext}*{mon}"
                    else:
                        text = f"{ctext}*{mon}"
            else:
                text = ctext
            pieces.append(text)
        out = pieces[0]
        for p in pieces[1:]:
            if p.startswith("-"):
                out += " - " + p[1:]
            else:
                out += " + " + p
        return out

    def __repr__(self):
        return f"<{self.render()}>"
