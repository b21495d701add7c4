"""Reduced rational functions over a differential coefficient ring.

Every constructing operation reduces to lowest terms and normalises the
denominator monic under the canonical term order, so representations are
unique and equality is structural.
"""
from __future__ import annotations

from fractions import Fraction

from ..errors import AlgebraError, DenominatorVanishes, NumericPole, ZeroDenominator
from .gcd import poly_gcd
from .poly import MultiPoly
from .ring import Ring


class RationalFn:
    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly, _reduced=False):
        if not _reduced:
            reduced = rat_reduce(num, den)
            num, den = reduced.num, reduced.den
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_one()

    def as_poly(self):
        if not self.den.is_one():
            raise AlgebraError("rational function is not polynomial")
        return self.num

    def __eq__(self, other):
        other = _as_ratfn(self.ring, other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _as_ratfn(self.ring, other)
        if other is None:
            return NotImplemented
        return rat_reduce(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = _as_ratfn(self.ring, other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_ratfn(self.ring, other)
        if other is None:
            return NotImplemented
        return rat_reduce(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfn(self.ring, other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDenominator("division by zero rational function")
        return rat_reduce(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_ratfn(self.ring, other)
        return other / self

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        return RationalFn(self.num ** n, self.den ** n, _reduced=True)

    def inv(self):
        if self.num.is_zero():
            raise ZeroDenominator("inverse of zero")
        return rat_reduce(self.den, self.num)

    # -- calculus ------------------------------------------------------------

    def derivative(self):
        """z-derivation through the quotient rule, reduced."""
        dn = self.num.derivative()
        dd = self.den.derivative()
        if dd.is_zero():
            return rat_reduce(dn, self.den)
        return rat_reduce(dn * self.den - self.num * dd, self.den * self.den)

    def partial(self, name):
        dn = self.num.partial(name)
        dd = self.den.partial(name)
        if dd.is_zero():
            return rat_reduce(dn, self.den)
        return rat_reduce(dn * self.den - self.num * dd, self.den * self.den)

    # -- rendering ------------------------------------------------------------

    def render(self):
        if self.den.is_one():
            return self.num.render()
        n = self.num.render()
        d = self.den.render()
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"<{self.render()}>"


def _as_ratfn(ring, value):
    if isinstance(value, RationalFn):
        if value.ring is ring:
            return value
        return RationalFn(ring.embed(value.num), ring.embed(value.den), _reduced=True)
    if isinstance(value, MultiPoly):
        return RationalFn(ring.embed(value), ring.one, _reduced=True)
    if isinstance(value, (int, Fraction)):
        return RationalFn(ring.const(value), ring.one, _reduced=True)
    return None


def rat_reduce(num: MultiPoly, den: MultiPoly) -> RationalFn:
    """Reduced fraction num/den with monic denominator."""
    if den.is_zero():
        raise ZeroDenominator("zero denominator")
    ring = num.ring
    if num.is_zero():
        return RationalFn(ring.zero, ring.one, _reduced=True)
    g = poly_gcd(num, den)
    if not g.is_one() and not g.is_constant():
        num = num.divide_exact(g)
        den = den.divide_exact(g)
    _, lc = den.leading()
    f = ring.field
    if not f.eq(lc, f.one):
        inv = f.inv(lc)
        num = num.mul_scalar(inv)
        den = den.mul_scalar(inv)
    return RationalFn(num, den, _reduced=True)


def ratfn_const(ring: Ring, value) -> RationalFn:
    return RationalFn(ring.const(value), ring.one, _reduced=True)


def ratfn_var(ring: Ring, name) -> RationalFn:
    return RationalFn(ring.var(name), ring.one, _reduced=True)


# -- substitution -------------------------------------------------------------

def poly_substitute_pair(p: MultiPoly, bindings: dict, target: Ring):
    """Substitute generators of ``p`` by rational functions over ``target``.

    Returns an unreduced (numerator, denominator) pair.  Generators absent
    from ``bindings`` must exist in the target ring by name.
    """
    src = p.ring
    bound = {}
    for name, value in bindings.items():
        pos = src.index.get(name)
        if pos is None:
            raise AlgebraError(f"cannot bind unknown generator {name!r}")
        rf = _as_ratfn(target, value)
        if rf is None:
            raise AlgebraError(f"binding for {name!r} is not a ring value")
        bound[pos] = rf
    if p.is_zero():
        return target.zero, target.one
    posmap = {}
    for i, name in enumerate(src.gen_names):
        if i in bound:
            continue
        tgt = target.index.get(name)
        if tgt is None:
            if any(e[i] for e in p.terms):
                raise AlgebraError(f"generator {name!r} missing from target ring")
            tgt = -1
        posmap[i] = tgt
    maxdeg = {pos: max(e[pos] for e in p.terms) for pos in bound}
    num_pows = {}
    den_pows = {}
    for pos, rf in bound.items():
        m = maxdeg[pos]
        npws = [target.one]
        dpws = [target.one]
        for _ in range(m):
            npws.append(npws[-1] * rf.num)
            dpws.append(dpws[-1] * rf.den)
        num_pows[pos] = npws
        den_pows[pos] = dpws
    denominator = target.one
    for pos, rf in bound.items():
        denominator = denominator * den_pows[pos][maxdeg[pos]]
    same_field = src.field == target.field
    total = target.zero
    for e, c in p.terms.items():
        exp = [0] * target.ngens
        for i, k in enumerate(e):
            if k and i not in bound:
                exp[posmap[i]] = k
        if not same_field:
            c = target.field.coerce(c, src.field)
        piece = MultiPoly(target, target.normalize_terms({tuple(exp): c}))
        for pos in bound:
            k = e[pos]
            piece = piece * num_pows[pos][k]
            if k < maxdeg[pos]:
                piece = piece * den_pows[pos][maxdeg[pos] - k]
        total = total + piece
    return total, denominator


def substitute(f: RationalFn | MultiPoly, bindings: dict, target: Ring = None) -> RationalFn:
    """Exact composed substitution, reduced.

    Raises DenominatorVanishes when the substituted denominator is
    identically zero.
    """
    if isinstance(f, MultiPoly):
        f = RationalFn(f, f.ring.one, _reduced=True)
    if target is None:
        target = f.ring
    if not bindings:
        if target is f.ring:
            return f
        return _as_ratfn(target, f)
    nn, nd = poly_substitute_pair(f.num, bindings, target)
    dn, dd = poly_substitute_pair(f.den, bindings, target)
    if dn.is_zero():
        raise DenominatorVanishes("substitution made the denominator vanish")
    return rat_reduce(nn * dd, nd * dn)


# -- numeric evaluation --------------------------------------------------------

def poly_eval_numeric(p: MultiPoly, point: dict) -> complex:
    vals = []
    for name in p.ring.gen_names:
        vals.append(point.get(name))
    total = 0j
    f = p.ring.field
    for e, c in p.terms.items():
        term = _scalar_to_complex(f, c)
        for i, k in enumerate(e):
            if k:
                v = vals[i]
                if v is None:
                    raise AlgebraError(f"generator {p.ring.gen_names[i]!r} unbound "
                                       "in numeric evaluation")
                term *= complex(v) ** k
        total += term
    return total


def evaluate_numeric(f: RationalFn, point: dict, pole_epsilon: float = 1e-12) -> complex:
    """IEEE double-precision complex value of f at the point."""
    n = poly_eval_numeric(f.num, point)
    d = poly_eval_numeric(f.den, point)
    if abs(d) < pole_epsilon:
        raise NumericPole(f"denominator magnitude {abs(d)} below epsilon")
    return n / d


def _scalar_to_complex(field, c) -> complex:
    if field.degree == 1:
        return complex(float(c))
    root = _field_complex_root(field)
    total = 0j
    for i, q in enumerate(c):
        if q:
            total += float(q) * root ** i
    return total


_ROOT_CACHE = {
    # shipped presets use a fixed embedding: i -> +i, w -> exp(2*pi*i/3)
    (Fraction(1), Fraction(0), Fraction(1)): 1j,
    (Fraction(1), Fraction(1), Fraction(1)): complex(-0.5, 0.8660254037844386),
}


def _field_complex_root(field):
    root = _ROOT_CACHE.get(field.min_poly)
    if root is None:
        import numpy as np

        roots = np.roots([float(c) for c in reversed(field.min_poly)])
        root = complex(max(roots, key=lambda r: (r.imag, r.real)))
        _ROOT_CACHE[field.min_poly] = root
    return root
