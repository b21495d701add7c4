"""Number fields Q[t]/(m(t)) and exact scalar arithmetic.

Scalars of the rational field are plain ``fractions.Fraction``; scalars of a
proper extension are tuples of Fractions of length deg(m).  All operations go
through the owning :class:`NumberField`, which keeps the polynomial layer
agnostic of the coefficient representation.
"""
from __future__ import annotations

from fractions import Fraction

from ..errors import UnsupportedField, WidenRequest, ZeroDenominator

Rat = Fraction


# -- dense univariate helpers over Fraction (ascending coefficients) --------

def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _poly_trim(out)


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - len(b)
        c = a[-1] * inv
        q[k] = c
        for j, bj in enumerate(b):
            a[k + j] -= c * bj
        _poly_trim(a)
    return _poly_trim(q), a


def _poly_ext_gcd(a, b):
    """Return (g, s, t) with s*a + t*b = g over Q[t]."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
    return r0, s0, t0


def _int_nth_root(n, k):
    """Exact integer k-th root of n >= 0, or None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    lo, hi = 0, 1
    while hi ** k <= n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo ** k == n else None


def rational_kth_root(c: Fraction, k: int):
    """Exact rational solution of x^k = c, or None."""
    if c == 0:
        return Fraction(0)
    neg = c < 0
    if neg and k % 2 == 0:
        return None
    a = _int_nth_root(abs(c.numerator), k)
    b = _int_nth_root(abs(c.denominator), k)
    if a is None or b is None:
        return None
    r = Fraction(a, b)
    return -r if neg else r


class NumberField:
    """Q[t]/(m(t)) with m monic (degree 1 means Q itself).

    Irreducibility of custom minimal polynomials is the caller's
    responsibility; a trial factorisation catches rational roots and, for
    integer quartics, quadratic factors over Z.
    """

    def __init__(self, name: str, gen_name: str, min_poly, torsion=None):
        mp = tuple(Fraction(c) for c in min_poly)
        if not mp or mp[-1] != 1:
            raise UnsupportedField("minimal polynomial must be monic")
        self.name = name
        self.gen_name = gen_name
        self.min_poly = mp
        self.degree = len(mp) - 1
        if self.degree < 1:
            raise UnsupportedField("minimal polynomial must have degree >= 1")
        if self.degree > 1:
            self._check_trial_factorisation()
        self._pow_table = self._gen_powers()
        self.zero = Fraction(0) if self.degree == 1 else (Fraction(0),) * self.degree
        self.one = self.from_fraction(Fraction(1))
        self._torsion = torsion

    # -- construction ----------------------------------------------------

    def _check_trial_factorisation(self):
        mp = self.min_poly
        c0 = mp[0]
        if c0 == 0:
            raise UnsupportedField("minimal polynomial is reducible (t divides it)")
        if c0.denominator == 1:
            num = abs(c0.numerator)
            divs = [d for d in range(1, num + 1) if num % d == 0]
        else:
            divs = []
        for p in divs:
            for r in (Fraction(p), Fraction(-p)):
                if sum(c * r ** i for i, c in enumerate(mp)) == 0:
                    raise UnsupportedField(f"minimal polynomial has rational root {r}")
        if self.degree == 4 and all(c.denominator == 1 for c in mp):
            a0 = int(mp[0])
            bound = sum(abs(int(c)) for c in mp) + 1
            for q0 in range(-abs(a0), abs(a0) + 1):
                if q0 == 0 or a0 % q0:
                    continue
                for q1 in range(-bound, bound + 1):
                    _, rem = _poly_divmod(list(mp), [Fraction(q0), Fraction(q1), Fraction(1)])
                    if not rem:
                        raise UnsupportedField("minimal polynomial has a quadratic factor")

    def _gen_powers(self):
        d = self.degree
        if d == 1:
            return None
        table = []
        cur = [Fraction(0)] * d
        cur[0] = Fraction(1)
        for _ in range(2 * d - 1):
            table.append(tuple(cur))
            carry = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if carry:
                for i in range(d):
                    cur[i] -= carry * self.min_poly[i]
        return table

    # -- scalar construction ----------------------------------------------

    def from_fraction(self, q):
        q = Fraction(q)
        if self.degree == 1:
            return q
        return (q,) + (Fraction(0),) * (self.degree - 1)

    def from_int(self, n):
        return self.from_fraction(Fraction(n))

    def gen(self):
        if self.degree == 1:
            raise UnsupportedField("the rational field has no generator")
        return self._pow_table[1]

    def coerce(self, value, other=None):
        """Bring a raw scalar of field ``other`` (or a Fraction/int) into self."""
        if isinstance(value, (int, Fraction)):
            return self.from_fraction(Fraction(value))
        if other is None or other is self or other.min_poly == self.min_poly:
            return value
        if other.degree == 1:
            return self.from_fraction(value)
        frac = other.as_fraction(value)
        if frac is not None:
            return self.from_fraction(frac)
        raise UnsupportedField(f"cannot coerce {other.name} element into {self.name}")

    # -- predicates ---------------------------------------------------------

    def is_zero(self, a):
        if self.degree == 1:
            return a == 0
        return all(c == 0 for c in a)

    def eq(self, a, b):
        return a == b

    def is_rational(self, a):
        return self.degree == 1 or all(c == 0 for c in a[1:])

    def as_fraction(self, a):
        if self.degree == 1:
            return a
        if all(c == 0 for c in a[1:]):
            return a[0]
        return None

    # -- arithmetic -----------------------------------------------------------

    def add(self, a, b):
        if self.degree == 1:
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        if self.degree == 1:
            return a - b
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        if self.degree == 1:
            return -a
        return tuple(-x for x in a)

    def mul(self, a, b):
        if self.degree == 1:
            return a * b
        d = self.degree
        acc = [Fraction(0)] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        acc[i + j] += ai * bj
        out = [Fraction(0)] * d
        for k, c in enumerate(acc):
            if c:
                pk = self._pow_table[k]
                for i in range(d):
                    out[i] += c * pk[i]
        return tuple(out)

    def mul_fraction(self, a, q):
        if self.degree == 1:
            return a * q
        return tuple(x * q for x in a)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDenominator("scalar division by zero")
        if self.degree == 1:
            return 1 / a
        g, s, _ = _poly_ext_gcd(_poly_trim(list(a)), list(self.min_poly))
        c = g[0]
        s = [x / c for x in s]
        s += [Fraction(0)] * self.degree
        return tuple(s[: self.degree])

    def div(self, a, b):
        if self.degree == 1:
            if b == 0:
                raise ZeroDenominator("scalar division by zero")
            return a / b
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        out = self.one
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    # -- roots of unity and binomial roots ---------------------------------

    def roots_of_unity(self):
        """Torsion elements (preset fields carry the full table; else ±1)."""
        if self._torsion is not None:
            return list(self._torsion)
        return [self.one, self.neg(self.one)]

    def kth_roots_of_unity(self, k):
        return [z for z in self.roots_of_unity() if self.eq(self.pow(z, k), self.one)]

    def roots_of_scalar(self, c, k):
        """All field solutions of x^k = c (c rational or rational-valued).

        Raises WidenRequest when the field holds fewer than the k roots that
        exist over C, so the caller may retry over a preset cyclotomic field.
        """
        cf = Fraction(c) if isinstance(c, (int, Fraction)) else self.as_fraction(c)
        if cf is None:
            return [z for z in self.roots_of_unity() if self.eq(self.pow(z, k), c)]
        cf = Fraction(cf)
        if cf == 0:
            return [self.zero]
        target = self.from_fraction(cf)
        base = None
        r = rational_kth_root(cf, k)
        if r is not None:
            base = self.from_fraction(r)
        else:
            r = rational_kth_root(abs(cf), k)
            if r is not None:
                for z in self.roots_of_unity():
                    cand = self.mul_fraction(z, r)
                    if self.eq(self.pow(cand, k), target):
                        base = cand
                        break
        if base is None:
            raise WidenRequest(k, cf)
        roots = []
        for z in self.kth_roots_of_unity(k):
            cand = self.mul(base, z)
            if cand not in roots:
                roots.append(cand)
        if len(roots) < k:
            raise WidenRequest(k, cf)
        return roots

    # -- rendering -----------------------------------------------------------

    def render(self, a):
        """Canonical text for a scalar: '3/2', '-1', 'i', '1/2-2*w', ..."""
        if self.degree == 1:
            return str(a)
        parts = []
        for i, c in enumerate(a):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
                continue
            mon = self.gen_name if i == 1 else f"{self.gen_name}^{i}"
            if c == 1:
                term = mon
            elif c == -1:
                term = f"-{mon}"
            else:
                term = f"{c}*{mon}"
            parts.append(term)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def is_atom(self, a):
        """True when render(a) needs no parentheses inside a product."""
        if self.degree == 1:
            return a >= 0
        nz = [(i, c) for i, c in enumerate(a) if c != 0]
        if len(nz) != 1:
            return False
        i, c = nz[0]
        return (i == 0 and c > 0) or (i > 0 and c == 1)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"NumberField({self.name})"


def _build_presets():
    qq = NumberField("QQ", "t", (Fraction(0), Fraction(1)))
    qq._torsion = [Fraction(1), Fraction(-1)]

    qi = NumberField("QQ(i)", "i", (Fraction(1), Fraction(0), Fraction(1)))
    i = qi.gen()
    qi._torsion = [qi.one, i, qi.neg(qi.one), qi.neg(i)]

    qw = NumberField("QQ(w)", "w", (Fraction(1), Fraction(1), Fraction(1)))
    w = qw.gen()
    w2 = qw.mul(w, w)
    qw._torsion = [qw.one, w, w2, qw.neg(qw.one), qw.neg(w), qw.neg(w2)]
    return {"QQ": qq, "QQ(i)": qi, "QQ(w)": qw}


PRESETS = _build_presets()
QQ = PRESETS["QQ"]
QQ_I = PRESETS["QQ(i)"]
QQ_W = PRESETS["QQ(w)"]


def widened_field(current: NumberField, request: WidenRequest) -> NumberField:
    """Choose the preset cyclotomic field that resolves a widening request."""
    k, c = request.order, request.constant
    target = None
    if k in (3, 6):
        target = "QQ(w)"
    elif k == 4:
        target = "QQ(i)"
    elif k == 2 and isinstance(c, Fraction) and c < 0:
        target = "QQ(i)"
    if target is None:
        raise UnsupportedField(
            f"no preset field supplies roots of x^{k} = {c}")
    field = PRESETS[target]
    if current.degree > 1 and field.min_poly != current.min_poly:
        raise UnsupportedField(
            f"cannot widen {current.name} to {field.name} (compositum not supported)")
    return field
