"""Multivariate polynomial GCD: content/primitive-part recursion with
subresultant pseudo-remainder sequences on the innermost variable.

Deterministic by construction.  A random-evaluation coprimality probe (a
one-sided certificate: a trivial evaluated gcd with preserved degrees proves
the primitive parts are coprime) short-circuits the common case before any
pseudo-division happens.
"""
from __future__ import annotations

import random

from .poly import MultiPoly

_PROBE_TRIES = 4
_PROBE_SEED = 0x5EED


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """A gcd of a and b, normalised to leading coefficient 1 (gcd(0,0) = 0)."""
    if a.ring is not b.ring:
        b = a.ring.embed(b)
    g = _gcd(a, b)
    return g.monic()


def _gcd(a, b):
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.is_constant() or b.is_constant():
        return a.ring.one
    ma, mb = a.monomial_content(), b.monomial_content()
    common = tuple(min(x, y) for x, y in zip(ma, mb))
    a0 = a.divide_by_monomial(ma)
    b0 = b.divide_by_monomial(mb)
    mono = MultiPoly(a.ring, {common: a.ring.field.one})
    core = _gcd_stripped(a0, b0)
    return mono * core


def _gcd_stripped(a, b):
    """gcd of polynomials with trivial monomial content."""
    ring = a.ring
    if a.is_constant() or b.is_constant():
        return ring.one
    va, vb = set(a.variables()), set(b.variables())
    overlap = va & vb
    if not overlap:
        return ring.one
    var = min(overlap, key=lambda n: min(a.degree_in(n), b.degree_in(n)))
    ua, ub = a.as_univariate(var), b.as_univariate(var)
    ca = _gcd_list(list(ua.values()))
    cb = _gcd_list(list(ub.values()))
    pa = {d: c.divide_exact(ca) for d, c in ua.items()}
    pb = {d: c.divide_exact(cb) for d, c in ub.items()}
    cont = _gcd(ca, cb)
    if min(ua) > 0 or min(ub) > 0:
        # var itself divides one side's primitive part only if it divides all
        # coefficients, which the monomial strip already excluded
        pass
    if _probe_coprime(pa, pb, var, ring):
        return cont
    prs = _subresultant_prs(pa, pb, var, ring)
    return cont * prs


def _gcd_list(polys):
    g = polys[0]
    for p in polys[1:]:
        if g.is_constant():
            break
        g = _gcd(g, p)
    return g.monic() if not g.is_zero() else g


def _univar_deg(u):
    return max(u)


def _univar_to_poly(u, var, ring):
    pos = ring.index[var]
    out = {}
    for d, coeff in u.items():
        for e, c in coeff.terms.items():
            out[e[:pos] + (d,) + e[pos + 1:]] = c
    return MultiPoly(ring, out)


# -- coprimality probe -------------------------------------------------------

def _probe_coprime(pa, pb, var, ring):
    f = ring.field
    rng = random.Random(_PROBE_SEED)
    names = [n for n in ring.gen_names if n != var]
    da, db = _univar_deg(pa), _univar_deg(pb)
    if da == 0 or db == 0:
        # a primitive part constant in the main variable: coprime by construction
        return True
    for _ in range(_PROBE_TRIES):
        point = {n: f.from_int(rng.randrange(2, 97)) for n in names}
        ua = _eval_univar(pa, point, f, ring)
        ub = _eval_univar(pb, point, f, ring)
        if len(ua) - 1 != da or len(ub) - 1 != db:
            continue  # leading coefficient vanished; try another point
        if _scalar_gcd_degree(ua, ub, f) == 0:
            return True
    return False


def _eval_univar(u, point, field, ring):
    vals = [point.get(n) for n in ring.gen_names]
    deg = _univar_deg(u)
    out = [field.zero] * (deg + 1)
    for d, coeff in u.items():
        acc = field.zero
        for e, c in coeff.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v = field.mul(v, field.pow(vals[i], k))
            acc = field.add(acc, v)
        out[d] = acc
    while out and field.is_zero(out[-1]):
        out.pop()
    return out


def _scalar_gcd_degree(ua, ub, field):
    a, b = list(ua), list(ub)
    while b:
        if len(a) < len(b):
            a, b = b, a
            continue
        inv = field.inv(b[-1])
        while len(a) >= len(b) and a:
            if field.is_zero(a[-1]):
                a.pop()
                continue
            shift = len(a) - len(b)
            c = field.mul(a[-1], inv)
            for j, bj in enumerate(b):
                a[shift + j] = field.sub(a[shift + j], field.mul(c, bj))
            while a and field.is_zero(a[-1]):
                a.pop()
        a, b = b, a
    return len(a) - 1


# -- subresultant PRS --------------------------------------------------------

def _subresultant_prs(pa, pb, var, ring):
    """Primitive gcd of two var-primitive univariate polynomials."""
    if _univar_deg(pa) < _univar_deg(pb):
        pa, pb = pb, pa
    A, B = pa, pb
    g = ring.one
    h = ring.one
    while True:
        delta = _univar_deg(A) - _univar_deg(B)
        R = _pseudo_rem(A, B, ring)
        if not R:
            break
        if _univar_deg(R) == 0:
            return ring.one
        divisor = g * (h ** delta)
        A = B
        B = {d: c.divide_exact(divisor) for d, c in R.items()}
        g = A[_univar_deg(A)]
        if delta == 0:
            h = h
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).divide_exact(h ** (delta - 1))
    coeffs = list(B.values())
    cont = _gcd_list(coeffs)
    prim = {d: c.divide_exact(cont) for d, c in B.items()}
    return _univar_to_poly(prim, var, ring)


def _pseudo_rem(A, B, ring):
    """Subresultant pseudo-remainder lc(B)^(dA-dB+1) * A mod B."""
    dB = _univar_deg(B)
    lB = B[dB]
    R = dict(A)
    e = _univar_deg(A) - dB + 1
    while R and _univar_deg(R) >= dB:
        dR = _univar_deg(R)
        lR = R[dR]
        shift = dR - dB
        Rn = {}
        for d, c in R.items():
            if d != dR:
                Rn[d] = c * lB
        for d, c in B.items():
            if d != dB:
                t = Rn.get(d + shift, ring.zero) - lR * c
                if t.is_zero():
                    Rn.pop(d + shift, None)
                else:
                    Rn[d + shift] = t
        R = {d: c for d, c in Rn.items() if not c.is_zero()}
        e -= 1
    if e > 0 and R:
        mult = lB ** e
        R = {d: c * mult for d, c in R.items()}
    return R
