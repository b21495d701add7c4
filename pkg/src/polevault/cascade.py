"""Cascade engine: compactify plane systems to P^2, find base points on
exceptional lines, push vector fields through blow-ups with z-dependent
centres, and run the branching resolution to termination or depth limit.

Leaf taxonomy
-------------
resolved        the slow/fast slope dv/du is finite on the exceptional line:
                the line carries (transversal) regular initial value problems.
obstruction     the slope has a simple pole in the fast variable;  its
                line-restricted numerator is the resonance obstruction whose
                vanishing removes logarithms.
non-terminated  depth limit hit with base points still present.
needs-hint      the line polynomial had factors the linear/binomial solver
                cannot split.

A candidate indeterminacy that disappears when the node's obstruction is
imposed (the paper-style "present only if the condition fails" point) is a
log marker, not a base point: it is recorded on the leaf and never blown up.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dfield
from fractions import Fraction

from .algebra import (
    DiffSymbol,
    MultiPoly,
    RationalFn,
    Ring,
    poly_gcd,
    rat_reduce,
    ratfn_const,
    ratfn_var,
    substitute,
    widened_field,
)
from .charts import BasePoint, BlowUp, Chart, ChartId, blow_up_charts, projective_charts
from .conditions import condition_set
from .errors import (
    CentreNotIndeterminate,
    NonlinearInHighest,
    NotPolynomial,
    UnsupportedField,
    WidenRequest,
)

HAMILTONIAN = "hamiltonian"
SECOND_ORDER = "second-order"


@dataclass
class ProblemSystem:
    """Input system: a polynomial Hamiltonian H(z, x, y) or a second-order
    equation y'' = P(z, y, y') given as a polynomial with x standing for y'."""

    kind: str
    expr: RationalFn            # over the (x, y) chart ring
    symbols: tuple
    field: object
    max_order: int = 4

    def xy_ring(self):
        return self.expr.ring

    def widen(self, new_field):
        ring = self.xy_ring().widen(new_field)
        expr = rat_reduce(ring.embed(self.expr.num), ring.embed(self.expr.den))
        return ProblemSystem(self.kind, expr, self.symbols, new_field, self.max_order)


@dataclass
class PlaneSystem:
    chart: Chart
    rhs: tuple  # pair of RationalFn over chart.ring

    @property
    def chart_id(self):
        return self.chart.id


@dataclass
class CascadeConfig:
    max_depth: int = 24
    root_solver_policy: str = "linear+binomial"   # or "hints-only"
    hints: list = dfield(default_factory=list)
    branch_side: str = "uv"    # chart preference when a line point is polynomial in both
    max_order: int = 4


@dataclass
class CascadeNode:
    uv: PlaneSystem
    UV: PlaneSystem
    blow_up: BlowUp | None
    depth: int
    branch_label: str = ""
    base_points_found: list = dfield(default_factory=list)
    conditional_points: list = dfield(default_factory=list)
    unresolved_factors: list = dfield(default_factory=list)
    children: list = dfield(default_factory=list)
    status: str = "internal"

    def key(self):
        return self.uv.chart.id.node_key()

    def side(self, name):
        return self.uv if name == "uv" else self.UV

    def is_leaf(self):
        return not self.children

    def centre(self):
        return self.blow_up.centre if self.blow_up else None


@dataclass
class CascadeTree:
    problem: ProblemSystem
    config: CascadeConfig
    affine: PlaneSystem
    root: CascadeNode
    field: object
    widened_from: object = None

    def nodes(self):
        stack = [self.root]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.children))

    def leaves(self):
        return [n for n in self.nodes() if n.is_leaf()]

    def blow_up_count(self):
        return sum(1 for n in self.nodes()) - 1

    def find_node(self, path_prefixes):
        for n in self.nodes():
            if n.key() == tuple(path_prefixes):
                return n
        return None


# -- building plane systems ---------------------------------------------------


def make_problem(kind, expr, symbols, field, max_order=4) -> ProblemSystem:
    return ProblemSystem(kind, expr, tuple(symbols), field, max_order)


def from_hamiltonian(p: ProblemSystem) -> PlaneSystem:
    """Affine-chart system (x', y') = (dH/dy, -dH/dx), reduced."""
    if p.kind != HAMILTONIAN:
        raise NotPolynomial("problem is not a Hamiltonian system")
    H = p.expr
    if not H.is_polynomial():
        raise NotPolynomial("Hamiltonian must be polynomial in x, y")
    ring = p.xy_ring()
    chart = _affine_chart(p)
    hx = H.partial("x")
    hy = H.partial("y")
    return PlaneSystem(chart, (hy, -hx))


def from_second_order(p: ProblemSystem) -> PlaneSystem:
    """System x = y' with x' = P(z, y, x)."""
    if p.kind != SECOND_ORDER:
        raise NotPolynomial("problem is not a second-order equation")
    P = p.expr
    if not P.is_polynomial():
        raise NotPolynomial("right-hand side must be polynomial")
    chart = _affine_chart(p)
    return PlaneSystem(chart, (P, ratfn_var(chart.ring, "x")))


def _affine_chart(p: ProblemSystem):
    coeff = Ring(p.field, (), p.symbols, p.max_order)
    affine, _, _ = projective_charts(coeff)
    return affine


def plane_system(p: ProblemSystem) -> PlaneSystem:
    return from_hamiltonian(p) if p.kind == HAMILTONIAN else from_second_order(p)


def compactify(sys: PlaneSystem, p: ProblemSystem):
    """The uv and UV systems on the two charts at infinity of P^2."""
    coeff = Ring(p.field, (), p.symbols, p.max_order)
    _, uv, cap = projective_charts(coeff)
    X, Y = sys.rhs

    u, v = ratfn_var(uv.ring, "u"), ratfn_var(uv.ring, "v")
    bind_uv = {"x": u.inv(), "y": v / u}
    Xs = substitute(X, bind_uv, uv.ring)
    Ys = substitute(Y, bind_uv, uv.ring)
    du = -(u * u) * Xs
    dv = u * Ys - v * u * Xs
    sys_uv = PlaneSystem(uv, (du, dv))

    U, V = ratfn_var(cap.ring, "U"), ratfn_var(cap.ring, "V")
    bind_UV = {"x": U / V, "y": V.inv()}
    Xc = substitute(X, bind_UV, cap.ring)
    Yc = substitute(Y, bind_UV, cap.ring)
    dU = V * Xc - U * V * Yc
    dV = -(V * V) * Yc
    sys_UV = PlaneSystem(cap, (dU, dV))
    return sys_uv, sys_UV


def pushforward(node: CascadeNode, blow_up: BlowUp):
    """Systems on the two charts of a blow-up, derivative-corrected for
    z-dependent centres and reduced."""
    centre = blow_up.centre
    parent = node.uv if centre.chart == node.uv.chart.id else node.UV
    if centre.chart != parent.chart.id:
        raise CentreNotIndeterminate("centre chart does not belong to the node")
    P, Q = parent.rhs
    s, t = centre.coords
    sp = rat_reduce(s.derivative(), s.ring.one)
    tp = rat_reduce(t.derivative(), t.ring.one)

    out = []
    for chart, fast_first in ((blow_up.chart_uv, True), (blow_up.chart_UV, False)):
        ring = chart.ring
        Ps = substitute(P, chart.down_bindings, ring)
        Qs = substitute(Q, chart.down_bindings, ring)
        sps = substitute(sp, {}, ring)
        tps = substitute(tp, {}, ring)
        a = ratfn_var(ring, chart.vars[0])
        b = ratfn_var(ring, chart.vars[1])
        if fast_first:
            # u = s + a, v = t + a*b:   a' = u' - s',  b' = (v' - t' - b a')/a
            da = Ps - sps
            db = (Qs - tps - b * da) / a
        else:
            # u = s + A*B, v = t + B:   B' = v' - t',  A' = (u' - s' - A B')/B
            db = Qs - tps
            da = (Ps - sps - a * db) / b
        out.append(PlaneSystem(chart, (da, db)))
    return out[0], out[1]


# -- base point detection ------------------------------------------------------


@dataclass
class _Candidate:
    side: str                  # chart side it is represented on
    coords: tuple              # (fast value, slow value) over the coefficient ring
    provenance: str
    indeterminate: tuple       # indices of 0/0 components on that side
    is_origin: bool


def coeff_restrict(poly: MultiPoly, cring: Ring) -> MultiPoly:
    """Move a chart-variable-free polynomial into the coefficient ring."""
    ring = poly.ring
    keep = [i for i, nm in enumerate(ring.gen_names) if nm in cring.index]
    dropped = [i for i in range(ring.ngens) if i not in keep]
    terms = {}
    for e, c in poly.terms.items():
        if any(e[i] for i in dropped):
            raise CentreNotIndeterminate("polynomial is not chart-variable-free")
        terms[tuple(e[i] for i in keep)] = c
    return MultiPoly(cring, terms)


def _line_component_data(ps: PlaneSystem):
    """Per-component (numerator, denominator) restricted to the line."""
    line = ps.chart.line_var
    out = []
    for rf in ps.rhs:
        out.append((rf.num.set_var_zero(line), rf.den.set_var_zero(line)))
    return out


def _solve_line_poly(poly, slow, field, policy):
    """Roots of a line polynomial in the slow variable: monomial, linear and
    binomial factors; everything else is returned unresolved."""
    roots = []
    unresolved = []
    if poly.is_zero() or poly.is_constant():
        return roots, unresolved
    uni = poly.as_univariate(slow)
    mindeg = min(uni)
    if mindeg > 0:
        roots.append(("origin", None))
        uni = {d - mindeg: c for d, c in uni.items()}
    degs = sorted(uni)
    if degs == [0]:
        return roots, unresolved
    cring = poly.ring
    if degs[-1] == 1:
        c1, c0 = uni[1], uni.get(0, cring.zero)
        if c0.is_zero():
            if ("origin", None) not in roots:
                roots.append(("origin", None))
            return roots, unresolved
        if c1.is_constant():
            roots.append(("value", (-c0).div_scalar(c1.constant_value())))
        else:
            q = (-c0).divide_exact(c1)
            if q is not None:
                roots.append(("value", q))
            else:
                unresolved.append(poly)
        return roots, unresolved
    if len(degs) == 2 and degs[0] == 0:
        k = degs[1]
        ck, c0 = uni[k], uni[0]
        if ck.is_constant() and c0.is_constant():
            target = cring.field.neg(cring.field.div(c0.constant_value(), ck.constant_value()))
            for r in cring.field.roots_of_scalar(target, k):  # may raise WidenRequest
                roots.append(("value", cring.const(r)))
            return roots, unresolved
    unresolved.append(poly)
    return roots, unresolved


def _coeff_value(value, cring):
    """Coerce a chart-variable-free value into a coefficient-ring fraction."""
    if isinstance(value, MultiPoly):
        if value.ring is not cring:
            value = coeff_restrict(value, cring)
        return rat_reduce(value, cring.one)
    if isinstance(value, RationalFn):
        if value.ring is not cring:
            return rat_reduce(coeff_restrict(value.num, cring),
                              coeff_restrict(value.den, cring))
        return value
    return ratfn_const(cring, value)


def _subs_point(poly, line, slow, value, cring):
    """Evaluate a chart polynomial at (line = 0, slow = value)."""
    restricted = poly.set_var_zero(line)
    bindings = {slow: _coeff_value(value, cring), line: ratfn_const(cring, 0)}
    return substitute(restricted, bindings, cring)


def _indeterminate_components(ps: PlaneSystem, value, cring):
    line, slow = ps.chart.line_var, ps.chart.slow_var
    hits = []
    infinite = []
    for i, rf in enumerate(ps.rhs):
        n = _subs_point(rf.num, line, slow, value, cring)
        d = _subs_point(rf.den, line, slow, value, cring)
        if n.is_zero() and d.is_zero():
            hits.append(i)
        elif d.is_zero():
            infinite.append(i)
    return tuple(hits), tuple(infinite)


def find_base_points(node: CascadeNode, config: CascadeConfig, is_root=False):
    """Verified base points on the node's exceptional line (or the line at
    infinity for the root pair), plus conditional log points and unsolved
    factors."""
    cring = node.uv.chart.ring.coefficient_ring()
    field = cring.field
    unresolved = []
    cands = []

    for side_name in ("uv", "UV"):
        ps = node.side(side_name)
        chart = ps.chart
        slow = chart.slow_var
        seen_here = set()
        for (nl, dl) in _line_component_data(ps):
            if dl.is_zero():
                candpoly = nl
            else:
                candpoly = poly_gcd(nl, dl)
            if config.root_solver_policy == "hints-only":
                continue
            roots, unres = _solve_line_poly(candpoly, slow, field, config.root_solver_policy)
            unresolved.extend(u for u in unres if all(u != w for w in unresolved))
            for kind, val in roots:
                key = "origin" if kind == "origin" else val.render()
                if key in seen_here:
                    continue
                seen_here.add(key)
                cands.append((side_name, kind, val))

    for hint in config.hints:
        side_name = "uv" if hint.chart == node.uv.chart.id else (
            "UV" if hint.chart == node.UV.chart.id else None)
        if side_name is None:
            continue
        fastv, slowv = _hint_fast_slow(node.side(side_name).chart, hint)
        if fastv.is_zero():
            kind = "origin" if slowv.is_zero() else "value"
            cands.append((side_name, kind, None if kind == "origin" else slowv))

    verified = []
    seen = set()
    for side_name, kind, val in cands:
        ps = node.side(side_name)
        other = node.UV if side_name == "uv" else node.uv
        other_name = "UV" if side_name == "uv" else "uv"
        value = cring.zero if kind == "origin" else val
        hits, infinite = _indeterminate_components(ps, value, cring)
        if not hits:
            continue
        if kind == "origin":
            point_id = (side_name, "origin")
            if point_id in seen:
                continue
            seen.add(point_id)
            verified.append(_Candidate(side_name, (cring.zero, cring.zero), "solved-linear",
                                       hits, True))
            continue
        # off the origin both charts must exhibit the indeterminacy
        value = _coeff_value(value, cring).as_poly()
        inv = rat_reduce(cring.one, value)
        o_hits, _ = _indeterminate_components(other, inv, cring)
        if not o_hits:
            continue
        point_id = _point_identity(side_name, value)
        if point_id in seen:
            continue
        seen.add(point_id)
        seen.add(_point_identity(other_name, inv))
        rep_side, rep_val, rep_hits = _choose_side(side_name, value, inv, config, hits, o_hits)
        verified.append(_Candidate(rep_side, (cring.zero, rep_val), "solved-linear",
                                   rep_hits, False))

    verified.sort(key=lambda c: (c.side, c.coords[1].render()))
    genuine, conditional = _split_conditional(node, verified, cring)
    points = [_to_base_point(node, c) for c in genuine]
    conditionals = [_to_base_point(node, c) for c in conditional]
    return points, conditionals, unresolved


def _hint_fast_slow(chart, hint):
    a, b = hint.coords
    if chart.line_var == chart.vars[0]:
        return a, b
    return b, a


def _point_identity(side, value):
    if isinstance(value, MultiPoly):
        return (side, value.render())
    if value.is_polynomial():
        return (side, value.num.render())
    return (side, value.render())


def _choose_side(side_name, value, inv, config, hits, o_hits):
    """Pick the chart that represents a shared line point, preferring
    polynomial coordinates and then the configured side."""
    if not inv.is_polynomial():
        return side_name, value, hits
    other = "UV" if side_name == "uv" else "uv"
    if config.branch_side == other:
        return other, inv.as_poly(), o_hits
    return side_name, value, hits


def _split_conditional(node, cands, cring):
    """Drop candidates whose indeterminacy exists only because the node's
    obstruction is (formally) nonzero."""
    genuine, conditional = [], []
    suspects = [c for c in cands if _conditional_shape(node, c)]
    if not suspects:
        return cands, []
    obstruction = _line_obstruction_candidate(node)
    if obstruction is None:
        return cands, []
    try:
        conds = condition_set(cring, [obstruction])
    except NonlinearInHighest:
        return cands, []
    for c in cands:
        if c not in suspects:
            genuine.append(c)
            continue
        ps = node.side(c.side)
        line, slow = ps.chart.line_var, ps.chart.slow_var
        value = rat_reduce(cring.embed(c.coords[1]), cring.one)
        still = False
        for i in c.indeterminate:
            rf = ps.rhs[i]
            num = conds.rewrite(rf.num)
            den = conds.rewrite(rf.den)
            red = rat_reduce(num, den)
            n = _subs_point(red.num, line, slow, value, cring)
            d = _subs_point(red.den, line, slow, value, cring)
            if n.is_zero() and d.is_zero():
                still = True
                break
        (genuine if still else conditional).append(c)
    return genuine, conditional


def _conditional_shape(node, cand: _Candidate):
    """A candidate looks log-conditional when only the slow component is
    indeterminate and the fast component is strictly infinite there."""
    ps = node.side(cand.side)
    fast_idx = 0 if ps.chart.line_var == ps.chart.vars[0] else 1
    slow_idx = 1 - fast_idx
    if tuple(cand.indeterminate) != (slow_idx,):
        return False
    cring = ps.chart.ring.coefficient_ring()
    value = cand.coords[1]
    rf = ps.rhs[fast_idx]
    line, slow = ps.chart.line_var, ps.chart.slow_var
    n = _subs_point(rf.num, line, slow, value, cring)
    d = _subs_point(rf.den, line, slow, value, cring)
    return d.is_zero() and not n.is_zero()


def _line_obstruction_candidate(node):
    """The uv-side slow numerator restricted to the line, when the slope
    dv/du has a pole there and the restriction is chart-variable-free."""
    ps = node.uv
    line, slow = ps.chart.line_var, ps.chart.slow_var
    du, dv = ps.rhs
    if du.is_zero() or dv.is_zero():
        return None
    slope = dv / du
    k = slope.den.min_degree_in(line)
    if k < 1:
        return None
    n = dv.num.set_var_zero(line)
    if n.is_zero() or n.involves(slow):
        return None
    if n.is_constant():
        return None  # scalar obstruction can never vanish: candidates are genuine
    return coeff_restrict(n, ps.chart.ring.coefficient_ring())


def _to_base_point(node, cand: _Candidate):
    ps = node.side(cand.side)
    chart = ps.chart
    # coords ordered as the chart's variables: line var slot 0 or 1
    if chart.line_var == chart.vars[0]:
        coords = (cand.coords[0], cand.coords[1])
    else:
        coords = (cand.coords[1], cand.coords[0])
    return BasePoint(chart=chart.id, coords=coords, provenance=cand.provenance)


# -- cascade driver -------------------------------------------------------------


def run_cascade(p: ProblemSystem, cfg: CascadeConfig | None = None) -> CascadeTree:
    """Breadth-first resolution of the compactified system's base points."""
    cfg = cfg or CascadeConfig()
    widened_from = None
    attempts = 0
    while True:
        try:
            return _run_once(p, cfg, widened_from)
        except WidenRequest as req:
            attempts += 1
            if attempts > 2:
                raise UnsupportedField("repeated field widening failed")
            new_field = widened_field(p.field, req)
            widened_from = p.field
            p = p.widen(new_field)


def _run_once(p, cfg, widened_from):
    affine = plane_system(p)
    sys_uv, sys_UV = compactify(affine, p)
    root = CascadeNode(uv=sys_uv, UV=sys_UV, blow_up=None, depth=0)
    tree = CascadeTree(problem=p, config=cfg, affine=affine, root=root,
                       field=p.field, widened_from=widened_from)
    frontier = [root]
    while frontier:
        node = frontier.pop(0)
        points, conditionals, unres = find_base_points(node, cfg, is_root=node.depth == 0)
        node.conditional_points = conditionals
        node.unresolved_factors = unres
        if not points:
            node.status = _leaf_status(node)
            continue
        node.base_points_found = points
        if node.depth >= cfg.max_depth:
            node.status = "non-terminated"
            continue
        labels = _branch_labels(node, points)
        for pt, label in zip(points, labels):
            parent_chart = node.uv.chart if pt.chart == node.uv.chart.id else node.UV.chart
            blup = blow_up_charts(parent_chart, pt, label)
            child_uv, child_UV = pushforward(node, blup)
            child = CascadeNode(uv=child_uv, UV=child_UV, blow_up=blup,
                                depth=node.depth + 1, branch_label=label)
            node.children.append(child)
            frontier.append(child)
        node.status = "internal"
    return tree


def _leaf_status(node):
    if node.unresolved_factors:
        return "needs-hint"
    ps = node.uv
    line = ps.chart.line_var
    du, dv = ps.rhs
    if du.is_zero():
        return "resolved"
    slope = dv / du
    if slope.den.min_degree_in(line) >= 1:
        return "obstruction"
    return "resolved"


def _branch_labels(node, points):
    depth = node.depth + 1
    if len(points) == 1:
        return [f"bl{depth}"]
    # sign labels for a +/- scalar pair
    if len(points) == 2:
        slows = [_slow_coord(node, pt) for pt in points]
        if all(s.is_constant() for s in slows):
            f = slows[0].ring.field
            a, b = slows[0].constant_value(), slows[1].constant_value()
            if f.eq(a, f.neg(b)) and not f.is_zero(a):
                key = slows[0].ring.field.render(a)
                other = slows[0].ring.field.render(b)
                plus_first = max(key, other) == key
                lab = ["(+)", "(-)"] if plus_first else ["(-)", "(+)"]
                return [f"bl{depth}{lab[0]}", f"bl{depth}{lab[1]}"]
    order = sorted(range(len(points)), key=lambda i: _sort_key(node, points[i]))
    labels = [""] * len(points)
    for rank, idx in enumerate(order):
        labels[idx] = f"bl{depth}({rank})"
    return labels


def _slow_coord(node, pt):
    chart = node.uv.chart if pt.chart == node.uv.chart.id else node.UV.chart
    return pt.coords[1] if chart.slow_var == chart.vars[1] else pt.coords[0]


def _sort_key(node, pt):
    side = "0uv" if pt.chart.side == "uv" else "1UV"
    return (side, pt.coords[0].render(), pt.coords[1].render())
