"""Coordinate charts on the blown-up surface.

Each chart covers part of the surface with two variables.  Root charts are
the three standard charts of P^2; every blow-up spawns the two standard
charts of the new exceptional line, whose newest line is ``{first = 0}`` on
the uv side and ``{second = 0}`` on the UV side.  Charts record the rational
maps both to the base (x, y) coordinates and one step down to their parent,
so transitions and numeric chart switches need no symbolic inversion.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import MultiPoly, RationalFn, Ring, rat_reduce, ratfn_var, substitute
from .errors import CentreContainsChartVars, OutsideOverlap

UV_SIDE = "uv"
CAP_SIDE = "UV"


@dataclass(frozen=True)
class ChartId:
    path: tuple

    def render(self) -> str:
        return "/".join(self.path)

    @property
    def side(self):
        tail = self.path[-1]
        return CAP_SIDE if tail.endswith("-UV") else UV_SIDE if tail.endswith("-uv") else "xy"

    def node_key(self):
        """Identity of the blow-up node: the path with the last side stripped."""
        tail = self.path[-1]
        for suffix in ("-uv", "-UV", "-xy"):
            if tail.endswith(suffix):
                tail = tail[: -len(suffix)]
                break
        return self.path[:-1] + (tail,)

    def child(self, label: str):
        return ChartId(self.path + (label,))

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class BasePoint:
    """A verified indeterminacy of a chart system.

    coords are chart-variable-free ring elements (values of the chart's two
    variables in order).
    """

    chart: ChartId
    coords: tuple  # (MultiPoly, MultiPoly) over the coefficient ring
    provenance: str = "solved-linear"  # solved-linear | solved-binomial-root | user-hint

    def render_coords(self):
        return tuple(c.render() for c in self.coords)


class Chart:
    """A coordinate patch with its birational map to base coordinates."""

    def __init__(self, id: ChartId, ring: Ring, to_base, line_var, parent=None,
                 down_bindings=None, up_bindings=None, centre=None):
        self.id = id
        self.ring = ring
        self.vars = ring.chart_vars
        self.to_base = to_base        # (x, y) as RationalFn over ring
        self.line_var = line_var      # None for the affine chart
        self.parent = parent          # Chart or None for root charts
        self.down_bindings = down_bindings  # parent var -> RationalFn over this ring
        self.up_bindings = up_bindings      # this var -> RationalFn over parent ring
        self.centre = centre          # BasePoint blown up to create this chart
        self.side = id.side

    @property
    def fast_var(self):
        return self.line_var

    @property
    def slow_var(self):
        a, b = self.vars
        return b if self.line_var == a else a

    @property
    def exceptional_line(self):
        return self.line_var

    def coefficient_ring(self):
        return self.ring.coefficient_ring()

    def __repr__(self):
        return f"Chart({self.id.render()}; {self.vars})"


def projective_charts(coeff_ring: Ring, root_label="P2"):
    """The affine chart of (x, y) plus the two standard charts at infinity.

    Coordinates follow [1:y:x] = [u:v:1] = [V:1:U], i.e. x = 1/u, y = v/u in
    the uv chart and x = U/V, y = 1/V in the UV chart.
    """
    sym = coeff_ring.symbols
    fld = coeff_ring.field
    mo = coeff_ring.max_order
    r_xy = Ring(fld, ("x", "y"), sym, mo)
    r_uv = Ring(fld, ("u", "v"), sym, mo)
    r_UV = Ring(fld, ("U", "V"), sym, mo)

    x, y = ratfn_var(r_xy, "x"), ratfn_var(r_xy, "y")
    affine = Chart(ChartId((f"{root_label}-xy",)), r_xy, (x, y), line_var=None)

    u, v = r_uv.var("u"), r_uv.var("v")
    uv = Chart(
        ChartId((f"{root_label}-uv",)), r_uv,
        (rat_reduce(r_uv.one, u), rat_reduce(v, u)),
        line_var="u",
        down_bindings={"x": rat_reduce(r_uv.one, u), "y": rat_reduce(v, u)},
        up_bindings={"u": rat_reduce(r_xy.one, x.num), "v": rat_reduce(y.num, x.num)},
    )

    U, V = r_UV.var("U"), r_UV.var("V")
    cap = Chart(
        ChartId((f"{root_label}-UV",)), r_UV,
        (rat_reduce(U, V), rat_reduce(r_UV.one, V)),
        line_var="V",
        down_bindings={"x": rat_reduce(U, V), "y": rat_reduce(r_UV.one, V)},
        up_bindings={"U": rat_reduce(x.num, y.num), "V": rat_reduce(r_xy.one, y.num)},
    )
    return affine, uv, cap


@dataclass
class BlowUp:
    centre: BasePoint
    chart_uv: Chart
    chart_UV: Chart


def blow_up_charts(parent: Chart, centre: BasePoint, label: str) -> BlowUp:
    """The two standard charts over the blow-up of ``centre`` in ``parent``.

    With centre (s, t) and parent variables (p, q), the uv child satisfies
    p = s + a, q = t + a*b and the UV child p = s + A*B, q = t + B.  A
    z-dependent centre changes nothing here: the substitution is purely
    algebraic, the derivative correction enters in the system pushforward.
    """
    s, t = centre.coords
    pring = parent.ring
    for c in centre.coords:
        if any(c.involves(nm) for nm in pring.chart_vars if nm in c.ring.index):
            raise CentreContainsChartVars(f"centre {centre.render_coords()} mentions chart variables")
    depth = len(parent.id.path)
    p_name, q_name = parent.vars
    uv_vars = (f"u{depth}", f"v{depth}")
    UV_vars = (f"U{depth}", f"V{depth}")
    r_uv = Ring(pring.field, uv_vars, pring.symbols, pring.max_order)
    r_UV = Ring(pring.field, UV_vars, pring.symbols, pring.max_order)

    s_uv = r_uv.embed(s)
    t_uv = r_uv.embed(t)
    a, b = r_uv.var(uv_vars[0]), r_uv.var(uv_vars[1])
    down_uv = {
        p_name: rat_reduce(s_uv + a, r_uv.one),
        q_name: rat_reduce(t_uv + a * b, r_uv.one),
    }
    p_var, q_var = pring.var(p_name), pring.var(q_name)
    up_uv = {
        uv_vars[0]: rat_reduce(p_var - s, pring.one),
        uv_vars[1]: rat_reduce(q_var - t, p_var - s),
    }

    s_UV = r_UV.embed(s)
    t_UV = r_UV.embed(t)
    A, B = r_UV.var(UV_vars[0]), r_UV.var(UV_vars[1])
    down_UV = {
        p_name: rat_reduce(s_UV + A * B, r_UV.one),
        q_name: rat_reduce(t_UV + B, r_UV.one),
    }
    up_UV = {
        UV_vars[0]: rat_reduce(p_var - s, q_var - t),
        UV_vars[1]: rat_reduce(q_var - t, pring.one),
    }

    base_uv = tuple(substitute(c, down_uv, r_uv) for c in parent.to_base)
    base_UV = tuple(substitute(c, down_UV, r_UV) for c in parent.to_base)

    chart_uv = Chart(ChartId(parent.id.path + (f"{label}-uv",)),
                     r_uv, base_uv, line_var=uv_vars[0], parent=parent,
                     down_bindings=down_uv, up_bindings=up_uv, centre=centre)
    chart_UV = Chart(ChartId(parent.id.path + (f"{label}-UV",)),
                     r_UV, base_UV, line_var=UV_vars[1], parent=parent,
                     down_bindings=down_UV, up_bindings=up_UV, centre=centre)
    return BlowUp(centre=centre, chart_uv=chart_uv, chart_UV=chart_UV)


def transition(fromm: Chart, to: Chart, point):
    """Exact coordinates of a surface point in the sibling chart.

    The two charts must belong to the same blow-up node (or be the two root
    charts at infinity).  ``point`` is a pair of coefficient-ring values.
    """
    if fromm.id.node_key() != to.id.node_key():
        raise OutsideOverlap("charts do not share a blow-up node")
    if fromm.side == to.side:
        return point
    croot = fromm.ring.coefficient_ring()
    p1 = _as_coeff_rat(croot, point[0])
    p2 = _as_coeff_rat(croot, point[1])
    one = rat_reduce(croot.one, croot.one)
    is_root = fromm.parent is None
    if fromm.side == UV_SIDE:
        # (a, b) -> (A, B): A = 1/b, B = a*b   (root: U = 1/v, V = u/v)
        if p2.is_zero():
            raise OutsideOverlap("origin not visible in the sibling chart")
        if is_root:
            return (one / p2, p1 / p2)
        return (one / p2, p1 * p2)
    # (A, B) -> (a, b): a = A*B, b = 1/A      (root: u = V/U, v = 1/U)
    if p1.is_zero():
        raise OutsideOverlap("origin not visible in the sibling chart")
    if is_root:
        return (p2 / p1, one / p1)
    return (p1 * p2, one / p1)


def _as_coeff_rat(ring, value):
    if isinstance(value, RationalFn):
        if value.ring is ring:
            return value
        return rat_reduce(ring.embed(value.num), ring.embed(value.den))
    if isinstance(value, MultiPoly):
        return rat_reduce(ring.embed(value), ring.one)
    return rat_reduce(ring.const(value), ring.one)
