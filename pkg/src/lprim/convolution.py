"""The three convolution products.

* f * G (distribution with a multiplier): a bounded function, evaluated
  pointwise as integral of F(x-y) g(y) dy.
* f * g (distribution with an L^q function, Young exponents): an element
  of L'^r whose primitive is F * g, carried as a sampled spline.
* f `star` g (both in L'^1): an element of L'^1 with primitive F * G; the
  product under which L'^1 is a Banach algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ExponentError, LprimError
from .expr import FunctionExpr
from .lpspace import PrimitiveDistribution, conjugate, _config_for
from .parser import parse_expr
from .quadrature import DEFAULT_CONFIG, effective_radius, integrate_line, lp_norm
from .sampling import sample_function, sampled_expr


def reflect_about(F, x):
    """The function y -> F(x - y), metadata transformed alongside."""
    return FunctionExpr(
        F.root.subst_affine(-1.0, x),
        singularities=tuple(sorted(x - s for s in F.singularities)),
        kinks=tuple(sorted(x - k for k in F.kinks)),
        support=None if F.support is None else (x - F.support[1], x - F.support[0]),
        decay=F.decay,
    )


def conv_multiplier(f, G, x, cfg=None):
    """(f * G)(x) = integral of F(x - y) g(y) dy; bounded by ||f||'_p ||G||_{I,q}."""
    q = conjugate(f.p)
    if not math.isclose(G.q, q, rel_tol=1e-12):
        raise ExponentError(f"multiplier exponent {G.q} is not conjugate to p={f.p}")
    cfg = _config_for(f.F, cfg, f.osc_wavelength)
    return integrate_line(reflect_about(f.F, float(x)) * G.g, cfg).value


@dataclass(frozen=True)
class ConvolutionResult:
    kind: str  # "multiplier" | "lq" | "star"
    payload: object  # FunctionExpr-backed evaluator or PrimitiveDistribution
    diagnostics: dict = field(default_factory=dict)

    def density_at(self, x):
        """Pointwise density of an lq/star result."""
        fn = self.diagnostics.get("density")
        if fn is None:
            raise LprimError(f"kind={self.kind!r} result carries no density")
        return fn(float(x))


def _radius(F):
    if F.support is not None:
        return max(abs(F.support[0]), abs(F.support[1]))
    return effective_radius(F, minimum=10.0)


def _conv_primitive(F, g, cfg, tol):
    """F * g as a sampled spline FunctionExpr (plus its sampling error)."""
    rF, rg = _radius(F), _radius(g)
    if F.support is not None and g.support is not None:
        lo = F.support[0] + g.support[0]
        hi = F.support[1] + g.support[1]
        compact = True
    else:
        lo, hi = -(rF + rg), rF + rg
        compact = False
    feats_F = [p for p in F.feature_points() if math.isfinite(p)]
    feats_g = [p for p in g.feature_points() if math.isfinite(p)]
    kinks = sorted({a + b for a in feats_F for b in feats_g})

    def h(x):
        return integrate_line(reflect_about(F, x) * g, cfg).value

    fn, err = sample_function(h, lo, hi, breakpoints=kinks, tol=tol)
    expr = sampled_expr(fn, lo, hi, kinks=kinks, name="conv")
    return expr, err, compact


def conv_lq(f, g, r, cfg=None, tol=1e-9):
    """f * g for f in L'^p and g in L^q with 1/p + 1/q = 1 + 1/r.

    The result is the element of L'^r with primitive F * g.  Diagnostics
    carry the Cauchy-tail record of the defining approximation sequence
    g_n = g * (smooth window of radius n): the tail is bounded by
    ||F||_p ||g_n - g_m||_q without re-convolving.
    """
    p = f.p
    q_needed = 1.0 + 1.0 / r - 1.0 / p
    if q_needed <= 0 or abs(q_needed) < 1e-12:
        raise ExponentError(f"no exponent q satisfies 1/p+1/q=1+1/r for p={p}, r={r}")
    q = 1.0 / q_needed
    if q < 1.0 - 1e-12:
        raise ExponentError(f"exponent relation needs q={q:.4g} >= 1")
    q = max(q, 1.0)
    cfg = _config_for(f.F, cfg, f.osc_wavelength)
    norm_g = lp_norm(g, q, cfg)
    if norm_g == 0.0:
        zero = parse_expr("0*indicator(0,1)")
        return ConvolutionResult(
            "lq",
            PrimitiveDistribution(zero, r, _norm=0.0),
            {"young_bound": 0.0, "cauchy_tail": [], "density": lambda x: 0.0},
        )
    H, err, _ = _conv_primitive(f.F, g, cfg, tol)
    dist = PrimitiveDistribution(H, r)

    # Cauchy tails of the truncate-and-smooth sequence (logistic window)
    tails = []
    for n, m in ((2, 4), (4, 8), (8, 16)):
        wn = parse_expr(f"1/(1+exp(-{n}*({n}-abs(x))))")
        wm = parse_expr(f"1/(1+exp(-{m}*({m}-abs(x))))")
        d = g * (wm - wn)
        # the windows are bounded by 1, so the difference decays like g itself
        d = FunctionExpr(d.root, singularities=d.singularities, kinks=d.kinks,
                         support=d.support, decay=g.decay)
        dq = lp_norm(d, q, cfg)
        tails.append((n, m, f.norm * dq))

    gp = _try_diff(g)
    if gp is not None:
        density = lambda x, F=f.F, gp=gp: integrate_line(
            reflect_about(F, x) * gp, cfg
        ).value
    else:
        density = None
    diags = {
        "young_bound": f.norm * norm_g,
        "cauchy_tail": tails,
        "sampling_error": err,
        "density": density,
    }
    return ConvolutionResult("lq", dist, diags)


def _try_diff(e):
    try:
        return e.diff()
    except LprimError:
        return None


def star(f, g, cfg=None, tol=5e-10):
    """f star g for f, g in L'^1: the distribution with primitive F * G."""
    if f.p != 1.0 or g.p != 1.0:
        raise ExponentError("star needs both factors in L'^1")
    cfg = cfg or DEFAULT_CONFIG
    if f.norm == 0.0 or g.norm == 0.0:
        zero = parse_expr("0*indicator(0,1)")
        return ConvolutionResult("star", PrimitiveDistribution(zero, 1.0, _norm=0.0),
                                 {"density": lambda x: 0.0})
    H, err, _ = _conv_primitive(f.F, g.F, cfg, tol)
    dist = PrimitiveDistribution(H, 1.0)
    Gp = _try_diff(g.F)
    density = None
    if Gp is not None:
        density = lambda x, F=f.F, Gp=Gp: integrate_line(
            reflect_about(F, x) * Gp, cfg
        ).value
    diags = {
        "algebra_bound": f.norm * g.norm,
        "sampling_error": err,
        "density": density,
    }
    return ConvolutionResult("star", dist, diags)


def approx_identity(F, g, t_grid, p, cfg=None, tol=1e-8):
    """||F_t * g' - a g'||'_p over the grid, F_t(x) = F(x/t)/t, a = integral of F.

    F_t * g' is the distribution with primitive g * F_t, so each entry is
    the L^p distance between the sampled primitive g * F_t and a g.
    """
    cfg = cfg or DEFAULT_CONFIG
    a = integrate_line(F, cfg).value
    out = []
    for t in t_grid:
        Ft = F.dilate(float(t))
        H, _, _ = _conv_primitive(g, Ft, cfg, tol)
        out.append(lp_norm(H - g * a, p, cfg))
    return out


def incompatibility_exhibit(cfg=None):
    """The two products genuinely differ: for F = chi_(0,1) and
    g = -2x e^(-x^2) (an L^1 density whose own primitive is G = e^(-x^2)),
    f*g and f star g are distinct elements of L'^1."""
    cfg = cfg or DEFAULT_CONFIG
    F = parse_expr("indicator(0,1)")
    g = parse_expr("-2*x*exp(-x^2)")
    G = parse_expr("exp(-x^2)")
    f = PrimitiveDistribution(F, 1.0)
    fg = conv_lq(f, g, 1.0, cfg)
    fsg = star(f, PrimitiveDistribution(G, 1.0), cfg)
    gap = lp_norm(fg.payload.F - fsg.payload.F, 1.0, cfg)
    return fg, fsg, gap
