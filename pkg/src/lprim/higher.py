"""Higher-order spaces L^(n),p: distributions that are n-th derivatives
of L^p functions, paired against n-fold iterated-integral multipliers.

The pairing reduces to a single quadrature, ∫ f G = (−1)^n ∫ F g, and the
norm is inherited from the primitive, so most of the work is bookkeeping:
iterated antiderivatives (via the single-integral reduction
G_k(x) = ∫_0^x (x−t)^{k−1} g(t) dt / (k−1)!) and order/exponent checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ExponentError, LprimError
from .expr import FunctionExpr, Wrapped
from .lpspace import conjugate
from .parser import parse_expr
from .quadrature import DEFAULT_CONFIG, integrate, integrate_line, lp_norm, sup_norm


@dataclass(frozen=True)
class NthDistribution:
    """f = D^n F with F in L^p; the norm is ||F||_p."""

    F: FunctionExpr
    p: float
    order: int
    norm: float = None

    def __post_init__(self):
        if self.order < 1:
            raise ExponentError("order must be >= 1")
        if self.norm is None:
            object.__setattr__(self, "norm", lp_norm(self.F, self.p))


class IteratedMultiplier:
    """g in L^q together with its iterated antiderivatives from 0.

    ``iterate(k)`` is the k-fold antiderivative G_k (G_0 = g); the order-n
    multiplier is G_n, whose n-th derivative recovers g and whose lower
    iterates all vanish at 0.
    """

    def __init__(self, g, q, order, cfg=None):
        if order < 1:
            raise ExponentError("order must be >= 1")
        if not (1.0 < q <= math.inf):
            raise ExponentError("q must lie in (1, inf]")
        self.g = g
        self.q = float(q)
        self.order = int(order)
        base = cfg or DEFAULT_CONFIG
        # quadrature error compounds across iterates; split the budget
        self._cfg = replace(base, abs_tol=base.abs_tol / order)
        self._norm = None

    @property
    def norm(self):
        """||G||_{nI,q} = ||g||_q."""
        if self._norm is None:
            if self.q == math.inf:
                self._norm = sup_norm(self.g, self._cfg)
            else:
                self._norm = lp_norm(self.g, self.q, self._cfg)
        return self._norm

    def iterate(self, k):
        """The k-fold antiderivative of g vanishing (with all lower
        iterates) at 0, as a pointwise evaluator."""
        if not 0 <= k <= self.order:
            raise ExponentError(f"iterate order {k} outside [0, {self.order}]")
        if k == 0:
            return lambda x: float(self.g.values(np.array([float(x)]))[0])
        g = self.g
        cfg = self._cfg
        fact = math.gamma(k)

        def Gk(x):
            x = float(x)
            if x == 0.0:
                return 0.0
            if k == 1:
                kern = g
            else:
                weight = FunctionExpr.from_node(
                    Wrapped(
                        lambda ts, x=x: (x - np.asarray(ts)) ** (k - 1),
                        name="cauchy_weight", growth_hint=float(k - 1),
                    )
                )
                kern = g * weight
            lo, hi = (0.0, x) if x > 0 else (x, 0.0)
            val = integrate(kern, lo, hi, cfg).value
            if x < 0:
                val = -val
            return val / fact

        return Gk


def pair_n(f, G, cfg=None):
    """∫ f G = (−1)^n ∫ F g for matching order and conjugate exponents."""
    if f.order != G.order:
        raise ExponentError(f"order mismatch: {f.order} vs {G.order}")
    q = conjugate(f.p)
    if not math.isclose(G.q, q, rel_tol=1e-12):
        raise ExponentError(f"multiplier exponent {G.q} is not conjugate to p={f.p}")
    cfg = cfg or DEFAULT_CONFIG
    sign = -1.0 if f.order % 2 else 1.0
    return sign * integrate_line(f.F * G.g, cfg).value


def pair_polynomial(f, coeffs):
    """The action of f on a polynomial: zero when deg < order, by the
    annihilation convention that makes D^n well defined modulo degree n−1."""
    coeffs = [float(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0.0:
        coeffs.pop()
    degree = len(coeffs) - 1
    if degree >= f.order:
        raise ExponentError(
            f"polynomial degree {degree} not annihilated at order {f.order}"
        )
    return 0.0


def intermediate_identity_check(F, g, n, m, cfg=None):
    """(lhs, rhs) of ∫ F^(n) G = (−1)^m ∫ F^(n−m) G^(m) for smooth F.

    G is the order-n iterated antiderivative of g, so G^(m) is the
    (n−m)-fold iterate.
    """
    if not 0 <= m <= n:
        raise ExponentError("need 0 <= m <= n")
    if F.kinks or F.singularities or F.decay[0] not in ("gaussian", "exponential"):
        raise LprimError("intermediate identity needs a smooth decaying primitive")
    cfg = cfg or DEFAULT_CONFIG
    mult = IteratedMultiplier(g, math.inf, max(n, 1), cfg)
    sign_n = -1.0 if n % 2 else 1.0
    lhs = sign_n * integrate_line(F * g, cfg).value

    Fd = F
    for _ in range(n - m):
        Fd = Fd.diff()
    Gm = mult.iterate(n - m)
    Gm_expr = FunctionExpr.from_node(
        Wrapped(lambda xs: np.array([Gm(x) for x in np.asarray(xs, dtype=float)]),
                name="iterate", growth_hint=float(n - m))
    )
    sign_m = -1.0 if m % 2 else 1.0
    prod = Fd * Gm_expr
    prod = FunctionExpr(prod.root, singularities=prod.singularities,
                        kinks=prod.kinks, support=prod.support, decay=Fd.decay)
    rhs = sign_m * integrate_line(prod, cfg).value
    return lhs, rhs


def norm_comparison_example(m, cfg=None):
    """Norm-inequivalence exhibit: for F_m = sin(mx) on (0, 2π),
    the order-n norm ||F_m||_1 = 4 is independent of m while the
    next-order Alexiewicz norm sup_x |∫_0^x F_m| = 2/m collapses."""
    m = int(m)
    if m < 1:
        raise ExponentError("m must be >= 1")
    cfg = cfg or DEFAULT_CONFIG
    cfg = replace(cfg, osc_wavelength=2.0 * math.pi / m)
    Fm = parse_expr(f"sin({m}*x)*indicator(0,{2 * math.pi!r})")
    l1 = lp_norm(Fm, 1.0, cfg)

    # cumulative primitive on a grid resolving the oscillation, then a
    # golden-section polish around the best node
    n_panels = max(4096, 64 * m)
    edges = np.linspace(0.0, 2.0 * math.pi, n_panels + 1)
    from .quadrature import _gk_eval

    panels = np.column_stack([edges[:-1], edges[1:]])
    vals, _ = _gk_eval(Fm, panels)
    cum = np.concatenate([[0.0], np.cumsum(vals)])
    i = int(np.argmax(np.abs(cum)))
    lo = edges[max(i - 1, 0)]
    hi = edges[min(i + 1, n_panels)]
    base = cum[max(i - 1, 0)]

    def h(x):
        return abs(base + integrate(Fm, edges[max(i - 1, 0)], x, cfg).value)

    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - phi * (b - a), a + phi * (b - a)
    fc, fd = h(c), h(d)
    for _ in range(60):
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = h(d)
        else:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = h(c)
    alexiewicz = max(h(0.5 * (a + b)), float(np.max(np.abs(cum))))
    return l1, alexiewicz
