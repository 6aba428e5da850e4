"""The core L'^p calculus.

A distribution f in L'^p is represented by its unique L^p primitive F
(f = F').  A multiplier G in I^q is represented by its density g = G',
with G(x) = integral of g from 0 to x.  The pairing is

    integral of f G  =  - integral of F(x) g(x) dx,

which every operation here reduces to quadrature on.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ExponentError, LprimError
from .expr import Call, FunctionExpr, Mul, Pow, const_expr, maximum, minimum
from .parser import parse_expr
from .quadrature import (
    DEFAULT_CONFIG,
    QuadConfig,
    effective_radius,
    find_sign_changes,
    integrate,
    integrate_line,
    lp_norm,
    sup_norm,
)


def conjugate(p):
    """The exponent q with 1/p + 1/q = 1 (p=1 -> inf)."""
    if p == 1.0:
        return math.inf
    if p == math.inf:
        return 1.0
    return p / (p - 1.0)


def _check_p(p):
    p = float(p)
    if not 1.0 <= p < math.inf:
        raise ExponentError(f"exponent p={p} outside [1, oo)")
    return p


def _config_for(expr, cfg, osc=None):
    if cfg is None:
        cfg = DEFAULT_CONFIG
    if osc is not None and cfg.osc_wavelength is None:
        from dataclasses import replace

        cfg = replace(cfg, osc_wavelength=osc)
    return cfg


class PrimitiveDistribution:
    """f = F' with F in L^p; the norm is computed at construction."""

    __slots__ = ("F", "p", "norm", "osc_wavelength")

    def __init__(self, F, p, cfg=None, osc_wavelength=None, _norm=None):
        self.p = _check_p(p)
        self.F = F
        self.osc_wavelength = osc_wavelength
        cfg = _config_for(F, cfg, osc_wavelength)
        self.norm = lp_norm(F, self.p, cfg) if _norm is None else float(_norm)

    # -- linear structure (isometric to L^p on primitives) -------------------

    def _same(self, other):
        if not isinstance(other, PrimitiveDistribution) or other.p != self.p:
            raise ExponentError("operands must share the exponent p")
        return other

    def __add__(self, other):
        o = self._same(other)
        return PrimitiveDistribution(
            self.F + o.F, self.p,
            osc_wavelength=self.osc_wavelength or o.osc_wavelength,
        )

    def __sub__(self, other):
        o = self._same(other)
        return PrimitiveDistribution(
            self.F - o.F, self.p,
            osc_wavelength=self.osc_wavelength or o.osc_wavelength,
        )

    def __mul__(self, a):
        a = float(a)
        return PrimitiveDistribution(
            self.F * a, self.p, osc_wavelength=self.osc_wavelength,
            _norm=abs(a) * self.norm,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def equals(self, other, tol=1e-8, cfg=None):
        """a.e. equality of primitives: ||F1 - F2||_p <= tol."""
        o = self._same(other)
        return lp_norm(self.F - o.F, self.p, cfg) <= tol


def make_distribution(F, p, cfg=None, osc_wavelength=None):
    """Construct f = F' in L'^p, verifying F in L^p by computing its norm."""
    return PrimitiveDistribution(F, p, cfg=cfg, osc_wavelength=osc_wavelength)


class Multiplier:
    """G in I^q, held by its density g = G'; G(x) = integral from 0 to x.

    Antiderivative values are memoized at every point ever requested, so
    repeated evaluations cost one short quadrature from the nearest
    memoized breakpoint.
    """

    __slots__ = ("g", "q", "_norm", "_cfg", "_pts", "_vals")

    def __init__(self, g, q, cfg=None):
        q = float(q)
        if not 1.0 < q <= math.inf:
            raise ExponentError(f"multiplier exponent q={q} outside (1, oo]")
        self.g = g
        self.q = q
        self._norm = None
        self._cfg = cfg or DEFAULT_CONFIG
        self._pts = [0.0]
        self._vals = [0.0]
        for pt in g.feature_points():
            if pt != 0.0 and math.isfinite(pt):
                self.G(pt)

    @property
    def norm(self):
        """||G||_{I,q} = ||g||_q (sup norm at q = inf)."""
        if self._norm is None:
            if self.q == math.inf:
                self._norm = sup_norm(self.g, self._cfg)
            else:
                self._norm = lp_norm(self.g, self.q, self._cfg)
        return self._norm

    def G(self, x):
        """Antiderivative value at x, memoized."""
        x = float(x)
        i = bisect.bisect_left(self._pts, x)
        if i < len(self._pts) and self._pts[i] == x:
            return self._vals[i]
        # integrate from the nearest memoized point
        cands = []
        if i > 0:
            cands.append(i - 1)
        if i < len(self._pts):
            cands.append(i)
        j = min(cands, key=lambda k: abs(self._pts[k] - x))
        base_x, base_v = self._pts[j], self._vals[j]
        v = base_v + integrate(self.g, base_x, x, self._cfg).value
        self._pts.insert(i, x)
        self._vals.insert(i, v)
        return v

    def G_values(self, xs):
        """Vectorized antiderivative: consecutive segment quadrature."""
        xs = np.asarray(xs, dtype=float)
        order = np.argsort(xs, kind="stable")
        out = np.empty_like(xs)
        for i in order:
            out[i] = self.G(xs[i])
        return out


def multiplier_norm(G):
    return G.norm


def norm(f):
    return f.norm


def pair(f, G, cfg=None):
    """The integral of fG = -integral of F(x) g(x) dx."""
    if not isinstance(f, PrimitiveDistribution):
        raise LprimError("pair expects a PrimitiveDistribution")
    q = conjugate(f.p)
    if not math.isclose(G.q, q, rel_tol=1e-12) and not (G.q == q == math.inf):
        raise ExponentError(f"multiplier exponent {G.q} is not conjugate to p={f.p}")
    cfg = _config_for(f.F, cfg, f.osc_wavelength)
    integrand = f.F * G.g
    return -integrate_line(integrand, cfg).value


def dual_norm(f, cfg=None):
    """||f||'_p recovered through the extremal multiplier of the dual ball.

    The witness density is g = sgn(F)|F|^(p-1) ||F||_p^(1-p) (g = sgn(F)
    when p = 1), which has ||g||_q = 1; the pairing with it attains the
    norm.
    """
    n = f.norm
    if n == 0.0:
        return 0.0
    F = f.F
    if f.p == 1.0:
        root = Call("sgn", F.root)
        decay = ("none",)
    else:
        root = Mul(
            Mul(Call("sgn", F.root), Pow(Call("abs", F.root), f.p - 1.0)),
            _const_node(n ** (1.0 - f.p)),
        )
        decay = F.decay if F.decay[0] != "power" else ("power", F.decay[1] * (f.p - 1.0))
    witness = FunctionExpr(
        root,
        singularities=F.singularities,
        kinks=F.kinks,
        support=F.support,
        decay=decay,
    )
    mult = Multiplier(witness, conjugate(f.p), cfg=cfg)
    return abs(pair(f, mult, cfg=cfg))


def _const_node(v):
    from .expr import Const

    return Const(v)


def translate(f, t):
    """tau_t f, the distribution with primitive tau_t F."""
    t = float(t)
    if t == 0.0:
        return f
    return PrimitiveDistribution(
        f.F.translate(t), f.p, osc_wavelength=f.osc_wavelength
    )


# -- lattice ------------------------------------------------------------------


def join(f, g):
    f._same(g)
    return PrimitiveDistribution(maximum(f.F, g.F), f.p)


def meet(f, g):
    f._same(g)
    return PrimitiveDistribution(minimum(f.F, g.F), f.p)


def abs_distribution(f):
    return PrimitiveDistribution(abs(f.F), f.p, _norm=f.norm)


def leq(f, g, tol=1e-9):
    """f <= g in the lattice order: F <= G a.e., decided by dense sampling
    plus sign-change bisection (an a.e. statement is not finitely decidable)."""
    f._same(g)
    d = f.F - g.F
    r = effective_radius(d, minimum=32.0)
    lo, hi = (d.support if d.support is not None else (-r, r))
    xs = np.linspace(lo, hi, 10_001)
    for s in d.singularities:
        xs[np.isclose(xs, s, rtol=0.0, atol=1e-300)] += (hi - lo) * 1e-9
    vals = d.values(xs)
    vals = np.where(np.isfinite(vals), vals, 0.0)
    if vals.max() <= tol:
        return True
    # refine: confirmed positive excursion of non-trivial width?
    worst = xs[int(np.argmax(vals))]
    return d(worst) <= tol


# -- reconstruction and step approximation ------------------------------------


def reconstruct(f, x, n, cfg=None):
    """F_n(x) = A_n + B_n(x): the pairing of f with the tent multiplier
    G_{n,x}, reduced to two averages of the primitive.

    A_n = -(1/n) integral of F over (-2n, -n); B_n(x) = n * integral of F
    over (x, x+1/n).  F_n(x) -> F(x) at continuity points.
    """
    if n <= 0 or n <= -x:
        raise LprimError("reconstruct needs n > max(0, -x)")
    cfg = _config_for(f.F, cfg, f.osc_wavelength)
    a = -integrate(f.F, -2.0 * n, -1.0 * n, cfg).value / n
    b = n * integrate(f.F, x, x + 1.0 / n, cfg).value
    return a + b


class DeltaTrain:
    """s = sigma' = sum a_n [tau_{x_n} delta - tau_{y_n} delta]; the
    primitive sigma = sum a_n chi_(x_n, y_n) is a step function."""

    __slots__ = ("atoms",)

    def __init__(self, atoms):
        atoms = [(float(a), float(x), float(y)) for a, x, y in atoms]
        for a, x, y in atoms:
            if not x < y:
                raise LprimError(f"delta-train atom needs x < y, got ({x}, {y})")
        ordered = sorted(atoms, key=lambda t: t[1])
        for (_, _, y0), (_, x1, _) in zip(ordered, ordered[1:]):
            if x1 < y0:
                raise LprimError("delta-train atom intervals must be disjoint")
        self.atoms = tuple(ordered)

    def primitive(self):
        sigma = const_expr(0.0)
        for a, x, y in self.atoms:
            sigma = sigma + parse_expr(f"indicator({x!r},{y!r})") * a
        if self.atoms:
            lo = min(x for _, x, _ in self.atoms)
            hi = max(y for _, _, y in self.atoms)
            sigma = FunctionExpr(
                sigma.root,
                singularities=sigma.singularities,
                kinks=sigma.kinks,
                support=(lo, hi),
                decay=("compact",),
            )
        return sigma

    def norm(self, p, cfg=None):
        return lp_norm(self.primitive(), _check_p(p), cfg)

    def as_distribution(self, p):
        return PrimitiveDistribution(self.primitive(), p)


def pair_delta_train(s, G):
    """integral of sG = -sum a_n [G(y_n) - G(x_n)]."""
    return -math.fsum(a * (G.G(y) - G.G(x)) for a, x, y in s.atoms)


@dataclass(frozen=True)
class StepApproximation:
    train: DeltaTrain
    error: float  # ||f - s_n||'_p


def step_approximate(f, n, cfg=None):
    """Best-effort step approximation of F on an |F|-mass quantile mesh.

    Returns s_n = sigma_n' with sigma_n piecewise constant on n cells,
    together with the approximation error ||f - s_n||'_p.
    """
    if n < 1:
        raise LprimError("step_approximate needs n >= 1")
    cfg = _config_for(f.F, cfg, f.osc_wavelength)
    F = f.F
    if F.support is not None:
        lo, hi = F.support
    else:
        r = effective_radius(F, minimum=8.0)
        # enlarge until the discarded tails are negligible for the error report
        lo, hi = -r, r
    grid = np.linspace(lo, hi, 4096)
    dens = np.abs(F.values(grid))
    dens = np.where(np.isfinite(dens), dens, 0.0)
    mass = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))])
    if mass[-1] == 0.0:
        edges = np.linspace(lo, hi, n + 1)
    else:
        quantiles = np.linspace(0.0, mass[-1], n + 1)
        edges = np.interp(quantiles, mass, grid)
        edges[0], edges[-1] = lo, hi
        edges = np.maximum.accumulate(edges)
    atoms = []
    eps = (hi - lo) * 1e-12
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= eps:
            continue
        v = integrate(F, a, b, cfg).value / (b - a)
        if v != 0.0:
            atoms.append((v, a, b))
    train = DeltaTrain(atoms)
    err = lp_norm(F - train.primitive(), f.p, cfg)
    return StepApproximation(train, err)


# -- membership (integral criterion) -------------------------------------------


@dataclass(frozen=True)
class MembershipResult:
    verdict: str  # "certified" | "not certified" | "inconclusive"
    integral_zero: bool | None
    weighted_exists: bool | None
    conditional: bool
    details: dict = field(default_factory=dict)


def _improper_limit(e, cfg, osc=None):
    """One-sided truncation limits of the line integral of e.

    Returns (limit, last_fluctuation, settled).  When the oscillation
    wavelength is known, partial integrals are averaged over one period,
    which removes the leading oscillatory term of a conditionally
    convergent integral.
    """
    lam = osc or cfg.osc_wavelength
    r0 = effective_radius(e)
    if lam is not None:
        r0 = lam * math.ceil(r0 / lam)
    total_r = integrate(e, 0.0, r0, cfg).value
    total_l = integrate(e, -r0, 0.0, cfg).value

    def averaged(base, side, r):
        if lam is None:
            return base
        # mean of I(u) over u in (r, r+lam): adds a linearly weighted tail
        w = parse_expr(f"({r + lam!r} - abs(x))*(1/{lam!r})")
        lo, hi = (r, r + lam) if side > 0 else (-(r + lam), -r)
        return base + integrate(e * w, lo, hi, cfg).value

    vals = []
    r = r0
    for _ in range(12):
        vals.append(averaged(total_r, +1, r) + averaged(total_l, -1, r))
        total_r += integrate(e, r, 2 * r, cfg).value
        total_l += integrate(e, -2 * r, -r, cfg).value
        r *= 2
        if len(vals) >= 3:
            d1 = abs(vals[-1] - vals[-2])
            d2 = abs(vals[-2] - vals[-3])
            if d1 <= max(cfg.abs_tol, 1e-12 * abs(vals[-1])) and d2 <= 10 * max(
                cfg.abs_tol, 1e-10
            ):
                return vals[-1], d1, True
    d1 = abs(vals[-1] - vals[-2])
    d2 = abs(vals[-2] - vals[-3])
    settled = d1 < d2 and d1 < 1e-3
    return vals[-1], d1, settled


def membership_check(f_pointwise, p, alpha, cfg=None, osc_wavelength=None):
    """Integral criterion for f in L'^p: (a) the line integral of f is 0 and
    (b) the integral of |t|^alpha f(t) dt exists for some alpha > 1/p.

    Absolutely convergent cases go straight through line quadrature;
    conditionally convergent ones use truncation limits and are flagged.
    """
    p = _check_p(p)
    if not alpha > 1.0 / p:
        raise ExponentError(f"membership needs alpha > 1/p = {1.0 / p}")
    cfg = _config_for(f_pointwise, cfg, osc_wavelength)
    weight = abs(parse_expr("x")).power(alpha)
    weighted = weight * f_pointwise

    details = {}
    conditional = False

    def exists(e):
        nonlocal conditional
        d = e.decay
        absolutely = d[0] in ("compact", "gaussian", "exponential") or (
            d[0] == "power" and d[1] > 1.0
        )
        if absolutely:
            res = integrate_line(e, cfg)
            return res.value, res.converged
        conditional = True
        val, fluct, settled = _improper_limit(e, cfg)
        return val, settled

    val_a, ok_a = exists(f_pointwise)
    details["integral"] = val_a
    val_b, ok_b = exists(weighted)
    details["weighted_integral"] = val_b

    if not ok_a or not ok_b:
        return MembershipResult("inconclusive", None, None, conditional, details)
    zero = abs(val_a) <= max(1e-6, 100 * cfg.abs_tol)
    verdict = "certified" if zero else "not certified"
    return MembershipResult(verdict, zero, True, conditional, details)


# -- weak vanishing of FG (relative-measure bound) -----------------------------


def weak_vanishing_bound(f, G, M, N, eps, cfg=None, samples=20_001):
    """Relative measure of {x in (M,N): |F G| > eps} against its bound.

    Bound: ||F chi_(M,N)||_p ||g||_q (N^q - M^q)^(1/q) / (eps q^(1/q) (N-M))
    for p > 1, and ||F chi_(M,N)||_1 ||g||_inf N / (eps (N-M)) at p = 1.
    """
    if not 0 < M < N:
        raise LprimError("weak_vanishing_bound needs 0 < M < N")
    if eps <= 0:
        raise LprimError("eps must be positive")
    cfg = _config_for(f.F, cfg, f.osc_wavelength)
    xs = np.linspace(M, N, samples)
    for s in f.F.singularities:
        xs[np.isclose(xs, s, rtol=0.0, atol=1e-300)] += (N - M) * 1e-9
    FG = f.F.values(xs) * G.G_values(xs)
    FG = np.where(np.isfinite(FG), FG, 0.0)
    ratio = float(np.mean(np.abs(FG) > eps))

    restricted = f.F * parse_expr(f"indicator({M!r},{N!r})")
    fp = lp_norm(restricted, f.p, cfg)
    if f.p == 1.0:
        bound = fp * G.norm * N / (eps * (N - M))
    else:
        q = G.q
        bound = fp * G.norm * (N**q - M**q) ** (1.0 / q) / (eps * q ** (1.0 / q) * (N - M))
    return ratio, bound


def gateaux_profile(f, g, t_grid, cfg=None):
    """M(t) = ||f + t g||'_p on the grid; |M'| <= ||g||'_p (Gateaux bound)."""
    f._same(g)
    if not 1.0 < f.p < math.inf:
        raise ExponentError("gateaux_profile needs 1 < p < oo")
    cfg = _config_for(f.F, cfg, f.osc_wavelength)
    return [lp_norm(f.F + g.F * float(t), f.p, cfg) for t in t_grid]
