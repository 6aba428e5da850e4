"""Adaptive quadrature on intervals and the real line.

Panel rule: 15-point Kronrod with embedded 7-point Gauss, error from the
difference of the pair.  Intervals are pre-split at every declared
singularity and kink; panels adjacent to a hard singularity switch to a
tanh-sinh (double-exponential) rule, which absorbs any integrable endpoint
power/log singularity.  Whole-line integrals truncate with doubling shells
whose tails are certified through the integrand's decay class.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvergenceError, IntegrabilityError, LprimError
from .expr import FunctionExpr

# -- 7/15 Gauss-Kronrod pair (QUADPACK constants) ---------------------------

_XGK_HALF = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
)
_WGK_HALF = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
_WG_HALF = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)

XGK = np.array([-x for x in _XGK_HALF[:-1]] + [0.0] + list(reversed(_XGK_HALF[:-1])))
WGK = np.array(list(_WGK_HALF[:-1]) + [_WGK_HALF[-1]] + list(reversed(_WGK_HALF[:-1])))
_wg = [0.0] * 15
for _i, _w in enumerate(_WG_HALF[:-1]):
    _wg[1 + 2 * _i] = _w
    _wg[13 - 2 * _i] = _w
_wg[7] = _WG_HALF[-1]
WG = np.array(_wg)

_MAX_PANELS = 400_000


def _env_tol(name, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        v = float(raw)
    except ValueError as exc:
        raise LprimError(f"bad value for {name}: {raw!r}") from exc
    if v <= 0:
        raise LprimError(f"{name} must be positive")
    return v


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_depth: int = 48
    truncation_radius: float = 1e6
    osc_wavelength: float | None = None

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise LprimError("tolerances must be positive")
        if self.max_depth < 1:
            raise LprimError("max_depth must be >= 1")

    @staticmethod
    def from_env(**overrides):
        kw = dict(
            abs_tol=_env_tol("LPRIM_ABS_TOL", 1e-10),
            rel_tol=_env_tol("LPRIM_REL_TOL", 1e-8),
        )
        kw.update(overrides)
        return QuadConfig(**kw)


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_est: float
    converged: bool

    def __add__(self, other):
        return QuadResult(
            self.value + other.value,
            self.err_est + other.err_est,
            self.converged and other.converged,
        )


DEFAULT_CONFIG = QuadConfig()


# ---------------------------------------------------------------------------
# Gauss-Kronrod batch adaptivity


def _gk_eval(f, panels):
    """Kronrod/Gauss estimates per panel. panels: array (m, 2)."""
    a = panels[:, 0:1]
    b = panels[:, 1:2]
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    xs = c + h * XGK[None, :]
    vals = f.values(xs.ravel()).reshape(xs.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        # a non-finite sample poisons its panel: force refinement there
        vals = np.where(bad, 0.0, vals)
    k = (vals * WGK[None, :]).sum(axis=1) * h[:, 0]
    g = (vals * WG[None, :]).sum(axis=1) * h[:, 0]
    err = np.abs(k - g)
    err[bad.any(axis=1)] = np.inf
    return k, err


def _adaptive_gk(f, a, b, cfg):
    """Globally adaptive GK on [a, b] with no interior features."""
    width = b - a
    if width <= 0:
        return QuadResult(0.0, 0.0, True)
    cap = width
    if cfg.osc_wavelength is not None:
        cap = min(cap, 0.5 * cfg.osc_wavelength)
    n0 = max(1, min(int(math.ceil(width / cap)), _MAX_PANELS // 2))
    edges = np.linspace(a, b, n0 + 1)
    panels = np.column_stack([edges[:-1], edges[1:]])
    depth = np.zeros(n0, dtype=int)
    k, err = _gk_eval(f, panels)

    for _ in range(cfg.max_depth):
        total = math.fsum(k.tolist())
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        local_tol = tol * (panels[:, 1] - panels[:, 0]) / width
        need = (err > np.maximum(local_tol, 1e-300)) & (depth < cfg.max_depth)
        if math.fsum(err.tolist()) <= tol or not need.any():
            break
        if len(panels) + need.sum() > _MAX_PANELS:
            break
        keep_p, keep_k, keep_e, keep_d = (
            panels[~need],
            k[~need],
            err[~need],
            depth[~need],
        )
        sp = panels[need]
        mid = 0.5 * (sp[:, 0] + sp[:, 1])
        new_p = np.concatenate(
            [
                np.column_stack([sp[:, 0], mid]),
                np.column_stack([mid, sp[:, 1]]),
            ]
        )
        new_d = np.concatenate([depth[need] + 1, depth[need] + 1])
        new_k, new_e = _gk_eval(f, new_p)
        panels = np.concatenate([keep_p, new_p])
        k = np.concatenate([keep_k, new_k])
        err = np.concatenate([keep_e, new_e])
        depth = np.concatenate([keep_d, new_d])

    order = np.argsort(panels[:, 0], kind="stable")
    value = math.fsum(k[order].tolist())
    err_total = math.fsum(np.where(np.isfinite(err), err, 1.0)[order].tolist())
    tol = max(cfg.abs_tol, cfg.rel_tol * abs(value))
    return QuadResult(value, err_total, err_total <= tol)


# ---------------------------------------------------------------------------
# tanh-sinh rule for singular-endpoint panels

_TS_TMAX = 6.5
_TS_MAX_LEVEL = 11


def _tanh_sinh(f, a, b, cfg):
    """Double-exponential rule on (a, b); endpoints never sampled."""
    s = 0.5 * (b - a)
    if s <= 0:
        return QuadResult(0.0, 0.0, True)
    total = 0.0
    prev = None
    prev_delta = None
    estimates = []
    for level in range(_TS_MAX_LEVEL + 1):
        h = 2.0 ** (-level)
        kmax = int(math.floor(_TS_TMAX / h))
        ks = np.arange(-kmax, kmax + 1)
        if level > 0:
            ks = ks[ks % 2 != 0]
        ts = ks * h
        with np.errstate(over="ignore"):
            u = 0.5 * math.pi * np.sinh(ts)
            w = 0.5 * math.pi * np.cosh(ts) / np.cosh(u) ** 2
            # stable offsets from each endpoint: 1 +- tanh(u)
            off_lo = 2.0 / (1.0 + np.exp(-2.0 * np.clip(u, -700, 700)))
            off_hi = 2.0 / (1.0 + np.exp(2.0 * np.clip(u, -700, 700)))
        left = ts <= 0
        xs = np.where(left, a + s * off_lo, b - s * off_hi)
        ok = (xs > a) & (xs < b) & (w > 0)
        xs = xs[ok]
        w = w[ok]
        if xs.size == 0:
            continue
        vals = f.values(xs)
        vals = np.where(np.isfinite(vals), vals, 0.0)
        contrib = s * h * math.fsum((w * vals).tolist())
        if level == 0:
            # integrable endpoint singularities decay doubly exponentially
            # in the transformed variable; mass left in the outermost band
            # means the integral diverges (e.g. logarithmically)
            band = np.abs(ts[ok]) >= _TS_TMAX - 0.75
            outer = s * h * float(np.sum(np.abs(w[band] * vals[band])))
            if outer > max(1e-7, 1e-5 * abs(contrib)):
                raise IntegrabilityError(
                    "endpoint singularity too strong: integrability not certified"
                )
            total = contrib
        else:
            total = 0.5 * total + contrib
        estimates.append(total)
        if prev is not None:
            delta = abs(total - prev)
            tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
            if delta <= tol and level >= 3:
                return QuadResult(total, delta, True)
            if (
                prev_delta is not None
                and level >= 6
                and delta > 4.0 * prev_delta
                and abs(total) > 10.0 * max(1.0, abs(estimates[0]))
            ):
                raise IntegrabilityError(
                    "tanh-sinh refinement diverges: non-integrable singularity"
                )
            prev_delta = delta
        prev = total
    # did not converge: divergence heuristics
    if len(estimates) >= 4:
        tail = [abs(estimates[i + 1] - estimates[i]) for i in range(len(estimates) - 3, len(estimates) - 1)]
        if tail[1] >= tail[0] and abs(estimates[-1]) > 1e6:
            raise IntegrabilityError(
                "tanh-sinh estimates grow without bound: non-integrable singularity"
            )
    return QuadResult(total, abs(total - estimates[-2]) if len(estimates) > 1 else np.inf, False)


# ---------------------------------------------------------------------------
# public entry points


def _split_points(f, a, b, extra):
    pts = {a, b}
    for p in list(f.singularities) + list(f.kinks) + list(extra):
        if a < p < b:
            pts.add(float(p))
    return sorted(pts)


def integrate(f, a, b, cfg=None, extra_splits=()):
    """Integrate ``f`` over the finite interval [a, b]."""
    cfg = cfg or DEFAULT_CONFIG
    a = float(a)
    b = float(b)
    if b < a:
        r = integrate(f, b, a, cfg, extra_splits)
        return QuadResult(-r.value, r.err_est, r.converged)
    if b == a:
        return QuadResult(0.0, 0.0, True)
    pts = _split_points(f, a, b, extra_splits)
    sing = set(f.singularities)
    total = QuadResult(0.0, 0.0, True)
    for lo, hi in zip(pts[:-1], pts[1:]):
        if lo in sing or hi in sing:
            total = total + _tanh_sinh(f, lo, hi, cfg)
        else:
            total = total + _adaptive_gk(f, lo, hi, cfg)
    return total


def effective_radius(f, minimum=8.0):
    pts = f.feature_points()
    r = minimum
    if pts:
        r = max(r, 1.5 * max(abs(p) for p in pts) + 4.0)
    return r


class _TailMap:
    """The tail integral over sign*(r, oo) pulled back to (0, 1] by x = r/t."""

    def __init__(self, f, r, sign):
        self.f = f
        self.r = r
        self.sign = sign

    def values(self, ts):
        ts = np.asarray(ts, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            xs = self.sign * self.r / ts
            vals = self.f.values(xs) * (self.r / ts**2)
        return np.where(np.isfinite(vals), vals, 0.0)


def _power_tail(f, r, sign, cfg):
    return _tanh_sinh(_TailMap(f, r, sign), 0.0, 1.0, cfg)


class _ZetaTail:
    """Integrand of the periodic power tail.

    For f(x) = P(x) x^(-beta) with P periodic of period lam,
    the tail over sign*(r, oo) equals the integral over one period of
    f(x) (x/lam)^beta zeta(beta, x/lam), x = sign*(r + u).  The identity
    is exact for an exactly-periodic oscillation against an exact power.
    """

    def __init__(self, f, r, sign, beta, lam):
        self.f = f
        self.r = r
        self.sign = sign
        self.beta = beta
        self.lam = lam

    def values(self, us):
        from scipy.special import zeta

        us = np.asarray(us, dtype=float)
        xs = self.sign * (self.r + us)
        q = (self.r + us) / self.lam
        vals = self.f.values(xs) * q**self.beta * zeta(self.beta, q)
        return np.where(np.isfinite(vals), vals, 0.0)


def _periodic_power_tail(f, r, sign, beta, lam, cfg):
    """Tail of an oscillatory power-decay integrand, with a doubling
    cross-check supplying the error estimate."""
    def one(r0):
        return _adaptive_gk(_ZetaTail(f, r0, sign, beta, lam), 0.0, lam, cfg)

    t1 = one(r)
    mid = integrate(f, min(sign * r, sign * (2 * r)), max(sign * r, sign * (2 * r)), cfg)
    t2 = one(2 * r)
    check = abs(t1.value - (mid.value + t2.value))
    return QuadResult(t1.value, t1.err_est + check,
                      t1.converged and check <= 10 * max(cfg.abs_tol, cfg.rel_tol * abs(t1.value)))


def integrate_line(f, cfg=None, extra_splits=()):
    """Integrate ``f`` over the whole real line.

    Compact support reduces to a finite interval.  Otherwise the integral
    is truncated, with doubling shells certifying the tails through the
    integrand's decay class; decay 'none' with nonzero tails is refused.
    """
    cfg = cfg or DEFAULT_CONFIG
    if f.support is not None:
        lo = max(f.support[0], -cfg.truncation_radius)
        hi = min(f.support[1], cfg.truncation_radius)
        return integrate(f, lo, hi, cfg, extra_splits)

    if f.decay[0] == "power":
        if f.decay[1] <= 1.0:
            raise IntegrabilityError(
                f"power decay beta={f.decay[1]} <= 1: line integral diverges"
            )
        r = effective_radius(f)
        if cfg.osc_wavelength is not None:
            lam = cfg.osc_wavelength
            beta = f.decay[1]
            r = lam * math.ceil(max(r, 64.0) / lam)
            total = integrate(f, -r, r, cfg, extra_splits)
            return (
                total
                + _periodic_power_tail(f, r, +1.0, beta, lam, cfg)
                + _periodic_power_tail(f, r, -1.0, beta, lam, cfg)
            )
        total = integrate(f, -r, r, cfg, extra_splits)
        return total + _power_tail(f, r, +1.0, cfg) + _power_tail(f, r, -1.0, cfg)

    r = effective_radius(f)
    total = integrate(f, -r, r, cfg, extra_splits)
    shell_tol = 0.25 * cfg.abs_tol
    prev_mass = None
    quiet = 0
    while r < cfg.truncation_radius:
        right = integrate(f, r, 2 * r, cfg, extra_splits)
        left = integrate(f, -2 * r, -r, cfg, extra_splits)
        mass = abs(right.value) + abs(left.value) + right.err_est + left.err_est
        total = total + right + left
        if f.decay[0] == "none":
            # only an identically-zero tail can be certified
            probe = np.concatenate([np.linspace(r, 2 * r, 257), np.linspace(-2 * r, -r, 257)])
            if mass == 0.0 and np.all(f.values(probe) == 0.0):
                quiet += 1
                if quiet >= 2:
                    return total
            else:
                raise ConvergenceError(
                    "decay class 'none' with nonzero tails: cannot certify convergence"
                )
        elif f.decay[0] == "power":
            beta = f.decay[1]
            rho = 2.0 ** (1.0 - beta)
            bound = mass * rho / (1.0 - rho)
            if mass < shell_tol and bound < shell_tol:
                return QuadResult(total.value, total.err_est + bound, total.converged)
        else:  # gaussian / exponential
            if mass < shell_tol:
                if prev_mass is not None and mass <= prev_mass:
                    return QuadResult(
                        total.value, total.err_est + 2 * mass, total.converged
                    )
                quiet += 1
                if quiet >= 2:
                    return QuadResult(
                        total.value, total.err_est + 2 * mass, total.converged
                    )
        prev_mass = mass
        r *= 2
    return QuadResult(total.value, total.err_est, False)


def find_sign_changes(f, a, b, n=2048):
    """Zeros of f in (a, b) located by grid scan plus bisection."""
    xs = np.linspace(a, b, n + 1)
    # nudge grid points off declared singular points
    for s in f.singularities:
        hit = np.isclose(xs, s, rtol=0.0, atol=1e-300)
        xs[hit] += (b - a) * 1e-9
    vals = f.values(xs)
    vals = np.where(np.isfinite(vals), vals, 0.0)
    sgn = np.sign(vals)
    flips = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    zeros = []
    # exact grid hits: interior zeros flanked by nonzero values
    exact = np.nonzero((sgn[1:-1] == 0.0) & (sgn[:-2] != 0.0) & (sgn[2:] != 0.0))[0]
    zeros.extend(float(xs[i + 1]) for i in exact)
    for i in flips:
        lo, hi = xs[i], xs[i + 1]
        flo = vals[i]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            fm = f.values(np.array([mid]))[0]
            if not np.isfinite(fm):
                break
            if fm == 0.0:
                lo = hi = mid
                break
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
        zeros.append(0.5 * (lo + hi))
    return zeros


def lp_norm(f, p, cfg=None, extra_splits=()):
    """(Integral of |f|^p over the line)^(1/p)."""
    cfg = cfg or DEFAULT_CONFIG
    if not 1.0 <= p < math.inf:
        raise LprimError(f"exponent p={p} outside [1, oo)")
    integrand = abs(f) if p == 1.0 else abs(f).power(p)
    if f.support is not None:
        a, b = f.support
    else:
        r = effective_radius(f)
        a, b = -r, r
    zeros = find_sign_changes(f, a, b)
    splits = tuple(extra_splits) + tuple(zeros)
    res = integrate_line(integrand, cfg, extra_splits=splits)
    if not res.converged and res.err_est > 10 * max(cfg.abs_tol, cfg.rel_tol * abs(res.value)):
        raise ConvergenceError(
            f"L^{p} norm integral did not converge (err_est={res.err_est:.3g})"
        )
    return max(res.value, 0.0) ** (1.0 / p)


def sup_norm(f, cfg=None):
    """Supremum of |f|: grid scan plus golden-section refinement.

    A lower-bound estimator, refined until stable to rel_tol.  Declared
    singular points are treated as potentially unbounded and refused.
    """
    cfg = cfg or DEFAULT_CONFIG
    if f.singularities:
        raise ConvergenceError("sup_norm: declared singular points may be unbounded")
    if f.support is not None:
        a, b = f.support
    else:
        r = effective_radius(f, minimum=16.0)
        if f.decay[0] == "none":
            r = max(r, 64.0)
        a, b = -r, r
    n = 4096
    if cfg.osc_wavelength:
        n = max(n, int(8 * (b - a) / cfg.osc_wavelength))
    n = min(n, 2_000_000)
    xs = np.linspace(a, b, n + 1)
    vals = np.abs(f.values(xs))
    vals = np.where(np.isfinite(vals), vals, 0.0)
    best = float(vals.max())
    # refine around the top local maxima
    idx = np.argsort(vals)[-8:]
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    for i in idx:
        lo = xs[max(int(i) - 1, 0)]
        hi = xs[min(int(i) + 1, n)]
        c = hi - phi * (hi - lo)
        d = lo + phi * (hi - lo)
        fc = abs(f(c))
        fd = abs(f(d))
        for _ in range(200):
            if hi - lo < 1e-13 * max(1.0, abs(hi)):
                break
            if fc < fd:
                lo, c, fc = c, d, fd
                d = lo + phi * (hi - lo)
                fd = abs(f(d))
            else:
                hi, d, fd = d, c, fc
                c = hi - phi * (hi - lo)
                fc = abs(f(c))
        best = max(best, fc, fd)
    return best
