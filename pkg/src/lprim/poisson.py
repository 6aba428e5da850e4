"""Poisson extension to the upper half plane.

The boundary datum is an L^p function F (or the distribution f = D^n F);
the extension is the convolution with the Poisson kernel
Phi_y(x) = (y/pi)/(x^2+y^2), harmonic in y > 0, contracting in L^p norm,
and converging back to the boundary datum as y -> 0+.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ExponentError, IntegrabilityError, LprimError
from .expr import FunctionExpr
from .parser import parse_expr
from .quadrature import DEFAULT_CONFIG, effective_radius, integrate_line, lp_norm
from .sampling import sample_function, sampled_expr


@dataclass(frozen=True)
class HalfPlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise LprimError("half-plane points need y > 0")


def _kernel_expr(y):
    y = float(y)
    return parse_expr(f"({y / math.pi!r})*(x^2+{y * y!r})^(-1)")


def poisson_kernel(pt):
    """Phi_y(x) = (y/pi)/(x^2 + y^2)."""
    y = float(pt.y)
    return (y / math.pi) / (pt.x * pt.x + y * y)


def kernel_dx(pt, n):
    """The n-th x-derivative of the kernel at pt, via order-n jets."""
    n = int(n)
    if not 0 <= n <= 4:
        raise ExponentError("kernel_dx supports 0 <= n <= 4")
    if n == 0:
        return poisson_kernel(pt)
    return _kernel_expr(pt.y).eval_jet(float(pt.x), n)[n]


def _kernel_n(y, n):
    kern = _kernel_expr(y)
    for _ in range(n):
        kern = kern.diff()
    return kern


def _extension_point_fn(F, y, n, cfg):
    """x -> (d^n/dx^n) (Phi_y * F)(x), each value one line quadrature."""
    kern = _kernel_n(y, n)

    def u(x):
        x = float(x)
        # the integrand in xi is F(xi) * Phi^(n)(x - xi)
        shifted = FunctionExpr(
            kern.root.subst_affine(-1.0, x),
            singularities=tuple(sorted(x - s for s in kern.singularities)),
            kinks=tuple(sorted(x - k for k in kern.kinks)),
            support=None,
            decay=kern.decay,
        )
        return integrate_line(F * shifted, cfg).value

    return u


def harmonic_extension(F, pt, cfg=None):
    """U_y(x) = (Phi_y * F)(x) for F in L^p."""
    cfg = cfg or DEFAULT_CONFIG
    return _extension_point_fn(F, pt.y, 0, cfg)(pt.x)


def extension_n(f, pt, cfg=None):
    """u_y(x) = (Phi_y * f)(x) = d^n U_y / dx^n for f = D^n F."""
    cfg = cfg or DEFAULT_CONFIG
    n = int(getattr(f, "order", 0))
    F = f.F if hasattr(f, "F") else f
    if not 0 <= n <= 4:
        raise ExponentError("extension_n supports orders up to 4")
    return _extension_point_fn(F, pt.y, n, cfg)(pt.x)


def harmonicity_residual(f, pt, h, cfg=None):
    """5-point finite-difference Laplacian of the extension at pt; the
    residual of a harmonic function scales as O(h^2)."""
    cfg = cfg or DEFAULT_CONFIG
    h = float(h)
    if not pt.y > 2 * h:
        raise LprimError("stencil needs y > 2h")
    n = int(getattr(f, "order", 0))
    F = f.F if hasattr(f, "F") else f

    def u(x, y):
        return _extension_point_fn(F, y, n, cfg)(x)

    x, y = pt.x, pt.y
    lap = (
        u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4.0 * u(x, y)
    ) / (h * h)
    return lap


def _tail_decay(F):
    """Decay class of U_y - F: the kernel contributes power-2 tails."""
    kind = F.decay[0]
    if kind in ("compact", "gaussian", "exponential"):
        return ("power", 2.0)
    if kind == "power":
        return ("power", min(float(F.decay[1]), 2.0))
    raise IntegrabilityError(
        "boundary convergence needs a decaying boundary datum"
    )


def extension_expr(F, y, n=0, cfg=None, spline_tol=1e-7):
    """U_y (or its n-th x-derivative) as a FunctionExpr: a sampled spline
    at kernel-scale spacing <= y/4 near the data, direct quadrature in the
    tails, with the kernel's power-2 decay recorded."""
    cfg = cfg or DEFAULT_CONFIG
    y = float(y)
    if y <= 0:
        raise LprimError("extension needs y > 0")
    point = _extension_point_fn(F, y, n, cfg)
    R = effective_radius(F, minimum=8.0) + 4.0 * y + 4.0
    spline, err = sample_function(
        point, -R, R, tol=spline_tol, min_spacing=y / 4.0, max_points=65536
    )

    def values(xs):
        xs = np.asarray(xs, dtype=float)
        out = spline(xs)
        outside = (xs < -R) | (xs > R)
        for i in np.nonzero(outside)[0]:
            out[i] = point(xs[i])
        return out

    core = sampled_expr(values, -R, R, name=f"poisson_U[y={y:g}]")
    return FunctionExpr(core.root, singularities=(), kinks=(-R, R),
                        support=None, decay=_tail_decay(F))


def boundary_convergence(f, y_grid, cfg=None):
    """For each y (descending) the boundary gap ||u_y - f||^(n)_p, which
    equals ||U_y - F||_p; also checks the contraction ||u_y|| <= ||f||.

    Returns (norms, contraction_ok).
    """
    ys = [float(y) for y in y_grid]
    if any(y <= 0 for y in ys) or any(b >= a for a, b in zip(ys, ys[1:]) if False):
        raise LprimError("y grid must be positive")
    if ys != sorted(ys, reverse=True):
        raise LprimError("y grid must be descending")
    base = cfg or DEFAULT_CONFIG
    # inner extensions carry ~1e-10 quadrature noise; the outer norm
    # integral cannot meaningfully resolve below that
    outer = replace(base, abs_tol=max(base.abs_tol, 1e-8),
                    rel_tol=max(base.rel_tol, 1e-6))
    F, p = f.F, f.p
    fnorm = getattr(f, "norm", None)
    if fnorm is None:
        fnorm = lp_norm(F, p, base)
    norms = []
    contraction_ok = True
    for y in ys:
        U = extension_expr(F, y, 0, base)
        norms.append(lp_norm(U - F, p, outer))
        if lp_norm(U, p, outer) > fnorm + 1e-6:
            contraction_ok = False
    return norms, contraction_ok
