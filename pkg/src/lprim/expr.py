"""Expression trees for real functions on the line.

Nodes evaluate on floats or numpy arrays, propagate forward-mode jets
(order <= 4), and differentiate symbolically (almost-everywhere derivative
for the kinked primitives).  A :class:`FunctionExpr` wraps a tree with the
metadata the quadrature layer needs: declared singular points, kink points
(evaluable but non-smooth), an optional exact support interval and a decay
class tag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import special as _sp

from .errors import EvalDomainError, JetError, LprimError
from .jets import MAX_ORDER, Jet

# decay tags, ordered strongest first
DECAY_ORDER = ("compact", "gaussian", "exponential", "power", "none")


def _strength(decay):
    return DECAY_ORDER.index(decay[0])


def decay_add(d1, d2):
    """Decay of a sum: the weaker of the two (power betas take the min)."""
    if d1[0] == d2[0] == "power":
        return ("power", min(d1[1], d2[1]))
    return d1 if _strength(d1) >= _strength(d2) else d2


def decay_mul(d1, d2, g1, g2):
    """Decay of a product, given polynomial growth bounds of the factors."""
    if d1[0] == "compact" or d2[0] == "compact":
        return ("compact",)
    if d1[0] == "power" and d2[0] == "power":
        return ("power", d1[1] + d2[1])
    if d1[0] == "none" and d2[0] == "none":
        return ("none",)
    if d1[0] != "none" and d2[0] != "none":
        # both factors decay: the product decays at least as fast as either
        return d1 if _strength(d1) < _strength(d2) else d2
    # one side carries real decay; it survives a polynomially bounded cofactor
    strong, weak_growth = (d1, g2) if _strength(d1) < _strength(d2) else (d2, g1)
    if weak_growth == math.inf:
        return ("none",)
    if strong[0] == "power":
        beta = strong[1] - weak_growth
        return ("power", beta) if beta > 0 else ("none",)
    return strong


# ---------------------------------------------------------------------------
# nodes


class Node:
    """Base expression node."""

    def ev(self, x):
        raise NotImplementedError

    def jet(self, j):
        raise NotImplementedError

    def diff(self):
        raise LprimError(f"{type(self).__name__} is not differentiable")

    def src(self):
        raise LprimError(f"{type(self).__name__} has no source form")

    def subst_affine(self, a, b):
        """The node as a function of t where x = a*t + b."""
        raise NotImplementedError

    # printing precedence: higher binds tighter
    PREC = 100

    def _wrap(self, child):
        s = child.src()
        if child.PREC < self.PREC:
            return f"({s})"
        return s


class Const(Node):
    def __init__(self, v):
        self.v = float(v)

    def ev(self, x):
        if np.ndim(x):
            return np.full(np.shape(x), self.v)
        return self.v

    def jet(self, j):
        return Jet.constant(self.v, j.order)

    def diff(self):
        return Const(0.0)

    def src(self):
        if self.v == int(self.v) and abs(self.v) < 1e15:
            return repr(int(self.v))
        return repr(self.v)

    def subst_affine(self, a, b):
        return self


class Var(Node):
    def ev(self, x):
        return np.asarray(x, dtype=float) if np.ndim(x) else float(x)

    def jet(self, j):
        return j

    def diff(self):
        return Const(1.0)

    def src(self):
        return "x"

    def subst_affine(self, a, b):
        if a == 1.0 and b == 0.0:
            return self
        if a == 1.0:
            return Add(Var(), Const(b)) if b else self
        node = Mul(Const(a), Var())
        return Add(node, Const(b)) if b else node


class _Binary(Node):
    OP = "?"

    def __init__(self, a, b):
        self.a = a
        self.b = b

    def src(self):
        return f"{self._wrap(self.a)} {self.OP} {self._wrap_r(self.b)}"

    def _wrap_r(self, child):
        s = child.src()
        if child.PREC <= self.PREC and not self.ASSOC:
            return f"({s})"
        if child.PREC < self.PREC:
            return f"({s})"
        return s

    ASSOC = True

    def subst_affine(self, a, b):
        return type(self)(self.a.subst_affine(a, b), self.b.subst_affine(a, b))


class Add(_Binary):
    OP = "+"
    PREC = 10

    def ev(self, x):
        return self.a.ev(x) + self.b.ev(x)

    def jet(self, j):
        return self.a.jet(j) + self.b.jet(j)

    def diff(self):
        return Add(self.a.diff(), self.b.diff())


class Sub(_Binary):
    OP = "-"
    PREC = 10
    ASSOC = False

    def ev(self, x):
        return self.a.ev(x) - self.b.ev(x)

    def jet(self, j):
        return self.a.jet(j) - self.b.jet(j)

    def diff(self):
        return Sub(self.a.diff(), self.b.diff())


class Mul(_Binary):
    OP = "*"
    PREC = 20

    def ev(self, x):
        with np.errstate(invalid="ignore", over="ignore"):
            return self.a.ev(x) * self.b.ev(x)

    def jet(self, j):
        return self.a.jet(j) * self.b.jet(j)

    def diff(self):
        return Add(Mul(self.a.diff(), self.b), Mul(self.a, self.b.diff()))


class Div(_Binary):
    OP = "/"
    PREC = 20
    ASSOC = False

    def ev(self, x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self.a.ev(x) / self.b.ev(x)

    def jet(self, j):
        return self.a.jet(j) / self.b.jet(j)

    def diff(self):
        num = Sub(Mul(self.a.diff(), self.b), Mul(self.a, self.b.diff()))
        return Div(num, Mul(self.b, self.b))


class Neg(Node):
    PREC = 30

    def __init__(self, a):
        self.a = a

    def ev(self, x):
        return -self.a.ev(x)

    def jet(self, j):
        return -self.a.jet(j)

    def diff(self):
        return Neg(self.a.diff())

    def src(self):
        return f"-{self._wrap(self.a)}"

    def subst_affine(self, a, b):
        return Neg(self.a.subst_affine(a, b))


class Pow(Node):
    """base ^ exponent with a constant exponent."""

    PREC = 40

    def __init__(self, base, expo):
        self.base = base
        self.expo = float(expo)
        self._is_int = self.expo == int(self.expo) and abs(self.expo) < 64

    def ev(self, x):
        b = self.base.ev(x)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if self._is_int:
                if np.ndim(b) == 0:
                    return b ** int(self.expo)
                # multiplication by squaring: much faster than np.power's
                # per-element pow() for integer exponents
                e = int(self.expo)
                if e == 0:
                    return np.ones_like(b)
                neg = e < 0
                e = abs(e)
                acc = None
                sq = b
                while e:
                    if e & 1:
                        acc = sq if acc is None else acc * sq
                    e >>= 1
                    if e:
                        sq = sq * sq
                return 1.0 / acc if neg else acc
            return np.power(b, self.expo) if np.ndim(b) else float(b) ** self.expo

    def jet(self, j):
        bj = self.base.jet(j)
        if self._is_int:
            return bj.powi(int(self.expo))
        return bj.powf(self.expo)

    def diff(self):
        return Mul(Const(self.expo), Mul(Pow(self.base, self.expo - 1.0), self.base.diff()))

    def src(self):
        e = self.expo
        es = Const(e).src() if e >= 0 else f"({Const(e).src()})"
        return f"{self._wrap(self.base)}^{es}"

    def subst_affine(self, a, b):
        return Pow(self.base.subst_affine(a, b), self.expo)


_UNARY_EV = {
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "atan": np.arctan,
    "erf": _sp.erf,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "sgn": np.sign,
}

_UNARY_JET = {
    "exp": Jet.exp,
    "log": Jet.log,
    "sin": Jet.sin,
    "cos": Jet.cos,
    "atan": Jet.atan,
    "erf": Jet.erf,
    "sqrt": lambda j: j.powf(0.5),
    "abs": Jet.absolute,
}

TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


class Call(Node):
    PREC = 100

    def __init__(self, name, arg):
        if name not in _UNARY_EV:
            raise LprimError(f"unknown function {name!r}")
        self.name = name
        self.arg = arg

    def ev(self, x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return _UNARY_EV[self.name](self.arg.ev(x))

    def jet(self, j):
        aj = self.arg.jet(j)
        if self.name == "sgn":
            if aj.value == 0.0:
                raise JetError("sgn jet at its kink")
            return Jet.constant(math.copysign(1.0, aj.value), j.order)
        return _UNARY_JET[self.name](aj)

    def diff(self):
        a = self.arg
        da = a.diff()
        table = {
            "exp": lambda: Mul(self, da),
            "log": lambda: Div(da, a),
            "sin": lambda: Mul(Call("cos", a), da),
            "cos": lambda: Neg(Mul(Call("sin", a), da)),
            "atan": lambda: Div(da, Add(Const(1.0), Mul(a, a))),
            "erf": lambda: Mul(
                Mul(Const(TWO_OVER_SQRT_PI), Call("exp", Neg(Mul(a, a)))), da
            ),
            "sqrt": lambda: Div(da, Mul(Const(2.0), self)),
            "abs": lambda: Mul(Call("sgn", a), da),  # a.e. derivative
            "sgn": lambda: Const(0.0),  # a.e. derivative
        }
        return table[self.name]()

    def src(self):
        return f"{self.name}({self.arg.src()})"

    def subst_affine(self, a, b):
        return Call(self.name, self.arg.subst_affine(a, b))


class Indicator(Node):
    """Characteristic function of (a, b); value 1/2 at the endpoints.

    The midpoint convention at jumps keeps grid-sampled Fourier sums
    second-order accurate.
    """

    PREC = 100

    def __init__(self, a, b):
        if not a < b:
            raise LprimError("indicator needs a < b")
        self.a = float(a)
        self.b = float(b)

    def ev(self, x):
        return 0.5 * (np.sign(np.subtract(x, self.a)) - np.sign(np.subtract(x, self.b)))

    def jet(self, j):
        x0 = j.value
        if x0 == self.a or x0 == self.b:
            raise JetError("indicator jet at a jump")
        return Jet.constant(1.0 if self.a < x0 < self.b else 0.0, j.order)

    def diff(self):
        return Const(0.0)  # a.e. derivative

    def src(self):
        return f"indicator({Const(self.a).src()}, {Const(self.b).src()})"

    def subst_affine(self, a, b):
        # x = a*t + b lies in (lo, hi)  <=>  t in the transformed interval
        if a == 0.0:
            return Const(1.0 if self.a < b < self.b else 0.0)
        lo = (self.a - b) / a
        hi = (self.b - b) / a
        if a < 0:
            lo, hi = hi, lo
        return Indicator(lo, hi)


class Cmp:
    """Comparison used in piecewise conditions."""

    OPS = ("<", "<=", ">", ">=", "=")

    def __init__(self, lhs, op, rhs):
        if op not in self.OPS:
            raise LprimError(f"unknown comparison {op!r}")
        self.lhs = lhs
        self.op = op
        self.rhs = rhs

    def ev(self, x):
        l = self.lhs.ev(x)
        r = self.rhs.ev(x)
        return {
            "<": lambda: np.less(l, r),
            "<=": lambda: np.less_equal(l, r),
            ">": lambda: np.greater(l, r),
            ">=": lambda: np.greater_equal(l, r),
            "=": lambda: np.equal(l, r),
        }[self.op]()

    def src(self):
        return f"{self.lhs.src()} {self.op} {self.rhs.src()}"

    def subst_affine(self, a, b):
        return Cmp(self.lhs.subst_affine(a, b), self.op, self.rhs.subst_affine(a, b))


class Piecewise(Node):
    """First matching branch wins; an `else` branch is optional (default 0)."""

    PREC = 100

    def __init__(self, branches, otherwise=None):
        self.branches = list(branches)
        self.otherwise = otherwise if otherwise is not None else Const(0.0)

    def ev(self, x):
        with np.errstate(all="ignore"):
            out = self.otherwise.ev(x)
            for cond, node in reversed(self.branches):
                out = np.where(cond.ev(x), node.ev(x), out)
        if np.ndim(x):
            return out
        return float(out)

    def jet(self, j):
        x0 = j.value
        for cond, node in self.branches:
            if bool(cond.ev(x0)):
                return node.jet(j)
        return self.otherwise.jet(j)

    def diff(self):
        return Piecewise(
            [(c, n.diff()) for c, n in self.branches], self.otherwise.diff()
        )

    def src(self):
        parts = [f"{c.src()} -> {n.src()}" for c, n in self.branches]
        parts.append(f"else -> {self.otherwise.src()}")
        return "piecewise(" + ", ".join(parts) + ")"

    def subst_affine(self, a, b):
        return Piecewise(
            [(c.subst_affine(a, b), n.subst_affine(a, b)) for c, n in self.branches],
            self.otherwise.subst_affine(a, b),
        )


class Wrapped(Node):
    """Opaque vectorized callable (quadrature-backed primitives, Cantor
    iterates, ...).  Optional jet and derivative callables."""

    PREC = 100

    def __init__(self, fn, name="<numeric>", jet_fn=None, diff_fn=None,
                 growth_hint=math.inf):
        self.fn = fn
        self.name = name
        self.jet_fn = jet_fn
        self.diff_fn = diff_fn
        self.growth_hint = growth_hint

    def ev(self, x):
        if np.ndim(x):
            return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)
        return float(self.fn(np.asarray([x], dtype=float))[0])

    def jet(self, j):
        if self.jet_fn is None:
            raise JetError(f"{self.name} has no jet")
        return self.jet_fn(j)

    def diff(self):
        if self.diff_fn is None:
            raise LprimError(f"{self.name} is not differentiable")
        return self.diff_fn()

    def src(self):
        return self.name

    def subst_affine(self, a, b):
        base = self.fn
        return Wrapped(lambda xs: base(a * xs + b), name=f"{self.name}@affine",
                       growth_hint=self.growth_hint)


# ---------------------------------------------------------------------------
# tree analysis helpers


def _children(node):
    if isinstance(node, _Binary):
        return (node.a, node.b)
    if isinstance(node, (Neg,)):
        return (node.a,)
    if isinstance(node, Pow):
        return (node.base,)
    if isinstance(node, Call):
        return (node.arg,)
    if isinstance(node, Piecewise):
        out = []
        for c, n in node.branches:
            out += [c.lhs, c.rhs, n]
        out.append(node.otherwise)
        return tuple(out)
    return ()


def _zero_of(node):
    """If ``node`` vanishes exactly at one known point, return it."""
    if isinstance(node, Var):
        return 0.0
    if isinstance(node, Call) and node.name == "abs":
        return _zero_of(node.arg)
    if isinstance(node, Sub) and isinstance(node.a, Var) and isinstance(node.b, Const):
        return node.b.v
    if isinstance(node, Add) and isinstance(node.a, Var) and isinstance(node.b, Const):
        return -node.b.v
    if isinstance(node, Pow) and node.expo > 0:
        return _zero_of(node.base)
    return None


def infer_metadata(node):
    """Syntactic scan: (singularities, kinks, support, decay)."""
    sing = set()
    kinks = set()

    def walk(n):
        if isinstance(n, Call):
            if n.name in ("abs", "sgn"):
                z = _zero_of(n.arg)
                if z is not None:
                    (kinks if n.name == "abs" else kinks).add(z)
            elif n.name == "log":
                z = _zero_of(n.arg)
                if z is not None:
                    sing.add(z)
            elif n.name == "sqrt":
                z = _zero_of(n.arg)
                if z is not None:
                    kinks.add(z)
        elif isinstance(n, Div):
            z = _zero_of(n.b)
            if z is not None:
                sing.add(z)
        elif isinstance(n, Pow) and n.expo < 0:
            z = _zero_of(n.base)
            if z is not None:
                sing.add(z)
        elif isinstance(n, Pow) and 0 < n.expo < 1:
            z = _zero_of(n.base)
            if z is not None:
                kinks.add(z)
        elif isinstance(n, Indicator):
            kinks.update((n.a, n.b))
        elif isinstance(n, Piecewise):
            for c, _ in n.branches:
                if isinstance(c.lhs, Var) and isinstance(c.rhs, Const):
                    kinks.add(c.rhs.v)
                elif isinstance(c.rhs, Var) and isinstance(c.lhs, Const):
                    kinks.add(c.lhs.v)
        for ch in _children(n):
            walk(ch)

    walk(node)
    support = _infer_support(node)
    decay = ("compact",) if support is not None else _infer_decay(node)
    kinks -= sing
    return tuple(sorted(sing)), tuple(sorted(kinks)), support, decay


def _infer_support(node):
    if isinstance(node, Indicator):
        return (node.a, node.b)
    if isinstance(node, Mul):
        sa = _infer_support(node.a)
        sb = _infer_support(node.b)
        if sa and sb:
            lo, hi = max(sa[0], sb[0]), min(sa[1], sb[1])
            return (lo, hi) if lo < hi else (lo, lo + 0.0)
        return sa or sb
    if isinstance(node, (Add, Sub)):
        sa = _infer_support(node.a)
        sb = _infer_support(node.b)
        if sa and sb:
            return (min(sa[0], sb[0]), max(sa[1], sb[1]))
        return None
    if isinstance(node, Neg):
        return _infer_support(node.a)
    if isinstance(node, Pow) and node.expo > 0:
        return _infer_support(node.base)
    return None


def growth(node):
    """Polynomial growth bound (degree) as |x| -> oo; inf when unknown."""
    if isinstance(node, Const):
        return 0.0
    if isinstance(node, Var):
        return 1.0
    if isinstance(node, (Add, Sub)):
        return max(growth(node.a), growth(node.b))
    if isinstance(node, Neg):
        return growth(node.a)
    if isinstance(node, Mul):
        return growth(node.a) + growth(node.b)
    if isinstance(node, Div):
        return growth(node.a) if isinstance(node.b, Const) else math.inf
    if isinstance(node, Pow):
        g = growth(node.base)
        if node.expo >= 0:
            return g * node.expo
        return math.inf if g == math.inf else 0.0
    if isinstance(node, Call):
        if node.name in ("sin", "cos", "atan", "erf", "sgn"):
            return 0.0
        if node.name in ("abs",):
            return growth(node.arg)
        if node.name == "sqrt":
            return 0.5 * growth(node.arg)
        if node.name == "log":
            return 0.5  # sublinear; any positive epsilon works here
        return math.inf  # exp
    if isinstance(node, Indicator):
        return 0.0
    if isinstance(node, Piecewise):
        gs = [growth(n) for _, n in node.branches] + [growth(node.otherwise)]
        return max(gs)
    if isinstance(node, Wrapped):
        return node.growth_hint
    return math.inf


def _neg_arg_decay(arg):
    """Decay class of exp(arg) when arg -> -infinity like -|x|^gamma."""

    def power_of(n):
        # matches |x|^g shapes: x^(2k), abs(x), abs(x - c)^g, positive multiples
        if isinstance(n, Call) and n.name == "abs" and _zero_of(n.arg) is not None:
            return 1.0
        if isinstance(n, Pow) and n.expo > 0:
            if isinstance(n.base, Var):
                e = n.expo
                return e if e == int(e) and int(e) % 2 == 0 else None
            inner = power_of(n.base)
            return None if inner is None else inner * n.expo
        if isinstance(n, Mul):
            if isinstance(n.a, Const) and n.a.v > 0:
                return power_of(n.b)
            if isinstance(n.b, Const) and n.b.v > 0:
                return power_of(n.a)
        return None  # Var alone is odd: grows at +inf only

    if isinstance(arg, Neg):
        g = power_of(arg.a)
        if g is not None:
            if g >= 2:
                return ("gaussian",)
            if g >= 1:
                return ("exponential",)
    if isinstance(arg, Mul) and isinstance(arg.a, Const) and arg.a.v < 0:
        return _neg_arg_decay(Neg(arg.b))
    if isinstance(arg, Mul) and isinstance(arg.b, Const) and arg.b.v < 0:
        return _neg_arg_decay(Neg(arg.a))
    return ("none",)


def _infer_decay(node):
    if isinstance(node, (Const,)):
        return ("compact",) if node.v == 0.0 else ("none",)
    if isinstance(node, Indicator):
        return ("compact",)
    if isinstance(node, Neg):
        return _infer_decay(node.a)
    if isinstance(node, (Add, Sub)):
        return decay_add(_infer_decay(node.a), _infer_decay(node.b))
    if isinstance(node, Mul):
        return decay_mul(
            _infer_decay(node.a), _infer_decay(node.b), growth(node.a), growth(node.b)
        )
    if isinstance(node, Div):
        da = _infer_decay(node.a)
        gb = growth(node.b)
        if isinstance(node.b, Const):
            return da
        if gb not in (0.0, math.inf) and gb < math.inf and growth(node.a) == 0.0:
            # bounded numerator over a polynomially growing denominator
            return decay_mul(da, ("power", gb), 0.0, 0.0) if da[0] != "none" else (
                "power",
                gb,
            )
        return ("none",)
    if isinstance(node, Pow):
        d = _infer_decay(node.base)
        if node.expo > 0:
            if d[0] == "power":
                return ("power", d[1] * node.expo)
            return d
        if node.expo < 0:
            g = growth(node.base)
            if 0.0 < g < math.inf and d[0] == "none":
                return ("power", g * -node.expo)
        return ("none",)
    if isinstance(node, Call):
        if node.name == "exp":
            return _neg_arg_decay(node.arg)
        if node.name in ("abs",):
            return _infer_decay(node.arg)
        if node.name in ("sin", "atan", "erf"):
            # vanish at 0, but that says nothing about the tails
            return ("none",)
        return ("none",)
    if isinstance(node, Piecewise):
        ds = [_infer_decay(n) for _, n in node.branches]
        ds.append(_infer_decay(node.otherwise))
        out = ds[0]
        for d in ds[1:]:
            out = decay_add(out, d)
        return out
    return ("none",)


# ---------------------------------------------------------------------------
# FunctionExpr


def _merge_support_add(sa, sb):
    if sa is None or sb is None:
        return None
    return (min(sa[0], sb[0]), max(sa[1], sb[1]))


def _merge_support_mul(sa, sb):
    if sa is None:
        return sb
    if sb is None:
        return sa
    lo, hi = max(sa[0], sb[0]), min(sa[1], sb[1])
    return (lo, hi) if lo < hi else (lo, lo)


@dataclass(frozen=True)
class FunctionExpr:
    """A closed-form (or numerically backed) real function on the line."""

    root: Node
    singularities: tuple = ()
    kinks: tuple = ()
    support: tuple | None = None
    decay: tuple = ("none",)

    @staticmethod
    def from_node(node, **overrides):
        sing, kinks, support, decay = infer_metadata(node)
        meta = dict(singularities=sing, kinks=kinks, support=support, decay=decay)
        meta.update(overrides)
        return FunctionExpr(node, **meta)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, x):
        x = float(x)
        if any(x == s for s in self.singularities):
            raise EvalDomainError(f"evaluation at declared singular point {x}")
        if self.support is not None and not (self.support[0] <= x <= self.support[1]):
            return 0.0
        v = self.root.ev(x)
        return float(v)

    def values(self, xs):
        """Vectorized evaluation; caller keeps clear of singular points."""
        xs = np.asarray(xs, dtype=float)
        out = np.asarray(self.root.ev(xs), dtype=float)
        if out.shape != xs.shape:
            out = np.broadcast_to(out, xs.shape).copy()
        if self.support is not None:
            lo, hi = self.support
            out = np.where((xs < lo) | (xs > hi), 0.0, out)
        return out

    def eval_jet(self, x, k):
        """(value, d1, ..., dk) via forward-mode propagation."""
        if not 0 <= k <= MAX_ORDER:
            raise JetError(f"jet order must be in [0, {MAX_ORDER}]")
        x = float(x)
        for s in self.singularities + self.kinks:
            if abs(x - s) < 1e-12:
                raise JetError(f"jet at non-smooth point {s}")
        j = self.root.jet(Jet.variable(x, k))
        return j.derivatives()

    def to_source(self):
        return self.root.src()

    # -- calculus ------------------------------------------------------------

    def diff(self):
        """Almost-everywhere derivative.  Kinks of this function become
        potential singular points of the derivative."""
        return FunctionExpr(
            self.root.diff(),
            singularities=tuple(sorted(set(self.singularities) | set(self.kinks))),
            kinks=self.kinks,
            support=self.support,
            decay=self.decay,
        )

    @property
    def is_smooth(self):
        if self.singularities or self.kinks:
            return False
        ok = True

        def walk(n):
            nonlocal ok
            if isinstance(n, (Indicator, Piecewise)):
                ok = False
            if isinstance(n, Call) and n.name in ("abs", "sgn"):
                ok = False
            if isinstance(n, Wrapped) and n.jet_fn is None:
                ok = False
            for ch in _children(n):
                walk(ch)

        walk(self.root)
        return ok

    # -- algebra -------------------------------------------------------------

    def _binary(self, other, cls, support_rule, decay_rule):
        if not isinstance(other, FunctionExpr):
            other = FunctionExpr(Const(other), decay=("none",))
        return FunctionExpr(
            cls(self.root, other.root),
            singularities=tuple(sorted(set(self.singularities) | set(other.singularities))),
            kinks=tuple(sorted((set(self.kinks) | set(other.kinks))
                               - set(self.singularities) - set(other.singularities))),
            support=support_rule(self.support, other.support),
            decay=decay_rule(self, other),
        )

    def __add__(self, other):
        return self._binary(
            other, Add, _merge_support_add, lambda a, b: decay_add(a.decay, b.decay)
        )

    def __sub__(self, other):
        return self._binary(
            other, Sub, _merge_support_add, lambda a, b: decay_add(a.decay, b.decay)
        )

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            if other == 0.0:
                return FunctionExpr(Const(0.0), support=(0.0, 0.0), decay=("compact",))
            return FunctionExpr(
                Mul(Const(other), self.root),
                singularities=self.singularities,
                kinks=self.kinks,
                support=self.support,
                decay=self.decay,
            )
        return self._binary(
            other,
            Mul,
            _merge_support_mul,
            lambda a, b: decay_mul(a.decay, b.decay, growth(a.root), growth(b.root)),
        )

    __rmul__ = __mul__

    def __neg__(self):
        return FunctionExpr(
            Neg(self.root),
            singularities=self.singularities,
            kinks=self.kinks,
            support=self.support,
            decay=self.decay,
        )

    def __abs__(self):
        return FunctionExpr(
            Call("abs", self.root),
            singularities=self.singularities,
            kinks=self.kinks,  # zeros of self are extra kinks found at quadrature time
            support=self.support,
            decay=self.decay,
        )

    def power(self, r):
        """|self| is expected nonnegative-compatible for fractional r."""
        return FunctionExpr(
            Pow(self.root, r),
            singularities=self.singularities,
            kinks=self.kinks,
            support=self.support if r > 0 else None,
            decay=(("power", self.decay[1] * r) if self.decay[0] == "power" else self.decay)
            if r > 0
            else ("none",),
        )

    def translate(self, t):
        """The function x -> self(x - t)."""
        t = float(t)
        if t == 0.0:
            return self
        return FunctionExpr(
            self.root.subst_affine(1.0, -t),
            singularities=tuple(s + t for s in self.singularities),
            kinks=tuple(k + t for k in self.kinks),
            support=None if self.support is None else (self.support[0] + t, self.support[1] + t),
            decay=self.decay,
        )

    def dilate(self, t):
        """The L^1-normalized dilation x -> self(x/t)/t for t > 0."""
        t = float(t)
        if t <= 0:
            raise LprimError("dilation scale must be positive")
        scaled = FunctionExpr(
            self.root.subst_affine(1.0 / t, 0.0),
            singularities=tuple(s * t for s in self.singularities),
            kinks=tuple(k * t for k in self.kinks),
            support=None if self.support is None else (self.support[0] * t, self.support[1] * t),
            decay=self.decay,
        )
        return scaled * (1.0 / t)

    def feature_points(self):
        pts = set(self.singularities) | set(self.kinks)
        if self.support is not None:
            pts |= set(self.support)
        return tuple(sorted(pts))


def maximum(f, g):
    """Pointwise max; crossing points are located by the quadrature layer."""
    node = Piecewise([(Cmp(f.root, ">=", g.root), f.root)], g.root)
    return FunctionExpr(
        node,
        singularities=tuple(sorted(set(f.singularities) | set(g.singularities))),
        kinks=tuple(sorted(set(f.kinks) | set(g.kinks))),
        support=_merge_support_add(f.support, g.support),
        decay=decay_add(f.decay, g.decay),
    )


def minimum(f, g):
    node = Piecewise([(Cmp(f.root, "<=", g.root), f.root)], g.root)
    return FunctionExpr(
        node,
        singularities=tuple(sorted(set(f.singularities) | set(g.singularities))),
        kinks=tuple(sorted(set(f.kinks) | set(g.kinks))),
        support=_merge_support_add(f.support, g.support),
        decay=decay_add(f.decay, g.decay),
    )


def const_expr(v):
    return FunctionExpr(Const(v), decay=("compact",) if v == 0.0 else ("none",))


def var_expr():
    return FunctionExpr(Var(), decay=("none",))
