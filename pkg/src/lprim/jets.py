"""Forward-mode jets: truncated Taylor series up to fourth order.

A jet stores the Taylor coefficients (not the raw derivatives) of a function
of a single variable, so multiplication is plain series convolution.  Orders
are capped at 4, which is all the Poisson kernel derivatives and the Fourier
integration-by-parts acceleration ever need.
"""

from __future__ import annotations

import math

from .errors import JetError

MAX_ORDER = 4

_FACT = (1.0, 1.0, 2.0, 6.0, 24.0)


class Jet:
    """Taylor coefficients ``c[0..k]`` of a function at a point.

    ``c[j]`` is the j-th derivative divided by j!.  Use :meth:`derivatives`
    to recover the raw derivative tuple.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = tuple(float(v) for v in coeffs)
        if not 1 <= len(self.c) <= MAX_ORDER + 1:
            raise JetError(f"jet order must be in [0, {MAX_ORDER}]")

    @property
    def order(self):
        return len(self.c) - 1

    @property
    def value(self):
        return self.c[0]

    @staticmethod
    def variable(x, order):
        """The identity function's jet at x."""
        c = [float(x)] + [0.0] * order
        if order >= 1:
            c[1] = 1.0
        return Jet(c)

    @staticmethod
    def constant(v, order):
        return Jet([float(v)] + [0.0] * order)

    def derivatives(self):
        """(value, f', f'', ...) recovered from the Taylor coefficients."""
        return tuple(self.c[j] * _FACT[j] for j in range(len(self.c)))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.order != self.order:
                raise JetError("jet order mismatch")
            return other
        return Jet.constant(other, self.order)

    def __add__(self, other):
        o = self._coerce(other)
        return Jet([a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Jet([a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Jet([-a for a in self.c])

    def __mul__(self, other):
        o = self._coerce(other)
        k = self.order
        out = [0.0] * (k + 1)
        for i, a in enumerate(self.c):
            if a == 0.0:
                continue
            for j in range(k + 1 - i):
                out[i + j] += a * o.c[j]
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.c[0] == 0.0:
            raise JetError("jet division by a series vanishing at the point")
        k = self.order
        out = [0.0] * (k + 1)
        inv = 1.0 / o.c[0]
        for n in range(k + 1):
            s = self.c[n]
            for j in range(1, n + 1):
                s -= o.c[j] * out[n - j]
            out[n] = s * inv
        return Jet(out)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    # -- elementary function lifts -----------------------------------------

    def exp(self):
        k = self.order
        out = [math.exp(self.c[0])] + [0.0] * k
        for n in range(1, k + 1):
            s = 0.0
            for j in range(1, n + 1):
                s += j * self.c[j] * out[n - j]
            out[n] = s / n
        return Jet(out)

    def log(self):
        if self.c[0] <= 0.0:
            raise JetError("log jet at a nonpositive point")
        k = self.order
        out = [math.log(self.c[0])] + [0.0] * k
        for n in range(1, k + 1):
            s = n * self.c[n]
            for j in range(1, n):
                s -= j * out[j] * self.c[n - j]
            out[n] = s / (n * self.c[0])
        return Jet(out)

    def sincos(self):
        k = self.order
        s = [math.sin(self.c[0])] + [0.0] * k
        c = [math.cos(self.c[0])] + [0.0] * k
        for n in range(1, k + 1):
            ss = 0.0
            cc = 0.0
            for j in range(1, n + 1):
                ss += j * self.c[j] * c[n - j]
                cc -= j * self.c[j] * s[n - j]
            s[n] = ss / n
            c[n] = cc / n
        return Jet(s), Jet(c)

    def sin(self):
        return self.sincos()[0]

    def cos(self):
        return self.sincos()[1]

    def atan(self):
        # v' = u' / (1 + u^2)
        w = Jet.constant(1.0, self.order) + self * self
        return self._antiderive(math.atan(self.c[0]), self._dot() / w)

    def erf(self):
        g = (-(self * self)).exp() * (2.0 / math.sqrt(math.pi))
        return self._antiderive(math.erf(self.c[0]), self._dot() * g)

    def _dot(self):
        """Series of u' (one order of useful information less; padded)."""
        k = self.order
        d = [(j + 1) * self.c[j + 1] for j in range(k)] + [0.0]
        return Jet(d)

    def _antiderive(self, v0, d):
        """Series v with value v0 and v' = d (d padded to same order)."""
        k = self.order
        out = [v0] + [d.c[n - 1] / n for n in range(1, k + 1)]
        return Jet(out)

    def powi(self, n):
        """Integer power; valid even when the value vanishes."""
        if n == 0:
            return Jet.constant(1.0, self.order)
        if n < 0:
            return Jet.constant(1.0, self.order) / self.powi(-n)
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def powf(self, r):
        """Real power; needs a strictly positive value at the point."""
        if self.c[0] <= 0.0:
            raise JetError("fractional power jet at a nonpositive point")
        k = self.order
        out = [self.c[0] ** r] + [0.0] * k
        for n in range(1, k + 1):
            s = 0.0
            for j in range(1, n + 1):
                s += ((r + 1) * j - n) * self.c[j] * out[n - j]
            out[n] = s / (n * self.c[0])
        return Jet(out)

    def absolute(self):
        if self.c[0] == 0.0:
            raise JetError("abs jet at its kink")
        return self if self.c[0] > 0.0 else -self

    def __repr__(self):
        return f"Jet{self.c}"
