"""Pure Python tape interpreter.

Mirrors the compiled extension instruction for instruction; when touching
a formula here, change `_kernels.pyx` identically.  math.pow and math.sqrt
are used so both backends route through the same libm entry points.

A Program evaluates one fixed norm expression.  `derivs` returns the
triple (value, D+, D-) of the map t -> N(u + t v) at t = 0; one-sided
derivatives exist everywhere because every node is convex.
"""

from __future__ import annotations

import math

from .program import (
    K_L1,
    K_L2,
    K_LINF,
    K_LP,
    K_WLP1,
    K_WLPINF,
    K_WLPP,
    K_MAX,
    K_SUM,
    K_SCALE,
)

# relative band for linf active sets and max-combinator ties
_TIE = 1e-12


class Program:
    __slots__ = ("kinds", "params", "woff", "wlen", "weights", "left", "right",
                 "dim", "n")

    def __init__(self, kinds, params, woff, wlen, weights, left, right, dim):
        self.kinds = tuple(kinds)
        self.params = tuple(params)
        self.woff = tuple(woff)
        self.wlen = tuple(wlen)
        self.weights = tuple(weights)
        self.left = tuple(left)
        self.right = tuple(right)
        self.dim = int(dim)
        self.n = len(self.kinds)

    # -- evaluation ---------------------------------------------------------

    def value(self, u) -> float:
        """Norm of u."""
        if len(u) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(u)}")
        return self._value(u, [0.0] * self.n)

    def _value(self, u, vals) -> float:
        dim = self.dim
        for i in range(self.n):
            k = self.kinds[i]
            if k == K_L1:
                s = 0.0
                for j in range(dim):
                    s += abs(u[j])
                vals[i] = s
            elif k == K_L2:
                m = 0.0
                for j in range(dim):
                    a = abs(u[j])
                    if a > m:
                        m = a
                if m == 0.0:
                    vals[i] = 0.0
                else:
                    s = 0.0
                    for j in range(dim):
                        r = u[j] / m
                        s += r * r
                    vals[i] = m * math.sqrt(s)
            elif k == K_LINF:
                m = 0.0
                for j in range(dim):
                    a = abs(u[j])
                    if a > m:
                        m = a
                vals[i] = m
            elif k == K_LP:
                # scaled by the max coordinate so u far from unit scale
                # neither overflows nor underflows pow
                p = self.params[i]
                m = 0.0
                for j in range(dim):
                    a = abs(u[j])
                    if a > m:
                        m = a
                if m == 0.0:
                    vals[i] = 0.0
                else:
                    s = 0.0
                    for j in range(dim):
                        s += math.pow(abs(u[j]) / m, p)
                    vals[i] = m * math.pow(s, 1.0 / p)
            elif k == K_WLP1:
                wo = self.woff[i]
                s = 0.0
                for j in range(dim):
                    s += self.weights[wo + j] * abs(u[j])
                vals[i] = s
            elif k == K_WLPINF:
                wo = self.woff[i]
                m = 0.0
                for j in range(dim):
                    a = self.weights[wo + j] * abs(u[j])
                    if a > m:
                        m = a
                vals[i] = m
            elif k == K_WLPP:
                p = self.params[i]
                wo = self.woff[i]
                m = 0.0
                for j in range(dim):
                    a = abs(u[j])
                    if a > m:
                        m = a
                if m == 0.0:
                    vals[i] = 0.0
                else:
                    s = 0.0
                    for j in range(dim):
                        s += self.weights[wo + j] * math.pow(abs(u[j]) / m, p)
                    vals[i] = m * math.pow(s, 1.0 / p)
            elif k == K_MAX:
                a = vals[self.left[i]]
                b = vals[self.right[i]]
                vals[i] = a if a >= b else b
            elif k == K_SUM:
                vals[i] = vals[self.left[i]] + vals[self.right[i]]
            else:  # K_SCALE
                vals[i] = self.params[i] * vals[self.left[i]]
        return vals[self.n - 1]

    # -- one-sided derivatives ----------------------------------------------

    def derivs(self, u, v):
        """(N(u), D+, D-) of t -> N(u + t v) at t = 0."""
        if len(u) != self.dim or len(v) != self.dim:
            raise ValueError(
                f"expected {self.dim} coordinates, got {len(u)} and {len(v)}"
            )
        vals = [0.0] * self.n
        dps = [0.0] * self.n
        dms = [0.0] * self.n
        self._value(u, vals)
        self._derivs(u, v, vals, dps, dms)
        last = self.n - 1
        return vals[last], dps[last], dms[last]

    def _derivs(self, u, v, vals, dps, dms) -> None:
        dim = self.dim
        for i in range(self.n):
            k = self.kinds[i]
            if k == K_L1:
                sp = 0.0
                sa = 0.0
                for j in range(dim):
                    uj = u[j]
                    if uj > 0.0:
                        sp += v[j]
                    elif uj < 0.0:
                        sp -= v[j]
                    else:
                        sa += abs(v[j])
                dps[i] = sp + sa
                dms[i] = sp - sa
            elif k == K_L2:
                val = vals[i]
                if val == 0.0:
                    nv = self._leaf_norm(i, k, v)
                    dps[i] = nv
                    dms[i] = -nv
                else:
                    s = 0.0
                    for j in range(dim):
                        s += u[j] * v[j]
                    d = s / val
                    dps[i] = d
                    dms[i] = d
            elif k == K_LINF:
                val = vals[i]
                if val == 0.0:
                    nv = self._leaf_norm(i, k, v)
                    dps[i] = nv
                    dms[i] = -nv
                else:
                    thr = (1.0 - _TIE) * val
                    dp = -math.inf
                    dm = math.inf
                    for j in range(dim):
                        uj = u[j]
                        if abs(uj) >= thr:
                            g = v[j] if uj > 0.0 else -v[j]
                            if g > dp:
                                dp = g
                            if g < dm:
                                dm = g
                    dps[i] = dp
                    dms[i] = dm
            elif k == K_LP:
                val = vals[i]
                if val == 0.0:
                    nv = self._leaf_norm(i, k, v)
                    dps[i] = nv
                    dms[i] = -nv
                else:
                    pm1 = self.params[i] - 1.0
                    d = 0.0
                    for j in range(dim):
                        uj = u[j]
                        if uj > 0.0:
                            d += math.pow(uj / val, pm1) * v[j]
                        elif uj < 0.0:
                            d -= math.pow(-uj / val, pm1) * v[j]
                    dps[i] = d
                    dms[i] = d
            elif k == K_WLP1:
                wo = self.woff[i]
                sp = 0.0
                sa = 0.0
                for j in range(dim):
                    w = self.weights[wo + j]
                    uj = u[j]
                    if uj > 0.0:
                        sp += w * v[j]
                    elif uj < 0.0:
                        sp -= w * v[j]
                    else:
                        sa += w * abs(v[j])
                dps[i] = sp + sa
                dms[i] = sp - sa
            elif k == K_WLPINF:
                val = vals[i]
                if val == 0.0:
                    nv = self._leaf_norm(i, k, v)
                    dps[i] = nv
                    dms[i] = -nv
                else:
                    wo = self.woff[i]
                    thr = (1.0 - _TIE) * val
                    dp = -math.inf
                    dm = math.inf
                    for j in range(dim):
                        w = self.weights[wo + j]
                        uj = u[j]
                        if w * abs(uj) >= thr:
                            g = w * v[j] if uj > 0.0 else -w * v[j]
                            if g > dp:
                                dp = g
                            if g < dm:
                                dm = g
                    dps[i] = dp
                    dms[i] = dm
            elif k == K_WLPP:
                val = vals[i]
                if val == 0.0:
                    nv = self._leaf_norm(i, k, v)
                    dps[i] = nv
                    dms[i] = -nv
                else:
                    pm1 = self.params[i] - 1.0
                    wo = self.woff[i]
                    d = 0.0
                    for j in range(dim):
                        uj = u[j]
                        if uj > 0.0:
                            d += self.weights[wo + j] * math.pow(uj / val, pm1) * v[j]
                        elif uj < 0.0:
                            d -= self.weights[wo + j] * math.pow(-uj / val, pm1) * v[j]
                    dps[i] = d
                    dms[i] = d
            elif k == K_MAX:
                lc = self.left[i]
                rc = self.right[i]
                a = vals[lc]
                b = vals[rc]
                m = a if a >= b else b
                ref = m if m > 1.0 else 1.0
                if abs(a - b) <= _TIE * ref:
                    # tied children: one-sided derivative of a max of two
                    # functions equal at 0 is max of D+ and min of D-
                    dps[i] = dps[lc] if dps[lc] >= dps[rc] else dps[rc]
                    dms[i] = dms[lc] if dms[lc] <= dms[rc] else dms[rc]
                elif a > b:
                    dps[i] = dps[lc]
                    dms[i] = dms[lc]
                else:
                    dps[i] = dps[rc]
                    dms[i] = dms[rc]
            elif k == K_SUM:
                lc = self.left[i]
                rc = self.right[i]
                dps[i] = dps[lc] + dps[rc]
                dms[i] = dms[lc] + dms[rc]
            else:  # K_SCALE
                c = self.params[i]
                lc = self.left[i]
                dps[i] = c * dps[lc]
                dms[i] = c * dms[lc]

    def _leaf_norm(self, i: int, k: int, x) -> float:
        """Value of the single leaf at tape slot i applied to x."""
        dim = self.dim
        if k == K_L1:
            s = 0.0
            for j in range(dim):
                s += abs(x[j])
            return s
        if k == K_L2:
            m = 0.0
            for j in range(dim):
                a = abs(x[j])
                if a > m:
                    m = a
            if m == 0.0:
                return 0.0
            s = 0.0
            for j in range(dim):
                r = x[j] / m
                s += r * r
            return m * math.sqrt(s)
        if k == K_LINF:
            m = 0.0
            for j in range(dim):
                a = abs(x[j])
                if a > m:
                    m = a
            return m
        if k == K_LP:
            p = self.params[i]
            m = 0.0
            for j in range(dim):
                a = abs(x[j])
                if a > m:
                    m = a
            if m == 0.0:
                return 0.0
            s = 0.0
            for j in range(dim):
                s += math.pow(abs(x[j]) / m, p)
            return m * math.pow(s, 1.0 / p)
        if k == K_WLP1:
            wo = self.woff[i]
            s = 0.0
            for j in range(dim):
                s += self.weights[wo + j] * abs(x[j])
            return s
        if k == K_WLPINF:
            wo = self.woff[i]
            m = 0.0
            for j in range(dim):
                a = self.weights[wo + j] * abs(x[j])
                if a > m:
                    m = a
            return m
        if k == K_WLPP:
            p = self.params[i]
            wo = self.woff[i]
            m = 0.0
            for j in range(dim):
                a = abs(x[j])
                if a > m:
                    m = a
            if m == 0.0:
                return 0.0
            s = 0.0
            for j in range(dim):
                s += self.weights[wo + j] * math.pow(abs(x[j]) / m, p)
            return m * math.pow(s, 1.0 / p)
        raise AssertionError(f"not a leaf kind: {k}")

    # -- line restriction ----------------------------------------------------

    def line_evaluator(self, u, v):
        """Callable phi with phi(t) = N(u + t v); buffers reused per call."""
        if len(u) != self.dim or len(v) != self.dim:
            raise ValueError(
                f"expected {self.dim} coordinates, got {len(u)} and {len(v)}"
            )
        uu = tuple(float(x) for x in u)
        vv = tuple(float(x) for x in v)
        dim = self.dim
        buf = [0.0] * dim
        scratch = [0.0] * self.n
        value = self._value

        def phi(t: float) -> float:
            for j in range(dim):
                buf[j] = uu[j] + t * vv[j]
            return value(buf, scratch)

        return phi
