"""Flatten norm trees into a tape both execution backends interpret.

The tape is a post-order array program: children always precede parents,
so one forward pass evaluates the tree.  Keeping a single canonical
instruction encoding lets the compiled and pure Python interpreters share
operation order exactly, which keeps their results within rounding of
each other.
"""

from __future__ import annotations

import math

from . import normast

__all__ = [
    "K_L1",
    "K_L2",
    "K_LINF",
    "K_LP",
    "K_WLP1",
    "K_WLPINF",
    "K_WLPP",
    "K_MAX",
    "K_SUM",
    "K_SCALE",
    "compile_ast",
]

K_L1, K_L2, K_LINF, K_LP, K_WLP1, K_WLPINF, K_WLPP, K_MAX, K_SUM, K_SCALE = range(10)


def compile_ast(ast: normast.NormAst):
    """Return (kinds, params, woff, wlen, weights, left, right, dim) tuples.

    params holds the exponent for K_LP/K_WLPP nodes and the factor for
    K_SCALE nodes; woff/wlen index into the shared weights pool for the
    weighted families; left/right hold child tape positions (-1 if unused).
    """
    kinds: list[int] = []
    params: list[float] = []
    woff: list[int] = []
    wlen: list[int] = []
    left: list[int] = []
    right: list[int] = []
    weights: list[float] = []

    def emit(kind: int, param: float = 0.0, wo: int = 0, wl: int = 0,
             lc: int = -1, rc: int = -1) -> int:
        kinds.append(kind)
        params.append(param)
        woff.append(wo)
        wlen.append(wl)
        left.append(lc)
        right.append(rc)
        return len(kinds) - 1

    def walk(node: normast.NormAst) -> int:
        if isinstance(node, normast.L1):
            return emit(K_L1)
        if isinstance(node, normast.LInf):
            return emit(K_LINF)
        if isinstance(node, normast.Lp):
            if node.p == 2.0:
                return emit(K_L2)
            return emit(K_LP, param=node.p)
        if isinstance(node, normast.WLp):
            wo = len(weights)
            weights.extend(node.weights)
            wl = len(node.weights)
            if node.p == 1.0:
                return emit(K_WLP1, wo=wo, wl=wl)
            if math.isinf(node.p):
                return emit(K_WLPINF, wo=wo, wl=wl)
            return emit(K_WLPP, param=node.p, wo=wo, wl=wl)
        if isinstance(node, normast.Max):
            lc = walk(node.left)
            rc = walk(node.right)
            return emit(K_MAX, lc=lc, rc=rc)
        if isinstance(node, normast.Sum):
            lc = walk(node.left)
            rc = walk(node.right)
            return emit(K_SUM, lc=lc, rc=rc)
        if isinstance(node, normast.Scale):
            lc = walk(node.inner)
            return emit(K_SCALE, param=node.c, lc=lc)
        raise TypeError(f"not a norm node: {node!r}")

    walk(ast)
    return (
        tuple(kinds),
        tuple(params),
        tuple(woff),
        tuple(wlen),
        tuple(weights),
        tuple(left),
        tuple(right),
        ast.dim,
    )
