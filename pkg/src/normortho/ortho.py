"""Orthogonality relations, the Birkhoff oracle, and closed-form solvers.

Two independent Birkhoff-James deciders are exposed on purpose.
`is_orthogonal` with the "birkhoff" tag uses the derivative
characterization (u is orthogonal to v iff rho_- <= 0 <= rho_+), while
`birkhoff_oracle` minimizes t -> norm(u + t v) directly by golden-section
search and never touches the derivative engine.  Each guards the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .derivs import AlphaBeta, Lambda, rho_pair, sip
from .errors import DimensionMismatchError, ZeroVectorError
from .kernels import get_program
from .normast import NormAst
from .space import Vector, as_vector, _check_dim

__all__ = [
    "RELATION_TAGS",
    "Relation",
    "OrthoVerdict",
    "LocusPoint",
    "relation_residual",
    "is_orthogonal",
    "birkhoff_oracle",
    "ab_orthogonalizer",
    "birkhoff_t_interval",
    "ortho_locus",
]

RELATION_TAGS = (
    "birkhoff",
    "rho_plus",
    "rho_minus",
    "rho",
    "rho_lambda",
    "rho_ab",
    "isosceles",
    "pythagorean",
    "semi",
)

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Relation:
    """An orthogonality relation tag plus its embedded parameters."""

    tag: str
    ab: AlphaBeta | None = None
    lam: Lambda | None = None

    def __post_init__(self):
        if self.tag not in RELATION_TAGS:
            raise ValueError(f"unknown relation {self.tag!r}; expected one of {RELATION_TAGS}")
        if self.tag == "rho_ab" and self.ab is None:
            raise ValueError("relation rho_ab needs an (alpha, beta) pair")
        if self.tag == "rho_lambda" and self.lam is None:
            raise ValueError("relation rho_lambda needs a lambda weight")
        if self.tag != "rho_ab" and self.ab is not None:
            raise ValueError(f"relation {self.tag} takes no (alpha, beta) pair")
        if self.tag != "rho_lambda" and self.lam is not None:
            raise ValueError(f"relation {self.tag} takes no lambda weight")


@dataclass(frozen=True)
class OrthoVerdict:
    holds: bool
    residual: float
    tol: float


@dataclass(frozen=True)
class LocusPoint:
    theta: float
    x: float
    y: float
    residual: float
    is_zero_crossing: bool


def relation_residual(rel: Relation, ast: NormAst, u: Vector, v: Vector) -> float:
    """The defining quantity of the relation; zero (or <= 0 for Birkhoff)
    means the relation holds.

    Per tag: birkhoff -> max(rho_-, -rho_+); rho family -> the functional
    value; isosceles -> norm(u+v) - norm(u-v); pythagorean ->
    norm(u-v)^2 - norm(u)^2 - norm(v)^2; semi -> [v, u] (raises at
    non-smooth points).
    """
    tag = rel.tag
    if tag == "isosceles":
        prog = get_program(ast)
        plus = prog.value(tuple(a + b for a, b in zip(u, v)))
        minus = prog.value(tuple(a - b for a, b in zip(u, v)))
        return plus - minus
    if tag == "pythagorean":
        prog = get_program(ast)
        diff = prog.value(tuple(a - b for a, b in zip(u, v)))
        return diff * diff - (prog.value(u) ** 2 + prog.value(v) ** 2)
    if tag == "semi":
        return sip(ast, v, u)
    rm, rp = rho_pair(ast, u, v)
    if tag == "birkhoff":
        return max(rm, -rp)
    if tag == "rho_plus":
        return rp
    if tag == "rho_minus":
        return rm
    if tag == "rho":
        return (rm + rp) / 2.0
    if tag == "rho_lambda":
        lam = rel.lam.lam
        return lam * rm + (1.0 - lam) * rp
    # rho_ab
    return rel.ab.alpha * rm + rel.ab.beta * rp


def is_orthogonal(rel: Relation, ast: NormAst, u, v, tol: float = 1e-9) -> OrthoVerdict:
    """Decide the relation at tolerance tol.

    Equational relations hold when |residual| <= tol; Birkhoff holds when
    the one-sided chain rho_- <= tol and rho_+ >= -tol does, i.e. when
    its residual max(rho_-, -rho_+) <= tol.
    """
    uu = as_vector(u)
    vv = as_vector(v)
    _check_dim(ast, uu, vv)
    residual = relation_residual(rel, ast, uu, vv)
    if rel.tag == "birkhoff":
        holds = residual <= tol
    else:
        holds = abs(residual) <= tol
    return OrthoVerdict(holds, residual, tol)


def _golden_min(f, lo: float, hi: float, iters: int) -> float:
    """Minimum value of a unimodal f over [lo, hi]."""
    a, b = lo, hi
    h = b - a
    c = b - _INVPHI * h
    d = a + _INVPHI * h
    fc = f(c)
    fd = f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = b - _INVPHI * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = f(d)
    return fc if fc < fd else fd


def birkhoff_oracle(ast: NormAst, u, v, tol: float = 1e-9, iters: int = 200) -> OrthoVerdict:
    """Brute-force Birkhoff-James decision by 1-D minimization.

    norm(u + t v) is convex in t, hence unimodal; any minimizer t*
    satisfies |t*| <= 2 norm(u)/norm(v) (outside, the reverse triangle
    inequality gives norm(u+tv) >= |t| norm(v) - norm(u) > norm(u)), so
    the bracket T = 4 norm(u)/norm(v) is rigorous with slack.  Holds iff
    min_t norm(u + t v) >= norm(u) - tol.
    """
    uu = as_vector(u)
    vv = as_vector(v)
    _check_dim(ast, uu, vv)
    prog = get_program(ast)
    nu = prog.value(uu)
    nv = prog.value(vv)
    if nu == 0.0 or nv == 0.0:
        raise ZeroVectorError("birkhoff oracle needs nonzero u and v")
    phi = prog.line_evaluator(uu, vv)
    big_t = 4.0 * nu / nv
    lowest = _golden_min(phi, -big_t, big_t, iters)
    residual = nu - lowest
    return OrthoVerdict(residual <= tol, residual, tol)


def ab_orthogonalizer(ast: NormAst, u, v, ab: AlphaBeta) -> tuple[float, Vector]:
    """Scalar s with rho_ab(u, s u + v) = 0, and the witness w = s u + v.

    Closed form from the shift identity rho_ab(u, t u + v) =
    (alpha+beta) t norm(u)^2 + rho_ab(u, v):

        s = -rho_ab(u, v) / ((alpha+beta) norm(u)^2)
    """
    uu = as_vector(u)
    vv = as_vector(v)
    _check_dim(ast, uu, vv)
    val, dp, dm = get_program(ast).derivs(uu, vv)
    if val == 0.0:
        raise ZeroVectorError("orthogonalizer needs a nonzero u")
    r_ab = ab.alpha * (val * dm) + ab.beta * (val * dp)
    s = -r_ab / (ab.total * val * val)
    w = tuple(s * a + b for a, b in zip(uu, vv))
    return s, w


def birkhoff_t_interval(ast: NormAst, u, v) -> tuple[float, float]:
    """All t with u Birkhoff-orthogonal to t u + v form this closed interval.

    The shift identity moves rho_+- by t norm(u)^2, so the chain
    rho_-(u, tu+v) <= 0 <= rho_+(u, tu+v) holds exactly for
    t in [-rho_+(u,v)/norm(u)^2, -rho_-(u,v)/norm(u)^2]; nonempty since
    rho_- <= rho_+.
    """
    uu = as_vector(u)
    vv = as_vector(v)
    _check_dim(ast, uu, vv)
    val, dp, dm = get_program(ast).derivs(uu, vv)
    if val == 0.0:
        raise ZeroVectorError("interval needs a nonzero u")
    nsq = val * val
    return (-(val * dp) / nsq, -(val * dm) / nsq)


def _unit_direction(prog, theta: float) -> tuple[float, float]:
    d0 = math.cos(theta)
    d1 = math.sin(theta)
    r = prog.value((d0, d1))
    return (d0 / r, d1 / r)


def ortho_locus(ast: NormAst, u, rel: Relation, resolution: int = 720) -> list[LocusPoint]:
    """Residual of the relation along the planar unit circle of the norm.

    Walks x(theta) = (cos theta, sin theta)/norm(...) for resolution
    equally spaced Euclidean angles, then refines every residual sign
    change by bisection to an angular window below 1e-10 (sound because
    rho_+- and hence all residuals here are continuous in the second
    argument).  Refined crossings are spliced into the returned sequence
    with is_zero_crossing set.
    """
    if ast.dim != 2:
        raise DimensionMismatchError("locus tracing is defined for 2-dimensional spaces only")
    if resolution < 8:
        raise ValueError(f"resolution must be >= 8, got {resolution}")
    uu = as_vector(u)
    _check_dim(ast, uu)
    prog = get_program(ast)
    if prog.value(uu) == 0.0:
        raise ZeroVectorError("locus needs a nonzero base vector")

    def residual_at(theta: float) -> tuple[float, float, float]:
        x = _unit_direction(prog, theta)
        return x[0], x[1], relation_residual(rel, ast, uu, x)

    step = 2.0 * math.pi / resolution
    samples = [residual_at(j * step) for j in range(resolution)]
    points: list[LocusPoint] = []
    for j in range(resolution):
        x, y, res = samples[j]
        theta = j * step
        points.append(LocusPoint(theta, x, y, res, res == 0.0))
        nxt = samples[(j + 1) % resolution]
        if res == 0.0 or nxt[2] == 0.0 or (res > 0.0) == (nxt[2] > 0.0):
            continue
        lo, f_lo = theta, res
        hi = theta + step
        while hi - lo > 1e-10:
            mid = 0.5 * (lo + hi)
            fx, fy, f_mid = residual_at(mid)
            if f_mid == 0.0 or (f_mid > 0.0) == (f_lo > 0.0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
            if f_mid == 0.0:
                lo = hi = mid
        zx, zy, zres = residual_at(0.5 * (lo + hi))
        points.append(LocusPoint(0.5 * (lo + hi), zx, zy, zres, True))
    return points
