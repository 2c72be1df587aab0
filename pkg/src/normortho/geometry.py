"""Angles, unit-ball geometry probes, and characterization identities.

The angle functional arccos(rho_ab(u,v) / ((alpha+beta) norm(u) norm(v)))
generalizes the Euclidean angle; on an inner-product norm it reduces to
it exactly.  The probes hunt for the geometric pathologies that separate
general norms from inner-product norms: non-smooth points, flat faces,
asymmetry of rho_ab, and quartic-identity violations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .derivs import AlphaBeta, rho_ab, rho_pair
from .errors import EngineError, ZeroVectorError
from .kernels import get_program
from .normast import NormAst
from .space import (
    SampleConfig,
    Vector,
    as_vector,
    _check_dim,
    corner_vectors,
    random_vector,
)
from .rng import SplitMix64

__all__ = [
    "AngleResult",
    "ProbeReport",
    "ExtremeEstimate",
    "angle_ab",
    "angle_homogeneity_check",
    "angular_constant",
    "smoothness_probe",
    "strict_convexity_probe",
    "quartic_identity_residual",
    "symmetry_residual",
    "symmetry_search",
    "norm_equiv_constant",
]

# band beyond which an out-of-range arccos argument stops being roundoff
# and starts being an engine defect
_CLAMP_BAND = 1e-9


@dataclass(frozen=True)
class AngleResult:
    """theta = arccos of the clamped argument; the raw argument is kept
    for diagnostics."""

    theta: float
    cosine_argument: float


@dataclass(frozen=True)
class ProbeReport:
    verdict: str  # "pass" | "witness-found"
    witness_u: Vector | None
    witness_v: Vector | None
    diagnostic: float | None
    samples_used: int


@dataclass(frozen=True)
class ExtremeEstimate:
    """A sampled max of some ratio; a lower bound for the true supremum,
    never a certificate of attainment."""

    value: float
    witness_u: Vector | None
    witness_v: Vector | None
    samples_used: int
    skipped: int
    unbounded: bool = False


def angle_ab(ast: NormAst, u, v, ab: AlphaBeta) -> AngleResult:
    """The rho_ab angle between nonzero u and v, in [0, pi].

    The argument rho_ab(u,v)/((alpha+beta) norm(u) norm(v)) lies in
    [-1, 1] mathematically; values beyond the 1e-9 roundoff band raise
    EngineError since they can only come from a defective derivative.
    """
    uu = as_vector(u)
    vv = as_vector(v)
    _check_dim(ast, uu, vv)
    prog = get_program(ast)
    val, dp, dm = prog.derivs(uu, vv)
    nv = prog.value(vv)
    if val == 0.0 or nv == 0.0:
        raise ZeroVectorError("angle needs nonzero u and v")
    r_ab = ab.alpha * (val * dm) + ab.beta * (val * dp)
    raw = r_ab / (ab.total * val * nv)
    if abs(raw) > 1.0 + _CLAMP_BAND:
        raise EngineError(f"cosine argument {raw!r} is out of range beyond roundoff")
    clamped = min(1.0, max(-1.0, raw))
    return AngleResult(math.acos(clamped), raw)


def angle_homogeneity_check(ast: NormAst, u, v, a: float, b: float,
                            ab: AlphaBeta) -> float:
    """Residual of the angle scaling law.

    theta_ab(a u, b v) equals theta_ab(u, v) when a b > 0 and
    pi - theta_ba(u, v) when a b < 0; returns the absolute deviation,
    expected at roundoff scale.
    """
    if a == 0.0 or b == 0.0:
        raise ValueError("scale factors must be nonzero")
    uu = as_vector(u)
    vv = as_vector(v)
    scaled_u = tuple(a * c for c in uu)
    scaled_v = tuple(b * c for c in vv)
    lhs = angle_ab(ast, scaled_u, scaled_v, ab).theta
    if a * b > 0.0:
        return abs(lhs - angle_ab(ast, uu, vv, ab).theta)
    return abs(lhs - (math.pi - angle_ab(ast, uu, vv, ab.swapped).theta))


def _nonzero_vector(rng: SplitMix64, prog, dim: int, scale: float) -> Vector:
    while True:
        x = random_vector(rng, dim, scale)
        if prog.value(x) != 0.0:
            return x


def angular_constant(ast1: NormAst, ast2: NormAst, ab: AlphaBeta,
                     cfg: SampleConfig) -> ExtremeEstimate:
    """Sampled estimate of the constant K in tan(theta_2/2) <= K tan(theta_1/2).

    Pairs where both angles are below 1e-9 (or both within 1e-9 of pi)
    carry no information and are skipped.  Two degeneracies witness
    unboundedness and short-circuit with unbounded set: theta_1 < 1e-9
    with theta_2 >= 1e-6, and the mirror case theta_2 within 1e-9 of pi
    (tan blows up) while theta_1 stays at least 1e-6 away from pi.  The
    mirror case is where a non-strictly-convex second norm shows up: its
    angle hits pi on open sets of pairs.
    """
    if ast1.dim != ast2.dim:
        raise ValueError("both norms must share the ambient dimension")
    prog1 = get_program(ast1)
    rng = SplitMix64(cfg.seed)
    dim = ast1.dim
    best = 0.0
    witness: tuple[Vector, Vector] | None = None
    skipped = 0
    used = 0
    for _ in range(cfg.count):
        u = _nonzero_vector(rng, prog1, dim, cfg.scale)
        v = _nonzero_vector(rng, prog1, dim, cfg.scale)
        used += 1
        t1 = angle_ab(ast1, u, v, ab).theta
        t2 = angle_ab(ast2, u, v, ab).theta
        if t1 < 1e-9:
            if t2 >= 1e-6:
                return ExtremeEstimate(math.inf, u, v, used, skipped, unbounded=True)
            skipped += 1
            continue
        if t2 > math.pi - 1e-9:
            if t1 <= math.pi - 1e-6:
                return ExtremeEstimate(math.inf, u, v, used, skipped, unbounded=True)
            skipped += 1
            continue
        ratio = math.tan(t2 / 2.0) / math.tan(t1 / 2.0)
        if ratio > best:
            best = ratio
            witness = (u, v)
    wu, wv = witness if witness is not None else (None, None)
    return ExtremeEstimate(best, wu, wv, used, skipped)


def _corner_pairs(dim: int):
    corners = corner_vectors(dim)
    for u in corners:
        for v in corners:
            yield u, v


def smoothness_probe(ast: NormAst, cfg: SampleConfig) -> ProbeReport:
    """Search for a pair where the one-sided derivatives split.

    Deterministic corner pairs run first because non-smooth sets have
    measure zero and random draws never land on them; random pairs fill
    the remaining budget.  A witness is a pair with
    rho_+ - rho_- > 1e-7 norm(u) norm(v).
    """
    prog = get_program(ast)
    rng = SplitMix64(cfg.seed)
    dim = ast.dim
    used = 0

    def check(u: Vector, v: Vector):
        rm, rp = rho_pair(ast, u, v)
        gap = rp - rm
        if gap > 1e-7 * prog.value(u) * prog.value(v):
            return gap
        return None

    for u, v in _corner_pairs(dim):
        if used >= cfg.count:
            break
        used += 1
        gap = check(u, v)
        if gap is not None:
            return ProbeReport("witness-found", u, v, gap, used)
    while used < cfg.count:
        u = _nonzero_vector(rng, prog, dim, cfg.scale)
        v = _nonzero_vector(rng, prog, dim, cfg.scale)
        used += 1
        gap = check(u, v)
        if gap is not None:
            return ProbeReport("witness-found", u, v, gap, used)
    return ProbeReport("pass", None, None, None, used)


def strict_convexity_probe(ast: NormAst, cfg: SampleConfig,
                           min_separation: float = 0.05) -> ProbeReport:
    """Search for distinct unit vectors whose midpoint stays on the sphere.

    A witness pair has norm((u+v)/2) >= 1 - 1e-9; such pairs span a flat
    face of the unit ball.  Normalized corner vectors run first (they hit
    the faces of polyhedral balls deterministically), then random sphere
    pairs.  Pairs closer than min_separation are skipped: for any norm
    the midpoint norm of an eps-separated pair can sit within O(eps^p)
    of 1, so witnesses from near-duplicates would be indistinguishable
    from roundoff.  The default separation is calibrated for exponents
    up to about 4; flatter smooth norms need a larger separation.
    """
    prog = get_program(ast)
    rng = SplitMix64(cfg.seed)
    dim = ast.dim
    used = 0

    def check(u: Vector, v: Vector):
        if prog.value(tuple(a - b for a, b in zip(u, v))) <= min_separation:
            return None
        mid = prog.value(tuple((a + b) / 2.0 for a, b in zip(u, v)))
        if mid >= 1.0 - 1e-9:
            return mid
        return None

    corners = [tuple(c / prog.value(cv) for c in cv) for cv in corner_vectors(dim)]
    for i, u in enumerate(corners):
        for v in corners[i + 1:]:
            if used >= cfg.count:
                break
            used += 1
            mid = check(u, v)
            if mid is not None:
                return ProbeReport("witness-found", u, v, mid, used)
    while used < cfg.count:
        x = _nonzero_vector(rng, prog, dim, cfg.scale)
        y = _nonzero_vector(rng, prog, dim, cfg.scale)
        rx = prog.value(x)
        ry = prog.value(y)
        u = tuple(c / rx for c in x)
        v = tuple(c / ry for c in y)
        used += 1
        mid = check(u, v)
        if mid is not None:
            return ProbeReport("witness-found", u, v, mid, used)
    return ProbeReport("pass", None, None, None, used)


def quartic_identity_residual(ast: NormAst, u, v, ab: AlphaBeta) -> float:
    """Defect of the fourth-power identity

        (alpha+beta)(norm(u+v)^4 - norm(u-v)^4)
            = 8 (norm(u)^2 rho_ab(u,v) + norm(v)^2 rho_ab(v,u)),

    which holds for all u, v exactly when the norm is induced by an inner
    product.  Returns left side minus right side.
    """
    uu = as_vector(u)
    vv = as_vector(v)
    _check_dim(ast, uu, vv)
    prog = get_program(ast)
    plus = prog.value(tuple(a + b for a, b in zip(uu, vv)))
    minus = prog.value(tuple(a - b for a, b in zip(uu, vv)))
    nu = prog.value(uu)
    nv = prog.value(vv)
    lhs = ab.total * (plus**4 - minus**4)
    rhs = 8.0 * (nu * nu * rho_ab(ast, uu, vv, ab) + nv * nv * rho_ab(ast, vv, uu, ab))
    return lhs - rhs


def symmetry_residual(ast: NormAst, u, v, ab: AlphaBeta) -> float:
    """rho_ab(u, v) - rho_ab(v, u); identically zero iff the norm comes
    from an inner product."""
    uu = as_vector(u)
    vv = as_vector(v)
    _check_dim(ast, uu, vv)
    return rho_ab(ast, uu, vv, ab) - rho_ab(ast, vv, uu, ab)


def symmetry_search(ast: NormAst, ab: AlphaBeta, cfg: SampleConfig,
                    threshold: float = 1e-3) -> ProbeReport:
    """Hunt for the worst asymmetry of rho_ab over corner and random pairs.

    Reports the largest |rho_ab(u,v) - rho_ab(v,u)| seen; the verdict is
    "witness-found" when it exceeds threshold.
    """
    prog = get_program(ast)
    rng = SplitMix64(cfg.seed)
    dim = ast.dim
    used = 0
    worst = 0.0
    witness: tuple[Vector, Vector] | None = None

    def consider(u: Vector, v: Vector):
        nonlocal worst, witness
        res = abs(symmetry_residual(ast, u, v, ab))
        if res > worst:
            worst = res
            witness = (u, v)

    for u, v in _corner_pairs(dim):
        if used >= cfg.count:
            break
        used += 1
        consider(u, v)
    while used < cfg.count:
        u = _nonzero_vector(rng, prog, dim, cfg.scale)
        v = _nonzero_vector(rng, prog, dim, cfg.scale)
        used += 1
        consider(u, v)
    if worst > threshold:
        return ProbeReport("witness-found", witness[0], witness[1], worst, used)
    return ProbeReport("pass", None, None, worst, used)


def norm_equiv_constant(ast1: NormAst, ast2: NormAst, ab: AlphaBeta,
                        cfg: SampleConfig) -> ExtremeEstimate:
    """Sampled estimate of the constant k bounding
    |rho_ab_1(u,v) - rho_ab_2(u,v)| by k min(norm1(u) norm1(v),
    norm2(u) norm2(v)); finite for any two norms on the same space."""
    if ast1.dim != ast2.dim:
        raise ValueError("both norms must share the ambient dimension")
    prog1 = get_program(ast1)
    prog2 = get_program(ast2)
    rng = SplitMix64(cfg.seed)
    dim = ast1.dim
    best = 0.0
    witness: tuple[Vector, Vector] | None = None
    skipped = 0
    for _ in range(cfg.count):
        u = random_vector(rng, dim, cfg.scale)
        v = random_vector(rng, dim, cfg.scale)
        denom = min(prog1.value(u) * prog1.value(v), prog2.value(u) * prog2.value(v))
        if denom < 1e-12:
            skipped += 1
            continue
        gap = abs(rho_ab(ast1, u, v, ab) - rho_ab(ast2, u, v, ab))
        ratio = gap / denom
        if ratio > best:
            best = ratio
            witness = (u, v)
    wu, wv = witness if witness is not None else (None, None)
    return ExtremeEstimate(best, wu, wv, cfg.count, skipped)
