"""Counterexample mining and linear-preserver checks.

A linear map preserves rho_ab-orthogonality exactly when it is a scalar
multiple of an isometry; `preserver_check` measures the three equivalent
conditions of that characterization numerically.  `mine_incomparability`
hunts for pairs witnessing that one orthogonality relation does not imply
another, tracing relation loci on planar unit circles and re-verifying
every candidate before reporting it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .derivs import AlphaBeta, rho_ab
from .errors import DimensionMismatchError
from .kernels import get_program
from .normast import NormAst
from .ortho import Relation, ab_orthogonalizer, is_orthogonal, relation_residual
from .rng import SplitMix64
from .space import (
    SampleConfig,
    Vector,
    as_vector,
    corner_vectors,
    random_vector,
    sphere_sample,
)

__all__ = [
    "LinearMap",
    "OperatorNormEstimate",
    "ConditionReport",
    "PreserverReport",
    "IncomparabilityReport",
    "apply_map",
    "operator_norm",
    "preserver_check",
    "mine_incomparability",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LinearMap:
    """A real matrix T together with the norms of its domain and codomain.

    An n x m matrix maps m-coordinate vectors (measured by domain_norm)
    to n-coordinate vectors (measured by codomain_norm).
    """

    matrix: tuple[tuple[float, ...], ...]
    domain_norm: NormAst
    codomain_norm: NormAst

    def __post_init__(self):
        rows = tuple(tuple(float(e) for e in row) for row in self.matrix)
        if len(rows) != self.codomain_norm.dim:
            raise DimensionMismatchError(
                f"matrix has {len(rows)} rows but the codomain norm consumes "
                f"{self.codomain_norm.dim} coordinates"
            )
        for row in rows:
            if len(row) != self.domain_norm.dim:
                raise DimensionMismatchError(
                    f"matrix row has {len(row)} entries but the domain norm consumes "
                    f"{self.domain_norm.dim} coordinates"
                )
            for e in row:
                if not math.isfinite(e):
                    raise ValueError(f"matrix entries must be finite, got {e!r}")
        object.__setattr__(self, "matrix", rows)

    @property
    def is_zero(self) -> bool:
        return all(e == 0.0 for row in self.matrix for e in row)


@dataclass(frozen=True)
class OperatorNormEstimate:
    """A certified lower bound for the induced operator norm.

    grade "fine" marks the planar grid-plus-refinement path; "coarse"
    marks multi-start hill climbing in higher dimensions.
    """

    value: float
    direction: Vector
    grade: str  # "fine" | "coarse"


@dataclass(frozen=True)
class ConditionReport:
    name: str
    passed: bool
    worst: float
    witness_u: Vector | None
    witness_v: Vector | None
    tol: float


@dataclass(frozen=True)
class PreserverReport:
    operator_norm: OperatorNormEstimate
    orthogonality: ConditionReport
    norm_multiple: ConditionReport
    rho_scaling: ConditionReport

    @property
    def all_pass(self) -> bool:
        return (self.orthogonality.passed and self.norm_multiple.passed
                and self.rho_scaling.passed)


@dataclass(frozen=True)
class IncomparabilityReport:
    relation_a: Relation
    relation_b: Relation
    witness_ab: tuple[Vector, Vector] | None
    witness_ba: tuple[Vector, Vector] | None
    seed: int
    budget: int
    budget_used: int
    discarded: int


def apply_map(lin: LinearMap, u) -> Vector:
    x = as_vector(u)
    if len(x) != lin.domain_norm.dim:
        raise DimensionMismatchError(
            f"map consumes {lin.domain_norm.dim} coordinates but vector has {len(x)}"
        )
    return tuple(math.fsum(r * c for r, c in zip(row, x)) for row in lin.matrix)


def _golden_max(f, lo: float, hi: float, iters: int) -> tuple[float, float]:
    """(argmax, max) of f over [lo, hi] for unimodal f; tracks the best
    evaluated point so the result is a valid lower bound regardless."""
    a, b = lo, hi
    h = b - a
    c = b - _INVPHI * h
    d = a + _INVPHI * h
    fc = f(c)
    fd = f(d)
    best_x, best_f = (c, fc) if fc >= fd else (d, fd)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            h = b - a
            c = b - _INVPHI * h
            fc = f(c)
            if fc > best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = f(d)
            if fd > best_f:
                best_x, best_f = d, fd
    return best_x, best_f


def operator_norm(lin: LinearMap, cfg: SampleConfig) -> OperatorNormEstimate:
    """Lower estimate of sup norm(T x) over the domain unit sphere.

    Planar domains get a 1024-point sweep of the Euclidean angle followed
    by golden-section refinement around the best cell (grade "fine");
    higher dimensions fall back to cfg.count starts of hill climbing with
    a shrinking step (grade "coarse").
    """
    if lin.is_zero:
        raise ValueError("operator norm of the zero map is trivially 0; refusing")
    dom = get_program(lin.domain_norm)
    cod = get_program(lin.codomain_norm)
    dim = lin.domain_norm.dim

    def unit(x: Vector) -> Vector:
        r = dom.value(x)
        return tuple(c / r for c in x)

    def gain(x: Vector) -> float:
        return cod.value(apply_map(lin, x))

    if dim == 2:
        grid = 1024
        step = 2.0 * math.pi / grid

        def f(theta: float) -> float:
            return gain(unit((math.cos(theta), math.sin(theta))))

        best_j = 0
        best = -1.0
        for j in range(grid):
            v = f(j * step)
            if v > best:
                best, best_j = v, j
        theta0 = best_j * step
        theta, refined = _golden_max(f, theta0 - step, theta0 + step, 80)
        if refined >= best:
            return OperatorNormEstimate(
                refined, unit((math.cos(theta), math.sin(theta))), "fine"
            )
        return OperatorNormEstimate(
            best, unit((math.cos(theta0), math.sin(theta0))), "fine"
        )

    rng = SplitMix64(cfg.seed)
    best_x: Vector | None = None
    best = -1.0
    for _ in range(cfg.count):
        x = random_vector(rng, dim, 1.0)
        if dom.value(x) == 0.0:
            continue
        x = unit(x)
        fx = gain(x)
        delta = 0.5
        proposals = 2000  # caps a start whose gains keep trickling in
        while delta > 1e-7 and proposals > 0:
            moved = False
            for _ in range(8):
                proposals -= 1
                cand = tuple(c + rng.uniform(-delta, delta) for c in x)
                if dom.value(cand) == 0.0:
                    continue
                cand = unit(cand)
                fc = gain(cand)
                if fc > fx:
                    x, fx = cand, fc
                    moved = True
            if not moved:
                delta *= 0.5
        if fx > best:
            best, best_x = fx, x
    return OperatorNormEstimate(best, best_x, "coarse")


def preserver_check(lin: LinearMap, ab: AlphaBeta, cfg: SampleConfig) -> PreserverReport:
    """Measure the three equivalent conditions for T to preserve
    rho_ab-orthogonality.

    (1) images of constructed rho_ab-orthogonal pairs stay orthogonal:
        max |rho_ab(Tu, Tw)| / (norm(Tu) norm(Tw));
    (2) T is a multiple of an isometry: relative spread of norm(Tx) over
        unit-sphere samples against the operator-norm estimate;
    (3) rho_ab scales by the square of the operator norm:
        max |rho_ab(Tu, Tv) - norm(T)^2 rho_ab(u, v)| relative to the
        Prop-style bound (alpha+beta) norm(T)^2 norm(u) norm(v).

    Conditions pass at 1e-6; the tolerance widens to 1e-5 for coarse
    (hill-climbed) operator-norm estimates.  Singular maps surface in
    condition (2) through a near-kernel sphere direction.
    """
    opn = operator_norm(lin, cfg)
    tol = 1e-6 if opn.grade == "fine" else 1e-5
    dom_ast = lin.domain_norm
    cod_ast = lin.codomain_norm
    dom = get_program(dom_ast)
    cod = get_program(cod_ast)
    dim = dom_ast.dim
    root = SplitMix64(cfg.seed)

    # condition 1: transported orthogonal pairs
    rng = root.substream(1)
    worst1 = 0.0
    wit1: tuple[Vector, Vector] | None = None
    built = 0
    while built < cfg.count:
        u = random_vector(rng, dim, cfg.scale)
        v = random_vector(rng, dim, cfg.scale)
        if dom.value(u) == 0.0:
            continue
        _, w = ab_orthogonalizer(dom_ast, u, v, ab)
        built += 1
        tu = apply_map(lin, u)
        tw = apply_map(lin, w)
        denom = cod.value(tu) * cod.value(tw)
        if denom < 1e-12:
            continue
        ratio = abs(rho_ab(cod_ast, tu, tw, ab)) / denom
        if ratio > worst1:
            worst1, wit1 = ratio, (u, w)

    # condition 2: norm multiplicativity over the unit sphere
    spread_cfg = SampleConfig(seed=root.substream(2).next_u64(), count=cfg.count,
                              scale=cfg.scale)
    worst2 = 0.0
    wit2: Vector | None = None
    for x in sphere_sample(dom_ast, spread_cfg):
        dev = abs(cod.value(apply_map(lin, x)) - opn.value) / opn.value
        if dev > worst2:
            worst2, wit2 = dev, x

    # condition 3: quadratic scaling of the functional
    rng = root.substream(3)
    tsq = opn.value * opn.value
    worst3 = 0.0
    wit3: tuple[Vector, Vector] | None = None
    for _ in range(cfg.count):
        u = random_vector(rng, dim, cfg.scale)
        v = random_vector(rng, dim, cfg.scale)
        nu = dom.value(u)
        nv = dom.value(v)
        if nu * nv < 1e-12:
            continue
        gap = abs(rho_ab(cod_ast, apply_map(lin, u), apply_map(lin, v), ab)
                  - tsq * rho_ab(dom_ast, u, v, ab))
        ratio = gap / (ab.total * tsq * nu * nv)
        if ratio > worst3:
            worst3, wit3 = ratio, (u, v)

    u1, v1 = wit1 if wit1 is not None else (None, None)
    u3, v3 = wit3 if wit3 is not None else (None, None)
    return PreserverReport(
        opn,
        ConditionReport("orthogonality", worst1 <= tol, worst1, u1, v1, tol),
        ConditionReport("norm_multiple", worst2 <= tol, worst2, wit2, None, tol),
        ConditionReport("rho_scaling", worst3 <= tol, worst3, u3, v3, tol),
    )


def _circle_point(prog, theta: float) -> Vector:
    d = (math.cos(theta), math.sin(theta))
    r = prog.value(d)
    return (d[0] / r, d[1] / r)


def _search_direction(ast: NormAst, rel_hold: Relation, rel_test: Relation,
                      rng: SplitMix64, budget: int, tol: float,
                      fail_margin: float):
    """Look for a pair where rel_hold holds and rel_test fails.

    Returns (witness or None, candidates_used, discarded).  Candidates
    come from bisected zero crossings of rel_hold's residual along unit
    circles around random base vectors; each candidate costs one unit of
    budget and is re-verified with is_orthogonal before being reported.
    """
    prog = get_program(ast)
    used = 0
    discarded = 0
    scan = 64
    step = 2.0 * math.pi / scan

    def bases():
        # Corners first: relations only split at non-smooth boundary
        # points, which random directions miss with probability one.
        yield from corner_vectors(2)
        while True:
            yield random_vector(rng, 2, 1.0)

    for base in bases():
        if used >= budget:
            break
        if prog.value(base) == 0.0:
            continue
        u = tuple(c / prog.value(base) for c in base)

        thetas = [j * step for j in range(scan)]
        residuals = [relation_residual(rel_hold, ast, u, _circle_point(prog, th))
                     for th in thetas]
        found_candidate = False
        for j in range(scan):
            if used >= budget:
                break
            r0 = residuals[j]
            r1 = residuals[(j + 1) % scan]
            if r0 != 0.0 and r1 != 0.0 and (r0 > 0.0) == (r1 > 0.0):
                continue
            lo, f_lo = thetas[j], r0
            hi = thetas[j] + step
            for _ in range(60):
                if hi - lo <= 1e-12:
                    break
                mid = 0.5 * (lo + hi)
                fm = relation_residual(rel_hold, ast, u, _circle_point(prog, mid))
                if fm == 0.0 or (fm > 0.0) == (f_lo > 0.0):
                    lo, f_lo = mid, fm
                else:
                    hi = mid
            v = _circle_point(prog, 0.5 * (lo + hi))
            found_candidate = True
            used += 1
            if not is_orthogonal(rel_hold, ast, u, v, tol).holds:
                discarded += 1
                continue
            verdict = is_orthogonal(rel_test, ast, u, v, tol)
            if verdict.holds:
                continue
            clear = (verdict.residual > fail_margin if rel_test.tag == "birkhoff"
                     else abs(verdict.residual) > fail_margin)
            if clear:
                return (u, v), used, discarded
            discarded += 1  # fails the tolerance but not by a clear margin
        if not found_candidate:
            used += 1  # a scan with no crossings still consumes budget
    return None, used, discarded


def mine_incomparability(ast: NormAst, rel_a: Relation, rel_b: Relation,
                         cfg: SampleConfig, tol: float = 1e-7) -> IncomparabilityReport:
    """Search for witnesses that rel_a and rel_b are incomparable.

    witness_ab is a pair where rel_a holds and rel_b clearly fails
    (residual beyond 100x the tolerance, so floating-point stragglers
    are discarded rather than reported); witness_ba is the reverse.
    The budget counts candidate pairs examined across both directions.
    """
    if ast.dim != 2:
        raise DimensionMismatchError("mining traces planar loci; dimension must be 2")
    fail_margin = 100.0 * tol
    root = SplitMix64(cfg.seed)
    half = (cfg.count + 1) // 2
    w_ab, used_ab, disc_ab = _search_direction(
        ast, rel_a, rel_b, root.substream(1), half, tol, fail_margin)
    w_ba, used_ba, disc_ba = _search_direction(
        ast, rel_b, rel_a, root.substream(2), cfg.count - used_ab, tol, fail_margin)
    return IncomparabilityReport(
        rel_a, rel_b, w_ab, w_ba, cfg.seed, cfg.count,
        used_ab + used_ba, disc_ab + disc_ba,
    )
