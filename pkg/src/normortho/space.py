"""Vectors, norm evaluation, axiom auditing, and unit-sphere sampling."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import DimensionMismatchError
from .kernels import get_program
from .normast import NormAst
from .rng import SplitMix64

__all__ = [
    "Vector",
    "SampleConfig",
    "NormAudit",
    "as_vector",
    "eval_norm",
    "norm_on_line",
    "audit_norm",
    "sphere_sample",
    "corner_vectors",
    "random_vector",
]

Vector = tuple[float, ...]

# default absolute tolerance for the sampled axiom audit; composed norms
# accumulate a few ulps per node
AUDIT_TOL = 1e-10


@dataclass(frozen=True)
class SampleConfig:
    """Seeded sampling parameters shared by probes and searches."""

    seed: int = 0
    count: int = 1000
    scale: float = 1.0

    def __post_init__(self):
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not (isinstance(self.count, int) and self.count >= 1):
            raise ValueError(f"count must be a positive integer, got {self.count!r}")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValueError(f"scale must be positive and finite, got {self.scale!r}")


@dataclass(frozen=True)
class NormAudit:
    """Outcome of a sampled norm-axiom audit; zero violations expected."""

    samples: int
    violations: int
    worst_kind: str | None = None
    worst_defect: float = 0.0
    worst_u: Vector | None = None
    worst_v: Vector | None = None
    worst_t: float | None = None


def as_vector(coords) -> Vector:
    """Validate and freeze a coordinate sequence.

    Rejects NaN and infinite entries; anything convertible to float is
    accepted.
    """
    vec = tuple(float(c) for c in coords)
    for c in vec:
        if not math.isfinite(c):
            raise ValueError(f"vector coordinates must be finite, got {c!r}")
    return vec


def _check_dim(ast: NormAst, *vectors: Vector) -> None:
    for vec in vectors:
        if len(vec) != ast.dim:
            raise DimensionMismatchError(
                f"norm consumes {ast.dim} coordinates but vector has {len(vec)}"
            )


def eval_norm(ast: NormAst, u) -> float:
    """The norm of u under the given expression."""
    vec = as_vector(u)
    _check_dim(ast, vec)
    return get_program(ast).value(vec)


def norm_on_line(ast: NormAst, u, v):
    """Callable phi with phi(t) = norm(u + t v), cheap to call repeatedly."""
    uu = as_vector(u)
    vv = as_vector(v)
    _check_dim(ast, uu, vv)
    return get_program(ast).line_evaluator(uu, vv)


def random_vector(rng: SplitMix64, dim: int, scale: float) -> Vector:
    """Coordinates drawn uniformly from [-scale, scale]."""
    return tuple(rng.uniform(-scale, scale) for _ in range(dim))


def audit_norm(ast: NormAst, cfg: SampleConfig, tol: float = AUDIT_TOL) -> NormAudit:
    """Sampled check of homogeneity, the triangle inequality, and positivity.

    Draws cfg.count triples (u, v, t) and records the worst defect seen.
    The positivity check is skipped for the zero vector, which the axiom
    does not constrain.
    """
    prog = get_program(ast)
    rng = SplitMix64(cfg.seed)
    dim = ast.dim
    violations = 0
    worst = NormAudit(samples=cfg.count, violations=0)

    def record(kind, defect, u, v, t):
        nonlocal violations, worst
        violations += 1
        if defect > worst.worst_defect:
            worst = NormAudit(cfg.count, violations, kind, defect, u, v, t)

    for _ in range(cfg.count):
        u = random_vector(rng, dim, cfg.scale)
        v = random_vector(rng, dim, cfg.scale)
        t = rng.uniform(-10.0, 10.0)
        nu = prog.value(u)
        nv = prog.value(v)

        tu = tuple(t * c for c in u)
        defect = abs(prog.value(tu) - abs(t) * nu)
        if defect > tol * nu:
            record("homogeneity", defect, u, None, t)

        uv = tuple(a + b for a, b in zip(u, v))
        defect = prog.value(uv) - (nu + nv)
        if defect > tol:
            record("triangle", defect, u, v, None)

        if any(c != 0.0 for c in u) and nu <= 0.0:
            record("positivity", -nu, u, None, None)

    return NormAudit(cfg.count, violations, worst.worst_kind, worst.worst_defect,
                     worst.worst_u, worst.worst_v, worst.worst_t)


def sphere_sample(ast: NormAst, cfg: SampleConfig) -> list[Vector]:
    """cfg.count points with norm 1 up to a few ulps, deterministic per seed.

    Coordinates are drawn uniformly in [-scale, scale] and the vector is
    radially normalized; zero draws are rejected and redrawn.
    """
    prog = get_program(ast)
    rng = SplitMix64(cfg.seed)
    dim = ast.dim
    out: list[Vector] = []
    while len(out) < cfg.count:
        x = random_vector(rng, dim, cfg.scale)
        r = prog.value(x)
        if r == 0.0:
            continue
        out.append(tuple(c / r for c in x))
    return out


def corner_vectors(dim: int) -> tuple[Vector, ...]:
    """All sign patterns over {-1, 0, 1}^dim except the origin.

    These hit the measure-zero sets where polyhedral norms are
    non-smooth: zero coordinates (l1 kinks) and tied coordinates
    (linf ridges).  Random floating-point draws never land there.
    """
    zero = (0.0,) * dim
    return tuple(
        v for v in itertools.product((-1.0, 0.0, 1.0), repeat=dim) if v != zero
    )
