"""Command-line interface.

Every subcommand prints a single deterministic payload (JSON by default,
optionally a key/value table or CSV) built only from the flags and the
seed, so repeated runs are byte-identical.  Floats are rendered with 17
significant digits, enough to round-trip doubles exactly.

Exit codes: 0 on success, 2 for usage problems including norm-expression
parse errors, 1 for domain errors (zero vectors where forbidden,
dimension mismatches, non-smooth evaluation points).
"""

from __future__ import annotations

import argparse
import io
import csv
import json
import math
import sys

from .derivs import AlphaBeta, Lambda, rho_ab, rho_lambda, rho_pair, rho_pm_numeric
from .errors import (
    DimensionMismatchError,
    EngineError,
    NonSmoothPointError,
    ParseError,
    ZeroVectorError,
)
from .explorer import LinearMap, mine_incomparability, preserver_check
from .geometry import (
    angle_ab,
    angular_constant,
    norm_equiv_constant,
    quartic_identity_residual,
    smoothness_probe,
    strict_convexity_probe,
    symmetry_residual,
    symmetry_search,
)
from .normast import parse_norm, print_norm
from .ortho import (
    RELATION_TAGS,
    Relation,
    ab_orthogonalizer,
    birkhoff_oracle,
    birkhoff_t_interval,
    is_orthogonal,
    ortho_locus,
)
from .space import SampleConfig, audit_norm

__all__ = ["run", "main"]


class _Usage(Exception):
    """Flag combination or flag value problem; maps to exit code 2."""


# ---------------------------------------------------------------------------
# argument parsing

def _vec_arg(text: str):
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}"
        ) from None


def _matrix_arg(text: str):
    try:
        rows = tuple(tuple(float(p) for p in row.split(","))
                     for row in text.split(";"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected rows 'a,b;c,d' of numbers, got {text!r}"
        ) from None
    if len({len(row) for row in rows}) != 1:
        raise argparse.ArgumentTypeError(
            f"matrix rows must all have the same length, got {text!r}"
        )
    return rows


_COMMANDS = (
    ("rho", "one-sided derivatives rho_minus/rho_plus and their blends"),
    ("ortho", "decide an orthogonality relation for a pair of vectors"),
    ("solve", "closed-form rho_ab orthogonalization of v against u"),
    ("interval", "Birkhoff orthogonality interval of t for u and t*u+v"),
    ("locus", "trace a relation's zero locus around the planar unit circle"),
    ("angle", "rho_ab angle between two vectors"),
    ("probe", "smoothness, strict-convexity, or symmetry probe"),
    ("identity", "quartic inner-product identity or symmetry residual"),
    ("constant", "angular or norm-equivalence constant between two norms"),
    ("preserver", "check a linear map for rho_ab-orthogonality preservation"),
    ("mine", "mine incomparability witnesses between two relations"),
    ("audit", "sample-check norm axioms for a combinator expression"),
)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("problem")
    g.add_argument("--norm", default="l2", help="norm expression (default: l2)")
    g.add_argument("--norm2", default=None, help="second norm expression")
    g.add_argument("--dim", type=int, default=None,
                   help="dimension (default: inferred from --u, else 2)")
    g.add_argument("--u", type=_vec_arg, default=None, help="vector, e.g. 1,2")
    g.add_argument("--v", type=_vec_arg, default=None, help="vector, e.g. 3,-1")
    g.add_argument("--w", type=_vec_arg, default=None, help="vector")
    g.add_argument("--alpha", type=float, default=None, help="rho_ab weight on rho_minus")
    g.add_argument("--beta", type=float, default=None, help="rho_ab weight on rho_plus")
    g.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="rho_lambda mixing weight in [0, 1]")
    g.add_argument("--relation", default=None,
                   choices=RELATION_TAGS + ("birkhoff_oracle",),
                   help="orthogonality relation tag")
    g.add_argument("--relation2", default=None, choices=RELATION_TAGS,
                   help="second relation tag (mine)")
    g.add_argument("--matrix", type=_matrix_arg, default=None,
                   help="linear map rows, e.g. '0,-1;1,0'")
    g.add_argument("--kind", default=None,
                   help="variant for probe/identity/constant commands")
    g.add_argument("--method", default="exact", choices=("exact", "numeric"),
                   help="derivative evaluation method (rho)")
    n = common.add_argument_group("numerics")
    n.add_argument("--tol", type=float, default=1e-9, help="decision tolerance")
    n.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    n.add_argument("--samples", type=int, default=1000,
                   help="sample count / search budget")
    n.add_argument("--scale", type=float, default=1.0, help="sampling box half-width")
    n.add_argument("--resolution", type=int, default=720,
                   help="locus sweep resolution")
    o = common.add_argument_group("output")
    o.add_argument("--out", default=None, help="write output to this file")
    o.add_argument("--format", default="json", choices=("json", "table", "csv"))
    o.add_argument("--threads", type=int, default=1,
                   help="reserved; evaluation is sequential regardless")

    parser = argparse.ArgumentParser(
        prog="normortho",
        description="One-sided norm derivatives and orthogonality relations "
                    "in finite-dimensional real normed spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, help_text in _COMMANDS:
        sub.add_parser(name, parents=[common], help=help_text,
                       description=help_text)
    return parser


# ---------------------------------------------------------------------------
# deterministic rendering

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = f"{x:.17g}"
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def _jdump(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_jdump(x) for x in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_jdump(v)}"
                               for k, v in obj.items()) + "}"
    raise TypeError(f"cannot render {type(obj).__name__}")


def _scalar_text(v) -> str:
    if v is None:
        return ""
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, (list, tuple)):
        return ",".join(_scalar_text(x) for x in v)
    return str(v)


def _flatten(payload: dict, prefix: str = "") -> list[tuple[str, str]]:
    pairs: list[tuple[str, str]] = []
    for key, value in payload.items():
        path = prefix + key
        if isinstance(value, dict):
            pairs.extend(_flatten(value, path + "."))
        elif (isinstance(value, (list, tuple)) and value
              and isinstance(value[0], dict)):
            for i, item in enumerate(value):
                pairs.extend(_flatten(item, f"{path}[{i}]."))
        else:
            pairs.append((path, _scalar_text(value)))
    return pairs


def _render_payload(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return _jdump(payload) + "\n"
    pairs = _flatten(payload)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([k for k, _ in pairs])
        writer.writerow([v for _, v in pairs])
        return buf.getvalue()
    width = max(len(k) for k, _ in pairs)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in pairs)


def _render_rows(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(_jdump(row) + "\n" for row in rows)
    keys = list(rows[0].keys())
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(keys)
        for row in rows:
            writer.writerow([_scalar_text(row[k]) for k in keys])
        return buf.getvalue()
    lines = ["  ".join(keys)]
    lines.extend("  ".join(_scalar_text(row[k]) for k in keys) for row in rows)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# shared flag plumbing

def _need(args, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            flag = "--lambda" if name == "lam" else f"--{name}"
            raise _Usage(f"{flag} is required for '{args.command}'")


def _infer_dim(args) -> int:
    if args.dim is not None:
        if args.dim < 2:
            raise _Usage("--dim must be at least 2")
        return args.dim
    for vec in (args.u, args.v, args.w):
        if vec is not None:
            return len(vec)
    return 2


def _ast(args, dim: int | None = None):
    return parse_norm(args.norm, dim if dim is not None else _infer_dim(args))


def _ab(args) -> AlphaBeta:
    _need(args, "alpha", "beta")
    try:
        return AlphaBeta(args.alpha, args.beta)
    except ValueError as exc:
        raise _Usage(str(exc)) from None


def _lam(args) -> Lambda:
    _need(args, "lam")
    try:
        return Lambda(args.lam)
    except ValueError as exc:
        raise _Usage(str(exc)) from None


def _relation(tag: str, args) -> Relation:
    if tag == "birkhoff_oracle":
        raise _Usage("birkhoff_oracle is only available with the ortho command")
    if tag == "rho_ab":
        return Relation(tag, ab=_ab(args))
    if tag == "rho_lambda":
        return Relation(tag, lam=_lam(args))
    return Relation(tag)


def _relation_fields(rel: Relation) -> dict:
    fields: dict = {}
    if rel.ab is not None:
        fields["alpha"] = rel.ab.alpha
        fields["beta"] = rel.ab.beta
    if rel.lam is not None:
        fields["lambda"] = rel.lam.lam
    return fields


def _tol(args) -> float:
    if not (math.isfinite(args.tol) and args.tol > 0.0):
        raise _Usage("--tol must be positive and finite")
    return args.tol


def _cfg(args) -> SampleConfig:
    if args.samples < 1:
        raise _Usage("--samples must be positive")
    if not (math.isfinite(args.scale) and args.scale > 0.0):
        raise _Usage("--scale must be positive and finite")
    if not 0 <= args.seed < 2 ** 64:
        raise _Usage("--seed must fit in 64 bits")
    return SampleConfig(seed=args.seed, count=args.samples, scale=args.scale)


def _kind(args, choices: tuple[str, ...]) -> str:
    kind = args.kind if args.kind is not None else choices[0]
    if kind not in choices:
        raise _Usage(f"--kind must be one of {', '.join(choices)} "
                     f"for '{args.command}'")
    return kind


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_rho(args) -> dict:
    _need(args, "u", "v")
    ast = _ast(args)
    payload: dict = {"norm": print_norm(ast), "u": args.u, "v": args.v,
                     "method": args.method}
    if args.method == "numeric":
        tol = _tol(args)
        lo = rho_pm_numeric(ast, args.u, args.v, "minus", tol)
        hi = rho_pm_numeric(ast, args.u, args.v, "plus", tol)
        payload["rho_minus"] = lo.value
        payload["rho_minus_width"] = lo.enclosure_width
        payload["rho_plus"] = hi.value
        payload["rho_plus_width"] = hi.enclosure_width
        payload["rho"] = 0.5 * (lo.value + hi.value)
        return payload
    rm, rp = rho_pair(ast, args.u, args.v)
    payload["rho_minus"] = rm
    payload["rho_plus"] = rp
    payload["rho"] = 0.5 * (rm + rp)
    if args.alpha is not None or args.beta is not None:
        ab = _ab(args)
        payload["alpha"] = ab.alpha
        payload["beta"] = ab.beta
        payload["rho_ab"] = rho_ab(ast, args.u, args.v, ab)
    if args.lam is not None:
        lam = _lam(args)
        payload["lambda"] = lam.lam
        payload["rho_lambda"] = rho_lambda(ast, args.u, args.v, lam)
    return payload


def _cmd_ortho(args) -> dict:
    _need(args, "u", "v", "relation")
    ast = _ast(args)
    tol = _tol(args)
    if args.relation == "birkhoff_oracle":
        verdict = birkhoff_oracle(ast, args.u, args.v, tol=tol)
        rel_fields: dict = {}
    else:
        rel = _relation(args.relation, args)
        verdict = is_orthogonal(rel, ast, args.u, args.v, tol)
        rel_fields = _relation_fields(rel)
    return {"norm": print_norm(ast), "relation": args.relation,
            **rel_fields, "u": args.u, "v": args.v,
            "holds": verdict.holds, "residual": verdict.residual,
            "tol": verdict.tol}


def _cmd_solve(args) -> dict:
    _need(args, "u", "v")
    ast = _ast(args)
    ab = _ab(args)
    tol = _tol(args)
    s, w = ab_orthogonalizer(ast, args.u, args.v, ab)
    check = is_orthogonal(Relation("birkhoff"), ast, args.u, w, tol)
    return {"norm": print_norm(ast), "u": args.u, "v": args.v,
            "alpha": ab.alpha, "beta": ab.beta, "s": s, "w": w,
            "rho_ab_residual": rho_ab(ast, args.u, w, ab),
            "birkhoff_holds": check.holds,
            "birkhoff_residual": check.residual, "tol": tol}


def _cmd_interval(args) -> dict:
    _need(args, "u", "v")
    ast = _ast(args)
    lo, hi = birkhoff_t_interval(ast, args.u, args.v)
    return {"norm": print_norm(ast), "u": args.u, "v": args.v,
            "t_lo": lo, "t_hi": hi, "width": hi - lo}


def _cmd_locus(args) -> list[dict]:
    _need(args, "u", "relation")
    if args.resolution < 8:
        raise _Usage("--resolution must be at least 8")
    ast = _ast(args)
    rel = _relation(args.relation, args)
    points = ortho_locus(ast, args.u, rel, resolution=args.resolution)
    return [{"theta": p.theta, "x": p.x, "y": p.y, "residual": p.residual,
             "is_zero_crossing": p.is_zero_crossing} for p in points]


def _cmd_angle(args) -> dict:
    _need(args, "u", "v")
    ast = _ast(args)
    ab = _ab(args)
    res = angle_ab(ast, args.u, args.v, ab)
    return {"norm": print_norm(ast), "u": args.u, "v": args.v,
            "alpha": ab.alpha, "beta": ab.beta, "theta": res.theta,
            "degrees": math.degrees(res.theta),
            "cosine_argument": res.cosine_argument}


def _cmd_probe(args) -> dict:
    kind = _kind(args, ("smoothness", "convexity", "symmetry"))
    ast = _ast(args)
    cfg = _cfg(args)
    if kind == "smoothness":
        report = smoothness_probe(ast, cfg)
    elif kind == "convexity":
        report = strict_convexity_probe(ast, cfg)
    else:
        report = symmetry_search(ast, _ab(args), cfg)
    return {"norm": print_norm(ast), "kind": kind, "verdict": report.verdict,
            "witness_u": report.witness_u, "witness_v": report.witness_v,
            "diagnostic": report.diagnostic,
            "samples_used": report.samples_used,
            "seed": cfg.seed, "budget": cfg.count}


def _cmd_identity(args) -> dict:
    kind = _kind(args, ("quartic", "symmetry"))
    _need(args, "u", "v")
    ast = _ast(args)
    ab = _ab(args)
    if kind == "quartic":
        residual = quartic_identity_residual(ast, args.u, args.v, ab)
    else:
        residual = symmetry_residual(ast, args.u, args.v, ab)
    return {"norm": print_norm(ast), "kind": kind, "u": args.u, "v": args.v,
            "alpha": ab.alpha, "beta": ab.beta, "residual": residual}


def _cmd_constant(args) -> dict:
    kind = _kind(args, ("angular", "equivalence"))
    _need(args, "norm2")
    dim = _infer_dim(args)
    ast1 = parse_norm(args.norm, dim)
    ast2 = parse_norm(args.norm2, dim)
    ab = _ab(args)
    cfg = _cfg(args)
    if kind == "angular":
        est = angular_constant(ast1, ast2, ab, cfg)
    else:
        est = norm_equiv_constant(ast1, ast2, ab, cfg)
    return {"norm": print_norm(ast1), "norm2": print_norm(ast2), "kind": kind,
            "alpha": ab.alpha, "beta": ab.beta, "value": est.value,
            "witness_u": est.witness_u, "witness_v": est.witness_v,
            "samples_used": est.samples_used, "skipped": est.skipped,
            "unbounded": est.unbounded}


def _cmd_preserver(args) -> dict:
    _need(args, "matrix")
    rows = len(args.matrix)
    cols = len(args.matrix[0])
    domain = parse_norm(args.norm, cols)
    codomain = parse_norm(args.norm2 if args.norm2 is not None else args.norm,
                          rows)
    lin = LinearMap(args.matrix, domain, codomain)
    report = preserver_check(lin, _ab(args), _cfg(args))
    conditions = [{"name": c.name, "passed": c.passed, "worst": c.worst,
                   "witness_u": c.witness_u, "witness_v": c.witness_v,
                   "tol": c.tol}
                  for c in (report.orthogonality, report.norm_multiple,
                            report.rho_scaling)]
    return {"matrix": args.matrix, "norm": print_norm(domain),
            "norm2": print_norm(codomain),
            "alpha": args.alpha, "beta": args.beta,
            "operator_norm": {"value": report.operator_norm.value,
                              "direction": report.operator_norm.direction,
                              "grade": report.operator_norm.grade},
            "conditions": conditions, "all_pass": report.all_pass}


def _cmd_mine(args) -> dict:
    _need(args, "relation", "relation2")
    ast = _ast(args)
    rel_a = _relation(args.relation, args)
    rel_b = _relation(args.relation2, args)
    report = mine_incomparability(ast, rel_a, rel_b, _cfg(args), tol=_tol(args))

    def pair(w):
        return None if w is None else {"u": w[0], "v": w[1]}

    replay = (f"normortho mine --norm '{print_norm(ast)}' "
              f"--relation {rel_a.tag} --relation2 {rel_b.tag}")
    if args.alpha is not None and args.beta is not None:
        replay += f" --alpha {args.alpha!r} --beta {args.beta!r}"
    if args.lam is not None:
        replay += f" --lambda {args.lam!r}"
    replay += f" --seed {args.seed} --samples {args.samples} --tol {args.tol!r}"
    return {"norm": print_norm(ast), "relation_a": rel_a.tag,
            "relation_b": rel_b.tag,
            "witness_ab": pair(report.witness_ab),
            "witness_ba": pair(report.witness_ba),
            "seed": report.seed, "budget": report.budget,
            "budget_used": report.budget_used, "discarded": report.discarded,
            "replay": replay}


def _cmd_audit(args) -> dict:
    ast = _ast(args)
    report = audit_norm(ast, _cfg(args))
    return {"norm": print_norm(ast), "samples": report.samples,
            "violations": report.violations, "worst_kind": report.worst_kind,
            "worst_defect": report.worst_defect, "worst_u": report.worst_u,
            "worst_v": report.worst_v, "worst_t": report.worst_t}


_HANDLERS = {
    "rho": _cmd_rho,
    "ortho": _cmd_ortho,
    "solve": _cmd_solve,
    "interval": _cmd_interval,
    "locus": _cmd_locus,
    "angle": _cmd_angle,
    "probe": _cmd_probe,
    "identity": _cmd_identity,
    "constant": _cmd_constant,
    "preserver": _cmd_preserver,
    "mine": _cmd_mine,
    "audit": _cmd_audit,
}


# ---------------------------------------------------------------------------
# entry points

def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    try:
        if args.threads < 1:
            raise _Usage("--threads must be positive")
        result = _HANDLERS[args.command](args)
        summary = None
        if isinstance(result, list):
            text = _render_rows(result, args.format)
            if args.out is not None:
                # Large row streams go to the file; stdout keeps a summary.
                summary = _render_payload(
                    {"norm": args.norm, "relation": args.relation,
                     "resolution": args.resolution, "points": len(result),
                     "zero_crossings": sum(
                         1 for r in result if r["is_zero_crossing"]),
                     "out": args.out},
                    args.format)
        else:
            text = _render_payload(result, args.format)
    except ParseError as exc:
        print(f"normortho: {exc}", file=sys.stderr)
        return 2
    except _Usage as exc:
        print(f"normortho: {exc}", file=sys.stderr)
        return 2
    except (DimensionMismatchError, ZeroVectorError, NonSmoothPointError,
            EngineError, ValueError) as exc:
        print(f"normortho: {exc}", file=sys.stderr)
        return 1
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if summary is not None:
            sys.stdout.write(summary)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
