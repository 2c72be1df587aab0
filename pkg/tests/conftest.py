"""Shared fixtures and helpers for the normortho test suite."""

import math
import re

import hypothesis

from normortho import L1, LInf, Lp, Max, Scale, Sum, WLp

hypothesis.settings.register_profile(
    "suite", deadline=None, derandomize=True, max_examples=60
)
hypothesis.settings.load_profile("suite")

# Norm expressions exercised by every sampled invariant test: the atomic
# norms, a smooth and a non-smooth lp exponent, a weighted lp, and one of
# each combinator.
FAMILIES = (
    "l1",
    "l2",
    "linf",
    "lp(3)",
    "lp(1.5)",
    "wlp(2; 1, 4)",
    "max(l1, l2)",
    "sum(l1, linf)",
    "scale(0.7, l2)",
)

# Families whose unit sphere has no corner, so numeric enclosures tighten.
SMOOTH_FAMILIES = ("l2", "lp(3)", "lp(1.5)", "wlp(2; 1, 4)", "scale(0.7, l2)")


def gen_ast(rng, dim, depth):
    """Random norm AST with nesting bounded by depth.

    Driven by a SplitMix64 stream so the same seed reproduces the same
    expression tree on every platform.
    """
    if depth <= 0 or rng.random() < 0.55:
        pick = int(rng.random() * 5)
        if pick == 0:
            return L1(dim)
        if pick == 1:
            return Lp(dim, 2.0)
        if pick == 2:
            return LInf(dim)
        if pick == 3:
            return Lp(dim, 1.25 + 3.0 * rng.random())
        p = math.inf if rng.random() < 0.2 else 1.0 + 2.5 * rng.random()
        return WLp(p, tuple(0.25 + 2.0 * rng.random() for _ in range(dim)))
    pick = int(rng.random() * 3)
    if pick == 0:
        return Max(gen_ast(rng, dim, depth - 1), gen_ast(rng, dim, depth - 1))
    if pick == 1:
        return Sum(gen_ast(rng, dim, depth - 1), gen_ast(rng, dim, depth - 1))
    return Scale(0.25 + 2.0 * rng.random(), gen_ast(rng, dim, depth - 1))


_TOKEN_RE = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|[a-z]+|[(),;]|\s+")


def mutate(text, rng):
    """Damage a well-formed norm expression so it can no longer parse.

    Three kinds, all provably invalid for this grammar: insert a character
    outside the token alphabet, flip one parenthesis (or append a stray
    closer when there are none), or delete one whole token.  Single-token
    deletion always breaks the fixed arity of some production; deleting a
    lone character could leave a valid string (dropping the 3 in lp(23)),
    so the deletion works on tokens.
    """
    kind = int(rng.random() * 3)
    if kind == 0:
        pos = int(rng.random() * (len(text) + 1))
        return text[:pos] + "@" + text[pos:]
    if kind == 1:
        parens = [i for i, c in enumerate(text) if c in "()"]
        if not parens:
            return text + ")"
        i = parens[int(rng.random() * len(parens))]
        flip = ")" if text[i] == "(" else "("
        return text[:i] + flip + text[i + 1 :]
    tokens = [m for m in _TOKEN_RE.finditer(text) if not m.group().isspace()]
    if not tokens:
        return "@"
    m = tokens[int(rng.random() * len(tokens))]
    return text[: m.start()] + text[m.end() :]
