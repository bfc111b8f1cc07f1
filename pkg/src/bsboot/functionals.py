"""Survival-summary functionals of weighted distributions.

A functional is ``phi(G) = f(Gh_1, ..., Gh_k)`` for integrands ``h_j`` and a
continuous combiner ``f``; the two-sample form feeds both groups' integrals
to ``f``.  On a weighted distribution each ``Gh`` is the weight-sum of ``h``
over the support.
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EvaluationError, IngestionError, NumericDomainError


# --- integrand descriptors ---------------------------------------------------

@dataclass(frozen=True)
class Identity:
    def __call__(self, x):
        return x

    def __str__(self):
        return "x"


@dataclass(frozen=True)
class Power:
    exponent: float

    def __call__(self, x):
        return np.asarray(x) ** self.exponent

    def __str__(self):
        return f"x^{self.exponent:g}"


@dataclass(frozen=True)
class Truncation:
    """min(x, tau), the restricted-mean integrand."""

    tau: float

    def __post_init__(self):
        if not self.tau > 0:
            raise NumericDomainError(f"truncation point must be positive, got {self.tau}")

    def __call__(self, x):
        return np.minimum(x, self.tau)

    def __str__(self):
        return f"min(x,{self.tau:g})"


@dataclass(frozen=True)
class IndicatorAbove:
    """I{x > t}: survival-probability integrand (strict inequality)."""

    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise NumericDomainError(f"threshold must be positive, got {self.t}")

    def __call__(self, x):
        return (np.asarray(x) > self.t).astype(float)

    def __str__(self):
        return f"I(x>{self.t:g})"


@dataclass(frozen=True)
class IndicatorAtOrBelow:
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise NumericDomainError(f"threshold must be positive, got {self.t}")

    def __call__(self, x):
        return (np.asarray(x) <= self.t).astype(float)

    def __str__(self):
        return f"I(x<={self.t:g})"


@dataclass(frozen=True)
class FunctionalSpec:
    """Integrand list plus combiner; arity 1 or 2 (two independent groups).

    For arity 2 the combiner receives all first-group integrals followed by
    all second-group integrals.
    """

    name: str
    h_list: tuple
    combiner: Callable[..., float]
    arity: int = 1


def evaluate(phi: FunctionalSpec, g, g2=None) -> float:
    """phi applied to one or two weighted distributions."""
    if phi.arity == 1:
        if g2 is not None:
            raise EvaluationError(f"{phi.name} is one-sample but got two distributions")
        args = [g.integrate(h) for h in phi.h_list]
    else:
        if g2 is None:
            raise EvaluationError(f"{phi.name} is two-sample but got one distribution")
        args = [g.integrate(h) for h in phi.h_list]
        args += [g2.integrate(h) for h in phi.h_list]
    value = phi.combiner(*args)
    if not math.isfinite(value):
        raise EvaluationError(f"{phi.name} evaluated to non-finite value {value!r}")
    return float(value)


# --- builtin library ---------------------------------------------------------

def _ratio(a, b):
    if b == 0:
        raise EvaluationError("ratio functional hit a zero denominator")
    return a / b


def builtin(name: str, **params) -> FunctionalSpec:
    """Library of named summaries.

    mean, variance, rmst(tau), surv_prob(t), diff_mean, diff_rmst(tau),
    ratio_surv(t).
    """
    if name == "mean":
        return FunctionalSpec("mean", (Identity(),), lambda x1: x1)
    if name == "variance":
        return FunctionalSpec("variance", (Power(2.0), Identity()),
                              lambda x1, x2: x1 - x2 ** 2)
    if name == "rmst":
        tau = float(params["tau"])
        return FunctionalSpec(f"rmst({tau:g})", (Truncation(tau),), lambda x1: x1)
    if name == "surv_prob":
        t = float(params["t"])
        return FunctionalSpec(f"surv_prob({t:g})", (IndicatorAbove(t),), lambda x1: x1)
    if name == "diff_mean":
        return FunctionalSpec("diff_mean", (Identity(),),
                              lambda x1, y1: x1 - y1, arity=2)
    if name == "diff_rmst":
        tau = float(params["tau"])
        return FunctionalSpec(f"diff_rmst({tau:g})", (Truncation(tau),),
                              lambda x1, y1: x1 - y1, arity=2)
    if name == "ratio_surv":
        t = float(params["t"])
        return FunctionalSpec(f"ratio_surv({t:g})", (IndicatorAbove(t),),
                              _ratio, arity=2)
    raise IngestionError(f"unknown functional {name!r}")


def parse_functional(text: str) -> FunctionalSpec:
    """CLI syntax: ``mean``, ``variance``, ``rmst:tau=10``, ``surv:t=10``,
    ``diff_mean``, ``diff_rmst:tau=10``, ``ratio_surv:t=10``."""
    head, _, args = text.partition(":")
    params = {}
    for part in filter(None, args.split(",")):
        key, sep, value = part.partition("=")
        if not sep:
            raise IngestionError(f"functional spec {text!r}: expected key=value, got {part!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise IngestionError(f"functional spec {text!r}: bad number {value!r}") from None
    alias = {"surv": "surv_prob"}
    try:
        return builtin(alias.get(head, head), **params)
    except KeyError as exc:
        raise IngestionError(f"functional spec {text!r} missing parameter {exc}") from None


# --- user-composed arithmetic combiners --------------------------------------

_ALLOWED_BINOPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.Div: operator.truediv, ast.Pow: operator.pow,
}
_ALLOWED_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def expression_combiner(expr: str, names: Sequence[str]) -> Callable[..., float]:
    """Compile an arithmetic expression over the given input names into a combiner.

    Only +, -, *, /, **, unary signs, numbers, and the listed names are
    accepted, which keeps the resulting combiner continuous except at
    explicit division poles (surfaced as evaluation errors).
    """
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise IngestionError(f"bad combiner expression {expr!r}: {exc}") from None
    positions = {n: i for i, n in enumerate(names)}

    def check(node: ast.AST) -> None:
        if isinstance(node, ast.Expression):
            check(node.body)
        elif isinstance(node, ast.BinOp) and type(node.op) in _ALLOWED_BINOPS:
            check(node.left)
            check(node.right)
        elif isinstance(node, ast.UnaryOp) and type(node.op) in _ALLOWED_UNARY:
            check(node.operand)
        elif isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            pass
        elif isinstance(node, ast.Name) and node.id in positions:
            pass
        else:
            raise IngestionError(
                f"combiner expression {expr!r}: disallowed element {ast.dump(node)[:40]}")

    check(tree)

    def run(node: ast.AST, args) -> float:
        if isinstance(node, ast.Expression):
            return run(node.body, args)
        if isinstance(node, ast.BinOp):
            left, right = run(node.left, args), run(node.right, args)
            try:
                return _ALLOWED_BINOPS[type(node.op)](left, right)
            except ZeroDivisionError:
                raise EvaluationError(f"combiner {expr!r} divided by zero") from None
        if isinstance(node, ast.UnaryOp):
            return _ALLOWED_UNARY[type(node.op)](run(node.operand, args))
        if isinstance(node, ast.Constant):
            return float(node.value)
        return args[positions[node.id]]  # ast.Name, already validated

    def combiner(*args: float) -> float:
        return float(run(tree, args))

    return combiner


def custom(name: str, h_list: Sequence, expr: str, arity: int = 1) -> FunctionalSpec:
    """Functional with the given integrands and an arithmetic combiner expression.

    One-sample inputs are named x1..xk; two-sample inputs x1..xp then y1..yp.
    """
    k = len(h_list)
    if arity == 1:
        names = [f"x{i + 1}" for i in range(k)]
    else:
        names = [f"x{i + 1}" for i in range(k)] + [f"y{i + 1}" for i in range(k)]
    return FunctionalSpec(name, tuple(h_list), expression_combiner(expr, names), arity=arity)
