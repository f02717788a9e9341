"""Identity checks shared by the verification suites.

A :class:`Check` is a labelled, deferred comparison.  Suites build lists of
them in the parent process; the harness runs them (possibly in forked
workers) and turns the outcomes into report records.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .algebra import AlgebraContext, Element, serialize
from .series import TruncSeries, UP


@dataclass(frozen=True)
class Outcome:
    passed: bool
    counterexample: str | None = None
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Check:
    label: str
    anchor: str
    params: dict
    run: Callable[[], Outcome]

    def sort_key(self):
        return (self.label, _param_key(self.params))


def _param_key(params: dict) -> str:
    import json

    return json.dumps(params, sort_keys=True)


def element_outcome(residual: Element, table=None) -> Outcome:
    """Pass iff the residual normalizes to zero."""
    r = table.normalize(residual) if table is not None else residual
    if r.terms:
        return Outcome(False, serialize(r))
    return Outcome(True)


def series_outcome(lhs: TruncSeries, rhs: TruncSeries, table=None, order: int | None = None) -> Outcome:
    """Compare two series coefficientwise up to ``order``; report the first
    coefficient that differs."""
    n = min(lhs.order, rhs.order) if order is None else order
    for k in range(n + 1):
        diff = lhs.coeffs[k] - rhs.coeffs[k]
        if table is not None:
            diff = table.normalize(diff)
        if diff.terms:
            return Outcome(False, serialize(diff), {"coefficient": k})
    return Outcome(True)


def coefficient(series: TruncSeries, sign: str, r: int, target: AlgebraContext) -> Element:
    """The generator-shaped coefficient x^(r) (sign '-') or x^(-r) (sign '+')
    of a unit-constant series

        x^-(u) = 1 + h sum x^(r) u^-r,   x^+(u) = 1 - h sum x^(-r) u^(r-1),

    or of a series with zero constant term in the same shape.  Dividing by h
    loses one order, so ``series`` must be computed with H at least
    ``target.H + 1``; the result is truncated to ``target``.
    """
    if series.ctx.H < target.H + 1:
        raise ValueError(f"series computed at H={series.ctx.H} cannot give coefficients exact at H={target.H}")
    if r < 1:
        raise ValueError("coefficient index must be >= 1")
    if sign == "-":
        c = series.coeffs[r]
        out = c.hdiv(1) if c.terms else c
    else:
        if series.direction != UP:
            raise ValueError("plus coefficients need an up series")
        c = series.coeffs[r - 1]
        if r == 1:
            c = c - c.ctx.scalar(c.terms.get((0, ()), 0))
        out = -(c.hdiv(1)) if c.terms else c
    return out.recast(target)


def run_checks(checks) -> list[tuple[Check, Outcome]]:
    return [(c, c.run()) for c in checks]


def all_pass(checks) -> bool:
    return all(o.passed for _, o in run_checks(checks))
