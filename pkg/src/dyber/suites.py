"""Suite registry: turns a configuration into lists of deferred checks.

Every suite builder takes a :class:`Workspace` and returns a list of
:class:`~dyber.checks.Check`.  Shared inputs (Gauss data at the various
orders, Berezinian coefficients) are memoized on the workspace and computed
while the suites are built, in the parent process; forked workers inherit
them along with the warmed rule tables.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import AlgebraContext, UsageError, serialize
from .berezinian import (
    berezinian_checks,
    berezinian_direct,
    centrality_checks,
    classical_limit_checks,
    delta_checks,
    drinfeld_coefficients,
    independence_checks,
    padded_order,
    qdet_checks,
)
from .checks import Check, Outcome, element_outcome
from .gauss import gauss_decompose, verify_d_commute, verify_gauss_identities, verify_inverse_factors
from .morphisms import build_morphism, relation_sample, verify_psi_images, verify_zeta_images
from .rtt import confluence_checks, default_cap, inverse_relation_checks, shared_table
from .steps import proof_step_checks

REGISTRY = (
    "relations-oracle",
    "confluence",
    "gauss",
    "d-commute",
    "zeta",
    "psi",
    "berezinian-equality",
    "centrality",
    "proof-steps",
    "classical-limit",
    "independence",
    "delta-sl",
)

CONFLUENCE_TRIALS = 200
PSI_SHIFTS = (0, 1)
MORPHISM_SAMPLES = 20

NOTES = {
    "independence": "degree <= 2 rank probe; a finite-order under-approximation of algebraic independence",
    "proof-steps": "each identity runs in its own smallest gl(m|n); m and n of the config are not used",
}


@dataclass(frozen=True)
class SuiteConfig:
    m: int
    n: int
    N: int
    H: int
    cap: int | None = None
    suites: tuple | None = None
    seed: int = 0
    jobs: int = 1
    cache_dir: str | None = None
    fmt: str = "json"
    timings: bool = False

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or self.m + self.n < 1:
            raise UsageError(f"need m, n >= 0 and m + n >= 1, got m={self.m}, n={self.n}")
        if self.N < 1 or self.H < 1:
            raise UsageError(f"need N >= 1 and H >= 1, got N={self.N}, H={self.H}")
        if self.cap is not None and self.cap < self.N + 1:
            raise UsageError(f"level cap {self.cap} must be at least N+1 = {self.N + 1}")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if self.fmt not in ("json", "text"):
            raise UsageError(f"unknown format {self.fmt!r}")
        for s in self.suites or ():
            if s not in REGISTRY:
                raise UsageError(f"unknown suite {s!r}; choose from {', '.join(REGISTRY)}")
        if self.suites and "delta-sl" in self.suites and self.m != self.n:
            raise UsageError(f"suite delta-sl needs m = n, got m={self.m}, n={self.n}")

    @property
    def level_cap(self) -> int:
        return default_cap(self.N, self.H) if self.cap is None else self.cap

    def selected(self) -> list[str]:
        """Requested suites in registry order; all applicable ones when
        ``suites`` is None."""
        if self.suites is not None:
            return [s for s in REGISTRY if s in self.suites]
        return [s for s in REGISTRY if s != "delta-sl" or self.m == self.n]

    def echo(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "series_order": self.N,
            "h_order": self.H,
            "cap": self.level_cap,
            "suites": self.selected(),
            "seed": self.seed,
        }


@dataclass
class Workspace:
    config: SuiteConfig
    _cache: dict = field(default_factory=dict)

    @property
    def ctx(self) -> AlgebraContext:
        c = self.config
        return AlgebraContext(c.m, c.n, c.H, c.N)

    def tables(self, ctx: AlgebraContext):
        return shared_table(ctx.m, ctx.n, self.config.level_cap, ctx.H, ctx.N)

    @property
    def table(self):
        return self.tables(self.ctx)

    def _memo(self, key, make):
        hit = self._cache.get(key)
        if hit is None:
            hit = make()
            self._cache[key] = hit
        return hit

    def gauss(self, ctx: AlgebraContext, sign: str, padded: bool = False):
        order = padded_order(ctx, sign) if padded else ctx.N
        return self._memo(("gauss", ctx, sign, order), lambda: gauss_decompose(ctx, sign, self.tables(ctx), order))

    def gauss_pair(self, ctx: AlgebraContext, padded: bool = False) -> dict:
        return {s: self.gauss(ctx, s, padded) for s in "-+"}

    @property
    def hi(self) -> AlgebraContext:
        return self.ctx.with_orders(H=self.config.H + 1)

    def bdata(self) -> dict:
        """Berezinian series and exact coefficients, both signs."""
        return self._memo(
            ("ber",), lambda: {s: berezinian_direct(self.ctx, s, self.table, with_coefficients=True) for s in "-+"}
        )

    def drinfeld(self) -> dict:
        return self._memo(("drinfeld",), lambda: drinfeld_coefficients(self.ctx, self.table, self.gauss_pair(self.hi)))


# ---------------------------------------------------------------- builders

A_REL = "RTT relations between T(u) and T(v)^-1"
A_CONF = "confluence of the PBW rewriting system"
A_HOM = "morphism respects the defining relations"


def relations_oracle(ws: Workspace) -> list[Check]:
    ctx, table = ws.ctx, ws.table
    out = []
    for label, params, thunk in inverse_relation_checks(table, ctx):
        def run(thunk=thunk):
            return element_outcome(thunk())

        out.append(Check(label, A_REL, {"m": ctx.m, "n": ctx.n, **params}, run))
    return out


def confluence(ws: Workspace) -> list[Check]:
    ctx = ws.ctx
    out = []
    for params, thunk in confluence_checks(ws.table, ctx, ws.config.seed, CONFLUENCE_TRIALS):
        def run(thunk=thunk):
            ok, diff = thunk()
            return Outcome(True) if ok else Outcome(False, serialize(diff))

        out.append(Check("confluence", A_CONF, {"m": ctx.m, "n": ctx.n, **params}, run))
    return out


def gauss(ws: Workspace) -> list[Check]:
    out = []
    for sign in "-+":
        g = ws.gauss(ws.ctx, sign)
        out += verify_gauss_identities(g, ws.table)
        out += verify_inverse_factors(g, ws.table)
    return out


def d_commute(ws: Workspace) -> list[Check]:
    return verify_d_commute(ws.gauss(ws.hi, "-"), ws.gauss(ws.hi, "+"), ws.table, ws.ctx)


def _homomorphism_check(ws: Workspace, kind: str, k: int = 0) -> Check:
    ctx = ws.ctx

    def run():
        phi = build_morphism(kind, ctx, ws.tables, k=k)
        rng = random.Random(ws.config.seed)
        for rel, image in relation_sample(phi, ws.table, rng, MORPHISM_SAMPLES, min(2, ctx.N)):
            out = element_outcome(image, phi.table)
            if not out.passed:
                return Outcome(False, out.counterexample, {"relation": serialize(rel)})
        return Outcome(True)

    params = {"m": ctx.m, "n": ctx.n, "samples": MORPHISM_SAMPLES}
    if kind == "psi":
        params["k"] = k
    return Check(f"{kind}_relations", A_HOM, params, run)


def zeta(ws: Workspace) -> list[Check]:
    ctx = ws.ctx
    dual = AlgebraContext(ctx.n, ctx.m, ctx.H, ctx.N)
    out = verify_zeta_images(ctx, ws.tables, ws.gauss_pair(ctx), ws.gauss_pair(dual))
    return out + [_homomorphism_check(ws, "zeta")]


def psi(ws: Workspace) -> list[Check]:
    ctx = ws.ctx
    out = []
    for k in PSI_SHIFTS:
        tgt = AlgebraContext(ctx.m + k, ctx.n, ctx.H, ctx.N)
        out += verify_psi_images(ctx, k, ws.tables, ws.gauss_pair(ctx), ws.gauss_pair(tgt))
        if k:
            out.append(_homomorphism_check(ws, "psi", k))
    return out


def berezinian_equality(ws: Workspace) -> list[Check]:
    ctx = ws.ctx
    padded = ws.gauss_pair(ctx, padded=True)
    return qdet_checks(ctx, ws.table, padded) + berezinian_checks(ctx, ws.tables, padded)


def centrality(ws: Workspace) -> list[Check]:
    return centrality_checks(ws.ctx, ws.table, ws.bdata(), ws.drinfeld())


def proof_steps(ws: Workspace) -> list[Check]:
    c = ws.config
    return proof_step_checks(c.N, c.H, ws.tables)


def classical_limit(ws: Workspace) -> list[Check]:
    ctx = ws.ctx
    return classical_limit_checks(ctx, ws.table, ws.bdata())


def independence(ws: Workspace) -> list[Check]:
    ctx = ws.ctx
    return independence_checks(ctx, ws.table, ws.bdata(), min(2, ctx.N))


def delta_sl(ws: Workspace) -> list[Check]:
    ctx = ws.ctx
    hi = ws.hi
    return delta_checks(
        ctx,
        ws.tables,
        ws.gauss_pair(ctx, padded=True),
        {s: ws.gauss(hi, s, padded=True) for s in "-+"},
        ws.bdata(),
    )


BUILDERS = {
    "relations-oracle": relations_oracle,
    "confluence": confluence,
    "gauss": gauss,
    "d-commute": d_commute,
    "zeta": zeta,
    "psi": psi,
    "berezinian-equality": berezinian_equality,
    "centrality": centrality,
    "proof-steps": proof_steps,
    "classical-limit": classical_limit,
    "independence": independence,
    "delta-sl": delta_sl,
}


def build_suites(ws: Workspace) -> list[tuple[str, list[Check]]]:
    return [(name, BUILDERS[name](ws)) for name in ws.config.selected()]


__all__ = ["REGISTRY", "NOTES", "SuiteConfig", "Workspace", "BUILDERS", "build_suites"]
