"""The eleven acceptance criteria, each run through the harness entry point.

Every test records one line (criterion, PASS/FAIL, timing) that conftest
prints at the end of the session.
"""
from __future__ import annotations

import random
import time

import pytest

from conftest import ACCEPTANCE
from dyber import AlgebraContext, parse, serialize
from dyber.report import emit, run
from dyber.rtt import RuleTable, cache_rules, load_rules, random_word
from dyber.suites import SuiteConfig

_REPORTS: dict = {}


def report(m, n, N, H, *suites, seed=0, jobs=1):
    key = (m, n, N, H, suites, seed, jobs)
    if key not in _REPORTS:
        _REPORTS[key] = run(SuiteConfig(m, n, N, H, suites=suites, seed=seed, jobs=jobs))
    return _REPORTS[key]


def _failures(rep, labels=None):
    return [
        (r["label"], r["params"])
        for r in rep["identities"]
        if not r["passed"] and (labels is None or r["label"] in labels)
    ]


def _records(rep, labels):
    return [r for r in rep["identities"] if r["label"] in labels]


class Criterion:
    def __init__(self, k, title, budget):
        self.k, self.title, self.budget = k, title, budget

    def __enter__(self):
        self.t0 = time.perf_counter()
        self.info = []
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        ok = exc_type is None and dt < self.budget
        note = "; ".join(self.info)
        ACCEPTANCE[self.k] = (self.title, ok, f"[{dt:.1f}s / budget {self.budget:.0f}s] {note}".rstrip())
        if exc_type is None and dt >= self.budget:
            pytest.fail(f"criterion {self.k} took {dt:.1f}s, budget {self.budget}s")
        return False


def test_c01_sign_convention_oracle():
    with Criterion(1, "sign-convention oracle gl(1|1), gl(2|1), N=H=2", 120) as c:
        for mn in [(1, 1), (2, 1)]:
            rep = report(*mn, 2, 2, "relations-oracle")
            c.info.append(f"gl({mn[0]}|{mn[1]}): {rep['summary']['passed']}/{rep['summary']['total']}")
            assert rep["summary"]["total"] > 0 and _failures(rep) == []


def test_c02_gauss_decomposition():
    with Criterion(2, "Gauss decomposition and expansions, both signs, N=H=2", 300) as c:
        for mn in [(1, 1), (2, 1), (1, 2)]:
            rep = report(*mn, 2, 2, "gauss")
            recs = rep["identities"]
            assert {r["params"]["sign"] for r in recs} == {"-", "+"}
            assert any(r["label"] == "gauss_fde" for r in recs)
            assert _failures(rep) == []
            c.info.append(f"gl({mn[0]}|{mn[1]}): {len(recs)}")


def test_c03_quantum_determinant():
    with Criterion(3, "quantum determinant = ordered d-product, gl(2|0), gl(2|1), N=H=3", 300) as c:
        for mn in [(2, 0), (2, 1)]:
            rep = report(*mn, 3, 3, "berezinian-equality")
            recs = _records(rep, {"qdet_factored"})
            assert {(r["params"]["sign"], r["params"]["mhat"]) for r in recs} == {(s, k) for s in "-+" for k in (1, 2)}
            assert _failures(rep, {"qdet_factored"}) == []
            c.info.append(f"gl({mn[0]}|{mn[1]}): {len(recs)}")


def test_c04_berezinian_triple_agreement():
    with Criterion(4, "Berezinian direct = factored = zeta split, N=H=3", 900) as c:
        for mn in [(1, 1), (2, 1), (1, 2)]:
            rep = report(*mn, 3, 3, "berezinian-equality")
            recs = _records(rep, {"ber_factored", "ber_zeta_split"})
            assert len(recs) == 4
            assert _failures(rep, {"ber_factored", "ber_zeta_split"}) == []
            c.info.append(f"gl({mn[0]}|{mn[1]}): {len(recs)}")


def test_c05_centrality():
    with Criterion(5, "centrality of b-coefficients, gl(1|1), gl(2|1), N=H=3", 1800) as c:
        for mn in [(1, 1), (2, 1)]:
            rep = report(*mn, 3, 3, "centrality")
            rs = {r["params"]["b"] for r in rep["identities"]}
            assert rs == {f"{s}{r}" for s in "-+" for r in (1, 2, 3)}
            assert _failures(rep) == []
            c.info.append(f"gl({mn[0]}|{mn[1]}): {rep['summary']['passed']}/{rep['summary']['total']}")


def test_c06_morphism_images_and_d_commute():
    with Criterion(6, "zeta images, psi images, d-commutativity, gl(1|1), gl(2|1), N=H=2", 600) as c:
        for mn in [(1, 1), (2, 1)]:
            rep = report(*mn, 2, 2, "d-commute", "zeta", "psi")
            pairs = {r["params"]["signs"] for r in rep["identities"] if r["label"] == "d_commute"}
            assert pairs == {"--", "++", "-+"}
            assert {r["params"]["k"] for r in rep["identities"] if r["label"].startswith("psi_")} == {0, 1}
            assert _failures(rep) == []
            c.info.append(f"gl({mn[0]}|{mn[1]}): {rep['summary']['passed']}/{rep['summary']['total']}")


def test_c07_proof_steps():
    with Criterion(7, "intermediate centrality identities at their smallest gl(m|n), N=H=3", 600) as c:
        rep = report(1, 1, 3, 3, "proof-steps")
        labels = {r["label"] for r in rep["identities"]}
        assert {"e1_b11_commute", "t12_tprime_commute", "de_shift_relation", "ito_shift_relation", "em_d_commute"} <= labels
        assert _failures(rep) == []
        c.info.append(f"{rep['summary']['passed']}/{rep['summary']['total']}")


def test_c08_classical_limit():
    with Criterion(8, "classical limit of b-coefficients, gl(1|1), r <= 3", 120) as c:
        rep = report(1, 1, 3, 3, "classical-limit")
        assert {r["params"]["b"] for r in rep["identities"]} == {f"{s}{r}" for s in "-+" for r in (1, 2, 3)}
        assert _failures(rep) == []
        c.info.append(f"{rep['summary']['passed']}/{rep['summary']['total']}")


def test_c09_independence():
    with Criterion(9, "degree <= 2 monomials in b^(+-r), r <= 2, full rank, gl(1|1), N=4, H=3", 600) as c:
        rep = report(1, 1, 4, 3, "independence")
        (rec,) = rep["identities"]
        assert rec["params"]["R"] == 2 and rec["passed"]
        c.info.append(f"rank {rec['detail']['rank']}/{rec['detail']['monomials']}" if "detail" in rec else "full rank")


def test_c10_delta_sl():
    with Criterion(10, "delta factorization for sl(n|n), n = 1, 2, both signs, N=H=2", 600) as c:
        for n in (1, 2):
            rep = report(n, n, 2, 2, "delta-sl")
            assert {r["params"]["sign"] for r in rep["identities"]} == {"-", "+"}
            assert rep["summary"]["total"] == 6 and _failures(rep) == []
            c.info.append(f"n={n}: 6/6")


def test_c11_engine_health(tmp_path):
    with Criterion(11, "confluence 200/200, serialize and cache round-trips, --jobs invariance", 600) as c:
        rep = report(1, 1, 3, 3, "confluence", seed=7)
        assert rep["summary"]["total"] == 200 and rep["summary"]["passed"] == 200
        c.info.append("confluence 200/200")

        ctx = AlgebraContext(1, 1, 3, 3)
        table = RuleTable(ctx, 12)
        rng = random.Random(7)
        probes = [random_word(ctx, rng, 4, 2) for _ in range(50)]
        normals = [table.normalize(w) for w in probes]
        for e in probes + normals:
            assert parse(serialize(e), ctx) == e
        c.info.append("serialize 100/100")

        path = cache_rules(table, tmp_path, ctx.H)
        loaded = load_rules(path, ctx, 12)
        assert [loaded.normalize(w) for w in probes] == normals
        c.info.append("cache 50/50")

        suites = ("relations-oracle", "gauss", "zeta", "centrality")
        one = emit(report(1, 1, 2, 2, *suites, jobs=1))
        two = emit(report(1, 1, 2, 2, *suites, jobs=2))
        assert one == two
        c.info.append("jobs 1 == jobs 2")
