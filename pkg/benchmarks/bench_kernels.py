"""Compare the compiled and pure-Python kernels on the same workloads.

Each implementation runs in a fresh interpreter (the kernel choice is made
at import), and both must produce identical normal forms.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--words 300]
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import subprocess
import sys

WORKER = r"""
import hashlib, json, random, sys, time
from dyber import AlgebraContext, RuleTable, serialize, IMPLEMENTATION
from dyber._kernels_select import mul_terms
from dyber.rtt import random_word

words, seed = int(sys.argv[1]), int(sys.argv[2])
out = {"implementation": IMPLEMENTATION}

# PBW normalization of random words in gl(1|1) with a cold table (rules
# derived on demand, then memoized insertion dominates)
ctx = AlgebraContext(1, 1, 3, 3)
table = RuleTable(ctx, 18)
rng = random.Random(seed)
ws = [random_word(ctx, rng, 6, 3) for _ in range(words)]
digest = hashlib.sha256()
t0 = time.perf_counter()
for w in ws:
    digest.update(serialize(table.normalize(w)).encode())
out["normalize_s"] = time.perf_counter() - t0

# warm normalization: memo tables reset, rules kept
table._norm.memo.clear()
t0 = time.perf_counter()
for w in ws:
    table.normalize(w)
out["normalize_warm_s"] = time.perf_counter() - t0

# free products of dense term maps
a = table.normalize(ws[0] * ws[1]).terms
b = table.normalize(ws[2] * ws[3]).terms
t0 = time.perf_counter()
for _ in range(200):
    mul_terms(a, b, 3)
out["mul_terms_s"] = time.perf_counter() - t0
out["digest"] = digest.hexdigest()
print(json.dumps(out))
"""


def run(pure: bool, words: int, seed: int) -> dict:
    env = dict(os.environ)
    env.pop("DYBER_PURE_PYTHON", None)
    if pure:
        env["DYBER_PURE_PYTHON"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKER, str(words), str(seed)], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--words", type=int, default=300)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    best: dict = {}
    digests = set()
    for _ in range(args.repeat):
        for pure in (False, True):
            r = run(pure, args.words, args.seed)
            digests.add(r.pop("digest"))
            name = r.pop("implementation")
            cur = best.setdefault(name, {})
            for k, v in r.items():
                cur[k] = min(v, cur.get(k, v))
    if "cython" not in best:
        print("compiled kernels are not built; only the pure-Python timings are shown")
    keys = ["normalize_s", "normalize_warm_s", "mul_terms_s"]
    print(f"{'workload':<20}" + "".join(f"{n:>12}" for n in sorted(best)) + ("    speedup" if len(best) == 2 else ""))
    for k in keys:
        row = f"{k:<20}" + "".join(f"{best[n][k]:>12.3f}" for n in sorted(best))
        if len(best) == 2:
            row += f"{best['python'][k] / best['cython'][k]:>10.2f}x"
        print(row)
    same = len(digests) == 1
    print("normal forms identical across implementations:", same)
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
