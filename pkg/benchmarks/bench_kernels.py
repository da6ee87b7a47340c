"""Compare the compiled and pure-Python kernels on representative work.

    python benchmarks/bench_kernels.py [--repeat N]

Each workload runs once per backend in a fresh interpreter, with
``MDAG_PURE_PYTHON`` set for the fallback run.
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, time
from itertools import combinations
import mdag
from mdag import latent_project, d_separated, enumerate_mdags
from mdag.equivalence import labelled_dags

def random_graph(rng, n):
    names = [f"v{i}" for i in range(n)]
    edges = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.35]
    faces = [rng.sample(names, rng.randint(2, 3)) for _ in range(rng.randint(0, 3))]
    return mdag.MDag(names, edges, faces)

def timed(fn, repeat):
    best = None
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    return best

rng = random.Random(0)
graphs = [random_graph(rng, rng.randint(3, 7)) for _ in range(2000)]
keeps = [set(rng.sample(list(g.vertices), max(1, len(g.vertices) // 2))) for g in graphs]
dags4 = list(labelled_dags(4))

def projection():
    for g, k in zip(graphs, keeps):
        latent_project(g, k)

def dsep():
    for d in dags4:
        vs = d.vertices
        for x, y in combinations(vs, 2):
            d_separated(d, x, y, [v for v in vs if v not in (x, y)][:1])

def iso_enumeration():
    enumerate_mdags(3, up_to_iso=True)

REPEAT = __REPEAT__
print(json.dumps({
    "backend": mdag.BACKEND,
    "latent_project x2000": timed(projection, REPEAT),
    "d_separated x3258": timed(dsep, REPEAT),
    "enumerate n=3 up to iso": timed(iso_enumeration, REPEAT),
}))
"""


def run(pure, repeat):
    env = dict(os.environ)
    if pure:
        env["MDAG_PURE_PYTHON"] = "1"
    else:
        env.pop("MDAG_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", WORKLOAD.replace("__REPEAT__", str(repeat))],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    if args.json:
        print(json.dumps({"compiled": fast, "python": slow}, indent=2))
        return
    if fast["backend"] != "cython":
        print("note: compiled kernels are not built; both columns use pure Python")
    print(f"{'workload':28s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    for key in fast:
        if key == "backend":
            continue
        print(f"{key:28s} {fast[key]:10.4f} {slow[key]:10.4f} {slow[key] / fast[key]:7.2f}x")


if __name__ == "__main__":
    main()
