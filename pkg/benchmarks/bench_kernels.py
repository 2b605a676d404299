"""Benchmark: compiled row-reduction kernel against the pure Python fallback.

Micro level: rref and nullspace on random integer matrices of growing size.
Macro level: a representative torsion workload (duality checks on the
trefoil and the central model) run in a subprocess with each backend, since
the backend is chosen at import time via ALEXMOD_PURE.

Usage: python benchmarks/bench_kernels.py
"""

import os
import random
import subprocess
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from alexmod._kernels import qla_py  # noqa: E402

try:
    from alexmod._kernels import qla_cy
except ImportError:
    qla_cy = None


def random_matrix(rng, n, m, span=9):
    return [[rng.randint(-span, span) for _ in range(m)] for _ in range(n)]


def bench_micro(kernel, sizes, repeats=3, seed=11):
    rows_out = []
    for n in sizes:
        rng = random.Random(seed)
        mats = [random_matrix(rng, n, n + 4) for _ in range(repeats)]
        t0 = time.perf_counter()
        for mat in mats:
            kernel.rref(mat, n + 4)
            kernel.nullspace(mat, n + 4)
        rows_out.append((n, (time.perf_counter() - t0) / repeats))
    return rows_out


MACRO_SNIPPET = """
import time
from alexmod import kernel_backend
from alexmod.localsys import GroupPresentation, Epimorphism, presentation_complex, duality_check

t0 = time.perf_counter()
trefoil = presentation_complex(GroupPresentation(2, ((1, 2, 1, -2, -1, -2),)), Epimorphism((1, 1)))
central = presentation_complex(
    GroupPresentation(4, ((1, 4, -1, -4), (2, 4, -2, -4), (3, 4, -3, -4))),
    Epimorphism((1, 1, 1, 4)),
)
for pc in (trefoil, central):
    for i in (0, 1):
        assert duality_check(pc, i)["ok"]
print(f"{kernel_backend}: {time.perf_counter() - t0:.3f}s")
"""


def bench_macro():
    for pure in (False, True):
        env = dict(os.environ)
        if pure:
            env["ALEXMOD_PURE"] = "1"
        else:
            env.pop("ALEXMOD_PURE", None)
        sys.stdout.flush()
        subprocess.run([sys.executable, "-c", MACRO_SNIPPET], env=env, check=True)


def main():
    # Bareiss entries are exact minors, whose bit size grows linearly in n;
    # keep the sizes representative of the package's actual workloads
    sizes = (12, 24, 36, 48)
    print("micro: mean seconds per rref+nullspace on n x (n+4) matrices")
    print(f"{'n':>5}  {'python':>10}  {'cython':>10}  {'speedup':>8}")
    pure = dict(bench_micro(qla_py, sizes))
    comp = dict(bench_micro(qla_cy, sizes)) if qla_cy else {}
    for n in sizes:
        if comp:
            print(f"{n:>5}  {pure[n]:>10.4f}  {comp[n]:>10.4f}  {pure[n] / comp[n]:>7.2f}x")
        else:
            print(f"{n:>5}  {pure[n]:>10.4f}  {'absent':>10}")
    print("\nmacro: duality workload per backend")
    bench_macro()


if __name__ == "__main__":
    main()
