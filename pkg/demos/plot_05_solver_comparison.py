"""
Comparing the five least-squares formulations
=============================================

Normal equations, symmetric saddle-point systems and LSQR all reach the
same answer. They differ in iteration counts and in how much the matrix
fills in.
"""

from hodgerank.bench import run_bench

for family, params in [("er", {"n": 100, "p": 0.1}),
                       ("ws", {"n": 100, "k": 10}),
                       ("ba", {"n": 100, "m": 5})]:
    rows = run_bench(family, params, trials=3, seed=0)
    r0 = rows[0]
    print(f"{family}: N = ({r0.n0}, {r0.n1}, {r0.n2})")
    for r in rows:
        print(f"  {r.method:11s} grad {r.rel_err_grad:.1e} curl {r.rel_err_curl:.1e} "
              f"iters {r.iters_alpha:4d} / {r.iters_beta:4d}  "
              f"time {1e3 * r.secs_alpha:6.2f} / {1e3 * r.secs_beta:6.2f} ms")

# The saddle-point forms take roughly twice the iterations of the normal
# equations; timings depend on the machine and are only indicative.
