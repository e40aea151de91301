"""NumPy fallback for the IPFP inner loop.

Same contract as the compiled kernel in ``_ipfp_cy``: alternate a row
scaling to margin ``a`` and a column scaling to margin ``b``, stopping
when the L1 distance between consecutive post-column-scaling iterates
drops to ``eps`` or after ``max_iter`` full alternations.  Zero entries
stay exactly zero.
"""

import numpy as np


def ipfp_core(x, a, b, eps, max_iter):
    cur = np.array(x, dtype=float)
    prev = np.array(x, dtype=float)
    iterations = 0
    delta = np.inf
    for _ in range(max_iter):
        cur *= (a / cur.sum(axis=1))[:, None]
        cur *= b / cur.sum(axis=0)
        iterations += 1
        delta = float(np.abs(cur - prev).sum())
        if delta <= eps:
            return cur, iterations, True, delta
        prev[...] = cur
    return cur, iterations, False, delta
