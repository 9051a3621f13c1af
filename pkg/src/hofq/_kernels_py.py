"""Pure-Python trace kernels.

Fallback used when the compiled extension is unavailable (or when
HOFQ_PURE=1 forces it).  Same call contracts as hofq._kernels:

  * arrays are 1-D contiguous int64 numpy arrays
  * return value is (status, n) where status is OK / DIED / OVERFLOW and,
    for nonzero status, n is the first index that could not be computed
  * on return the output array holds every term before index n

Python ints do not wrap, so the int64 range is enforced explicitly to keep
overflow semantics identical to the compiled kernel.
"""

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)

OK = 0
DIED = 1
OVERFLOW = 2

IMPLEMENTATION = "python"


def one_term_trace(f, q):
    """q(1) = 1; q(n) = q(n - q(n-1)) + f(n).  Fills q; f sets the length."""
    n_max = len(f)
    if n_max == 0:
        return OK, 0
    fl = f.tolist()
    ql = [0] * n_max
    ql[0] = 1
    status, where = OK, 0
    for n in range(2, n_max + 1):
        prev = ql[n - 2]
        # lookup index n - prev is in [1, n-1] iff prev is in [1, n-1]
        if prev < 1 or prev > n - 1:
            status, where = DIED, n
            break
        val = ql[n - prev - 1] + fl[n - 1]
        if val > INT64_MAX or val < INT64_MIN:
            status, where = OVERFLOW, n
            break
        ql[n - 1] = val
    done = n_max if status == OK else where - 1
    q[:done] = ql[:done]
    return status, where


def two_term_trace(q, n_init, start, d1, d2, outer):
    """q(n) = q(n - outer*d1 - q(n-d1)) + q(n - outer*d2 - q(n-d2)).

    q[j] holds the value at index start + j; the first n_init entries are
    the initial conditions, already stored.  Caller guarantees
    n_init >= max(d1, d2).
    """
    total = len(q)
    ql = q.tolist()
    status, where = OK, 0
    for j in range(n_init, total):
        n = start + j
        v1 = ql[j - d1]
        # arg = n - outer*d - v must lie in [start, n-1]
        if v1 < 1 - outer * d1 or v1 > n - outer * d1 - start:
            status, where = DIED, n
            break
        v2 = ql[j - d2]
        if v2 < 1 - outer * d2 or v2 > n - outer * d2 - start:
            status, where = DIED, n
            break
        t1 = ql[n - outer * d1 - v1 - start]
        t2 = ql[n - outer * d2 - v2 - start]
        val = t1 + t2
        if val > INT64_MAX or val < INT64_MIN:
            status, where = OVERFLOW, n
            break
        ql[j] = val
    done = total if status == OK else where - start
    q[n_init:done] = ql[n_init:done]
    return status, where
