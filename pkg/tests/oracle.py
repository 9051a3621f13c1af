"""Independent reference implementations for cross-checking the engine.

Deliberately written as direct, unoptimized recursions from the defining
equations (python lists/dicts, no numpy, no shared code with the package).
"""


def oracle_q(f, n_max=None):
    """Direct recursion q(1)=1, q(n) = q(n - q(n-1)) + f(n).

    f is 1-based-as-list (f[0] is f(1)).  Returns (q_list, died_at, lookup):
    q_list holds terms before death, died_at/lookup are None when the trace
    completes.
    """
    n_max = len(f) if n_max is None else n_max
    q = [1]
    for n in range(2, n_max + 1):
        k = n - q[n - 2]
        if not (1 <= k <= n - 1):
            return q[: n - 1], n, k
        q.append(q[k - 1] + f[n - 1])
    return q, None, None


def oracle_two_term(offsets, init, start, outer, n_max):
    """Direct recursion with two nested lookups.

    Returns (values_dict, died_at, lookup); values_dict maps index -> value.
    """
    d1, d2 = offsets
    vals = {start + i: v for i, v in enumerate(init)}
    for n in range(start + len(init), n_max + 1):
        args = []
        for d in (d1, d2):
            a = n - outer * d - vals[n - d]
            if not (start <= a <= n - 1):
                return vals, n, a
            args.append(a)
        vals[n] = vals[args[0]] + vals[args[1]]
    return vals, None, None


def oracle_inverse_f(q):
    """f(1) = 0, f(n) = q(n) - q(n - q(n-1)); q is 1-based-as-list."""
    f = [0]
    for n in range(2, len(q) + 1):
        f.append(q[n - 1] - q[n - q[n - 2] - 1])
    return f
