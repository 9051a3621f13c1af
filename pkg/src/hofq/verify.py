"""One checkable verifier per closed-form identity of the recurrence family.

Each verifier recomputes the relevant trace with the engine and compares it
against the closed form up to a configurable N, using exact integer floors
throughout.  A failing verifier carries its first counterexample.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .engine import compute_q, compute_q_batch, compute_two_term, quasipolynomial_spec
from .exactfloor import (
    floor_gamma,
    floor_gamma_array,
    floor_gamma_sq_array,
    isqrt_array,
    staircase_value_array,
)
from .fspec import (
    FloorRatio,
    GammaSq,
    Linear,
    ModM,
    OneMinusDelta,
    Zeros,
    as_fspec,
    shift_f,
    slow_prefix_matrix,
)

DEFAULT_N = 10**6
DEFAULT_N_TWO_TERM = 10**5
CONTINUOUS_TOL = 1e-9
CONTINUOUS_EDGE = 1e-6


@dataclass
class VerifierResult:
    name: str
    checked_up_to: int
    ok: bool
    first_counterexample: tuple[int, int, int] | None = None  # (n, expected, actual)
    details: dict = field(default_factory=dict)

    def __str__(self):
        if self.ok:
            return f"PASS {self.name} (n <= {self.checked_up_to})"
        n, exp, act = self.first_counterexample
        return (f"FAIL {self.name} at n = {n}: expected {exp}, got {act} "
                f"(checked to {self.checked_up_to})")


def _first_mismatch(expected, actual, offset=1):
    bad = np.flatnonzero(np.asarray(expected) != np.asarray(actual))
    if not bad.size:
        return None
    i = int(bad[0])
    return (i + offset, int(np.asarray(expected)[i]), int(np.asarray(actual)[i]))


def _result(name, n, expected, actual, offset=1, details=None):
    mism = _first_mismatch(expected, actual, offset)
    return VerifierResult(name, n, mism is None, mism, details or {})


def verify_zeros_and_linear(n: int | None = None) -> VerifierResult:
    """Q(zeros) is constant 1 and Q(linear) is the identity."""
    n = n or DEFAULT_N
    q0 = compute_q(Zeros(), n)
    q1 = compute_q(Linear(), n)
    ident = np.arange(1, n + 1, dtype=np.int64)
    mism = (_first_mismatch(np.ones(n, dtype=np.int64), q0.q_values)
            or _first_mismatch(ident, q1.q_values))
    return VerifierResult("zeros-linear", n, mism is None, mism)


def verify_non_slow_closed_forms(n: int | None = None) -> VerifierResult:
    """Two non-slow drivers with closed-form traces: the even staircase
    2*floor((n-1)/2) gives odd-repeats, and the parity driver gives 1,2,1,2,..."""
    n = n or DEFAULT_N
    idx = np.arange(1, n + 1, dtype=np.int64)
    even = (idx % 2 == 0)
    qa = compute_q(FloorRatio(1, 2, shift=-1, scale=2), n)
    expected_a = np.where(even, idx - 1, idx)
    mism = _first_mismatch(expected_a, qa.q_values)
    if mism is None:
        qb = compute_q(ModM(2), n)
        expected_b = np.where(even, 2, 1)
        mism = _first_mismatch(expected_b, qb.q_values)
    return VerifierResult("non-slow", n, mism is None, mism)


def verify_mod_class(n: int | None = None, ms=(1, 2, 3, 5, 7)) -> VerifierResult:
    """Q((n-1) mod m)(n) = ((n-1) mod m) + 1 for each m."""
    n = n or DEFAULT_N
    per_m = {}
    mism = None
    for m in ms:
        trace = compute_q(ModM(m), n)
        expected = trace.f_values + 1
        this = _first_mismatch(expected, trace.q_values)
        per_m[m] = this is None
        if this is not None and mism is None:
            mism = this
    return VerifierResult("mod", n, mism is None, mism,
                          {"moduli": list(ms), "per_modulus_ok": per_m})


def verify_shift(n: int | None = None, fspec="floor:1/2",
                 exhaustive_m: int = 12) -> VerifierResult:
    """Prepending one zero to f delays the whole trace by one step:
    Q(shift(f))(k) = Q(f)(k-1).  Checked on one long trace and exhaustively
    over every slow prefix of length <= exhaustive_m."""
    n = n or DEFAULT_N
    spec = as_fspec(fspec)
    base = compute_q(spec, n)
    shifted = compute_q(shift_f(spec, 1), n)
    mism = None
    if shifted.q_values[0] != 1:
        mism = (1, 1, int(shifted.q_values[0]))
    else:
        mism = _first_mismatch(base.q_values[:-1], shifted.q_values[1:], offset=2)
    checked = 0
    if mism is None:
        for m in range(1, exhaustive_m + 1):
            f_mat = slow_prefix_matrix(m, 0, 1 << (m - 1))
            q_mat, died = compute_q_batch(f_mat)
            fs = np.zeros_like(f_mat)
            fs[:, 1:] = f_mat[:, :-1]
            qs_mat, died_s = compute_q_batch(fs)
            checked += len(f_mat)
            if died.any() or died_s.any():
                row = int(np.flatnonzero(died | died_s)[0])
                mism = (m, 0, int((died | died_s)[row]))
                break
            if m > 1 and not (qs_mat[:, 1:] == q_mat[:, :-1]).all():
                rows, cols = np.nonzero(qs_mat[:, 1:] != q_mat[:, :-1])
                r, c = int(rows[0]), int(cols[0])
                mism = (c + 2, int(q_mat[r, c]), int(qs_mat[r, c + 1]))
                break
    return VerifierResult("shift", n, mism is None, mism,
                          {"fspec": spec.spec_str(),
                           "exhaustive_m": exhaustive_m,
                           "exhaustive_sequences": checked})


def _wave_q(x):
    return x / 2.0 + (3.0 + np.cos(np.pi * x)) / 4.0


def _wave_f(x):
    u = 2.0 * x + 1.0 + np.cos(np.pi * x)
    return u / 8.0 - np.sin(np.pi * u / 4.0) / 4.0


def verify_quarter_floor(n: int | None = None, samples: int = 10**4,
                         seed: int = 20260810) -> VerifierResult:
    """Q(floor((n+2)/4))(n) = floor((n+2)/2); plus the real-valued solution
    x/2 + (3 + cos pi x)/4 of the same recurrence, checked on random reals."""
    n = n or DEFAULT_N
    trace = compute_q(FloorRatio(1, 4, shift=2), n)
    idx = np.arange(1, n + 1, dtype=np.int64)
    mism = _first_mismatch((idx + 2) // 2, trace.q_values)
    details: dict = {}
    if mism is None:
        rng = np.random.default_rng(seed)
        x = rng.uniform(1.0, 100.0, size=samples)
        inner = x - _wave_q(x - 1.0)
        # stay away from integer inner arguments (trig cancellation only;
        # the identity itself has no floors)
        keep = np.abs(inner - np.round(inner)) > CONTINUOUS_EDGE
        x, inner = x[keep], inner[keep]
        resid = _wave_q(x) - _wave_q(inner) - _wave_f(x)
        worst = float(np.max(np.abs(resid))) if len(x) else 0.0
        details = {"continuous_samples": int(len(x)),
                   "continuous_max_residual": worst,
                   "continuous_tolerance": CONTINUOUS_TOL}
        if worst >= CONTINUOUS_TOL:
            i = int(np.argmax(np.abs(resid)))
            mism = (int(math.floor(x[i])), 0, 1)
            details["continuous_worst_x"] = float(x[i])
    return VerifierResult("quarter", n, mism is None, mism, details)


def verify_sqrt_staircase(n: int | None = None) -> VerifierResult:
    """With the one-dip driver (0,1,1,...), the trace is the staircase where
    k occupies indices (k^2-k+2)/2 .. ((k+1)^2-(k+1)+2)/2 - 1; equivalently
    q(n) = floor(1/2 + sqrt(2n - 7/4))."""
    n = n or DEFAULT_N
    trace = compute_q(OneMinusDelta(1), n)
    top = int(staircase_value_array(np.array([n]))[0]) + 1
    runs = np.repeat(np.arange(1, top + 1, dtype=np.int64),
                     np.arange(1, top + 1))[:n]
    mism = _first_mismatch(runs, trace.q_values)
    details = {}
    if mism is None:
        closed = staircase_value_array(np.arange(1, n + 1, dtype=np.int64))
        mism = _first_mismatch(closed, trace.q_values)
        details["closed_form_checked"] = True
    return VerifierResult("staircase", n, mism is None, mism, details)


def verify_golden(n: int | None = None) -> VerifierResult:
    """Q(floor(gamma^2 n))(n) = 1 + floor(gamma (n-1)), all floors exact."""
    n = n or DEFAULT_N
    trace = compute_q(GammaSq(), n)
    expected = 1 + floor_gamma_array(np.arange(0, n, dtype=np.int64))
    mism = _first_mismatch(expected, trace.q_values)
    return VerifierResult("golden", n, mism is None, mism)


def verify_golden_identity(n: int | None = None,
                           oracle_samples: int = 1000) -> VerifierResult:
    """floor(gamma + gamma*floor(gamma^2 (n-1))) + floor(gamma^2 n)
    + floor(gamma^2 (n+1)) equals n - 1 for every n.

    Also classifies each n >= 2 by where {gamma^2 n} falls relative to the
    split points gamma^2 and gamma (computed by exact integer floor
    comparisons), asserts the three cases partition, and cross-checks the
    floor identity floor(gamma^2 n) = n - 1 - floor(gamma n) against an
    independent integer route.  n = 1 is the lone boundary point, where
    {gamma^2 n} equals gamma^2 exactly.
    """
    n = n or DEFAULT_N
    m = np.arange(0, n + 2, dtype=np.int64)
    fsq = floor_gamma_sq_array(m)  # fsq[j] = floor(gamma^2 j), fsq[0] = 0
    term1 = floor_gamma_array(fsq[0:n] + 1)  # floor(gamma*(floor(..)+1))
    theta = term1 + fsq[1:n + 1] + fsq[2:n + 2]
    mism = _first_mismatch(np.arange(0, n, dtype=np.int64), theta)
    details: dict = {}
    if mism is None:
        # fractional-part cases via pure floor comparisons (n >= 2):
        #   below gamma^2  <=> floor increments at n
        #   above gamma    <=> floor increments at n+1
        inc_prev = fsq[1:n + 1] > fsq[0:n]
        inc_next = fsq[2:n + 2] > fsq[1:n + 1]
        low = inc_prev[1:]
        high = inc_next[1:]
        mid = ~(low | high)
        overlap = int(np.count_nonzero(low & high))
        details["cases"] = {"low": int(np.count_nonzero(low)),
                            "mid": int(np.count_nonzero(mid)),
                            "high": int(np.count_nonzero(high))}
        details["case_overlap"] = overlap
        details["boundary_points"] = [1]  # {gamma^2 * 1} = gamma^2 exactly
        if overlap or int(np.count_nonzero(low | mid | high)) != n - 1:
            mism = (2, 0, 1)
        else:
            # independent route: floor(gamma^2 j) = (3j - isqrt(5 j^2) - 1)//2
            j = m[1:n + 1]
            other = (3 * j - isqrt_array(5 * j * j) - 1) // 2
            mism = _first_mismatch(other, fsq[1:n + 1])
            details["floor_identity_checked"] = mism is None
            if mism is None and oracle_samples:
                details["oracle_samples"] = _golden_oracle_check(
                    n, oracle_samples)
    return VerifierResult("golden-identity", n, mism is None, mism, details)


def _golden_oracle_check(n: int, samples: int) -> int:
    """Spot-check exact gamma floors against a 60-digit numeric oracle."""
    import mpmath

    rng = np.random.default_rng(5 * n + samples)
    picks = rng.integers(1, n + 1, size=samples)
    with mpmath.workdps(60):
        gamma = (mpmath.sqrt(5) - 1) / 2
        for j in picks:
            j = int(j)
            if int(mpmath.floor(gamma * j)) != floor_gamma(j):
                raise AssertionError(f"gamma-floor oracle mismatch at {j}")
    return samples


def verify_quasi_polynomial(n: int | None = None) -> VerifierResult:
    """The two-lookup trace with start values at 3..12 follows, past 12, the
    five-way polynomial schedule (2, n-4, 5, n-5, n-6) keyed by n mod 5."""
    n = n or DEFAULT_N_TWO_TERM
    if n <= 12:
        raise ValueError("need n > 12")
    trace = compute_two_term(quasipolynomial_spec(), n)
    if not trace.exists:
        return VerifierResult("quasipoly", n, False,
                              (trace.outcome.died_at, 0,
                               trace.outcome.lookup_index or 0))
    k = np.arange(13, n + 1, dtype=np.int64)
    r = trace.q_values[k - 3]
    mod = k % 5
    expected = np.select([mod == 0, mod == 1, mod == 2, mod == 3],
                         [2, k - 4, 5, k - 5], default=0) \
        + np.where(mod == 4, k - 6, 0)
    mism = _first_mismatch(expected, r, offset=13)
    return VerifierResult("quasipoly", n, mism is None, mism)


REGISTRY = {
    "zeros-linear": verify_zeros_and_linear,
    "non-slow": verify_non_slow_closed_forms,
    "mod": verify_mod_class,
    "shift": verify_shift,
    "quarter": verify_quarter_floor,
    "staircase": verify_sqrt_staircase,
    "golden": verify_golden,
    "golden-identity": verify_golden_identity,
    "quasipoly": verify_quasi_polynomial,
}


def run_suite(names=None, n: int | None = None,
              threads: int | None = None) -> list[VerifierResult]:
    """Run verifiers (all by default) in parallel; results in name order."""
    if names is None:
        names = list(REGISTRY)
    bad = [x for x in names if x not in REGISTRY]
    if bad:
        raise KeyError(f"unknown verifier(s): {', '.join(bad)}")
    workers = threads or min(len(names), 8)
    with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
        futures = [pool.submit(REGISTRY[name], n) for name in names]
        return [f.result() for f in futures]
