"""Catalog of driving sequences f for the nested recurrence.

Every spec is an immutable value object that evaluates f(n) with exact
integer arithmetic (floors of rationals, of gamma-multiples, of fractional
power sums, ... are true mathematical floors, never float roundings).

Text grammar (parse_fspec / FSpec.spec_str round-trip):

    zeros                                f(n) = 0
    linear                               f(n) = n - 1
    floor:P/Q[:shift=R][:scale=C]        f(n) = C * floor((P*n + R) / Q)
    gamma2                               f(n) = floor(gamma^2 * n)
    one-minus-delta:N1                   f(n) = 0 at n = N1, else 1
    mod:M                                f(n) = (n - 1) mod M
    prefix:V1,V2,...                     explicit finite prefix
    bits:0110...                         the slow zero-start sequence whose
                                         successive differences are the bits
    shift:K:(SPEC)                       K leading zeros, then inner f(n-K)
    perturb:N1:+A:(SPEC)                 inner f plus A at the single index N1
    const-limit:sqrt:a=A                 f(n) = floor(A - A/sqrt(n))
    const-limit:exp:a=A,b=P/Q            f(n) = floor(A - A*exp(-b*n))
    const-limit:pow:a=A,b=P/Q            f(n) = floor(A - A/n^b)
    const-limit:clamp:alpha=P/Q,n0=N     f(n) = floor(alpha*n) clamped at n0
    fracpow:C1*n^E1+...+C0               f(n) = floor(sum of Ci * n^Ei)

Rational parameters accept "P/Q" or an integer; a decimal literal is
converted to the nearest fraction with denominator <= 10^9 (approximate,
for convenience only).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceeded, InvalidFSpec
from .exactfloor import (
    INT64_MAX,
    ceil_div_pow,
    ceil_div_sqrt,
    floor_gamma_sq,
    floor_gamma_sq_array,
    GAMMA_ARRAY_CAP,
    iroot,
)

ENUM_CAP = 24  # exhaustive slow-prefix enumeration: at most 2^23 sequences
_ALPHA_DENOM_CAP = 10**9  # decimal literals -> nearest fraction (approximate)
_FRACPOW_MAX_BITS = 4096


class FSpec:
    """Base class for driving-sequence specs."""

    def value(self, n: int) -> int:
        raise NotImplementedError

    def values(self, n_max: int) -> np.ndarray:
        """f(1..n_max) as an int64 array; raises InvalidFSpec if the spec
        cannot produce that many terms."""
        self._check_len(n_max)
        out = np.fromiter((self.value(n) for n in range(1, n_max + 1)),
                          dtype=np.int64, count=n_max)
        return out

    def spec_str(self) -> str:
        raise NotImplementedError

    def max_len(self) -> int | None:
        return None

    @property
    def is_slow_family(self) -> bool:
        """True when the spec is documented to produce a slow (property-D)
        zero-start sequence for every n."""
        return False

    def _check_len(self, n_max: int) -> None:
        if n_max < 1:
            raise ValueError("n_max must be >= 1")
        cap = self.max_len()
        if cap is not None and n_max > cap:
            raise InvalidFSpec(
                f"{self.spec_str()!r} yields at most {cap} terms, "
                f"{n_max} requested")

    def __str__(self) -> str:
        return self.spec_str()


@dataclass(frozen=True)
class Zeros(FSpec):
    def value(self, n):
        return 0

    def values(self, n_max):
        self._check_len(n_max)
        return np.zeros(n_max, dtype=np.int64)

    def spec_str(self):
        return "zeros"

    @property
    def is_slow_family(self):
        return True


@dataclass(frozen=True)
class Linear(FSpec):
    """f(n) = n - 1."""

    def value(self, n):
        return n - 1

    def values(self, n_max):
        self._check_len(n_max)
        return np.arange(n_max, dtype=np.int64)

    def spec_str(self):
        return "linear"

    @property
    def is_slow_family(self):
        return True


@dataclass(frozen=True)
class FloorRatio(FSpec):
    """f(n) = scale * floor((num*n + shift) / den).

    Plain floor(p*n/q) is the shift=0, scale=1 case; shift covers forms like
    floor((n+2)/4), scale covers forms like 2*floor((n-1)/2).
    """

    num: int
    den: int
    shift: int = 0
    scale: int = 1

    def __post_init__(self):
        if self.den < 1:
            raise InvalidFSpec("floor ratio: denominator must be >= 1")
        if self.num < 0:
            raise InvalidFSpec("floor ratio: numerator must be >= 0")
        if self.scale == 0:
            raise InvalidFSpec("floor ratio: scale must be nonzero")

    def value(self, n):
        return self.scale * ((self.num * n + self.shift) // self.den)

    def values(self, n_max):
        self._check_len(n_max)
        hi = abs(self.num) * n_max + abs(self.shift)
        if hi * abs(self.scale) > INT64_MAX:
            raise OverflowError("floor ratio values exceed int64")
        n = np.arange(1, n_max + 1, dtype=np.int64)
        return self.scale * ((self.num * n + self.shift) // self.den)

    def spec_str(self):
        s = f"floor:{self.num}/{self.den}"
        if self.shift:
            s += f":shift={self.shift}"
        if self.scale != 1:
            s += f":scale={self.scale}"
        return s

    @property
    def is_slow_family(self):
        return (0 <= self.num <= self.den and self.scale == 1
                and self.value(1) == 0)


@dataclass(frozen=True)
class GammaSq(FSpec):
    """f(n) = floor(gamma^2 * n), gamma = (sqrt(5)-1)/2."""

    def value(self, n):
        return floor_gamma_sq(n)

    def values(self, n_max):
        self._check_len(n_max)
        if n_max <= GAMMA_ARRAY_CAP:
            return floor_gamma_sq_array(np.arange(1, n_max + 1, dtype=np.int64))
        return super().values(n_max)

    def spec_str(self):
        return "gamma2"

    @property
    def is_slow_family(self):
        return True


@dataclass(frozen=True)
class OneMinusDelta(FSpec):
    """f(n) = 1 everywhere except a single 0 at index n1."""

    n1: int = 1

    def __post_init__(self):
        if self.n1 < 1:
            raise InvalidFSpec("one-minus-delta: index must be >= 1")

    def value(self, n):
        return 0 if n == self.n1 else 1

    def values(self, n_max):
        self._check_len(n_max)
        out = np.ones(n_max, dtype=np.int64)
        if self.n1 <= n_max:
            out[self.n1 - 1] = 0
        return out

    def spec_str(self):
        return f"one-minus-delta:{self.n1}"

    @property
    def is_slow_family(self):
        return self.n1 == 1


@dataclass(frozen=True)
class ModM(FSpec):
    """f(n) = (n - 1) mod m.  Not slow for m >= 2, but Q(f) still exists."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise InvalidFSpec("mod: modulus must be >= 1")

    def value(self, n):
        return (n - 1) % self.m

    def values(self, n_max):
        self._check_len(n_max)
        return np.arange(n_max, dtype=np.int64) % self.m

    def spec_str(self):
        return f"mod:{self.m}"

    @property
    def is_slow_family(self):
        return self.m == 1


@dataclass(frozen=True)
class Prefix(FSpec):
    """Explicit finite prefix."""

    prefix: tuple[int, ...]

    def __post_init__(self):
        if not self.prefix:
            raise InvalidFSpec("prefix: need at least one value")
        object.__setattr__(self, "prefix", tuple(int(v) for v in self.prefix))

    def value(self, n):
        if n > len(self.prefix):
            raise InvalidFSpec(
                f"prefix spec has {len(self.prefix)} terms, index {n} requested")
        return self.prefix[n - 1]

    def values(self, n_max):
        self._check_len(n_max)
        return np.array(self.prefix[:n_max], dtype=np.int64)

    def max_len(self):
        return len(self.prefix)

    def spec_str(self):
        return "prefix:" + ",".join(str(v) for v in self.prefix)


@dataclass(frozen=True)
class DiffBits(FSpec):
    """The unique slow zero-start sequence whose difference string is `bits`.

    bits are stored as a bytes object of 0/1 values; a length-m prefix needs
    m-1 bits.
    """

    bits: bytes

    def __post_init__(self):
        raw = self.bits
        if isinstance(raw, str):
            raw = bytes(int(c) for c in raw)
        elif not isinstance(raw, bytes):
            raw = bytes(int(b) for b in raw)
        if any(b not in (0, 1) for b in raw):
            raise InvalidFSpec("bits: differences must be 0 or 1")
        object.__setattr__(self, "bits", raw)

    def value(self, n):
        if n > len(self.bits) + 1:
            raise InvalidFSpec(
                f"bit spec has {len(self.bits) + 1} terms, index {n} requested")
        return sum(self.bits[: n - 1])

    def values(self, n_max):
        self._check_len(n_max)
        out = np.zeros(n_max, dtype=np.int64)
        if n_max > 1:
            arr = np.frombuffer(self.bits, dtype=np.uint8)[: n_max - 1]
            np.cumsum(arr, dtype=np.int64, out=out[1:])
        return out

    def max_len(self):
        return len(self.bits) + 1

    def spec_str(self):
        return "bits:" + "".join(str(b) for b in self.bits)

    @property
    def is_slow_family(self):
        return True


@dataclass(frozen=True)
class Shifted(FSpec):
    """k leading zeros, then the inner sequence: f'(n) = f(n-k) for n > k."""

    k: int
    inner: FSpec

    def __post_init__(self):
        if self.k < 1:
            raise InvalidFSpec("shift: k must be >= 1")

    def value(self, n):
        return 0 if n <= self.k else self.inner.value(n - self.k)

    def values(self, n_max):
        self._check_len(n_max)
        if n_max <= self.k:
            return np.zeros(n_max, dtype=np.int64)
        head = np.zeros(self.k, dtype=np.int64)
        return np.concatenate([head, self.inner.values(n_max - self.k)])

    def max_len(self):
        cap = self.inner.max_len()
        return None if cap is None else cap + self.k

    def spec_str(self):
        return f"shift:{self.k}:({self.inner.spec_str()})"

    @property
    def is_slow_family(self):
        return self.inner.is_slow_family


@dataclass(frozen=True)
class Perturbed(FSpec):
    """Inner sequence with `amount` added at the single index `at`."""

    inner: FSpec
    at: int
    amount: int

    def __post_init__(self):
        if self.at < 1:
            raise InvalidFSpec("perturb: index must be >= 1")

    def value(self, n):
        v = self.inner.value(n)
        return v + self.amount if n == self.at else v

    def values(self, n_max):
        self._check_len(n_max)
        out = self.inner.values(n_max)
        if self.at <= n_max:
            out[self.at - 1] += self.amount
        return out

    def max_len(self):
        return self.inner.max_len()

    def spec_str(self):
        return f"perturb:{self.at}:{self.amount:+d}:({self.inner.spec_str()})"


_CONST_LIMIT_FORMS = ("sqrt", "exp", "pow", "clamp")


@dataclass(frozen=True)
class ConstLimit(FSpec):
    """Sequences approaching a constant (or clamped-linear) limit.

    Forms: sqrt  f(n) = floor(a - a/sqrt(n))
           exp   f(n) = floor(a - a*exp(-b*n))
           pow   f(n) = floor(a - a/n^b)
           clamp f(n) = floor(alpha*n) for n < n0, else floor(alpha*n0)

    Materializing values() checks the slow/zero-start property of the
    generated prefix and rejects parameter choices that violate it.
    """

    form: str
    a: int = 0
    b: Fraction | None = None
    alpha: Fraction | None = None
    n0: int | None = None

    def __post_init__(self):
        if self.form not in _CONST_LIMIT_FORMS:
            raise InvalidFSpec(f"const-limit: unknown form {self.form!r}")
        if self.form == "clamp":
            if self.alpha is None or self.n0 is None:
                raise InvalidFSpec("const-limit clamp: need alpha and n0")
            object.__setattr__(self, "alpha", Fraction(self.alpha))
            if not (0 <= self.alpha < 1):
                raise InvalidFSpec("const-limit clamp: need 0 <= alpha < 1")
            if self.n0 < 1:
                raise InvalidFSpec("const-limit clamp: need n0 >= 1")
        else:
            if self.a < 1:
                raise InvalidFSpec("const-limit: need a >= 1")
            if self.form in ("exp", "pow"):
                if self.b is None:
                    raise InvalidFSpec(f"const-limit {self.form}: need b")
                object.__setattr__(self, "b", Fraction(self.b))
                if self.b <= 0:
                    raise InvalidFSpec("const-limit: need b > 0")
                if self.form == "pow" and (self.b.numerator > 64
                                           or self.b.denominator > 64):
                    raise InvalidFSpec("const-limit pow: b out of range")

    def value(self, n):
        if self.form == "sqrt":
            return self.a - ceil_div_sqrt(self.a, n)
        if self.form == "pow":
            return self.a - ceil_div_pow(self.a, n, self.b.numerator,
                                         self.b.denominator)
        if self.form == "exp":
            return self.a - _ceil_exp_decay(self.a, self.b, n)
        m = min(n, self.n0)
        return (self.alpha.numerator * m) // self.alpha.denominator

    def values(self, n_max):
        self._check_len(n_max)
        if self.form == "sqrt":
            out = self._sqrt_values(n_max)
        elif self.form == "clamp":
            n = np.minimum(np.arange(1, n_max + 1, dtype=np.int64), self.n0)
            out = (self.alpha.numerator * n) // self.alpha.denominator
        else:
            out = np.fromiter((self.value(n) for n in range(1, n_max + 1)),
                              dtype=np.int64, count=n_max)
        _require_slow(out, self)
        return out

    def _sqrt_values(self, n_max):
        n = np.arange(1, n_max + 1, dtype=np.int64)
        aa = self.a * self.a
        if aa > INT64_MAX:
            raise OverflowError("const-limit sqrt: a^2 exceeds int64")
        from .exactfloor import isqrt_array
        k = isqrt_array(aa // n)
        exact = k * k * n == aa
        return self.a - k - (~exact).astype(np.int64)

    def spec_str(self):
        if self.form == "clamp":
            return f"const-limit:clamp:alpha={self.alpha},n0={self.n0}"
        if self.form == "sqrt":
            return f"const-limit:sqrt:a={self.a}"
        return f"const-limit:{self.form}:a={self.a},b={self.b}"

    @property
    def is_slow_family(self):
        return True


def _ceil_exp_decay(a: int, b: Fraction, n: int) -> int:
    """ceil(a * exp(-b*n)) exactly; the argument is transcendental for
    n >= 1, so escalating precision always separates it from integers."""
    import mpmath

    for dps in (40, 160, 640):
        with mpmath.workdps(dps):
            x = a * mpmath.exp(mpmath.mpf(-b.numerator * n) / b.denominator)
            fl = int(mpmath.floor(x))
            frac = x - fl
            eps = mpmath.mpf(10) ** (-dps + 8)
            if frac > eps and frac < 1 - eps:
                return fl + 1
            if x < eps:  # deep tail: 0 < x < 1
                return 1
    raise InvalidFSpec("const-limit exp: cannot certify floor")


@dataclass(frozen=True)
class FracPowerSum(FSpec):
    """f(n) = floor(sum of c_i * n^(e_i)) with rational c_i and e_i in [0, 1).

    Floors are certified with scaled-integer root brackets: each n^(e_i) is
    bracketed between consecutive multiples of 2^-bits via an integer root,
    exactly when the root is rational.  The bracket is narrowed until both
    ends share a floor.
    """

    terms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        merged: dict[Fraction, Fraction] = {}
        order: list[Fraction] = []
        for c, e in self.terms:
            c, e = Fraction(c), Fraction(e)
            if not (0 <= e < 1):
                raise InvalidFSpec("fracpow: exponents must be in [0, 1)")
            if e.denominator > 64:
                raise InvalidFSpec("fracpow: exponent denominator too large")
            if e not in merged:
                merged[e] = c
                order.append(e)
            else:
                merged[e] += c
        terms = tuple((merged[e], e) for e in order if merged[e] != 0)
        if not terms:
            terms = ((Fraction(0), Fraction(0)),)
        object.__setattr__(self, "terms", terms)
        lcm = math.lcm(*(c.denominator for c, _ in terms))
        const = sum((c for c, e in terms if e == 0), Fraction(0))
        irr = tuple((c.numerator * (lcm // c.denominator),
                     e.numerator, e.denominator)
                    for c, e in terms if e != 0)
        object.__setattr__(self, "_denom_lcm", lcm)
        object.__setattr__(self, "_const_scaled", const.numerator
                           * (lcm // const.denominator))
        object.__setattr__(self, "_irr", irr)

    def _floor_at(self, n, bits):
        lcm = self._denom_lcm
        lo = hi = self._const_scaled << bits
        for m_i, p, q in self._irr:
            root, exact = iroot((n**p) << (bits * q), q)
            r_hi = root if exact else root + 1
            if m_i >= 0:
                lo += m_i * root
                hi += m_i * r_hi
            else:
                lo += m_i * r_hi
                hi += m_i * root
        den = lcm << bits
        flo, fhi = lo // den, hi // den
        return int(flo) if flo == fhi else None

    def value(self, n):
        if n < 1:
            raise ValueError("n must be >= 1")
        if n == 1 or not self._irr:  # every n^e is 1: the sum is rational
            total = sum((c for c, _ in self.terms), Fraction(0))
            return math.floor(total)
        bits = 48
        while bits <= _FRACPOW_MAX_BITS:
            got = self._floor_at(n, bits)
            if got is not None:
                return got
            bits *= 2
        raise InvalidFSpec(
            "fracpow: cannot certify floor (value is an exact integer "
            "through irrational cancellation)")

    def values(self, n_max):
        """Vectorized evaluation: float64 carries a certified error budget,
        so its floor is trusted except within eps of a boundary, where the
        exact integer path decides."""
        self._check_len(n_max)
        n = np.arange(1, n_max + 1, dtype=np.float64)
        total = np.zeros(n_max)
        magnitude = np.zeros(n_max)
        for c, e in self.terms:
            term = float(c) * n ** float(e)
            total += term
            magnitude += np.abs(term)
        fl = np.floor(total)
        frac = total - fl
        # per-term float64 error is a few ulp; 1e-13 relative is ~450 ulp
        eps = 1e-13 * magnitude + 1e-12
        out = fl.astype(np.int64)
        for i in np.flatnonzero((frac < eps) | (frac > 1 - eps)):
            out[i] = self.value(int(i) + 1)
        _require_slow(out, self)
        return out

    def spec_str(self):
        parts = []
        for c, e in self.terms:
            if e == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"n^{e}")
            else:
                parts.append(f"{c}*n^{e}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return "fracpow:" + out

    @property
    def is_slow_family(self):
        return True


def _require_slow(values: np.ndarray, spec: FSpec) -> None:
    """Generation-time check for specs documented as slow zero-start."""
    if values[0] != 0:
        raise InvalidFSpec(f"{spec.spec_str()!r}: f(1) = {values[0]}, not 0")
    if len(values) > 1:
        d = np.diff(values)
        bad = np.flatnonzero((d < 0) | (d > 1))
        if bad.size:
            i = int(bad[0]) + 1
            raise InvalidFSpec(
                f"{spec.spec_str()!r}: difference f({i + 1}) - f({i}) = "
                f"{int(d[bad[0]])} is outside {{0, 1}}")


# ---------------------------------------------------------------------------
# operations


def eval_f(spec: FSpec, n: int) -> int:
    """Exact f(n) for a spec (n >= 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return spec.value(n)


def shift_f(spec: FSpec, k: int) -> FSpec:
    """Spec generating k leading zeros followed by the inner sequence."""
    if k < 1:
        raise ValueError("shift_f: k must be >= 1")
    if isinstance(spec, Zeros):
        return spec
    if isinstance(spec, Shifted):
        return Shifted(spec.k + k, spec.inner)
    return Shifted(k, spec)


def enumerate_slow_prefixes(m: int, cap: int = ENUM_CAP):
    """Yield all 2^(m-1) slow zero-start prefixes of length m, in
    lexicographic difference-bitstring order."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > cap:
        raise CapExceeded(f"enumeration cap is m <= {cap}, got {m}")
    nbits = m - 1
    for mask in range(1 << nbits):
        f = [0] * m
        acc = 0
        for i in range(nbits):
            acc += (mask >> (nbits - 1 - i)) & 1
            f[i + 1] = acc
        yield tuple(f)


def slow_prefix_matrix(m: int, lo: int, hi: int) -> np.ndarray:
    """Rows lo..hi-1 of the difference-bitstring enumeration of length-m slow
    prefixes, as an (hi-lo, m) int64 matrix.  Row order matches
    enumerate_slow_prefixes."""
    if m < 1:
        raise ValueError("m must be >= 1")
    nbits = m - 1
    if not (0 <= lo <= hi <= 1 << nbits):
        raise ValueError("bad block range")
    masks = np.arange(lo, hi, dtype=np.int64)
    out = np.zeros((hi - lo, m), dtype=np.int64)
    if nbits:
        shifts = np.arange(nbits - 1, -1, -1, dtype=np.int64)
        bits = (masks[:, None] >> shifts[None, :]) & 1
        np.cumsum(bits, axis=1, out=out[:, 1:])
    return out


def floor_alpha_interval(prefix) -> tuple[Fraction, Fraction] | None:
    """Feasible half-open interval [lo, hi) of alpha with
    floor(alpha*n) = prefix[n-1] for all n, or None if empty.

    Witnesses that some slow prefixes (e.g. (0,0,1,2)) cannot come from any
    floor(alpha*n) spec."""
    lo, hi = Fraction(0), None
    for i, v in enumerate(prefix):
        n = i + 1
        lo = max(lo, Fraction(v, n))
        top = Fraction(v + 1, n)
        hi = top if hi is None else min(hi, top)
        if hi <= lo:
            return None
    return lo, hi


# ---------------------------------------------------------------------------
# grammar


def as_fspec(obj) -> FSpec:
    """Coerce an FSpec, grammar string, or explicit integer sequence."""
    if isinstance(obj, FSpec):
        return obj
    if isinstance(obj, str):
        return parse_fspec(obj)
    if isinstance(obj, (bytes, bytearray)):
        raise TypeError("ambiguous bytes; pass DiffBits(...) or a list")
    try:
        return Prefix(tuple(int(v) for v in obj))
    except TypeError:
        raise TypeError(f"cannot interpret {obj!r} as an f-spec") from None


def _parse_rational(text: str) -> Fraction:
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        if "." in text or "e" in text.lower():
            return Fraction(text).limit_denominator(_ALPHA_DENOM_CAP)
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidFSpec(f"bad rational {text!r}") from exc


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise InvalidFSpec(f"bad integer {text!r}") from exc


def _split_inner(text: str, head: str) -> tuple[list[str], str]:
    """Split 'a:b:(inner)' into leading fields and the parenthesized tail."""
    if not text.endswith(")") or "(" not in text:
        raise InvalidFSpec(f"{head}: expected trailing (inner-spec)")
    open_idx = text.index("(")
    fields = [s for s in text[:open_idx].split(":") if s != ""]
    inner = text[open_idx + 1:-1]
    return fields, inner


def _parse_kv(text: str, head: str) -> dict[str, str]:
    out = {}
    for part in text.split(","):
        if "=" not in part:
            raise InvalidFSpec(f"{head}: expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


_FRACPOW_TERM = re.compile(r"^([+-]?(?:[0-9][0-9/.]*)?)(?:\*?n\^([0-9/]+))?$")


def _parse_fracpow(expr: str) -> FracPowerSum:
    if not expr:
        raise InvalidFSpec("fracpow: empty expression")
    compact = expr.replace(" ", "")
    tokens = re.findall(r"[+-]?[^+-]+", compact)
    if "".join(tokens) != compact:
        raise InvalidFSpec(f"fracpow: cannot parse {expr!r}")
    terms = []
    for tok in tokens:
        m = _FRACPOW_TERM.match(tok)
        if not m or (not m.group(1) and m.group(2) is None):
            raise InvalidFSpec(f"fracpow: bad term {tok!r}")
        coeff_text, expo_text = m.group(1), m.group(2)
        if coeff_text in ("", "+", "-") and expo_text is None:
            raise InvalidFSpec(f"fracpow: bad term {tok!r}")
        if coeff_text in (None, "", "+", "-"):
            coeff = Fraction(-1 if coeff_text == "-" else 1)
        else:
            sign = 1
            if coeff_text[0] in "+-":
                sign = -1 if coeff_text[0] == "-" else 1
                coeff_text = coeff_text[1:]
            coeff = sign * _parse_rational(coeff_text)
        expo = _parse_rational(expo_text) if expo_text else Fraction(0)
        terms.append((coeff, expo))
    return FracPowerSum(tuple(terms))


def parse_fspec(text: str) -> FSpec:
    """Parse the grammar in the module docstring."""
    text = text.strip()
    head, _, rest = text.partition(":")
    head = head.lower()
    if head == "zeros":
        return Zeros()
    if head == "linear":
        return Linear()
    if head == "gamma2":
        return GammaSq()
    if head == "floor":
        fields = rest.split(":")
        if not fields or not fields[0]:
            raise InvalidFSpec("floor: expected floor:P/Q")
        ratio = _parse_rational(fields[0])
        shift, scale = 0, 1
        for extra in fields[1:]:
            k, _, v = extra.partition("=")
            if k == "shift":
                shift = _parse_int(v)
            elif k == "scale":
                scale = _parse_int(v)
            else:
                raise InvalidFSpec(f"floor: unknown option {extra!r}")
        return FloorRatio(ratio.numerator, ratio.denominator, shift, scale)
    if head == "one-minus-delta":
        return OneMinusDelta(_parse_int(rest))
    if head == "mod":
        return ModM(_parse_int(rest))
    if head == "prefix":
        if not rest:
            raise InvalidFSpec("prefix: expected comma-separated values")
        return Prefix(tuple(_parse_int(v) for v in rest.split(",")))
    if head == "bits":
        if not re.fullmatch(r"[01]*", rest):
            raise InvalidFSpec("bits: expected a string of 0/1")
        return DiffBits(rest)
    if head == "shift":
        fields, inner = _split_inner(rest, "shift")
        if len(fields) != 1:
            raise InvalidFSpec("shift: expected shift:K:(SPEC)")
        return Shifted(_parse_int(fields[0]), parse_fspec(inner))
    if head == "perturb":
        fields, inner = _split_inner(rest, "perturb")
        if len(fields) != 2:
            raise InvalidFSpec("perturb: expected perturb:N1:+A:(SPEC)")
        return Perturbed(parse_fspec(inner), _parse_int(fields[0]),
                         _parse_int(fields[1]))
    if head == "const-limit":
        form, _, params = rest.partition(":")
        kv = _parse_kv(params, "const-limit")
        if form == "sqrt":
            return ConstLimit("sqrt", a=_parse_int(kv.pop("a", "0")))
        if form in ("exp", "pow"):
            return ConstLimit(form, a=_parse_int(kv.pop("a", "0")),
                              b=_parse_rational(kv.pop("b", "0")))
        if form == "clamp":
            return ConstLimit("clamp", alpha=_parse_rational(kv.pop("alpha", "0")),
                              n0=_parse_int(kv.pop("n0", "0")))
        raise InvalidFSpec(f"const-limit: unknown form {form!r}")
    if head == "fracpow":
        return _parse_fracpow(rest)
    raise InvalidFSpec(f"unknown f-spec {text!r}")
