from fractions import Fraction

import mpmath
import numpy as np
import pytest

from hofq.errors import CapExceeded, InvalidFSpec
from hofq.fspec import (
    ConstLimit,
    DiffBits,
    FloorRatio,
    FracPowerSum,
    GammaSq,
    Linear,
    ModM,
    OneMinusDelta,
    Perturbed,
    Prefix,
    Shifted,
    Zeros,
    as_fspec,
    enumerate_slow_prefixes,
    eval_f,
    floor_alpha_interval,
    parse_fspec,
    shift_f,
    slow_prefix_matrix,
)

ROUND_TRIP = [
    "zeros",
    "linear",
    "floor:1/2",
    "floor:1/4:shift=2",
    "floor:1/2:shift=-1:scale=2",
    "gamma2",
    "one-minus-delta:1",
    "mod:5",
    "prefix:0,2,2",
    "bits:0110",
    "shift:3:(floor:1/2)",
    "shift:2:(perturb:16:+1:(floor:1/2))",
    "perturb:16:+1:(floor:1/2)",
    "perturb:9:-2:(zeros)",
    "const-limit:sqrt:a=5",
    "const-limit:exp:a=4,b=1/8",
    "const-limit:pow:a=4,b=1/2",
    "const-limit:clamp:alpha=1/2,n0=100",
    "fracpow:3/4*n^1/2+3/32*n^1/4+5/128",
    "fracpow:1/2*n^1/2-1/8*n^1/4",
]


@pytest.mark.parametrize("text", ROUND_TRIP)
def test_grammar_round_trip(text):
    spec = parse_fspec(text)
    printed = spec.spec_str()
    again = parse_fspec(printed)
    assert again == spec
    assert again.spec_str() == printed


def test_parse_decimal_alpha_is_approximate():
    spec = parse_fspec("floor:0.25")
    assert (spec.num, spec.den) == (1, 4)


@pytest.mark.parametrize("bad", [
    "nope", "floor:", "floor:1/0", "bits:012", "mod:x", "prefix:",
    "shift:1:floor:1/2", "const-limit:wavy:a=1", "fracpow:", "fracpow:++",
    "fracpow:n^3/2",  # exponent outside [0, 1)
])
def test_parse_errors(bad):
    with pytest.raises(InvalidFSpec):
        parse_fspec(bad)


def test_eval_examples():
    assert eval_f(FloorRatio(1, 2), 7) == 3
    assert [eval_f(GammaSq(), n) for n in range(1, 6)] == [0, 0, 1, 1, 1]
    assert [eval_f(OneMinusDelta(1), n) for n in (1, 2, 3)] == [0, 1, 1]
    assert [eval_f(ModM(3), n) for n in range(1, 7)] == [0, 1, 2, 0, 1, 2]
    assert [eval_f(Linear(), n) for n in (1, 2, 5)] == [0, 1, 4]
    with pytest.raises(ValueError):
        eval_f(Zeros(), 0)


def test_values_match_scalar_eval():
    specs = [parse_fspec(t) for t in ROUND_TRIP]
    for spec in specs:
        cap = spec.max_len()
        n = min(cap or 50, 50)
        arr = spec.values(n)
        assert arr.dtype == np.int64
        assert list(arr) == [spec.value(k) for k in range(1, n + 1)]


def test_even_staircase_spec():
    # 2*floor((n-1)/2) = (0, 0, 2, 2, 4, 4, ...)
    spec = FloorRatio(1, 2, shift=-1, scale=2)
    assert list(spec.values(8)) == [0, 0, 2, 2, 4, 4, 6, 6]
    assert not spec.is_slow_family


def test_prefix_and_bits_length_limits():
    with pytest.raises(InvalidFSpec):
        Prefix((0, 1, 1)).values(4)
    with pytest.raises(InvalidFSpec):
        DiffBits("01").values(4)
    assert list(DiffBits("01").values(3)) == [0, 0, 1]


def test_diffbits_round_trip_differences():
    rng = np.random.default_rng(3)
    for _ in range(20):
        bits = rng.integers(0, 2, size=40, dtype=np.uint8)
        seq = DiffBits(bits.tobytes()).values(41)
        assert (np.diff(seq) == bits).all()
        assert seq[0] == 0


def test_shift_operation():
    assert shift_f(Zeros(), 5) == Zeros()
    assert list(shift_f(Linear(), 1).values(4)) == [0, 0, 1, 2]
    nested = shift_f(shift_f(ModM(3), 2), 1)
    assert isinstance(nested, Shifted) and nested.k == 3
    with pytest.raises(ValueError):
        shift_f(Linear(), 0)


def test_enumeration_counts_and_members():
    assert list(enumerate_slow_prefixes(1)) == [(0,)]
    f4 = list(enumerate_slow_prefixes(4))
    assert len(f4) == 8
    with_final_1 = [f for f in f4 if f[3] == 1]
    assert with_final_1 == [(0, 0, 0, 1), (0, 0, 1, 1), (0, 1, 1, 1)]
    assert len(list(enumerate_slow_prefixes(8))) == 128
    # lexicographic difference-bitstring order
    diffs = ["".join(str(b - a) for a, b in zip(f, f[1:])) for f in f4]
    assert diffs == sorted(diffs)
    with pytest.raises(CapExceeded):
        next(enumerate_slow_prefixes(25))


def test_slow_prefix_matrix_matches_enumeration():
    for m in (1, 2, 5, 9):
        mat = slow_prefix_matrix(m, 0, 1 << (m - 1))
        assert [tuple(int(v) for v in row) for row in mat] == \
            list(enumerate_slow_prefixes(m))
    part = slow_prefix_matrix(6, 10, 20)
    full = slow_prefix_matrix(6, 0, 32)
    assert (part == full[10:20]).all()


def test_floor_ratio_slow_whenever_num_le_den():
    n = np.arange(1, 10**4 + 1, dtype=np.int64)
    for den in range(1, 51):
        for num in range(0, den + 1):
            vals = (num * n) // den
            d = np.diff(vals)
            assert ((d == 0) | (d == 1)).all(), (num, den)
            # zero start needs num < den; num == den gives f(1) = 1
            assert FloorRatio(num, den).is_slow_family == (num < den)


def test_alpha_interval_witness():
    # (0,0,1,2) is reachable by difference bits but by no floor(alpha*n)
    assert list(DiffBits("011").values(4)) == [0, 0, 1, 2]
    assert floor_alpha_interval((0, 0, 1, 2)) is None
    lo, hi = floor_alpha_interval((0, 0, 1))
    assert lo == Fraction(1, 3) and hi == Fraction(1, 2)
    lo, hi = floor_alpha_interval((0, 1, 1))
    assert Fraction(1, 2) <= lo < hi


def test_slow_family_claims_hold_on_long_prefixes():
    claimed = [
        Zeros(), Linear(), FloorRatio(1, 2), FloorRatio(1, 4, shift=2),
        GammaSq(), OneMinusDelta(1), DiffBits(bytes([0, 1] * 5000)),
        ConstLimit("sqrt", a=5), ConstLimit("clamp", alpha=Fraction(1, 2), n0=99),
        FracPowerSum(((Fraction(3, 4), Fraction(1, 2)),
                      (Fraction(3, 32), Fraction(1, 4)),
                      (Fraction(5, 128), Fraction(0)))),
    ]
    for spec in claimed:
        assert spec.is_slow_family, spec.spec_str()
        n = min(spec.max_len() or 10**5, 10**5)
        vals = spec.values(n)
        d = np.diff(vals)
        assert vals[0] == 0 and ((d == 0) | (d == 1)).all(), spec.spec_str()


def test_const_limit_rejects_non_slow_parameters():
    with pytest.raises(InvalidFSpec):
        ConstLimit("exp", a=10, b=Fraction(5)).values(10)  # f(1) = 9
    with pytest.raises(InvalidFSpec):
        ConstLimit("sqrt", a=0)
    with pytest.raises(InvalidFSpec):
        ConstLimit("clamp", alpha=Fraction(3, 2), n0=5)


def test_const_limit_values_against_oracle():
    with mpmath.workdps(60):
        for text, fn in [
            ("const-limit:sqrt:a=5",
             lambda n: 5 - 5 / mpmath.sqrt(n)),
            ("const-limit:exp:a=4,b=1/8",
             lambda n: 4 - 4 * mpmath.exp(mpmath.mpf(-n) / 8)),
            ("const-limit:pow:a=4,b=1/2",
             lambda n: 4 - 4 / mpmath.power(n, mpmath.mpf(1) / 2)),
        ]:
            spec = parse_fspec(text)
            got = spec.values(400)
            want = [int(mpmath.floor(fn(n))) for n in range(1, 401)]
            assert list(got) == want, text


def test_fracpow_against_high_precision_oracle():
    spec = parse_fspec("fracpow:3/4*n^1/2+3/32*n^1/4+5/128")
    got = spec.values(2000)
    with mpmath.workdps(60):
        for n in list(range(1, 2001, 97)) + [16, 81, 256, 625, 1296]:
            x = (mpmath.mpf(3) / 4 * mpmath.sqrt(n)
                 + mpmath.mpf(3) / 32 * mpmath.power(n, mpmath.mpf(1) / 4)
                 + mpmath.mpf(5) / 128)
            assert int(got[n - 1]) == int(mpmath.floor(x)), n


def test_fracpow_exact_integer_cancellation_is_rejected():
    # n^(3/4) - 2*n^(1/4) is exactly 0 at n = 4: the floor cannot be
    # certified by bracketing and the spec is refused loudly
    spec = FracPowerSum(((Fraction(1), Fraction(3, 4)),
                         (Fraction(-2), Fraction(1, 4))))
    with pytest.raises(InvalidFSpec):
        spec.value(4)


def test_fracpow_vectorized_matches_exact_path():
    spec = parse_fspec("fracpow:3/4*n^1/2+3/32*n^1/4+5/128")
    fast = spec.values(3000)
    exact = [spec.value(n) for n in range(1, 3001)]
    assert list(fast) == exact


def test_fracpow_merges_duplicate_exponents():
    spec = FracPowerSum(((Fraction(1, 2), Fraction(1, 2)),
                         (Fraction(1, 2), Fraction(1, 2))))
    assert spec.terms == ((Fraction(1), Fraction(1, 2)),)
    assert spec.value(9) == 3


def test_perturbed_values():
    base = FloorRatio(1, 2)
    spec = Perturbed(base, 16, 1)
    vals = spec.values(20)
    assert vals[15] == base.value(16) + 1
    other = np.delete(vals, 15)
    assert (other == np.delete(base.values(20), 15)).all()
    # perturbation beyond the horizon is a no-op
    assert (Perturbed(base, 100, 7).values(20) == base.values(20)).all()


def test_as_fspec_coercions():
    assert as_fspec("zeros") == Zeros()
    assert as_fspec([0, 2, 2]) == Prefix((0, 2, 2))
    spec = GammaSq()
    assert as_fspec(spec) is spec
    with pytest.raises(TypeError):
        as_fspec(b"\x00\x01")
