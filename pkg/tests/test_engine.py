import numpy as np
import pytest

from hofq import engine
from hofq.engine import (
    compute_c,
    compute_f_from_q,
    compute_q,
    compute_q_batch,
    compute_two_term,
    hofstadter_spec,
    is_slow,
    quasipolynomial_spec,
    tanny_spec,
    v_variant_spec,
    TwoTermSpec,
)
from hofq.errors import InvalidFSpec, InvalidQ
from hofq.fspec import DiffBits, ModM, Zeros, enumerate_slow_prefixes

from oracle import oracle_inverse_f, oracle_q, oracle_two_term


def test_all_zero_driver_gives_constant_trace():
    t = compute_q(Zeros(), 10)
    assert list(t.q_values) == [1] * 10
    assert t.exists and t.outcome.checked_to == 10


def test_one_dip_driver_prefix():
    t = compute_q("one-minus-delta:1", 16)
    assert list(t.q_values) == [1, 2, 2, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 5, 6]


def test_death_on_jump_by_two():
    t = compute_q([0, 2, 2], 3)
    assert not t.exists
    assert t.outcome.died_at == 3 and t.outcome.lookup_index == 0
    assert list(t.q_values) == [1, 3]
    # the reported lookup is n - q(n-1) and is outside [1, n-1]
    k = t.outcome.died_at - t.q(t.outcome.died_at - 1)
    assert k == t.outcome.lookup_index and not (1 <= k <= t.outcome.died_at - 1)


def test_alternating_driver_prefix():
    t = compute_q(ModM(2), 8)
    assert list(t.q_values) == [1, 2, 1, 2, 1, 2, 1, 2]


def test_f1_must_be_zero():
    with pytest.raises(InvalidFSpec):
        compute_q([1, 1, 1], 3)
    with pytest.raises(InvalidFSpec):
        compute_q("one-minus-delta:3", 5)


def test_prefix_too_short():
    with pytest.raises(InvalidFSpec):
        compute_q([0, 1], 5)


def test_overflow_is_loud():
    with pytest.raises(OverflowError):
        compute_q([0, 2**63 - 1], 2)
    with pytest.raises(OverflowError):
        compute_q([0, 2**70], 2)  # f itself does not fit


def test_n_max_validation():
    with pytest.raises(ValueError):
        compute_q(Zeros(), 0)
    with pytest.raises(ValueError):
        compute_q(Zeros(), engine.INDEX_CAP + 1)


def test_trace_is_immutable_and_deterministic():
    a = compute_q("floor:1/2", 500)
    b = compute_q("floor:1/2", 500)
    assert a.q_values.tobytes() == b.q_values.tobytes()
    assert a.f_values.tobytes() == b.f_values.tobytes()
    with pytest.raises(ValueError):
        a.q_values[0] = 7


def test_trace_accessors():
    t = compute_q("floor:1/2", 10)
    assert t.q(1) == 1 and t.f(4) == 2 and t.n_max == 10
    with pytest.raises(IndexError):
        t.q(11)
    with pytest.raises(IndexError):
        t.f(0)


def test_engine_matches_oracle_on_random_drivers():
    rng = np.random.default_rng(42)
    for trial in range(200):
        m = int(rng.integers(1, 40))
        if trial % 2:
            f = [0] + [int(v) for v in rng.integers(-3, 4, size=m - 1)]
        else:  # slow driver
            f = [0]
            for _ in range(m - 1):
                f.append(f[-1] + int(rng.integers(0, 2)))
        t = compute_q(f, m)
        q_ref, died, lookup = oracle_q(f)
        assert list(t.q_values) == q_ref
        assert t.outcome.died_at == died
        assert t.outcome.lookup_index == lookup


def test_inverse_examples():
    assert list(compute_f_from_q([1, 1, 1, 1])) == [0, 0, 0, 0]
    assert list(compute_f_from_q([1, 2, 2, 3, 3, 3, 4])) == [0, 1, 1, 1, 1, 1, 1]


def test_inverse_validation():
    with pytest.raises(InvalidQ):
        compute_f_from_q([2, 2])
    with pytest.raises(InvalidQ):
        compute_f_from_q([1, 3])
    with pytest.raises(InvalidQ):
        compute_f_from_q([1, 0])
    with pytest.raises(InvalidQ):
        compute_f_from_q([])


def test_inverse_round_trip_exhaustive():
    for m in range(1, 13):
        for f in enumerate_slow_prefixes(m):
            t = compute_q(f, m)
            assert t.exists
            back = compute_f_from_q(t.q_values)
            assert tuple(back) == f
            assert list(back) == oracle_inverse_f(list(t.q_values))


def test_inverse_of_slow_trace_has_small_steps():
    # monotone slow q with q(1)=1 inverts to f with steps in {-1, 0, 1}
    rng = np.random.default_rng(11)
    for m in range(2, 15):
        for _ in range(40):
            q = [1]
            for _ in range(m - 1):
                q.append(q[-1] + int(rng.integers(0, 2)))
            f = compute_f_from_q(q)
            assert set(np.diff(f)) <= {-1, 0, 1}
    # exhaustively over all slow q of length <= 14 via difference bitstrings
    for m in (10, 14):
        for mask in range(1 << (m - 1)):
            q = [1]
            for i in range(m - 1):
                q.append(q[-1] + ((mask >> i) & 1))
            f = compute_f_from_q(q)
            d = np.diff(f)
            assert ((d >= -1) & (d <= 1)).all()


def test_distinct_drivers_give_distinct_traces():
    for m in range(2, 11):
        seen = {}
        for f in enumerate_slow_prefixes(m):
            key = tuple(compute_q(f, m).q_values)
            assert key not in seen, (f, seen[key])
            seen[key] = f


def test_two_term_initial_and_prefix():
    t = compute_two_term(hofstadter_spec(), 10)
    assert list(t.q_values) == [1, 1, 2, 3, 3, 4, 5, 5, 6, 6]
    assert t.q(1) == 1 and t.q(2) == 1


def test_two_term_matches_oracle():
    for spec, n in [(hofstadter_spec(), 300), (tanny_spec(), 300),
                    (v_variant_spec(), 300), (quasipolynomial_spec(), 300)]:
        t = compute_two_term(spec, n)
        vals, died, _ = oracle_two_term(spec.offsets, spec.initial_values,
                                        spec.start, spec.outer_shift, n)
        assert died is None and t.exists
        assert list(t.q_values) == [vals[i] for i in range(spec.start, n + 1)]


def test_two_term_death_detection():
    # huge initial value forces an out-of-range lookup immediately
    spec = TwoTermSpec((1, 2), (1, 50), start=1, outer_shift=0)
    t = compute_two_term(spec, 10)
    assert not t.exists and t.outcome.died_at == 3
    assert t.outcome.lookup_index == 3 - 50
    assert list(t.q_values) == [1, 50]


def test_two_term_validation():
    with pytest.raises(ValueError):
        TwoTermSpec((1, 2), (1,))  # too few initial values
    with pytest.raises(ValueError):
        TwoTermSpec((0, 2), (1, 1))
    with pytest.raises(ValueError):
        compute_two_term(hofstadter_spec(), 1)


def test_tanny_is_monotone_and_hits_every_integer():
    t = compute_two_term(tanny_spec(), 10**4)
    d = np.diff(t.q_values)
    assert ((d == 0) | (d == 1)).all()
    assert t.q_values[0] == 1
    assert set(np.unique(t.q_values)) == set(range(1, int(t.q_values.max()) + 1))


def test_v_variant_is_monotone_and_hits_every_integer():
    t = compute_two_term(v_variant_spec(), 10**4)
    d = np.diff(t.q_values)
    assert ((d == 0) | (d == 1)).all()


def test_quasipolynomial_small_values():
    t = compute_two_term(quasipolynomial_spec(), 20)
    assert t.start == 3
    assert t.q(13) == 8   # 13 mod 5 = 3 -> n - 5
    assert t.q(15) == 2   # 15 mod 5 = 0 -> 2
    assert t.q(16) == 12  # 16 mod 5 = 1 -> n - 4


def test_conclusion_sequence_prefix():
    c = compute_c(15)
    assert list(c) == [1, 2, 2, 2, 3, 3, 3, 3, 3, 4, 5, 4, 5]
    d = np.diff(c[:11 + 2])
    assert ((d < 0) | (d > 1)).any()  # a step outside {0, 1} by n = 13
    q_h = compute_two_term(hofstadter_spec(), 15)
    assert c.max() <= q_h.q_values.max()


def test_is_slow():
    assert is_slow([0, 0, 1, 2], zero_start=True)
    assert not is_slow([0, 1, 0, 1])
    assert is_slow([1, 2, 2, 3])
    assert not is_slow([1, 2, 2, 3], zero_start=True)
    assert is_slow([5])
    with pytest.raises(ValueError):
        is_slow([])


def test_batch_matches_scalar_engine():
    rng = np.random.default_rng(9)
    m = 24
    batch = rng.integers(-2, 4, size=(300, m))
    batch[:, 0] = 0
    slow = np.cumsum(rng.integers(0, 2, size=(300, m)), axis=1)
    slow[:, 0] = 0
    for mat in (batch, np.asarray(list(enumerate_slow_prefixes(10))), slow):
        q_mat, died = compute_q_batch(mat)
        for row in range(len(mat)):
            t = compute_q([int(v) for v in mat[row]], mat.shape[1])
            if t.exists:
                assert died[row] == 0
                assert (q_mat[row] == t.q_values).all()
            else:
                assert died[row] == t.outcome.died_at
                upto = t.outcome.died_at - 1
                assert (q_mat[row, :upto] == t.q_values).all()


def test_existence_outcome_str():
    assert str(engine.ExistenceOutcome(10)) == "exists up to 10"
    assert "died at 3" in str(engine.ExistenceOutcome(2, died_at=3, lookup_index=0))


def test_long_driver_via_diffbits():
    rng = np.random.default_rng(2)
    bits = rng.integers(0, 2, size=9999, dtype=np.uint8).tobytes()
    t = compute_q(DiffBits(bits), 10**4)
    assert t.exists
    n = np.arange(1, 10**4 + 1)
    assert (t.q_values >= 1).all() and (t.q_values <= n).all()
