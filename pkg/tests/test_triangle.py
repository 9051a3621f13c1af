import json

import numpy as np
import pytest

from hofq.errors import CapExceeded
from hofq.engine import compute_q, compute_q_batch
from hofq.exactfloor import staircase_value
from hofq.fspec import slow_prefix_matrix
from hofq.triangle import (
    build_triangle,
    check_containment,
    check_min,
    envelope,
    format_cell,
    min_witness_prefix,
    triangle_json,
)

# transcription of the published 8-row table of attained-value sets
FIRST_EIGHT_ROWS = [
    [{1}],
    [{1}, {2}],
    [{1}, {2}, {3}],
    [{1}, {2, 3}, {3, 4}, {4}],
    [{1}, {2, 3}, {3, 4}, {4, 5}, {5}],
    [{1}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6}],
    [{1}, {2, 3, 4}, {3, 4, 5}, {4, 5, 6}, {5, 6, 7}, {6, 7}, {7}],
    [{1}, {2, 3, 4}, {3, 4, 5, 6}, {4, 5, 6, 7}, {5, 6, 7}, {6, 7, 8},
     {7, 8}, {8}],
]


@pytest.fixture(scope="module")
def table8():
    return build_triangle(8)


def test_first_eight_rows_exact(table8):
    assert table8.n_max == 8
    for n in range(1, 9):
        got = [set(c) for c in table8.row(n)]
        assert got == FIRST_EIGHT_ROWS[n - 1], f"row {n}"


def test_single_cells(table8):
    assert table8.cell(1, 4) == (2, 3)
    for n in range(1, 9):
        assert table8.cell(0, n) == (1,)
        assert table8.cell(n - 1, n) == (n,)
    with pytest.raises(IndexError):
        table8.cell(4, 4)


def test_envelope_cells():
    assert list(envelope(1, 4)) == [2, 3, 4]
    assert list(envelope(0, 9)) == [1]
    assert list(envelope(6, 7)) == [7]
    assert len(envelope(3, 10)) == 10 - 3
    with pytest.raises(IndexError):
        envelope(5, 5)
    with pytest.raises(IndexError):
        envelope(-1, 4)


def test_containment_report(table8):
    rep = check_containment(table8)
    assert rep.ok and not rep.violations
    assert (1, 4) in rep.strict_cells
    assert rep.row_unions_equal


def test_min_report(table8):
    rep = check_min(table8)
    assert rep.ok
    assert table8.cell(1, 4)[0] == 2
    assert table8.cell(0, 5)[0] == 1


def test_min_witness_example():
    # n - i leading zeros then the ramp: (0,0,0,0,1,2) gives q(6) = 3
    w = min_witness_prefix(2, 6)
    assert w == (0, 0, 0, 0, 1, 2)
    assert compute_q(w, 6).q(6) == 3


def test_invariants_to_16():
    table = build_triangle(16)
    rep = check_containment(table)
    assert rep.ok and rep.row_unions_equal
    assert check_min(table).ok
    for n in range(1, 17):
        assert table.cell(0, n) == (1,)
        assert table.cell(n - 1, n) == (n,)
        union = set().union(*(table.cell(i, n) for i in range(n)))
        assert union <= set(range(1, n + 1))


def test_second_diagonal_is_staircase_interval():
    # cell (1, n) is exactly {2 .. floor(1/2 + sqrt(2n - 7/4))}
    table = build_triangle(20)
    for n in range(2, 21):
        assert table.cell(1, n) == tuple(range(2, staircase_value(n) + 1))


def test_predecessor_structure():
    # every attained (i, n) value comes from a driver with f(n-1) in {i-1, i}
    for n in range(2, 11):
        f_mat = slow_prefix_matrix(n, 0, 1 << (n - 1))
        q_mat, died = compute_q_batch(f_mat)
        assert not died.any()
        for i in range(n):
            rows = np.nonzero(f_mat[:, n - 1] == i)[0]
            preds = set(int(v) for v in f_mat[rows, n - 2])
            assert preds <= {i - 1, i}


def test_cap():
    with pytest.raises(CapExceeded):
        build_triangle(25)
    with pytest.raises(CapExceeded):
        build_triangle(11, cap=10)


def test_text_render(table8):
    lines = table8.to_text().splitlines()
    assert lines[3] == "4  {1} {2:3} {3:4} {4}"
    assert lines[7] == "8  {1} {2:4} {3:6} {4:7} {5:7} {6:8} {7:8} {8}"


def test_format_cell_runs():
    assert format_cell((1,)) == "{1}"
    assert format_cell((2, 3, 4)) == "{2:4}"
    assert format_cell((1, 3, 4)) == "{1,3:4}"
    assert format_cell((1, 3, 5)) == "{1,3,5}"


def test_json_cells(table8):
    doc = json.loads(triangle_json(table8))
    assert doc["schema"] == "hofq.triangle/1"
    assert doc["n_max"] == 8
    assert {"n": 4, "i": 1, "values": [2, 3]} in doc["cells"]
    assert len(doc["cells"]) == 36
