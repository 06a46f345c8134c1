from pathlib import Path

import pytest

from bettilab.templates import (
    annotation_prime,
    classify_cell,
    column_has_ovoid,
    render_template,
    template_grid,
)

DATA = Path(__file__).parent / "data"

# vanishing grid for q = 2, transcribed row by row: rows j = 0..8, columns
# i = 0..13, plus the exceptional-prime annotation row
GRID_Q2 = [
    "* - - - - - - - - - - - - -",
    "- * * v v v v v v v v v v v",
    "- - - v v v v v v v v v v v",
    "- - - 0 ^ v v v v v v v v v",
    "- - - 0 0 o ^ v v v v v v v",
    "- - - 0 0 0 o ^ ^ v v v v v",
    "- - - 0 0 0 0 o o ^ ^ v v v",
    "- - - 0 0 0 0 0 o o ^ ^ ^ v",
    "- - - 0 0 0 0 0 0 o o o ^ ^",
]
PRIMES_Q2 = [None, None, None, None, None, 3, None, 2, 3, 5, None, None, None, 7]

# grid for q = 3: rows j = 0..8, columns i = 0..16
GRID_Q3 = [
    "* - - - - - - - - - - - - - - - -",
    "- * * * v v v v v v v v v v v v v",
    "- - - - v v v v v v v v v v v v v",
    "- - - - o ^ ^ v v v v v v v v v v",
    "- - - - 0 o o o ^ ^ v v v v v v v",
    "- - - - 0 0 o o o ^ ^ ^ ^ v v v v",
    "- - - - 0 0 0 o o o o o ^ ^ ^ ^ v",
    "- - - - 0 0 0 0 o o o o o ^ ^ ^ ^",
    "- - - - 0 0 0 0 0 o o o o o o o ^",
]
PRIMES_Q3 = [None, None, None, None, None, 3, None, 2, 3, 5, None, None, None, 7, 5, 2, None]


def test_grid_q2_matches_transcription():
    for j, row in enumerate(GRID_Q2):
        cells = row.split()
        for i, sym in enumerate(cells):
            assert classify_cell(2, i, j) == sym, (i, j)


def test_grid_q3_matches_transcription():
    for j, row in enumerate(GRID_Q3):
        cells = row.split()
        for i, sym in enumerate(cells):
            assert classify_cell(3, i, j) == sym, (i, j)


def test_annotation_primes_q2():
    got = [annotation_prime(2, i) for i in range(14)]
    assert got == PRIMES_Q2


def test_annotation_primes_q3():
    got = [annotation_prime(3, i) for i in range(17)]
    assert got == PRIMES_Q3


def test_column_ovoid_rule():
    # column 3 for q=2 has no ovoid cell (regularity zero takes over first),
    # column 13 has them below the displayed rows
    assert not column_has_ovoid(2, 3)
    assert column_has_ovoid(2, 13)
    assert not column_has_ovoid(3, 3)


def test_template_grid_object():
    g = template_grid(2, 13, 8)
    assert g.cell(0, 0) == "*"
    assert g.cell(5, 4) == "o"
    assert g.primes[13] == 7


def test_render_golden_q2():
    rendered = render_template(2, 13, 8)
    golden = (DATA / "template_q2.txt").read_text()
    assert rendered == golden


def test_render_golden_q3():
    rendered = render_template(3, 16, 8)
    golden = (DATA / "template_q3.txt").read_text()
    assert rendered == golden


def test_bad_template_inputs():
    with pytest.raises(ValueError):
        classify_cell(0, 1, 1)
    with pytest.raises(ValueError):
        classify_cell(2, -1, 0)
