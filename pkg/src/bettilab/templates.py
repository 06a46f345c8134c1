"""Betti templates: symbolic vanishing grids for Koszul algebras with N_q.

Cell (column i, row j) of the template records what is known or predicted
about beta_{i, i+j} for a Koszul algebra satisfying N_q, assuming the
partial-regularity hypothesis through the displayed columns.  The symbols:

    *   nonzero
    -   zero
    0   zero unconditionally (regularity bound)
    o   zero when the characteristic is good for i, predicted in general
    ^   zero predicted by subadditivity
    v   no vanishing asserted

A bottom annotation row shows, for each column that contains an 'o' cell,
the unique exceptional good prime p <= i when it exists.
"""

from __future__ import annotations

from dataclasses import dataclass

from .goodprimes import exceptional_prime

STAR, DASH, ZERO, OVOID, TRIUP, TRIDOWN = "*", "-", "0", "o", "^", "v"

LEGEND = (
    "* nonzero   - zero   0 zero (always)   "
    "o zero when char k is good for the column   "
    "^ zero under the subadditivity prediction   v no vanishing asserted"
)


def _ovoid_bound(q: int, i: int) -> int:
    extra = 0 if i % (q + 1) == 0 else 1
    return 2 * (i // (q + 1)) + extra


def classify_cell(q: int, i: int, j: int) -> str:
    """Template symbol for column i, row j (so internal degree i + j)."""
    if q < 1:
        raise ValueError("q must be at least 1")
    if i < 0 or j < 0:
        raise ValueError("template indices are nonnegative")
    if (i == 0 and j == 0) or (1 <= i <= q and j == 1):
        return STAR
    if i == 0 or j == 0 or (1 <= i <= q and j >= 2):
        return DASH
    if i > q and j >= i:
        return ZERO
    if j > _ovoid_bound(q, i):
        return OVOID
    if j > -(-i // q):  # ceil(i / q)
        return TRIUP
    return TRIDOWN


def column_has_ovoid(q: int, i: int) -> bool:
    """Whether column i of the full template contains an 'o' cell."""
    if i <= q:
        return False
    return _ovoid_bound(q, i) + 1 < i


def annotation_prime(q: int, i: int):
    """Bottom-row entry for column i: exceptional prime, or None."""
    if not column_has_ovoid(q, i):
        return None
    return exceptional_prime(i)


@dataclass(frozen=True)
class TemplateGrid:
    q: int
    i_max: int
    j_max: int
    cells: tuple  # cells[j][i]
    primes: tuple  # one entry per column; None when not annotated

    def cell(self, i: int, j: int) -> str:
        return self.cells[j][i]


def template_grid(q: int, i_max: int, j_max: int) -> TemplateGrid:
    cells = tuple(
        tuple(classify_cell(q, i, j) for i in range(i_max + 1))
        for j in range(j_max + 1)
    )
    primes = tuple(annotation_prime(q, i) for i in range(i_max + 1))
    return TemplateGrid(q=q, i_max=i_max, j_max=j_max, cells=cells, primes=primes)


def render_template(q: int, i_max: int, j_max: int = 8) -> str:
    """ASCII rendering with a legend header, the grid, and the prime row."""
    grid = template_grid(q, i_max, j_max)
    width = max(3, len(str(i_max)) + 2)
    lines = [f"betti template for N_{q}  (columns 0..{i_max}, rows 0..{j_max})", LEGEND, ""]
    header = "    " + "".join(f"{i:>{width}}" for i in range(i_max + 1))
    lines.append(header)
    for j in range(j_max + 1):
        row = f"{j:>3} " + "".join(f"{grid.cells[j][i]:>{width}}" for i in range(i_max + 1))
        lines.append(row)
    prow = "  p " + "".join(
        f"{'' if p is None else p:>{width}}" for p in grid.primes
    )
    lines.append(prow)
    return "\n".join(lines) + "\n"
