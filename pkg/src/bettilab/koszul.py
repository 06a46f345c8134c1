"""Strand homology of the Koszul complex on the ambient variables.

For a linearized module M over R = S/J, the spot in homological column i
and internal degree j is Lambda^i(k^e) (x) M_{j-i}, with boundary

    e_T (x) m  |->  sum_s (-1)^s e_{T minus t_s} (x) x_{t_s} m

over the ascending elements t_0 < t_1 < ... of T.  Homology at column i
gives the degree-j Betti number of M over the ambient polynomial ring; with
M = R these are the Betti numbers of the algebra itself and carry all the
t-value and regularity data downstream audits consume.

When the algebra is multigraded by variable tags, every strand splits into
independent blocks (one per multidegree) and ranks and kernels are computed
blockwise.  Blocking never changes any reported number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from . import linalg
from .linalg import Matrix, hstack
from .rings import EchelonQuotient, LinearizedModule, QuotientAlgebra, module_of_algebra

NEG_INF = float("-inf")


class WindowTooSmall(ValueError):
    """A strand needs a module piece outside the materialized window."""


class KoszulComplex:
    """Strand-by-strand view of K(x_1..x_e; M) with cached ranks.

    use_blocks forces the multigraded block route on or off; the default
    picks blocks for any tagged module over the rationals and for large
    tagged strands over a finite field.
    """

    def __init__(
        self,
        module: LinearizedModule,
        i_max: Optional[int] = None,
        j_max: Optional[int] = None,
        use_blocks: Optional[bool] = None,
    ):
        self.module = module
        self.algebra: QuotientAlgebra = module.algebra
        self.field = self.algebra.field
        self.e = self.algebra.e
        self.i_max = self.e if i_max is None else min(i_max, self.e)
        self.j_max = 2 * self.e if j_max is None else j_max
        self.use_blocks = use_blocks
        self._subsets: dict = {}
        self._diff: dict = {}
        self._rank: dict = {}
        self._tags: dict = {}
        self._act_nz: dict = {}

    # -- bases -------------------------------------------------------------

    def subsets(self, i: int) -> tuple:
        if i not in self._subsets:
            self._subsets[i] = tuple(combinations(range(self.e), i))
        return self._subsets[i]

    def module_dim(self, d: int) -> int:
        dim = self.module.known_dim(d)
        if dim is None:
            raise WindowTooSmall(
                f"module {self.module.label} has no materialized piece in degree {d}"
            )
        return dim

    def strand_dim(self, i: int, j: int) -> int:
        if i < 0 or i > self.e:
            return 0
        return math.comb(self.e, i) * self.module_dim(j - i)

    def strand_basis(self, i: int, j: int) -> list:
        """Ordered basis as (variable subset, module index) pairs."""
        mdim = self.module_dim(j - i)
        return [(T, m) for T in self.subsets(i) for m in range(mdim)]

    def basis_position(self, i: int, j: int) -> dict:
        return {bm: pos for pos, bm in enumerate(self.strand_basis(i, j))}

    def strand_tags(self, i: int, j: int) -> Optional[list]:
        """Multidegree per basis element, aligned with strand_basis order."""
        vt = self.algebra.variable_tags
        if vt is None:
            return None
        key = (i, j)
        if key in self._tags:
            return self._tags[key]
        mtags = self.module.piece_tags(j - i)
        if mtags is None:
            self._tags[key] = None
            return None
        width = len(vt[0]) if vt else 0
        out = []
        for T in self.subsets(i):
            base = [0] * width
            for v in T:
                for c in range(width):
                    base[c] += vt[v][c]
            for mt in mtags:
                out.append(tuple(base[c] + mt[c] for c in range(width)))
        self._tags[key] = out
        return out

    # -- differentials -----------------------------------------------------

    def _action_entries(self, v: int, d: int) -> np.ndarray:
        return self.module.action(v, d).entries()

    def _action_nonzeros(self, v: int, d: int) -> list:
        """Per-column nonzero (row, value) lists of the degree-d action."""
        key = (v, d)
        got = self._act_nz.get(key)
        if got is None:
            got = self.module.action_nonzeros(v, d)
            self._act_nz[key] = got
        return got

    def differential(self, i: int, j: int) -> Matrix:
        """Boundary matrix from spot (i, j) to spot (i-1, j), dense."""
        key = (i, j)
        got = self._diff.get(key)
        if got is not None:
            return got
        src = self.strand_dim(i, j)
        dst = self.strand_dim(i - 1, j) if i >= 1 else 0
        if src == 0 or dst == 0:
            mat = Matrix.zeros(self.field, dst, src)
        else:
            mat = self._scatter_dense(i, j, src, dst)
        self._diff[key] = mat
        return mat

    def _scatter_dense(self, i: int, j: int, src: int, dst: int) -> Matrix:
        mdim = self.module_dim(j - i)
        rdim = self.module_dim(j - i + 1)
        row_offset = {T: k * rdim for k, T in enumerate(self.subsets(i - 1))}
        acts = [self._action_entries(v, j - i) for v in range(self.e)]
        p = self.field.characteristic
        a = np.zeros((dst, src), dtype=np.int64 if p else object)
        for cb, T in enumerate(self.subsets(i)):
            c0 = cb * mdim
            for s, v in enumerate(T):
                r0 = row_offset[T[:s] + T[s + 1 :]]
                if s % 2 == 0:
                    a[r0 : r0 + rdim, c0 : c0 + mdim] += acts[v]
                else:
                    a[r0 : r0 + rdim, c0 : c0 + mdim] -= acts[v]
        return Matrix(self.field, a)

    def _block_groups(self, i: int, j: int):
        """Column and row positions grouped by multidegree, or None."""
        ct = self.strand_tags(i, j)
        rt = self.strand_tags(i - 1, j)
        if ct is None or rt is None:
            return None
        cols: dict = {}
        for pos, t in enumerate(ct):
            cols.setdefault(t, []).append(pos)
        rows: dict = {}
        for pos, t in enumerate(rt):
            rows.setdefault(t, []).append(pos)
        return cols, rows

    def _blocked(self, i: int, j: int) -> bool:
        if self.algebra.variable_tags is None:
            return False
        if self.use_blocks is not None:
            return self.use_blocks
        if self.field.characteristic == 0:
            return True
        return self.strand_dim(i, j) * self.strand_dim(i - 1, j) > 250_000

    def _scatter_block(self, i: int, j: int, cols: list, rows: list) -> Matrix:
        mdim = self.module_dim(j - i)
        rdim = self.module_dim(j - i + 1)
        subs = self.subsets(i)
        row_offset = {T: k * rdim for k, T in enumerate(self.subsets(i - 1))}
        rowpos = {g: a for a, g in enumerate(rows)}
        nz = [self._action_nonzeros(v, j - i) for v in range(self.e)]
        p = self.field.characteristic
        a = np.zeros((len(rows), len(cols)), dtype=np.int64 if p else object)
        for ac, pos in enumerate(cols):
            T = subs[pos // mdim]
            m = pos % mdim
            for s, v in enumerate(T):
                base = row_offset[T[:s] + T[s + 1 :]]
                for r, val in nz[v][m]:
                    ar = rowpos[base + r]
                    if s % 2 == 0:
                        a[ar, ac] += val
                    else:
                        a[ar, ac] -= val
        return Matrix(self.field, a)

    # -- ranks and homology ------------------------------------------------

    def rank(self, i: int, j: int) -> int:
        """Rank of the boundary leaving spot (i, j)."""
        key = (i, j)
        got = self._rank.get(key)
        if got is not None:
            return got
        if i <= 0 or i > self.e or self.strand_dim(i, j) == 0:
            val = 0
        elif self.strand_dim(i - 1, j) == 0:
            val = 0
        elif self._blocked(i, j):
            groups = self._block_groups(i, j)
            if groups is None:
                val = linalg.rank(self.differential(i, j))
            else:
                cols, rows = groups
                val = 0
                for tag, cc in cols.items():
                    rr = rows.get(tag)
                    if rr:
                        val += linalg.rank(self._scatter_block(i, j, cc, rr))
        else:
            val = linalg.rank(self.differential(i, j))
        self._rank[key] = val
        return val

    def betti(self, i: int, j: int) -> int:
        """Betti number of the module over the ambient polynomial ring."""
        if i < 0 or i > self.e:
            return 0
        sd = self.strand_dim(i, j)
        if sd == 0:
            return 0
        return sd - self.rank(i, j) - self.rank(i + 1, j)

    def cycle_basis(self, i: int, j: int) -> Matrix:
        """Columns spanning the kernel of the boundary leaving (i, j)."""
        sd = self.strand_dim(i, j)
        if sd == 0:
            return Matrix.zeros(self.field, 0, 0)
        if i <= 0 or self.strand_dim(i - 1, j) == 0:
            return Matrix.identity(self.field, sd)
        if self._blocked(i, j):
            groups = self._block_groups(i, j)
            if groups is not None:
                cols, rows = groups
                parts = []
                p = self.field.characteristic
                for tag, cc in cols.items():
                    rr = rows.get(tag, [])
                    if rr:
                        blk = linalg.kernel_basis(self._scatter_block(i, j, cc, rr))
                    else:
                        blk = Matrix.identity(self.field, len(cc))
                    if blk.ncols == 0:
                        continue
                    emb = np.zeros((sd, blk.ncols), dtype=np.int64 if p else object)
                    emb[np.array(cc), :] = blk.entries()
                    parts.append(Matrix(self.field, emb))
                if not parts:
                    return Matrix.zeros(self.field, sd, 0)
                return hstack(parts)
        return linalg.kernel_basis(self.differential(i, j))

    def boundary_basis(self, i: int, j: int) -> Matrix:
        """Columns spanning the image of the boundary arriving at (i, j)."""
        sd = self.strand_dim(i, j)
        if sd == 0:
            return Matrix.zeros(self.field, 0, 0)
        if i + 1 > self.e or self.strand_dim(i + 1, j) == 0:
            return Matrix.zeros(self.field, sd, 0)
        up = i + 1
        if self._blocked(up, j):
            groups = self._block_groups(up, j)
            if groups is not None:
                cols, rows = groups
                parts = []
                p = self.field.characteristic
                for tag, cc in cols.items():
                    rr = rows.get(tag, [])
                    if not rr:
                        continue
                    blk = self._scatter_block(up, j, cc, rr)
                    piv = linalg.image_column_indices(blk)
                    if not piv:
                        continue
                    img = blk.take_columns(piv)
                    emb = np.zeros((sd, img.ncols), dtype=np.int64 if p else object)
                    emb[np.array(rr), :] = img.entries()
                    parts.append(Matrix(self.field, emb))
                if not parts:
                    return Matrix.zeros(self.field, sd, 0)
                return hstack(parts)
        return linalg.image_basis(self.differential(up, j))

    def homology_representatives(self, i: int, j: int) -> Matrix:
        """Cycle columns whose classes form a basis of the homology at (i, j)."""
        cycles = self.cycle_basis(i, j)
        bounds = self.boundary_basis(i, j)
        return linalg.complement_in_span(bounds, cycles)

    def spot_action(self, v: int, i: int, j: int) -> Matrix:
        """Multiplication by x_v from spot (i, j) to spot (i, j+1)."""
        mdim = self.module_dim(j - i)
        ndim = self.module_dim(j - i + 1)
        nsub = len(self.subsets(i))
        act = self._action_entries(v, j - i)
        p = self.field.characteristic
        a = np.zeros((nsub * ndim, nsub * mdim), dtype=np.int64 if p else object)
        for b in range(nsub):
            a[b * ndim : (b + 1) * ndim, b * mdim : (b + 1) * mdim] = act
        return Matrix(self.field, a)

    # -- column summaries ---------------------------------------------------

    def column_bound(self, i: int) -> Optional[int]:
        """A proven upper bound on the top nonzero degree in column i, if any."""
        bound = None
        top = self.module.vanishes_above()
        if top is not None:
            bound = i + top
        if self.module.covers_algebra and self.algebra.declared.get("koszul"):
            b2 = 2 * i
            bound = b2 if bound is None else min(bound, b2)
        return bound

    def t_value(self, i: int):
        """(top degree with nonzero Betti number in column i, certified flag).

        The top degree is -inf for an empty column.  certified means the
        scan provably covered every possibly-nonzero degree; otherwise the
        value is only a within-window observation.
        """
        bound = self.column_bound(i)
        if bound is not None and bound <= self.j_max:
            top, certified = bound, True
        else:
            top, certified = self.j_max, False
        low = i + self.module.min_degree
        for j in range(top, low - 1, -1):
            if self.betti(i, j) != 0:
                return j, certified
        return NEG_INF, certified

    def betti_table(self, label: Optional[str] = None) -> "BettiTable":
        entries = {}
        certified = []
        for i in range(self.i_max + 1):
            bound = self.column_bound(i)
            top = self.j_max if bound is None else min(bound, self.j_max)
            cert = bound is not None and bound <= self.j_max
            for j in range(i + self.module.min_degree, top + 1):
                try:
                    b = self.betti(i, j)
                except WindowTooSmall:
                    cert = False
                    break
                if b:
                    entries[(i, j)] = b
            certified.append(cert)
        return BettiTable(
            label=label or self.module.label,
            characteristic=self.field.characteristic,
            i_max=self.i_max,
            j_max=self.j_max,
            entries=tuple(sorted(entries.items())),
            certified_columns=tuple(certified),
        )


@dataclass(frozen=True)
class BettiTable:
    """Nonzero Betti numbers in a window, with per-column certification."""

    label: str
    characteristic: int
    i_max: int
    j_max: int
    entries: tuple  # sorted ((i, j), beta) pairs, beta > 0
    certified_columns: tuple

    def beta(self, i: int, j: int) -> int:
        for (ii, jj), b in self.entries:
            if (ii, jj) == (i, j):
                return b
        return 0

    def t_value(self, i: int):
        degs = [j for (ii, j), _ in self.entries if ii == i]
        return max(degs) if degs else NEG_INF

    def observed_pd(self) -> int:
        cols = [i for (i, _), _ in self.entries]
        return max(cols) if cols else -1

    def observed_regularity(self):
        slopes = [j - i for (i, j), _ in self.entries]
        return max(slopes) if slopes else NEG_INF

    def fully_certified(self) -> bool:
        return all(self.certified_columns)

    def records(self) -> list:
        return [
            {"i": i, "j": j, "beta": b, "characteristic": self.characteristic}
            for (i, j), b in self.entries
        ]

    def to_tsv(self) -> str:
        """Betti diagram rows indexed by j - i, tab separated."""
        if not self.entries:
            return "empty betti table\n"
        imax = self.observed_pd()
        rows = sorted({j - i for (i, j), _ in self.entries})
        lines = ["\t".join(["j-i\\i"] + [str(i) for i in range(imax + 1)])]
        for r in rows:
            cells = [str(r)]
            for i in range(imax + 1):
                b = self.beta(i, i + r)
                cells.append(str(b) if b else ".")
            lines.append("\t".join(cells))
        totals = ["total"]
        for i in range(imax + 1):
            totals.append(str(sum(b for (ii, _), b in self.entries if ii == i)))
        lines.append("\t".join(totals))
        return "\n".join(lines) + "\n"


def koszul_of_algebra(
    a: QuotientAlgebra,
    i_max: Optional[int] = None,
    j_max: Optional[int] = None,
    use_blocks: Optional[bool] = None,
) -> KoszulComplex:
    """Koszul complex with coefficients in R itself, window sized to fit."""
    jm = 2 * a.e if j_max is None else j_max
    module = module_of_algebra(a, jm)
    return KoszulComplex(module, i_max=i_max, j_max=jm, use_blocks=use_blocks)


def _basis_vector_tags(strand_tags: Optional[list], basis: Matrix) -> Optional[list]:
    """Tag of each basis column, read off its first nonzero coordinate.

    Valid because homogeneous maps admit the rref-style bases produced
    here, whose columns are supported in a single multidegree.
    """
    if strand_tags is None:
        return None
    ent = basis.entries()
    out = []
    for c in range(basis.ncols):
        nz = np.nonzero(ent[:, c])[0]
        if len(nz) == 0:
            raise ValueError("zero column in a basis matrix")
        out.append(strand_tags[int(nz[0])])
    return out


def submodule_linearize(
    kc: KoszulComplex,
    i: int,
    kind: str,
    d_max: int,
    d_min: Optional[int] = None,
    label: Optional[str] = None,
) -> LinearizedModule:
    """Cycles, boundaries, homology, or the boundary cokernel at column i,
    repackaged as a linearized module over the same algebra.

    Pieces are indexed by internal degree.  For 'cycles', 'boundaries' and
    'homology' the stored coordinates are with respect to the bases chosen
    by the corresponding KoszulComplex methods; 'cokernel' quotients the
    full spot by the boundary image.
    """
    if kind not in ("cycles", "boundaries", "homology", "cokernel"):
        raise ValueError(f"unknown submodule kind {kind!r}")
    field = kc.field
    lo = i + kc.module.min_degree if d_min is None else d_min
    degs = list(range(lo, d_max + 1))

    bases = {}
    quots = {}
    for j in degs:
        if kind == "cycles":
            bases[j] = kc.cycle_basis(i, j)
        elif kind == "boundaries":
            bases[j] = kc.boundary_basis(i, j)
        elif kind == "homology":
            bases[j] = kc.homology_representatives(i, j)
        else:
            bnd = kc.boundary_basis(i, j)
            quots[j] = EchelonQuotient(field, kc.strand_dim(i, j), bnd.transpose())

    dims = []
    tags = None if kc.algebra.variable_tags is None else []
    for j in degs:
        if kind == "cokernel":
            dims.append(quots[j].dim)
            if tags is not None:
                st = kc.strand_tags(i, j)
                tags.append(None if st is None else [st[c] for c in quots[j].kept])
        else:
            dims.append(bases[j].ncols)
            if tags is not None:
                st = kc.strand_tags(i, j)
                tags.append(_basis_vector_tags(st, bases[j]))
    if tags is not None and any(t is None for t in tags):
        tags = None

    actions = [[] for _ in range(kc.e)]
    for k, j in enumerate(degs[:-1]):
        for v in range(kc.e):
            act = kc.spot_action(v, i, j)
            if kind == "cokernel":
                lifted = quots[j].lift(Matrix.identity(field, quots[j].dim))
                mat = quots[j + 1].project(act @ lifted)
            else:
                moved = act @ bases[j]
                if kind == "homology":
                    frame = hstack([bases[j + 1], kc.boundary_basis(i, j + 1)])
                    sol = linalg.solve(frame, moved)
                    if sol is None:
                        raise ArithmeticError("homology action fell outside its frame")
                    mat = sol.take_rows(range(bases[j + 1].ncols))
                else:
                    sol = linalg.solve(bases[j + 1], moved)
                    if sol is None:
                        raise ArithmeticError(f"{kind} are not closed under the action")
                    mat = sol
            actions[v].append(mat)

    # when the ambient strand provably vanishes past the window, the pieces
    # do too, which doubles as a generation bound for the repackaged module
    gbound = None
    cap = kc.module.vanishes_above()
    if cap is not None and d_max >= i + cap and dims:
        gbound = i + cap
        if lo + len(dims) - 1 == gbound:
            # zero-propagation needs one explicit zero piece past the bound
            for v in range(kc.e):
                actions[v].append(Matrix.zeros(field, 0, dims[-1]))
            dims.append(0)
            if tags is not None:
                tags.append([])

    return LinearizedModule(
        algebra=kc.algebra,
        min_degree=lo,
        dims=dims,
        actions=actions,
        tags=tags,
        gen_degree_max=gbound,
        label=label or f"{kind}[{i}]",
    )
