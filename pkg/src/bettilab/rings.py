"""Standard graded quotient algebras R = S/J presented by generators of degree >= 2.

Graded pieces are handled as explicit coordinate spaces over the monomial
basis of S_d in ascending lexicographic order on exponent tuples.  Monomial
ideals take a combinatorial route (standard monomials = monomials not
divisible by any generator); everything else goes through exact row
reduction of the spanning set of J_d.  Both routes agree and that agreement
is part of the test suite.

Optionally every variable carries a tag (an integer vector).  When all
generators are tag-homogeneous the algebra is multigraded by the tags and
downstream strand computations can split into independent blocks.  Tags
never change results, only the block structure used to obtain them.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .fields import FieldSpec, QQ
from .linalg import Matrix, hstack, rref


class LinearFormError(ValueError):
    """A generator of degree <= 1 was supplied; see eliminate_linear_forms."""


# ---------------------------------------------------------------------------
# monomials


@lru_cache(maxsize=None)
def monomial_basis(e: int, d: int) -> tuple:
    """All exponent tuples of length e summing to d, ascending lex order."""
    if d < 0:
        return ()
    if e == 0:
        return ((),) if d == 0 else ()
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for a in range(remaining + 1):
            rec(prefix + (a,), remaining - a, slots - 1)

    rec((), d, e)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(e: int, d: int) -> dict:
    return {m: i for i, m in enumerate(monomial_basis(e, d))}


def monomial_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _plain(c):
    # numpy scalars leak out of matrix entries; keep Polynomial coefficients
    # as builtin ints / Fractions
    return int(c) if isinstance(c, np.integer) else c


def monomial_divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# polynomials (exact coefficients, field-agnostic storage)


@dataclass(frozen=True)
class Polynomial:
    """Finite sum of monomial terms; coefficients are ints or Fractions."""

    terms: tuple  # tuple of (exponent tuple, coefficient), sorted by exponents

    @staticmethod
    def from_dict(d: dict) -> "Polynomial":
        items = tuple(sorted((e, c) for e, c in d.items() if c != 0))
        return Polynomial(items)

    @staticmethod
    def monomial(exps: Sequence[int], coeff=1) -> "Polynomial":
        return Polynomial.from_dict({tuple(exps): coeff})

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial(())

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def nvars(self) -> int:
        return len(self.terms[0][0]) if self.terms else 0

    def degrees(self) -> set:
        return {sum(e) for e, _ in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> Optional[int]:
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous polynomial with degrees {sorted(degs)}")
        return degs.pop()

    def __add__(self, other: "Polynomial") -> "Polynomial":
        d = dict(self.terms)
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return Polynomial.from_dict(d)

    def scale(self, c) -> "Polynomial":
        if c == 0:
            return Polynomial.zero()
        return Polynomial(tuple((e, cc * c) for e, cc in self.terms))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        d: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                key = monomial_mul(e1, e2)
                d[key] = d.get(key, 0) + c1 * c2
        return Polynomial.from_dict(d)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def tag_of(self, variable_tags: Sequence[tuple]) -> Optional[tuple]:
        """Common tag of all terms, or None if the terms disagree."""
        seen = None
        for e, _ in self.terms:
            t = _exps_tag(e, variable_tags)
            if seen is None:
                seen = t
            elif seen != t:
                return None
        return seen

    def render(self, variables: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            factors = [
                v if k == 1 else f"{v}^{k}"
                for v, k in zip(variables, e)
                if k
            ]
            mono = "*".join(factors) if factors else "1"
            if c == 1 and factors:
                parts.append(mono)
            elif c == -1 and factors:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}" if factors else f"{c}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


def _exps_tag(exps: tuple, variable_tags: Sequence[tuple]) -> tuple:
    k = len(variable_tags[0]) if variable_tags else 0
    acc = [0] * k
    for v, mult in enumerate(exps):
        if mult:
            tv = variable_tags[v]
            for i in range(k):
                acc[i] += mult * tv[i]
    return tuple(acc)


# ---------------------------------------------------------------------------
# echelonized quotients of coordinate spaces


class EchelonQuotient:
    """A coordinate space modulo the span of given vectors.

    Kept coordinates are the non-pivot ones of the row-reduced span; project
    sends an ambient vector to its kept coordinates after reduction, lift
    embeds kept coordinates back with zeros at pivots.  Deterministic by
    construction.
    """

    def __init__(self, field: FieldSpec, ambient_dim: int, spanning_rows: Matrix):
        self.field = field
        self.ambient_dim = ambient_dim
        if spanning_rows.ncols not in (ambient_dim,) and spanning_rows.nrows > 0:
            raise ValueError("spanning rows have wrong width")
        red = rref(spanning_rows)
        e = red.matrix
        self.echelon = e.take_rows(range(red.rank))
        self.pivots = red.pivot_columns
        pivset = set(self.pivots)
        self.kept = tuple(c for c in range(ambient_dim) if c not in pivset)
        self.dim = len(self.kept)
        self._proj = None

    def project_matrix(self) -> Matrix:
        """The projection as a dim x ambient_dim matrix."""
        if self._proj is not None:
            return self._proj
        m = Matrix.zeros(self.field, self.dim, self.ambient_dim)._mutable()
        one = self.field.coerce(1)
        ech = self.echelon.entries()
        for r, c in enumerate(self.kept):
            m[r, c] = one
        for i, c in enumerate(self.pivots):
            for r, kc in enumerate(self.kept):
                v = ech[i, kc]
                if v != 0:
                    m[r, c] = -v if m.dtype == object else (-int(v)) % self.field.characteristic
        self._proj = Matrix._freeze(self.field, m)
        return self._proj

    def project(self, vectors: Matrix) -> Matrix:
        return self.project_matrix() @ vectors

    def lift(self, coords: Matrix) -> Matrix:
        m = Matrix.zeros(self.field, self.ambient_dim, coords.ncols)._mutable()
        src = coords.entries()
        for r, c in enumerate(self.kept):
            m[c, :] = src[r, :]
        return Matrix._freeze(self.field, m)

    def reduce(self, vectors: Matrix) -> Matrix:
        """Canonical representatives: vector minus its echelon reduction."""
        return self.lift(self.project(vectors))


class _ComponentQuotient:
    """Quotient by a span of pairwise coordinate differences.

    When every spanning row is c*(e_a - e_b), row reduction only ever glues
    coordinates together, so the reduced echelon form is determined by the
    connected components of the a~b relation: pivot columns are every column
    except the largest of its component, and projection sums components.
    Component structure is field independent, so this matches EchelonQuotient
    over any coefficient field.
    """

    def __init__(self, field: FieldSpec, ambient_dim: int, target):
        # target[c] = largest column index in c's component
        self.field = field
        self.ambient_dim = ambient_dim
        self._target = target
        self.kept = tuple(sorted(set(target)))
        self.dim = len(self.kept)
        self.pivots = tuple(c for c in range(ambient_dim) if target[c] != c)
        self._pos = {k: r for r, k in enumerate(self.kept)}
        self._echelon = None

    @property
    def echelon(self) -> Matrix:
        if self._echelon is None:
            one = self.field.coerce(1)
            neg = self.field.coerce(-1)
            rows = []
            for c in self.pivots:
                row = [0] * self.ambient_dim
                row[c] = one
                row[self._target[c]] = neg
                rows.append(row)
            if rows:
                self._echelon = Matrix.from_rows(self.field, rows)
            else:
                self._echelon = Matrix.zeros(self.field, 0, self.ambient_dim)
        return self._echelon

    def project(self, vectors: Matrix) -> Matrix:
        out = Matrix.zeros(self.field, self.dim, vectors.ncols)._mutable()
        src = vectors.entries()
        for c in range(self.ambient_dim):
            out[self._pos[self._target[c]], :] += src[c, :]
        p = self.field.characteristic
        if p:
            out %= p
        return Matrix._freeze(self.field, out)

    def lift(self, coords: Matrix) -> Matrix:
        m = Matrix.zeros(self.field, self.ambient_dim, coords.ncols)._mutable()
        src = coords.entries()
        for r, c in enumerate(self.kept):
            m[c, :] = src[r, :]
        return Matrix._freeze(self.field, m)

    def reduce(self, vectors: Matrix) -> Matrix:
        return self.lift(self.project(vectors))


class BlockedQuotient:
    """Quotient of a coordinate space by a span that is block-diagonal over
    a column grouping (one block per multidegree).

    Row-reducing each block separately selects exactly the pivot columns a
    global reduction would, because distinct blocks share no columns; kept
    coordinates and projections agree with the dense route entry for entry
    while never materializing the full spanning matrix.
    """

    def __init__(self, field: FieldSpec, ambient_dim: int, groups):
        # groups: list of (global column indices, EchelonQuotient on them)
        self.field = field
        self.ambient_dim = ambient_dim
        self.groups = groups
        kept = []
        for cols, q in groups:
            kept.extend(cols[k] for k in q.kept)
        self.kept = tuple(sorted(kept))
        self.dim = len(self.kept)
        self._pos = {c: r for r, c in enumerate(self.kept)}
        self._echelon = None
        self._unit_proj = None

    @property
    def echelon(self) -> Matrix:
        if self._echelon is None:
            rows = []
            for cols, q in self.groups:
                ech = q.echelon.entries()
                for r in range(q.echelon.nrows):
                    row = [0] * self.ambient_dim
                    for k, c in enumerate(cols):
                        if ech[r, k] != 0:
                            row[c] = ech[r, k]
                    rows.append((cols[q.pivots[r]], row))
            rows.sort(key=lambda t: t[0])
            if rows:
                self._echelon = Matrix.from_rows(self.field, [r for _, r in rows])
            else:
                self._echelon = Matrix.zeros(self.field, 0, self.ambient_dim)
        return self._echelon

    def project(self, vectors: Matrix) -> Matrix:
        out = Matrix.zeros(self.field, self.dim, vectors.ncols)._mutable()
        for cols, q in self.groups:
            if not q.dim:
                continue
            sub = q.project(vectors.take_rows(cols)).entries()
            for k, c in enumerate(q.kept):
                out[self._pos[cols[c]], :] = sub[k, :]
        return Matrix._freeze(self.field, out)

    def lift(self, coords: Matrix) -> Matrix:
        m = Matrix.zeros(self.field, self.ambient_dim, coords.ncols)._mutable()
        src = coords.entries()
        for r, c in enumerate(self.kept):
            m[c, :] = src[r, :]
        return Matrix._freeze(self.field, m)

    def reduce(self, vectors: Matrix) -> Matrix:
        return self.lift(self.project(vectors))

    def unit_projection(self, c: int) -> tuple:
        """Image of the c-th ambient unit vector as sparse (row, value) pairs."""
        if self._unit_proj is None:
            proj: dict = {}
            for cols, q in self.groups:
                if isinstance(q, _ComponentQuotient):
                    for lc, gc in enumerate(cols):
                        proj[gc] = ((self._pos[cols[q._target[lc]]], 1),)
                else:
                    pm = q.project_matrix().entries()
                    for lc, gc in enumerate(cols):
                        hits = []
                        for lr in range(q.dim):
                            val = pm[lr, lc]
                            if val != 0:
                                hits.append((self._pos[cols[q.kept[lr]]], val))
                        proj[gc] = tuple(hits)
            self._unit_proj = proj
        return self._unit_proj[c]


# ---------------------------------------------------------------------------
# the algebra


class QuotientAlgebra:
    """R = S/J for S a polynomial ring and J generated in degrees >= 2."""

    def __init__(
        self,
        field: FieldSpec,
        variables: Sequence[str],
        generators: Sequence[Polynomial],
        variable_tags: Optional[Sequence[Sequence[int]]] = None,
        declared: Optional[dict] = None,
        use_monomial_route: Optional[bool] = None,
    ):
        self.field = field
        self.variables = tuple(variables)
        self.e = len(self.variables)
        gens = []
        for g in generators:
            if g.is_zero():
                continue
            if not g.is_homogeneous():
                raise ValueError(f"inhomogeneous generator with degrees {sorted(g.degrees())}")
            if g.nvars != self.e:
                raise ValueError("generator exponent length does not match variable count")
            d = g.degree()
            if d == 0:
                raise ValueError("unit generator: the quotient is the zero ring")
            if d == 1:
                raise LinearFormError(
                    "generator of degree 1; eliminate linear forms first "
                    "(see eliminate_linear_forms)"
                )
            gens.append(g)
        self.generators = tuple(gens)
        self.variable_tags = None
        if variable_tags is not None:
            tags = tuple(tuple(t) for t in variable_tags)
            if len(tags) != self.e:
                raise ValueError("one tag per variable required")
            for g in self.generators:
                if g.tag_of(tags) is None:
                    raise ValueError("generator is not tag-homogeneous; drop the tags")
            self.variable_tags = tags
        self.declared = dict(declared or {})
        self.is_monomial = all(g.is_monomial() for g in self.generators)
        if use_monomial_route is False:
            # test hook: force the row-reduction route even on monomial input
            self.is_monomial = False
        elif use_monomial_route is True and not self.is_monomial:
            raise ValueError("monomial route requested for non-monomial generators")
        self._pairs_route = not self.is_monomial and all(
            self._is_difference(g) for g in self.generators
        )
        self._std: dict = {}
        self._quotients: dict = {}
        self._actions: dict = {}
        self._action_sparse: dict = {}
        self._gen_degree_max = max((g.degree() for g in self.generators), default=0)

    def _is_difference(self, g: Polynomial) -> bool:
        """True when g is c*(m1 - m2) with c nonzero in the field."""
        if len(g.terms) != 2:
            return False
        ca = self.field.coerce(g.terms[0][1])
        cb = self.field.coerce(g.terms[1][1])
        p = self.field.characteristic
        if p:
            return ca % p != 0 and (ca + cb) % p == 0
        return ca != 0 and ca + cb == 0

    # -- structural properties --------------------------------------------

    @property
    def max_generator_degree(self) -> int:
        return self._gen_degree_max

    def generator_degrees(self) -> list:
        return [g.degree() for g in self.generators]

    def describe(self) -> str:
        gens = ", ".join(g.render(self.variables) for g in self.generators)
        return f"{self.field}[{', '.join(self.variables)}] / ({gens or '0'})"

    # -- graded pieces ----------------------------------------------------

    def _compute_piece(self, d: int):
        basis = monomial_basis(self.e, d)
        if d < 0:
            self._std[d] = ()
            return
        if self.is_monomial:
            gen_exps = [g.terms[0][0] for g in self.generators]
            std = tuple(
                i
                for i, m in enumerate(basis)
                if not any(monomial_divides(ge, m) for ge in gen_exps)
            )
            self._std[d] = std
            return
        if self.variable_tags is not None:
            self._compute_piece_blocked(d, basis)
            return
        rows = []
        idx = monomial_index(self.e, d)
        for g in self.generators:
            dg = g.degree()
            if dg > d:
                continue
            for m in monomial_basis(self.e, d - dg):
                row = [0] * len(basis)
                for ge, gc in g.terms:
                    row[idx[monomial_mul(ge, m)]] = gc
                rows.append(row)
        span = Matrix.from_rows(self.field, rows) if rows else Matrix.zeros(self.field, 0, len(basis))
        q = EchelonQuotient(self.field, len(basis), span)
        self._quotients[d] = q
        self._std[d] = q.kept

    def _compute_piece_blocked(self, d: int, basis):
        # tag-homogeneous generators keep every spanning row inside a single
        # multidegree, so the span matrix is block-diagonal over the tag
        # grouping and each block reduces independently; pivot columns, and
        # hence the standard monomials, match the dense route exactly
        tags = self.variable_tags
        groups_cols: dict = {}
        local = {}
        for i, m in enumerate(basis):
            t = _exps_tag(m, tags)
            cols = groups_cols.setdefault(t, [])
            local[i] = len(cols)
            cols.append(i)
        idx = monomial_index(self.e, d)
        if self._pairs_route:
            # all generators are scaled monomial differences: the span only
            # glues monomials, so union-find replaces row reduction outright
            parent = list(range(len(basis)))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for g in self.generators:
                dg = g.degree()
                if dg > d:
                    continue
                (ea, _), (eb, _) = g.terms
                for m in monomial_basis(self.e, d - dg):
                    ra = find(idx[monomial_mul(ea, m)])
                    rb = find(idx[monomial_mul(eb, m)])
                    if ra != rb:
                        parent[ra] = rb
            comp_max: dict = {}
            for i in range(len(basis)):
                r = find(i)
                if comp_max.get(r, -1) < i:
                    comp_max[r] = i
            groups = []
            for t, cols in groups_cols.items():
                target = [local[comp_max[find(gj)]] for gj in cols]
                groups.append((cols, _ComponentQuotient(self.field, len(cols), target)))
            q = BlockedQuotient(self.field, len(basis), groups)
            self._quotients[d] = q
            self._std[d] = q.kept
            return
        rows_by_tag: dict = {}
        for g in self.generators:
            dg = g.degree()
            if dg > d:
                continue
            gtag = g.tag_of(tags)
            for m in monomial_basis(self.e, d - dg):
                t = tuple(a + b for a, b in zip(gtag, _exps_tag(m, tags)))
                row = [0] * len(groups_cols[t])
                for ge, gc in g.terms:
                    row[local[idx[monomial_mul(ge, m)]]] = gc
                rows_by_tag.setdefault(t, []).append(row)
        groups = []
        for t, cols in groups_cols.items():
            rws = rows_by_tag.get(t)
            span = (
                Matrix.from_rows(self.field, rws)
                if rws
                else Matrix.zeros(self.field, 0, len(cols))
            )
            groups.append((cols, EchelonQuotient(self.field, len(cols), span)))
        q = BlockedQuotient(self.field, len(basis), groups)
        self._quotients[d] = q
        self._std[d] = q.kept

    def standard_monomials(self, d: int) -> tuple:
        """Indices into monomial_basis(e, d) of the standard monomial basis of R_d."""
        if d not in self._std:
            self._compute_piece(d)
        return self._std[d]

    def piece_dim(self, d: int) -> int:
        if d < 0:
            return 0
        return len(self.standard_monomials(d))

    def ideal_dim(self, d: int) -> int:
        return len(monomial_basis(self.e, d)) - self.piece_dim(d)

    def ideal_piece(self, d: int) -> Matrix:
        """Echelonized basis of J_d as rows over the monomial basis of S_d."""
        self.standard_monomials(d)
        if self.is_monomial:
            basis = monomial_basis(self.e, d)
            std = set(self._std[d])
            rows = [i for i in range(len(basis)) if i not in std]
            m = Matrix.zeros(self.field, len(rows), len(basis))._mutable()
            one = self.field.coerce(1)
            for r, c in enumerate(rows):
                m[r, c] = one
            return Matrix._freeze(self.field, m)
        return self._quotients[d].echelon

    def algebra_piece_tags(self, d: int) -> Optional[list]:
        if self.variable_tags is None:
            return None
        basis = monomial_basis(self.e, d)
        return [_exps_tag(basis[i], self.variable_tags) for i in self.standard_monomials(d)]

    def normal_form(self, d: int, vectors: Matrix) -> Matrix:
        """Map S_d coordinate vectors to coordinates over the standard basis of R_d."""
        self.standard_monomials(d)
        if self.is_monomial:
            basis = monomial_basis(self.e, d)
            std = self._std[d]
            return vectors.take_rows(std) if len(basis) else vectors.take_rows([])
        return self._quotients[d].project(vectors)

    def monomial_image(self, d: int, mono_col: int) -> Matrix:
        """Normal form of the mono_col-th monomial of S_d, as an R_d column."""
        amb = Matrix.zeros(self.field, len(monomial_basis(self.e, d)), 1)._mutable()
        amb[mono_col, 0] = self.field.coerce(1)
        return self.normal_form(d, Matrix._freeze(self.field, amb))

    def lift_polynomial(self, d: int, coords: Sequence) -> Polynomial:
        """Canonical ring-element representative of an R_d coordinate vector.

        This is a section of normal_form: projecting the result returns the
        same coordinates.
        """
        std = self.standard_monomials(d)
        basis = monomial_basis(self.e, d)
        if len(coords) != len(std):
            raise ValueError("coordinate vector has wrong length")
        if self.is_monomial:
            terms = {basis[mi]: _plain(c) for mi, c in zip(std, coords)}
            return Polynomial.from_dict(terms)
        col = Matrix.from_columns(self.field, [list(coords)])
        amb = self._quotients[d].lift(col)
        terms = {basis[r]: _plain(amb[r, 0]) for r in range(len(basis))}
        return Polynomial.from_dict(terms)

    # -- multiplication ---------------------------------------------------

    def action_matrix(self, v: int, d: int) -> Matrix:
        """Multiplication by variable v as a map R_d -> R_{d+1} in standard bases."""
        key = (v, d)
        if key in self._actions:
            return self._actions[key]
        std_d = self.standard_monomials(d)
        std_d1 = self.standard_monomials(d + 1)
        basis_d = monomial_basis(self.e, d)
        idx_d1 = monomial_index(self.e, d + 1)
        unit = tuple(1 if i == v else 0 for i in range(self.e))
        if self.is_monomial:
            pos = {m: r for r, m in enumerate(std_d1)}
            m = Matrix.zeros(self.field, len(std_d1), len(std_d))._mutable()
            one = self.field.coerce(1)
            for c, mi in enumerate(std_d):
                target = idx_d1[monomial_mul(basis_d[mi], unit)]
                r = pos.get(target)
                if r is not None:
                    m[r, c] = one
            out = Matrix._freeze(self.field, m)
        else:
            amb = Matrix.zeros(self.field, len(monomial_basis(self.e, d + 1)), len(std_d))._mutable()
            one = self.field.coerce(1)
            for c, mi in enumerate(std_d):
                amb[idx_d1[monomial_mul(basis_d[mi], unit)], c] = one
            out = self.normal_form(d + 1, Matrix._freeze(self.field, amb))
        self._actions[key] = out
        return out

    def action_columns(self, v: int, d: int) -> Optional[list]:
        """Sparse columns [(row, value), ...] of the degree-d action of x_v.

        Available on the monomial and blocked routes; returns None when only
        the dense action_matrix is sensible.  Big tagged algebras must stay
        on this path: the dense matrices are almost entirely zeros.
        """
        std_d = self.standard_monomials(d)
        std_d1 = self.standard_monomials(d + 1)
        basis_d = monomial_basis(self.e, d)
        idx_d1 = monomial_index(self.e, d + 1)
        unit = tuple(1 if i == v else 0 for i in range(self.e))
        if self.is_monomial:
            pos = {m: r for r, m in enumerate(std_d1)}
            cols = []
            for mi in std_d:
                r = pos.get(idx_d1[monomial_mul(basis_d[mi], unit)])
                cols.append([] if r is None else [(r, 1)])
            return cols
        q = self._quotients.get(d + 1)
        if isinstance(q, BlockedQuotient):
            return [
                list(q.unit_projection(idx_d1[monomial_mul(basis_d[mi], unit)]))
                for mi in std_d
            ]
        return None

    def hilbert_function(self, dmax: int) -> list:
        return [self.piece_dim(d) for d in range(dmax + 1)]

    def precompute(self, dmax: int):
        """Materialize pieces and action matrices through degree dmax."""
        for d in range(dmax + 1):
            self.standard_monomials(d)
        for d in range(dmax):
            for v in range(self.e):
                self.action_matrix(v, d)
        return self


def krull_dim_estimate(a: QuotientAlgebra, dmax: int) -> tuple:
    """(estimated Krull dimension, stable flag) from iterated differences.

    The estimate is the number of difference steps needed before the tail of
    the Hilbert function (the last e+1 materialized values) becomes zero.
    stable=False when the window never flattens out, or is too short to
    judge; a declared dimension on the algebra is reported by callers, not
    here.
    """
    hf = a.hilbert_function(dmax)
    tail = a.e + 1
    if len(hf) < tail + a.max_generator_degree:
        return (None, False)
    seq = list(hf)
    for steps in range(a.e + 2):
        if len(seq) >= tail and all(x == 0 for x in seq[-tail:]):
            return (steps, True)
        seq = [seq[i + 1] - seq[i] for i in range(len(seq) - 1)]
    return (None, False)


def declared_or_estimated_dim(a: QuotientAlgebra, dmax: int = None) -> Optional[int]:
    if "dim" in a.declared:
        return a.declared["dim"]
    est, stable = krull_dim_estimate(a, dmax if dmax is not None else 2 * a.max_generator_degree + a.e + 2)
    return est if stable else None


# ---------------------------------------------------------------------------
# linear form elimination helper


def eliminate_linear_forms(field: FieldSpec, variables: Sequence[str], generators: Sequence[Polynomial]):
    """Substitute away degree-1 generators, shrinking the variable list.

    Returns (variables, generators) describing the same quotient with no
    linear generators.  Raises if the ideal turns out to contain a unit.
    """
    vars_ = list(variables)
    gens = [dict(g.terms) for g in generators]

    def coerced(d):
        return {e: field.coerce(c) for e, c in d.items() if field.coerce(c) != 0}

    gens = [coerced(g) for g in gens]
    while True:
        linear = None
        for g in gens:
            degs = {sum(e) for e in g}
            if len(degs) > 1:
                raise ValueError("inhomogeneous generator")
            if degs == {1}:
                linear = g
                break
            if degs == {0}:
                raise ValueError("ideal contains a unit")
        if linear is None:
            break
        # solve for the earliest variable appearing in the form
        v = min(e.index(1) for e in linear)
        c = next(cc for e, cc in linear.items() if e[v] == 1)
        inv = field.invert(c)
        # x_v = -inv * (other terms)
        replacement = {}
        for e, cc in linear.items():
            if e[v] == 1:
                continue
            replacement[e] = _neg(field, _mulc(field, cc, inv))
        new_gens = []
        for g in gens:
            if g is linear:
                continue
            new_gens.append(_substitute(field, g, v, replacement))
        # drop variable v everywhere
        def drop(e):
            return e[:v] + e[v + 1 :]

        gens = []
        for g in new_gens:
            gens.append(coerced({drop(e): c for e, c in g.items()}))
        replacement = {drop(e): c for e, c in replacement.items()}
        vars_ = vars_[:v] + vars_[v + 1 :]
        gens = [g for g in gens if g]
    out = [Polynomial.from_dict(g) for g in gens if g]
    return vars_, out


def _mulc(field, a, b):
    return field.coerce(field.coerce(a) * field.coerce(b))


def _neg(field, a):
    return field.coerce(-a)


def _substitute(field: FieldSpec, g: dict, v: int, replacement: dict) -> dict:
    """Replace x_v by the linear form given by replacement (a term dict)."""
    out: dict = {}
    for e, c in g.items():
        k = e[v]
        base = list(e)
        base[v] = 0
        # expand (sum replacement)^k term by term
        partial = {tuple(base): c}
        for _ in range(k):
            nxt: dict = {}
            for pe, pc in partial.items():
                for re_, rc in replacement.items():
                    key = monomial_mul(pe, re_)
                    nxt[key] = field.coerce(nxt.get(key, 0) + pc * rc)
            partial = nxt
        for pe, pc in partial.items():
            out[pe] = field.coerce(out.get(pe, 0) + pc)
    return {e: c for e, c in out.items() if c != 0}


# ---------------------------------------------------------------------------
# linearized modules


@dataclass
class LinearizedModule:
    """A graded module known through finitely many pieces and variable actions.

    dims[k] is the dimension of the piece in degree min_degree + k; the
    action entry actions[v][k] maps that piece to the next one.  The module
    is generated in degrees <= gen_degree_max when that field is set, which
    lets zero pieces propagate upward past the materialized window.
    """

    algebra: QuotientAlgebra
    min_degree: int
    dims: list
    actions: list  # actions[v][k]: Matrix
    tags: Optional[list] = None  # tags[k]: list of tag tuples per basis vector
    gen_degree_max: Optional[int] = None
    label: str = "M"
    covers_algebra: bool = False

    @property
    def max_degree(self) -> int:
        return self.min_degree + len(self.dims) - 1

    def vanishes_above(self) -> Optional[int]:
        """Smallest D with provably zero pieces in all degrees > D, if any.

        Zero pieces propagate upward only from degrees at or beyond the
        generation bound, so a window ending in a zero tail certifies
        vanishing forever after.
        """
        if self.gen_degree_max is None:
            return None
        k0 = None
        for k in range(len(self.dims) - 1, -1, -1):
            if self.dims[k] != 0:
                break
            if self.min_degree + k >= self.gen_degree_max:
                k0 = k
        if k0 is None:
            return None
        return self.min_degree + k0 - 1

    def known_dim(self, d: int) -> Optional[int]:
        """Dimension of the degree-d piece, or None when not determined."""
        if d < self.min_degree:
            return 0
        k = d - self.min_degree
        if k < len(self.dims):
            return self.dims[k]
        if self.gen_degree_max is not None:
            for kk in range(len(self.dims)):
                if self.min_degree + kk >= self.gen_degree_max and self.dims[kk] == 0:
                    return 0
        return None

    def dim(self, d: int) -> int:
        v = self.known_dim(d)
        if v is None:
            raise KeyError(f"piece in degree {d} not materialized for {self.label}")
        return v

    def action(self, v: int, d: int) -> Matrix:
        k = d - self.min_degree
        if 0 <= k < len(self.dims) - 1:
            return self.actions[v][k]
        src = self.known_dim(d)
        dst = self.known_dim(d + 1)
        if src is None or dst is None:
            raise KeyError(f"action out of materialized range at degree {d}")
        return Matrix.zeros(self.algebra.field, dst, src)

    def piece_tags(self, d: int) -> Optional[list]:
        if self.tags is None:
            return None
        k = d - self.min_degree
        if 0 <= k < len(self.tags):
            return self.tags[k]
        if self.known_dim(d) == 0:
            return []
        return None

    def action_nonzeros(self, v: int, d: int) -> list:
        """Per-column (row, value) nonzero lists of the degree-d action."""
        k = d - self.min_degree
        if self.covers_algebra and 0 <= k < len(self.dims) - 1:
            cols = self.algebra.action_columns(v, d)
            if cols is not None:
                return cols
        arr = self.action(v, d).entries()
        out = [[] for _ in range(arr.shape[1])]
        rs, cs = np.nonzero(arr)
        for r, c in zip(rs.tolist(), cs.tolist()):
            out[c].append((r, arr[r, c]))
        return out

    def check_commuting(self) -> bool:
        for d in range(self.min_degree, self.max_degree - 1):
            for v in range(self.algebra.e):
                for w in range(v + 1, self.algebra.e):
                    left = self.action(w, d + 1) @ self.action(v, d)
                    right = self.action(v, d + 1) @ self.action(w, d)
                    if left != right:
                        return False
        return True

    def apply_monomial(self, exps: Sequence[int], d: int) -> Matrix:
        """Multiplication by the monomial with exponents exps, from degree d."""
        out = Matrix.identity(self.algebra.field, self.dim(d))
        cur = d
        for v, k in enumerate(exps):
            for _ in range(k):
                out = self.action(v, cur) @ out
                cur += 1
        return out

    def apply_polynomial(self, poly: Polynomial, d: int) -> Matrix:
        """Multiplication by a homogeneous ring element, from degree d."""
        dp = poly.degree()
        if dp is None:
            return Matrix.zeros(self.algebra.field, self.dim(d), self.dim(d))
        out = Matrix.zeros(self.algebra.field, self.dim(d + dp), self.dim(d))
        for e, c in poly.terms:
            out = out + self.apply_monomial(e, d).scale(c)
        return out


class _LazyAlgebraActions:
    """actions[k] facade building dense matrices only when indexed.

    Keeps module_of_algebra from materializing every action of a large
    algebra up front; blocked strand assembly works from action_columns and
    never touches these.
    """

    def __init__(self, algebra: QuotientAlgebra, v: int):
        self.algebra = algebra
        self.v = v

    def __getitem__(self, k: int) -> Matrix:
        return self.algebra.action_matrix(self.v, k)


def module_of_algebra(a: QuotientAlgebra, dmax: int) -> LinearizedModule:
    """R as a module over itself, materialized through degree dmax."""
    dims = [a.piece_dim(d) for d in range(dmax + 1)]
    actions = [_LazyAlgebraActions(a, v) for v in range(a.e)]
    tags = None
    if a.variable_tags is not None:
        tags = [a.algebra_piece_tags(d) for d in range(dmax + 1)]
    return LinearizedModule(
        algebra=a,
        min_degree=0,
        dims=dims,
        actions=actions,
        tags=tags,
        gen_degree_max=0,
        label="R",
        covers_algebra=True,
    )


def residue_field_module(a: QuotientAlgebra) -> LinearizedModule:
    """k = R/m as a module: one dimension in degree 0, zero actions."""
    zero_to_zero = [[Matrix.zeros(a.field, 0, 1)] for _ in range(a.e)]
    tags = None
    if a.variable_tags is not None:
        tags = [[_exps_tag((0,) * a.e, a.variable_tags)], []]
    return LinearizedModule(
        algebra=a,
        min_degree=0,
        dims=[1, 0],
        actions=zero_to_zero,
        tags=tags,
        gen_degree_max=0,
        label="k",
    )


@dataclass(frozen=True)
class Presentation:
    """Free presentation data for coker: sum R(-deg g) <- sum R(-deg r)."""

    generator_degrees: tuple
    relations: tuple  # each relation: (degree, tuple of (gen_index, Polynomial))


def linearize_module(a: QuotientAlgebra, pres: Presentation, dmax: int, label: str = "M") -> LinearizedModule:
    """Cokernel of a graded free presentation, as per-degree pieces and actions.

    The trivial presentation (one generator in degree 0, no relations)
    returns the algebra itself as a module.
    """
    gdeg = list(pres.generator_degrees)
    if not gdeg:
        return LinearizedModule(a, 0, [0] * (dmax + 1),
                                [[Matrix.zeros(a.field, 0, 0) for _ in range(dmax)] for _ in range(a.e)],
                                None, 0, label)
    dmin = min(gdeg)
    quotients = []
    layouts = []
    for d in range(dmin, dmax + 1):
        layout = []
        offset = 0
        for gi, dg in enumerate(gdeg):
            n = a.piece_dim(d - dg)
            layout.append((offset, n, dg))
            offset += n
        layouts.append(layout)
        ambient = offset
        rows = []
        for rdeg, entries in pres.relations:
            if rdeg > d:
                continue
            mult_dim = a.piece_dim(d - rdeg)
            for mcol in range(mult_dim):
                row_vec = [a.field.coerce(0)] * ambient
                for gi, poly in entries:
                    if poly.is_zero():
                        continue
                    off, n, dg = layout[gi]
                    if n == 0:
                        continue
                    col = module_free_entry(a, poly, d - rdeg, mcol, rdeg - dg)
                    for r in range(n):
                        val = col[r, 0]
                        if val != 0:
                            row_vec[off + r] = a.field.coerce(row_vec[off + r] + val)
                rows.append(row_vec)
        span = Matrix.from_rows(a.field, rows) if rows else Matrix.zeros(a.field, 0, ambient)
        quotients.append(EchelonQuotient(a.field, ambient, span))
    dims = [q.dim for q in quotients]
    actions: list = [[] for _ in range(a.e)]
    for k in range(len(quotients) - 1):
        d = dmin + k
        for v in range(a.e):
            # ambient action: block diagonal algebra action per generator
            blocks = []
            for gi, dg in enumerate(gdeg):
                blocks.append(a.action_matrix(v, d - dg))
            amb = _block_diag(a.field, blocks)
            lifted = quotients[k].lift(Matrix.identity(a.field, quotients[k].dim))
            actions[v].append(quotients[k + 1].project(amb @ lifted))
    # no tag tracking through general presentations; callers may attach tags
    tags = None
    return LinearizedModule(
        algebra=a,
        min_degree=dmin,
        dims=dims,
        actions=actions,
        tags=tags,
        gen_degree_max=max(gdeg),
        label=label,
    )


def module_free_entry(a: QuotientAlgebra, poly: Polynomial, src_degree: int, src_col: int, shift: int) -> Matrix:
    """poly * (src_col-th standard monomial of R_src_degree) in R coordinates.

    The product lands in degree src_degree + poly.degree(); shift is unused
    except as a sanity check hook for callers that track twists.
    """
    _ = shift
    dp = poly.degree()
    basis = monomial_basis(a.e, src_degree)
    std = a.standard_monomials(src_degree)
    mono = basis[std[src_col]]
    target_dim = len(monomial_basis(a.e, src_degree + dp))
    amb = Matrix.zeros(a.field, target_dim, 1)._mutable()
    idx = monomial_index(a.e, src_degree + dp)
    for e, c in poly.terms:
        key = monomial_mul(e, mono)
        amb[idx[key], 0] = a.field.coerce(amb[idx[key], 0] + a.field.coerce(c))
    return a.normal_form(src_degree + dp, Matrix._freeze(a.field, amb))


def _block_diag(field: FieldSpec, blocks: Sequence[Matrix]) -> Matrix:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    out = Matrix.zeros(field, nr, nc)._mutable()
    r = c = 0
    for b in blocks:
        if b.nrows and b.ncols:
            out[r : r + b.nrows, c : c + b.ncols] = b.entries()
        r += b.nrows
        c += b.ncols
    return Matrix._freeze(field, out)
