"""Built-in example algebras with stamped facts and expected invariants.

Each constructor returns a CorpusEntry: an ideal presentation plus the
declared structural facts the construction guarantees (dimension, Koszul
property, CM flag) and a dict of expected numbers that verify_entry checks
by direct computation.  Randomized families carry an explicit seed and a
remake hook so a degenerate draw can be reseeded a bounded number of times.

Edge ideals get exact declared dimensions (the independence number, found
by brute force), Veronese and Segre presentations get exponent-vector tags
so every downstream rank computation can run blockwise per multidegree.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dataclass_field
from itertools import combinations, permutations, product
from typing import Callable, Iterator, Optional

from . import linalg
from .fields import GF, QQ, FieldSpec
from .linalg import Matrix
from .rings import Polynomial, QuotientAlgebra, monomial_basis, monomial_mul

GENERIC_FIELD = GF(32003)


@dataclass
class CorpusEntry:
    name: str
    field: FieldSpec
    variables: tuple
    generators: tuple
    variable_tags: Optional[tuple]
    declared: dict
    expected: dict = dataclass_field(default_factory=dict)
    window: Optional[tuple] = None  # (i_max, j_max) guidance for audits
    seed: Optional[int] = None
    remake: Optional[Callable[[int], "CorpusEntry"]] = None

    def algebra(self) -> QuotientAlgebra:
        declared = dict(self.declared)
        declared.setdefault("name", self.name)
        return QuotientAlgebra(
            self.field,
            self.variables,
            self.generators,
            variable_tags=self.variable_tags,
            declared=declared,
        )

    def describe(self) -> str:
        gens = ", ".join(g.render(self.variables) for g in self.generators) or "0"
        return f"{self.name}: char {self.field.characteristic}, ({gens})"


def hilbert_from_numerator(numer, dim: int, upto: int) -> list:
    """Coefficients of numer(t) / (1-t)^dim through degree upto."""
    out = []
    for d in range(upto + 1):
        total = 0
        for k, c in enumerate(numer):
            if k > d:
                break
            total += c * (math.comb(d - k + dim - 1, dim - 1) if dim else (k == d))
        out.append(total)
    return out


# -- edge ideals ------------------------------------------------------------


def _independence_number(n: int, edges) -> int:
    adj = {(u, v) for u, v in edges} | {(v, u) for u, v in edges}
    best = 0
    for mask in range(1 << n):
        verts = [v for v in range(n) if mask >> v & 1]
        if len(verts) <= best:
            continue
        if all((u, v) not in adj for u, v in combinations(verts, 2)):
            best = len(verts)
    return best


def edge_ideal(n: int, edges, field: FieldSpec = QQ, name: Optional[str] = None) -> CorpusEntry:
    """Quadratic monomial ideal of a simple graph on n <= 7 vertices."""
    if n > 7:
        raise ValueError("edge ideals are limited to 7 vertices")
    edges = sorted(tuple(sorted(e)) for e in edges)
    if any(u == v or not 0 <= u < n or not 0 <= v < n for u, v in edges):
        raise ValueError("edges must join distinct vertices in range")
    gens = []
    for u, v in edges:
        ex = [0] * n
        ex[u] += 1
        ex[v] += 1
        gens.append(Polynomial.monomial(ex))
    tags = tuple(tuple(1 if k == v else 0 for k in range(n)) for v in range(n))
    return CorpusEntry(
        name=name or f"graph{n}-" + "-".join(f"{u}{v}" for u, v in edges),
        field=field,
        variables=tuple(f"x{i}" for i in range(n)),
        generators=tuple(gens),
        variable_tags=tags,
        # quadratic monomial relations make the algebra Koszul; dimension is
        # the independence number of the graph
        declared={"koszul": True, "dim": _independence_number(n, edges)},
        expected={"defining_quadrics": len(edges)},
        window=(n, 2 * n),
    )


def _pair_index(n: int) -> dict:
    return {pair: k for k, pair in enumerate(combinations(range(n), 2))}


def all_graphs(n: int, field: FieldSpec = QQ) -> Iterator[CorpusEntry]:
    """One edge-ideal entry per isomorphism class of graphs on n vertices.

    Deduplication is by orbit enumeration: each new bitmask is expanded to
    its full permutation orbit before moving on, so the canonical
    representative is the smallest mask in its class.
    """
    if n > 6:
        raise ValueError("exhaustive graph enumeration is limited to 6 vertices")
    pairs = list(combinations(range(n), 2))
    idx = _pair_index(n)
    perm_maps = []
    for perm in permutations(range(n)):
        perm_maps.append(tuple(idx[tuple(sorted((perm[u], perm[v])))] for u, v in pairs))
    seen = set()
    width = max(1, (len(pairs) + 3) // 4)
    for mask in range(1 << len(pairs)):
        if mask in seen:
            continue
        orbit = set()
        for pm in perm_maps:
            m = 0
            for k in range(len(pairs)):
                if mask >> k & 1:
                    m |= 1 << pm[k]
            orbit.add(m)
        seen.update(orbit)
        edges = [pairs[k] for k in range(len(pairs)) if mask >> k & 1]
        yield edge_ideal(n, edges, field=field, name=f"graph{n}-{mask:0{width}x}")


def graph_class_count(n: int) -> int:
    count = 0
    for _ in all_graphs(n):
        count += 1
    return count


# -- toric families ---------------------------------------------------------


def _binomial_relations(nvars: int, groups) -> list:
    """x_a x_b - x_c x_d for every non-pivot pair in each equal-product group."""
    gens = []
    for members in groups:
        if len(members) < 2:
            continue
        pivot = members[0]
        for other in members[1:]:
            ex_p = [0] * nvars
            ex_p[pivot[0]] += 1
            ex_p[pivot[1]] += 1
            ex_o = [0] * nvars
            ex_o[other[0]] += 1
            ex_o[other[1]] += 1
            gens.append(Polynomial.monomial(ex_p) - Polynomial.monomial(ex_o))
    return gens


def veronese_presentation(
    q: int, n: int, field: FieldSpec = QQ, max_generators: int = 15
) -> CorpusEntry:
    """Presentation of the algebra generated by all degree-q monomials in
    q*n base variables, with binomial quadric relations."""
    if q < 2 or n < 1:
        raise ValueError("need q >= 2 and n >= 1")
    base = q * n
    monos = monomial_basis(base, q)
    if len(monos) > max_generators:
        raise ValueError(f"{len(monos)} generators exceed the size guard {max_generators}")
    groups: dict = {}
    for a, b in combinations(range(len(monos)), 2):
        groups.setdefault(monomial_mul(monos[a], monos[b]), []).append((a, b))
    for a in range(len(monos)):
        groups.setdefault(monomial_mul(monos[a], monos[a]), []).append((a, a))
    ordered = [sorted(v) for _, v in sorted(groups.items())]
    gens = _binomial_relations(len(monos), ordered)
    e = len(monos)
    pd = e - base
    return CorpusEntry(
        name=f"veronese-{q}-{n}",
        field=field,
        variables=tuple(f"z{i}" for i in range(e)),
        generators=tuple(gens),
        variable_tags=monos,
        declared={"koszul": True, "dim": base},
        expected={
            "e": e,
            "t1": 2,
            # quotient Hilbert function must match the monomial count of the
            # parametrization: every degree-(q d) monomial in the base
            # variables is a product of d degree-q monomials
            "hilbert": [math.comb(base - 1 + q * d, q * d) for d in range(4)],
            "nq_at_least": min(q, pd) if pd >= 1 else None,
            "reg_window": (q - 1) * n if pd >= 1 else 0,
        },
        # stop the column scan at pd: the top-slope syzygy sits at
        # (pd, pd + reg) and the next column is an expensive empty scan
        window=(min(e, pd), pd + (q - 1) * n),
    )


def segre_presentation(dims, field: FieldSpec = QQ, max_variables: int = 12) -> CorpusEntry:
    """Presentation of the coordinate ring of a product of projective spaces
    in its standard embedding, with one variable per index tuple."""
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2 or any(d < 1 for d in dims):
        raise ValueError("need at least two positive factor dimensions")
    tuples = list(product(*(range(d + 1) for d in dims)))
    if len(tuples) > max_variables:
        raise ValueError(f"{len(tuples)} variables exceed the size guard {max_variables}")
    groups: dict = {}
    for a, b in combinations(range(len(tuples)), 2):
        key = tuple(tuple(sorted((tuples[a][i], tuples[b][i]))) for i in range(len(dims)))
        groups.setdefault(key, []).append((a, b))
    ordered = [sorted(v) for _, v in sorted(groups.items())]
    gens = _binomial_relations(len(tuples), ordered)
    tags = []
    for t in tuples:
        tag = []
        for i, d in enumerate(dims):
            tag.extend(1 if t[i] == k else 0 for k in range(d + 1))
        tags.append(tuple(tag))
    krull = sum(dims) + 1
    e = len(tuples)
    expected = {
        "e": e,
        "t1": 2,
        "hilbert": [math.prod(math.comb(d + j, j) for d in dims) for j in range(7)],
        "defining_quadrics": len(gens),
    }
    if dims == (1, 1, 1):
        expected["nq"] = 3
        expected["hilbert_numerator"] = (1, 4, 1)
    return CorpusEntry(
        name="segre-" + "x".join(str(d) for d in dims),
        field=field,
        variables=tuple("x" + "".join(str(c) for c in t) for t in tuples),
        generators=tuple(gens),
        variable_tags=tuple(tags),
        declared={"koszul": True, "dim": krull},
        expected=expected,
        window=(min(e, e - krull + 1), min(2 * e, 2 * (e - krull) + 2)),
    )


def plucker_presentation(n: int, field: FieldSpec = QQ) -> CorpusEntry:
    """Quadric relations of the Grassmannian of planes in n-space, n in {4,5}."""
    if n not in (4, 5):
        raise ValueError("only n = 4 and n = 5 are provided")
    pairs = list(combinations(range(n), 2))
    idx = {p: k for k, p in enumerate(pairs)}
    gens = []
    for i, j, k, l in combinations(range(n), 4):
        ex1 = [0] * len(pairs)
        ex1[idx[(i, j)]] += 1
        ex1[idx[(k, l)]] += 1
        ex2 = [0] * len(pairs)
        ex2[idx[(i, k)]] += 1
        ex2[idx[(j, l)]] += 1
        ex3 = [0] * len(pairs)
        ex3[idx[(i, l)]] += 1
        ex3[idx[(j, k)]] += 1
        gens.append(
            Polynomial.monomial(ex1) - Polynomial.monomial(ex2) + Polynomial.monomial(ex3)
        )
    tags = []
    for i, j in pairs:
        tags.append(tuple(1 if v in (i, j) else 0 for v in range(n)))
    numer = (1, 1) if n == 4 else (1, 3, 1)
    dim = 2 * n - 3
    return CorpusEntry(
        name=f"plucker-2-{n}",
        field=field,
        variables=tuple(f"p{i}{j}" for i, j in pairs),
        generators=tuple(gens),
        variable_tags=tuple(tags),
        declared={"koszul": True, "dim": dim},
        expected={
            "defining_quadrics": math.comb(n, 4),
            "t1": 2,
            "hilbert": hilbert_from_numerator(numer, dim, 4),
        },
        window=(len(pairs) - dim + 1, 2 * (len(pairs) - dim) + 4),
    )


# -- randomized families ----------------------------------------------------


def _random_form(rng: random.Random, p: int, e: int, degree: int) -> Polynomial:
    terms = {}
    for mono in monomial_basis(e, degree):
        c = rng.randrange(p)
        if c:
            terms[mono] = c
    return Polynomial.from_dict(terms)


def generic_quadrics(
    e: int, c: int, seed: int = 1, field: Optional[FieldSpec] = None
) -> CorpusEntry:
    """c random quadrics in e variables over a large prime field.

    c <= e is expected to be a complete intersection; c = e+1 general
    quadrics pin the second syzygy degree at floor(e/2) + 2.
    """
    field = GENERIC_FIELD if field is None else field
    if field.characteristic == 0:
        raise ValueError("generic entries need a finite field")
    rng = random.Random(f"generic-quadrics-{e}-{c}-{seed}")
    gens = tuple(_random_form(rng, field.characteristic, e, 2) for _ in range(c))
    if c <= e:
        declared = {"dim": e - c, "cm": True, "koszul": True}
        expected = {
            "betti": {(i, 2 * i): math.comb(c, i) for i in range(c + 1)},
            "t": {i: 2 * i for i in range(c + 1)},
            "hilbert": hilbert_from_numerator(
                [math.comb(c, k) for k in range(c + 1)], e - c, 4
            ),
        }
        window = (max(c, 1), 2 * c + (2 if c < e else 0))
    elif c == e + 1:
        declared = {"dim": 0}
        expected = {"t1": 2, "t2": e // 2 + 2}
        window = (2, e // 2 + 4)
    else:
        declared = {}
        expected = {}
        window = (min(c, e), 2 * e)
    entry = CorpusEntry(
        name=f"generic-quadrics-{e}-{c}-s{seed}",
        field=field,
        variables=tuple(f"x{i}" for i in range(e)),
        generators=gens,
        variable_tags=None,
        declared=declared,
        expected=expected,
        window=window,
        seed=seed,
    )
    entry.remake = lambda s: generic_quadrics(e, c, s, field)
    return entry


def apolarity_gorenstein(seed: int = 1, field: Optional[FieldSpec] = None) -> CorpusEntry:
    """Artinian Gorenstein algebra with Hilbert function (1, 5, 5, 1).

    The ideal is the degree-2 kernel of the pairing of quadric operators
    against a random cubic form in five dual variables.  A generic form has
    full pairing rank 5, leaving exactly 10 quadrics.
    """
    field = GENERIC_FIELD if field is None else field
    p = field.characteristic
    if p == 2:
        raise ValueError("construction requires characteristic different from 2")
    if p == 0:
        raise ValueError("generic entries need a finite field")
    e = 5
    rng = random.Random(f"gorenstein-551-{seed}")
    cubic = {mono: rng.randrange(p) for mono in monomial_basis(e, 3)}
    quads = monomial_basis(e, 2)
    rows = []
    for v in range(e):
        row = []
        for nexp in quads:
            mexp = tuple(nexp[k] + (1 if k == v else 0) for k in range(e))
            coeff = cubic.get(mexp, 0)
            scale = 1
            for k in range(e):
                scale *= math.factorial(mexp[k]) // math.factorial(mexp[k] - nexp[k])
            row.append(coeff * scale % p)
        rows.append(row)
    cat = Matrix(field, rows)
    if linalg.rank(cat) != e:
        entry = apolarity_gorenstein(seed + 1, field)
        entry.seed = seed
        return entry
    kern = linalg.kernel_basis(cat)
    gens = []
    for col in range(kern.ncols):
        terms = {}
        for r in range(len(quads)):
            cval = kern[r, col]
            if cval:
                terms[quads[r]] = cval
        gens.append(Polynomial.from_dict(terms))
    entry = CorpusEntry(
        name=f"gorenstein-551-s{seed}",
        field=field,
        variables=tuple(f"x{i}" for i in range(e)),
        generators=tuple(gens),
        variable_tags=None,
        declared={"dim": 0, "cm": True, "koszul": True},
        expected={
            "hilbert": [1, 5, 5, 1, 0],
            "betti": {
                (0, 0): 1,
                (1, 2): 10,
                (2, 3): 16,
                (3, 5): 16,
                (4, 6): 10,
                (5, 8): 1,
            },
        },
        window=(5, 8),
        seed=seed,
    )
    entry.remake = lambda s: apolarity_gorenstein(s, field)
    return entry


def complete_intersection_quadrics(c: int, e: int, field: FieldSpec = QQ) -> CorpusEntry:
    """x_1^2, ..., x_c^2 in e variables; syzygy degrees are exactly 2a."""
    if c > e:
        raise ValueError("need c <= e")
    gens = []
    for i in range(c):
        ex = [0] * e
        ex[i] = 2
        gens.append(Polynomial.monomial(ex))
    tags = tuple(tuple(1 if k == v else 0 for k in range(e)) for v in range(e))
    return CorpusEntry(
        name=f"ci-quadrics-{c}-{e}",
        field=field,
        variables=tuple(f"x{i}" for i in range(e)),
        generators=tuple(gens),
        variable_tags=tags,
        declared={"dim": e - c, "cm": True, "koszul": True},
        expected={
            "betti": {(i, 2 * i): math.comb(c, i) for i in range(c + 1)},
            "t": {i: 2 * i for i in range(c + 1)},
            "hilbert": hilbert_from_numerator(
                [math.comb(c, k) for k in range(c + 1)], e - c, 4
            ),
        },
        window=(c, 2 * c + (2 if c < e else 0)),
    )


# -- verification -----------------------------------------------------------


class CorpusMismatch(AssertionError):
    pass


def _check_expected(entry: CorpusEntry) -> list:
    from .audits import AlgebraAudit

    a = entry.algebra()
    exp = entry.expected
    checked = []

    def fact(label, ok, got):
        if not ok:
            raise CorpusMismatch(f"{entry.name}: {label} mismatch, got {got}")
        checked.append(label)

    if "e" in exp:
        fact("generator count", a.e == exp["e"], a.e)
    if "defining_quadrics" in exp:
        fact(
            "defining quadrics",
            len(a.generators) == exp["defining_quadrics"]
            and all(g.degree() == 2 for g in a.generators),
            len(a.generators),
        )
    if "hilbert" in exp:
        want = list(exp["hilbert"])
        got = a.hilbert_function(len(want) - 1)
        fact("hilbert function", got == want, got)
    if "hilbert_numerator" in exp:
        want = hilbert_from_numerator(exp["hilbert_numerator"], entry.declared["dim"], 6)
        got = a.hilbert_function(6)
        fact("hilbert numerator", got == want, got)

    needs_audit = any(k in exp for k in ("t1", "t2", "t", "betti", "nq", "nq_at_least", "reg_window"))
    if not needs_audit:
        return checked
    i_max, j_max = entry.window if entry.window else (a.e, 2 * a.e)
    audit = AlgebraAudit(a, i_max=i_max, j_max=j_max)

    if "betti" in exp:
        table = audit.kc.betti_table(label=entry.name)
        got = dict(table.entries)
        fact("betti table", got == dict(exp["betti"]), got)
    if "t1" in exp:
        got = audit.t(1)
        fact("t_1", got == (exp["t1"], True), got)
    if "t2" in exp:
        got = audit.t(2)
        fact("t_2", got == (exp["t2"], True), got)
    if "t" in exp:
        for i, v in sorted(exp["t"].items()):
            got = audit.t(i)
            fact(f"t_{i}", got[0] == v, got)
    if exp.get("nq") is not None:
        got = audit.nq()
        fact("N_q level", got[0] == exp["nq"], got)
    if exp.get("nq_at_least") is not None:
        got = audit.nq()
        fact("N_q floor", got[0] >= exp["nq_at_least"], got)
    if "reg_window" in exp:
        got = audit.reg(i_max)
        fact("windowed regularity", got[0] == exp["reg_window"], got)
    return checked


def verify_entry(entry: CorpusEntry, reseed_limit: int = 3):
    """Check every expected fact; reseed randomized entries on mismatch.

    Returns (entry, list of checked fact labels); the entry may differ from
    the input when a reseed was needed.
    """
    current = entry
    for attempt in range(reseed_limit + 1):
        try:
            return current, _check_expected(current)
        except CorpusMismatch:
            if current.remake is None or attempt == reseed_limit:
                raise
            current = current.remake(current.seed + attempt + 1)
    raise RuntimeError("unreachable")


# -- the built-in corpus ----------------------------------------------------


def builtin_corpus() -> list:
    """The curated entry list every full audit sweep runs over."""
    return [
        edge_ideal(3, [(0, 1), (1, 2)], name="path3"),
        edge_ideal(4, [(0, 1), (1, 2), (2, 3)], name="path4"),
        edge_ideal(4, [(0, 1), (1, 2), (2, 3), (3, 0)], name="cycle4"),
        edge_ideal(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], field=GF(3), name="cycle5"),
        edge_ideal(3, [(0, 1), (1, 2), (2, 0)], name="triangle"),
        edge_ideal(4, list(combinations(range(4), 2)), field=GF(2), name="k4"),
        complete_intersection_quadrics(2, 2),
        complete_intersection_quadrics(3, 3, field=GF(2)),
        complete_intersection_quadrics(1, 2),
        CorpusEntry(
            name="cubic-hypersurface",
            field=QQ,
            variables=("x",),
            generators=(Polynomial.monomial([3]),),
            variable_tags=((1,),),
            declared={"dim": 0, "cm": True},
            expected={"hilbert": [1, 1, 1, 0], "t": {1: 3}},
            window=(1, 4),
        ),
        veronese_presentation(2, 1),
        # the two big Veronese entries run over the generic prime so strand
        # ranks stay on the vectorized word-size route
        veronese_presentation(2, 2, field=GENERIC_FIELD),
        veronese_presentation(3, 1, field=GENERIC_FIELD),
        segre_presentation((1, 1)),
        segre_presentation((2, 1)),
        segre_presentation((1, 1, 1), field=GENERIC_FIELD),
        plucker_presentation(4),
        generic_quadrics(4, 5, seed=1),
        generic_quadrics(3, 2, seed=1),
        apolarity_gorenstein(seed=1),
    ]
