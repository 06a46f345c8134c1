"""Verdict engine for the syzygy-degree inequalities.

Each check_* function evaluates one bound for a single algebra and reports
verified / violated / hypothesis-not-met / truncated, together with every
number entering the inequality.  All data is exact; verdicts follow a
one-sided calculus: degree observations inside a finite window are lower
bounds for the true values, so an inequality is only declared verified when
its left side is certified, and only declared violated when its right side
is certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .goodprimes import is_good
from .koszul import NEG_INF, KoszulComplex, WindowTooSmall, koszul_of_algebra
from .resolution import Resolution, resolve, resolve_residue_field, tor_dimension
from .rings import (
    LinearizedModule,
    QuotientAlgebra,
    krull_dim_estimate,
    residue_field_module,
)

VERIFIED = "verified"
VIOLATED = "violated"
HYP_NOT_MET = "hypothesis-not-met"
TRUNCATED = "truncated"


def verdict_leq(lhs, lhs_cert: bool, rhs, rhs_cert: bool) -> str:
    """Decide 'lhs <= rhs' when both sides are observed from below."""
    if lhs <= rhs:
        return VERIFIED if lhs_cert else TRUNCATED
    return VIOLATED if rhs_cert else TRUNCATED


def _fmt(v) -> str:
    return "-inf" if v == NEG_INF else str(v)


@dataclass(frozen=True)
class CheckResult:
    check: str
    statement: str
    params: dict
    verdict: str
    witness: dict

    def line(self) -> str:
        ps = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.verdict:<18} {self.check:<24} {ps:<18} {self.statement}"

    def record(self) -> dict:
        return {
            "check": self.check,
            "statement": self.statement,
            "params": dict(self.params),
            "verdict": self.verdict,
            "witness": dict(self.witness),
        }


@dataclass(frozen=True)
class PregStatus:
    """Observed partial regularity of the residue field over the quotient."""

    n: int
    value: float
    certified: bool
    source: str  # declared-koszul | resolution | resolution-probe | free

    @property
    def state(self) -> str:
        if self.value > 0:
            return "failed"
        return "met" if self.certified else "truncated"


@dataclass(frozen=True)
class AlgebraInvariants:
    e: int
    characteristic: int
    dim: Optional[int]
    dim_source: str  # declared | estimated | unknown
    t: tuple  # (value, certified) per column 0..i_max
    reg: tuple  # (value, certified) per level 0..i_max
    m_R: Optional[int]
    m_R_certified: bool
    pd_observed: int
    pd_certified: bool
    nq: int
    nq_certified: bool

    def lines(self) -> list:
        ts = " ".join(_fmt(v) for v, _ in self.t)
        rs = " ".join(_fmt(v) for v, _ in self.reg)
        return [
            f"e={self.e} char={self.characteristic} "
            f"dim={self.dim if self.dim is not None else '?'}({self.dim_source})",
            f"t: {ts}",
            f"reg: {rs}",
            f"m_R={self.m_R if self.m_R is not None else '?'} "
            f"pd{'=' if self.pd_certified else '>='}{self.pd_observed} "
            f"N_q max q={self.nq}",
        ]


class AlgebraAudit:
    """Cached invariants and hypothesis certificates for one algebra.

    Strand homology of the Koszul complex supplies the column top degrees
    t_i over the ambient polynomial ring; minimal resolutions over the
    quotient supply the linearity certificates that several bounds take as
    hypotheses.
    """

    def __init__(
        self,
        algebra: QuotientAlgebra,
        i_max: Optional[int] = None,
        j_max: Optional[int] = None,
        label: Optional[str] = None,
    ):
        self.algebra = algebra
        self.label = label or algebra.declared.get("name", "R")
        if j_max is None:
            # wide enough for every column of a quadratic algebra and for
            # one generator of any degree per column otherwise
            j_max = algebra.e * max(2, algebra.max_generator_degree)
        self.kc = koszul_of_algebra(algebra, i_max=i_max, j_max=j_max)
        self.e = algebra.e
        self.i_max = self.kc.i_max
        self.characteristic = algebra.field.characteristic
        self._t: dict = {}
        self._preg: dict = {}
        self._res_k: Optional[Resolution] = None
        self._koszul_spot_checked = False
        self._module_audits: dict = {}

    # -- column invariants over the ambient polynomial ring ----------------

    def t(self, i: int):
        """(top degree of column i, certified flag); columns past the
        variable count are empty for free."""
        if i < 0 or i > self.e:
            return NEG_INF, True
        if i not in self._t:
            self._t[i] = self.kc.t_value(i)
        return self._t[i]

    def reg(self, n: int):
        """(max of t_i - i over i <= n, certified flag)."""
        if n < 0:
            return NEG_INF, True
        best = NEG_INF
        cert = True
        for i in range(min(n, self.e) + 1):
            v, c = self.t(i)
            cert = cert and c
            if v != NEG_INF and v - i > best:
                best = v - i
        return best, cert

    def pd(self):
        """(largest column with a nonzero entry, certified flag)."""
        top = 0
        cert = True
        for i in range(self.i_max + 1):
            v, c = self.t(i)
            cert = cert and c
            if v != NEG_INF:
                top = i
        return top, cert

    def m_R(self):
        """(least i with t_i >= t_{i+1}, certified flag); -inf counts as
        smaller, so the scan always terminates by the projective dimension."""
        for i in range(self.e + 1):
            vi, ci = self.t(i)
            vn, cn = self.t(i + 1)
            if vi >= vn:
                cert = ci and cn and all(self.t(j)[1] for j in range(i))
                return i, cert
        return None, False

    def nq(self):
        """(largest q in the window with reg_q = 1, certified flag)."""
        q, cert = 0, True
        for i in range(1, self.i_max + 1):
            r, c = self.reg(i)
            if r > 1:
                break
            if r == 1:
                q, cert = i, c
        return q, cert

    def invariants(self) -> AlgebraInvariants:
        dim = self.algebra.declared.get("dim")
        source = "declared"
        if dim is None:
            est, stable = krull_dim_estimate(
                self.algebra, 2 * self.algebra.max_generator_degree + self.e + 2
            )
            dim, source = (est, "estimated") if stable else (None, "unknown")
        t = tuple(self.t(i) for i in range(self.i_max + 1))
        reg = tuple(self.reg(n) for n in range(self.i_max + 1))
        assert t[0][0] == 0, "column zero must be a single generator in degree zero"
        vals = [r for r, _ in reg]
        assert all(x <= y for x, y in zip(vals, vals[1:])), "reg must be monotone"
        m, mc = self.m_R()
        pd, pdc = self.pd()
        q, qc = self.nq()
        return AlgebraInvariants(
            e=self.e,
            characteristic=self.characteristic,
            dim=dim,
            dim_source=source,
            t=t,
            reg=reg,
            m_R=m,
            m_R_certified=mc,
            pd_observed=pd,
            pd_certified=pdc,
            nq=q,
            nq_certified=qc,
        )

    # -- linearity of the residue field over the quotient ------------------

    def _verify_declared_koszul(self):
        # a wrong declaration would silently turn hypotheses into facts, so
        # spot-check the first two steps of the resolution of k
        if not self._koszul_spot_checked:
            res = resolve_residue_field(self.algebra, 2)
            val, _ = res.partial_regularity(2)
            if val > 0:
                raise ValueError(
                    f"{self.label}: declared koszul, but k has a nonlinear "
                    f"syzygy within two steps"
                )
            self._koszul_spot_checked = True

    def resolution_of_k(self, steps: int) -> Resolution:
        if self._res_k is None or self._res_k.steps < steps:
            self._res_k = resolve_residue_field(self.algebra, steps)
        return self._res_k

    def preg_k(self, n: int) -> PregStatus:
        """Observed preg of k over the quotient through step n."""
        if n in self._preg:
            return self._preg[n]
        if self.algebra.declared.get("koszul"):
            self._verify_declared_koszul()
            st = PregStatus(n, 0, True, "declared-koszul")
        else:
            # an early nonlinear syzygy settles every larger n cheaply
            probe = None
            for m in sorted(self._preg):
                if m <= n and self._preg[m].value > 0:
                    probe = self._preg[m]
                    break
            if probe is None and n > 2 and 2 not in self._preg:
                probe = self.preg_k(2)
                if probe.value == 0:
                    probe = None
            if probe is not None and probe.value > 0:
                st = PregStatus(n, probe.value, False, "resolution-probe")
            else:
                res = self.resolution_of_k(n)
                val, cert = res.partial_regularity(n)
                st = PregStatus(n, val, cert, "resolution")
        self._preg[n] = st
        return st

    # -- module sides ------------------------------------------------------

    def module_audit(self, module: LinearizedModule) -> "ModuleAudit":
        key = id(module)
        if key not in self._module_audits:
            self._module_audits[key] = ModuleAudit(self, module)
        return self._module_audits[key]

    def comb_invertible(self, n: int, k: int) -> bool:
        p = self.characteristic
        return True if p == 0 else math.comb(n, k) % p != 0


class ModuleAudit:
    """Strand data and quotient-side resolution for one coefficient module."""

    def __init__(self, audit: AlgebraAudit, module: LinearizedModule):
        self.audit = audit
        self.module = module
        if module.covers_algebra:
            self.kc = audit.kc
        else:
            top = module.vanishes_above()
            # a proven vanishing degree caps every strand column at e + top
            jm = audit.e + top if top is not None else module.max_degree
            self.kc = KoszulComplex(module, i_max=audit.e, j_max=jm)
        self._t: dict = {}
        self._res: Optional[Resolution] = None

    def t_S(self, i: int):
        if i < 0 or i > self.audit.e:
            return NEG_INF, True
        if i not in self._t:
            try:
                self._t[i] = self.kc.t_value(i)
            except WindowTooSmall:
                self._t[i] = (NEG_INF, False)
        return self._t[i]

    def reg_S(self, n: int):
        if n < 0:
            return NEG_INF, True
        best = NEG_INF
        cert = True
        for i in range(min(n, self.audit.e) + 1):
            v, c = self.t_S(i)
            cert = cert and c
            if v != NEG_INF and v - i > best:
                best = v - i
        return best, cert

    def preg_R(self, n: int) -> PregStatus:
        """Observed preg of the module over the quotient through step n."""
        if self.module.covers_algebra:
            # the ring is free over itself, so its resolution stops at once
            return PregStatus(n, 0, True, "free")
        if self.module.label == "k":
            return self.audit.preg_k(n)
        res = self.resolution(n)
        val, cert = res.partial_regularity(n)
        return PregStatus(n, val, cert, "resolution")

    def resolution(self, steps: int) -> Resolution:
        if self._res is None or self._res.steps < steps:
            self._res = resolve(self.module, steps, self._window(steps))
        return self._res

    def _window(self, steps: int) -> int:
        a = self.audit.algebra
        top = self.module.vanishes_above()
        hf = a.hilbert_function(2 * a.e)
        ring_top = None
        if hf[-1] == 0:
            nz = [d for d, v in enumerate(hf) if v]
            ring_top = nz[-1] if nz else 0
        if top is not None and ring_top is not None:
            want = top + max(1, ring_top) * max(1, steps)
        else:
            want = (top if top is not None else 0) + 2 * steps + 2
        return min(want, self.module.max_degree)


# ---------------------------------------------------------------------------
# individual checks


def _gate(check: str, statement: str, params: dict, reasons: list):
    """Fold hypothesis statuses into a blocking CheckResult, if any."""
    failed = [r for r in reasons if r[1] == "failed"]
    trunc = [r for r in reasons if r[1] == "truncated"]
    if failed:
        names = "; ".join(r[0] for r in failed)
        return CheckResult(check, statement, params, HYP_NOT_MET, {"failing": names})
    if trunc:
        names = "; ".join(r[0] for r in trunc)
        return CheckResult(check, statement, params, TRUNCATED, {"unsettled": names})
    return None


def check_kb(audit: AlgebraAudit, n: Optional[int] = None) -> list:
    """Columns grow at most twice as fast as their index, granted an
    initially linear resolution of k over the quotient."""
    if n is None:
        n = audit.i_max if audit.algebra.declared.get("koszul") else 2
    lin = audit.preg_k(n + 1)
    params = {"n": n}
    stmt = "t[i] <= 2i for i <= n"
    gate = _gate(
        "double-slope-bound",
        stmt,
        params,
        [(f"k linear through step {n + 1} (observed preg {_fmt(lin.value)})", lin.state)],
    )
    if gate is not None:
        return [gate]
    out = []
    for i in range(1, min(n, audit.i_max) + 1):
        ti, ci = audit.t(i)
        verdict = verdict_leq(ti, ci, 2 * i, True)
        out.append(
            CheckResult(
                "double-slope-bound",
                f"t[{i}] <= {2 * i}",
                {"n": n, "i": i},
                verdict,
                {"t_i": _fmt(ti), "bound": 2 * i},
            )
        )
    return out


def _slot_sum(parts) -> tuple:
    """Sum (value, certified) pairs, absorbing -inf."""
    total = 0
    cert = True
    for v, c in parts:
        cert = cert and c
        if v == NEG_INF:
            return NEG_INF, cert
        total += v
    return total, cert


def _slot_max(slots) -> tuple:
    val = max(v for v, _ in slots)
    return val, all(c for _, c in slots)


def check_subad(audit: AlgebraAudit, maudit: ModuleAudit, a: int, b: int) -> list:
    """Three-slot bound for the top degree of column a+b of a module."""
    params = {"a": a, "b": b, "module": maudit.module.label}
    stmt = (
        f"t[{a + b}](M) <= max(t[{a}]+t[{b}](M), "
        f"reg[{a - 1}]+preg_R[{a + b}](M)+{a + b}, "
        f"reg[{a - 1}]+reg[{b - 1}](M)+preg_R[{a + b + 1}](k)+{a + b + 1})"
    )
    pd, pd_cert = audit.pd()
    reasons = []
    if not audit.comb_invertible(a + b, b):
        reasons.append((f"C({a + b},{b}) invertible in k", "failed"))
    if a + b > pd:
        reasons.append((f"a+b <= pd (observed pd {pd})", "failed" if pd_cert else "truncated"))
    gate = _gate("three-slot-bound", stmt, params, reasons)
    if gate is not None:
        return [gate]

    lhs, lhs_cert = maudit.t_S(a + b)
    pm = maudit.preg_R(a + b)
    pk = audit.preg_k(a + b + 1)
    s1 = _slot_sum([audit.t(a), maudit.t_S(b)])
    s2 = _slot_sum([audit.reg(a - 1), (pm.value, pm.certified), (a + b, True)])
    s3 = _slot_sum(
        [
            audit.reg(a - 1),
            maudit.reg_S(b - 1),
            (pk.value, pk.certified),
            (a + b + 1, True),
        ]
    )
    rhs, rhs_cert = _slot_max([s1, s2, s3])
    witness = {
        "lhs": _fmt(lhs),
        "slot_product": _fmt(s1[0]),
        "slot_mixed": _fmt(s2[0]),
        "slot_regs": _fmt(s3[0]),
        "preg_R_M": _fmt(pm.value),
        "preg_R_k": _fmt(pk.value),
    }
    out = [
        CheckResult(
            "three-slot-bound",
            stmt,
            params,
            verdict_leq(lhs, lhs_cert, rhs, rhs_cert),
            witness,
        )
    ]

    # specialization: both quotient-side preg terms certified zero
    if pm.value == 0 and pm.certified and pk.value == 0 and pk.certified:
        rhs2, rhs2_cert = _slot_max(
            [s1, _slot_sum([audit.reg(a - 1), maudit.reg_S(b - 1), (a + b + 1, True)])]
        )
        out.append(
            CheckResult(
                "two-slot-bound",
                f"t[{a + b}](M) <= max(t[{a}]+t[{b}](M), "
                f"reg[{a - 1}]+reg[{b - 1}](M)+{a + b + 1})",
                params,
                verdict_leq(lhs, lhs_cert, rhs2, rhs2_cert),
                {"lhs": _fmt(lhs), "rhs": _fmt(rhs2)},
            )
        )
    return out


def check_subadKoszul(audit: AlgebraAudit, a: int, b: int) -> list:
    """Subadditivity up to a constant for the ring itself, under an
    invertibility hypothesis and within the initial strictly rising range."""
    params = {"a": a, "b": b}
    lin = audit.preg_k(a + b + 1)
    m, m_cert = audit.m_R()
    reasons = []
    if not audit.comb_invertible(a + b, a):
        reasons.append((f"C({a + b},{a}) invertible in k", "failed"))
    reasons.append(
        (f"k linear through step {a + b + 1} (observed preg {_fmt(lin.value)})", lin.state)
    )
    if m is None:
        reasons.append(("max(a,b) <= m_R (m_R undetermined)", "truncated"))
    elif max(a, b) > m:
        reasons.append((f"max(a,b) <= m_R = {m}", "failed" if m_cert else "truncated"))
    elif not m_cert:
        reasons.append((f"m_R = {m} certified", "truncated"))

    stmt = f"t[{a + b}] <= max(t[{a}]+t[{b}], t[{a - 1}]+t[{b - 1}]+3)"
    gate = _gate("koszul-three-slot", stmt, params, reasons)
    if gate is not None:
        return [gate]

    lhs, lhs_cert = audit.t(a + b)
    s1 = _slot_sum([audit.t(a), audit.t(b)])
    s2 = _slot_sum([audit.t(a - 1), audit.t(b - 1), (3, True)])
    rhs, rhs_cert = _slot_max([s1, s2])
    out = [
        CheckResult(
            "koszul-three-slot",
            stmt,
            params,
            verdict_leq(lhs, lhs_cert, rhs, rhs_cert),
            {"lhs": _fmt(lhs), "slot_sum": _fmt(s1[0]), "slot_shift": _fmt(s2[0])},
        )
    ]
    if b == 1:
        ta, ca = audit.t(a)
        r, rc = _slot_sum([(ta, ca), (2, True)])
        out.append(
            CheckResult(
                "koszul-consecutive",
                f"t[{a + 1}] <= t[{a}]+2",
                params,
                verdict_leq(lhs, lhs_cert, r, rc),
                {"lhs": _fmt(lhs), "rhs": _fmt(r)},
            )
        )
    if b >= 2:
        r, rc = _slot_sum([audit.t(a), audit.t(b), (1, True)])
        out.append(
            CheckResult(
                "koszul-plus-one",
                f"t[{a + b}] <= t[{a}]+t[{b}]+1",
                params,
                verdict_leq(lhs, lhs_cert, r, rc),
                {"lhs": _fmt(lhs), "rhs": _fmt(r)},
            )
        )
    return out


def check_conjecture(audit: AlgebraAudit) -> CheckResult:
    """Plain subadditivity of column top degrees over all splittings of
    each column up to the projective dimension.  A genuine violation is a
    finding, so it ships with a machine-readable counterexample bundle."""
    pd, pd_cert = audit.pd()
    stmt = "t[a+b] <= t[a]+t[b] for a,b >= 1, a+b <= pd"
    checked = skipped = truncated = 0
    worst = None  # smallest slack
    counterexamples = []
    for s in range(2, pd + 1):
        for a in range(1, s // 2 + 1):
            b = s - a
            lin = audit.preg_k(s + 1)
            if lin.state == "failed":
                skipped += 1
                continue
            lhs, lhs_cert = audit.t(s)
            rhs, rhs_cert = _slot_sum([audit.t(a), audit.t(b)])
            if lin.state == "truncated":
                lhs_cert = False
            v = verdict_leq(lhs, lhs_cert, rhs, rhs_cert)
            if v == VIOLATED:
                counterexamples.append(
                    {
                        "label": audit.label,
                        "characteristic": audit.characteristic,
                        "a": a,
                        "b": b,
                        "t_a": _fmt(audit.t(a)[0]),
                        "t_b": _fmt(audit.t(b)[0]),
                        "t_ab": _fmt(lhs),
                        "betti": audit.kc.betti_table(audit.label).records(),
                    }
                )
            elif v == TRUNCATED:
                truncated += 1
            else:
                checked += 1
                if lhs != NEG_INF and rhs != NEG_INF:
                    slack = rhs - lhs
                    if worst is None or slack < worst[0]:
                        worst = (slack, a, b)
    witness = {"pairs_checked": checked, "pairs_skipped": skipped}
    if worst is not None:
        witness["min_slack"] = worst[0]
        witness["tightest_pair"] = (worst[1], worst[2])
    if counterexamples:
        witness["counterexamples"] = counterexamples
        verdict = VIOLATED
    elif truncated:
        witness["pairs_truncated"] = truncated
        verdict = TRUNCATED
    elif checked:
        verdict = VERIFIED
    elif not pd_cert:
        verdict = TRUNCATED
    else:
        verdict = HYP_NOT_MET
    return CheckResult("subadditivity-conjecture", stmt, {"pd": pd}, verdict, witness)


def check_partial_reg(audit: AlgebraAudit, a: int, b: int) -> list:
    """Stepwise bounds on partial regularity under a good characteristic."""
    params = {"a": a, "b": b}
    lin = audit.preg_k(a + b + 1)
    good = is_good(a + b, audit.characteristic)
    reasons = [
        (f"k linear through step {a + b + 1} (observed preg {_fmt(lin.value)})", lin.state)
    ]
    if not good.good:
        reasons.append((f"characteristic good for {a + b}", "failed"))
    if b == 1:
        stmt = f"reg[{a + 1}] <= reg[{a}]+1"
        gate = _gate("reg-step", stmt, params, reasons)
        if gate is not None:
            return [gate]
        lhs, lc = audit.reg(a + 1)
        rhs, rc = _slot_sum([audit.reg(a), (1, True)])
        return [
            CheckResult(
                "reg-step",
                stmt,
                params,
                verdict_leq(lhs, lc, rhs, rc),
                {"lhs": _fmt(lhs), "rhs": _fmt(rhs)},
            )
        ]
    if b < 2:
        return []
    stmt = f"reg[{a + b}] <= max(reg[{a}]+reg[{b}], reg[{a - 1}]+reg[{b - 1}]+1)"
    gate = _gate("reg-two-slot", stmt, params, reasons)
    if gate is not None:
        return [gate]
    lhs, lc = audit.reg(a + b)
    s1 = _slot_sum([audit.reg(a), audit.reg(b)])
    s2 = _slot_sum([audit.reg(a - 1), audit.reg(b - 1), (1, True)])
    rhs, rc = _slot_max([s1, s2])
    return [
        CheckResult(
            "reg-two-slot",
            stmt,
            params,
            verdict_leq(lhs, lc, rhs, rc),
            {"lhs": _fmt(lhs), "slot_sum": _fmt(s1[0]), "slot_shift": _fmt(s2[0])},
        )
    ]


def check_Nq_bounds(
    audit: AlgebraAudit, q: Optional[int] = None, n: Optional[int] = None
) -> list:
    """Column bounds for rings whose resolution starts with q linear steps."""
    q_obs, q_cert = audit.nq()
    if q is None:
        q, q_src = q_obs, q_cert
    else:
        q_src = q_cert and q <= q_obs
    params = {"q": q}
    out = []
    if q < 2:
        return [
            CheckResult(
                "nq-strict-bound",
                "t[i] <= 2i-1 for 2 <= i <= n",
                params,
                HYP_NOT_MET,
                {"failing": f"N_q with q >= 2 (observed q {q_obs})"},
            )
        ]
    if not q_src:
        return [
            CheckResult(
                "nq-strict-bound",
                "t[i] <= 2i-1 for 2 <= i <= n",
                params,
                TRUNCATED,
                {"unsettled": f"N_{q} not certified in the window"},
            )
        ]
    if n is None:
        n = audit.i_max if audit.algebra.declared.get("koszul") else 2
    lin = audit.preg_k(n + 1)
    p = audit.characteristic
    gate = _gate(
        "nq-strict-bound",
        "t[i] <= 2i-1 for 2 <= i <= n",
        {"q": q, "n": n},
        [
            (f"k linear through step {n + 1} (observed preg {_fmt(lin.value)})", lin.state),
            ("n >= 2", "met" if n >= 2 else "failed"),
        ],
    )
    if gate is not None:
        out.append(gate)
    else:
        good_all = True
        for i in range(2, min(n, audit.i_max) + 1):
            ti, ci = audit.t(i)
            out.append(
                CheckResult(
                    "nq-strict-bound",
                    f"t[{i}] <= {2 * i - 1}",
                    {"q": q, "n": n, "i": i},
                    verdict_leq(ti, ci, 2 * i - 1, True),
                    {"t_i": _fmt(ti)},
                )
            )
            if is_good(i, p).good:
                bound = 2 * (i // (q + 1)) + i + (0 if i % (q + 1) == 0 else 1)
                out.append(
                    CheckResult(
                        "nq-good-prime-bound",
                        f"t[{i}] <= {bound}",
                        {"q": q, "n": n, "i": i},
                        verdict_leq(ti, ci, bound, True),
                        {"t_i": _fmt(ti), "floor_term": 2 * (i // (q + 1))},
                    )
                )
            else:
                good_all = False
        if n >= 2:
            rn, rc = audit.reg(n)
            bound = 2 * (n // (q + 1)) + 1
            if good_all:
                out.append(
                    CheckResult(
                        "nq-regularity-bound",
                        f"reg[{n}] <= {bound}",
                        {"q": q, "n": n},
                        verdict_leq(rn, rc, bound, True),
                        {"reg_n": _fmt(rn)},
                    )
                )
            else:
                out.append(
                    CheckResult(
                        "nq-regularity-bound",
                        f"reg[{n}] <= {bound}",
                        {"q": q, "n": n},
                        HYP_NOT_MET,
                        {"failing": f"characteristic good for every step through {n}"},
                    )
                )

    # conditional route: q-step subadditivity premise checked on the window
    h, h_cert = audit.pd()
    premise = "met" if h_cert else "truncated"
    fail_i = None
    for i in range(1, h - q + 1):
        lhs, lc = audit.t(i + q)
        rhs, rc = _slot_sum([audit.t(i), audit.t(q)])
        v = verdict_leq(lhs, lc, rhs, rc)
        if v == VIOLATED:
            premise, fail_i = "failed", i
            break
        if v == TRUNCATED:
            premise = "truncated"
    stmt = f"t[i] <= ceil(i/{q})+i for i >= 1"
    if premise == "failed":
        out.append(
            CheckResult(
                "nq-conditional-bound",
                stmt,
                params,
                HYP_NOT_MET,
                {"failing": f"t[i+{q}] <= t[i]+t[{q}] fails at i={fail_i}"},
            )
        )
    elif premise == "truncated":
        out.append(
            CheckResult(
                "nq-conditional-bound",
                stmt,
                params,
                TRUNCATED,
                {"unsettled": "q-step subadditivity premise not settled on the window"},
            )
        )
    else:
        for i in range(1, h + 1):
            ti, ci = audit.t(i)
            bound = -(-i // q) + i
            out.append(
                CheckResult(
                    "nq-conditional-bound",
                    f"t[{i}] <= {bound}",
                    {"q": q, "i": i},
                    verdict_leq(ti, ci, bound, True),
                    {"t_i": _fmt(ti)},
                )
            )
        rr, rc = audit.reg(h)
        out.append(
            CheckResult(
                "nq-conditional-reg",
                f"reg <= ceil({h}/{q})",
                params,
                verdict_leq(rr, rc, -(-h // q), True),
                {"reg": _fmt(rr)},
            )
        )
    return out


def check_mR_bounds(audit: AlgebraAudit) -> CheckResult:
    """The first plateau of the column top degrees sits between the
    codimension and the projective dimension."""
    inv_dim = audit.algebra.declared.get("dim")
    source = "declared"
    if inv_dim is None:
        inv_dim, stable = krull_dim_estimate(
            audit.algebra, 2 * audit.algebra.max_generator_degree + audit.e + 2
        )
        source = "estimated"
        if not stable:
            return CheckResult(
                "plateau-bounds",
                "e - dim <= m_R <= pd",
                {},
                TRUNCATED,
                {"unsettled": "Krull dimension estimate did not stabilize"},
            )
    m, m_cert = audit.m_R()
    pd, pd_cert = audit.pd()
    lower = audit.e - inv_dim
    params = {"dim": inv_dim, "dim_source": source}
    witness = {"e": audit.e, "dim": inv_dim, "m_R": m, "pd": pd}
    if m is None or not m_cert:
        return CheckResult(
            "plateau-bounds",
            "e - dim <= m_R <= pd",
            params,
            TRUNCATED,
            {"unsettled": "m_R not certified in the window", **witness},
        )
    low_ok = lower <= m
    up = verdict_leq(m, True, pd, pd_cert)
    if not low_ok or up == VIOLATED:
        verdict = VIOLATED
    elif up == TRUNCATED:
        verdict = TRUNCATED
    else:
        verdict = VERIFIED
    return CheckResult(
        "plateau-bounds",
        f"{audit.e} - {inv_dim} <= m_R <= pd",
        params,
        verdict,
        witness,
    )


def _module_top(mod: LinearizedModule):
    """(top nonzero degree, certified); None means not provably finite."""
    cap = mod.vanishes_above()
    if cap is None:
        return None, False
    for d in range(min(cap, mod.max_degree), mod.min_degree - 1, -1):
        if mod.known_dim(d):
            return d, True
    return NEG_INF, True


def _tor_top(
    res: Resolution,
    nmod: LinearizedModule,
    i: int,
    n_top,
    assume_complete: bool = False,
) -> tuple:
    """(top degree of the i-th derived tensor piece, certified flag).

    The piece is a subquotient of the i-th free module tensored with the
    coefficient module, so degrees above (top generator + top of N) are
    provably zero whenever both tops are known.
    """
    gtop, gcert = res.t_value(i)
    if assume_complete:
        gcert = True
    if gtop == NEG_INF:
        return NEG_INF, gcert
    if n_top == NEG_INF:
        return NEG_INF, True
    lo = min(res.stages[i].gen_degrees) + nmod.min_degree
    if n_top is None:
        hi, cert = gtop + nmod.max_degree, False
    else:
        hi, cert = gtop + n_top, gcert
    top = NEG_INF
    for j in range(lo, hi + 1):
        try:
            if tor_dimension(res, nmod, i, j) > 0:
                top = j
        except WindowTooSmall:
            cert = False
            break
    return top, cert


def _usable_window(mod: LinearizedModule, want: int) -> int:
    d = mod.min_degree
    while d + 1 <= want and mod.known_dim(d + 1) is not None:
        d += 1
    return d


def _is_residue_field(mod: LinearizedModule) -> bool:
    return (
        mod.label == "k"
        and mod.min_degree == 0
        and mod.gen_degree_max == 0
        and mod.known_dim(0) == 1
        and mod.known_dim(1) == 0
    )


def check_elem1(
    audit: AlgebraAudit,
    lmod: LinearizedModule,
    nmod: LinearizedModule,
    i_range=(1, 2),
) -> list:
    """Top degree of a derived tensor piece against the top of one factor
    plus the syzygy growth of the other; both sides computed independently."""
    lo_i, hi_i = i_range
    top_l, top_l_cert = _module_top(lmod)
    params = {"L": lmod.label, "N": nmod.label}
    if top_l is None:
        return [
            CheckResult(
                "tor-top-bound",
                "top(Tor_i(L,N)) <= top(L) + t_i(N)",
                params,
                HYP_NOT_MET,
                {"failing": "top(L) not provably finite"},
            )
        ]
    # declared Koszulness pins every column of the resolution of k to one
    # degree, which upgrades the window observations to certificates
    koszul = bool(audit.algebra.declared.get("koszul"))
    if _is_residue_field(lmod):
        res_l = audit.resolution_of_k(hi_i + 1)
        assume_l = koszul
    else:
        spread = max(2, audit.algebra.max_generator_degree)
        want = (top_l if top_l != NEG_INF else 0) + spread * (hi_i + 1)
        res_l = resolve(lmod, hi_i + 1, _usable_window(lmod, want))
        assume_l = False
    res_k = audit.resolution_of_k(hi_i + 1)
    n_top, _ = _module_top(nmod)
    out = []
    for i in range(lo_i, hi_i + 1):
        lhs, lc = _tor_top(res_l, nmod, i, n_top, assume_complete=assume_l)
        ti_n, tc = _tor_top(res_k, nmod, i, n_top, assume_complete=koszul)
        rhs, rc = _slot_sum([(top_l, top_l_cert), (ti_n, tc)])
        out.append(
            CheckResult(
                "tor-top-bound",
                f"top(Tor_{i}(L,N)) <= top(L) + t_{i}(N)",
                {**params, "i": i},
                verdict_leq(lhs, lc, rhs, rc),
                {"lhs": _fmt(lhs), "top_L": _fmt(top_l), "t_i_N": _fmt(ti_n)},
            )
        )
    return out


# ---------------------------------------------------------------------------
# report assembly


@dataclass
class AuditReport:
    label: str
    characteristic: int
    window: dict
    invariants: AlgebraInvariants
    results: list = dc_field(default_factory=list)

    def extend(self, items):
        if isinstance(items, CheckResult):
            self.results.append(items)
        else:
            self.results.extend(items)

    def counts(self) -> dict:
        out = {VERIFIED: 0, VIOLATED: 0, HYP_NOT_MET: 0, TRUNCATED: 0}
        for r in self.results:
            out[r.verdict] += 1
        return out

    def exit_code(self) -> int:
        c = self.counts()
        if c[VIOLATED]:
            return 2
        if c[TRUNCATED]:
            return 3
        return 0

    def summary(self) -> str:
        lines = [f"audit of {self.label} (char {self.characteristic})"]
        lines += ["  " + s for s in self.invariants.lines()]
        for r in self.results:
            lines.append("  " + r.line())
        c = self.counts()
        lines.append(
            f"totals: {c[VERIFIED]} verified, {c[VIOLATED]} violated, "
            f"{c[HYP_NOT_MET]} hypothesis-not-met, {c[TRUNCATED]} truncated"
        )
        return "\n".join(lines) + "\n"

    def records(self) -> list:
        return [r.record() for r in self.results]


def default_pairs(pd: int, cap: int = 8) -> list:
    out = []
    for s in range(2, min(pd, cap) + 1):
        for a in range(1, s // 2 + 1):
            out.append((a, s - a))
    return out


CHECK_IDS = (
    "double-slope-bound",
    "three-slot-bound",
    "two-slot-bound",
    "koszul-three-slot",
    "koszul-consecutive",
    "koszul-plus-one",
    "subadditivity-conjecture",
    "reg-step",
    "reg-two-slot",
    "nq-strict-bound",
    "nq-good-prime-bound",
    "nq-regularity-bound",
    "nq-conditional-bound",
    "nq-conditional-reg",
    "plateau-bounds",
    "tor-top-bound",
)


def audit_algebra(
    algebra: QuotientAlgebra,
    i_max: Optional[int] = None,
    j_max: Optional[int] = None,
    checks: Optional[list] = None,
    pairs: Optional[list] = None,
    with_tor: bool = True,
    label: Optional[str] = None,
) -> AuditReport:
    """Run the standard battery and assemble a report.

    checks filters by check id prefix; pairs overrides the (a, b) grid.
    """
    audit = AlgebraAudit(algebra, i_max=i_max, j_max=j_max, label=label)
    inv = audit.invariants()
    report = AuditReport(
        label=audit.label,
        characteristic=audit.characteristic,
        window={"i_max": audit.i_max, "j_max": audit.kc.j_max},
        invariants=inv,
    )
    if pairs is None:
        pairs = default_pairs(inv.pd_observed)
    r_side = audit.module_audit(audit.kc.module)

    report.extend(check_kb(audit))
    for a, b in pairs:
        report.extend(check_subad(audit, r_side, a, b))
        report.extend(check_subadKoszul(audit, a, b))
        report.extend(check_partial_reg(audit, a, b))
    report.extend(check_conjecture(audit))
    report.extend(check_Nq_bounds(audit))
    report.extend(check_mR_bounds(audit))
    if with_tor:
        kmod = residue_field_module(algebra)
        report.extend(check_elem1(audit, kmod, kmod))
    if checks:
        keep = tuple(checks)
        report.results = [r for r in report.results if r.check.startswith(keep)]
    return report
