"""Cohomology rings of hyperpolygon spaces, with certificates.

Edge lengths pick out the short subsets; those index the generators A_S,
B_S on the torus side and C_S, D_S on the invariant side.  The equivariant
ring is the invariant ambient modulo the annihilator of e = a2*(x^2 - a2),
realized as the colon ideal (J : e) and checked against the predicted
presentation by D-classes.  Every membership e*D_S in J is certified twice:
by an explicit inductive combination following the peel recursion, and by
Groebner reduction; the ordinary ring is recovered by killing x and
compared against the independent degree-truncation model.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from . import linalg
from .abelianize import KirwanPresentation, RootDatum, verify_second_iso
from .cofactors import express_in_ideal
from .errors import NonGenericError, VerificationError
from .ideals import Budgets, DEFAULT_BUDGETS, Ideal, QuotientRing, formality_check
from .rings import Polynomial, VariableTable, parse_polynomial


class EdgeLengths:
    """Positive rational lengths xi_1..xi_n, generic: no subset sums to half."""

    def __init__(self, xi: Sequence):
        vals = tuple(Fraction(v) for v in xi)
        if len(vals) < 3:
            raise ValueError("need at least three edge lengths")
        if any(v <= 0 for v in vals):
            raise ValueError("edge lengths must be positive")
        self.xi = vals
        self.n = len(vals)
        self.total = sum(vals)
        half = self.total / 2
        for r in range(self.n + 1):
            for S in combinations(range(1, self.n + 1), r):
                if sum(vals[i - 1] for i in S) == half:
                    raise NonGenericError(
                        f"subset {sorted(S)} sums to half the total length",
                        witness=frozenset(S),
                    )

    def is_short(self, S: Iterable[int]) -> bool:
        s = sum(self.xi[i - 1] for i in S)
        return s < self.total - s

    def __repr__(self) -> str:
        return f"EdgeLengths({', '.join(str(v) for v in self.xi)})"


def _canon(S: Iterable[int]) -> tuple:
    return tuple(sorted(S))


class ShortSubsetTable:
    """All short subsets of {1..n}, with the distinguished elements m_S, n_S."""

    def __init__(self, lengths: EdgeLengths):
        self.n = lengths.n
        shorts = []
        for r in range(self.n + 1):
            for S in combinations(range(1, self.n + 1), r):
                if lengths.is_short(S):
                    shorts.append(frozenset(S))
        shorts.sort(key=lambda S: (len(S), _canon(S)))
        self.shorts = tuple(shorts)
        self._short_set = set(shorts)
        if len(self.shorts) != 2 ** (self.n - 1):
            raise VerificationError("short-subset count is not 2^(n-1)")
        full = frozenset(range(1, self.n + 1))
        for S in self.shorts:
            if (full - S) in self._short_set:
                raise VerificationError("a subset and its complement are both short")

    def is_short(self, S: Iterable[int]) -> bool:
        return frozenset(S) in self._short_set

    def nonempty_shorts(self) -> list:
        return [S for S in self.shorts if S]

    def m_S(self, S: Iterable[int]) -> int:
        S = frozenset(S)
        if not S or S not in self._short_set:
            raise ValueError("m_S needs a nonempty short subset")
        return min(S)

    def n_S(self, S: Iterable[int]) -> int:
        S = frozenset(S)
        if not S or S not in self._short_set:
            raise ValueError("n_S needs a nonempty short subset")
        return min(frozenset(range(1, self.n + 1)) - S)


def shorts(lengths: EdgeLengths) -> ShortSubsetTable:
    return ShortSubsetTable(lengths)


class HyperpolygonInstance:
    """One edge-length vector with its rings, classes, and caches.

    P-side ambient: Q[c_1..c_n, a, x] with relations c_i^2 - a^2 and the
    involution a -> -a; invariant-side ambient: Q[c_1..c_n, a2, x] with a2
    of degree 4 standing for a^2, relations c_i^2 - a2.  x sits last in both
    tables so localized ranks can use the block order directly.
    """

    def __init__(self, lengths: EdgeLengths, budgets: Budgets | None = None):
        self.lengths = lengths
        self.n = lengths.n
        self.table = shorts(lengths)
        self.budgets = budgets or DEFAULT_BUDGETS
        n = self.n
        cnames = tuple(f"c{i}" for i in range(1, n + 1))
        self.table_P = VariableTable(cnames + ("a", "x"), (2,) * (n + 2))
        self.table_Q = VariableTable(cnames + ("a2", "x"), (2,) * n + (4, 2))
        self.relations_P = tuple(
            parse_polynomial(self.table_P, f"c{i}^2 - a^2") for i in range(1, n + 1)
        )
        self.relations_Q = tuple(
            parse_polynomial(self.table_Q, f"c{i}^2 - a2") for i in range(1, n + 1)
        )
        self.euler_e = parse_polynomial(self.table_Q, "a2*x^2 - a2^2")
        self.euler_eprime = parse_polynomial(self.table_P, "a*x^2 - a^3")
        self._rel_ideal_Q = Ideal(self.table_Q, list(self.relations_Q))
        self._C_cache: dict = {}
        self._D_cache: dict = {}
        self._J: Ideal | None = None
        self._I: Ideal | None = None
        self._colon: Ideal | None = None

    # -- torus-side letters -------------------------------------------------

    def a_i(self, i: int) -> Polynomial:
        return parse_polynomial(self.table_P, f"1/2*c{i} + 1/2*a")

    def b_i(self, i: int) -> Polynomial:
        return parse_polynomial(self.table_P, f"1/2*c{i} - 1/2*a")

    def weyl_involution(self) -> dict:
        return {"a": parse_polynomial(self.table_P, "-a")}

    # -- level-aware generator formulas ------------------------------------
    # level l restricts every product to indices 1..l; the full instance is
    # level n.  Lower levels only appear inside certificate recursions.

    def _AB(self, S: frozenset, level: int) -> tuple:
        x = Polynomial.variable(self.table_P, "x")
        A = Polynomial.one(self.table_P)
        B = Polynomial.one(self.table_P)
        for i in range(1, level + 1):
            if i in S:
                A = A * (x - self.a_i(i))
                B = B * (x - self.b_i(i))
            else:
                A = A * self.b_i(i)
                B = B * self.a_i(i)
        return A, B

    def _even_to_Q(self, p: Polynomial) -> Polynomial:
        """Rewrite an even-in-a polynomial into the a2 ambient (a^2 -> a2)."""
        ai = self.table_P.index("a")
        terms = []
        for exps, coef in p.terms:
            if exps[ai] % 2:
                raise VerificationError("odd powers of a failed to cancel")
            e = list(exps)
            e[ai] //= 2
            terms.append((tuple(e), coef))
        return Polynomial(self.table_Q, terms)

    def C(self, S: Iterable[int], level: int | None = None) -> Polynomial:
        level = self.n if level is None else level
        S = frozenset(S)
        key = (S, level)
        if key not in self._C_cache:
            if not S <= frozenset(range(1, level + 1)):
                raise ValueError("subset exceeds the level")
            A, B = self._AB(S, level)
            self._C_cache[key] = self._even_to_Q(A + B)
        return self._C_cache[key]

    def D(self, S: Iterable[int], level: int | None = None) -> Polynomial:
        level = self.n if level is None else level
        S = frozenset(S)
        key = (S, level)
        if key not in self._D_cache:
            if not S:
                raise ValueError("D_S needs a nonempty subset")
            if not S <= frozenset(range(1, level + 1)):
                raise ValueError("subset exceeds the level")
            comp = frozenset(range(1, level + 1)) - S
            m = min(S)
            anchor = min(comp) if comp else None
            out = Polynomial.one(self.table_Q)
            for i in sorted(S):
                if i != m:
                    out = out * parse_polynomial(self.table_Q, f"c{i} - x")
            for j in sorted(comp):
                if j != anchor:
                    out = out * parse_polynomial(self.table_Q, f"c{anchor} + c{j}")
            self._D_cache[key] = out
        return self._D_cache[key]


# -- public generator operations -------------------------------------------


def gens_ABS(inst: HyperpolygonInstance, S: Iterable[int]) -> tuple:
    S = frozenset(S)
    if not inst.table.is_short(S):
        raise ValueError(f"{sorted(S)} is not short")
    return inst._AB(S, inst.n)


def gens_C(inst: HyperpolygonInstance, S: Iterable[int]) -> Polynomial:
    S = frozenset(S)
    if not inst.table.is_short(S):
        raise ValueError(f"{sorted(S)} is not short")
    return inst.C(S)


def gens_D(inst: HyperpolygonInstance, S: Iterable[int]) -> Polynomial:
    S = frozenset(S)
    if not S:
        raise ValueError("D_S needs a nonempty subset")
    if not inst.table.is_short(S):
        raise ValueError(f"{sorted(S)} is not short")
    return inst.D(S)


def ideal_J(inst: HyperpolygonInstance) -> Ideal:
    if inst._J is None:
        gens = [inst.C(S) for S in inst.table.shorts]
        inst._J = Ideal(inst.table_Q, gens + list(inst.relations_Q))
    return inst._J


def ideal_I(inst: HyperpolygonInstance) -> Ideal:
    if inst._I is None:
        gens: list = []
        for S in inst.table.shorts:
            A, B = inst._AB(S, inst.n)
            gens.extend([A, B])
        inst._I = Ideal(inst.table_P, gens + list(inst.relations_P))
    return inst._I


def annihilator_ideal(inst: HyperpolygonInstance) -> Ideal:
    """(J : e), the certified colon ideal."""
    if inst._colon is None:
        inst._colon = ideal_J(inst).colon(inst.euler_e, budgets=inst.budgets)
    return inst._colon


def d_presentation_ideal(inst: HyperpolygonInstance) -> Ideal:
    gens = [inst.D(S) for S in inst.table.nonempty_shorts()]
    return Ideal(inst.table_Q, gens + list(inst.relations_Q))


def prop_hp(inst: HyperpolygonInstance) -> QuotientRing:
    """The equivariant ring: (J : e) shown equal to the D-presentation."""
    K1 = annihilator_ideal(inst)
    K2 = d_presentation_ideal(inst)
    if not K1.equals(K2, budgets=inst.budgets):
        raise VerificationError(
            "colon ideal (J : e) differs from the D-class presentation"
        )
    return QuotientRing(K1, budgets=inst.budgets)


# -- membership certificates -----------------------------------------------


@dataclass
class MembershipCertificate:
    """e*D_S as an explicit combination of C_T over short T contained in S.

    The identity holds modulo the ring relations c_i^2 - a2; method records
    whether the peel recursion or the reduction trace produced it.
    """

    subset: frozenset
    target: Polynomial
    combination: tuple
    method: str

    def verify(self, inst: HyperpolygonInstance) -> bool:
        acc = Polynomial.zero(inst.table_Q)
        for T, coeff in self.combination:
            if not inst.table.is_short(T) or not frozenset(T) <= self.subset:
                return False
            acc = acc + coeff * inst.C(T)
        return inst._rel_ideal_Q.normal_form(acc - self.target).is_zero()

    def to_dict(self) -> dict:
        return {
            "subset": list(_canon(self.subset)),
            "target": str(self.target),
            "method": self.method,
            "terms": [
                [list(_canon(T)), str(coeff)] for T, coeff in self.combination
            ],
        }

    @classmethod
    def from_dict(cls, inst: HyperpolygonInstance, payload: Mapping) -> "MembershipCertificate":
        S = frozenset(payload["subset"])
        cert = cls(
            subset=S,
            target=inst.euler_e * inst.D(S),
            combination=tuple(
                (frozenset(T), parse_polynomial(inst.table_Q, text))
                for T, text in payload["terms"]
            ),
            method=payload.get("method", "loaded"),
        )
        if not cert.verify(inst):
            raise VerificationError("loaded certificate failed re-verification")
        return cert


def _swap_map(inst: HyperpolygonInstance, i: int, j: int) -> dict:
    return {
        f"c{i}": Polynomial.variable(inst.table_Q, f"c{j}"),
        f"c{j}": Polynomial.variable(inst.table_Q, f"c{i}"),
    }


def _base_certificate(inst: HyperpolygonInstance, level: int) -> dict:
    """Certificate for S = {level} at the given level, verified by expansion.

    e*D_{level} = 2^(level-2) * (x+c_level) * ((2x-c_level)*C_empty - c_level*C_{level})
    with all classes taken at this level.
    """
    lam = Fraction(2) ** (level - 2)
    cl = Polynomial.variable(inst.table_Q, f"c{level}")
    x = Polynomial.variable(inst.table_Q, "x")
    front = (x + cl) * lam
    terms = {
        frozenset(): front * (x * 2 - cl),
        frozenset({level}): front * (-cl),
    }
    lhs = inst.euler_e * inst.D(frozenset({level}), level)
    rhs = Polynomial.zero(inst.table_Q)
    for T, coeff in terms.items():
        rhs = rhs + coeff * inst.C(T, level)
    if not inst._rel_ideal_Q.normal_form(lhs - rhs).is_zero():
        raise VerificationError(f"base-case identity failed at level {level}")
    return terms


def _cert_recursion(inst: HyperpolygonInstance, S: frozenset, level: int) -> dict:
    """Coefficients {T: coeff} with sum coeff*C_T(level) = e*D_S(level) mod
    relations, following the proof shape: relabel so the top index lies in
    S, peel it, lift through C_T - C_{T u {top}} = (c_top - x)*C'_T."""
    w = max(S)
    if w < level:
        swap = _swap_map(inst, w, level)
        relabeled = frozenset({level if i == w else i for i in S})
        inner = _cert_recursion(inst, relabeled, level)
        out: dict = {}
        for T, coeff in inner.items():
            back = frozenset({w if i == level else i for i in T})
            out[back] = out.get(back, Polynomial.zero(inst.table_Q)) + coeff.substitute(
                swap, table=inst.table_Q
            )
        return out
    if len(S) == 1:
        return _base_certificate(inst, level)
    inner = _cert_recursion(inst, S - {level}, level - 1)
    out = {}
    for T, coeff in inner.items():
        out[T] = out.get(T, Polynomial.zero(inst.table_Q)) + coeff
        Tn = T | {level}
        out[Tn] = out.get(Tn, Polynomial.zero(inst.table_Q)) - coeff
    return out


def certify_membership(inst: HyperpolygonInstance, S: Iterable[int]) -> MembershipCertificate:
    """Two-path certificate construction; the result is always expansion-verified."""
    S = frozenset(S)
    if not S or not inst.table.is_short(S):
        raise ValueError(f"{sorted(S)} is not a nonempty short subset")
    target = inst.euler_e * inst.D(S)
    combination = None
    method = "recursion"
    try:
        raw = _cert_recursion(inst, S, inst.n)
        combination = tuple(
            (T, coeff)
            for T, coeff in sorted(raw.items(), key=lambda kv: (len(kv[0]), _canon(kv[0])))
            if not coeff.is_zero()
        )
        cert = MembershipCertificate(S, target, combination, method)
        if not cert.verify(inst):
            combination = None
    except VerificationError:
        combination = None
    if combination is None:
        method = "trace"
        subsets = [frozenset(T) for r in range(len(S) + 1) for T in combinations(_canon(S), r)]
        gens = [inst.C(T) for T in subsets] + list(inst.relations_Q)
        cofs = express_in_ideal(gens, target, budgets=inst.budgets)
        if cofs is None:
            raise VerificationError(
                f"no certificate for {sorted(S)}: recursion and trace both failed"
            )
        combination = tuple(
            (T, cof)
            for T, cof in zip(subsets, cofs[: len(subsets)])
            if not cof.is_zero()
        )
        cert = MembershipCertificate(S, target, combination, method)
        if not cert.verify(inst):
            raise VerificationError(
                f"trace certificate for {sorted(S)} failed its expansion check"
            )
    return cert


# -- ordinary side ----------------------------------------------------------


def konno_ring(n: int, budgets: Budgets | None = None) -> QuotientRing:
    """Q[c_1..c_n] modulo the square differences and every monomial of
    algebraic degree n-2: the ordinary cohomology presentation."""
    if n < 3:
        raise ValueError("need n >= 3")
    table = VariableTable(tuple(f"c{i}" for i in range(1, n + 1)), (2,) * n)
    gens = [
        parse_polynomial(table, f"c{i}^2 - c{n}^2") for i in range(1, n)
    ]
    for mono in combinations_with_replacement(range(n), n - 2):
        e = [0] * n
        for i in mono:
            e[i] += 1
        gens.append(Polynomial(table, [(tuple(e), Fraction(1))]))
    return QuotientRing(Ideal(table, gens), budgets=budgets)


def ordinary_ring(inst: HyperpolygonInstance) -> QuotientRing:
    """The equivariant ring modulo x."""
    K1 = annihilator_ideal(inst)
    x = Polynomial.variable(inst.table_Q, "x")
    return QuotientRing(K1.sum_with([x]), budgets=inst.budgets)


def betti_numbers(inst: HyperpolygonInstance) -> list:
    R = ordinary_ring(inst)
    top = R.top_degree()
    return [R.graded_dimension(d) for d in range(0, top + 1, 2)]


def basis_dimension_check(inst: HyperpolygonInstance) -> dict:
    """Degree-(n-2) part of Q/<x>: dimension and independence of the D images."""
    n = inst.n
    deg = 2 * (n - 2)
    x = Polynomial.variable(inst.table_Q, "x")
    ring = QuotientRing(
        Ideal(inst.table_Q, list(inst.relations_Q) + [x]), budgets=inst.budgets
    )
    monos = ring.std_monomials(deg)
    index = {m: k for k, m in enumerate(monos)}
    rows = []
    for S in inst.table.nonempty_shorts():
        nf = ring.normal_form(inst.D(S))
        row = [Fraction(0)] * len(monos)
        for exps, coef in nf.terms:
            row[index[exps]] = coef
        rows.append(row)
    rank = linalg.rank(rows, Fraction(0), Fraction(1)) if rows else 0
    return {
        "degree": deg,
        "dimension": len(monos),
        "expected": len(inst.table.nonempty_shorts()),
        "independent": rank == len(rows),
    }


def low_degree_rigidity(inst: HyperpolygonInstance) -> bool:
    """Below degree 2(n-2), (J : e) adds nothing to J: identical standard
    monomials degreewise."""
    RJ = QuotientRing(ideal_J(inst), budgets=inst.budgets)
    RK = QuotientRing(annihilator_ideal(inst), budgets=inst.budgets)
    for d in range(0, 2 * (inst.n - 2), 2):
        if RJ.std_monomials(d) != RK.std_monomials(d):
            return False
    return True


def bridge_check(inst: HyperpolygonInstance) -> bool:
    """Each generator F of (J : e), pushed to the torus side, has e'*F in I."""
    I = ideal_I(inst)
    embed = {"a2": parse_polynomial(inst.table_P, "a^2")}
    for F in annihilator_ideal(inst).groebner_basis():
        lifted = F.substitute(embed, table=inst.table_P)
        if not I.contains(inst.euler_eprime * lifted, budgets=inst.budgets):
            return False
    return True


def su2_datum() -> RootDatum:
    table = VariableTable(("a", "x"), (2, 2))
    return RootDatum(table, [Polynomial.variable(table, "a")], 2)


def second_iso_presentation(inst: HyperpolygonInstance) -> KirwanPresentation:
    embed = {"a2": parse_polynomial(inst.table_P, "a^2")}
    return KirwanPresentation(
        QuotientRing(ideal_J(inst), budgets=inst.budgets),
        inst.euler_e,
        full_ring=QuotientRing(ideal_I(inst), budgets=inst.budgets),
        euler_prime=inst.euler_eprime,
        w_action=inst.weyl_involution(),
        embed=embed,
        datum=su2_datum(),
    )


def presentation_summary(inst: HyperpolygonInstance) -> dict:
    return {
        "ring_P": {
            "variables": [[n, d] for n, d in zip(inst.table_P.names, inst.table_P.degrees)],
            "relations": [str(r) for r in inst.relations_P],
            "ideal_I_generators": 2 * len(inst.table.shorts),
        },
        "ring_Q": {
            "variables": [[n, d] for n, d in zip(inst.table_Q.names, inst.table_Q.degrees)],
            "relations": [str(r) for r in inst.relations_Q],
            "ideal_J_generators": len(inst.table.shorts),
        },
        "euler_e": str(inst.euler_e),
        "euler_eprime": str(inst.euler_eprime),
        "D_classes": {
            ",".join(str(i) for i in _canon(S)): str(inst.D(S))
            for S in inst.table.nonempty_shorts()
        },
    }


def _run_stage(name: str, fn, timings: dict | None = None):
    start = time.perf_counter()
    try:
        return fn()
    except Exception as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name
        raise
    finally:
        if timings is not None:
            timings[name] = timings.get(name, 0.0) + time.perf_counter() - start


def full_report(lengths: EdgeLengths, budgets: Budgets | None = None,
                with_certificates: bool = True, check_second_iso: bool = True) -> dict:
    """Everything about one instance, as plain data; deterministic given
    lengths and budgets except for the "timings" block, which callers who
    need byte-stable output should drop.  Failures propagate with a .stage
    attribute."""
    timings: dict = {}

    def _stage(name, fn):
        return _run_stage(name, fn, timings)

    inst = _stage("instance", lambda: HyperpolygonInstance(lengths, budgets=budgets))
    n = inst.n
    report: dict = {
        "n": n,
        "xi": [str(v) for v in lengths.xi],
        "budgets": {
            "max_basis": inst.budgets.max_basis,
            "max_degree": inst.budgets.max_degree,
        },
        "shorts": {
            "count": len(inst.table.shorts),
            "subsets": [list(_canon(S)) for S in inst.table.shorts],
        },
        "presentation": _stage("presentation", lambda: presentation_summary(inst)),
    }

    ring = _stage("prop_hp", lambda: prop_hp(inst))
    report["prop_hp"] = {
        "colon_equals_D_presentation": True,
        "equivariant_hilbert": [
            ring.graded_dimension(d) for d in range(0, 4 * (n - 2) + 2, 2)
        ],
    }

    betti = _stage("betti", lambda: betti_numbers(inst))
    report["betti"] = betti

    konno = _stage("konno", lambda: konno_ring(n, budgets=inst.budgets))
    ktop = konno.top_degree()
    kdims = [konno.graded_dimension(d) for d in range(0, ktop + 1, 2)]
    report["konno"] = {"betti": kdims, "agrees": kdims == betti}

    report["basis_check"] = _stage("basis_check", lambda: basis_dimension_check(inst))

    if with_certificates:
        certs = []
        for S in inst.table.nonempty_shorts():
            cert = _stage("certificates", lambda S=S: certify_membership(inst, S))
            ok = _stage("certificates", lambda c=cert: c.verify(inst))
            payload = cert.to_dict()
            payload["verified"] = ok
            del payload["target"]
            certs.append(payload)
        report["certificates"] = certs

    report["formality"] = {
        "ring_J": _stage(
            "formality", lambda: formality_check(QuotientRing(ideal_J(inst), budgets=inst.budgets), "x")
        ),
        "ring_colon": _stage("formality", lambda: formality_check(ring, "x")),
    }

    rank = _stage("localized", lambda: ring.localized_rank("x"))
    ktotal = sum(kdims)
    report["localized"] = {
        "rank": rank,
        "konno_total": ktotal,
        "agrees": rank == ktotal,
    }

    report["low_degree_rigidity"] = _stage(
        "low_degree_rigidity", lambda: low_degree_rigidity(inst)
    )
    report["bridge"] = _stage("bridge", lambda: bridge_check(inst))

    if check_second_iso:
        report["second_iso"] = _stage(
            "second_iso", lambda: verify_second_iso(second_iso_presentation(inst), budgets=inst.budgets)
        )
    report["timings"] = {name: round(t, 6) for name, t in sorted(timings.items())}
    from . import __version__

    report["version"] = __version__
    return report
