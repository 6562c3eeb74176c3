"""Finite-dimensional commutative Frobenius algebras over the rationals.

An algebra is given by structure constants on a basis ``xi_0 .. xi_N`` with a
distinguished unit, a linear functional ``f`` and optionally a distinguished
element ``p`` and a subspace ``M``.  ``Q-`` denotes ``pF + M``.

The central check: for a Frobenius algebra with ``f(p) = 1``,
``ker f = M + 1F`` and ``f(pa) = 0`` on ``Q-``, the element p annihilates
``Q-`` exactly when ``Q-`` contains no unit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Sequence

import sympy

from . import linalg
from .novikov import as_fraction, format_fraction

Vector = list[Fraction]


class AlgebraError(ValueError):
    """Structure constants that do not define a commutative unital associative algebra."""


class FactorizationIncomplete(ArithmeticError):
    """No element of the retry sequence separated the semisimple quotient."""

    def __init__(self, message: str, degrees: Sequence[int] = ()):
        super().__init__(message)
        self.degrees = list(degrees)


class HypothesisViolation(ValueError):
    """The algebra does not satisfy the hypotheses of the unit criterion."""

    def __init__(self, failures: Sequence[str]):
        super().__init__("; ".join(failures))
        self.failures = list(failures)


class LemmaViolation(AssertionError):
    """A counterexample to the unit criterion; should never happen."""


class TruncationInconclusive(ArithmeticError):
    """The unit test could not be certified from the available data."""


def _zero(n: int) -> Vector:
    return [Fraction(0)] * n


def _is_zero(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


class AlgebraSpec:
    """Commutative unital algebra with functional data.

    ``structure[i][j]`` is the coordinate vector of ``xi_i xi_j``; a mapping
    ``{(i, j, k): value}`` is also accepted.  ``p`` may be an index or a
    vector; ``m_subspace`` a list of indices or vectors.  When p is given and
    ``m_subspace`` is None, M is reconstructed as
    ``{x : f(x) = 0, f(px) = 0}`` (requires ``f(1) = 0``, ``f(p) = 1``).
    """

    def __init__(self, dim: int, structure, unit_index: int, functional_f: Sequence,
                 p=None, m_subspace=None, name: str = ""):
        self.dim = dim
        self.name = name
        self.unit_index = unit_index
        self.table = self._read_structure(structure)
        self.f = [as_fraction(x) for x in functional_f]
        if len(self.f) != dim:
            raise AlgebraError(f"functional has length {len(self.f)}, expected {dim}")
        self._validate()
        self.p = None if p is None else self._as_vector(p)
        if m_subspace is None and self.p is not None:
            self.m = reconstruct_m(self, self.p)
        else:
            self.m = [self._as_vector(x) for x in (m_subspace or [])]

    def _read_structure(self, structure) -> list[list[Vector]]:
        n = self.dim
        table = [[_zero(n) for _ in range(n)] for _ in range(n)]
        if isinstance(structure, dict):
            for (i, j, k), v in structure.items():
                table[i][j][k] = as_fraction(v)
        else:
            for i in range(n):
                for j in range(n):
                    table[i][j] = [as_fraction(x) for x in structure[i][j]]
        return table

    def _as_vector(self, x) -> Vector:
        if isinstance(x, int):
            return self.basis_vector(x)
        v = [as_fraction(c) for c in x]
        if len(v) != self.dim:
            raise AlgebraError(f"vector of length {len(v)}, expected {self.dim}")
        return v

    def _validate(self):
        n = self.dim
        if not 0 <= self.unit_index < n:
            raise AlgebraError("unit index out of range")
        for i in range(n):
            for j in range(n):
                if self.table[i][j] != self.table[j][i]:
                    raise AlgebraError(f"not commutative at ({i}, {j})")
            if self.table[self.unit_index][i] != self.basis_vector(i):
                raise AlgebraError(f"basis element {self.unit_index} is not a unit (fails on {i})")
        for i in range(n):
            for j in range(i, n):
                left = self.table[i][j]
                for k in range(n):
                    a = self.mul(left, self.basis_vector(k))
                    b = self.mul(self.basis_vector(i), self.table[j][k])
                    if a != b:
                        raise AlgebraError(f"not associative at ({i}, {j}, {k})")

    def basis_vector(self, i: int) -> Vector:
        v = _zero(self.dim)
        v[i] = Fraction(1)
        return v

    @property
    def one(self) -> Vector:
        return self.basis_vector(self.unit_index)

    def mul(self, a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
        out = _zero(self.dim)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y == 0:
                    continue
                c = x * y
                for k, z in enumerate(self.table[i][j]):
                    if z:
                        out[k] += c * z
        return out

    def power(self, a: Sequence[Fraction], k: int) -> Vector:
        out = self.one
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def mult_matrix(self, a: Sequence[Fraction]) -> linalg.Matrix:
        """Matrix of ``x -> a x`` acting on column vectors."""
        cols = [self.mul(a, self.basis_vector(j)) for j in range(self.dim)]
        return linalg.transpose(cols)

    def apply_f(self, a: Sequence[Fraction]) -> Fraction:
        return sum((x * y for x, y in zip(self.f, a)), Fraction(0))

    def gram(self) -> linalg.Matrix:
        return [[self.apply_f(self.table[i][j]) for j in range(self.dim)] for i in range(self.dim)]

    def q_minus(self) -> list[Vector]:
        if self.p is None:
            raise HypothesisViolation(["no distinguished element p given"])
        return [self.p] + self.m

    def inverse_of(self, a: Sequence[Fraction]) -> Vector | None:
        sol = linalg.solve(self.mult_matrix(a), self.one)
        return sol

    def render(self, v: Sequence[Fraction], names: Sequence[str] | None = None) -> str:
        names = names or [f"e{i}" for i in range(self.dim)]
        parts = [f"{format_fraction(c)}*{names[i]}" for i, c in enumerate(v) if c != 0]
        return " + ".join(parts) if parts else "0"


def quotient_algebra(relations_poly: Sequence, functional_f: Sequence, p=None, m_subspace=None,
                     name: str = "") -> AlgebraSpec:
    """``Q[x]/(g)`` for monic g given by coefficients (constant term first), basis ``1, x, ..``."""
    g = [as_fraction(c) for c in relations_poly]
    d = len(g) - 1
    if g[-1] != 1:
        raise AlgebraError("relation polynomial must be monic")

    def reduce_power(k: int) -> Vector:
        v = _zero(2 * d)
        v[k] = Fraction(1)
        for top in range(2 * d - 1, d - 1, -1):
            c = v[top]
            if c:
                v[top] = Fraction(0)
                for i in range(d):
                    v[top - d + i] -= c * g[i]
        return v[:d]

    structure = [[reduce_power(i + j) for j in range(d)] for i in range(d)]
    return AlgebraSpec(d, structure, 0, functional_f, p, m_subspace, name=name)


def tensor_algebra(a: AlgebraSpec, b: AlgebraSpec, functional_f: Sequence, p=None, m_subspace=None,
                   name: str = "") -> AlgebraSpec:
    n = a.dim * b.dim
    idx = [(i, j) for i in range(a.dim) for j in range(b.dim)]
    structure = {}
    for x, (i1, j1) in enumerate(idx):
        for y, (i2, j2) in enumerate(idx):
            for z, (i3, j3) in enumerate(idx):
                c = a.table[i1][i2][i3] * b.table[j1][j2][j3]
                if c:
                    structure[(x, y, z)] = c
    unit = idx.index((a.unit_index, b.unit_index))
    return AlgebraSpec(n, structure, unit, functional_f, p, m_subspace, name=name)


def direct_sum(a: AlgebraSpec, b: AlgebraSpec, functional_f: Sequence, p=None, m_subspace=None,
               name: str = "") -> AlgebraSpec:
    """``A x B``; the basis starts with the unit ``(1, 1)``, then ``(1, 0)``, then the
    non-unit classes of A and of B."""
    ra = [i for i in range(a.dim) if i != a.unit_index]
    rb = [i for i in range(b.dim) if i != b.unit_index]
    n = 2 + len(ra) + len(rb)

    def embed(va: Sequence[Fraction], vb: Sequence[Fraction]) -> Vector:
        # coordinates of (va, vb) in the basis (1,1), (1,0), A-rest, B-rest
        ua, ub = va[a.unit_index], vb[b.unit_index]
        out = [ub, ua - ub] + [va[i] for i in ra] + [vb[i] for i in rb]
        return out

    basis = [(a.one, b.one), (a.one, _zero(b.dim))]
    basis += [(a.basis_vector(i), _zero(b.dim)) for i in ra]
    basis += [(_zero(a.dim), b.basis_vector(i)) for i in rb]
    structure = [[embed(a.mul(x[0], y[0]), b.mul(x[1], y[1])) for y in basis] for x in basis]
    return AlgebraSpec(n, structure, 0, functional_f, p, m_subspace, name=name)


def reconstruct_m(alg: AlgebraSpec, p: Sequence[Fraction]) -> list[Vector]:
    """``M = {x : f(x) = 0 and f(px) = 0}``, a complement of ``pF + 1F`` in A."""
    failures = []
    if alg.apply_f(alg.one) != 0:
        failures.append("f(1) != 0")
    if alg.apply_f(p) != 1:
        failures.append("f(p) != 1")
    if failures:
        raise HypothesisViolation(failures)
    row_p = [alg.apply_f(alg.mul(p, alg.basis_vector(j))) for j in range(alg.dim)]
    return linalg.nullspace([list(alg.f), row_p], alg.dim)


def gram_nondegeneracy(alg: AlgebraSpec) -> bool:
    return linalg.det(alg.gram()) != 0


def nilradical(alg: AlgebraSpec) -> list[Vector]:
    """Basis of the nilpotent elements: the kernel of the trace form ``Tr(L_ab)``."""
    n = alg.dim
    traces = []
    for i in range(n):
        row = []
        for j in range(n):
            m = alg.mult_matrix(alg.table[i][j])
            row.append(sum((m[k][k] for k in range(n)), Fraction(0)))
        traces.append(row)
    basis = linalg.nullspace(traces, n)
    for v in basis:
        if not _is_zero(alg.power(v, n)):
            raise ArithmeticError("trace-form kernel contains a non-nilpotent element")
        for k in range(n):
            if not linalg.in_span(alg.mul(v, alg.basis_vector(k)), basis):
                raise ArithmeticError("trace-form kernel is not an ideal")
    return basis


def _to_poly(coeffs: Sequence[Fraction], x) -> sympy.Poly:
    """Polynomial with the given coefficients, constant term first."""
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x, domain="QQ")


def _poly_eval(poly: sympy.Poly, alg: AlgebraSpec, y: Sequence[Fraction]) -> Vector:
    out = _zero(alg.dim)
    for c in poly.all_coeffs():
        out = alg.mul(out, y)
        out[alg.unit_index] += Fraction(int(c.p), int(c.q))
    return out


def minimal_polynomial(alg: AlgebraSpec, y: Sequence[Fraction]) -> list[Fraction]:
    """Monic minimal polynomial of y (coefficients, constant term first)."""
    powers = [alg.one]
    while True:
        nxt = alg.mul(powers[-1], y)
        cols = linalg.transpose(powers)
        sol = linalg.solve(cols, nxt)
        if sol is not None:
            return [-c for c in sol] + [Fraction(1)]
        powers.append(nxt)


def _candidates(alg: AlgebraSpec):
    """Fixed retry sequence of elements used to separate the components."""
    n = alg.dim
    for s in range(1, 2 * n * n + 2):
        yield [Fraction(s) ** k for k in range(n)]
    rng = random.Random(20240601)
    for _ in range(50):
        yield [Fraction(rng.randint(-9, 9)) for _ in range(n)]


@dataclass(frozen=True)
class Decomposition:
    idempotents: list
    residue_degrees: list
    separating_element: list


def decompose(alg: AlgebraSpec) -> Decomposition:
    nil = nilradical(alg)
    x = sympy.Symbol("x")
    last_degrees: list[int] = []
    for y in _candidates(alg):
        mu = _to_poly(minimal_polynomial(alg, y), x)
        _, factors = sympy.factor_list(mu)
        idems, degrees = [], []
        for base, mult in factors:
            g = base ** mult
            h = sympy.quo(mu, g)
            s, _t, one = sympy.gcdex(h, g)
            if one != 1:
                raise ArithmeticError("CRT cofactors are not coprime")
            e_poly = sympy.rem(s * h, mu)
            idems.append(_poly_eval(sympy.Poly(e_poly, x, domain="QQ"), alg, y))
            degrees.append(base.degree())
        last_degrees = degrees
        if all(_is_primitive(alg, e, deg, nil) for e, deg in zip(idems, degrees)):
            order = sorted(range(len(idems)), key=lambda i: [-c for c in idems[i]])
            return Decomposition([idems[i] for i in order], [degrees[i] for i in order], list(y))
    raise FactorizationIncomplete("no separating element in the retry sequence", last_degrees)


def _is_primitive(alg: AlgebraSpec, e: Vector, degree: int, nil: list[Vector]) -> bool:
    component = linalg.span_basis([alg.mul(e, alg.basis_vector(k)) for k in range(alg.dim)])
    nil_part = linalg.span_basis([alg.mul(e, v) for v in nil])
    return len(component) - len(nil_part) == degree


def idempotent_decomposition(alg: AlgebraSpec) -> list[Vector]:
    """Primitive orthogonal idempotents summing to 1, in a canonical order."""
    return decompose(alg).idempotents


def socle(alg: AlgebraSpec, component: Sequence[Fraction]) -> list[Vector]:
    """Basis of ``{a in A e : a N = 0}``."""
    e = list(component)
    comp = linalg.span_basis([alg.mul(e, alg.basis_vector(k)) for k in range(alg.dim)])
    nil = nilradical(alg)
    if not nil:
        return comp
    # a = sum c_r comp_r; conditions a * v = 0 for v in nil
    rows = []
    for v in nil:
        images = [alg.mul(c, v) for c in comp]
        for k in range(alg.dim):
            rows.append([img[k] for img in images])
    coeffs = linalg.nullspace(rows, len(comp))
    out = []
    for c in coeffs:
        a = _zero(alg.dim)
        for w, b in zip(c, comp):
            for k in range(alg.dim):
                a[k] += w * b[k]
        out.append(a)
    return linalg.span_basis(out)


@dataclass(frozen=True)
class UnitWitness:
    unit: list
    inverse: list
    sweep_parameter: int


def q_minus_unit_search(alg: AlgebraSpec) -> UnitWitness | None:
    """Exact decision of whether ``Q- = pF + M`` contains a unit."""
    gens = linalg.span_basis(alg.q_minus())
    idems = idempotent_decomposition(alg)
    nil = nilradical(alg)
    for e in idems:
        if all(linalg.in_span(alg.mul(g, e), nil) for g in gens):
            return None
    # along the curve s -> sum s^k g_k each component fails for at most len(gens) - 1 values
    bound = len(idems) * max(len(gens) - 1, 0) + 1
    for s in range(bound):
        u = _zero(alg.dim)
        for k, g in enumerate(gens):
            c = Fraction(s) ** k
            for i in range(alg.dim):
                u[i] += c * g[i]
        inv = alg.inverse_of(u)
        if inv is not None:
            if alg.mul(u, inv) != alg.one:
                raise ArithmeticError("inverse certificate failed")
            return UnitWitness(u, inv, s)
    raise ArithmeticError("unit sweep exhausted although every component is reached")


def hypothesis_failures(alg: AlgebraSpec) -> list[str]:
    failures = []
    if alg.p is None:
        return ["no distinguished element p given"]
    if alg.apply_f(alg.p) != 1:
        failures.append("f(p) != 1")
    if alg.apply_f(alg.one) != 0:
        failures.append("f(1) != 0")
    for k, v in enumerate(alg.m):
        if alg.apply_f(v) != 0:
            failures.append(f"f does not vanish on M vector {k}")
    if linalg.rank([alg.p] + alg.m + [alg.one]) != alg.dim or len(alg.m) != alg.dim - 2:
        failures.append("A != pF + M + 1F")
    for k, v in enumerate(alg.q_minus()):
        if alg.apply_f(alg.mul(alg.p, v)) != 0:
            failures.append(f"f(p a) != 0 for Q- vector {k}")
            break
    if not gram_nondegeneracy(alg):
        failures.append("Gram matrix f(ab) is degenerate")
    return failures


def p_annihilates_q_minus(alg: AlgebraSpec) -> bool:
    return all(_is_zero(alg.mul(alg.p, v)) for v in alg.q_minus())


@dataclass(frozen=True)
class FrobVerdict:
    p_annihilates: bool
    unit: UnitWitness | None

    @property
    def has_unit(self) -> bool:
        return self.unit is not None

    def holds(self) -> bool:
        return self.p_annihilates == (not self.has_unit)


def frob_equivalence_check(alg: AlgebraSpec) -> FrobVerdict:
    failures = hypothesis_failures(alg)
    if failures:
        raise HypothesisViolation(failures)
    verdict = FrobVerdict(p_annihilates_q_minus(alg), q_minus_unit_search(alg))
    if not verdict.holds():
        raise LemmaViolation(
            f"p Q- = 0 is {verdict.p_annihilates} but a unit in Q- exists is {verdict.has_unit}"
        )
    return verdict


@dataclass
class AnalysisReport:
    nondegenerate: bool
    nilradical_basis: list
    idempotents: list
    residue_degrees: list
    socle_basis: list
    q_minus_unit: UnitWitness | None = None
    p_annihilates_q_minus: bool | None = None
    frob_verdict: tuple | None = None
    notes: list = field(default_factory=list)

    def render(self, alg: AlgebraSpec, names: Sequence[str] | None = None) -> str:
        r = lambda v: alg.render(v, names)  # noqa: E731
        lines = [
            f"nondegenerate: {'yes' if self.nondegenerate else 'no'}",
            "nilradical: " + (", ".join(r(v) for v in self.nilradical_basis) or "0"),
        ]
        for k, (e, deg, soc) in enumerate(zip(self.idempotents, self.residue_degrees, self.socle_basis)):
            lines.append(f"idempotent {k}: {r(e)} (residue degree {deg})")
            lines.append("  socle: " + (", ".join(r(v) for v in soc) or "0"))
        if self.p_annihilates_q_minus is not None:
            lines.append(f"p Q- = 0: {'yes' if self.p_annihilates_q_minus else 'no'}")
            unit = self.q_minus_unit
            lines.append("unit in Q-: " + ("none" if unit is None else r(unit.unit)))
        if self.frob_verdict is not None:
            lines.append(f"unit criterion: {'holds' if self.frob_verdict[0] == (not self.frob_verdict[1]) else 'VIOLATED'}")
        lines.extend(self.notes)
        return "\n".join(lines)


def analyze(alg: AlgebraSpec) -> AnalysisReport:
    dec = decompose(alg)
    e_sum = reduce(lambda a, b: [x + y for x, y in zip(a, b)], dec.idempotents, _zero(alg.dim))
    if e_sum != alg.one:
        raise ArithmeticError("idempotents do not sum to 1")
    for i, a in enumerate(dec.idempotents):
        for j, b in enumerate(dec.idempotents):
            target = a if i == j else _zero(alg.dim)
            if alg.mul(a, b) != target:
                raise ArithmeticError("idempotents are not orthogonal")
    nondeg = gram_nondegeneracy(alg)
    socles = [socle(alg, e) for e in dec.idempotents]
    if nondeg and any(not s for s in socles):
        raise ArithmeticError("a component of a Frobenius algebra has zero socle")
    report = AnalysisReport(nondeg, nilradical(alg), dec.idempotents, dec.residue_degrees, socles)
    if alg.p is not None:
        failures = hypothesis_failures(alg)
        report.p_annihilates_q_minus = p_annihilates_q_minus(alg)
        report.q_minus_unit = q_minus_unit_search(alg)
        if failures:
            report.notes.append("hypotheses fail: " + "; ".join(failures))
        else:
            verdict = frob_equivalence_check(alg)
            report.frob_verdict = (verdict.p_annihilates, verdict.has_unit)
    return report


# -- bridge to quantum tables ------------------------------------------------


@dataclass(frozen=True)
class UniruledVerdict:
    unit_in_q_minus: bool
    strongly_uniruled: bool
    certificate: str
    specialization: Fraction | None = None
    unit: tuple | None = None

    @property
    def agree(self) -> bool:
        return self.unit_in_q_minus == self.strongly_uniruled

    def describe(self) -> str:
        return (f"unit in Q-: {'yes' if self.unit_in_q_minus else 'no'}; "
                f"strongly uniruled: {'yes' if self.strongly_uniruled else 'no'}; "
                f"verdicts {'agree' if self.agree else 'DISAGREE'} ({self.certificate})")


SPECIALIZATIONS = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def table_algebra(spec, w=None, lattice: int = 1) -> AlgebraSpec:
    """The algebra of a ring table at ``q = 1`` with ``t = w^lattice``.

    The functional is the point coefficient, p the point class and M the
    remaining non-unit classes.
    """
    n = len(spec.basis)
    structure = {}
    for i in range(n):
        for j in range(n):
            for m, c in spec.basis_product(i, j).items():
                if not c.is_exact:
                    raise TruncationInconclusive("structure constant is a truncated series")
                val = Fraction(0)
                for coeff, _q, k in c.at_q_one().terms:
                    val += coeff * Fraction(w) ** int(k * lattice)
                if val:
                    structure[(i, j, m)] = val
    f = [Fraction(int(k == spec.point)) for k in range(n)]
    m_sub = [k for k in range(n) if k not in (spec.point, spec.unit)]
    return AlgebraSpec(n, structure, spec.unit, f, spec.point, m_sub)


def exponent_lattice(spec) -> int:
    n = len(spec.basis)
    dens = [1]
    for i in range(n):
        for j in range(i, n):
            for c in spec.basis_product(i, j).values():
                dens.extend(k.denominator for _c, _q, k in c.terms)
    return lcm(*dens)


def frobenius_uniruled_verdict(spec) -> UniruledVerdict:
    """Decide whether ``Q-`` of the table's quantum ring contains a unit and
    compare with the strong-uniruledness scan of the table."""
    from .qring import q_minus_ideal_test

    strongly = not q_minus_ideal_test(spec).ideal
    # exact check of p Q- = 0 over the Novikov field
    annihilates = True
    for a in spec.q_minus():
        prod = spec.basis_product(spec.point, a)
        if any(not c.is_exact for c in prod.values()):
            raise TruncationInconclusive("point products are truncated series")
        if prod:
            annihilates = False
            break
    gens_fail = []
    pa = [spec.basis_product(spec.point, a).get(spec.point) for a in spec.q_minus()]
    for a, c in zip(spec.q_minus(), pa):
        if c is not None and c:
            gens_fail.append(f"f(pt * {spec.basis[a].name}) != 0")
    if gens_fail:
        raise HypothesisViolation(gens_fail)
    if annihilates:
        return UniruledVerdict(False, strongly, "pt annihilates Q- exactly, so no element of Q- is invertible")
    lattice = exponent_lattice(spec)
    for w in SPECIALIZATIONS:
        alg = table_algebra(spec, w, lattice)
        if not gram_nondegeneracy(alg):
            continue
        verdict = frob_equivalence_check(alg)
        if verdict.has_unit:
            return UniruledVerdict(
                True, strongly,
                f"determinant of multiplication by the witness is nonzero at t = {w}^{lattice}",
                Fraction(w), tuple(verdict.unit.unit),
            )
    raise TruncationInconclusive(f"no unit certified at {len(SPECIALIZATIONS)} specializations of t")
