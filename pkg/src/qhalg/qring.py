"""Small quantum homology built from a finite table of three-point invariants.

A :class:`RingSpec` records a graded basis (index 0 is the point class, the
class of top degree ``2n`` is the unit), the intersection pairing, a finite
list of curve classes with energy ``omega`` and first Chern number, and a
table of genus-zero three-point invariants.  Ring elements are
:class:`QHElement` objects: basis-indexed Novikov coefficients.

The product of two basis classes is::

    a * b = sum over classes beta and basis k of
            <a, b, xi_k>_beta  xi_k^dual  q^(-c1(beta)) t^(-omega(beta))
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from . import linalg
from .novikov import NovikovElement, as_fraction, format_fraction, multiply


class SpecError(ValueError):
    """An invalid ring table; ``location`` points at the bad entry."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class SingularPairing(SpecError):
    pass


class MissingTableEntry(LookupError):
    pass


class TableExhausted(LookupError):
    pass


class AssociativityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class BasisClass:
    name: str
    degree: int


@dataclass(frozen=True)
class EffectiveClass:
    label: str
    omega: Fraction = Fraction(0)
    chern: int = 0
    divisor_pairings: tuple[tuple[str, int], ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.omega == 0

    def pairing(self, divisor: str) -> int | None:
        for name, value in self.divisor_pairings:
            if name == divisor:
                return value
        return None


def three_point_allowed(n: int, c1: int, degrees: Sequence[int]) -> bool:
    """Index condition for a two-sphere invariant with three insertions."""
    return sum(degrees) == 4 * n - 2 * c1


def point_count_allowed(n: int, c1: int, insertions: Sequence[tuple[int, int]]) -> bool:
    """Index condition for ``insertions`` given as (descendent order, real degree)."""
    p = len(insertions)
    codim = sum(2 * n - deg + 2 * tau for tau, deg in insertions)
    return codim == 2 * n + 2 * c1 + 2 * p - 6


class RingSpec:
    """Validated, immutable description of a small quantum homology ring.

    ``gw3`` is a sequence of ``(class label, i, j, k, value)``; ``gw_higher`` a
    sequence of ``(class label, [(tau, index), ...], value)``.  Errors carry
    the position of the offending entry.
    """

    def __init__(
        self,
        n: int,
        basis: Sequence[BasisClass],
        pairing: Sequence[Sequence],
        classes: Sequence[EffectiveClass],
        gw3: Iterable[tuple] = (),
        gw_higher: Iterable[tuple] = (),
        higher_max_points: int | None = None,
        exceptional_powers: Sequence[int] = (),
        associativity: str = "warn",
    ):
        self.n = int(n)
        self.basis = tuple(basis)
        self._validate_basis()
        self.pairing = tuple(tuple(as_fraction(x) for x in row) for row in pairing)
        self._validate_pairing()
        self.classes = tuple(self._prepare_classes(classes))
        self._class_index = {c.label: c for c in self.classes}
        self.gw3: dict[tuple[str, int, int, int], Fraction] = {}
        self._load_gw3(gw3)
        self.gw_higher: dict[tuple[str, tuple[tuple[int, int], ...]], Fraction] = {}
        self._load_higher(gw_higher)
        if higher_max_points is None:
            higher_max_points = max((len(key[1]) for key in self.gw_higher), default=3)
        self.higher_max_points = int(higher_max_points)
        self.exceptional_powers = tuple(int(i) for i in exceptional_powers)
        self._validate_exceptional()
        self._products: dict[tuple[int, int], dict[int, NovikovElement]] = {}
        if associativity not in ("warn", "error", "ignore"):
            raise ValueError("associativity must be 'warn', 'error' or 'ignore'")
        if associativity != "ignore":
            defects = associativity_defects(self, limit=1)
            if defects:
                a, b, c = defects[0]
                msg = (
                    "table is not associative: "
                    f"({self.basis[a].name}*{self.basis[b].name})*{self.basis[c].name} differs"
                )
                if associativity == "error":
                    raise SpecError(msg, "gw3")
                warnings.warn(msg, AssociativityWarning, stacklevel=2)

    # validation

    def _validate_basis(self):
        n = self.n
        if n < 1:
            raise SpecError("half-dimension must be positive", "n")
        if not self.basis:
            raise SpecError("basis is empty", "basis")
        names = set()
        for idx, b in enumerate(self.basis):
            where = f"basis[{idx}]"
            if b.name in names:
                raise SpecError(f"duplicate basis name {b.name!r}", where)
            names.add(b.name)
            if not isinstance(b.degree, int) or b.degree < 0 or b.degree > 2 * n:
                raise SpecError(f"degree {b.degree!r} outside [0, {2 * n}]", where)
            if b.degree % 2:
                raise SpecError("odd-degree classes are not supported", where)
        if self.basis[0].degree != 0:
            raise SpecError("index 0 must be the point class (degree 0)", "basis[0]")
        if sum(1 for b in self.basis if b.degree == 0) != 1:
            raise SpecError("exactly one basis class must have degree 0", "basis")
        tops = [i for i, b in enumerate(self.basis) if b.degree == 2 * n]
        if len(tops) != 1:
            raise SpecError(f"exactly one basis class must have degree {2 * n}", "basis")
        self.unit = tops[0]
        self.point = 0

    def _validate_pairing(self):
        size = len(self.basis)
        g = self.pairing
        if len(g) != size or any(len(row) != size for row in g):
            raise SpecError(f"pairing must be {size}x{size}", "pairing")
        for i in range(size):
            for j in range(size):
                if g[i][j] != g[j][i]:
                    raise SpecError("pairing is not symmetric", f"pairing[{i}][{j}]")
                if g[i][j] != 0 and self.basis[i].degree + self.basis[j].degree != 2 * self.n:
                    raise SpecError("pairing entry between classes of non-complementary degree",
                                    f"pairing[{i}][{j}]")
        inv = linalg.inverse([list(row) for row in g])
        if inv is None:
            raise SingularPairing("pairing is not invertible", "pairing")
        self.pairing_inverse = tuple(tuple(row) for row in inv)

    def _prepare_classes(self, classes):
        out = []
        seen: dict[str, int] = {}
        omegas: dict[Fraction, str] = {}
        divisor_names = {b.name for b in self.basis if b.degree == 2 * self.n - 2}
        for idx, c in enumerate(classes):
            where = f"classes[{idx}]"
            c = EffectiveClass(c.label, as_fraction(c.omega), int(c.chern), tuple(c.divisor_pairings))
            if c.label in seen:
                raise SpecError(f"duplicate class label {c.label!r}", where)
            seen[c.label] = idx
            if c.omega < 0:
                raise SpecError("energy must be nonnegative", where)
            if c.omega == 0 and c.chern != 0:
                raise SpecError("the zero class must have Chern number 0", where)
            if c.omega in omegas:
                raise SpecError(
                    f"energy {format_fraction(c.omega)} repeats class {omegas[c.omega]!r} "
                    "(energies must separate classes)", where)
            omegas[c.omega] = c.label
            for name, _ in c.divisor_pairings:
                if name not in divisor_names:
                    raise SpecError(f"divisor pairing with {name!r}, which is not a divisor class", where)
            out.append(c)
        if Fraction(0) not in omegas:
            out.insert(0, EffectiveClass("0"))
        out.sort(key=lambda c: c.omega)
        return out

    def _load_gw3(self, entries):
        n = self.n
        for pos, entry in enumerate(entries):
            where = f"gw3[{pos}]"
            try:
                label, i, j, k, value = entry
            except (TypeError, ValueError):
                raise SpecError("entries are (class, i, j, k, value)", where) from None
            if label not in self._class_index:
                raise SpecError(f"unknown class {label!r}", where)
            idx = (int(i), int(j), int(k))
            if any(x < 0 or x >= len(self.basis) for x in idx):
                raise SpecError("basis index out of range", where)
            value = as_fraction(value)
            beta = self._class_index[label]
            degrees = [self.basis[x].degree for x in idx]
            if value != 0 and not three_point_allowed(n, beta.chern, degrees):
                raise SpecError("nonzero entry violates the dimension condition", where)
            if self.unit in idx:
                others = list(idx)
                others.remove(self.unit)
                expected = self.pairing[others[0]][others[1]] if beta.is_zero else Fraction(0)
                if value != expected:
                    raise SpecError(
                        "entries with a fundamental-class insertion must equal the pairing "
                        "(zero class) or vanish (other classes)", where)
            key = (label,) + tuple(sorted(idx))
            if key in self.gw3 and self.gw3[key] != value:
                raise SpecError("entry is not symmetric in its insertions", where)
            self.gw3[key] = value

    def _load_higher(self, entries):
        for pos, entry in enumerate(entries):
            where = f"gw_higher[{pos}]"
            try:
                label, insertions, value = entry
            except (TypeError, ValueError):
                raise SpecError("entries are (class, [(tau, index), ...], value)", where) from None
            if label not in self._class_index:
                raise SpecError(f"unknown class {label!r}", where)
            ins = tuple(sorted((int(t), int(x)) for t, x in insertions))
            if any(t < 0 for t, _ in ins):
                raise SpecError("descendent orders must be nonnegative", where)
            if any(x < 0 or x >= len(self.basis) for _, x in ins):
                raise SpecError("basis index out of range", where)
            value = as_fraction(value)
            beta = self._class_index[label]
            shape = [(t, self.basis[x].degree) for t, x in ins]
            if value != 0 and not point_count_allowed(self.n, beta.chern, shape):
                raise SpecError("nonzero entry violates the dimension condition", where)
            key = (label, ins)
            if key in self.gw_higher and self.gw_higher[key] != value:
                raise SpecError("duplicate entry with a different value", where)
            self.gw_higher[key] = value

    def _validate_exceptional(self):
        n = self.n
        for k, idx in enumerate(self.exceptional_powers, start=1):
            if idx < 0 or idx >= len(self.basis):
                raise SpecError("exceptional power index out of range", f"exceptional_powers[{k - 1}]")
            if self.basis[idx].degree != 2 * n - 2 * k:
                raise SpecError(f"E^{k} must have degree {2 * n - 2 * k}", f"exceptional_powers[{k - 1}]")

    # lookups

    def __len__(self):
        return len(self.basis)

    def class_by_label(self, label: str) -> EffectiveClass:
        return self._class_index[label]

    def index(self, name: str) -> int:
        for i, b in enumerate(self.basis):
            if b.name == name:
                return i
        raise KeyError(name)

    def degree(self, i: int) -> int:
        return self.basis[i].degree

    def q_minus(self) -> list[int]:
        return [i for i in range(len(self.basis)) if i != self.unit]

    def nonzero_classes(self) -> list[EffectiveClass]:
        return [c for c in self.classes if not c.is_zero]

    def gw(self, label: str, i: int, j: int, k: int) -> Fraction:
        """Three-point invariant, using the dimension condition and the
        fundamental-class rule for entries absent from the table."""
        key = (label,) + tuple(sorted((i, j, k)))
        if key in self.gw3:
            return self.gw3[key]
        beta = self._class_index[label]
        degrees = [self.basis[x].degree for x in (i, j, k)]
        if not three_point_allowed(self.n, beta.chern, degrees):
            return Fraction(0)
        idx = [i, j, k]
        if self.unit in idx:
            idx.remove(self.unit)
            return self.pairing[idx[0]][idx[1]] if beta.is_zero else Fraction(0)
        raise MissingTableEntry(
            f"no entry for <{self.basis[i].name}, {self.basis[j].name}, {self.basis[k].name}>_{label}"
        )

    def gw_points(self, label: str, indices: Sequence[int]) -> Fraction:
        """Invariant with any number of primary insertions (three or more)."""
        if len(indices) == 3:
            return self.gw(label, *indices)
        key = (label, tuple(sorted((0, x) for x in indices)))
        if key in self.gw_higher:
            return self.gw_higher[key]
        beta = self._class_index[label]
        shape = [(0, self.basis[x].degree) for x in indices]
        if not point_count_allowed(self.n, beta.chern, shape):
            return Fraction(0)
        if self.unit in indices:
            return Fraction(0)
        if len(indices) > self.higher_max_points:
            raise TableExhausted(f"no invariants with {len(indices)} points in the table")
        names = ", ".join(self.basis[x].name for x in indices)
        raise TableExhausted(f"no entry for <{names}>_{label}")

    def basis_product(self, i: int, j: int) -> dict[int, NovikovElement]:
        """Exact product of two basis classes as {index: coefficient}."""
        key = (min(i, j), max(i, j))
        if key not in self._products:
            acc: dict[int, list] = {}
            size = len(self.basis)
            ginv = self.pairing_inverse
            for beta in self.classes:
                for k in range(size):
                    v = self.gw(beta.label, i, j, k)
                    if v == 0:
                        continue
                    for m in range(size):
                        c = ginv[k][m]
                        if c != 0:
                            acc.setdefault(m, []).append((v * c, -beta.chern, -beta.omega))
            self._products[key] = {
                m: NovikovElement(terms) for m, terms in sorted(acc.items())
            }
            self._products[key] = {m: c for m, c in self._products[key].items() if c.terms}
        return self._products[key]


@dataclass(frozen=True)
class QHElement:
    """A ring element: basis index -> Novikov coefficient (zeros omitted)."""

    coeffs: tuple[tuple[int, NovikovElement], ...] = ()

    def __init__(self, coeffs: Mapping[int, NovikovElement] | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        clean = []
        for i, c in sorted(items, key=lambda item: item[0]):
            c = NovikovElement.coerce(c)
            if c.terms or not c.is_exact:
                clean.append((int(i), c))
        object.__setattr__(self, "coeffs", tuple(clean))

    @classmethod
    def basis(cls, i: int, coeff=1) -> "QHElement":
        return cls({i: NovikovElement.coerce(coeff)})

    @classmethod
    def term(cls, i: int, coeff=1, q: int = 0, t=0) -> "QHElement":
        return cls({i: NovikovElement.monomial(coeff, q, t)})

    def as_dict(self) -> dict[int, NovikovElement]:
        return dict(self.coeffs)

    def coefficient(self, i: int) -> NovikovElement:
        return self.as_dict().get(i, NovikovElement())

    def __add__(self, other: "QHElement") -> "QHElement":
        acc = self.as_dict()
        for i, c in other.coeffs:
            acc[i] = acc[i] + c if i in acc else c
        return QHElement(acc)

    def __neg__(self):
        return QHElement({i: -c for i, c in self.coeffs})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "QHElement":
        c = NovikovElement.coerce(c)
        return QHElement({i: multiply(x, c) for i, x in self.coeffs})

    def truncate(self, floor) -> "QHElement":
        return QHElement({i: c.truncate(floor) for i, c in self.coeffs})

    def is_zero(self) -> bool:
        return all(not c.terms for _, c in self.coeffs)

    def agrees_with(self, other: "QHElement", floor) -> bool:
        mine, theirs = self.as_dict(), other.as_dict()
        for i in set(mine) | set(theirs):
            a = mine.get(i, NovikovElement())
            b = theirs.get(i, NovikovElement())
            if not a.agrees_with(b, floor):
                return False
        return True

    def degrees(self, spec: RingSpec) -> set[int]:
        return {2 * d + spec.degree(i) for i, c in self.coeffs for _, d, _ in c.terms}

    def is_homogeneous(self, spec: RingSpec) -> bool:
        return len(self.degrees(spec)) <= 1

    def render(self, spec: RingSpec | None = None) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in self.coeffs:
            name = spec.basis[i].name if spec is not None else f"e{i}"
            parts.append(f"{name} (x) ({c})")
        return " + ".join(parts)


def dual_basis(spec: RingSpec) -> list[QHElement]:
    """The dual classes, characterised by ``pairing(dual_j, xi_i) = delta_ij``."""
    size = len(spec.basis)
    ginv = spec.pairing_inverse
    return [QHElement({k: ginv[j][k] for k in range(size) if ginv[j][k] != 0}) for j in range(size)]


def dual_matrix(pairing: Sequence[Sequence]) -> list[list[Fraction]]:
    """Row j holds the coordinates of the dual of basis vector j."""
    inv = linalg.inverse(linalg.fmat(pairing))
    if inv is None:
        raise SingularPairing("pairing is not invertible")
    return inv


def quantum_product(a: QHElement, b: QHElement, spec: RingSpec, working_floor=None) -> QHElement:
    """Quantum product, bilinear over Novikov coefficients.

    With a ``working_floor`` only contributions that reach it are computed and
    the result is truncated there; without one the result is exact.
    """
    acc: dict[int, NovikovElement] = {}
    for i, ca in a.coeffs:
        for j, cb in b.coeffs:
            coeff = multiply(ca, cb, working_floor)
            if coeff.is_exact_zero:
                continue
            for m, sc in spec.basis_product(i, j).items():
                term = multiply(coeff, sc, working_floor)
                acc[m] = acc[m] + term if m in acc else term
    out = QHElement(acc)
    return out if working_floor is None else out.truncate(working_floor)


@dataclass(frozen=True)
class IdealVerdict:
    ideal: bool
    witness: tuple[str, str, str] | None = None

    def describe(self) -> str:
        if self.ideal:
            return "Q- ideal: yes; strong-uniruled witness: none"
        a, b, beta = self.witness
        return f"Q- ideal: no; strong-uniruled witness: <{a}, {b}, pt>_{beta}"


def q_minus_ideal_test(spec: RingSpec) -> IdealVerdict:
    """Scan for a nonzero ``<a, b, pt>_beta`` with beta nonzero and a, b in Q-."""
    low = spec.q_minus()
    for beta in spec.nonzero_classes():
        for a, b in combinations_with_replacement(low, 2):
            if spec.gw(beta.label, a, b, spec.point) != 0:
                return IdealVerdict(False, (spec.basis[a].name, spec.basis[b].name, beta.label))
    return IdealVerdict(True)


@dataclass(frozen=True)
class AnnihilationVerdict:
    annihilates: bool
    witness: str | None
    agrees_with_ideal_test: bool


def pt_annihilation_test(spec: RingSpec) -> AnnihilationVerdict:
    """Check ``pt * a = 0`` for every a in Q- and compare with the ideal test."""
    witness = None
    for a in spec.q_minus():
        prod = quantum_product(QHElement.basis(spec.point), QHElement.basis(a), spec)
        if not prod.is_zero():
            witness = spec.basis[a].name
            break
    ideal = q_minus_ideal_test(spec).ideal
    annihilates = witness is None
    return AnnihilationVerdict(annihilates, witness, annihilates == ideal)


@dataclass(frozen=True)
class UnitForm:
    conforming: bool
    lam: NovikovElement
    rest: QHElement


def unit_form_check(u: QHElement, spec: RingSpec) -> UnitForm:
    """Split u as ``1l (x) lam + rest`` with rest in Q-; conforming iff lam is a unit."""
    if not q_minus_ideal_test(spec).ideal:
        raise ValueError("the unit form only applies when Q- is an ideal")
    coeffs = u.as_dict()
    lam = coeffs.pop(spec.unit, NovikovElement())
    rest = QHElement(coeffs)
    lead = lam.lead()
    conforming = lead is not None and not (len(lam.terms) > 1 and lam.terms[1][2] == lead[2])
    return UnitForm(conforming, lam, rest)


def deformed_structure_constants(spec: RingSpec, a: Sequence, i: int, j: int, k: int,
                                 working_floor=None) -> NovikovElement:
    """Third derivative of the genus-zero potential at the point ``a``.

    ``sum_beta sum_m 1/m! <xi_i, xi_j, xi_k, a, ..., a>_{m+3, beta} t^(-omega(beta))``
    with the m-sum cut at the largest point count the table covers.
    """
    coords = [as_fraction(x) for x in a]
    if len(coords) != len(spec.basis):
        raise ValueError("coordinates must have one entry per basis class")
    support = [idx for idx, x in enumerate(coords) if x != 0]
    max_extra = max(spec.higher_max_points - 3, 0) if support else 0
    terms = []
    for beta in spec.classes:
        if working_floor is not None and -beta.omega < as_fraction(working_floor):
            continue
        total = Fraction(0)
        for m in range(max_extra + 1):
            for combo in combinations_with_replacement(support, m):
                weight = Fraction(1)
                for idx in set(combo):
                    weight *= coords[idx] ** combo.count(idx) / math.factorial(combo.count(idx))
                total += weight * spec.gw_points(beta.label, (i, j, k) + combo)
        if total:
            terms.append((total, 0, -beta.omega))
    return NovikovElement(terms, working_floor)


def associativity_defects(spec: RingSpec, limit: int | None = None) -> list[tuple[int, int, int]]:
    """Basis triples (a, b, c) with ``(a*b)*c != a*(b*c)`` for the exact product."""
    size = len(spec.basis)
    out = []
    try:
        for a in range(size):
            for b in range(a, size):
                for c in range(size):
                    xa, xb, xc = (QHElement.basis(x) for x in (a, b, c))
                    left = quantum_product(quantum_product(xa, xb, spec), xc, spec)
                    right = quantum_product(xa, quantum_product(xb, xc, spec), spec)
                    if left != right:
                        out.append((a, b, c))
                        if limit is not None and len(out) >= limit:
                            return out
    except MissingTableEntry:
        return out
    return out
