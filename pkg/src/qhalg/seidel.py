"""Seidel elements: quantum units carrying section-class bookkeeping.

A Seidel element is a ring element whose terms are indexed by section
classes ``sigma``; a class contributes ``a_sigma (x) q^(-c1v(sigma)) t^(-u(sigma))``
where ``u`` is the coupling value and ``c1v`` the vertical Chern number.
Writing ``sigma = sigma_ref + beta`` for fiber classes ``beta``::

    u(sigma_ref + beta)   = u(sigma_ref) + omega(beta)
    c1v(sigma_ref + beta) = c1v(sigma_ref) + c1(beta)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .blowup import (
    RElement,
    RRing,
    ShapeViolation,
    lemma_u_inverse,
    lemma_u_pattern,
    phi_e,
)
from .novikov import NovikovElement, as_fraction, format_fraction, invert as nov_invert, multiply
from .qring import EffectiveClass, QHElement, RingSpec, quantum_product


class NonPositiveEnergyTail(ValueError):
    pass


class ZeroUnitCoefficient(ValueError):
    pass


class PatternViolation(ValueError):
    pass


class WitnessAbsent(LookupError):
    pass


@dataclass(frozen=True)
class LoopData:
    k_max: Fraction = Fraction(0)
    k_min: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "k_max", as_fraction(self.k_max))
        object.__setattr__(self, "k_min", as_fraction(self.k_min))
        if self.k_max < self.k_min:
            raise ValueError("k_max must not be below k_min")

    def inverse(self) -> "LoopData":
        """Loop data of the inverse loop: ``(-k_min, -k_max)``."""
        return LoopData(-self.k_min, -self.k_max)

    @property
    def width(self) -> Fraction:
        return self.k_max - self.k_min


@dataclass(frozen=True)
class LedgerEntry:
    coupling: Fraction
    vert_chern: int


@dataclass(frozen=True)
class SectionLedger:
    """Coupling and vertical Chern values of ``sigma_ref + beta`` for each fiber class label."""

    reference: str
    coupling: Fraction
    vert_chern: int
    entries: tuple[tuple[str, LedgerEntry], ...] = ()

    def entry(self, label: str) -> LedgerEntry:
        if label == "0":
            return LedgerEntry(self.coupling, self.vert_chern)
        for name, e in self.entries:
            if name == label:
                return e
        raise KeyError(label)

    def with_class(self, beta: EffectiveClass) -> "SectionLedger":
        if beta.label == "0" or any(name == beta.label for name, _ in self.entries):
            return self
        e = LedgerEntry(self.coupling + beta.omega, self.vert_chern + beta.chern)
        return SectionLedger(self.reference, self.coupling, self.vert_chern,
                             self.entries + ((beta.label, e),))

    def is_additive(self, classes: Mapping[str, EffectiveClass]) -> bool:
        for name, e in self.entries:
            beta = classes[name]
            if e.coupling != self.coupling + beta.omega or e.vert_chern != self.vert_chern + beta.chern:
                return False
        return True

    def rebase(self, beta: EffectiveClass, label: str | None = None) -> "SectionLedger":
        """Use ``sigma_ref + beta`` as the new reference section."""
        new_coupling = self.coupling + beta.omega
        new_chern = self.vert_chern + beta.chern
        entries = tuple(
            (name, e) for name, e in self.entries if name != beta.label
        )
        return SectionLedger(label or f"{self.reference}+{beta.label}", new_coupling, new_chern, entries)


@dataclass(frozen=True)
class SeidelElement:
    element: QHElement
    ledger: SectionLedger
    loop: LoopData
    unit: int
    maximal_shape: bool = False

    def unit_coefficient(self) -> NovikovElement:
        return self.element.coefficient(self.unit)


def _contribution(contrib) -> dict[int, Fraction]:
    if isinstance(contrib, QHElement):
        out = {}
        for i, c in contrib.coeffs:
            if len(c.terms) != 1 or c.terms[0][1:] != (0, 0) or not c.is_exact:
                raise ValueError("tail contributions must be plain homology classes")
            out[i] = c.terms[0][0]
        return out
    if isinstance(contrib, int):
        return {contrib: Fraction(1)}
    return {int(i): as_fraction(v) for i, v in dict(contrib).items()}


def seidel_from_leading(leading, m_max: int, loop: LoopData, tail: Sequence = (),
                        classes: Mapping[str, EffectiveClass] | RingSpec | None = None,
                        unit: int | None = None, reference: str = "sigma_max") -> SeidelElement:
    """Assemble ``a_max (x) q^m_max t^K_max + sum a_beta (x) q^(m_max - c1) t^(K_max - omega)``.

    ``leading`` is a basis index or a {index: coefficient} map; ``tail`` lists
    ``(class label, contribution)`` pairs whose classes are looked up in
    ``classes``.  Every tail class must have positive energy.
    """
    if isinstance(classes, RingSpec):
        if unit is None:
            unit = classes.unit
        classes = {c.label: c for c in classes.classes}
    if unit is None:
        raise ValueError("the basis index of the unit is required")
    classes = dict(classes or {})
    k_max = loop.k_max
    ledger = SectionLedger(reference, -k_max, -m_max)
    coeffs: dict[int, list] = {}
    for i, c in _contribution(leading).items():
        coeffs.setdefault(i, []).append((c, m_max, k_max))
    for label, contrib in tail:
        beta = classes[label]
        if beta.omega <= 0:
            raise NonPositiveEnergyTail(
                f"tail class {label} has energy {format_fraction(beta.omega)}; "
                "only the zero class may have nonpositive energy")
        ledger = ledger.with_class(beta)
        for i, c in _contribution(contrib).items():
            coeffs.setdefault(i, []).append((c, m_max - beta.chern, k_max - beta.omega))
    element = QHElement({i: NovikovElement(terms) for i, terms in coeffs.items()})
    return SeidelElement(element, ledger, loop, unit, maximal_shape=True)


def check_maximal_shape(s: SeidelElement) -> bool:
    """Leading exponent is K_max and nothing lies above it."""
    exps = [k for _, c in s.element.coeffs for _, _, k in c.terms]
    if not exps:
        return False
    return max(exps) == s.loop.k_max


def seidel_compose(s1: SeidelElement, s2: SeidelElement, spec: RingSpec, working_floor=None) -> QHElement:
    return quantum_product(s1.element, s2.element, spec, working_floor)


def kappa0_extract(s: SeidelElement) -> Fraction:
    """``K_max`` minus the leading exponent of the unit coefficient."""
    lam = s.unit_coefficient()
    if not lam.terms:
        raise ZeroUnitCoefficient("the unit coefficient vanishes")
    return s.loop.k_max - lam.lead_t


@dataclass(frozen=True)
class IdentityLine:
    name: str
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs

    def render(self) -> str:
        status = "holds" if self.holds else "FAILS"
        return f"{self.name}: {format_fraction(self.lhs)} = {format_fraction(self.rhs)} [{status}]"


@dataclass(frozen=True)
class K2Report:
    kappa0: Fraction
    kappa0_inv: Fraction
    kappa0_blow: Fraction
    kappa0_blow_inv: Fraction
    lines: tuple[IdentityLine, ...]

    @property
    def all_hold(self) -> bool:
        return all(line.holds for line in self.lines)

    def render(self) -> str:
        head = (
            f"k0 = {format_fraction(self.kappa0)}, k0' = {format_fraction(self.kappa0_inv)}, "
            f"blow-up k0 = {format_fraction(self.kappa0_blow)}, "
            f"blow-up k0' = {format_fraction(self.kappa0_blow_inv)}"
        )
        return "\n".join([head] + [line.render() for line in self.lines])


def k2_relations_check(s: SeidelElement, s_inv: SeidelElement, s_blow: SeidelElement,
                       s_blow_inv: SeidelElement) -> K2Report:
    """Check the exponent identities between a loop, its inverse and their
    blow-up lifts."""
    if s.loop.width != s_blow.loop.width:
        raise ValueError("the blow-up loop must have the same K_max - K_min")
    k0 = kappa0_extract(s)
    k0i = kappa0_extract(s_inv)
    kb = kappa0_extract(s_blow)
    kbi = kappa0_extract(s_blow_inv)
    lines = (
        IdentityLine("k0 + k0' = K_max - K_min", k0 + k0i, s.loop.width),
        IdentityLine("blow-up k0 + k0' = K_max - K_min", kb + kbi, s_blow.loop.width),
        IdentityLine("blow-up k0 = k0", kb, k0),
        IdentityLine("blow-up k0' = k0'", kbi, k0i),
        IdentityLine("inverse K_max = -K_min", s_inv.loop.k_max, -s.loop.k_min),
    )
    return K2Report(k0, k0i, kb, kbi, lines)


@dataclass(frozen=True)
class NormalizedUnit:
    u: RElement
    r: Fraction
    kappa0: Fraction
    x: RElement


def su_unit_normalize(s_blow: SeidelElement, ring: RRing, blowup_spec: RingSpec,
                      working_floor=-20) -> NormalizedUnit:
    """``u = Phi_E(S) * lam^-1`` with lam the unit coefficient, checked against
    the shape ``1 + r s t^k0 (1 + x)`` with x in X and ``k0 > 0``."""
    lam = s_blow.element.coefficient(blowup_spec.unit)
    if not lam.terms:
        raise ZeroUnitCoefficient("the unit coefficient vanishes")
    image = phi_e(s_blow.element, blowup_spec, ring)
    wf = as_fraction(working_floor)
    lead = lam.lead_t
    spread = max((abs(k) for _, _, k in image.terms()), default=Fraction(0))
    inv = nov_invert(lam, wf - spread - abs(lead) - 1) if len(lam.terms) > 1 or not lam.is_exact else nov_invert(lam)
    u = RElement(ring, [multiply(c, inv) for c in image.coeffs]).truncate(wf)
    const = u.coeffs[0]
    if const.terms != ((Fraction(1), 0, Fraction(0)),):
        bad = next((t for t in const.terms if t != (Fraction(1), 0, Fraction(0))), None)
        raise PatternViolation(f"constant term is not 1 (offending term {bad})")
    lead1 = u.coeffs[1].lead()
    if lead1 is None:
        raise PatternViolation("no s-term: the image has no E (x) q component")
    r, _, kappa0 = lead1
    if kappa0 <= 0:
        raise PatternViolation(f"s-term exponent {format_fraction(kappa0)} is not positive")
    for k in range(1, ring.n):
        for c, _, kappa in u.coeffs[k].terms:
            if (k, kappa) != (1, kappa0) and kappa >= kappa0:
                raise PatternViolation(
                    f"term {format_fraction(c)}*s^{k}*t^({format_fraction(kappa)}) is not below the s-term")
    coeffs = {k - 1: u.coeffs[k].shift(0, -kappa0).scale(1 / r) for k in range(1, ring.n)}
    coeffs[0] = coeffs[0] - 1
    x = RElement(ring, coeffs)
    return NormalizedUnit(u, r, kappa0, x)


@dataclass(frozen=True)
class InverseWitness:
    s_power: int
    t_exponent: Fraction
    coefficient: Fraction
    class_energy: Fraction
    invariant: str


def extract_inverse_witness(u: RElement, ring: RRing, loop: LoopData, kappa0, working_floor=None) -> InverseWitness:
    """Locate the guaranteed term of ``u^-1`` and the fiber-class energy it forces.

    For n >= 3 the term is ``(1/r) s^(n-2) t^(delta - k0)``, for n = 2 it is
    ``(1/r) s t^(2 delta - k0)``.  The inverse loop's Seidel element is a
    multiple of ``u^-1`` by a unit with leading exponent ``-K_max + k0``,
    which also lies on the reference section; the energy is the gap.
    """
    n, delta = ring.n, ring.delta
    kappa0 = as_fraction(kappa0)
    try:
        pat = lemma_u_pattern(u, ring)
    except ShapeViolation as exc:
        raise WitnessAbsent(f"precondition fails: {exc}") from exc
    if pat.kappa0 != kappa0:
        raise WitnessAbsent(
            f"s-term exponent {format_fraction(pat.kappa0)} differs from k0 = {format_fraction(kappa0)}")
    if n >= 3:
        s_power, exponent = n - 2, delta - kappa0
    else:
        s_power, exponent = 1, 2 * delta - kappa0
    wf = as_fraction(working_floor) if working_floor is not None else exponent - 10 * delta
    wf = min(wf, exponent)
    inv = lemma_u_inverse(u, ring, wf)
    coeff = inv.coefficient(s_power, exponent)
    if coeff == 0:
        raise WitnessAbsent(f"coefficient of s^{s_power} t^({format_fraction(exponent)}) vanishes")
    reference = -loop.k_max + kappa0
    kappa = reference + exponent
    energy = reference - kappa
    invariant = "<E^2>_(sigma-eps)" if n >= 3 else "<E>_(sigma-2eps)"
    return InverseWitness(s_power, exponent, coeff, energy, invariant)
