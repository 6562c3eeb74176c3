"""The quotient ring ``R = Lambda[s] / (s^n = s t^(-delta))``.

R receives the top-degree quantum homology of a one-point blow-up modulo the
classes pulled back from the manifold; ``s`` is the image of ``E (x) q``.
It splits as a sum of two fields cut out by the idempotents
``e1 = 1 - s^(n-1) t^delta`` and ``e2 = s^(n-1) t^delta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .novikov import (
    NEG_INF,
    FloorTooHigh,
    NotAUnit,
    NovikovElement,
    as_fraction,
    format_fraction,
    invert as nov_invert,
    join_terms,
    multiply,
    parse_monomial,
    render_term,
    split_signed_terms,
    unit_series,
)
from .qring import BasisClass, EffectiveClass, QHElement, RingSpec


class ShapeViolation(ValueError):
    """The element does not have the shape ``1 + r s t^k0 (1 + x)``."""


class DegreeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class RRing:
    n: int
    delta: Fraction

    def __post_init__(self):
        if int(self.n) < 2:
            raise ValueError("the quotient ring needs n >= 2")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "delta", as_fraction(self.delta))
        if self.delta <= 0:
            raise ValueError("delta must be positive")


class RElement:
    """Element of R: coefficients of ``s^0 .. s^(n-1)``, always reduced."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: RRing, coeffs: Mapping[int, NovikovElement] | Sequence = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        n, delta = ring.n, ring.delta
        acc: list[NovikovElement] = [NovikovElement() for _ in range(n)]
        for power, c in items:
            c = NovikovElement.coerce(c)
            if any(d != 0 for _, d, _ in c.terms):
                raise ValueError("coefficients of R carry no q-powers")
            power = int(power)
            if power < 0:
                raise ValueError("negative s-power")
            while power >= n:
                power -= n - 1
                c = c.shift(0, -delta)
            acc[power] = c if acc[power].is_exact_zero else acc[power] + c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", tuple(acc))

    def __setattr__(self, name, value):
        raise AttributeError("RElement is immutable")

    @classmethod
    def monomial(cls, ring: RRing, coeff=1, s: int = 0, t=0) -> "RElement":
        return cls(ring, {s: NovikovElement.monomial(coeff, 0, t)})

    @classmethod
    def one(cls, ring: RRing) -> "RElement":
        return cls.monomial(ring)

    @classmethod
    def scalar(cls, ring: RRing, c) -> "RElement":
        return cls(ring, {0: NovikovElement.coerce(c)})

    def terms(self) -> Iterable[tuple[int, Fraction, Fraction]]:
        """Yields (s-power, coefficient, t-exponent)."""
        for k, c in enumerate(self.coeffs):
            for r, _, kappa in c.terms:
                yield k, r, kappa

    def coefficient(self, s: int, t) -> Fraction:
        return self.coeffs[s].coefficient(0, t)

    def is_zero(self) -> bool:
        return all(not c.terms for c in self.coeffs)

    @property
    def floor(self):
        return max(c.floor for c in self.coeffs)

    def lead_t(self):
        exps = [c.lead_t for c in self.coeffs if c.terms]
        return max(exps) if exps else None

    def truncate(self, floor) -> "RElement":
        return RElement(self.ring, [c.truncate(floor) for c in self.coeffs])

    def shift(self, t) -> "RElement":
        return RElement(self.ring, [c.shift(0, t) for c in self.coeffs])

    def scale(self, c) -> "RElement":
        return RElement(self.ring, [x.scale(c) for x in self.coeffs])

    def __add__(self, other: "RElement") -> "RElement":
        _same_ring(self, other)
        return RElement(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return RElement(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RElement):
            return r_mul(self, other, self.ring)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, RElement):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def agrees_with(self, other: "RElement", floor) -> bool:
        return all(a.agrees_with(b, floor) for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"RElement({render_relement(self)!r})"

    def __str__(self):
        return render_relement(self)


def _same_ring(a: RElement, b: RElement):
    if a.ring != b.ring:
        raise ValueError("elements live in different rings")


def r_mul(a: RElement, b: RElement, ring: RRing | None = None, working_floor=None) -> RElement:
    """Product in R, reduced by ``s^(n+j) = s^(1+j) t^(-delta)``."""
    _same_ring(a, b)
    ring = ring or a.ring
    acc: dict[int, NovikovElement] = {}
    for i, ca in enumerate(a.coeffs):
        if ca.is_exact_zero:
            continue
        for j, cb in enumerate(b.coeffs):
            if cb.is_exact_zero:
                continue
            prod = multiply(ca, cb, working_floor)
            acc[i + j] = acc[i + j] + prod if i + j in acc else prod
    out = RElement(ring, acc)
    return out if working_floor is None else out.truncate(working_floor)


def idempotents(ring: RRing) -> tuple[RElement, RElement]:
    """The pair ``(1 - s^(n-1) t^delta, s^(n-1) t^delta)``."""
    e2 = RElement.monomial(ring, 1, ring.n - 1, ring.delta)
    e1 = RElement.one(ring) - e2
    return e1, e2


def f_homomorphism(a: RElement, ring: RRing | None = None, working_floor=None) -> NovikovElement:
    """Substitute ``s -> t^(-delta/(n-1))``; the kernel is ``e1 R``."""
    ring = ring or a.ring
    step = ring.delta / (ring.n - 1)
    total = NovikovElement()
    for k, c in enumerate(a.coeffs):
        total = total + c.shift(0, -k * step)
    return total if working_floor is None else total.truncate(working_floor)


def in_x(x: RElement) -> bool:
    """Membership in X: every term has a negative t-exponent."""
    return all(kappa < 0 for _, _, kappa in x.terms())


def _deepen(compute: Callable[[Fraction], RElement], working_floor, margin: Fraction) -> RElement:
    """Run ``compute`` at a lower internal floor until the result is known
    down to ``working_floor``, then truncate."""
    wf = as_fraction(working_floor)
    margin = max(as_fraction(margin), Fraction(1))
    for _ in range(8):
        result = compute(wf - margin)
        if result.floor <= wf:
            return result.truncate(wf)
        margin *= 2
    raise FloorTooHigh(f"could not reach floor {format_fraction(wf)}")


# generic inversion through the two field components

def _e2_mul(a: list[NovikovElement], b: list[NovikovElement], m: int, delta: Fraction,
            floor) -> list[NovikovElement]:
    """Product in ``Lambda[s]/(s^m - t^(-delta))`` (coefficient lists of length m)."""
    out = [NovikovElement() for _ in range(m)]
    for i, ca in enumerate(a):
        if ca.is_exact_zero:
            continue
        for j, cb in enumerate(b):
            if cb.is_exact_zero:
                continue
            prod = multiply(ca, cb, floor)
            k = i + j
            if k >= m:
                k -= m
                prod = prod.shift(0, -delta)
            out[k] = out[k] + prod
    return [c.truncate(floor) if floor is not None else c for c in out]


def _e2_invert(a: list[NovikovElement], ring: RRing, floor) -> list[NovikovElement]:
    """Invert in ``e2 R``, identified with ``Lambda[s]/(s^(n-1) - t^(-delta))``.

    The leading monomial is the one maximising ``kappa - k delta/(n-1)``, the
    exponent it acquires under the substitution of the F map.
    """
    m = ring.n - 1
    delta = ring.delta
    step = delta / m
    best = None
    for k, c in enumerate(a):
        for r, _, kappa in c.terms:
            val = kappa - k * step
            if best is None or val > best[0]:
                best = (val, k, r, kappa, False)
            elif val == best[0]:
                best = (val, best[1], best[2], best[3], True)
    if best is None:
        raise NotAUnit("the e2 component vanishes")
    val, k, r, kappa, tied = best
    if tied:
        raise NotAUnit("the e2 component has several leading monomials of equal weight")
    inv_lead = [NovikovElement() for _ in range(m)]
    if k == 0:
        inv_lead[0] = NovikovElement.monomial(1 / r, 0, -kappa)
    else:
        inv_lead[m - k] = NovikovElement.monomial(1 / r, 0, delta - kappa)
    z = _e2_mul(a, inv_lead, m, delta, None)
    z[0] = z[0] - 1
    if floor is None:
        raise ValueError("a working floor is required")
    # weights are additive under the relation; exponents lie in [weight, weight + delta)
    # after the final shift by the leading inverse, so stop one delta lower
    lead_shift = (delta - kappa) if k else -kappa
    stop = as_fraction(floor) - lead_shift - delta
    # tags are s-powers, levels are weights; the relation preserves weight
    z_terms = [(j, kz - j * step, c) for j, cz in enumerate(z) for c, _, kz in cz.terms]

    def combine(a, b):
        return (a + b - m, 0) if a + b >= m else (a + b, 0)

    ys = unit_series(z_terms, combine, stop)
    ys = {(j, w + j * step): c for (j, w), c in ys.items()}
    known = max([as_fraction(floor) - lead_shift] + [c.floor + delta for c in z])
    total = [NovikovElement([(c, 0, kz) for (j, kz), c in ys.items() if j == i], known) for i in range(m)]
    return _e2_mul(total, inv_lead, m, delta, floor)


def invert_generic(u: RElement, ring: RRing | None = None, working_floor=-20) -> RElement:
    """Inverse of u computed separately on ``e1 R`` and ``e2 R``."""
    ring = ring or u.ring
    n, delta = ring.n, ring.delta
    if not u.coeffs[0].terms:
        raise NotAUnit("the e1 component vanishes")
    a = [u.coeffs[0] + u.coeffs[n - 1].shift(0, -delta)] + list(u.coeffs[1:n - 1])
    if n == 2:
        a = [u.coeffs[0] + u.coeffs[1].shift(0, -delta)]
    if all(not c.terms for c in a):
        raise NotAUnit("the e2 component vanishes")

    def compute(floor):
        b1 = nov_invert(u.coeffs[0], floor)
        b = _e2_invert(a, ring, floor)
        e1_part = RElement(ring, {0: b1, n - 1: -b1.shift(0, delta)})
        e2_coeffs = {k: b[k] for k in range(1, n - 1)}
        e2_coeffs[n - 1] = b[0].shift(0, delta)
        return e1_part + RElement(ring, e2_coeffs)

    spread = _spread(u)
    return _deepen(compute, working_floor, 2 * spread + 4 * delta)


def _spread(u: RElement) -> Fraction:
    exps = [kappa for _, _, kappa in u.terms()]
    if not exps:
        return Fraction(0)
    return max(abs(e) for e in exps)


# the closed form

@dataclass(frozen=True)
class UPattern:
    r: Fraction
    kappa0: Fraction
    x: RElement


def lemma_u_pattern(u: RElement, ring: RRing | None = None) -> UPattern:
    """Decompose ``u = 1 + r s t^k0 (1 + x)`` with x in X, r != 0, k0 > delta."""
    ring = ring or u.ring
    n, delta = ring.n, ring.delta
    const = u.coeffs[0]
    if const.terms != ((Fraction(1), 0, Fraction(0)),):
        raise ShapeViolation(f"constant coefficient must be exactly 1, got {const}")
    lead1 = u.coeffs[1].lead()
    if lead1 is None:
        raise ShapeViolation("the coefficient of s vanishes (r = 0)")
    r, _, kappa0 = lead1
    for k in range(1, n):
        for c, _, kappa in u.coeffs[k].terms:
            if (k, kappa) != (1, kappa0) and kappa >= kappa0:
                raise ShapeViolation(
                    f"term {render_term(c, 0, kappa, _s_power(k))} is not below r s t^({format_fraction(kappa0)})")
    if kappa0 <= delta:
        raise ShapeViolation(
            f"exponent {format_fraction(kappa0)} must exceed delta = {format_fraction(delta)}")
    scale = Fraction(1) / r
    coeffs = {}
    for k in range(1, n):
        coeffs[k - 1] = u.coeffs[k].shift(0, -kappa0).scale(scale)
    coeffs[0] = coeffs[0] - 1
    x = RElement(ring, coeffs)
    if not in_x(x):
        raise ShapeViolation("x has a term with nonnegative t-exponent")
    return UPattern(r, kappa0, x)


def lemma_u_series(u: RElement, ring: RRing | None = None, working_floor=-20):
    """Return ``(pattern, y)`` where ``1 + y`` inverts ``1 + x'`` and
    ``x' = x + (1/r) s^(n-2) t^(delta-k0)``."""
    ring = ring or u.ring
    pat = lemma_u_pattern(u, ring)
    xprime = pat.x + RElement.monomial(ring, 1 / pat.r, ring.n - 2, ring.delta - pat.kappa0)

    n, delta = ring.n, ring.delta
    z_terms = [(k, kappa, c) for k, c, kappa in xprime.terms()]

    def combine(a, b):
        k, drop = a + b, Fraction(0)
        while k >= n:
            k, drop = k - (n - 1), drop + delta
        return k, drop

    def compute(floor):
        floor = max(as_fraction(floor), xprime.floor)
        ys = unit_series(z_terms, combine, floor)
        coeffs = {k: NovikovElement([(c, 0, kappa) for (j, kappa), c in ys.items() if j == k], floor)
                  for k in range(n)}
        return RElement(ring, coeffs) - RElement.one(ring)

    y = _deepen(compute, working_floor, Fraction(1))
    return pat, y


def lemma_u_inverse(u: RElement, ring: RRing | None = None, working_floor=-20) -> RElement:
    """Closed-form inverse:

    * n >= 3: ``1 - s^(n-1) t^delta + (1/r) s^(n-2) t^(delta-k0) (1 + y)``
    * n = 2:  ``1 - s t^delta + (1/r) s t^(2 delta - k0) (1 + y)``
    """
    ring = ring or u.ring
    n, delta = ring.n, ring.delta
    pat = lemma_u_pattern(u, ring)
    e1, e2 = idempotents(ring)

    def compute(floor):
        _, y = lemma_u_series(u, ring, floor)
        one_y = RElement.one(ring) + y
        if n >= 3:
            mono = RElement.monomial(ring, 1 / pat.r, n - 2, delta - pat.kappa0)
        else:
            mono = RElement.monomial(ring, 1 / pat.r, 1, 2 * delta - pat.kappa0)
        return e1 + r_mul(r_mul(mono, e2, ring), one_y, ring, floor)

    return _deepen(compute, working_floor, 2 * delta + 2)


def default_floor(u: RElement, ring: RRing | None = None) -> Fraction:
    """``k0 - 20 delta`` for elements of the closed-form shape, else ``-20 delta``."""
    ring = ring or u.ring
    try:
        return lemma_u_pattern(u, ring).kappa0 - 20 * ring.delta
    except ShapeViolation:
        return -20 * ring.delta


# projection from the blow-up

def phi_e(a: QHElement, blowup_spec: RingSpec, ring: RRing) -> RElement:
    """Project a top-degree element to R: ``E^k (x) q^k -> s^k``, ``1l -> 1``,
    classes outside the exceptional powers are sent to 0."""
    n = blowup_spec.n
    if ring.n != n:
        raise ValueError("ring and table disagree on n")
    power_of = {idx: k for k, idx in enumerate(blowup_spec.exceptional_powers, start=1)}
    power_of[blowup_spec.unit] = 0
    coeffs = {}
    for i, c in a.coeffs:
        deg = blowup_spec.degree(i)
        for r, d, kappa in c.terms:
            if 2 * d + deg != 2 * n:
                raise DegreeMismatch(
                    f"term {blowup_spec.basis[i].name} (x) q^{d} has degree {2 * d + deg}, not {2 * n}")
        if i in power_of:
            coeffs[power_of[i]] = NovikovElement([(r, 0, kappa) for r, _, kappa in c.terms], c.floor)
    return RElement(ring, coeffs)


def exceptional_table(n: int, delta=1, max_multiple: int = 1, associativity: str = "warn") -> RingSpec:
    """Quantum table of the exceptional divisor's powers in a point blow-up.

    Basis ``pt, E^(n-1), ..., E, 1l``; pairing ``pt.1l = 1``, ``E^i.E^(n-i) = -1``.
    The only nonzero curve invariants are ``<E^i, E^j, E^k>_eps = -1`` for
    ``i + j + k = 2n - 1``; multiples of eps (up to ``max_multiple``) are
    listed with vanishing entries.
    """
    delta = as_fraction(delta)
    if n < 2:
        raise ValueError("need n >= 2")
    basis = [BasisClass("pt", 0)] + [BasisClass(_e_name(k), 2 * n - 2 * k) for k in range(n - 1, 0, -1)]
    basis.append(BasisClass("1l", 2 * n))
    size = n + 1
    e_index = {k: n - k for k in range(1, n)}
    power = {idx: k for k, idx in e_index.items()}
    unit = n
    pairing = [[0] * size for _ in range(size)]
    pairing[0][unit] = pairing[unit][0] = 1
    for i in range(1, n):
        pairing[e_index[i]][e_index[n - i]] = -1

    def cap(a: int, b: int) -> dict[int, int]:
        if a == unit:
            return {b: 1}
        if b == unit:
            return {a: 1}
        if a == 0 or b == 0:
            return {}
        total = power[a] + power[b]
        if total < n:
            return {e_index[total]: 1}
        if total == n:
            return {0: -1}
        return {}

    classes = [EffectiveClass("0")]
    for p in range(1, max_multiple + 1):
        label = "eps" if p == 1 else f"{p}eps"
        classes.append(EffectiveClass(label, p * delta, p * (n - 1)))
    gw3 = []
    for i in range(size):
        for j in range(i, size):
            for k in range(j, size):
                if unit in (i, j, k):
                    continue
                degs = basis[i].degree + basis[j].degree + basis[k].degree
                if degs == 4 * n:
                    prod = cap(i, j)
                    value = sum(c * pairing[m][k] for m, c in prod.items())
                    gw3.append(("0", i, j, k, value))
                for p in range(1, max_multiple + 1):
                    if degs != 4 * n - 2 * p * (n - 1):
                        continue
                    value = 0
                    if p == 1 and 0 not in (i, j, k) and power[i] + power[j] + power[k] == 2 * n - 1:
                        value = -1
                    gw3.append((classes[p].label, i, j, k, value))
    return RingSpec(n, basis, pairing, classes, gw3,
                    exceptional_powers=[e_index[k] for k in range(1, n)],
                    associativity=associativity)


def _e_name(k: int) -> str:
    return "E" if k == 1 else f"E^{k}"


# text form

def _s_power(k: int) -> str:
    if k == 0:
        return ""
    return "s" if k == 1 else f"s^{k}"


def render_relement(a: RElement) -> str:
    pieces = []
    for k, c in enumerate(a.coeffs):
        for r, _, kappa in c.terms:
            pieces.append(render_term(r, 0, kappa, _s_power(k)))
    text = join_terms(pieces)
    fl = a.floor
    if fl != NEG_INF:
        tail = f"O(t^({format_fraction(fl)}))"
        text = tail if text == "0" else f"{text} + {tail}"
    return text


def parse_relement(text: str, ring: RRing) -> RElement:
    """Parse ``1 + s*t^(5) - 1/2*s^2*t^(-1)`` into an element of R."""
    coeffs: dict[int, list] = {}
    stripped = text.strip()
    if stripped == "0":
        return RElement(ring)
    for sign, piece in split_signed_terms(stripped):
        coeff, exps = parse_monomial(piece, "st")
        s = exps.get("s", Fraction(0))
        if s.denominator != 1 or s < 0:
            raise ValueError(f"s-power must be a nonnegative integer in {piece!r}")
        coeffs.setdefault(int(s), []).append((sign * coeff, 0, exps.get("t", Fraction(0))))
    return RElement(ring, {k: NovikovElement(v) for k, v in coeffs.items()})
