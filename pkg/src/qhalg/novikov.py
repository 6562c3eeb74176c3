"""Truncated Novikov series in two variables.

An element is a finite sum of terms ``r * q^d * t^k`` with rational ``r``,
integer ``d`` and rational ``k``.  Every element also carries a *floor*:
terms with t-exponent below the floor are unknown and have been discarded.
An exact element has floor ``-inf``.

The big ring is a ring of series in ``t`` that go to ``-inf``, so the
leading term of an element is the one with the largest t-exponent.
"""

from __future__ import annotations

import heapq
import re
from fractions import Fraction
from operator import itemgetter
from typing import Iterable, Iterator, Union

NEG_INF = float("-inf")

Number = Union[int, Fraction]
_TERM_ORDER = itemgetter(2, 1)  # terms sort by decreasing (t-exponent, q-power)
Floor = Union[Fraction, float]


class ZeroElement(ArithmeticError):
    """Raised when inverting an element without terms."""


class FloorTooHigh(ArithmeticError):
    """Raised when an element is not known precisely enough for a request."""


class NotAUnit(ArithmeticError):
    """Raised when the leading t-level of an element is not a single monomial."""


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions and strings like ``"-3/7"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {x!r} as an exact rational")


def as_floor(x) -> Floor:
    if x is None:
        return NEG_INF
    if isinstance(x, float):
        if x == NEG_INF:
            return NEG_INF
        raise TypeError("floors must be exact rationals or -inf")
    return as_fraction(x)


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class NovikovElement:
    """Immutable truncated series; see the module docstring."""

    __slots__ = ("terms", "floor")

    def __init__(self, terms: Iterable = (), floor=None):
        fl = as_floor(floor)
        acc: dict[tuple[int, Fraction], Fraction] = {}
        for c, d, k in terms:
            c = as_fraction(c)
            k = as_fraction(k)
            if not isinstance(d, int):
                raise TypeError("q-powers must be integers")
            if c == 0 or k < fl:
                continue
            key = (d, k)
            acc[key] = acc.get(key, Fraction(0)) + c
        items = [(c, d, k) for (d, k), c in acc.items() if c != 0]
        items.sort(key=_TERM_ORDER, reverse=True)
        object.__setattr__(self, "terms", tuple(items))
        object.__setattr__(self, "floor", fl)

    def __setattr__(self, name, value):
        raise AttributeError("NovikovElement is immutable")

    @classmethod
    def _from_acc(cls, acc: dict, floor) -> "NovikovElement":
        """Internal constructor from ``{(d, k): c}`` with validated entries."""
        items = [(c, d, k) for (d, k), c in acc.items() if c and k >= floor]
        items.sort(key=_TERM_ORDER, reverse=True)
        return cls._from_sorted(tuple(items), floor)

    @classmethod
    def _from_entries(cls, entries, floor) -> "NovikovElement":
        """Internal constructor from mutable ``[c, d, k]`` entries above the floor."""
        items = [(c, d, k) for c, d, k in entries if c]
        items.sort(key=_TERM_ORDER, reverse=True)
        return cls._from_sorted(tuple(items), floor)

    @classmethod
    def _from_sorted(cls, terms: tuple, floor) -> "NovikovElement":
        out = object.__new__(cls)
        object.__setattr__(out, "terms", terms)
        object.__setattr__(out, "floor", floor)
        return out

    # construction helpers

    @classmethod
    def monomial(cls, coeff: Number = 1, q: int = 0, t: Number = 0) -> "NovikovElement":
        return cls([(coeff, q, t)])

    @classmethod
    def one(cls) -> "NovikovElement":
        return cls([(1, 0, 0)])

    @classmethod
    def zero(cls, floor=None) -> "NovikovElement":
        return cls((), floor)

    @classmethod
    def coerce(cls, x) -> "NovikovElement":
        if isinstance(x, NovikovElement):
            return x
        if isinstance(x, str):
            return parse_novikov(x)
        return cls.monomial(as_fraction(x))

    # inspection

    def __iter__(self) -> Iterator[tuple[Fraction, int, Fraction]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_exact(self) -> bool:
        return self.floor == NEG_INF

    @property
    def is_exact_zero(self) -> bool:
        return not self.terms and self.is_exact

    def lead(self):
        """Leading term as ``(r, d, k)``, or None for an element without terms."""
        return self.terms[0] if self.terms else None

    @property
    def lead_t(self):
        return self.terms[0][2] if self.terms else None

    def coefficient(self, q: int = 0, t: Number = 0) -> Fraction:
        t = as_fraction(t)
        for c, d, k in self.terms:
            if d == q and k == t:
                return c
        return Fraction(0)

    def t_exponents(self) -> list[Fraction]:
        return sorted({k for _, _, k in self.terms}, reverse=True)

    def q_powers(self) -> set[int]:
        return {d for _, d, _ in self.terms}

    # arithmetic

    def truncate(self, floor) -> "NovikovElement":
        """Forget every term below ``floor``; the floor never decreases."""
        fl = max(self.floor, as_floor(floor))
        if not self.terms or self.terms[-1][2] >= fl:
            return NovikovElement._from_sorted(self.terms, fl)
        return NovikovElement._from_sorted(tuple(t for t in self.terms if t[2] >= fl), fl)

    def __add__(self, other):
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        floor = max(self.floor, other.floor)
        acc = {}
        for c, d, k in self.terms + other.terms:
            if k < floor:
                continue
            key = (d, k.numerator, k.denominator)
            entry = acc.get(key)
            if entry is None:
                acc[key] = [c, d, k]
            else:
                entry[0] += c
        return NovikovElement._from_entries(acc.values(), floor)

    __radd__ = __add__

    def __neg__(self):
        return NovikovElement._from_acc({(d, k): -c for c, d, k in self.terms}, self.floor)

    def __sub__(self, other):
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    __rmul__ = __mul__

    def scale(self, c: Number) -> "NovikovElement":
        c = as_fraction(c)
        if c == 0:
            return NovikovElement((), self.floor)
        return NovikovElement([(c * r, d, k) for r, d, k in self.terms], self.floor)

    def shift(self, q: int = 0, t: Number = 0) -> "NovikovElement":
        """Multiply by the monomial ``q^q t^t`` (floor moves with the terms)."""
        t = as_fraction(t)
        return NovikovElement._from_acc({(d + q, k + t): c for c, d, k in self.terms}, self.floor + t)

    def at_q_one(self) -> "NovikovElement":
        """Forget the q-grading by setting q = 1."""
        return NovikovElement([(c, 0, k) for c, _, k in self.terms], self.floor)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = NovikovElement.monomial(other)
        if not isinstance(other, NovikovElement):
            return NotImplemented
        return self.terms == other.terms and self.floor == other.floor

    def __hash__(self):
        return hash((self.terms, self.floor))

    def agrees_with(self, other: "NovikovElement", floor) -> bool:
        """True when both elements have the same terms at t-exponents >= floor."""
        fl = as_floor(floor)
        mine = [term for term in self.terms if term[2] >= fl]
        theirs = [term for term in other.terms if term[2] >= fl]
        return mine == theirs

    def __repr__(self):
        return f"NovikovElement({str(self)!r})"

    def __str__(self):
        return render(self)


def _coerce_operand(x):
    if isinstance(x, NovikovElement):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return NovikovElement.monomial(x)
    return NotImplemented


def add(a: NovikovElement, b: NovikovElement) -> NovikovElement:
    return a + b


def multiply(a: NovikovElement, b: NovikovElement, working_floor=None) -> NovikovElement:
    """Product with the floor rule ``max(a.floor + lead_t(b), b.floor + lead_t(a))``.

    An empty element contributes a leading exponent of 0.  The product with an
    exact zero is an exact zero.
    """
    if a.is_exact_zero or b.is_exact_zero:
        return NovikovElement()
    la = a.lead_t if a.terms else Fraction(0)
    lb = b.lead_t if b.terms else Fraction(0)
    floor = max(a.floor + lb, b.floor + la, as_floor(working_floor))
    acc: dict = {}
    for c1, d1, k1 in a.terms:
        if k1 + lb < floor:
            break
        for c2, d2, k2 in b.terms:
            k = k1 + k2
            if k < floor:
                break
            key = (d1 + d2, k.numerator, k.denominator)
            entry = acc.get(key)
            if entry is None:
                acc[key] = [c1 * c2, d1 + d2, k]
            else:
                entry[0] += c1 * c2
    return NovikovElement._from_entries(acc.values(), floor)


def leading(a: NovikovElement):
    """The term of largest t-exponent (ties go to the larger q-power), or None."""
    return a.lead()


def invert(a: NovikovElement, working_floor=None) -> NovikovElement:
    """Inverse through ``1 / (1 + z)`` with ``1 + z = a / lead(a)``, solved level by level.

    ``working_floor`` bounds the t-exponents that are kept; it may be omitted
    only when ``a`` is a single exact monomial.
    """
    if not a.terms:
        raise ZeroElement("cannot invert an element without terms")
    r0, d0, k0 = a.terms[0]
    if len(a.terms) > 1 and a.terms[1][2] == k0:
        raise NotAUnit(f"leading t-level t^({format_fraction(k0)}) carries several q-powers")
    inv_lead = NovikovElement.monomial(1 / r0, -d0, -k0)
    if len(a.terms) == 1 and a.is_exact:
        result = inv_lead
        return result if working_floor is None else result.truncate(working_floor)
    if working_floor is None:
        raise ValueError("a working floor is required to invert a non-monomial element")
    wf = as_fraction(working_floor)
    if a.floor - 2 * k0 > wf:
        raise FloorTooHigh(
            f"element known only down to t^({format_fraction(a.floor)}); "
            f"inverse needs it down to t^({format_fraction(wf + 2 * k0)})"
        )
    z = multiply(a, inv_lead) - 1
    ys = unit_series([(d, k, c) for c, d, k in z.terms], lambda a, b: (a + b, 0), wf + k0)
    terms = [(c / r0, d - d0, k - k0) for (d, k), c in ys.items()]
    return NovikovElement(terms, wf)


def unit_series(z_terms, combine, stop, one=0) -> dict:
    """Solve ``y = 1 - z y`` level by level.

    Monomials are ``(tag, level)`` pairs: ``z_terms`` lists
    ``(tag, level, coefficient)`` with every level negative, and
    ``combine(tag_a, tag_b)`` returns the product's tag together with the
    amount by which its level falls below the sum of the two levels (at
    least 0).  Coefficients at a level then only depend on higher levels.
    Monomials below ``stop`` are dropped; the result maps ``(tag, level)``
    to coefficients.
    """
    zs = sorted(z_terms, key=itemgetter(1), reverse=True)
    memo: dict = {}
    zero = Fraction(0)
    pending = {(0, 1): (zero, {one: Fraction(1)})}
    heap = [zero]
    out = {}
    while heap:
        lv = -heapq.heappop(heap)
        for tag, c in pending.pop((lv.numerator, lv.denominator))[1].items():
            if not c:
                continue
            out[(tag, lv)] = c
            for ztag, zl, zc in zs:
                nl = lv + zl
                if nl < stop:
                    break
                pair = (tag, ztag)
                hit = memo.get(pair)
                if hit is None:
                    hit = memo[pair] = combine(tag, ztag)
                ntag, drop = hit
                if drop:
                    nl -= drop
                    if nl < stop:
                        continue
                key = (nl.numerator, nl.denominator)
                slot = pending.get(key)
                if slot is None:
                    slot = pending[key] = (nl, {})
                    heapq.heappush(heap, -nl)
                bucket = slot[1]
                bucket[ntag] = bucket.get(ntag, 0) - c * zc
    return out


# rendering and parsing

def _render_exponent(k: Fraction) -> str:
    return format_fraction(k)


def render_term(c: Fraction, d: int, k: Fraction, extra: str = "") -> str:
    parts = [format_fraction(c)]
    if extra:
        parts.append(extra)
    if d != 0:
        parts.append(f"q^{d}")
    if k != 0:
        parts.append(f"t^({_render_exponent(k)})")
    return "*".join(parts)


def join_terms(rendered: list[str]) -> str:
    if not rendered:
        return "0"
    out = rendered[0]
    for piece in rendered[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def render(a: NovikovElement) -> str:
    """Canonical text, e.g. ``1 + 2*t^(-1) + 1*q^-1*t^(-2) + O(t^(-5))``."""
    text = join_terms([render_term(c, d, k) for c, d, k in a.terms])
    if not a.is_exact:
        tail = f"O(t^({_render_exponent(a.floor)}))"
        text = tail if text == "0" else f"{text} + {tail}"
    return text


_FACTOR = re.compile(
    r"^(?P<var>[qts])(?:\^(?:\((?P<pexp>[^()]+)\)|(?P<exp>[-+]?[0-9]+(?:/[0-9]+)?)))?$"
)
_NUMBER = re.compile(r"^[0-9]+(?:/[0-9]+)?$")


def split_signed_terms(text: str) -> list[tuple[int, str]]:
    """Split ``a + b - c`` into signed pieces, respecting parentheses and ``^-``."""
    pieces: list[tuple[int, str]] = []
    depth = 0
    sign = 1
    current = ""
    prev = ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and prev not in ("^", "*", "/"):
            if current.strip():
                pieces.append((sign, current.strip()))
                current = ""
                sign = 1 if ch == "+" else -1
            else:
                sign = sign * (1 if ch == "+" else -1)
        else:
            current += ch
        if not ch.isspace():
            prev = ch
    if depth != 0:
        raise ValueError(f"unbalanced parentheses in {text!r}")
    if current.strip():
        pieces.append((sign, current.strip()))
    elif pieces or text.strip():
        if not pieces:
            raise ValueError(f"no terms in {text!r}")
    return pieces


def parse_monomial(text: str, variables: str = "qt") -> tuple[Fraction, dict[str, Fraction]]:
    """Parse ``3/2*q^2*t^(-1/3)`` into a coefficient and exponents."""
    coeff = Fraction(1)
    exps: dict[str, Fraction] = {}
    for raw in text.split("*"):
        factor = raw.strip().replace(" ", "")
        if not factor:
            raise ValueError(f"empty factor in {text!r}")
        if _NUMBER.match(factor):
            coeff *= Fraction(factor)
            continue
        if factor.startswith("(") and factor.endswith(")") and _NUMBER.match(factor[1:-1].lstrip("-")):
            coeff *= Fraction(factor[1:-1])
            continue
        m = _FACTOR.match(factor)
        if not m or m.group("var") not in variables:
            raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
        var = m.group("var")
        exp = m.group("pexp") or m.group("exp") or "1"
        exps[var] = exps.get(var, Fraction(0)) + Fraction(exp.replace(" ", ""))
    return coeff, exps


_ORDER = re.compile(r"^O\(t\^\((?P<f>[^()]+)\)\)$")


def parse_novikov(text: str) -> NovikovElement:
    """Inverse of :func:`render`; also accepts loose input such as ``1 + t^-1``."""
    terms = []
    floor = None
    stripped = text.strip()
    if stripped == "0":
        return NovikovElement()
    for sign, piece in split_signed_terms(stripped):
        m = _ORDER.match(piece.replace(" ", ""))
        if m:
            floor = Fraction(m.group("f"))
            continue
        coeff, exps = parse_monomial(piece, "qt")
        q = exps.get("q", Fraction(0))
        if q.denominator != 1:
            raise ValueError(f"q-power must be an integer in {piece!r}")
        terms.append((sign * coeff, int(q), exps.get("t", Fraction(0))))
    return NovikovElement(terms, floor)
