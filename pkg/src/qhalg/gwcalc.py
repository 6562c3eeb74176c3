"""Formal genus-zero Gromov-Witten bookkeeping.

Invariants are symbols, never numbers: an ``InvariantSymbol`` records the
space, the curve class and the (possibly descendent) absolute and relative
insertions.  The module computes index counts, decides which symbols are
forced to vanish, evaluates constant-map invariants from intersection data,
expands descendents through the splitting identities and enumerates the
admissible terms of the degeneration (decomposition) sum.

Conventions.  ``Space.dim`` is the complex dimension of the ambient space X;
absolute classes are given by their complex codimension in X, and a relative
insertion ``b`` (a class in the divisor D) by its complex dimension
``delta_b``.  A relative insertion of dimension ``delta_b`` cuts the moduli
space down by ``dim - delta_b``.  A symbol can be nonzero only if the
cut-down dimension equals the total descendent order.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from .linalg import inverse
from .novikov import as_fraction, format_fraction


class DescendentUnderflow(ValueError):
    pass


class MissingPairing(LookupError):
    pass


class OracleUnavailable(LookupError):
    pass


# --------------------------------------------------------------------------
# data


@dataclass(frozen=True)
class CurveClass:
    """A curve class with the numbers the calculus needs.

    ``divisor_degree`` is the intersection number with the relative divisor
    (None for absolute spaces), ``pairings`` the intersection numbers with
    named divisors ``L``, ``coords`` the image in a common lattice used to
    check that glued pieces add up to the target class.  ``exceptional`` is
    the multiple ``p`` when the class is ``p`` times the exceptional line.
    """

    label: str
    omega: Fraction = Fraction(0)
    chern: int = 0
    divisor_degree: int | None = None
    pairings: tuple[tuple[str, int], ...] = ()
    coords: tuple[int, ...] = ()
    fiber: bool = False
    exceptional: int = 0

    def __post_init__(self):
        object.__setattr__(self, "omega", as_fraction(self.omega))
        object.__setattr__(self, "pairings", tuple(sorted(dict(self.pairings).items())))
        object.__setattr__(self, "coords", tuple(self.coords))

    @property
    def is_zero(self) -> bool:
        return self.label == "0"

    def pairing(self, divisor: str) -> int:
        for name, v in self.pairings:
            if name == divisor:
                return v
        if self.is_zero:
            return 0
        raise MissingPairing(f"no intersection number {self.label}.{divisor}")


ZERO_CLASS = CurveClass("0")


@dataclass(frozen=True, order=True)
class Insertion:
    tau_order: int
    class_ref: str

    def __post_init__(self):
        if self.tau_order < 0:
            raise ValueError("descendent order must be nonnegative")

    def render(self) -> str:
        return self.class_ref if self.tau_order == 0 else f"tau{self.tau_order} {self.class_ref}"


@dataclass(frozen=True, order=True)
class Tail:
    """A relative marked point of contact order ``multiplicity`` constrained by ``class_ref``."""

    multiplicity: int
    class_ref: str

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("contact multiplicities are at least 1")

    def render(self) -> str:
        return f"{self.class_ref}@{self.multiplicity}"


def _ins(x) -> Insertion:
    if isinstance(x, Insertion):
        return x
    if isinstance(x, str):
        return Insertion(0, x)
    return Insertion(int(x[0]), str(x[1]))


def _tail(x) -> Tail:
    if isinstance(x, Tail):
        return x
    return Tail(int(x[0]), str(x[1]))


@dataclass(frozen=True)
class InvariantSymbol:
    space: str
    beta: CurveClass
    absolute: tuple[Insertion, ...] = ()
    relative: tuple[Tail, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "absolute", tuple(_ins(a) for a in self.absolute))
        object.__setattr__(self, "relative", tuple(_tail(b) for b in self.relative))

    def canonical(self) -> "InvariantSymbol":
        return replace(self, absolute=tuple(sorted(self.absolute)), relative=tuple(sorted(self.relative)))

    def sort_key(self):
        c = self.canonical()
        return (c.space, c.beta.label, c.absolute, c.relative)

    @property
    def descendent_degree(self) -> int:
        return sum(a.tau_order for a in self.absolute)

    @property
    def d_parts(self) -> list[int]:
        return [b.multiplicity for b in self.relative]

    def render(self) -> str:
        c = self.canonical()
        body = ", ".join(a.render() for a in c.absolute)
        if c.relative:
            body = (body + " " if body else "") + "| " + ", ".join(b.render() for b in c.relative)
        return f"<{body}>^{c.space}_{c.beta.label}"

    def __lt__(self, other: "InvariantSymbol") -> bool:
        return self.sort_key() < other.sort_key()


@dataclass
class Space:
    """Degree data of an ambient space X, optionally with a relative divisor D."""

    label: str
    dim: int
    codims: Mapping[str, int] = field(default_factory=dict)
    divisor_dims: Mapping[str, int] = field(default_factory=dict)
    fiber_constraints: frozenset = frozenset()
    fibered: bool = False
    exceptional_powers: Mapping[str, int] = field(default_factory=dict)

    def codim(self, label: str) -> int:
        if label not in self.codims:
            raise KeyError(f"no degree data for class {label} in {self.label}")
        return self.codims[label]

    def divisor_dim(self, label: str) -> int:
        if label not in self.divisor_dims:
            raise KeyError(f"no degree data for divisor class {label} in {self.label}")
        return self.divisor_dims[label]


# --------------------------------------------------------------------------
# dimension


def relative_dimension(n: int, c1_beta: int, k: int, d_parts: Sequence[int] = ()) -> int:
    """Complex dimension ``n + c1 + k + 2r - 3 - d`` of the relative moduli space."""
    if any(d < 1 for d in d_parts):
        raise ValueError("contact multiplicities are at least 1")
    r = len(d_parts)
    return n + c1_beta + k + 2 * r - 3 - sum(d_parts)


def cut_down_dimension(sym: InvariantSymbol, space: Space) -> int:
    """Dimension left after imposing all absolute and relative constraints."""
    dim = relative_dimension(space.dim, sym.beta.chern, len(sym.absolute), sym.d_parts)
    dim -= sum(space.codim(a.class_ref) for a in sym.absolute)
    dim -= sum(space.dim - space.divisor_dim(b.class_ref) for b in sym.relative)
    return dim


@dataclass(frozen=True)
class ForcedZero:
    rule: str
    reason: str

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Undetermined:
    def __bool__(self):
        return False


UNDETERMINED = Undetermined()
RULES = ("tails", "exceptional", "fiber", "dimension")


def _rule_tails(sym: InvariantSymbol, space: Space):
    deg = sym.beta.divisor_degree
    if deg is None:
        if sym.relative:
            return "relative insertions on a class with unknown divisor degree"
        return None
    if deg < 0:
        return f"{sym.beta.label}.D = {deg} < 0"
    total = sum(sym.d_parts)
    if total != deg:
        return f"contact orders sum to {total}, but {sym.beta.label}.D = {deg}"
    return None


def _rule_exceptional(sym: InvariantSymbol, space: Space):
    p = sym.beta.exceptional
    if p < 1 or sym.relative or len(sym.absolute) != 3:
        return None
    if any(a.tau_order or a.class_ref not in space.exceptional_powers for a in sym.absolute):
        return None
    powers = [space.exceptional_powers[a.class_ref] for a in sym.absolute]
    if p >= 2:
        return f"multiple {p} >= 2 of the exceptional line"
    if sum(powers) != 2 * space.dim - 1:
        return f"exceptional powers sum to {sum(powers)} != {2 * space.dim - 1}"
    return None


def _rule_fiber(sym: InvariantSymbol, space: Space):
    if not (space.fibered and sym.beta.fiber):
        return None
    labels = [a.class_ref for a in sym.absolute] + [b.class_ref for b in sym.relative]
    count = sum(1 for x in labels if x in space.fiber_constraints)
    if count >= 2:
        return f"{count} fiber constraints on the fiber class {sym.beta.label}"
    return None


def _rule_dimension(sym: InvariantSymbol, space: Space):
    dim = cut_down_dimension(sym, space)
    if dim != sym.descendent_degree:
        return f"cut-down dimension {dim} != descendent degree {sym.descendent_degree}"
    return None


_RULE_FUNCS = {
    "tails": _rule_tails,
    "exceptional": _rule_exceptional,
    "fiber": _rule_fiber,
    "dimension": _rule_dimension,
}


def vanishing_by_dimension(sym: InvariantSymbol, context: Space, rules: Sequence[str] = RULES):
    """First firing vanishing rule as ``ForcedZero``, else ``UNDETERMINED``.

    Rules, in order: contact orders must add up to ``beta.D``; the constant
    exceptional-line filter (three exceptional-power insertions in class
    ``p * line`` survive only for ``p = 1`` and powers summing to ``2n - 1``);
    two fiber constraints on a fiber class of a fibered space; and the index
    condition.
    """
    for name in rules:
        reason = _RULE_FUNCS[name](sym, context)
        if reason is not None:
            return ForcedZero(name, reason)
    return UNDETERMINED


def zero_class_evaluate(sym: InvariantSymbol, pairing_oracle: Callable[[list[str]], Fraction] | None = None,
                        space: Space | None = None):
    """Constant-map invariant ``<tau_k1 a_1, ..., tau_kp a_p>_0``.

    Nonzero only when ``sum k_i = p - 3`` and the codimensions add up to the
    dimension; its value is ``(p-3)!/prod k_i!`` times the intersection number
    ``int a_1 ... a_p`` supplied by ``pairing_oracle``.
    """
    if not sym.beta.is_zero:
        raise ValueError("zero_class_evaluate needs the zero class")
    if sym.relative:
        raise ValueError("the zero class carries no relative insertions")
    p = len(sym.absolute)
    if p < 3:
        raise ValueError("constant maps need at least three marked points")
    ks = [a.tau_order for a in sym.absolute]
    if sum(ks) != p - 3:
        return ForcedZero("zero-class", f"descendent orders sum to {sum(ks)} != p - 3 = {p - 3}")
    if space is not None:
        total = sum(space.codim(a.class_ref) for a in sym.absolute)
        if total != space.dim:
            return ForcedZero("zero-class", f"codimensions sum to {total} != {space.dim}")
    if pairing_oracle is None:
        raise OracleUnavailable("intersection number needed but no pairing data given")
    weight = Fraction(factorial(p - 3))
    for k in ks:
        weight /= factorial(k)
    return weight * as_fraction(pairing_oracle([a.class_ref for a in sym.absolute]))


def ring_intersection_oracle(spec) -> Callable[[list[str]], Fraction]:
    """Intersection numbers ``int a_1 ... a_p`` from a ring table's classical part."""
    gram_inv = spec.pairing_inverse
    size = len(spec.basis)

    def classical(i: int, j: int) -> list[Fraction]:
        out = [Fraction(0)] * size
        for k in range(size):
            v = spec.gw("0", i, j, k)
            if v:
                for m in range(size):
                    out[m] += v * gram_inv[k][m]
        return out

    def oracle(labels: list[str]) -> Fraction:
        idx = [spec.index(x) for x in labels]
        vec = [Fraction(int(m == idx[0])) for m in range(size)]
        for j in idx[1:-1]:
            nxt = [Fraction(0)] * size
            for i, c in enumerate(vec):
                if c:
                    for m, w in enumerate(classical(i, j)):
                        nxt[m] += c * w
            vec = nxt
        last = idx[-1] if len(idx) > 1 else spec.unit
        return sum((c * spec.pairing[i][last] for i, c in enumerate(vec)), Fraction(0))

    return oracle


# --------------------------------------------------------------------------
# expressions


class Expression:
    """Formal rational combination of products of invariant symbols."""

    def __init__(self, terms: Iterable[tuple[Fraction, Sequence[InvariantSymbol]]] = ()):
        self._terms: dict[tuple[InvariantSymbol, ...], Fraction] = {}
        for c, syms in terms:
            self.add_term(c, syms)

    @staticmethod
    def _key(syms: Sequence[InvariantSymbol]) -> tuple[InvariantSymbol, ...]:
        return tuple(sorted((s.canonical() for s in syms), key=InvariantSymbol.sort_key))

    def add_term(self, coeff, syms: Sequence[InvariantSymbol]) -> None:
        c = as_fraction(coeff)
        if c == 0:
            return
        key = self._key(syms)
        total = self._terms.get(key, Fraction(0)) + c
        if total == 0:
            self._terms.pop(key, None)
        else:
            self._terms[key] = total

    def items(self) -> list[tuple[tuple[InvariantSymbol, ...], Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: [s.sort_key() for s in kv[0]])

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        return isinstance(other, Expression) and self._terms == other._terms

    def __add__(self, other: "Expression") -> "Expression":
        out = Expression()
        for key, c in list(self._terms.items()) + list(other._terms.items()):
            out.add_term(c, key)
        return out

    def scale(self, c) -> "Expression":
        return Expression((v * as_fraction(c), key) for key, v in self._terms.items())

    def coefficient(self, syms: Sequence[InvariantSymbol]) -> Fraction:
        return self._terms.get(self._key(syms), Fraction(0))

    def skeletons(self) -> Counter:
        """Multiset of products, ignoring coefficients."""
        return Counter(tuple(s.render() for s in key) for key in self._terms)

    def evaluate(self, fn: Callable[[InvariantSymbol], Fraction | None]) -> "Expression":
        """Replace every symbol on which ``fn`` returns a number by that number."""
        out = Expression()
        for key, c in self._terms.items():
            keep = []
            for s in key:
                v = fn(s)
                if v is None:
                    keep.append(s)
                else:
                    c = c * as_fraction(v)
            out.add_term(c, keep)
        return out

    def substitute(self, mapping: Mapping[str, Mapping[str, Fraction]]) -> "Expression":
        """Expand absolute insertions linearly: ``label -> {label': coeff}``."""
        out = Expression()
        for key, c in self._terms.items():
            choices = []
            for s in key:
                per_ins = [
                    list(mapping[a.class_ref].items()) if a.class_ref in mapping else [(a.class_ref, Fraction(1))]
                    for a in s.absolute
                ]
                choices.append((s, list(itertools.product(*per_ins))))
            for combo in itertools.product(*(opts for _, opts in choices)):
                coeff = c
                syms = []
                for (s, _), pick in zip(choices, combo):
                    new_abs = []
                    for a, (label, w) in zip(s.absolute, pick):
                        coeff *= as_fraction(w)
                        new_abs.append(Insertion(a.tau_order, label))
                    syms.append(replace(s, absolute=tuple(new_abs)))
                out.add_term(coeff, syms)
        return out

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for key, c in self.items():
            prod = " * ".join(s.render() for s in key) if key else "1"
            parts.append(f"({format_fraction(c)}) {prod}")
        return "\n".join(parts)


# --------------------------------------------------------------------------
# splitting identities


class HomologyBasis:
    """A basis with its intersection pairing; duals come from the inverse Gram matrix."""

    def __init__(self, labels: Sequence[str], pairing: Sequence[Sequence]):
        self.labels = tuple(labels)
        self.pairing = [[as_fraction(x) for x in row] for row in pairing]
        inv = inverse(self.pairing)
        if inv is None:
            raise ValueError("the pairing is singular")
        self._inv = inv

    @classmethod
    def from_ring(cls, spec) -> "HomologyBasis":
        return cls([b.name for b in spec.basis], spec.pairing)

    def dual(self, label: str) -> dict[str, Fraction]:
        e = self.labels.index(label)
        return {self.labels[f]: self._inv[f][e] for f in range(len(self.labels)) if self._inv[f][e] != 0}


def _check_splitting(beta: CurveClass, b1: CurveClass, b2: CurveClass) -> None:
    if b1.omega + b2.omega != beta.omega or b1.chern + b2.chern != beta.chern:
        raise ValueError(f"{b1.label} + {b2.label} does not add up to {beta.label}")
    if beta.coords and b1.coords and b2.coords:
        if tuple(x + y for x, y in zip(b1.coords, b2.coords)) != beta.coords:
            raise ValueError(f"{b1.label} + {b2.label} does not add up to {beta.label}")


def _subsets(items: Sequence[int]):
    for mask in range(1 << len(items)):
        s1 = [x for b, x in enumerate(items) if mask >> b & 1]
        s2 = [x for b, x in enumerate(items) if not mask >> b & 1]
        yield s1, s2


def lp1_expand(sym: InvariantSymbol, i: int, j: int, k: int,
               splitting_set: Sequence[tuple[CurveClass, CurveClass]], basis: HomologyBasis) -> Expression:
    """Trade one descendent at insertion ``i`` for a splitting separating ``i`` from ``j, k``.

    Emits ``sum <tau_(k_i - 1) a_i, S1, xi>_b1 <xi^*, a_j, a_k, S2>_b2`` over
    basis elements ``xi``, splittings ``(b1, b2)`` and distributions of the
    remaining insertions; a zero-class factor must have three marked points.
    """
    if sym.relative:
        raise ValueError("lp1_expand acts on absolute invariants")
    ins = sym.absolute
    if len(ins) < 3:
        raise ValueError("the identity needs at least three insertions")
    if len({i, j, k}) != 3 or not all(0 <= x < len(ins) for x in (i, j, k)):
        raise ValueError("i, j, k must be distinct insertion positions")
    if ins[i].tau_order < 1:
        raise DescendentUnderflow(f"insertion {i} carries no descendent")
    lowered = Insertion(ins[i].tau_order - 1, ins[i].class_ref)
    others = [x for x in range(len(ins)) if x not in (i, j, k)]
    out = Expression()
    for b1, b2 in splitting_set:
        _check_splitting(sym.beta, b1, b2)
        for s1, s2 in _subsets(others):
            if b1.is_zero and 2 + len(s1) < 3:
                continue
            if b2.is_zero and 3 + len(s2) < 3:
                continue
            for xi in basis.labels:
                first = InvariantSymbol(sym.space, b1, (lowered, *(ins[x] for x in s1), Insertion(0, xi)))
                for dual, c in basis.dual(xi).items():
                    second = InvariantSymbol(sym.space, b2, (Insertion(0, dual), ins[j], ins[k],
                                                             *(ins[x] for x in s2)))
                    out.add_term(c, (first, second))
    return out


def _default_cap(points: Sequence[str]):
    def cap(divisor: str, label: str) -> dict[str, Fraction]:
        if label in points:
            return {}
        return {f"{divisor}.{label}": Fraction(1)}
    return cap


def lp2_expand(sym: InvariantSymbol, L: str, i: int, j: int,
               splitting_set: Sequence[tuple[CurveClass, CurveClass]], basis: HomologyBasis,
               cap: Callable[[str, str], Mapping[str, Fraction]] | None = None,
               points: Sequence[str] = ("pt",)) -> Expression:
    """Move the divisor constraint ``L`` from insertion ``i`` to insertion ``j``.

    The result equals the invariant with ``L . a_i`` at position ``i``::

        <.., L a_j, ..> + (beta.L) <.., tau_(k_j + 1) a_j, ..>
          - sum (b1.L) <a_i, S1, xi>_b1 <xi^*, a_j, S2>_b2

    ``cap(L, a)`` returns ``L . a`` as a combination of labels (empty when it
    vanishes); by default it is zero on ``points`` and a new label otherwise.
    """
    if sym.relative:
        raise ValueError("lp2_expand acts on absolute invariants")
    ins = sym.absolute
    if i == j or not (0 <= i < len(ins) and 0 <= j < len(ins)):
        raise ValueError("i and j must be distinct insertion positions")
    cap = cap or _default_cap(points)
    out = Expression()
    for label, c in cap(L, ins[j].class_ref).items():
        moved = list(ins)
        moved[j] = Insertion(ins[j].tau_order, label)
        out.add_term(c, (replace(sym, absolute=tuple(moved)),))
    bl = sym.beta.pairing(L)
    raised = list(ins)
    raised[j] = Insertion(ins[j].tau_order + 1, ins[j].class_ref)
    out.add_term(bl, (replace(sym, absolute=tuple(raised)),))
    others = [x for x in range(len(ins)) if x not in (i, j)]
    for b1, b2 in splitting_set:
        _check_splitting(sym.beta, b1, b2)
        w = b1.pairing(L)
        if w == 0:
            continue
        for s1, s2 in _subsets(others):
            if b1.is_zero and 2 + len(s1) < 3:
                continue
            if b2.is_zero and 2 + len(s2) < 3:
                continue
            for xi in basis.labels:
                first = InvariantSymbol(sym.space, b1, (ins[i], *(ins[x] for x in s1), Insertion(0, xi)))
                for dual, c in basis.dual(xi).items():
                    second = InvariantSymbol(sym.space, b2, (Insertion(0, dual), ins[j], *(ins[x] for x in s2)))
                    out.add_term(-w * c, (first, second))
    return out


# --------------------------------------------------------------------------
# decomposition sum


@dataclass
class Side:
    """One half of a degeneration: the pair (X, D), candidate classes and placed insertions."""

    space: Space
    classes: Sequence[CurveClass]
    insertions: Sequence[Insertion] = ()
    predicates: Sequence[Callable[[InvariantSymbol], str | None]] = ()


@dataclass
class SideData:
    """The divisor basis with duals and the two sides of a degeneration.

    A tail carries ``b`` on the X side and ``duals[b]`` on the Y side.
    Class coordinates on both sides live in the target's lattice; the
    coordinates of all components must add up to ``target.beta.coords``.
    Only classes with energy at most ``energy_cap`` (default: the target's)
    are used.
    """

    divisor_basis: Sequence[str]
    duals: Mapping[str, str]
    x: Side
    y: Side
    max_tails: int = 3
    energy_cap: Fraction | None = None


@dataclass(frozen=True)
class Skeleton:
    """A term of the decomposition sum with its weight left symbolic."""

    x_components: tuple[InvariantSymbol, ...]
    y_components: tuple[InvariantSymbol, ...]
    edges: tuple[tuple[int, int, int, str], ...]
    weight: str = "n_(Gamma,d)"

    def key(self) -> str:
        return canonical_key(self)

    def render(self) -> str:
        xs = " * ".join(s.render() for s in self.x_components) or "1"
        ys = " * ".join(s.render() for s in self.y_components) or "1"
        return f"{self.weight} [{xs}] x [{ys}]"


def canonical_key(sk: Skeleton) -> str:
    """Isomorphism-invariant encoding of the decorated component tree."""
    nodes = [("X", s.canonical().render()) for s in sk.x_components] + \
            [("Y", s.canonical().render()) for s in sk.y_components]
    nx = len(sk.x_components)
    adj: dict[int, list[tuple[int, str]]] = {v: [] for v in range(len(nodes))}
    for a, b, d, lab in sk.edges:
        tag = f"{d}:{lab}"
        adj[a].append((nx + b, tag))
        adj[nx + b].append((a, tag))
    if len(nodes) == 1:
        return f"({nodes[0][0]}{nodes[0][1]})"

    def encode(v: int, parent: int) -> str:
        kids = sorted(f"[{tag}]{encode(w, v)}" for w, tag in adj[v] if w != parent)
        return f"({nodes[v][0]}{nodes[v][1]}{''.join(kids)})"

    return min(encode(v, -1) for v in range(len(nodes)))


def _bipartite_trees(k1: int, k2: int):
    """Edge sets (x, y) forming a spanning tree on k1 + k2 vertices."""
    pairs = [(a, b) for a in range(k1) for b in range(k2)]
    r = k1 + k2 - 1
    for edges in itertools.combinations(pairs, r):
        parent = list(range(k1 + k2))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        ok = True
        for a, b in edges:
            ra, rb = find(a), find(k1 + b)
            if ra == rb:
                ok = False
                break
            parent[ra] = rb
        if ok:
            yield edges


def _distributions(insertions: Sequence[Insertion], slots: int):
    for assign in itertools.product(range(slots), repeat=len(insertions)):
        groups = [[] for _ in range(slots)]
        for ins, s in zip(insertions, assign):
            groups[s].append(ins)
        yield [tuple(g) for g in groups]


def _component_reason(sym: InvariantSymbol, side: Side):
    verdict = vanishing_by_dimension(sym, side.space)
    if verdict:
        return f"{verdict.rule}: {verdict.reason}"
    for pred in side.predicates:
        reason = pred(sym)
        if reason:
            return reason
    return None


@dataclass
class DecompositionResult:
    survivors: list[Skeleton]
    discarded: list[tuple[Skeleton, str]]

    def render(self) -> str:
        lines = [f"surviving terms: {len(self.survivors)}"]
        lines += ["  " + s.render() for s in self.survivors]
        lines.append(f"discarded terms: {len(self.discarded)}")
        lines += [f"  {s.render()}  -- {reason}" for s, reason in self.discarded]
        return "\n".join(lines)


def _capped(target: InvariantSymbol, case: SideData, classes: Sequence[CurveClass]) -> list[CurveClass]:
    cap = case.energy_cap if case.energy_cap is not None else target.beta.omega
    if cap <= 0:
        return list(classes)
    return [c for c in classes if c.omega <= cap]


def _sum_coords(classes: Sequence[CurveClass]) -> tuple[int, ...]:
    width = max((len(c.coords) for c in classes), default=0)
    out = [0] * width
    for c in classes:
        for a, v in enumerate(c.coords):
            out[a] += v
    return tuple(out)


def admissible_skeletons(target_sym: InvariantSymbol, case: SideData) -> list[Skeleton]:
    """All structurally admissible terms: tree shape, contact orders matching
    each component's divisor degree, glued class equal to the target and
    insertions on their prescribed sides.  Vanishing is not applied."""
    x_classes = _capped(target_sym, case, case.x.classes)
    y_classes = _capped(target_sym, case, case.y.classes)
    target = target_sym.beta.coords
    max_mult = max([c.divisor_degree or 0 for c in x_classes + y_classes] + [1])
    seen: dict[str, Skeleton] = {}

    def emit(sk: Skeleton):
        seen.setdefault(sk.key(), sk)

    # no tails: a single component on one side carrying every insertion
    for side, classes, is_x in ((case.x, x_classes, True), (case.y, y_classes, False)):
        other = case.y if is_x else case.x
        if other.insertions:
            continue
        for c in classes:
            if (c.divisor_degree or 0) != 0 or _sum_coords([c]) != target:
                continue
            sym = InvariantSymbol(side.space.label, c, tuple(side.insertions))
            emit(Skeleton((sym,), (), ()) if is_x else Skeleton((), (sym,), ()))

    for r in range(1, case.max_tails + 1):
        for k1 in range(1, r + 1):
            k2 = r + 1 - k1
            for tree in _bipartite_trees(k1, k2):
                for mults in itertools.product(range(1, max_mult + 1), repeat=r):
                    x_deg = [sum(m for (a, _), m in zip(tree, mults) if a == v) for v in range(k1)]
                    y_deg = [sum(m for (_, b), m in zip(tree, mults) if b == v) for v in range(k2)]
                    x_opts = [[c for c in x_classes if c.divisor_degree == d] for d in x_deg]
                    y_opts = [[c for c in y_classes if c.divisor_degree == d] for d in y_deg]
                    if any(not o for o in x_opts + y_opts):
                        continue
                    for xc in itertools.product(*x_opts):
                        for yc in itertools.product(*y_opts):
                            if _sum_coords(list(xc) + list(yc)) != target:
                                continue
                            for labels in itertools.product(case.divisor_basis, repeat=r):
                                for xd in _distributions(case.x.insertions, k1):
                                    for yd in _distributions(case.y.insertions, k2):
                                        emit(_build(case, tree, mults, labels, xc, yc, xd, yd))
    return [seen[k] for k in sorted(seen)]


def _build(case, tree, mults, labels, xc, yc, xd, yd) -> Skeleton:
    xs, ys = [], []
    for v, (c, ins) in enumerate(zip(xc, xd)):
        tails = [Tail(m, lab) for (a, _), m, lab in zip(tree, mults, labels) if a == v]
        xs.append(InvariantSymbol(case.x.space.label, c, ins, tails))
    for v, (c, ins) in enumerate(zip(yc, yd)):
        tails = [Tail(m, case.duals[lab]) for (_, b), m, lab in zip(tree, mults, labels) if b == v]
        ys.append(InvariantSymbol(case.y.space.label, c, ins, tails))
    edges = tuple((a, b, m, lab) for (a, b), m, lab in zip(tree, mults, labels))
    return Skeleton(tuple(xs), tuple(ys), edges)


def skeleton_vanishing(sk: Skeleton, case: SideData) -> str | None:
    """Reason the first vanishing component kills the term, or None."""
    for side, comps in ((case.x, sk.x_components), (case.y, sk.y_components)):
        for sym in comps:
            reason = _component_reason(sym, side)
            if reason:
                return f"{sym.render()} vanishes ({reason})"
    return None


def decomposition_enumerate(target: InvariantSymbol, side_data: SideData) -> DecompositionResult:
    """Admissible terms of the decomposition sum for ``target``, split into
    survivors and terms discarded by a vanishing rule (with the reason)."""
    survivors, discarded = [], []
    for sk in admissible_skeletons(target, side_data):
        reason = skeleton_vanishing(sk, side_data)
        if reason is None:
            survivors.append(sk)
        else:
            discarded.append((sk, reason))
    return DecompositionResult(survivors, discarded)
