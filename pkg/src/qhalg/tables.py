"""Ready-made ring tables: the sphere, projective spaces and their products.

``projective_space(n, scale)`` encodes ``Q[h]/(h^(n+1) = scale * q^-(n+1) t^-omega)``
through its three-point line invariants ``<h^a, h^b, h^c>_L = scale`` for
``a + b + c = 2n + 1`` (exponents are codimensions).  ``scale = 0`` keeps only
the classical ring.  Products multiply three-point invariants factorwise, so
they stay associative.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from .novikov import as_fraction, format_fraction
from .qring import BasisClass, EffectiveClass, RingSpec, three_point_allowed


def _name(k: int) -> str:
    return "1" if k == 0 else ("h" if k == 1 else f"h^{k}")


class Factor:
    """Raw data of a table before validation (used to form products)."""

    def __init__(self, n: int, names: Sequence[str], degrees: Sequence[int], pairing, classes, gw):
        self.n = n
        self.names = list(names)
        self.degrees = list(degrees)
        self.pairing = [[as_fraction(x) for x in row] for row in pairing]
        self.classes = list(classes)
        self.gw = gw  # (label, i, j, k) -> value, all dimension-allowed triples

    def spec(self, associativity: str = "ignore") -> RingSpec:
        order = sorted(range(len(self.names)), key=lambda i: (self.degrees[i], self.names[i]))
        pos = {old: new for new, old in enumerate(order)}
        basis = [BasisClass(self.names[i], self.degrees[i]) for i in order]
        pairing = [[self.pairing[i][j] for j in order] for i in order]
        entries = []
        for (label, i, j, k), v in sorted(self.gw.items()):
            entries.append((label, pos[i], pos[j], pos[k], v))
        return RingSpec(self.n, basis, pairing, self.classes, entries, associativity=associativity)


def projective_factor(n: int, scale=1, omega=1, label: str = "L", point_name: str | None = None) -> Factor:
    scale, omega = as_fraction(scale), as_fraction(omega)
    codims = list(range(n, -1, -1))  # index i has codimension n - i, degree 2i
    names = [_name(c) for c in codims]
    if point_name:
        names[0] = point_name
    degrees = [2 * i for i in range(n + 1)]
    pairing = [[int(codims[i] + codims[j] == n) for j in range(n + 1)] for i in range(n + 1)]
    classes = [EffectiveClass("0"), EffectiveClass(label, omega, n + 1)]
    gw = {}
    for i, j, k in itertools.combinations_with_replacement(range(n + 1), 3):
        ds = [degrees[i], degrees[j], degrees[k]]
        if three_point_allowed(n, 0, ds):
            gw[("0", i, j, k)] = Fraction(int(codims[i] + codims[j] + codims[k] == n))
        if three_point_allowed(n, n + 1, ds):
            gw[(label, i, j, k)] = scale if codims[i] + codims[j] + codims[k] == 2 * n + 1 else Fraction(0)
    return Factor(n, names, degrees, pairing, classes, gw)


def sphere(omega=1, scale=1) -> RingSpec:
    """The 2-sphere: ``<pt, pt, pt>_L = scale``, so ``pt * pt = scale 1 q^-2 t^-omega``."""
    return projective_factor(1, scale, omega, point_name="pt").spec()


def projective_space(n: int, scale=1, omega=1) -> RingSpec:
    f = projective_factor(n, scale, omega)
    f.names[0] = "pt"
    return f.spec()


def zero_table(n: int = 1) -> RingSpec:
    """Classical cohomology of a projective space with every quantum invariant zero."""
    f = projective_factor(n, 0)
    f.names[0] = "pt"
    return f.spec()


def product(a: Factor, b: Factor) -> Factor:
    n = a.n + b.n
    sa, sb = len(a.names), len(b.names)
    idx = [(i, j) for i in range(sa) for j in range(sb)]
    names = [f"{a.names[i]}x{b.names[j]}" for i, j in idx]
    degrees = [a.degrees[i] + b.degrees[j] for i, j in idx]
    pairing = [[a.pairing[i][k] * b.pairing[j][l] for k, l in idx] for i, j in idx]
    classes = []
    for ca in a.classes:
        for cb in b.classes:
            label = "0" if ca.is_zero and cb.is_zero else f"{ca.label}+{cb.label}"
            classes.append(EffectiveClass(label, ca.omega + cb.omega, ca.chern + cb.chern))
    gw = {}
    for ca in a.classes:
        for cb in b.classes:
            label = "0" if ca.is_zero and cb.is_zero else f"{ca.label}+{cb.label}"
            chern = ca.chern + cb.chern
            for x, y, z in itertools.combinations_with_replacement(range(len(idx)), 3):
                if not three_point_allowed(n, chern, [degrees[x], degrees[y], degrees[z]]):
                    continue
                (i1, j1), (i2, j2), (i3, j3) = idx[x], idx[y], idx[z]
                va = _lookup(a, ca.label, i1, i2, i3)
                vb = _lookup(b, cb.label, j1, j2, j3)
                gw[(label, x, y, z)] = va * vb
    return Factor(n, names, degrees, pairing, classes, gw)


def _lookup(f: Factor, label: str, i: int, j: int, k: int) -> Fraction:
    key = (label,) + tuple(sorted((i, j, k)))
    return f.gw.get(key, Fraction(0))


def _rename_point(f: Factor) -> Factor:
    zero = [i for i, d in enumerate(f.degrees) if d == 0]
    f.names[zero[0]] = "pt"
    return f


OMEGAS = (Fraction(1), Fraction(5, 3), Fraction(11, 4))


def random_admissible_table(rng: random.Random, max_factors: int = 3, max_size: int = 12):
    """A product of projective lines and planes with random quantum scales.

    Returns ``(spec, strongly_uniruled)``; the table is strongly uniruled
    exactly when some factor has a nonzero scale.
    """
    while True:
        count = rng.randint(1, max_factors)
        dims = [rng.choice((1, 2)) for _ in range(count)]
        size = 1
        for d in dims:
            size *= d + 1
        if size <= max_size:
            break
    scales = [Fraction(rng.choice((0, 0, 1, 2, -1, 3, Fraction(1, 2)))) for _ in dims]
    factors = [projective_factor(d, s, OMEGAS[k], label=f"L{k}") for k, (d, s) in enumerate(zip(dims, scales))]
    f = factors[0]
    for g in factors[1:]:
        f = product(f, g)
    spec = _rename_point(f).spec()
    return spec, any(s != 0 for s in scales)


def describe_factors(spec: RingSpec) -> str:
    return ", ".join(f"{c.label}: omega={format_fraction(c.omega)}, c1={c.chern}" for c in spec.classes)
