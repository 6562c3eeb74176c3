"""Generated catalog of small commutative algebras with Frobenius data.

Every base algebra has dimension 2 to 4.  Functionals range over a grid with
``f(1) = 0``; for each functional, p ranges over grid vectors supported on the
non-unit basis with ``f(p) = 1``, shifted by a multiple of 1 so that
``f(p^2) = 0``.  M is then determined as ``{x : f(x) = 0, f(px) = 0}``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .frobenius import AlgebraSpec, direct_sum, gram_nondegeneracy, quotient_algebra, tensor_algebra

# monic relations, constant term first
POLYNOMIALS = {
    "x^2": [0, 0, 1],
    "x^2-1": [-1, 0, 1],
    "x^2-2": [-2, 0, 1],
    "x^2+1": [1, 0, 1],
    "x^2-x": [0, -1, 1],
    "x^3": [0, 0, 0, 1],
    "x^3-x": [0, -1, 0, 1],
    "x^3-2": [-2, 0, 0, 1],
    "x^3-x^2": [0, 0, -1, 1],
    "x^3-x-1": [-1, -1, 0, 1],
    "x^3-2x": [0, -2, 0, 1],
    "x^4": [0, 0, 0, 0, 1],
    "x^4-1": [-1, 0, 0, 0, 1],
    "x^4-2": [-2, 0, 0, 0, 1],
    "x^4-x^2": [0, 0, -1, 0, 1],
    "x^4-x": [0, -1, 0, 0, 1],
    "x^4+1": [1, 0, 0, 0, 1],
    "x^4-5x^2+6": [6, 0, -5, 0, 1],
    "x^4-x^3": [0, 0, 0, -1, 1],
}


def _placeholder(dim: int) -> list[int]:
    return [0] * dim


def base_algebras() -> list[AlgebraSpec]:
    out = [quotient_algebra(g, _placeholder(len(g) - 1), name=f"Q[x]/({k})") for k, g in POLYNOMIALS.items()]
    dual = quotient_algebra([0, 0, 1], [0, 0])
    split = quotient_algebra([-1, 0, 1], [0, 0])
    out.append(tensor_algebra(dual, dual, _placeholder(4), name="Q[x,y]/(x^2,y^2)"))
    out.append(tensor_algebra(dual, quotient_algebra([-2, 0, 1], [0, 0]), _placeholder(4),
                              name="Q[x]/(x^2) (x) Q[y]/(y^2-2)"))
    out.append(direct_sum(dual, dual, _placeholder(4), name="Q[x]/(x^2) x Q[y]/(y^2)"))
    out.append(direct_sum(split, dual, _placeholder(4), name="(Q x Q) x Q[y]/(y^2)"))
    # Q[x,y]/(x^2 - y^2, xy), basis 1, x, y, x^2
    s = {(0, k, k): 1 for k in range(4)}
    s.update({(k, 0, k): 1 for k in range(1, 4)})
    s.update({(1, 1, 3): 1, (2, 2, 3): 1})
    out.append(AlgebraSpec(4, s, 0, _placeholder(4), name="Q[x,y]/(x^2-y^2,xy)"))
    # Q[x,y]/(x^2, xy, y^2): never Frobenius (two-dimensional socle)
    s = {(0, k, k): 1 for k in range(3)}
    s.update({(k, 0, k): 1 for k in range(1, 3)})
    out.append(AlgebraSpec(3, s, 0, _placeholder(3), name="Q[x,y]/(x^2,xy,y^2)"))
    return out


def with_data(base: AlgebraSpec, f, p=None, m=None) -> AlgebraSpec:
    structure = {(i, j, k): v for i in range(base.dim) for j in range(base.dim)
                 for k, v in enumerate(base.table[i][j]) if v}
    return AlgebraSpec(base.dim, structure, base.unit_index, f, p, m, name=base.name)


def grid_for(dim: int) -> tuple[int, ...]:
    return (-1, 0, 1, 2) if dim <= 3 else (-1, 0, 1)


def admissible_data(base: AlgebraSpec):
    """Yield ``(f, p)`` pairs on the grid that satisfy the hypotheses."""
    n, u = base.dim, base.unit_index
    rest = [k for k in range(n) if k != u]
    grid = grid_for(n)
    for fv in itertools.product(grid, repeat=n - 1):
        if not any(fv):
            continue
        f = [Fraction(0)] * n
        for k, c in zip(rest, fv):
            f[k] = Fraction(c)
        probe = with_data(base, f)
        if not gram_nondegeneracy(probe):
            continue
        for pv in itertools.product(grid, repeat=n - 1):
            p = [Fraction(0)] * n
            for k, c in zip(rest, pv):
                p[k] = Fraction(c)
            if probe.apply_f(p) != 1:
                continue
            p[u] = -probe.apply_f(probe.mul(p, p)) / 2
            yield f, p


def catalog() -> list[AlgebraSpec]:
    out = []
    for base in base_algebras():
        for f, p in admissible_data(base):
            out.append(with_data(base, f, p))
    return out


def first_admissible(base: AlgebraSpec, name: str) -> AlgebraSpec:
    f, p = next(admissible_data(base))
    alg = with_data(base, f, p)
    alg.name = name
    return alg


def named_examples() -> list[AlgebraSpec]:
    """The hand-written instances."""
    split = quotient_algebra([-1, 0, 1], [0, 0])
    dual = quotient_algebra([0, 0, 1], [0, 0])
    idem = quotient_algebra([0, -1, 1], [0, 0])
    return [
        quotient_algebra([0, 0, 1], [0, 1], p=1, name="F[x]/(x^2)"),
        quotient_algebra([0, 0, 0, 1], [0, 0, 1], p=2, name="F[x]/(x^3)"),
        quotient_algebra([-3, 0, 1], [0, 1], p=1, name="F[x]/(x^2-3)"),
        quotient_algebra([Fraction(1, 2), 0, 1], [0, 1], p=1, name="F[x]/(x^2+1/2)"),
        quotient_algebra([-1, 0, 1], [0, 1], p=1, name="F[x]/(x^2-1)"),
        first_admissible(direct_sum(split, split, [0] * 4), "(F x F) x (F x F)"),
        first_admissible(direct_sum(dual, dual, [0] * 4), "F[x]/(x^2) x F[y]/(y^2)"),
        first_admissible(direct_sum(idem, dual, [0] * 4), "F x F x F[y]/(y^2)"),
        first_admissible(tensor_algebra(dual, dual, [0] * 4), "F[x]/(x^2) (x) F[y]/(y^2)"),
    ]
