"""Independent brute-force reference implementations used by the acceptance suite.

These deliberately avoid the data flow of the production code: insertions
are distributed by explicit per-insertion choices, duals come from a fresh
matrix inverse, component graphs are enumerated as incidence matrices and
skeletons are compared through a canonical form minimised over all vertex
relabelings.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from . import linalg
from .gwcalc import CurveClass, Insertion, InvariantSymbol, SideData, ZERO_CLASS, vanishing_by_dimension


def _render_product(syms: Sequence[InvariantSymbol]) -> tuple[str, ...]:
    return tuple(sorted(s.render() for s in syms))


def brute_lp1(sym: InvariantSymbol, i: int, j: int, k: int, splittings, labels: Sequence[str],
              pairing) -> dict[tuple[str, ...], Fraction]:
    ginv = linalg.inverse(linalg.fmat(pairing))
    ins = list(sym.absolute)
    rest = [x for x in range(len(ins)) if x not in (i, j, k)]
    out: dict[tuple[str, ...], Fraction] = {}
    for b1, b2 in splittings:
        for sides in itertools.product((1, 2), repeat=len(rest)):
            s1 = [ins[x] for x, side in zip(rest, sides) if side == 1]
            s2 = [ins[x] for x, side in zip(rest, sides) if side == 2]
            if b1.label == "0" and len(s1) == 0:
                continue
            for a, xi in enumerate(labels):
                for b, eta in enumerate(labels):
                    c = ginv[b][a]
                    if c == 0:
                        continue
                    first = InvariantSymbol(sym.space, b1,
                                            [Insertion(ins[i].tau_order - 1, ins[i].class_ref)] + s1 + [xi])
                    second = InvariantSymbol(sym.space, b2, [eta, ins[j], ins[k]] + s2)
                    key = _render_product([first, second])
                    out[key] = out.get(key, Fraction(0)) + c
    return {key: v for key, v in out.items() if v != 0}


def expression_table(expr) -> dict[tuple[str, ...], Fraction]:
    return {_render_product(key): c for key, c in expr.items()}


def lemma_lp_expected(beta: CurveClass, h: str, point: str, L: str, splittings, labels, pairing,
                      space: str) -> dict[tuple[str, ...], Fraction]:
    """Hand expansion of ``<L.H, pt>_beta`` as
    ``(beta.L) <H, tau1 pt> - sum (a1.L) <H, xi>_a1 <xi^*, pt>_a2`` over nonzero a1, a2."""
    ginv = linalg.inverse(linalg.fmat(pairing))
    out: dict[tuple[str, ...], Fraction] = {}
    bl = beta.pairing(L)
    if bl:
        key = _render_product([InvariantSymbol(space, beta, [h, Insertion(1, point)])])
        out[key] = Fraction(bl)
    for a1, a2 in splittings:
        if a1.label == "0" or a2.label == "0":
            continue
        w = a1.pairing(L)
        for a, xi in enumerate(labels):
            for b, eta in enumerate(labels):
                c = ginv[b][a]
                if w == 0 or c == 0:
                    continue
                key = _render_product([InvariantSymbol(space, a1, [h, xi]), InvariantSymbol(space, a2, [eta, point])])
                out[key] = out.get(key, Fraction(0)) - w * c
    return {key: v for key, v in out.items() if v != 0}


def random_lp1_instance(rng: random.Random):
    """Toy data: a basis with an invertible symmetric pairing, a class with up to
    three splittings and an invariant with three or four insertions."""
    size = rng.randint(2, 3)
    labels = [f"c{m}" for m in range(size)]
    while True:
        pairing = [[0] * size for _ in range(size)]
        for a in range(size):
            for b in range(a, size):
                pairing[a][b] = pairing[b][a] = rng.choice((-1, 0, 1, 1, 2))
        if linalg.det(linalg.fmat(pairing)) != 0:
            break
    beta = CurveClass("B", 6, 4)
    pool = [(ZERO_CLASS, beta), (beta, ZERO_CLASS)]
    for w in (1, 2, 4):
        c = rng.randint(-1, 3)
        pool.append((CurveClass(f"B{w}", w, c), CurveClass(f"B-{w}", 6 - w, 4 - c)))
    splittings = rng.sample(pool, rng.randint(1, 3))
    count = rng.randint(3, 4)
    ins = [Insertion(rng.randint(0, 2), rng.choice(labels)) for _ in range(count)]
    i = rng.randrange(count)
    ins[i] = Insertion(rng.randint(1, 2), ins[i].class_ref)
    j, k = rng.sample([x for x in range(count) if x != i], 2)
    return InvariantSymbol("Z", beta, ins), (i, j, k), splittings, labels, pairing


# -- decomposition skeletons -------------------------------------------------


def skeleton_form(xs, ys, edges) -> tuple:
    """Canonical form of a decorated bipartite graph: minimum over all relabelings."""
    xr = [s.canonical().render() for s in xs]
    yr = [s.canonical().render() for s in ys]
    best = None
    for px in itertools.permutations(range(len(xr))):
        for py in itertools.permutations(range(len(yr))):
            form = (
                tuple(xr[v] for v in px),
                tuple(yr[v] for v in py),
                tuple(sorted((px.index(a), py.index(b), d, lab) for a, b, d, lab in edges)),
            )
            if best is None or form < best:
                best = form
    return best


def _connected(k1: int, k2: int, edges) -> bool:
    adj = {v: set() for v in range(k1 + k2)}
    for a, b in edges:
        adj[a].add(k1 + b)
        adj[k1 + b].add(a)
    seen, stack = {0}, [0]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == k1 + k2


def brute_skeletons(target: InvariantSymbol, case: SideData) -> dict[tuple, tuple]:
    """All admissible terms as ``{canonical form: (x symbols, y symbols, edges)}``."""
    from .gwcalc import Tail

    cap = case.energy_cap if case.energy_cap is not None else target.beta.omega
    xcl = [c for c in case.x.classes if cap <= 0 or c.omega <= cap]
    ycl = [c for c in case.y.classes if cap <= 0 or c.omega <= cap]
    width = len(target.beta.coords)
    top = max([c.divisor_degree or 0 for c in xcl + ycl] + [1])
    found: dict[tuple, tuple] = {}

    def coords_ok(classes) -> bool:
        total = [0] * width
        for c in classes:
            for a, v in enumerate(c.coords):
                if a < width:
                    total[a] += v
            if len(c.coords) > width and any(c.coords[width:]):
                return False
        return tuple(total) == target.beta.coords

    # r = 0
    if not case.y.insertions:
        for c in xcl:
            if (c.divisor_degree or 0) == 0 and coords_ok([c]):
                xs = (InvariantSymbol(case.x.space.label, c, tuple(case.x.insertions)),)
                found.setdefault(skeleton_form(xs, (), ()), (xs, (), ()))
    if not case.x.insertions:
        for c in ycl:
            if (c.divisor_degree or 0) == 0 and coords_ok([c]):
                ys = (InvariantSymbol(case.y.space.label, c, tuple(case.y.insertions)),)
                found.setdefault(skeleton_form((), ys, ()), ((), ys, ()))

    for r in range(1, case.max_tails + 1):
        for k1 in range(1, r + 1):
            for k2 in range(1, r + 1):
                if k1 + k2 != r + 1:
                    continue  # a connected graph with r edges on k1 + k2 vertices is a tree
                cells = [(a, b) for a in range(k1) for b in range(k2)]
                for mask in itertools.product((0, 1), repeat=len(cells)):
                    edges = [cell for cell, on in zip(cells, mask) if on]
                    if len(edges) != r or not _connected(k1, k2, edges):
                        continue
                    for mults in itertools.product(range(1, top + 1), repeat=r):
                        for xc in itertools.product(xcl, repeat=k1):
                            if any(sum(m for (a, _), m in zip(edges, mults) if a == v) != xc[v].divisor_degree
                                   for v in range(k1)):
                                continue
                            for yc in itertools.product(ycl, repeat=k2):
                                if any(sum(m for (_, b), m in zip(edges, mults) if b == v) != yc[v].divisor_degree
                                       for v in range(k2)):
                                    continue
                                if not coords_ok(list(xc) + list(yc)):
                                    continue
                                for labels in itertools.product(case.divisor_basis, repeat=r):
                                    for xa in itertools.product(range(k1), repeat=len(case.x.insertions)):
                                        for ya in itertools.product(range(k2), repeat=len(case.y.insertions)):
                                            xs = tuple(
                                                InvariantSymbol(
                                                    case.x.space.label, xc[v],
                                                    [p for p, s in zip(case.x.insertions, xa) if s == v],
                                                    [Tail(m, lab) for (a, _), m, lab in zip(edges, mults, labels)
                                                     if a == v])
                                                for v in range(k1))
                                            ys = tuple(
                                                InvariantSymbol(
                                                    case.y.space.label, yc[v],
                                                    [p for p, s in zip(case.y.insertions, ya) if s == v],
                                                    [Tail(m, case.duals[lab])
                                                     for (_, b), m, lab in zip(edges, mults, labels) if b == v])
                                                for v in range(k2))
                                            es = tuple((a, b, m, lab) for (a, b), m, lab in zip(edges, mults, labels))
                                            found.setdefault(skeleton_form(xs, ys, es), (xs, ys, es))
    return found


def brute_survivors(found: dict[tuple, tuple], case: SideData) -> set[tuple]:
    out = set()
    for form, (xs, ys, _) in found.items():
        if all(not vanishing_by_dimension(s, case.x.space) for s in xs) and \
                all(not vanishing_by_dimension(s, case.y.space) for s in ys):
            out.add(form)
    return out
