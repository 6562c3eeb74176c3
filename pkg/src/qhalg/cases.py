"""Encoded degeneration instances for the decomposition enumerator.

``eps2_case(n)``: the section invariant ``<tau1 pt>_sigma`` of a
(n+1)-dimensional fibration split along a divisor D into the blown-up side
(classes ``sigma - e``, ``sigma - 2e`` and a section-shifted class) and the
projective side W with fiber line ``lam`` and section ``sW``.  The point is
placed on W.  Divisor classes: ``E^j`` (dimension n - j, fiber constraints)
and ``D^i`` (dimension n + 1 - i), with duals ``D+^(n+1-j)`` and
``E+^(n+1-i)`` on the W side.

``absolute_case(n)``: an absolute invariant ``<H, H, pt>_beta`` with
``beta . E = 0`` split along E; the W side carries no insertion.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .gwcalc import CurveClass, Insertion, InvariantSymbol, SideData, Side, Space


def eps2_case(n: int) -> tuple[InvariantSymbol, SideData]:
    if n < 2:
        raise ValueError("the instance needs n >= 2")
    dim = n + 1
    basis, duals, x_dims, y_dims = [], {}, {}, {}
    x_fiber, y_fiber = set(), set()
    for j in range(1, n + 1):
        b, bd = f"E^{j}", f"D+^{n + 1 - j}"
        basis.append(b)
        duals[b] = bd
        x_dims[b] = n - j
        y_dims[bd] = j
        x_fiber.add(b)
    for i in range(1, n + 1):
        b, bd = f"D^{i}", f"E+^{n + 1 - i}"
        basis.append(b)
        duals[b] = bd
        x_dims[b] = n + 1 - i
        y_dims[bd] = i - 1
        y_fiber.add(bd)
    omega_sigma, delta = Fraction(10), Fraction(1)
    x_space = Space("Pt'", dim, codims={}, divisor_dims=x_dims, fiber_constraints=frozenset(x_fiber),
                    fibered=True)
    y_space = Space("W", dim, codims={"pt": dim}, divisor_dims=y_dims,
                    fiber_constraints=frozenset(y_fiber | {"pt"}), fibered=True)
    x_classes = [
        CurveClass("sigma-e", omega_sigma - delta, 4 - n, divisor_degree=1, coords=(1, 0, -1)),
        CurveClass("sigma-2e", omega_sigma - 2 * delta, 5 - 2 * n, divisor_degree=2, coords=(1, 0, -2)),
        CurveClass("sigma", omega_sigma, 3, divisor_degree=0, coords=(1, 0, 0)),
        CurveClass("sigma-sW-e", omega_sigma - 3 - delta, 1 - n, divisor_degree=1, coords=(1, -1, -1)),
    ]
    y_classes = [
        CurveClass("lam", delta, n + 1, divisor_degree=1, coords=(0, 0, 1), fiber=True),
        CurveClass("2lam", 2 * delta, 2 * (n + 1), divisor_degree=2, coords=(0, 0, 2), fiber=True),
        CurveClass("sW", Fraction(3), 3, divisor_degree=0, coords=(0, 1, 0)),
        CurveClass("sW+lam", 3 + delta, n + 4, divisor_degree=1, coords=(0, 1, 1)),
    ]
    target = InvariantSymbol("P'", CurveClass("sigma", omega_sigma, 3, coords=(1, 0, 0)),
                             (Insertion(1, "pt"),))
    data = SideData(basis, duals, Side(x_space, x_classes), Side(y_space, y_classes, (Insertion(1, "pt"),)),
                    max_tails=2)
    return target, data


def absolute_case(n: int = 3) -> tuple[InvariantSymbol, SideData]:
    basis = [f"E^{j}" for j in range(1, n + 1)]
    duals = {f"E^{j}": f"h^{n + 1 - j}" for j in range(1, n + 1)}
    x_space = Space("Mt", n, codims={"H": 1, "pt": n}, divisor_dims={f"E^{j}": n - j for j in range(1, n + 1)})
    y_space = Space("Pn", n, codims={"pt": n}, divisor_dims={f"h^{m}": n - m for m in range(1, n + 1)})
    omega = Fraction(5)
    x_classes = [CurveClass("beta", omega, 2, divisor_degree=0, coords=(1, 0))] + [
        CurveClass(f"beta-{d}e", omega - d, 2 - d * (n - 1), divisor_degree=d, coords=(1, -d)) for d in (1, 2)
    ]
    y_classes = [CurveClass(f"{d}lam", d, d * (n + 1), divisor_degree=d, coords=(0, d)) for d in (1, 2)]
    ins = (Insertion(0, "H"), Insertion(0, "H"), Insertion(0, "pt"))
    target = InvariantSymbol("Mt", CurveClass("beta", omega, 2, coords=(1, 0)), ins)
    data = SideData(basis, duals, Side(x_space, x_classes, ins), Side(y_space, y_classes), max_tails=2)
    return target, data


def random_toy_case(rng: random.Random) -> tuple[InvariantSymbol, SideData]:
    """A small random instance: at most 3 tails and 3 classes per side."""
    dim_x, dim_y = rng.randint(2, 3), rng.randint(2, 3)
    nb = rng.randint(1, 3)
    basis = [f"b{i}" for i in range(nb)]
    duals = {b: f"{b}*" for b in basis}
    x_space = Space("X", dim_x, codims={"a": 1, "pt": dim_x},
                    divisor_dims={b: rng.randint(0, dim_x - 1) for b in basis},
                    fiber_constraints=frozenset(b for b in basis if rng.random() < 0.3), fibered=rng.random() < 0.5)
    y_space = Space("Y", dim_y, codims={"a": 1, "pt": dim_y},
                    divisor_dims={duals[b]: rng.randint(0, dim_y - 1) for b in basis},
                    fiber_constraints=frozenset(duals[b] for b in basis if rng.random() < 0.3) | {"pt"},
                    fibered=rng.random() < 0.5)

    def classes(prefix: str, count: int, sign: int):
        out = []
        for c in range(count):
            deg = rng.randint(0, 2)
            base = rng.randint(0, 1) if sign > 0 else 0
            out.append(CurveClass(f"{prefix}{c}", Fraction(rng.randint(1, 4)), rng.randint(-1, 4),
                                  divisor_degree=deg, coords=(base, sign * deg), fiber=rng.random() < 0.5))
        return out

    x_classes = classes("x", rng.randint(1, 3), -1)
    y_classes = classes("y", rng.randint(1, 3), 1)
    # target: glue one random X class with some Y classes to make it reachable
    pick = [rng.choice(x_classes)] + [rng.choice(y_classes) for _ in range(rng.randint(0, 2))]
    coords = tuple(sum(c.coords[a] for c in pick) for a in range(2))
    target_class = CurveClass("target", Fraction(12), 3, coords=coords)
    pool = [Insertion(rng.randint(0, 1), rng.choice(["a", "pt"])) for _ in range(rng.randint(0, 2))]
    x_ins = tuple(p for p in pool if rng.random() < 0.5)
    y_ins = tuple(p for p in pool if p not in x_ins)
    target = InvariantSymbol("Z", target_class, x_ins + y_ins)
    data = SideData(basis, duals, Side(x_space, x_classes, x_ins), Side(y_space, y_classes, y_ins), max_tails=3)
    return target, data
