"""JSON file formats for ring tables, Seidel elements, decomposition cases and algebras.

Rationals are written as integers or strings ``"p/q"``.  Every loader
reports the first problem as ``InputError`` with the file and the key path.
A ring or case may also be given as ``{"builtin": {...}}`` naming one of the
tables or instances shipped with the package.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .novikov import NovikovElement, as_fraction, format_fraction
from .qring import BasisClass, EffectiveClass, QHElement, RingSpec, SpecError


class InputError(ValueError):
    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


def read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(str(exc.strerror or exc), str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None


def _num(x, where: str) -> Fraction:
    try:
        return as_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"expected an exact rational, got {x!r}", where) from None


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"expected an integer, got {x!r}", where)
    return x


def _get(obj: dict, key: str, where: str, default=...):
    if not isinstance(obj, dict):
        raise InputError("expected an object", where)
    if key not in obj:
        if default is ...:
            raise InputError(f"missing key {key!r}", where)
        return default
    return obj[key]


def fraction_json(x: Fraction):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else format_fraction(x)


# -- ring tables -------------------------------------------------------------


def _builtin_ring(spec: dict, where: str) -> RingSpec:
    from . import tables
    from .blowup import exceptional_table

    kind = _get(spec, "kind", where)
    if kind == "exceptional":
        return exceptional_table(_int(_get(spec, "n", where), f"{where}.n"),
                                 _num(spec.get("delta", 1), f"{where}.delta"),
                                 associativity="ignore")
    if kind == "sphere":
        return tables.sphere(_num(spec.get("omega", 1), f"{where}.omega"),
                             _num(spec.get("scale", 1), f"{where}.scale"))
    if kind == "projective":
        return tables.projective_space(_int(_get(spec, "n", where), f"{where}.n"),
                                       _num(spec.get("scale", 1), f"{where}.scale"),
                                       _num(spec.get("omega", 1), f"{where}.omega"))
    raise InputError(f"unknown builtin table {kind!r}", f"{where}.kind")


def _index(ref, names: dict[str, int], size: int, where: str) -> int:
    if isinstance(ref, str):
        if ref not in names:
            raise InputError(f"unknown basis class {ref!r}", where)
        return names[ref]
    i = _int(ref, where)
    if not 0 <= i < size:
        raise InputError("basis index out of range", where)
    return i


def ring_from_data(data: dict, where: str = "ring") -> RingSpec:
    if isinstance(data, dict) and "builtin" in data:
        return _builtin_ring(data["builtin"], f"{where}.builtin")
    n = _int(_get(data, "n", where), f"{where}.n")
    basis = []
    for pos, b in enumerate(_get(data, "basis", where)):
        w = f"{where}.basis[{pos}]"
        if isinstance(b, dict):
            basis.append(BasisClass(str(_get(b, "name", w)), _int(_get(b, "degree", w), f"{w}.degree")))
        elif isinstance(b, list) and len(b) == 2:
            basis.append(BasisClass(str(b[0]), _int(b[1], f"{w}[1]")))
        else:
            raise InputError("basis entries are [name, degree]", w)
    names = {b.name: i for i, b in enumerate(basis)}
    pairing = [[_num(x, f"{where}.pairing[{i}][{j}]") for j, x in enumerate(row)]
               for i, row in enumerate(_get(data, "pairing", where))]
    classes = []
    for pos, c in enumerate(_get(data, "classes", where)):
        w = f"{where}.classes[{pos}]"
        pairs = _get(c, "divisor_pairings", w, {})
        classes.append(EffectiveClass(
            str(_get(c, "label", w)),
            _num(_get(c, "omega", w, 0), f"{w}.omega"),
            _int(_get(c, "chern", w, 0), f"{w}.chern"),
            tuple(sorted((str(k), _int(v, f"{w}.divisor_pairings.{k}")) for k, v in pairs.items())),
        ))
    size = len(basis)
    gw3 = []
    for pos, e in enumerate(_get(data, "gw3", where, [])):
        w = f"{where}.gw3[{pos}]"
        if not isinstance(e, list) or len(e) != 5:
            raise InputError("entries are [class, i, j, k, value]", w)
        idx = [_index(e[k], names, size, f"{w}[{k}]") for k in (1, 2, 3)]
        gw3.append((str(e[0]), *idx, _num(e[4], f"{w}[4]")))
    higher = []
    for pos, e in enumerate(_get(data, "gw_higher", where, [])):
        w = f"{where}.gw_higher[{pos}]"
        if not isinstance(e, list) or len(e) != 3:
            raise InputError("entries are [class, [[tau, index], ...], value]", w)
        ins = [(_int(t, f"{w}[1][{k}][0]"), _index(x, names, size, f"{w}[1][{k}][1]"))
               for k, (t, x) in enumerate(e[1])]
        higher.append((str(e[0]), ins, _num(e[2], f"{w}[2]")))
    try:
        return RingSpec(
            n, basis, pairing, classes, gw3, higher,
            higher_max_points=data.get("higher_max_points"),
            exceptional_powers=[_index(x, names, size, f"{where}.exceptional_powers")
                                for x in data.get("exceptional_powers", [])],
            associativity=data.get("associativity", "warn"),
        )
    except SpecError as exc:
        raise InputError(exc.args[0] if exc.args else str(exc), f"{where}.{exc.location}".rstrip(".")) from None
    except ValueError as exc:
        raise InputError(str(exc), where) from None


def load_ring(path) -> RingSpec:
    return ring_from_data(read_json(path), str(path))


def ring_to_data(spec: RingSpec) -> dict:
    """Inverse of ``ring_from_data`` listing every stored three-point entry."""
    return {
        "n": spec.n,
        "basis": [[b.name, b.degree] for b in spec.basis],
        "pairing": [[fraction_json(x) for x in row] for row in spec.pairing],
        "classes": [
            {"label": c.label, "omega": fraction_json(c.omega), "chern": c.chern,
             **({"divisor_pairings": dict(c.divisor_pairings)} if c.divisor_pairings else {})}
            for c in spec.classes
        ],
        "gw3": [[label, spec.basis[i].name, spec.basis[j].name, spec.basis[k].name, fraction_json(v)]
                for (label, i, j, k), v in sorted(spec.gw3.items())],
        **({"gw_higher": [[label, [[t, spec.basis[x].name] for t, x in ins], fraction_json(v)]
                          for (label, ins), v in sorted(spec.gw_higher.items())]}
           if spec.gw_higher else {}),
        **({"exceptional_powers": [spec.basis[i].name for i in spec.exceptional_powers]}
           if spec.exceptional_powers else {}),
    }


# -- Seidel elements ---------------------------------------------------------


def seidel_from_data(data: dict, unit: int, where: str):
    from .seidel import LedgerEntry, LoopData, SectionLedger, SeidelElement

    loop_d = _get(data, "loop", where)
    try:
        loop = LoopData(_num(_get(loop_d, "k_max", f"{where}.loop"), f"{where}.loop.k_max"),
                        _num(_get(loop_d, "k_min", f"{where}.loop"), f"{where}.loop.k_min"))
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc), f"{where}.loop") from None
    ref = _get(data, "reference", where)
    w = f"{where}.reference"
    entries = []
    for pos, e in enumerate(_get(data, "ledger", where, [])):
        we = f"{where}.ledger[{pos}]"
        entries.append((str(_get(e, "label", we)),
                        LedgerEntry(_num(_get(e, "coupling", we), f"{we}.coupling"),
                                    _int(_get(e, "vert_chern", we), f"{we}.vert_chern"))))
    ledger = SectionLedger(str(_get(ref, "label", w)), _num(_get(ref, "coupling", w), f"{w}.coupling"),
                           _int(_get(ref, "vert_chern", w), f"{w}.vert_chern"), tuple(entries))
    allowed = {(-ledger.vert_chern, -ledger.coupling)} | {(-e.vert_chern, -e.coupling) for _, e in entries}
    coeffs: dict[int, list] = {}
    for pos, term in enumerate(_get(data, "terms", where)):
        wt = f"{where}.terms[{pos}]"
        if not isinstance(term, list) or len(term) != 4:
            raise InputError("terms are [basis index, q power, t exponent, coefficient]", wt)
        i = _int(term[0], f"{wt}[0]")
        q = _int(term[1], f"{wt}[1]")
        t = _num(term[2], f"{wt}[2]")
        c = _num(term[3], f"{wt}[3]")
        if (q, t) not in allowed:
            raise InputError(
                f"q^{q} t^({format_fraction(t)}) matches no section class in the ledger", wt)
        coeffs.setdefault(i, []).append((c, q, t))
    element = QHElement({i: NovikovElement(ts) for i, ts in coeffs.items()})
    unit = _int(data.get("unit_index", unit), f"{where}.unit_index")
    return SeidelElement(element, ledger, loop, unit, bool(data.get("maximal_shape", False)))


def seidel_to_data(s) -> dict:
    """Inverse of ``seidel_from_data``."""
    return {
        "loop": {"k_max": fraction_json(s.loop.k_max), "k_min": fraction_json(s.loop.k_min)},
        "reference": {"label": s.ledger.reference, "coupling": fraction_json(s.ledger.coupling),
                      "vert_chern": s.ledger.vert_chern},
        "ledger": [{"label": name, "coupling": fraction_json(e.coupling), "vert_chern": e.vert_chern}
                   for name, e in s.ledger.entries],
        "terms": [[i, q, fraction_json(t), fraction_json(c)]
                  for i, coeff in sorted(s.element.as_dict().items()) for c, q, t in coeff.terms],
        "unit_index": s.unit,
        "maximal_shape": s.maximal_shape,
    }


def load_seidel_file(path) -> dict:
    """Returns ``{"ring": RingSpec | None, "unit": int, "elements": {...}, "blowup": (n, delta) | None}``."""
    data = read_json(path)
    where = str(path)
    ring = ring_from_data(data["ring"], f"{where}.ring") if "ring" in data else None
    if ring is not None:
        unit = ring.unit
    else:
        unit = _int(data.get("unit_index", 0), f"{where}.unit_index")
    elements = {}
    for key, value in _get(data, "elements", where).items():
        elements[key] = seidel_from_data(value, unit, f"{where}.elements.{key}")
    blowup = None
    if "blowup" in data:
        b = data["blowup"]
        blowup = (_int(_get(b, "n", f"{where}.blowup"), f"{where}.blowup.n"),
                  _num(b.get("delta", 1), f"{where}.blowup.delta"))
    return {"ring": ring, "unit": unit, "elements": elements, "blowup": blowup}


# -- decomposition cases -----------------------------------------------------


def _curve_class(c: dict, where: str):
    from .gwcalc import CurveClass

    dd = c.get("divisor_degree")
    return CurveClass(
        str(_get(c, "label", where)),
        _num(c.get("omega", 0), f"{where}.omega"),
        _int(c.get("chern", 0), f"{where}.chern"),
        None if dd is None else _int(dd, f"{where}.divisor_degree"),
        tuple((str(k), _int(v, f"{where}.pairings.{k}")) for k, v in c.get("pairings", {}).items()),
        tuple(_int(x, f"{where}.coords") for x in c.get("coords", [])),
        bool(c.get("fiber", False)),
        _int(c.get("exceptional", 0), f"{where}.exceptional"),
    )


def _insertions(items, where: str):
    from .gwcalc import Insertion

    out = []
    for pos, x in enumerate(items):
        if isinstance(x, str):
            out.append(Insertion(0, x))
        elif isinstance(x, list) and len(x) == 2:
            out.append(Insertion(_int(x[0], f"{where}[{pos}][0]"), str(x[1])))
        else:
            raise InputError("insertions are a class name or [tau order, class]", f"{where}[{pos}]")
    return tuple(out)


def space_from_data(s: dict, where: str):
    from .gwcalc import Space

    return Space(
        str(_get(s, "label", where)),
        _int(_get(s, "dim", where), f"{where}.dim"),
        {str(k): _int(v, f"{where}.codims.{k}") for k, v in s.get("codims", {}).items()},
        {str(k): _int(v, f"{where}.divisor_dims.{k}") for k, v in s.get("divisor_dims", {}).items()},
        frozenset(str(x) for x in s.get("fiber_constraints", [])),
        bool(s.get("fibered", False)),
        {str(k): _int(v, f"{where}.exceptional_powers.{k}") for k, v in s.get("exceptional_powers", {}).items()},
    )


def symbol_from_data(d: dict, where: str):
    from .gwcalc import InvariantSymbol, Tail

    beta = _curve_class(_get(d, "class", where), f"{where}.class")
    rel = []
    for pos, t in enumerate(d.get("relative", [])):
        if not isinstance(t, list) or len(t) != 2:
            raise InputError("relative insertions are [multiplicity, class]", f"{where}.relative[{pos}]")
        m = _int(t[0], f"{where}.relative[{pos}][0]")
        if m < 1:
            raise InputError("contact multiplicities are at least 1", f"{where}.relative[{pos}][0]")
        rel.append(Tail(m, str(t[1])))
    try:
        ins = _insertions(d.get("absolute", []), f"{where}.absolute")
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc), f"{where}.absolute") from None
    return InvariantSymbol(str(_get(d, "space", where)), beta, ins, tuple(rel))


def _side(d: dict, where: str):
    from .gwcalc import Side

    space = space_from_data(_get(d, "space", where), f"{where}.space")
    classes = [_curve_class(c, f"{where}.classes[{k}]") for k, c in enumerate(_get(d, "classes", where))]
    return Side(space, classes, _insertions(d.get("insertions", []), f"{where}.insertions"))


def case_from_data(data: dict, where: str = "case"):
    from .cases import absolute_case, eps2_case
    from .gwcalc import SideData

    if "builtin" in data:
        b = data["builtin"]
        kind = _get(b, "kind", f"{where}.builtin")
        n = _int(b.get("n", 3), f"{where}.builtin.n")
        if kind == "eps2":
            return eps2_case(n)
        if kind == "absolute":
            return absolute_case(n)
        raise InputError(f"unknown builtin case {kind!r}", f"{where}.builtin.kind")
    target = symbol_from_data(_get(data, "target", where), f"{where}.target")
    basis = [str(x) for x in _get(data, "divisor_basis", where)]
    duals = {str(k): str(v) for k, v in _get(data, "duals", where).items()}
    missing = [b for b in basis if b not in duals]
    if missing:
        raise InputError(f"no dual for divisor class {missing[0]!r}", f"{where}.duals")
    cap = data.get("energy_cap")
    side_data = SideData(basis, duals, _side(_get(data, "x", where), f"{where}.x"),
                         _side(_get(data, "y", where), f"{where}.y"),
                         _int(data.get("max_tails", 3), f"{where}.max_tails"),
                         None if cap is None else _num(cap, f"{where}.energy_cap"))
    return target, side_data


def load_case(path):
    return case_from_data(read_json(path), str(path))


def load_dimension_file(path):
    """``{"space": {...}, "symbols": [...]}`` -> (Space, [InvariantSymbol])."""
    data = read_json(path)
    where = str(path)
    space = space_from_data(_get(data, "space", where), f"{where}.space")
    symbols = [symbol_from_data(s, f"{where}.symbols[{k}]") for k, s in enumerate(_get(data, "symbols", where))]
    return space, symbols


# -- algebras ----------------------------------------------------------------


def algebra_from_data(data: dict, where: str = "algebra"):
    from .frobenius import AlgebraError, AlgebraSpec, HypothesisViolation

    dim = _int(_get(data, "dim", where), f"{where}.dim")
    structure = {}
    for pos, e in enumerate(_get(data, "structure", where)):
        w = f"{where}.structure[{pos}]"
        if not isinstance(e, list) or len(e) != 4:
            raise InputError("entries are [i, j, k, value]", w)
        i, j, k = (_int(e[x], f"{w}[{x}]") for x in range(3))
        if not all(0 <= x < dim for x in (i, j, k)):
            raise InputError("index out of range", w)
        v = _num(e[3], f"{w}[3]")
        structure[(i, j, k)] = v
        structure.setdefault((j, i, k), v)
    unit = _int(_get(data, "unit_index", where), f"{where}.unit_index")
    f = [_num(x, f"{where}.f[{k}]") for k, x in enumerate(_get(data, "f", where))]
    p = data.get("p")
    if isinstance(p, list):
        p = [_num(x, f"{where}.p[{k}]") for k, x in enumerate(p)]
    elif p is not None:
        p = _int(p, f"{where}.p")
    m = data.get("m")
    try:
        return AlgebraSpec(dim, structure, unit, f, p, m, name=str(data.get("name", "")))
    except AlgebraError as exc:
        raise InputError(str(exc), where) from None
    except HypothesisViolation as exc:
        raise InputError("cannot reconstruct M: " + str(exc), where) from None


def load_algebra(path):
    return algebra_from_data(read_json(path), str(path))


def algebra_to_data(alg) -> dict:
    out = {
        "dim": alg.dim,
        "unit_index": alg.unit_index,
        "structure": [[i, j, k, fraction_json(v)] for i in range(alg.dim) for j in range(i, alg.dim)
                      for k, v in enumerate(alg.table[i][j]) if v],
        "f": [fraction_json(x) for x in alg.f],
    }
    if alg.name:
        out = {"name": alg.name, **out}
    if alg.p is not None:
        out["p"] = [fraction_json(x) for x in alg.p]
        out["m"] = [[fraction_json(x) for x in v] for v in alg.m]
    return out
