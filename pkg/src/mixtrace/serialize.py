"""JSON schemas for models, morphisms, loops, zig-zag instances, diagrams
and reports.  Scalars travel as strings, never floats."""

from __future__ import annotations

import json
from typing import List, Optional

from .category import Mor, Model, Obj
from .errors import InputError
from .loops import Loop, Permutation
from .rings import (INTEGERS, RATIONALS, RingTag, format_value,
                    localized_integers, parse_value, ring_contains)
from .traces import StaircaseWitness, TraceResult
from .zigzag import Diagram, Edge, ZigZagInstance


class FileFormatError(InputError):
    """Malformed input file; the message carries the offending field."""


def _need(data: dict, key: str, where: str):
    if not isinstance(data, dict) or key not in data:
        raise FileFormatError(f"{where}: missing field {key!r}")
    return data[key]


def ring_to_json(ring: RingTag):
    if ring.kind == "Zloc":
        return {"Zloc": ring.m}
    return ring.kind


def ring_from_json(data, where: str = "ring") -> RingTag:
    if data == "Z":
        return INTEGERS
    if data == "Q":
        return RATIONALS
    if isinstance(data, dict) and set(data) == {"Zloc"}:
        m = data["Zloc"]
        if not isinstance(m, int) or m < 1:
            raise FileFormatError(f"{where}: Zloc parameter must be an int >= 1")
        return localized_integers(m)
    raise FileFormatError(f"{where}: expected \"Z\", \"Q\" or {{\"Zloc\": m}}")


def model_to_json(model: Model):
    return {"ring": ring_to_json(model.ring), "mix": format_value(model.mix)}


def model_from_json(data, where: str = "model") -> Model:
    ring = ring_from_json(_need(data, "ring", where), f"{where}.ring")
    mix_text = _need(data, "mix", where)
    if not isinstance(mix_text, str):
        raise FileFormatError(f"{where}.mix: scalars must be strings")
    mix = parse_value(mix_text)
    if not ring_contains(ring, mix):
        raise FileFormatError(
            f"{where}: mix scalar {mix_text!r} is not in ring {ring}")
    return Model(ring, mix)


def _entries_to_json(m: Mor):
    return [[format_value(v) for v in row] for row in m.entries]


def _entries_from_json(data, rows: int, cols: int, where: str):
    if not isinstance(data, list) or len(data) != rows:
        raise FileFormatError(f"{where}: expected {rows} rows")
    out = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise FileFormatError(f"{where}[{i}]: expected {cols} entries")
        new = []
        for j, cell in enumerate(row):
            if not isinstance(cell, str):
                raise FileFormatError(
                    f"{where}[{i}][{j}]: scalars must be strings")
            try:
                new.append(parse_value(cell))
            except InputError as exc:
                raise FileFormatError(f"{where}[{i}][{j}]: {exc}") from exc
        out.append(tuple(new))
    return tuple(out)


def mor_to_json(m: Mor):
    return {
        "model": model_to_json(m.model),
        "dom": m.dom.rank,
        "cod": m.cod.rank,
        "entries": _entries_to_json(m),
    }


def mor_from_json(data, where: str = "morphism",
                  model: Optional[Model] = None) -> Mor:
    got_model = model_from_json(_need(data, "model", where), f"{where}.model")
    if model is not None and got_model != model:
        raise FileFormatError(f"{where}: model disagrees with the enclosing file")
    dom = _need(data, "dom", where)
    cod = _need(data, "cod", where)
    if not isinstance(dom, int) or not isinstance(cod, int) or dom < 0 or cod < 0:
        raise FileFormatError(f"{where}: dom/cod must be non-negative ints")
    entries = _entries_from_json(_need(data, "entries", where), cod, dom,
                                 f"{where}.entries")
    try:
        return Mor(got_model, Obj(dom), Obj(cod), entries)
    except InputError as exc:
        raise FileFormatError(f"{where}: {exc}") from exc


def _bare_matrix_to_json(m: Mor):
    return _entries_to_json(m)


def _bare_matrix_from_json(data, model: Model, dom: Obj, cod: Obj,
                           where: str) -> Mor:
    entries = _entries_from_json(data, cod.rank, dom.rank, where)
    try:
        return Mor(model, dom, cod, entries)
    except InputError as exc:
        raise FileFormatError(f"{where}: {exc}") from exc


def loop_to_json(p: Loop):
    return {
        "model": model_to_json(p.model),
        "A": p.dom.rank,
        "B": p.cod.rank,
        "hidden": [u.rank for u in p.hidden],
        "carrier": mor_to_json(p.carrier),
    }


def loop_from_json(data, where: str = "loop") -> Loop:
    model = model_from_json(_need(data, "model", where), f"{where}.model")
    a = _need(data, "A", where)
    b = _need(data, "B", where)
    hidden = _need(data, "hidden", where)
    if not isinstance(a, int) or not isinstance(b, int):
        raise FileFormatError(f"{where}: A and B must be ints")
    if not isinstance(hidden, list) or \
            any(not isinstance(h, int) or h < 0 for h in hidden):
        raise FileFormatError(f"{where}.hidden: expected a list of ranks")
    carrier = mor_from_json(_need(data, "carrier", where),
                            f"{where}.carrier", model=model)
    try:
        return Loop(model, Obj(a), Obj(b), tuple(Obj(h) for h in hidden),
                    carrier)
    except InputError as exc:
        raise FileFormatError(f"{where}: {exc}") from exc


def zigzag_to_json(inst: ZigZagInstance):
    return {
        "model": model_to_json(inst.model),
        "upper": [o.rank for o in inst.upper],
        "apex": [o.rank for o in inst.apex],
        "lower": [o.rank for o in inst.lower],
        "alpha": list(inst.perm.images),
        "hub": inst.hub.rank,
        "down_maps": [_bare_matrix_to_json(m) for m in inst.down_maps],
        "up_maps": [_bare_matrix_to_json(m) for m in inst.up_maps],
        "left_fillers": [_bare_matrix_to_json(m) for m in inst.left_fillers],
        "right_fillers": [_bare_matrix_to_json(m) for m in inst.right_fillers],
    }


def zigzag_from_json(data, where: str = "zigzag") -> ZigZagInstance:
    model = model_from_json(_need(data, "model", where), f"{where}.model")

    def ranks(key) -> List[Obj]:
        v = _need(data, key, where)
        if not isinstance(v, list) or \
                any(not isinstance(r, int) or r < 0 for r in v):
            raise FileFormatError(f"{where}.{key}: expected a list of ranks")
        return [Obj(r) for r in v]

    upper, apex, lower = ranks("upper"), ranks("apex"), ranks("lower")
    n = len(upper)
    alpha_raw = _need(data, "alpha", where)
    try:
        perm = Permutation(tuple(alpha_raw))
    except InputError as exc:
        raise FileFormatError(f"{where}.alpha: {exc}") from exc
    hub_rank = _need(data, "hub", where)
    if not isinstance(hub_rank, int) or hub_rank < 0:
        raise FileFormatError(f"{where}.hub: expected a rank")
    hub = Obj(hub_rank)

    downs_raw = _need(data, "down_maps", where)
    ups_raw = _need(data, "up_maps", where)
    if len(downs_raw) != n or len(ups_raw) != n:
        raise FileFormatError(f"{where}: need one down and one up map per index")
    downs = tuple(
        _bare_matrix_from_json(downs_raw[i], model, upper[i], apex[i],
                               f"{where}.down_maps[{i}]") for i in range(n))
    ups = tuple(
        _bare_matrix_from_json(ups_raw[i], model, lower[i], apex[i],
                               f"{where}.up_maps[{i}]") for i in range(n))

    shell = ZigZagInstance.__new__(ZigZagInstance)  # ranks only, for levels
    object.__setattr__(shell, "model", model)
    object.__setattr__(shell, "upper", tuple(upper))
    object.__setattr__(shell, "apex", tuple(apex))
    object.__setattr__(shell, "lower", tuple(lower))
    object.__setattr__(shell, "down_maps", downs)
    object.__setattr__(shell, "up_maps", ups)
    object.__setattr__(shell, "perm", perm)

    def fillers(key, side):
        raw = _need(data, key, where)
        if len(raw) != n + 1:
            raise FileFormatError(f"{where}.{key}: expected {n + 1} fillers")
        return tuple(
            _bare_matrix_from_json(raw[k], model,
                                   Obj(shell.level_rank(side, k)), hub,
                                   f"{where}.{key}[{k}]")
            for k in range(n + 1))

    left = fillers("left_fillers", "left")
    right = fillers("right_fillers", "right")
    try:
        return ZigZagInstance(model, tuple(upper), tuple(apex), tuple(lower),
                              downs, ups, perm, hub, left, right)
    except InputError as exc:
        raise FileFormatError(f"{where}: {exc}") from exc


def diagram_to_json(d: Diagram):
    return {
        "model": model_to_json(d.model),
        "objects": [o.rank for o in d.objects],
        "edges": [
            {"src": e.src, "dst": e.dst, "label": e.label,
             "entries": _bare_matrix_to_json(e.mor)}
            for e in d.edges
        ],
    }


def diagram_from_json(data, where: str = "diagram") -> Diagram:
    model = model_from_json(_need(data, "model", where), f"{where}.model")
    objs_raw = _need(data, "objects", where)
    if not isinstance(objs_raw, list) or \
            any(not isinstance(r, int) or r < 0 for r in objs_raw):
        raise FileFormatError(f"{where}.objects: expected a list of ranks")
    objects = tuple(Obj(r) for r in objs_raw)
    edges = []
    for i, e in enumerate(_need(data, "edges", where)):
        src = _need(e, "src", f"{where}.edges[{i}]")
        dst = _need(e, "dst", f"{where}.edges[{i}]")
        if not isinstance(src, int) or not isinstance(dst, int) \
                or not (0 <= src < len(objects)) or not (0 <= dst < len(objects)):
            raise FileFormatError(f"{where}.edges[{i}]: bad node index")
        mor = _bare_matrix_from_json(_need(e, "entries", f"{where}.edges[{i}]"),
                                     model, objects[src], objects[dst],
                                     f"{where}.edges[{i}].entries")
        edges.append(Edge(src, dst, mor, e.get("label", "")))
    try:
        return Diagram(model, objects, tuple(edges))
    except InputError as exc:
        raise FileFormatError(f"{where}: {exc}") from exc


def witness_to_json(w: StaircaseWitness):
    return {
        "psi": _bare_matrix_to_json(w.psi),
        "fillers": [_bare_matrix_to_json(f) for f in w.fillers],
    }


def trace_result_to_json(r: TraceResult, p: Loop,
                         include_witness: bool = False):
    out = {"status": r.status}
    if r.is_defined:
        out["value"] = mor_to_json(r.value)
        if r.alpha is not None:
            out["alpha"] = list(r.alpha.images)
    if include_witness and r.witness is not None:
        from .zigzag import staircase_diagram

        out["witness"] = witness_to_json(r.witness)
        if r.alpha is not None:
            from .loops import hidden_symmetry

            aligned = hidden_symmetry(p, r.alpha)
        else:
            aligned = p
        out["witness"]["diagram"] = diagram_to_json(
            staircase_diagram(aligned, r.witness))
    return out


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}"
        ) from exc
