"""JSON instance files.

Layout::

    {
      "format": "bornconv-instance/1",
      "spaces": {"X": {"labels": [...], "dist": [["0", "1/2"], ...]}, "Y": {...}},
      "directed_set": {"elements": [...], "geq": [[true, false], ...]},
      "ideal": {"strategy": "i0"}
             | {"strategy": "empty"}
             | {"strategy": "generators", "generators": [[0, 2], [1]]},
      "bornology": {"base": [["a", "b"], ["c"]]},
      "net": {"<index label>": {"domain": [...], "map": {"a": "p"}}, ...},
      "limit": {"domain": [...], "map": {...}}
    }

Distances are rational strings (``"p/q"`` or ``"n"``); ideal generators are
sorted arrays of element positions. Loading reports every violated
invariant at once instead of stopping at the first.
"""
from __future__ import annotations

import json
from pathlib import Path

from .bornology import Bornology
from .convergence import Instance
from .errors import InvariantViolation, ParseError
from .metric import FiniteMetricSpace, format_rational, iter_bits
from .order import DirectedSet, Ideal, ideal_from_generators, tail_ideal
from .partial_maps import PartialMap, PartialMapNet

FORMAT = "bornconv-instance/1"


def space_to_json(space: FiniteMetricSpace) -> dict:
    return {
        "labels": list(space.labels),
        "dist": [[format_rational(v) for v in row] for row in space.dist],
    }


def map_to_json(pm: PartialMap) -> dict:
    d = pm.as_dict()
    return {"domain": list(d), "map": d}


def ideal_to_json(ideal: Ideal) -> dict:
    if ideal == tail_ideal(ideal.ds):
        return {"strategy": "i0"}
    if ideal.span == 0:
        return {"strategy": "empty"}
    # ideals on a finite set are principal: one generator suffices
    return {"strategy": "generators", "generators": [list(iter_bits(ideal.span))]}


def instance_to_json(inst: Instance) -> dict:
    return {
        "format": FORMAT,
        "spaces": {"X": space_to_json(inst.X), "Y": space_to_json(inst.Y)},
        "directed_set": {
            "elements": list(inst.ds.elements),
            "geq": [list(row) for row in inst.ds.geq],
        },
        "ideal": ideal_to_json(inst.ideal),
        "bornology": {"base": [inst.X.labels_of(b) for b in inst.bornology.base]},
        "net": {g: map_to_json(pm) for g, pm in zip(inst.ds.elements, inst.net)},
        "limit": map_to_json(inst.limit),
    }


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_json(inst), indent=2) + "\n"


def dump_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps_instance(inst))


def _get(doc, key, kind, where):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"{where}: missing key {key!r}")
    val = doc[key]
    if not isinstance(val, kind):
        raise ParseError(f"{where}.{key}: expected {kind.__name__}")
    return val


class _Collector:
    def __init__(self):
        self.problems: list[str] = []

    def attempt(self, where, fn, *args):
        try:
            return fn(*args)
        except InvariantViolation as exc:
            self.problems.extend(f"{where}: {v}" for v in exc.violations)
        except (ParseError, KeyError, TypeError, ValueError) as exc:
            self.problems.append(f"{where}: {exc}")
        return None


def _space(doc, name):
    sd = _get(doc, name, dict, "spaces")
    return FiniteMetricSpace(_get(sd, "labels", list, name), _get(sd, "dist", list, name))


def _directed(doc):
    dd = _get(doc, "directed_set", dict, "instance")
    return DirectedSet(_get(dd, "elements", list, "directed_set"), _get(dd, "geq", list, "directed_set"))


def _ideal(doc, ds):
    idoc = _get(doc, "ideal", dict, "instance")
    strategy = _get(idoc, "strategy", str, "ideal")
    if strategy == "i0":
        return tail_ideal(ds)
    if strategy == "empty":
        return Ideal(ds, frozenset({0}))
    if strategy == "generators":
        gens = []
        for g in _get(idoc, "generators", list, "ideal"):
            if not isinstance(g, list) or any(
                not isinstance(i, int) or not 0 <= i < ds.n for i in g
            ):
                raise ParseError(f"ideal: generator {g!r} is not a list of element positions")
            gens.append(sum(1 << i for i in g))
        return ideal_from_generators(ds, gens)
    raise ParseError(f"ideal: unknown strategy {strategy!r}")


def _bornology(doc, X):
    bdoc = _get(doc, "bornology", dict, "instance")
    return Bornology(X, [X.mask(b) for b in _get(bdoc, "base", list, "bornology")])


def _partial_map(pdoc, X, Y, where):
    mapping = _get(pdoc, "map", dict, where)
    domain = _get(pdoc, "domain", list, where)
    if set(domain) != set(mapping):
        raise InvariantViolation(f"table: map keys must equal the domain {domain!r}")
    return PartialMap.from_dict(X, Y, mapping)


def load_instance_doc(doc) -> Instance:
    """Build an :class:`Instance`, raising one InvariantViolation listing every problem."""
    if not isinstance(doc, dict):
        raise ParseError("instance: top level must be an object")
    if doc.get("format", FORMAT) != FORMAT:
        raise ParseError(f"instance: unsupported format {doc.get('format')!r}")
    c = _Collector()
    spaces = c.attempt("spaces", _get, doc, "spaces", dict, "instance")
    X = Y = None
    if spaces is not None:
        X = c.attempt("X", _space, spaces, "X")
        Y = c.attempt("Y", _space, spaces, "Y")
    ds = c.attempt("directed_set", _directed, doc)
    ideal = c.attempt("ideal", _ideal, doc, ds) if ds is not None else None
    born = c.attempt("bornology", _bornology, doc, X) if X is not None else None
    limit = net = None
    if X is not None and Y is not None:
        limit = c.attempt("limit", lambda: _partial_map(_get(doc, "limit", dict, "instance"), X, Y, "limit"))
        ndoc = c.attempt("net", _get, doc, "net", dict, "instance")
        if ndoc is not None and ds is not None:
            maps = []
            missing = [g for g in ds.elements if g not in ndoc]
            extra = [g for g in ndoc if g not in ds.elements]
            if missing or extra:
                c.problems.append(
                    f"net: totality: missing indices {missing}, unknown indices {extra}"
                )
            for g in ds.elements:
                if g in ndoc:
                    maps.append(c.attempt(f"net[{g}]", _partial_map, ndoc[g], X, Y, f"net[{g}]"))
            if not missing and not extra and all(m is not None for m in maps):
                net = c.attempt("net", PartialMapNet, ds, tuple(maps))
    if c.problems:
        raise InvariantViolation(c.problems)
    inst = c.attempt("instance", Instance, X, Y, ds, ideal, born, net, limit)
    if c.problems:
        raise InvariantViolation(c.problems)
    return inst


def loads_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    return load_instance_doc(doc)


def load_instance(path) -> Instance:
    return loads_instance(Path(path).read_text())
