"""JSON documents: the window/cover input file and auxiliary idèle files.

Input document::

    {"window": {"knots": ["K1", "K2"], "lk": [[0, 1], [1, 0]]},
     "cover": {"n": 2, "branch": {"K1": 1}},
     "cycles": [[{"knot": "K2", "component": 0, "coeff": 1}]]}

An idèle file holds any of ``"chain": {knot: c}``, ``"idele": {knot: [l, m]}``
and ``"cover_idele": {knot: [[l, m], ...]}``.  These keys may also appear in
the input document itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ValidationError
from .genus import Cycle1
from .ideles import BaseIdele, Chain2, CoverIdele
from .link import CoverSpec, LinkWindow, Violation, validate_window


@dataclass(frozen=True)
class Document:
    window: LinkWindow
    cover: CoverSpec
    cycles: tuple[Cycle1, ...] = ()
    extras: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        out = {"window": self.window.to_json(), "cover": self.cover.to_json()}
        if self.cycles:
            out["cycles"] = [z.to_json() for z in self.cycles]
        out.update(self.extras)
        return out


def _reject_floats(x):
    raise ValidationError(f"non-integer number {x} in input; all values must be integers")


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text, parse_float=_reject_floats)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None


def parse_cover(raw) -> CoverSpec:
    if not isinstance(raw, dict) or "n" not in raw:
        raise ValidationError("invalid cover", [
            Violation("malformed", "cover must be an object with 'n' and 'branch'")])
    branch = raw.get("branch", {})
    if not isinstance(branch, dict):
        raise ValidationError("invalid cover", [
            Violation("malformed", "branch must map knot labels to integers")])
    return CoverSpec(raw["n"], tuple(branch.items()))


def parse_cycle(raw) -> Cycle1:
    if not isinstance(raw, list):
        raise ValidationError("a cycle must be a list of terms")
    terms = []
    for t in raw:
        if not isinstance(t, dict) or not {"knot", "component", "coeff"} <= t.keys():
            raise ValidationError(f"cycle term must have knot, component, coeff: {t!r}")
        terms.append((t["knot"], t["component"], t["coeff"]))
    return Cycle1(tuple(terms))


def parse_document(raw) -> Document:
    if not isinstance(raw, dict) or "window" not in raw or "cover" not in raw:
        raise ValidationError("input must be an object with 'window' and 'cover'")
    window = validate_window(raw["window"])
    cover = parse_cover(raw["cover"])
    missing = [k for k in cover.branch_knots if k not in window]
    if missing:
        raise ValidationError("invalid cover", [
            Violation("missing branch knot", f"{k} is not a window knot", (k,)) for k in missing])
    cycles = tuple(parse_cycle(c) for c in raw.get("cycles", []))
    extras = {k: raw[k] for k in ("chain", "idele", "cover_idele") if k in raw}
    return Document(window, cover, cycles, extras)


def load_document(path: str | Path) -> Document:
    return parse_document(read_json(path))


def parse_chain(raw) -> Chain2:
    if not isinstance(raw, dict):
        raise ValidationError("chain must map knot labels to integers")
    return Chain2(raw)


def parse_base_idele(raw) -> BaseIdele:
    if not isinstance(raw, dict):
        raise ValidationError("idele must map knot labels to [l, m] pairs")
    return BaseIdele(raw)


def parse_cover_idele(raw) -> CoverIdele:
    if not isinstance(raw, dict) or not all(isinstance(v, list) for v in raw.values()):
        raise ValidationError("cover_idele must map knot labels to lists of [l, m] pairs")
    return CoverIdele(raw)


_PARSERS = {"chain": parse_chain, "idele": parse_base_idele, "cover_idele": parse_cover_idele}


def load_operand(doc: Document, key: str, path: str | Path | None):
    """Fetch ``key`` from the idèle file at ``path``, else from the document."""
    source = doc.extras
    if path is not None:
        source = read_json(path)
        if not isinstance(source, dict):
            raise ValidationError(f"{path}: expected a JSON object")
    if key not in source:
        where = path if path is not None else "the input document"
        raise ValidationError(f"no {key!r} entry in {where}")
    return _PARSERS[key](source[key])


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
