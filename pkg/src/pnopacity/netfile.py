"""Net document parsing, validation, and serialization.

The on-disk format is a single JSON document describing places, transitions
(with labels and arc weight maps), the secret markings, and exploration
options. Parsing is strict: unknown fields are rejected so that typos fail
loudly instead of being ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from .basis import Secret
from .errors import ParseError, SemanticError
from .net import LabeledPetriNet, Marking, PetriNet
from .reachability import BoundConfig

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class PlaceSpec:
    id: str
    initial_tokens: int = 0


@dataclass(frozen=True)
class TransitionSpec:
    id: str
    label: str | None
    pre: Mapping[str, int] = field(default_factory=dict)
    post: Mapping[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class OptionsSpec:
    max_states: int | None = None
    max_token: int | None = None
    depth: int | None = None


@dataclass(frozen=True)
class NetDocument:
    schema_version: str
    places: tuple[PlaceSpec, ...]
    transitions: tuple[TransitionSpec, ...]
    secret: tuple[Mapping[str, int], ...] = ()
    options: OptionsSpec = OptionsSpec()


def _require_mapping(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ParseError("expected an object", path)
    return value


def _check_keys(obj: dict, path: str, required: tuple[str, ...], optional: tuple[str, ...] = ()):
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)!r}", path)
    missing = [key for key in required if key not in obj]
    if missing:
        raise ParseError(f"missing required field(s) {missing!r}", path)


def _require_str(value: Any, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise ParseError("expected a non-empty string", path)
    return value


def _require_nat(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ParseError("expected a non-negative integer", path)
    return value


def _parse_weights(value: Any, path: str) -> dict[str, int]:
    weights = _require_mapping(value, path)
    return {
        _require_str(place, f"{path}.{place}"): _require_nat(w, f"{path}.{place}")
        for place, w in weights.items()
    }


def parse_net_document(text: str) -> NetDocument:
    """Parse and strictly validate a net document from JSON text."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc
    top = _require_mapping(raw, "document")
    _check_keys(top, "document",
                required=("schema_version", "places", "transitions"),
                optional=("secret", "options"))
    version = _require_str(top["schema_version"], "schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version!r}", "schema_version")

    if not isinstance(top["places"], list) or not top["places"]:
        raise ParseError("expected a non-empty array", "places")
    places = []
    for i, entry in enumerate(top["places"]):
        path = f"places[{i}]"
        obj = _require_mapping(entry, path)
        _check_keys(obj, path, required=("id",), optional=("initial_tokens",))
        places.append(PlaceSpec(
            _require_str(obj["id"], f"{path}.id"),
            _require_nat(obj.get("initial_tokens", 0), f"{path}.initial_tokens"),
        ))

    if not isinstance(top["transitions"], list) or not top["transitions"]:
        raise ParseError("expected a non-empty array", "transitions")
    transitions = []
    for i, entry in enumerate(top["transitions"]):
        path = f"transitions[{i}]"
        obj = _require_mapping(entry, path)
        _check_keys(obj, path, required=("id", "label"), optional=("pre", "post"))
        label = obj["label"]
        if label is not None and (not isinstance(label, str) or not label):
            raise ParseError("label must be a non-empty string or null (unobservable)",
                             f"{path}.label")
        transitions.append(TransitionSpec(
            _require_str(obj["id"], f"{path}.id"),
            label,
            _parse_weights(obj.get("pre", {}), f"{path}.pre"),
            _parse_weights(obj.get("post", {}), f"{path}.post"),
        ))

    secret = []
    for i, entry in enumerate(top.get("secret", [])):
        path = f"secret[{i}]"
        secret.append(_parse_weights(entry, path))

    options = OptionsSpec()
    if "options" in top:
        obj = _require_mapping(top["options"], "options")
        _check_keys(obj, "options", required=(), optional=("max_states", "max_token", "depth"))
        values = {}
        for key in ("max_states", "max_token", "depth"):
            if obj.get(key) is not None:
                values[key] = _require_nat(obj[key], f"options.{key}")
        options = OptionsSpec(**values)

    doc = NetDocument(version, tuple(places), tuple(transitions), tuple(secret), options)
    _check_references(doc)
    return doc


def _check_references(doc: NetDocument) -> None:
    place_ids = [p.id for p in doc.places]
    known = set(place_ids)
    if len(known) != len(place_ids):
        dupes = sorted({p for p in place_ids if place_ids.count(p) > 1})
        raise SemanticError(f"duplicate place id(s) {dupes!r}", "places")
    trans_ids = [t.id for t in doc.transitions]
    if len(set(trans_ids)) != len(trans_ids):
        dupes = sorted({t for t in trans_ids if trans_ids.count(t) > 1})
        raise SemanticError(f"duplicate transition id(s) {dupes!r}", "transitions")
    for i, t in enumerate(doc.transitions):
        for kind in ("pre", "post"):
            for place in getattr(t, kind):
                if place not in known:
                    raise SemanticError(f"unknown place {place!r}",
                                        f"transitions[{i}].{kind}")
    for i, marking in enumerate(doc.secret):
        for place in marking:
            if place not in known:
                raise SemanticError(f"unknown place {place!r}", f"secret[{i}]")


def serialize_net_document(doc: NetDocument) -> str:
    """Render a document back to canonical JSON (two-space indent, stable order)."""
    payload: dict[str, Any] = {
        "schema_version": doc.schema_version,
        "places": [{"id": p.id, "initial_tokens": p.initial_tokens} for p in doc.places],
        "transitions": [
            {"id": t.id, "label": t.label, "pre": dict(t.pre), "post": dict(t.post)}
            for t in doc.transitions
        ],
        "secret": [dict(m) for m in doc.secret],
        "options": {
            "max_states": doc.options.max_states,
            "max_token": doc.options.max_token,
            "depth": doc.options.depth,
        },
    }
    return json.dumps(payload, indent=2) + "\n"


def to_system(doc: NetDocument) -> tuple[LabeledPetriNet, Secret, BoundConfig, int | None]:
    """Build the analyzable net system from a parsed document.

    Returns the labeled net, the secret, the exploration bounds, and the
    oracle depth override (None when the document leaves it to the caller).
    """
    place_ids = tuple(p.id for p in doc.places)
    place_index = {p: i for i, p in enumerate(place_ids)}
    trans_ids = tuple(t.id for t in doc.transitions)
    pre = [[0] * len(trans_ids) for _ in place_ids]
    post = [[0] * len(trans_ids) for _ in place_ids]
    labeling: dict[str, str | None] = {}
    alphabet: list[str] = []
    for j, t in enumerate(doc.transitions):
        for place, w in t.pre.items():
            pre[place_index[place]][j] = w
        for place, w in t.post.items():
            post[place_index[place]][j] = w
        labeling[t.id] = t.label
        if t.label is not None and t.label not in alphabet:
            alphabet.append(t.label)
    net = PetriNet(place_ids, trans_ids, tuple(map(tuple, pre)), tuple(map(tuple, post)))
    initial = Marking(tuple(p.initial_tokens for p in doc.places))
    lpn = LabeledPetriNet(net, initial, tuple(alphabet), labeling)
    secret = Secret(frozenset(
        Marking(tuple(m.get(p, 0) for p in place_ids)) for m in doc.secret
    ))
    cfg = BoundConfig(
        max_states=doc.options.max_states if doc.options.max_states is not None else 10_000,
        max_token=doc.options.max_token,
    )
    return lpn, secret, cfg, doc.options.depth
