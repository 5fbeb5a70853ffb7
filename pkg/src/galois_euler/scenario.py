"""Scenario files: JSON schema, validation, and construction of the objects.

A file holds one scenario object, a list of them, or ``{"scenarios": [...]}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .errors import SchemaError
from .fingroup import FiniteGroup, builtin_group, from_permutations
from .galmod import COMPLEX, AdjointModule, GaloisModule, character_from_generators, module_from_generators
from .numfield import MAX_DEGREE, MAX_HEIGHT, NumberField, PlaceSet, quadratic_field, rational_field

OUTPUTS = ("tate", "bound", "exact", "etale", "ledger", "defect", "whatif")

_matrix = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}
_card = {"type": "object", "additionalProperties": {"type": "integer"}}

SCENARIO_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["id", "field", "group"],
    "additionalProperties": False,
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
        "field": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "builtin": {"type": "string"},
                "poly": {"type": "array", "items": {"type": "integer"}, "minItems": 2},
                "name": {"type": "string"},
            },
            "oneOf": [{"required": ["builtin"]}, {"required": ["poly"]}],
        },
        "splitting_overrides": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2},
            },
        },
        "S": {
            "type": "array",
            "items": {
                "oneOf": [
                    {"type": "integer", "minimum": 2},
                    {
                        "type": "object",
                        "required": ["p"],
                        "additionalProperties": False,
                        "properties": {
                            "p": {"type": "integer", "minimum": 2},
                            "factors": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                        },
                    },
                ]
            },
        },
        "group": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "builtin": {"type": "string"},
                "permutations": {"type": "array", "items": {"type": "string"}, "minItems": 1},
            },
            "oneOf": [{"required": ["builtin"]}, {"required": ["permutations"]}],
        },
        "real_places": {"type": "array", "items": {"type": "string"}},
        "cyclotomic": {
            "type": "object",
            "additionalProperties": {"type": "object", "additionalProperties": {"type": "integer"}},
        },
        "modules": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "p"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "p": {"type": "integer", "minimum": 2},
                    "exponents": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
                    "action": {
                        "oneOf": [
                            {"const": "trivial"},
                            {"const": "cyclotomic"},
                            {"type": "object", "additionalProperties": _matrix},
                        ]
                    },
                },
            },
        },
        "flags": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "quotient_is_full": {"type": "boolean"},
                "faithful_quotient": {"type": "boolean"},
            },
        },
        "outputs": {"type": "array", "items": {"enum": list(OUTPUTS)}},
        "ledger": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "primes": {"type": "array", "items": {"type": "integer", "minimum": 2}},
                "d": {"type": "integer", "minimum": 0},
                "mu_p_in_K": {"type": "object", "additionalProperties": {"enum": [0, 1]}},
                "extra_rows": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["module", "p", "h1", "h2", "dim", "trivial"],
                        "additionalProperties": False,
                        "properties": {
                            "module": {"type": "string"},
                            "p": {"type": "integer", "minimum": 2},
                            "h1": {"type": "integer", "minimum": 0},
                            "h2": {"type": "integer", "minimum": 0},
                            "dim": {"type": "integer", "minimum": 1},
                            "trivial": {"type": "boolean"},
                            "mu_p": {"type": "boolean"},
                        },
                    },
                },
            },
        },
        "defect": {
            "type": "object",
            "required": ["p", "n", "rep"],
            "additionalProperties": False,
            "properties": {
                "p": {"type": "integer", "minimum": 2},
                "n": {"type": "integer", "minimum": 1},
                "rep": {"type": "object", "additionalProperties": _matrix},
                "absolutely_irreducible": {"type": "boolean"},
            },
        },
        "whatif": {
            "type": "object",
            "required": ["extra_S"],
            "additionalProperties": False,
            "properties": {"extra_S": {"type": "array", "items": {"type": "integer", "minimum": 2}}},
        },
        "claims": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "modules": {
                    "type": "object",
                    "additionalProperties": {
                        "type": "object",
                        "additionalProperties": False,
                        "properties": {"chi2": _card, "chi2_bound": _card, "h2_dim": {"type": "integer"}},
                    },
                },
                "r_minus_d": {"type": "integer"},
                "source": {"type": "string"},
            },
        },
    },
}


@dataclass
class Scenario:
    id: str
    raw: dict
    field: NumberField
    S: PlaceSet
    group: FiniteGroup
    places: tuple
    modules: list[GaloisModule]
    quotient_is_full: bool = False
    faithful_quotient: bool = False
    outputs: tuple[str, ...] = OUTPUTS
    defect_rep: AdjointModule | None = None
    defect_abs_irred: bool = False
    s_primes: tuple[int, ...] = field(default_factory=tuple)

    def wants(self, key: str) -> bool:
        return key in self.outputs


def _field_from_spec(spec: dict, overrides) -> NumberField:
    if "poly" in spec:
        coeffs = [int(c) for c in spec["poly"]]
        if len(coeffs) - 1 > MAX_DEGREE:
            raise SchemaError(f"degree {len(coeffs) - 1} exceeds {MAX_DEGREE}")
        if any(abs(c) > MAX_HEIGHT for c in coeffs):
            raise SchemaError("coefficient height exceeds 2^64")
        return NumberField.from_poly(coeffs, spec.get("name", ""), overrides)
    name = spec["builtin"].replace(" ", "")
    if name == "Q":
        base = rational_field()
    else:
        m = re.fullmatch(r"Q\(sqrt,?(-?\d+)\)", name)
        if not m:
            raise SchemaError(f"unknown builtin field {spec['builtin']!r}")
        base = quadratic_field(int(m.group(1)))
    if overrides:
        return NumberField.from_poly(base.min_poly, spec.get("name", base.name), overrides)
    return base


def _group_from_spec(spec: dict) -> FiniteGroup:
    if "builtin" in spec:
        try:
            return builtin_group(spec["builtin"])
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
    return from_permutations(spec["permutations"])


def _label_index(G: FiniteGroup, label: str) -> int:
    try:
        return G.index(label)
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"unknown group element {label!r}; known: {list(G.labels)}") from exc


def _cyclotomic(raw: dict, G: FiniteGroup, p: int, e: int):
    table = raw.get("cyclotomic", {}).get(str(p))
    if table is None:
        # mod 2 every character into (Z/2)^x is trivial
        return (1,) * G.order if (p, e) == (2, 1) else None
    images = {_label_index(G, lab): int(v) for lab, v in table.items()}
    for g in G.generators:
        images.setdefault(g, 1)
    return character_from_generators(G, p, e, images)


def _module_from_spec(raw: dict, spec: dict, G: FiniteGroup, places) -> GaloisModule:
    p = spec["p"]
    exps = tuple(spec.get("exponents", [1]))
    if list(exps) != sorted(exps, reverse=True):
        raise SchemaError(f"module {spec['name']}: exponents must be non-increasing")
    chi = _cyclotomic(raw, G, p, max(exps))
    action = spec.get("action", "trivial")
    k = len(exps)
    if action == "trivial":
        images = {g: np.eye(k, dtype=np.int64) for g in G.generators}
    elif action == "cyclotomic":
        if chi is None:
            raise SchemaError(f"module {spec['name']}: cyclotomic action needs a 'cyclotomic' entry for p={p}")
        if k != 1:
            raise SchemaError("cyclotomic action is one-dimensional")
        images = {g: [[chi[g]]] for g in G.generators}
    else:
        images = {_label_index(G, lab): m for lab, m in action.items()}
        for g in G.generators:
            images.setdefault(g, np.eye(k, dtype=np.int64))
        for g, m in images.items():
            if np.asarray(m).shape != (k, k):
                raise SchemaError(f"module {spec['name']}: matrix for {G.labels[g]} is not {k}x{k}")
    if G.order == 1:
        images = {}
    cyc = None if chi is None else {g: chi[g] for g in G.generators}
    return module_from_generators(G, p, exps, images, cyc, places, spec["name"])


def _place_set(field: NumberField, entries) -> tuple[PlaceSet, tuple[int, ...]]:
    from .numfield import split_prime

    places, primes = [], []
    for item in entries:
        if isinstance(item, int):
            p, idx = item, None
        else:
            p, idx = item["p"], item.get("factors")
        primes.append(p)
        n = len(split_prime(field, p).factors)
        for i in range(n) if idx is None else idx:
            if not 0 <= i < n:
                raise SchemaError(f"factor index {i} at p={p} does not exist ({n} primes above p)")
            places.append((p, i))
    return PlaceSet(field, tuple(sorted(set(places)))), tuple(sorted(set(primes)))


def build_scenario(raw: dict) -> Scenario:
    try:
        jsonschema.validate(raw, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(x) for x in exc.absolute_path)
        raise SchemaError(f"{raw.get('id', '?')}: {path or '<root>'}: {exc.message}") from None
    overrides = {int(p): v for p, v in raw.get("splitting_overrides", {}).items()}
    K = _field_from_spec(raw["field"], overrides)
    S, s_primes = _place_set(K, raw.get("S", []))
    G = _group_from_spec(raw["group"])

    labels = raw.get("real_places")
    if labels is None:
        if K.r1 and G.order > 1:
            raise SchemaError(f"{raw['id']}: field has {K.r1} real places; give 'real_places'")
        labels = ["1"] * K.r1 if G.order == 1 else []
    if len(labels) != K.r1:
        raise SchemaError(f"{raw['id']}: {len(labels)} real_places given, field has {K.r1}")
    places = tuple(_label_index(G, lab) for lab in labels) + (COMPLEX,) * K.r2

    modules = [_module_from_spec(raw, m, G, places) for m in raw.get("modules", [])]
    names = [m.name for m in modules]
    if len(set(names)) != len(names):
        raise SchemaError(f"{raw['id']}: duplicate module names")

    flags = raw.get("flags", {})
    rep, abs_irred = None, False
    if "defect" in raw:
        spec = raw["defect"]
        images = {_label_index(G, lab): m for lab, m in spec["rep"].items()}
        n = spec["n"]
        for g in G.generators:
            images.setdefault(g, np.eye(n, dtype=np.int64))
        rep = AdjointModule.from_generators(G, spec["p"], n, images)
        abs_irred = spec.get("absolutely_irreducible", False)
    return Scenario(
        id=raw["id"],
        raw=raw,
        field=K,
        S=S,
        group=G,
        places=places,
        modules=modules,
        quotient_is_full=flags.get("quotient_is_full", False),
        faithful_quotient=flags.get("faithful_quotient", False),
        outputs=tuple(raw.get("outputs", OUTPUTS)),
        defect_rep=rep,
        defect_abs_irred=abs_irred,
        s_primes=s_primes,
    )


def load_raw(path: str | Path) -> list[dict]:
    """Read a scenario file into a list of raw scenario dicts."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{path}: {exc}") from None
    if isinstance(data, dict) and "scenarios" in data:
        data = data["scenarios"]
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list) or not data:
        raise SchemaError(f"{path}: no scenarios")
    if not all(isinstance(d, dict) for d in data):
        raise SchemaError(f"{path}: every scenario must be an object")
    return data


def bundled_dir() -> Path:
    return Path(__file__).parent / "scenarios"


def bundled_paths() -> list[Path]:
    return sorted(bundled_dir().glob("*.json"))
