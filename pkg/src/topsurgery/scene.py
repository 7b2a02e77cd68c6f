"""Scene JSON persistence and OBJ export.

Output is deterministic: keys are sorted, floats are written with a 9-digit
mantissa, negative zero is normalized, and nothing time-dependent is stored.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any

import jsonschema

from .errors import InputError
from .manifold import Arcs, Curve1, LayeredBody, Surface2
from .solid import LayeredTorus, SolidResult
from .surgery3d import ArcDescriptor, LensSpaceDescriptor, TorusCurve, TruncatedScene3, rational_surgery_unknot

SUPPORTED_VERSIONS = (1,)

_point = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_index = {"type": "integer", "minimum": 0}
_label = {"type": ["integer", "string"]}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["version", "objects", "provenance"],
    "additionalProperties": False,
    "properties": {
        "version": {"type": "integer"},
        "objects": {"type": "object", "additionalProperties": {"$ref": "#/$defs/object"}},
        "provenance": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["op", "params"],
                "additionalProperties": False,
                "properties": {"op": {"type": "string"}, "params": {"type": "object"}},
            },
        },
    },
    "$defs": {
        "curve": {
            "type": "object",
            "required": ["type", "labels", "cycles"],
            "properties": {
                "type": {"const": "curve"},
                "labels": {"type": "array", "items": _label},
                "cycles": {"type": "array", "items": {"type": "array", "items": _index}},
                "coords": {"oneOf": [{"type": "null"}, {"type": "array", "items": _point}]},
            },
        },
        "arcs": {
            "type": "object",
            "required": ["type", "labels", "paths"],
            "properties": {
                "type": {"const": "arcs"},
                "labels": {"type": "array", "items": _label},
                "paths": {"type": "array", "items": {"type": "array", "items": _index}},
                "coords": {"oneOf": [{"type": "null"}, {"type": "array", "items": _point}]},
            },
        },
        "surface": {
            "type": "object",
            "required": ["type", "vertices", "triangles"],
            "properties": {
                "type": {"const": "surface"},
                "vertices": {"type": "array", "items": _point},
                "triangles": {"type": "array",
                              "items": {"type": "array", "items": _index, "minItems": 3, "maxItems": 3}},
            },
        },
        "layered_body": {
            "type": "object",
            "required": ["type", "dimension", "radii", "layers", "center"],
            "properties": {
                "type": {"const": "layered_body"},
                "dimension": {"enum": [2, 3]},
                "radii": {"type": "array", "items": {"type": "number"}},
                "center": {"oneOf": [{"type": "null"}, _point]},
                "layers": {"type": "array",
                           "items": {"oneOf": [{"$ref": "#/$defs/curve"}, {"$ref": "#/$defs/surface"}]}},
            },
        },
        "layered_torus": {
            "type": "object",
            "required": ["type", "radii", "layers", "core_circle"],
            "properties": {
                "type": {"const": "layered_torus"},
                "radii": {"type": "array", "items": {"type": "number"}},
                "layers": {"type": "array", "items": {"$ref": "#/$defs/surface"}},
                "core_circle": {"$ref": "#/$defs/curve"},
            },
        },
        "lens": {
            "type": "object",
            "required": ["type", "p", "q"],
            "properties": {"type": {"const": "lens"}, "p": {"type": "integer"}, "q": {"type": "integer"}},
        },
        "truncated3d": {
            "type": "object",
            "required": ["type", "mode", "cork", "outer_ball", "parallel_curve"],
            "properties": {"type": {"const": "truncated3d"}, "mode": {"enum": ["attract", "repel"]}},
        },
        "solid_result": {
            "type": "object",
            "required": ["type", "kind", "limit_stratum", "pieces"],
            "properties": {"type": {"const": "solid_result"}, "pieces": {"type": "array", "items": {"type": "string"}}},
        },
        "object": {
            "type": "object",
            "required": ["type"],
            "properties": {"type": {"enum": ["curve", "arcs", "surface", "layered_body", "layered_torus",
                                             "lens", "truncated3d", "solid_result"]}},
            "allOf": [
                {"if": {"properties": {"type": {"const": name}}}, "then": {"$ref": f"#/$defs/{name}"}}
                for name in ("curve", "arcs", "surface", "layered_body", "layered_torus", "lens",
                             "truncated3d", "solid_result")
            ],
        },
    },
}


@dataclass
class Scene:
    version: int = 1
    objects: dict = field(default_factory=dict)
    provenance: list = field(default_factory=list)

    def add(self, name: str, obj) -> None:
        self.objects[name] = obj

    def record(self, op: str, **params) -> None:
        self.provenance.append({"op": op, "params": params})

    def get(self, name: str | None = None, types=None):
        """An object by name, or the single object (optionally of the given types)."""
        if name is not None:
            if name not in self.objects:
                raise InputError(f"no object named {name!r}; have {sorted(self.objects)}")
            return self.objects[name]
        pool = {k: v for k, v in self.objects.items() if types is None or isinstance(v, types)}
        if len(pool) != 1:
            raise InputError(f"scene has {len(pool)} candidate objects; name one with --object")
        return next(iter(pool.values()))


# ------------------------------------------------------------ encoding

def _num(x: float) -> float:
    y = float(f"{float(x):.9g}")
    return 0.0 if y == 0 else y


def normalize(obj):
    """Round floats to 9 significant digits, recursively; tuples become lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return _num(obj)
    if hasattr(obj, "item") and not isinstance(obj, (list, tuple, dict)):
        return normalize(obj.item())
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    return [normalize(v) for v in obj]


def dumps(obj) -> str:
    return json.dumps(normalize(obj), sort_keys=True, indent=1) + "\n"


def object_to_dict(obj) -> dict:
    if isinstance(obj, Curve1):
        return {"type": "curve", "labels": list(obj.labels), "cycles": [list(c) for c in obj.cycles],
                "coords": None if obj.coords is None else [list(p) for p in obj.coords]}
    if isinstance(obj, Arcs):
        return {"type": "arcs", "labels": list(obj.labels), "paths": [list(p) for p in obj.paths],
                "coords": None if obj.coords is None else [list(p) for p in obj.coords]}
    if isinstance(obj, Surface2):
        return {"type": "surface", "vertices": [list(p) for p in obj.vertices],
                "triangles": [list(t) for t in obj.triangles]}
    if isinstance(obj, LayeredBody):
        return {"type": "layered_body", "dimension": obj.dimension, "radii": list(obj.radii),
                "center": None if obj.center is None else list(obj.center),
                "layers": [object_to_dict(x) for x in obj.layers]}
    if isinstance(obj, LayeredTorus):
        return {"type": "layered_torus", "radii": list(obj.radii), "layers": [object_to_dict(x) for x in obj.layers],
                "core_circle": object_to_dict(obj.core_circle)}
    if isinstance(obj, LensSpaceDescriptor):
        return dict(obj.to_dict(), type="lens")
    if isinstance(obj, TruncatedScene3):
        arc = lambda a: {"name": a.name, "interval": list(a.interval), "contains_infinity": a.contains_infinity}
        return {"type": "truncated3d", "mode": obj.mode, "cork": arc(obj.cork), "outer_ball": arc(obj.outer_ball),
                "parallel_curve": obj.parallel_curve.to_dict(), "reassembles": obj.reassembles}
    if isinstance(obj, dict) and obj.get("type") == "solid_result":
        return dict(obj)
    raise InputError(f"cannot serialize object of type {type(obj).__name__}")


def object_from_dict(d: dict):
    kind = d["type"]
    if kind == "curve":
        return Curve1(d["labels"], d["cycles"], d.get("coords"))
    if kind == "arcs":
        return Arcs(d["labels"], d["paths"], d.get("coords"))
    if kind == "surface":
        n = len(d["vertices"])
        for tri in d["triangles"]:
            if any(v >= n for v in tri):
                raise InputError(f"triangle {tri} references a missing vertex")
        return Surface2(d["vertices"], d["triangles"])
    if kind == "layered_body":
        return LayeredBody(d["dimension"], [object_from_dict(x) for x in d["layers"]], d["radii"], d["center"])
    if kind == "layered_torus":
        return LayeredTorus([object_from_dict(x) for x in d["layers"]], object_from_dict(d["core_circle"]),
                            d["radii"])
    if kind == "lens":
        return rational_surgery_unknot(d["p"], d["q"])
    if kind == "truncated3d":
        arc = lambda a: ArcDescriptor(a["name"], tuple(a["interval"]), a["contains_infinity"])
        c = d["parallel_curve"]
        return TruncatedScene3(d["mode"], arc(d["cork"]), arc(d["outer_ball"]), TorusCurve(c["m"], c["l"], c["side"]))
    if kind == "solid_result":
        return dict(d)
    raise InputError(f"unknown object type {kind!r}")


def solid_result_entries(name: str, result: SolidResult) -> dict:
    """Scene objects for a solid result: one per piece plus a summary entry."""
    out = {f"{name}_piece{i}": p for i, p in enumerate(result.pieces)}
    out[name] = {"type": "solid_result", "kind": result.kind, "limit_stratum": result.limit_stratum,
                 "limit_points": [list(p) for p in result.limit_points], "pieces": sorted(out)}
    return out


def scene_to_dict(scene: Scene) -> dict:
    return {"version": scene.version,
            "objects": {k: object_to_dict(v) for k, v in scene.objects.items()},
            "provenance": list(scene.provenance)}


def _json_path(err: jsonschema.ValidationError) -> str:
    path = "$"
    for part in err.absolute_path:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def scene_from_dict(data) -> Scene:
    if not isinstance(data, dict):
        raise InputError("scene must be a JSON object")
    version = data.get("version")
    if version not in SUPPORTED_VERSIONS:
        raise InputError(f"unsupported scene version {version!r}; supported versions: {list(SUPPORTED_VERSIONS)}")
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = max(errors, key=lambda e: len(e.absolute_path))
        raise InputError(f"schema violation at {_json_path(err)}: {err.message}")
    objects = {k: object_from_dict(v) for k, v in data["objects"].items()}
    return Scene(version, objects, list(data["provenance"]))


def load_scene(path) -> Scene:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc.msg} at line {exc.lineno}") from exc
    return scene_from_dict(data)


def save_scene(scene: Scene, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(scene_to_dict(scene)))


# ----------------------------------------------------------------- OBJ

def _v(p) -> str:
    return "v " + " ".join(f"{_num(x):.9g}" for x in p)


def to_obj(geometry, curve=None) -> str:
    """OBJ text, 1-indexed. Surfaces give triangles; curves give closed ``l`` lines."""
    lines = []
    if isinstance(geometry, Surface2):
        lines += [_v(p) for p in geometry.vertices]
        lines += ["f " + " ".join(str(v + 1) for v in t) for t in geometry.triangles]
        base = geometry.n_vertices
    elif isinstance(geometry, Curve1):
        coords = geometry.coords or [(0.0, 0.0, 0.0)] * geometry.n_vertices
        lines += [_v(p) for p in coords]
        lines += ["l " + " ".join(str(v + 1) for v in list(c) + [c[0]]) for c in geometry.cycles]
        base = geometry.n_vertices
    else:
        raise InputError(f"cannot export {type(geometry).__name__} to OBJ")
    if curve:
        lines += [_v(p) for p in curve]
        lines.append("l " + " ".join(str(base + i + 1) for i in range(len(curve))))
    return "\n".join(lines) + "\n"


def write_frames(fs, out_dir) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    names = []
    for i, f in enumerate(fs.frames):
        name = f"frame_{i:04d}.obj"
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            fh.write(to_obj(f.geometry, f.curve))
        names.append(name)
    meta = {"times": fs.times, "singular_index": fs.singular_index, "phase": fs.phases,
            "files": names, "meta": fs.meta}
    with open(os.path.join(out_dir, "sequence.json"), "w", encoding="utf-8") as fh:
        fh.write(dumps(meta))
    return names
