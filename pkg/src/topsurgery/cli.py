"""Command-line front end.

Exit codes: 0 success, 1 input error (including usage errors), 2 geometry
error, 3 resource error. Results go to stdout (or --out files) as JSON,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys

from . import dynamics, manifold
from .errors import InputError, SurgeryError
from .invariants import invariant_report
from .manifold import Arcs, Curve1, LayeredBody, Surface2
from .scene import Scene, dumps, load_scene, save_scene, scene_to_dict, solid_result_entries, write_frames
from .solid import CentralDisc, solid_1d, solid_2d_attract, solid_2d_repel
from .surgery1d import PolePair1, attract_1d, repel_1d, truncated_1d
from .surgery2d import (
    AnnulusSpec,
    PolePair2,
    Region,
    SurgerySpec2D,
    attract_2d,
    central_annulus,
    repel_2d,
    truncated_2d,
)
from .surgery3d import (
    TorusCurve,
    lens_homeomorphic,
    rational_surgery_unknot,
    standard_splitting,
    truncate,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers a,b, got {text!r}")
    return a, b


def _cycles(text: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    try:
        first, second = text.split(",")
        return tuple(int(v) for v in first.split("-")), tuple(int(v) for v in second.split("-"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two dash-separated cycles c1,c2, got {text!r}")


def _emit(report, scene: Scene | None, out: str | None) -> None:
    if scene is not None and out:
        save_scene(scene, out)
        sys.stdout.write(dumps(report))
    elif scene is not None:
        sys.stdout.write(dumps({"report": report, "scene": scene_to_dict(scene)}))
    else:
        sys.stdout.write(dumps(report))


def _input_scene(args, default_name: str, default_obj) -> tuple[Scene, str]:
    if args.input:
        scene = load_scene(args.input)
        if args.object:
            return scene, args.object
        if len(scene.objects) != 1:
            raise InputError("scene has several objects; name one with --object")
        return scene, next(iter(scene.objects))
    scene = Scene()
    scene.add(default_name, default_obj())
    scene.record("make", kind=default_name)
    return scene, default_name


# ------------------------------------------------------------ commands

MAKERS = {
    "octahedron": lambda a: manifold.octahedron(),
    "sphere": lambda a: manifold.make_sphere(a.level),
    "torus": lambda a: manifold.make_torus(),
    "polygon": lambda a: manifold.make_polygon(a.n),
    "disc": lambda a: manifold.make_disc(a.n),
    "layered-disc": lambda a: manifold.make_layered_ball(2, a.layers),
    "layered-ball": lambda a: manifold.make_layered_ball(3, a.layers, a.level),
}


def cmd_make(args) -> int:
    obj = MAKERS[args.kind](args)
    scene = Scene()
    name = args.name or args.kind.replace("-", "_")
    scene.add(name, obj)
    params = {"kind": args.kind}
    if args.kind in ("sphere", "layered-ball"):
        params["level"] = args.level
    if args.kind in ("polygon", "disc"):
        params["n"] = args.n
    if args.kind.startswith("layered"):
        params["layers"] = args.layers
    scene.record("make", **params)
    if args.out:
        save_scene(scene, args.out)
    else:
        sys.stdout.write(dumps(scene_to_dict(scene)))
    return 0


def _report_one(obj, allow_boundary: bool):
    from .manifold import validate_arcs, validate_curve, validate_layered_body, validate_surface

    if isinstance(obj, Curve1):
        return validate_curve(obj)
    if isinstance(obj, Arcs):
        return validate_arcs(obj)
    if isinstance(obj, Surface2):
        return validate_surface(obj, allow_boundary)
    if isinstance(obj, LayeredBody):
        return validate_layered_body(obj)
    return None


def cmd_validate(args) -> int:
    scene = load_scene(args.input)
    names = [args.object] if args.object else sorted(scene.objects)
    out, ok = {}, True
    for name in names:
        rep = _report_one(scene.get(name), args.allow_boundary)
        if rep is None:
            continue
        out[name] = rep.to_dict()
        ok = ok and rep.valid
    sys.stdout.write(dumps(out))
    if not ok:
        sys.stderr.write("validation failed\n")
        return 1
    return 0


def _invariants_of(obj, allow_boundary):
    if isinstance(obj, (Curve1, Surface2)):
        return invariant_report(obj, allow_boundary)
    if isinstance(obj, LayeredBody) or hasattr(obj, "core_circle"):
        return {"layers": [invariant_report(x) for x in obj.layers]}
    if hasattr(obj, "h1") and hasattr(obj, "p"):
        return obj.to_dict()
    return None


def cmd_invariants(args) -> int:
    scene = load_scene(args.input)
    names = [args.object] if args.object else sorted(scene.objects)
    out = {}
    for name in names:
        rep = _invariants_of(scene.get(name), args.allow_boundary)
        if rep is not None:
            out[name] = rep
    if not out:
        raise InputError("no object with invariants in the scene")
    sys.stdout.write(dumps(next(iter(out.values())) if len(out) == 1 else out))
    return 0


def cmd_surgery1d(args) -> int:
    if args.truncated:
        default = lambda: Arcs(list(range(10)), [tuple(range(5)), tuple(range(5, 10))],
                               [(x - 2.0, 1.0, 0.0) for x in range(5)] + [(x - 2.0, -1.0, 0.0) for x in range(5)])
    else:
        default = lambda: manifold.make_polygon(12)
    scene, name = _input_scene(args, "arcs" if args.truncated else "polygon", default)
    obj = scene.get(name)
    a, b = args.poles
    poles = PolePair1(a, b, args.size)
    if args.truncated:
        rec = args.rec or "cross"
        result = truncated_1d(obj, poles, rec)
        report = {"paths": len(result.paths), "endpoints": [list(e) for e in result.endpoint_labels()]}
    else:
        rec = args.rec or "split"
        op = attract_1d if args.mode == "attract" else repel_1d
        result = op(obj, poles, rec)
        report = invariant_report(result)
    scene.add("result", result)
    scene.record("surgery1d", mode=args.mode, poles=[a, b], size=args.size, rec=rec,
                 truncated=args.truncated, object=name)
    _emit(report, scene, args.out)
    return 0


def cmd_surgery2d(args) -> int:
    scene, name = _input_scene(args, "sphere", lambda: manifold.make_sphere(2))
    s = scene.get(name)
    params = {"mode": args.mode, "twists": args.twists, "truncated": args.truncated, "object": name}
    if args.mode == "attract":
        if args.poles is None:
            raise InputError("attracting surgery needs --poles a,b")
        a, b = args.poles
        region = Region.TRUNCATED if args.truncated else Region.FULL
        result = attract_2d(s, PolePair2(a, b, args.depth), SurgerySpec2D(args.twists, region),
                            refine_overlap=args.refine)
        params.update(poles=[a, b], depth=args.depth, refine=args.refine)
    else:
        if args.truncated:
            cycles = None if args.annulus is None else AnnulusSpec(*args.annulus, twists=args.twists)
            result = truncated_2d("repel", s, args.twists, cycles)
        else:
            if args.annulus is not None:
                annulus = AnnulusSpec(*args.annulus, twists=args.twists, inside=args.inside)
            elif args.poles is not None:
                annulus = central_annulus(s, *args.poles, half_width=args.half_width, twists=args.twists)
            else:
                raise InputError("repelling surgery needs --annulus c1,c2 or --poles a,b")
            result = repel_2d(s, annulus)
            params["annulus"] = [list(annulus.cycle_a), list(annulus.cycle_b)]
    scene.add("result", result)
    scene.record("surgery2d", **params)
    _emit(invariant_report(result, allow_boundary=args.truncated), scene, args.out)
    return 0


def cmd_solidsurgery(args) -> int:
    dim = args.dim + 1
    if args.input:
        scene = load_scene(args.input)
        body = scene.get(args.object, LayeredBody)
    else:
        scene = Scene()
        body = manifold.make_layered_ball(dim, args.layers)
        scene.add("body", body)
        scene.record("make", kind="layered-disc" if dim == 2 else "layered-ball", layers=args.layers)
    if body.dimension != dim:
        raise InputError(f"--dim {args.dim} needs a layered body of dimension {dim}")
    if args.dim == 1:
        result = solid_1d(body, mode=args.mode, depth=args.depth)
    elif args.mode == "attract":
        result = solid_2d_attract(body, spec=SurgerySpec2D(args.twists), depth=args.depth)
    else:
        result = solid_2d_repel(body, CentralDisc(), SurgerySpec2D(args.twists))
    for key, obj in solid_result_entries("result", result).items():
        scene.add(key, obj)
    scene.record("solidsurgery", dim=args.dim, mode=args.mode, layers=body.layer_count, twists=args.twists)
    report = {
        "kind": result.kind,
        "limit_stratum": result.limit_stratum,
        "pieces": [{"layers": [invariant_report(x) for x in p.layers]} for p in result.pieces],
    }
    _emit(report, scene, args.out)
    return 0


def cmd_surgery3d(args) -> int:
    lens = rational_surgery_unknot(args.p, args.q)
    out = lens.to_dict()
    if args.classify is not None:
        other = rational_surgery_unknot(*args.classify)
        out["classify"] = {"p": other.p, "q": other.q, "homeomorphic": lens_homeomorphic(lens, other)}
    if args.truncate:
        from .scene import object_to_dict

        curve = TorusCurve(args.p, args.q) if (args.p, args.q) != (0, 1) else TorusCurve(0, 1)
        out["truncated"] = object_to_dict(truncate(standard_splitting(), curve, args.mode))
    sys.stdout.write(dumps(out))
    return 0


def cmd_frames(args) -> int:
    kind, _, mode = args.op.partition(":")
    if kind == "1d":
        scene, name = _input_scene(args, "polygon", lambda: manifold.make_polygon(12))
        a, b = args.poles or (0, 6)
        fs = dynamics.frames_1d(scene.get(name), PolePair1(a, b, args.depth), mode or "attract",
                                args.rec or "split", args.count)
    elif kind == "2d":
        scene, name = _input_scene(args, "sphere", lambda: manifold.make_sphere(2))
        s = scene.get(name)
        if args.poles:
            poles = PolePair2(*args.poles, args.depth)
        else:
            from .surgery2d import far_pole_pair

            poles = far_pole_pair(s, args.depth)
        fs = dynamics.frames_2d(s, poles, SurgerySpec2D(args.twists), mode or "attract", args.count)
    elif kind == "3d":
        scene_3 = truncate(standard_splitting(), TorusCurve(args.p, 1))
        fs = dynamics.frames_truncated_3d(scene_3, args.count)
    else:
        raise InputError(f"unknown frame operation {args.op!r}; use 1d:attract, 1d:repel, "
                         "2d:attract, 2d:repel or 3d:truncated")
    write_frames(fs, args.out)
    summary = {"frames": len(fs.frames), "singular_index": fs.singular_index, "invalid": fs.invalid_frames(),
               "final": invariant_report(fs.frames[-1].geometry)}
    if kind == "2d" and args.section:
        import os

        cs = dynamics.cross_section(fs)
        write_frames(cs, os.path.join(args.out, "section"))
        summary["section_components"] = [len(f.geometry.cycles) for f in cs.frames]
    sys.stdout.write(dumps(summary))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="topsurgery", description="Attracting and repelling surgery on curves, surfaces and solids.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    m = sub.add_parser("make", help="build a fixture object")
    m.add_argument("--kind", choices=sorted(MAKERS), required=True)
    m.add_argument("--level", type=int, default=2)
    m.add_argument("--n", type=int, default=12)
    m.add_argument("--layers", type=int, default=manifold.DEFAULT_LAYERS)
    m.add_argument("--name")
    m.add_argument("--out")
    m.set_defaults(func=cmd_make)

    for cmd, fn in (("validate", cmd_validate), ("invariants", cmd_invariants)):
        v = sub.add_parser(cmd)
        v.add_argument("--input", required=True)
        v.add_argument("--object")
        v.add_argument("--allow-boundary", action="store_true")
        v.set_defaults(func=fn)

    s1 = sub.add_parser("surgery1d", help="1-d surgery on a curve (or two arcs with --truncated)")
    s1.add_argument("--input")
    s1.add_argument("--object")
    s1.add_argument("--mode", choices=["attract", "repel"], default="attract")
    s1.add_argument("--poles", type=_pair, required=True)
    s1.add_argument("--size", type=int, default=1, help="pole neighbourhood half-width")
    s1.add_argument("--rec", choices=["split", "cross"])
    s1.add_argument("--truncated", action="store_true")
    s1.add_argument("--out")
    s1.set_defaults(func=cmd_surgery1d)

    s2 = sub.add_parser("surgery2d", help="2-d surgery on a closed surface")
    s2.add_argument("--input")
    s2.add_argument("--object")
    s2.add_argument("--mode", choices=["attract", "repel"], default="attract")
    s2.add_argument("--poles", type=_pair)
    s2.add_argument("--annulus", type=_cycles, help="two cycles as dash-separated vertex lists: 1-2-3,7-8-9")
    s2.add_argument("--inside", type=int, help="a vertex inside the annulus")
    s2.add_argument("--twists", type=int, default=0)
    s2.add_argument("--depth", type=int, default=1)
    s2.add_argument("--half-width", type=int, default=1)
    s2.add_argument("--refine", action="store_true", help="subdivide when pole discs overlap")
    s2.add_argument("--truncated", action="store_true")
    s2.add_argument("--out")
    s2.set_defaults(func=cmd_surgery2d)

    so = sub.add_parser("solidsurgery", help="shell-wise surgery on a layered disc or ball")
    so.add_argument("--input")
    so.add_argument("--object")
    so.add_argument("--dim", type=int, choices=[1, 2], required=True)
    so.add_argument("--mode", choices=["attract", "repel"], default="attract")
    so.add_argument("--layers", type=int, default=2)
    so.add_argument("--twists", type=int, default=0)
    so.add_argument("--depth", type=int, default=1)
    so.add_argument("--out")
    so.set_defaults(func=cmd_solidsurgery)

    s3 = sub.add_parser("surgery3d", help="p/q surgery on the unknot")
    s3.add_argument("--p", type=int, required=True)
    s3.add_argument("--q", type=int, required=True)
    s3.add_argument("--classify", type=_pair, metavar="P2,Q2")
    s3.add_argument("--truncate", action="store_true")
    s3.add_argument("--mode", choices=["attract", "repel"], default="attract")
    s3.set_defaults(func=cmd_surgery3d)

    fr = sub.add_parser("frames", help="export a frame sequence as OBJ files")
    fr.add_argument("--op", required=True, help="1d:attract | 1d:repel | 2d:attract | 2d:repel | 3d:truncated")
    fr.add_argument("--count", type=int, default=9)
    fr.add_argument("--out", required=True)
    fr.add_argument("--input")
    fr.add_argument("--object")
    fr.add_argument("--poles", type=_pair)
    fr.add_argument("--depth", type=int, default=1)
    fr.add_argument("--twists", type=int, default=0)
    fr.add_argument("--rec", choices=["split", "cross"])
    fr.add_argument("--p", type=int, default=2)
    fr.add_argument("--section", action="store_true", help="also export the pole-plane cross-section")
    fr.set_defaults(func=cmd_frames)
    return p


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SurgeryError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
