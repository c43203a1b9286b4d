"""Command line front end.

Subcommands
    validate   check a portrait and print its canonical JSON
    preroot    invariant leaf approximation before any tuning
    root       full root construction with certificates
    gaps       face census of the root lamination
    tiles      forward-invariant tile tree of a portrait
    render     SVG picture of the root lamination
    atlas      all bounded portraits of a degree with legality classes

A portrait is given inline as chord arguments ("1/3-5/6", one per
critical chord), as a JSON file through --portrait, or on stdin with
--portrait -.  A JSON config file can predefine any option; explicit
flags win over the file.  Every failure prints one diagnostic JSON
object and exits 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields, replace
from typing import Optional, Sequence, Tuple

from .circle import parse_chord
from .errors import DepthExhausted, LaminationError
from .gaps import classify_gap, detect_capture, extract_gaps, kiwi_guard
from .piles import preroot_qlamination
from .portrait import CriticalPortrait, build_plus
from .render import RenderOptions, render_lamination, render_report, render_tiles
from .roots import atlas, build_root
from .serialize import (
    atlas_to_csv,
    atlas_to_obj,
    dumps_canonical,
    error_obj,
    gap_census_obj,
    lamination_to_obj,
    obj_to_portrait,
    partition_to_obj,
    portrait_to_obj,
    report_to_obj,
    tiles_to_obj,
)
from .tiles import tiles as tile_tree

__all__ = ["RunConfig", "main"]


@dataclass
class RunConfig:
    """One resolved invocation: what to build and where to put it."""

    degree: Optional[int] = None  # None: from the portrait source
    chords: Tuple[str, ...] = ()
    portrait_file: Optional[str] = None
    depth: int = 6
    resolution: Optional[int] = None
    max_denominator: int = 12
    tile_generations: int = 2
    out: Optional[str] = None
    svg: Optional[str] = None
    csv: Optional[str] = None
    size: int = 600
    stroke: float = 1.5
    geodesics: bool = True
    jobs: int = 1

    def validate(self) -> None:
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")
        if self.degree is not None and self.degree < 2:
            raise ValueError(f"degree must be >= 2, got {self.degree}")
        d = self.degree if self.degree is not None else 2
        if self.resolution is not None and self.resolution < d:
            raise ValueError(
                f"resolution must be >= the degree, got {self.resolution} < {d}"
            )
        if self.max_denominator < d:
            raise ValueError(
                f"max denominator must be >= the degree, got {self.max_denominator}"
            )
        if self.tile_generations < 0:
            raise ValueError("tile generations must be >= 0")
        if self.size <= 0 or self.stroke <= 0:
            raise ValueError("render size and stroke must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    @property
    def render_options(self) -> RenderOptions:
        return RenderOptions(
            size=self.size, stroke=self.stroke, geodesics=self.geodesics
        )


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _fail(obj: dict) -> int:
    sys.stdout.write(dumps_canonical(obj))
    return 1


def _load_portrait(cfg: RunConfig) -> CriticalPortrait:
    """Portrait from file, stdin, or inline chords; always revalidated."""
    if cfg.portrait_file is not None:
        if cfg.portrait_file == "-":
            obj = json.load(sys.stdin)
        else:
            with open(cfg.portrait_file, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
        if cfg.degree is not None and int(obj["degree"]) != cfg.degree:
            raise ValueError(
                f"--degree {cfg.degree} contradicts the portrait file "
                f"degree {obj['degree']}"
            )
        return obj_to_portrait(obj)
    if not cfg.chords:
        raise ValueError("no portrait: pass chords inline or use --portrait")
    chords = []
    for s in cfg.chords:
        try:
            chords.append(parse_chord(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad chord {s!r}: {exc}") from exc
    degree = cfg.degree if cfg.degree is not None else len(chords) + 1
    return build_plus(chords, degree)


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(cfg: RunConfig) -> int:
    portrait = _load_portrait(cfg)
    _emit(dumps_canonical(portrait_to_obj(portrait)), cfg.out)
    return 0


def cmd_preroot(cfg: RunConfig) -> int:
    portrait = _load_portrait(cfg)
    lam, part = preroot_qlamination(portrait, cfg.depth, cfg.resolution)
    payload = {
        "portrait": portrait_to_obj(portrait),
        "lamination": lamination_to_obj(lam),
        "partition": partition_to_obj(part),
    }
    _emit(dumps_canonical(payload), cfg.out)
    if cfg.svg:
        _emit(render_lamination(lam, portrait, cfg.render_options), cfg.svg)
    return 0


def cmd_root(cfg: RunConfig) -> int:
    portrait = _load_portrait(cfg)
    rep = build_root(
        portrait, cfg.depth, cfg.resolution, tile_generations=0
    )
    _emit(dumps_canonical(report_to_obj(rep)), cfg.out)
    if cfg.svg:
        _emit(render_report(rep, cfg.render_options), cfg.svg)
    return 0


def cmd_gaps(cfg: RunConfig) -> int:
    portrait = _load_portrait(cfg)
    rep = build_root(
        portrait, cfg.depth, cfg.resolution, tile_generations=0
    )
    lam = rep.lamination
    gaps = extract_gaps(lam)
    cycles = [(cyc, classify_gap(cyc, lam.degree)) for cyc in rep.cycles]
    payload = gap_census_obj(
        lam,
        gaps,
        cycles,
        detect_capture(lam, gaps),
        kiwi_guard(lam, gaps),
    )
    _emit(dumps_canonical(payload), cfg.out)
    return 0


def cmd_tiles(cfg: RunConfig) -> int:
    portrait = _load_portrait(cfg)
    tls = tile_tree(portrait, cfg.tile_generations)
    payload = {
        "portrait": portrait_to_obj(portrait),
        "generations": cfg.tile_generations,
        "tiles": tiles_to_obj(tls),
    }
    _emit(dumps_canonical(payload), cfg.out)
    if cfg.svg:
        _emit(render_tiles(portrait, tls, cfg.render_options), cfg.svg)
    return 0


def cmd_render(cfg: RunConfig) -> int:
    portrait = _load_portrait(cfg)
    rep = build_root(
        portrait, cfg.depth, cfg.resolution, tile_generations=0
    )
    _emit(render_report(rep, cfg.render_options), cfg.svg or cfg.out)
    return 0


def cmd_atlas(cfg: RunConfig) -> int:
    degree = cfg.degree if cfg.degree is not None else 2
    result = atlas(
        max_den=cfg.max_denominator,
        depth=cfg.depth,
        degree=degree,
        jobs=cfg.jobs,
    )
    _emit(dumps_canonical(atlas_to_obj(result)), cfg.out)
    if cfg.csv:
        _emit(atlas_to_csv(result), cfg.csv)
    return 0


_COMMANDS = {
    "validate": cmd_validate,
    "preroot": cmd_preroot,
    "root": cmd_root,
    "gaps": cmd_gaps,
    "tiles": cmd_tiles,
    "render": cmd_render,
    "atlas": cmd_atlas,
}


# ---------------------------------------------------------------------------
# argument handling


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with option defaults")
    common.add_argument("--degree", type=int, default=None)
    common.add_argument(
        "--depth", type=int, default=None,
        help="pullback depth (tiles: generation count)",
    )
    common.add_argument(
        "--resolution", type=int, default=None,
        help="keep only leaves with denominator <= N in the output",
    )
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--svg", default=None, help="also write an SVG here")
    common.add_argument(
        "--portrait", dest="portrait_file", default=None,
        help="portrait JSON file, or - for stdin",
    )
    common.add_argument("--size", type=int, default=None, help="SVG pixel size")
    common.add_argument(
        "--stroke", type=float, default=None, help="SVG stroke width in pixels"
    )
    common.add_argument(
        "--straight", dest="geodesics", action="store_const", const=False,
        default=None, help="draw chords as straight segments",
    )

    ap = argparse.ArgumentParser(
        prog="rootlam",
        description="invariant laminations from critical portraits",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("validate", "check a portrait and print it canonically"),
        ("preroot", "invariant leaf approximation before tuning"),
        ("root", "root lamination with certificates"),
        ("gaps", "face census of the root lamination"),
        ("tiles", "forward-invariant tile tree"),
        ("render", "SVG of the root lamination"),
        ("atlas", "all bounded portraits of a degree"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if name == "atlas":
            sp.add_argument(
                "--max-denominator", dest="max_denominator", type=int,
                default=None,
            )
            sp.add_argument("--csv", default=None, help="also write a CSV here")
            sp.add_argument(
                "--jobs", type=int, default=None,
                help="parallel portrait builds",
            )
        else:
            sp.add_argument(
                "chords", nargs="*",
                help="critical chords like 1/3-5/6 (one per chord)",
            )
    return ap


def _resolve_config(ns: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    cfg = RunConfig()
    if ns.config:
        with open(ns.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        names = {f.name for f in fields(RunConfig)}
        bad = set(data) - names
        if bad:
            raise ValueError(f"unknown config keys: {sorted(bad)}")
        if "chords" in data:
            data["chords"] = tuple(data["chords"])
        cfg = replace(cfg, **data)
    overrides = {}
    for f in fields(RunConfig):
        value = getattr(ns, f.name, None)
        if value is not None and value != ():
            overrides[f.name] = value
    if "chords" in overrides:
        overrides["chords"] = tuple(overrides["chords"])
    cfg = replace(cfg, **overrides)
    # the tiles command reads its generation count from --depth
    if ns.command == "tiles" and getattr(ns, "depth", None) is not None:
        cfg = replace(cfg, tile_generations=ns.depth)
    cfg.validate()
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = _build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(ns)
    except (ValueError, OSError) as exc:
        return _fail({"error": "ConfigError", "message": str(exc)})
    try:
        return _COMMANDS[ns.command](cfg)
    except DepthExhausted as exc:
        return _fail(error_obj(exc, suggested_depth=cfg.depth + 4))
    except LaminationError as exc:
        return _fail(error_obj(exc))
    except (ValueError, ZeroDivisionError) as exc:
        return _fail({"error": "ParseError", "message": str(exc)})
    except OSError as exc:
        return _fail({"error": "IOError", "message": str(exc)})


if __name__ == "__main__":
    sys.exit(main())
