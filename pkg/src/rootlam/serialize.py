"""Canonical JSON encoding for laminations, reports, and the atlas.

Byte determinism is the contract: keys are sorted, separators fixed,
angles written as lowest-terms "p/q" strings and chords as "p/q-r/s".
The obj_to_* parsers invert the encoders, so a dumped portrait or
lamination reloads equal to the original.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .circle import Chord, GapLeaf, format_angle, format_chord, parse_chord
from .gaps import Gap, GapCycle, GapClass, boundary_step_degree
from .piles import ClassPartition, LaminationApprox
from .portrait import CriticalPortrait, build_plus
from .roots import PortalCycle, RootReport

__all__ = [
    "dumps_canonical",
    "error_obj",
    "polygon_to_obj",
    "portrait_to_obj",
    "obj_to_portrait",
    "lamination_to_obj",
    "obj_to_lamination",
    "partition_to_obj",
    "gap_to_obj",
    "cycle_to_obj",
    "portal_cycle_to_obj",
    "tiles_to_obj",
    "report_to_obj",
    "gap_census_obj",
    "atlas_to_obj",
    "atlas_to_csv",
]


def dumps_canonical(obj) -> str:
    """JSON text with a byte-stable layout, newline-terminated."""
    return (
        json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        + "\n"
    )


def error_obj(exc: BaseException, **extra) -> dict:
    """The diagnostic shape every command emits on failure."""
    out = {"error": type(exc).__name__, "message": str(exc)}
    out.update(extra)
    return out


def _jsonable(v):
    """Recursive fallback for mixed structures such as tuning log entries."""
    if isinstance(v, Chord):
        return format_chord(v)
    if isinstance(v, GapLeaf):
        return polygon_to_obj(v)
    if isinstance(v, Fraction):
        return format_angle(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def polygon_to_obj(poly: GapLeaf) -> list:
    return [format_angle(v) for v in poly.vertices]


# ---------------------------------------------------------------------------
# portraits and laminations round-trip


def portrait_to_obj(p: CriticalPortrait) -> dict:
    return {
        "degree": p.degree,
        "chords": [format_chord(c) for c in p.chords],
        "sets": [
            {
                "polygon": polygon_to_obj(s.polygon),
                "image": format_angle(s.image),
                "periodic_vertex": (
                    None
                    if s.periodic_vertex is None
                    else format_angle(s.periodic_vertex)
                ),
            }
            for s in p.sets
        ],
    }


def obj_to_portrait(obj: dict) -> CriticalPortrait:
    """Rebuild and revalidate a portrait from its degree and chords.

    The sets and faces are derived data; they are recomputed rather
    than trusted from the file.
    """
    return build_plus([parse_chord(s) for s in obj["chords"]], int(obj["degree"]))


def lamination_to_obj(lam: LaminationApprox) -> dict:
    return {
        "degree": lam.degree,
        "depth": lam.depth,
        "resolution": lam.resolution,
        "leaves": [format_chord(c) for c in lam.leaves],
        "proper": lam.proper,
        "crossings_free": lam.crossings_free,
    }


def obj_to_lamination(obj: dict) -> LaminationApprox:
    return LaminationApprox(
        degree=int(obj["degree"]),
        depth=int(obj["depth"]),
        resolution=None if obj["resolution"] is None else int(obj["resolution"]),
        leaves=tuple(parse_chord(s) for s in obj["leaves"]),
        proper=bool(obj["proper"]),
        crossings_free=bool(obj["crossings_free"]),
    )


def partition_to_obj(part: ClassPartition) -> dict:
    return {
        "classes": [[format_angle(v) for v in cl] for cl in part.classes],
        "hulls": [polygon_to_obj(h) for h in part.hulls],
    }


# ---------------------------------------------------------------------------
# gaps, cycles, reports


def gap_to_obj(g: Gap, d: Optional[int] = None) -> dict:
    out = {
        "kind": g.kind,
        "vertices": [format_angle(v) for v in g.vertices],
        "edges": [format_chord(c) for c in g.edges],
    }
    if d is not None:
        out["map_degree"] = boundary_step_degree(g, d)
    return out


def cycle_to_obj(cyc: GapCycle, d: Optional[int] = None) -> dict:
    return {
        "period": cyc.period,
        "return_degree": cyc.return_degree,
        "step_degrees": list(cyc.step_degrees),
        "escapes": list(cyc.escapes),
        "gaps": [gap_to_obj(g, d) for g in cyc.gaps],
    }


def portal_cycle_to_obj(pc: PortalCycle) -> dict:
    return {
        "vertex_period": pc.vertex_period,
        "portals": [polygon_to_obj(s.polygon) for s in pc.portals],
    }


def tiles_to_obj(tls: Sequence[Tuple[GapLeaf, int]]) -> list:
    return [
        {"polygon": polygon_to_obj(t), "generation": gen} for t, gen in tls
    ]


def report_to_obj(rep: RootReport) -> dict:
    return {
        "portrait": portrait_to_obj(rep.portrait),
        "depth": rep.depth,
        "resolution": rep.resolution,
        "lamination": lamination_to_obj(rep.lamination),
        "partition": partition_to_obj(rep.partition),
        "preroot": lamination_to_obj(rep.preroot),
        "cycles": [cycle_to_obj(c, rep.portrait.degree) for c in rep.cycles],
        "portal_cycles": [portal_cycle_to_obj(pc) for pc in rep.portal_cycles],
        "certificates": [_jsonable(c) for c in rep.certificates],
        "tuning_log": [_jsonable(e) for e in rep.tuning_log],
        "tile_generations": rep.tile_generations,
        "tiles": tiles_to_obj(rep.tiles),
        "legal": rep.legal,
    }


def gap_census_obj(
    lam: LaminationApprox,
    gaps: Sequence[Gap],
    cycles: Sequence[Tuple[GapCycle, GapClass]],
    capture: bool,
    guard: dict,
) -> dict:
    """The gaps command payload: every face plus the classified cycles."""
    return {
        "degree": lam.degree,
        "depth": lam.depth,
        "leaves": len(lam.leaves),
        "gaps": [gap_to_obj(g, lam.degree) for g in gaps],
        "cycles": [
            {
                **cycle_to_obj(cyc, lam.degree),
                "label": cls.label,
                "satellite": cls.satellite,
                "inconclusive": cls.inconclusive,
            }
            for cyc, cls in cycles
        ],
        "capture": capture,
        "wandering_guard": _jsonable(guard),
    }


# ---------------------------------------------------------------------------
# atlas summaries


def atlas_to_obj(a: dict) -> dict:
    """The atlas payload without the heavyweight per-portrait reports."""
    return {
        "degree": a["degree"],
        "max_denominator": a["max_denominator"],
        "depth": a["depth"],
        "portraits": [[format_chord(c) for c in ch] for ch in a["portraits"]],
        "roots": list(a["roots"]),
        "laminations": [lamination_to_obj(l) for l in a["laminations"]],
        "classification": [_jsonable(row) for row in a["classification"]],
        "legal_pairs": [list(p) for p in a["legal_pairs"]],
        "classes": [[list(p) for p in cl] for cl in a["classes"]],
        "class_sizes": list(a["class_sizes"]),
    }


def atlas_to_csv(a: dict) -> str:
    """One row per portrait: chords, root index, and the classification."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["portrait", "root", "side", "portal_periods", "prime", "legal", "error"]
    )
    for row in a["classification"]:
        w.writerow(
            [
                " ".join(format_chord(c) for c in row["portrait"]),
                "" if row["root"] is None else row["root"],
                "" if row["side"] is None else row["side"],
                (
                    ""
                    if row["portal_periods"] is None
                    else " ".join(str(p) for p in row["portal_periods"])
                ),
                "" if row["prime"] is None else row["prime"],
                "" if row["legal"] is None else row["legal"],
                "" if row["error"] is None else row["error"]["error"],
            ]
        )
    return buf.getvalue()
