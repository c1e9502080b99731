"""commands.py

All command-line subcommand handling lives here.

Design rule:
- qd.py parses arguments into a CliConfig and calls run_command()
- every handler returns a process exit code; QDError escapes to qd.py,
  which maps it to its exit code
- machine-readable output goes to --out (file or directory) or stdout,
  logs go to stderr

Commands in this file:
- analyze <source>       -> domain summary, singularities, critical data
- render <source>        -> escape raster PPM + metadata JSON
- verify <source>|--all  -> theorem reports, exit 1 on any failed check
- trees                  -> exhaustive tree-inequality check
- group-maps <name>      -> sampled Nielsen / anti-Farey / Apollonian checks
- catalog [name]         -> list entries or export a domain spec
"""

from __future__ import annotations

import asyncio
import cmath
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Callable

import numpy as np

from catalog import (
    NIELSEN_GEODESICS,
    anti_farey,
    apollonian_R,
    apollonian_fixed_points,
    catalog,
    circle_winding,
    entry_domain,
    group_raster,
    ideal_triangle_boundary,
    lookup,
    nielsen,
    nielsen_circle_derivative,
    quadrature_entries,
)
from config import (
    ANALYSIS_MAX_ITER,
    BOUNDARY_SAMPLES,
    MAX_TREE_VERTICES,
    RENDER_MAX_ITER,
    RENDER_RES,
    SEED,
)
from core.dynamics import critical_orbits, image_of, render
from core.errors import InvalidInput
from core.quadrature import QuadratureDomain, build_domain, crit_sigma, domain_from_spec
from core.singularity import classify_singularities
from droplet_graph import check_all_trees
from theorems import verify, verify_many, view_bounds
from utils.helpers import Bounds
from utils.images import write_ppm
from utils.jsonio import dumps, point_to_json, read_json, write_json
from utils.logging import log

__all__ = [
    "CliConfig",
    "load_domain",
    "cmd_analyze",
    "cmd_render",
    "cmd_verify",
    "cmd_trees",
    "cmd_group_maps",
    "cmd_catalog",
    "run_command",
]


@dataclass(frozen=True)
class CliConfig:
    command: str
    source: str | None = None
    map_path: str | None = None
    catalog_name: str | None = None
    bounds: Bounds | None = None
    res: int = RENDER_RES
    max_iter: int | None = None
    tol: float | None = None
    out: str | None = None
    seed: int = SEED
    supersample: int = 1
    all: bool = False
    max_vertices: int = MAX_TREE_VERTICES
    samples: int = 256


# =========================
# Sources and output
# =========================

def _source_name(cfg: CliConfig) -> str | None:
    return cfg.map_path or cfg.catalog_name or cfg.source


def load_domain(cfg: CliConfig) -> QuadratureDomain:
    """Catalog name or domain-spec JSON path -> certified domain."""
    src = _source_name(cfg)
    if not src:
        raise InvalidInput(f"{cfg.command} needs a catalog name or a domain-spec JSON path")

    from_file = cfg.map_path is not None or (cfg.catalog_name is None and src.endswith(".json"))
    if from_file:
        Q = domain_from_spec(read_json(src))
        if cfg.tol is None and cfg.seed == SEED:
            return Q
        f, name, samples = Q.f, Q.name, Q.certificate.samples
    else:
        entry = lookup(src)
        if cfg.tol is None and cfg.seed == SEED:
            return entry_domain(entry.name)
        f, name, samples = entry_domain(entry.name).f, entry.name, BOUNDARY_SAMPLES

    kwargs: dict[str, Any] = {"name": name, "seed": cfg.seed}
    if cfg.tol is not None:
        kwargs["tol"] = cfg.tol
    return build_domain(f, samples, **kwargs)


def _default_bounds(cfg: CliConfig, Q: QuadratureDomain | None = None, name: str | None = None) -> Bounds:
    if cfg.bounds is not None:
        return cfg.bounds
    src = name or _source_name(cfg)
    if src and cfg.map_path is None and not src.endswith(".json"):
        return lookup(src).bounds
    if Q is not None:
        return view_bounds(Q)
    return Bounds(0j, 4.0, 4.0)


def _emit(cfg: CliConfig, payload: Any, stem: str) -> None:
    """JSON to --out (file, or directory/<stem>.json) or stdout."""
    if not cfg.out:
        print(dumps(payload), end="")
        return
    out = Path(cfg.out)
    path = out if out.suffix == ".json" else out / f"{stem}.json"
    write_json(path, payload)
    log(f"[CLI] wrote {path}")


def _image_paths(cfg: CliConfig, stem: str) -> tuple[Path, Path]:
    out = Path(cfg.out or ".")
    if out.suffix == ".ppm":
        return out, out.with_suffix(".json")
    return out / f"{stem}.ppm", out / f"{stem}.json"


def _stem(Q: QuadratureDomain) -> str:
    return (Q.name or "map").replace("(", "-").replace(")", "").replace(" ", "")


# =========================
# analyze
# =========================

def cmd_analyze(cfg: CliConfig) -> int:
    Q = load_domain(cfg)
    max_iter = cfg.max_iter or ANALYSIS_MAX_ITER
    sings = classify_singularities(Q)
    payload = {
        "domain": Q.to_json(),
        "map": Q.f.to_json(),
        "singularities": [s.to_json() for s in sings],
        "crit_f": [{"z": point_to_json(r.location), "multiplicity": r.multiplicity} for r in Q.crit_f],
        "crit_sigma": [{"z": point_to_json(r.location), "multiplicity": r.multiplicity} for r in crit_sigma(Q)],
        "critical_orbits": [o.to_json() for o in critical_orbits(Q, max_iter, sings)],
    }
    _emit(cfg, payload, f"{_stem(Q)}-analysis")
    return 0


# =========================
# render
# =========================

def cmd_render(cfg: CliConfig) -> int:
    Q = load_domain(cfg)
    bounds = _default_bounds(cfg, Q)
    raster = render(Q, bounds, cfg.res, cfg.max_iter or RENDER_MAX_ITER, cfg.supersample)
    ppm, meta = _image_paths(cfg, _stem(Q))
    write_ppm(ppm, image_of(raster))
    write_json(meta, raster.metadata())
    log(f"[CLI] wrote {ppm} and {meta}")
    return 0


# =========================
# verify
# =========================

def cmd_verify(cfg: CliConfig) -> int:
    kwargs: dict[str, Any] = {}
    if cfg.max_iter:
        kwargs["max_iter"] = cfg.max_iter
    if cfg.all:
        # load_domain applies --tol and --seed per entry
        domains = [
            load_domain(replace(cfg, catalog_name=e.name, map_path=None, source=None))
            for e in quadrature_entries()
        ]
        reports = asyncio.run(verify_many(domains, **kwargs))
        payload: Any = [r.to_json() for r in reports]
        stem = "verify-all"
    else:
        Q = load_domain(cfg)
        reports = [verify(Q, **kwargs)]
        payload = reports[0].to_json()
        stem = f"{_stem(Q)}-verify"
    _emit(cfg, payload, stem)
    failed = [r.name for r in reports if not r.all_pass]
    if failed:
        log(f"[CLI] verification failed for: {', '.join(failed)}")
        return 1
    return 0


# =========================
# trees
# =========================

def cmd_trees(cfg: CliConfig) -> int:
    summary = check_all_trees(cfg.max_vertices)
    _emit(cfg, summary.to_json(), f"trees-{cfg.max_vertices}")
    return 0 if summary.ok else 1


# =========================
# group-maps
# =========================

def _circle_points(k: int) -> np.ndarray:
    # offset keeps samples off the triangle vertices
    return np.exp(2j * np.pi * (np.arange(k) + 0.5) / k)


def _max_error(fn: Callable[[complex], complex], points: np.ndarray) -> float:
    return float(max(abs(fn(complex(z)) - complex(z)) for z in points))


def _nielsen_report(k: int) -> dict:
    rng = np.random.default_rng(SEED)
    disk = np.sqrt(rng.uniform(0, 1, k)) * np.exp(2j * np.pi * rng.uniform(0, 1, k))
    involution = max(
        abs(g.reflect(g.reflect(complex(z))) - complex(z)) for g in NIELSEN_GEODESICS for z in disk
    )
    theta = 2 * np.pi * (np.arange(k) + 0.5) / k
    return {
        "geodesics": [{"center": point_to_json(g.center), "radius": g.radius} for g in NIELSEN_GEODESICS],
        "winding": circle_winding(nielsen, max(k, 64)),
        "involution_error": involution,
        "boundary_fixed_error": _max_error(nielsen, ideal_triangle_boundary(k)),
        "min_circle_derivative": float(min(nielsen_circle_derivative(t) for t in theta)),
        "samples": k,
    }


def _anti_farey_report(k: int) -> dict:
    circle = _circle_points(k)
    semiconj = max(abs(nielsen(complex(w)) ** 3 - anti_farey(complex(w) ** 3)) for w in circle)
    boundary = ideal_triangle_boundary(k) ** 3
    branches = max(
        abs(nielsen(complex(w) * cmath.exp(2j * math.pi * j / 3)) ** 3 - nielsen(complex(w)) ** 3)
        for w in circle
        for j in range(3)
    )
    return {
        "winding": circle_winding(anti_farey, max(k, 64)),
        "semiconjugacy_error": float(semiconj),
        "branch_agreement_error": float(branches),
        "boundary_fixed_error": _max_error(anti_farey, boundary),
        "samples": int(circle.size),
    }


def _apollonian_report(k: int) -> dict:
    rng = np.random.default_rng(SEED)
    pts = rng.uniform(-1.5, 1.5, k) + 1j * rng.uniform(-1.5, 1.5, k)
    omega = cmath.exp(2j * math.pi / 3)
    equivariance = max(abs(apollonian_R(omega * z) - omega * apollonian_R(z)) for z in pts)
    fixed = apollonian_fixed_points()
    counts: dict[str, int] = {}
    for p in fixed:
        counts[p.classification] = counts.get(p.classification, 0) + 1
    return {
        "fixed_points": [p.to_json() for p in fixed],
        "classification_counts": counts,
        "equivariance_error": float(equivariance),
        "samples": int(k),
    }


_GROUP_REPORTS: dict[str, Callable[[int], dict]] = {
    "nielsen": _nielsen_report,
    "anti-farey": _anti_farey_report,
    "apollonian": _apollonian_report,
}


def cmd_group_maps(cfg: CliConfig) -> int:
    name = lookup(cfg.source or cfg.catalog_name or "").name
    if name not in _GROUP_REPORTS:
        raise InvalidInput(f"group-maps takes nielsen, anti-farey or apollonian, got {name!r}")
    if cfg.samples < 1:
        raise InvalidInput(f"--samples must be positive, got {cfg.samples}")
    payload = {"name": name, **_GROUP_REPORTS[name](cfg.samples)}
    if cfg.out:
        raster = group_raster(name, _default_bounds(cfg, name=name), cfg.res, cfg.max_iter or RENDER_MAX_ITER)
        ppm, meta = _image_paths(cfg, name)
        write_ppm(ppm, raster.rgb())
        payload["raster"] = raster.metadata()
        write_json(meta, payload)
        log(f"[CLI] wrote {ppm} and {meta}")
    else:
        _emit(cfg, payload, name)
    return 0


# =========================
# catalog
# =========================

def cmd_catalog(cfg: CliConfig) -> int:
    name = cfg.catalog_name or cfg.source
    if name:
        entry = lookup(name)
        _emit(cfg, entry.to_json(), entry.name)
        return 0
    listing = [
        {"name": e.name, "kind": e.kind.value, "degree": e.degree, "description": e.description}
        for e in catalog()
    ]
    _emit(cfg, listing, "catalog")
    return 0


# =========================
# Dispatch
# =========================

COMMANDS: dict[str, Callable[[CliConfig], int]] = {
    "analyze": cmd_analyze,
    "render": cmd_render,
    "verify": cmd_verify,
    "trees": cmd_trees,
    "group-maps": cmd_group_maps,
    "catalog": cmd_catalog,
}


def run_command(cfg: CliConfig) -> int:
    handler = COMMANDS.get(cfg.command)
    if handler is None:
        raise InvalidInput(f"unknown command {cfg.command!r}")
    return handler(cfg)
