"""theorems.py

Per-domain verification reports.

Features:
- classify_crit_sets(): tags every critical point of f as C (cusp
  preimage), P (pole of f), T (value escapes to the droplet), S (orbit
  converges to a boundary singularity) or unresolved
- verify(): singularities, raster connectivity, droplet tree, critical
  orbits and the three bounds on conn + #D + Delta and #C + 2#D + 3 Delta
- verify_many(): several domains concurrently (asyncio.to_thread under a
  semaphore), reports in input order

Theorem checks apply only when d_f >= 3; below that the counts are still
reported and the pass flags are None.
"""

from __future__ import annotations

import asyncio
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from config import ANALYSIS_MAX_ITER, VERIFY_RES, VERIFY_WORKERS
from core.boundary import sample_boundary
from core.dynamics import (
    ComponentCounts,
    OutcomeKind,
    classify,
    count_escape_components,
    critical_orbits,
    render,
)
from core.errors import NotATree
from core.quadrature import QuadratureDomain
from core.rational import INF, Point, is_inf
from core.singularity import Singularity, SingularityKind, classify_singularities
from droplet_graph import DropletTree, extract_droplet_tree
from utils.helpers import Bounds
from utils.jsonio import point_to_json
from utils.logging import log, log_warn

__all__ = [
    "CritTag",
    "CritRecord",
    "TheoremReport",
    "classify_crit_sets",
    "view_bounds",
    "verify",
    "verify_many",
]


class CritTag(str, Enum):
    C = "C"
    T = "T"
    P = "P"
    S = "S"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class CritRecord:
    point: Point
    multiplicity: int
    value: Point
    tag: CritTag

    def to_json(self) -> dict:
        return {
            "point": point_to_json(self.point),
            "multiplicity": self.multiplicity,
            "value": point_to_json(self.value),
            "tag": self.tag.value,
        }


def classify_crit_sets(
    Q: QuadratureDomain,
    singularities: Sequence[Singularity] = (),
    max_iter: int = ANALYSIS_MAX_ITER,
) -> list[CritRecord]:
    out = []
    for r in Q.crit_f:
        c = r.location
        if not is_inf(c) and abs(abs(c) - 1.0) < Q.band_tol:
            out.append(CritRecord(c, r.multiplicity, Q.f(c / abs(c)), CritTag.C))
            continue
        v = Q.f(c)
        if is_inf(v):
            out.append(CritRecord(c, r.multiplicity, INF, CritTag.P))
            continue
        orbit = classify(Q, v, max_iter, singularities=singularities)
        kind = orbit.outcome.kind
        if kind is OutcomeKind.ESCAPED:
            tag = CritTag.T
        elif kind is OutcomeKind.CONVERGED_TO_SINGULAR:
            tag = CritTag.S
        else:
            tag = CritTag.UNRESOLVED
        out.append(CritRecord(c, r.multiplicity, v, tag))
    return out


# =========================
# Report
# =========================

@dataclass
class TheoremReport:
    name: str
    d_f: int
    d_Omega: int
    n_Omega: int
    node_at_infinity: bool
    conn: int
    num_cusps: int
    num_doubles: int
    Delta: int
    lhs_A: int
    rhs_A: int | None
    pass_A: bool | None
    lhs_A_infty: int | None
    rhs_A_infty: int | None
    pass_A_infty: bool | None
    lhs_B: int
    rhs_B: int | None
    pass_B: bool | None
    lhs_41: int
    rhs_41: int | None
    pass_41: bool | None
    crit_count_check: bool
    per_component_ok: bool | None
    delta_consistent: bool
    unstable_fits: int
    singularities: list[Singularity] = field(default_factory=list)
    crit_tags: list[CritRecord] = field(default_factory=list)
    components: ComponentCounts | None = None
    droplet_tree: DropletTree | None = None
    margins: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        flags = (self.pass_A, self.pass_A_infty, self.pass_B, self.pass_41, self.per_component_ok)
        return self.crit_count_check and self.delta_consistent and all(f is not False for f in flags)

    def tag_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for rec in self.crit_tags:
            counts[rec.tag.value] = counts.get(rec.tag.value, 0) + rec.multiplicity
        return counts

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "d_f": self.d_f,
            "d_Omega": self.d_Omega,
            "n_Omega": self.n_Omega,
            "node_at_infinity": self.node_at_infinity,
            "conn": self.conn,
            "num_cusps": self.num_cusps,
            "num_doubles": self.num_doubles,
            "Delta": self.Delta,
            "lhs_A": self.lhs_A,
            "rhs_A": self.rhs_A,
            "pass_A": self.pass_A,
            "lhs_A_infty": self.lhs_A_infty,
            "rhs_A_infty": self.rhs_A_infty,
            "pass_A_infty": self.pass_A_infty,
            "lhs_B": self.lhs_B,
            "rhs_B": self.rhs_B,
            "pass_B": self.pass_B,
            "lhs_41": self.lhs_41,
            "rhs_41": self.rhs_41,
            "pass_41": self.pass_41,
            "crit_count_check": self.crit_count_check,
            "per_component_ok": self.per_component_ok,
            "delta_consistent": self.delta_consistent,
            "unstable_fits": self.unstable_fits,
            "all_pass": self.all_pass,
            "singularities": [s.to_json() for s in self.singularities],
            "crit_tags": [r.to_json() for r in self.crit_tags],
            "crit_tag_counts": self.tag_counts(),
            "components": self.components.to_json() if self.components else None,
            "droplet_tree": self.droplet_tree.to_json() if self.droplet_tree else None,
            "margins": self.margins,
        }


def view_bounds(Q: QuadratureDomain, pad: float = 0.2) -> Bounds:
    """Square view around the boundary curve."""
    z = sample_boundary(Q.f, 4096)
    z = z[np.isfinite(z)]
    lo = complex(z.real.min(), z.imag.min())
    hi = complex(z.real.max(), z.imag.max())
    side = max(hi.real - lo.real, hi.imag - lo.imag) * (1 + 2 * pad)
    return Bounds((lo + hi) / 2, side, side)


def _singular_convergence(
    Q: QuadratureDomain, sings: Sequence[Singularity], max_iter: int
) -> tuple[list[dict], bool]:
    orbits = critical_orbits(Q, max_iter, sings)
    rows, ok = [], True
    for s in sings:
        hits = sum(
            o.multiplicity
            for o in orbits
            if o.outcome.kind is OutcomeKind.CONVERGED_TO_SINGULAR and o.outcome.singularity is s
        )
        rows.append({"z": point_to_json(s.location), "delta": s.delta, "orbits": hits})
        ok = ok and hits == s.delta
    return rows, ok


def verify(
    Q: QuadratureDomain,
    *,
    res: int = VERIFY_RES,
    max_iter: int = ANALYSIS_MAX_ITER,
    bounds: Bounds | None = None,
) -> TheoremReport:
    label = Q.name or "map"
    sings = classify_singularities(Q)
    cusps = [s for s in sings if s.kind is SingularityKind.CUSP]
    doubles = [s for s in sings if s.kind is SingularityKind.DOUBLE_POINT]
    unstable = sum(1 for s in sings if s.fit is not None and not s.fit.stable)
    delta = sum(s.delta for s in sings)

    bounds = bounds or view_bounds(Q)
    raster = render(Q, bounds, res, max_iter=1)
    comps = count_escape_components(raster)
    conn = comps.closed_droplet

    tree = None
    try:
        tree = extract_droplet_tree(raster, doubles)
    except NotATree as e:
        log_warn(f"[Verify] {label}: droplet tree unavailable ({e})")

    tags = classify_crit_sets(Q, sings, max_iter)
    tagged = sum(r.multiplicity for r in tags if r.tag is not CritTag.UNRESOLVED)
    crit_total = sum(r.multiplicity for r in tags)
    convergence, delta_ok = _singular_convergence(Q, sings, max_iter)

    d, n = Q.d_f, Q.n_Omega
    nC, nD = len(cusps), len(doubles)
    applicable = d >= 3
    at_inf = Q.node_at_infinity

    lhs_A = conn + nD + delta
    rhs_A = min(d + n - 2, 2 * d - 4) if applicable else None
    lhs_A_infty = lhs_A if at_inf else None
    rhs_A_infty = d + n - 3 if applicable and at_inf else None

    lhs_B = nC + 2 * nD + 3 * delta
    if not applicable:
        rhs_B = None
    elif at_inf:
        rhs_B = min(3 * d + 3 * n - 8, 4 * d + 2 * n - 10)
    else:
        rhs_B = min(3 * d + 3 * n - 6, 6 * d - 12)

    lhs_41 = conn + nD
    rhs_41 = 2 * d - 4 if applicable else None

    def cmp(lhs: int | None, rhs: int | None) -> bool | None:
        return None if lhs is None or rhs is None else lhs <= rhs

    report = TheoremReport(
        name=Q.name,
        d_f=d,
        d_Omega=Q.d_Omega,
        n_Omega=n,
        node_at_infinity=at_inf,
        conn=conn,
        num_cusps=nC,
        num_doubles=nD,
        Delta=delta,
        lhs_A=lhs_A,
        rhs_A=rhs_A,
        pass_A=cmp(lhs_A, rhs_A),
        lhs_A_infty=lhs_A_infty,
        rhs_A_infty=rhs_A_infty,
        pass_A_infty=cmp(lhs_A_infty, rhs_A_infty),
        lhs_B=lhs_B,
        rhs_B=rhs_B,
        pass_B=cmp(lhs_B, rhs_B),
        lhs_41=lhs_41,
        rhs_41=rhs_41,
        pass_41=cmp(lhs_41, rhs_41),
        crit_count_check=crit_total == 2 * d - 2,
        # one droplet component in scope, carrying every double point
        per_component_ok=tagged >= nD + 3 if applicable else None,
        delta_consistent=delta_ok,
        unstable_fits=unstable,
        singularities=sings,
        crit_tags=tags,
        components=comps,
        droplet_tree=tree,
        margins={
            "boundary_min_gap": Q.certificate.min_gap,
            "critical_value_margin": Q.certificate.critical_value_margin,
            "max_critical_modulus": Q.certificate.max_critical_modulus,
            "singular_convergence": convergence,
            "raster": raster.metadata(),
        },
    )
    status = "pass" if report.all_pass else "FAIL"
    log(f"[Verify] {label}: conn={conn} #C={nC} #D={nD} Delta={delta} -> {status}")
    return report


async def verify_many(
    domains: Sequence[QuadratureDomain],
    *,
    workers: int = VERIFY_WORKERS,
    **kwargs,
) -> list[TheoremReport]:
    sem = asyncio.Semaphore(max(1, workers))

    async def one(Q: QuadratureDomain) -> TheoremReport:
        async with sem:
            return await asyncio.to_thread(verify, Q, **kwargs)

    return list(await asyncio.gather(*(one(Q) for Q in domains)))
