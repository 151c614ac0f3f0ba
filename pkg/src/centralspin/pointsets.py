"""Finite realizations of Delone point sets in R^d and radial queries.

Purpose
-------
A spin bath occupies a Delone set: a point set that is uniformly discrete
(some packing radius r_pack > 0 — no open ball of that radius holds two
points) and relatively dense (some covering radius r_cover < oo — every
closed ball of that radius holds a point).  The central spin sits at the
origin, which is therefore excluded from every generated set.  All lattice
sums downstream are taken over the radial distances rho = |p| of these
points, so this module is organized around three things:

* generators that produce *complete* truncations — every point of the
  underlying infinite set with |p| <= region_radius is present — for the
  integer lattice, a jittered lattice, and maximal hard-core (Poisson-disk)
  sampling;
* empirical measurement of the two Delone constants (r_pack, r_cover), the
  covering radius by rigorous branch-and-bound probing of the 1-Lipschitz
  distance-to-set function;
* radial annulus counting together with the volume-argument count bounds

      (b/r_cover - 1)^d - (a/r_cover + 1)^d  <=  N(a, b)
                                             <=  (b/r_pack + 1)^d - (a/r_pack - 1)^d

  for the number N(a, b) of points with a <= |p| <= b (lower bound clamped
  at zero).

Conventions
-----------
Annuli are closed on both ends; generators never emit the origin; all
generation is deterministic in (parameters, seed) via counter-based
randomness keyed on structured indices, so enlarging the region never
reshuffles the points that were already there.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Mapping

import numpy as np
from scipy.spatial import cKDTree

from ._rng import counter_uniform

__all__ = [
    "PointSet",
    "DeloneRadii",
    "AnnulusCount",
    "AnnulusBoundsReport",
    "gen_lattice",
    "gen_jittered",
    "gen_poisson_disk",
    "insertable_probes",
    "measure_radii",
    "count_annulus",
    "check_annulus_bounds",
]

_DIMS = (1, 2, 3)


def _query_workers() -> int:
    """Thread count for KD-tree queries (CENTRALSPIN_THREADS, default: all)."""
    return int(os.environ.get("CENTRALSPIN_THREADS", "-1"))


def _check_dim(d: int) -> None:
    if d not in _DIMS:
        raise ValueError(f"dimension must be one of {_DIMS}, got {d!r}")


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PointSet:
    """Finite truncation of a Delone set inside the ball |p| <= region_radius.

    Invariants enforced at construction: every point satisfies
    0 < |p| <= region_radius (the origin hosts the central spin and is never
    a bath site), and there are no duplicate rows.  For generated kinds the
    set contains *all* points of the underlying infinite set inside the
    ball; ``meta`` records the generator and its parameters, including the
    structural packing-radius certificate ``r_pack_structural`` that the
    tail-bound machinery relies on.
    """

    dim: int
    points: np.ndarray
    region_radius: float
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        _check_dim(self.dim)
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ValueError(f"points must have shape (n, {self.dim}), got {pts.shape}")
        if not np.isfinite(pts).all():
            raise ValueError("points must be finite")
        if not (self.region_radius > 0):
            raise ValueError("region_radius must be positive")
        norms = np.linalg.norm(pts, axis=1)
        if pts.shape[0] and not (norms > 0).all():
            raise ValueError("the origin (central spin site) cannot be a bath point")
        if pts.shape[0] and norms.max() > self.region_radius:
            raise ValueError("all points must satisfy |p| <= region_radius")
        if pts.shape[0] > 1:
            order = np.lexsort(pts.T[::-1])
            if (np.diff(pts[order], axis=0) == 0).all(axis=1).any():
                raise ValueError("duplicate points are not allowed")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @cached_property
    def radii(self) -> np.ndarray:
        """Radial distances rho = |p| of all points (read-only array)."""
        r = np.linalg.norm(self.points, axis=1)
        r.setflags(write=False)
        return r

    # -- serialization ------------------------------------------------------

    def to_csv(self, path: str | Path) -> None:
        """Write points as CSV with header x1,...,xd, 17 significant digits."""
        header = ",".join(f"x{i + 1}" for i in range(self.dim))
        np.savetxt(path, self.points, fmt="%.17g", delimiter=",",
                   header=header, comments="")

    def to_json(self) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "region_radius": self.region_radius,
            "meta": dict(self.meta),
            "points": self.points.tolist(),
        }

    def save_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "PointSet":
        pts = np.asarray(obj["points"], dtype=np.float64).reshape(-1, int(obj["dim"]))
        return cls(dim=int(obj["dim"]), points=pts,
                   region_radius=float(obj["region_radius"]), meta=dict(obj["meta"]))

    @classmethod
    def load_json(cls, path: str | Path) -> "PointSet":
        return cls.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class DeloneRadii:
    """Empirical Delone constants of a PointSet.

    ``r_pack`` is half the minimum pairwise distance among the measured
    points — exact for the sample.  ``r_cover`` is the largest
    distance-to-nearest-site found by probing; the true supremum over the
    probed domain lies in [r_cover, r_cover + probe_resolution].  Consumers
    needing a conservative covering radius use ``r_cover_upper``.
    """

    r_pack: float
    r_cover: float
    probe_resolution: float = 0.0

    def __post_init__(self) -> None:
        if not (self.r_pack > 0):
            raise ValueError("r_pack must be positive")
        if not (self.r_cover > 0 and math.isfinite(self.r_cover)):
            raise ValueError("r_cover must be positive and finite")
        if self.probe_resolution < 0:
            raise ValueError("probe_resolution must be >= 0")

    @property
    def r_cover_upper(self) -> float:
        return self.r_cover + self.probe_resolution


@dataclass(frozen=True)
class AnnulusCount:
    """Number of points with a <= |p| <= b (closed annulus)."""

    a: float
    b: float
    n_sites: int


@dataclass(frozen=True)
class AnnulusBoundsReport:
    """Result of checking the annulus site-count sandwich."""

    a: float
    b: float
    n_sites: int
    lower: float
    upper: float
    holds: bool


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def _lattice_candidates(d: int, radius: float) -> np.ndarray:
    """All points of Z^d \\ {0} with |z| <= radius, in lexicographic order."""
    m = int(math.floor(radius))
    axis = np.arange(-m, m + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    norms2 = (grid.astype(np.float64) ** 2).sum(axis=1)
    keep = (norms2 > 0) & (norms2 <= radius * radius)
    return grid[keep]


def gen_lattice(d: int, R_max: float) -> PointSet:
    """All points of Z^d \\ {0} with |p| <= R_max.

    The integer lattice has packing radius 1/2 (unit minimum spacing) and
    covering radius sqrt(d)/2 (deep holes at half-integer cell centers).
    """
    _check_dim(d)
    if R_max < 1:
        raise ValueError("R_max must be >= 1 (the ball would contain no lattice point)")
    pts = _lattice_candidates(d, R_max).astype(np.float64)
    meta = {"kind": "lattice", "dim": d, "R_max": float(R_max),
            "r_pack_structural": 0.5}
    return PointSet(dim=d, points=pts, region_radius=float(R_max), meta=meta)


def gen_jittered(d: int, R_max: float, jitter: float, seed: int) -> PointSet:
    """Integer lattice with i.i.d. uniform offsets in [-jitter, jitter]^d.

    Each lattice point z gets an offset keyed on (seed, z), so growing the
    region never reshuffles earlier points.  Candidates are enumerated out to
    |z| <= R_max + max(0.5, jitter*sqrt(d)) — far enough that no point of the
    infinite jittered set with |p| <= R_max can be missed — then filtered to
    the ball.  Any two jittered points are at least 1 - 2*jitter apart (a
    nonzero integer axis gap shrinks by at most 2*jitter), which is the
    structural packing certificate recorded in meta.
    """
    _check_dim(d)
    if not (0 <= jitter < 0.5):
        raise ValueError("jitter must satisfy 0 <= jitter < 0.5")
    if R_max < 1:
        raise ValueError("R_max must be >= 1")
    margin = max(0.5, jitter * math.sqrt(d))
    cand = _lattice_candidates(d, R_max + margin)
    pts = cand.astype(np.float64)
    for axis in range(d):
        u = counter_uniform(seed, *(cand[:, k] for k in range(d)), np.int64(axis))
        pts[:, axis] += u * (2.0 * jitter) - jitter
    keep = (pts ** 2).sum(axis=1) <= R_max * R_max
    meta = {"kind": "jittered", "dim": d, "R_max": float(R_max),
            "jitter": float(jitter), "seed": int(seed),
            "r_pack_structural": (1.0 - 2.0 * jitter) / 2.0}
    return PointSet(dim=d, points=pts[keep], region_radius=float(R_max), meta=meta)


def _cell_offsets(d: int, nc: int, strides: np.ndarray) -> np.ndarray:
    """Flat-index offsets of cells that can hold a conflicting point.

    Starts from the (2*nc+1)^d Chebyshev neighborhood and drops offsets o
    whose cells are provably out of reach: the gap between any two points
    in cells C and C+o is at least cell * sqrt(sum_i max(|o_i|-1, 0)^2),
    so offsets with that sum >= d (i.e. gap >= r_min) never conflict.
    """
    rng = np.arange(-nc, nc + 1, dtype=np.int64)
    offs = np.stack(np.meshgrid(*([rng] * d), indexing="ij"), axis=-1).reshape(-1, d)
    gap2 = (np.maximum(np.abs(offs) - 1, 0) ** 2).sum(axis=1)
    return offs[gap2 < d] @ strides


def _probe_lattice(d: int, R_max: float, r_min: float, spacing: float):
    """Yield the points of {k * spacing}^d inside the annulus, in chunks.

    The coordinates are computed as k * spacing from integer k, so any two
    callers with the same parameters enumerate bit-identical floats; the
    fill sweep and ``insertable_probes`` rely on that to agree exactly.
    Chunks arrive in lexicographic k order.
    """
    k_hi = int(math.floor(R_max / spacing))
    ks = np.arange(-k_hi, k_hi + 1, dtype=np.int64)
    xs = ks.astype(np.float64) * spacing
    r2 = r_min * r_min
    if d == 1:
        block = xs[:, None]
        n2 = (block ** 2).sum(axis=1)
        yield block[(n2 >= r2) & (n2 <= R_max * R_max)]
        return
    tail = np.stack(np.meshgrid(*([xs] * (d - 1)), indexing="ij"),
                    axis=-1).reshape(-1, d - 1)
    tail2 = (tail ** 2).sum(axis=1)
    for x0 in xs:
        n2 = x0 * x0 + tail2
        sel = (n2 >= r2) & (n2 <= R_max * R_max)
        if not sel.any():
            continue
        block = np.empty((int(sel.sum()), d), dtype=np.float64)
        block[:, 0] = x0
        block[:, 1:] = tail[sel]
        yield block


def insertable_probes(ps: PointSet, spacing: float | None = None,
                      r_min: float | None = None) -> np.ndarray:
    """Probe-lattice points where another hard-core point would still fit.

    Scans {k * spacing}^d over the annulus r_min <= |q| <= region_radius
    and returns every probe at distance >= r_min from all existing points
    (probes that are themselves sample points do not count).  For a
    gen_poisson_disk output with spacing = its fill_spacing (the default)
    the result is empty by construction — the generator's maximality
    certificate.  ``r_min`` and ``spacing`` default to the generator
    parameters recorded in meta.
    """
    if r_min is None:
        if "r_min" not in ps.meta:
            raise ValueError("point set meta has no r_min; pass r_min=")
        r_min = float(ps.meta["r_min"])
    if spacing is None:
        spacing = float(ps.meta.get("fill_spacing", r_min / 10.0))
    if not (0.0 < spacing <= r_min):
        raise ValueError("need 0 < spacing <= r_min")
    tree = cKDTree(ps.points)
    holes = []
    for block in _probe_lattice(ps.dim, ps.region_radius, r_min, spacing):
        dist, _ = tree.query(block, workers=_query_workers())
        holes.append(block[dist >= r_min])
    return np.concatenate(holes, axis=0) if holes else np.empty((0, ps.dim))


def gen_poisson_disk(d: int, R_max: float, r_min: float, seed: int, *,
                     fill_spacing: float | None = None,
                     budget: int = 8) -> PointSet:
    """Maximal hard-core sample of the annulus r_min <= |p| <= R_max.

    Dart throwing on a background grid of cells of side r_min/sqrt(d): at
    most one point fits per cell, and conflicts reach at most ceil(sqrt(d))
    cells away.  Each round throws one dart per live cell, keyed on
    (seed, cell, round), and processes the cells in (nc+1)^d interleaved
    phases: cells within one phase are spaced too far apart to conflict
    with each other, so a whole phase is accepted simultaneously against
    the occupancy grid and the construction is deterministic and
    chunk-independent.  A cell retires when a single accepted point covers
    it entirely (its center lies within r_min - half_diagonal of the
    point), and dies after ``budget`` failed darts otherwise.

    A final fill sweep revisits every budget-dead cell and inserts points
    of the absolute probe lattice {k * fill_spacing : k integer}^d
    (default spacing r_min/10 for d <= 2 and r_min/4 for d = 3) wherever a
    point still legally fits, again phase by phase.  Cells that retire any
    other way are already covered within < r_min, so after the sweep *every*
    probe-lattice point of the legal region either conflicts with a sample
    point or is one: that is the grid-probe maximality certificate, and
    ``insertable_probes`` re-derives it from the output alone.  Between
    probes the guarantee degrades smoothly: any remaining hole is shallower
    than r_min + fill_spacing * sqrt(d)/2.

    The origin's r_min-neighborhood is excluded (the central spin keeps
    hard-core distance from the bath), so the structural packing radius
    r_min/2 covers the bath together with the origin site.
    """
    _check_dim(d)
    if not (0 < r_min <= R_max):
        raise ValueError("need 0 < r_min <= R_max")
    if fill_spacing is None:
        fill_spacing = r_min / 10.0 if d <= 2 else r_min / 4.0

    cell = r_min / math.sqrt(d)
    n_side = int(math.ceil(2.0 * R_max / cell))
    lo = -R_max
    nc = int(math.ceil(math.sqrt(d)))  # conflict window radius, in cells
    pad = nc
    pside = n_side + 2 * pad
    pstrides = np.array([pside ** (d - 1 - k) for k in range(d)], dtype=np.int64)
    occ = np.full(pside ** d, -1, dtype=np.int64)  # accepted point per cell
    offs = _cell_offsets(d, nc, pstrides)
    offs = offs[offs != 0]
    r2 = r_min * r_min
    half = cell / 2.0
    half_diag = half * math.sqrt(d)
    blk2 = (r_min - half_diag) ** 2  # single ball covering the whole cell
    stride = nc + 1  # same-phase cells are >= (stride-1)*cell >= r_min apart
    n_phases = stride ** d
    sp = np.array([stride ** (d - 1 - k) for k in range(d)], dtype=np.int64)

    # Cells whose cube intersects the legal annulus r_min <= |q| <= R_max.
    axis_idx = np.arange(n_side, dtype=np.int64)
    grid_idx = np.stack(np.meshgrid(*([axis_idx] * d), indexing="ij"),
                        axis=-1).reshape(-1, d)
    centers = lo + (grid_idx.astype(np.float64) + 0.5) * cell
    near2 = (np.maximum(np.abs(centers) - half, 0.0) ** 2).sum(axis=1)
    far2 = ((np.abs(centers) + half) ** 2).sum(axis=1)
    alive = (near2 <= R_max * R_max) & (far2 >= r2)
    active_idx = grid_idx[alive]
    del grid_idx, centers, near2, far2, alive

    # Every cell ever hosts at most one point, so this buffer never grows.
    buf = np.empty((active_idx.shape[0], d), dtype=np.float64)
    n_pts = 0
    fails = np.zeros(active_idx.shape[0], dtype=np.int32)
    phases = (active_idx % stride) @ sp
    dead_cells: list[np.ndarray] = []
    rnd = 0
    while active_idx.shape[0]:
        cells = active_idx
        darts = np.empty((cells.shape[0], d), dtype=np.float64)
        for axis in range(d):
            u = counter_uniform(seed, *(cells[:, k] for k in range(d)),
                                np.int64(rnd), np.int64(axis))
            darts[:, axis] = lo + (cells[:, axis] + u) * cell
        dn2 = (darts ** 2).sum(axis=1)
        ok = (dn2 >= r2) & (dn2 <= R_max * R_max)
        flat = (cells + pad) @ pstrides
        cent = lo + (cells.astype(np.float64) + 0.5) * cell
        blocked = np.zeros(cells.shape[0], dtype=bool)
        for p in range(n_phases):
            sel = np.nonzero(phases == p)[0]
            if not sel.size:
                continue
            if n_pts:
                # conflicts against everything accepted so far (including
                # earlier phases of this round), one window offset at a
                # time; additionally a cell whose center lies within
                # r_min - half_diag of an accepted point is entirely
                # covered by that point's exclusion ball and retires (it
                # can never host anything, and no probe inside it could)
                sflat = flat[sel]
                for o in offs:
                    nb = occ[sflat + o]
                    has = np.nonzero(nb >= 0)[0]
                    if not has.size:
                        continue
                    i = sel[has]
                    q = buf[nb[has]]
                    ok[i[((darts[i] - q) ** 2).sum(axis=1) < r2]] = False
                    blocked[i[((cent[i] - q) ** 2).sum(axis=1) < blk2]] = True
            acc = sel[ok[sel]]
            if acc.size:
                occ[flat[acc]] = n_pts + np.arange(acc.size)
                buf[n_pts:n_pts + acc.size] = darts[acc]
                n_pts += acc.size
        failed = ~ok
        fails[failed] += 1
        dead = failed & ~blocked & (fails > budget)
        if dead.any():
            dead_cells.append(cells[dead])
        keep = ~(ok | dead | blocked)
        active_idx = cells[keep]
        fails = fails[keep]
        phases = phases[keep]
        rnd += 1

    # Fill sweep: scan budget-dead cells with absolute-lattice probes.
    if dead_cells:
        dcells = np.concatenate(dead_cells, axis=0)
        tree = cKDTree(buf[:n_pts]) if n_pts else None
        ccenters = lo + (dcells.astype(np.float64) + 0.5) * cell
        if tree is not None:
            dist, _ = tree.query(ccenters, workers=_query_workers())
        else:
            dist = np.full(ccenters.shape[0], np.inf)
        cand = dcells[dist + half_diag >= r_min]
        if cand.shape[0]:
            cand_mask = np.zeros(pside ** d, dtype=bool)
            cand_mask[(cand + pad) @ pstrides] = True
            chunks = []
            for block in _probe_lattice(d, R_max, r_min, fill_spacing):
                cflat = (np.floor((block - lo) / cell).astype(np.int64)
                         + pad) @ pstrides
                chunks.append(block[cand_mask[cflat]])
            probes = np.concatenate(chunks, axis=0)
            del chunks, cand_mask
            if probes.shape[0] and tree is not None:
                pdist, _ = tree.query(probes, workers=_query_workers())
                probes = probes[pdist >= r_min]
            # Greedy maximal insertion among surviving probes: rounds of
            # phased acceptance (one representative probe per cell, whole
            # phases accepted at once against the occupancy grid), then
            # every survivor within r_min of a new point is dropped.  The
            # first nonempty phase of a round always accepts, so this
            # terminates, and the outcome is order-deterministic.
            order = np.lexsort(probes.T[::-1])
            surv = probes[order]
            while surv.shape[0]:
                scoord = np.floor((surv - lo) / cell).astype(np.int64)
                sflat = (scoord + pad) @ pstrides
                sphase = (scoord % stride) @ sp
                n0 = n_pts
                for p in range(n_phases):
                    sel = np.nonzero(sphase == p)[0]
                    if not sel.size:
                        continue
                    _, ridx = np.unique(sflat[sel], return_index=True)
                    ridx.sort()
                    cidx = sel[ridx]  # one probe per cell, in survivor order
                    good = np.ones(cidx.size, dtype=bool)
                    if n_pts:
                        cf = sflat[cidx]
                        for o in offs:
                            nb = occ[cf + o]
                            has = np.nonzero(nb >= 0)[0]
                            if not has.size:
                                continue
                            dd = ((surv[cidx[has]] - buf[nb[has]]) ** 2).sum(axis=1)
                            good[has[dd < r2]] = False
                    acc = cidx[good]
                    if acc.size:
                        occ[sflat[acc]] = n_pts + np.arange(acc.size)
                        buf[n_pts:n_pts + acc.size] = surv[acc]
                        n_pts += acc.size
                if n_pts == n0:
                    raise RuntimeError("fill sweep stalled; this is a bug")
                nd, _ = cKDTree(buf[n0:n_pts]).query(
                    surv, workers=_query_workers())
                surv = surv[nd >= r_min]

    meta = {"kind": "poisson", "dim": d, "R_max": float(R_max),
            "r_min": float(r_min), "seed": int(seed), "budget": int(budget),
            "fill_spacing": float(fill_spacing),
            "r_pack_structural": r_min / 2.0}
    return PointSet(dim=d, points=buf[:n_pts].copy(), region_radius=float(R_max),
                    meta=meta)


# ---------------------------------------------------------------------------
# Delone radii
# ---------------------------------------------------------------------------

_DEFAULT_RESOLUTION = {1: 0.0, 2: 0.05, 3: 0.12}


def _covering_exact_1d(sites: np.ndarray, R_dom: float) -> float:
    """Exact sup over [-R_dom, R_dom] of distance to the nearest site (d=1)."""
    xs = np.sort(sites.ravel())
    cands = [-R_dom, R_dom]
    mids = (xs[:-1] + xs[1:]) / 2.0
    cands.extend(mids[(mids >= -R_dom) & (mids <= R_dom)].tolist())
    q = np.asarray(cands)
    pos = np.searchsorted(xs, q)
    left = np.abs(q - xs[np.clip(pos - 1, 0, len(xs) - 1)])
    right = np.abs(xs[np.clip(pos, 0, len(xs) - 1)] - q)
    return float(np.minimum(left, right).max())


def _covering_bnb(tree: cKDTree, d: int, R_dom: float,
                  resolution: float) -> tuple[float, float]:
    """Branch-and-bound estimate of sup_{|q| <= R_dom} dist(q, sites).

    The distance-to-set function is 1-Lipschitz, so a cell of half-diagonal
    hd whose center distance plus hd cannot beat the incumbent maximum holds
    no better probe and is pruned; survivors are subdivided until the
    half-diagonal falls below ``resolution``.  Returns (best, gap): the true
    supremum lies in [best, best + gap].
    """
    h = 1.0
    hd = h * math.sqrt(d) / 2.0
    m = int(math.ceil(R_dom / h)) + 1
    axis = (np.arange(-m, m, dtype=np.float64) + 0.5) * h
    centers = np.stack(np.meshgrid(*([axis] * d), indexing="ij"),
                       axis=-1).reshape(-1, d)
    centers = centers[(centers ** 2).sum(axis=1) <= (R_dom + hd) ** 2]
    best = 0.0
    workers = _query_workers()
    child = (np.stack(np.meshgrid(*([np.array([-1.0, 1.0])] * d), indexing="ij"),
                      axis=-1).reshape(-1, d))
    while True:
        dist, _ = tree.query(centers, workers=workers)
        inside = (centers ** 2).sum(axis=1) <= R_dom * R_dom
        if inside.any():
            best = max(best, float(dist[inside].max()))
        if hd <= resolution:
            ub = dist + hd
            gap = max(0.0, float(ub.max()) - best) if ub.size else 0.0
            return best, gap
        keep = dist + hd > best
        if not keep.any():
            return best, 0.0
        parents = centers[keep]
        h /= 2.0
        hd /= 2.0
        centers = (parents[:, None, :] + child[None, :, :] * (h / 2.0)).reshape(-1, d)
        centers = centers[(centers ** 2).sum(axis=1) <= (R_dom + hd) ** 2]


def measure_radii(ps: PointSet, margin: float = 0.0, *,
                  resolution: float | None = None) -> DeloneRadii:
    """Measure the empirical packing and covering radii of a point set.

    r_pack is half the minimum pairwise distance among points with
    |p| <= region_radius - margin (exact for the sample).  r_cover is the
    maximum distance from any probe q with |q| <= region_radius - margin to
    the nearest site; the probe search is exact in d=1 and branch-and-bound
    elsewhere, with the remaining gap reported as probe_resolution.

    The origin counts as a site for covering purposes: the central spin
    occupies it, so the punctured ball around 0 is not a hole of the bath
    geometry.  (Without this, the 1-D integer lattice would report
    r_cover = 1 from the probe at the origin instead of its true 1/2.)
    """
    if margin < 0:
        raise ValueError("margin must be >= 0")
    R_dom = ps.region_radius - margin
    if R_dom <= 0:
        raise ValueError("margin leaves no probe domain")
    core = ps.points[ps.radii <= R_dom]
    if core.shape[0] < 2:
        raise ValueError("need at least 2 points inside the margin region")
    nn_dist, _ = cKDTree(core).query(core, k=2, workers=_query_workers())
    r_pack = float(nn_dist[:, 1].min()) / 2.0

    sites = np.concatenate([ps.points, np.zeros((1, ps.dim))], axis=0)
    if ps.dim == 1:
        r_cover = _covering_exact_1d(sites, R_dom)
        gap = 0.0
    else:
        res = _DEFAULT_RESOLUTION[ps.dim] if resolution is None else resolution
        r_cover, gap = _covering_bnb(cKDTree(sites), ps.dim, R_dom, res)
    return DeloneRadii(r_pack=r_pack, r_cover=r_cover, probe_resolution=gap)


# ---------------------------------------------------------------------------
# Annulus queries
# ---------------------------------------------------------------------------


def count_annulus(ps: PointSet, a: float, b: float) -> AnnulusCount:
    """Count points with a <= |p| <= b (closed annulus)."""
    if not (0 <= a < b):
        raise ValueError("need 0 <= a < b")
    if b > ps.region_radius:
        raise ValueError("b exceeds region_radius: the set is incomplete there")
    n = int(((ps.radii >= a) & (ps.radii <= b)).sum())
    return AnnulusCount(a=float(a), b=float(b), n_sites=n)


def check_annulus_bounds(ps: PointSet, radii: DeloneRadii,
                         a: float, b: float) -> AnnulusBoundsReport:
    """Check the volume-argument annulus count sandwich.

    Upper bound: disjoint open r_pack-balls around counted points fit inside
    the annulus widened by r_pack, giving N <= (b/r_pack+1)^d - (a/r_pack-1)^d.
    Lower bound: closed r_cover-balls around the points cover the annulus,
    giving N >= (b/r_cover-1)^d - (a/r_cover+1)^d (clamped at 0).  The lower
    bound uses the conservative covering estimate r_cover + probe_resolution
    (an understated covering radius would overstate the bound); the upper
    bound uses min(measured, structural) packing radius, both being valid
    certificates for the counted sample.
    """
    d = ps.dim
    rp = radii.r_pack
    structural = ps.meta.get("r_pack_structural")
    if structural is not None:
        rp = min(rp, float(structural))
    if a < rp:
        raise ValueError("lower annulus radius must satisfy a >= r_pack")
    rc = radii.r_cover_upper
    n = count_annulus(ps, a, b).n_sites
    lower = max(0.0, max(0.0, b / rc - 1.0) ** d - (a / rc + 1.0) ** d)
    upper = (b / rp + 1.0) ** d - max(0.0, a / rp - 1.0) ** d
    holds = lower <= n <= upper
    return AnnulusBoundsReport(a=float(a), b=float(b), n_sites=n,
                               lower=lower, upper=upper, holds=holds)
