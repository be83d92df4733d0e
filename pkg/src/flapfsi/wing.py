"""Discrete wing construction.

Builds the bonded membrane + vein model from a parametric planform (or an
outline file), triangulates the membrane, snaps tapered veins onto membrane
edge chains, and extracts the wetted interface surface used by the fluid
and coupling layers.

Geometry convention: the planform lives in the body xy-plane with the span
along +x (root edge at x = 0, tip at x = span_length) and the chord along y
(leading edge on the +y side). Units are metres throughout.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay

from .materials import MEMBRANE_DEFAULT, VEIN_DEFAULT, Material


class GeometryError(ValueError):
    """Invalid planform or vein geometry."""


class MeshingError(RuntimeError):
    """The requested resolution cannot mesh the outline acceptably."""


# ---------------------------------------------------------------------------
# polygon utilities
# ---------------------------------------------------------------------------

def polygon_area(outline: np.ndarray) -> float:
    """Shoelace area of a closed polyline (closure implicit)."""
    x, y = outline[:, 0], outline[:, 1]
    return 0.5 * abs(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def points_in_polygon(points: np.ndarray, outline: np.ndarray) -> np.ndarray:
    """Ray-casting inside test, vectorised over points."""
    px = points[:, 0][:, None]
    py = points[:, 1][:, None]
    x1, y1 = outline[:, 0][None, :], outline[:, 1][None, :]
    x2 = np.roll(outline[:, 0], -1)[None, :]
    y2 = np.roll(outline[:, 1], -1)[None, :]
    crosses = (y1 <= py) != (y2 <= py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
    hit = crosses & (px < xint)
    return np.sum(hit, axis=1) % 2 == 1


def distance_to_outline(points: np.ndarray, outline: np.ndarray) -> np.ndarray:
    """Distance from each point to the closed outline polyline."""
    a = outline
    b = np.roll(outline, -1, axis=0)
    ab = b - a                                    # (S, 2)
    ap = points[:, None, :] - a[None, :, :]       # (M, S, 2)
    denom = np.maximum(np.sum(ab * ab, axis=1), 1e-300)
    t = np.clip(np.sum(ap * ab[None, :, :], axis=2) / denom, 0.0, 1.0)
    closest = a[None, :, :] + t[:, :, None] * ab[None, :, :]
    d = np.linalg.norm(points[:, None, :] - closest, axis=2)
    return d.min(axis=1)


def _segments_intersect(p1, p2, p3, p4) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return 0 if abs(v) < 1e-18 else (1 if v > 0 else -1)

    o1, o2 = orient(p1, p2, p3), orient(p1, p2, p4)
    o3, o4 = orient(p3, p4, p1), orient(p3, p4, p2)
    return o1 != o2 and o3 != o4


def _is_simple_polygon(outline: np.ndarray) -> bool:
    n = len(outline)
    segs = [(outline[i], outline[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue  # closing edge is adjacent to the first
            if _segments_intersect(*segs[i], *segs[j]):
                return False
    return True


# ---------------------------------------------------------------------------
# planform
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Planform:
    """Closed planar outline with its span/chord bounding box."""

    outline: np.ndarray      # (N, 2), metres, closed implicitly
    span_length: float
    max_chord: float

    @property
    def area(self) -> float:
        return polygon_area(self.outline)


def _validate_planform(outline: np.ndarray, span: float, chord: float) -> Planform:
    if len(outline) < 3:
        raise GeometryError("outline needs at least 3 points")
    if not _is_simple_polygon(outline):
        raise GeometryError("outline is self-intersecting")
    lo = outline.min(axis=0)
    hi = outline.max(axis=0)
    if abs((hi[0] - lo[0]) - span) > 1e-9 or abs((hi[1] - lo[1]) - chord) > 1e-9:
        raise GeometryError(
            f"outline bounding box {hi - lo} does not match span x chord "
            f"({span} x {chord})")
    return Planform(outline=outline, span_length=span, max_chord=chord)


def build_planform(kind: str = "half_ellipse", *, span: float = 0.0525,
                   chord: float = 0.027, n_arc: int = 96,
                   outline: np.ndarray | None = None,
                   path: str | None = None) -> Planform:
    """Construct a planform from a parametric descriptor or an outline file.

    Supported kinds: ``half_ellipse`` (straight root edge, elliptical tip;
    the default 52.5 mm x 27.0 mm matches the cicada wing build), a plain
    ``rectangle``, ``outline`` (explicit array), or ``file`` (one "x y" pair
    per line, metres, closed implicitly).
    """
    if kind in ("outline", "file"):
        if kind == "file":
            if path is None:
                raise GeometryError("outline file planform needs a path")
            outline = load_outline(path)
        if outline is None:
            raise GeometryError("outline planform needs points")
        outline = np.asarray(outline, dtype=float)
        lo, hi = outline.min(axis=0), outline.max(axis=0)
        return _validate_planform(outline - lo, hi[0] - lo[0], hi[1] - lo[1])

    if span <= 0 or chord <= 0:
        raise GeometryError(f"span and chord must be > 0, got {span}, {chord}")

    if kind == "half_ellipse":
        b = chord / 2
        psi = np.linspace(0.0, math.pi, n_arc + 1)
        arc = np.column_stack([span * np.sin(psi), b * np.cos(psi)])
        pts = np.vstack([arc])  # runs (0, b) -> tip -> (0, -b); root edge closes it
        return _validate_planform(pts, span, chord)
    if kind == "rectangle":
        b = chord / 2
        pts = np.array([[0.0, -b], [span, -b], [span, b], [0.0, b]])
        return _validate_planform(pts, span, chord)
    raise GeometryError(f"unknown planform kind {kind!r}")


def load_outline(path: str) -> np.ndarray:
    pts = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GeometryError(f"{path}:{lineno}: expected 'x y', got {line!r}")
            pts.append([float(parts[0]), float(parts[1])])
    if len(pts) < 3:
        raise GeometryError(f"{path}: outline needs at least 3 points")
    return np.asarray(pts)


# ---------------------------------------------------------------------------
# membrane meshing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MembraneMesh:
    """Triangulated membrane: nodes in 3-D (z = 0), CCW triangles."""

    nodes: np.ndarray       # (n, 3)
    triangles: np.ndarray   # (m, 3) int
    thickness: float = 100e-6

    @property
    def areas(self) -> np.ndarray:
        p = self.nodes[self.triangles]
        cross = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
        return 0.5 * np.linalg.norm(cross, axis=1)

    @property
    def area(self) -> float:
        return float(self.areas.sum())

    def edges(self) -> np.ndarray:
        e = np.vstack([self.triangles[:, [0, 1]], self.triangles[:, [1, 2]],
                       self.triangles[:, [2, 0]]])
        return np.unique(np.sort(e, axis=1), axis=0)

    def min_angle_deg(self) -> float:
        p = self.nodes[self.triangles][:, :, :2]
        angles = []
        for i in range(3):
            a = p[:, (i + 1) % 3] - p[:, i]
            b = p[:, (i + 2) % 3] - p[:, i]
            cosang = np.sum(a * b, axis=1) / (
                np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
            angles.append(np.degrees(np.arccos(np.clip(cosang, -1, 1))))
        return float(np.min(angles))

    def max_edge_length(self) -> float:
        e = self.edges()
        return float(np.linalg.norm(self.nodes[e[:, 0]] - self.nodes[e[:, 1]],
                                    axis=1).max())


def _resample_outline(outline: np.ndarray, spacing: float) -> np.ndarray:
    pts = []
    n = len(outline)
    for i in range(n):
        a, b = outline[i], outline[(i + 1) % n]
        length = np.linalg.norm(b - a)
        steps = max(1, int(math.ceil(length / spacing)))
        for s in range(steps):
            pts.append(a + (b - a) * (s / steps))
    return np.asarray(pts)


def generate_membrane_mesh(planform: Planform, target_edge: float,
                           thickness: float = 100e-6,
                           min_angle_deg: float = 15.0) -> MembraneMesh:
    """Triangulate the planform interior at roughly uniform resolution.

    Boundary points are resampled at the target spacing and the interior is
    seeded with a hexagonal lattice; a Delaunay triangulation is then culled
    to the polygon. Raises MeshingError when the outline cannot be meshed to
    the required quality at this resolution.
    """
    if not 0 < target_edge < planform.span_length:
        raise MeshingError(
            f"target_edge must lie in (0, span); got {target_edge}")

    outline = planform.outline
    boundary = _resample_outline(outline, target_edge)

    lo, hi = outline.min(axis=0), outline.max(axis=0)
    dy = target_edge * math.sqrt(3) / 2
    ys = np.arange(lo[1] + dy / 2, hi[1], dy)
    rows = []
    for r, y in enumerate(ys):
        off = (target_edge / 2) if (r % 2) else 0.0
        xs = np.arange(lo[0] + off + target_edge / 2, hi[0], target_edge)
        rows.append(np.column_stack([xs, np.full(len(xs), y)]))
    interior = np.vstack(rows) if rows else np.empty((0, 2))
    if len(interior):
        keep = points_in_polygon(interior, outline)
        interior = interior[keep]
    if len(interior):
        keep = distance_to_outline(interior, outline) >= 0.7 * target_edge
        interior = interior[keep]

    pts = np.vstack([boundary, interior])
    if len(pts) < 3:
        raise MeshingError("not enough points to mesh the outline")

    tri = Delaunay(pts)
    centroids = pts[tri.simplices].mean(axis=1)
    keep = points_in_polygon(centroids, outline)
    simplices = tri.simplices[keep]
    if len(simplices) == 0:
        raise MeshingError("triangulation empty after culling to the outline")

    # drop orphan points and renumber
    used = np.unique(simplices)
    remap = -np.ones(len(pts), dtype=int)
    remap[used] = np.arange(len(used))
    nodes2d = pts[used]
    triangles = remap[simplices]

    # enforce CCW orientation
    p = nodes2d[triangles]
    signed = ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
              - (p[:, 1, 1] - p[:, 0, 1]) * (p[:, 2, 0] - p[:, 0, 0]))
    flip = signed < 0
    triangles[flip] = triangles[flip][:, [0, 2, 1]]
    if np.any(np.abs(signed) < 1e-16):
        raise MeshingError("degenerate (zero-area) triangle produced")

    nodes = np.column_stack([nodes2d, np.zeros(len(nodes2d))])
    mesh = MembraneMesh(nodes=nodes, triangles=triangles, thickness=thickness)

    poly_area = planform.area
    if abs(mesh.area - poly_area) > 0.01 * poly_area:
        raise MeshingError(
            f"mesh area {mesh.area:.6g} deviates more than 1% from the "
            f"polygon area {poly_area:.6g}; outline too thin for "
            f"target_edge={target_edge}")
    if mesh.max_edge_length() > 2 * target_edge:
        raise MeshingError(
            f"max edge {mesh.max_edge_length():.6g} exceeds 2*target_edge")
    if mesh.min_angle_deg() < min_angle_deg:
        raise MeshingError(
            f"min triangle angle {mesh.min_angle_deg():.2f} deg below "
            f"{min_angle_deg} deg at target_edge={target_edge}")
    return mesh


# ---------------------------------------------------------------------------
# veins
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VeinPath:
    """One vein: a polyline rooted at the wing root with tapered sections.

    ``sections`` rows are (arclength fraction, width, thickness); width and
    thickness must be non-increasing root to tip.
    """

    polyline: np.ndarray    # (k, 2)
    sections: np.ndarray    # (s, 3)


@dataclass(frozen=True)
class VeinLayout:
    veins: tuple[VeinPath, ...]
    root_tolerance: float = 1e-4

    def __post_init__(self):
        for n, vein in enumerate(self.veins):
            s = vein.sections
            if np.any(s[:, 1] <= 0) or np.any(s[:, 2] <= 0):
                raise GeometryError(f"vein {n}: sections must be positive")
            if np.any(np.diff(s[:, 0]) <= 0):
                raise GeometryError(f"vein {n}: section stations must increase")
            if np.any(np.diff(s[:, 1]) > 1e-15) or np.any(np.diff(s[:, 2]) > 1e-15):
                raise GeometryError(
                    f"vein {n}: width/thickness must be non-increasing")
            if vein.polyline[0, 0] > self.root_tolerance:
                raise GeometryError(
                    f"vein {n} starts at x={vein.polyline[0, 0]:.4g}, outside "
                    f"the root tolerance {self.root_tolerance}")


def tapered_sections(w_root: float, t_root: float,
                     w_tip: float, t_tip: float) -> np.ndarray:
    return np.array([[0.0, w_root, t_root], [1.0, w_tip, t_tip]])


DEFAULT_SECTIONS = tapered_sections(1.0e-3, 0.3e-3, 0.3e-3, 0.1e-3)


def default_vein_layout(planform: Planform,
                        sections: np.ndarray = DEFAULT_SECTIONS) -> VeinLayout:
    """Leading-edge spar plus three veins fanning from the root.

    The fan targets approximate the vein pattern of a cicada forewing; exact
    coordinates are configurable defaults, not measured geometry.
    """
    a = planform.span_length
    b = planform.max_chord / 2
    psi_sp = np.linspace(0.0, math.pi / 2, 24)
    spar = np.column_stack([a * np.sin(psi_sp), b * np.cos(psi_sp)])
    veins = [VeinPath(polyline=spar, sections=sections)]
    for psi in (0.45 * math.pi, 0.62 * math.pi, 0.80 * math.pi):
        tip = np.array([a * math.sin(psi), b * math.cos(psi)])
        line = np.linspace([0.0, 0.0], tip, 16)
        veins.append(VeinPath(polyline=np.asarray(line), sections=sections))
    return VeinLayout(veins=tuple(veins))


@dataclass(frozen=True)
class BeamSegment:
    nodes: tuple[int, int]
    width: float
    thickness: float


def _shortest_edge_path(adj: dict[int, list[tuple[int, float]]],
                        start: int, goal: int) -> list[int]:
    dist = {start: 0.0}
    prev: dict[int, int] = {}
    heap = [(0.0, start)]
    while heap:
        d, node = heapq.heappop(heap)
        if node == goal:
            break
        if d > dist.get(node, math.inf):
            continue
        for nb, w in adj[node]:
            nd = d + w
            if nd < dist.get(nb, math.inf):
                dist[nb] = nd
                prev[nb] = node
                heapq.heappush(heap, (nd, nb))
    if goal not in dist:
        raise MeshingError(f"no edge path between nodes {start} and {goal}")
    path = [goal]
    while path[-1] != start:
        path.append(prev[path[-1]])
    return path[::-1]


def generate_vein_beams(layout: VeinLayout, mesh: MembraneMesh,
                        planform: Planform | None = None) -> list[BeamSegment]:
    """Snap each vein polyline onto a chain of membrane edges.

    Rectangular sections are linearly interpolated from the vein's section
    table at each snapped segment's midpoint arclength.
    """
    if not layout.veins:
        return []
    nodes2d = mesh.nodes[:, :2]
    edges = mesh.edges()
    lengths = np.linalg.norm(nodes2d[edges[:, 0]] - nodes2d[edges[:, 1]], axis=1)
    median_edge = float(np.median(lengths))
    adj: dict[int, list[tuple[int, float]]] = {i: [] for i in range(len(nodes2d))}
    for (i, j), L in zip(edges, lengths):
        adj[int(i)].append((int(j), float(L)))
        adj[int(j)].append((int(i), float(L)))

    beams: list[BeamSegment] = []
    for vn, vein in enumerate(layout.veins):
        poly = np.asarray(vein.polyline, dtype=float)
        if planform is not None:
            clearance = distance_to_outline(poly, planform.outline)
            inside = points_in_polygon(poly, planform.outline)
            if np.any(~inside & (clearance > 1e-9)):
                raise GeometryError(
                    f"vein {vn} leaves the planform (first offending point "
                    f"{poly[np.argmax(~inside & (clearance > 1e-9))]})")
        # densify, snap to nearest nodes, dedupe
        seglen = np.linalg.norm(np.diff(poly, axis=0), axis=1)
        total = seglen.sum()
        n_samp = max(2, int(math.ceil(total / (0.5 * median_edge))))
        s = np.linspace(0, total, n_samp)
        cum = np.concatenate([[0.0], np.cumsum(seglen)])
        samples = np.column_stack([np.interp(s, cum, poly[:, 0]),
                                   np.interp(s, cum, poly[:, 1])])
        d2 = ((samples[:, None, :] - nodes2d[None, :, :]) ** 2).sum(axis=2)
        snapped = np.argmin(d2, axis=1)
        chain = [int(snapped[0])]
        for nd in snapped[1:]:
            nd = int(nd)
            if nd == chain[-1]:
                continue
            if any(nb == nd for nb, _ in adj[chain[-1]]):
                chain.append(nd)
            else:
                path = _shortest_edge_path(adj, chain[-1], nd)
                chain.extend(path[1:])

        if len(chain) < 2:
            continue
        pts = nodes2d[chain]
        arc = np.concatenate([[0.0], np.cumsum(
            np.linalg.norm(np.diff(pts, axis=0), axis=1))])
        if arc[-1] <= 0:
            continue
        mid_frac = 0.5 * (arc[:-1] + arc[1:]) / arc[-1]
        sec = vein.sections
        widths = np.interp(mid_frac, sec[:, 0], sec[:, 1])
        thicks = np.interp(mid_frac, sec[:, 0], sec[:, 2])
        for (i, j), w, t in zip(zip(chain[:-1], chain[1:]), widths, thicks):
            beams.append(BeamSegment(nodes=(int(i), int(j)),
                                     width=float(w), thickness=float(t)))
    return beams


# ---------------------------------------------------------------------------
# wing model and wetted surface
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WingModel:
    """Bonded membrane + vein model with a clamped root."""

    membrane: MembraneMesh
    vein_beams: tuple[BeamSegment, ...]
    root_clamp: np.ndarray          # node indices
    membrane_material: Material = MEMBRANE_DEFAULT
    vein_material: Material = VEIN_DEFAULT

    def __post_init__(self):
        nn = len(self.membrane.nodes)
        for b in self.vein_beams:
            if not (0 <= b.nodes[0] < nn and 0 <= b.nodes[1] < nn):
                raise GeometryError("vein beam endpoint is not a membrane node")
        if len(self.root_clamp) == 0:
            raise GeometryError("root clamp set is empty")

    @property
    def area(self) -> float:
        return self.membrane.area


def clamp_nodes(mesh: MembraneMesh, rule: str = "root",
                tolerance: float | None = None) -> np.ndarray:
    """Select clamped nodes: 'root' = the x ~ min edge, 'midchord' = a band
    around the y = 0 line (used by the 2-D pitching slab cases)."""
    nodes = mesh.nodes
    if tolerance is None:
        e = mesh.edges()
        tolerance = 0.55 * float(np.median(np.linalg.norm(
            nodes[e[:, 0]] - nodes[e[:, 1]], axis=1)))
    if rule == "root":
        xmin = nodes[:, 0].min()
        idx = np.where(nodes[:, 0] <= xmin + 1e-9 + 1e-6 * tolerance)[0]
    elif rule == "midchord":
        idx = np.where(np.abs(nodes[:, 1]) <= tolerance)[0]
    else:
        raise GeometryError(f"unknown clamp rule {rule!r}")
    if len(idx) == 0:
        raise GeometryError(f"clamp rule {rule!r} selected no nodes")
    return idx


def build_wing_model(planform: Planform, target_edge: float,
                     thickness: float = 100e-6,
                     vein_layout: VeinLayout | None = None,
                     membrane_material: Material = MEMBRANE_DEFAULT,
                     vein_material: Material = VEIN_DEFAULT,
                     clamp_rule: str = "root") -> WingModel:
    mesh = generate_membrane_mesh(planform, target_edge, thickness=thickness)
    beams = (generate_vein_beams(vein_layout, mesh, planform)
             if vein_layout is not None else [])
    clamp = clamp_nodes(mesh, clamp_rule)
    return WingModel(membrane=mesh, vein_beams=tuple(beams), root_clamp=clamp,
                     membrane_material=membrane_material,
                     vein_material=vein_material)


# Symmetric triangle quadrature rules in barycentric coordinates.
_TRI_RULES = {
    1: (np.array([[1 / 3, 1 / 3, 1 / 3]]), np.array([1.0])),
    3: (np.array([[2 / 3, 1 / 6, 1 / 6],
                  [1 / 6, 2 / 3, 1 / 6],
                  [1 / 6, 1 / 6, 2 / 3]]), np.full(3, 1 / 3)),
    6: (np.array([[0.108103018168070, 0.445948490915965, 0.445948490915965],
                  [0.445948490915965, 0.108103018168070, 0.445948490915965],
                  [0.445948490915965, 0.445948490915965, 0.108103018168070],
                  [0.816847572980459, 0.091576213509771, 0.091576213509771],
                  [0.091576213509771, 0.816847572980459, 0.091576213509771],
                  [0.091576213509771, 0.091576213509771, 0.816847572980459]]),
        np.array([0.223381589678011] * 3 + [0.109951743655322] * 3)),
    7: (np.array([[1 / 3, 1 / 3, 1 / 3],
                  [0.059715871789770, 0.470142064105115, 0.470142064105115],
                  [0.470142064105115, 0.059715871789770, 0.470142064105115],
                  [0.470142064105115, 0.470142064105115, 0.059715871789770],
                  [0.797426985353087, 0.101286507323456, 0.101286507323456],
                  [0.101286507323456, 0.797426985353087, 0.101286507323456],
                  [0.101286507323456, 0.101286507323456, 0.797426985353087]]),
        np.array([0.225] + [0.132394152788506] * 3 + [0.125939180544827] * 3)),
}


@dataclass(frozen=True)
class WettedSurface:
    """Lagrangian interface markers with area weights and owner triangles."""

    positions: np.ndarray     # (m, 3)
    area_weights: np.ndarray  # (m,)
    triangle: np.ndarray      # (m,) owning triangle index
    barycentric: np.ndarray   # (m, 3)

    def __len__(self) -> int:
        return len(self.positions)


def extract_wetted_surface(model: WingModel,
                           markers_per_triangle: int = 3) -> WettedSurface:
    """Place interface markers at triangle quadrature points.

    Area weights are the quadrature weights scaled by triangle area, so they
    sum to the membrane area exactly.
    """
    if markers_per_triangle not in _TRI_RULES:
        raise ValueError(
            f"markers_per_triangle must be one of {sorted(_TRI_RULES)}, "
            f"got {markers_per_triangle}")
    bary, wts = _TRI_RULES[markers_per_triangle]
    mesh = model.membrane
    p = mesh.nodes[mesh.triangles]            # (m, 3, 3)
    areas = mesh.areas
    npos = np.einsum("qb,mbx->mqx", bary, p)  # (m, q, 3)
    m, q = npos.shape[:2]
    positions = npos.reshape(m * q, 3)
    weights = (areas[:, None] * wts[None, :]).reshape(m * q)
    tri_idx = np.repeat(np.arange(m), q)
    barys = np.tile(bary, (m, 1))
    return WettedSurface(positions=positions, area_weights=weights,
                         triangle=tri_idx, barycentric=barys)
