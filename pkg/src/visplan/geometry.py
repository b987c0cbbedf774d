"""Rigid transforms, convex shapes, and signed distance between convex bodies.

Everything here is immutable after construction and all operations are pure
functions, so values can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

_AXIS_X = np.array([1.0, 0.0, 0.0])


def wrap_angle(a):
    """Wrap angle(s) to the interval (-pi, pi]."""
    return -((-np.asarray(a, dtype=float) + np.pi) % (2.0 * np.pi) - np.pi)


# ---------------------------------------------------------------------------
# quaternions (w, x, y, z) and roll/pitch/yaw (ZYX convention, z up)
# ---------------------------------------------------------------------------

def quat_normalize(q):
    q = np.asarray(q, dtype=float)
    n = math.sqrt(float(q @ q))
    if n == 0.0:
        raise ValueError("zero quaternion")
    return q / n


def quat_mul(q1, q2):
    w1, x1, y1, z1 = q1
    w2, x2, y2, z2 = q2
    return np.array([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ])


def quat_conj(q):
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_to_matrix(q):
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def rpy_to_quat(rpy):
    """Quaternion for R = Rz(yaw) Ry(pitch) Rx(roll)."""
    r, p, y = rpy
    cr, sr = math.cos(r / 2), math.sin(r / 2)
    cp, sp = math.cos(p / 2), math.sin(p / 2)
    cy, sy = math.cos(y / 2), math.sin(y / 2)
    return np.array([
        cy * cp * cr + sy * sp * sr,
        cy * cp * sr - sy * sp * cr,
        cy * sp * cr + sy * cp * sr,
        sy * cp * cr - cy * sp * sr,
    ])


def quat_to_rpy(q):
    w, x, y, z = quat_normalize(q)
    sinp = 2.0 * (w * y - z * x)
    sinp = min(1.0, max(-1.0, sinp))
    pitch = math.asin(sinp)
    if abs(sinp) > 1.0 - 1e-12:
        # gimbal lock: fold yaw into roll
        roll = math.atan2(-2.0 * (y * z - w * x), 1.0 - 2.0 * (x * x + z * z))
        yaw = 0.0
    else:
        roll = math.atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y))
        yaw = math.atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z))
    return np.array([roll, pitch, yaw])


def rpy_to_matrix(rpy):
    return quat_to_matrix(rpy_to_quat(rpy))


def quat_angle(q1, q2):
    """Geodesic angle in [0, pi] between two unit quaternions."""
    rel = quat_mul(quat_conj(q1), q2)
    w = abs(rel[0])
    v = math.sqrt(max(0.0, float(rel[1:] @ rel[1:])))
    return 2.0 * math.atan2(v, w)


def quat_slerp(q1, q2, t):
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    dot = float(q1 @ q2)
    if dot < 0.0:
        q2 = -q2
        dot = -dot
    if dot > 1.0 - 1e-12:
        return quat_normalize(q1 + t * (q2 - q1))
    theta = math.acos(min(1.0, dot))
    s = math.sin(theta)
    a = math.sin((1.0 - t) * theta) / s
    b = math.sin(t * theta) / s
    return quat_normalize(a * q1 + b * q2)


def rpy_rate_matrix(rpy):
    """Matrix E with world angular velocity = E @ d(rpy)/dt.

    Columns are the world-frame rotation axes of the roll, pitch and yaw
    coordinates at the given attitude.
    """
    r, p, y = rpy
    cy, sy = math.cos(y), math.sin(y)
    cp, sp = math.cos(p), math.sin(p)
    # Rz(y) Ry(p) ex, Rz(y) ey, ez
    return np.array([
        [cy * cp, -sy, 0.0],
        [sy * cp, cy, 0.0],
        [-sp, 0.0, 1.0],
    ])


# ---------------------------------------------------------------------------
# rigid transforms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RigidTransform:
    """Rotation (unit quaternion) plus translation, mapping local to parent frame."""

    translation: np.ndarray
    quaternion: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.translation, dtype=float).reshape(3)
        q = quat_normalize(self.quaternion)
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "quaternion", q)

    @staticmethod
    def identity():
        return RigidTransform(np.zeros(3), np.array([1.0, 0.0, 0.0, 0.0]))

    @staticmethod
    def from_rpy(translation, rpy):
        return RigidTransform(np.asarray(translation, dtype=float), rpy_to_quat(rpy))

    def rotation_matrix(self):
        return quat_to_matrix(self.quaternion)

    def rpy(self):
        return quat_to_rpy(self.quaternion)

    def compose(self, other: "RigidTransform") -> "RigidTransform":
        R = self.rotation_matrix()
        return RigidTransform(self.translation + R @ other.translation,
                              quat_mul(self.quaternion, other.quaternion))

    def inverse(self) -> "RigidTransform":
        qc = quat_conj(self.quaternion)
        return RigidTransform(-(quat_to_matrix(qc) @ self.translation), qc)

    def apply(self, points):
        """Map local point(s) into the parent frame. Accepts (3,) or (N, 3)."""
        pts = np.asarray(points, dtype=float)
        R = self.rotation_matrix()
        if pts.ndim == 1:
            return R @ pts + self.translation
        return pts @ R.T + self.translation


def project_point(world_from_state: RigidTransform, state_from_cam: RigidTransform,
                  distance: float) -> np.ndarray:
    """World point a given distance along a mounted camera's forward (+x) axis."""
    if distance <= 0.0:
        raise ValueError("projection distance must be > 0")
    cam = world_from_state.compose(state_from_cam)
    return cam.apply(distance * _AXIS_X)


# ---------------------------------------------------------------------------
# convex shapes
# ---------------------------------------------------------------------------

_BOX_CORNER_SIGNS = np.array([[sx, sy, sz]
                              for sx in (-1.0, 1.0)
                              for sy in (-1.0, 1.0)
                              for sz in (-1.0, 1.0)])


def _icosphere_directions():
    """Unit directions of a once-subdivided icosahedron (42 vertices)."""
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    base = np.array([
        [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
        [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
        [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
    ], dtype=float)
    base /= np.linalg.norm(base, axis=1, keepdims=True)
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    edges = set()
    for (i, j, k) in faces:
        for a, b in ((i, j), (j, k), (k, i)):
            edges.add((min(a, b), max(a, b)))
    mids = np.array([base[a] + base[b] for (a, b) in sorted(edges)])
    mids /= np.linalg.norm(mids, axis=1, keepdims=True)
    return np.vstack([base, mids])


_ICO_DIRS = _icosphere_directions()
# scale so the polytope circumscribes the unit ball (vertices pushed outward
# to the inverse of the polytope inradius)
_ICO_INRADIUS = None


def _ico_circumscribed():
    global _ICO_INRADIUS
    if _ICO_INRADIUS is None:
        from scipy.spatial import ConvexHull
        hull = ConvexHull(_ICO_DIRS)
        _ICO_INRADIUS = float(np.min(-hull.equations[:, 3]))
    return _ICO_DIRS / _ICO_INRADIUS


@dataclass(frozen=True, eq=False)
class ConvexShape:
    """A convex body: sphere, box, or vertex hull, with a rigid pose.

    Hull vertices are stored in the local frame; `pose` places the shape in
    the world (or, for a robot body part, in the vehicle frame).
    """

    kind: str
    pose: RigidTransform
    radius: float = 0.0
    half_extents: np.ndarray | None = None
    vertices: np.ndarray | None = None

    @staticmethod
    def sphere(radius: float, center=(0.0, 0.0, 0.0)) -> "ConvexShape":
        if not radius > 0.0:
            raise ValueError("sphere radius must be > 0")
        pose = RigidTransform(np.asarray(center, dtype=float),
                              np.array([1.0, 0.0, 0.0, 0.0]))
        return ConvexShape(kind="sphere", pose=pose, radius=float(radius))

    @staticmethod
    def box(half_extents, pose: RigidTransform | None = None) -> "ConvexShape":
        he = np.asarray(half_extents, dtype=float).reshape(3)
        if not np.all(he > 0.0):
            raise ValueError("box half-extents must be > 0 componentwise")
        return ConvexShape(kind="box", pose=pose or RigidTransform.identity(),
                           half_extents=he)

    @staticmethod
    def hull(vertices, pose: RigidTransform | None = None) -> "ConvexShape":
        v = np.asarray(vertices, dtype=float).reshape(-1, 3)
        if v.shape[0] < 4:
            raise ValueError("hull needs at least 4 vertices")
        centered = v - v.mean(axis=0)
        sv = np.linalg.svd(centered, compute_uv=False)
        if sv[2] < 1e-9 * max(1.0, sv[0]):
            raise ValueError("hull vertices are degenerate (coplanar)")
        return ConvexShape(kind="hull", pose=pose or RigidTransform.identity(),
                           vertices=v)

    def at_pose(self, world_from_body: RigidTransform) -> "ConvexShape":
        """The same shape observed through an extra leading transform."""
        return ConvexShape(kind=self.kind, pose=world_from_body.compose(self.pose),
                           radius=self.radius, half_extents=self.half_extents,
                           vertices=self.vertices)

    def world_vertices(self) -> np.ndarray:
        """Core polytope vertices in the world frame (sphere: its center)."""
        if self.kind == "sphere":
            return self.pose.translation.reshape(1, 3)
        if self.kind == "box":
            return self.pose.apply(_BOX_CORNER_SIGNS * self.half_extents)
        return self.pose.apply(self.vertices)

    @property
    def margin(self) -> float:
        return self.radius if self.kind == "sphere" else 0.0

    def support(self, direction) -> np.ndarray:
        """Farthest surface point of the shape along `direction`."""
        d = np.asarray(direction, dtype=float)
        n = np.linalg.norm(d)
        d = _AXIS_X if n == 0.0 else d / n
        if self.kind == "sphere":
            return self.pose.translation + self.radius * d
        if self.kind == "box":
            R = self.pose.rotation_matrix()
            local = R.T @ d
            corner = np.where(local >= 0.0, self.half_extents, -self.half_extents)
            return self.pose.apply(corner)
        verts = self.world_vertices()
        return verts[int(np.argmax(verts @ d))]

    def bounding_sphere(self):
        """(center, radius) of a sphere containing the shape."""
        verts = self.world_vertices()
        center = verts.mean(axis=0)
        r = float(np.max(np.linalg.norm(verts - center, axis=1))) + self.margin
        return center, r


@lru_cache(maxsize=512)
def hull_facets(shape: ConvexShape):
    """Outward facet normals and offsets (n, d) with n.x <= d inside the hull."""
    from scipy.spatial import ConvexHull
    verts = shape.world_vertices()
    hull = ConvexHull(verts)
    normals = hull.equations[:, :3].copy()
    offsets = -hull.equations[:, 3].copy()
    normals.setflags(write=False)
    offsets.setflags(write=False)
    return normals, offsets


# ---------------------------------------------------------------------------
# GJK distance / EPA penetration on polytope cores
# ---------------------------------------------------------------------------

class DistanceResult(NamedTuple):
    """Signed distance plus the core witness points that realize it.

    `normal` is the unit direction along which translating shape A increases
    the signed distance.  `weights_a` maps core-vertex indices of A to convex
    weights of the witness point (needed to split gradients of swept hulls).
    """

    distance: float
    point_a: np.ndarray
    point_b: np.ndarray
    normal: np.ndarray
    weights_a: dict


def _closest_on_segment(a, b):
    ab = b - a
    denom = float(ab @ ab)
    if denom < 1e-30:
        return np.array([1.0]), [0]
    t = -float(a @ ab) / denom
    if t <= 0.0:
        return np.array([1.0]), [0]
    if t >= 1.0:
        return np.array([1.0]), [1]
    return np.array([1.0 - t, t]), [0, 1]


def _closest_on_triangle(a, b, c):
    ab = b - a
    ac = c - a
    d1 = float(ab @ -a)
    d2 = float(ac @ -a)
    if d1 <= 0.0 and d2 <= 0.0:
        return np.array([1.0]), [0]
    d3 = float(ab @ -b)
    d4 = float(ac @ -b)
    if d3 >= 0.0 and d4 <= d3:
        return np.array([1.0]), [1]
    vc = d1 * d4 - d3 * d2
    if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0:
        v = d1 / (d1 - d3)
        return np.array([1.0 - v, v]), [0, 1]
    d5 = float(ab @ -c)
    d6 = float(ac @ -c)
    if d6 >= 0.0 and d5 <= d6:
        return np.array([1.0]), [2]
    vb = d5 * d2 - d1 * d6
    if vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0:
        w = d2 / (d2 - d6)
        return np.array([1.0 - w, w]), [0, 2]
    va = d3 * d6 - d5 * d4
    if va <= 0.0 and (d4 - d3) >= 0.0 and (d5 - d6) >= 0.0:
        w = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        return np.array([1.0 - w, w]), [1, 2]
    total = va + vb + vc
    if abs(total) < 1e-30:
        # degenerate triangle: fall back to the best edge
        tri = (a, b, c)
        best = None
        for (i, j) in ((0, 1), (0, 2), (1, 2)):
            lam, keep = _closest_on_segment(tri[i], tri[j])
            idx = [(i, j)[m] for m in keep]
            p = lam @ np.array([tri[m] for m in idx])
            d = float(p @ p)
            if best is None or d < best[0]:
                best = (d, lam, idx)
        return best[1], best[2]
    denom = 1.0 / total
    v = vb * denom
    w = vc * denom
    return np.array([1.0 - v - w, v, w]), [0, 1, 2]


def _closest_on_tetra(pts):
    """(weights, keep, inside) of the origin against a tetrahedron."""
    faces = ((0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 3, 1), (1, 2, 3, 0))
    inside = True
    for (i, j, k, l) in faces:
        n = np.cross(pts[j] - pts[i], pts[k] - pts[i])
        nn = float(n @ n)
        if nn < 1e-30:
            inside = False
            continue
        side_opp = float(n @ (pts[l] - pts[i]))
        side_origin = -float(n @ pts[i])
        if abs(side_opp) < 1e-14 * math.sqrt(nn) or side_opp * side_origin < 0.0:
            inside = False
    if inside:
        return None, None, True
    best = None
    for (i, j, k, _) in faces:
        lam, keep = _closest_on_triangle(pts[i], pts[j], pts[k])
        idx = [(i, j, k)[m] for m in keep]
        p = lam @ np.array([pts[m] for m in idx])
        d = float(p @ p)
        if best is None or d < best[0]:
            best = (d, lam, idx)
    return best[1], best[2], False


def _closest_simplex(pts):
    k = len(pts)
    if k == 1:
        return np.array([1.0]), [0], False
    if k == 2:
        lam, keep = _closest_on_segment(pts[0], pts[1])
        return lam, keep, False
    if k == 3:
        lam, keep = _closest_on_triangle(pts[0], pts[1], pts[2])
        return lam, keep, False
    return _closest_on_tetra(pts)


class _MinkowskiVertex(NamedTuple):
    p: np.ndarray
    ia: int
    ib: int


def _mk_support(va, vb, direction):
    ia = int(np.argmax(va @ direction))
    ib = int(np.argmax(vb @ -direction))
    return _MinkowskiVertex(va[ia] - vb[ib], ia, ib)


def _witnesses(va, vb, simplex, lam):
    wa = np.zeros(3)
    wb = np.zeros(3)
    weights_a: dict = {}
    for w, vert in zip(lam, simplex):
        wa += w * va[vert.ia]
        wb += w * vb[vert.ib]
        weights_a[vert.ia] = weights_a.get(vert.ia, 0.0) + float(w)
    return wa, wb, weights_a


def _contact_fallback(va, vb):
    d = va.mean(axis=0) - vb.mean(axis=0)
    n = np.linalg.norm(d)
    normal = d / n if n > 1e-12 else np.array([0.0, 0.0, 1.0])
    wa = va.mean(axis=0)
    return DistanceResult(0.0, wa, vb.mean(axis=0), normal,
                          {i: 1.0 / len(va) for i in range(len(va))})


def _gjk(va, vb, max_iter=96):
    d0 = va.mean(axis=0) - vb.mean(axis=0)
    if float(d0 @ d0) < 1e-20:
        d0 = _AXIS_X
    simplex = [_mk_support(va, vb, d0)]
    for _ in range(max_iter):
        lam, keep, inside = _closest_simplex([w.p for w in simplex])
        if inside:
            return _epa(va, vb, simplex)
        simplex = [simplex[i] for i in keep]
        v = lam @ np.array([w.p for w in simplex])
        vv = float(v @ v)
        if vv < 1e-24:
            return _contact_fallback(va, vb)
        new = _mk_support(va, vb, -v)
        if vv - float(v @ new.p) <= 1e-10 * max(1.0, vv):
            break
        if any(new.ia == w.ia and new.ib == w.ib for w in simplex):
            break
        simplex.append(new)
    lam, keep, inside = _closest_simplex([w.p for w in simplex])
    if inside:
        return _epa(va, vb, simplex)
    simplex = [simplex[i] for i in keep]
    v = lam @ np.array([w.p for w in simplex])
    dist = float(np.linalg.norm(v))
    if dist < 1e-12:
        return _contact_fallback(va, vb)
    wa, wb, weights_a = _witnesses(va, vb, simplex, lam)
    return DistanceResult(dist, wa, wb, v / dist, weights_a)


def _epa(va, vb, simplex, max_iter=128, tol=1e-10):
    verts = list(simplex)
    # grow a proper tetrahedron if the incoming simplex is degenerate
    probe = [np.array([1.0, 0, 0]), np.array([-1.0, 0, 0]),
             np.array([0, 1.0, 0]), np.array([0, -1.0, 0]),
             np.array([0, 0, 1.0]), np.array([0, 0, -1.0])]
    pi = 0
    while len(verts) < 4 and pi < len(probe):
        cand = _mk_support(va, vb, probe[pi])
        pi += 1
        if not any(np.allclose(cand.p, w.p, atol=1e-12) for w in verts):
            verts.append(cand)
    if len(verts) < 4:
        return _contact_fallback(va, vb)

    def volume(ws):
        m = np.array([ws[1].p - ws[0].p, ws[2].p - ws[0].p, ws[3].p - ws[0].p])
        return abs(float(np.linalg.det(m)))

    if volume(verts[:4]) < 1e-18:
        for d in probe:
            cand = _mk_support(va, vb, d)
            for drop in range(4):
                trial = verts[:drop] + verts[drop + 1:4] + [cand]
                if volume(trial) > 1e-18:
                    verts = trial
                    break
            if volume(verts[:4]) > 1e-18:
                break
        if volume(verts[:4]) < 1e-18:
            return _contact_fallback(va, vb)
    verts = verts[:4]

    interior = np.mean([w.p for w in verts], axis=0)

    def make_face(i, j, k):
        n = np.cross(verts[j].p - verts[i].p, verts[k].p - verts[i].p)
        nn = float(np.linalg.norm(n))
        if nn < 1e-18:
            return None
        n = n / nn
        if float(n @ (verts[i].p - interior)) < 0.0:
            n = -n
            i, j = j, i
        return [i, j, k, n, float(n @ verts[i].p)]

    faces = []
    for (i, j, k) in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        f = make_face(i, j, k)
        if f is None:
            return _contact_fallback(va, vb)
        faces.append(f)

    for _ in range(max_iter):
        fmin = min(faces, key=lambda f: f[4])
        dist = max(0.0, fmin[4])
        new = _mk_support(va, vb, fmin[3])
        growth = float(fmin[3] @ new.p) - fmin[4]
        if growth <= tol * max(1.0, dist):
            break
        verts.append(new)
        wi = len(verts) - 1
        visible = [f for f in faces if float(f[3] @ (new.p - verts[f[0]].p)) > 1e-12]
        if not visible:
            break
        edges = {}
        for f in visible:
            for (a, b) in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
                key = (min(a, b), max(a, b))
                edges[key] = edges.get(key, 0) + 1
        faces = [f for f in faces if f not in visible]
        ok = True
        for (a, b), count in edges.items():
            if count == 1:
                nf = make_face(a, b, wi)
                if nf is None:
                    ok = False
                    break
                faces.append(nf)
        if not ok or not faces:
            break

    fmin = min(faces, key=lambda f: f[4])
    depth = max(0.0, fmin[4])
    n_out = fmin[3]
    # barycentric weights of the origin's projection on the closest face
    a, b, c = (verts[fmin[0]].p, verts[fmin[1]].p, verts[fmin[2]].p)
    x = depth * n_out
    m = np.column_stack([b - a, c - a])
    uv, *_ = np.linalg.lstsq(m, x - a, rcond=None)
    lam = np.array([1.0 - uv[0] - uv[1], uv[0], uv[1]])
    lam = np.clip(lam, 0.0, None)
    s = lam.sum()
    lam = lam / s if s > 0 else np.array([1.0, 0.0, 0.0])
    tri = [verts[fmin[0]], verts[fmin[1]], verts[fmin[2]]]
    wa, wb, weights_a = _witnesses(va, vb, tri, lam)
    return DistanceResult(-depth, wa, wb, -n_out, weights_a)


# ---------------------------------------------------------------------------
# shape-level signed distance
# ---------------------------------------------------------------------------

class _Core(NamedTuple):
    verts: np.ndarray
    margin: float
    box: tuple | None  # (center, rotation, half_extents) when an exact box


def shape_core(shape: ConvexShape) -> _Core:
    if shape.kind == "sphere":
        return _Core(shape.pose.translation.reshape(1, 3), shape.radius, None)
    if shape.kind == "box":
        return _Core(shape.world_vertices(), 0.0,
                     (shape.pose.translation, shape.pose.rotation_matrix(),
                      shape.half_extents))
    return _Core(shape.world_vertices(), 0.0, None)


def _point_vs_box(p, box):
    center, R, he = box
    q = R.T @ (p - center)
    clamped = np.clip(q, -he, he)
    delta = q - clamped
    dist = float(np.linalg.norm(delta))
    if dist > 0.0:
        n_local = delta / dist
        return DistanceResult(dist, p, center + R @ clamped, R @ n_local, {0: 1.0})
    slack = he - np.abs(q)
    k = int(np.argmin(slack))
    depth = float(slack[k])
    sign = 1.0 if q[k] >= 0.0 else -1.0
    n_local = np.zeros(3)
    n_local[k] = sign
    surf = q.copy()
    surf[k] = sign * he[k]
    return DistanceResult(-depth, p, center + R @ surf, R @ n_local, {0: 1.0})


def core_distance(core_a: _Core, core_b: _Core) -> DistanceResult:
    """Signed distance between two margin-expanded convex cores."""
    na, nb = len(core_a.verts), len(core_b.verts)
    if na == 1 and nb == 1:
        d = core_a.verts[0] - core_b.verts[0]
        dist = float(np.linalg.norm(d))
        if dist < 1e-12:
            res = DistanceResult(0.0, core_a.verts[0], core_b.verts[0],
                                 np.array([0.0, 0.0, 1.0]), {0: 1.0})
        else:
            res = DistanceResult(dist, core_a.verts[0], core_b.verts[0],
                                 d / dist, {0: 1.0})
    elif na == 1 and core_b.box is not None:
        res = _point_vs_box(core_a.verts[0], core_b.box)
    elif nb == 1 and core_a.box is not None:
        r = _point_vs_box(core_b.verts[0], core_a.box)
        res = DistanceResult(r.distance, r.point_b, r.point_a, -r.normal, None)
        # witness weights over A's corners are not tracked on this path; the
        # box is a rigid body so gradients use the witness point directly
        res = res._replace(weights_a={})
    else:
        res = _gjk(core_a.verts, core_b.verts)
    total = res.distance - core_a.margin - core_b.margin
    return res._replace(distance=total)


def signed_distance_witness(a: ConvexShape, b: ConvexShape) -> DistanceResult:
    return core_distance(shape_core(a), shape_core(b))


def signed_distance(a: ConvexShape, b: ConvexShape) -> float:
    """Separation distance (> 0), 0 at touch, or negative penetration depth."""
    return signed_distance_witness(a, b).distance


def point_signed_distance(shape: ConvexShape, point) -> float:
    """Signed distance from a point to a shape's surface (negative inside)."""
    core = _Core(np.asarray(point, dtype=float).reshape(1, 3), 0.0, None)
    return core_distance(core, shape_core(shape)).distance


# ---------------------------------------------------------------------------
# swept volumes
# ---------------------------------------------------------------------------

def _poses_coincide(pa: RigidTransform, pb: RigidTransform) -> bool:
    return (np.allclose(pa.translation, pb.translation, atol=1e-12)
            and quat_angle(pa.quaternion, pb.quaternion) < 1e-12)


def swept_hull(shape: ConvexShape, pose_a: RigidTransform,
               pose_b: RigidTransform) -> ConvexShape:
    """Convex hull of a body shape placed at two poses.

    Spheres are discretized as circumscribed 42-vertex icosphere hulls so the
    result strictly contains both end balls; coincident poses return the
    single-pose shape unchanged.
    """
    if _poses_coincide(pose_a, pose_b):
        return shape.at_pose(pose_a)
    if shape.kind == "sphere":
        dirs = _ico_circumscribed() * shape.radius
        ca = pose_a.apply(shape.pose.translation)
        cb = pose_b.apply(shape.pose.translation)
        verts = np.vstack([ca + dirs, cb + dirs])
    else:
        verts = np.vstack([shape.at_pose(pose_a).world_vertices(),
                           shape.at_pose(pose_b).world_vertices()])
    return ConvexShape.hull(verts)


def swept_core(shape: ConvexShape, pose_a: RigidTransform,
               pose_b: RigidTransform) -> tuple[_Core, int]:
    """Distance core of the volume swept between two poses.

    For spheres this is the exact capsule (two centers plus the radius as
    margin); for boxes and hulls it is the end-pose vertex union, matching
    `swept_hull`.  Returns the core and the number of vertices owned by
    `pose_a` (the rest belong to `pose_b`).
    """
    if shape.kind == "sphere":
        ca = pose_a.apply(shape.pose.translation).reshape(1, 3)
        cb = pose_b.apply(shape.pose.translation).reshape(1, 3)
        return _Core(np.vstack([ca, cb]), shape.radius, None), 1
    va = shape.at_pose(pose_a).world_vertices()
    vb = shape.at_pose(pose_b).world_vertices()
    return _Core(np.vstack([va, vb]), 0.0, None), len(va)
