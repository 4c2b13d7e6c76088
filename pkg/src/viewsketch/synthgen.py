"""Procedural chair-like shapes, orthographic multi-view rendering, and
sketch derivation.

Stands in for a 3D-model corpus plus a projection renderer: cuboid
assemblies are rotated about the vertical axis, tilted by a fixed
elevation, orthographically projected and rasterized with flat face
shading and darker edges. Sketches are jittered edge maps of the renders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datamodel import PHOTO, SKETCH, ImageSample, ItemRef

# Orthographic view window half-extent; fixed so every view of every shape
# shares one scale.
VIEW_HALF_EXTENT = 1.15
DEFAULT_ELEVATION_DEG = 20
EDGE_SHADE = 0.45
EDGE_MIN, EDGE_MAX = 0.35, 1.0  # face shading range


class DegenerateProjectionError(RuntimeError):
    """Raised when a requested render has no visible extent."""


@dataclass(frozen=True)
class ShapeSpec:
    """Cuboid assembly: list of (center xyz, size xyz) plus a base tint."""

    shape_id: int
    cuboids: tuple  # of ((cx, cy, cz), (sx, sy, sz))
    tint: tuple     # RGB in [0, 1]

    def __post_init__(self):
        if len(self.cuboids) < 3:
            raise ValueError("a shape needs at least 3 cuboids")
        for _, size in self.cuboids:
            if min(size) <= 0:
                raise ValueError(f"cuboid sizes must be strictly positive, got {size}")
        object.__setattr__(self, "cuboids", tuple((tuple(c), tuple(s)) for c, s in self.cuboids))
        object.__setattr__(self, "tint", tuple(float(t) for t in self.tint))


@dataclass(frozen=True)
class ViewSpec:
    """Azimuth (normalized to [0, 360)) plus a fixed elevation."""

    azimuth_deg: int
    elevation_deg: int = DEFAULT_ELEVATION_DEG

    def __post_init__(self):
        object.__setattr__(self, "azimuth_deg", int(self.azimuth_deg) % 360)


def _hsv_to_rgb(h, s, v):
    i = int(h * 6.0) % 6
    f = h * 6.0 - int(h * 6.0)
    p, q, t = v * (1 - s), v * (1 - s * f), v * (1 - s * (1 - f))
    return [(v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q)][i]


def make_shape(seed: int) -> ShapeSpec:
    """Deterministically generate a chair-like assembly.

    1 seat slab + 1 back slab + 4 leg posts + optional armrest pair, with
    randomized proportions. Always bilaterally symmetric about the x = 0
    plane. Cuboid count is 6 without arms, 8 with.
    """
    rng = np.random.default_rng(seed)
    seat_w = rng.uniform(0.70, 1.10)
    seat_d = rng.uniform(0.65, 1.05)
    seat_t = rng.uniform(0.07, 0.14)
    seat_h = rng.uniform(0.45, 0.68)   # z of seat slab center
    back_h = rng.uniform(0.50, 0.95)
    back_t = rng.uniform(0.06, 0.12)
    leg_t = rng.uniform(0.06, 0.11)
    has_arms = rng.random() < 0.5
    arm_h = rng.uniform(0.16, 0.30)
    arm_t = rng.uniform(0.06, 0.11)
    hue = rng.uniform(0.0, 1.0)
    sat = rng.uniform(0.35, 0.85)
    val = rng.uniform(0.45, 0.90)

    seat_top = seat_h + seat_t / 2
    cuboids = [((0.0, 0.0, seat_h), (seat_w, seat_d, seat_t))]
    cuboids.append(((0.0, -(seat_d / 2 - back_t / 2), seat_top + back_h / 2),
                    (seat_w * 0.94, back_t, back_h)))
    leg_z = (seat_h - seat_t / 2) / 2
    leg_len = seat_h - seat_t / 2
    lx = seat_w / 2 - leg_t / 2
    ly = seat_d / 2 - leg_t / 2
    for sy in (-1.0, 1.0):
        for sx in (-1.0, 1.0):
            cuboids.append(((sx * lx, sy * ly, leg_z), (leg_t, leg_t, leg_len)))
    if has_arms:
        ax = seat_w / 2 - arm_t / 2
        for sx in (-1.0, 1.0):
            cuboids.append(((sx * ax, -seat_d * 0.05, seat_top + arm_h / 2),
                            (arm_t, seat_d * 0.62, arm_h)))
    return ShapeSpec(shape_id=int(seed), cuboids=tuple(cuboids), tint=_hsv_to_rgb(hue, sat, val))


_EXACT_TRIG = {0: (1.0, 0.0), 90: (0.0, 1.0), 180: (-1.0, 0.0), 270: (0.0, -1.0)}


def _cos_sin_deg(deg):
    # Exact values at right angles keep mirror views bit-exact.
    d = int(deg) % 360
    if d in _EXACT_TRIG:
        return _EXACT_TRIG[d]
    r = math.radians(d)
    return math.cos(r), math.sin(r)


# Canonical cuboid faces: (normal axis/sign, 4 corner signs). Corners wind
# counter-clockwise seen from outside.
_FACES = [
    ((1, 0, 0), [(1, -1, -1), (1, 1, -1), (1, 1, 1), (1, -1, 1)]),
    ((-1, 0, 0), [(-1, 1, -1), (-1, -1, -1), (-1, -1, 1), (-1, 1, 1)]),
    ((0, 1, 0), [(1, 1, -1), (-1, 1, -1), (-1, 1, 1), (1, 1, 1)]),
    ((0, -1, 0), [(-1, -1, -1), (1, -1, -1), (1, -1, 1), (-1, -1, 1)]),
    ((0, 0, 1), [(-1, -1, 1), (1, -1, 1), (1, 1, 1), (-1, 1, 1)]),
    ((0, 0, -1), [(-1, 1, -1), (1, 1, -1), (1, -1, -1), (-1, -1, -1)]),
]

# Light direction in camera-attached coordinates; no x component so shading
# is invariant under the horizontal mirror.
_LIGHT = (0.0, 0.55, 0.83)


def _pixel_centers(img_size: int):
    # Symmetric pixel-center coordinates: column i maps to an exact negation
    # of column img_size-1-i.
    m = 2 * np.arange(img_size) + 1 - img_size
    u = (m * VIEW_HALF_EXTENT) / img_size
    return u, -u  # columns left-to-right, rows top-to-bottom


def render_view(shape: ShapeSpec, view: ViewSpec, img_size: int, split: str = "train") -> ImageSample:
    """Orthographic render of the shape at the view's azimuth/elevation.

    Pure function of its arguments. Returns a photo ImageSample whose ref
    carries the shape id and normalized azimuth.
    """
    if img_size < 16:
        raise ValueError(f"img_size must be >= 16, got {img_size}")
    cos_a, sin_a = _cos_sin_deg(view.azimuth_deg)
    cos_e, sin_e = _cos_sin_deg(view.elevation_deg)

    faces = []  # (sort_key, order, quad_uv, shade)
    order = 0
    for center, size in shape.cuboids:
        cx, cy, cz = center
        hx, hy, hz = size[0] / 2, size[1] / 2, size[2] / 2
        for normal, corners in _FACES:
            nx, ny, nz = normal
            # rotate normal about z by azimuth
            npy = nx * sin_a + ny * cos_a
            # visible iff normal points toward the camera
            toward = npy * cos_e + nz * sin_e
            if toward <= 0.0:
                continue
            us, vs, depths = [], [], []
            for sx, sy, sz in corners:
                x = cx + sx * hx
                y = cy + sy * hy
                z = cz + sz * hz
                xr = x * cos_a - y * sin_a
                yr = x * sin_a + y * cos_a
                us.append(xr)
                vs.append(-yr * sin_e + z * cos_e)
                depths.append(yr * cos_e + z * sin_e)
            shade = EDGE_MIN + (EDGE_MAX - EDGE_MIN) * max(0.0, npy * _LIGHT[1] + nz * _LIGHT[2])
            key = float(np.sort(np.asarray(depths)).sum())
            faces.append((key, order, np.array(us), np.array(vs), shade))
            order += 1

    if not faces:
        raise DegenerateProjectionError("no visible faces under this view")

    faces.sort(key=lambda f: (f[0], f[1]))  # far to near, stable
    ucol, vrow = _pixel_centers(img_size)
    canvas = np.ones((img_size, img_size, 3), dtype=np.float64)
    tint = np.asarray(shape.tint)
    edge_w = 0.9 * (2 * VIEW_HALF_EXTENT / img_size)
    painted = 0

    for _, _, qu, qv, shade in faces:
        lo_u, hi_u = qu.min(), qu.max()
        lo_v, hi_v = qv.min(), qv.max()
        ci = np.nonzero((ucol >= lo_u - edge_w) & (ucol <= hi_u + edge_w))[0]
        ri = np.nonzero((vrow >= lo_v - edge_w) & (vrow <= hi_v + edge_w))[0]
        if len(ci) == 0 or len(ri) == 0:
            continue
        pu = ucol[ci][None, :]
        pv = vrow[ri][:, None]
        # convex quad inside test via edge functions; the sign-agnostic form
        # is exact under horizontal mirroring
        pos = np.ones((len(ri), len(ci)), dtype=bool)
        neg = np.ones_like(pos)
        edge2 = np.zeros_like(pos)
        for k in range(4):
            x1, y1 = qu[k], qv[k]
            x2, y2 = qu[(k + 1) % 4], qv[(k + 1) % 4]
            cross = (x2 - x1) * (pv - y1) - (y2 - y1) * (pu - x1)
            pos &= cross >= 0
            neg &= cross <= 0
            # squared distance to the boundary segment
            ex, ey = x2 - x1, y2 - y1
            ln = ex * ex + ey * ey
            if ln > 0:
                t = ((pu - x1) * ex + (pv - y1) * ey) / ln
                t = np.clip(t, 0.0, 1.0)
            else:
                t = 0.0
            dx = pu - (x1 + t * ex)
            dy = pv - (y1 + t * ey)
            edge2 |= dx * dx + dy * dy <= edge_w * edge_w
        inside = pos | neg
        fill = np.clip(tint * shade, 0.0, 1.0)
        block = canvas[np.ix_(ri, ci)]
        block[inside] = fill
        block[inside & edge2] = fill * EDGE_SHADE
        canvas[np.ix_(ri, ci)] = block
        painted += int(inside.sum())

    if painted == 0:
        raise DegenerateProjectionError("projection has zero pixel extent")

    ref = ItemRef(shape.shape_id, PHOTO, view.azimuth_deg, split=split)
    return ImageSample(ref=ref, pixels=canvas)


EDGE_GRAD_THRESHOLD = 0.08


def edge_map(pixels: np.ndarray) -> np.ndarray:
    """Boolean stroke mask: gradient-magnitude threshold on luminance."""
    gray = pixels[..., 0] * 0.299 + pixels[..., 1] * 0.587 + pixels[..., 2] * 0.114
    gy, gx = np.gradient(gray)
    return np.sqrt(gx * gx + gy * gy) > EDGE_GRAD_THRESHOLD


_SEGMENT_LEN = 8  # edge pixels per stroke segment, scan order


def sketchify(photo: ImageSample, jitter_px: float, dropout_frac: float, seed: int) -> ImageSample:
    """Derive a sketch from a photo: jittered, partially dropped edge strokes.

    Keeps instance_id and view_deg, flips modality to sketch. Deterministic
    per seed; jitter_px=0 and dropout_frac=0 reproduce the clean edge map.
    """
    if photo.ref.modality != PHOTO:
        raise ValueError("sketchify expects a photo input")
    if not (0.0 <= dropout_frac < 1.0):
        raise ValueError(f"dropout_frac must lie in [0, 1), got {dropout_frac}")
    size = photo.size
    mask = edge_map(photo.pixels)
    coords = np.argwhere(mask)  # scan order, deterministic
    rng = np.random.default_rng(seed)

    n_seg = math.ceil(len(coords) / _SEGMENT_LEN)
    keep = coords
    if n_seg > 0 and dropout_frac > 0:
        n_drop = int(math.floor(dropout_frac * n_seg))
        dropped = set(rng.choice(n_seg, size=n_drop, replace=False).tolist())
        seg_ids = np.arange(len(coords)) // _SEGMENT_LEN
        keep = coords[~np.isin(seg_ids, list(dropped))] if dropped else coords
    if jitter_px > 0 and len(keep):
        offs = rng.normal(0.0, jitter_px, size=keep.shape)
        keep = np.clip(np.rint(keep + offs).astype(int), 0, size - 1)

    canvas = np.ones((size, size), dtype=np.float64)
    if len(keep):
        canvas[keep[:, 0], keep[:, 1]] = 0.0
    pixels = np.repeat(canvas[:, :, None], 3, axis=2)
    ref = ItemRef(photo.ref.instance_id, SKETCH, photo.ref.view_deg, split=photo.ref.split)
    return ImageSample(ref=ref, pixels=pixels)
