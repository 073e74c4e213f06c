"""Icosahedral grid geometry: face layout, base cells, derived lookup tables.

The face centers, face axis azimuths, and base-cell home positions are the
published constants of the standard hexagonal hierarchical index; everything
else (face adjacency, inter-face coordinate transforms, the reverse base-cell
lookup and its rotations) is re-derived from those seeds at import time and
cross-checked geometrically, so an inconsistent seed fails loudly rather than
silently mis-tiling the sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import coordijk
from .sphere import (
    angle_between,
    az_distance_point,
    azimuth,
    geo_to_xyz,
    pos_angle,
)

NUM_FACES = 20
NUM_BASE_CELLS = 122
MAX_FACE_COORD = 2

SQRT7 = math.sqrt(7.0)
# rotation between successive (class II -> class III) grid resolutions
AP7_ROT_RADS = math.asin(math.sqrt(3.0 / 28.0))
# gnomonic plane distance of one res-0 lattice unit (face vertices sit at 2.0)
RES0_U_GNOMONIC = 0.38196601125010500003

# quadrants used for face-edge overage handling
IJ, KI, JK = 1, 2, 3

# (lat, lng) of the 20 icosahedron face centers, radians
FACE_CENTER_GEO: tuple[tuple[float, float], ...] = (
    (0.803582649718989942, 1.248397419617396099),
    (1.307747883455638156, 2.536945009877921159),
    (1.054751253523952054, -1.347517358900396623),
    (0.600191595538186799, -0.450603909469755746),
    (0.491715428198773866, 0.401988202911306943),
    (0.172745327415618701, 1.678146885280433686),
    (0.605929321571350690, 2.953923329812411617),
    (0.427370518328979641, -1.888876200336285401),
    (-0.079066118549212831, -0.733429513380867741),
    (-0.230961644455383637, 0.506495587332349035),
    (0.079066118549212831, 2.408163140208925497),
    (0.230961644455383637, -2.635097066257444203),
    (-0.172745327415618701, -1.463445768309359553),
    (-0.605929321571350690, -0.187669323777381622),
    (-0.427370518328979641, 1.252716453253507838),
    (-0.600191595538186799, 2.690988744120037492),
    (-0.491715428198773866, -2.739604450678486295),
    (-0.803582649718989942, -1.893195233972397139),
    (-1.307747883455638156, -0.604647643711872080),
    (-1.054751253523952054, 1.794075294689396615),
)

# azimuth from each face center to its vertex 0 (the class II i-axis);
# vertices 1 and 2 follow at -120 degree steps
FACE_AXES_AZ: tuple[float, ...] = (
    5.619958268523939882,
    5.760339081714187279,
    0.780213654393430055,
    0.430469363979999913,
    6.130269123335111400,
    2.692877706530642877,
    2.982963003477243874,
    3.532912002790141181,
    3.494305004259568154,
    3.003214169499538391,
    5.930472956509811562,
    0.138378484090254847,
    0.448714947059150361,
    0.158629650112549365,
    5.891865957979238535,
    2.711123289609793325,
    3.294508837434268316,
    3.804819692245439833,
    3.664438879055192436,
    2.361378999196363184,
)

# home face and res-0 lattice position of each of the 122 base cells
BASE_CELL_HOMES: tuple[tuple[int, tuple[int, int, int]], ...] = (
    (1, (1, 0, 0)),    # 0
    (2, (1, 1, 0)),    # 1
    (1, (0, 0, 0)),    # 2
    (2, (1, 0, 0)),    # 3
    (0, (2, 0, 0)),    # 4 pentagon
    (1, (1, 1, 0)),    # 5
    (1, (0, 0, 1)),    # 6
    (2, (0, 0, 0)),    # 7
    (0, (1, 0, 0)),    # 8
    (2, (0, 1, 0)),    # 9
    (1, (0, 1, 0)),    # 10
    (1, (0, 1, 1)),    # 11
    (3, (1, 0, 0)),    # 12
    (3, (1, 1, 0)),    # 13
    (11, (2, 0, 0)),   # 14 pentagon
    (4, (1, 0, 0)),    # 15
    (0, (0, 0, 0)),    # 16
    (6, (0, 1, 0)),    # 17
    (0, (0, 0, 1)),    # 18
    (2, (0, 1, 1)),    # 19
    (7, (0, 0, 1)),    # 20
    (2, (0, 0, 1)),    # 21
    (0, (1, 1, 0)),    # 22
    (6, (0, 0, 1)),    # 23
    (10, (2, 0, 0)),   # 24 pentagon
    (6, (0, 0, 0)),    # 25
    (3, (0, 0, 0)),    # 26
    (11, (1, 0, 0)),   # 27
    (4, (1, 1, 0)),    # 28
    (3, (0, 1, 0)),    # 29
    (0, (0, 1, 1)),    # 30
    (4, (0, 0, 0)),    # 31
    (5, (0, 1, 0)),    # 32
    (0, (0, 1, 0)),    # 33
    (7, (0, 1, 0)),    # 34
    (11, (1, 1, 0)),   # 35
    (7, (0, 0, 0)),    # 36
    (10, (1, 0, 0)),   # 37
    (12, (2, 0, 0)),   # 38 pentagon
    (6, (1, 0, 1)),    # 39
    (7, (1, 0, 1)),    # 40
    (4, (0, 0, 1)),    # 41
    (3, (0, 0, 1)),    # 42
    (3, (0, 1, 1)),    # 43
    (4, (0, 1, 0)),    # 44
    (6, (1, 0, 0)),    # 45
    (11, (0, 0, 0)),   # 46
    (8, (0, 0, 1)),    # 47
    (5, (0, 0, 1)),    # 48
    (14, (2, 0, 0)),   # 49 pentagon
    (5, (0, 0, 0)),    # 50
    (12, (1, 0, 0)),   # 51
    (10, (1, 1, 0)),   # 52
    (4, (0, 1, 1)),    # 53
    (12, (1, 1, 0)),   # 54
    (7, (1, 0, 0)),    # 55
    (11, (0, 1, 0)),   # 56
    (10, (0, 0, 0)),   # 57
    (13, (2, 0, 0)),   # 58 pentagon
    (10, (0, 0, 1)),   # 59
    (11, (0, 0, 1)),   # 60
    (9, (0, 1, 0)),    # 61
    (8, (0, 1, 0)),    # 62
    (6, (2, 0, 0)),    # 63 pentagon
    (8, (0, 0, 0)),    # 64
    (9, (0, 0, 1)),    # 65
    (14, (1, 0, 0)),   # 66
    (5, (1, 0, 1)),    # 67
    (16, (0, 1, 1)),   # 68
    (8, (1, 0, 1)),    # 69
    (5, (1, 0, 0)),    # 70
    (12, (0, 0, 0)),   # 71
    (7, (2, 0, 0)),    # 72 pentagon
    (12, (0, 1, 0)),   # 73
    (10, (0, 1, 0)),   # 74
    (9, (0, 0, 0)),    # 75
    (13, (1, 0, 0)),   # 76
    (16, (0, 0, 1)),   # 77
    (15, (0, 1, 1)),   # 78
    (15, (0, 1, 0)),   # 79
    (16, (0, 1, 0)),   # 80
    (14, (1, 1, 0)),   # 81
    (13, (1, 1, 0)),   # 82
    (5, (2, 0, 0)),    # 83 pentagon
    (8, (1, 0, 0)),    # 84
    (14, (0, 0, 0)),   # 85
    (9, (1, 0, 1)),    # 86
    (14, (0, 0, 1)),   # 87
    (17, (0, 0, 1)),   # 88
    (12, (0, 0, 1)),   # 89
    (16, (0, 0, 0)),   # 90
    (17, (0, 1, 1)),   # 91
    (15, (0, 0, 1)),   # 92
    (16, (1, 0, 1)),   # 93
    (9, (1, 0, 0)),    # 94
    (15, (0, 0, 0)),   # 95
    (13, (0, 0, 0)),   # 96
    (8, (2, 0, 0)),    # 97 pentagon
    (13, (0, 1, 0)),   # 98
    (17, (1, 0, 1)),   # 99
    (19, (0, 1, 0)),   # 100
    (14, (0, 1, 0)),   # 101
    (19, (0, 1, 1)),   # 102
    (17, (0, 1, 0)),   # 103
    (13, (0, 0, 1)),   # 104
    (17, (0, 0, 0)),   # 105
    (16, (1, 0, 0)),   # 106
    (9, (2, 0, 0)),    # 107 pentagon
    (15, (1, 0, 1)),   # 108
    (15, (1, 0, 0)),   # 109
    (18, (0, 1, 1)),   # 110
    (18, (0, 0, 1)),   # 111
    (19, (0, 0, 1)),   # 112
    (17, (1, 0, 0)),   # 113
    (19, (0, 0, 0)),   # 114
    (18, (0, 1, 0)),   # 115
    (18, (1, 0, 1)),   # 116
    (19, (2, 0, 0)),   # 117 pentagon
    (19, (1, 0, 0)),   # 118
    (18, (0, 0, 0)),   # 119
    (19, (1, 0, 1)),   # 120
    (18, (1, 0, 0)),   # 121
)

PENTAGON_CELLS = frozenset({4, 14, 24, 38, 49, 58, 63, 72, 83, 97, 107, 117})


@dataclass(frozen=True)
class FaceOrient:
    """Lattice motion re-expressing coordinates of one face on a neighbor."""

    face: int
    translate: tuple[int, int, int]  # res-0 units; scale by 7^(res/2) to apply
    ccw_rot60: int


def max_dim(res: int) -> int:
    """Edge coordinate sum of a face triangle at a class II resolution."""
    return 2 * 7 ** (res // 2)


def unit_scale(res: int) -> int:
    return 7 ** (res // 2)


def is_class_iii(res: int) -> bool:
    return res % 2 == 1


def face_ijk_to_geo(face: int, ijk: tuple[int, int, int], res: int) -> tuple[float, float]:
    """Geo coordinates of a lattice point via this face's gnomonic plane."""
    x, y = coordijk.to_hex2d(ijk)
    return hex2d_to_geo(face, x, y, res, substrate=False)


def hex2d_to_geo(
    face: int, x: float, y: float, res: int, substrate: bool
) -> tuple[float, float]:
    r = math.hypot(x, y)
    if r < 1e-16:
        return FACE_CENTER_GEO[face]

    theta = math.atan2(y, x)

    for _ in range(res):
        r /= SQRT7
    if substrate:
        r /= 3.0
        if is_class_iii(res):
            r /= SQRT7

    r = math.atan(r * RES0_U_GNOMONIC)

    if not substrate and is_class_iii(res):
        theta = pos_angle(theta + AP7_ROT_RADS)
    theta = pos_angle(FACE_AXES_AZ[face] - theta)

    return az_distance_point(FACE_CENTER_GEO[face], theta, r)


def geo_to_face_hex2d(p: tuple[float, float], res: int) -> tuple[int, float, float]:
    """Closest face and the point's plane coordinates at the given resolution."""
    xyz = geo_to_xyz(*p)
    face = 0
    best = -2.0
    for f in range(NUM_FACES):
        c = _FACE_CENTER_XYZ[f]
        d = xyz[0] * c[0] + xyz[1] * c[1] + xyz[2] * c[2]
        if d > best:
            best = d
            face = f

    r = math.acos(max(-1.0, min(1.0, best)))
    if r < 1e-16:
        return face, 0.0, 0.0

    theta = pos_angle(FACE_AXES_AZ[face] - pos_angle(azimuth(FACE_CENTER_GEO[face], p)))
    if is_class_iii(res):
        theta = pos_angle(theta - AP7_ROT_RADS)

    r = math.tan(r) / RES0_U_GNOMONIC
    for _ in range(res):
        r *= SQRT7

    return face, r * math.cos(theta), r * math.sin(theta)


_FACE_CENTER_XYZ = tuple(geo_to_xyz(lat, lng) for lat, lng in FACE_CENTER_GEO)

# lattice coordinates of the three face corners at res 0
_CORNER_IJK = ((2, 0, 0), (0, 2, 0), (0, 0, 2))
# corner pairs bounding each edge quadrant
_EDGE_CORNERS = {IJ: (0, 1), JK: (1, 2), KI: (2, 0)}


def _derive_vertices() -> tuple[tuple[tuple[float, float, float], ...], tuple[tuple[int, int, int], ...]]:
    """Locate the 12 icosahedron vertices and each face's corner->vertex map."""
    vert_r = math.atan(2.0 * RES0_U_GNOMONIC)
    raw = []
    for f in range(NUM_FACES):
        for v in range(3):
            az = pos_angle(FACE_AXES_AZ[f] - v * (2.0 * math.pi / 3.0))
            raw.append(geo_to_xyz(*az_distance_point(FACE_CENTER_GEO[f], az, vert_r)))

    uniq: list[tuple[float, float, float]] = []
    corner_vert = [[-1, -1, -1] for _ in range(NUM_FACES)]
    for idx, p in enumerate(raw):
        f, v = divmod(idx, 3)
        for u, q in enumerate(uniq):
            if angle_between(p, q) < 1e-6:
                corner_vert[f][v] = u
                break
        else:
            corner_vert[f][v] = len(uniq)
            uniq.append(p)

    if len(uniq) != 12:
        raise AssertionError(f"expected 12 icosahedron vertices, derived {len(uniq)}")
    for u in range(12):
        owners = sum(row.count(u) for row in corner_vert)
        if owners != 5:
            raise AssertionError(f"vertex {u} shared by {owners} faces, expected 5")
    return tuple(uniq), tuple(tuple(row) for row in corner_vert)


VERTEX_XYZ, FACE_CORNER_VERTEX = _derive_vertices()


def _rotate_vec_n(ijk: tuple[int, int, int], n: int) -> tuple[int, int, int]:
    for _ in range(n % 6):
        ijk = coordijk.rotate_60ccw(ijk)
    return ijk


def _derive_face_neighbors() -> tuple[dict[tuple[int, int], FaceOrient], dict[tuple[int, int], int]]:
    """Inter-face lattice motions across each face edge.

    Solved from the vertex correspondence: the motion must map both shared
    corners of the edge onto the neighbor's matching corners.
    """
    neighbors: dict[tuple[int, int], FaceOrient] = {}
    adjacent_dir: dict[tuple[int, int], int] = {}

    for f in range(NUM_FACES):
        neighbors[(f, 0)] = FaceOrient(f, (0, 0, 0), 0)  # central face, identity
        adjacent_dir[(f, f)] = 0
        for quadrant, (ca, cb) in _EDGE_CORNERS.items():
            va, vb = FACE_CORNER_VERTEX[f][ca], FACE_CORNER_VERTEX[f][cb]
            g = next(
                h
                for h in range(NUM_FACES)
                if h != f and va in FACE_CORNER_VERTEX[h] and vb in FACE_CORNER_VERTEX[h]
            )
            ga = FACE_CORNER_VERTEX[g].index(va)
            gb = FACE_CORNER_VERTEX[g].index(vb)

            a_f, b_f = _CORNER_IJK[ca], _CORNER_IJK[cb]
            a_g, b_g = _CORNER_IJK[ga], _CORNER_IJK[gb]
            d_f = coordijk.sub(b_f, a_f)
            d_g = coordijk.sub(b_g, a_g)
            for n in range(6):
                if _rotate_vec_n(d_f, n) == d_g:
                    break
            else:
                raise AssertionError(f"no lattice rotation aligns faces {f}->{g}")

            translate = coordijk.sub(a_g, _rotate_vec_n(a_f, n))
            if coordijk.add(_rotate_vec_n(b_f, n), translate) != coordijk.normalize(*b_g):
                raise AssertionError(f"face motion {f}->{g} fails corner check")

            neighbors[(f, quadrant)] = FaceOrient(g, translate, n)
            adjacent_dir[(f, g)] = quadrant

    return neighbors, adjacent_dir


FACE_NEIGHBORS, ADJACENT_FACE_DIR = _derive_face_neighbors()


def translate_overage(
    face: int, ijk: tuple[int, int, int], quadrant: int, res: int, substrate: bool
) -> tuple[int, tuple[int, int, int]]:
    """Re-express an out-of-face lattice point on the neighboring face."""
    orient = FACE_NEIGHBORS[(face, quadrant)]
    out = ijk
    for _ in range(orient.ccw_rot60):
        out = coordijk.rotate_60ccw(out)
    scale = unit_scale(res) * (3 if substrate else 1)
    out = coordijk.add(out, coordijk.scale(orient.translate, scale))
    return orient.face, out


def base_cell_center(bc: int) -> tuple[float, float]:
    face, ijk = BASE_CELL_HOMES[bc]
    return face_ijk_to_geo(face, ijk, 0)


def _derive_base_cell_table() -> dict[tuple[int, int, int, int], tuple[int, int | None]]:
    """Reverse lookup (face, i, j, k) -> (base cell, ccw rotations to home).

    Matches each face-local res-0 lattice position against the true base-cell
    centers; positions beyond the face edge are first re-expressed on the
    neighboring face so the match is nearly exact.  Hexagon rotations come
    from comparing i-axis bearings of the two coordinate systems at the cell
    center; pentagon rotations are left for the indexing layer to resolve.
    """
    centers = [geo_to_xyz(*base_cell_center(b)) for b in range(NUM_BASE_CELLS)]

    table: dict[tuple[int, int, int, int], tuple[int, int | None]] = {}
    matched: set[int] = set()

    for f in range(NUM_FACES):
        for i in range(MAX_FACE_COORD + 1):
            for j in range(MAX_FACE_COORD + 1):
                for k in range(MAX_FACE_COORD + 1):
                    pos = coordijk.normalize(i, j, k)
                    key = (f, i, j, k)
                    norm_key = (f,) + pos
                    if norm_key in table:
                        table[key] = table[norm_key]
                        continue

                    if sum(pos) > max_dim(0):
                        quadrant = _overage_quadrant(pos)
                        est_face, est_pos = translate_overage(f, pos, quadrant, 0, False)
                        est = geo_to_xyz(*face_ijk_to_geo(est_face, est_pos, 0))
                    else:
                        est = geo_to_xyz(*face_ijk_to_geo(f, pos, 0))

                    dists = sorted(
                        (angle_between(est, centers[b]), b) for b in range(NUM_BASE_CELLS)
                    )
                    gap, bc = dists[0]
                    if gap > 0.06 or dists[1][0] < 4.0 * max(gap, 1e-9):
                        raise AssertionError(
                            f"ambiguous base cell at face {f} pos {pos}: {dists[:2]}"
                        )

                    rot = None if bc in PENTAGON_CELLS else _hexagon_rotation(f, pos, bc)
                    entry = (bc, rot)
                    table[key] = entry
                    if norm_key != key:
                        table[norm_key] = entry
                    matched.add(bc)

    if matched != set(range(NUM_BASE_CELLS)):
        raise AssertionError(f"base cells never matched: {sorted(set(range(NUM_BASE_CELLS)) - matched)}")

    for bc, (face, ijk) in enumerate(BASE_CELL_HOMES):
        got = table[(face,) + ijk]
        if got[0] != bc or (bc not in PENTAGON_CELLS and got[1] != 0):
            raise AssertionError(f"home position of base cell {bc} resolves to {got}")

    return table


def _overage_quadrant(pos: tuple[int, int, int]) -> int:
    i, j, k = pos
    if k > 0:
        return JK if j > 0 else KI
    return IJ


def _i_axis_bearing(face: int, ijk: tuple[int, int, int]) -> float:
    """Bearing of the +i lattice direction at a lattice point of this face."""
    eps = 1e-7
    x, y = coordijk.to_hex2d(ijk)
    origin = hex2d_to_geo(face, x, y, 0, substrate=False)
    ahead = hex2d_to_geo(face, x + eps, y, 0, substrate=False)
    return azimuth(origin, ahead)


def _hexagon_rotation(face: int, pos: tuple[int, int, int], bc: int) -> int:
    home_face, home_ijk = BASE_CELL_HOMES[bc]
    if face == home_face:
        return 0
    # compass bearings grow clockwise; a home i-axis bearing clockwise of the
    # face's own means one ccw digit rotation per 60 degrees
    delta = pos_angle(_i_axis_bearing(home_face, home_ijk) - _i_axis_bearing(face, pos))
    n = round(delta / (math.pi / 3.0)) % 6
    if abs(delta - n * (math.pi / 3.0)) > 0.45 and abs(delta - 2 * math.pi) > 0.45:
        raise AssertionError(
            f"rotation between face {face} and home of cell {bc} is not a 60-degree multiple"
        )
    return n


BASE_CELL_TABLE = _derive_base_cell_table()


def base_cell_at(face: int, ijk: tuple[int, int, int]) -> tuple[int, int | None]:
    entry = BASE_CELL_TABLE.get((face,) + ijk)
    if entry is None:
        raise ValueError(f"no base cell at face {face}, position {ijk}")
    return entry


def is_pentagon_cell(bc: int) -> bool:
    return bc in PENTAGON_CELLS
