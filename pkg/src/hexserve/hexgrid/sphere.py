"""Great-circle trigonometry on the unit sphere (radians throughout)."""

from __future__ import annotations

import math

EPSILON = 1e-16
EARTH_RADIUS_M = 6371007.180918475  # mean radius consistent with cell metrics

TWO_PI = 2.0 * math.pi


def pos_angle(rads: float) -> float:
    """Normalize an angle into [0, 2*pi)."""
    tmp = rads + TWO_PI if rads < 0.0 else rads
    if rads >= TWO_PI:
        tmp -= TWO_PI
    return tmp


def constrain_lat(lat: float) -> float:
    while lat > math.pi / 2.0:
        lat -= math.pi
    return lat


def constrain_lng(lng: float) -> float:
    while lng > math.pi:
        lng -= TWO_PI
    while lng < -math.pi:
        lng += TWO_PI
    return lng


def geo_to_xyz(lat: float, lng: float) -> tuple[float, float, float]:
    r = math.cos(lat)
    return (math.cos(lng) * r, math.sin(lng) * r, math.sin(lat))


def square_dist(a: tuple[float, float, float], b: tuple[float, float, float]) -> float:
    return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2


def angle_between(a: tuple[float, float, float], b: tuple[float, float, float]) -> float:
    d = a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    return math.acos(max(-1.0, min(1.0, d)))


def great_circle_distance(p1: tuple[float, float], p2: tuple[float, float]) -> float:
    """Haversine angular distance between two (lat, lng) points."""
    sin_lat = math.sin((p2[0] - p1[0]) / 2.0)
    sin_lng = math.sin((p2[1] - p1[1]) / 2.0)
    a = sin_lat * sin_lat + math.cos(p1[0]) * math.cos(p2[0]) * sin_lng * sin_lng
    return 2.0 * math.asin(math.sqrt(min(1.0, a)))


def azimuth(p1: tuple[float, float], p2: tuple[float, float]) -> float:
    """Initial bearing from p1 to p2 (clockwise from north)."""
    return math.atan2(
        math.cos(p2[0]) * math.sin(p2[1] - p1[1]),
        math.cos(p1[0]) * math.sin(p2[0])
        - math.sin(p1[0]) * math.cos(p2[0]) * math.cos(p2[1] - p1[1]),
    )


def az_distance_point(p1: tuple[float, float], az: float, distance: float) -> tuple[float, float]:
    """Destination point at the given bearing and angular distance from p1."""
    if distance < EPSILON:
        return p1

    az = pos_angle(az)
    if az < EPSILON or abs(az - math.pi) < EPSILON:
        # due north/south
        lat = p1[0] + distance if az < EPSILON else p1[0] - distance
        if abs(lat - math.pi / 2.0) < EPSILON:
            return (math.pi / 2.0, 0.0)
        if abs(lat + math.pi / 2.0) < EPSILON:
            return (-math.pi / 2.0, 0.0)
        return (lat, constrain_lng(p1[1]))

    sinlat = math.sin(p1[0]) * math.cos(distance) + math.cos(p1[0]) * math.sin(
        distance
    ) * math.cos(az)
    sinlat = max(-1.0, min(1.0, sinlat))
    lat = math.asin(sinlat)
    if abs(lat - math.pi / 2.0) < EPSILON:
        return (math.pi / 2.0, 0.0)
    if abs(lat + math.pi / 2.0) < EPSILON:
        return (-math.pi / 2.0, 0.0)

    sinlng = math.sin(az) * math.sin(distance) / math.cos(lat)
    coslng = (math.cos(distance) - math.sin(p1[0]) * sinlat) / (
        math.cos(p1[0]) * math.cos(lat)
    )
    sinlng = max(-1.0, min(1.0, sinlng))
    coslng = max(-1.0, min(1.0, coslng))
    return (lat, constrain_lng(p1[1] + math.atan2(sinlng, coslng)))
