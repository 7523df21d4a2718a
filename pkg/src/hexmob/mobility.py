"""Random-direction mobility with specular reflection at a bounding box.

Every station moves at the same constant speed.  Each tick its heading is
resampled with probability ``1 - exp(-dt / tau)``, which gives exponentially
distributed holding times with mean ``tau``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from .errors import ConfigurationError
from .hexgrid import Grid

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Kinematics:
    x: float
    y: float
    speed: float
    heading: float

    @property
    def position(self):
        return (self.x, self.y)


@dataclass(frozen=True)
class MotionBox:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def contains(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax


def motion_box(grid: Grid) -> MotionBox:
    """The grid's bounding rectangle grown by one cell diameter on every side."""
    xmin, ymin, xmax, ymax = grid.bounds()
    pad = 2.0 * grid.cell_radius
    return MotionBox(xmin - pad, ymin - pad, xmax + pad, ymax + pad)


def turn_probability(dt: float, tau: float) -> float:
    if math.isinf(tau):
        return 0.0
    return 1.0 - math.exp(-dt / tau)


def normalize_heading(h: float) -> float:
    if h < 0.0:
        h += TWO_PI
    if h >= TWO_PI:
        h -= TWO_PI
    return h


def reflect(x: float, y: float, heading: float, box: MotionBox):
    """Fold a point back into ``box``, mirroring the heading at each wall hit."""
    while x > box.xmax or x < box.xmin:
        if x > box.xmax:
            x = 2.0 * box.xmax - x
        else:
            x = 2.0 * box.xmin - x
        heading = normalize_heading(math.pi - heading)
    while y > box.ymax or y < box.ymin:
        if y > box.ymax:
            y = 2.0 * box.ymax - y
        else:
            y = 2.0 * box.ymin - y
        heading = normalize_heading(-heading)
    return x, y, heading


def init_stations(
    n: int,
    box: MotionBox,
    speed: float,
    rng: Union[np.random.Generator, Sequence[np.random.Generator]],
) -> List[Kinematics]:
    """Place ``n`` stations uniformly in ``box`` with uniform headings.

    ``rng`` is either one generator shared by all stations or one generator
    per station.
    """
    if n < 1:
        raise ConfigurationError(f"need at least one station, got {n}")
    if speed < 0:
        raise ConfigurationError(f"speed must be non-negative, got {speed}")
    streams = [rng] * n if isinstance(rng, np.random.Generator) else list(rng)
    if len(streams) != n:
        raise ConfigurationError(f"expected {n} rng streams, got {len(streams)}")
    out = []
    for g in streams:
        x = box.xmin + (box.xmax - box.xmin) * g.random()
        y = box.ymin + (box.ymax - box.ymin) * g.random()
        heading = TWO_PI * g.random()
        out.append(Kinematics(x, y, float(speed), heading))
    return out


def step(
    k: Kinematics,
    dt: float,
    tau: float,
    box: MotionBox,
    rng: np.random.Generator,
) -> Kinematics:
    if not dt > 0 or not tau > 0:
        raise ConfigurationError(f"dt and tau must be positive (got {dt}, {tau})")
    heading = k.heading
    if rng.random() < turn_probability(dt, tau):
        heading = TWO_PI * rng.random()
    dist = k.speed * dt
    x = k.x + dist * math.cos(heading)
    y = k.y + dist * math.sin(heading)
    x, y, heading = reflect(x, y, heading, box)
    return Kinematics(x, y, k.speed, heading)
