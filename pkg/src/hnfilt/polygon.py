"""Concave piecewise-linear polygons with integer abscissae and rational ordinates."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from hnfilt.errors import InvalidInput

Point = tuple[int, Fraction]


@dataclass(frozen=True)
class PolygonFn:
    """Concave-down piecewise-linear function on ``[0, rank]`` starting at the origin.

    Vertices are breakpoints only: consecutive segments always have strictly
    decreasing slopes.  Use :meth:`from_segments` to build one from slopes and
    widths; it merges equal consecutive slopes.
    """

    vertices: tuple[Point, ...]

    def __post_init__(self):
        vs = tuple((int(x), Fraction(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if not vs or vs[0] != (0, 0):
            raise InvalidInput(f"polygon must start at (0, 0), got {vs[:1]}")
        prev_slope = None
        for (x0, y0), (x1, y1) in zip(vs, vs[1:]):
            if x1 <= x0:
                raise InvalidInput(f"abscissae must strictly increase: {x0} then {x1}")
            s = (y1 - y0) / (x1 - x0)
            if prev_slope is not None and s >= prev_slope:
                raise InvalidInput(f"segment slopes must strictly decrease: {prev_slope} then {s}")
            prev_slope = s

    @classmethod
    def from_segments(cls, segments: Iterable[tuple[Fraction, int]]) -> PolygonFn:
        """Join segments given as ``(slope, width)`` in nonincreasing slope order."""
        merged: list[list] = []
        for slope, width in segments:
            slope = Fraction(slope)
            if width <= 0:
                raise InvalidInput(f"segment width must be positive, got {width}")
            if merged and slope > merged[-1][0]:
                raise InvalidInput(f"segment slopes increase: {merged[-1][0]} then {slope}")
            if merged and slope == merged[-1][0]:
                merged[-1][1] += width
            else:
                merged.append([slope, width])
        x, y = 0, Fraction(0)
        vertices = [(x, y)]
        for slope, width in merged:
            x, y = x + width, y + slope * width
            vertices.append((x, y))
        return cls(tuple(vertices))

    @property
    def rank(self) -> int:
        return self.vertices[-1][0]

    @property
    def degree(self) -> Fraction:
        return self.vertices[-1][1]

    @property
    def breakpoints(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.vertices)

    def segments(self) -> list[tuple[Fraction, int]]:
        return [
            ((y1 - y0) / (x1 - x0), x1 - x0)
            for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:])
        ]

    def slopes(self) -> list[Fraction]:
        return [s for s, _ in self.segments()]

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        if x < 0 or x > self.rank:
            raise InvalidInput(f"{x} is outside the domain [0, {self.rank}]")
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            if x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return self.vertices[-1][1]

    def restrict(self, upto: int) -> PolygonFn:
        """The polygon on ``[0, upto]``."""
        if upto > self.rank or upto < 0:
            raise InvalidInput(f"cannot restrict a rank-{self.rank} polygon to [0, {upto}]")
        vs = [v for v in self.vertices if v[0] < upto or v[0] == 0]
        if upto > 0:
            vs.append((upto, self(upto)))
        return PolygonFn(tuple(vs))


def polygon_leq(p: PolygonFn, q: PolygonFn) -> bool:
    """``p(x) <= q(x)`` on the common domain, decided at the merged breakpoints."""
    end = min(p.rank, q.rank)
    xs = sorted({x for x in p.breakpoints + q.breakpoints if x <= end} | {end})
    return all(p(x) <= q(x) for x in xs)


def first_divergence(p: PolygonFn, q: PolygonFn) -> int | None:
    """Smallest merged breakpoint where the polygons differ (or one is undefined)."""
    for x in sorted(set(p.breakpoints) | set(q.breakpoints)):
        if x > p.rank or x > q.rank or p(x) != q(x):
            return x
    return None


def filtration_polygon(graded: Sequence[tuple[Fraction, int]]) -> PolygonFn:
    """Polygon of a filtration: slopes sorted nonincreasing, then joined."""
    if not graded:
        raise InvalidInput("a filtration polygon needs at least one graded piece")
    return PolygonFn.from_segments(sorted(graded, key=lambda sw: sw[0], reverse=True))


def polygon_join(first: PolygonFn, second: PolygonFn) -> PolygonFn:
    """Concatenate ``second`` after ``first``; every slope of ``first`` must dominate."""
    a, b = first.segments(), second.segments()
    if a and b and min(s for s, _ in a) < max(s for s, _ in b):
        raise InvalidInput(
            f"cannot join: slope {min(s for s, _ in a)} of the first polygon is below "
            f"slope {max(s for s, _ in b)} of the second"
        )
    return PolygonFn.from_segments(a + b)


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def upper_hull(points: Iterable[tuple[int, int | Fraction]]) -> PolygonFn:
    """Upper convex hull of lattice-abscissa points, read from (0, 0) rightwards.

    ``(0, 0)`` is always included.  Among points sharing an abscissa only the
    highest matters.
    """
    best: dict[int, Fraction] = {0: Fraction(0)}
    for x, y in points:
        if x < 0:
            raise InvalidInput(f"negative abscissa {x}")
        y = Fraction(y)
        if x == 0:
            continue
        if x not in best or y > best[x]:
            best[x] = y
    hull: list[Point] = []
    for pt in sorted(best.items()):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) >= 0:
            hull.pop()
        hull.append(pt)
    return PolygonFn(tuple(hull))
