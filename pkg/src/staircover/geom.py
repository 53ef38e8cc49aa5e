"""Exact primitives: points, triangle translates, half-open rectangles and
half-open stair polygons.

Conventions used throughout the package:

* The canonical triangle has vertices (0,0), (1,0), (0,1). A `Triangle` is
  the translate of it whose right-angle corner sits at `corner`, i.e. the
  closed set {p : p.x >= corner.x, p.y >= corner.y,
  (p.x - corner.x) + (p.y - corner.y) <= 1}.
* Rectangles and stair polygons are half open in the [x0, x1) x [y0, y1)
  sense: closed on the left and bottom, open on the right and top. This
  keeps membership and tiling multiplicity free of boundary double counts.
* `precedes` orders points by coordinate sum, breaking ties by x. It is a
  strict total order on distinct points and drives the cutting relation.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .rational import rat, rat_str

__all__ = [
    "Point",
    "Triangle",
    "Rect",
    "Segment",
    "StairPolygon",
    "pt",
    "precedes",
    "tri_intersects",
    "cuts",
    "segment_meets_stair",
]


@dataclass(frozen=True, order=False)
class Point:
    x: Fraction
    y: Fraction

    def __str__(self) -> str:
        return f"({rat_str(self.x)}, {rat_str(self.y)})"


def pt(x, y) -> Point:
    """Build a Point from any exact rational representation (not float)."""
    return Point(rat(x), rat(y))


def precedes(p: Point, q: Point) -> bool:
    """Strict order: smaller coordinate sum first, ties broken by smaller x.

    Total on distinct points; p never precedes itself.
    """
    return (p.x + p.y, p.x) < (q.x + q.y, q.x)


@dataclass(frozen=True)
class Triangle:
    """A translate of the canonical right triangle, anchored at its corner."""

    corner: Point

    @classmethod
    def at(cls, x, y) -> "Triangle":
        return cls(pt(x, y))

    @property
    def hyp_sum(self) -> Fraction:
        """Value of x + y along the hypotenuse."""
        return self.corner.x + self.corner.y + 1

    def contains(self, p: Point) -> bool:
        return (
            p.x >= self.corner.x
            and p.y >= self.corner.y
            and p.x + p.y <= self.hyp_sum
        )

    def __str__(self) -> str:
        return f"T@{self.corner}"


def tri_intersects(a: Triangle, b: Triangle) -> bool:
    """Whether two closed triangle translates share at least one point.

    The componentwise max of the corners is the lowest point of the
    intersection of the two quadrants; the triangles meet exactly when that
    point still lies under both hypotenuses.
    """
    return max(a.corner.x, b.corner.x) + max(a.corner.y, b.corner.y) <= min(
        a.hyp_sum, b.hyp_sum
    )


def cuts(a: Triangle, b: Triangle) -> bool:
    """Whether *a* cuts *b*: distinct, intersecting, and b's corner precedes a's.

    For any two distinct intersecting translates exactly one direction holds.
    """
    return a != b and tri_intersects(a, b) and precedes(b.corner, a.corner)


@dataclass(frozen=True)
class Rect:
    """Half-open axis-aligned rectangle [x0, x1) x [y0, y1)."""

    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError(f"degenerate rectangle {self}")

    @classmethod
    def of(cls, x0, x1, y0, y1) -> "Rect":
        return cls(rat(x0), rat(x1), rat(y0), rat(y1))

    def area(self) -> Fraction:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def contains(self, p: Point) -> bool:
        return self.x0 <= p.x < self.x1 and self.y0 <= p.y < self.y1

    def __str__(self) -> str:
        return (
            f"[{rat_str(self.x0)},{rat_str(self.x1)})x"
            f"[{rat_str(self.y0)},{rat_str(self.y1)})"
        )


@dataclass(frozen=True)
class Segment:
    """Closed axis-aligned segment. Endpoints may coincide (a point)."""

    a: Point
    b: Point

    def __post_init__(self):
        if self.a.x != self.b.x and self.a.y != self.b.y:
            raise ValueError("segment must be axis-aligned")

    def meets_rect(self, r: Rect) -> bool:
        """Exact intersection test against a half-open rectangle."""
        lo_x, hi_x = sorted((self.a.x, self.b.x))
        lo_y, hi_y = sorted((self.a.y, self.b.y))
        # closed interval [lo, hi] meets half-open [c0, c1) iff lo < c1 and hi >= c0
        return lo_x < r.x1 and hi_x >= r.x0 and lo_y < r.y1 and hi_y >= r.y0


class StairPolygon:
    """Half-open r-stair polygon.

    Defined by strictly ascending x-breaks (x_0 < ... < x_{r+1}) and strictly
    descending y-breaks (y_0 > ... > y_{r+1}); the point set is the union of
    the half-open columns [x_i, x_{i+1}) x [y_{r+1}, y_i). The representation
    is canonical: adjacent columns never share the same top, so two stair
    polygons describe the same point set iff their breaks are equal.
    """

    __slots__ = ("x_breaks", "y_breaks")

    def __init__(self, x_breaks, y_breaks):
        xs = tuple(x_breaks)
        ys = tuple(y_breaks)
        if len(xs) != len(ys) or len(xs) < 2:
            raise ValueError("need r+2 x-breaks and r+2 y-breaks with r >= 0")
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise ValueError("x-breaks must be strictly ascending")
        if any(a <= b for a, b in zip(ys, ys[1:])):
            raise ValueError("y-breaks must be strictly descending")
        self.x_breaks = xs
        self.y_breaks = ys

    @classmethod
    def of(cls, x_breaks, y_breaks) -> "StairPolygon":
        return cls(tuple(rat(v) for v in x_breaks), tuple(rat(v) for v in y_breaks))

    @classmethod
    def rect(cls, x0, x1, y0, y1) -> "StairPolygon":
        """Single-column (r = 0) stair polygon [x0,x1) x [y0,y1)."""
        return cls.of((x0, x1), (y1, y0))

    def __eq__(self, other):
        return (
            isinstance(other, StairPolygon)
            and self.x_breaks == other.x_breaks
            and self.y_breaks == other.y_breaks
        )

    def __hash__(self):
        return hash((self.x_breaks, self.y_breaks))

    def __repr__(self):
        xs = ",".join(rat_str(v) for v in self.x_breaks)
        ys = ",".join(rat_str(v) for v in self.y_breaks)
        return f"StairPolygon(x=[{xs}], y=[{ys}])"

    @property
    def stair_count(self) -> int:
        """The number r of inner (reflex) corners."""
        return len(self.x_breaks) - 2

    @property
    def anchor(self) -> Point:
        """Lower-left vertex (x_0, y_{r+1})."""
        return Point(self.x_breaks[0], self.y_breaks[-1])

    def inner_corners(self) -> tuple[Point, ...]:
        """The reflex corners (x_j, y_j) for j = 1..r; empty when r = 0."""
        return tuple(
            Point(self.x_breaks[j], self.y_breaks[j])
            for j in range(1, len(self.x_breaks) - 1)
        )

    def area(self) -> Fraction:
        bottom = self.y_breaks[-1]
        return sum(
            (self.x_breaks[i + 1] - self.x_breaks[i]) * (self.y_breaks[i] - bottom)
            for i in range(len(self.x_breaks) - 1)
        )

    def contains(self, p: Point) -> bool:
        i = bisect_right(self.x_breaks, p.x) - 1
        if i < 0 or i > self.stair_count:
            return False
        return self.y_breaks[-1] <= p.y < self.y_breaks[i]

    def interior_contains(self, p: Point) -> bool:
        """Membership in the topological interior of the closure.

        Strict on the outer boundary; at an internal break x = x_j the column
        top is the smaller of the two adjacent tops.
        """
        if not (self.x_breaks[0] < p.x < self.x_breaks[-1]):
            return False
        if not (self.y_breaks[-1] < p.y):
            return False
        # at an internal break bisect lands on the right-hand column, whose
        # top is the smaller of the two adjacent tops, as required
        i = bisect_right(self.x_breaks, p.x) - 1
        return p.y < self.y_breaks[i]

    def to_rects(self) -> tuple[Rect, ...]:
        """Column decomposition: r+1 pairwise-disjoint half-open rectangles."""
        bottom = self.y_breaks[-1]
        return tuple(
            Rect(self.x_breaks[i], self.x_breaks[i + 1], bottom, self.y_breaks[i])
            for i in range(len(self.x_breaks) - 1)
        )

    def clip_to_window(self, l) -> "StairPolygon | None":
        """Intersection with the half-open window [0, l) x [0, l), or None."""
        side = rat(l)
        if side <= 0:
            raise ValueError("window side must be positive")
        return self.clip_to_rect(Rect(Fraction(0), side, Fraction(0), side))

    def clip_to_rect(self, win: Rect) -> "StairPolygon | None":
        """Intersection with an arbitrary half-open rectangle, or None."""
        bottom = max(self.y_breaks[-1], win.y0)
        columns = []
        for r in self.to_rects():
            x0 = max(r.x0, win.x0)
            x1 = min(r.x1, win.x1)
            top = min(r.y1, win.y1)
            if x0 < x1 and bottom < top:
                columns.append((x0, x1, top))
        return columns_to_stair(columns, bottom)

    def boundary_segments(self) -> tuple[Segment, ...]:
        """The closed top/right staircase path: closure(S) minus S.

        Returned as closed axis-aligned segments (tops of every column plus
        the risers down to the next column top, ending at the bottom-right
        corner).
        """
        xs, ys = self.x_breaks, self.y_breaks
        r = self.stair_count
        segs = []
        for i in range(r + 1):
            segs.append(Segment(Point(xs[i], ys[i]), Point(xs[i + 1], ys[i])))
            lower = ys[i + 1] if i < r else ys[-1]
            segs.append(Segment(Point(xs[i + 1], lower), Point(xs[i + 1], ys[i])))
        return tuple(segs)


def columns_to_stair(columns, bottom) -> StairPolygon | None:
    """Assemble contiguous (x0, x1, top) columns into a canonical stair polygon.

    Adjacent columns with equal tops are merged; columns must be sorted,
    contiguous, with strictly decreasing tops after merging (ValueError
    otherwise). Returns None for an empty column list.
    """
    if not columns:
        return None
    merged = []
    for x0, x1, top in columns:
        if merged and merged[-1][2] == top and merged[-1][1] == x0:
            prev = merged.pop()
            merged.append((prev[0], x1, top))
        else:
            if merged and merged[-1][1] != x0:
                raise ValueError("columns are not contiguous")
            merged.append((x0, x1, top))
    x_breaks = [merged[0][0]] + [c[1] for c in merged]
    y_breaks = [c[2] for c in merged] + [bottom]
    return StairPolygon(x_breaks, y_breaks)


def segment_meets_stair(seg: Segment, stair: StairPolygon) -> bool:
    """Whether a closed axis-aligned segment meets a half-open stair polygon."""
    return any(seg.meets_rect(r) for r in stair.to_rects())
