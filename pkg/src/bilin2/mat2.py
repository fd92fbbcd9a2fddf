"""Fixed-size vector/matrix arithmetic in the plane, with an explicit zero-test policy.

Everything downstream (quadratic forms, structure detection, verdicts, steering)
routes its floating point zero decisions through :class:`TolerancePolicy`, so the
numeric policy lives in exactly one place.  All kernels are closed-form: for 2x2
problems the explicit formulas are both faster and easier to audit than a general
linear algebra call, and they keep golden-value tests exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class ZeroVector(ValueError):
    """A vector that must be nonzero failed the norm zero test."""


class SingularMatrix(ValueError):
    """A matrix that must be invertible failed the determinant zero test."""


@dataclass(frozen=True)
class TolerancePolicy:
    """Absolute/relative floor for deciding when a float counts as zero.

    ``is_zero(x, scale)`` tests ``|x| <= abs_eps + rel_eps * |scale|``; callers
    pass the natural magnitude of the quantity (row norms, Frobenius products,
    squared state norms) as ``scale``.
    """

    abs_eps: float = 1e-9
    rel_eps: float = 1e-9

    def __post_init__(self):
        object.__setattr__(self, "abs_eps", float(self.abs_eps))
        object.__setattr__(self, "rel_eps", float(self.rel_eps))
        if not (self.abs_eps > 0.0 and math.isfinite(self.abs_eps)):
            raise ValueError("abs_eps must be positive and finite")
        if not (self.rel_eps > 0.0 and math.isfinite(self.rel_eps)):
            raise ValueError("rel_eps must be positive and finite")

    def threshold(self, scale: float = 0.0) -> float:
        return self.abs_eps + self.rel_eps * abs(scale)

    def is_zero(self, x: float, scale: float = 0.0) -> bool:
        return abs(x) <= self.threshold(scale)


DEFAULT_TOL = TolerancePolicy()


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite vector ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


def cross(u: Vec2, v: Vec2) -> float:
    """Signed area det[u v]; zero exactly when u and v are parallel."""
    return u.x * v.y - u.y * v.x


def rot90(v: Vec2) -> Vec2:
    """Counterclockwise quarter turn; orthogonal to v with the same norm."""
    return Vec2(-v.y, v.x)


@dataclass(frozen=True)
class Mat2:
    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22"):
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not math.isfinite(value):
                raise ValueError(f"non-finite matrix entry {name}={value}")

    @staticmethod
    def from_rows(rows) -> "Mat2":
        (a, b), (c, d) = rows
        return Mat2(a, b, c, d)

    @staticmethod
    def identity() -> "Mat2":
        return Mat2(1.0, 0.0, 0.0, 1.0)

    def rows(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((self.a11, self.a12), (self.a21, self.a22))

    def col1(self) -> Vec2:
        return Vec2(self.a11, self.a21)

    def col2(self) -> Vec2:
        return Vec2(self.a12, self.a22)

    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    def trace(self) -> float:
        return self.a11 + self.a22

    def frob(self) -> float:
        return math.sqrt(self.a11**2 + self.a12**2 + self.a21**2 + self.a22**2)

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a11 + other.a11, self.a12 + other.a12,
                    self.a21 + other.a21, self.a22 + other.a22)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a11 - other.a11, self.a12 - other.a12,
                    self.a21 - other.a21, self.a22 - other.a22)

    def __mul__(self, k: float) -> "Mat2":
        return Mat2(self.a11 * k, self.a12 * k, self.a21 * k, self.a22 * k)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Vec2):
            return Vec2(self.a11 * other.x + self.a12 * other.y,
                        self.a21 * other.x + self.a22 * other.y)
        if isinstance(other, Mat2):
            return Mat2(self.a11 * other.a11 + self.a12 * other.a21,
                        self.a11 * other.a12 + self.a12 * other.a22,
                        self.a21 * other.a11 + self.a22 * other.a21,
                        self.a21 * other.a12 + self.a22 * other.a22)
        return NotImplemented

    def inverse(self, tol: TolerancePolicy = DEFAULT_TOL) -> "Mat2":
        d = self.det()
        scale = math.hypot(self.a11, self.a12) * math.hypot(self.a21, self.a22)
        if tol.is_zero(d, scale):
            raise SingularMatrix(f"matrix {self.rows()} is singular within tolerance")
        return Mat2(self.a22 / d, -self.a12 / d, -self.a21 / d, self.a11 / d)


def solve2(m: Mat2, y: Vec2, tol: TolerancePolicy = DEFAULT_TOL) -> Vec2:
    """Solve m @ x = y by Cramer's rule.

    The determinant zero test is scaled by the product of the row norms, so a
    uniformly scaled system makes the same singular/nonsingular decision.
    Raises SingularMatrix when the test fires.
    """
    d = m.det()
    scale = math.hypot(m.a11, m.a12) * math.hypot(m.a21, m.a22)
    if tol.is_zero(d, scale):
        raise SingularMatrix(f"matrix {m.rows()} is singular within tolerance")
    return Vec2((y.x * m.a22 - m.a12 * y.y) / d,
                (m.a11 * y.y - y.x * m.a21) / d)


def cond2(m: Mat2, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Spectral condition number, from the singular values in closed form."""
    t = m.a11**2 + m.a12**2 + m.a21**2 + m.a22**2
    d = m.det() ** 2
    gap = math.sqrt(max(t * t - 4.0 * d, 0.0))
    hi = 0.5 * (t + gap)
    lo = 0.5 * (t - gap)
    if tol.is_zero(lo, hi):
        raise SingularMatrix("condition number of a singular matrix")
    return math.sqrt(hi / lo)


@dataclass(frozen=True)
class Direction:
    """A line through the origin, held as its canonical unit representative.

    Construct through :func:`canonical_direction`; two parallel vectors map to
    the same representative up to floating rounding.
    """

    vector: Vec2

    def __post_init__(self):
        n = self.vector.norm()
        if abs(n - 1.0) > 1e-6:
            raise ValueError(f"direction vector must be unit length, got norm {n}")

    @property
    def x(self) -> float:
        return self.vector.x

    @property
    def y(self) -> float:
        return self.vector.y


def canonical_direction(v: Vec2, tol: TolerancePolicy = DEFAULT_TOL) -> Direction:
    """Normalize v to the canonical representative of its line.

    The representative has unit norm and a positive first component; when the
    first component sits inside the zero band the sign is fixed by making the
    second component positive.  Raises ZeroVector for vectors with norm inside
    the absolute zero band.
    """
    n = v.norm()
    if tol.is_zero(n):
        raise ZeroVector(f"cannot orient zero vector ({v.x}, {v.y})")
    ux, uy = v.x / n, v.y / n
    if ux > tol.abs_eps:
        s = 1.0
    elif ux < -tol.abs_eps:
        s = -1.0
    else:
        s = 1.0 if uy > 0.0 else -1.0
    # + 0.0 turns a signed zero into plain 0.0 so representatives print cleanly
    return Direction(Vec2(s * ux + 0.0, s * uy + 0.0))


def line_angle(d1: Direction, d2: Direction) -> float:
    """Angle in [0, pi/2] between the lines carried by two directions."""
    return math.asin(min(1.0, abs(cross(d1.vector, d2.vector))))


def line_gap(d1: Direction, d2: Direction) -> float:
    """Distance between canonical representatives, insensitive to a sign flip."""
    a = (d1.vector - d2.vector).norm()
    b = (d1.vector + d2.vector).norm()
    return min(a, b)


class EigenKind(Enum):
    NONE = "none"
    ONE = "one"
    TWO = "two"
    ISOTROPIC = "isotropic"


@dataclass(frozen=True)
class EigenReport:
    kind: EigenKind
    directions: tuple[Direction, ...] = ()


def _eigvec_for(m: Mat2, lam: float, tol: TolerancePolicy) -> Vec2:
    # Kernel vector of (m - lam*I): orthogonal to either row; both candidates
    # are parallel in exact arithmetic, so take the numerically larger one.
    va = Vec2(m.a12, lam - m.a11)
    vb = Vec2(lam - m.a22, m.a21)
    return vb if vb.norm() > va.norm() else va


def real_eigen_directions(m: Mat2, tol: TolerancePolicy = DEFAULT_TOL) -> EigenReport:
    """Real eigen-directions of m, classified by the characteristic discriminant.

    Isotropic (scalar multiple of the identity, every direction invariant) is
    detected first; then discriminant < 0 within tolerance means no real
    directions, ~0 one repeated direction, > 0 two.  With two, the direction of
    the larger eigenvalue (trace + sqrt(disc))/2 comes first.
    """
    scale = m.frob()
    if (tol.is_zero(m.a12, scale) and tol.is_zero(m.a21, scale)
            and tol.is_zero(m.a11 - m.a22, scale)):
        return EigenReport(EigenKind.ISOTROPIC)
    tr = m.trace()
    disc = tr * tr - 4.0 * m.det()
    disc_scale = scale * scale
    if tol.is_zero(disc, disc_scale):
        lam = 0.5 * tr
        d = canonical_direction(_eigvec_for(m, lam, tol), tol)
        return EigenReport(EigenKind.ONE, (d,))
    if disc < 0.0:
        return EigenReport(EigenKind.NONE)
    sq = math.sqrt(disc)
    hi = canonical_direction(_eigvec_for(m, 0.5 * (tr + sq), tol), tol)
    lo = canonical_direction(_eigvec_for(m, 0.5 * (tr - sq), tol), tol)
    return EigenReport(EigenKind.TWO, (hi, lo))


def is_eigenvector(m: Mat2, d: Direction, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Residual test: does m map the line of d into itself within tolerance?"""
    image = m @ d.vector
    lam = d.vector.dot(image)
    residual = (image - lam * d.vector).norm()
    return tol.is_zero(residual, m.frob())


def linearly_independent(ms, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Linear independence of up to four matrices, viewed as vectors in R^4.

    Gaussian elimination with full pivoting; every pivot test is scaled by the
    largest original row norm, which keeps the decision invariant under
    permutations of the input list.
    """
    ms = list(ms)
    if not 1 <= len(ms) <= 4:
        raise ValueError(f"expected between 1 and 4 matrices, got {len(ms)}")
    rows = [[m.a11, m.a12, m.a21, m.a22] for m in ms]
    scale = max(math.sqrt(sum(e * e for e in row)) for row in rows)
    live = list(range(len(rows)))
    cols = [0, 1, 2, 3]
    rank = 0
    while live and cols:
        pi, pj = max(((i, j) for i in live for j in cols),
                     key=lambda ij: abs(rows[ij[0]][ij[1]]))
        pivot = rows[pi][pj]
        if tol.is_zero(pivot, scale):
            break
        rank += 1
        live.remove(pi)
        cols.remove(pj)
        for i in live:
            factor = rows[i][pj] / pivot
            for j in cols:
                rows[i][j] -= factor * rows[pi][j]
            rows[i][pj] = 0.0
    return rank == len(ms)
