"""Shared invariant structure of a matrix family, and the transforms that expose it.

Three structural facts drive the controllability verdicts: a common real
eigenvector (which triangularizes the whole family), a common left null
direction (which zeroes out every bottom row), and simultaneous
anti-diagonalizability of a trace-free pair.  Each detector returns the change
of basis that realizes the structure, so callers can both certify the verdict
and steer in the transformed frame.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .mat2 import (
    DEFAULT_TOL,
    Direction,
    EigenKind,
    Mat2,
    SingularMatrix,
    TolerancePolicy,
    Vec2,
    canonical_direction,
    cond2,
    cross,
    is_eigenvector,
    real_eigen_directions,
    rot90,
)
from .quadform import LineSetKind, form_scale, gram_form, zero_lines


class NotCommonEigenvector(ValueError):
    """The supplied direction is not invariant under every matrix."""


class AllIsotropic(ValueError):
    """Every matrix is a scalar multiple of the identity; no candidate directions."""


class NoCombinationFound(RuntimeError):
    """No tested coefficient pair removed the shared eigenvector."""


class FormClass(Enum):
    UPPER_TRIANGULAR = "upper-triangular"
    ZERO_BOTTOM_ROW = "zero-bottom-row"
    ANTI_DIAGONAL = "anti-diagonal"


@dataclass(frozen=True)
class StructureReport:
    """A change of basis P and the canonical forms P @ M @ P^-1 it produces."""

    form_class: FormClass
    transform: Mat2
    transform_inv: Mat2
    canonical_forms: tuple[Mat2, ...]
    common_eigenvector: Optional[Direction]
    transform_cond: float


def common_real_eigenvector(ms, tol: TolerancePolicy = DEFAULT_TOL) -> Optional[Direction]:
    """A direction invariant under every matrix in ms, or None.

    Candidates come from the first non-isotropic member (it has at most two
    real eigen-directions, and any common direction must be one of them); each
    is certified against the whole family by residual test.  Isotropic members
    impose no constraint.  Raises AllIsotropic when no member constrains the
    answer at all.
    """
    ms = list(ms)
    reports = [real_eigen_directions(m, tol) for m in ms]
    candidates = None
    for report in reports:
        if report.kind is EigenKind.ISOTROPIC:
            continue
        candidates = report.directions
        break
    if candidates is None:
        raise AllIsotropic("every matrix is scalar; any direction is invariant")
    for d in candidates:
        if all(is_eigenvector(m, d, tol) for m in ms):
            return d
    return None


def triangularize(ms, d: Direction, tol: TolerancePolicy = DEFAULT_TOL) -> StructureReport:
    """Rotate the common eigenvector d onto the first axis.

    P^-1 has columns [d, rot90(d)], so P is a rotation (condition number 1) and
    every P @ M @ P^-1 is upper triangular with M's eigenvalue along d in the
    (1,1) slot.  The report is classed ZERO_BOTTOM_ROW when every (2,2) entry
    also vanishes.
    """
    ms = tuple(ms)
    for m in ms:
        if not is_eigenvector(m, d, tol):
            raise NotCommonEigenvector(
                f"({d.x}, {d.y}) is not an eigenvector of {m.rows()} within tolerance")
    beta = rot90(d.vector)
    p_inv = Mat2(d.x, beta.x, d.y, beta.y)
    p = Mat2(d.x, d.y, beta.x, beta.y)
    forms = tuple(p @ m @ p_inv for m in ms)
    zero_bottom = all(tol.is_zero(f.a22, m.frob()) for f, m in zip(forms, ms))
    klass = FormClass.ZERO_BOTTOM_ROW if zero_bottom else FormClass.UPPER_TRIANGULAR
    return StructureReport(klass, p, p_inv, forms, d, 1.0)


def _left_kernel(m: Mat2, tol: TolerancePolicy) -> Optional[Vec2]:
    """A nonzero w with w^T m = 0, None when m is nonsingular, or a zero
    vector sentinel when m itself is zero (every w works)."""
    scale = m.col1().norm() if m.col1().norm() >= m.col2().norm() else m.col2().norm()
    if not tol.is_zero(m.det(), scale * scale):
        return None
    col = m.col1() if m.col1().norm() >= m.col2().norm() else m.col2()
    if tol.is_zero(col.norm()):
        return Vec2(0.0, 0.0)
    return rot90(col)


def zero_bottom_row_pair(b1: Mat2, b2: Mat2,
                         tol: TolerancePolicy = DEFAULT_TOL) -> Optional[tuple[Direction, Mat2]]:
    """Common left null direction w of the pair and a P whose second row is w^T.

    Both matrices must be singular with proportional left kernels; then
    P @ bi @ P^-1 has a zero bottom row for both.  P's first row is the unit
    vector orthogonal to w, so P is a rotation.  Returns None when the pair is
    not in this class.
    """
    w1 = _left_kernel(b1, tol)
    w2 = _left_kernel(b2, tol)
    if w1 is None or w2 is None:
        return None
    if w1.norm() == 0.0 and w2.norm() == 0.0:
        w = Vec2(0.0, 1.0)
    elif w1.norm() == 0.0:
        w = w2
    elif w2.norm() == 0.0:
        w = w1
    else:
        if not tol.is_zero(cross(w1, w2), w1.norm() * w2.norm()):
            return None
        w = w1
    d = canonical_direction(w, tol)
    p = Mat2(d.y, -d.x, d.x, d.y)
    return d, p


def antidiagonalize_pair(b1: Mat2, b2: Mat2,
                         tol: TolerancePolicy = DEFAULT_TOL) -> Optional[StructureReport]:
    """Simultaneously anti-diagonalize a pair, or None.

    Both traces must vanish.  Candidate first basis vectors v are the zero
    lines of the pair's steering form: in an anti-diagonalizing basis both
    matrices swap the basis lines, so the basis lines are exactly where the
    form vanishes.  A candidate succeeds when v and b1 @ v span the plane and
    b2 maps b1 @ v back onto the line of v; then P^-1 = [v, b1 @ v] columns.
    """
    if not tol.is_zero(b1.trace(), b1.frob()):
        return None
    if not tol.is_zero(b2.trace(), b2.frob()):
        return None
    lu = zero_lines(gram_form(b1, b2), tol, scale=form_scale(b1, b2))
    if lu.kind not in (LineSetKind.ONE_LINE, LineSetKind.TWO_LINES):
        return None
    for d in lu.lines:
        v = d.vector
        w = b1 @ v
        if tol.is_zero(w.norm(), b1.frob()):
            continue
        if tol.is_zero(cross(v, w), w.norm()):
            continue
        z = b2 @ w
        if not tol.is_zero(cross(z, v), b2.frob() * w.norm()):
            continue
        p_inv = Mat2(v.x, w.x, v.y, w.y)
        try:
            p = p_inv.inverse(tol)
        except SingularMatrix:
            continue
        forms = (p @ b1 @ p_inv, p @ b2 @ p_inv)
        return StructureReport(FormClass.ANTI_DIAGONAL, p, p_inv, forms, None,
                               cond2(p_inv, tol))
    return None


_FALLBACK_SEED = 0x2D2D


def combine_inputs(a: Mat2, b1: Mat2, b2: Mat2, b3: Mat2,
                   tol: TolerancePolicy = DEFAULT_TOL) -> tuple[float, float]:
    """Coefficients (ca, cb) such that {a, b1, ca*b2 + cb*b3} has no common
    real eigenvector.

    Tries (1,0), (0,1), (1,1) first - when {a, b1, b2, b3} share no direction
    one of these works outside degenerate scalar-matrix corners - then falls
    back to a fixed-seed randomized search.  Every candidate is certified by
    re-running the common-eigenvector check, never trusted from construction.
    """
    rng = random.Random(_FALLBACK_SEED)
    candidates = [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
    candidates += [(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)) for _ in range(32)]
    for ca, cb in candidates:
        combined = ca * b2 + cb * b3
        try:
            if common_real_eigenvector([a, b1, combined], tol) is None:
                return ca, cb
        except AllIsotropic:
            continue
    raise NoCombinationFound(
        "no tested combination of the last two inputs removed the shared eigenvector")
