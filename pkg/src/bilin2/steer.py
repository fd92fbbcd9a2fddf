"""Finite control plan synthesis: reach eta from xi in at most three steps.

The basic move is a one-step solve: the step lands on eta exactly when
[B1 xi, B2 xi] u = eta - A xi has a solution, which fails only on the zero
lines of the pair's steering form.  Off-line states steer in one step; on-line
states under a controllable verdict first take an escape step chosen from a
fixed candidate list.  Pairs whose steering form vanishes identically are
handled by a dedicated two-step construction in a zero-bottom-row basis.
Every plan is replayed through the simulator before it is returned.
"""

from __future__ import annotations

from .classify import (
    BilinearSystem,
    SystemKind,
    Verdict,
    VerdictClass,
    analyze,
    apply_reduction,
    expand_controls,
)
from .mat2 import DEFAULT_TOL, Mat2, SingularMatrix, Vec2, solve2
from .quadform import LineSetKind, form_scale, gram_form, zero_lines
from .simulate import ControlPlan, run
from .structure import zero_bottom_row_pair


class NotControllablePair(RuntimeError):
    """The verdict forbids steering this system at all."""


class InExcludedSet(RuntimeError):
    """The initial state lies on the excluded lines of a nearly controllable system."""


class ZeroState(ValueError):
    """Zero endpoints are outside the controllable state space."""


class EscapeFailed(RuntimeError):
    """No candidate escape control left the singular set with enough margin."""


class NotCanonicalClass(RuntimeError):
    """The two-step construction needs a zero-bottom-row pair and a usable drift."""


class SingularSubstitution(RuntimeError):
    """The input substitution matrix is singular; the inputs were not independent."""


ESCAPE_CANDIDATES_DRIFT = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 3.0))
ESCAPE_CANDIDATES_DRIFTLESS = ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 3.0), (1.0, -1.0))
ESCAPE_MARGIN_FACTOR = 1e3

# Landing accuracy every returned plan is verified against.
PLAN_ABS_TOL = 1e-9
PLAN_REL_TOL = 1e-6


def _require_pair(sys: BilinearSystem) -> None:
    if sys.m != 2:
        raise ValueError(f"expected a two-input system, got {sys.m} inputs; "
                         "apply the verdict's reduction first")


def one_step(sys: BilinearSystem, xi: Vec2, eta: Vec2):
    """Single-step control (u1, u2) landing on eta, or None when xi sits on
    the steering form's zero set."""
    _require_pair(sys)
    b1, b2 = sys.inputs
    c1 = b1 @ xi
    c2 = b2 @ xi
    rhs = eta - (sys.drift @ xi) if sys.drift is not None else eta
    try:
        u = solve2(Mat2(c1.x, c2.x, c1.y, c2.y), rhs, sys.tol)
    except SingularMatrix:
        return None
    return (u.x, u.y)


def escape_step(sys: BilinearSystem, xi: Vec2) -> tuple[tuple[float, float], Vec2]:
    """One control moving xi off the steering form's zero set.

    Candidates are a fixed list that no single line (or affine line, with
    drift) can swallow.  A candidate survives when the form's magnitude at the
    landed state clears ESCAPE_MARGIN_FACTOR times the zero threshold at that
    state's scale; among survivors the largest normalized magnitude
    |q(x)| / |x|^2 wins, so the choice is insensitive to the landing's size.
    """
    _require_pair(sys)
    b1, b2 = sys.inputs
    q = gram_form(b1, b2)
    fscale = form_scale(b1, b2)
    candidates = (ESCAPE_CANDIDATES_DRIFT if sys.kind is SystemKind.WITH_DRIFT
                  else ESCAPE_CANDIDATES_DRIFTLESS)
    best = None
    best_score = 0.0
    for u in candidates:
        m = u[0] * b1 + u[1] * b2
        if sys.drift is not None:
            m = sys.drift + m
        x = m @ xi
        nrm2 = x.x * x.x + x.y * x.y
        if nrm2 == 0.0:
            continue
        value = abs(q.evaluate(x))
        if value < ESCAPE_MARGIN_FACTOR * sys.tol.threshold(fscale * nrm2):
            continue
        score = value / nrm2
        if best is None or score > best_score:
            best = (u, x)
            best_score = score
    if best is None:
        raise EscapeFailed("no escape candidate cleared the singular-set margin")
    return best


def _verified(sys: BilinearSystem, xi: Vec2, eta: Vec2, steps) -> ControlPlan:
    plan = ControlPlan(tuple(steps))
    error = (run(sys, xi, plan).final - eta).norm()
    if error > PLAN_ABS_TOL + PLAN_REL_TOL * eta.norm():
        raise RuntimeError(f"synthesized plan misses the target by {error}; "
                           "this is a bug, not a property of the system")
    return plan


def canonical_steer(sys: BilinearSystem, xi: Vec2, eta: Vec2) -> ControlPlan:
    """Two-step (three with a degeneracy pre-step) transfer for pairs whose
    steering form vanishes identically.

    Such a pair shares a left null direction; in the rotated basis both inputs
    have zero bottom rows, the substituted top-row controls (v1, v2) act as
    v-bar = M_sub v + offset, and the state recursion decouples:

        x1(k+1) = v1_bar(k) x1(k) + v2_bar(k) x2(k),  x2(k+1) = A21 x1(k) + A22 x2(k).

    With A21 nonzero the second coordinate of the target is placed first and
    the first coordinate second.  When the transformed state starts with
    x1 ~ 0 or A21 x1 + A22 x2 ~ 0, a pre-step (0, c) repairs both degeneracies.
    """
    _require_pair(sys)
    if sys.drift is None:
        raise NotCanonicalClass("the two-step construction needs a drift term")
    tol = sys.tol
    found = zero_bottom_row_pair(sys.inputs[0], sys.inputs[1], tol)
    if found is None:
        raise NotCanonicalClass("inputs do not share a left null direction")
    _, p = found
    p_inv = Mat2(p.a11, p.a21, p.a12, p.a22)  # rotation: inverse is transpose
    a_bar = p @ sys.drift @ p_inv
    f1 = p @ sys.inputs[0] @ p_inv
    f2 = p @ sys.inputs[1] @ p_inv
    m_sub = Mat2(f1.a11, f2.a11, f1.a12, f2.a12)
    offset = Vec2(a_bar.a11, a_bar.a12)
    a21, a22 = a_bar.a21, a_bar.a22
    if tol.is_zero(a21, a_bar.frob()):
        raise NotCanonicalClass("drift has no coupling into the decoupled coordinate")

    x = p @ xi
    target = p @ eta
    state_scale = x.norm()
    if tol.is_zero(state_scale):
        raise ZeroState("cannot steer from the zero state")
    bar_steps = []
    if tol.is_zero(x.x, state_scale) or tol.is_zero(a21 * x.x + a22 * x.y, a_bar.frob() * state_scale):
        # x2 is nonzero in both degenerate cases, so (0, c) restores them;
        # c must avoid turning the new A21 x1 + A22 x2 into zero again.
        c = next(cc for cc in (1.0, 2.0)
                 if not tol.is_zero(cc * a21 + a22 * a22, abs(a21) + a22 * a22))
        bar_steps.append(Vec2(0.0, c))
        x = Vec2(c * x.y, a21 * x.x + a22 * x.y)
    s = a21 * x.x + a22 * x.y
    if tol.is_zero(x.x, x.norm()) or tol.is_zero(s, a_bar.frob() * x.norm()):
        raise EscapeFailed("pre-step failed to clear the degenerate coordinates")
    t = target.y - a22 * s
    if not tol.is_zero(t, abs(target.y) + abs(a22 * s)):
        bar_steps.append(Vec2(t / (a21 * x.x), 0.0))
        bar_steps.append(Vec2(a21 * target.x / t, 0.0))
    else:
        bar_steps.append(Vec2(0.0, 0.0))
        bar_steps.append(Vec2(0.0, target.x / s))
    try:
        steps = [solve2(m_sub, vb - offset, tol).as_tuple() for vb in bar_steps]
    except SingularMatrix as exc:
        raise SingularSubstitution("input substitution matrix is singular") from exc
    return _verified(sys, xi, eta, steps)


def plan_transfer(sys: BilinearSystem, xi: Vec2, eta: Vec2) -> ControlPlan:
    """Plan of at most three steps from xi to eta, honoring the verdict.

    Controllable: both endpoints must be nonzero; steering is one step, or an
    escape step plus one step, or the two-step zero-bottom-row construction.
    Nearly controllable: one step from any state off the excluded lines, to
    any target including zero.  Uncontrollable: refused outright.
    """
    verdict = analyze(sys)
    if verdict.klass is VerdictClass.UNCONTROLLABLE:
        raise NotControllablePair("system is uncontrollable; no transfers are synthesized")
    eff = apply_reduction(sys, verdict.reduction)

    def expand(u):
        return expand_controls(verdict.reduction, sys.m, u[0], u[1])

    if verdict.klass is VerdictClass.NEARLY_CONTROLLABLE:
        u = one_step(eff, xi, eta)
        if u is None:
            raise InExcludedSet("initial state in excluded set")
        return _verified(sys, xi, eta, [expand(u)])

    if sys.tol.is_zero(xi.norm()) or sys.tol.is_zero(eta.norm()):
        raise ZeroState("controllable transfers connect nonzero states only")
    b1, b2 = eff.inputs
    lu = zero_lines(gram_form(b1, b2), sys.tol, scale=form_scale(b1, b2))
    if lu.kind is LineSetKind.ALL_OF_PLANE:
        bar_plan = canonical_steer(eff, xi, eta)
        return _verified(sys, xi, eta, [expand(u) for u in bar_plan.steps])
    u = one_step(eff, xi, eta)
    if u is not None:
        return _verified(sys, xi, eta, [expand(u)])
    first, mid = escape_step(eff, xi)
    u = one_step(eff, mid, eta)
    if u is None:
        raise EscapeFailed("escape landed back on the singular set")
    return _verified(sys, xi, eta, [expand(first), expand(u)])
