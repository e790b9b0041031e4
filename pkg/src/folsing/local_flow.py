"""Numerical checks on local normal forms of reduced singularities.

All flows are real-time flows of holomorphic vector fields on C^2,
integrated by the kernel in :mod:`folsing._kernel`. Saturation of a
transversal uses the exact monodromy branches of the linear first integral
``y x^(-lam)`` instead of integrating around the axes.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernel
from .cs_calculus import EigenClass, classify_eigenvalue

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-14
MONOTONE_SLACK = 1e-9

KINDS = {"linear_diag": 0, "perturbed_diag": 1, "saddle_node_normal": 2}


class FlowError(ValueError):
    pass


class PreconditionError(FlowError):
    pass


class SaturationHypothesisError(PreconditionError):
    pass


class StepUnderflow(FlowError):
    pass


class LeftDomainImmediately(FlowError):
    pass


class NoCrossingInBox(FlowError):
    pass


class MultipleCrossings(FlowError):
    pass


class OnAxis(FlowError):
    pass


class GridOnAxis(FlowError):
    pass


Term = tuple[int, int, complex]


def _terms(raw) -> tuple[Term, ...]:
    out = []
    for i, j, c in raw:
        i, j = int(i), int(j)
        if i < 0 or j < 0 or i + j < 1:
            raise FlowError(f"perturbation monomial x^{i} y^{j} must have degree >= 1")
        out.append((i, j, complex(c)))
    return tuple(out)


def _poly_bound(terms: Sequence[Term], a: float, b: float) -> float:
    return sum(abs(c) * a ** i * b ** j for i, j, c in terms)


@dataclass(frozen=True)
class FlowSpec:
    """Vector field and the polydisc {|x| <= box_a, |y| <= box_b} it lives on.

    ``perturbed_diag`` fields are ``lam1 x (1 + P1) d/dx + lam2 y (1 + P2) d/dy``
    with ``P1``, ``P2`` given as ``(i, j, coef)`` monomials. They are only
    accepted when Re(A) > 0 > Re(B) is certified on the whole box, where
    A = lam1 (1 + P1) and B = lam2 (1 + P2).
    """

    kind: str
    lam1: complex = 1.0
    lam2: complex = -1.0
    box_a: float = 1.0
    box_b: float = 1.0
    pert1: tuple[Term, ...] = ()
    pert2: tuple[Term, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FlowError(f"unknown field kind {self.kind!r}")
        for v in (self.lam1, self.lam2):
            if not cmath.isfinite(complex(v)):
                raise FlowError("eigenvalues must be finite")
        if not (self.box_a > 0 and self.box_b > 0):
            raise FlowError("box radii must be positive")
        object.__setattr__(self, "lam1", complex(self.lam1))
        object.__setattr__(self, "lam2", complex(self.lam2))
        object.__setattr__(self, "pert1", _terms(self.pert1))
        object.__setattr__(self, "pert2", _terms(self.pert2))
        if self.kind != "perturbed_diag" and (self.pert1 or self.pert2):
            raise FlowError(f"{self.kind} fields take no perturbation")
        if self.kind == "perturbed_diag" and not self.is_saddle_type:
            lo, hi = self.re_bounds
            raise PreconditionError(
                f"cannot certify Re(A) > 0 > Re(B) on the box: Re(A) >= {lo:.4g}, Re(B) <= {hi:.4g}"
            )

    @classmethod
    def linear(cls, lam1, lam2, box_a=1.0, box_b=1.0) -> "FlowSpec":
        return cls("linear_diag", lam1, lam2, box_a, box_b)

    @classmethod
    def saddle_node(cls, box_a=1.0, box_b=1.0) -> "FlowSpec":
        return cls("saddle_node_normal", 0.0, 1.0, box_a, box_b)

    @property
    def ratio(self) -> complex:
        return self.lam2 / self.lam1

    @property
    def re_bounds(self) -> tuple[float, float]:
        """Lower bound of Re(A) and upper bound of Re(B) over the box."""
        if self.kind == "saddle_node_normal":
            return -math.inf, math.inf
        e1 = _poly_bound(self.pert1, self.box_a, self.box_b)
        e2 = _poly_bound(self.pert2, self.box_a, self.box_b)
        return self.lam1.real - abs(self.lam1) * e1, self.lam2.real + abs(self.lam2) * e2

    @property
    def is_saddle_type(self) -> bool:
        lo, hi = self.re_bounds
        return lo > 0 > hi

    def _arrays(self):
        def split(terms):
            pows = np.array([(i, j) for i, j, _ in terms], dtype=np.int64).reshape(-1, 2)
            coefs = np.array([c for _, _, c in terms], dtype=np.complex128)
            return pows, coefs

        return split(self.pert1) + split(self.pert2)

    def field(self, x: complex, y: complex) -> tuple[complex, complex]:
        if self.kind == "saddle_node_normal":
            return x * x, y
        p1 = sum((c * x ** i * y ** j for i, j, c in self.pert1), 0j)
        p2 = sum((c * x ** i * y ** j for i, j, c in self.pert2), 0j)
        return self.lam1 * x * (1 + p1), self.lam2 * y * (1 + p2)


@dataclass
class Trajectory:
    spec: FlowSpec
    times: np.ndarray
    xs: np.ndarray
    ys: np.ndarray
    status: str
    rtol: float
    rejected: int = 0

    @property
    def start(self) -> tuple[complex, complex]:
        return complex(self.xs[0]), complex(self.ys[0])

    @property
    def end(self) -> tuple[complex, complex]:
        return complex(self.xs[-1]), complex(self.ys[-1])

    def rows(self):
        for t, x, y in zip(self.times, self.xs, self.ys):
            yield float(t), complex(x), complex(y)


_STATUS = {
    _kernel.DONE: "done",
    _kernel.EXIT_X: "exit_x",
    _kernel.EXIT_Y: "exit_y",
}


def integrate(
    spec: FlowSpec,
    p0: tuple[complex, complex],
    t_range: tuple[float, float],
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    box: tuple[float, float] | None = None,
    max_steps: int = 1_000_000,
) -> Trajectory:
    """Integrate from ``p0`` at ``t_range[0]`` toward ``t_range[1]``.

    Stops early on leaving the box; the last sample then lies on its
    boundary and ``status`` is ``"exit_x"`` or ``"exit_y"``.
    """
    box_a, box_b = box if box is not None else (spec.box_a, spec.box_b)
    x0, y0 = complex(p0[0]), complex(p0[1])
    if abs(x0) > box_a or abs(y0) > box_b:
        raise LeftDomainImmediately(f"start {p0} lies outside the box ({box_a}, {box_b})")
    t0, t1 = map(float, t_range)
    ts, xs, ys, status, rejected = _kernel.integrate(
        KINDS[spec.kind], spec.lam1, spec.lam2, *spec._arrays(),
        x0, y0, t0, t1, rtol, atol, box_a, box_b, 0.0, max_steps,
    )
    if status == _kernel.UNDERFLOW:
        raise StepUnderflow(f"step size underflow near t={ts[-1]}")
    if status == _kernel.MAX_STEPS:
        raise StepUnderflow(f"step budget of {max_steps} exhausted at t={ts[-1]}")
    return Trajectory(
        spec, np.asarray(ts), np.asarray(xs, dtype=complex), np.asarray(ys, dtype=complex),
        _STATUS[status], rtol, rejected,
    )


# -- monotone moduli near a saddle ------------------------------------------

@dataclass
class MonotonicityReport:
    max_x_decrease: float
    max_y_increase: float
    samples: int
    slack: float

    @property
    def passed(self) -> bool:
        return self.max_x_decrease <= self.slack and self.max_y_increase <= self.slack


def _require_saddle(spec: FlowSpec):
    if not spec.is_saddle_type:
        raise PreconditionError(
            f"needs Re(lam1) > 0 > Re(lam2) on the box; got lam1={spec.lam1}, lam2={spec.lam2}"
        )


def monotonicity_check(traj: Trajectory, slack: float = MONOTONE_SLACK) -> MonotonicityReport:
    """Largest backward step of |x| and forward step of |y| along ``traj``."""
    _require_saddle(traj.spec)
    x0, y0 = traj.start
    if x0 == 0 or y0 == 0:
        raise PreconditionError("start point lies on a separatrix")
    ax, ay = np.abs(traj.xs), np.abs(traj.ys)
    dx = np.diff(ax)
    dy = np.diff(ay)
    return MonotonicityReport(
        max_x_decrease=float(max(0.0, -dx.min())) if dx.size else 0.0,
        max_y_increase=float(max(0.0, dy.max())) if dy.size else 0.0,
        samples=len(ax),
        slack=slack,
    )


@dataclass
class Crossing:
    t: float
    x: complex
    y: complex
    trajectory: Trajectory


def crossing_point(
    spec: FlowSpec,
    p0: tuple[complex, complex],
    a: float,
    t_max: float = 1e3,
    rtol: float = DEFAULT_RTOL,
) -> Crossing:
    """The unique point where the forward orbit of ``p0`` meets {|x| = a}."""
    _require_saddle(spec)
    if a > spec.box_a:
        raise PreconditionError(f"level a={a} lies outside the model box {spec.box_a}")
    if not abs(p0[0]) < a:
        raise PreconditionError(f"|x0| = {abs(p0[0])} must be below a = {a}")
    traj = integrate(spec, p0, (0.0, t_max), rtol=rtol, box=(a, spec.box_b))
    if traj.status != "exit_x":
        raise NoCrossingInBox(f"orbit of {p0} did not reach |x| = {a} inside the box ({traj.status})")
    ax = np.abs(traj.xs)
    if np.any(np.diff(ax) < -MONOTONE_SLACK):
        raise MultipleCrossings("|x| is not monotone along the orbit; the crossing may not be unique")
    return Crossing(float(traj.times[-1]), complex(traj.xs[-1]), complex(traj.ys[-1]), traj)


# -- nodal separators ---------------------------------------------------------

@dataclass
class SeparatorReport:
    c: float
    ratio: float
    drift: np.ndarray
    trajectory: Trajectory

    @property
    def max_drift(self) -> float:
        return float(self.drift.max())


def separator_constant(p0, ratio: float) -> float:
    x0, y0 = complex(p0[0]), complex(p0[1])
    if x0 == 0 or y0 == 0:
        raise OnAxis(f"{p0} lies on a separatrix")
    return abs(y0) / abs(x0) ** ratio


def nodal_separator_residual(
    spec: FlowSpec,
    p0: tuple[complex, complex],
    t_range: tuple[float, float] = (-2.0, 2.0),
    rtol: float = DEFAULT_RTOL,
    c: float | None = None,
) -> SeparatorReport:
    """Drift of |y| - c|x|^lam along the orbit through ``p0`` at t = 0.

    ``c`` defaults to the separator constant of ``p0``; pass another start's
    constant to test that both orbits lie on the same separator.
    """
    if spec.kind != "linear_diag" or classify_eigenvalue(spec.ratio).kind is not EigenClass.NODE:
        raise PreconditionError("separator check needs a linear node (real positive eigenvalue ratio)")
    ratio = spec.ratio.real
    own = separator_constant(p0, ratio)
    c = own if c is None else c
    t0, t1 = t_range
    inf = (math.inf, math.inf)
    back = integrate(spec, p0, (0.0, t0), rtol=rtol, box=inf)
    fwd = integrate(spec, p0, (0.0, t1), rtol=rtol, box=inf)
    times = np.concatenate([back.times[::-1], fwd.times[1:]])
    xs = np.concatenate([back.xs[::-1], fwd.xs[1:]])
    ys = np.concatenate([back.ys[::-1], fwd.ys[1:]])
    traj = Trajectory(spec, times, xs, ys, "done", rtol, back.rejected + fwd.rejected)
    drift = np.abs(np.abs(ys) - c * np.abs(xs) ** ratio)
    return SeparatorReport(c, ratio, drift, traj)


# -- saddle-node ---------------------------------------------------------------

@dataclass
class SaddleNodeCrossing:
    x: complex | None
    y: complex | None
    t: float | None
    central_manifold: bool = False
    trajectory: Trajectory | None = None

    @property
    def abs_x(self) -> float | None:
        return None if self.x is None else abs(self.x)


def saddle_node_approach(
    p0: tuple[complex, complex],
    b: float,
    t_max: float = 1e3,
    rtol: float = DEFAULT_RTOL,
    box_a: float = 1.0,
) -> SaddleNodeCrossing:
    """Follow x^2 d/dx + y d/dy from ``p0`` until |y| = b."""
    x0, y0 = complex(p0[0]), complex(p0[1])
    if not x0.real < 0:
        raise PreconditionError("start must lie in the attracting sector Re(x0) < 0")
    if y0 == 0:
        return SaddleNodeCrossing(None, None, None, central_manifold=True)
    if not abs(y0) < b:
        raise PreconditionError(f"need 0 < |y0| < b = {b}")
    spec = FlowSpec.saddle_node(box_a=max(box_a, abs(x0)), box_b=b)
    traj = integrate(spec, (x0, y0), (0.0, t_max), rtol=rtol)
    if traj.status != "exit_y":
        raise NoCrossingInBox(f"orbit of {p0} did not reach |y| = {b} ({traj.status})")
    return SaddleNodeCrossing(complex(traj.xs[-1]), complex(traj.ys[-1]), float(traj.times[-1]), False, traj)


# -- saturation of a transversal ----------------------------------------------

@dataclass(frozen=True)
class TransversalSpec:
    """The disc {x = a, |y| < delta} and the branch range [-K, K]."""

    a: float
    delta: float
    K: int = 0

    def __post_init__(self):
        if not (self.a > 0 and self.delta > 0 and self.K >= 0):
            raise FlowError("need a > 0, delta > 0, K >= 0")


@dataclass
class SaturationReport:
    xs: np.ndarray
    ys: np.ndarray
    covered: np.ndarray
    branch: np.ndarray  # witness branch per point; meaningful where covered

    @property
    def fraction(self) -> float:
        return float(self.covered.mean()) if self.covered.size else 1.0


def require_no_node(lam) -> complex:
    kind = classify_eigenvalue(lam).kind
    if kind in (EigenClass.NODE, EigenClass.NON_REDUCED):
        raise SaturationHypothesisError(
            f"eigenvalue {lam} is a {kind.value}: saturation needs a non-dicritical "
            "foliation with no nodes in its resolution"
        )
    if kind is EigenClass.SADDLE_NODE:
        raise SaturationHypothesisError(
            "eigenvalue 0 has no linear model; saturation is checked on linear saddles and hyperbolic points"
        )
    return complex(lam)


def grid(moduli: Sequence[float], args: Sequence[float] = (0.0,)) -> np.ndarray:
    r = np.asarray(moduli, dtype=float)
    th = np.asarray(args, dtype=float)
    return (r[:, None] * np.exp(1j * th[None, :])).ravel()


def saturation_coverage(
    lam,
    sigma: TransversalSpec,
    x_points: Sequence[complex],
    y_points: Sequence[complex],
) -> SaturationReport:
    """Which points of the grid ``x_points x y_points`` reach the transversal.

    Transporting y along x from x0 to a on the branch with winding k gives
    |y| = |y0| |a/x0|^Re(lam) exp(-Im(lam) (Arg(a/x0) + 2 pi k)). The point
    is covered when this is below delta for some |k| <= K; the witness is
    the admissible k of least modulus.
    """
    lam = require_no_node(lam)
    X, Y = np.meshgrid(np.asarray(x_points, complex), np.asarray(y_points, complex), indexing="ij")
    X, Y = X.ravel(), Y.ravel()
    if np.any(X == 0) or np.any(Y == 0):
        raise GridOnAxis("grid points must avoid both axes")
    ratio = sigma.a / X
    # log-modulus on branch k is base - 2*pi*Im(lam)*k
    base = np.log(np.abs(Y)) + lam.real * np.log(np.abs(ratio)) - lam.imag * np.angle(ratio)
    target = math.log(sigma.delta)
    K = sigma.K
    if lam.imag == 0:
        covered = base < target
        branch = np.zeros(X.shape, dtype=int)
    else:
        with np.errstate(over="ignore"):
            thr = (base - target) / (2 * math.pi * lam.imag)
        # only k in [-K, K] matters; clipping keeps the casts finite
        thr = np.clip(thr, -K - 2, K + 2)
        if lam.imag > 0:
            kmin = np.floor(thr).astype(int) + 1  # need k > thr
            branch = np.maximum(kmin, 0)
            covered = kmin <= K
        else:
            kmax = np.ceil(thr).astype(int) - 1  # need k < thr
            branch = np.minimum(kmax, 0)
            covered = kmax >= -K
    return SaturationReport(X, Y, covered, np.where(covered, branch, 0))


def transported_modulus(lam: complex, x0: complex, y0: complex, a: float, k: int) -> float:
    """|y| after continuing y x^(-lam) from x0 to a with winding k."""
    w = a / x0
    log_w = complex(math.log(abs(w)), cmath.phase(w) + 2 * math.pi * k)
    return abs(y0 * cmath.exp(lam * log_w))


# -- chained transport --------------------------------------------------------

def saddle_time_rotation(lam: complex) -> complex:
    """Unit u with Re(u) > 0 > Re(u lam), so u x d/dx + u lam y d/dy is a saddle field."""
    lam = complex(lam)
    if lam.imag == 0 and lam.real >= 0:
        raise PreconditionError(f"eigenvalue {lam} lies in [0, +inf); no saddle orientation")
    phi = cmath.phase(lam)
    # arg u in (-pi/2, pi/2) and arg u + phi in (pi/2, 3pi/2) mod 2 pi
    best = None
    for m in (-1, 0, 1):
        lo = max(-math.pi / 2, math.pi / 2 - phi + 2 * math.pi * m)
        hi = min(math.pi / 2, 3 * math.pi / 2 - phi + 2 * math.pi * m)
        if hi > lo and (best is None or hi - lo > best[1] - best[0]):
            best = (lo, hi)
    return cmath.exp(0.5j * (best[0] + best[1]))


@dataclass(frozen=True)
class TransportStage:
    """One corner chart. ``kind`` is "saddle" (with eigenvalue ``lam`` of the
    outgoing component) or "saddle_node" (central side in, strong side out).

    ``level`` is the exit level: |x| = level for saddles, |y| = level for
    saddle-nodes. ``entry`` is the coordinate along the incoming component
    used when a previous stage hands over its distance.
    """

    kind: str
    lam: complex = -1.0
    level: float = 1.0
    entry: complex = 0.5


@dataclass
class TransportResult:
    start: tuple[complex, complex]
    exits: list[tuple[complex, complex]]
    distance: float


def _saddle_stage(stage: TransportStage, p):
    u = saddle_time_rotation(stage.lam)
    box_b = max(1.0, 2 * abs(p[1]))
    spec = FlowSpec.linear(u, u * stage.lam, box_a=stage.level, box_b=box_b)
    cr = crossing_point(spec, p, stage.level)
    return (cr.x, cr.y), abs(cr.y)


def _saddle_node_stage(stage: TransportStage, p):
    cr = saddle_node_approach(p, stage.level)
    if cr.central_manifold:
        raise PreconditionError("start lies on the central manifold")
    return (cr.x, cr.y), cr.abs_x


def chain_transport_experiment(
    stages: Sequence[TransportStage],
    starts: Sequence[tuple[complex, complex]],
) -> list[TransportResult]:
    """Push each start through the corner charts of a chain.

    Each stage returns the distance of its exit point to the outgoing
    component; the next stage starts that far from its incoming component.
    """
    if not stages:
        raise PreconditionError("need at least one stage")
    results = []
    for start in starts:
        p = (complex(start[0]), complex(start[1]))
        exits = []
        dist = math.nan
        for k, stage in enumerate(stages):
            if k > 0:
                if stage.kind == "saddle":
                    p = (complex(dist), complex(stage.entry))
                else:
                    p = (complex(stage.entry), complex(dist))
            if stage.kind == "saddle":
                exit_pt, dist = _saddle_stage(stage, p)
            elif stage.kind == "saddle_node":
                exit_pt, dist = _saddle_node_stage(stage, p)
            else:
                raise PreconditionError(f"unknown stage kind {stage.kind!r}")
            exits.append(exit_pt)
        results.append(TransportResult((complex(start[0]), complex(start[1])), exits, dist))
    return results


def stages_from_chain(g, chain, saddle_level: float = 1.0, sn_level: float = 0.5) -> list[TransportStage]:
    """Corner charts along a verified chain."""
    stages = []
    for k, zid in enumerate(chain.corners):
        z = g.corner(zid)
        dst = chain.components[k + 1]
        if z.saddle_node:
            stages.append(TransportStage("saddle_node", level=sn_level, entry=-0.2))
        else:
            stages.append(TransportStage("saddle", lam=z.index_on(dst), level=saddle_level, entry=0.5))
    return stages


# -- random saddle fields -------------------------------------------------------

def random_saddle_spec(
    rng: random.Random,
    box: float = 0.5,
    coef_bound: float = 0.1,
    degree: int = 2,
    modulus_range: tuple[float, float] = (0.5, 3.0),
    max_tries: int = 1000,
) -> FlowSpec:
    """Perturbed saddle field whose sign hypothesis is certified on the box."""
    monomials = [(i, d - i) for d in range(1, degree + 1) for i in range(d, -1, -1)]
    for _ in range(max_tries):
        lam1 = cmath.rect(rng.uniform(*modulus_range), rng.uniform(-math.pi / 2, math.pi / 2))
        lam2 = -cmath.rect(rng.uniform(*modulus_range), rng.uniform(-math.pi / 2, math.pi / 2))

        def coefs():
            return tuple(
                (i, j, cmath.rect(rng.uniform(0, coef_bound), rng.uniform(-math.pi, math.pi)))
                for i, j in monomials
            )

        try:
            return FlowSpec("perturbed_diag", lam1, lam2, box, box, coefs(), coefs())
        except PreconditionError:
            continue
    raise RuntimeError("could not draw a certified saddle field")


def random_start(rng: random.Random, box: float, margin: float = 0.02) -> tuple[complex, complex]:
    """Point of the open box away from both axes."""
    def draw():
        return cmath.rect(rng.uniform(margin, box * (1 - margin)), rng.uniform(-math.pi, math.pi))

    return draw(), draw()
