"""Prescribed rigid-body wing motion.

The wing flaps about the fixed Y-axis and twists about the body-fixed
x-axis (the spanwise axis through the root). Both frames coincide at t = 0:

* fixed frame OXYZ: X spanwise at t = 0, Y horizontal (flap axis), Z up;
* body frame oxyz: x along the span, y along the chord, z the wing normal.

The pose at time t is R(t) = R_Y(theta(t)) . R_x(beta(t)), i.e. twist about
the body x-axis followed by the flap rotation, so the twist axis rides with
the flapping span line.

Sign conventions (documented in all output headers): positive twist lifts
the +y (leading) edge of the wing; the default free stream blows along -Y,
so lift is the +Z force and thrust the +Y force.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TWIST_KNOTS = (19 / 80, 21 / 80, 59 / 80, 61 / 80, 99 / 80)


@dataclass(frozen=True)
class FrameConvention:
    """Fixed OXYZ / body oxyz frame pair, coincident at t = 0."""

    coincidence_time: float = 0.0
    fixed_frame: np.ndarray = field(default_factory=lambda: np.eye(3))
    body_frame: np.ndarray = field(default_factory=lambda: np.eye(3))


@dataclass(frozen=True)
class FlapSchedule:
    """Sinusoidal flap angle theta(t) = theta0 * sin(2 pi f (t - phase*T))."""

    theta0: float            # amplitude, rad
    f: float                 # frequency, Hz
    phase_offset: float = 0.0  # fraction of a period; 0 = literal schedule

    def __post_init__(self):
        if self.theta0 < 0:
            raise ValueError(f"theta0 must be >= 0, got {self.theta0}")
        if self.f <= 0:
            raise ValueError(f"frequency must be > 0, got {self.f}")

    @property
    def period(self) -> float:
        return 1.0 / self.f


@dataclass(frozen=True)
class TwistSchedule:
    """Piecewise twist angle beta(t): hold / half-cosine blend / hold.

    Holds beta0 until the first knot, blends to 0 over [k1, k2], holds 0
    until k3, blends back to beta0 over [k3, k4], and holds beta0 again;
    the pattern repeats with period T from the first knot on. The default
    knots put the blends symmetrically astride the flap extrema.
    """

    beta0: float             # max twist, rad
    f: float                 # Hz; period shared with the flap schedule
    knot_fractions: tuple[float, float, float, float, float] = DEFAULT_TWIST_KNOTS

    def __post_init__(self):
        if self.beta0 < 0:
            raise ValueError(f"beta0 must be >= 0, got {self.beta0}")
        if self.f <= 0:
            raise ValueError(f"frequency must be > 0, got {self.f}")
        k = self.knot_fractions
        if len(k) != 5 or any(b <= a for a, b in zip(k, k[1:])):
            raise ValueError(f"knot fractions must be 5 increasing values, got {k}")
        if abs((k[4] - k[0]) - 1.0) > 1e-12:
            raise ValueError("last knot must be first knot + one period")

    @property
    def period(self) -> float:
        return 1.0 / self.f


@dataclass(frozen=True)
class GeneralizedProfile:
    """Hover-style flap/pitch schedule with phase-advanced stroke reversal.

    The twist flips between +/-(pi/2 - aoa) so the geometric angle of attack
    relative to the stroke motion is aoa_downstroke on the downstroke and
    aoa_upstroke on the upstroke. Each flip is a half-cosine of duration
    rotation_duration*T centred rotation_phase_advance*T before the
    corresponding stroke reversal.
    """

    flap_amplitude: float        # theta0, rad (half the peak-to-peak stroke)
    frequency: float             # Hz
    aoa_downstroke: float        # rad
    aoa_upstroke: float          # rad
    rotation_phase_advance: float = 0.0   # fraction of T, >0 leads the reversal
    rotation_duration: float = 2 / 80     # fraction of T
    phase_offset: float = 0.0

    def __post_init__(self):
        if not -0.5 <= self.rotation_phase_advance <= 0.5:
            raise ValueError("rotation_phase_advance must lie in [-0.5, 0.5]")
        if not 0 < self.rotation_duration < 0.5:
            raise ValueError("rotation_duration must lie in (0, 0.5)")
        if self.frequency <= 0:
            raise ValueError("frequency must be > 0")

    @property
    def period(self) -> float:
        return 1.0 / self.frequency

    @property
    def twist_down(self) -> float:
        return math.pi / 2 - self.aoa_downstroke

    @property
    def twist_up(self) -> float:
        return -(math.pi / 2 - self.aoa_upstroke)


@dataclass(frozen=True)
class WingPose:
    """Rigid pose of the wing: rotation about a pivot plus angular velocity."""

    rotation: np.ndarray          # 3x3 orthonormal
    angular_velocity: np.ndarray  # rad/s, fixed frame
    pivot: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def transform(self, points: np.ndarray) -> np.ndarray:
        """Map body-frame points to fixed-frame positions."""
        p = np.atleast_2d(points) - self.pivot
        out = p @ self.rotation.T + self.pivot
        return out.reshape(np.shape(points))

    def velocity(self, points: np.ndarray) -> np.ndarray:
        """Rigid-body velocity omega x (R (p - pivot)) at body-frame points."""
        p = np.atleast_2d(points) - self.pivot
        r = p @ self.rotation.T
        out = np.cross(self.angular_velocity, r)
        return out.reshape(np.shape(points))


def flap_angle(schedule: FlapSchedule, t: float) -> float:
    """Flap angle theta(t) about the fixed Y-axis."""
    tau = t - schedule.phase_offset * schedule.period
    return schedule.theta0 * math.sin(2 * math.pi * schedule.f * tau)


def flap_rate(schedule: FlapSchedule, t: float) -> float:
    tau = t - schedule.phase_offset * schedule.period
    w = 2 * math.pi * schedule.f
    return schedule.theta0 * w * math.cos(w * tau)


def flap_accel(schedule: FlapSchedule, t: float) -> float:
    tau = t - schedule.phase_offset * schedule.period
    w = 2 * math.pi * schedule.f
    return -schedule.theta0 * w * w * math.sin(w * tau)


def _twist_branch(schedule: TwistSchedule, t: float) -> tuple[int, float, float]:
    """Locate t in the periodic knot pattern.

    Returns (branch, a, b) where branch is 0 (hold beta0), 1 (blend down),
    2 (hold 0) or 3 (blend up) and [a, b] is the active blend window.
    """
    T = schedule.period
    k = [f * T for f in schedule.knot_fractions]
    if t < k[0]:
        return 0, 0.0, k[0]
    tau = k[0] + math.fmod(t - k[0], T)
    if tau < k[1]:
        return 1, k[0], k[1]
    if tau < k[2]:
        return 2, k[1], k[2]
    if tau < k[3]:
        return 3, k[2], k[3]
    return 0, k[3], k[4]


def twist_angle(schedule: TwistSchedule, t: float) -> float:
    """Twist angle beta(t) about the body x-axis."""
    branch, a, b = _twist_branch(schedule, t)
    if branch == 0:
        return schedule.beta0
    if branch == 2:
        return 0.0
    T = schedule.period
    k0 = schedule.knot_fractions[0] * T
    tau = t if t < k0 else k0 + math.fmod(t - k0, T)
    s = math.pi * (tau - a) / (b - a)
    if branch == 1:   # beta0 -> 0
        return 0.5 * schedule.beta0 * (1 + math.cos(s))
    return 0.5 * schedule.beta0 * (1 - math.cos(s))   # 0 -> beta0


def twist_rate(schedule: TwistSchedule, t: float) -> float:
    branch, a, b = _twist_branch(schedule, t)
    if branch in (0, 2):
        return 0.0
    T = schedule.period
    k0 = schedule.knot_fractions[0] * T
    tau = t if t < k0 else k0 + math.fmod(t - k0, T)
    s = math.pi * (tau - a) / (b - a)
    rate = 0.5 * schedule.beta0 * math.pi / (b - a) * math.sin(s)
    return -rate if branch == 1 else rate


def _generalized_twist_and_rate(p: GeneralizedProfile, t: float) -> tuple[float, float]:
    """Square-wave twist between twist_down and twist_up with smooth flips.

    Stroke reversals of theta(t) = theta0 sin(2 pi f t) sit at T/4 (start of
    downstroke) and 3T/4 (start of upstroke); each flip is centred
    rotation_phase_advance*T before its reversal.
    """
    T = p.period
    tau = math.fmod(t - p.phase_offset * T, T)
    if tau < 0:
        tau += T
    half = p.rotation_duration * T / 2
    c_down = T / 4 - p.rotation_phase_advance * T    # flip to twist_down
    c_up = 3 * T / 4 - p.rotation_phase_advance * T  # flip to twist_up
    lo, hi = p.twist_up, p.twist_down

    def blend(x, a, b, va, vb):
        s = math.pi * (x - a) / (b - a)
        val = va + (vb - va) * 0.5 * (1 - math.cos(s))
        rate = (vb - va) * 0.5 * math.pi / (b - a) * math.sin(s)
        return val, rate

    # Unwrap tau into the window [c_down - half, c_down - half + T).
    start = c_down - half
    x = start + math.fmod(tau - start, T)
    if x < 0:
        x += T
    if x < c_down + half:
        return blend(x, c_down - half, c_down + half, lo, hi)
    if x < c_up - half:
        return hi, 0.0
    if x < c_up + half:
        return blend(x, c_up - half, c_up + half, hi, lo)
    return lo, 0.0


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def wing_pose(flap: FlapSchedule,
              twist: TwistSchedule | GeneralizedProfile | None,
              t: float,
              pivot: np.ndarray | None = None) -> WingPose:
    """Pose R_Y(theta) . R_x(beta) with its analytic angular velocity.

    The spatial angular velocity is omega = theta_dot * Y + beta_dot * (R x),
    the twist contribution riding on the flapped body x-axis.
    """
    if isinstance(twist, GeneralizedProfile):
        theta = flap_angle(flap, t)
        theta_dot = flap_rate(flap, t)
        beta, beta_dot = _generalized_twist_and_rate(twist, t)
    elif twist is None:
        theta, theta_dot = flap_angle(flap, t), flap_rate(flap, t)
        beta, beta_dot = 0.0, 0.0
    else:
        theta, theta_dot = flap_angle(flap, t), flap_rate(flap, t)
        beta, beta_dot = twist_angle(twist, t), twist_rate(twist, t)

    ry = rot_y(theta)
    rotation = ry @ rot_x(beta)
    omega = np.array([0.0, theta_dot, 0.0]) + beta_dot * ry[:, 0]
    piv = np.zeros(3) if pivot is None else np.asarray(pivot, dtype=float)
    return WingPose(rotation=rotation, angular_velocity=omega, pivot=piv)


def surface_point_velocity(pose: WingPose, point: np.ndarray) -> np.ndarray:
    """Rigid-body velocity of a body-frame point under the pose."""
    return pose.velocity(np.asarray(point, dtype=float))


def pose_function(flap: FlapSchedule,
                  twist: TwistSchedule | GeneralizedProfile | None,
                  pivot: np.ndarray | None = None):
    """Bind schedules into a t -> WingPose callable."""
    def fn(t: float) -> WingPose:
        return wing_pose(flap, twist, t, pivot=pivot)
    return fn
