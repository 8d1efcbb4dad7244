"""Fixed and adaptive explicit time steppers for state dynamics.

Provides forward Euler, the classical fourth-order Runge-Kutta scheme and an
adaptive Dormand-Prince 5(4) pair with FSAL reuse. The right-hand side is an
autonomous map state -> state. Error control uses the max norm
|err| / (atol + rtol * |x|) with acceptance at <= 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiniteState, StepLimitExceeded

__all__ = [
    "IntegratorConfig",
    "Trajectory",
    "euler_step",
    "rk4_step",
    "dopri5_step",
    "integrate",
    "iterate_map",
]

SCHEMES = ("euler", "rk4", "dopri5")

SAFETY = 0.9
FACTOR_MIN = 0.2
FACTOR_MAX = 5.0

# Dormand-Prince 5(4) tableau. B holds the fifth-order weights, E the
# difference against the embedded fourth-order solution.
DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
DP_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
DP_E = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


@dataclass(frozen=True)
class IntegratorConfig:
    """Scheme selection and step control parameters."""

    scheme: str = "dopri5"
    h: float = 0.1
    rtol: float = 1e-6
    atol: float = 1e-8
    t_end: float = 1.0
    max_steps: int = 100_000

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.h <= 0.0:
            raise ValueError("step size h must be positive")
        if self.rtol <= 0.0 or self.atol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.t_end <= 0.0:
            raise ValueError("t_end must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")

    def to_json(self):
        return {
            "scheme": self.scheme,
            "h": self.h,
            "rtol": self.rtol,
            "atol": self.atol,
            "t_end": self.t_end,
            "max_steps": self.max_steps,
        }

    @classmethod
    def from_json(cls, obj):
        base = cls()
        return cls(
            scheme=str(obj.get("scheme", base.scheme)),
            h=float(obj.get("h", base.h)),
            rtol=float(obj.get("rtol", base.rtol)),
            atol=float(obj.get("atol", base.atol)),
            t_end=float(obj.get("t_end", base.t_end)),
            max_steps=int(obj.get("max_steps", base.max_steps)),
        )


@dataclass
class Trajectory:
    """Recorded times and states, plus optional per-time diagnostics."""

    times: np.ndarray
    states: list[np.ndarray]
    energies: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def final_state(self):
        return self.states[-1]

    def __len__(self):
        return len(self.states)


def euler_step(f, x, h):
    """One forward Euler step."""
    return x + h * f(x)


def rk4_step(f, x, h):
    """One classical fourth-order Runge-Kutta step."""
    k1 = f(x)
    k2 = f(x + 0.5 * h * k1)
    k3 = f(x + 0.5 * h * k2)
    k4 = f(x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def dopri5_step(f, x, h, k1=None):
    """One Dormand-Prince 5(4) step.

    Returns (x_new, err_vec, k_last). k_last is the derivative at x_new and
    can be fed back as k1 of the next step (FSAL). Passing k1 skips the
    first stage evaluation.
    """
    k = [k1 if k1 is not None else f(x)]
    for row in DP_A[1:]:
        xi = x + h * sum(a * ki for a, ki in zip(row, k))
        k.append(f(xi))
    x_new = x + h * sum(b * ki for b, ki in zip(DP_B, k) if b != 0.0)
    err = h * sum(e * ki for e, ki in zip(DP_E, k) if e != 0.0)
    return x_new, err, k[6]


def _error_norm(err, x, rtol, atol):
    scale = atol + rtol * np.abs(x)
    return float(np.max(np.abs(err) / scale)) if err.size else 0.0


def _initial_step(f, x0, cfg):
    """Curvature-based starting step, capped at t_end / 100."""
    cap = cfg.t_end / 100.0
    scale = cfg.atol + cfg.rtol * np.abs(x0)
    f0 = f(x0)
    d0 = float(np.max(np.abs(x0) / scale)) if x0.size else 0.0
    d1 = float(np.max(np.abs(f0) / scale)) if x0.size else 0.0
    if d0 < 1e-5 or d1 < 1e-5:
        h_a = 1e-6
    else:
        h_a = 0.01 * d0 / d1
    x1 = x0 + h_a * f0
    f1 = f(x1)
    d2 = float(np.max(np.abs(f1 - f0) / scale)) / h_a
    if max(d1, d2) <= 1e-15:
        h_b = max(1e-6, h_a * 1e-3)
    else:
        h_b = (0.01 / max(d1, d2)) ** 0.2
    return min(cap, h_b)


def _check_finite(x, t):
    if not np.all(np.isfinite(x)):
        raise NonFiniteState(f"state left the finite range after t = {t:.6g}", last_time=t)


def integrate(rhs, x0, cfg, energy_fn=None, post_step=None):
    """Advance x' = rhs(x) from t = 0 to cfg.t_end.

    Fixed-step schemes record every step; dopri5 records accepted steps and
    always lands exactly on t_end. energy_fn, when given, is evaluated on
    every recorded state. post_step, when given, maps each recorded state to
    a replacement (used for semi-supervised clamping); it invalidates FSAL
    reuse for the step that follows.

    Raises StepLimitExceeded when the step budget runs out and
    NonFiniteState when the state blows up; the message carries the last
    finite time.
    """
    x = np.array(x0, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("initial state must be finite")
    times = [0.0]
    states = [x.copy()]
    energies = [energy_fn(x)] if energy_fn else None
    err_norms = []

    def record(t, x):
        times.append(t)
        states.append(x.copy())
        if energy_fn:
            energies.append(energy_fn(x))

    if cfg.scheme in ("euler", "rk4"):
        step = euler_step if cfg.scheme == "euler" else rk4_step
        n_full = int(np.floor(cfg.t_end / cfg.h + 1e-12))
        remainder = cfg.t_end - n_full * cfg.h
        if remainder < 1e-12 * cfg.t_end:
            remainder = 0.0
        n_total = n_full + (1 if remainder else 0)
        if n_total > cfg.max_steps:
            raise StepLimitExceeded(f"{n_total} fixed steps exceed max_steps = {cfg.max_steps}")
        t = 0.0
        for k in range(n_total):
            h = cfg.h if k < n_full else remainder
            x_new = step(rhs, x, h)
            _check_finite(x_new, t)
            t = cfg.t_end if k == n_total - 1 else t + h
            if post_step is not None:
                x_new = np.array(post_step(x_new), dtype=np.float64)
            x = x_new
            record(t, x)
    else:
        t = 0.0
        h = _initial_step(rhs, x, cfg)
        k1 = None
        attempts = 0
        while t < cfg.t_end - 1e-12 * cfg.t_end:
            h = min(h, cfg.t_end - t)
            attempts += 1
            if attempts > cfg.max_steps:
                raise StepLimitExceeded(
                    f"dopri5 exceeded max_steps = {cfg.max_steps} at t = {t:.6g}"
                )
            x_new, err, k_last = dopri5_step(rhs, x, h, k1=k1)
            if not np.all(np.isfinite(x_new)) or not np.all(np.isfinite(err)):
                raise NonFiniteState(
                    f"state left the finite range after t = {t:.6g}", last_time=t
                )
            norm = _error_norm(err, x, cfg.rtol, cfg.atol)
            if norm <= 1.0:
                t = t + h
                if post_step is not None:
                    x_new = np.array(post_step(x_new), dtype=np.float64)
                    k1 = None
                else:
                    k1 = k_last
                x = x_new
                record(t, x)
                err_norms.append(norm)
                factor = FACTOR_MAX if norm == 0.0 else SAFETY * norm ** -0.2
            else:
                k1 = None
                factor = SAFETY * norm ** -0.2
            h = h * min(FACTOR_MAX, max(FACTOR_MIN, factor))

    traj = Trajectory(
        times=np.array(times),
        states=states,
        energies=np.array(energies) if energies is not None else None,
    )
    if cfg.scheme == "dopri5":
        traj.meta["error_norms"] = np.array(err_norms)
    return traj


def iterate_map(step_fn, x0, n_steps, energy_fn=None, post_step=None):
    """Iterate a discrete-time map, recording every step as time 0, 1, ...

    The same recording conventions as integrate() apply.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    x = np.array(x0, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("initial state must be finite")
    times = [0.0]
    states = [x.copy()]
    energies = [energy_fn(x)] if energy_fn else None
    for k in range(int(n_steps)):
        x = np.asarray(step_fn(x), dtype=np.float64)
        _check_finite(x, float(k))
        if post_step is not None:
            x = np.array(post_step(x), dtype=np.float64)
        times.append(float(k + 1))
        states.append(x.copy())
        if energy_fn:
            energies.append(energy_fn(x))
    return Trajectory(
        times=np.array(times),
        states=states,
        energies=np.array(energies) if energies is not None else None,
    )
