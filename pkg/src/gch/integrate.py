"""Deterministic explicit time stepping with snapshot recording.

Classical four-stage Runge-Kutta with a fixed step chosen from a CFL-style
bound on the transport coefficients 4u and 2u_x.  The step is re-examined
every 100 steps and may only shrink, never grow, so reruns with identical
inputs are bit-identical.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field as dc_field

import numpy as np

from .dynamics import SIMULATION_FORMS, RhsForm, rhs
from .errors import BlowUpError
from .grid import Field, Grid, lp_norm, derivative

__all__ = [
    "Trajectory",
    "rk4_step",
    "estimate_dt",
    "simulate",
    "snapshots_to_csv",
    "write_checkpoint",
    "read_checkpoint",
    "BOUNDARY_TOLERANCE",
]

CFL_NUMBER = 0.5
DT_MAX = 1e-2
BLOWUP_FACTOR = 1e3
#: A run is marked valid only while max(|u(-L)|, |u(L-dx)|) stays below this.
BOUNDARY_TOLERANCE = 1e-8


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered snapshots of a simulation plus run metadata."""

    grid: Grid
    times: np.ndarray
    snapshots: tuple
    form: RhsForm
    dt_initial: float
    dt_final: float
    n_steps: int
    dealias: bool
    boundary_magnitudes: np.ndarray
    metadata: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if len(self.snapshots) != len(self.times):
            raise ValueError("snapshots and times must have equal length")
        if self.times[0] != 0.0 or np.any(np.diff(self.times) <= 0):
            raise ValueError("times must start at 0 and increase strictly")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def u0(self) -> Field:
        return self.snapshots[0]

    @property
    def final(self) -> Field:
        return self.snapshots[-1]

    @property
    def valid(self) -> bool:
        """True when every snapshot kept the boundary below the tolerance."""
        return bool(np.all(self.boundary_magnitudes <= BOUNDARY_TOLERANCE))

    @classmethod
    def from_snapshots(cls, times, snapshots, form: RhsForm = RhsForm.FORM_B) -> "Trajectory":
        """Wrap precomputed snapshots (frozen fields, synthetic data) as a trajectory."""
        snapshots = tuple(snapshots)
        if not snapshots:
            raise ValueError("need at least one snapshot")
        grid = snapshots[0].grid
        times = np.asarray(times, dtype=float)
        return cls(
            grid=grid,
            times=times,
            snapshots=snapshots,
            form=form,
            dt_initial=np.nan,
            dt_final=np.nan,
            n_steps=0,
            dealias=True,
            boundary_magnitudes=np.asarray([_boundary_magnitude(u) for u in snapshots]),
            metadata={"synthetic": True},
        )


def _boundary_magnitude(u: Field) -> float:
    return float(max(abs(u.values[0]), abs(u.values[-1])))


def _stage(index: int, deriv, y: Field) -> Field:
    k = deriv(y)
    if not np.all(np.isfinite(k.values)):
        raise FloatingPointError(f"non-finite RK4 stage {index}")
    return k


def rk4_step(u: Field, dt: float, deriv) -> Field:
    """One classical RK4 update; raises on a non-finite stage."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    k1 = _stage(1, deriv, u)
    k2 = _stage(2, deriv, u + (0.5 * dt) * k1)
    k3 = _stage(3, deriv, u + (0.5 * dt) * k2)
    k4 = _stage(4, deriv, u + dt * k3)
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def estimate_dt(u: Field) -> float:
    """CFL-style step from the transport coefficients, capped at DT_MAX.

    dt = 0.5 dx / max(1, ||4u|| + ||2u_x||), the coefficients being the
    advective terms of the momentum formulation.
    """
    speed = 4.0 * lp_norm(u, np.inf) + 2.0 * lp_norm(derivative(u, 1), np.inf)
    return float(min(CFL_NUMBER * u.grid.dx / max(1.0, speed), DT_MAX))


def simulate(
    u0: Field,
    T: float,
    form: RhsForm = RhsForm.FORM_B,
    snapshot_stride: int = 1,
    dt: float | None = None,
    dealias: bool = True,
) -> Trajectory:
    """Integrate from u0 to time T, recording every ``snapshot_stride`` steps.

    The step size comes from :func:`estimate_dt` unless ``dt`` is given
    explicitly; either way the last step is shortened to land exactly on T.
    Aborts with :class:`BlowUpError` if the sup norm grows by more than
    a factor of 1000 over the initial datum.
    """
    form = RhsForm(form)
    if form not in SIMULATION_FORMS:
        raise ValueError(f"form {form.value!r} is diagnostic-only and cannot be simulated")
    if T <= 0.0:
        raise ValueError(f"T must be positive, got {T}")
    if snapshot_stride < 1:
        raise ValueError("snapshot_stride must be >= 1")

    deriv = lambda v: rhs(v, form, dealias)
    dt_nominal = float(dt) if dt is not None else estimate_dt(u0)
    if dt_nominal <= 0.0:
        raise ValueError(f"dt must be positive, got {dt_nominal}")
    dt_initial = dt_nominal
    initial_peak = lp_norm(u0, np.inf)
    guard = BLOWUP_FACTOR * initial_peak if initial_peak > 0.0 else np.inf

    times = [0.0]
    snaps = [u0]
    boundary = [_boundary_magnitude(u0)]
    u, t, step = u0, 0.0, 0
    while t < T - 1e-12 * T:
        if dt is None and step > 0 and step % 100 == 0:
            dt_nominal = min(dt_nominal, estimate_dt(u))
        step_dt = min(dt_nominal, T - t)
        u = rk4_step(u, step_dt, deriv)
        t = min(t + step_dt, T)
        step += 1
        peak = lp_norm(u, np.inf)
        if peak > guard:
            raise BlowUpError(t, step, peak, guard)
        if step % snapshot_stride == 0 or t >= T - 1e-12 * T:
            times.append(t)
            snaps.append(u)
            boundary.append(_boundary_magnitude(u))

    return Trajectory(
        grid=u0.grid,
        times=np.asarray(times),
        snapshots=tuple(snaps),
        form=form,
        dt_initial=dt_initial,
        dt_final=dt_nominal,
        n_steps=step,
        dealias=dealias,
        boundary_magnitudes=np.asarray(boundary),
        metadata={"T": T, "snapshot_stride": snapshot_stride, "dt_override": dt},
    )


def snapshots_to_csv(traj: Trajectory, stream, config_hash: str | None = None) -> None:
    """Write the trajectory in long format with columns t,x,u."""
    if config_hash is not None:
        stream.write(f"# config-hash: {config_hash}\n")
    stream.write("t,x,u\n")
    for t, snap in zip(traj.times, traj.snapshots):
        ts = repr(float(t))
        for xj, uj in zip(traj.grid.x, snap.values):
            stream.write(f"{ts},{float(xj)!r},{float(uj)!r}\n")


_CHECKPOINT_MAGIC = b"GCH1"
_HEADER = struct.Struct("<4sIdd")  # magic, n (uint32), L, t -- little-endian


def write_checkpoint(path, u: Field, t: float) -> None:
    """Binary state dump: magic "GCH1", uint32 n, float64 L, float64 t, n float64 samples.

    All fields little-endian.
    """
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_CHECKPOINT_MAGIC, u.grid.n, u.grid.half_width, float(t)))
        fh.write(u.values.astype("<f8").tobytes())


def read_checkpoint(path):
    """Read a binary state dump; returns (t, Field)."""
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        magic, n, L, t = _HEADER.unpack(header)
        if magic != _CHECKPOINT_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        raw = fh.read(8 * n)
    values = np.frombuffer(raw, dtype="<f8")
    if values.size != n:
        raise ValueError(f"{path}: truncated state (expected {n} samples, got {values.size})")
    return t, Field(Grid(n, L), values.astype(float))
