"""Deterministic parameter sweeps, peak extraction and power-law fits."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .couplings import CouplingSpec
from .errors import ConfigurationError, DomainError, NumericError
from .otto import CycleOutcome, CycleParams, carnot, carnot_R, run_cycle
from .spectrum import critical_field

__all__ = [
    "AXIS_NAMES",
    "OBSERVABLES",
    "Axis",
    "CurveRow",
    "GridPoint",
    "Peak",
    "PeakReport",
    "ScalingResult",
    "SweepGrid",
    "check_outcome",
    "find_peaks",
    "observable",
    "peak_scaling",
    "regress_exponent",
    "run_curve",
    "run_map",
]

AXIS_NAMES = ("alpha", "h_i", "h_f", "N", "T_ratio", "T_c", "T_h")
OBSERVABLES = ("W/N", "Q_c/N", "eta", "eta_R", "Pi/N", "PiR/N")

# Axis values are rounded to this many decimals so that ``start + i*step``
# lands on the same float whatever the step accumulation.
_AXIS_DECIMALS = 12
_GUARD_TOL = 1e-10


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigurationError(f"unknown sweep axis {self.name!r}; choose from {', '.join(AXIS_NAMES)}")
        vals = tuple(int(v) if self.name == "N" else float(v) for v in self.values)
        if not vals:
            raise ConfigurationError(f"axis {self.name} is empty")
        if any(not math.isfinite(v) for v in vals):
            raise ConfigurationError(f"axis {self.name} has non-finite values")
        diffs = np.diff(vals)
        if vals and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ConfigurationError(f"axis {self.name} must be strictly monotone")
        if self.name == "N" and any(v < 2 or v % 2 for v in vals):
            raise ConfigurationError("N axis values must be even integers >= 2")
        object.__setattr__(self, "values", vals)

    @classmethod
    def range(cls, name: str, start: float, stop: float, step: float) -> "Axis":
        """Inclusive ``start..stop`` in increments of ``step``."""
        if not step > 0 or stop < start:
            raise ConfigurationError(f"bad range for {name}: {start}:{stop}:{step}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        vals = [round(start + i * step, _AXIS_DECIMALS) for i in range(count)]
        return cls(name, tuple(vals))

    @classmethod
    def parse(cls, name: str, text: str) -> "Axis":
        """``start:stop:step`` or a comma-separated list."""
        text = text.strip()
        try:
            if ":" in text:
                parts = [float(p) for p in text.split(":")]
                if len(parts) != 3:
                    raise ValueError
                return cls.range(name, *parts)
            return cls(name, tuple(float(p) for p in text.split(",") if p.strip()))
        except ValueError:
            raise ConfigurationError(f"cannot parse axis {name}={text!r}; use start:stop:step or a,b,c") from None


@dataclass(frozen=True)
class SweepGrid:
    """Swept axes plus fixed values for every other parameter.

    ``h_f`` is ``h_i + delta_h`` unless it is swept or fixed explicitly.
    ``T_ratio`` sweeps ``T_c / T_h`` at fixed ``T_h``.
    """

    axes: tuple
    fixed: dict = field(default_factory=dict)
    delta_h: float = 0.5

    def __post_init__(self):
        axes = tuple(self.axes)
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"duplicate sweep axes: {names}")
        for key in self.fixed:
            if key not in AXIS_NAMES:
                raise ConfigurationError(f"unknown fixed parameter {key!r}")
        if "h_f" in names and "h_f" in self.fixed:
            raise ConfigurationError("h_f is both swept and fixed")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "fixed", dict(self.fixed))

    @property
    def shape(self) -> tuple:
        return tuple(len(a.values) for a in self.axes)

    def points(self):
        """Every grid point as a parameter dict, row-major in axis order."""
        for idx in np.ndindex(*self.shape):
            point = dict(self.fixed)
            for axis, i in zip(self.axes, idx):
                point[axis.name] = axis.values[i]
            yield point


@dataclass(frozen=True)
class GridPoint:
    alpha: float
    h_i: float
    h_f: float
    N: int
    T_c: float
    T_h: float

    @property
    def params(self) -> CycleParams:
        return CycleParams(self.h_i, self.h_f, self.T_c, self.T_h)


def _resolve(point: dict, delta_h: float) -> GridPoint:
    try:
        alpha = float(point["alpha"])
        h_i = float(point["h_i"])
        N = int(point["N"])
    except KeyError as exc:
        raise ConfigurationError(f"missing sweep parameter {exc.args[0]}") from None
    h_f = float(point["h_f"]) if "h_f" in point else round(h_i + delta_h, _AXIS_DECIMALS)
    T_h = point.get("T_h")
    T_c = point.get("T_c")
    if "T_ratio" in point:
        if T_h is None:
            raise ConfigurationError("T_ratio needs a fixed or swept T_h")
        T_c = float(point["T_ratio"]) * float(T_h)
    if T_h is None or T_c is None:
        raise ConfigurationError("both bath temperatures must be given")
    return GridPoint(alpha, h_i, h_f, N, float(T_c), float(T_h))


def check_outcome(out: CycleOutcome, point: GridPoint) -> None:
    """Re-assert the first law, Clausius and the Carnot bounds on one result."""
    scale = abs(out.Q_h) + abs(out.Q_c) + abs(out.W)
    if abs(out.Q_h + out.Q_c - out.W) > _GUARD_TOL * max(scale, 1e-300):
        raise NumericError(f"first law violated at {point}")
    if out.Q_h / point.T_h + out.Q_c / point.T_c > _GUARD_TOL * max(scale / point.T_c, 1.0):
        raise NumericError(f"Clausius inequality violated at {point}")
    if point.T_h > point.T_c:
        if out.eta is not None and out.eta > carnot(point.T_c, point.T_h) + _GUARD_TOL:
            raise NumericError(f"engine efficiency above Carnot at {point}")
        if out.eta_R is not None and out.eta_R > carnot_R(point.T_c, point.T_h) + _GUARD_TOL:
            raise NumericError(f"refrigerator COP above Carnot at {point}")


def _evaluate(task):
    point, base = task
    spec = replace(base, N=point.N, alpha1=point.alpha, alpha2=point.alpha)
    out = run_cycle(point.params, spec)
    check_outcome(out, point)
    return out


def _default_workers() -> int:
    env = os.environ.get("OTTO_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigurationError(f"OTTO_WORKERS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _evaluate_all(points, base: CouplingSpec, workers: int | None):
    workers = _default_workers() if workers is None else int(workers)
    tasks = [(p, base) for p in points]
    if workers <= 1 or len(tasks) < 2:
        return [_evaluate(t) for t in tasks]
    # Chunked ordered map; results come back in submission order.
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate, tasks, chunksize=chunk))


def _base_spec(base: CouplingSpec | None) -> CouplingSpec:
    if base is None:
        return CouplingSpec(N=2, alpha1=1.0, alpha2=1.0)
    if base.disorder is not None:
        raise ConfigurationError("sweeps over alpha and N cannot carry a fixed disorder table")
    return base


def run_map(grid: SweepGrid, base: CouplingSpec | None = None, workers: int | None = None):
    """Outcome at every point of a two-axis grid: ``[(GridPoint, CycleOutcome), ...]``."""
    if len(grid.axes) != 2:
        raise ConfigurationError(f"a map needs exactly two swept axes, got {len(grid.axes)}")
    points = [_resolve(p, grid.delta_h) for p in grid.points()]
    # Validate every point before any work starts.
    [p.params for p in points]
    outcomes = _evaluate_all(points, _base_spec(base), workers)
    return list(zip(points, outcomes))


def observable(out: CycleOutcome, name: str, N: int):
    """Value of ``name`` for one outcome, or ``None`` when the mode does not define it."""
    if name == "W/N":
        return out.W / N
    if name == "Q_c/N":
        return out.Q_c / N
    if name == "eta":
        return out.eta
    if name == "eta_R":
        return out.eta_R
    if name == "Pi/N":
        return out.pi_per_spin
    if name == "PiR/N":
        return out.piR_per_spin
    raise ConfigurationError(f"unknown observable {name!r}; choose from {', '.join(OBSERVABLES)}")


@dataclass(frozen=True)
class CurveRow:
    point: GridPoint
    outcome: CycleOutcome
    value: float | None


def run_curve(
    name: str,
    h_axis: Axis,
    family: Axis,
    fixed: dict,
    delta_h: float = 0.5,
    base: CouplingSpec | None = None,
    workers: int | None = None,
):
    """One curve of ``name`` against ``h_i`` per value of the family axis (``N`` or ``alpha``)."""
    if name not in OBSERVABLES:
        raise ConfigurationError(f"unknown observable {name!r}; choose from {', '.join(OBSERVABLES)}")
    if h_axis.name != "h_i":
        raise ConfigurationError("curves are sampled along h_i")
    if family.name not in ("N", "alpha"):
        raise ConfigurationError("curve families run over N or alpha")
    grid = SweepGrid((family, h_axis), fixed, delta_h)
    rows = run_map(grid, base, workers)
    return [CurveRow(p, o, observable(o, name, p.N)) for p, o in rows]


@dataclass(frozen=True)
class Peak:
    h_i: float
    value: float


@dataclass(frozen=True)
class PeakReport:
    """Largest value below and above the split field.

    A side with no defined values is ``None``; ``absent`` names those sides.
    """

    split: float
    ferro: Peak | None
    para: Peak | None

    @property
    def absent(self) -> tuple:
        return tuple(side for side, p in (("ferro", self.ferro), ("para", self.para)) if p is None)


def _argmax_first(h, v):
    best = None
    for x, y in zip(h, v):
        if y is None or not math.isfinite(y):
            continue
        if best is None or y > best.value:
            best = Peak(float(x), float(y))
    return best


def find_peaks(h_values, values, split: float | None = None, alpha: float | None = None) -> PeakReport:
    """Maxima of a sampled curve on ``h < split`` and ``h >= split``.

    ``split`` defaults to ``critical_field(alpha)``. Missing values (``None``
    or nan) are skipped; ties go to the smaller ``h``.
    """
    if split is None:
        if alpha is None:
            raise ConfigurationError("find_peaks needs a split field or an alpha")
        split = critical_field(alpha)
    h = np.asarray(h_values, dtype=float)
    order = np.argsort(h, kind="stable")
    h = h[order]
    v = [values[i] for i in order]
    below = [(x, y) for x, y in zip(h, v) if x < split]
    above = [(x, y) for x, y in zip(h, v) if x >= split]
    return PeakReport(
        float(split),
        _argmax_first([x for x, _ in below], [y for _, y in below]),
        _argmax_first([x for x, _ in above], [y for _, y in above]),
    )


def regress_exponent(points):
    """Least-squares ``log value = a log N + b``; returns ``(a, b, rms residual)``."""
    pts = [(float(n), float(v)) for n, v in points]
    if len(pts) < 3:
        raise ConfigurationError(f"exponent regression needs at least 3 sizes, got {len(pts)}")
    if any(v <= 0 or n <= 0 for n, v in pts):
        raise DomainError("power-law regression needs positive sizes and values")
    x = np.log([n for n, _ in pts])
    y = np.log([v for _, v in pts])
    a, b = np.polyfit(x, y, 1)
    resid = y - (a * x + b)
    return float(a), float(b), float(np.sqrt(np.mean(resid**2)))


@dataclass(frozen=True)
class ScalingResult:
    sizes: tuple
    reports: tuple
    ferro_fit: tuple | None
    para_fit: tuple | None


def peak_scaling(
    name: str,
    alpha: float,
    sizes,
    T_c: float,
    T_h: float,
    h_axis: Axis | None = None,
    delta_h: float = 0.5,
    split: float | None = None,
    workers: int | None = None,
):
    """Peak heights of ``name`` against ``N`` on both sides of the split, with power-law fits."""
    h_axis = h_axis or Axis.range("h_i", 0.0, 2.0, 0.01)
    rows = run_curve(name, h_axis, Axis("N", tuple(sizes)), {"alpha": alpha, "T_c": T_c, "T_h": T_h}, delta_h, workers=workers)
    by_size = {}
    for row in rows:
        by_size.setdefault(row.point.N, []).append(row)
    reports = []
    for N in sorted(by_size):
        rs = by_size[N]
        reports.append(find_peaks([r.point.h_i for r in rs], [r.value for r in rs], split=split, alpha=alpha))

    def fit(side):
        pts = [(N, getattr(r, side).value) for N, r in zip(sorted(by_size), reports) if getattr(r, side) is not None]
        pts = [(n, v) for n, v in pts if v > 0]
        return regress_exponent(pts) if len(pts) >= 3 else None

    return ScalingResult(tuple(sorted(by_size)), tuple(reports), fit("ferro"), fit("para"))

