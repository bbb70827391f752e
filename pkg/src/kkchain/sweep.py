"""Parameter sweeps over coupling-plane cuts and temperature grids.

A sweep walks a one-dimensional cut of the (I, J) coupling plane
(diagonal I=J, antidiagonal I=-J, or an explicit point list) crossed
with a temperature list and one or more chain lengths.  Each grid
point is diagonalized once and the spectrum is reused for every
temperature.  Grid points are independent, so they can be fanned out
over a process pool; rows always come back in deterministic grid order
(chain length outer, cut parameter middle, temperature inner).

Also hosts the finite-size extrapolation of results to 1/N -> 0.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
import math
import time

import numpy as np

from .entanglement import logarithmic_negativity
from .model import DEFAULT_MAX_SITES, FieldSpec, ModelParams, build_hamiltonian
from .observables import compute_observables
from .spectra import cached_diagonalize
from .thermal import thermal_density_matrix

STATUS_OK = "ok"


class CutKind(str, Enum):
    DIAGONAL = "diagonal"
    ANTIDIAGONAL = "antidiagonal"
    EXPLICIT_LIST = "explicit_list"


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of one sweep.

    diagonal/antidiagonal cuts need range_lo/range_hi/range_points;
    explicit_list instead needs explicit_points as (j_spin, i_pseudo)
    pairs.  Temperatures and chain lengths are crossed with the cut.
    """

    cut: CutKind
    k_coupling: float
    temperatures: tuple[float, ...]
    n_sites_list: tuple[int, ...]
    range_lo: float | None = None
    range_hi: float | None = None
    range_points: int | None = None
    explicit_points: tuple[tuple[float, float], ...] | None = None
    field_spin: FieldSpec = field(default_factory=FieldSpec.off)
    field_pseudo: FieldSpec = field(default_factory=FieldSpec.off)
    observables_enabled: bool = False
    max_sites: int = DEFAULT_MAX_SITES

    def __post_init__(self):
        object.__setattr__(self, "cut", CutKind(self.cut))
        object.__setattr__(self, "temperatures", tuple(float(t) for t in self.temperatures))
        object.__setattr__(self, "n_sites_list", tuple(int(n) for n in self.n_sites_list))
        if self.explicit_points is not None:
            object.__setattr__(
                self,
                "explicit_points",
                tuple((float(j), float(i)) for j, i in self.explicit_points),
            )
        if not math.isfinite(self.k_coupling):
            raise ValueError(f"k_coupling must be finite, got {self.k_coupling!r}")
        if not self.temperatures:
            raise ValueError("temperatures must be non-empty")
        if any(t < 0 or not math.isfinite(t) for t in self.temperatures):
            raise ValueError(f"temperatures must be finite and >= 0, got {self.temperatures}")
        if not self.n_sites_list:
            raise ValueError("n_sites_list must be non-empty")
        if any(n < 1 or n > self.max_sites for n in self.n_sites_list):
            raise ValueError(
                f"every n_sites must lie in [1, {self.max_sites}], got {self.n_sites_list}"
            )
        if self.cut is CutKind.EXPLICIT_LIST:
            if not self.explicit_points:
                raise ValueError("explicit_list cut requires explicit_points")
        else:
            if self.range_lo is None or self.range_hi is None or self.range_points is None:
                raise ValueError(f"{self.cut.value} cut requires range_lo, range_hi, range_points")
            if self.range_points < 1:
                raise ValueError(f"range_points must be >= 1, got {self.range_points}")
            if self.range_lo > self.range_hi:
                raise ValueError(
                    f"range_lo must not exceed range_hi, got [{self.range_lo}, {self.range_hi}]"
                )


@dataclass(frozen=True)
class SweepRow:
    """One output record: a grid point at one temperature.

    Numeric result fields are None on rows whose status is not "ok";
    observables are None unless the sweep enabled them.
    """

    n_sites: int
    j_spin: float
    i_pseudo: float
    k_coupling: float
    field_s_mag: float
    field_s_pattern: str
    field_t_mag: float
    field_t_pattern: str
    temperature: float
    log_negativity: float | None
    trace_norm: float | None
    ground_energy: float | None
    ground_degeneracy: int | None
    ss_bond_mean: float | None
    tt_bond_mean: float | None
    sstt_bond_mean: float | None
    mag_s: float | None
    mag_t: float | None
    wall_time_ms: float | None
    status: str


@dataclass(frozen=True)
class ExtrapolationResult:
    """OLS fit of a value against 1/N: intercept is the 1/N -> 0 limit."""

    intercept: float
    slope: float
    residual: float
    n_points: int


def _cut_points(spec: SweepSpec) -> list[tuple[float, float]]:
    """(j_spin, i_pseudo) pairs along the cut, in grid order."""
    if spec.cut is CutKind.EXPLICIT_LIST:
        return list(spec.explicit_points)
    if spec.range_points == 1:
        xs = [float(spec.range_lo)]
    else:
        xs = [float(x) for x in np.linspace(spec.range_lo, spec.range_hi, spec.range_points)]
    if spec.cut is CutKind.DIAGONAL:
        return [(x, x) for x in xs]
    return [(x, -x) for x in xs]


def expand_grid(spec: SweepSpec) -> list[tuple[ModelParams, float]]:
    """Flat (params, temperature) list in deterministic sweep order."""
    out = []
    for params in _unit_params(spec):
        for t in spec.temperatures:
            out.append((params, t))
    return out


def _unit_params(spec: SweepSpec) -> list[ModelParams]:
    """One ModelParams per grid point (all temperatures share it)."""
    out = []
    for n in spec.n_sites_list:
        for j, i in _cut_points(spec):
            out.append(
                ModelParams(
                    n_sites=n,
                    j_spin=j,
                    i_pseudo=i,
                    k_coupling=spec.k_coupling,
                    field_spin=spec.field_spin,
                    field_pseudo=spec.field_pseudo,
                    max_sites=spec.max_sites,
                )
            )
    return out


def _error_row(params: ModelParams, temperature: float, exc: BaseException) -> SweepRow:
    return SweepRow(
        n_sites=params.n_sites,
        j_spin=params.j_spin,
        i_pseudo=params.i_pseudo,
        k_coupling=params.k_coupling,
        field_s_mag=params.field_spin.magnitude,
        field_s_pattern=params.field_spin.pattern.value,
        field_t_mag=params.field_pseudo.magnitude,
        field_t_pattern=params.field_pseudo.pattern.value,
        temperature=temperature,
        log_negativity=None,
        trace_norm=None,
        ground_energy=None,
        ground_degeneracy=None,
        ss_bond_mean=None,
        tt_bond_mean=None,
        sstt_bond_mean=None,
        mag_s=None,
        mag_t=None,
        wall_time_ms=None,
        status=f"error:{type(exc).__name__}",
    )


def _run_unit(args: tuple[ModelParams, tuple[float, ...], bool, str | None]) -> list[SweepRow]:
    """Worker body: one grid point, all its temperatures.

    Failures are captured per temperature (and for the shared
    diagonalization, per unit) as error-status rows; a worker never
    raises for a physics or numerics problem.
    """
    params, temperatures, observables_enabled, cache_dir = args
    t0 = time.perf_counter()
    try:
        h = build_hamiltonian(params)
        spec = cached_diagonalize(h, params, cache_dir)
    except Exception as exc:
        return [_error_row(params, t, exc) for t in temperatures]
    shared_ms = (time.perf_counter() - t0) * 1000.0 / len(temperatures)

    rows = []
    for temperature in temperatures:
        t1 = time.perf_counter()
        try:
            rho = thermal_density_matrix(spec, temperature)
            negativity = logarithmic_negativity(rho, "spin")
            if observables_enabled:
                obs = compute_observables(rho, params)
                means = {
                    "ss_bond_mean": float(np.mean(obs.ss_bond)) if obs.ss_bond else 0.0,
                    "tt_bond_mean": float(np.mean(obs.tt_bond)) if obs.tt_bond else 0.0,
                    "sstt_bond_mean": float(np.mean(obs.sstt_bond)) if obs.sstt_bond else 0.0,
                    "mag_s": obs.mag_s,
                    "mag_t": obs.mag_t,
                }
            else:
                means = {
                    "ss_bond_mean": None,
                    "tt_bond_mean": None,
                    "sstt_bond_mean": None,
                    "mag_s": None,
                    "mag_t": None,
                }
        except Exception as exc:
            rows.append(_error_row(params, temperature, exc))
            continue
        elapsed_ms = (time.perf_counter() - t1) * 1000.0
        rows.append(
            SweepRow(
                n_sites=params.n_sites,
                j_spin=params.j_spin,
                i_pseudo=params.i_pseudo,
                k_coupling=params.k_coupling,
                field_s_mag=params.field_spin.magnitude,
                field_s_pattern=params.field_spin.pattern.value,
                field_t_mag=params.field_pseudo.magnitude,
                field_t_pattern=params.field_pseudo.pattern.value,
                temperature=temperature,
                log_negativity=negativity.log_negativity,
                trace_norm=negativity.trace_norm,
                ground_energy=spec.ground_energy,
                ground_degeneracy=spec.ground_degeneracy,
                wall_time_ms=round(shared_ms + elapsed_ms, 3),
                status=STATUS_OK,
                **means,
            )
        )
    return rows


def run_sweep(
    spec: SweepSpec, worker_budget: int = 1, cache_dir: str | None = None
) -> list[SweepRow]:
    """Execute the sweep, returning rows in deterministic grid order.

    worker_budget > 1 distributes grid points over a process pool; each
    unit diagonalizes once and reuses the spectrum for its temperature
    list.  Failed points come back as error-status rows rather than
    aborting the sweep.
    """
    if worker_budget < 1:
        raise ValueError(f"worker_budget must be >= 1, got {worker_budget}")
    units = [
        (params, spec.temperatures, spec.observables_enabled, cache_dir)
        for params in _unit_params(spec)
    ]
    if worker_budget == 1 or len(units) <= 1:
        per_unit = [_run_unit(u) for u in units]
    else:
        with ProcessPoolExecutor(max_workers=min(worker_budget, len(units))) as pool:
            per_unit = list(pool.map(_run_unit, units))
    return [row for rows in per_unit for row in rows]


def extrapolate(points: list[tuple[int, float]]) -> ExtrapolationResult:
    """Least-squares line through (1/N, value); the intercept estimates
    the value at 1/N -> 0.  Needs at least two distinct chain lengths."""
    if len({n for n, _ in points}) < 2:
        raise ValueError("extrapolation needs values at >= 2 distinct chain lengths")
    x = np.array([1.0 / n for n, _ in points])
    y = np.array([v for _, v in points])
    slope, intercept = np.polyfit(x, y, 1)
    predicted = intercept + slope * x
    residual = float(np.sqrt(np.mean((y - predicted) ** 2)))
    return ExtrapolationResult(
        intercept=float(intercept),
        slope=float(slope),
        residual=residual,
        n_points=len(points),
    )
