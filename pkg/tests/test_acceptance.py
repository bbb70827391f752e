"""End-to-end acceptance criteria.

Each test prints exactly one [acceptance] PASS/FAIL line.  These run
minutes, not seconds; they are marked `acceptance` so the quick suite
can deselect them (pytest -m "not acceptance").
"""

import csv
import io

import numpy as np
import pytest

import bruteforce
import conftest
from kkchain.cli import write_rows
from kkchain.entanglement import logarithmic_negativity
from kkchain.model import FieldPattern, FieldSpec, ModelParams, build_hamiltonian, field_profile
from kkchain.spectra import diagonalize
from kkchain.sweep import CutKind, SweepSpec, extrapolate, run_sweep
from kkchain.thermal import thermal_density_matrix

pytestmark = pytest.mark.acceptance


def _report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    conftest.acceptance_lines.append(line)
    assert ok, f"{name}: {detail}"


def pipeline_ln(params: ModelParams, temperature: float) -> float:
    rho = thermal_density_matrix(diagonalize(build_hamiltonian(params)), temperature)
    return logarithmic_negativity(rho, "spin").log_negativity


def random_field(rng) -> FieldSpec:
    pattern = rng.choice(["off", "uniform", "staggered"])
    return FieldSpec(float(rng.uniform(-1.5, 1.5)), FieldPattern(pattern))


def test_oracle_equivalence_two_sites():
    # 50 random full-pipeline evaluations against the independent
    # bit-loop builder in tests/bruteforce.py, tolerance 1e-10
    rng = np.random.default_rng(20260816)
    worst = 0.0
    nonzero = 0
    for _ in range(50):
        j, i, k = (float(x) for x in rng.uniform(-2, 2, 3))
        temperature = 0.0 if rng.uniform() < 0.15 else float(rng.uniform(0.001, 0.3))
        fs, ft = random_field(rng), random_field(rng)
        params = ModelParams(
            n_sites=2, j_spin=j, i_pseudo=i, k_coupling=k,
            field_spin=fs, field_pseudo=ft,
        )
        ours = pipeline_ln(params, temperature)
        h_ref = bruteforce.hamiltonian(
            2, j, i, k, field_profile(fs, 2), field_profile(ft, 2)
        )
        reference = bruteforce.log_negativity(
            bruteforce.thermal_state(h_ref, temperature), 2, "spin"
        )
        if abs(reference) < 1e-12:
            reference = 0.0
        worst = max(worst, abs(ours - reference))
        if reference > 1e-6:
            nonzero += 1
    _report(
        "oracle-equivalence-N2", worst < 1e-10,
        f"max |diff| = {worst:.3e} over 50 draws, {nonzero} entangled",
    )


def test_analytic_spectra_two_sites():
    spectrum_j = diagonalize(
        build_hamiltonian(ModelParams(n_sites=2, j_spin=1.0))
    ).eigenvalues
    expected_j = np.sort([-0.75] * 4 + [0.25] * 12)
    err = float(np.abs(spectrum_j - expected_j).max())
    for k in (1.0, -1.0):
        spectrum_k = diagonalize(
            build_hamiltonian(ModelParams(n_sites=2, k_coupling=k))
        ).eigenvalues
        expected_k = np.sort([9 * k / 16] + [-3 * k / 16] * 6 + [k / 16] * 9)
        err = max(err, float(np.abs(spectrum_k - expected_k).max()))
    _report("analytic-spectra-N2", err < 1e-12, f"max |E - E_exact| = {err:.3e}")


def test_decoupling_law_without_joint_coupling():
    # K=0 must give identically zero entanglement: 41-point diagonal,
    # four temperatures, with and without staggered fields, N=5
    temperatures = (0.001, 0.05, 0.1, 0.15)
    scenarios = [
        (FieldSpec.off(), FieldSpec.off()),
        (
            FieldSpec(0.5, FieldPattern.STAGGERED),
            FieldSpec(0.5, FieldPattern.STAGGERED),
        ),
    ]
    worst = 0.0
    rows_checked = 0
    for field_spin, field_pseudo in scenarios:
        spec = SweepSpec(
            cut=CutKind.DIAGONAL,
            k_coupling=0.0,
            temperatures=temperatures,
            n_sites_list=(5,),
            range_lo=-1.0,
            range_hi=1.0,
            range_points=41,
            field_spin=field_spin,
            field_pseudo=field_pseudo,
        )
        for row in run_sweep(spec):
            assert row.status == "ok"
            worst = max(worst, row.log_negativity)
            rows_checked += 1
    _report(
        "decoupling-law-K0", rows_checked == 328 and worst < 1e-10,
        f"max LN = {worst:.3e} over {rows_checked} rows",
    )


def test_subsystem_transpose_symmetry():
    rng = np.random.default_rng(77)
    worst = 0.0
    for _ in range(20):
        params = ModelParams(
            n_sites=4,
            j_spin=float(rng.uniform(-1.5, 1.5)),
            i_pseudo=float(rng.uniform(-1.5, 1.5)),
            k_coupling=float(rng.uniform(-2, 2)),
            field_spin=random_field(rng),
            field_pseudo=random_field(rng),
        )
        rho = thermal_density_matrix(
            diagonalize(build_hamiltonian(params)), float(rng.uniform(0.005, 0.5))
        )
        spin = logarithmic_negativity(rho, "spin").log_negativity
        pseudo = logarithmic_negativity(rho, "pseudospin").log_negativity
        worst = max(worst, abs(spin - pseudo))
    _report(
        "subsystem-symmetry-N4", worst < 1e-10,
        f"max |LN_spin - LN_pseudo| = {worst:.3e} over 20 configs",
    )


def test_antidiagonal_relabel_symmetry():
    # LN(J=x, I=-x) must equal LN(J=-x, I=x): relabeling the two
    # subsystems maps one antidiagonal point onto the other
    temperatures = (0.001, 0.05, 0.1, 0.15)
    worst = 0.0
    for k in (1.0, -1.0):
        spec = SweepSpec(
            cut=CutKind.ANTIDIAGONAL,
            k_coupling=k,
            temperatures=temperatures,
            n_sites_list=(5,),
            range_lo=-1.0,
            range_hi=1.0,
            range_points=21,
        )
        rows = run_sweep(spec)
        n_t = len(temperatures)
        for point in range(21):
            mirror = 20 - point
            for t_index in range(n_t):
                a = rows[point * n_t + t_index]
                b = rows[mirror * n_t + t_index]
                assert a.status == "ok" and b.status == "ok"
                # linspace endpoints mirror only to float rounding
                assert abs(a.j_spin + b.j_spin) < 1e-12
                worst = max(worst, abs(a.log_negativity - b.log_negativity))
    _report(
        "antidiagonal-symmetry-N5", worst < 1e-9,
        f"max |LN(x) - LN(-x)| = {worst:.3e} at K = +-1",
    )


def test_thermally_activated_entanglement():
    # at J=I=-0.4, K=-1 the entanglement is absent cold, appears at
    # intermediate temperature, and dies off again by T ~ 1
    scan = [float(t) for t in np.geomspace(0.02, 0.8, 21)]
    spec = SweepSpec(
        cut=CutKind.EXPLICIT_LIST,
        k_coupling=-1.0,
        temperatures=tuple([0.001] + scan + [2.0]),
        n_sites_list=(6,),
        explicit_points=((-0.4, -0.4),),
    )
    rows = run_sweep(spec)
    assert all(row.status == "ok" for row in rows)
    by_t = {row.temperature: row.log_negativity for row in rows}
    cold = by_t[0.001]
    peak = max(by_t[t] for t in scan)
    hot = by_t[2.0]
    ok = cold < 0.01 and peak > 0.05 and hot < 0.02
    _report(
        "thermal-activation-N6", ok,
        f"LN(0.001) = {cold:.4f}, max LN(0.02..0.8) = {peak:.4f}, LN(2) = {hot:.4f}",
    )


def test_low_temperature_plateau():
    # at J=I=+1, K=-1 the entanglement holds a plateau through
    # T <= 0.05, then falls monotonically through 0.2, 0.5, 1.0
    plateau_ts = (0.001, 0.005, 0.01, 0.02, 0.03, 0.04, 0.05)
    tail_ts = (0.2, 0.5, 1.0)
    spec = SweepSpec(
        cut=CutKind.EXPLICIT_LIST,
        k_coupling=-1.0,
        temperatures=plateau_ts + tail_ts,
        n_sites_list=(6,),
        explicit_points=((1.0, 1.0),),
    )
    rows = run_sweep(spec)
    assert all(row.status == "ok" for row in rows)
    by_t = {row.temperature: row.log_negativity for row in rows}
    plateau = [by_t[t] for t in plateau_ts]
    variation = (max(plateau) - min(plateau)) / np.mean(plateau)
    tail = [by_t[t] for t in tail_ts]
    decreasing = tail[0] > tail[1] > tail[2]
    _report(
        "plateau-N6", variation < 0.05 and decreasing,
        f"plateau variation = {variation:.4%}, tail = "
        f"{tail[0]:.4f} > {tail[1]:.4f} > {tail[2]:.4f}",
    )


def test_high_temperature_limit():
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(10):
        params = ModelParams(
            n_sites=4,
            j_spin=float(rng.uniform(-1.5, 1.5)),
            i_pseudo=float(rng.uniform(-1.5, 1.5)),
            k_coupling=float(rng.uniform(-2, 2)),
            field_spin=random_field(rng),
            field_pseudo=random_field(rng),
        )
        worst = max(worst, pipeline_ln(params, 100.0))
    _report(
        "high-temperature-limit", worst < 1e-6,
        f"max LN(T=100) = {worst:.3e} over 10 configs",
    )


def test_extrapolation_exactness():
    rng = np.random.default_rng(123)
    worst_intercept = 0.0
    worst_residual = 0.0
    for _ in range(20):
        a, b = rng.uniform(-2, 2, 2)
        fit = extrapolate([(n, a + b / n) for n in (4, 5, 6)])
        worst_intercept = max(worst_intercept, abs(fit.intercept - a))
        worst_residual = max(worst_residual, fit.residual)
    _report(
        "extrapolation-exactness",
        worst_intercept < 1e-12 and worst_residual < 1e-12,
        f"max |intercept error| = {worst_intercept:.3e}, "
        f"max residual = {worst_residual:.3e}",
    )


def _csv_without_wall_time(rows) -> str:
    buffer = io.StringIO()
    import tempfile, os

    fd, path = tempfile.mkstemp(suffix=".csv")
    os.close(fd)
    try:
        write_rows(rows, "csv", path)
        text = open(path, encoding="utf-8").read()
    finally:
        os.unlink(path)
    reader = csv.reader(io.StringIO(text))
    table = list(reader)
    drop = table[0].index("wall_time_ms")
    writer = csv.writer(buffer, lineterminator="\n")
    for line in table:
        writer.writerow(line[:drop] + line[drop + 1:])
    return buffer.getvalue()


def test_worker_count_determinism():
    spec = SweepSpec(
        cut=CutKind.DIAGONAL,
        k_coupling=-1.0,
        temperatures=(0.05, 0.15),
        n_sites_list=(2, 3),
        range_lo=-1.0,
        range_hi=1.0,
        range_points=5,
        field_spin=FieldSpec(0.4, FieldPattern.STAGGERED),
        field_pseudo=FieldSpec(-0.4, FieldPattern.STAGGERED),
    )
    body_single = _csv_without_wall_time(run_sweep(spec, worker_budget=1))
    body_pooled = _csv_without_wall_time(run_sweep(spec, worker_budget=8))
    _report(
        "worker-determinism",
        body_single == body_pooled,
        f"{body_single.count(chr(10)) - 1} rows byte-identical at budgets 1 and 8",
    )
