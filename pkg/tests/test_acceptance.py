"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` (a few minutes on two
cores; the expensive sweeps are session-scoped fixtures).  Grid ranges,
sizes, horizons and tolerances are pinned here from the acceptance
statement; master seeds and unpinned resolutions are fixed constants
chosen once and documented inline.
"""

import math

import numpy as np
import pytest

from besn.dynamics import random_initial_state, run, step
from besn.experiments import (
    column_crossing,
    extract_boundary,
    run_perturbation_ensemble,
    sweep_noise,
    sweep_noise_phase,
    sweep_phase,
    sweep_signal,
)
from besn.metrics import energy, entropy, hamming, positive_fraction
from besn.reservoir import ReservoirParams, generate_reservoir
from besn.theory import critical_asymmetry, critical_degree

JOBS = None  # default worker pool = available parallelism


def _criterion(name: str, failures: list[str]) -> None:
    status = "PASS" if not failures else "FAIL"
    detail = f"  ({'; '.join(failures)})" if failures else ""
    print(f"\nACCEPTANCE {name}: {status}{detail}")
    assert not failures, f"{name}: " + "; ".join(failures)


def _k_crossing(k_values: np.ndarray, profile: np.ndarray, threshold: float) -> float:
    """Interpolated k where entropy falls through threshold (chaotic at low k).

    Columns already frozen (or still chaotic) at the grid edge clamp to the
    edge value: the true crossing lies at or beyond it.
    """
    for j in range(len(profile) - 1):
        hi, lo = profile[j], profile[j + 1]
        if hi >= threshold > lo:
            if hi == lo:
                return float(k_values[j])
            frac = (hi - threshold) / (hi - lo)
            return float(k_values[j] + frac * (k_values[j + 1] - k_values[j]))
    return float(k_values[0]) if profile[0] < threshold else float(k_values[-1])


# --- session-scoped experiment data -------------------------------------

K_GRID = np.linspace(4.0, 300.0, 20)
D_GRID = np.linspace(0.03, 0.4, 20)


@pytest.fixture(scope="session")
def phase_grid():
    # pinned: 20x20 over d in [0.03, 0.4], k in [4, 300], N=1000, T=300,
    # t0=100, R=4; chosen: master seed 1, biased initials c=0.6
    return sweep_phase(K_GRID, D_GRID, n_neurons=1000, horizon=300, burn_in=100,
                       replicates=4, master_seed=1, positive_bias=0.6, jobs=JOBS)


@pytest.fixture(scope="session")
def fig2_ensembles():
    # pinned: <k>=22, N=1000, M=50, c=0.6; chosen: master seed 3
    d_values = (0.25, 0.184, 0.157, 0.144, 0.131, 0.105)
    return {
        d: run_perturbation_ensemble(
            n_neurons=1000, mean_degree=22.0, asymmetry=d, positive_bias=0.6,
            copies=50, horizon=300, master_seed=3,
        )
        for d in d_values
    }


@pytest.fixture(scope="session")
def noise_grid():
    # pinned: <k>=200, N=1000, nu in [0, 0.3], d in [0, 0.35];
    # chosen: 13x15 resolution, R=4, master seed 1
    return sweep_noise(200.0, np.linspace(0.0, 0.3, 13), np.linspace(0.0, 0.35, 15),
                       n_neurons=1000, horizon=300, burn_in=100, replicates=4,
                       master_seed=1, positive_bias=0.6, jobs=JOBS)


@pytest.fixture(scope="session")
def noisy_phase_grid():
    # pinned: nu=0.1 on the autonomous-figure axes; same grid as phase_grid
    return sweep_noise_phase(0.1, K_GRID, D_GRID, n_neurons=1000, horizon=300,
                             burn_in=100, replicates=4, master_seed=1,
                             positive_bias=0.6, jobs=JOBS)


@pytest.fixture(scope="session")
def signal_grids():
    # pinned: <k>=150, A in {0, 0.5, 1, 2}, both drive kinds;
    # chosen: d in [0, 0.2] at 21 points, R=8, master seed 1
    gains = [0.0, 0.5, 1.0, 2.0]
    d_vals = np.linspace(0.0, 0.2, 21)
    return {
        kind: sweep_signal(150.0, kind, gains, d_vals, n_neurons=1000,
                           horizon=300, burn_in=100, replicates=8,
                           master_seed=1, positive_bias=0.6, jobs=JOBS)
        for kind in ("white_noise", "multisine")
    }


# --- criteria ------------------------------------------------------------

def test_autonomous_eoc_agreement(phase_grid):
    """Entropy-0.5 crossing within one k-cell of k_c = 1/(2 d^2) per d-column."""
    failures = []
    cell = float(K_GRID[1] - K_GRID[0])
    checked = 0
    for di, d in enumerate(D_GRID):
        kc = critical_degree(float(d))
        if not K_GRID[0] <= kc <= K_GRID[-1]:
            continue
        checked += 1
        crossing = _k_crossing(K_GRID, phase_grid.entropy_mean[:, di], 0.5)
        err = abs(crossing - kc)
        if err > cell:
            failures.append(
                f"d={d:.4f}: crossing {crossing:.1f} vs k_c {kc:.1f} "
                f"(err {err:.1f} > cell {cell:.1f})"
            )
    assert checked >= 10
    _criterion("autonomous-EoC-agreement", failures)


def test_fig2_regimes(fig2_ensembles):
    """Frozen/chaotic/crossover perturbation regimes at <k> = 22."""
    failures = []
    frozen = fig2_ensembles[0.25]
    if frozen.hamming_mean[-1] != 0.0:
        failures.append(f"(a) hamming[300] = {frozen.hamming_mean[-1]:.4f} != 0")
    ent_a = frozen.late_mean_entropy(100)
    if not ent_a < 0.05:
        failures.append(f"(a) mean entropy {ent_a:.4f} >= 0.05")

    chaotic = fig2_ensembles[0.105]
    ham_b = chaotic.hamming_mean[-1]
    if not 0.45 <= ham_b <= 0.5:
        failures.append(f"(b) hamming[300] = {ham_b:.4f} not in [0.45, 0.5]")
    ent_b = chaotic.late_mean_entropy(100)
    if not ent_b > 0.9:
        failures.append(f"(b) mean entropy {ent_b:.4f} <= 0.9")

    late = [fig2_ensembles[d].hamming_mean[-1] for d in (0.184, 0.157, 0.144, 0.131)]
    if not all(late[i] < late[i + 1] for i in range(3)):
        failures.append(f"(c) late hamming not increasing: {[f'{v:.4f}' for v in late]}")
    _criterion("fig2-regimes", failures)


def test_critical_point_numeric():
    """critical_asymmetry(22) matches 1/sqrt(44) to 1e-10 and the quoted 0.15076."""
    failures = []
    value = critical_asymmetry(22.0)
    if abs(value - 1.0 / math.sqrt(2.0 * 22.0)) > 1e-10:
        failures.append(f"formula mismatch: {value!r}")
    if abs(value - 0.15076) > 1e-5:
        failures.append(f"value {value:.7f} not 0.15076 +/- 1e-5")
    if abs(value - 0.15) > 0.001:
        failures.append(f"value {value:.7f} not within 0.001 of 0.15")
    _criterion("critical-point-numeric", failures)


def test_noise_sweep_regimes(noise_grid):
    """Fig-3 sweep: flat boundary near nu=0, linear growth with slope in
    [0.45, 0.85], and fully chaotic rows at high nu."""
    failures = []
    fit = extract_boundary(noise_grid, threshold=0.5)
    crossings = dict(fit.crossings)
    cell = noise_grid.d_cell_size()

    # regime 1: flat near nu = 0 and anchored at the autonomous prediction
    d0 = crossings.get(float(noise_grid.x_values[0]))
    if d0 is None:
        failures.append("no crossing at nu=0")
    else:
        if abs(d0 - critical_asymmetry(200.0)) > cell:
            failures.append(f"nu=0 crossing {d0:.4f} vs d_c(200) {critical_asymmetry(200.0):.4f}")
        for nu in noise_grid.x_values[1:3]:  # the nu <= 0.05 columns
            dn = crossings.get(float(nu))
            if dn is None or abs(dn - d0) > cell:
                failures.append(f"low-noise boundary not flat at nu={float(nu):.3f}")

    # regime 2: linear expansion with the pinned slope band
    if not 0.45 <= fit.slope <= 0.85:
        failures.append(f"fitted slope {fit.slope:.4f} not in [0.45, 0.85]")

    # regime 3: at least one all-chaotic row (entire d range above threshold)
    all_chaotic = [
        float(nu) for xi, nu in enumerate(noise_grid.x_values)
        if noise_grid.entropy_mean[xi].min() > 0.5
    ]
    if not all_chaotic:
        failures.append("no all-chaotic row in nu <= 0.3")
    _criterion("noise-sweep-regimes", failures)


def test_noisy_phase_diagram(noisy_phase_grid):
    """Fig-4 sweep at nu=0.1: boundary tracks 1/(2d^2) for k <= 50 and is
    d-only for k >= 200."""
    failures = []
    fit = extract_boundary(noisy_phase_grid, threshold=0.5)
    crossings = dict(fit.crossings)
    cell = noisy_phase_grid.d_cell_size()

    low = {k: v for k, v in crossings.items() if k <= 50.0}
    if not low:
        failures.append("no crossings at k <= 50")
    for k, d_star in sorted(low.items()):
        dc = critical_asymmetry(k)
        if abs(d_star - dc) > cell:
            failures.append(
                f"k={k:.1f}: d* {d_star:.4f} vs d_c {dc:.4f} (err > cell {cell:.4f})"
            )

    high = sorted((k, v) for k, v in crossings.items() if k >= 200.0)
    if len(high) < 2:
        failures.append("fewer than 2 crossings at k >= 200")
    else:
        drifts = [abs(b[1] - a[1]) for a, b in zip(high, high[1:])]
        if max(drifts) >= cell:
            failures.append(f"high-k drift {max(drifts):.4f} >= cell {cell:.4f}")
    _criterion("noisy-phase-diagram", failures)


def test_signal_sweeps(signal_grids):
    """Figs 5-6: H>0.9 area strictly decreasing and intermediate band
    strictly increasing across A in {0, 0.5, 1, 2} for both drives."""
    failures = []
    for kind, grid in signal_grids.items():
        d0 = float(grid.d_values[0])
        d_last = float(grid.d_values[-1])
        high_areas, mid_areas = [], []
        for xi in range(len(grid.x_values)):
            prof = grid.entropy_mean[xi]
            hi = column_crossing(grid.d_values, prof, 0.9)
            lo = column_crossing(grid.d_values, prof, 0.1)
            hi = hi if hi is not None else (d_last if prof.min() > 0.9 else d0)
            lo = lo if lo is not None else (d_last if prof.min() > 0.1 else d0)
            high_areas.append(hi - d0)
            mid_areas.append(lo - hi)
        if not all(a > b for a, b in zip(high_areas, high_areas[1:])):
            failures.append(
                f"{kind}: H>0.9 area not strictly decreasing: "
                f"{[f'{v:.4f}' for v in high_areas]}"
            )
        if not all(a < b for a, b in zip(mid_areas, mid_areas[1:])):
            failures.append(
                f"{kind}: intermediate band not strictly increasing: "
                f"{[f'{v:.4f}' for v in mid_areas]}"
            )
    _criterion("signal-sweeps", failures)


def test_oracle_equivalence():
    """Optimized step equals the naive dense reference over all 2^N states
    for 100 random reservoirs with N <= 12."""
    failures = []
    rng = np.random.default_rng(2024)
    total_states = 0
    for i in range(100):
        n = int(rng.integers(1, 13))
        params = ReservoirParams(
            n_neurons=n,
            mean_degree=float(rng.uniform(0.0, n)),
            asymmetry=float(rng.uniform(-0.49, 0.49)),
            seed=int(rng.integers(0, 2**63)),
        )
        reservoir = generate_reservoir(params)
        dense = reservoir.weights.toarray().astype(np.int64)
        # all 2^n states as +/-1 rows
        codes = np.arange(2**n, dtype=np.uint32)
        bits = (codes[:, None] >> np.arange(n)) & 1
        states = np.where(bits.astype(bool), 1, -1).astype(np.int8)
        expected = np.where(states @ dense.T >= 0, 1, -1)
        total_states += len(states)
        for s, e in zip(states, expected):
            got = step(reservoir, s)
            if not np.array_equal(got, e):
                failures.append(f"reservoir {i} (N={n}): state {s.tolist()} -> "
                                f"{got.tolist()} != {e.tolist()}")
                break
        if failures:
            break
    print(f"\n  oracle equivalence: {total_states} states checked", end="")
    _criterion("oracle-equivalence", failures)


def test_metric_properties():
    """1e4 randomized cases: hamming metric axioms, entropy symmetry and
    bounds, E = 2*rho - 1, and seed determinism; zero failures."""
    failures = []
    rng = np.random.default_rng(77)
    cases = 0

    def pm(shape):
        return np.where(rng.random(shape) < rng.uniform(0.05, 0.95), 1, -1).astype(np.int8)

    for _ in range(3000):  # hamming metric axioms
        n = int(rng.integers(1, 65))
        a, b, c = pm(n), pm(n), pm(n)
        if hamming(a, b) != hamming(b, a):
            failures.append("hamming symmetry"); break
        if hamming(a, a) != 0.0:
            failures.append("hamming identity"); break
        if (hamming(a, b) == 0.0) != bool((a == b).all()):
            failures.append("hamming indiscernibles"); break
        if hamming(a, c) > hamming(a, b) + hamming(b, c) + 1e-15:
            failures.append("hamming triangle"); break
        cases += 1

    for _ in range(3000):  # entropy symmetry and bounds
        x = pm(int(rng.integers(1, 129)))
        h = entropy(x)
        if not (0.0 <= h <= 1.0) or abs(h - entropy(-x)) > 1e-15:
            failures.append("entropy bounds/symmetry"); break
        cases += 1

    for _ in range(3000):  # energy identity
        x = pm(int(rng.integers(1, 129)))
        if abs(energy(x) - (2.0 * positive_fraction(x) - 1.0)) > 1e-15:
            failures.append("E = 2*rho - 1"); break
        cases += 1

    for _ in range(500):  # reservoir seed determinism
        n = int(rng.integers(1, 40))
        params = ReservoirParams(
            n_neurons=n,
            mean_degree=float(rng.uniform(0, n)),
            asymmetry=float(rng.uniform(-0.49, 0.49)),
            seed=int(rng.integers(0, 2**63)),
        )
        a = generate_reservoir(params)
        b = generate_reservoir(params)
        if (a.weights != b.weights).nnz != 0:
            failures.append("reservoir determinism"); break
        cases += 1

    for _ in range(500):  # noisy run determinism under a fixed stream seed
        n = int(rng.integers(2, 30))
        params = ReservoirParams(n, float(rng.uniform(0, n)),
                                 float(rng.uniform(-0.49, 0.49)),
                                 seed=int(rng.integers(0, 2**63)))
        res = generate_reservoir(params)
        init = random_initial_state(n, 0.5, rng=int(rng.integers(0, 2**63)))
        stream_seed = int(rng.integers(0, 2**63))
        t1 = run(res, init, noise_gain=0.3, horizon=10,
                 rng=np.random.default_rng(stream_seed))
        t2 = run(res, init, noise_gain=0.3, horizon=10,
                 rng=np.random.default_rng(stream_seed))
        if not np.array_equal(t1.states, t2.states):
            failures.append("run determinism"); break
        cases += 1

    print(f"\n  metric properties: {cases} randomized cases", end="")
    if cases < 10_000:
        failures.append(f"only {cases} cases executed")
    _criterion("metric-properties", failures)
