"""Acceptance suite: one test per release criterion, tolerances pinned.

Run with ``pytest tests/test_acceptance.py -v`` for one pass/fail line per
criterion (each test also prints an ACCEPT line visible under ``-s``).
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from windingphase import (
    CycleAssignment,
    PairConfig,
    PhaseSequence,
    SurfaceSpec,
    WindingChain,
    certify_incommensurable,
    chain_compose,
    chsh,
    correlation,
    events_in,
    find_almost_periods,
    pairing,
    parse_config,
    phase_at,
    randomness_battery,
    residual_curve,
    save_config,
    wrap_angle,
)
from windingphase.cli import main

TWO_PI = 2.0 * math.pi
PHI = (1.0 + math.sqrt(5.0)) / 2.0
CANONICAL_BETAS = (TWO_PI * (PHI % 1.0), TWO_PI * (math.sqrt(3.0) % 1.0))
CANONICAL_PERIODS = (1.0, math.sqrt(2.0))


def _accept(number, text):
    print(f"ACCEPT {number:2d} PASS - {text}")


def circular_distance(a, b):
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def make_seq(genus, coeffs, betas, periods, horizon):
    s = SurfaceSpec(genus)
    return PhaseSequence(
        s, WindingChain(s, coeffs), CycleAssignment(s, betas, periods), horizon
    )


@pytest.fixture(scope="module")
def canonical_pair():
    """g=1, chains (1,0)/(0,1) exchanged, T=(1,sqrt2), golden/sqrt3 betas."""
    s = SurfaceSpec(1)
    assign = CycleAssignment(s, CANONICAL_BETAS, CANONICAL_PERIODS)
    return PairConfig(
        PhaseSequence(s, WindingChain(s, (1, 0)), assign, 10000.0),
        PhaseSequence(s, WindingChain(s, (0, 1)), assign, 10000.0),
    )


def test_c01_bell_limit_reproduction(canonical_pair):
    # max over an 8x8 uniform angle grid of |E - cos(theta_a + theta_b)|
    # at t = 1e4 stays within 0.05, in well under 60 s
    start = time.perf_counter()
    worst = 0.0
    grid = [TWO_PI * k / 8.0 for k in range(8)]
    for ta in grid:
        for tb in grid:
            est = correlation(canonical_pair, ta, tb, 10000.0)
            worst = max(worst, abs(est.value - math.cos(ta + tb)))
    elapsed = time.perf_counter() - start
    assert worst <= 0.05, worst
    assert elapsed <= 60.0, elapsed
    _accept(1, f"Bell limit: max grid deviation {worst:.2e} in {elapsed:.2f}s")


def test_c02_chsh_violation(canonical_pair):
    result = chsh(
        canonical_pair, 0.0, math.pi / 2.0, 7.0 * math.pi / 4.0, math.pi / 4.0, 10000.0
    )
    target = 2.0 * math.sqrt(2.0)
    assert abs(result.s - target) <= 0.05, result.s
    assert result.s > 2.0
    _accept(2, f"CHSH: S = {result.s:.5f} (target {target:.4f}), violation reproduced")


def test_c03_genus0_closed_form():
    s = SurfaceSpec(0)
    assign = CycleAssignment(s, (), ())
    pair = PairConfig(
        PhaseSequence(s, WindingChain(s, ()), assign, 1000.0),
        PhaseSequence(s, WindingChain(s, ()), assign, 1000.0),
    )
    rng = np.random.default_rng(303)
    worst = 0.0
    for _ in range(100):
        ta, tb = (float(x) for x in rng.uniform(0.0, TWO_PI, 2))
        est = correlation(pair, ta, tb, 500.0)
        worst = max(worst, abs(est.value - (math.cos(ta + tb) + math.cos(ta - tb))))
    assert worst <= 1e-12, worst
    _accept(3, f"genus-0 closed form: worst error {worst:.2e} over 100 angle pairs")


def test_c04_pairing_homomorphism():
    s = SurfaceSpec(2)
    rng = np.random.default_rng(404)
    worst = 0.0
    for _ in range(1000):
        assign = CycleAssignment(
            s, tuple(float(b) for b in rng.uniform(0.0, TWO_PI, 4)), (1.0, 1.0, 1.0, 1.0)
        )
        a = WindingChain(s, tuple(int(x) for x in rng.integers(-1000, 1001, 4)))
        b = WindingChain(s, tuple(int(x) for x in rng.integers(-1000, 1001, 4)))
        lhs = pairing(chain_compose(a, b), assign).angle
        rhs = (pairing(a, assign) * pairing(b, assign)).angle
        worst = max(worst, circular_distance(lhs, rhs))
    assert worst <= 1e-12, worst
    _accept(4, f"pairing homomorphism: worst angle mismatch {worst:.2e} over 1000 pairs")


def test_c05_phase_oracle_equivalence():
    # closed-form phase_at vs an independent fold over events_in, including
    # commensurable-period configurations and taus drawn exactly at event
    # times (simultaneous events)
    rng = np.random.default_rng(505)
    worst = 0.0
    for _ in range(1000):
        g = int(rng.integers(0, 4))
        n = 2 * g
        if rng.random() < 0.5:
            periods = tuple(float(p) for p in rng.uniform(0.1, 3.0, n))
        else:
            periods = tuple(float(rng.integers(1, 9)) * 0.25 for _ in range(n))
        betas = tuple(float(b) for b in rng.uniform(0.0, TWO_PI, n))
        coeffs = tuple(int(c) for c in rng.integers(-5, 6, n))
        seq = make_seq(g, coeffs, betas, periods, 120.0)
        if n and any(coeffs) and rng.random() < 0.3:
            k = int(rng.integers(1, 50))
            i = int(rng.integers(0, n))
            tau = min(k * periods[i], 100.0)
        else:
            tau = float(rng.uniform(0.0, 100.0))
        total = 0.0
        if tau > 0.0:
            for ev in events_in(seq, 0.0, tau):
                total += ev.increment
        worst = max(worst, circular_distance(phase_at(seq, tau), wrap_angle(total)))
    assert worst <= 1e-9, worst
    _accept(5, f"phase oracle equivalence: worst mismatch {worst:.2e} over 1000 draws")


def test_c06_incommensurability_certification():
    s = SurfaceSpec(1)
    for value, name in ((math.sqrt(2.0), "sqrt2"), (math.sqrt(3.0), "sqrt3"), (PHI, "phi")):
        rep = certify_incommensurable(
            CycleAssignment(s, (0.0, 0.0), (1.0, value)), 64, 1e-9
        )
        assert rep.all_incommensurable(), name
    rejected = 0
    for q in range(1, 65):
        for p in range(1, 65):
            if math.gcd(p, q) != 1:
                continue
            v = certify_incommensurable(
                CycleAssignment(s, (0.0, 0.0), (float(p), float(q))), 64, 1e-9
            ).verdicts[0]
            assert v.commensurable, (p, q)
            assert v.witness == Fraction(p, q), (p, q, v.witness)
            rejected += 1
    _accept(6, f"incommensurability: 3 irrational pairs accepted, {rejected} planted ratios rejected")


def test_c07_almost_period_detection():
    # T=(1, sqrt2): the 41/29 convergent coincidence passes a 0.3 budget
    seq = make_seq(1, (1, 1), (TWO_PI / 41.0, TWO_PI / 29.0), (1.0, math.sqrt(2.0)), 100.0)
    rep = find_almost_periods(seq, 0.3, 45.0, 0.5)
    near = [c for c in rep.candidates if abs(c.shift - 41.0) <= 0.1]
    assert near, [c.shift for c in rep.candidates]
    best_near = min(c.discrepancy for c in near)
    assert best_near <= 0.3

    # T=(1,2) with net rotation 2*(pi/2) + pi = 2*pi over the common period:
    # the least common period 2 is returned with discrepancy 0
    seq2 = make_seq(1, (1, 1), (math.pi / 2.0, math.pi), (1.0, 2.0), 50.0)
    rep2 = find_almost_periods(seq2, 0.3, 10.0, 0.5)
    assert rep2.candidates
    first = rep2.candidates[0]
    assert first.shift == 2.0
    assert first.discrepancy <= 1e-12
    _accept(7, f"almost periods: shift 41 at discrepancy {best_near:.3f}; common period 2 at {first.discrepancy:.1e}")


def test_c08_commensurable_negative_control():
    # T=(1,2), beta2 = 2*beta1: gamma cycles the exact two-segment orbit
    # {0, -beta1}; residual converges to the enumerated orbit average and
    # stays away from zero
    b1 = math.pi / 3.0
    s = SurfaceSpec(1)
    assign = CycleAssignment(s, (b1, 2.0 * b1), (1.0, 2.0))
    pair = PairConfig(
        PhaseSequence(s, WindingChain(s, (1, 0)), assign, 4000.0),
        PhaseSequence(s, WindingChain(s, (0, 1)), assign, 4000.0),
    )
    checked = []
    for ta, tb in ((0.0, 0.0), (0.3, 0.1), (1.0, 0.25)):
        orbit = [0.0, -b1]  # oracle: enumerate gamma over one common period
        oracle = math.fsum(math.cos(ta - tb + 2.0 * g) for g in orbit) / len(orbit)
        curve = residual_curve(pair, ta, tb, [400.0, 2000.0, 4000.0])
        for _, res in curve:
            assert abs(res - oracle) <= 1e-9, (ta, tb, res, oracle)
        checked.append(abs(curve[-1][1]))
    assert max(checked) >= 0.1
    _accept(8, f"negative control: residual equals orbit average, |residual| up to {max(checked):.3f}")


def test_c09_superposition_prediction():
    rng = np.random.default_rng(909)
    for _ in range(500):
        g = int(rng.integers(0, 5))
        n = 2 * g
        coeffs = tuple(int(c) for c in rng.integers(-3, 4, n))
        # draw distinct periods so "distinct event periods" is well-defined
        periods = tuple(float(p) for p in np.sort(rng.uniform(0.2, 5.0, n)) * (1 + 1e-9))
        betas = tuple(float(b) for b in rng.uniform(0.0, TWO_PI, n))
        seq = make_seq(g, coeffs, betas, periods, 40.0)
        emitting_periods = {
            seq.assignment.periods[e.cycle_index] for e in events_in(seq, 0.0, 40.0)
        }
        expected = {periods[i] for i in range(n) if coeffs[i] != 0 and periods[i] <= 40.0}
        assert emitting_periods == expected
        assert len({periods[i] for i in range(n) if coeffs[i] != 0}) == sum(
            1 for c in coeffs if c != 0
        )
        assert len(emitting_periods) <= 2 * g
    _accept(9, "superposition: distinct event periods = nonzero windings <= 2g over 500 configs")


def test_c10_randomness_battery():
    seq = make_seq(1, (1, 0), (TWO_PI * (PHI % 1.0), 0.0), (1.0, 3.0), 10000.0)
    passing = 0
    for seed in range(20):
        rep = randomness_battery(seq, 10000.0, 100000, seed=seed)
        if 0.01 <= rep.monobit_p <= 0.99:
            passing += 1
    assert passing >= 17, passing

    constant = make_seq(0, (), (), (), 1000.0)
    rep0 = randomness_battery(constant, 1000.0, 100000, seed=0)
    assert rep0.monobit_p <= 1e-6
    _accept(10, f"randomness: {passing}/20 seeds pass monobit; constant sequence flagged (p={rep0.monobit_p:.1e})")


def test_c11_reproducibility(tmp_path):
    cfg = parse_config(
        {
            "genus": 1,
            "chain_a": [1, 0],
            "chain_b": [0, 1],
            "betas": list(CANONICAL_BETAS),
            "periods": list(CANONICAL_PERIODS),
            "horizon": 500.0,
            "seed": 1111,
            "angle_grid_size": 3,
            "n_samples": 2000,
            "search_bound": 20.0,
            "sample_step": 2.0,
            "spectrum_lambda_count": 5,
            "event_window": [0.0, 60.0],
            "residual_horizons": [5.0, 50.0, 500.0],
        }
    )
    cfg_path = tmp_path / "config.json"
    save_config(cfg, cfg_path)
    outs = (tmp_path / "run1", tmp_path / "run2")
    for out in outs:
        for name in ("generate", "analyze", "correlate", "residual", "chsh"):
            assert main([name, "--config", str(cfg_path), "--out", str(out)]) == 0
    tables = [
        "events_a.csv", "events_b.csv", "almost_periods.csv", "randomness.csv",
        "spectrum.csv", "correlate.csv", "residual.csv", "chsh.csv",
    ]
    for name in tables:
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes(), name
    _accept(11, f"reproducibility: {len(tables)} tables byte-identical across two runs")
