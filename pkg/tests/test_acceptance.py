"""Acceptance gate: one test per criterion, each at its stated tolerance.

Karate runs use kg = kb = 5 and the default scenario convention: camp
weight ``0.2 * (1 - w0)`` (``theta_mode = share``).
"""

import csv
import itertools
import time

import numpy as np
import pytest

from opinion_game.competitive import profile_value, saddle_split, solve_game
from opinion_game.dynamics import PhaseInputs, centralities, iterate_to_convergence, steady_state, two_phase_objective
from opinion_game.experiments import Scenario, run_scenario
from opinion_game.graph import build_network, load_karate
from opinion_game.single_camp import heuristic_strategies, myopic_solution, solve_single_camp

from conftest import random_network

KG = KB = 5.0
THETA_SHARE = 0.2
W0_GRID = tuple(round(0.1 * k, 1) for k in range(10))


def karate_instance(w0, z0):
    net = build_network(load_karate(), w0, THETA_SHARE * (1 - w0), z0)
    return net, centralities(net)


_GAMES = {}


def karate_game(w0, z0):
    if (w0, z0) not in _GAMES:
        net, bundle = karate_instance(w0, z0)
        _GAMES[w0, z0] = solve_game(net, bundle, KG, KB)
    return _GAMES[w0, z0]


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def karate_scenario(experiment, **kw):
    return Scenario(dataset="builtin:karate", experiment=experiment, kg=KG, kb=KB, w0_sweep=W0_GRID, **kw)


@pytest.fixture(scope="module")
def single_camp_instances():
    rng = np.random.default_rng(2024)
    out = []
    for _ in range(30):
        net = random_network(rng, max_n=5)
        out.append((net, centralities(net), float(rng.uniform(0.5, 10))))
    return out


def simulate_sum(net, x1, x2):
    """Opinion sum after two phases for batches of good-camp investments (columns)."""
    delta = np.linalg.inv(np.eye(net.n) - net.W.toarray())
    lean0 = (net.w0 * net.z0)[:, None]
    z1 = delta @ (lean0 + net.theta[:, None] * (1 + lean0) / 2 * x1)
    lean1 = net.w0[:, None] * z1
    z2 = delta @ (lean1 + net.theta[:, None] * (1 + lean1) / 2 * x2)
    return z2.sum(axis=0)


def test_criterion_01_closed_form_matches_iteration(acceptance_report):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        net = random_network(rng, max_n=8, z0=None)
        n = net.n
        inputs = PhaseInputs(net.z0, rng.uniform(0, 3, n), rng.uniform(0, 3, n))
        closed = steady_state(net, centralities(net), inputs)
        iterated = iterate_to_convergence(net, inputs, tol=1e-12)
        worst = max(worst, float(np.max(np.abs(closed - iterated))))
    elapsed = time.perf_counter() - start
    acceptance_report(1, worst < 1e-8 and elapsed < 5.0, f"max-norm gap {worst:.2e} < 1e-8, {elapsed:.2f}s < 5s")


def test_criterion_02_objective_matches_sequential_phases(acceptance_report):
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(100):
        net = random_network(rng, max_n=8)
        bundle = centralities(net)
        n = net.n
        x1, y1, x2, y2 = (rng.uniform(0, 3, n) * (rng.random(n) < 0.3) for _ in range(4))
        z1 = steady_state(net, bundle, PhaseInputs(net.z0, x1, y1))
        z2 = steady_state(net, bundle, PhaseInputs(z1, x2, y2))
        closed = two_phase_objective(net, bundle, x1, y1, x2, y2)
        worst = max(worst, abs(closed - z2.sum()) / max(abs(z2.sum()), 1e-300))
    acceptance_report(2, worst < 1e-8, f"max relative gap {worst:.2e} < 1e-8")


def test_criterion_03_single_camp_matches_exhaustive_grid(acceptance_report, single_camp_instances):
    start = time.perf_counter()
    worst_k1 = worst_obj = 0.0
    for net, bundle, kg in single_camp_instances:
        sol = solve_single_camp(net, bundle, kg)
        grid = np.linspace(0.0, kg, 1001)
        best_val, best_k1 = float(simulate_sum(net, np.zeros((net.n, 1)), np.zeros((net.n, 1)))[0]), 0.0
        for a, b in itertools.product(range(net.n), repeat=2):
            x1 = np.zeros((net.n, grid.size))
            x2 = np.zeros((net.n, grid.size))
            x1[a] = grid
            x2[b] += kg - grid
            vals = simulate_sum(net, x1, x2)
            i = int(np.argmax(vals))
            if vals[i] > best_val:
                best_val, best_k1 = float(vals[i]), float(grid[i])
        worst_k1 = max(worst_k1, abs(sol.k1 - best_k1) / kg)
        worst_obj = max(worst_obj, abs(sol.objective - best_val) / max(abs(best_val), 1e-300))
    elapsed = time.perf_counter() - start
    ok = worst_k1 <= 1e-3 and worst_obj <= 1e-6 and elapsed < 30.0
    acceptance_report(3, ok, f"k1 gap {worst_k1:.2e}*kg <= 1e-3*kg, objective gap {worst_obj:.2e} <= 1e-6, {elapsed:.1f}s < 30s")


def test_criterion_04_two_nodes_per_phase_never_better(acceptance_report, single_camp_instances):
    k1_grid = np.linspace(0.0, 1.0, 21)
    share = np.linspace(0.0, 1.0, 11)
    worst = -np.inf
    for net, bundle, kg in single_camp_instances:
        sol = solve_single_camp(net, bundle, kg)
        n = net.n
        k1, s1, s2 = (a.ravel() for a in np.meshgrid(k1_grid * kg, share, share, indexing="ij"))
        pairs = list(itertools.combinations(range(n), 2)) or [(0, 0)]
        for (a1, a2), (b1, b2) in itertools.product(pairs, repeat=2):
            x1 = np.zeros((n, k1.size))
            x2 = np.zeros((n, k1.size))
            x1[a1] += s1 * k1
            x1[a2] += (1 - s1) * k1
            x2[b1] += s2 * (kg - k1)
            x2[b2] += (1 - s2) * (kg - k1)
            best = float(simulate_sum(net, x1, x2).max())
            worst = max(worst, (best - sol.objective) / max(abs(sol.objective), 1e-300))
    acceptance_report(4, worst <= 1e-6, f"largest relative excess over the solver {worst:.2e} <= 1e-6")


def test_criterion_05_unbiased_karate_game_value_zero(acceptance_report):
    values, times = [], []
    for w0 in (0.1, 0.5, 0.9):
        start = time.perf_counter()
        _, eq = karate_game(w0, 0.0)
        times.append(time.perf_counter() - start)
        values.append(eq.game_value)
    ok = max(abs(v) for v in values) < 1e-6 and max(times) < 300
    acceptance_report(5, ok, f"|v| = {[f'{abs(v):.1e}' for v in values]} < 1e-6, slowest {max(times):.1f}s < 300s")


def test_criterion_06_bias_sign_antisymmetry(acceptance_report):
    _, plus = karate_game(0.5, 0.1)
    _, minus = karate_game(0.5, -0.1)
    v = plus.game_value
    gap = abs(v + minus.game_value)
    acceptance_report(6, gap < 1e-6 * (1 + abs(v)), f"v(+0.1) = {v:.9g}, v(-0.1) = {minus.game_value:.9g}, gap {gap:.1e}")


def test_criterion_07_equilibrium_exploitability(acceptance_report):
    for w0 in W0_GRID:
        karate_game(w0, 0.1)
    worst = -np.inf
    for game, eq in _GAMES.values():
        good_gain, bad_gain = eq.exploitability(game.values)
        worst = max(worst, max(good_gain, bad_gain) / (1 + abs(eq.game_value)))
    acceptance_report(7, worst <= 1e-6, f"{len(_GAMES)} equilibria, worst gain {worst:.1e}*(1+|v|) <= 1e-6")


def test_criterion_08_saddle_survives_perturbations(acceptance_report):
    rng = np.random.default_rng(8)
    worst = -np.inf
    bundles = {}
    for _ in range(100):
        w0 = float(rng.choice(W0_GRID))
        z0 = float(rng.uniform(-1, 1))
        if (w0, z0) not in bundles:
            bundles[w0, z0] = karate_instance(w0, z0)
        net, bundle = bundles[w0, z0]
        nodes = tuple(int(v) for v in rng.integers(0, net.n, size=4))
        profile = (nodes[:2], nodes[2:])
        g, b, v = saddle_split(bundle, net.theta, KG, KB, *nodes)
        for g2 in rng.uniform(0, KG, 50):
            worst = max(worst, profile_value(bundle, net.theta, KG, KB, profile, g2, b) - v)
        for b2 in rng.uniform(0, KB, 50):
            worst = max(worst, v - profile_value(bundle, net.theta, KG, KB, profile, g, b2))
    acceptance_report(8, worst <= 1e-8, f"largest deviating gain {worst:.1e} <= 1e-8")


def test_criterion_09a_budget_curve_interior_maximum(acceptance_report, tmp_path):
    sc = Scenario(dataset="builtin:karate", experiment="BUDGET_CURVE", kg=KG, w0_sweep=(0.5,))
    rows = read_rows(run_scenario(sc, tmp_path)[0])
    k1 = np.array([float(r["k1"]) for r in rows])
    obj = np.array([float(r["objective"]) for r in rows])
    i = int(np.argmax(obj))
    ok = 0 < i < len(obj) - 1 and obj[i] > obj[0] and obj[i] > obj[-1]
    acceptance_report("9a", ok, f"curve maximum at k1 = {k1[i]:g} of {KG:g}")


def test_criterion_09b_optimal_k1_nondecreasing(acceptance_report, tmp_path):
    rows = read_rows(run_scenario(karate_scenario("W0_SWEEP"), tmp_path)[0])
    k1 = [float(r["k1_opt"]) for r in rows]
    ok = all(b >= a for a, b in zip(k1, k1[1:]))
    acceptance_report("9b", ok, "k1 over w0 = 0..0.9: " + ", ".join(f"{v:.3g}" for v in k1))


def test_criterion_09c_farsighted_beats_myopic(acceptance_report, tmp_path):
    rows = read_rows(run_scenario(karate_scenario("MYOPIC_COMPARE"), tmp_path / "m")[0])
    sweep = read_rows(run_scenario(karate_scenario("W0_SWEEP"), tmp_path / "s")[0])
    far = np.array([float(r["sum_z2_far"]) for r in rows])
    myo = np.array([float(r["sum_z2_myopic"]) for r in rows])
    dominates = bool(np.all(far >= myo))
    invests_late = float(sweep[0]["k2_opt"]) > 0
    gap0 = far[0] - myo[0]
    ok = dominates and (gap0 > 0 or not invests_late)
    acceptance_report("9c", ok, f"far >= myopic on all w0: {dominates}; gap at w0 = 0: {gap0:.6g} (k2 = {sweep[0]['k2_opt']})")


def test_criterion_09d_game_value_increases_with_w0(acceptance_report, tmp_path):
    rows = read_rows(run_scenario(karate_scenario("EQUILIBRIUM_SWEEP", z0_values=(0.1,)), tmp_path)[0])
    values = [float(r["game_value"]) for r in rows]
    ok = all(b > a for a, b in zip(values, values[1:]))
    acceptance_report("9d", ok, "v over w0 = 0..0.9: " + ", ".join(f"{v:.4g}" for v in values))


def test_criterion_10_solver_dominates_baselines(acceptance_report, single_camp_instances):
    instances = list(single_camp_instances)
    rng = np.random.default_rng(10)
    instances += [(net, centralities(net), float(rng.uniform(0, 10))) for net in (random_network(rng) for _ in range(50))]
    for w0 in W0_GRID:
        for z0 in (-0.1, 0.0, 0.1):
            net, bundle = karate_instance(w0, z0)
            instances.append((net, bundle, KG))
    violations = 0
    for k, (net, bundle, kg) in enumerate(instances):
        best = solve_single_camp(net, bundle, kg).objective
        others = [h.objective for h in heuristic_strategies(net, bundle, kg, seed=k)]
        others.append(myopic_solution(net, bundle, kg).objective)
        violations += sum(best < o for o in others)
    acceptance_report(10, violations == 0, f"{violations} baseline wins over {len(instances)} instances")
