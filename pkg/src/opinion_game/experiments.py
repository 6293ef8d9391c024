"""Scenario files, experiment runners and deterministic CSV output.

A scenario is a flat ``key = value`` text file (``#`` starts a comment,
lists are comma-separated)::

    dataset = builtin:karate
    experiment = W0_SWEEP
    kg = 5
    w0_sweep = 0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9

``theta_mode = share`` (the default) gives every node the camp weight
``theta * (1 - w0)``, so ``theta`` is the camps' share of the weight a node
does not keep for itself. ``theta_mode = absolute`` uses ``theta`` as is.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import numbers
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import __version__
from .competitive import MYOPIC, SINGLE_CAMP_FARSIGHTED, deviation_analysis, expected_phase1_investments, solve_game
from .dynamics import centralities, phase_one_sum, simulate_two_phases
from .errors import ScenarioError, ValidationError
from .graph import Network, build_network, karate_path, load_edge_list, load_weighted_network, validate
from .single_camp import (
    all_pair_optima,
    heuristic_strategies,
    myopic_solution,
    myopic_strategy,
    pair_objective,
    solve_single_camp,
)

logger = logging.getLogger(__name__)

EXPERIMENTS = (
    "BUDGET_CURVE",
    "W0_SWEEP",
    "MYOPIC_COMPARE",
    "HEURISTIC_COMPARE",
    "PAIR_HISTOGRAM",
    "PHASEWISE_DUMP",
    "EQUILIBRIUM_SWEEP",
    "DEVIATION",
)

SCHEMAS = {
    "BUDGET_CURVE": ("k1", "objective"),
    "W0_SWEEP": ("w0", "k1_opt", "k2_opt", "objective", "alpha", "beta"),
    "MYOPIC_COMPARE": ("w0", "sum_z1_myopic", "sum_z1_far", "sum_z2_myopic", "sum_z2_far"),
    "HEURISTIC_COMPARE": ("w0", "strategy_name", "objective"),
    "PAIR_HISTOGRAM": ("bin_low", "bin_high", "count"),
    "PHASEWISE_DUMP": ("node", "z0", "z1", "z2"),
    "EQUILIBRIUM_SWEEP": ("w0", "z0", "game_value", "expected_kg1", "expected_kb1"),
    "DEVIATION": ("w0", "mode", "utility_eq", "utility_dev"),
}

# schemas without a w0 column get one file per sweep value
_PER_W0 = {"BUDGET_CURVE", "PAIR_HISTOGRAM", "PHASEWISE_DUMP"}

BUILTIN_KARATE = "builtin:karate"
FORMATS = ("edge-list", "weighted")
THETA_MODES = ("share", "absolute")
SIZE_WARNING = 5000
DENSE_GAME_WARNING = 60
MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class Scenario:
    dataset: str
    experiment: str
    kg: float
    w0_sweep: tuple[float, ...]
    kb: float = 0.0
    z0_values: tuple[float, ...] = (0.0,)
    theta: float = 0.2
    theta_mode: str = "share"
    dataset_format: str = "edge-list"
    directed: bool = False
    seed: int = 42
    grid_points: int = 101
    bins: int = 20
    base_dir: str = field(default=".", compare=False)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ScenarioError(f"experiment: expected one of {', '.join(EXPERIMENTS)}, got {self.experiment!r}")
        if self.dataset_format not in FORMATS:
            raise ScenarioError(f"format: expected one of {', '.join(FORMATS)}, got {self.dataset_format!r}")
        if self.theta_mode not in THETA_MODES:
            raise ScenarioError(f"theta_mode: expected one of {', '.join(THETA_MODES)}, got {self.theta_mode!r}")
        for name in ("kg", "kb", "theta"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ScenarioError(f"{name}: must be a finite nonnegative number, got {value}")
        for name in ("w0_sweep", "z0_values"):
            values = getattr(self, name)
            if not values:
                raise ScenarioError(f"{name}: list must not be empty")
            if not all(math.isfinite(v) for v in values):
                raise ScenarioError(f"{name}: values must be finite")
        if self.grid_points < 2:
            raise ScenarioError(f"grid_points: must be at least 2, got {self.grid_points}")
        if self.bins < 1:
            raise ScenarioError(f"bins: must be at least 1, got {self.bins}")

    def theta_for(self, w0: float) -> float:
        return self.theta * (1.0 - w0) if self.theta_mode == "share" else self.theta

    def dataset_path(self) -> Path:
        if self.dataset == BUILTIN_KARATE:
            return karate_path()
        path = Path(self.dataset)
        return path if path.is_absolute() else Path(self.base_dir) / path

    def parameters(self) -> dict:
        params = asdict(self)
        params.pop("base_dir")
        params["w0_sweep"] = list(self.w0_sweep)
        params["z0_values"] = list(self.z0_values)
        return params


def _floats(key: str, text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ScenarioError(f"{key}: expected comma-separated numbers, got {text!r}") from None


def _scalar(key: str, text: str, kind):
    try:
        return kind(text)
    except ValueError:
        raise ScenarioError(f"{key}: expected {kind.__name__}, got {text!r}") from None


def _bool(key: str, text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ScenarioError(f"{key}: expected true or false, got {text!r}")


_PARSERS = {
    "dataset": ("dataset", lambda k, v: v),
    "format": ("dataset_format", lambda k, v: v),
    "directed": ("directed", _bool),
    "experiment": ("experiment", lambda k, v: v.upper()),
    "kg": ("kg", lambda k, v: _scalar(k, v, float)),
    "kb": ("kb", lambda k, v: _scalar(k, v, float)),
    "w0_sweep": ("w0_sweep", _floats),
    "z0_values": ("z0_values", _floats),
    "theta": ("theta", lambda k, v: _scalar(k, v, float)),
    "theta_mode": ("theta_mode", lambda k, v: v.lower()),
    "seed": ("seed", lambda k, v: _scalar(k, v, int)),
    "grid_points": ("grid_points", lambda k, v: _scalar(k, v, int)),
    "bins": ("bins", lambda k, v: _scalar(k, v, int)),
}
_REQUIRED = ("dataset", "experiment", "kg", "w0_sweep")


def parse_scenario(text: str, base_dir=".") -> Scenario:
    """Build a :class:`Scenario` from ``key = value`` text."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not sep or not key:
            raise ScenarioError(f"line {lineno}: expected 'key = value'")
        if key not in _PARSERS:
            raise ScenarioError(f"{key}: unknown scenario key (line {lineno})")
        name, parse = _PARSERS[key]
        if name in values:
            raise ScenarioError(f"{key}: given more than once (line {lineno})")
        values[name] = parse(key, value)
    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ScenarioError(f"{missing[0]}: required key is missing")
    return Scenario(base_dir=str(base_dir), **values)


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read scenario file ({exc.strerror})") from None
    return parse_scenario(text, base_dir=path.parent)


# ---------------------------------------------------------------------------
# CSV output


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r} cannot be written")
        text = format(value, ".12g")
        return "0" if text == "-0" else text
    raise TypeError(f"unsupported cell type {type(value).__name__}")


def emit_csv(rows: Iterable, schema: Sequence[str], path) -> None:
    """Write ``rows`` under a header ``schema``.

    Rows may be sequences in schema order or mappings keyed by column name.
    Floats are written with 12 significant digits; NaN and infinities are
    rejected before anything is written.
    """
    schema = tuple(schema)
    lines = []
    for k, row in enumerate(rows):
        if isinstance(row, Mapping):
            if set(row) != set(schema):
                raise ValueError(f"row {k} keys {sorted(row)} do not match schema {list(schema)}")
            row = [row[col] for col in schema]
        elif len(row) != len(schema):
            raise ValueError(f"row {k} has {len(row)} cells, schema has {len(schema)}")
        try:
            lines.append([_cell(v) for v in row])
        except (ValueError, TypeError) as exc:
            raise ValueError(f"row {k}: {exc}") from None
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(schema)
            writer.writerows(lines)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write CSV: {exc.strerror}", str(path)) from None


# ---------------------------------------------------------------------------
# experiments


class _Instances:
    """Networks and centrality bundles for each ``w0``; ``z0`` only changes ``c``."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        path = scenario.dataset_path()
        if scenario.dataset_format == "weighted":
            self.base = load_weighted_network(path)
            self.raw = None
        else:
            self.raw = load_edge_list(path, directed=scenario.directed)
            self.base = None
        self.n = self.raw.n if self.raw is not None else self.base.n
        if self.n > SIZE_WARNING:
            logger.warning("network has %d nodes; dense solves above %d nodes are slow", self.n, SIZE_WARNING)
        self._cache = {}

    def get(self, w0: float, z0: float) -> tuple[Network, object]:
        if w0 not in self._cache:
            theta = self.scenario.theta_for(w0)
            if self.raw is not None:
                net = build_network(self.raw, w0, theta, 0.0)
            else:
                b = self.base
                net = Network(b.W, np.full(b.n, w0), np.full(b.n, theta), b.z0, b.node_ids)
                problems = validate(net)
                if problems:
                    raise ValidationError(f"w0={w0:g}: " + "; ".join(problems[:5]))
            self._cache[w0] = (net, centralities(net))
        net, bundle = self._cache[w0]
        if not -1.0 <= z0 <= 1.0:
            raise ValidationError(f"z0 must lie in [-1, 1], got {z0}")
        return net.with_bias(z0), bundle.with_bias(np.full(net.n, z0))


def _budget_curve(sc: Scenario, inst: _Instances, w0: float):
    net, bundle = inst.get(w0, sc.z0_values[0])
    alpha = np.arange(net.n)[:, None]
    beta = np.arange(net.n)[None, :]
    rows = []
    for k1 in np.linspace(0.0, sc.kg, sc.grid_points):
        obj = pair_objective(bundle, net.theta, sc.kg, alpha, beta, k1)
        rows.append((k1, float(np.max(obj))))
    return rows


def _w0_sweep(sc: Scenario, inst: _Instances):
    rows = []
    for w0 in sc.w0_sweep:
        net, bundle = inst.get(w0, sc.z0_values[0])
        sol = solve_single_camp(net, bundle, sc.kg)
        alpha = net.node_ids[sol.alpha] if sol.invests else -1
        beta = net.node_ids[sol.beta] if sol.invests else -1
        rows.append((w0, sol.k1, sol.k2, sol.objective, alpha, beta))
    return rows


def _myopic_compare(sc: Scenario, inst: _Instances):
    rows = []
    for w0 in sc.w0_sweep:
        net, bundle = inst.get(w0, sc.z0_values[0])
        zeros = np.zeros(net.n)
        far = solve_single_camp(net, bundle, sc.kg)
        x_far = np.zeros(net.n)
        if far.invests:
            x_far[far.alpha] = far.k1
        myo = myopic_solution(net, bundle, sc.kg)
        z1_myo = phase_one_sum(net, bundle, myopic_strategy(net, bundle, sc.kg), zeros)
        z1_far = phase_one_sum(net, bundle, x_far, zeros)
        rows.append((w0, z1_myo, z1_far, myo.objective, far.objective))
    return rows


def _heuristic_compare(sc: Scenario, inst: _Instances):
    rows = []
    for w0 in sc.w0_sweep:
        net, bundle = inst.get(w0, sc.z0_values[0])
        best = solve_single_camp(net, bundle, sc.kg)
        rows.append((w0, "optimal", best.objective))
        for sol in heuristic_strategies(net, bundle, sc.kg, seed=sc.seed):
            rows.append((w0, sol.strategy, sol.objective))
        rows.append((w0, "myopic", myopic_solution(net, bundle, sc.kg).objective))
    return rows


def _pair_histogram(sc: Scenario, inst: _Instances, w0: float):
    net, bundle = inst.get(w0, sc.z0_values[0])
    _, obj = all_pair_optima(bundle, net.theta, sc.kg)
    counts, edges = np.histogram(obj.ravel(), bins=sc.bins)
    return [(edges[i], edges[i + 1], int(counts[i])) for i in range(sc.bins)]


def _phasewise_dump(sc: Scenario, inst: _Instances, w0: float):
    net, bundle = inst.get(w0, sc.z0_values[0])
    sol = solve_single_camp(net, bundle, sc.kg)
    x1, x2, zeros = np.zeros(net.n), np.zeros(net.n), np.zeros(net.n)
    if sol.invests:
        x1[sol.alpha] += sol.k1
        x2[sol.beta] += sol.k2
    z1, z2 = simulate_two_phases(net, bundle, x1, zeros, x2, zeros)
    return [(net.node_ids[i], net.z0[i], z1[i], z2[i]) for i in range(net.n)]


def _check_game_size(inst: _Instances):
    if inst.n > DENSE_GAME_WARNING:
        size = inst.n**2 + 1
        logger.warning("game matrix is %d x %d (dense); expect long runtimes", size, size)


def _equilibrium_sweep(sc: Scenario, inst: _Instances):
    _check_game_size(inst)
    rows = []
    for w0 in sc.w0_sweep:
        for z0 in sc.z0_values:
            net, bundle = inst.get(w0, z0)
            game, eq = solve_game(net, bundle, sc.kg, sc.kb)
            kg1, kb1 = expected_phase1_investments(eq, game)
            rows.append((w0, z0, eq.game_value, kg1, kb1))
    return rows


def _deviation(sc: Scenario, inst: _Instances):
    _check_game_size(inst)
    rows = []
    for w0 in sc.w0_sweep:
        net, bundle = inst.get(w0, sc.z0_values[0])
        game, eq = solve_game(net, bundle, sc.kg, sc.kb)
        for mode in (MYOPIC, SINGLE_CAMP_FARSIGHTED):
            out = deviation_analysis(net, bundle, sc.kg, sc.kb, mode, game=game, equilibrium=eq)
            rows.append((w0, mode, out.utility_eq, out.utility_dev))
    return rows


_SWEEPS = {
    "W0_SWEEP": _w0_sweep,
    "MYOPIC_COMPARE": _myopic_compare,
    "HEURISTIC_COMPARE": _heuristic_compare,
    "EQUILIBRIUM_SWEEP": _equilibrium_sweep,
    "DEVIATION": _deviation,
}
_PER_W0_RUNNERS = {
    "BUDGET_CURVE": _budget_curve,
    "PAIR_HISTOGRAM": _pair_histogram,
    "PHASEWISE_DUMP": _phasewise_dump,
}


def output_name(experiment: str, w0: float | None = None) -> str:
    stem = experiment.lower()
    return f"{stem}.csv" if w0 is None else f"{stem}_w0={_cell(float(w0))}.csv"


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_scenario(scenario: Scenario, out_dir) -> list[Path]:
    """Run the scenario's experiment and write its CSV files plus a manifest.

    Returns the written paths, manifest last.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    inst = _Instances(scenario)
    exp = scenario.experiment
    schema = SCHEMAS[exp]

    outputs = []
    if exp in _PER_W0:
        for w0 in dict.fromkeys(scenario.w0_sweep):
            path = out_dir / output_name(exp, w0)
            emit_csv(_PER_W0_RUNNERS[exp](scenario, inst, w0), schema, path)
            outputs.append(path)
    else:
        path = out_dir / output_name(exp)
        emit_csv(_SWEEPS[exp](scenario, inst), schema, path)
        outputs.append(path)

    dataset_path = scenario.dataset_path()
    manifest = {
        "package": "opinion_game",
        "version": __version__,
        "scenario": scenario.parameters(),
        "dataset": {
            "source": scenario.dataset if scenario.dataset == BUILTIN_KARATE else dataset_path.name,
            "sha256": _sha256(dataset_path),
            "nodes": inst.n,
        },
        "schema": list(schema),
        "outputs": {p.name: _sha256(p) for p in outputs},
    }
    manifest_path = out_dir / MANIFEST_NAME
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return outputs + [manifest_path]
