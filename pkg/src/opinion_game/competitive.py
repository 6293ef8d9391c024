"""Two competing camps: saddle-point budget splits and the zero-sum matrix game.

Each camp's pure strategy is a node pair (phase-one node, phase-two node)
or the empty strategy, giving ``n**2 + 1`` strategies per camp. For a fixed
profile the opinion sum is a quadratic ``V(g, b)`` in the two phase-one
budgets ``g = kg1`` and ``b = kb1``::

    V = const + lin_g*g + lin_b*b + quad_g*g**2 + quad_b*b**2 + cross*g*b

with ``quad_g <= 0`` and ``quad_b >= 0`` for nonnegative weights, so a
saddle point exists on the box ``[0, kg] x [0, kb]``. Its value fills one
cell of the good camp's payoff matrix; the mixed equilibrium of that matrix
comes from the usual minimax linear program.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .dynamics import CentralityBundle
from .errors import NumericalError, SaddlePointError, UnsupportedInstanceError
from .graph import Network, game_assumption_violations
from .single_camp import myopic_strategy, solve_single_camp

logger = logging.getLogger(__name__)

MYOPIC = "myopic"
SINGLE_CAMP_FARSIGHTED = "single_camp_farsighted"

#: relative slack on first-order conditions when classifying saddle cases
KKT_RTOL = 1e-12
#: relative slack on the curvature signs
CURVATURE_RTOL = 1e-12
_BLOCK_PROFILES = 1 << 18


@dataclass(frozen=True)
class PureProfile:
    good_nodes: Optional[tuple[int, int]]
    bad_nodes: Optional[tuple[int, int]]
    kg1: float
    kb1: float
    value: float


@dataclass(frozen=True)
class Quadratic:
    """Coefficients of ``V(g, b)`` for one or many profiles (arrays broadcast)."""

    const: np.ndarray
    lin_g: np.ndarray
    lin_b: np.ndarray
    quad_g: np.ndarray
    quad_b: np.ndarray
    cross: np.ndarray
    kg: np.ndarray
    kb: np.ndarray

    def value(self, g, b):
        return (
            self.const
            + self.lin_g * g
            + self.lin_b * b
            + self.quad_g * g * g
            + self.quad_b * b * b
            + self.cross * g * b
        )

    def grad_g(self, g, b):
        return self.lin_g + 2.0 * self.quad_g * g + self.cross * b

    def grad_b(self, g, b):
        return self.lin_b + 2.0 * self.quad_b * b + self.cross * g

    def scale(self):
        kmax = np.maximum(self.kg, self.kb)
        return (
            np.abs(self.lin_g)
            + np.abs(self.lin_b)
            + 2.0 * np.abs(self.quad_g) * self.kg
            + 2.0 * np.abs(self.quad_b) * self.kb
            + np.abs(self.cross) * kmax
        )


def profile_quadratic(bundle: CentralityBundle, theta, kg, kb, alpha, beta, gamma, delta) -> Quadratic:
    """Expand the two-phase opinion sum of a profile into ``V(g, b)`` coefficients.

    ``kg`` / ``kb`` may be arrays; a zero budget encodes the empty strategy.
    """
    theta = np.asarray(theta, dtype=float)
    kg = np.asarray(kg, dtype=float)
    kb = np.asarray(kb, dtype=float)
    c, r, s, bc, B = bundle.c, bundle.r, bundle.s, bundle.bc, bundle.b

    push_g = theta[alpha] / 2.0 * (1.0 + c[alpha])  # effectiveness of good phase-one money
    push_b = theta[gamma] / 2.0 * (1.0 - c[gamma])  # same for bad
    late_g = theta[beta] / 2.0 * (bc[beta] + r[beta])
    late_b = theta[delta] / 2.0 * (bc[delta] - r[delta])
    u1 = theta[beta] / 2.0 * B[beta, alpha]
    u2 = theta[delta] / 2.0 * B[delta, alpha]
    v1 = theta[beta] / 2.0 * B[beta, gamma]
    v2 = theta[delta] / 2.0 * B[delta, gamma]

    const = bundle.constant + kg * late_g + kb * late_b
    lin_g = -late_g + push_g * (s[alpha] + kg * u1 + kb * u2)
    lin_b = -late_b - push_b * (s[gamma] + kg * v1 + kb * v2)
    quad_g = -push_g * u1
    quad_b = push_b * v2
    cross = push_b * v1 - push_g * u2
    shape = np.broadcast_shapes(*(np.shape(a) for a in (const, lin_g, lin_b, quad_g, quad_b, cross)))
    arrays = [np.broadcast_to(a, shape) for a in (const, lin_g, lin_b, quad_g, quad_b, cross, kg, kb)]
    return Quadratic(*arrays)


def _node_pair(nodes):
    return (0, 0, False) if nodes is None else (int(nodes[0]), int(nodes[1]), True)


def profile_value(bundle: CentralityBundle, theta, kg, kb, profile_nodes, kg1, kb1) -> float:
    """Opinion sum of a profile at the given phase-one budgets.

    ``profile_nodes`` is ``((alpha, beta), (gamma, delta))``; either pair may
    be ``None`` for a camp that does not invest. Evaluated term by term from
    the two-phase closed form rather than from :func:`profile_quadratic`.
    """
    theta = np.asarray(theta, dtype=float)
    alpha, beta, good_on = _node_pair(profile_nodes[0])
    gamma, delta, bad_on = _node_pair(profile_nodes[1])
    kg1, kg2 = (kg1, kg - kg1) if good_on else (0.0, 0.0)
    kb1, kb2 = (kb1, kb - kb1) if bad_on else (0.0, 0.0)
    c, r, s, bc, B = bundle.c, bundle.r, bundle.s, bundle.bc, bundle.b
    ta, tb, tc, td = theta[alpha], theta[beta], theta[gamma], theta[delta]
    return float(
        bundle.constant
        + kg2 * tb / 2.0 * (bc[beta] + r[beta])
        + kb2 * td / 2.0 * (bc[delta] - r[delta])
        + kg1 * ta / 2.0 * (1.0 + c[alpha]) * (s[alpha] + kg2 * tb / 2.0 * B[beta, alpha] + kb2 * td / 2.0 * B[delta, alpha])
        - kb1 * tc / 2.0 * (1.0 - c[gamma]) * (s[gamma] + kg2 * tb / 2.0 * B[beta, gamma] + kb2 * td / 2.0 * B[delta, gamma])
    )


def interior_stationary_point(bundle: CentralityBundle, theta, kg, kb, alpha, beta, gamma, delta):
    """Joint stationary point of a profile, or ``None`` when ``B**2 + D*A == 0``.

    Solves the two first-order conditions through the curvature constants
    ``A`` (bad camp), ``D`` (good camp) and coupling ``B``; the result may lie
    outside the budget box.
    """
    theta = np.asarray(theta, dtype=float)
    c, r, s, bc, Bm = bundle.c, bundle.r, bundle.s, bundle.bc, bundle.b
    ta, tb, tc, td = theta[alpha], theta[beta], theta[gamma], theta[delta]
    ea, fc = 1.0 + c[alpha], 1.0 - c[gamma]
    A = tc * td * fc * Bm[delta, gamma]
    D = ta * tb * ea * Bm[beta, alpha]
    B = 0.5 * (ta * td * ea * Bm[delta, alpha] - tc * tb * fc * Bm[beta, gamma])
    det = B * B + D * A
    if det == 0.0:
        return None
    rhs_g = -tb * (bc[beta] + r[beta]) + ta * ea * (s[alpha] + kg * tb / 2.0 * Bm[beta, alpha] + kb * td / 2.0 * Bm[delta, alpha])
    rhs_b = -td * (bc[delta] - r[delta]) - tc * fc * (s[gamma] + kg * tb / 2.0 * Bm[beta, gamma] + kb * td / 2.0 * Bm[delta, gamma])
    # D g + B b = rhs_g ; B g - A b = rhs_b
    g = (A * rhs_g + B * rhs_b) / det
    b = (B * rhs_g - D * rhs_b) / det
    return float(g), float(b)


# ---------------------------------------------------------------------------
# saddle points


_CASES = [(gs, bs) for gs in ("I", "L", "U") for bs in ("I", "L", "U")]


def _case_candidates(q: Quadratic):
    """Candidate points and KKT consistency for all nine bound/interior cases."""
    kg, kb = q.kg, q.kb
    tol = KKT_RTOL * (q.scale() + 1e-300)
    box_g = KKT_RTOL * np.maximum(kg, 1.0)
    box_b = KKT_RTOL * np.maximum(kb, 1.0)
    fixed = {"L": lambda k: np.zeros_like(k), "U": lambda k: k}
    det = 4.0 * q.quad_g * q.quad_b - q.cross * q.cross

    gs_all, bs_all, ok_all = [], [], []
    with np.errstate(divide="ignore", invalid="ignore"):
        for gs, bs in _CASES:
            if gs == "I" and bs == "I":
                valid = det != 0.0
                g = (-q.lin_g * 2.0 * q.quad_b + q.cross * q.lin_b) / det
                b = (-2.0 * q.quad_g * q.lin_b + q.cross * q.lin_g) / det
            elif gs == "I":
                b = fixed[bs](kb)
                valid = q.quad_g < 0.0
                g = -(q.lin_g + q.cross * b) / (2.0 * q.quad_g)
            elif bs == "I":
                g = fixed[gs](kg)
                valid = q.quad_b > 0.0
                b = -(q.lin_b + q.cross * g) / (2.0 * q.quad_b)
            else:
                g, b = fixed[gs](kg), fixed[bs](kb)
                valid = np.ones(np.shape(g), dtype=bool)
            ok = valid & np.isfinite(g) & np.isfinite(b)
            ok &= (g >= -box_g) & (g <= kg + box_g) & (b >= -box_b) & (b <= kb + box_b)
            g = np.clip(np.nan_to_num(g), 0.0, kg)
            b = np.clip(np.nan_to_num(b), 0.0, kb)
            dg, db = q.grad_g(g, b), q.grad_b(g, b)
            # good maximises over g, bad minimises over b
            if gs == "L":
                ok &= dg <= tol
            elif gs == "U":
                ok &= dg >= -tol
            if bs == "L":
                ok &= db >= -tol
            elif bs == "U":
                ok &= db <= tol
            gs_all.append(g)
            bs_all.append(b)
            ok_all.append(ok)
    return np.stack(gs_all), np.stack(bs_all), np.stack(ok_all)


def _piecewise_extremum(f, breakpoints, lo, hi, maximize):
    """Optimum of a continuous piecewise quadratic ``f`` on ``[lo, hi]``."""
    pts = np.unique(np.clip(np.concatenate([[lo, hi], breakpoints]), lo, hi))
    cands = list(pts)
    for left, right in zip(pts[:-1], pts[1:]):
        mid = 0.5 * (left + right)
        fl, fm, fr = f(left), f(mid), f(right)
        h = 0.5 * (right - left)
        curv = fl - 2.0 * fm + fr
        if curv != 0.0:
            # vertex of the interpolating parabola
            vertex = mid - h * (fr - fl) / (2.0 * curv)
            if left < vertex < right:
                cands.append(vertex)
    vals = np.array([f(x) for x in cands])
    idx = int(np.argmax(vals) if maximize else np.argmin(vals))
    return float(cands[idx])


def _inner_response(quad, lin0, slope, bound, maximize):
    """Best response of an inner variable whose gradient is ``lin0 + slope*t + 2*quad*x``.

    Returns (response(t), breakpoints in t).
    """
    if quad != 0.0:
        def resp(t):
            return min(max(-(lin0 + slope * t) / (2.0 * quad), 0.0), bound)
        breaks = []
        if slope != 0.0:
            breaks = [(-lin0) / slope, (-lin0 - 2.0 * quad * bound) / slope]
        return resp, breaks

    def resp(t):
        d = lin0 + slope * t
        up = d > 0 if maximize else d < 0
        return bound if up else 0.0
    return resp, ([(-lin0) / slope] if slope != 0.0 else [])


def _minimax_saddle(q: Quadratic) -> tuple[float, float]:
    """Exact saddle of a single profile from the two reduced 1-D problems.

    The bad camp's optimal ``b`` minimises ``max_g V``, the good camp's
    optimal ``g`` maximises ``min_b V``; any such pair is a saddle point.
    """
    kg, kb = float(q.kg), float(q.kb)
    qg, qb, m = float(q.quad_g), float(q.quad_b), float(q.cross)
    lg, lb = float(q.lin_g), float(q.lin_b)

    g_resp, g_breaks = _inner_response(qg, lg, m, kg, maximize=True)
    b_star = _piecewise_extremum(lambda b: float(q.value(g_resp(b), b)), g_breaks, 0.0, kb, maximize=False)
    b_resp, b_breaks = _inner_response(qb, lb, m, kb, maximize=False)
    g_star = _piecewise_extremum(lambda g: float(q.value(g, b_resp(g))), b_breaks, 0.0, kg, maximize=True)
    return g_star, b_star


def _check_saddle(q: Quadratic, g, b) -> bool:
    tol = 1e-9 * (q.scale() + 1e-300)
    dg, db = q.grad_g(g, b), q.grad_b(g, b)
    # a zero-width box puts a point on both bounds at once
    ok_g = (np.abs(dg) <= tol) | ((g <= 0.0) & (dg <= tol)) | ((g >= q.kg) & (dg >= -tol))
    ok_b = (np.abs(db) <= tol) | ((b <= 0.0) & (db >= -tol)) | ((b >= q.kb) & (db <= tol))
    return bool(np.all(ok_g & ok_b))


def _check_curvature(q: Quadratic):
    scale = q.scale() + 1e-300
    if np.any(q.quad_g > CURVATURE_RTOL * scale) or np.any(q.quad_b < -CURVATURE_RTOL * scale):
        raise UnsupportedInstanceError(
            "opinion sum is not concave in the good camp's split and convex in the bad camp's; "
            "negative weights or biases outside [-1, 1]?"
        )


def solve_saddles(q: Quadratic) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised saddle points ``(kg1, kb1, value)`` for many profiles."""
    _check_curvature(q)
    gs, bs, ok = _case_candidates(q)
    pick = np.argmax(ok, axis=0)
    g = np.take_along_axis(gs, pick[None], axis=0)[0]
    b = np.take_along_axis(bs, pick[None], axis=0)[0]
    missing = np.flatnonzero(~ok.any(axis=0).ravel())
    if missing.size:
        logger.debug("falling back to minimax reduction for %d profiles", missing.size)
        # ndarray copies: numpy scalars would drop writes through .flat
        g = np.array(g, dtype=float)
        b = np.array(b, dtype=float)
        flat = [np.ravel(a) for a in (q.const, q.lin_g, q.lin_b, q.quad_g, q.quad_b, q.cross, q.kg, q.kb)]
        for k in missing:
            single = Quadratic(*(a[k] for a in flat))
            gk, bk = _minimax_saddle(single)
            if not _check_saddle(single, gk, bk):
                raise SaddlePointError(f"no saddle point found for profile index {k}")
            g.flat[k], b.flat[k] = gk, bk
    return g, b, q.value(g, b)


def saddle_split(bundle: CentralityBundle, theta, kg, kb, alpha, beta, gamma, delta) -> tuple[float, float, float]:
    """Phase-one budgets ``(kg1, kb1)`` at the profile's saddle point, and the value there.

    Raises :class:`UnsupportedInstanceError` if the profile's opinion sum is
    not concave in ``kg1`` and convex in ``kb1``.
    """
    # c = w0 * z0, so |z0| <= 1 means |c| <= w0
    if np.any(np.asarray(theta) < 0) or np.any(bundle.w0 < 0) or np.any(np.abs(bundle.c) > bundle.w0 * (1 + 1e-12)):
        raise UnsupportedInstanceError("negative theta / w0 or initial bias outside [-1, 1]")
    q = profile_quadratic(bundle, theta, kg, kb, alpha, beta, gamma, delta)
    g, b, v = solve_saddles(q)
    return float(g), float(b), float(v)


def curvature_bounds(bundle: CentralityBundle, theta) -> tuple[float, float]:
    """Largest ``kg1**2`` coefficient and smallest ``kb1**2`` coefficient over all pairs."""
    theta = np.asarray(theta, dtype=float)
    # [alpha, beta] -> -theta_a theta_b / 4 (1 + c_a) b[beta, alpha]
    quad_g = -np.outer(theta * (1.0 + bundle.c), theta) / 4.0 * bundle.b.T
    quad_b = np.outer(theta * (1.0 - bundle.c), theta) / 4.0 * bundle.b.T
    return float(quad_g.max()), float(quad_b.min())


# ---------------------------------------------------------------------------
# matrix game


@dataclass(frozen=True, eq=False)
class GameMatrix:
    """Good camp's payoffs and saddle splits over all pure-strategy profiles.

    Strategy ``0`` is the empty strategy; strategy ``1 + alpha*n + beta`` is
    the node pair ``(alpha, beta)``.
    """

    values: np.ndarray
    kg1: np.ndarray
    kb1: np.ndarray
    n: int
    kg: float
    kb: float

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def strategy(self, k: int) -> Optional[tuple[int, int]]:
        return None if k == 0 else divmod(k - 1, self.n)

    def index(self, pair: Optional[tuple[int, int]]) -> int:
        return 0 if pair is None else 1 + pair[0] * self.n + pair[1]

    def profile(self, i: int, j: int) -> PureProfile:
        return PureProfile(
            self.strategy(i), self.strategy(j), float(self.kg1[i, j]), float(self.kb1[i, j]), float(self.values[i, j])
        )


def _strategy_arrays(n: int, budget: float):
    """Node pair and effective budget of every pure strategy (index 0 = empty)."""
    first = np.concatenate([[0], np.repeat(np.arange(n), n)])
    second = np.concatenate([[0], np.tile(np.arange(n), n)])
    budgets = np.full(n * n + 1, float(budget))
    budgets[0] = 0.0
    return first, second, budgets


def utility_matrix(network: Network, bundle: CentralityBundle, kg: float, kb: float) -> GameMatrix:
    """Saddle-point payoffs of every profile of the ``(n**2+1) x (n**2+1)`` game."""
    violations = game_assumption_violations(network)
    if violations:
        raise UnsupportedInstanceError("; ".join(violations[:5]))
    if kg < 0 or kb < 0:
        raise ValueError("budgets must be nonnegative")
    n = network.n
    alpha, beta, kg_eff = _strategy_arrays(n, kg)
    gamma, delta, kb_eff = _strategy_arrays(n, kb)
    size = n * n + 1
    values = np.empty((size, size))
    kg1 = np.empty((size, size))
    kb1 = np.empty((size, size))
    rows = max(1, _BLOCK_PROFILES // size)
    for start in range(0, size, rows):
        sl = slice(start, min(start + rows, size))
        q = profile_quadratic(
            bundle, network.theta,
            kg_eff[sl, None], kb_eff[None, :],
            alpha[sl, None], beta[sl, None], gamma[None, :], delta[None, :],
        )
        kg1[sl], kb1[sl], values[sl] = solve_saddles(q)
    return GameMatrix(values=values, kg1=kg1, kb1=kb1, n=n, kg=float(kg), kb=float(kb))


@dataclass(frozen=True, eq=False)
class EquilibriumResult:
    good_mix: np.ndarray
    bad_mix: np.ndarray
    game_value: float
    good_lp_value: float
    bad_lp_value: float
    expected_kg1: Optional[float] = None
    expected_kb1: Optional[float] = None

    def exploitability(self, values: np.ndarray) -> tuple[float, float]:
        """Best pure-deviation gain of the good camp and of the bad camp."""
        good_gain = float(np.max(values @ self.bad_mix) - self.game_value)
        bad_gain = float(self.game_value - np.min(self.good_mix @ values))
        return good_gain, bad_gain

    def support(self, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
        return np.flatnonzero(self.good_mix > tol), np.flatnonzero(self.bad_mix > tol)


_LP_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


def _maximin_mix(payoff: np.ndarray) -> tuple[np.ndarray, float]:
    """Row player's maximin mixture of a nonnegative payoff matrix, and its value."""
    rows, cols = payoff.shape
    # variables: mixture p (rows) then value v; maximise v s.t. p @ payoff >= v
    cost = np.zeros(rows + 1)
    cost[-1] = -1.0
    a_ub = np.hstack([-payoff.T, np.ones((cols, 1))])
    a_eq = np.concatenate([np.ones(rows), [0.0]])[None, :]
    bounds = [(0.0, None)] * rows + [(None, None)]
    res = linprog(cost, A_ub=a_ub, b_ub=np.zeros(cols), A_eq=a_eq, b_eq=[1.0], bounds=bounds, method="highs", options=_LP_OPTIONS)
    if res.status != 0:
        raise NumericalError(f"minimax linear program failed: {res.message}")
    p = np.clip(res.x[:rows], 0.0, None)
    return p / p.sum(), float(res.x[-1])


def solve_equilibrium(matrix) -> EquilibriumResult:
    """Mixed equilibrium of the zero-sum game with the good camp maximising.

    ``matrix`` is either a payoff array or a :class:`GameMatrix`; the latter
    also fills the expected phase-one investments.
    """
    game = matrix if isinstance(matrix, GameMatrix) else None
    values = np.asarray(game.values if game is not None else matrix, dtype=float)
    if values.ndim != 2 or not np.all(np.isfinite(values)):
        raise ValueError("payoff matrix must be a finite 2-D array")
    rows, cols = values.shape
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        p, q = np.full(rows, 1.0 / rows), np.full(cols, 1.0 / cols)
        v_good = v_bad = lo
    else:
        shifted = values - lo
        p, v_good = _maximin_mix(shifted)
        # bad camp as maximiser of (hi - values)^T, also nonnegative
        q, v_bad = _maximin_mix((hi - lo) - shifted.T)
        v_good, v_bad = v_good + lo, hi - v_bad
    result = EquilibriumResult(p, q, float(p @ values @ q), v_good, v_bad)
    if game is not None:
        kg1, kb1 = expected_phase1_investments(result, game)
        result = EquilibriumResult(p, q, result.game_value, v_good, v_bad, kg1, kb1)
    return result


def expected_phase1_investments(result: EquilibriumResult, game: GameMatrix) -> tuple[float, float]:
    """Probability-weighted phase-one budgets of both camps."""
    return float(result.good_mix @ game.kg1 @ result.bad_mix), float(result.good_mix @ game.kb1 @ result.bad_mix)


def solve_game(network: Network, bundle: CentralityBundle, kg: float, kb: float) -> tuple[GameMatrix, EquilibriumResult]:
    game = utility_matrix(network, bundle, kg, kb)
    return game, solve_equilibrium(game)


@dataclass(frozen=True)
class DeviationOutcome:
    mode: str
    utility_eq: float
    utility_dev: float

    @property
    def loss(self) -> float:
        return self.utility_eq - self.utility_dev


def _fixed_good_payoffs(network: Network, bundle: CentralityBundle, kb: float, alpha, beta, g_total, g1) -> np.ndarray:
    """Good camp's payoff against every bad pure strategy when its own split is fixed.

    The bad camp keeps its node pair and picks its split as a best response.
    """
    gamma, delta, kb_eff = _strategy_arrays(network.n, kb)
    q = profile_quadratic(bundle, network.theta, g_total, kb_eff, alpha, beta, gamma, delta)
    with np.errstate(divide="ignore", invalid="ignore"):
        stat = -(q.lin_b + q.cross * g1) / (2.0 * q.quad_b)
    stat = np.where(q.quad_b > 0, np.clip(np.nan_to_num(stat), 0.0, kb_eff), 0.0)
    cands = np.stack([np.zeros_like(kb_eff), stat, kb_eff])
    return q.value(g1, cands).min(axis=0)


def deviation_analysis(
    network: Network,
    bundle: CentralityBundle,
    kg: float,
    kb: float,
    mode: str,
    deviant: str = "good",
    game: Optional[GameMatrix] = None,
    equilibrium: Optional[EquilibriumResult] = None,
) -> DeviationOutcome:
    """Good camp's expected payoff when it abandons its equilibrium mixture.

    The bad camp keeps its equilibrium mixture over node pairs. ``MYOPIC``
    puts the whole budget in phase one on the node best for the phase-one
    sum; ``SINGLE_CAMP_FARSIGHTED`` plays the single-camp optimum.
    """
    if deviant != "good":
        raise ValueError("only the good camp's deviation is supported")
    if game is None:
        game = utility_matrix(network, bundle, kg, kb)
    if equilibrium is None:
        equilibrium = solve_equilibrium(game)

    if mode == MYOPIC:
        x = myopic_strategy(network, bundle, kg)
        if x.any():
            alpha = beta = int(np.flatnonzero(x)[0])
            g_total, g1 = float(kg), float(kg)
        else:
            alpha = beta = 0
            g_total = g1 = 0.0
    elif mode == SINGLE_CAMP_FARSIGHTED:
        sol = solve_single_camp(network, bundle, kg)
        if sol.invests:
            alpha, beta, g_total, g1 = sol.alpha, sol.beta, float(kg), sol.k1
        else:
            alpha = beta = 0
            g_total = g1 = 0.0
    else:
        raise ValueError(f"unknown deviation mode {mode!r}")

    payoffs = _fixed_good_payoffs(network, bundle, kb, alpha, beta, g_total, g1)
    return DeviationOutcome(mode, equilibrium.game_value, float(payoffs @ equilibrium.bad_mix))
