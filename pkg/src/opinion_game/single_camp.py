"""One investing camp: best node pair and two-phase budget split.

With no opponent, the opinion sum after phase two is bilinear in the phase
one and phase two investments, so an optimum puts the phase-one budget
``k1`` on one node ``alpha`` and the phase-two budget ``k2 = kg - k1`` on
one node ``beta`` (or invests nothing). For a fixed pair the objective is
a quadratic in ``k1``; scanning all ``n**2`` pairs is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import CentralityBundle, phase_one_sum
from .graph import Network

GOOD = "good"
BAD = "bad"

# rows of the (alpha, beta) scan processed per block
_BLOCK_PAIRS = 1 << 20


@dataclass(frozen=True)
class SingleCampSolution:
    alpha: Optional[int]
    beta: Optional[int]
    k1: float
    k2: float
    objective: float
    strategy: str = "optimal"

    @property
    def invests(self) -> bool:
        return self.alpha is not None


def pair_objective(bundle: CentralityBundle, theta, kg, alpha, beta, k1):
    """Opinion sum when ``k1`` goes to ``alpha`` in phase one and the rest to ``beta``.

    Broadcasts over array-valued ``alpha``, ``beta`` and ``k1``.
    """
    theta = np.asarray(theta, dtype=float)
    k2 = kg - np.asarray(k1, dtype=float)
    ta, tb = theta[alpha], theta[beta]
    ca = bundle.c[alpha]
    return (
        bundle.constant
        + k1 * ta / 2.0 * (1.0 + ca) * bundle.s[alpha]
        + k2 * tb / 2.0 * (bundle.bc[beta] + bundle.r[beta])
        + k1 * k2 * ta * tb / 4.0 * (1.0 + ca) * bundle.b[beta, alpha]
    )


def stationary_split(bundle: CentralityBundle, theta, kg, alpha, beta):
    """Clamped stationary ``(k1, k2)`` for a pair, or ``None`` if the objective is linear in ``k1``.

    ``k1`` and ``k2`` are clamped independently, as two separate closed forms.
    """
    theta = np.asarray(theta, dtype=float)
    ta, tb = theta[alpha], theta[beta]
    ca = bundle.c[alpha]
    bba = bundle.b[beta, alpha]
    if ta * tb * (1.0 + ca) * bba == 0.0:
        return None
    shift = bundle.s[alpha] / (tb * bba) - (bundle.bc[beta] + bundle.r[beta]) / (ta * bba * (1.0 + ca))
    k1 = min(max(kg / 2.0 + shift, 0.0), kg)
    k2 = min(max(kg / 2.0 - shift, 0.0), kg)
    return k1, k2


def _best_split(bundle: CentralityBundle, theta, kg, alpha, beta):
    """Vectorised best ``k1`` over candidates ``{0, clamped stationary, kg}``."""
    alpha = np.asarray(alpha)
    beta = np.asarray(beta)
    ta, tb = theta[alpha], theta[beta]
    ca = bundle.c[alpha]
    bba = bundle.b[beta, alpha]
    # objective = const + lin * k1 + quad * k1 * (kg - k1) + base, with quad >= 0 in the usual regime
    quad = ta * tb / 4.0 * (1.0 + ca) * bba
    lin = ta / 2.0 * (1.0 + ca) * bundle.s[alpha] - tb / 2.0 * (bundle.bc[beta] + bundle.r[beta])
    with np.errstate(divide="ignore", invalid="ignore"):
        stat = kg / 2.0 + lin / (2.0 * quad)
    stat = np.where(quad != 0.0, np.clip(stat, 0.0, kg), 0.0)

    zeros = np.zeros(np.broadcast(alpha, beta).shape)
    cands = np.stack([zeros, stat, zeros + kg])
    vals = pair_objective(bundle, theta, kg, alpha, beta, cands)
    # ties go to the smaller k1
    order = np.argsort(cands, axis=0, kind="stable")
    cands = np.take_along_axis(cands, order, axis=0)
    vals = np.take_along_axis(vals, order, axis=0)
    pick = np.argmax(vals, axis=0)
    k1 = np.take_along_axis(cands, pick[None], axis=0)[0]
    obj = np.take_along_axis(vals, pick[None], axis=0)[0]
    return k1, obj


def optimal_split_for_pair(bundle: CentralityBundle, theta, kg: float, alpha: int, beta: int) -> tuple[float, float, float]:
    """Best ``(k1, k2, objective)`` for a fixed node pair with the whole budget spent."""
    k1, obj = _best_split(bundle, np.asarray(theta, dtype=float), float(kg), alpha, beta)
    k1 = float(k1)
    return k1, float(kg) - k1, float(obj)


def all_pair_optima(bundle: CentralityBundle, theta, kg: float) -> tuple[np.ndarray, np.ndarray]:
    """``(k1, objective)`` matrices indexed ``[alpha, beta]`` for every pair."""
    theta = np.asarray(theta, dtype=float)
    n = bundle.n
    k1 = np.empty((n, n))
    obj = np.empty((n, n))
    rows = max(1, _BLOCK_PAIRS // max(n, 1))
    beta = np.arange(n)[None, :]
    for start in range(0, n, rows):
        stop = min(start + rows, n)
        alpha = np.arange(start, stop)[:, None]
        k1[start:stop], obj[start:stop] = _best_split(bundle, theta, float(kg), alpha, beta)
    return k1, obj


def _no_investment(bundle: CentralityBundle, strategy: str = "optimal") -> SingleCampSolution:
    return SingleCampSolution(None, None, 0.0, 0.0, bundle.constant, strategy)


def solve_single_camp(network: Network, bundle: CentralityBundle, kg: float) -> SingleCampSolution:
    """Exact optimum over all ``n**2 + 1`` pure strategies.

    Ties between pairs go to the lexicographically smallest ``(alpha, beta)``;
    a pair is used only if it strictly beats not investing. When one phase
    gets no budget every node ties for it, and the other phase's node is
    reported instead.
    """
    if kg < 0:
        raise ValueError("budget must be nonnegative")
    k1, obj = all_pair_optima(bundle, network.theta, kg)
    flat = int(np.argmax(obj))
    best = float(obj.flat[flat])
    if not best > bundle.constant:
        return _no_investment(bundle)
    alpha, beta = divmod(flat, bundle.n)
    k1_best = float(k1.flat[flat])
    if k1_best == 0.0:
        alpha = beta
    elif k1_best == kg:
        beta = alpha
    return SingleCampSolution(alpha, beta, k1_best, kg - k1_best, best)


def myopic_coefficients(network: Network, bundle: CentralityBundle, camp: str = GOOD) -> np.ndarray:
    """Marginal effect of a unit phase-one investment on the phase-one opinion sum."""
    if camp == GOOD:
        return bundle.r * network.theta * (1.0 + bundle.c) / 2.0
    if camp == BAD:
        return bundle.r * network.theta * (1.0 - bundle.c) / 2.0
    raise ValueError(f"camp must be {GOOD!r} or {BAD!r}, got {camp!r}")


def myopic_strategy(network: Network, bundle: CentralityBundle, kg: float, camp: str = GOOD) -> np.ndarray:
    """Phase-one investment vector maximising the camp's phase-one payoff.

    The whole budget goes to the node with the largest positive coefficient;
    nothing is invested when no coefficient is positive.
    """
    coef = myopic_coefficients(network, bundle, camp)
    x = np.zeros(network.n)
    node = int(np.argmax(coef))
    if coef[node] > 0 and kg > 0:
        x[node] = kg
    return x


def myopic_solution(network: Network, bundle: CentralityBundle, kg: float) -> SingleCampSolution:
    """The good camp's myopic strategy scored on the two-phase objective."""
    x = myopic_strategy(network, bundle, kg, GOOD)
    if not x.any():
        return _no_investment(bundle, "myopic")
    alpha = int(np.flatnonzero(x)[0])
    obj = float(pair_objective(bundle, network.theta, kg, alpha, alpha, kg))
    return SingleCampSolution(alpha, alpha, float(kg), 0.0, obj, "myopic")


def phase_sums(network: Network, bundle: CentralityBundle, kg: float, solution: SingleCampSolution) -> tuple[float, float]:
    """Opinion sums after phase one and phase two for a good-camp solution."""
    x1 = np.zeros(network.n)
    if solution.invests:
        x1[solution.alpha] = solution.k1
    z1 = phase_one_sum(network, bundle, x1, np.zeros(network.n))
    return z1, solution.objective


def heuristic_strategies(network: Network, bundle: CentralityBundle, kg: float, seed: int = 42) -> list[SingleCampSolution]:
    """Cheaper baselines: high-degree node, greedy phase-one pick, random pair."""
    theta = network.theta
    out = []

    hub = int(np.argmax(network.degree()))
    for label, frac in (("high_degree_25_75", 0.25), ("high_degree_50_50", 0.5)):
        k1 = frac * kg
        obj = float(pair_objective(bundle, theta, kg, hub, hub, k1))
        out.append(SingleCampSolution(hub, hub, k1, kg - k1, obj, label))
    k1, k2, obj = optimal_split_for_pair(bundle, theta, kg, hub, hub)
    out.append(SingleCampSolution(hub, hub, k1, k2, obj, "high_degree_optimal"))

    # greedy: pick alpha ignoring phase two, then scan beta
    alpha = int(np.argmax(theta * (1.0 + bundle.c) * bundle.s))
    k1s, objs = _best_split(bundle, theta, float(kg), alpha, np.arange(network.n))
    beta = int(np.argmax(objs))
    out.append(SingleCampSolution(alpha, beta, float(k1s[beta]), kg - float(k1s[beta]), float(objs[beta]), "greedy"))

    rng = np.random.default_rng(seed)
    a, b = (int(v) for v in rng.integers(0, network.n, size=2))
    k1, k2, obj = optimal_split_for_pair(bundle, theta, kg, a, b)
    out.append(SingleCampSolution(a, b, k1, k2, obj, "random_pair"))
    return out
