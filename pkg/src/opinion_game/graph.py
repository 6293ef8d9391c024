"""Network loading, construction and validation.

A :class:`Network` bundles the directed influence weights ``W`` (row ``i``
holds the weights node ``i`` puts on its neighbours) with the per-node
self-weight ``w0``, camp weightage ``theta`` and initial bias ``z0``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import GraphFormatError, ValidationError

logger = logging.getLogger(__name__)

#: Shrink factor keeping constructed rows strictly substochastic.
EDGE_SHRINK = 1e-6

_COMMENT_PREFIXES = ("#", "%")
_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class RawGraph:
    """Unweighted arc list over densely numbered nodes ``0..n-1``."""

    n: int
    arcs: np.ndarray  # shape (m, 2), int64, sorted and unique
    node_ids: tuple[int, ...]  # original label of each dense index

    @property
    def num_arcs(self) -> int:
        return int(self.arcs.shape[0])

    def out_degree(self) -> np.ndarray:
        return np.bincount(self.arcs[:, 0], minlength=self.n)

    def in_degree(self) -> np.ndarray:
        return np.bincount(self.arcs[:, 1], minlength=self.n)


@dataclass(frozen=True, eq=False)
class Network:
    """Weighted directed network with per-node opinion-model parameters."""

    W: sp.csr_matrix
    w0: np.ndarray
    theta: np.ndarray
    z0: np.ndarray
    node_ids: tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = self.W.shape[0]
        if self.W.shape != (n, n):
            raise ValidationError(f"weight matrix must be square, got {self.W.shape}")
        for name in ("w0", "theta", "z0"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n,):
                raise ValidationError(f"{name} must have length {n}, got shape {arr.shape}")
            object.__setattr__(self, name, arr)
        if not self.node_ids:
            object.__setattr__(self, "node_ids", tuple(range(n)))

    @property
    def n(self) -> int:
        return self.W.shape[0]

    def degree(self) -> np.ndarray:
        """Number of distinct neighbours (in or out) of every node."""
        pattern = (self.W != 0).astype(np.int8)
        pattern = ((pattern + pattern.T) != 0).tocsr()
        return np.diff(pattern.indptr)

    def with_bias(self, z0) -> "Network":
        """Copy of this network with a new initial bias vector (or scalar)."""
        z0 = np.broadcast_to(np.asarray(z0, dtype=float), (self.n,)).copy()
        return Network(self.W, self.w0, self.theta, z0, self.node_ids)


def _parse_int(token: str, path, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"{path}:{lineno}: expected an integer node id, got {token!r}") from None


def _data_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith(_COMMENT_PREFIXES):
                continue
            yield lineno, stripped.split()


def load_edge_list(path, directed: bool = False) -> RawGraph:
    """Read a whitespace-separated edge list.

    Node ids may be arbitrary integers; they are renumbered densely in
    increasing order. Undirected input yields both arcs of every edge.
    Self-loops and duplicate edges are dropped.
    """
    edges = []
    for lineno, tokens in _data_lines(path):
        if len(tokens) < 2:
            raise GraphFormatError(f"{path}:{lineno}: expected two node ids, got {' '.join(tokens)!r}")
        u = _parse_int(tokens[0], path, lineno)
        v = _parse_int(tokens[1], path, lineno)
        edges.append((u, v))
    if not edges:
        raise GraphFormatError(f"{path}: graph has no edges")
    return raw_graph_from_edges(edges, directed=directed)


def raw_graph_from_edges(edges, directed: bool = False) -> RawGraph:
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size == 0:
        raise GraphFormatError("graph has no edges")
    ids, dense = np.unique(edges, return_inverse=True)
    dense = dense.reshape(-1, 2)
    if not directed:
        dense = np.vstack([dense, dense[:, ::-1]])
    loops = dense[:, 0] == dense[:, 1]
    if loops.any():
        logger.debug("dropping %d self-loop arcs", int(loops.sum()))
        dense = dense[~loops]
    arcs = np.unique(dense, axis=0) if dense.size else dense.reshape(0, 2)
    return RawGraph(n=len(ids), arcs=arcs, node_ids=tuple(int(i) for i in ids))


def karate_path() -> Path:
    """Path of the bundled Zachary karate club edge list."""
    return Path(str(resources.files("opinion_game") / "data" / "karate.edgelist"))


def load_karate() -> RawGraph:
    return load_edge_list(karate_path(), directed=False)


def build_network(raw: RawGraph, w0_value: float, theta_value: float, z0_value: float = 0.0) -> Network:
    """Assign uniform parameters and split the residual mass over out-neighbours.

    Every node with out-degree ``d`` gives each out-neighbour the weight
    ``(1 - w0 - theta) * (1 - EDGE_SHRINK) / d``.
    """
    if not 0.0 <= w0_value <= 1.0:
        raise ValidationError(f"w0 must lie in [0, 1], got {w0_value}")
    if theta_value < 0.0:
        raise ValidationError(f"theta must be nonnegative, got {theta_value}")
    if w0_value + theta_value > 1.0 + _TOL:
        raise ValidationError(f"w0 + theta must not exceed 1, got {w0_value + theta_value}")
    if not -1.0 <= z0_value <= 1.0:
        raise ValidationError(f"z0 must lie in [-1, 1], got {z0_value}")

    n = raw.n
    residual = max(1.0 - w0_value - theta_value, 0.0) * (1.0 - EDGE_SHRINK)
    out_deg = raw.out_degree()
    rows, cols = raw.arcs[:, 0], raw.arcs[:, 1]
    data = residual / out_deg[rows]
    W = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
    W.eliminate_zeros()
    return Network(
        W=W,
        w0=np.full(n, float(w0_value)),
        theta=np.full(n, float(theta_value)),
        z0=np.full(n, float(z0_value)),
        node_ids=raw.node_ids,
    )


def load_weighted_network(path) -> Network:
    """Read an explicit weighted network.

    Layout: a header line holding ``n``; edge lines ``i j w``; node lines
    ``i w0 theta z0``. Node indices are ``0..n-1``; every node needs a
    parameter line.
    """
    lines = iter(_data_lines(path))
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise GraphFormatError(f"{path}: empty file") from None
    if len(header) != 1:
        raise GraphFormatError(f"{path}:{lineno}: header must be the node count")
    n = _parse_int(header[0], path, lineno)
    if n <= 0:
        raise GraphFormatError(f"{path}:{lineno}: node count must be positive")

    rows, cols, vals = [], [], []
    params = {}
    for lineno, tokens in lines:
        try:
            if len(tokens) == 3:
                i, j = _parse_int(tokens[0], path, lineno), _parse_int(tokens[1], path, lineno)
                rows.append(i)
                cols.append(j)
                vals.append(float(tokens[2]))
                idx = (i, j)
            elif len(tokens) == 4:
                i = _parse_int(tokens[0], path, lineno)
                params[i] = tuple(float(t) for t in tokens[1:])
                idx = (i,)
            else:
                raise GraphFormatError(f"{path}:{lineno}: expected 'i j w' or 'i w0 theta z0'")
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"{path}:{lineno}: {exc}") from None
        if any(not 0 <= k < n for k in idx):
            raise GraphFormatError(f"{path}:{lineno}: node index out of range 0..{n - 1}")

    missing = [i for i in range(n) if i not in params]
    if missing:
        raise GraphFormatError(f"{path}: missing parameter line for node(s) {missing[:10]}")
    p = np.array([params[i] for i in range(n)])
    W = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    W.sum_duplicates()
    return Network(W=W, w0=p[:, 0], theta=p[:, 1], z0=p[:, 2])


def validate(network: Network) -> list[str]:
    """List every violated model invariant; empty means the network is valid."""
    violations = []
    W = network.W.tocsr()
    abs_rows = np.asarray(abs(W).sum(axis=1)).ravel()
    signed_rows = np.asarray(W.sum(axis=1)).ravel()
    diag = W.diagonal()
    for i in range(network.n):
        if abs_rows[i] >= 1.0:
            violations.append(f"substochasticity row {i}: sum |w| = {abs_rows[i]:.12g} >= 1")
        if diag[i] != 0.0:
            violations.append(f"self-loop node {i}: w[{i}][{i}] = {diag[i]:.12g}")
        if not 0.0 <= network.w0[i] <= 1.0:
            violations.append(f"self-weight range node {i}: w0 = {network.w0[i]:.12g}")
        if network.theta[i] < 0.0:
            violations.append(f"camp weight range node {i}: theta = {network.theta[i]:.12g}")
        if not -1.0 <= network.z0[i] <= 1.0:
            violations.append(f"bias range node {i}: z0 = {network.z0[i]:.12g}")
        total = network.w0[i] + network.theta[i] + signed_rows[i]
        if total > 1.0 + _TOL:
            violations.append(f"convex combination row {i}: w0 + theta + sum w = {total:.12g} > 1")
    return violations


def game_assumption_violations(network: Network) -> list[str]:
    """Conditions under which the two-camp split game is convex-concave."""
    violations = []
    coo = network.W.tocoo()
    neg_rows = np.unique(coo.row[coo.data < 0])
    violations += [f"negative edge weight in row {i}" for i in neg_rows]
    violations += [f"negative self-weight node {i}" for i in np.flatnonzero(network.w0 < 0)]
    violations += [f"negative camp weight node {i}" for i in np.flatnonzero(network.theta < 0)]
    violations += [f"bias range node {i}" for i in np.flatnonzero(np.abs(network.z0) > 1)]
    return violations
