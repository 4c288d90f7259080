"""Finite connected graphs: construction, generators, and exact hitting times.

Graphs are simple (no self-loops, no parallel edges), undirected, and
connected.  Vertices are the integers ``0..n-1``.  Every undirected edge
``{x, y}`` contributes two rows to a fixed directed-edge table, so that an
edge-selection sequence is just an array of small integers indexing that
table.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve


class GraphSpecError(ValueError):
    """Raised for malformed graph specs or specs that cannot be realized."""


_RESAMPLE_CAP = 10_000


@dataclass(frozen=True)
class Graph:
    """Immutable simple connected graph with an indexed directed-edge table.

    Attributes
    ----------
    n : int
        Vertex count.
    undirected_edges : np.ndarray
        Shape ``(m, 2)``, each row an unordered pair ``x < y``.
    directed_edges : np.ndarray
        Shape ``(2m, 2)``; rows ``2i`` and ``2i+1`` are ``(x, y)`` and
        ``(y, x)`` for undirected edge ``i``.
    degree : np.ndarray
        Per-vertex degree.
    max_degree : int
    """

    n: int
    undirected_edges: np.ndarray
    directed_edges: np.ndarray
    degree: np.ndarray
    max_degree: int
    spec: str = ""
    # CSR adjacency over directed edges, used by simulation kernels
    adj_indptr: np.ndarray = field(repr=False, default=None)
    adj_neighbors: np.ndarray = field(repr=False, default=None)

    @property
    def num_edges(self) -> int:
        return len(self.undirected_edges)

    @property
    def num_directed_edges(self) -> int:
        return len(self.directed_edges)

    @property
    def edge_src(self) -> np.ndarray:
        return self.directed_edges[:, 0]

    @property
    def edge_dst(self) -> np.ndarray:
        return self.directed_edges[:, 1]


def _from_edge_list(n: int, pairs: list[tuple[int, int]], spec: str) -> Graph:
    seen = set()
    for x, y in pairs:
        if x == y:
            raise GraphSpecError(f"self-loop at vertex {x} in {spec!r}")
        if not (0 <= x < n and 0 <= y < n):
            raise GraphSpecError(f"vertex out of range in {spec!r}: ({x},{y})")
        key = (min(x, y), max(x, y))
        if key in seen:
            raise GraphSpecError(f"parallel edge {key} in {spec!r}")
        seen.add(key)
    und = np.array(sorted(seen), dtype=np.int64).reshape(-1, 2)
    directed = np.empty((2 * len(und), 2), dtype=np.int64)
    if len(und):
        directed[0::2] = und
        directed[1::2] = und[:, ::-1]
    degree = np.zeros(n, dtype=np.int64)
    for x, y in und:
        degree[x] += 1
        degree[y] += 1
    if not _connected(n, und):
        raise GraphSpecError(f"graph {spec!r} is not connected")
    order = np.argsort(directed[:, 0], kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, directed[:, 0] + 1, 1)
    indptr = np.cumsum(indptr)
    neighbors = directed[order, 1].copy()
    return Graph(
        n=n,
        undirected_edges=und,
        directed_edges=directed,
        degree=degree,
        max_degree=int(degree.max()) if n else 0,
        spec=spec,
        adj_indptr=indptr,
        adj_neighbors=neighbors,
    )


def _connected(n: int, und: np.ndarray) -> bool:
    if n <= 1:
        return True
    if len(und) == 0:
        return False
    adj: list[list[int]] = [[] for _ in range(n)]
    for x, y in und:
        adj[x].append(y)
        adj[y].append(x)
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                stack.append(w)
    return bool(seen.all())


def _complete(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _star(n: int) -> list[tuple[int, int]]:
    return [(0, i) for i in range(1, n)]


def _cycle(n: int) -> list[tuple[int, int]]:
    if n < 3:
        raise GraphSpecError(f"cycle needs at least 3 vertices, got {n}")
    return [(i, (i + 1) % n) for i in range(n)]


def _path(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def _random_regular(d: int, n: int, seed: int) -> list[tuple[int, int]]:
    # pairing model with rejection of loops and multi-edges
    if d < 0 or d >= n or (d * n) % 2 != 0:
        raise GraphSpecError(f"no {d}-regular graph on {n} vertices")
    rng = np.random.Generator(np.random.Philox(key=seed))
    stubs = np.repeat(np.arange(n), d)
    for _ in range(_RESAMPLE_CAP):
        perm = rng.permutation(stubs)
        pairs = perm.reshape(-1, 2)
        if (pairs[:, 0] == pairs[:, 1]).any():
            continue
        keys = {(min(x, y), max(x, y)) for x, y in pairs}
        if len(keys) != len(pairs):
            continue
        cand = sorted(keys)
        if _connected(n, np.array(cand, dtype=np.int64)):
            return cand
    raise GraphSpecError(
        f"regular:{d}:{n} not realized within {_RESAMPLE_CAP} attempts"
    )


def _erdos_renyi(n: int, p: float, seed: int) -> list[tuple[int, int]]:
    # resample the whole graph until connected; exact conditional law
    if not (0.0 < p <= 1.0):
        raise GraphSpecError(f"er edge probability must be in (0,1], got {p}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    iu, ju = np.triu_indices(n, k=1)
    for _ in range(_RESAMPLE_CAP):
        mask = rng.random(len(iu)) < p
        pairs = list(zip(iu[mask].tolist(), ju[mask].tolist()))
        if pairs and _connected(n, np.array(pairs, dtype=np.int64)):
            return pairs
        if n == 1:
            return []
    raise GraphSpecError(
        f"er:{n}:{p} produced no connected sample in {_RESAMPLE_CAP} attempts"
    )


def _read_edge_file(path: str) -> Graph:
    pairs = []
    try:
        with open(path) as fh:
            for line in fh:
                tokens = line.split()
                if not tokens:
                    continue
                if len(tokens) != 2:
                    raise GraphSpecError(f"bad edge line in {path!r}: {line!r}")
                pairs.append((int(tokens[0]), int(tokens[1])))
    except OSError as exc:
        raise GraphSpecError(f"cannot read edge list {path!r}: {exc}") from exc
    except ValueError as exc:
        raise GraphSpecError(f"non-integer vertex in {path!r}") from exc
    if not pairs:
        raise GraphSpecError(f"edge list {path!r} is empty")
    n = max(max(x, y) for x, y in pairs) + 1
    return _from_edge_list(n, pairs, f"file:{path}")


def build_graph(spec: str) -> Graph:
    """Build a graph from a spec string.

    Grammar: ``complete:N | star:N | cycle:N | path:N | regular:D:N:SEED |
    er:N:P:SEED | file:PATH``.
    """
    head, sep, rest = spec.partition(":")
    if not sep:
        raise GraphSpecError(f"malformed graph spec {spec!r}")
    try:
        if head == "complete":
            n = _parse_size(rest, spec)
            return _from_edge_list(n, _complete(n), spec)
        if head == "star":
            n = _parse_size(rest, spec)
            return _from_edge_list(n, _star(n), spec)
        if head == "cycle":
            n = _parse_size(rest, spec)
            return _from_edge_list(n, _cycle(n), spec)
        if head == "path":
            n = _parse_size(rest, spec)
            return _from_edge_list(n, _path(n), spec)
        if head == "regular":
            d_s, n_s, seed_s = rest.split(":")
            n = _parse_size(n_s, spec)
            pairs = _random_regular(int(d_s), n, int(seed_s))
            return _from_edge_list(n, pairs, spec)
        if head == "er":
            n_s, p_s, seed_s = rest.split(":")
            n = _parse_size(n_s, spec)
            pairs = _erdos_renyi(n, float(p_s), int(seed_s))
            return _from_edge_list(n, pairs, spec)
        if head == "file":
            return _read_edge_file(rest)
    except GraphSpecError:
        raise
    except ValueError as exc:
        raise GraphSpecError(f"malformed graph spec {spec!r}: {exc}") from exc
    raise GraphSpecError(f"unknown graph family {head!r} in {spec!r}")


def _parse_size(text: str, spec: str) -> int:
    n = int(text)
    if n < 1:
        raise GraphSpecError(f"vertex count must be >= 1 in {spec!r}")
    return n


def expected_hitting_times(g: Graph) -> tuple[np.ndarray, float]:
    """Expected hitting times of the discrete-time simple random walk.

    Returns ``(H, t_hit)`` where ``H[x, y]`` solves
    ``H[x, y] = 1 + mean over neighbors z of x of H[z, y]`` with
    ``H[y, y] = 0``, and ``t_hit`` is the maximum entry.
    """
    n = g.n
    if n == 1:
        return np.zeros((1, 1)), 0.0
    P = np.zeros((n, n))
    for x, y in g.undirected_edges:
        P[x, y] = 1.0
        P[y, x] = 1.0
    P /= g.degree[:, None]
    H = np.zeros((n, n))
    eye = np.eye(n)
    for y in range(n):
        A = eye - P
        A[y, :] = 0.0
        A[y, y] = 1.0
        b = np.ones(n)
        b[y] = 0.0
        H[:, y] = solve(A, b)
    return H, float(H.max())


@dataclass(frozen=True)
class HittingBoundResult:
    t_hit: float
    bound: float
    satisfied: bool


def check_hitting_bound(g: Graph) -> HittingBoundResult:
    """Check the maximum expected hitting time against ``2(n-1)|E|``."""
    _, t_hit = expected_hitting_times(g)
    bound = 2.0 * (g.n - 1) * g.num_edges
    return HittingBoundResult(t_hit=t_hit, bound=bound, satisfied=t_hit <= bound)
