"""Discrete- and continuous-time voter model via the graphical construction.

A realization of the dynamics is a sequence of directed-edge selections; at
each step the target vertex of the selected edge copies the opinion of the
source vertex.  Consensus, backward coalescing walkers, dictator tracing and
Poisson time-stamp sampling all live here.

Positions in edge sequences are 1-based in every public signature (position
``k`` is the ``k``-th selection); the backing arrays are 0-based.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from ._kernels import backward_map_scan, consensus_scan
from .graph import Graph

DEFAULT_STEP_CAP = 10**9

_CHUNK = 512


class StreamExhausted(RuntimeError):
    """A finite edge window ran out before the operation completed."""


class StepCapExceeded(RuntimeError):
    """The safety cap on simulated steps was hit (should never happen)."""


# ---------------------------------------------------------------------------
# opinions

def sample_initial(g: Graph, p: float, rng: np.random.Generator) -> np.ndarray:
    """Draw i.i.d. Bernoulli(p) opinions, one bit per vertex."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"initial-opinion probability must be in (0,1), got {p}")
    return (rng.random(g.n) < p).astype(np.uint8)


def step(cfg: np.ndarray, g: Graph, edge_id: int) -> np.ndarray:
    """Apply one voter update for the directed edge ``edge_id``.

    Returns a new configuration; ``cfg`` is left untouched.
    """
    if not 0 <= edge_id < g.num_directed_edges:
        raise IndexError(f"directed edge index {edge_id} out of range")
    x, y = g.directed_edges[edge_id]
    out = cfg.copy()
    out[y] = cfg[x]
    return out


def is_consensus(cfg: np.ndarray) -> bool:
    return bool((cfg == cfg[0]).all())


# ---------------------------------------------------------------------------
# edge sequences

class EdgeSequence:
    """A source of directed-edge selections, materializable prefix by prefix.

    ``prefix(k)`` returns a read-only array of the first ``k`` selections;
    finite sources may return fewer entries when exhausted.
    """

    graph: Graph

    def prefix(self, k: int) -> np.ndarray:
        raise NotImplementedError

    def edge(self, pos: int) -> int:
        """The selection at 1-based position ``pos``."""
        buf = self.prefix(pos)
        if len(buf) < pos:
            raise StreamExhausted(f"no selection at position {pos}")
        return int(buf[pos - 1])


class EdgeStream(EdgeSequence):
    """Unbounded lazily-sampled i.i.d. uniform directed-edge selections.

    Backed by a counter-based generator, so the selection at any position is
    reproducible from the seed material alone; prefixes are buffered on
    demand.
    """

    def __init__(self, graph: Graph, rng: np.random.Generator):
        self.graph = graph
        self._rng = rng
        self._buf = np.empty(0, dtype=np.int64)

    def prefix(self, k: int) -> np.ndarray:
        if k > len(self._buf):
            if self.graph.num_directed_edges == 0:
                raise StreamExhausted("graph has no edges to select")
            grow = max(k, 2 * len(self._buf), _CHUNK)
            extra = self._rng.integers(
                0, self.graph.num_directed_edges, size=grow - len(self._buf),
                dtype=np.int64,
            )
            self._buf = np.concatenate([self._buf, extra])
        return self._buf[:k]

    def window(self, k: int) -> "EdgeWindow":
        return EdgeWindow(self.graph, self.prefix(k).copy())


@dataclass
class EdgeWindow(EdgeSequence):
    """A finite materialized prefix of an edge-selection sequence."""

    graph: Graph
    selections: np.ndarray

    def __post_init__(self):
        self.selections = np.asarray(self.selections, dtype=np.int64)
        if len(self.selections) and (
            self.selections.min() < 0
            or self.selections.max() >= self.graph.num_directed_edges
        ):
            raise IndexError("selection index out of range for graph")

    def __len__(self) -> int:
        return len(self.selections)

    def prefix(self, k: int) -> np.ndarray:
        return self.selections[: min(k, len(self.selections))]


class SwappedSequence(EdgeSequence):
    """The base sequence with positions ``pos`` and ``pos+1`` exchanged."""

    def __init__(self, base: EdgeSequence, pos: int):
        if pos < 1:
            raise IndexError(f"swap position must be >= 1, got {pos}")
        self.base = base
        self.graph = base.graph
        self.pos = pos

    def prefix(self, k: int) -> np.ndarray:
        if k < self.pos:
            return self.base.prefix(k)
        buf = self.base.prefix(max(k, self.pos + 1))
        if len(buf) <= self.pos:
            raise StreamExhausted(f"window too short to swap at {self.pos}")
        out = buf[: min(k, len(buf))].copy()
        out[self.pos - 1] = buf[self.pos]
        if len(out) > self.pos:
            out[self.pos] = buf[self.pos - 1]
        return out


class MovedSequence(EdgeSequence):
    """The base sequence with the entry at ``i`` relocated to position ``j``."""

    def __init__(self, base: EdgeSequence, i: int, j: int):
        if i < 1 or j < 1:
            raise IndexError(f"positions must be >= 1, got ({i},{j})")
        self.base = base
        self.graph = base.graph
        self.i = i
        self.j = j

    def prefix(self, k: int) -> np.ndarray:
        i, j = self.i, self.j
        if i == j or k < min(i, j):
            return self.base.prefix(k)
        buf = self.base.prefix(max(k, i, j))
        if len(buf) < max(i, j):
            raise StreamExhausted(f"window too short to move {i} to {j}")
        length = min(k, len(buf))
        out = buf[:length].copy()
        if i < j:
            upper = min(length, j - 1)
            out[i - 1:upper] = buf[i:upper + 1]
            if length >= j:
                out[j - 1] = buf[i - 1]
        else:
            out[j - 1] = buf[i - 1]
            upper = min(length, i)
            out[j:upper] = buf[j - 1:upper - 1]
        return out


class PermutedPrefixSequence(EdgeSequence):
    """The base sequence with its first ``K`` positions permuted.

    ``mapping`` is a 0-based permutation array: output position ``k`` reads
    base position ``mapping[k-1] + 1``; positions beyond ``K`` pass through.
    """

    def __init__(self, base: EdgeSequence, mapping: np.ndarray):
        self.base = base
        self.graph = base.graph
        self.mapping = mapping
        self._head = None

    def prefix(self, k: int) -> np.ndarray:
        kk = len(self.mapping)
        if self._head is None:
            self._head = self.base.prefix(kk)[self.mapping].copy()
        if k <= kk:
            return self._head[:k]
        tail = self.base.prefix(k)[kk:]
        return np.concatenate([self._head, tail])


# ---------------------------------------------------------------------------
# consensus and duality

@dataclass(frozen=True)
class ConsensusResult:
    consensus_bit: int
    steps_taken: int


def run_to_consensus(cfg: np.ndarray, edges: EdgeSequence,
                     cap: int = DEFAULT_STEP_CAP) -> ConsensusResult:
    """Run the voter chain until all opinions agree.

    Returns the common bit and the 1-based position of the first selection
    after which the configuration is constant (0 if it starts constant).
    Raises :class:`StreamExhausted` if a finite window ends first.
    """
    g = edges.graph
    bits = np.asarray(cfg, dtype=np.uint8).copy()
    ones = int(bits.sum())
    if ones == 0 or ones == g.n:
        return ConsensusResult(int(bits[0]), 0)
    src = g.edge_src
    dst = g.edge_dst
    done = 0
    want = _CHUNK
    while True:
        sel = edges.prefix(want)
        absorbed, pos, ones = consensus_scan(bits, ones, sel, src, dst,
                                             done, len(sel))
        if absorbed:
            return ConsensusResult(1 if ones == g.n else 0, pos)
        done = len(sel)
        if len(sel) < want:
            raise StreamExhausted(
                f"window of {len(sel)} selections ended before consensus"
            )
        if done >= cap:
            raise StepCapExceeded(f"no consensus within {cap} steps")
        want *= 2


def trace_dictator(edges: EdgeWindow, horizon: int) -> int | None:
    """Trace one backward walker per vertex from ``horizon`` down to 0.

    At the backward step for selection ``(x, y)`` every walker sitting at
    ``y`` moves to ``x``.  Returns the common time-0 vertex if all walkers
    merged, else ``None``.
    """
    if horizon > len(edges):
        raise ValueError(f"horizon {horizon} exceeds window of {len(edges)}")
    g = edges.graph
    pos = np.arange(g.n, dtype=np.int64)
    sel = edges.selections
    src = g.edge_src
    dst = g.edge_dst
    for k in range(horizon, 0, -1):
        e = sel[k - 1]
        pos[pos == dst[e]] = src[e]
    first = pos[0]
    return int(first) if (pos == first).all() else None


def _coalesce_suffix(edges: EdgeSequence, start: int,
                     cap: int) -> tuple[int, int]:
    """Merge backward walkers over the suffix after position ``start``.

    Returns ``(vertex, steps)`` where ``steps`` is the number of suffix
    selections consumed at the moment all walkers merge.
    """
    g = edges.graph
    mapping = np.arange(g.n, dtype=np.int64)
    counts = np.ones(g.n, dtype=np.int64)
    src = g.edge_src
    dst = g.edge_dst
    done = start
    want = start + _CHUNK
    while True:
        sel = edges.prefix(want)
        coalesced, pos = backward_map_scan(mapping, counts, sel, src, dst,
                                           done, len(sel))
        if coalesced:
            return int(mapping[0]), pos - start
        done = len(sel)
        if len(sel) < want:
            raise StreamExhausted(
                f"window of {len(sel)} selections ended before coalescence"
            )
        if done - start >= cap:
            raise StepCapExceeded(f"no coalescence within {cap} steps")
        want *= 2


def dictator_of_suffix(edges: EdgeSequence, ell: int = 0,
                       cap: int = DEFAULT_STEP_CAP) -> int:
    """The vertex whose opinion at position ``ell`` decides the consensus.

    Runs backward coalescing walkers through the selections after position
    ``ell`` with increasing horizons until they merge.
    """
    vertex, _ = _coalesce_suffix(edges, ell, cap)
    return vertex


def coalescence_steps(edges: EdgeSequence,
                      cap: int = DEFAULT_STEP_CAP) -> int:
    """Smallest horizon from which all backward walkers merge by position 0.

    Merging is monotone in the horizon, so the first merge point of the
    incremental scan is that minimum.
    """
    _, steps = _coalesce_suffix(edges, 0, cap)
    return steps


# ---------------------------------------------------------------------------
# Poisson time stamps

@dataclass
class TimedSelections:
    """A finite realization of timed edge selections, sorted by time."""

    edge_ids: np.ndarray
    times: np.ndarray
    horizon: float

    def __post_init__(self):
        self.edge_ids = np.asarray(self.edge_ids, dtype=np.int64)
        self.times = np.asarray(self.times, dtype=np.float64)
        if len(self.edge_ids) != len(self.times):
            raise ValueError("edge/time arrays differ in length")
        if len(self.times):
            if (np.diff(self.times) <= 0).any():
                raise ValueError("times must be strictly increasing")
            if self.times[0] < 0 or self.times[-1] > self.horizon:
                raise ValueError("times must lie in [0, horizon]")

    @property
    def count(self) -> int:
        return len(self.times)

    def count_in_window(self, ell: float) -> int:
        """Number of selections with time stamp at most ``ell``."""
        return int(np.searchsorted(self.times, ell, side="right"))

    def restrict(self, ell: float) -> list[tuple[float, int]]:
        """The (time, edge) pairs with time at most ``ell``, in time order."""
        k = self.count_in_window(ell)
        return list(zip(self.times[:k].tolist(), self.edge_ids[:k].tolist()))

    def window(self, graph: Graph) -> EdgeWindow:
        return EdgeWindow(graph, self.edge_ids.copy())


def sample_ppp(g: Graph, m: float, rng: np.random.Generator) -> TimedSelections:
    """Sample timed selections on ``[0, m]`` with rate one per directed edge.

    The total count is Poisson(2|E|m); times are uniform given the count
    (resampled on the null event of a tie) and edges are uniform.
    """
    if m <= 0:
        raise ValueError(f"horizon must be positive, got {m}")
    rate = g.num_directed_edges
    count = int(rng.poisson(rate * m))
    times = np.sort(rng.uniform(0.0, m, size=count))
    while count > 1 and (np.diff(times) <= 0).any():
        times = np.sort(rng.uniform(0.0, m, size=count))
    edge_ids = (
        rng.integers(0, rate, size=count, dtype=np.int64)
        if count else np.empty(0, dtype=np.int64)
    )
    return TimedSelections(edge_ids=edge_ids, times=times, horizon=m)


def timed_selections_to_csv(ts: TimedSelections, g: Graph) -> str:
    """Render timed selections as CSV rows (index, edge_src, edge_dst, time)."""
    out = io.StringIO()
    out.write("index,edge_src,edge_dst,time\n")
    for k in range(ts.count):
        e = ts.edge_ids[k]
        x, y = g.directed_edges[e]
        out.write(f"{k + 1},{x},{y},{ts.times[k]:.17g}\n")
    return out.getvalue()
