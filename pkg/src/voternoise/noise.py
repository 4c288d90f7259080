"""Conservative perturbation operators.

Three families: the interchange process on sequence positions (adjacent
entries trade places at a fixed rate), reflected-Gaussian displacement of
Poisson time stamps, and interchange dynamics on the initial opinions
themselves.  All of them preserve the marginal law of what they perturb.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import apply_transpositions, exclusion_swaps
from .graph import Graph
from .voter import EdgeWindow, TimedSelections


@dataclass(frozen=True)
class NoiseParams:
    """Noise settings: ``t`` interchange duration, ``swap_rate`` per adjacent
    pair, ``s`` Gaussian displacement variance, ``m`` truncation horizon and
    ``ell`` observation window."""

    t: float = 0.0
    swap_rate: float = 1.0
    s: float = 0.0
    ell: float | None = None
    m: float | None = None

    def __post_init__(self):
        if self.t < 0 or self.s < 0 or self.swap_rate < 0:
            raise ValueError("noise durations and rates must be nonnegative")
        if self.ell is not None and self.ell < 0:
            raise ValueError("observation window must be nonnegative")
        if self.m is not None and self.ell is not None and self.ell > self.m:
            raise ValueError("observation window cannot exceed horizon")


@dataclass
class SwapPermutation:
    """Outcome of the interchange process on window positions ``1..K``.

    ``mapping`` is 0-based: output position ``k`` holds the entry that
    started at position ``mapping[k-1] + 1``.  ``boundary_touched`` records
    that a ring fired on the pair straddling the right window edge (such
    rings are not applied).
    """

    mapping: np.ndarray
    swap_count: int
    boundary_touched: bool

    def __len__(self) -> int:
        return len(self.mapping)

    @property
    def is_identity(self) -> bool:
        return self.swap_count == 0

    def inverse(self) -> np.ndarray:
        inv = np.empty_like(self.mapping)
        inv[self.mapping] = np.arange(len(self.mapping), dtype=np.int64)
        return inv


def interchange_evolve(window_len: int, t: float, swap_rate: float,
                       rng: np.random.Generator) -> SwapPermutation:
    """Run the interchange process for duration ``t`` on ``window_len`` slots.

    Each adjacent pair carries an independent Poisson(swap_rate * t) clock;
    rings transpose the pair's current contents in time order.  Event-driven
    form: the total ring count over the window's pairs plus the boundary
    pair is Poisson(swap_rate * t * window_len) with uniform pair positions.
    """
    if window_len < 1:
        raise ValueError("window length must be at least 1")
    if t < 0 or swap_rate <= 0:
        raise ValueError("need t >= 0 and swap_rate > 0")
    mapping = np.arange(window_len, dtype=np.int64)
    if t == 0:
        return SwapPermutation(mapping, 0, False)
    count = int(rng.poisson(swap_rate * t * window_len))
    pairs = rng.integers(0, window_len, size=count, dtype=np.int64)
    applied, boundary = apply_transpositions(mapping, pairs)
    return SwapPermutation(mapping, int(applied), bool(boundary))


def apply_permutation(window: EdgeWindow, perm: SwapPermutation) -> EdgeWindow:
    """Reorder a window's selections by the interchange permutation."""
    if len(window) != len(perm):
        raise ValueError(
            f"window of {len(window)} does not match permutation of {len(perm)}"
        )
    return EdgeWindow(window.graph, window.selections[perm.mapping].copy())


def adjacent_swap(window: EdgeWindow, ell: int) -> EdgeWindow:
    """Exchange the entries at positions ``ell`` and ``ell + 1``."""
    if not 1 <= ell < len(window):
        raise IndexError(f"swap position {ell} out of range for {len(window)}")
    sel = window.selections.copy()
    sel[ell - 1], sel[ell] = sel[ell], sel[ell - 1]
    return EdgeWindow(window.graph, sel)


def move_entry(window: EdgeWindow, i: int, j: int) -> EdgeWindow:
    """Relocate the entry at position ``i`` to position ``j``.

    For ``j > i`` the entries strictly between slide one slot left; the
    symmetric shift applies for ``j < i``; ``i == j`` is the identity.
    """
    k = len(window)
    if not (1 <= i <= k and 1 <= j <= k):
        raise IndexError(f"positions ({i},{j}) out of range for {k}")
    sel = window.selections
    if i == j:
        return EdgeWindow(window.graph, sel.copy())
    moved = np.insert(np.delete(sel, i - 1), j - 1, sel[i - 1])
    return EdgeWindow(window.graph, moved)


def reflect(x, m: float):
    """Fold a real number into ``[0, m]`` by reflection at both endpoints.

    Even in ``x``; the identity on ``[0, m)``.  Accepts scalars or arrays.
    """
    if m <= 0:
        raise ValueError(f"horizon must be positive, got {m}")
    arr = np.asarray(x, dtype=np.float64)
    if not np.isfinite(arr).all():
        raise ValueError("reflection argument must be finite")
    r = np.abs(arr) % (2.0 * m)
    out = np.where(r < m, r, 2.0 * m - r)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def resort_times(edge_ids: np.ndarray, new_times: np.ndarray,
                 horizon: float) -> TimedSelections | None:
    """Sort (edge, time) pairs by the new times; ``None`` if any tie."""
    order = np.argsort(new_times, kind="stable")
    sorted_times = new_times[order]
    if len(sorted_times) > 1 and (np.diff(sorted_times) <= 0).any():
        return None
    return TimedSelections(edge_ids[order].copy(), sorted_times, horizon)


def brownian_noise(ts: TimedSelections, s: float,
                   rng: np.random.Generator) -> TimedSelections:
    """Displace each time stamp by an independent N(0, s), folded back into
    ``[0, m]`` by two-sided reflection, then re-sort.

    Only the displacement endpoint matters, so a single Gaussian per stamp
    is exact.  ``s = 0`` is the identity.
    """
    if s < 0:
        raise ValueError(f"noise variance must be nonnegative, got {s}")
    if s == 0 or ts.count == 0:
        return TimedSelections(ts.edge_ids.copy(), ts.times.copy(), ts.horizon)
    sigma = math.sqrt(s)
    while True:
        new_times = reflect(ts.times + rng.normal(0.0, sigma, ts.count),
                            ts.horizon)
        out = resort_times(ts.edge_ids, new_times, ts.horizon)
        if out is not None:
            return out


def brownian_noise_halfline(ts: TimedSelections, s: float,
                            rng: np.random.Generator) -> TimedSelections:
    """Same displacement reflected at the origin only; stamps may exceed the
    original horizon, so the result carries an unbounded one."""
    if s < 0:
        raise ValueError(f"noise variance must be nonnegative, got {s}")
    if s == 0 or ts.count == 0:
        return TimedSelections(ts.edge_ids.copy(), ts.times.copy(), math.inf)
    sigma = math.sqrt(s)
    while True:
        new_times = np.abs(ts.times + rng.normal(0.0, sigma, ts.count))
        out = resort_times(ts.edge_ids, new_times, math.inf)
        if out is not None:
            return out


def opinion_exclusion(cfg: np.ndarray, g: Graph, t: float,
                      rng: np.random.Generator) -> np.ndarray:
    """Interchange dynamics on the opinions themselves.

    Each undirected edge rings at rate one up to time ``t``; a ring swaps
    the opinions at its endpoints.  The number of ones is conserved exactly.
    """
    if t < 0:
        raise ValueError(f"duration must be nonnegative, got {t}")
    bits = np.asarray(cfg, dtype=np.uint8).copy()
    if t == 0 or g.num_edges == 0:
        return bits
    count = int(rng.poisson(t * g.num_edges))
    if count:
        edge_ids = rng.integers(0, g.num_edges, size=count, dtype=np.int64)
        exclusion_swaps(bits, edge_ids,
                        np.ascontiguousarray(g.undirected_edges[:, 0]),
                        np.ascontiguousarray(g.undirected_edges[:, 1]))
    return bits
