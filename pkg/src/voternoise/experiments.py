"""Monte-Carlo engine and estimators.

Every estimator is deterministic given its configuration: replicate ``i``
of a run with master seed ``seed`` owns counter-based generator lanes keyed
by ``(seed, i, lane)`` material, so results do not depend on worker count
or scheduling.  Estimates carry plain binomial / sample standard errors and
an optional bound with the one-sided ``estimate - 3 * stderr <= bound``
convention (identities use two-sided 3-sigma agreement instead).
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from ._kernels import (
    apply_transpositions,
    consensus_scan,
    disagreement_sum_scan,
    initial_disagreement,
    lazy_walk_run,
)
from .graph import Graph, build_graph
from .noise import NoiseParams, opinion_exclusion, reflect, resort_times
from .pivotal import OverlapClass, pivotal_set
from .voter import (
    DEFAULT_STEP_CAP,
    EdgeStream,
    StepCapExceeded,
    coalescence_steps,
    dictator_of_suffix,
    run_to_consensus,
    sample_initial,
    sample_ppp,
)

_MASK64 = (1 << 64) - 1


# ---------------------------------------------------------------------------
# configuration and records

@dataclass(frozen=True)
class ExperimentConfig:
    graph_spec: str
    p: float = 0.5
    noise: NoiseParams = field(default_factory=NoiseParams)
    replicates: int = 10_000
    seed: int = 0
    experiment: str = ""

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("need at least one replicate")


@dataclass
class EstimateRecord:
    """A point estimate with its standard error and optional bound check."""

    name: str
    point_estimate: float
    stderr: float
    replicates: int
    bound_value: float | None = None
    bound_satisfied: bool | None = None
    details: dict = field(default_factory=dict)


def _mean_stderr(values: np.ndarray) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean()) if len(arr) else 0.0
    if len(arr) < 2:
        return mean, 0.0
    return mean, float(arr.std(ddof=1) / math.sqrt(len(arr)))


def _bounded_record(name: str, values: np.ndarray, bound: float,
                    two_sided: bool = False, **details) -> EstimateRecord:
    mean, se = _mean_stderr(values)
    if two_sided:
        ok = abs(mean - bound) <= 3.0 * se
    else:
        ok = mean - 3.0 * se <= bound
    return EstimateRecord(name, mean, se, len(values), bound, bool(ok),
                          dict(details))


# ---------------------------------------------------------------------------
# replicate engine

def derive_seed(base: int, index: int) -> int:
    """Deterministic 64-bit mix of a base seed and a point index."""
    z = ((base & _MASK64) ^ ((index + 1) * 0x9E3779B97F4A7C15)) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _replicate_keys(seed: int, replicates: int, lanes: int = 3) -> np.ndarray:
    ss = np.random.SeedSequence(seed & _MASK64)
    state = ss.generate_state(replicates * lanes * 2, np.uint64)
    return state.reshape(replicates, lanes, 2)


def _lane_rngs(keys: np.ndarray, rep: int):
    return tuple(
        np.random.Generator(np.random.Philox(key=keys[rep, lane]))
        for lane in range(keys.shape[1])
    )


def _map_replicates(worker, replicates: int, threads: int) -> list:
    if threads > 1 and replicates > 1:
        chunk = max(16, replicates // (threads * 8))
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(worker, range(replicates), chunksize=chunk))
    return [worker(i) for i in range(replicates)]


# ---------------------------------------------------------------------------
# interchange noise on the selection sequence

def _consensus_permuted(edges, mapping, bits0, ones0, cap):
    """Consensus of the sequence whose first ``K`` slots are permuted."""
    g = edges.graph
    k = len(mapping)
    arr = edges.prefix(k)[mapping]
    bits = bits0.copy()
    ones = int(ones0)
    done = 0
    want = 2 * k
    while True:
        absorbed, pos, ones = consensus_scan(bits, ones, arr, g.edge_src,
                                             g.edge_dst, done, len(arr))
        if absorbed:
            return (1 if ones == g.n else 0), pos
        done = len(arr)
        if done >= cap:
            raise StepCapExceeded(f"no consensus within {cap} steps")
        arr = np.concatenate([arr, edges.prefix(want)[done:]])
        want *= 2


def _interchange_replicate(g, p, t_values, swap_rate, keys, rep, cap):
    """Consensus bits (clean, then one per noise duration) for one replicate.

    Noise durations must be ascending; the permutations are nested (one
    underlying swap-event stream truncated at each duration).  A window that
    was both touched at its right boundary and too short to decide the noisy
    consensus is retried with doubled length.
    """
    init_rng, edge_rng, noise_rng = _lane_rngs(keys, rep)
    bits = sample_initial(g, p, init_rng)
    ones = int(bits.sum())
    out = np.empty(1 + len(t_values), dtype=np.uint8)
    if ones == 0 or ones == g.n:
        out[:] = bits[0]
        return out
    stream = EdgeStream(g, edge_rng)
    clean = run_to_consensus(bits, stream, cap=cap)
    out[0] = clean.consensus_bit
    tau = clean.steps_taken
    t_max = t_values[-1]
    if t_max == 0:
        out[1:] = clean.consensus_bit
        return out
    window_len = max(4 * tau, 4)
    for _ in range(40):
        count = int(noise_rng.poisson(swap_rate * t_max * window_len))
        event_times = noise_rng.uniform(0.0, t_max, size=count)
        event_pairs = noise_rng.integers(0, window_len, size=count,
                                         dtype=np.int64)
        order = np.argsort(event_times, kind="stable")
        event_times = event_times[order]
        event_pairs = event_pairs[order]
        mapping = np.arange(window_len, dtype=np.int64)
        ptr = 0
        applied_total = 0
        boundary_any = False
        ok = True
        for col, t in enumerate(t_values):
            upto = int(np.searchsorted(event_times, t, side="right"))
            applied, boundary = apply_transpositions(
                mapping, event_pairs[ptr:upto])
            ptr = upto
            applied_total += applied
            boundary_any = boundary_any or boundary
            if applied_total == 0:
                out[1 + col] = clean.consensus_bit
                continue
            bit, steps = _consensus_permuted(stream, mapping, bits, ones, cap)
            if boundary_any and steps > window_len:
                ok = False
                break
            out[1 + col] = bit
        if ok:
            return out
        window_len *= 2
    raise StepCapExceeded("interchange window kept hitting its boundary")


def interchange_disagreement_curve(
        cfg: ExperimentConfig, t_values, threads: int = 1,
        cap: int = DEFAULT_STEP_CAP,
) -> tuple[list[EstimateRecord], np.ndarray]:
    """Disagreement estimates over an ascending grid of noise durations.

    Returns one record per duration plus the per-replicate disagreement
    indicator matrix (replicates x durations) for coupled monotonicity
    checks.  The bound per duration is ``3 t n max_degree / |E|``.
    """
    t_values = [float(t) for t in t_values]
    if any(t < 0 for t in t_values):
        raise ValueError("noise durations must be nonnegative")
    if sorted(t_values) != t_values:
        raise ValueError("noise durations must be ascending")
    g = build_graph(cfg.graph_spec)
    keys = _replicate_keys(cfg.seed, cfg.replicates)
    rate = cfg.noise.swap_rate

    def worker(rep):
        return _interchange_replicate(g, cfg.p, t_values, rate, keys, rep, cap)

    rows = np.stack(_map_replicates(worker, cfg.replicates, threads))
    indicators = (rows[:, 1:] != rows[:, :1]).astype(np.uint8)
    records = []
    for col, t in enumerate(t_values):
        bound = 3.0 * t * g.n * g.max_degree / g.num_edges
        rec = _bounded_record("disagreement_interchange",
                              indicators[:, col], bound,
                              graph=cfg.graph_spec, p=cfg.p, t=t,
                              swap_rate=rate)
        records.append(rec)
    return records, indicators


def estimate_disagreement_interchange(cfg: ExperimentConfig,
                                      threads: int = 1) -> EstimateRecord:
    """P(consensus differs after interchange noise of duration ``t``)."""
    records, _ = interchange_disagreement_curve(cfg, [cfg.noise.t], threads)
    return records[0]


def estimate_covariance(cfg: ExperimentConfig,
                        threads: int = 1) -> EstimateRecord:
    """Sample covariance of the clean and noised consensus bits.

    The standard error comes from the delta method applied to the four
    joint-outcome frequencies.
    """
    g = build_graph(cfg.graph_spec)
    keys = _replicate_keys(cfg.seed, cfg.replicates)
    t = float(cfg.noise.t)
    rate = cfg.noise.swap_rate

    def worker(rep):
        return _interchange_replicate(g, cfg.p, [t], rate, keys, rep,
                                      DEFAULT_STEP_CAP)

    rows = np.stack(_map_replicates(worker, cfg.replicates, threads))
    f0 = rows[:, 0].astype(np.float64)
    f1 = rows[:, 1].astype(np.float64)
    r = len(rows)
    p11 = float(np.mean((f0 == 1) & (f1 == 1)))
    p10 = float(np.mean((f0 == 1) & (f1 == 0)))
    p01 = float(np.mean((f0 == 0) & (f1 == 1)))
    p00 = 1.0 - p11 - p10 - p01
    marg0 = p11 + p10
    marg1 = p11 + p01
    cov = p11 - marg0 * marg1
    grads = np.array([0.0, -marg0, -marg1, 1.0 - marg0 - marg1])
    probs = np.array([p00, p01, p10, p11])
    var = (probs @ grads**2 - (probs @ grads) ** 2) / r
    se = math.sqrt(max(var, 0.0))
    return EstimateRecord("covariance_interchange", cov, se, r,
                          details={"graph": cfg.graph_spec, "p": cfg.p,
                                   "t": t, "joint": [p00, p01, p10, p11]})


# ---------------------------------------------------------------------------
# the variable-laziness walk identity

_SCHEDULES = ("constant", "alternating", "adapted")


def _parse_schedule(schedule: str) -> tuple[int, float, float]:
    parts = schedule.split(":")
    name = parts[0]
    if name == "constant":
        c = float(parts[1]) if len(parts) > 1 else 1.0
        if not 0.0 < c <= 1.0:
            raise ValueError(f"constant laziness must be in (0,1], got {c}")
        return 0, c, 0.0
    if name == "alternating":
        a = float(parts[1]) if len(parts) > 1 else 1.0
        b = float(parts[2]) if len(parts) > 2 else 0.3
        if not (0.0 < a <= 1.0 and 0.0 < b <= 1.0):
            raise ValueError("alternating laziness values must be in (0,1]")
        return 1, a, b
    if name == "adapted":
        # p = 0.3 + 0.6 * (position / N) * uniform, always in [0.3, 0.9]
        return 2, 0.3, 0.6
    raise ValueError(f"unknown schedule {schedule!r}; use one of {_SCHEDULES}")


def rwlemma_check(n_sites: int, start: int, schedule: str, replicates: int,
                  seed: int, threads: int = 1) -> EstimateRecord:
    """Estimate the expected accumulated laziness before hitting {0, N}.

    Whatever adapted laziness schedule drives the walk, the target value is
    exactly ``start * (n_sites - start)``; agreement is two-sided 3-sigma.
    """
    if not 0 <= start <= n_sites:
        raise ValueError(f"start {start} outside [0, {n_sites}]")
    code, c1, c2 = _parse_schedule(schedule)
    keys = _replicate_keys(seed, replicates, lanes=1)

    def worker(rep):
        (rng,) = _lane_rngs(keys, rep)
        position, psum, step_count = start, 0.0, 0
        chunk = 256
        while True:
            u_sched = rng.random(chunk)
            u_move = rng.random(chunk)
            absorbed, position, psum, step_count, _ = lazy_walk_run(
                position, n_sites, code, c1, c2, psum, step_count,
                u_sched, u_move)
            if absorbed:
                return psum
            chunk *= 2

    values = np.array(_map_replicates(worker, replicates, threads))
    target = float(start * (n_sites - start))
    return _bounded_record("rw_identity", values, target, two_sided=True,
                           n_sites=n_sites, start=start, schedule=schedule)


# ---------------------------------------------------------------------------
# disagreement-fraction sum and pivotal size

def disagreement_sum_check(g: Graph, p: float, replicates: int, seed: int,
                           threads: int = 1,
                           cap: int = DEFAULT_STEP_CAP) -> EstimateRecord:
    """Mean over replicates of the summed disagreeing-directed-edge fraction
    along the trajectory, against the ``n^2 / 4`` bound."""
    keys = _replicate_keys(seed, replicates, lanes=2)
    dir_edges = g.num_directed_edges

    def worker(rep):
        init_rng, edge_rng = _lane_rngs(keys, rep)
        bits = sample_initial(g, p, init_rng)
        dcount = initial_disagreement(bits, g.adj_indptr, g.adj_neighbors)
        if dcount == 0:
            return 0.0
        stream = EdgeStream(g, edge_rng)
        bits = bits.copy()
        dsum = 0.0
        done = 0
        want = 512
        while True:
            sel = stream.prefix(want)
            absorbed, pos, dsum, dcount = disagreement_sum_scan(
                bits, sel, g.edge_src, g.edge_dst,
                g.adj_indptr, g.adj_neighbors, done, len(sel), dsum, dcount)
            if absorbed:
                return dsum / dir_edges
            done = len(sel)
            if done >= cap:
                raise StepCapExceeded(f"no consensus within {cap} steps")
            want *= 2

    values = np.array(_map_replicates(worker, replicates, threads))
    return _bounded_record("disagreement_sum", values, g.n**2 / 4.0,
                           graph=g.spec, p=p)


def expected_pivotal_size(g: Graph, p: float, replicates: int, seed: int,
                          threads: int = 1,
                          cap: int = DEFAULT_STEP_CAP) -> EstimateRecord:
    """Mean number of consensus-flipping adjacent transpositions, with a
    per-overlap-class breakdown, against ``3 n max_degree / |E|``."""
    keys = _replicate_keys(seed, replicates, lanes=2)
    class_names = [c.value for c in OverlapClass if c != OverlapClass.COMMUTING]

    def worker(rep):
        init_rng, edge_rng = _lane_rngs(keys, rep)
        bits = sample_initial(g, p, init_rng)
        stream = EdgeStream(g, edge_rng)
        records = pivotal_set(stream, bits, cap=cap)
        counts = {name: 0 for name in class_names}
        for rec in records:
            counts[rec.overlap.value] += 1
        return len(records), counts

    results = _map_replicates(worker, replicates, threads)
    sizes = np.array([r[0] for r in results], dtype=np.float64)
    breakdown = {
        name: float(np.mean([r[1][name] for r in results]))
        for name in class_names
    }
    bound = 3.0 * g.n * g.max_degree / g.num_edges
    return _bounded_record("pivotal_size", sizes, bound,
                           graph=g.spec, p=p, by_class=breakdown)


# ---------------------------------------------------------------------------
# Brownian displacement noise

def _window_value(g: Graph, bits0, ones0, sel) -> int:
    """Consensus bit of a finite selection window; 0 when undecided.

    Mirrors the reduction that zeroes the observable whenever the window is
    too short to determine the dictator.
    """
    if ones0 == 0 or ones0 == g.n:
        return int(bits0[0])
    bits = bits0.copy()
    absorbed, _, ones = consensus_scan(bits, int(ones0), sel, g.edge_src,
                                       g.edge_dst, 0, len(sel))
    if not absorbed:
        return 0
    return 1 if ones == g.n else 0


def mean_coalescence_steps(g: Graph, seed: int, replicates: int = 256) -> float:
    """Pilot estimate of the mean backward coalescence step count."""
    if g.n == 1:
        return 0.0
    keys = _replicate_keys(seed, replicates, lanes=1)
    total = 0
    for rep in range(replicates):
        (rng,) = _lane_rngs(keys, rep)
        total += coalescence_steps(EdgeStream(g, rng))
    return total / replicates


def _brownian_defaults(g: Graph, noise: NoiseParams,
                       seed: int) -> tuple[float, float]:
    mean_steps = mean_coalescence_steps(g, derive_seed(seed, 0xB0))
    cont = mean_steps / max(g.num_directed_edges, 1)
    ell = noise.ell if noise.ell is not None else max(4.0 * cont, 1e-3)
    m = noise.m if noise.m is not None else 2.0 * ell
    if ell < cont:
        warnings.warn(
            f"observation window {ell} is below the empirical coalescence "
            f"horizon {cont:.3g}; the undecided-window fallback will fire often",
            stacklevel=3,
        )
    if m <= ell:
        raise ValueError(f"need horizon m > ell, got m={m}, ell={ell}")
    return float(ell), float(m)


def brownian_disagreement_curve(
        cfg: ExperimentConfig, s_values, threads: int = 1,
) -> tuple[list[EstimateRecord], np.ndarray, EstimateRecord | None]:
    """Disagreement of the consensus after Gaussian time displacement, over
    a grid of variances.

    Replicates share one timed realization and one standard-normal vector
    across the grid (displacements scale with sqrt(s)), so the curve is
    coupled.  Also fits the log-log slope over the positive grid points
    with a positive estimate; the slope record is ``None`` when fewer than
    two such points exist.
    """
    s_values = [float(s) for s in s_values]
    if any(s < 0 for s in s_values):
        raise ValueError("noise variances must be nonnegative")
    g = build_graph(cfg.graph_spec)
    ell, m = _brownian_defaults(g, cfg.noise, cfg.seed)
    keys = _replicate_keys(cfg.seed, cfg.replicates)

    def worker(rep):
        init_rng, ppp_rng, noise_rng = _lane_rngs(keys, rep)
        bits = sample_initial(g, cfg.p, init_rng)
        ones = int(bits.sum())
        ts = sample_ppp(g, m, ppp_rng) if g.num_directed_edges else None
        out = np.empty(1 + len(s_values), dtype=np.uint8)
        base = _window_value(g, bits, ones, ts.edge_ids) if ts else int(bits[0])
        out[0] = base
        norms = noise_rng.normal(0.0, 1.0, ts.count) if ts else None
        for col, s in enumerate(s_values):
            if s == 0 or ts is None or ts.count == 0:
                out[1 + col] = base
                continue
            noised = resort_times(
                ts.edge_ids, reflect(ts.times + math.sqrt(s) * norms, m), m)
            while noised is None:  # ties are a null event; redraw
                fresh = noise_rng.normal(0.0, 1.0, ts.count)
                noised = resort_times(
                    ts.edge_ids, reflect(ts.times + math.sqrt(s) * fresh, m), m)
            out[1 + col] = _window_value(g, bits, ones, noised.edge_ids)
        return out

    rows = np.stack(_map_replicates(worker, cfg.replicates, threads))
    indicators = (rows[:, 1:] != rows[:, :1]).astype(np.uint8)
    records = []
    for col, s in enumerate(s_values):
        mean, se = _mean_stderr(indicators[:, col])
        records.append(EstimateRecord(
            "disagreement_brownian", mean, se, cfg.replicates,
            details={"graph": cfg.graph_spec, "p": cfg.p, "s": s,
                     "ell": ell, "m": m}))
    slope_record = _fit_loglog_slope(s_values, records, cfg)
    return records, indicators, slope_record


def _fit_loglog_slope(s_values, records, cfg) -> EstimateRecord | None:
    xs, ys = [], []
    for s, rec in zip(s_values, records):
        if s > 0 and rec.point_estimate > 0:
            xs.append(math.log(s))
            ys.append(math.log(rec.point_estimate))
    if len(xs) < 2:
        return None
    x = np.array(xs)
    y = np.array(ys)
    xc = x - x.mean()
    slope = float((xc @ (y - y.mean())) / (xc @ xc))
    resid = y - (y.mean() + slope * xc)
    dof = max(len(x) - 2, 1)
    se = float(math.sqrt((resid @ resid) / dof / (xc @ xc)))
    return EstimateRecord("brownian_slope", slope, se, cfg.replicates,
                          details={"graph": cfg.graph_spec,
                                   "s_values": list(s_values)})


def estimate_disagreement_brownian(cfg: ExperimentConfig,
                                   threads: int = 1) -> EstimateRecord:
    """Single-variance Brownian disagreement estimate."""
    records, _, _ = brownian_disagreement_curve(cfg, [cfg.noise.s], threads)
    return records[0]


def truncation_event_freq(g: Graph, s: float, ell: float, m: float,
                          replicates: int, seed: int,
                          threads: int = 1) -> EstimateRecord:
    """Frequency of the noised realizations differing on ``[0, ell]``
    between the half-line and the two-sided-reflection constructions.

    Gaussians are coupled for the shared points, and the closed-form tail
    bound ``4 sqrt(s)|E|/(m-ell) (sqrt(s)/(m-ell) + ell) exp(-(m-ell)^2/8s)``
    is attached.
    """
    if not 0 <= ell < m:
        raise ValueError(f"need 0 <= ell < m, got ell={ell}, m={m}")
    if s < 0:
        raise ValueError("noise variance must be nonnegative")
    horizon = 2.0 * m + 10.0 * math.sqrt(s)
    keys = _replicate_keys(seed, replicates, lanes=2)
    sigma = math.sqrt(s)

    def worker(rep):
        ppp_rng, noise_rng = _lane_rngs(keys, rep)
        ts = sample_ppp(g, horizon, ppp_rng)
        if s == 0 or ts.count == 0:
            return 0
        displaced = ts.times + sigma * noise_rng.normal(0.0, 1.0, ts.count)
        half = np.abs(displaced)
        shared = ts.times <= m
        trunc = reflect(displaced[shared], m)
        mask_a = half <= ell
        mask_b = trunc <= ell
        a_times, a_edges = half[mask_a], ts.edge_ids[mask_a]
        b_times, b_edges = trunc[mask_b], ts.edge_ids[shared][mask_b]
        if len(a_times) != len(b_times):
            return 1
        ka = np.lexsort((a_edges, a_times))
        kb = np.lexsort((b_edges, b_times))
        same = (a_times[ka] == b_times[kb]).all() and \
            (a_edges[ka] == b_edges[kb]).all()
        return 0 if same else 1

    values = np.array(_map_replicates(worker, replicates, threads),
                      dtype=np.float64)
    gap = m - ell
    bound = (4.0 * sigma * g.num_edges / gap) * (sigma / gap + ell) \
        * math.exp(-gap * gap / (8.0 * s)) if s > 0 else 0.0
    return _bounded_record("truncation_mismatch", values, bound,
                           graph=g.spec, s=s, ell=ell, m=m)


# ---------------------------------------------------------------------------
# exclusion noise on the initial opinions

def opinion_exclusion_experiment(g: Graph, p: float, t: float,
                                 replicates: int, seed: int,
                                 threads: int = 1) -> EstimateRecord:
    """P(consensus differs when the initial opinions are stirred by the
    interchange dynamics for duration ``t``), sharing the edge sequence."""
    if t < 0:
        raise ValueError("duration must be nonnegative")
    keys = _replicate_keys(seed, replicates)

    def worker(rep):
        init_rng, edge_rng, noise_rng = _lane_rngs(keys, rep)
        bits = sample_initial(g, p, init_rng)
        stirred = opinion_exclusion(bits, g, t, noise_rng)
        if (bits == stirred).all():
            return 0
        stream = EdgeStream(g, edge_rng)
        f0 = run_to_consensus(bits, stream).consensus_bit
        f1 = run_to_consensus(stirred, stream).consensus_bit
        return int(f0 != f1)

    values = np.array(_map_replicates(worker, replicates, threads),
                      dtype=np.float64)
    mean, se = _mean_stderr(values)
    return EstimateRecord("opinion_exclusion", mean, se, replicates,
                          details={"graph": g.spec, "p": p, "t": t})


# ---------------------------------------------------------------------------
# dictator histogram

@dataclass
class DictatorHistogram:
    counts: np.ndarray
    chi_square: float
    critical_value: float
    uniform_not_rejected: bool
    replicates: int


def dictator_histogram(g: Graph, replicates: int, seed: int,
                       threads: int = 1,
                       alpha: float = 1e-3) -> DictatorHistogram:
    """Per-vertex counts of the consensus-deciding vertex and a chi-square
    goodness-of-fit statistic against the uniform law."""
    keys = _replicate_keys(seed, replicates, lanes=1)

    def worker(rep):
        (rng,) = _lane_rngs(keys, rep)
        return dictator_of_suffix(EdgeStream(g, rng), 0)

    hits = _map_replicates(worker, replicates, threads)
    counts = np.bincount(hits, minlength=g.n).astype(np.int64)
    if g.n == 1:
        return DictatorHistogram(counts, 0.0, 0.0, True, replicates)
    expected = replicates / g.n
    chi = float(((counts - expected) ** 2 / expected).sum())
    crit = float(stats.chi2.ppf(1.0 - alpha, g.n - 1))
    return DictatorHistogram(counts, chi, crit, chi <= crit, replicates)
