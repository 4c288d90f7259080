"""Hot simulation loops, compiled with numba when available.

All kernels operate on plain numpy arrays and scalars so they stay pure and
thread-friendly (``nogil``).  Randomness is sampled outside with numpy
generators; kernels only consume pre-drawn arrays.
"""
import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True, nogil=True)
def consensus_scan(bits, ones, sel, src, dst, start, limit):
    """Advance the voter chain through selections ``sel[start:limit]``.

    ``bits`` is mutated in place; ``ones`` is the current count of 1-bits.
    Returns ``(absorbed, steps, ones)`` where ``steps`` is the 1-based
    position of the absorbing selection (or ``limit`` if not absorbed).
    """
    n = bits.shape[0]
    if ones == 0 or ones == n:
        return True, start, ones
    for k in range(start, limit):
        e = sel[k]
        x = src[e]
        y = dst[e]
        bx = bits[x]
        if bits[y] != bx:
            bits[y] = bx
            if bx == 1:
                ones += 1
            else:
                ones -= 1
            if ones == 0 or ones == n:
                return True, k + 1, ones
    return False, limit, ones


@njit(cache=True, nogil=True)
def backward_map_scan(mapping, counts, sel, src, dst, start, limit):
    """Extend the walker-merge map over selections ``sel[start:limit]``.

    ``mapping[v]`` is the suffix-start position reached by the backward
    walker that sits at ``v`` after ``start`` selections; ``counts`` tallies
    the image multiset.  Returns ``(coalesced, steps)`` with ``steps`` the
    1-based selection count at coalescence (or ``limit``).
    """
    n = mapping.shape[0]
    if counts[mapping[0]] == n:
        return True, start
    for k in range(start, limit):
        e = sel[k]
        x = src[e]
        y = dst[e]
        old = mapping[y]
        new = mapping[x]
        if old != new:
            mapping[y] = new
            counts[old] -= 1
            counts[new] += 1
            if counts[new] == n:
                return True, k + 1
    return False, limit


@njit(cache=True, nogil=True)
def disagreement_sum_scan(bits, sel, src, dst, indptr, neighbors,
                          start, limit, dsum, dcount):
    """Accumulate the disagreeing-directed-edge count before each step.

    ``dcount`` is the current number of disagreeing directed edges.  The
    running sum ``dsum`` adds ``dcount`` once per selection consumed (the
    fraction is obtained by dividing by ``2|E|`` at the end).  Returns
    ``(absorbed, steps, dsum, dcount)``.
    """
    if dcount == 0:
        return True, start, dsum, dcount
    for k in range(start, limit):
        dsum += dcount
        e = sel[k]
        x = src[e]
        y = dst[e]
        bx = bits[x]
        if bits[y] != bx:
            for idx in range(indptr[y], indptr[y + 1]):
                z = neighbors[idx]
                if bits[z] == bits[y]:
                    dcount += 2
                else:
                    dcount -= 2
            bits[y] = bx
            if dcount == 0:
                return True, k + 1, dsum, dcount
    return False, limit, dsum, dcount


@njit(cache=True, nogil=True)
def initial_disagreement(bits, indptr, neighbors):
    """Count disagreeing directed edges of a configuration."""
    d = 0
    for v in range(bits.shape[0]):
        for idx in range(indptr[v], indptr[v + 1]):
            if bits[v] != bits[neighbors[idx]]:
                d += 1
    return d


@njit(cache=True, nogil=True)
def apply_transpositions(mapping, pair_positions):
    """Apply adjacent transpositions to a permutation array, in order.

    ``pair_positions`` holds 0-based pair indices: index ``p`` swaps entries
    ``p`` and ``p+1``; the out-of-window pair ``K-1`` is not applied and only
    raises the boundary flag.  Returns ``(applied_count, boundary_touched)``.
    """
    k_max = mapping.shape[0] - 1
    applied = 0
    boundary = False
    for i in range(pair_positions.shape[0]):
        p = pair_positions[i]
        if p < k_max:
            tmp = mapping[p]
            mapping[p] = mapping[p + 1]
            mapping[p + 1] = tmp
            applied += 1
        else:
            boundary = True
    return applied, boundary


@njit(cache=True, nogil=True)
def lazy_walk_run(position, n_sites, schedule, c1, c2, psum, step,
                  u_sched, u_move):
    """Run the variable-laziness walk on ``{0..n_sites}`` until absorption.

    Each step consumes one entry of ``u_sched`` and one of ``u_move``.  The
    schedule codes are 0: constant ``c1``; 1: alternating ``c1``/``c2`` by
    step parity; 2: adapted-random ``c1 + c2 * (position / n_sites) * u``.
    Returns ``(absorbed, position, psum, step, used)``.
    """
    n_draws = u_sched.shape[0]
    for i in range(n_draws):
        if position == 0 or position == n_sites:
            return True, position, psum, step, i
        if schedule == 0:
            p = c1
        elif schedule == 1:
            p = c1 if (step % 2 == 0) else c2
        else:
            p = c1 + c2 * (position / n_sites) * u_sched[i]
        psum += p
        u = u_move[i]
        if u < 0.5 * p:
            position -= 1
        elif u < p:
            position += 1
        step += 1
    absorbed = position == 0 or position == n_sites
    return absorbed, position, psum, step, n_draws


@njit(cache=True, nogil=True)
def exclusion_swaps(bits, edge_ids, und_src, und_dst):
    """Swap bit values along a time-ordered stream of undirected edges."""
    for i in range(edge_ids.shape[0]):
        e = edge_ids[i]
        x = und_src[e]
        y = und_dst[e]
        tmp = bits[x]
        bits[x] = bits[y]
        bits[y] = tmp


@njit(cache=True, nogil=True)
def forward_pair_disagreements(bits, ones, sel, src, dst, limit,
                               cand_pos, cand_u, cand_v, out_flags):
    """Run the voter chain and record pair disagreements at candidates.

    ``cand_pos`` holds ascending 1-based positions; before applying selection
    at position ``cand_pos[j]`` the flag ``bits[cand_u[j]] != bits[cand_v[j]]``
    is stored in ``out_flags[j]``.  Stops after the last candidate or at
    absorption.  Returns the number of candidates evaluated.
    """
    n = bits.shape[0]
    j = 0
    n_cand = cand_pos.shape[0]
    for k in range(limit):
        pos = k + 1
        while j < n_cand and cand_pos[j] == pos:
            out_flags[j] = bits[cand_u[j]] != bits[cand_v[j]]
            j += 1
        if j >= n_cand:
            return j
        if ones == 0 or ones == n:
            return j
        e = sel[k]
        x = src[e]
        y = dst[e]
        bx = bits[x]
        if bits[y] != bx:
            bits[y] = bx
            if bx == 1:
                ones += 1
            else:
                ones -= 1
    return j
