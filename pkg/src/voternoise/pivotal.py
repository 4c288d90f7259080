"""Pivotality of sequence reorderings.

A swap of adjacent selections (or a general relocation) is pivotal when it
changes the consensus opinion.  Pivotality of an adjacent pair requires the
two edges to interact: pairs with disjoint endpoints or a shared source
only commute, so the taxonomy below classifies the interacting shapes and
carries the exact witness data (which vertices must disagree and which
vertex must dictate the remaining dynamics).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._kernels import consensus_scan, forward_pair_disagreements
from .voter import (
    DEFAULT_STEP_CAP,
    EdgeSequence,
    MovedSequence,
    StepCapExceeded,
    SwappedSequence,
    dictator_of_suffix,
    run_to_consensus,
)


class OverlapClass(Enum):
    """How two consecutive directed edges share vertices."""

    CHAIN_FORWARD = "chain_forward"
    CONVERGE_SAME_TARGET = "converge_same_target"
    OPPOSITE_PAIR = "opposite_pair"
    COMMUTING = "commuting"


@dataclass(frozen=True)
class _Overlap:
    tag: OverlapClass
    # vertices that must disagree for the swap to matter
    disagree_u: int
    disagree_v: int
    # vertices that must dictate the subsequent dynamics
    dictator_targets: tuple[int, ...]


def _overlap(x1: int, y1: int, x2: int, y2: int) -> _Overlap:
    if x1 == y2 and y1 == x2:
        return _Overlap(OverlapClass.OPPOSITE_PAIR, x1, y1, (x1, y1))
    if y1 == x2:
        # chain x1 -> y1 -> y2, first edge occupying the earlier slot
        return _Overlap(OverlapClass.CHAIN_FORWARD, x1, y1, (y2,))
    if x1 == y2:
        # same chain shape with the slots reversed: x2 -> x1 -> y1
        return _Overlap(OverlapClass.CHAIN_FORWARD, x2, x1, (y1,))
    if y1 == y2 and x1 != x2:
        return _Overlap(OverlapClass.CONVERGE_SAME_TARGET, x1, x2, (y1,))
    return _Overlap(OverlapClass.COMMUTING, -1, -1, ())


def classify_overlap(e1, e2) -> OverlapClass:
    """Classify two directed edges, each given as a ``(source, target)`` pair.

    Chain shapes count regardless of which slot holds which edge; pairs
    sharing only their source (or nothing, or being the same edge) commute.
    """
    (x1, y1), (x2, y2) = e1, e2
    return _overlap(int(x1), int(y1), int(x2), int(y2)).tag


@dataclass(frozen=True)
class PivotalRecord:
    """Witness data for one adjacent transposition.

    ``disagreement_held`` is evaluated on the configuration just before the
    earlier selection; ``dictator_matched`` compares the suffix dictator
    against the overlap's distinguished vertex (either endpoint for an
    opposite pair).
    """

    position: int
    overlap: OverlapClass
    disagreement_held: bool
    dictator_matched: bool
    pivotal: bool


def is_pivotal_swap(edges: EdgeSequence, ell: int, eta0: np.ndarray,
                    tau: int | None = None,
                    cap: int = DEFAULT_STEP_CAP) -> bool:
    """Whether exchanging selections ``ell`` and ``ell + 1`` flips the
    consensus of ``eta0``.

    Fast paths: a commuting pair cannot be pivotal, and neither can a swap
    strictly after the consensus step (the prefix fixing the outcome is
    untouched).
    """
    if ell < 1:
        raise IndexError(f"swap position must be >= 1, got {ell}")
    bits = np.asarray(eta0, dtype=np.uint8)
    if (bits == bits[0]).all():
        return False
    pair = edges.prefix(ell + 1)
    if len(pair) < ell + 1:
        raise ValueError(f"sequence has no pair at position {ell}")
    g = edges.graph
    x1, y1 = g.directed_edges[pair[ell - 1]]
    x2, y2 = g.directed_edges[pair[ell]]
    if _overlap(x1, y1, x2, y2).tag is OverlapClass.COMMUTING:
        return False
    clean = run_to_consensus(bits, edges, cap=cap)
    if tau is None:
        tau = clean.steps_taken
    if ell > tau:
        return False
    swapped = run_to_consensus(bits, SwappedSequence(edges, ell), cap=cap)
    return swapped.consensus_bit != clean.consensus_bit


def is_pivotal_move(edges: EdgeSequence, i: int, j: int, eta0: np.ndarray,
                    cap: int = DEFAULT_STEP_CAP) -> bool:
    """Whether relocating selection ``i`` to position ``j`` flips the
    consensus of ``eta0``."""
    if i < 1 or j < 1:
        raise IndexError(f"positions must be >= 1, got ({i},{j})")
    if i == j:
        return False
    bits = np.asarray(eta0, dtype=np.uint8)
    if (bits == bits[0]).all():
        return False
    clean = run_to_consensus(bits, edges, cap=cap)
    if min(i, j) > clean.steps_taken:
        return False
    moved = run_to_consensus(bits, MovedSequence(edges, i, j), cap=cap)
    return moved.consensus_bit != clean.consensus_bit


def pivotal_set(edges: EdgeSequence, eta0: np.ndarray,
                include_non_pivotal: bool = False,
                cap: int = DEFAULT_STEP_CAP) -> list[PivotalRecord]:
    """All adjacent transpositions that flip the consensus of ``eta0``.

    The search is complete: a pivotal position cannot exceed the consensus
    step of the unswapped sequence, and the swapped pair must interact.
    With ``include_non_pivotal`` the non-commuting candidates that turned
    out harmless are reported as well (used by the enumeration checks).
    """
    g = edges.graph
    bits0 = np.asarray(eta0, dtype=np.uint8)
    ones0 = int(bits0.sum())
    if ones0 == 0 or ones0 == g.n:
        return []
    clean = run_to_consensus(bits0, edges, cap=cap)
    tau = clean.steps_taken

    sel = edges.prefix(tau + 1)
    src = g.edge_src
    dst = g.edge_dst
    candidates: list[tuple[int, _Overlap]] = []
    for ell in range(1, min(tau, len(sel) - 1) + 1):
        ov = _overlap(src[sel[ell - 1]], dst[sel[ell - 1]],
                      src[sel[ell]], dst[sel[ell]])
        if ov.tag is not OverlapClass.COMMUTING:
            candidates.append((ell, ov))
    if not candidates:
        return []

    cand_pos = np.array([c[0] for c in candidates], dtype=np.int64)
    cand_u = np.array([c[1].disagree_u for c in candidates], dtype=np.int64)
    cand_v = np.array([c[1].disagree_v for c in candidates], dtype=np.int64)
    flags = np.zeros(len(candidates), dtype=np.bool_)
    forward_pair_disagreements(bits0.copy(), ones0, sel, src, dst, tau,
                               cand_pos, cand_u, cand_v, flags)

    records = []
    for (ell, ov), disagreed in zip(candidates, flags):
        swapped_bit = _consensus_with_swap(edges, bits0, ones0, ell,
                                           tau + 1, cap)
        pivotal = swapped_bit != clean.consensus_bit
        if pivotal or include_non_pivotal:
            dictator = dictator_of_suffix(edges, ell + 1, cap=cap)
            records.append(PivotalRecord(
                position=ell,
                overlap=ov.tag,
                disagreement_held=bool(disagreed),
                dictator_matched=dictator in ov.dictator_targets,
                pivotal=pivotal,
            ))
    return records


def _consensus_with_swap(edges, bits0, ones0, ell, start_len, cap) -> int:
    """Consensus bit of ``edges`` with positions ``ell``/``ell+1`` exchanged.

    Works on a private swapped copy of a materialized prefix, extended (and
    re-swapped) whenever absorption needs more selections.
    """
    n = bits0.shape[0]
    g = edges.graph
    bits = bits0.copy()
    ones = ones0
    done = 0
    want = max(start_len, ell + 1)
    while True:
        scratch = edges.prefix(want).copy()
        if len(scratch) <= ell:
            raise StepCapExceeded("sequence not extendable past swap")
        scratch[ell - 1], scratch[ell] = scratch[ell], scratch[ell - 1]
        absorbed, _, ones = consensus_scan(bits, ones, scratch,
                                           g.edge_src, g.edge_dst,
                                           done, len(scratch))
        if absorbed:
            return 1 if ones == n else 0
        done = len(scratch)
        if done >= cap:
            raise StepCapExceeded(f"no consensus within {cap} steps")
        want = 2 * len(scratch)
