"""Candidate-rule enumeration over the non-necessary factors.

Every non-empty conjunction over the chosen factors (up to `max_order`
literals) is screened against two filters: a minimum matched-case count
(`cutoff`, total matches, not just positives) and a minimum sufficiency
consistency (compared with >=, so a rule at exactly the threshold is kept).
No minimality pruning happens here; a rule and its specializations may
coexist, the covering stage decides what survives.

Enumeration walks the conjunction lattice level by level (order 1, then 2,
...), extending only prefixes that still meet the cutoff. Matching is
anti-monotone (adding a literal never enlarges the matched set), so a prefix
below the cutoff can never recover and the whole subtree is skipped. The
level-wise walk streams rules in the final deterministic order, literal
count ascending then lexicographic on (factor index, value), and holds only
the current frontier of extendable prefixes, never the full lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .model import (
    CandidateRule,
    CaseTable,
    Conjunction,
    FactorSchema,
    InputError,
    Literal,
    as_fraction,
)


@dataclass(frozen=True)
class CandidateParams:
    decision_label: int
    consistency_threshold: Fraction = Fraction(4, 5)
    cutoff: int = 2
    max_order: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "consistency_threshold", as_fraction(self.consistency_threshold))
        if not 0 < self.consistency_threshold <= 1:
            raise InputError(f"consistency threshold must be in (0,1], got {self.consistency_threshold}")
        if self.cutoff < 1:
            raise InputError(f"cutoff must be >= 1, got {self.cutoff}")
        if self.max_order is not None and self.max_order < 1:
            raise InputError(f"max_order must be >= 1, got {self.max_order}")


def _check_factor_set(table: CaseTable, factor_set: Sequence[int]) -> tuple[int, ...]:
    nf = len(table.schema.factors)
    factors = tuple(sorted(set(int(i) for i in factor_set)))
    for i in factors:
        if not 0 <= i < nf:
            raise InputError(f"factor index {i} out of range (table has {nf} factors)")
    return factors


def iter_candidates(
    table: CaseTable, factor_set: Sequence[int], params: CandidateParams
) -> Iterator[CandidateRule]:
    """Stream passing rules in deterministic order; see module docstring."""
    table.require_unique_ids()
    factors = _check_factor_set(table, factor_set)
    if not factors:
        return
    max_order = params.max_order if params.max_order is not None else len(factors)
    max_order = min(max_order, len(factors))

    pos_mask = table.positive_mask(params.decision_label)
    ids = table.ids
    level_masks = {
        j: [table.values[:, j] == v for v in range(table.schema.factors[j].levels)] for j in factors
    }

    # Frontier entries: (literals tuple, boolean match mask), all meeting the cutoff.
    frontier: list[tuple[tuple[Literal, ...], np.ndarray]] = [((), np.ones(len(table), dtype=bool))]
    for _order in range(1, max_order + 1):
        next_frontier: list[tuple[tuple[Literal, ...], np.ndarray]] = []
        for lits, mask in frontier:
            start = lits[-1].factor_index + 1 if lits else factors[0]
            for j in factors:
                if j < start:
                    continue
                for v in range(table.schema.factors[j].levels):
                    child_mask = mask & level_masks[j][v]
                    count = int(child_mask.sum())
                    if count < params.cutoff:
                        continue
                    child_lits = lits + (Literal(j, v),)
                    p = int((child_mask & pos_mask).sum())
                    consistency = Fraction(p, count)
                    if consistency >= params.consistency_threshold:
                        matched_idx = np.nonzero(child_mask)[0]
                        pos_idx = np.nonzero(child_mask & pos_mask)[0]
                        yield CandidateRule(
                            conjunction=Conjunction(child_lits),
                            matched=frozenset(ids[i] for i in matched_idx),
                            positives_matched=frozenset(ids[i] for i in pos_idx),
                            consistency=consistency,
                        )
                    next_frontier.append((child_lits, child_mask))
        frontier = next_frontier
        if not frontier:
            break


def enumerate_candidates(
    table: CaseTable, factor_set: Sequence[int], params: CandidateParams
) -> list[CandidateRule]:
    """All rules passing both filters, deterministically ordered."""
    return list(iter_candidates(table, factor_set, params))


def candidate_count_bound(
    schema: FactorSchema, factor_set: Sequence[int] | None = None, max_order: int | None = None
) -> int:
    """Number of conjunctions the enumeration would visit without pruning.

    With full order this is prod(levels_j + 1) - 1 over the factor set; a
    truncated order sums the products over all subsets of size <= max_order
    (elementary symmetric sums of the level counts). Used as a pre-flight
    cost estimate; the CLI warns when it exceeds 2**63.
    """
    indices = range(len(schema.factors)) if factor_set is None else sorted(set(factor_set))
    levels = [schema.factors[i].levels for i in indices]
    m = len(levels)
    order = m if max_order is None else min(max_order, m)
    if order < 0:
        raise InputError("max_order must be non-negative")
    # coeffs[k] = sum over k-subsets of the product of their level counts
    coeffs = [1] + [0] * order
    for lv in levels:
        for k in range(min(order, m), 0, -1):
            coeffs[k] += coeffs[k - 1] * lv
    return sum(coeffs[1:])
