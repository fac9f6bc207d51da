"""Greedy maximal-coverage rule selection and solution assembly.

The selection loop repeatedly picks, among the rules whose marginal gain
(positive cases matched but not yet covered) is at least `unique_cover`, the
one with the largest gain. Ties break by higher rule consistency, then fewer
literals, then the deterministic candidate ordering, so a run is exactly
reproducible. The unique-cover floor binds at selection time against the
then-uncovered cases; a rule's final unique coverage, reported per rule, can
end up lower once later picks overlap it. There is no backward pruning or
replacement, pure forward greedy.

`exhaustive_cover_oracle` is an independent exact search over rule subsets
used by tests and the `--oracle` flag; a subset is admissible when some pick
order gives every rule a marginal gain of at least `unique_cover`, which by
construction includes every sequence the greedy loop can produce.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .model import (
    CandidateRule,
    CaseTable,
    Conjunction,
    InputError,
    Literal,
    Solution,
    UndefinedRatioError,
    VacuousSolutionError,
    match_mask,
    rule_from_conjunction,
)

ORACLE_CANDIDATE_LIMIT = 20


@dataclass(frozen=True)
class CoverParams:
    decision_label: int
    unique_cover: int = 2

    def __post_init__(self) -> None:
        if self.unique_cover < 1:
            raise InputError(f"unique_cover must be >= 1, got {self.unique_cover}")


def greedy_cover(
    candidates: Sequence[CandidateRule], positives: Iterable[str], params: CoverParams
) -> list[CandidateRule]:
    """Forward greedy selection; empty result means no admissible cover."""
    uncovered = set(positives)
    remaining = list(enumerate(candidates))
    selected: list[CandidateRule] = []
    while uncovered and remaining:
        best_key: tuple | None = None
        best_at = -1
        for at, (idx, rule) in enumerate(remaining):
            gain = len(rule.positives_matched & uncovered)
            if gain < params.unique_cover:
                continue
            key = (gain, rule.consistency, -len(rule.conjunction.literals), -idx)
            if best_key is None or key > best_key:
                best_key = key
                best_at = at
        if best_key is None:
            break
        _, rule = remaining.pop(best_at)
        selected.append(rule)
        uncovered -= rule.positives_matched
    return selected


def unique_coverage(rules: Sequence[CandidateRule], positives: Iterable[str]) -> tuple[int, ...]:
    """Per rule: positives it matches that no other listed rule matches."""
    pos = frozenset(positives)
    out = []
    for i, rule in enumerate(rules):
        others: set[str] = set()
        for j, other in enumerate(rules):
            if j != i:
                others |= other.positives_matched
        out.append(len((rule.positives_matched & pos) - others))
    return tuple(out)


def assemble_solution(
    necessary: Sequence[Literal],
    selected: Sequence[CandidateRule],
    table: CaseTable,
    params: CoverParams,
) -> Solution:
    """Conjoin the necessary literals with the selected rules and score the result.

    Metrics are computed on the full table with the necessary literals folded
    into every rule's match predicate (they were excluded from enumeration, so
    the stored matched sets do not account for them). With no selected rules
    the solution is the bare conjunction of the necessary literals; with
    neither, there is nothing to report and VacuousSolutionError is raised.
    """
    necessary = tuple(sorted(necessary))
    if not selected and not necessary:
        raise VacuousSolutionError("no admissible cover and no necessary conditions")
    table.require_unique_ids()
    base = Conjunction(necessary)

    positives = table.positive_ids(params.decision_label)
    if not positives:
        raise UndefinedRatioError(f"no cases with outcome {params.decision_label}")

    effective: list[CandidateRule] = []
    for rule in selected:
        conj = base.merge(rule.conjunction)
        mask = match_mask(conj, table)
        if not mask.any():
            raise UndefinedRatioError(
                "selected rule matches no cases once the necessary conditions are conjoined"
            )
        eff = rule_from_conjunction(conj, table, params.decision_label)
        # Keep the selected conjunction; sets and consistency are the effective ones.
        effective.append(
            CandidateRule(rule.conjunction, eff.matched, eff.positives_matched, eff.consistency)
        )

    if effective:
        union: set[str] = set()
        for r in effective:
            union |= r.matched
        covered = len(union & positives)
        consistency = Fraction(covered, len(union))
        coverage = Fraction(covered, len(positives))
        uniq = unique_coverage(effective, positives)
    else:
        base_rule = rule_from_conjunction(base, table, params.decision_label)
        covered = len(base_rule.positives_matched)
        consistency = base_rule.consistency
        coverage = Fraction(covered, len(positives))
        uniq = ()

    return Solution(
        necessary=necessary,
        rules=tuple(effective),
        decision_label=params.decision_label,
        solution_consistency=consistency,
        solution_coverage=coverage,
        per_rule_unique_coverage=uniq,
    )


def exhaustive_cover_oracle(
    candidates: Sequence[CandidateRule],
    positives: Iterable[str],
    params: CoverParams,
    max_subset_size: int | None = None,
) -> list[CandidateRule]:
    """Exact best admissible selection, for cross-checking the greedy loop.

    Maximizes (covered positives, fewer rules, higher union consistency),
    with the lexicographically smallest candidate-index set as the final
    tie-break. Admissibility means some pick order exists in which every
    rule contributes at least `unique_cover` new positives, checked by a
    DP over subsets, so the search is exponential and the candidate list
    is capped at 20.
    """
    n = len(candidates)
    if n > ORACLE_CANDIDATE_LIMIT:
        raise InputError(
            f"{n} candidate rules exceed the oracle limit of {ORACLE_CANDIDATE_LIMIT}; "
            "tighten the filters or skip --oracle"
        )
    pos = frozenset(positives)
    cap = n if max_subset_size is None else min(max_subset_size, n)

    all_matched: frozenset[str] = frozenset().union(*(r.matched for r in candidates)) if candidates else frozenset()
    all_ids = sorted(pos | all_matched)
    bit_of = {cid: 1 << k for k, cid in enumerate(all_ids)}
    pos_mask = sum(bit_of[c] for c in pos)
    pos_bits = [sum(bit_of[c] for c in rule.positives_matched & pos) for rule in candidates]
    matched_bits = [sum(bit_of[c] for c in rule.matched) for rule in candidates]

    total = 1 << n
    covered = [0] * total  # positives covered by the subset
    union = [0] * total  # all cases matched by the subset
    reachable = [False] * total
    reachable[0] = True
    for sub in range(1, total):
        low = sub & -sub
        prev = sub ^ low
        covered[sub] = covered[prev] | pos_bits[low.bit_length() - 1]
        union[sub] = union[prev] | matched_bits[low.bit_length() - 1]
        if sub.bit_count() > cap:
            continue
        s = sub
        while s:
            b = s & -s
            s ^= b
            rest = sub ^ b
            if reachable[rest]:
                gain = (pos_bits[b.bit_length() - 1] & ~covered[rest]).bit_count()
                if gain >= params.unique_cover:
                    reachable[sub] = True
                    break

    best_sub = 0
    best_key: tuple = (0, 0, Fraction(0), ())
    for sub in range(total):
        if not reachable[sub] or sub.bit_count() > cap:
            continue
        cov = covered[sub].bit_count()
        u = union[sub]
        cons = Fraction((u & pos_mask).bit_count(), u.bit_count()) if u else Fraction(0)
        idxs = tuple(i for i in range(n) if sub >> i & 1)
        key = (cov, -len(idxs), cons, tuple(-i for i in idxs))
        if key > best_key:
            best_key = key
            best_sub = sub
    return [candidates[i] for i in range(n) if best_sub >> i & 1]
