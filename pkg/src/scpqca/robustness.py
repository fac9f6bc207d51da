"""Internal and external validity protocols.

Internal validity reruns the pipeline over a grid of (consistency threshold,
cutoff, unique cover) settings and reports candidate counts and solutions per
cell. External validity is a jackknife: repeatedly drop a fraction of the
cases, rerun, and classify each resulting configuration against the full-data
solution.

Classification compares literal sets structurally. A test configuration is
Replicated when its literal set equals an original's; a Superset when its
literals are a proper subset of an original's (fewer constraints, so it
covers a superset of cases); a Subset when they are a proper superset; and
NotIdentified otherwise. When several originals relate to the same test
configuration, Replicated wins over Superset wins over Subset. Necessary
condition literals are folded into every configuration on both sides before
comparing, so a necessity shift between the full and subsampled data shows up
as Superset/Subset instead of silently matching.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .model import CaseTable, Conjunction, InputError, ScpqcaError
from .pipeline import AnalysisParams, SolveResult, solve, with_thresholds


class ValidityClass(Enum):
    REPLICATED = "replicated"
    SUPERSET = "superset"
    SUBSET = "subset"
    NOT_IDENTIFIED = "not identified"


def classify_configuration(
    test_rule: Conjunction, original_rules: Sequence[Conjunction]
) -> ValidityClass:
    return classify_with_match(test_rule, original_rules)[0]


def classify_with_match(
    test_rule: Conjunction, original_rules: Sequence[Conjunction]
) -> tuple[ValidityClass, int | None]:
    """Class plus the index of the first original it relates to (if any)."""
    test = test_rule.literal_set()
    for i, orig in enumerate(original_rules):
        if test == orig.literal_set():
            return ValidityClass.REPLICATED, i
    for i, orig in enumerate(original_rules):
        if test < orig.literal_set():
            return ValidityClass.SUPERSET, i
    for i, orig in enumerate(original_rules):
        if test > orig.literal_set():
            return ValidityClass.SUBSET, i
    return ValidityClass.NOT_IDENTIFIED, None


# ---------------------------------------------------------------------------
# Internal validity


@dataclass(frozen=True)
class SweepCell:
    params: AnalysisParams
    result: SolveResult | None
    candidate_count: int
    error: str | None = None


def internal_sweep(
    table: CaseTable,
    grid: Sequence[tuple[Fraction | float | str, int, int]],
    base_params: AnalysisParams,
) -> list[SweepCell]:
    """One pipeline run per (consistency_threshold, cutoff, unique_cover) point.

    A failing cell is recorded with its error and the sweep continues.
    """
    if not grid:
        raise InputError("sweep grid must not be empty")
    cells: list[SweepCell] = []
    for consistency, cutoff, unique in grid:
        params = with_thresholds(
            base_params, consistency_threshold=consistency, cutoff=cutoff, unique_cover=unique
        )
        try:
            result = solve(table, params)
            cells.append(SweepCell(params, result, len(result.candidates)))
        except ScpqcaError as exc:
            cells.append(SweepCell(params, None, 0, error=str(exc)))
    return cells


# ---------------------------------------------------------------------------
# External validity


def derive_seed(seed: int, repetition: int) -> int:
    """Deterministic, platform-independent child seed per repetition."""
    digest = hashlib.sha256(f"{seed}:{repetition}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class Repetition:
    removed_ids: tuple[str, ...]
    configurations: tuple[Conjunction, ...]
    classes: tuple[tuple[ValidityClass, int | None], ...]
    degenerate: bool = False
    error: str | None = None


@dataclass(frozen=True)
class ValidityReport:
    originals: tuple[Conjunction, ...]
    repetitions: tuple[Repetition, ...]
    fraction: float
    seed: int

    def class_totals(self) -> dict[ValidityClass, int]:
        """Test-side tallies: every test configuration counted once."""
        totals = {c: 0 for c in ValidityClass}
        for rep in self.repetitions:
            for cls, _ in rep.classes:
                totals[cls] += 1
        return totals

    def per_original_tallies(self) -> list[dict[ValidityClass, int]]:
        """Per original configuration, in how many repetitions it was matched.

        Within one repetition an original counts at most once, under the best
        relation any test configuration achieved against it.
        """
        order = [ValidityClass.REPLICATED, ValidityClass.SUPERSET, ValidityClass.SUBSET]
        tallies = [{c: 0 for c in order} for _ in self.originals]
        for rep in self.repetitions:
            best: dict[int, ValidityClass] = {}
            for cls, match in rep.classes:
                if match is None or cls is ValidityClass.NOT_IDENTIFIED:
                    continue
                prev = best.get(match)
                if prev is None or order.index(cls) < order.index(prev):
                    best[match] = cls
            for match, cls in best.items():
                tallies[match][cls] += 1
        return tallies

    def per_original_accuracy(self) -> list[Fraction]:
        """Share of repetitions in which each original was matched at all."""
        reps = len(self.repetitions)
        return [
            Fraction(sum(t.values()), reps) if reps else Fraction(0)
            for t in self.per_original_tallies()
        ]

    def overall_accuracy(self) -> Fraction:
        """Classified test configurations (anything but NotIdentified) over all."""
        totals = self.class_totals()
        all_configs = sum(totals.values())
        if all_configs == 0:
            return Fraction(0)
        return Fraction(all_configs - totals[ValidityClass.NOT_IDENTIFIED], all_configs)


def _configurations(result: SolveResult) -> tuple[Conjunction, ...]:
    return result.solution.configurations()


def external_validity(
    table: CaseTable,
    params: AnalysisParams,
    fraction: float = 0.10,
    reps: int = 10,
    seed: int = 0,
) -> ValidityReport:
    """Jackknife the table `reps` times and classify the resulting solutions.

    Each repetition removes ceil(fraction * n) distinct cases, drawn from its
    own (seed, repetition)-derived stream so repetitions are order independent.
    A repetition whose subsample cannot be solved (for instance no positive
    cases survive) is recorded as degenerate with no configurations.
    """
    if not 0 < fraction < 1:
        raise InputError(f"fraction must be in (0,1), got {fraction}")
    if reps < 1:
        raise InputError(f"reps must be >= 1, got {reps}")
    table.require_unique_ids()

    full = solve(table, params)
    originals = _configurations(full)

    n = len(table)
    k = math.ceil(fraction * n)
    if k >= n:
        raise InputError(f"removing {k} of {n} cases leaves nothing to analyse")

    repetitions: list[Repetition] = []
    for rep in range(reps):
        rng = random.Random(derive_seed(seed, rep))
        removed = sorted(rng.sample(range(n), k))
        keep = np.array([i for i in range(n) if i not in set(removed)], dtype=np.intp)
        sub = CaseTable(
            schema=table.schema,
            ids=tuple(table.ids[i] for i in keep),
            values=table.values[keep],
            outcomes=table.outcomes[keep],
        )
        removed_ids = tuple(table.ids[i] for i in removed)
        try:
            result = solve(sub, params)
        except ScpqcaError as exc:
            repetitions.append(
                Repetition(removed_ids, (), (), degenerate=True, error=str(exc))
            )
            continue
        configs = _configurations(result)
        classes = tuple(classify_with_match(c, originals) for c in configs)
        repetitions.append(Repetition(removed_ids, configs, classes))

    return ValidityReport(
        originals=originals, repetitions=tuple(repetitions), fraction=fraction, seed=seed
    )
