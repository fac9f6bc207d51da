"""Domain types and the consistency/coverage arithmetic shared by all stages.

Everything here is crisp set algebra: a case either matches a conjunction of
factor=value literals or it does not, and every metric is a ratio of two case
counts. Ratios are kept as exact `fractions.Fraction` values so that threshold
comparisons and tie-breaks never depend on floating-point rounding; convert to
float only for display.

Metric conventions (for a decision label ``o``):

* necessity consistency of a literal C=c:
  |cases with C=c and outcome o| / |cases with outcome o|
* sufficiency consistency of a conjunction X:
  |cases matching X with outcome o| / |cases matching X|
* solution consistency / coverage of a rule set, with U the union of the rules'
  matched cases and P the outcome-o cases:
  |U ∩ P| / |U|  and  |U ∩ P| / |P|

Ratios with an empty denominator raise `UndefinedRatioError`; silently
returning 0 would corrupt threshold filtering downstream.

All types are immutable after construction and all operations are pure, so
values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np


class ScpqcaError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ScpqcaError, ValueError):
    """Invalid data, parameters, or schema mismatch."""


class UndefinedRatioError(ScpqcaError, ArithmeticError):
    """A consistency/coverage ratio was requested with an empty denominator."""


class VacuousSolutionError(ScpqcaError):
    """No admissible cover and no necessary conditions: nothing to report."""


def as_fraction(x: int | float | str | Fraction) -> Fraction:
    """Exact rational from a threshold-like value.

    Floats go through their shortest decimal repr, so ``as_fraction(0.8)``
    is exactly 4/5 rather than the binary float closest to 0.8. Strings may
    be decimals ("0.8") or ratios ("4/5").
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        try:
            return Fraction(repr(x))
        except ValueError:
            raise InputError(f"not a valid ratio: {x!r}") from None
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a valid ratio: {x!r}") from exc
    raise InputError(f"cannot interpret {type(x).__name__} as a ratio")


# ---------------------------------------------------------------------------
# Schema and cases


@dataclass(frozen=True)
class Factor:
    """One column: a name, its admissible level count, and optional provenance.

    `labels` maps dense levels back to the raw labels seen at ingestion
    (index = level). `cutpoints` records threshold calibration. Both are
    None for columns that were already dense integer levels.
    """

    name: str
    levels: int
    labels: tuple[str, ...] | None = None
    cutpoints: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise InputError("factor name must be non-empty")
        if self.levels < 2:
            raise InputError(f"factor {self.name!r}: level count must be >= 2")
        if self.labels is not None and len(self.labels) != self.levels:
            raise InputError(f"factor {self.name!r}: {len(self.labels)} labels for {self.levels} levels")


@dataclass(frozen=True)
class FactorSchema:
    """Ordered condition factors plus the outcome column."""

    factors: tuple[Factor, ...]
    outcome: Factor

    def __post_init__(self) -> None:
        names = [f.name for f in self.factors]
        if len(set(names)) != len(names):
            raise InputError("factor names must be unique")
        if self.outcome.name in names:
            raise InputError(f"outcome name {self.outcome.name!r} collides with a factor")

    @property
    def outcome_name(self) -> str:
        return self.outcome.name

    @property
    def outcome_levels(self) -> int:
        return self.outcome.levels

    def factor_index(self, name: str) -> int:
        for i, f in enumerate(self.factors):
            if f.name == name:
                return i
        raise InputError(f"unknown factor {name!r}")

    def level_counts(self) -> tuple[int, ...]:
        return tuple(f.levels for f in self.factors)


def binary_schema(names: Sequence[str], outcome_name: str = "O") -> FactorSchema:
    """Convenience constructor: all factors and the outcome binary."""
    return FactorSchema(
        factors=tuple(Factor(n, 2) for n in names),
        outcome=Factor(outcome_name, 2),
    )


@dataclass(frozen=True)
class Case:
    id: str
    values: tuple[int, ...]
    outcome: int


@dataclass(frozen=True, eq=False)
class CaseTable:
    """A calibrated dataset: cases x factors with dense integer levels.

    Values and outcomes are stored as read-only numpy arrays; `Case` objects
    are materialized on demand. Case ids are not required to be unique at the
    type level (sampling produces fresh ids, ingestion enforces uniqueness),
    but the analysis entry points insist on unique ids before computing
    case-set metrics.
    """

    schema: FactorSchema
    ids: tuple[str, ...]
    values: np.ndarray
    outcomes: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.int16)
        outcomes = np.asarray(self.outcomes, dtype=np.int16)
        n = len(self.ids)
        nf = len(self.schema.factors)
        if values.shape != (n, nf):
            raise InputError(f"values shape {values.shape} does not match {n} cases x {nf} factors")
        if outcomes.shape != (n,):
            raise InputError(f"outcomes shape {outcomes.shape} does not match {n} cases")
        for j, f in enumerate(self.schema.factors):
            if n and (values[:, j].min() < 0 or values[:, j].max() >= f.levels):
                bad = int(np.argmax((values[:, j] < 0) | (values[:, j] >= f.levels)))
                raise InputError(
                    f"case {self.ids[bad]!r}: value {int(values[bad, j])} out of range "
                    f"for factor {f.name!r} (levels 0..{f.levels - 1})"
                )
        if n and (outcomes.min() < 0 or outcomes.max() >= self.schema.outcome_levels):
            bad = int(np.argmax((outcomes < 0) | (outcomes >= self.schema.outcome_levels)))
            raise InputError(
                f"case {self.ids[bad]!r}: outcome {int(outcomes[bad])} out of range "
                f"(levels 0..{self.schema.outcome_levels - 1})"
            )
        values.setflags(write=False)
        outcomes.setflags(write=False)
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "outcomes", outcomes)

    @classmethod
    def from_cases(cls, schema: FactorSchema, cases: Iterable[Case]) -> "CaseTable":
        cases = list(cases)
        nf = len(schema.factors)
        for c in cases:
            if len(c.values) != nf:
                raise InputError(f"case {c.id!r}: {len(c.values)} values for {nf} factors")
        return cls(
            schema=schema,
            ids=tuple(c.id for c in cases),
            values=np.array([c.values for c in cases], dtype=np.int16).reshape(len(cases), nf),
            outcomes=np.array([c.outcome for c in cases], dtype=np.int16),
        )

    def __len__(self) -> int:
        return len(self.ids)

    def case(self, i: int) -> Case:
        return Case(self.ids[i], tuple(int(v) for v in self.values[i]), int(self.outcomes[i]))

    def __iter__(self) -> Iterator[Case]:
        return (self.case(i) for i in range(len(self)))

    @cached_property
    def cases(self) -> tuple[Case, ...]:
        return tuple(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CaseTable):
            return NotImplemented
        return (
            self.schema == other.schema
            and self.ids == other.ids
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.outcomes, other.outcomes)
        )

    __hash__ = None  # type: ignore[assignment]

    def has_unique_ids(self) -> bool:
        return len(set(self.ids)) == len(self.ids)

    def require_unique_ids(self) -> None:
        if not self.has_unique_ids():
            seen: set[str] = set()
            for i in self.ids:
                if i in seen:
                    raise InputError(f"duplicate case id {i!r}; deduplicate or relabel before analysis")
                seen.add(i)

    def positive_mask(self, decision_label: int) -> np.ndarray:
        self._check_label(decision_label)
        return self.outcomes == decision_label

    def positive_ids(self, decision_label: int) -> frozenset[str]:
        mask = self.positive_mask(decision_label)
        return frozenset(self.ids[i] for i in np.nonzero(mask)[0])

    def _check_label(self, decision_label: int) -> None:
        if not 0 <= decision_label < self.schema.outcome_levels:
            raise InputError(
                f"decision label {decision_label} out of range "
                f"(outcome levels 0..{self.schema.outcome_levels - 1})"
            )


# ---------------------------------------------------------------------------
# Literals, conjunctions, rules


@dataclass(frozen=True, order=True)
class Literal:
    """A factor=value atom."""

    factor_index: int
    value: int

    def __post_init__(self) -> None:
        if self.factor_index < 0 or self.value < 0:
            raise InputError(f"literal ({self.factor_index},{self.value}) must be non-negative")


@dataclass(frozen=True)
class Conjunction:
    """A partial assignment: at most one literal per factor, rest don't-care.

    The empty conjunction matches every case; it is legal as an internal
    sentinel only and is never emitted as a candidate rule.
    """

    literals: tuple[Literal, ...]

    def __post_init__(self) -> None:
        lits = tuple(sorted(self.literals))
        seen: set[int] = set()
        for lit in lits:
            if lit.factor_index in seen:
                raise InputError(f"conjunction assigns factor index {lit.factor_index} twice")
            seen.add(lit.factor_index)
        object.__setattr__(self, "literals", lits)

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> "Conjunction":
        return cls(tuple(Literal(i, v) for i, v in pairs))

    def __len__(self) -> int:
        return len(self.literals)

    def literal_set(self) -> frozenset[Literal]:
        return frozenset(self.literals)

    def factor_indices(self) -> tuple[int, ...]:
        return tuple(lit.factor_index for lit in self.literals)

    def sort_key(self) -> tuple:
        """Deterministic ordering key: size first, then literal lexicographic."""
        return (len(self.literals), tuple((l.factor_index, l.value) for l in self.literals))

    def merge(self, other: "Conjunction") -> "Conjunction":
        """Union of two partial assignments; conflicting values are an error."""
        mine = {l.factor_index: l.value for l in self.literals}
        for lit in other.literals:
            if mine.get(lit.factor_index, lit.value) != lit.value:
                raise InputError(
                    f"conflicting values for factor index {lit.factor_index}: "
                    f"{mine[lit.factor_index]} vs {lit.value}"
                )
            mine[lit.factor_index] = lit.value
        return Conjunction(tuple(Literal(i, v) for i, v in mine.items()))

    def matches_values(self, values: Sequence[int]) -> bool:
        for lit in self.literals:
            if lit.factor_index >= len(values):
                raise InputError(f"factor index {lit.factor_index} out of range for {len(values)} factors")
            if values[lit.factor_index] != lit.value:
                return False
        return True


def matches(conjunction: Conjunction, case: Case) -> bool:
    """True iff every literal agrees with the case (empty matches all)."""
    return conjunction.matches_values(case.values)


def match_mask(conjunction: Conjunction, table: CaseTable) -> np.ndarray:
    """Boolean mask of the table's cases matched by the conjunction."""
    n = len(table)
    mask = np.ones(n, dtype=bool)
    nf = len(table.schema.factors)
    for lit in conjunction.literals:
        if lit.factor_index >= nf:
            raise InputError(f"factor index {lit.factor_index} out of range for {nf} factors")
        if lit.value >= table.schema.factors[lit.factor_index].levels:
            raise InputError(
                f"value {lit.value} out of range for factor "
                f"{table.schema.factors[lit.factor_index].name!r}"
            )
        mask &= table.values[:, lit.factor_index] == lit.value
    return mask


def matched_ids(conjunction: Conjunction, table: CaseTable) -> frozenset[str]:
    mask = match_mask(conjunction, table)
    return frozenset(table.ids[i] for i in np.nonzero(mask)[0])


@dataclass(frozen=True)
class CandidateRule:
    """A conjunction with its matched cases and sufficiency consistency."""

    conjunction: Conjunction
    matched: frozenset[str]
    positives_matched: frozenset[str]
    consistency: Fraction

    def __post_init__(self) -> None:
        if not self.matched:
            raise InputError("candidate rule must match at least one case")
        if not self.positives_matched <= self.matched:
            raise InputError("positives_matched must be a subset of matched")
        expected = Fraction(len(self.positives_matched), len(self.matched))
        if self.consistency != expected:
            raise InputError(f"consistency {self.consistency} != {expected} implied by the case sets")

    @classmethod
    def from_sets(cls, conjunction: Conjunction, matched: Iterable[str], positives: Iterable[str]) -> "CandidateRule":
        m = frozenset(matched)
        p = frozenset(positives)
        return cls(conjunction, m, p, Fraction(len(p), len(m)) if m else Fraction(0))


@dataclass(frozen=True)
class Solution:
    """Necessary literals conjoined with a disjunction of selected rules.

    `rules` keeps the selection order. When necessary literals were excluded
    from enumeration, each rule's matched/positives/consistency here are the
    *effective* ones, recomputed with the necessary literals conjoined; the
    stored conjunction stays the selected rule itself so reports can show the
    necessary conditions separately.
    """

    necessary: tuple[Literal, ...]
    rules: tuple[CandidateRule, ...]
    decision_label: int
    solution_consistency: Fraction
    solution_coverage: Fraction
    per_rule_unique_coverage: tuple[int, ...]

    def __post_init__(self) -> None:
        if not (0 <= self.solution_consistency <= 1 and 0 <= self.solution_coverage <= 1):
            raise InputError("solution metrics must lie in [0,1]")
        if len(self.per_rule_unique_coverage) != len(self.rules):
            raise InputError("one unique-coverage count per rule required")
        if len(set(self.rules)) != len(self.rules):
            raise InputError("selected rules must be pairwise distinct")
        object.__setattr__(self, "necessary", tuple(sorted(self.necessary)))

    def configurations(self) -> tuple[Conjunction, ...]:
        """Effective configurations: each rule with the necessary literals folded in."""
        base = Conjunction(self.necessary)
        if not self.rules:
            return (base,) if self.necessary else ()
        return tuple(base.merge(r.conjunction) for r in self.rules)


# ---------------------------------------------------------------------------
# Metrics


def sufficiency_consistency(conjunction: Conjunction, table: CaseTable, decision_label: int) -> Fraction:
    """Share of conjunction-matching cases whose outcome is the decision label."""
    mask = match_mask(conjunction, table)
    m = int(mask.sum())
    if m == 0:
        raise UndefinedRatioError("conjunction matches no cases; sufficiency consistency undefined")
    p = int((mask & table.positive_mask(decision_label)).sum())
    return Fraction(p, m)


def necessity_consistency(literal: Literal, table: CaseTable, decision_label: int) -> Fraction:
    """Share of decision-label cases that carry the literal."""
    pos = table.positive_mask(decision_label)
    total = int(pos.sum())
    if total == 0:
        raise UndefinedRatioError(f"no cases with outcome {decision_label}; necessity consistency undefined")
    both = int((match_mask(Conjunction((literal,)), table) & pos).sum())
    return Fraction(both, total)


def solution_metrics(
    rules: Sequence[CandidateRule], table: CaseTable, decision_label: int
) -> tuple[Fraction, Fraction]:
    """(consistency, coverage) of the union of the rules' matched cases.

    Uses the rules' stored matched sets, so callers that conjoin necessary
    conditions must pass rules whose sets were recomputed accordingly.
    """
    if not rules:
        raise InputError("solution metrics need at least one rule")
    union: set[str] = set()
    for r in rules:
        union |= r.matched
    if not union:
        raise UndefinedRatioError("union of matched cases is empty")
    positives = table.positive_ids(decision_label)
    if not positives:
        raise UndefinedRatioError(f"no cases with outcome {decision_label}")
    covered = len(union & positives)
    return Fraction(covered, len(union)), Fraction(covered, len(positives))


def rule_from_conjunction(conjunction: Conjunction, table: CaseTable, decision_label: int) -> CandidateRule:
    """Build a CandidateRule by evaluating the conjunction against the table."""
    mask = match_mask(conjunction, table)
    if not mask.any():
        raise UndefinedRatioError("conjunction matches no cases")
    pos = mask & table.positive_mask(decision_label)
    ids = table.ids
    return CandidateRule(
        conjunction=conjunction,
        matched=frozenset(ids[i] for i in np.nonzero(mask)[0]),
        positives_matched=frozenset(ids[i] for i in np.nonzero(pos)[0]),
        consistency=Fraction(int(pos.sum()), int(mask.sum())),
    )


# ---------------------------------------------------------------------------
# Expression rendering


def _alpha_names(schema: FactorSchema) -> bool:
    return all(f.name.isalpha() for f in schema.factors)


def _case_unambiguous(schema: FactorSchema) -> bool:
    lowered = [f.name.lower() for f in schema.factors]
    return len(set(lowered)) == len(lowered)


def conjunction_expr(conjunction: Conjunction, schema: FactorSchema) -> str:
    """Explicit form: 'MS=0*PI=1*LP=1'."""
    if not conjunction.literals:
        return "TRUE"
    return "*".join(f"{schema.factors[l.factor_index].name}={l.value}" for l in conjunction.literals)


def conjunction_shorthand(conjunction: Conjunction, schema: FactorSchema) -> str:
    """Compact form when factor names permit it.

    When every referenced factor is binary and names are alphabetic, the
    usual case convention applies: uppercase name = level 1, lowercase =
    level 0 ('ms*PI*LP'). Otherwise alphabetic names get the level digit
    appended ('A0*B2'). Falls back to the explicit form when names would
    make the output ambiguous.
    """
    if not conjunction.literals:
        return "TRUE"
    if not _alpha_names(schema):
        return conjunction_expr(conjunction, schema)
    if _case_unambiguous(schema) and all(
        schema.factors[l.factor_index].levels == 2 for l in conjunction.literals
    ):
        parts = []
        for l in conjunction.literals:
            name = schema.factors[l.factor_index].name
            parts.append(name.upper() if l.value == 1 else name.lower())
        return "*".join(parts)
    return "*".join(f"{schema.factors[l.factor_index].name}{l.value}" for l in conjunction.literals)


def dnf_shorthand(terms: Sequence[Conjunction], schema: FactorSchema) -> str:
    return "+".join(conjunction_shorthand(t, schema) for t in terms)
