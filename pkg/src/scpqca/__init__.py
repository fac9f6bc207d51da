"""scpQCA: configurational comparative analysis with set-cover simplification.

The package analyses crisp multi-value case data in two steps: necessity
analysis over single literals, then enumeration of sufficiency-consistent
candidate rules and a greedy maximal-coverage selection under a unique-cover
floor. Synthetic planted-pathway experiments and internal/external validity
protocols are included.
"""

from .candidates import CandidateParams, candidate_count_bound, enumerate_candidates, iter_candidates
from .cover import CoverParams, assemble_solution, exhaustive_cover_oracle, greedy_cover, unique_coverage
from .ingest import (
    CalibrationSpec,
    Cutpoints,
    Passthrough,
    deduplicate,
    load_csv,
    schema_metadata,
    to_csv_string,
    write_csv,
    write_schema_json,
)
from .model import (
    CandidateRule,
    Case,
    CaseTable,
    Conjunction,
    Factor,
    FactorSchema,
    InputError,
    Literal,
    ScpqcaError,
    Solution,
    UndefinedRatioError,
    VacuousSolutionError,
    as_fraction,
    binary_schema,
    conjunction_expr,
    conjunction_shorthand,
    dnf_shorthand,
    matches,
    match_mask,
    matched_ids,
    necessity_consistency,
    rule_from_conjunction,
    solution_metrics,
    sufficiency_consistency,
)
from .necessity import exclude_necessary, necessary_conditions
from .pathways import (
    ExperimentReport,
    ExperimentSpec,
    PathwaySpec,
    full_truth_table,
    generate_experiment_table,
    parse_pathway,
    plant_outcome,
    run_experiment,
    sample_and_confound,
    synth_schema,
)
from .pipeline import AnalysisParams, SolveResult, solve
from .robustness import (
    ValidityClass,
    ValidityReport,
    classify_configuration,
    derive_seed,
    external_validity,
    internal_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisParams",
    "CalibrationSpec",
    "CandidateParams",
    "CandidateRule",
    "Case",
    "CaseTable",
    "Conjunction",
    "CoverParams",
    "Cutpoints",
    "ExperimentReport",
    "ExperimentSpec",
    "Factor",
    "FactorSchema",
    "InputError",
    "Literal",
    "Passthrough",
    "PathwaySpec",
    "ScpqcaError",
    "Solution",
    "SolveResult",
    "UndefinedRatioError",
    "VacuousSolutionError",
    "ValidityClass",
    "ValidityReport",
    "as_fraction",
    "assemble_solution",
    "binary_schema",
    "candidate_count_bound",
    "classify_configuration",
    "conjunction_expr",
    "conjunction_shorthand",
    "deduplicate",
    "derive_seed",
    "dnf_shorthand",
    "enumerate_candidates",
    "exclude_necessary",
    "exhaustive_cover_oracle",
    "external_validity",
    "full_truth_table",
    "generate_experiment_table",
    "greedy_cover",
    "internal_sweep",
    "iter_candidates",
    "load_csv",
    "match_mask",
    "matched_ids",
    "matches",
    "necessary_conditions",
    "necessity_consistency",
    "parse_pathway",
    "plant_outcome",
    "rule_from_conjunction",
    "run_experiment",
    "sample_and_confound",
    "schema_metadata",
    "solution_metrics",
    "solve",
    "sufficiency_consistency",
    "synth_schema",
    "to_csv_string",
    "unique_coverage",
    "write_csv",
    "write_schema_json",
]
