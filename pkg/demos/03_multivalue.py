#!/usr/bin/env python3
"""Multi-value analysis: three-level factors, digit-form pathway notation.

Five factors with three levels each carry A0*B0+B1*C1+C2*D2+D0*E0. Nothing
needs to be binarized: literals carry the level directly, candidate rules
may mix different levels of the same factor across terms, and the planted
terms come back at consistency 1.0.
"""

from scpqca import (
    AnalysisParams,
    ExperimentSpec,
    candidate_count_bound,
    conjunction_shorthand,
    parse_pathway,
    run_experiment,
    synth_schema,
)

schema = synth_schema(5, levels=3)
pathway = parse_pathway("A0*B0+B1*C1+C2*D2+D0*E0", schema)

bound = candidate_count_bound(schema)
print(f"5 three-level factors: {bound} possible conjunctions (4^5 - 1)")

params = AnalysisParams(decision_label=1, consistency_threshold="0.8", cutoff=2, unique_cover=2)
report = run_experiment(ExperimentSpec(schema, pathway, 200, 0, seed=20), params)

print(f"planted : {pathway.expression()}")
print(f"recovered: {report.expression}")
print(f"solution consistency {float(report.consistency):.4f}, coverage {float(report.coverage):.4f}")

print(f"\n{report.candidate_count} candidate rules passed the filters; the planted terms score:")
by_conj = {r.conjunction: r for r in report.result.candidates}
for term in pathway.terms:
    rule = by_conj[term]
    print(
        f"  {conjunction_shorthand(term, schema):<8} consistency {float(rule.consistency):.2f}, "
        f"matches {len(rule.matched)} cases"
    )
