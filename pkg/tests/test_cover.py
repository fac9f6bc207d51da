import random
from fractions import Fraction

import pytest

from scpqca import (
    AnalysisParams,
    CandidateRule,
    Case,
    CaseTable,
    Conjunction,
    CoverParams,
    InputError,
    Literal,
    UndefinedRatioError,
    VacuousSolutionError,
    assemble_solution,
    binary_schema,
    exhaustive_cover_oracle,
    greedy_cover,
    rule_from_conjunction,
    solve,
    unique_coverage,
)


def pure_rule(idx: int, positive_ids) -> CandidateRule:
    """Synthetic rule matching exactly the given ids, all positive."""
    ids = frozenset(positive_ids)
    return CandidateRule.from_sets(Conjunction.of((idx, 0)), ids, ids)


def covered(selection, positives) -> int:
    got = set()
    for r in selection:
        got |= r.positives_matched
    return len(got & set(positives))


class TestGreedy:
    def test_chain_example_unique_cover_1(self):
        r1, r2, r3 = pure_rule(0, "123"), pure_rule(1, "34"), pure_rule(2, "45")
        sel = greedy_cover([r1, r2, r3], set("12345"), CoverParams(1, unique_cover=1))
        assert sel == [r1, r3]

    def test_chain_example_unique_cover_3(self):
        r1, r2, r3 = pure_rule(0, "123"), pure_rule(1, "34"), pure_rule(2, "45")
        sel = greedy_cover([r1, r2, r3], set("12345"), CoverParams(1, unique_cover=3))
        assert sel == [r1]

    def test_empty_positives(self):
        assert greedy_cover([pure_rule(0, "12")], set(), CoverParams(1, 1)) == []

    def test_empty_candidates(self):
        assert greedy_cover([], {"1"}, CoverParams(1, 1)) == []

    def test_gain_ties_break_by_consistency(self):
        impure = CandidateRule.from_sets(Conjunction.of((0, 0)), {"1", "2", "n"}, {"1", "2"})
        pure = pure_rule(1, {"3", "4"})
        sel = greedy_cover([impure, pure], set("1234"), CoverParams(1, unique_cover=2))
        assert sel[0] == pure

    def test_consistency_ties_break_by_fewer_literals(self):
        wide = CandidateRule.from_sets(Conjunction.of((0, 0)), {"1", "2"}, {"1", "2"})
        narrow = CandidateRule.from_sets(Conjunction.of((1, 0), (2, 0)), {"3", "4"}, {"3", "4"})
        sel = greedy_cover([narrow, wide], set("1234"), CoverParams(1, unique_cover=2))
        assert sel[0] == wide

    def test_final_tie_breaks_by_candidate_order(self):
        a = pure_rule(0, {"1", "2"})
        b = pure_rule(1, {"3", "4"})
        sel = greedy_cover([a, b], set("1234"), CoverParams(1, unique_cover=2))
        assert sel[0] == a

    def test_selection_time_gain_always_at_least_unique_cover(self):
        rng = random.Random(5)
        universe = [f"p{i}" for i in range(20)]
        for _ in range(50):
            rules = [
                pure_rule(i, rng.sample(universe, rng.randint(1, 10))) for i in range(rng.randint(1, 8))
            ]
            u = rng.randint(1, 3)
            sel = greedy_cover(rules, universe, CoverParams(1, unique_cover=u))
            seen: set[str] = set()
            for rule in sel:
                gain = len(rule.positives_matched - seen)
                assert gain >= u
                seen |= rule.positives_matched

    def test_greedy_at_least_single_best_rule(self):
        rng = random.Random(6)
        universe = [f"p{i}" for i in range(15)]
        for _ in range(50):
            rules = [
                pure_rule(i, rng.sample(universe, rng.randint(1, 12))) for i in range(rng.randint(1, 6))
            ]
            sel = greedy_cover(rules, universe, CoverParams(1, unique_cover=1))
            best_single = max(len(r.positives_matched) for r in rules)
            assert covered(sel, universe) >= best_single


class TestOracle:
    def test_chain_instance_matches_greedy(self):
        r1, r2, r3 = pure_rule(0, "123"), pure_rule(1, "34"), pure_rule(2, "45")
        params = CoverParams(1, unique_cover=1)
        oracle = exhaustive_cover_oracle([r1, r2, r3], set("12345"), params)
        assert covered(oracle, set("12345")) == 5
        greedy = greedy_cover([r1, r2, r3], set("12345"), params)
        assert covered(greedy, set("12345")) == 5

    def test_overlap_instance_prefers_fewer_rules(self):
        # R1 overlaps both others; the oracle finds the two-rule cover of all 8
        r1, r2, r3 = pure_rule(0, "1234"), pure_rule(1, "1256"), pure_rule(2, "3478")
        params = CoverParams(1, unique_cover=2)
        positives = set("12345678")
        oracle = exhaustive_cover_oracle([r1, r2, r3], positives, params)
        assert oracle == [r2, r3]
        assert covered(oracle, positives) == 8
        greedy = greedy_cover([r1, r2, r3], positives, params)
        assert covered(greedy, positives) <= covered(oracle, positives)

    def test_empty_positives(self):
        assert exhaustive_cover_oracle([pure_rule(0, "12")], set(), CoverParams(1, 1)) == []

    def test_order_infeasible_pair_rejected(self):
        # {ab} and {bc} under unique_cover=2: whichever goes second gains
        # only one new positive, so the pair is inadmissible in any order
        r1, r2 = pure_rule(0, {"a", "b"}), pure_rule(1, {"b", "c"})
        sel = exhaustive_cover_oracle([r1, r2], {"a", "b", "c"}, CoverParams(1, unique_cover=2))
        assert len(sel) == 1
        assert covered(sel, {"a", "b", "c"}) == 2

    def test_candidate_limit_enforced(self):
        rules = [pure_rule(i, {f"p{i}"}) for i in range(21)]
        with pytest.raises(InputError, match="oracle limit"):
            exhaustive_cover_oracle(rules, {"p0"}, CoverParams(1, 1))

    def test_max_subset_size(self):
        r1, r2 = pure_rule(0, "12"), pure_rule(1, "34")
        sel = exhaustive_cover_oracle([r1, r2], set("1234"), CoverParams(1, 1), max_subset_size=1)
        assert len(sel) == 1

    @pytest.mark.parametrize("seed", range(20))
    def test_oracle_never_below_greedy(self, seed):
        rng = random.Random(seed)
        n_pos = rng.randint(1, 16)
        universe = [f"p{i}" for i in range(n_pos)]
        rules = []
        for i in range(rng.randint(1, 10)):
            ids = set(rng.sample(universe, rng.randint(1, n_pos)))
            extra = {f"n{i}{j}" for j in range(rng.randint(0, 2))}
            rules.append(CandidateRule.from_sets(Conjunction.of((i, 0)), ids | extra, ids))
        params = CoverParams(1, unique_cover=rng.randint(1, 3))
        greedy = greedy_cover(rules, universe, params)
        oracle = exhaustive_cover_oracle(rules, universe, params)
        assert covered(oracle, universe) >= covered(greedy, universe)


class TestUniqueCoverage:
    def test_counts(self):
        r1, r2 = pure_rule(0, "123"), pure_rule(1, "34")
        assert unique_coverage([r1, r2], set("1234")) == (2, 1)

    def test_single_rule_owns_everything(self):
        r = pure_rule(0, "12")
        assert unique_coverage([r], set("12")) == (2,)


class TestAssembleSolution:
    def test_requires_something(self, m1_table):
        with pytest.raises(VacuousSolutionError):
            assemble_solution([], [], m1_table, CoverParams(1, 1))

    def test_necessary_only_solution(self, m1_table):
        sol = assemble_solution([Literal(0, 1)], [], m1_table, CoverParams(1, 1))
        assert sol.rules == ()
        assert sol.solution_consistency == Fraction(3, 4)
        assert sol.solution_coverage == 1
        assert sol.configurations() == (Conjunction.of((0, 1)),)

    def test_single_rule_metrics_on_m1(self, m1_table):
        rule = rule_from_conjunction(Conjunction.of((0, 1), (1, 1)), m1_table, 1)
        sol = assemble_solution([], [rule], m1_table, CoverParams(1, 1))
        assert sol.solution_consistency == 1
        assert sol.solution_coverage == Fraction(2, 3)
        assert sol.per_rule_unique_coverage == (2,)

    def test_necessary_literals_are_conjoined_into_metrics(self, m1_table):
        # rule {B=1} alone matches c1,c3,c4; conjoined with A=1 it loses c4
        rule = rule_from_conjunction(Conjunction.of((1, 1)), m1_table, 1)
        assert rule.consistency == Fraction(2, 3)
        sol = assemble_solution([Literal(0, 1)], [rule], m1_table, CoverParams(1, 1))
        assert sol.rules[0].matched == {"c1", "c3"}
        assert sol.rules[0].consistency == 1
        assert sol.solution_consistency == 1
        assert sol.configurations() == (Conjunction.of((0, 1), (1, 1)),)

    def test_conflicting_rule_and_necessary(self, m1_table):
        rule = rule_from_conjunction(Conjunction.of((0, 0)), m1_table, 1)
        with pytest.raises(InputError):
            assemble_solution([Literal(0, 1)], [rule], m1_table, CoverParams(1, 1))

    def test_rule_with_no_effective_matches(self):
        schema = binary_schema(["A", "B"])
        t = CaseTable.from_cases(
            schema,
            [Case("a", (1, 0), 1), Case("b", (0, 1), 0), Case("c", (1, 0), 1)],
        )
        rule = rule_from_conjunction(Conjunction.of((1, 1)), t, 1)  # matches only b
        with pytest.raises(UndefinedRatioError):
            assemble_solution([Literal(0, 1)], [rule], t, CoverParams(1, 1))


class TestPipelineGainInvariant:
    def test_recorded_pick_order_respects_unique_cover(self, remote_table):
        params = AnalysisParams(decision_label=1, consistency_threshold="0.8", cutoff=4, unique_cover=2)
        result = solve(remote_table, params)
        positives = remote_table.positive_ids(1)
        # replay the greedy picks against the candidate list
        seen: set[str] = set()
        by_conj = {r.conjunction: r for r in result.candidates}
        for rule in result.solution.rules:
            original = by_conj[rule.conjunction]
            gain = len((original.positives_matched & positives) - seen)
            assert gain >= params.unique_cover
            seen |= original.positives_matched
