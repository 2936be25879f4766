import pytest

from ckkit.formula import parse
from ckkit.kripke import frame_report
from ckkit.search import (
    ClassComparison,
    Counterexample,
    EnumerationCapError,
    EnumParams,
    NoneFound,
    compare_classes,
    count_preorders,
    enumerate_models,
    enumerate_packed,
    find_countermodel,
    preorders,
    sample_models,
)
from ckkit.semantics import valid_in_model


class TestParams:
    def test_caps(self):
        with pytest.raises(EnumerationCapError):
            EnumParams(max_worlds=6, props=("p",))
        with pytest.raises(EnumerationCapError):
            EnumParams(max_worlds=2, props=("p", "q", "r"))
        EnumParams(max_worlds=6, props=("p",), cap_worlds=6)  # raised cap is fine

    def test_bad_class(self):
        with pytest.raises(ValueError):
            EnumParams(max_worlds=2, class_filter="S4")

    def test_ik_forces_infallible(self):
        assert EnumParams(max_worlds=2, class_filter="IK").allow_fallible is False
        assert EnumParams(max_worlds=2, class_filter="IKB").allow_fallible is False
        assert EnumParams(max_worlds=2, class_filter="CKB").allow_fallible is True

    def test_frame_constraints(self):
        assert EnumParams(max_worlds=2).frame_constraints() == (False, False, False)
        assert EnumParams(max_worlds=2, class_filter="CKB").frame_constraints() == (True, True, True)
        assert EnumParams(max_worlds=2, class_filter="IK").frame_constraints() == (False, True, True)
        assert EnumParams(
            max_worlds=2, require_symmetric=True
        ).frame_constraints() == (True, False, False)


class TestEnumeration:
    def test_preorder_counts(self):
        # OEIS A000798: labeled topologies = labeled preorders
        assert count_preorders(1) == 1
        assert count_preorders(2) == 4
        assert count_preorders(3) == 29

    def test_preorders_are_preorders(self):
        from ckkit.kripke import transitive_closure

        for rows in preorders(3):
            assert all((rows[i] >> i) & 1 for i in range(3))
            assert transitive_closure(list(rows)) == list(rows)

    def test_one_world_count(self):
        # one preorder; two relations; per relation the fallible set is
        # empty (2 valuations) or the whole world (1 saturated valuation)
        got = list(enumerate_models(EnumParams(max_worlds=1, props=("p",))))
        assert len(got) == 6

    def test_one_world_count_infallible(self):
        got = list(
            enumerate_models(
                EnumParams(max_worlds=1, props=("p",), allow_fallible=False)
            )
        )
        assert len(got) == 4  # 2 relations x 2 valuations

    def test_two_world_count(self):
        got = list(enumerate_packed(EnumParams(max_worlds=2, props=("p",))))
        assert len(got) == 6 + 320  # n=1 then n=2 models

    def test_count_matches_independent_product(self):
        # recount with plain set comprehension arithmetic per frame
        from ckkit.search import _fallible_options, _upclosed_sets

        total = 0
        for n in (1, 2):
            for up in preorders(n):
                for rel_mask in range(1 << (n * n)):
                    rel = tuple((rel_mask >> (i * n)) & ((1 << n) - 1) for i in range(n))
                    ucl = _upclosed_sets(up, n)
                    for fal in _fallible_options(up, rel, n, True):
                        total += sum(1 for s in ucl if s & fal == fal)
        got = list(enumerate_packed(EnumParams(max_worlds=2, props=("p",))))
        assert len(got) == total

    def test_no_duplicates(self):
        got = list(enumerate_packed(EnumParams(max_worlds=2, props=("p",))))
        assert len(set(got)) == len(got)

    def test_class_filters_respected(self):
        for cls in ("CK", "CKB", "IK", "IKB"):
            params = EnumParams(max_worlds=2, props=("p",), class_filter=cls)
            for m in enumerate_models(params):
                assert cls in frame_report(m).classes

    def test_ckb_enumeration_is_the_symmetric_confluent_subset(self):
        all_params = EnumParams(max_worlds=2, props=("p",))
        ckb_params = EnumParams(max_worlds=2, props=("p",), class_filter="CKB")
        expected = [
            pm for pm in enumerate_packed(all_params)
            if "CKB" in frame_report(pm.to_model()).classes
        ]
        assert list(enumerate_packed(ckb_params)) == expected

    def test_frame_predicate(self):
        params = EnumParams(
            max_worlds=2,
            props=("p",),
            frame_predicate=lambda m: not m.relation,
        )
        got = list(enumerate_models(params))
        assert got and all(not m.relation for m in got)

    def test_deterministic_order(self):
        params = EnumParams(max_worlds=2, props=("p",))
        assert list(enumerate_packed(params)) == list(enumerate_packed(params))

    def test_world_counts_ascending(self):
        ns = [pm.n for pm in enumerate_packed(EnumParams(max_worlds=2, props=("p",)))]
        assert ns == sorted(ns)


class TestFindCountermodel:
    def test_b_box_fails_in_ck(self):
        verdict = find_countermodel(parse("p -> [] <> p"), EnumParams(max_worlds=3, props=("p",)))
        assert isinstance(verdict, Counterexample)
        assert not valid_in_model(verdict.model, parse("p -> [] <> p"))

    def test_minimal_counterexample_comes_first(self):
        verdict = find_countermodel(parse("p -> [] <> p"), EnumParams(max_worlds=3, props=("p",)))
        assert len(verdict.model.worlds) == 2  # a 2-world countermodel exists

    def test_counterexample_world_fails(self):
        from ckkit.semantics import eval_formula

        f = parse("p -> [] <> p")
        verdict = find_countermodel(f, EnumParams(max_worlds=3, props=("p",)))
        assert eval_formula(verdict.model, verdict.world, f) is False

    def test_b_box_holds_in_ckb(self):
        verdict = find_countermodel(
            parse("p -> [] <> p"),
            EnumParams(max_worlds=3, props=("p",), class_filter="CKB"),
        )
        assert isinstance(verdict, NoneFound)
        assert verdict.max_worlds == 3
        assert verdict.models_examined > 0

    def test_k_box_valid_everywhere(self):
        f = parse("[] (p -> q) -> ([] p -> [] q)")
        verdict = find_countermodel(f, EnumParams(max_worlds=2, props=("p", "q")))
        assert isinstance(verdict, NoneFound)

    def test_excluded_middle_fails(self):
        verdict = find_countermodel(parse("p | ~p"), EnumParams(max_worlds=2, props=("p",)))
        assert isinstance(verdict, Counterexample)

    def test_search_is_deterministic(self):
        f = parse("[] p -> p")
        params = EnumParams(max_worlds=2, props=("p",))
        a = find_countermodel(f, params)
        b = find_countermodel(f, params)
        assert a == b


class TestCompareClasses:
    def test_n_separates_ck_from_ckb(self):
        report = compare_classes(
            [parse("<> false -> false")], "CK", "CKB", EnumParams(max_worlds=2, props=("p",))
        )
        (entry,) = report
        assert isinstance(entry, ClassComparison)
        assert entry.mismatch
        assert isinstance(entry.verdict_a, Counterexample)
        assert isinstance(entry.verdict_b, NoneFound)
        assert "MISMATCH" in entry.summary()

    def test_agreeing_formula(self):
        (entry,) = compare_classes(
            [parse("p -> p")], "CK", "IKB", EnumParams(max_worlds=2, props=("p",))
        )
        assert not entry.mismatch
        assert "agree" in entry.summary()


class TestSampling:
    def test_deterministic(self):
        params = EnumParams(max_worlds=4, props=("p",), class_filter="CKB")
        a = sample_models(params, count=10, seed=3)
        b = sample_models(params, count=10, seed=3)
        assert a == b

    def test_samples_satisfy_class(self):
        params = EnumParams(max_worlds=4, props=("p",), class_filter="CKB")
        for m in sample_models(params, count=15, seed=5):
            report = frame_report(m)
            assert "CKB" in report.classes

    def test_samples_are_wellformed(self):
        from ckkit.kripke import model_violations

        params = EnumParams(max_worlds=5, props=("p", "q"))
        for m in sample_models(params, count=20, seed=9):
            assert model_violations(m.description()) == []
