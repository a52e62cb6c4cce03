"""Enforcement index: counter semantics, atomic rejection, oracle agreement."""

import random

import pytest

from fdlab import (
    IndexContractError,
    Model,
    PfdIndex,
    PfdRejected,
    Schema,
    Table,
    VagueTuple,
    check_pfd,
)
from fdlab.pfd_index import bench_inserts

import tables as T
from tables import fd
from gen import rand_cell

ES = Schema(("employee", "superior"))
ES_FD = fd("employee", "superior")


def vtuple(*cells):
    return VagueTuple(ES, cells)


class TestBasics:
    def test_new_index_is_empty(self):
        assert len(PfdIndex(ES_FD, ES)) == 0

    def test_insert_then_duplicate_counts_support(self):
        idx = PfdIndex(ES_FD, ES)
        t = vtuple("John", {"Jill", "Bob"})
        idx.insert(t)
        idx.insert(t)
        ((binding, (answers, support)),) = idx.entries().items()
        assert binding == ("John",)
        assert answers == frozenset({("Jill",), ("Bob",)})
        assert support == 2

    def test_conflicting_answer_set_rejected(self):
        idx = PfdIndex(ES_FD, ES)
        idx.insert(vtuple("John", {"Jill", "Bob"}))
        with pytest.raises(PfdRejected) as err:
            idx.insert(vtuple("John", "Jill"))
        assert err.value.binding == ("John",)
        assert err.value.stored == frozenset({("Jill",), ("Bob",)})
        assert err.value.offered == frozenset({("Jill",)})

    def test_rejection_is_atomic(self):
        idx = PfdIndex(ES_FD, ES)
        idx.insert(vtuple("John", "Jill"))
        before = idx.entries()
        # First binding (Jane) is fresh, second (John) conflicts; nothing may stick.
        with pytest.raises(PfdRejected):
            idx.insert(vtuple({"Jane", "John"}, "Bob"))
        assert idx.entries() == before

    def test_no_joint_world_tuples_both_accepted(self):
        idx = PfdIndex(T.AB, T.NO_JOINT_WORLD.schema)
        for t in T.NO_JOINT_WORLD.tuples:
            idx.insert(t)
        assert len(idx) == 1

    def test_two_indexes_are_independent(self):
        i1 = PfdIndex(ES_FD, ES)
        i2 = PfdIndex(fd("superior", "employee"), ES)
        i1.insert(vtuple("John", "Jill"))
        assert len(i1) == 1 and len(i2) == 0

    def test_overlapping_sides_accepted(self):
        idx = PfdIndex(fd("employee", "employee superior"), ES)
        t = vtuple("John", {"Jill", "Bob"})
        idx.insert(t)
        ((_, (answers, _)),) = idx.entries().items()
        assert answers == frozenset({("John", "Jill"), ("John", "Bob")})


class TestRemove:
    def test_insert_remove_roundtrip(self):
        idx = PfdIndex(ES_FD, ES)
        t = vtuple("John", {"Jill", "Bob"})
        idx.insert(t)
        idx.remove(t)
        assert len(idx) == 0

    def test_entry_survives_while_supported(self):
        idx = PfdIndex(ES_FD, ES)
        t = vtuple("John", "Jill")
        idx.insert(t)
        idx.insert(t)
        idx.remove(t)
        assert idx.entries()[("John",)][1] == 1

    def test_remove_on_empty_index_errors(self):
        idx = PfdIndex(ES_FD, ES)
        with pytest.raises(IndexContractError):
            idx.remove(vtuple("John", "Jill"))

    def test_remove_of_differently_shaped_tuple_errors(self):
        idx = PfdIndex(ES_FD, ES)
        idx.insert(vtuple("John", {"Jill", "Bob"}))
        with pytest.raises(IndexContractError):
            idx.remove(vtuple("John", "Jill"))


class TestCheck:
    def test_dry_run_matches_insert_without_mutation(self):
        idx = PfdIndex(ES_FD, ES)
        idx.insert(vtuple("John", {"Jill", "Bob"}))
        before = idx.entries()
        good = vtuple("John", {"Jill", "Bob"})
        bad = vtuple("John", "Jill")
        assert idx.check(good) is None
        conflict = idx.check(bad)
        assert conflict is not None and conflict.binding == ("John",)
        assert idx.entries() == before
        assert idx.check(bad) == conflict  # re-probe is stable

    def test_empty_index_accepts_anything(self):
        idx = PfdIndex(ES_FD, ES)
        assert idx.check(vtuple({"a", "b"}, {"c", "d"})) is None


class TestOracleAgreement:
    @pytest.mark.parametrize("target", [fd("A", "B"), fd("A", "A B"), fd("A B", "B")])
    def test_random_sequences_match_batch_recomputation(self, target):
        rng = random.Random(0)
        schema = Schema(("A", "B"))
        for _ in range(60):
            idx = PfdIndex(target, schema)
            live = []
            for _ in range(rng.randint(1, 25)):
                if live and rng.random() < 0.3:
                    victim = rng.choice(live)
                    idx.remove(victim)
                    live.remove(victim)
                    continue
                t = VagueTuple(schema, (rand_cell(rng), rand_cell(rng)))
                batch_ok = check_pfd(Table(schema, Model.VAGUE, live + [t]), target)
                try:
                    idx.insert(t)
                    accepted = True
                except PfdRejected:
                    accepted = False
                assert accepted == batch_ok
                if accepted:
                    live.append(t)
                assert idx == PfdIndex.rebuild(target, schema, live)

    def test_disjunctive_tuples_replay(self):
        idx = PfdIndex(T.AB, T.NO_JOINT_WORLD.schema)
        for t in T.NO_JOINT_WORLD.tuples:
            idx.insert(t)
        assert idx == PfdIndex.rebuild(T.AB, T.NO_JOINT_WORLD.schema, T.NO_JOINT_WORLD.tuples)


def test_bench_report_shape():
    report = bench_inserts(sizes=(50, 100), probes=30)
    assert set(report.medians_ns) == {50, 100}
    assert report.median_spread >= 1.0
    assert "median_spread" in report.to_text()
