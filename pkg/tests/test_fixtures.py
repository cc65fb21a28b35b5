"""Emitted fixture files stay consistent with the code they illustrate."""

from fractions import Fraction
from math import factorial

import pytest

from bwrum import (
    OutOfRange,
    UnknownFixture,
    check_representable,
    count_pattern,
    emit_fixture,
    enumerate_pattern,
    insertion_identity_check,
    pattern,
    split_partition,
    uniform_system,
)
from bwrum.fixtures import LABELS5, TABLE1_ROWS, TABLE2_COMPONENTS
from bwrum.io import load_json, system_from_payload


def _ids(tokens) -> tuple[int, ...]:
    return tuple(LABELS5.index(t) for t in tokens)


def _emit(name, tmp_path, n=None):
    paths = emit_fixture(name, tmp_path, n=n)
    assert len(paths) == 1
    return load_json(paths[0])


class TestSandwichTable:
    def test_rows_enumerate_the_pattern(self, tmp_path):
        payload = _emit("example1", tmp_path)
        rows = [_ids(row) for row in payload["table_rows"]]
        mirrors = [_ids(row) for row in payload["mirror_rows"]]
        assert len(rows) == len(TABLE1_ROWS) == 10
        shape = payload["pattern"]
        descriptor = pattern(
            _ids(shape["prefix"]), _ids(shape["ground"]), _ids(shape["suffix"]), 5
        )
        assert set(rows) | set(mirrors) == enumerate_pattern(descriptor, 5)
        assert len(set(rows) | set(mirrors)) == payload["count"] == 20

    def test_equivalent_patterns_agree(self, tmp_path):
        payload = _emit("example1", tmp_path)
        shape = payload["pattern"]
        base = pattern(
            _ids(shape["prefix"]), _ids(shape["ground"]), _ids(shape["suffix"]), 5
        )
        expected = enumerate_pattern(base, 5)
        for other in payload["equivalent_patterns"]:
            descriptor = pattern(
                _ids(other["prefix"]), _ids(other["ground"]), _ids(other["suffix"]), 5
            )
            assert enumerate_pattern(descriptor, 5) == expected

    def test_count_matches_the_closed_form(self, tmp_path):
        payload = _emit("example1", tmp_path)
        assert payload["count"] == count_pattern(5, 2, 2)


class TestPairPatternCount:
    def test_count_sixty(self, tmp_path):
        payload = _emit("example2", tmp_path)
        shape = payload["pattern"]
        descriptor = pattern(
            _ids(shape["prefix"]), _ids(shape["ground"]), _ids(shape["suffix"]), 5
        )
        assert payload["count"] == 60 == count_pattern(5, 3, 2)
        assert len(enumerate_pattern(descriptor, 5)) == 60


class TestInsertionIdentityTable:
    def test_totals_and_parts(self, tmp_path):
        payload = _emit("example3", tmp_path)
        for row in payload["identity"]:
            n = row["n"]
            assert row["total"] == n * factorial(n - 3)
            assert row["parts"] == [
                factorial(n - 3),
                factorial(n - 3),
                factorial(n - 2),
            ]
            assert sum(row["parts"]) == row["total"]

    def test_components_enumerate_to_the_stated_sizes(self, tmp_path):
        payload = _emit("example3", tmp_path)
        for row in payload["identity"]:
            n = row["n"]
            if n > 6:
                continue
            sizes = [
                len(
                    enumerate_pattern(
                        pattern(c["prefix"], range(n), c["suffix"], n), n
                    )
                )
                for c in payload["components"]
            ]
            assert sizes == row["parts"]

    def test_identity_holds_by_enumeration(self, tmp_path):
        payload = _emit("example3", tmp_path)
        top, bottom = payload["top"], payload["bottom"]
        for n in (5, 6):
            assert insertion_identity_check([top], [bottom], n)


class TestSplitTable:
    def test_components_are_the_split_partition(self, tmp_path):
        payload = _emit("table2", tmp_path)
        outside = (0, 1)
        descriptors = split_partition(5, 3, 4, outside)
        assert len(descriptors) == len(payload["components"]) == 11
        for entry, descriptor in zip(payload["components"], descriptors):
            assert _ids(entry["prefix"]) == descriptor.prefix
            assert _ids(entry["suffix"]) == descriptor.suffix
            listed = set(descriptor.prefix) | set(descriptor.suffix)
            assert set(_ids(entry["outside"])) == listed - {3, 4}
            rankings = {_ids(r) for r in entry["rankings"]}
            assert rankings == enumerate_pattern(descriptor, 5)

    def test_sizes_partition_the_parent(self, tmp_path):
        payload = _emit("table2", tmp_path)
        assert payload["sizes"] == [len(e["rankings"]) for e in payload["components"]]
        assert sum(payload["sizes"]) == payload["total"] == 20
        shape = payload["parent"]
        parent = pattern(
            _ids(shape["prefix"]), _ids(shape["ground"]), _ids(shape["suffix"]), 5
        )
        union = set()
        for entry in payload["components"]:
            rankings = {_ids(r) for r in entry["rankings"]}
            assert not (union & rankings)
            union |= rankings
        assert union == enumerate_pattern(parent, 5)

    def test_frozen_rows_match_module_constants(self, tmp_path):
        payload = _emit("table2", tmp_path)
        frozen = [
            ["".join(r) for r in entry["rankings"]] for entry in payload["components"]
        ]
        assert frozen == [list(entry["rankings"]) for entry in TABLE2_COMPONENTS]


class TestSystemFixtures:
    def test_uniform_default_is_n_four(self, tmp_path):
        paths = emit_fixture("uniform_n", tmp_path)
        assert paths[0].name == "uniform4.json"
        system, labels = system_from_payload(load_json(paths[0]))
        assert labels is None
        assert system.cells == uniform_system(4).cells

    def test_uniform_takes_a_size(self, tmp_path):
        paths = emit_fixture("uniform_n", tmp_path, n=3)
        assert paths[0].name == "uniform3.json"
        system, _ = system_from_payload(load_json(paths[0]))
        assert system.cells == uniform_system(3).cells

    def test_negative_example_has_the_expected_certificate(self, tmp_path):
        paths = emit_fixture("negk3", tmp_path)
        system, labels = system_from_payload(load_json(paths[0]))
        assert labels == ["1", "2", "3"]
        report = check_representable(system)
        assert not report.representable
        assert report.most_negative == (0, 1, 0b100, Fraction(-1, 6))


class TestEmitErrors:
    def test_unknown_name(self, tmp_path):
        with pytest.raises(UnknownFixture):
            emit_fixture("mystery", tmp_path)

    def test_size_argument_only_fits_the_uniform_family(self, tmp_path):
        with pytest.raises(OutOfRange):
            emit_fixture("example1", tmp_path, n=5)
        with pytest.raises(OutOfRange):
            emit_fixture("uniform_n", tmp_path, n=1)
