"""Tables, queries, CSV round trips, discretization, null injection."""

import math

import numpy as np
import pytest

from nullbayes import (
    ParseError,
    Row,
    Schema,
    SelectionQuery,
    Table,
    align_table,
    discretize,
    inject_nulls,
    load_csv,
    project_distinct,
    sample_table,
    save_csv,
    select,
)

from conftest import CAR_ATTRS, demo_cars, sparse_cars


class TestSchema:
    def test_domains_are_sorted(self):
        s = Schema(("A",), {"A": ("z", "m", "a")})
        assert s.domain("A") == ("a", "m", "z")

    def test_attribute_order_preserved(self):
        s = Schema(("B", "A"), {"A": ("x",), "B": ("y",)})
        assert s.attributes == ("B", "A")
        assert s.index("B") == 0 and s.index("A") == 1

    def test_duplicate_attribute_rejected(self):
        with pytest.raises(ValueError):
            Schema(("A", "A"), {"A": ("x",)})

    def test_empty_domain_rejected(self):
        with pytest.raises(ValueError):
            Schema(("A",), {"A": ()})

    def test_duplicate_label_rejected(self):
        with pytest.raises(ValueError):
            Schema(("A",), {"A": ("x", "x")})

    def test_missing_domain_rejected(self):
        with pytest.raises(ValueError):
            Schema(("A", "B"), {"A": ("x",)})

    def test_unknown_attribute_raises(self):
        s = Schema(("A",), {"A": ("x",)})
        with pytest.raises(KeyError):
            s.index("B")

    def test_equality_ignores_domain_input_order(self):
        a = Schema(("A",), {"A": ("x", "y")})
        b = Schema(("A",), {"A": ("y", "x")})
        assert a == b and hash(a) == hash(b)


class TestTable:
    def test_duplicate_id_rejected(self):
        s = Schema(("A",), {"A": ("x",)})
        with pytest.raises(ValueError):
            Table(s, [Row(1, ("x",)), Row(1, ("x",))])

    def test_wrong_arity_rejected(self):
        s = Schema(("A", "B"), {"A": ("x",), "B": ("y",)})
        with pytest.raises(ValueError):
            Table(s, [Row(1, ("x",))])

    def test_out_of_domain_cell_rejected(self):
        s = Schema(("A",), {"A": ("x",)})
        with pytest.raises(ValueError):
            Table(s, [Row(1, ("q",))])

    def test_null_cells_allowed(self):
        s = Schema(("A",), {"A": ("x",)})
        t = Table(s, [Row(1, (None,))])
        assert t.value(t.rows[0], "A") is None

    def test_row_by_id(self, sparse_table):
        assert sparse_table.row_by_id(7).cells[0] == "Hyundai"
        with pytest.raises(KeyError):
            sparse_table.row_by_id(99)


class TestSelectionQuery:
    def test_parse_and_text(self):
        q = SelectionQuery.parse(" Body = SUV & Make=BMW ")
        assert q.items == (("Body", "SUV"), ("Make", "BMW"))
        assert q.text() == "Body=SUV & Make=BMW"

    def test_predicates_sorted_by_attribute(self):
        q = SelectionQuery({"Z": "1", "A": "2"})
        assert q.attributes == ("A", "Z")

    def test_parse_rejects_garbage(self):
        for bad in ("", "  ", "Body", "=SUV", "Body=", "&"):
            with pytest.raises(ParseError):
                SelectionQuery.parse(bad)

    def test_parse_skips_blank_segments(self):
        q = SelectionQuery.parse("A=1 &  & B=2")
        assert q.attributes == ("A", "B")

    def test_duplicate_attribute_rejected(self):
        with pytest.raises(ValueError):
            SelectionQuery([("A", "1"), ("A", "2")])

    def test_validate_against_schema(self, sparse_table):
        SelectionQuery({"Body": "SUV"}).validate(sparse_table.schema)
        with pytest.raises(ValueError):
            SelectionQuery({"Body": "Truck"}).validate(sparse_table.schema)
        with pytest.raises(KeyError):
            SelectionQuery({"Color": "red"}).validate(sparse_table.schema)

    def test_matches_null_is_not_a_match(self, sparse_table):
        q = SelectionQuery({"Body": "SUV"})
        row8 = sparse_table.row_by_id(8)  # Body null
        assert not q.matches(sparse_table.schema, row8)
        assert q.matches(sparse_table.schema, row8, null_wildcard=True)

    def test_extended_returns_new_query(self):
        q = SelectionQuery({"A": "1"})
        q2 = q.extended("B", "2")
        assert q2.items == (("A", "1"), ("B", "2"))
        assert q.items == (("A", "1"),)

    def test_hashable_and_equal(self):
        assert SelectionQuery({"A": "1", "B": "2"}) == SelectionQuery(
            [("B", "2"), ("A", "1")]
        )
        assert len({SelectionQuery({"A": "1"}), SelectionQuery({"A": "1"})}) == 1


class TestCsv:
    def _write(self, tmp_path, text, name="t.csv"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    def test_null_positions(self, tmp_path, sparse_table):
        """Loading the sparse fixture reproduces its exact null pattern."""
        path = str(tmp_path / "cars.csv")
        save_csv(sparse_table, path, null_token="null")
        loaded = load_csv(path, null_token="null")
        nulls = {
            (row.id, attr)
            for row in loaded.rows
            for attr, cell in zip(CAR_ATTRS, row.cells)
            if cell is None
        }
        assert nulls == {
            (1, "Model"),
            (1, "Year"),
            (2, "Year"),
            (4, "Model"),
            (6, "Mileage"),
            (8, "Body"),
            (10, "Body"),
        }
        assert [r.id for r in loaded.rows] == list(range(1, 11))

    def test_round_trip_identity(self, tmp_path, demo_table):
        p1 = str(tmp_path / "a.csv")
        p2 = str(tmp_path / "b.csv")
        save_csv(demo_table, p1, null_token="?")
        again = load_csv(p1, null_token="?")
        assert again == demo_table
        save_csv(again, p2, null_token="?")
        assert open(p1).read() == open(p2).read()

    def test_single_row_singleton_domains(self, tmp_path):
        path = self._write(tmp_path, "A,B\nx,y\n")
        t = load_csv(path)
        assert len(t) == 1
        assert t.schema.domain("A") == ("x",)

    def test_wrong_arity_names_line(self, tmp_path):
        path = self._write(tmp_path, "A,B\nx,y\nonly-one\n")
        with pytest.raises(ParseError, match="line 3"):
            load_csv(path)

    def test_empty_file(self, tmp_path):
        path = self._write(tmp_path, "")
        with pytest.raises(ParseError, match="empty file"):
            load_csv(path)

    def test_all_null_column(self, tmp_path):
        path = self._write(tmp_path, "A,B\nx,\ny,\n")
        with pytest.raises(ParseError, match="empty domain"):
            load_csv(path)

    def test_cells_trimmed(self, tmp_path):
        path = self._write(tmp_path, "A,B\n x , y \n")
        t = load_csv(path)
        assert t.rows[0].cells == ("x", "y")


class TestDiscretize:
    def _numbers(self, values):
        dom = sorted({v for v in values if v is not None})
        s = Schema(("N",), {"N": dom})
        return Table(s, [Row(i + 1, (v,)) for i, v in enumerate(values)])

    def test_rounds_to_nearest_multiple(self):
        t = self._numbers(["12000", "13000", "17400", "20000"])
        out = discretize(t, {"N": 5000})
        assert [r.cells[0] for r in out.rows] == ["10000", "15000", "15000", "20000"]

    def test_midpoint_rounds_up(self):
        t = self._numbers(["12500", "7500"])
        out = discretize(t, {"N": 5000})
        assert [r.cells[0] for r in out.rows] == ["15000", "10000"]

    def test_idempotent(self):
        t = self._numbers(["10000", "15000"])
        once = discretize(t, {"N": 5000})
        twice = discretize(once, {"N": 5000})
        assert once == twice

    def test_nulls_survive(self):
        t = self._numbers(["12000", None])
        out = discretize(t, {"N": 5000})
        assert out.rows[1].cells[0] is None

    def test_domain_recomputed(self):
        t = self._numbers(["12000", "13000"])
        out = discretize(t, {"N": 5000})
        assert out.schema.domain("N") == ("10000", "15000")

    def test_non_numeric_label_raises(self):
        s = Schema(("N",), {"N": ("abc",)})
        t = Table(s, [Row(1, ("abc",))])
        with pytest.raises(ValueError, match="abc"):
            discretize(t, {"N": 10})

    def test_bad_granularity(self):
        t = self._numbers(["10"])
        with pytest.raises(ValueError):
            discretize(t, {"N": 0})

    def test_untouched_attributes_pass_through(self, sparse_table):
        out = discretize(sparse_table, {"Mileage": 10000})
        assert out.schema.attributes == sparse_table.schema.attributes
        assert [r.cells[0] for r in out.rows] == [
            r.cells[0] for r in sparse_table.rows
        ]


class TestSelect:
    def test_certain_answers_only(self, sparse_table):
        hits = select(sparse_table, SelectionQuery({"Body": "SUV"}))
        assert [r.id for r in hits] == [7, 9]

    def test_null_wildcard_flag(self, sparse_table):
        hits = select(
            sparse_table, SelectionQuery({"Body": "SUV"}), include_null_matches=True
        )
        assert [r.id for r in hits] == [7, 8, 9, 10]

    def test_demo_sedan_base(self, demo_table):
        hits = select(demo_table, SelectionQuery({"Body": "Sedan"}))
        assert [r.id for r in hits] == [1, 3, 4, 5]

    def test_empty_query_returns_all(self, demo_table):
        assert len(select(demo_table, SelectionQuery())) == len(demo_table)

    def test_out_of_domain_value_raises(self, demo_table):
        with pytest.raises(ValueError):
            select(demo_table, SelectionQuery({"Body": "Truck"}))

    def test_conjunction(self, demo_table):
        hits = select(
            demo_table, SelectionQuery({"Make": "BMW", "Mileage": "40000"})
        )
        assert [r.id for r in hits] == [4, 9, 10]


class TestProjectDistinct:
    def test_base_projection(self, demo_table):
        base = select(demo_table, SelectionQuery({"Body": "Sedan"}))
        combos = project_distinct(demo_table.schema, base, ("Model", "Year"))
        assert combos == [("A8", "2005"), ("tl", "2003"), ("745", "2002")]

    def test_null_combos_dropped(self, demo_table):
        combos = project_distinct(
            demo_table.schema, demo_table.rows, ("Make", "Model")
        )
        assert ("645", "1999") not in combos
        assert all(None not in c for c in combos)

    def test_single_row(self, demo_table):
        row = demo_table.row_by_id(1)
        assert project_distinct(demo_table.schema, [row], ("Make",)) == [("Audi",)]

    def test_all_null_gives_empty(self, demo_table):
        rows = [demo_table.row_by_id(i) for i in (6, 7, 8)]
        assert project_distinct(demo_table.schema, rows, ("Make",)) == []


class TestInjectNulls:
    def test_exact_count(self, demo_table):
        out = inject_nulls(demo_table, ["Body"], 0.5, seed=0)
        nulled = sum(1 for r in out.rows if r.cells[3] is None)
        already = sum(1 for r in demo_table.rows if r.cells[3] is None)
        assert nulled >= math.ceil(0.5 * len(demo_table))
        assert nulled <= math.ceil(0.5 * len(demo_table)) + already

    def test_deterministic(self, demo_table):
        a = inject_nulls(demo_table, ["Make", "Body"], 0.3, seed=7)
        b = inject_nulls(demo_table, ["Make", "Body"], 0.3, seed=7)
        assert a == b

    def test_seed_changes_pattern(self, demo_table):
        outs = {
            tuple(r.cells for r in inject_nulls(demo_table, ["Body"], 0.5, seed=s).rows)
            for s in range(8)
        }
        assert len(outs) > 1

    def test_fraction_zero_is_identity(self, demo_table):
        assert inject_nulls(demo_table, ["Body"], 0.0, seed=0) == demo_table

    def test_fraction_one_nulls_everything(self, demo_table):
        out = inject_nulls(demo_table, ["Body"], 1.0, seed=0)
        assert all(r.cells[3] is None for r in out.rows)

    def test_schema_and_ids_unchanged(self, demo_table):
        out = inject_nulls(demo_table, ["Body"], 0.5, seed=0)
        assert out.schema == demo_table.schema
        assert [r.id for r in out.rows] == [r.id for r in demo_table.rows]

    def test_bad_fraction(self, demo_table):
        with pytest.raises(ValueError):
            inject_nulls(demo_table, ["Body"], 1.5, seed=0)


class TestSampleAndAlign:
    def test_sample_preserves_order_and_ids(self, demo_table):
        s = sample_table(demo_table, 0.5, seed=3)
        ids = [r.id for r in s.rows]
        assert len(ids) == 5
        assert ids == sorted(ids)
        assert len(set(ids)) == len(ids)

    def test_sample_deterministic(self, demo_table):
        assert sample_table(demo_table, 0.4, seed=11) == sample_table(
            demo_table, 0.4, seed=11
        )

    def test_sample_full_fraction(self, demo_table):
        assert sample_table(demo_table, 1.0, seed=0) == demo_table

    def test_align_reorders_columns(self, demo_table):
        shuffled_attrs = tuple(reversed(demo_table.schema.attributes))
        shuffled = Table(
            Schema(shuffled_attrs, demo_table.schema.domains),
            [Row(r.id, tuple(reversed(r.cells))) for r in demo_table.rows],
        )
        back = align_table(shuffled, demo_table.schema)
        assert back == demo_table

    def test_align_rejects_attribute_mismatch(self, demo_table):
        s = Schema(("Make",), {"Make": demo_table.schema.domain("Make")})
        with pytest.raises(ValueError):
            align_table(demo_table, s)
