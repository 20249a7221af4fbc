import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from arffmine import ArffError, load_arff, parse_arff, set_class_index, summarize, write_arff
from arffmine.data import Attribute, Dataset, NOMINAL, NUMERIC

from conftest import uci_path

MINIMAL = "@relation t\n@attribute a numeric\n@attribute c {x,y}\n@data\n1,x\n2,y\n"


class TestParse:
    def test_minimal_document(self):
        ds = parse_arff(MINIMAL)
        assert ds.n_attributes == 2
        assert ds.n_instances == 2
        assert ds.class_index == 1
        assert ds.attributes[0].kind == NUMERIC
        assert ds.attributes[1].values == ("x", "y")

    def test_keywords_case_insensitive_and_crlf(self):
        text = "@RELATION t\r\n@ATTRIBUTE a NUMERIC\r\n@Attribute c {x,y}\r\n@DATA\r\n1,x\r\n"
        ds = parse_arff(text)
        assert ds.n_instances == 1
        assert ds.relation == "t"

    def test_comments_and_blank_lines(self):
        text = "% hello\n\n@relation t\n% mid\n@attribute a numeric\n@data\n% data comment\n1\n\n"
        ds = parse_arff(text)
        assert ds.n_instances == 1

    def test_numeric_synonyms(self):
        text = "@relation t\n@attribute a real\n@attribute b integer\n@attribute c numeric\n@data\n1.5,2,3\n"
        ds = parse_arff(text)
        assert all(a.kind == NUMERIC for a in ds.attributes)

    def test_quoted_tokens(self):
        text = ("@relation 'my relation'\n"
                "@attribute 'sepal length' numeric\n"
                '@attribute c {"a b","c,d"}\n'
                "@data\n1,'a b'\n2,\"c,d\"\n")
        ds = parse_arff(text)
        assert ds.relation == "my relation"
        assert ds.attributes[0].name == "sepal length"
        assert ds.attributes[1].values == ("a b", "c,d")
        assert ds.X[1, 1] == 1

    def test_missing_cells(self):
        text = "@relation t\n@attribute a numeric\n@attribute c {x,y}\n@data\n?,x\n1,?\n"
        ds = parse_arff(text)
        assert math.isnan(ds.X[0, 0])
        assert math.isnan(ds.X[1, 1])

    def test_date_rejected(self):
        with pytest.raises(ArffError, match="unsupported attribute type 'date'"):
            parse_arff("@relation t\n@attribute t date\n@data\n")

    def test_sparse_rows_rejected(self):
        with pytest.raises(ArffError, match="sparse"):
            parse_arff(MINIMAL + "{0 1}\n")

    def test_row_arity_mismatch(self):
        with pytest.raises(ArffError, match="line 7.*expected 2"):
            parse_arff(MINIMAL + "1,x,9\n")

    def test_unknown_nominal_value(self):
        with pytest.raises(ArffError, match="line 7.*.z. not in declared set"):
            parse_arff(MINIMAL + "3,z\n")

    def test_unterminated_quote(self):
        with pytest.raises(ArffError, match="unterminated quote"):
            parse_arff("@relation t\n@attribute a {x}\n@data\n'x\n")

    def test_missing_data_section(self):
        with pytest.raises(ArffError, match="missing @data"):
            parse_arff("@relation t\n@attribute a numeric\n")

    def test_duplicate_attribute_names_rejected(self):
        with pytest.raises(ArffError, match="duplicate attribute name"):
            parse_arff("@relation t\n@attribute a numeric\n@attribute a numeric\n@data\n")

    def test_every_rejection_carries_line_number(self):
        bad = [
            "@relation t\n@attribute t date\n@data\n",
            MINIMAL + "1,x,9\n",
            MINIMAL + "3,z\n",
            "@relation t\n@attribute a numeric\n",
            "@relation t\n@attribute a {x}\n@data\n'x\n",
            "@relation t\n@attribute a numeric\n@data\nfoo\n",
        ]
        for text in bad:
            with pytest.raises(ArffError) as err:
                parse_arff(text)
            assert err.value.line is not None
            assert "line" in str(err.value)

    def test_bad_numeric_value(self):
        with pytest.raises(ArffError, match="invalid numeric value"):
            parse_arff("@relation t\n@attribute a numeric\n@data\nxyz\n")


class TestUciFiles:
    @pytest.mark.parametrize("name,instances", [
        ("car", 1728), ("ecoli", 336), ("mushroom", 8124),
        ("soybean", 683), ("thyroid-ann", 7200),
    ])
    def test_instance_counts(self, name, instances):
        ds = load_arff(uci_path(name))
        assert ds.n_instances == instances

    def test_mushroom_has_missing_cells(self):
        summary = summarize(load_arff(uci_path("mushroom")))
        assert ds_missing_total(summary) > 0
        assert any(a.missing > 0 for a in summary.attributes)

    def test_car_attribute_count(self):
        summary = summarize(load_arff(uci_path("car")))
        assert summary.n_instances == 1728
        assert summary.n_attributes == 7    # 6 predictive + class


def ds_missing_total(summary):
    return sum(a.missing for a in summary.attributes)


class TestWrite:
    def test_round_trip_identity(self):
        ds = parse_arff(MINIMAL)
        again = parse_arff(write_arff(ds))
        assert ds.equals(again)

    def test_space_in_name_quoted(self):
        attrs = [Attribute("sepal length", NUMERIC, 0),
                 Attribute("c", NOMINAL, 1, ("x", "y"))]
        ds = Dataset("t", attrs, np.array([[1.0, 0.0]]))
        text = write_arff(ds)
        assert "'sepal length'" in text
        assert parse_arff(text).equals(ds)

    def test_missing_written_once(self):
        text = "@relation t\n@attribute a numeric\n@attribute c {x,y}\n@data\n?,x\n1,y\n"
        out = write_arff(parse_arff(text))
        data = out.split("@data")[1]
        assert data.count("?") == 1


class TestSummarize:
    def test_two_instance_counts(self):
        summary = summarize(parse_arff(MINIMAL))
        assert summary.n_instances == 2
        assert summary.class_distribution == {"x": 1, "y": 1}

    def test_distinct_and_missing(self):
        text = "@relation t\n@attribute a numeric\n@attribute c {x,y}\n@data\n1,x\n1,?\n2,x\n"
        summary = summarize(parse_arff(text))
        assert summary.attributes[0].distinct == 2
        assert summary.attributes[1].missing == 1
        assert summary.class_distribution == {"x": 2, "y": 0}


class TestSetClassIndex:
    def test_last_is_identity(self):
        ds = parse_arff(MINIMAL)
        assert set_class_index(ds, 1).class_index == ds.class_index

    def test_set_to_zero(self):
        ds = set_class_index(parse_arff(MINIMAL), 0)
        assert ds.class_index == 0
        assert ds.class_attribute.kind == NUMERIC

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            set_class_index(parse_arff(MINIMAL), 99)

    def test_data_unchanged(self):
        ds = parse_arff(MINIMAL)
        view = set_class_index(ds, 0)
        assert view.X is ds.X


# -- round-trip property ------------------------------------------------------

_name = st.text(
    st.characters(codec="utf-8", exclude_characters="\r\n",
                  exclude_categories=("Cc", "Cs")),
    min_size=1, max_size=12)


@st.composite
def datasets(draw):
    n_attrs = draw(st.integers(1, 5))
    attrs = []
    names = set()
    for j in range(n_attrs):
        name = draw(_name.filter(lambda s: s.strip() == s and s not in names))
        names.add(name)
        if draw(st.booleans()):
            n_vals = draw(st.integers(1, 4))
            values = []
            for _ in range(n_vals):
                v = draw(_name.filter(lambda s: s.strip() == s and s not in values))
                values.append(v)
            attrs.append(Attribute(name, NOMINAL, j, tuple(values)))
        else:
            attrs.append(Attribute(name, NUMERIC, j))
    n_rows = draw(st.integers(0, 8))
    rows = []
    for _ in range(n_rows):
        row = []
        for attr in attrs:
            if draw(st.integers(0, 5)) == 0:
                row.append(np.nan)
            elif attr.kind == NOMINAL:
                row.append(draw(st.integers(0, len(attr.values) - 1)))
            else:
                row.append(draw(st.floats(allow_nan=False, allow_infinity=False,
                                          width=32)))
        rows.append(row)
    X = np.array(rows, dtype=np.float64) if rows else np.empty((0, n_attrs))
    relation = draw(_name.filter(lambda s: s.strip() == s))
    class_index = draw(st.integers(0, n_attrs - 1))
    return Dataset(relation, attrs, X, class_index=class_index)


class TestRoundTripProperty:
    @settings(max_examples=120, deadline=None)
    @given(datasets())
    def test_parse_write_parse(self, ds):
        text = write_arff(ds)
        again = parse_arff(text).with_class_index(ds.class_index)
        assert ds.equals(again)
