from collections import Counter

import pytest
from hypothesis import given, strategies as st

from wernick.catalog import (
    STATUSES, CatalogEntry, CatalogError, catalog_text, entry, format_catalog, parse_catalog, resolve_problem,
)
from wernick.geom import LABELS

UNKNOWN = [77, 78, 81, 113, 118, 119, 122, 123, 127, 128, 132, 134, 135, 136, 137]


def test_table_counts(catalog):
    assert [e.index for e in catalog] == list(range(1, 140))
    counts = Counter(e.status for e in catalog)
    # the table has 26 U rows; the prose count of 16 does not add up to 139
    assert counts == {"S": 72, "U": 26, "R": 3, "L": 23, "Unknown": 15}
    assert [e.index for e in catalog if e.status == "Unknown"] == UNKNOWN


@pytest.mark.parametrize(
    "idx, pts, status",
    [
        (1, ("A", "B", "O"), "L"),
        (4, ("A", "B", "G"), "S"),
        (7, ("A", "B", "H"), "S"),
        (71, ("O", "G", "H"), "R"),
        (83, ("Ma", "Mb", "Mc"), "S"),
        (90, ("Ma", "Mb", "I"), "U"),
        (138, ("Ta", "Tb", "Tc"), "U"),
        (139, ("Ta", "Tb", "I"), "S"),
    ],
)
def test_rows(idx, pts, status):
    e = entry(idx)
    assert (e.points, e.status) == (pts, status)


def test_pretty():
    assert entry(4).pretty() == "4. A, B, G — S"


def test_round_trip_shipped(catalog):
    assert parse_catalog(format_catalog(catalog)) == catalog
    assert parse_catalog(catalog_text()) == catalog


entries = st.builds(
    CatalogEntry,
    st.integers(1, 10**4),
    st.tuples(*[st.sampled_from(LABELS)] * 3),
    st.sampled_from(STATUSES),
    st.text(st.characters(blacklist_characters="|\n\r", blacklist_categories=("Cs", "Zl", "Zp")), max_size=20),
)


@given(st.lists(entries, max_size=12))
def test_round_trip_property(es):
    assert parse_catalog(format_catalog(es)) == es


@pytest.mark.parametrize("text", ["1|A,B|S|", "1|A,B,Q|S|", "1|A,B,C|X|", "x|A,B,C|S|", "1|A,B,C|S"])
def test_bad_rows(text):
    with pytest.raises(CatalogError):
        parse_catalog(text)


def test_resolve_problem():
    assert resolve_problem("7").id == 7
    assert resolve_problem("A,B,H").id == 7
    assert resolve_problem("H, B, A").id == 7
    for bad in ("A,B,Zz", "A,A,B", "", "200"):
        with pytest.raises(CatalogError):
            resolve_problem(bad)
