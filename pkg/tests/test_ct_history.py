import datetime as dt
import json
import random
from collections import Counter, defaultdict

import pytest
from hypothesis import given, settings, strategies as st

from alertscope.assurance import Profile
from alertscope.ct_history import (OTHER, IngestStats, MatchKind, coverage, historic_cert_types,
                                   historic_profiles, ingest, load_ct_dir, market_share,
                                   record_from_json, record_to_json, san_sharing, top_cas,
                                   validity_stats, write_ct_file)
from ct_fixtures import (ALL_CAS, ISSUER_O, CA_COVERAGE, YEARS, brute_force_cells, ct_object,
                         ca_coverage_objects)

UTC = dt.timezone.utc
DECADE = (2009, 2019)


def d(y, m=1, day=1):
    return dt.datetime(y, m, day, tzinfo=UTC)


def recs(objs, host="a.gov", decade=DECADE, stats=None):
    return ingest(objs, decade, host, stats=stats)


# --- ingestion ----------------------------------------------------------------

def test_ingest_filters_precerts_and_duplicates():
    objs = [ct_object("a.gov", "DigiCert Inc", d(2015), d(2016), i) for i in range(3)]
    objs.append(dict(objs[0]))
    objs.append(ct_object("a.gov", "DigiCert Inc", d(2015), d(2016), "p1", precert=True))
    objs[1] = {**objs[1], "is_precert": True}
    stats = IngestStats()
    out = recs(objs, stats=stats)
    assert len(out) == 2
    assert (stats.precerts, stats.duplicates, stats.kept) == (2, 1, 2)


def test_ingest_decade_filter_uses_not_before_year():
    objs = [ct_object("a.gov", "X", d(2008, 12, 1), d(2010), "old"),
            ct_object("a.gov", "X", d(2019, 12, 31), d(2021), "late"),
            ct_object("a.gov", "X", d(2020, 1, 1), d(2021), "future")]
    stats = IngestStats()
    out = recs(objs, stats=stats)
    assert [r.cert.not_before.year for r in out] == [2019]
    assert stats.out_of_decade == 2


def test_malformed_records_skipped_and_counted():
    good = ct_object("a.gov", "X", d(2015), d(2016), "ok")
    bad = [
        "{not json", {"sha256": "xyz"}, {**good, "sha256": "0" * 63},
        {**good, "sha256": "1" * 64, "not_before": "yesterday"},
        {**good, "sha256": "2" * 64, "sans": "a.gov"},
        {**good, "sha256": "3" * 64, "not_after": good["not_before"]},
        {k: v for k, v in good.items() if k != "issuer_o"} | {"sha256": "4" * 64},
        [1, 2, 3],
    ]
    stats = IngestStats()
    out = recs([bad[0], good, *bad[1:], ""], stats=stats)
    assert [r.cert.der_sha256 for r in out] == [good["sha256"]]
    assert stats.schema_errors == len(bad)


def test_ingest_accepts_json_lines():
    good = ct_object("a.gov", "X", d(2015), d(2016), "ok")
    assert len(recs([json.dumps(good) + "\n", "\n"])) == 1


def test_ingest_rejects_empty_decade():
    with pytest.raises(ValueError):
        ingest([], (2019, 2009), "a.gov")


@pytest.mark.parametrize("sans,subject,kind", [
    (["www.a.gov"], None, MatchKind.EXACT_SAN),
    (["*.a.gov"], None, MatchKind.WILDCARD_SAN),
    ([], {"CN": "www.a.gov"}, MatchKind.SUBJECT_CN),
    ([], {"CN": "*.a.gov"}, MatchKind.SUBJECT_CN),
    (["*.gov"], None, None),
    (["*.www.a.gov"], None, None),
    (["other.gov"], {"CN": "other.gov"}, None),
])
def test_host_matching(sans, subject, kind):
    obj = ct_object("www.a.gov", "X", d(2015), d(2016), "m", sans=sans,
                    subject=subject or {"CN": "zzz"})
    out = ingest([obj], DECADE, "www.a.gov")
    assert (out[0].matched_by if out else None) is kind


def test_json_round_trip():
    obj = ct_object("a.gov", "GoDaddy.com, Inc.", d(2015), d(2016), "rt",
                    policies=["2.23.140.1.2.2"], subject={"CN": "a.gov", "O": "A"})
    cert = record_from_json(obj)
    assert cert.issuer_ca_label == "GoDaddy"
    assert record_to_json(cert) == obj


def test_load_ct_dir(tmp_path):
    write_ct_file(tmp_path / "a.gov.jsonl", [ct_object("a.gov", "X", d(2015), d(2016), 1)])
    write_ct_file(tmp_path / "b.gov.jsonl", [ct_object("b.gov", "X", d(2015), d(2016), 1),
                                             ct_object("a.gov", "X", d(2015), d(2016), 9)])
    records, stats = load_ct_dir(tmp_path, DECADE)
    assert sorted(r.host for r in records) == ["a.gov", "b.gov"]
    assert stats.unmatched == 1


# --- coverage -------------------------------------------------------------------

def test_multi_year_cert_covers_each_touched_year():
    r = recs([ct_object("a.gov", "X", d(2010, 3), d(2013, 2), "c")])
    table = coverage(r, DECADE)
    assert {y for (ca, y), hosts in table.cells.items() if "a.gov" in hosts} == \
        {2010, 2011, 2012, 2013}


def test_short_certs_count_once_per_year():
    objs = [ct_object("a.gov", "X", d(2019, m), d(2019, m) + dt.timedelta(days=90), m)
            for m in (1, 4, 7, 9)]
    table = coverage(recs(objs), DECADE)
    assert table.count("X", 2019) == 1 and table.year_totals[2019] == 1


def test_empty_coverage():
    table = coverage([], DECADE)
    assert table.cells == {} and table.year_totals == {}
    assert market_share(table) == {}


def test_coverage_clipped_to_decade():
    r = recs([ct_object("a.gov", "X", d(2018, 6), d(2022, 6), "c")])
    assert coverage(r, DECADE).years == [2018, 2019]
    assert coverage(r).years == [2018, 2019, 2020, 2021, 2022]


def test_one_day_touch_covers_year():
    r = recs([ct_object("a.gov", "X", d(2014, 6), dt.datetime(2015, 1, 1, 0, 0, 1, tzinfo=UTC),
                        "edge")])
    assert coverage(r, DECADE).years == [2014, 2015]


@st.composite
def ct_dataset(draw, max_records=100, max_hosts=20, max_cas=5):
    hosts = [f"h{i}.example.gov" for i in range(draw(st.integers(1, max_hosts)))]
    cas = [f"CA{i}" for i in range(draw(st.integers(1, max_cas)))]
    n = draw(st.integers(0, max_records))
    objs = defaultdict(list)
    for i in range(n):
        h = draw(st.sampled_from(hosts))
        start = dt.datetime(2009, 1, 1, tzinfo=UTC) + dt.timedelta(
            days=draw(st.integers(0, 11 * 365)), seconds=draw(st.integers(0, 86399)))
        length = dt.timedelta(days=draw(st.integers(1, 1200)))
        objs[h].append(ct_object(h, draw(st.sampled_from(cas)), start, start + length, i))
    return objs


def ingest_all(objs, decade=DECADE):
    return [r for h, items in sorted(objs.items()) for r in ingest(items, decade, h)]


@settings(max_examples=50, deadline=None)
@given(ct_dataset())
def test_coverage_equals_brute_force(objs):
    records = ingest_all(objs)
    table = coverage(records, DECADE)
    expected = brute_force_cells(records, *DECADE)
    assert table.cells == expected
    for year in range(DECADE[0], DECADE[1] + 1):
        union = set().union(*(h for (ca, y), h in expected.items() if y == year))
        assert table.year_totals.get(year, 0) == len(union)


@settings(max_examples=30, deadline=None)
@given(ct_dataset(max_records=30))
def test_duplicates_do_not_change_analytics(objs):
    base = ingest_all(objs)
    doubled = {h: items + [dict(o) for o in items] for h, items in objs.items()}
    again = ingest_all(doubled)
    assert coverage(again, DECADE) == coverage(base, DECADE)
    assert san_sharing(again, 10, DECADE) == san_sharing(base, 10, DECADE)
    assert validity_stats(again) == validity_stats(base)


# --- market share ---------------------------------------------------------------

def test_single_ca_full_share():
    objs = {f"h{i}.gov": [ct_object(f"h{i}.gov", "Solo CA", d(2012), d(2014), i)]
            for i in range(25)}
    shares = market_share(coverage(ingest_all(objs), DECADE), top_threshold=1)
    assert set(shares) == {2012, 2013, 2014}
    assert all(row["Solo CA"] == 1.0 and row[OTHER] == 0.0 for row in shares.values())


@settings(max_examples=40, deadline=None)
@given(ct_dataset(), st.sampled_from([0, 1, 3, 20]))
def test_share_bounds_and_normalized_sum(objs, threshold):
    table = coverage(ingest_all(objs), DECADE)
    for normalized in (False, True):
        shares = market_share(table, threshold, DECADE, normalized=normalized)
        for year, row in shares.items():
            assert all(0.0 <= v <= 1.0 for v in row.values())
            assert table.year_totals[year] > 0
            if normalized:
                assert sum(row.values()) == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["A", "B", "C", "D"]), st.integers(2009, 2019)),
                min_size=1, max_size=30),
       st.sampled_from([0, 1, 2]))
def test_raw_shares_sum_to_one_when_each_host_has_one_ca(assignments, threshold):
    objs = {f"h{i}.gov": [ct_object(f"h{i}.gov", ca, d(y, 2), d(y, 10), i)]
            for i, (ca, y) in enumerate(assignments)}
    shares = market_share(coverage(ingest_all(objs), DECADE), threshold, DECADE)
    for row in shares.values():
        assert sum(row.values()) == pytest.approx(1.0)


def test_top_threshold_uses_decade_mean():
    # 22 hosts in one year only: mean over eleven years is 2
    objs = {f"h{i}.gov": [ct_object(f"h{i}.gov", "Burst CA", d(2015), d(2015, 6), i)]
            for i in range(22)}
    table = coverage(ingest_all(objs), DECADE)
    assert top_cas(table, 20, DECADE) == []
    assert top_cas(table, 2, DECADE) == ["Burst CA"]
    assert top_cas(table, 20) == ["Burst CA"]


@pytest.fixture(scope="module")
def ca_coverage():
    records = ingest_all(ca_coverage_objects())
    return coverage(records, DECADE)


def test_ca_coverage_cells_reproduced(ca_coverage):
    label = {ca: record_from_json(ct_object("x", issuer, d(2015), d(2016), 0)).issuer_ca_label
             for ca, issuer in ISSUER_O.items()}
    for ca, counts in CA_COVERAGE.items():
        assert [ca_coverage.count(label[ca], y) for y in YEARS] == counts, ca
    assert [ca_coverage.year_totals[y] for y in YEARS] == ALL_CAS


def test_ca_coverage_shares(ca_coverage):
    shares = market_share(ca_coverage, 20, DECADE)
    assert shares[2019]["GoDaddy"] == pytest.approx(347 / 1109)
    assert shares[2015].get("LetsEncrypt", 0.0) == 0.0
    normalized = market_share(ca_coverage, 20, DECADE, normalized=True)
    assert all(sum(row.values()) == pytest.approx(1.0) for row in normalized.values())


# --- SAN sharing ------------------------------------------------------------------

def test_large_san_cert_counts_host():
    sans = ["a.gov"] + [f"s{i}.example.com" for i in range(599)]
    r = recs([ct_object("a.gov", "X", d(2019), d(2019, 12), "big", sans=sans)])
    assert san_sharing(r, 10, DECADE) == {2019: 1.0}


def test_small_sans_give_zero():
    objs = {f"h{i}.gov": [ct_object(f"h{i}.gov", "X", d(2015), d(2017), i,
                                    sans=[f"h{i}.gov"] + [f"x{j}.gov" for j in range(9)])]
            for i in range(5)}
    assert set(san_sharing(ingest_all(objs), 10, DECADE).values()) == {0.0}


def test_toy_quarter_share():
    objs = {f"h{i}.gov": [ct_object(f"h{i}.gov", "X", d(2018), d(2018, 9), i)] for i in range(3)}
    objs["big.gov"] = [ct_object("big.gov", "X", d(2018), d(2018, 9), "b",
                                 sans=["big.gov"] + [f"x{j}.gov" for j in range(10)])]
    assert san_sharing(ingest_all(objs), 10, DECADE) == {2018: 0.25}


def test_exactly_threshold_is_not_large():
    objs = {"a.gov": [ct_object("a.gov", "X", d(2018), d(2018, 9), "t",
                                sans=["a.gov"] + [f"x{j}.gov" for j in range(9)])]}
    assert san_sharing(ingest_all(objs), 10, DECADE) == {2018: 0.0}


# --- validity -------------------------------------------------------------------------

def _days_objs(days, year=2019):
    return {"a.gov": [ct_object("a.gov", "X", d(year, 2), d(year, 2) + dt.timedelta(days=n), i)
                      for i, n in enumerate(days)]}


def test_single_cert_median():
    assert validity_stats(ingest_all(_days_objs([90])))[2019].median == 90


def test_odd_median():
    s = validity_stats(ingest_all(_days_objs([90, 365, 730])))[2019]
    assert (s.minimum, s.median, s.maximum, s.count) == (90, 365, 730, 3)


def test_validity_floors_partial_days():
    objs = {"a.gov": [ct_object("a.gov", "X", d(2019, 2),
                                d(2019, 2) + dt.timedelta(days=89, hours=23), "f")]}
    assert validity_stats(ingest_all(objs))[2019].median == 89


def quantile_oracle(values, p):
    """Linear interpolation between closest ranks, written out by hand."""
    xs = sorted(values)
    pos = (len(xs) - 1) * p
    lo = int(pos)
    hi = min(lo + 1, len(xs) - 1)
    return xs[lo] + (xs[hi] - xs[lo]) * (pos - lo)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 1500), min_size=1, max_size=40), st.randoms())
def test_quartiles_match_oracle_and_ignore_order(days, rnd):
    stats = validity_stats(ingest_all(_days_objs(days)))[2019]
    assert stats.q1 == pytest.approx(quantile_oracle(days, 0.25))
    assert stats.median == pytest.approx(quantile_oracle(days, 0.5))
    assert stats.q3 == pytest.approx(quantile_oracle(days, 0.75))
    shuffled = list(days)
    rnd.shuffle(shuffled)
    records = ingest_all(_days_objs(days))
    rnd.shuffle(records)
    assert validity_stats(records)[2019] == stats


def test_validity_bucketed_by_issuance_year():
    objs = {"a.gov": [ct_object("a.gov", "X", d(2016, 12, 31), d(2018, 12, 31), "a"),
                      ct_object("a.gov", "X", d(2017, 1, 1), d(2017, 4, 1), "b")]}
    stats = validity_stats(ingest_all(objs))
    assert stats[2016].count == 1 and stats[2017].median == 90


# --- historic types and profiles ----------------------------------------------------

OV = ["2.23.140.1.2.2"]
DVP = ["2.23.140.1.2.1"]


def test_historic_profiles_examples():
    objs = {"a.gov": [ct_object("a.gov", "X", d(2014, 2), d(2014, 11), "ov", policies=OV,
                                subject={"CN": "a.gov", "O": "A"}),
                      ct_object("a.gov", "X", d(2018, 2), d(2018, 5), "dv", policies=DVP)]}
    hist = historic_profiles(ingest_all(objs), {"a.gov": True}, {"a.gov": True}, DECADE)
    assert hist.counts[2014] == Counter({Profile.STRONG: 1})
    assert hist.counts[2018] == Counter({Profile.WEAK: 1})
    assert not hist.missing_flags


def test_missing_flags_counted_inadequate():
    objs = {"b.gov": [ct_object("b.gov", "X", d(2014, 2), d(2014, 11), "ov", policies=OV)]}
    hist = historic_profiles(ingest_all(objs), {}, {}, DECADE)
    assert hist.counts[2014] == Counter({Profile.INADEQUATE: 1})
    assert hist.missing_flags == {"b.gov"}


def test_historic_matches_enumeration():
    rng = random.Random(3)
    hosts = {"a.gov": (True, True), "b.org": (False, True), "c.mi.us": (True, False)}
    objs = defaultdict(list)
    for i in range(30):
        h = rng.choice(sorted(hosts))
        y = rng.randint(2009, 2019)
        kind = rng.choice(["dv", "ov", "ev"])
        pol = {"dv": DVP, "ov": OV, "ev": ["2.23.140.1.1"]}[kind]
        subj = {"CN": h} if kind == "dv" else {"CN": h, "O": "Org"}
        start = d(y, rng.randint(1, 12))
        objs[h].append(ct_object(h, "X", start, start + dt.timedelta(days=rng.choice([90, 400])),
                                 i, policies=pol, subject=subj))
    records = ingest_all(objs)
    dnssec = {h: v[1] for h, v in hosts.items()}
    restricted = {h: v[0] for h, v in hosts.items()}
    hist = historic_profiles(records, dnssec, restricted, DECADE)
    expected = defaultdict(Counter)
    for h, (r, s) in hosts.items():
        for y in range(2009, 2020):
            start, end = d(y), dt.datetime(y, 12, 31, 23, 59, 59, tzinfo=UTC)
            ranks = [2 if rec.cert.subject.get("O") else 1 for rec in records
                     if rec.host == h and rec.cert.not_before <= end and rec.cert.not_after >= start]
            if not ranks:
                continue
            strong_id = max(ranks) == 2
            if strong_id:
                p = Profile.STRONG if (r and s) else Profile.WEAK
            else:
                p = Profile.WEAK if (r and s) else Profile.INADEQUATE
            expected[y][p] += 1
    assert hist.counts == dict(expected)
    types = historic_cert_types(records, DECADE)
    assert {y: sum(c.values()) for y, c in types.items()} == \
        {y: sum(c.values()) for y, c in expected.items()}
