import base64
import calendar
import random

import dns.dnssec
import dns.name
import dns.rdata
import dns.rdataclass
import dns.rdatatype
import dns.rrset
import pytest
from hypothesis import given, settings, strategies as st

from alertscope.dnssec import (DnssecVerdict, DsRecord, RrSet, Rrsig, TrustAnchor,
                               ZoneFixtureSource, canonical_rrset_wire, ds_digest,
                               rrsig_problem, validate_chain, verify_rrsig)
from alertscope.dnssec.chain import UNAUTHENTICATED_DENIAL, tld_dnssec_support
from alertscope.dnssec.crypto import BAD_SIGNATURE, EXPIRED, KEY_MISMATCH, TYPE_MISMATCH
from alertscope.dnssec.records import A, DNSKEY, DS, Dnskey, name_to_wire, read_name
from alertscope.dnssec.signing import ZoneSpec, build_tree
from alertscope.dnssec.sources import Answer, SerializingSource
from alertscope.errors import IncompleteFixture, MalformedRdata, UnsupportedAlgorithm

T2020 = calendar.timegm((2020, 3, 1, 0, 0, 0))
INCEPTION = calendar.timegm((2019, 1, 1, 0, 0, 0))
EXPIRATION = calendar.timegm((2030, 1, 1, 0, 0, 0))

# RFC 5702 section 6.1: RSA/SHA-256 example
RFC5702_KEY = base64.b64decode(
    "AwEAAcFcGsaxxdgiuuGmCkVImy4h99CqT7jwY3pexPGcnUFtR2Fh36BponcwtkZ4cAgtvd4Qs8PkxUdp6p/"
    "DlUmObdk=")
RFC5702_SIG = base64.b64decode(
    "kRCOH6u7l0QGy9qpC9l1sLncJcOKFLJ7GhiUOibu4teYp5VE9RncriShZNz85mwlMgNEacFYK/lPtPiVYP4bwg==")


def rfc5702():
    key = Dnskey(256, 3, 8, RFC5702_KEY)
    rrset = RrSet("www.example.net.", A, 3600, [bytes([192, 0, 2, 91])])
    sig = Rrsig(A, 8, 3, 3600, calendar.timegm((2030, 1, 1, 0, 0, 0)),
                calendar.timegm((2000, 1, 1, 0, 0, 0)), 9033, "example.net.", RFC5702_SIG)
    return rrset, sig, key


def test_rfc5702_key_tag():
    assert rfc5702()[2].key_tag() == 9033


def test_rfc5702_vector_verifies():
    rrset, sig, key = rfc5702()
    assert verify_rrsig(rrset, sig, key, now=T2020)


def test_rfc5702_vector_dnspython_oracle():
    rrset, sig, key = rfc5702()
    owner = dns.name.from_text("www.example.net.")
    rr = dns.rrset.from_text(owner, 3600, "IN", "A", "192.0.2.91")
    rrsig = dns.rdata.from_wire(dns.rdataclass.IN, dns.rdatatype.RRSIG, sig.to_wire(), 0,
                                len(sig.to_wire()))
    dnskey = dns.rdata.from_wire(dns.rdataclass.IN, dns.rdatatype.DNSKEY, key.to_wire(), 0,
                                 len(key.to_wire()))
    keys = {dns.name.from_text("example.net."): dns.rrset.from_rdata("example.net.", 3600, dnskey)}
    dns.dnssec.validate_rrsig(rr, rrsig, keys, now=T2020)  # raises if invalid


def _flip(data: bytes, bit: int) -> bytes:
    buf = bytearray(data)
    buf[bit // 8] ^= 1 << (bit % 8)
    return bytes(buf)


def test_rfc5702_single_bit_mutations_rejected():
    rrset, sig, key = rfc5702()
    rng = random.Random(5702)
    prefix = sig.signed_prefix()[:18]  # fixed RRSIG fields, signer name excluded
    accepted = []
    for trial in range(100):
        target = rng.choice(["signature", "key", "rdata", "rrsig"])
        if target == "signature":
            mutated = (rrset, Rrsig(*_fields(sig)[:-1], _flip(sig.signature,
                                                              rng.randrange(512))), key)
        elif target == "key":
            mutated = (rrset, sig, Dnskey(256, 3, 8, _flip(key.public_key,
                                                          rng.randrange(8 * len(key.public_key)))))
        elif target == "rdata":
            rdata = _flip(rrset.rdata_list[0], rng.randrange(32))
            mutated = (RrSet(rrset.owner, A, 3600, [rdata]), sig, key)
        else:
            raw = _flip(prefix, rng.randrange(8 * len(prefix)))
            wire = raw + name_to_wire(sig.signer) + sig.signature
            mutated = (rrset, Rrsig.from_wire(wire), key)
        try:
            ok = verify_rrsig(*mutated, now=T2020)
        except UnsupportedAlgorithm:
            ok = False
        if ok:
            accepted.append((trial, target))
    assert accepted == []


def _fields(sig):
    return (sig.type_covered, sig.algorithm, sig.labels, sig.original_ttl, sig.expiration,
            sig.inception, sig.key_tag, sig.signer, sig.signature)


def test_rrsig_problem_reasons():
    rrset, sig, key = rfc5702()
    assert rrsig_problem(rrset, sig, key, now=calendar.timegm((2031, 1, 1, 0, 0, 0))) == EXPIRED
    aaaa = RrSet("www.example.net.", 28, 3600, [bytes(16)])
    assert rrsig_problem(aaaa, sig, key, now=T2020) == TYPE_MISMATCH
    other = Dnskey(257, 3, 8, RFC5702_KEY)
    assert rrsig_problem(rrset, sig, other, now=T2020) == KEY_MISMATCH
    assert rrsig_problem(rrset, sig, Dnskey(256, 3, 8, _flip(RFC5702_KEY, 300)),
                         now=T2020) in (BAD_SIGNATURE, KEY_MISMATCH)


def test_unsupported_algorithm_raises():
    rrset, sig, _ = rfc5702()
    with pytest.raises(UnsupportedAlgorithm):
        rrsig_problem(rrset, sig, Dnskey(256, 3, 5, RFC5702_KEY), now=T2020)


def test_owner_case_is_canonicalized():
    rrset, sig, key = rfc5702()
    upper = RrSet("WWW.Example.NET.", A, 3600, rrset.rdata_list)
    assert verify_rrsig(upper, sig, key, now=T2020)


def test_rdata_order_irrelevant():
    a = RrSet("x.test.", A, 60, [bytes([10, 0, 0, 2]), bytes([10, 0, 0, 1])])
    b = RrSet("x.test.", A, 60, [bytes([10, 0, 0, 1]), bytes([10, 0, 0, 2]),
                                  bytes([10, 0, 0, 1])])
    assert canonical_rrset_wire(a, 60) == canonical_rrset_wire(b, 60)


def test_empty_rrset_rejected():
    with pytest.raises(MalformedRdata):
        RrSet("x.test.", A, 60, [])


def test_read_name_rejects_garbage():
    with pytest.raises(MalformedRdata):
        read_name(b"\x05ab", 0)


@st.composite
def rdata_sets(draw):
    n = draw(st.integers(1, 5))
    return [bytes(draw(st.lists(st.integers(0, 255), min_size=4, max_size=4))) for _ in range(n)]


@settings(max_examples=40, deadline=None)
@given(rdata_sets(), st.sampled_from(["www.Example.test.", "a.b.example.test.", "example.test."]),
       st.integers(0, 2**31 - 1))
def test_canonical_form_matches_dnspython(rdatas, owner, ttl):
    """Signed data equals dnspython's construction for random A rrsets."""
    rrset = RrSet(owner, A, ttl, rdatas)
    labels = len([l for l in owner.split(".") if l])
    sig = Rrsig(A, 13, labels, ttl, EXPIRATION, INCEPTION, 1, "example.test.", b"\0" * 64)
    ours = sig.signed_prefix() + canonical_rrset_wire(rrset, ttl, labels)
    name = dns.name.from_text(owner)
    rr = dns.rrset.from_text_list(name, ttl, "IN", "A",
                                  [".".join(str(b) for b in r) for r in rdatas])
    rrsig = dns.rdata.from_wire(dns.rdataclass.IN, dns.rdatatype.RRSIG, sig.to_wire(), 0,
                                len(sig.to_wire()))
    assert ours == dns.dnssec._make_rrsig_signature_data(rr, rrsig)


def test_wildcard_owner_rewrite():
    rrset = RrSet("a.b.example.test.", A, 60, [bytes(4)])
    wire = canonical_rrset_wire(rrset, 60, labels=2)
    assert wire.startswith(name_to_wire("*.example.test."))


# --- signed trees -----------------------------------------------------------

def three_zone_specs(child_ds=True, alg=13):
    return [ZoneSpec(".", algorithm=8), ZoneSpec("test.", algorithm=alg),
            ZoneSpec("child.test.", algorithm=alg, delegate_ds=child_ds,
                     records=[("www", "A", "192.0.2.1")])]


@pytest.fixture(scope="module")
def tree():
    zones, anchor = build_tree(three_zone_specs(), INCEPTION, EXPIRATION)
    return zones, TrustAnchor.from_text(anchor)


def test_three_zone_tree_secure(tree):
    zones, anchor = tree
    status = validate_chain("www.child.test.", ZoneFixtureSource(zones), anchor, now=T2020)
    assert status.verdict is DnssecVerdict.SECURE and status.enabled


def test_dnspython_validates_our_fixture(tree):
    """Independent check that the fixture itself is correctly signed."""
    zones, _ = tree
    zone = zones["child.test."]
    origin = dns.name.from_text("child.test.")
    keys = {origin: zone.find_rrset(origin, "DNSKEY")}
    www = dns.name.from_text("www.child.test.")
    rr = zone.find_rrset(www, "A")
    sig = zone.find_rrset(www, "RRSIG", "A")
    dns.dnssec.validate(rr, sig, keys, now=T2020)


def test_child_without_ds_is_insecure():
    zones, anchor = build_tree(three_zone_specs(child_ds=False), INCEPTION, EXPIRATION)
    status = validate_chain("www.child.test.", ZoneFixtureSource(zones),
                            TrustAnchor.from_text(anchor), now=T2020)
    assert status.verdict is DnssecVerdict.INSECURE
    assert status.failing_link[0] == "child.test."
    assert status.caveat == ""


def test_untrusted_absence_carries_caveat():
    zones, anchor = build_tree(three_zone_specs(child_ds=False), INCEPTION, EXPIRATION)

    class Untrusting:
        trusted_absence = False

        def __init__(self, inner):
            self.inner = inner

        def query(self, name, rr_type):
            return self.inner.query(name, rr_type)

    status = validate_chain("www.child.test.", Untrusting(ZoneFixtureSource(zones)),
                            TrustAnchor.from_text(anchor), now=T2020)
    assert status.caveat == UNAUTHENTICATED_DENIAL


def _tamper_dnskey(zone, origin_text):
    origin = dns.name.from_text(origin_text)
    node = zone.get_node(origin)
    rds = node.get_rdataset(dns.rdataclass.IN, dns.rdatatype.DNSKEY)
    old = list(rds)[0]
    key = bytearray(old.key)
    key[7] ^= 0x01
    new = type(old)(old.rdclass, old.rdtype, old.flags, old.protocol, old.algorithm, bytes(key))
    with zone.writer() as txn:
        txn.replace(origin, rds.ttl, new)


@pytest.mark.parametrize("where", ["child.test.", "test."])
def test_tampered_dnskey_is_bogus(where):
    zones, anchor = build_tree(three_zone_specs(), INCEPTION, EXPIRATION)
    _tamper_dnskey(zones[where], where)
    status = validate_chain("www.child.test.", ZoneFixtureSource(zones),
                            TrustAnchor.from_text(anchor), now=T2020)
    assert status.verdict is DnssecVerdict.BOGUS
    assert status.failing_link[0] == where


def test_tampered_address_is_bogus():
    zones, anchor = build_tree(three_zone_specs(), INCEPTION, EXPIRATION)
    www = dns.name.from_text("www.child.test.")
    with zones["child.test."].writer() as txn:
        txn.replace(www, 3600, dns.rdata.from_text("IN", "A", "192.0.2.66"))
    status = validate_chain("www.child.test.", ZoneFixtureSource(zones),
                            TrustAnchor.from_text(anchor), now=T2020)
    assert status.verdict is DnssecVerdict.BOGUS


def test_expired_signatures_are_bogus(tree):
    zones, anchor = tree
    later = calendar.timegm((2031, 1, 1, 0, 0, 0))
    status = validate_chain("www.child.test.", ZoneFixtureSource(zones), anchor, now=later)
    assert status.verdict is DnssecVerdict.BOGUS


def test_wrong_anchor_is_bogus(tree):
    zones, anchor = tree
    bad = TrustAnchor(".", DsRecord(anchor.key_digest.key_tag, 8, 2, bytes(32)))
    status = validate_chain("www.child.test.", ZoneFixtureSource(zones), bad, now=T2020)
    assert status.verdict is DnssecVerdict.BOGUS


def test_rsa_child_zone_secure():
    zones, anchor = build_tree(three_zone_specs(alg=8), INCEPTION, EXPIRATION)
    status = validate_chain("www.child.test.", ZoneFixtureSource(zones),
                            TrustAnchor.from_text(anchor), now=T2020)
    assert status.verdict is DnssecVerdict.SECURE


def test_missing_address_is_indeterminate(tree):
    zones, anchor = tree
    status = validate_chain("nothing.child.test.", ZoneFixtureSource(zones), anchor, now=T2020)
    assert status.verdict is DnssecVerdict.INDETERMINATE


def test_incomplete_fixture_is_indeterminate():
    specs = [ZoneSpec(".", algorithm=8), ZoneSpec("test."),
             ZoneSpec("child.test.", records=[("www", "A", "192.0.2.1")])]
    zones, anchor = build_tree(specs, INCEPTION, EXPIRATION)
    del zones["child.test."]
    source = ZoneFixtureSource(zones)
    with pytest.raises(IncompleteFixture):
        source.query("www.child.test.", A)
    status = validate_chain("www.child.test.", source, TrustAnchor.from_text(anchor), now=T2020)
    assert status.verdict is DnssecVerdict.INDETERMINATE


def test_ds_answered_from_parent(tree):
    zones, _ = tree
    source = ZoneFixtureSource(zones)
    ds = source.query("child.test.", DS)
    assert ds and ds.rrset.owner == "child.test."
    assert [sig.signer for sig in ds.rrsigs] == ["test."]
    key = Dnskey.from_wire(source.query("child.test.", DNSKEY).rrset.rdata_list[0])
    record = DsRecord.from_wire(ds.rrset.rdata_list[0])
    assert record.matches("child.test.", key)
    assert record.digest == ds_digest("child.test.", key, 2)


def test_ds_digest_matches_dnspython(tree):
    zones, _ = tree
    origin = dns.name.from_text("child.test.")
    dnskey = list(zones["child.test."].find_rdataset(origin, "DNSKEY"))[0]
    ours = ds_digest("child.test.", Dnskey.from_wire(dnskey.to_wire()), 2)
    assert ours == dns.dnssec.make_ds(origin, dnskey, "SHA256").digest


def test_tld_support(tree):
    zones, _ = tree
    source = ZoneFixtureSource(zones)
    assert tld_dnssec_support("test.", source) is True
    unsigned, _ = build_tree([ZoneSpec(".", algorithm=8), ZoneSpec("zz.", signed=False)],
                             INCEPTION, EXPIRATION)
    assert tld_dnssec_support("zz.", ZoneFixtureSource(unsigned)) is False


def test_serializing_source_forwards_absence_policy(tree):
    zones, anchor = tree
    wrapped = SerializingSource(ZoneFixtureSource(zones))
    assert wrapped.trusted_absence
    assert validate_chain("www.child.test.", wrapped, anchor, now=T2020).enabled


def test_answer_truthiness():
    assert not Answer(None)


def test_anchor_parsing(tmp_path):
    path = tmp_path / "a.ds"
    path.write_text("; comment\n. IN DS 20326 8 2 E06D44B80B8F1D39A95C0B0D7C65D08458E880409BBC683457104237C7F8EC8D\n")
    anchor = TrustAnchor.from_file(path)
    assert anchor.zone == "." and anchor.key_digest.key_tag == 20326
    path.write_text("")
    with pytest.raises(ValueError):
        TrustAnchor.from_file(path)


def test_demo_zones_validate(demo):
    source = ZoneFixtureSource.from_directory(demo / "zones")
    anchor = TrustAnchor.from_file(demo / "zones" / "anchor.ds")
    assert validate_chain("www.coastal-oes.gov", source, anchor, now=T2020).enabled
    insecure = validate_chain("www.lakeshore.mi.us", source, anchor, now=T2020)
    assert insecure.verdict is DnssecVerdict.INSECURE
    assert insecure.failing_link[0] == "mi.us."
