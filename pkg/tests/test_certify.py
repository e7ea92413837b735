"""Integrality certifier: report contents, determinism, honest denominators."""

import json

from conftest import SPECS_DIR
from recint.certify import certify
from recint.multipoly import denom_profile
from recint.reclang import parse_spec, run_spec


def load(name: str):
    return parse_spec((SPECS_DIR / name).read_text())


class TestProductSpec:
    def test_fully_integral(self):
        report = certify(load("useq.spec"), 25)
        assert report.pipeline == "odd-form"
        assert report.theorem2_applicable
        assert report.offenders == []
        assert report.in_ring
        assert report.in_ring_half
        assert report.dn_scaled_integral
        assert report.v2_defects == [0] * 26
        assert not report.critical

    def test_report_metadata(self):
        report = certify(load("useq.spec"), 5)
        assert report.seq_name == "u"
        assert report.ring_vars == ("b", "c")
        assert report.n_checked == 5
        assert len(report.per_term) == 6
        assert report.per_term[0] == {"n": 0, "denominator": 1, "v2_defect": 0}


class TestBaseSpec:
    def test_guarantee_does_not_apply(self):
        report = certify(load("wseq.spec"), 12)
        assert report.pipeline == "odd-form"
        assert not report.theorem2_applicable
        assert [o["i"] for o in report.offenders] == [1, 3]
        assert report.offenders[0]["even_part"] == "-t^2 + b + 1/4"
        assert report.offenders[1]["even_part"] == "c"
        assert not report.critical  # no guarantee, so no counterexample

    def test_denominators_reported_honestly(self):
        report = certify(load("wseq.spec"), 12)
        assert not report.in_ring
        assert not report.in_ring_half
        # lcm(1..n) scaling genuinely fails from n = 4
        assert not report.dn_scaled_integral
        assert report.v2_defects[:5] == [0, 0, 1, 1, 3]

    def test_lcm_scale_boundary(self):
        # the scaled-integrality flag flips exactly between n = 3 and n = 4
        assert certify(load("wseq.spec"), 3).dn_scaled_integral
        assert not certify(load("wseq.spec"), 4).dn_scaled_integral


class TestPlainPipeline:
    def test_apery(self):
        report = certify(load("apery.spec"), 20)
        assert report.pipeline == "plain"
        assert not report.theorem2_applicable
        assert "n^3" in report.reason
        assert report.in_ring
        assert not report.critical


class TestSyntheticSpecs:
    def test_odd_specs_stay_in_half_ring(self):
        for name in ("odd-cubic.spec", "odd-mixed.spec", "odd-deep.spec"):
            report = certify(load(name), 20)
            assert report.theorem2_applicable, name
            assert report.in_ring_half, name
            assert not report.critical, name

    def test_defects_match_denominator_profile(self):
        spec = load("odd-deep.spec")
        report = certify(spec, 15)
        seq = run_spec(spec, 15)
        for n, term in enumerate(seq.terms):
            assert report.v2_defects[n] == denom_profile(term).max_neg_v2


class TestSerialization:
    def test_json_round_trip_and_key_order(self):
        report = certify(load("useq.spec"), 4)
        doc = json.loads(report.to_json())
        assert list(doc) == [
            "spec_hash", "seq_name", "ring_vars", "n_checked", "pipeline",
            "theorem2_applicable", "offenders", "reason", "in_ring",
            "in_ring_half", "dn_scaled_integral", "v2_defects", "per_term",
            "critical",
        ]
        assert doc["spec_hash"] == report.spec_hash

    def test_deterministic(self):
        text = (SPECS_DIR / "wseq.spec").read_text()
        a = certify(parse_spec(text), 10).to_json()
        b = certify(parse_spec(text), 10).to_json()
        assert a == b

    def test_table_lines_carry_flags_and_offenders(self):
        lines = certify(load("wseq.spec"), 6).table_lines()
        flags = lines[1]
        assert "pipeline=odd-form" in flags
        assert "applicable=False" in flags
        assert any("offender i=1" in line for line in lines)
