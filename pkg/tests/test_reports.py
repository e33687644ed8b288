from collections import Counter

from nvdetect.reports import DiscrepancyEntry, DiscrepancyReport, build_validation_report

# Every design decision with a published-vs-computed consequence has exactly
# one named row; this list is the contract for the report's shape.
NORMATIVE_CHECKS = {
    "f-sep-corrected-vs-quadrature",
    "f-ent-corrected-vs-quadrature",
    "oracle-dd-residual-order-bound",
    "oracle-ghz-residual-order-bound",
    "oracle-dd-second-order-agreement",
    "oracle-ghz-second-order-agreement",
    "dephasing-channel-cptp",
    "dephasing-sx-attenuation",
    "dephased-ghz-coherence",
    "nuclear-sign-independence",
    "pi-pulse-involution",
    "pulse-frame-flip-identity",
    "detection-time-entangled-anchor",
    "detection-time-ratio-anchor",
    "ratio-convention-independence",
    "scaling-laws-exact",
    "geometry-optimum-sep",
    "geometry-optimum-ent",
    "constants-published-recorded",
}

INFORMATIONAL_CHECKS = {
    "f-sep-printed-vs-quadrature",
    "f-ent-printed-zero-height",
    "f-ent-printed-vs-corrected-at-optimum",
    "residual-order-measured",
    "interference-count-convention",
    "noise-placement-modes",
    "coupling-convention-calibration",
    "gamma-probe-assumed",
    "constant-sep-rederived",
    "constant-ent-rederived",
    "f-optimum-resonance-vs-published",
    "expectation-decay-exponent-variant",
    "ghz-baseline-exponent-variant",
    "point-nuclei-approximation",
}


def test_fast_report_passes_and_covers_ledger():
    report = build_validation_report("fast")
    assert report.exit_code == 0
    counts = Counter(e.name for e in report.entries)
    assert all(c == 1 for c in counts.values()), counts
    assert set(counts) == NORMATIVE_CHECKS | INFORMATIONAL_CHECKS
    by_name = {e.name: e for e in report.entries}
    for name in NORMATIVE_CHECKS:
        assert by_name[name].verdict == "pass", name
    for name in INFORMATIONAL_CHECKS:
        assert by_name[name].verdict == "info", name


def test_report_records_published_constants():
    report = build_validation_report("fast")
    by_name = {e.name: e for e in report.entries}
    assert by_name["constant-sep-rederived"].published == 0.0536
    assert by_name["constant-ent-rederived"].published == 0.0107
    assert by_name["constant-sep-rederived"].rel_deviation > 0


def test_report_text_and_exit_code():
    report = DiscrepancyReport()
    report.add("sample-pass", computed=1.0, verdict="pass")
    assert report.exit_code == 0
    report.add("sample-fail", computed=2.0, published=1.0, rel_deviation=1.0,
               verdict="fail", note="unit test")
    assert report.exit_code == 1
    text = report.to_text()
    assert "FAIL" in text and "sample-fail" in text and "1 failures" in text


def test_entry_format_handles_missing_fields():
    entry = DiscrepancyEntry(name="x", computed=3.14)
    line = entry.format()
    assert "published=-" in line and "rel_dev=-" in line
