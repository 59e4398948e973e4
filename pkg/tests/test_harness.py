import copy
import json
from pathlib import Path

import pytest

from ettlab.harness import (ALL_CHECKS, CorpusSpec, check_instance, emit_certificate, instance_seed,
                            revalidate_certificate, run_campaign)
from ettlab.multigraph import fat_triangle

DATA = Path(__file__).parent / "data"


def ft2_cert():
    g = fat_triangle(2)
    return check_instance(g, ALL_CHECKS, seed=instance_seed(0, 0, g)).certificate()


def test_corpus_parsing():
    assert len(CorpusSpec.parse("enumerate:3:2").graphs()) == 9
    assert len(CorpusSpec.parse("random:5:5:2:7").graphs()) == 5
    assert CorpusSpec.parse("fat-cycle:3:2,2,2").graphs()[0] == fat_triangle(2)
    assert CorpusSpec.parse("empty").graphs() == []
    for bad in ("enumerate:3", "nope:1", "random:x:3:2"):
        with pytest.raises(ValueError):
            CorpusSpec.parse(bad)


def test_enumerated_goldberg_campaign_is_clean():
    report, certs = run_campaign("enumerate:4:2", ("goldberg", "oracle-sandwich"))
    assert report.clean and not certs
    assert report.instances == 62
    assert sum(report.tallies.values()) == 62 and report.tallies["timeout"] == 0


def test_ft2_all_checks():
    report, certs = run_campaign("fat-cycle:3:2,2,2", ALL_CHECKS)
    assert report.clean and report.tallies["delta+2+"] == 1
    assert report.triples_checked == 6


def test_empty_corpus():
    report, certs = run_campaign("empty", ALL_CHECKS)
    assert report.instances == 0 and report.clean and certs == []


def test_unknown_check_rejected():
    with pytest.raises(ValueError):
        run_campaign("empty", ("goldberg", "telepathy"))


def test_jobs_do_not_change_report():
    a, _ = run_campaign("random:40:5:3:11", ALL_CHECKS, jobs=1, seed=5)
    b, _ = run_campaign("random:40:5:3:11", ALL_CHECKS, jobs=4, seed=5)
    assert a.to_json() == b.to_json()
    assert "elapsed" not in a.to_json() and "elapsed" in a.to_json(timing=True)


def test_golden_certificate_revalidates():
    assert revalidate_certificate(DATA / "ft2.cert.json")
    pinned = json.loads((DATA / "ft2.cert.json").read_text())
    fresh = ft2_cert()
    pinned.pop("timing"), fresh.pop("timing")
    assert json.loads(json.dumps(fresh, sort_keys=True)) == pinned


def test_certificate_round_trip(tmp_path):
    cert = ft2_cert()
    path = tmp_path / "c.json"
    emit_certificate(cert, path)
    assert revalidate_certificate(path).ok


def test_corrupted_certificates_fail():
    cert = ft2_cert()
    bad = copy.deepcopy(cert)
    cols = bad["triples"][0]["coloring"]
    i = next(j for j, x in enumerate(cols) if x is not None)
    cols[i] = next(x for x in cols if x is not None and x != cols[i])
    assert not revalidate_certificate(bad)
    bad = copy.deepcopy(cert)
    bad["chi"]["value"] -= 1
    assert not revalidate_certificate(bad)
    bad = copy.deepcopy(cert)
    bad["surprise"] = 1
    res = revalidate_certificate(bad)
    assert not res and "surprise" in res.first_failure
    bad = copy.deepcopy(cert)
    bad["triples"][0]["extra"] = True
    assert not revalidate_certificate(bad)
