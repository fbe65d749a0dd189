import dataclasses
import json

import pytest

from relators import audit, jsonio
from relators.audit import PROPERTIES, AuditConfig, Property, replay, run_audit
from relators.errors import PreconditionViolated


def test_config_validation():
    with pytest.raises(PreconditionViolated):
        AuditConfig(trials=0)
    with pytest.raises(PreconditionViolated):
        AuditConfig(base="gset:z9")
    with pytest.raises(PreconditionViolated):
        AuditConfig(properties=("nope",))


def test_single_trial_is_deterministic():
    cfg = AuditConfig(seed=11, trials=1, properties=("final_iff_full_eso",))
    a = jsonio.dumps(run_audit(cfg).to_json())
    b = jsonio.dumps(run_audit(cfg).to_json())
    assert a == b and a.count("\n") == 1
    assert json.loads(a)["properties"]["final_iff_full_eso"]["passed"] == 1


def test_trials_do_not_depend_on_selection():
    one = run_audit(AuditConfig(seed=3, trials=3, properties=("units",))).to_json()
    both = run_audit(AuditConfig(seed=3, trials=3, properties=("round_trip", "units"))).to_json()
    assert one["properties"]["units"] == both["properties"]["units"]


def test_timings_only_on_request():
    cfg = AuditConfig(trials=1, properties=("units",), timings=True)
    assert "seconds" in run_audit(cfg).to_json()["properties"]["units"]
    cfg = dataclasses.replace(cfg, timings=False)
    assert "seconds" not in run_audit(cfg).to_json()["properties"]["units"]


def test_counterexample_replays(monkeypatch):
    # a deliberately wrong property: every distributor with an element "fails"
    def wrong(S):
        return S.n_elements == 0, {"elements": S.n_elements}

    broken = Property(PROPERTIES["units"].generate, wrong, "always fails on non-empty input")
    monkeypatch.setitem(PROPERTIES, "units", broken)
    report = run_audit(AuditConfig(seed=1, trials=5, properties=("units",)))
    assert not report.ok
    cex = report.results["units"].counterexample
    doc = json.loads(jsonio.dumps(cex))
    ok, detail = replay(doc)
    assert not ok and detail == doc["detail"]


@pytest.mark.parametrize("name", sorted(PROPERTIES))
def test_every_property_passes_a_few_trials(name):
    cfg = AuditConfig(seed=5, trials=3, properties=(name,))
    report = run_audit(cfg)
    assert report.ok, report.to_json()


@pytest.mark.parametrize("name", ["last_lemma", "alan_cc", "support_kernel_pair", "regular_epi_stable"])
def test_base_dependent_properties_over_s3(name):
    report = run_audit(AuditConfig(seed=2, trials=3, base="gset:s3", properties=(name,)))
    assert report.ok, report.to_json()


def test_instances_round_trip_through_json():
    cfg = AuditConfig(trials=1, base="gset:z2")
    for name in ("regular_epi_stable", "last_lemma", "comparison"):
        rng = audit.make_rng(cfg.seed, audit.property_key(name), 0)
        inst = PROPERTIES[name].generate(rng, cfg)
        docs = json.loads(jsonio.dumps(audit._instance_to_json(inst)))
        back = audit._instance_from_json(docs)
        assert audit._instance_to_json(back) == docs
