import math

import pytest

from lightlike_solitons.completeness import (
    ProbeVerdict,
    WitnessKind,
    build_table,
    check_witness,
    completeness_probe,
    random_geodesic_batch,
    render_table,
    sample_z,
    sampled_causal_character,
    table_families,
    witness_for,
)
from lightlike_solitons.errors import DegenerateMetricError
from lightlike_solitons.families import FamilyKind, GraphSolitonFamily, Half
from lightlike_solitons.geodesics import GeodesicVerdict
from lightlike_solitons.minkowski import CausalCharacter


# ===== witnesses =====


def test_witness_catalogue(type_i, type_ii, type_iii, type_iv):
    assert witness_for(type_i).kind is WitnessKind.GEODESIC
    assert witness_for(type_ii).kind is WitnessKind.GEODESIC
    assert witness_for(type_iii).kind is WitnessKind.CURVE
    assert witness_for(type_iv).kind is WitnessKind.CURVE
    assert witness_for(type_i).expected_length == pytest.approx(2 * math.pi)
    assert witness_for(type_ii).speed_squared == pytest.approx(4.0)


def test_witness_trimming(type_ii, type_iv):
    assert witness_for(type_ii).trimmed(0.1) == (0.0, pytest.approx(0.9))
    minus = GraphSolitonFamily(FamilyKind.TYPE_IV, z0=2.0, half=Half.MINUS)
    assert witness_for(minus).trimmed(0.1) == (1.0, pytest.approx(1.9))
    assert witness_for(type_iv).trimmed(0.1) == (pytest.approx(0.1), 1.0)


@pytest.mark.parametrize(
    "family, length",
    [
        (GraphSolitonFamily(FamilyKind.TYPE_I, lam=1.0), 2 * math.pi),
        (GraphSolitonFamily(FamilyKind.TYPE_I, lam=0.5, z0=1.0), math.pi),
        (GraphSolitonFamily(FamilyKind.TYPE_II, a1=1.0, b1=0.5), 2.0),
        (GraphSolitonFamily(FamilyKind.TYPE_II, a1=-4.0, b1=1.0), 4.0),
        (GraphSolitonFamily(FamilyKind.TYPE_III, lam=2.0, k=1), 4 * math.pi),
        (GraphSolitonFamily(FamilyKind.TYPE_IV, lam=1.0, half=Half.MINUS), 1.0),
    ],
    ids=lambda v: v.kind.value if isinstance(v, GraphSolitonFamily) else f"{v:.4g}",
)
def test_witness_lengths_converge(settings, family, length):
    witness = check_witness(family, settings.probe)
    assert witness.limit_length == pytest.approx(length, rel=1e-6)
    assert witness.expected_length == pytest.approx(length)
    assert len(witness.lengths) == len(settings.probe.deltas)


def test_geodesic_witnesses_are_machine_checked(settings, type_i, type_ii, type_iii):
    for family in (type_i, type_ii):
        witness = check_witness(family, settings.probe)
        assert witness.is_geodesic
        assert witness.claim_status == "machine-checked"
        assert witness.max_geodesic_residual < 1e-8
    witness = check_witness(type_iii, settings.probe)
    assert witness.claim_status == "stated, not machine-checked"


def test_timelike_witness_speed(settings):
    family = GraphSolitonFamily(FamilyKind.TYPE_II, a1=-1.0, b1=2.0)
    witness = check_witness(family, settings.probe)
    assert witness.expected_speed_squared == pytest.approx(-4.0)
    assert witness.max_speed_drift < 1e-6


# ===== probes =====


def test_type_i_is_incomplete(fast_settings, type_i):
    report = completeness_probe(type_i, fast_settings)
    assert report.verdict is ProbeVerdict.INCOMPLETE_WITNESS
    assert report.numbers["predicted_blowup_time"] == pytest.approx(math.pi)
    assert report.numbers["integrated_witness"]["verdict"] == GeodesicVerdict.BLOWUP.value
    assert report.numbers["integrated_witness"]["length"] == pytest.approx(math.pi, abs=1e-4)
    assert report.numbers["horizontal_geodesic"]["verdict"] == GeodesicVerdict.COMPLETED_HORIZON.value
    assert report.family.kind == "type_i"


def test_type_ii_is_incomplete(fast_settings, type_ii):
    report = completeness_probe(type_ii, fast_settings)
    assert report.verdict is ProbeVerdict.INCOMPLETE_WITNESS
    assert report.numbers["integrated_witness"]["verdict"] == GeodesicVerdict.BLOWUP.value


def test_non_entire_families_are_incomplete(fast_settings, type_iii, type_iv):
    for family in (type_iii, type_iv):
        report = completeness_probe(family, fast_settings)
        assert report.verdict is ProbeVerdict.INCOMPLETE_WITNESS
        assert "integrated_witness" not in report.numbers


def test_report_serializes(fast_settings, type_iii):
    data = completeness_probe(type_iii, fast_settings).model_dump(mode="json")
    assert data["verdict"] == "INCOMPLETE_WITNESS"
    assert data["witness"]["kind"] == "curve"


@pytest.mark.slow
def test_random_batch_tally(settings, type_i):
    probe = settings.probe.model_copy(update={"n_random": 4, "horizon": 100.0})
    tally = random_geodesic_batch(type_i, settings.model_copy(update={"probe": probe}))
    assert sum(tally.values()) == 4
    assert set(tally) == {v.value for v in GeodesicVerdict}


@pytest.mark.slow
def test_random_batch_is_seeded(settings, type_ii):
    probe = settings.probe.model_copy(update={"n_random": 3, "horizon": 20.0})
    s = settings.model_copy(update={"probe": probe})
    assert random_geodesic_batch(type_ii, s) == random_geodesic_batch(type_ii, s)


# ===== table =====


def test_table_families(settings):
    rows = table_families(settings)
    assert [(label, cond) for label, cond, _ in rows] == [
        ("I", None), ("II", "a1 > 0"), ("II", "a1 < 0"), ("III", None), ("IV", None),
    ]
    assert rows[2][2].causal_character() is CausalCharacter.TIMELIKE


def test_sample_z(type_i, type_iii):
    assert sample_z(type_i) == type_i.z0
    shifted = GraphSolitonFamily(FamilyKind.TYPE_III, lam=1.0, k=2)
    assert sample_z(shifted) == pytest.approx(4 * math.pi)
    assert type_iii.contains(0.0, sample_z(type_iii))


def test_sampled_causal_character(settings, type_i, type_ii, type_iii, type_iv):
    for family in (type_i, type_ii, type_iii, type_iv, GraphSolitonFamily(FamilyKind.TYPE_II, a1=-1.0)):
        assert sampled_causal_character(family, settings.tolerances.causal) is family.causal_character()
    with pytest.raises(DegenerateMetricError):
        sampled_causal_character(type_i, tol=1.0)


def test_table_reports_type_i_disagreement(fast_settings):
    rows = build_table(fast_settings)
    assert len(rows) == 5
    by_key = {(r.type, r.condition): r for r in rows}

    row_i = by_key[("I", None)]
    assert row_i.entire and not row_i.complete
    assert row_i.stated_complete is True
    assert row_i.agrees is False

    for key in [("II", "a1 > 0"), ("II", "a1 < 0"), ("III", None), ("IV", None)]:
        assert by_key[key].agrees is True, key
    assert by_key[("II", "a1 < 0")].causal is CausalCharacter.TIMELIKE
    assert not by_key[("III", None)].entire

    text = render_table(rows)
    assert "Stated complete" in text
    assert "time-like if a1 < 0" in text
