import math

import pytest

from conftest import noiseless_document, split_node
from src.channel_model import draw_alphas, draw_instance, validate_dm_spec
from src.models.channel import ChannelInstance, EnsembleSpec, db_to_linear, linear_to_db
from src.models.dm_network import DmNetworkSpec
from src.utils.errors import ContractViolation, DomainError


def test_db_conversions():
    assert db_to_linear(20.0) == pytest.approx(100.0, rel=1e-15)
    assert db_to_linear(None) == 0.0
    assert db_to_linear(-math.inf) == 0.0
    assert linear_to_db(0.0) is None
    assert linear_to_db(1000.0) == pytest.approx(30.0, abs=1e-12)


def test_channel_instance_contracts():
    with pytest.raises(ContractViolation):
        ChannelInstance(num_stages=2, snr=(1.0, 1.0), inr=(1.0, 1.0))
    with pytest.raises(ContractViolation):
        ChannelInstance(num_stages=1, snr=(1.0, 1.0), inr=())
    with pytest.raises(ContractViolation):
        ChannelInstance(num_stages=0, snr=(1.0,), inr=())
    with pytest.raises(DomainError):
        ChannelInstance(num_stages=1, snr=(-1.0, 1.0), inr=(1.0,))
    with pytest.raises(DomainError):
        ChannelInstance(num_stages=1, snr=(1.0, math.nan), inr=(1.0,))


def test_channel_instance_from_dict():
    inst = ChannelInstance.from_dict({'K': 1, 'snr_db': [20.0, 20.0], 'inr_db': [None]})
    assert inst.snr == pytest.approx((100.0, 100.0))
    assert inst.inr == (0.0,)
    assert inst.inr_at(2) == 0.0
    assert ChannelInstance.from_dict(inst.to_dict()) == inst
    with pytest.raises(ContractViolation):
        ChannelInstance.from_dict({'K': 2, 'snr_db': [20.0, 20.0], 'inr_db': [10.0]})


def test_digest_tracks_gains(worked_instance):
    assert worked_instance.digest() == ChannelInstance(1, (100.0, 100.0), (100.0,)).digest()
    assert worked_instance.digest() != worked_instance.with_gains(inr=(99.0,)).digest()


def test_ensemble_spec_validation():
    with pytest.raises(DomainError):
        EnsembleSpec(snr_db=20.0, alpha_lo=2.0, alpha_hi=1.0, trials=5)
    with pytest.raises(DomainError):
        EnsembleSpec(snr_db=20.0, alpha_lo=-0.5, alpha_hi=1.0, trials=5)
    with pytest.raises(ContractViolation):
        EnsembleSpec(snr_db=20.0, alpha_lo=0.0, alpha_hi=1.0, trials=0)
    spec = EnsembleSpec(snr_db=20.0, alpha_lo=1.0, alpha_hi=2.0, trials=5, seed=3)
    assert EnsembleSpec.from_dict(spec.to_dict()) == spec


def test_draw_instance_is_keyed_by_trial_and_stage():
    spec = EnsembleSpec(snr_db=20.0, alpha_lo=1.0, alpha_hi=2.0, trials=10, seed=42)
    first = draw_instance(spec, 3, 4)
    assert first == draw_instance(spec, 3, 4)
    assert first != draw_instance(spec, 4, 4)
    # Shorter chains reuse the leading stages of the same trial
    assert draw_instance(spec, 3, 2).inr == first.inr[:2]
    assert first.snr == (100.0,) * 5
    for inr in first.inr:
        assert 100.0 - 1e-9 <= inr <= 10000.0 + 1e-6
    other_seed = EnsembleSpec(snr_db=20.0, alpha_lo=1.0, alpha_hi=2.0, trials=10, seed=43)
    assert draw_instance(other_seed, 3, 4) != first


def test_draw_alphas_with_degenerate_interval():
    spec = EnsembleSpec(snr_db=20.0, alpha_lo=0.5, alpha_hi=0.5, trials=1)
    assert draw_alphas(spec, 0, 3) == [0.5, 0.5, 0.5]
    assert draw_instance(spec, 0, 3).inr == (100.0 ** 0.5,) * 3


def test_draw_instance_rejects_out_of_range_trial():
    spec = EnsembleSpec(snr_db=20.0, alpha_lo=1.0, alpha_hi=2.0, trials=2)
    with pytest.raises(ContractViolation):
        draw_instance(spec, 2, 1)
    with pytest.raises(ContractViolation):
        draw_instance(spec, 0, 0)


def test_validate_accepts_well_formed_network(noiseless_network, noisy_adder_network):
    assert validate_dm_spec(noiseless_network) == []
    assert validate_dm_spec(noisy_adder_network) == []


def test_validate_reports_bad_row_sums():
    document = noiseless_document()
    document['paths'][0]['channels'][1]['pmf'] = [[0.5, 0.4], [0.0, 1.0]]
    violations = validate_dm_spec(DmNetworkSpec.from_dict(document))
    assert len(violations) == 2  # the single path describes both paths
    assert violations[0].location == 'path 1 channel 2 row [0]'
    assert violations[0].row_sum == pytest.approx(0.9)


def test_validate_reports_structure_problems():
    document = noiseless_document()
    document['paths'][0]['nodes'][0] = split_node()
    document['paths'][0]['quantizers'] = {'1': 'lattice'}
    problems = [str(v) for v in validate_dm_spec(DmNetworkSpec.from_dict(document))]
    assert any('cannot split' in p for p in problems)
    assert any("unknown family 'lattice'" in p for p in problems)

    short = noiseless_document()
    short['paths'][0]['channels'] = short['paths'][0]['channels'][:1]
    problems = [str(v) for v in validate_dm_spec(DmNetworkSpec.from_dict(short))]
    assert any('expected 2 channels' in p for p in problems)


def test_validate_reports_wrong_channel_shape():
    document = noiseless_document()
    document['paths'][0]['channels'][0]['pmf'] = [[1.0, 0.0], [0.0, 1.0]]
    problems = [str(v) for v in validate_dm_spec(DmNetworkSpec.from_dict(document))]
    assert any('pmf shape (2, 2) != (2, 2, 2)' in p for p in problems)
