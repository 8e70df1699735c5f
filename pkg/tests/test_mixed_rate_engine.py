import itertools
import math

import numpy as np
import pytest

from conftest import random_instance
from src.mixed_rate_engine import (
    batch_symmetric_rate,
    cross_constraint_Ipk,
    evaluate,
    link_rate_Ik,
    relay_scenarios,
    schedule_throughput,
    segment,
    split_rate_Ik1,
)
from src.models.channel import ChannelInstance
from src.models.modes import Decoder, FormulaVariant, ModeConfig, RelayScenario
from src.utils.errors import ContractViolation, DomainError
from src.utils.information import wyner_ziv_rate


def random_config(rng, K, decoder=Decoder.SD, variant=FormulaVariant.AS_PRINTED):
    qmf = [k for k in range(1, K + 1) if rng.random() < 0.4]
    return ModeConfig.for_stages(K, qmf, theta=list(rng.random(K)), decoder=decoder, formula_variant=variant)


# Segmentation and scenarios

def test_segment_partitions_nodes_for_every_qmf_set():
    for K in range(1, 11):
        nodes = set(range(K + 1))
        for size in range(K + 1):
            for V in itertools.combinations(range(1, K + 1), size):
                seg = segment(K, V)
                flat = [k for run in seg.segments for k in run]
                assert sorted(flat) == sorted(nodes)
                assert len(flat) == len(nodes)
                assert seg.boundaries == (0,) + V
                assert all(run[0] == start for run, start in zip(seg.segments, seg.boundaries))


def test_segment_lookup():
    seg = segment(5, [2, 4])
    assert seg.segments == ((0, 1), (2, 3), (4, 5))
    assert [seg.g(k) for k in range(6)] == [0, 0, 2, 2, 4, 4]
    assert seg.segment_of(3) == 1


def test_segment_rejects_bad_input():
    with pytest.raises(DomainError):
        segment(0, [])
    with pytest.raises(DomainError):
        segment(3, [4])


def test_relay_scenarios():
    assert relay_scenarios(2, [2], [1]) == {
        0: RelayScenario.TYPE_I,
        1: RelayScenario.TYPE_III,
        2: RelayScenario.TYPE_II,
    }
    assert relay_scenarios(2, [1], []) == {
        0: RelayScenario.TYPE_III,
        1: RelayScenario.TYPE_II,
        2: RelayScenario.TYPE_II,
    }
    assert relay_scenarios(2, [2], [])[1] is RelayScenario.TYPE_IV


# Single terms

def test_link_rate_example():
    inst = ChannelInstance(num_stages=1, snr=(100.0, 1.0), inr=(10.0,))
    cfg = ModeConfig.for_stages(1, (), theta=[0.5])
    assert link_rate_Ik(inst, cfg, None, 0) == pytest.approx(math.log2(1 + 100 / 6), abs=1e-12)


def test_link_rate_without_interference_term():
    inst = ChannelInstance(num_stages=1, snr=(100.0, 7.0), inr=(1e6,))
    cfg = ModeConfig.for_stages(1, (), theta=[1.0])
    assert link_rate_Ik(inst, cfg, None, 0) == pytest.approx(math.log2(101.0), abs=1e-12)
    zero = ChannelInstance(num_stages=1, snr=(0.0, 7.0), inr=(3.0,))
    assert link_rate_Ik(zero, cfg, None, 0) == 0.0


def test_link_rate_requires_quant_noise_of_qmf_receiver(worked_instance):
    cfg = ModeConfig.for_stages(1, [1])
    with pytest.raises(ContractViolation):
        link_rate_Ik(worked_instance, cfg, None, 0)
    assert link_rate_Ik(worked_instance, cfg, 1.01, 0) == pytest.approx(math.log2(1 + 100 / 2.01), abs=1e-12)


def test_split_rate_examples():
    inst = ChannelInstance(num_stages=2, snr=(100.0, 100.0, 100.0), inr=(10.0, 10.0))
    cfg = ModeConfig.for_stages(2, (), theta=[0.5, 0.5])
    assert split_rate_Ik1(inst, cfg, None, 1) == pytest.approx(math.log2(1 + 50 / 6), abs=1e-12)

    no_split = ModeConfig.for_stages(2, (), theta=[0.0, 0.5])
    assert split_rate_Ik1(inst, no_split, None, 1) == link_rate_Ik(inst, no_split, None, 1)
    all_common = ModeConfig.for_stages(2, (), theta=[1.0, 0.5])
    assert split_rate_Ik1(inst, all_common, None, 1) == 0.0


def test_cross_constraint_sd_printed_example():
    inst = ChannelInstance(num_stages=2, snr=(100.0, 100.0, 100.0), inr=(1.0, 1000.0))
    cfg = ModeConfig.for_stages(2, (), theta=[0.0, 1.0])
    value = cross_constraint_Ipk(inst, cfg, None, 1)
    assert value == pytest.approx(math.log2(1 + 1000 / 101) + math.log2(101), abs=1e-12)


def test_cross_constraint_jd_printed_example():
    inst = ChannelInstance(num_stages=2, snr=(100.0, 100.0, 100.0), inr=(100.0, 100.0))
    cfg = ModeConfig.for_stages(2, (), theta=[1.0, 1.0], decoder=Decoder.JD)
    assert cross_constraint_Ipk(inst, cfg, None, 1) == pytest.approx(0.5 * math.log2(201.0), abs=1e-12)


def test_cross_constraint_reduces_to_split_without_interference():
    inst = ChannelInstance(num_stages=2, snr=(30.0, 40.0, 50.0), inr=(0.0, 0.0))
    for variant in FormulaVariant:
        cfg = ModeConfig.for_stages(2, (), theta=[0.3, 0.6], formula_variant=variant)
        assert cross_constraint_Ipk(inst, cfg, None, 1) == pytest.approx(
            split_rate_Ik1(inst, cfg, None, 1), abs=1e-15
        )


def test_cross_constraint_variants_differ():
    inst = ChannelInstance(num_stages=2, snr=(100.0, 100.0, 100.0), inr=(50.0, 1000.0))
    printed = ModeConfig.for_stages(2, (), theta=[0.4, 0.7])
    theorem = ModeConfig.for_stages(2, (), theta=[0.4, 0.7], formula_variant=FormulaVariant.THEOREM_CONSISTENT)
    assert cross_constraint_Ipk(inst, printed, None, 1) != pytest.approx(
        cross_constraint_Ipk(inst, theorem, None, 1), abs=1e-6
    )


def test_cross_constraint_of_source_under_theorem_variant():
    inst = ChannelInstance(num_stages=1, snr=(10.0, 10.0), inr=(10.0,))
    cfg = ModeConfig.for_stages(1, (), formula_variant=FormulaVariant.THEOREM_CONSISTENT)
    with pytest.raises(DomainError):
        cross_constraint_Ipk(inst, cfg, None, 0)


# Full recursion

def test_evaluate_worked_recursion(worked_instance):
    breakdown = evaluate(worked_instance, ModeConfig.for_stages(1, [1]))
    assert breakdown.segment_rates[1] == pytest.approx(math.log2(101.0), abs=1e-12)
    assert breakdown.quant_noise[1] == pytest.approx(1.01, abs=1e-12)
    assert breakdown.symmetric_rate == pytest.approx(math.log2(1 + 100 / 2.01), abs=1e-12)
    assert breakdown.per_path_throughput == breakdown.symmetric_rate / 2
    assert str(breakdown.binding[0]) == 'I_0'
    assert str(breakdown.binding[1]) == 'I_1'
    assert not breakdown.infeasible


def test_evaluate_interference_free_chain_is_min_hop_capacity(rng):
    for _ in range(100):
        K = int(rng.integers(1, 9))
        snr = 10 ** rng.uniform(-1.0, 3.0, size=K + 1)
        inst = ChannelInstance(num_stages=K, snr=tuple(snr), inr=(0.0,) * K)
        rate = evaluate(inst, ModeConfig.for_stages(K)).symmetric_rate
        assert rate == pytest.approx(min(math.log2(1 + s) for s in snr), abs=1e-12)


def test_evaluate_zero_hop_gives_zero_rate():
    inst = ChannelInstance(num_stages=3, snr=(100.0, 0.0, 100.0, 100.0), inr=(5.0, 5.0, 5.0))
    assert evaluate(inst, ModeConfig.for_stages(3)).symmetric_rate == 0.0


def test_evaluate_zero_rate_segment_blocks_upstream():
    inst = ChannelInstance(num_stages=1, snr=(100.0, 0.0), inr=(10.0,))
    breakdown = evaluate(inst, ModeConfig.for_stages(1, [1]))
    assert breakdown.symmetric_rate == 0.0
    assert breakdown.infeasible_stages == (0, 1)
    assert breakdown.binding[0].kind == 'blocked'
    assert breakdown.quant_noise == {}


def test_tiny_segment_rate_with_overflowing_noise_blocks_upstream():
    # log2(1 + 3e-16) is a few ulps above zero; (1 + 1e300) over it overflows
    inst = ChannelInstance(num_stages=1, snr=(1e300, 3e-16), inr=(10.0,))
    breakdown = evaluate(inst, ModeConfig.for_stages(1, [1]))
    assert breakdown.symmetric_rate == 0.0
    assert breakdown.segment_rates == {0: 0.0, 1: 0.0}
    assert breakdown.infeasible_stages == (0, 1)
    assert breakdown.binding[0].kind == 'blocked'
    assert breakdown.quant_noise == {}
    assert all(math.isfinite(v) for v in breakdown.to_dict()['segment_rates'].values())
    rates = batch_symmetric_rate(inst, [1], np.array([[1.0]]), Decoder.SD, FormulaVariant.AS_PRINTED)
    assert rates[0] == 0.0


def test_wyner_ziv_identity_on_random_configurations(rng):
    for _ in range(1000):
        inst = random_instance(rng, max_stages=6)
        cfg = random_config(rng, inst.num_stages)
        breakdown = evaluate(inst, cfg)
        for k, noise in breakdown.quant_noise.items():
            assert wyner_ziv_rate(inst.snr_at(k), noise) == pytest.approx(
                breakdown.segment_rates[k], abs=1e-12, rel=1e-12
            )


def test_evaluate_increases_with_snr_when_no_common_terms(rng):
    for _ in range(100):
        inst = random_instance(rng)
        K = inst.num_stages
        for cfg in (ModeConfig.for_stages(K), ModeConfig.for_stages(K, range(1, K + 1))):
            base = evaluate(inst, cfg).symmetric_rate
            j = int(rng.integers(0, K + 1))
            snr = list(inst.snr)
            snr[j] *= 1.1
            assert evaluate(inst.with_gains(snr=snr), cfg).symmetric_rate >= base - 1e-9


def test_evaluate_decreases_with_inr_on_df_chains(rng):
    for _ in range(100):
        inst = random_instance(rng)
        K = inst.num_stages
        for variant in FormulaVariant:
            cfg = ModeConfig.for_stages(K, formula_variant=variant)
            base = evaluate(inst, cfg).symmetric_rate
            j = int(rng.integers(0, K))
            inr = list(inst.inr)
            inr[j] *= 1.1
            assert evaluate(inst.with_gains(inr=inr), cfg).symmetric_rate <= base + 1e-9


def test_joint_decoding_dominates_successive_decoding_for_stage_consistent_terms(rng):
    for _ in range(200):
        inst = random_instance(rng)
        cfg = random_config(rng, inst.num_stages, variant=FormulaVariant.THEOREM_CONSISTENT)
        sd = evaluate(inst, cfg).symmetric_rate
        jd = evaluate(inst, ModeConfig(cfg.qmf_set, cfg.theta, Decoder.JD, cfg.formula_variant)).symmetric_rate
        assert jd >= sd - 1e-12


def test_evaluate_is_deterministic(rng):
    inst = random_instance(rng)
    cfg = random_config(rng, inst.num_stages)
    assert evaluate(inst, cfg) == evaluate(inst, cfg)


def test_evaluate_contract_violations(worked_instance):
    with pytest.raises(ContractViolation):
        evaluate(worked_instance, ModeConfig.for_stages(2))
    with pytest.raises(ContractViolation):
        ModeConfig(qmf_set=(1,), theta=(0.5,))
    with pytest.raises(ContractViolation):
        evaluate(worked_instance, ModeConfig.for_stages(1), noise_floors={1: 1.0})


def test_noise_floor_above_wyner_ziv_noise_is_used():
    inst = ChannelInstance(num_stages=1, snr=(10.0, 100.0), inr=(100.0,))
    breakdown = evaluate(inst, ModeConfig.for_stages(1, [1]), noise_floors={1: 1.0})
    assert breakdown.quant_noise[1] == 1.0
    assert breakdown.floor_active == (1,)
    assert breakdown.symmetric_rate == pytest.approx(math.log2(6.0), abs=1e-12)


# Batch evaluation

def test_batch_matches_scalar_recursion(rng):
    for _ in range(50):
        inst = random_instance(rng, max_stages=5)
        for variant in FormulaVariant:
            for decoder in Decoder:
                cfg = random_config(rng, inst.num_stages, decoder, variant)
                thetas = rng.random((16, inst.num_stages))
                thetas[:, [k - 1 for k in cfg.qmf_set]] = 1.0
                batch = batch_symmetric_rate(inst, cfg.qmf_set, thetas, decoder, variant)
                for row, value in zip(thetas, batch):
                    scalar = evaluate(inst, ModeConfig(cfg.qmf_set, tuple(row), decoder, variant)).symmetric_rate
                    assert value == pytest.approx(scalar, abs=1e-12, rel=1e-12)


def test_batch_reports_zero_for_blocked_rows():
    inst = ChannelInstance(num_stages=2, snr=(100.0, 100.0, 0.0), inr=(10.0, 10.0))
    rates = batch_symmetric_rate(inst, [2], np.array([[0.0, 1.0], [0.5, 1.0]]), Decoder.SD, FormulaVariant.AS_PRINTED)
    assert np.all(rates == 0.0)


def test_batch_rejects_wrong_shape(worked_instance):
    with pytest.raises(ContractViolation):
        batch_symmetric_rate(worked_instance, [], np.zeros((3, 2)), Decoder.SD, FormulaVariant.AS_PRINTED)


# Scheduling

def test_schedule_throughput_examples():
    assert schedule_throughput(4.0, 3, 3) == 1.0
    assert schedule_throughput(4.0, 3, math.inf) == 2.0
    assert schedule_throughput(6.65821, 1, 99) == pytest.approx(3.29581, abs=1e-5)


def test_schedule_throughput_rejects_empty_schedule():
    with pytest.raises(DomainError):
        schedule_throughput(4.0, 3, 0)
    with pytest.raises(DomainError):
        schedule_throughput(-1.0, 3, 5)
