import math

import pytest

from src.baselines import BaselineKind, baseline_rate, evaluate_mixed
from src.channel_model import draw_instance
from src.config.schemes import SCHEMES, benchmark_schemes, get_scheme, resolve_scheme_evaluator
from src.config.settings import BaselineSettings
from src.config_optimizer import ModeSearch, SearchSpec, optimize
from src.mixed_rate_engine import evaluate
from src.models.channel import ChannelInstance, EnsembleSpec
from src.models.modes import Decoder, FormulaVariant, ModeConfig
from src.utils.errors import DomainError


def test_optimized_qmf_on_worked_instance(worked_instance):
    breakdown = baseline_rate(worked_instance, BaselineKind.OPTIMIZED_QMF)
    assert breakdown.symmetric_rate == pytest.approx(math.log2(1 + 100 / 2.01), abs=1e-12)


def test_noise_level_floor_inactive_when_wyner_ziv_noise_is_larger(worked_instance):
    breakdown = baseline_rate(worked_instance, BaselineKind.NOISE_LEVEL_QMF)
    assert breakdown.symmetric_rate == pytest.approx(math.log2(1 + 100 / 2.01), abs=1e-12)
    assert breakdown.floor_active == ()


def test_noise_level_floor_binds_on_weak_first_hop():
    inst = ChannelInstance(num_stages=1, snr=(10.0, 100.0), inr=(100.0,))
    breakdown = baseline_rate(inst, BaselineKind.NOISE_LEVEL_QMF)
    assert breakdown.symmetric_rate == pytest.approx(math.log2(6.0), abs=1e-12)
    assert breakdown.quant_noise[1] == 1.0
    assert breakdown.floor_active == (1,)


def test_stage_depth_floor_scales_with_stage_count():
    inst = ChannelInstance(num_stages=1, snr=(10.0, 100.0), inr=(100.0,))
    assert baseline_rate(inst, BaselineKind.STAGE_DEPTH_QMF).symmetric_rate == pytest.approx(
        math.log2(6.0), abs=1e-12
    )
    settings = BaselineSettings(stage_depth_constant=3.0)
    assert baseline_rate(inst, BaselineKind.STAGE_DEPTH_QMF, settings=settings).symmetric_rate == pytest.approx(
        math.log2(1 + 10 / 4), abs=1e-12
    )
    assert settings.stage_depth_floor(4) == 12.0


def test_hop_bound():
    inst = ChannelInstance(num_stages=2, snr=(100.0, 30.0, 100.0), inr=(5.0, 5.0))
    breakdown = baseline_rate(inst, BaselineKind.HOP_CAPACITY_BOUND)
    assert breakdown.symmetric_rate == pytest.approx(math.log2(31.0), abs=1e-12)
    assert breakdown.binding[0].stage == 1
    equal = ChannelInstance(num_stages=1, snr=(100.0, 100.0), inr=(100.0,))
    assert baseline_rate(equal, BaselineKind.HOP_CAPACITY_BOUND).symmetric_rate == pytest.approx(
        math.log2(101.0), abs=1e-12
    )


def test_all_qmf_configuration_reproduces_optimized_qmf(worked_instance):
    K = worked_instance.num_stages
    direct = evaluate(worked_instance, ModeConfig.for_stages(K, range(1, K + 1)))
    assert baseline_rate(worked_instance, BaselineKind.OPTIMIZED_QMF) == direct


def test_pure_df_is_the_empty_qmf_set_search():
    inst = ChannelInstance(num_stages=2, snr=(100.0, 30.0, 100.0), inr=(1000.0, 10.0))
    pure = baseline_rate(inst, BaselineKind.PURE_DF).symmetric_rate
    mixed = optimize(inst, SearchSpec())
    assert mixed.table()[()] == pure
    assert mixed.rate >= pure
    given = optimize(inst, SearchSpec(mode_search=ModeSearch.GIVEN, qmf_set=()))
    assert given.rate == pure


def test_dominance_over_random_ensemble():
    ensemble = EnsembleSpec(snr_db=20.0, alpha_lo=1.0, alpha_hi=2.0, trials=20, seed=7)
    for trial in range(ensemble.trials):
        inst = draw_instance(ensemble, trial, 1 + trial % 4)
        for decoder in Decoder:
            rates = {kind: baseline_rate(inst, kind, decoder).symmetric_rate for kind in BaselineKind}
            mixed = evaluate_mixed(inst, decoder, FormulaVariant.AS_PRINTED)
            bound = rates[BaselineKind.HOP_CAPACITY_BOUND]
            for kind in (
                BaselineKind.OPTIMIZED_QMF,
                BaselineKind.NOISE_LEVEL_QMF,
                BaselineKind.STAGE_DEPTH_QMF,
                BaselineKind.PURE_DF,
            ):
                assert mixed >= rates[kind] - 1e-9
                assert rates[kind] <= bound + 1e-9
            assert mixed <= bound + 1e-9
            assert rates[BaselineKind.OPTIMIZED_QMF] >= rates[BaselineKind.NOISE_LEVEL_QMF] - 1e-12
            assert rates[BaselineKind.OPTIMIZED_QMF] >= rates[BaselineKind.STAGE_DEPTH_QMF] - 1e-12


def test_scheme_registry_resolves_evaluators(worked_instance):
    assert list(SCHEMES) == ['mixed', 'optimized_qmf', 'noise_level_qmf', 'stage_depth_qmf', 'pure_df', 'hop_bound']
    assert get_scheme('pure_df').label == 'Pure DF'
    assert benchmark_schemes() == ['hop_bound']
    evaluator = resolve_scheme_evaluator('optimized_qmf')
    assert evaluator(worked_instance, Decoder.SD, FormulaVariant.AS_PRINTED) == pytest.approx(
        math.log2(1 + 100 / 2.01), abs=1e-12
    )
    with pytest.raises(DomainError, match='unknown scheme'):
        get_scheme('cut_set')
    with pytest.raises(DomainError):
        resolve_scheme_evaluator('cut_set')
