"""
Monte Carlo sweeps over random channel ensembles.

For every stage count K and trial t the sweep draws the trial's instance and
evaluates each requested scheme on it. Trials may run in a process pool;
results come back in (K, trial) order, and instances depend only on
(seed, trial, stage), so the written files are identical for any worker
count.
"""

import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from functools import partial
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Dict, List, Sequence, TextIO, Tuple, Union

import numpy as np
from tqdm import tqdm

from . import __version__
from .baselines import BASELINE_NOTE
from .channel_model import draw_instance
from .config.schemes import SCHEMES, benchmark_schemes, resolve_scheme_evaluator
from .config.settings import BASELINES, OPTIMIZER, BaselineSettings, OptimizerSettings
from .models.channel import EnsembleSpec
from .models.modes import Decoder, FormulaVariant
from .utils.errors import DomainError

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['K', 'trial', 'scheme', 'decoder', 'variant', 'rate_bits']
SUMMARY_COLUMNS = ['K', 'scheme', 'decoder', 'variant', 'mean_rate_bits', 'std_error', 'trials']


@dataclass(frozen=True)
class TrialRecord:
    """Rates of every scheme on one drawn instance."""
    num_stages: int
    trial: int
    digest: str
    rates: Dict[str, float]


@dataclass(frozen=True)
class SchemeSummary:
    """Mean and standard error of one scheme at one stage count."""
    num_stages: int
    scheme: str
    mean: float
    std_error: float
    trials: int


@dataclass
class SweepResult:
    """
    Outcome of an ensemble sweep.

    Fields:
        ensemble: Ensemble the instances were drawn from
        k_list: Stage counts, in sweep order
        schemes: Scheme ids, in report order
        decoder: SD or JD
        variant: Cross-term reading
        records: One record per (K, trial), ordered by K then trial
        baseline_settings: Floors used by the fixed-distortion baselines
        optimizer_settings: Search settings of the optimized schemes
    """
    ensemble: EnsembleSpec
    k_list: Tuple[int, ...]
    schemes: Tuple[str, ...]
    decoder: Decoder
    variant: FormulaVariant
    records: List[TrialRecord] = field(default_factory=list)
    baseline_settings: BaselineSettings = BASELINES
    optimizer_settings: OptimizerSettings = OPTIMIZER

    def rates(self, num_stages: int, scheme: str) -> List[float]:
        return [r.rates[scheme] for r in self.records if r.num_stages == num_stages]

    def mean(self, num_stages: int, scheme: str) -> float:
        return float(np.mean(self.rates(num_stages, scheme)))

    def summary(self) -> List[SchemeSummary]:
        """Per-(K, scheme) mean and standard error of the mean."""
        rows = []
        for K in self.k_list:
            for scheme in self.schemes:
                values = np.array(self.rates(K, scheme))
                n = len(values)
                std_error = float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
                rows.append(SchemeSummary(K, scheme, float(np.mean(values)), std_error, n))
        return rows

    def metadata(self) -> Dict[str, Any]:
        """Sidecar describing how the rows were produced."""
        return {
            'version': __version__,
            'decoder': self.decoder.value,
            'variant': self.variant.value,
            'ensemble': self.ensemble.to_dict(),
            'k_list': list(self.k_list),
            'schemes': list(self.schemes),
            'benchmarks': [s for s in benchmark_schemes() if s in self.schemes],
            'baseline_settings': self.baseline_settings.to_dict(),
            'baseline_note': BASELINE_NOTE,
            'optimizer_settings': self.optimizer_settings.to_dict(),
            'instances': [
                {'K': r.num_stages, 'trial': r.trial, 'digest': r.digest} for r in self.records
            ],
        }


def check_schemes(schemes: Sequence[str]) -> Tuple[str, ...]:
    """
    Check scheme ids against the registry.

    Raises:
        DomainError: If a scheme is unknown or repeated
    """
    unknown = [s for s in schemes if s not in SCHEMES]
    if unknown:
        raise DomainError(f"unknown scheme(s) {unknown}; choose from {list(SCHEMES)}")
    if len(set(schemes)) != len(schemes):
        raise DomainError(f"schemes listed more than once: {list(schemes)}")
    if not schemes:
        raise DomainError("at least one scheme is required")
    return tuple(schemes)


def _run_trial(
    task: Tuple[int, int],
    ensemble: EnsembleSpec,
    schemes: Tuple[str, ...],
    decoder: Decoder,
    variant: FormulaVariant,
    optimizer_settings: OptimizerSettings,
    baseline_settings: BaselineSettings,
) -> TrialRecord:
    num_stages, trial = task
    inst = draw_instance(ensemble, trial, num_stages)
    rates = {}
    for scheme in schemes:
        evaluator = resolve_scheme_evaluator(scheme)
        rates[scheme] = float(evaluator(inst, decoder, variant, optimizer_settings, baseline_settings))
    return TrialRecord(num_stages=num_stages, trial=trial, digest=inst.digest(), rates=rates)


def run_sweep(
    ensemble: EnsembleSpec,
    k_list: Sequence[int],
    schemes: Sequence[str],
    decoder: Decoder = Decoder.SD,
    variant: FormulaVariant = FormulaVariant.AS_PRINTED,
    workers: int = 1,
    optimizer_settings: OptimizerSettings = OPTIMIZER,
    baseline_settings: BaselineSettings = BASELINES,
    progress: bool = False,
) -> SweepResult:
    """
    Evaluate schemes on ensemble.trials instances for every K in k_list.

    Args:
        ensemble: Instance distribution and seed
        k_list: Stage counts
        schemes: Registered scheme ids (see src/config/schemes.py)
        decoder: SD or JD
        variant: Cross-term reading
        workers: Processes evaluating trials in parallel
        optimizer_settings: Search settings of the optimized schemes
        baseline_settings: Floors of the fixed-distortion baselines
        progress: Show a progress bar on stderr

    Returns:
        SweepResult: Records in (K, trial) order

    Raises:
        DomainError: On unknown schemes or invalid stage counts
    """
    schemes = check_schemes(schemes)
    k_list = tuple(int(k) for k in k_list)
    if not k_list or any(k < 1 for k in k_list):
        raise DomainError(f"k_list must hold stage counts >= 1, got {list(k_list)}")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")
    decoder, variant = Decoder(decoder), FormulaVariant(variant)

    tasks = [(K, t) for K in k_list for t in range(ensemble.trials)]
    job = partial(
        _run_trial,
        ensemble=ensemble,
        schemes=schemes,
        decoder=decoder,
        variant=variant,
        optimizer_settings=optimizer_settings,
        baseline_settings=baseline_settings,
    )
    logger.info(
        f"Sweeping {len(tasks)} instances (K in {list(k_list)}, {ensemble.trials} trials) "
        f"for {list(schemes)} with {workers} worker(s)"
    )

    bar = tqdm(total=len(tasks), desc="trials", unit="inst", file=sys.stderr, disable=not progress)
    records: List[TrialRecord] = []
    try:
        if workers > 1:
            with Pool(workers) as pool:
                for record in pool.imap(job, tasks, chunksize=max(1, len(tasks) // (8 * workers))):
                    records.append(record)
                    bar.update(1)
        else:
            for task in tasks:
                records.append(job(task))
                bar.update(1)
    finally:
        bar.close()

    logger.info(f"Sweep finished with {len(records)} records")
    return SweepResult(
        ensemble=ensemble,
        k_list=k_list,
        schemes=schemes,
        decoder=decoder,
        variant=variant,
        records=records,
        baseline_settings=baseline_settings,
        optimizer_settings=optimizer_settings,
    )


def write_rows(result: SweepResult, stream: TextIO):
    """Per-trial CSV: one row per (K, trial, scheme)."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for record in result.records:
        for scheme in result.schemes:
            writer.writerow([
                record.num_stages,
                record.trial,
                scheme,
                result.decoder.value,
                result.variant.value,
                repr(float(record.rates[scheme])),
            ])


def write_summary(result: SweepResult, stream: TextIO):
    """Summary CSV: one row per (K, scheme)."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(SUMMARY_COLUMNS)
    for row in result.summary():
        writer.writerow([
            row.num_stages,
            row.scheme,
            result.decoder.value,
            result.variant.value,
            repr(row.mean),
            repr(row.std_error),
            row.trials,
        ])


def sidecar_paths(out: Union[str, Path]) -> Tuple[Path, Path]:
    """Summary CSV and metadata paths next to the per-trial CSV (rates.csv -> rates.summary.csv)."""
    out = Path(out)
    base = out.with_suffix('') if out.suffix else out
    return base.with_name(base.name + '.summary.csv'), base.with_name(base.name + '.meta.json')


def save_sweep(result: SweepResult, out: Union[str, Path]) -> List[Path]:
    """
    Write the per-trial CSV and its two sidecars.

    Returns:
        List[Path]: Written files (rows, summary, metadata)
    """
    out = Path(out)
    summary_path, meta_path = sidecar_paths(out)
    with open(out, 'w', encoding='utf-8', newline='') as f:
        write_rows(result, f)
    with open(summary_path, 'w', encoding='utf-8', newline='') as f:
        write_summary(result, f)
    with open(meta_path, 'w', encoding='utf-8') as f:
        f.write(json.dumps(result.metadata(), indent=2, sort_keys=True) + '\n')
    logger.info(f"Wrote {out}, {summary_path} and {meta_path}")
    return [out, summary_path, meta_path]


def rows_as_text(result: SweepResult) -> str:
    buffer = io.StringIO()
    write_rows(result, buffer)
    return buffer.getvalue()
