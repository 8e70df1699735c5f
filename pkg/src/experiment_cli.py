"""
Command-line front end.

Subcommands:
    rate      evaluate one configuration on one instance (JSON in, JSON out)
    optimize  search relay modes and power splits for one instance
    sweep     Monte Carlo sweep over a random ensemble (CSV out)
    dm-eval   symmetric rate of a discrete memoryless network
    schedule  throughput of successive relaying over N messages

Reports go to stdout, logs to stderr. Exit codes: 0 success, 2 invalid
input, 1 internal error. No environment variables are read.
"""

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .config.schemes import SCHEMES
from .config.settings import OPTIMIZER, SWEEP
from .config_optimizer import SearchSpec, optimize
from .dm_region import solve_symmetric
from .mixed_rate_engine import evaluate, relay_scenarios, schedule_throughput
from .models.channel import ChannelInstance, EnsembleSpec
from .models.dm_network import DmNetworkSpec
from .models.documents import (
    DmNetworkSpecDoc,
    EnsembleSpecDoc,
    OptimizeConfigDoc,
    RateConfigDoc,
    dump_document,
    load_document,
)
from .models.modes import Decoder, FormulaVariant, ModeConfig
from .sweep_manager import SweepResult, rows_as_text, run_sweep, save_sweep, write_summary
from .utils.errors import (
    ConfigFileError,
    ContractViolation,
    DmSpecError,
    DomainError,
    SearchGuardError,
)
from .utils.logging_config import setup_logging

logger = logging.getLogger(__name__)

INPUT_ERRORS = (ConfigFileError, ContractViolation, DomainError, DmSpecError, SearchGuardError)


def _emit(report: Dict[str, Any], out: Optional[str]):
    text = dump_document(report)
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text, encoding='utf-8')
        logger.info(f"Wrote {out}")


def cmd_rate(config_file: str, out: Optional[str] = None) -> Dict[str, Any]:
    """
    Evaluate the configuration of a rate config file.

    The file holds {"instance": ChannelInstance, "config": {"qmf_set",
    "theta", "decoder", "variant"}}; theta defaults to 0 on DF stages.
    """
    doc = load_document(config_file, RateConfigDoc)
    inst = ChannelInstance.from_dict(doc.instance.model_dump())
    config = ModeConfig.for_stages(
        inst.num_stages,
        doc.config.qmf_set,
        decoder=Decoder(doc.config.decoder),
        formula_variant=FormulaVariant(doc.config.variant),
    ) if doc.config.theta is None else ModeConfig(
        qmf_set=tuple(doc.config.qmf_set),
        theta=tuple(doc.config.theta),
        decoder=Decoder(doc.config.decoder),
        formula_variant=FormulaVariant(doc.config.variant),
    )
    if config.num_stages != inst.num_stages:
        raise ContractViolation(f"theta has {config.num_stages} entries but K={inst.num_stages}")
    breakdown = evaluate(inst, config)
    report = breakdown.to_dict()
    report['instance'] = inst.to_dict()
    scenarios = relay_scenarios(inst.num_stages, config.qmf_set, config.qmf_set)
    report['scenarios'] = {str(k): s.value for k, s in scenarios.items()}
    _emit(report, out)
    return report


def cmd_optimize(config_file: str, out: Optional[str] = None, workers: int = 1) -> Dict[str, Any]:
    """Search the best configuration for the instance of an optimize config file."""
    doc = load_document(config_file, OptimizeConfigDoc)
    inst = ChannelInstance.from_dict(doc.instance.model_dump())
    spec = SearchSpec.from_dict(doc.search.model_dump())
    optimum = optimize(inst, spec, settings=OPTIMIZER, workers=workers)
    report = optimum.to_dict()
    report['instance'] = inst.to_dict()
    report['search'] = spec.to_dict()
    _emit(report, out)
    return report


def cmd_sweep(
    ensemble: EnsembleSpec,
    k_list: Sequence[int],
    schemes: Sequence[str],
    decoder: Decoder,
    variant: FormulaVariant,
    out_csv: Optional[str] = None,
    workers: int = 1,
    progress: bool = True,
) -> SweepResult:
    """
    Run an ensemble sweep and write its CSV files.

    With out_csv the per-trial rows and both sidecars are written to disk and
    the summary is printed; without it the per-trial rows go to stdout.
    """
    result = run_sweep(
        ensemble, k_list, schemes, decoder, variant,
        workers=workers, progress=progress,
    )
    if out_csv:
        save_sweep(result, out_csv)
        write_summary(result, sys.stdout)
    else:
        sys.stdout.write(rows_as_text(result))
    return result


def cmd_dm_eval(
    spec_file: str,
    modes: Sequence[Sequence[int]],
    decoder: Decoder,
    out: Optional[str] = None,
) -> Dict[str, Any]:
    """Solve the symmetric rate of a DM network spec file."""
    doc = load_document(spec_file, DmNetworkSpecDoc)
    spec = DmNetworkSpec.from_dict(doc.model_dump())
    result = solve_symmetric(spec, modes, decoder)
    report = result.to_dict()
    report['modes'] = [list(v) for v in modes]
    _emit(report, out)
    return report


def cmd_schedule(r: float, num_stages: int, num_messages: float) -> Dict[str, Any]:
    """Throughput r*N / (2*(N+K)) and its limit r/2."""
    report = {
        'r': float(r),
        'K': num_stages,
        'N': None if math.isinf(num_messages) else num_messages,
        'throughput': schedule_throughput(r, num_stages, num_messages),
        'asymptote': schedule_throughput(r, num_stages, math.inf),
    }
    _emit(report, None)
    return report


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(',') if part.strip()]


def _message_count(text: str) -> float:
    if text.lower() in ('inf', 'infinity'):
        return math.inf
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"N must be an integer or 'inf', got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='relay-rates',
        description='Achievable rates of multihop virtual full-duplex relay channels',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='Log INFO (-v), DEBUG (-vv) or every joint pmf built (-vvv) to stderr')
    subparsers = parser.add_subparsers(dest='command', required=True)

    rate = subparsers.add_parser('rate', help='Evaluate one configuration')
    rate.add_argument('config', help='JSON file with "instance" and "config"')
    rate.add_argument('--out', help='Also write the JSON report here')

    opt = subparsers.add_parser('optimize', help='Search modes and power splits')
    opt.add_argument('config', help='JSON file with "instance" and optional "search"')
    opt.add_argument('--out', help='Also write the JSON report here')
    opt.add_argument('--workers', type=int, default=1, help='Processes searching QMF sets')

    sweep = subparsers.add_parser('sweep', help='Monte Carlo sweep over a random ensemble')
    sweep.add_argument('--ensemble', help='EnsembleSpec JSON file; flags below override its fields')
    sweep.add_argument('--k-list', type=_int_list, help=f'Stage counts (default {",".join(map(str, SWEEP.k_list))})')
    sweep.add_argument('--trials', type=int, help=f'Trials per K (default {SWEEP.trials})')
    sweep.add_argument('--seed', type=int, help=f'Ensemble seed (default {SWEEP.seed})')
    sweep.add_argument('--snr-db', type=float, help=f'Direct gain in dB (default {SWEEP.snr_db})')
    sweep.add_argument('--alpha-lo', type=float, help=f'Lower cross-gain exponent (default {SWEEP.alpha_lo})')
    sweep.add_argument('--alpha-hi', type=float, help=f'Upper cross-gain exponent (default {SWEEP.alpha_hi})')
    sweep.add_argument('--decoder', choices=[d.value for d in Decoder], default=Decoder.SD.value)
    sweep.add_argument('--variant', choices=[v.value for v in FormulaVariant], default=FormulaVariant.AS_PRINTED.value)
    sweep.add_argument('--schemes', type=_str_list, default=list(SCHEMES),
                       help=f'Comma-separated scheme ids (default {",".join(SCHEMES)})')
    sweep.add_argument('--out', help='Per-trial CSV; summary and metadata sidecars are written next to it')
    sweep.add_argument('--workers', type=int, default=SWEEP.workers, help='Processes evaluating trials')
    sweep.add_argument('--quiet', action='store_true', help='Hide the progress bar')

    dm = subparsers.add_parser('dm-eval', help='Symmetric rate of a discrete memoryless network')
    dm.add_argument('spec', help='DmNetworkSpec JSON file')
    dm.add_argument('--qmf-set', type=_int_list, default=[], help='QMF stages of both paths (comma-separated)')
    dm.add_argument('--qmf-set-2', type=_int_list, help='QMF stages of path 2 when they differ from path 1')
    dm.add_argument('--decoder', choices=[d.value for d in Decoder], default=Decoder.SD.value)
    dm.add_argument('--out', help='Also write the JSON report here')

    schedule = subparsers.add_parser('schedule', help='Throughput over N messages per path')
    schedule.add_argument('--r', type=float, required=True, help='Symmetric rate (bits/channel use)')
    schedule.add_argument('--K', type=int, required=True, help='Number of relay stages')
    schedule.add_argument('--N', type=_message_count, required=True, help="Messages per path, or 'inf'")

    return parser


def _ensemble_from_args(args: argparse.Namespace) -> EnsembleSpec:
    base = SWEEP.to_dict()
    if args.ensemble:
        doc = load_document(args.ensemble, EnsembleSpecDoc)
        base.update(doc.model_dump())
    overrides = {
        'snr_db': args.snr_db,
        'alpha_lo': args.alpha_lo,
        'alpha_hi': args.alpha_hi,
        'trials': args.trials,
        'seed': args.seed,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    return EnsembleSpec(
        snr_db=float(base['snr_db']),
        alpha_lo=float(base['alpha_lo']),
        alpha_hi=float(base['alpha_hi']),
        trials=int(base['trials']),
        seed=int(base['seed']),
    )


def _dispatch(args: argparse.Namespace):
    if args.command == 'rate':
        cmd_rate(args.config, args.out)
    elif args.command == 'optimize':
        cmd_optimize(args.config, args.out, workers=args.workers)
    elif args.command == 'sweep':
        cmd_sweep(
            _ensemble_from_args(args),
            args.k_list or list(SWEEP.k_list),
            args.schemes,
            Decoder(args.decoder),
            FormulaVariant(args.variant),
            out_csv=args.out,
            workers=args.workers,
            progress=not args.quiet,
        )
    elif args.command == 'dm-eval':
        second = args.qmf_set_2 if args.qmf_set_2 is not None else args.qmf_set
        cmd_dm_eval(args.spec, (args.qmf_set, second), Decoder(args.decoder), args.out)
    elif args.command == 'schedule':
        cmd_schedule(args.r, args.K, args.N)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI.

    Returns:
        int: Exit code (0 success, 2 invalid input, 1 internal error)
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    try:
        _dispatch(args)
    except INPUT_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception:
        logger.exception("Internal error")
        return 1
    return 0
