"""Processor modules for ensembles, damages and reports"""
from .damage_assessor import DamageTriple, damage_triple, aggregate_portfolio
from .claim_reporter import CountermeasureProcess, ClaimReport, countermeasure_report, build_claim_report
from .ensemble_runner import EnsembleRunner, PathStatistics, simulate_ensemble
from .results_writer import write_results, write_report

__all__ = [
    'DamageTriple', 'damage_triple', 'aggregate_portfolio',
    'CountermeasureProcess', 'ClaimReport', 'countermeasure_report', 'build_claim_report',
    'EnsembleRunner', 'PathStatistics', 'simulate_ensemble',
    'write_results', 'write_report',
]
