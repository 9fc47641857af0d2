from .models import FormulaId, SampleBudget, TailBound, RenyiBudgets, MeaningfulReport
from .formulas import (
    weissman,
    weissman_failure_probability,
    chain_concentration,
    chain_concentration_samples,
    tv_known_single,
    tv_known_K,
    tv_unknown,
    renyi_known_bounds,
    renyi_unknown_bounds,
    threshold_meaningful,
    budget_table,
    budget_rows,
)

__all__ = [
    "FormulaId",
    "SampleBudget",
    "TailBound",
    "RenyiBudgets",
    "MeaningfulReport",
    "weissman",
    "weissman_failure_probability",
    "chain_concentration",
    "chain_concentration_samples",
    "tv_known_single",
    "tv_known_K",
    "tv_unknown",
    "renyi_known_bounds",
    "renyi_unknown_bounds",
    "threshold_meaningful",
    "budget_table",
    "budget_rows",
]
