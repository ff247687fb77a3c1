"""
Necessary and sufficient conditions for hypercyclicity, and classification.
"""
from conditions.checks import (CheckResult, NecessaryResult, SpeResult, SpectrumEstimate, Status,
                               check_dvc, check_dvc_prime, check_iac, check_mvc, check_necessary,
                               check_spe, descending_chains, search_iac, spectrum_estimate, validate_chain)
from conditions.report import ConditionReport, Verdict, classify
