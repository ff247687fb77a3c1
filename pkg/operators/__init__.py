"""
Toeplitz sections, eigenvectors, span evidence and orbit diagnostics.
"""
from operators.toeplitz import (ToeplitzSection, backward_shift_apply, operator_sum_section, rational_section,
                                section_eigenvalues, shift_matrix, toeplitz_section)
from operators.eigen import (AdjointEigenSpec, EigenvectorResult, EigenvectorSpec, adjoint_eigenvector,
                             basis_span_check, eigenvector, eigenvectors, find_preimages, monomial_specs,
                             validate_lambda)
from operators.evidence import SpanEvidence, gs_evidence
from operators.orbit import OrbitResult, orbit_simulate
