"""Verification toolkit for exponential-superposition heavenly metrics.

The compiled core exposes the solution-family builders, jet evaluation,
residual suites, metric assembly with signature classification, the
finite-difference Ricci check, the Killing non-existence hypotheses, and
the point-symmetry commutator-table suite.
"""

from ._core import (
    ExpSumPotential,
    ExpTerm,
    FamilyId,
    FrameId,
    HeavenlyError,
    build_hcma_dilat,
    build_hcma_trans,
    build_heaven,
    conjugate_slice,
    differentiate,
    evaluate,
    jet_entries,
    killing_report,
    metric_components,
    phase_vandermonde_determinant,
    residual_suite_max,
    ricci_check,
    signature,
    symmetry_table_check,
    term_mass,
    __version__,
)

__all__ = [
    "ExpSumPotential",
    "ExpTerm",
    "FamilyId",
    "FrameId",
    "HeavenlyError",
    "build_hcma_dilat",
    "build_hcma_trans",
    "build_heaven",
    "conjugate_slice",
    "differentiate",
    "evaluate",
    "jet_entries",
    "killing_report",
    "metric_components",
    "phase_vandermonde_determinant",
    "residual_suite_max",
    "ricci_check",
    "signature",
    "symmetry_table_check",
    "term_mass",
    "__version__",
]
