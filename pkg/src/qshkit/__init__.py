"""Quaternionic skew-Hermitian linear algebra, torsion identities and
submanifold classification, checked on explicit matrix Lie algebras."""

from .qshlin import AdmissibleTriple, ScalarTwoForm, Subspace, SymmetricForm, standard_model
from .reports import Check, ExampleReport, Report, SubspaceReport

__version__ = "0.1.0"

__all__ = [
    "AdmissibleTriple",
    "Check",
    "ExampleReport",
    "Report",
    "ScalarTwoForm",
    "Subspace",
    "SubspaceReport",
    "SymmetricForm",
    "standard_model",
]
