"""Finite projective planes: construction, exact expansion certificates,
2-collapsibility of their line complexes, and convex-representation audits."""

from .gf import make_field
from .plane import build_plane, dual, verify_axioms
from .simplicial import kq_collapse_sequence, kq_complex, verify_sequence
from .spectra import expansion_audit, gram_certificate, missed_lines

__all__ = [
    "make_field", "build_plane", "dual", "verify_axioms",
    "gram_certificate", "missed_lines", "expansion_audit",
    "kq_complex", "kq_collapse_sequence", "verify_sequence",
]
__version__ = "0.1.0"
