"""Quantum superposition model of two-concept combinations."""

from .hilbert import HilbertModel, build_state_vectors, reconstruct_disjunction, verify_orthogonality
from .ingest import ConceptPairData, ItemRecord, load_bundled_corpus, parse_probability_table
from .wavefield import GaussianPacket, WaveFieldSpec, load_bundled_spec

__all__ = [
    "ConceptPairData",
    "GaussianPacket",
    "HilbertModel",
    "ItemRecord",
    "WaveFieldSpec",
    "build_state_vectors",
    "load_bundled_corpus",
    "load_bundled_spec",
    "parse_probability_table",
    "reconstruct_disjunction",
    "verify_orthogonality",
]
