"""Exact stable gonality of finite connected multigraphs."""

from __future__ import annotations

from .construct import ConstructionResult, MalformedTupleError, build_phi_alpha, degree_of_alpha
from .enumerate import TupleAlpha, labelled_trees, prufer_decode, prufer_encode, tuple_stream
from .morphism import (
    Certificate,
    FiniteMorphism,
    Refinement,
    TreeGraph,
    VerificationResult,
    is_harmonic,
    morphism_degree,
    parse_certificate,
    verify_certificate,
    write_certificate,
)
from .multigraph import Multigraph, betti, parse_mgf, stable_reduce, write_mgf
from .reduction import ThreeDMInstance, brute_force_3dm, build_gadget
from .solver import SolveOptions, SolveResult, decide, sgon, solve_fixed_tf

__version__ = "0.1.0"

__all__ = [
    "Certificate", "ConstructionResult", "FiniteMorphism", "MalformedTupleError", "Multigraph",
    "Refinement", "SolveOptions", "SolveResult", "ThreeDMInstance", "TreeGraph", "TupleAlpha",
    "VerificationResult", "betti", "brute_force_3dm", "build_gadget", "build_phi_alpha", "decide",
    "degree_of_alpha", "is_harmonic", "labelled_trees", "morphism_degree", "parse_certificate",
    "parse_mgf", "prufer_decode", "prufer_encode", "sgon", "solve_fixed_tf", "stable_reduce",
    "tuple_stream", "verify_certificate", "write_certificate", "write_mgf",
]
