"""Exact-arithmetic certification of smoothness for chart atlases of point configurations."""

from .scalars import Cmp, ExtScalar, ext_eq
from .geometry import ProjLine, ProjPoint, join, meet
from .invariants import Config, CrossRatioSpec, TripleRatioSpec, evaluate, parse_spec
from .charts import CaseSpec, ValidationError, bundled_case, check_facts, corpus_files, load_case, parse_case
from .cotangent import CotangentReport, ablate, saturating_relations, verify_case

__all__ = [
    "Cmp", "ExtScalar", "ext_eq",
    "ProjLine", "ProjPoint", "join", "meet",
    "Config", "CrossRatioSpec", "TripleRatioSpec", "evaluate", "parse_spec",
    "CaseSpec", "ValidationError", "bundled_case", "check_facts", "corpus_files", "load_case", "parse_case",
    "CotangentReport", "ablate", "saturating_relations", "verify_case",
]
