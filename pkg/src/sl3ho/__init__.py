"""sl3 foam link homology calculator."""

from .poly import LaurentQ, BiPoly, format_tq, parse_tq
from .web import Web, kuperberg_bracket
from .foam import Foam, FoamCombo, normalize, evaluate_closed
from .notation import (Diagram, parse_braid, parse_pd, parse_dt,
                       pretzel_diagram, plan_gluing, GluingPlan)
from .complexes import Complex, crossing_complex, run_plan, simplify
from .homology import HomologyTable, homology_of, smith_normal_form
from .invariants import sl3_polynomial, extract_s3, s3_of_diagram, S3Report

__all__ = [
    "LaurentQ", "BiPoly", "format_tq", "parse_tq",
    "Web", "kuperberg_bracket",
    "Foam", "FoamCombo", "normalize", "evaluate_closed",
    "Diagram", "parse_braid", "parse_pd", "parse_dt", "pretzel_diagram",
    "plan_gluing", "GluingPlan",
    "Complex", "crossing_complex", "run_plan", "simplify",
    "HomologyTable", "homology_of", "smith_normal_form",
    "sl3_polynomial", "extract_s3", "s3_of_diagram", "S3Report",
]
__version__ = "0.1.0"
