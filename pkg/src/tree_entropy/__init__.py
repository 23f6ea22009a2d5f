"""Empirical entropy measures for ordered labeled trees and XML tree structures."""

from .entropy import (MEASURES, EntropyReport, degree_entropy, degree_label_entropy,
                      label_degree_entropy, label_entropy, report, reports,
                      shape_entropy_binary, shape_entropy_unranked)
from .families import (FAMILY_PAD, ClosedForm, FamilyRangeError, FamilySpec, RandomTreeParams,
                       closed_forms, comb, left_chain, permutation_family, random_tree,
                       two_branch)
from .histories import HistoryCounts, full_history_counts, label_history_counts
from .oracle import OracleCapExceeded, OracleReport, log_sum_check, naive_report
from .tree_model import (SENTINEL, Alphabet, BinaryTree, PadPolicy, TermSyntaxError, Tree,
                         build_tree, decode_fcns, fcns)
from .xml_ingest import IngestOptions, XMLStructureError, alphabet_of, parse_xml_structure, to_xml

__version__ = "0.1.0"

__all__ = [
    "MEASURES", "EntropyReport", "degree_entropy", "degree_label_entropy",
    "label_degree_entropy", "label_entropy", "report", "reports", "shape_entropy_binary",
    "shape_entropy_unranked", "FAMILY_PAD", "ClosedForm", "FamilyRangeError", "FamilySpec",
    "RandomTreeParams", "closed_forms", "comb", "left_chain", "permutation_family",
    "random_tree", "two_branch", "HistoryCounts", "full_history_counts",
    "label_history_counts", "OracleCapExceeded", "OracleReport", "log_sum_check",
    "naive_report", "SENTINEL", "Alphabet", "BinaryTree", "PadPolicy", "TermSyntaxError",
    "Tree", "build_tree", "decode_fcns", "fcns", "IngestOptions", "XMLStructureError",
    "alphabet_of", "parse_xml_structure", "to_xml",
]
