"""Lattice logic, its modal companion, and embeddings between the two,
checked exhaustively over finite lattices and Kripke frames."""

from .baoframe import (KripkeFrame, KripkeModel, bq_valid_on_frame, eval_bq,
                       extension, nec_op, pos_op, sim_op)
from .embedding import (Embedding, certify_embedding, closure_family,
                        search_embedding, search_frames_for)
from .formula import (BQFormula, ParseError, QLFormula, bq_axiom, expand_ql,
                      kernelize_ql, normalize_bq, parse_bq, parse_ql,
                      print_bq, print_ql, ql_axiom, translate,
                      translate_diamond_form)
from .guards import GuardExceeded
from .oml import (FiniteOML, check_oml, eval_ql, find_distributivity_failures,
                  gen_boolean, gen_mo, ql_valid)
from .report import CertificateReport, CheckEntry

__version__ = "0.1.0"
