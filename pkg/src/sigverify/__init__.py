"""On-line signature verification toolkit and benchmark harness."""

from .alignment import AlignmentResult, dtw, pre_align, soft_dtw, soft_dtw_grad, triplet_loss
from .errors import DegenerateInputError, FormatError, SigVerifyError, ValidationError
from .evaluation import ScoreRecord, eer, far_frr_curve, forgery_breakdown, rank_teams
from .features import GlobalFeatureVector, TimeFunctionMatrix
from .ingest import RawSignature, parse_comparisons, parse_signature, write_scores
from .pathsig import path_signature

__version__ = "0.1.0"
