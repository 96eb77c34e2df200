"""Gluings of completely positive maps on two-block orthogonal decompositions."""

from .channel import (ChannelReport, ChoiMatrix, KrausChannel, apply, choi, classify, distance,
                      kraus_unitary_relation, li_kraus, restrict)
from .errors import *  # noqa: F401,F403
from .gluing import (GluingAnalysis, GluingMatrix, LspVectors, analyze, build_gluing, build_lsp,
                     extract_gluing_matrix, extreme_decompose, lsp_factor)
from .subspace import BlockSplit, SpTriple, build_sp, is_sp, sp_blocks, validate_sp_triple

__version__ = "0.1.0"
