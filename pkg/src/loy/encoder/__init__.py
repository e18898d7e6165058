"""Encoding of Loy specifications into bounded relational logic."""

from loy.encoder.formula import StateContext, encode_expr, encode_formula
from loy.encoder.frame import build_frame_condition, depends_closure
from loy.encoder.model import EncodedInvariant, EncodedMethod, EncodedSpec
from loy.encoder.spec import encode_method, encode_spec

__all__ = [
    "EncodedInvariant", "EncodedMethod", "EncodedSpec", "StateContext",
    "build_frame_condition", "depends_closure", "encode_expr", "encode_formula",
    "encode_method", "encode_spec",
]
