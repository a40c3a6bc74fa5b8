"""Strongly self-dual polyhedra inscribed in the unit sphere."""

from .combinat import CandidateList, enumerate_face_vectors
from .duality import SegmentType, classify_segment, dual_circle, dual_plane, parameter_alpha, phi
from .errors import SsdError
from .ltype import construct_ltype, ellipse_ltype, p5_obstruction_constants
from .polytope import FaceVector, Polytope, congruent, convex_hull3, face_vector
from .reconstruct import reconstruct_from_face
from .search import SearchParams, assemble_ssd23, grid_refine, kmw8, residuals
from .verify import SsdReport, verify_ssd

__all__ = [
    "CandidateList", "FaceVector", "Polytope", "SearchParams", "SegmentType", "SsdError", "SsdReport",
    "assemble_ssd23", "classify_segment", "congruent", "construct_ltype", "convex_hull3",
    "dual_circle", "dual_plane", "ellipse_ltype", "enumerate_face_vectors", "face_vector", "grid_refine", "kmw8",
    "p5_obstruction_constants", "parameter_alpha", "phi", "reconstruct_from_face", "residuals",
    "verify_ssd",
]
