"""Exact computations with bound quiver algebras KQ/I."""

from .algebra import (BasisAlgebra, IsoReport, NormalFormBasis, admissibility_check, compute_basis,
                      ideal_membership, natural_map_check, present_basis_algebra, quotient_idempotent,
                      truncate_idempotent)
from .ar import ARQuiver, ar_sequence, ar_translate, knit, predecessors, tau_inverse
from .classes import (Analysis, Budgets, classify, left_part, left_support, right_part,
                      verify_theorem)
from .corpus import CorpusSpec, generate_corpus
from .decompose import decompose, is_indecomposable, is_isomorphic
from .errors import BudgetExceeded, FieldSensitivity
from .homology import (HomDim, ext_dim, global_dimension, injective_dimension,
                       minimal_projective_resolution, projective_dimension)
from .linalg import QQ, Mat, PrimeField
from .modules import Morphism, Representation, hom_space, injective, projective, simple
from .pi1 import (abelianization, fundamental_group, simply_connected_given_presentation,
                  strongly_simply_connected_given_presentation)
from .presentation import AlgebraPresentation, ParseError, Relation, load, opposite, parse, serialize
from .quiver import Arrow, Path, Quiver, convex_subsets, is_full_convex

__version__ = "0.1.0"
