"""mDAGs and the latent-projection calculus.

Graphs with hidden variables are summarized by an mDAG: a DAG over the
observed vertices plus a simplicial complex of bidirected faces.  This
package projects, reduces, separates, factorizes, intervenes on and
classifies such graphs, and evaluates the resulting constraints on exact
discrete distributions.
"""

from .causal import check_commutation, distinguishing_intervention, mutilate_dag, mutilate_mdag
from .equivalence import (
    EquivalenceReport,
    Skeleton,
    canonical_iso_form,
    enumerate_mdags,
    equivalence_classes,
    facet_split,
    iter_mdags,
    skeleton,
)
from .errors import (
    ConsistencyError,
    CycleError,
    DegenerateInputError,
    InputError,
    MDagError,
    ParseError,
    ResourceError,
)
from .graph import Dag, MDag, VertexPartition
from .kernels import BACKEND
from .markov import (
    CiStatement,
    FactorizationNode,
    VermaConstraint,
    d_separated,
    district_subgraph,
    districts,
    implied_ci,
    nested_factorize,
    verma_constraints,
)
from .projection import canonical_dag, hidden_common_cause, latent_project
from .reduction import exogenize, reduce_latents
from .sem import (
    DiscreteSem,
    JointTable,
    ci_gap,
    constraint_gap,
    exact_joint,
    max_agreement_search,
    random_sem,
    verma_gap,
)
from .simplicial import SimplicialComplex
from .textformat import GraphDocument, parse_document, parse_mdag, serialize, to_dot

__version__ = "0.1.0"
