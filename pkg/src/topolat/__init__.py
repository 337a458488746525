"""Verification lab for rigidity of lattices of topologies on finite vector spaces."""

from .topology import (
    Bijection,
    FinTopology,
    atom,
    atoms_of_sigma,
    complement_map,
    count_topologies,
    discrete,
    enumerate_topologies,
    indiscrete,
    is_atom,
    join,
    meet,
    pullback,
    pushforward,
    sup_atoms,
    sup_atoms_on,
    validate_topology,
)
from .lattice import (
    AtomProfile,
    FiniteLattice,
    LatticeIsoTable,
    atom_profiles,
    build_lattice,
    classify_atoms_intrinsic,
    enumerate_automorphisms,
    sigma_lattice,
    type_of,
    type_of_generic,
)
from .hartmanis import (
    ReconstructionResult,
    build_sigma_table,
    reconstruct_bijection,
    table_from_oracle,
)
from .finfield import (
    GF,
    AffineSemilinearMap,
    FieldAut,
    FiniteField,
    SemilinearMap,
    Subspace,
    VectorSpace,
    enumerate_gammaL,
    enumerate_subspaces,
    gaussian_binomial,
    group_order_gammaL,
    span,
    subspace_intersection,
    subspace_sum,
    space,
)
from .galois import (
    VectorTopology,
    enumerate_vector_topologies,
    frakS,
    frakT,
    galois_report,
    is_vector_topology,
    quotient_pushforward,
    t_max,
)
from .rigidity import (
    TripleDecomposition,
    affine_census,
    decompose_triple,
    end_to_end_theorem_a,
    preserves_tau,
    theorem_b_group,
)
from .projective import (
    SubspaceIsoTable,
    TauIsoTable,
    ftpg_reconstruct,
    induced_subspace_iso,
    tau_iso_from_semilinear,
    theorem_c_pipeline,
)

__version__ = "0.1.0"
