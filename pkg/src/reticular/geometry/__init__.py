"""Symplectic/contact side: non-degeneracy, vector fields, map germs, caustics and wavefronts."""
from .symplectic import (
    MapGermSpec,
    VectorField,
    check_C_nondegenerate,
    check_S_nondegenerate,
    contact_form_value,
    contact_hamiltonian_vf,
    family_from_generating_function,
    generating_function,
    hamiltonian_vf,
    phase_space_names,
    stability_criterion_check,
    symplectic_lie_derivative,
)
from .discriminant import DiscriminantMesh, SolverConfig, caustic, load_config, stratum_label, wavefront
from .export import export_mesh
