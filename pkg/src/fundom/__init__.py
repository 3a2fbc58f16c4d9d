"""Fundamental-domain projections for permutation-group actions on R^n."""

from .actions import DirectSum, Plain, Tensor, alternating, cyclic, dihedral, spec_from_json, symmetric
from .dirichlet import DirichletConfig, brute_force_min, descend, descend_multi_seed
from .group import PermGroup, StabilizerChain, build_chain, contains, group_order, random_element
from .perm import Permutation, compose, from_cycles, inverse, parse_cycles
from .project import PerturbationConfig, Projector, mu_average, phi_ascending, phi_descending, project, rank_hat

__all__ = [
    "DirectSum", "Plain", "Tensor", "alternating", "cyclic", "dihedral", "spec_from_json", "symmetric",
    "DirichletConfig", "brute_force_min", "descend", "descend_multi_seed",
    "PermGroup", "StabilizerChain", "build_chain", "contains", "group_order", "random_element",
    "Permutation", "compose", "from_cycles", "inverse", "parse_cycles",
    "PerturbationConfig", "Projector", "mu_average", "phi_ascending", "phi_descending", "project", "rank_hat",
]
