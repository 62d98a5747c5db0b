"""Exact Dirac combs over real quadratic fields: symbolic Fourier transforms,
numeric Poisson checks, Diophantine tools and period reconstruction."""

from .analysis import (
    GaussianProbe,
    apply_measure,
    atom_oracle,
    difference_profile,
    discreteness_profile,
    idempotent_indicator,
    poisson_check,
    project,
)
from .comb import (
    Comb,
    atom_weight,
    atoms_in_window,
    comb_equal,
    coset_comb,
    fourier,
    integer_comb,
    is_hermitian,
    is_real,
    loads_comb,
    dumps_comb,
    read_comb,
    reflect,
    write_comb,
)
from .diophantine import (
    KroneckerSystem,
    almost_periods,
    babai_nearest,
    best_homogeneous,
    best_inhomogeneous,
    cf_expand,
    kronecker_solve,
    lll_reduce,
)
from .exactnum import FieldElem, Phase, field, parse_rational, phase_value, sign_of, to_float
from .lattice import Lattice, det_abs, dual, enumerate_window, reduce_mod, same_lattice
from .reconstruct import (
    ConeSpec,
    coset_decompose,
    find_period_basis,
    nu,
    nu_hat_expected,
    projection_cluster_certificate,
    reconstruct,
    refute_lattice_cover,
    snap_period,
)

__version__ = "0.1.0"

__all__ = [
    "GaussianProbe",
    "apply_measure",
    "atom_oracle",
    "difference_profile",
    "discreteness_profile",
    "idempotent_indicator",
    "poisson_check",
    "project",
    "Comb",
    "atom_weight",
    "atoms_in_window",
    "comb_equal",
    "coset_comb",
    "fourier",
    "integer_comb",
    "is_hermitian",
    "is_real",
    "loads_comb",
    "dumps_comb",
    "read_comb",
    "reflect",
    "write_comb",
    "KroneckerSystem",
    "almost_periods",
    "babai_nearest",
    "best_homogeneous",
    "best_inhomogeneous",
    "cf_expand",
    "kronecker_solve",
    "lll_reduce",
    "ConeSpec",
    "coset_decompose",
    "find_period_basis",
    "nu",
    "nu_hat_expected",
    "projection_cluster_certificate",
    "reconstruct",
    "refute_lattice_cover",
    "snap_period",
    "FieldElem",
    "Phase",
    "field",
    "parse_rational",
    "phase_value",
    "sign_of",
    "to_float",
    "Lattice",
    "det_abs",
    "dual",
    "enumerate_window",
    "reduce_mod",
    "same_lattice",
]
