"""Blind cooperative jamming simulator for the Gaussian wiretap channel with helpers."""

from ._core import (
    CapExceeded,
    Channel,
    DegenerateGains,
    ScalarLattice,
    SchemeConfig,
    SchemeKind,
    __version__,
    analytic_power,
    blind_gamma,
    dmin_study,
    encode,
    finite_delta_dof,
    gaussian_entropy_bits,
    gaussian_wiretap_capacity,
    leakage_coefficient,
    make_blind_scheme,
    make_csi_scheme,
    make_gaussian_jam_scheme,
    mi_pam,
    mixture_entropy,
    rate_lower_bound,
    receiver_lattice,
    run_cli,
    sample_channel,
    schedule_q,
    sweep_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
