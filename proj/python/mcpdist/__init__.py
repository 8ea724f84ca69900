"""Contact and nearest-neighbour distance CDFs of the Matern cluster process."""

from ._core import (
    KernelDomainError,
    MCPParams,
    NumericalError,
    SamplerResourceError,
    __version__,
    cdf_curve,
    chi1,
    chi2,
    chi3,
    cluster_size_pmf,
    contact_cdf,
    ks_statistic,
    lens_mass,
    mu,
    nn_cdf,
    ppp_contact_cdf,
    radial_grid,
    sample_contact_distance,
    sample_nn_distance_palm,
    sample_nn_distance_window,
)

__all__ = [
    "KernelDomainError",
    "MCPParams",
    "NumericalError",
    "SamplerResourceError",
    "__version__",
    "cdf_curve",
    "chi1",
    "chi2",
    "chi3",
    "cluster_size_pmf",
    "contact_cdf",
    "ks_statistic",
    "lens_mass",
    "mu",
    "nn_cdf",
    "ppp_contact_cdf",
    "radial_grid",
    "sample_contact_distance",
    "sample_nn_distance_palm",
    "sample_nn_distance_window",
]
