"""Top-K tau-path screening for monotone association.

Thin wrapper over the C++ core; see the project README for the method and
the command-line interface.
"""

try:
    from . import _tktp as _core  # installed layout: extension inside the package
except ImportError:  # pragma: no cover - build-tree layout
    import _tktp as _core

MamleCurve = _core.MamleCurve
RejectBoundary = _core.RejectBoundary
TauPathResult = _core.TauPathResult
TktpError = _core.TktpError
TktpSelection = _core.TktpSelection
copula_sample = _core.copula_sample
debye1 = _core.debye1
frank_tau_from_theta = _core.frank_tau_from_theta
frank_theta_from_tau = _core.frank_theta_from_tau
gaussian_r_from_rho = _core.gaussian_r_from_rho
gaussian_r_from_tau = _core.gaussian_r_from_tau
gaussian_rho_from_r = _core.gaussian_rho_from_r
gaussian_tau_from_r = _core.gaussian_tau_from_r
generate_reject_boundary = _core.generate_reject_boundary
jaccard = _core.jaccard
kendall_tau = _core.kendall_tau
lis_power_floor = _core.lis_power_floor
mixture_sample = _core.mixture_sample
pearson = _core.pearson
spearman = _core.spearman
stopping_point = _core.stopping_point
tau_path = _core.tau_path
taupath_mamle = _core.taupath_mamle
tktp = _core.tktp
to_ranks = _core.to_ranks
truncated_geom_mle = _core.truncated_geom_mle
verify_sequential_maximality = _core.verify_sequential_maximality

__all__ = [
    "MamleCurve",
    "RejectBoundary",
    "TauPathResult",
    "TktpError",
    "TktpSelection",
    "copula_sample",
    "debye1",
    "frank_tau_from_theta",
    "frank_theta_from_tau",
    "gaussian_r_from_rho",
    "gaussian_r_from_tau",
    "gaussian_rho_from_r",
    "gaussian_tau_from_r",
    "generate_reject_boundary",
    "jaccard",
    "kendall_tau",
    "lis_power_floor",
    "mixture_sample",
    "pearson",
    "spearman",
    "stopping_point",
    "tau_path",
    "taupath_mamle",
    "tktp",
    "to_ranks",
    "truncated_geom_mle",
    "verify_sequential_maximality",
]

__version__ = "0.1.0"
