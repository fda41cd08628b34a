"""Independent numerical oracles for the closed forms."""

from anisogreen.services.validation.eigensolver import compare_eigenstructure, dense_eigensolver
from anisogreen.services.validation.kernel_ft import kernel_ft_oracle
from anisogreen.services.validation.pairings import get_pairing_registry
from anisogreen.services.validation.quadrature import reference_quadrature
from anisogreen.services.validation.residual import fd_hessian, fd_residual

__all__ = [
    "compare_eigenstructure",
    "dense_eigensolver",
    "fd_hessian",
    "fd_residual",
    "get_pairing_registry",
    "kernel_ft_oracle",
    "reference_quadrature",
]
