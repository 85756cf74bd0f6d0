"""Dirichlet Schroedinger operators -d^2/dx^2 + q on [0, 1]."""

from .flows import (
    FlowState,
    dQ_gamma_at_zero,
    dQ_xi_first_order,
    dQ_xi_series,
    gamma_eigenfunction,
    gamma_flow,
    h_coefficient,
    vector_field_X,
    vector_field_Y,
    xi_flow,
)
from .potential import GammaFlowPotential, GridPotential, Potential, ZeroPotential
from .solver import EigenPair, dirichlet_eigen, dirichlet_eigenvalues, fundamental_solutions, heat_content_q
