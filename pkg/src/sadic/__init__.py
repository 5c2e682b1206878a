"""Exact Z[1/p]-lattice computations, diagonal-unipotent flows, and
p-adic Diophantine approximation experiments."""

from .sarith import (
    DEFAULT_PRECISION,
    CertifiedNorm,
    PadicPoint,
    PExact,
    dot_plus,
    haar_point,
    pexact,
    pexact_from_fraction,
    point_from_coords,
    zero_point,
)
from .svec import SPoint, WedgeVector, wedge, wedge_rows
from .lattice import (
    CertValue,
    DeltaCertificate,
    FlowedPoint,
    FlowTime,
    LatticeDescription,
    PrimitiveModule,
    SearchBudget,
    apply_flow,
    covolume,
    delta_search,
    minkowski_search,
    random_primitive_module,
)
from .flows import balanced_time, gamma_estimate, vwma_flow_condition
from .dioph import (
    ExponentReport,
    Witness,
    flow_to_vwma,
    gamma_to_wp,
    liouville_point,
    liouville_witnesses,
    make_witness,
    pi_plus,
    vwma_search,
    vwma_to_flow,
    w_search,
    wp_search,
)

__version__ = "0.1.0"
