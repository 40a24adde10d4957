"""Exact q-Stirling numbers and q-Eulerian polynomials of types A, B, D and
r-colored permutations, with an exhaustive identity checker."""
from .errors import (
    CapExceeded,
    InvalidLabel,
    InvalidParams,
    InvalidPartition,
    NotDivisible,
    QStirlingError,
    UnknownIdentity,
)
from .groups import (
    Caps,
    ColoredPerm,
    SignedPerm,
    enumerate_bn,
    enumerate_colored,
    enumerate_sn,
    eulerian_a,
    eulerian_b,
    eulerian_r,
    fmaj,
    psi,
    stats_a,
    stats_b,
    stats_r,
)
from .identities import IdentityReport, verify, verify_all
from .partitions import Pssp, TypeBPartition, m_stat, pssp_weight
from .qpoly import (
    ONE,
    Q,
    ZERO,
    LaurentPoly,
    TPoly,
    TSeries,
    div_exact,
    falling_factorial,
    q_binomial,
    q_factorial,
    q_int,
)
from .starred import (
    OrderedSignPartition,
    StarredPerm,
    bfmaj_enum,
    bfmaj_rec,
    fmaj_labelling,
    fmaj_starred,
    insert_bar,
    insert_star,
    ordered_stirling_b,
)
from .stirling import (
    StirlingTable,
    chow_gessel,
    stirling_a,
    stirling_b,
    stirling_d,
    stirling_r,
    stirling_table,
)

__version__ = "0.1.0"
