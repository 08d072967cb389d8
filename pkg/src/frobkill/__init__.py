"""Local cohomology over graded F_p-domains, the Frobenius action on it, and
module-finite extensions that kill classes, with checkable certificates."""

from .cech import (
    CechComplex,
    Cochain,
    boundary_solve,
    differential,
    is_cocycle,
    lc_graded_piece,
    unit_homotopy,
)
from .errors import (
    BudgetExceeded,
    FrobKillError,
    InjectivityError,
    ParseError,
    PreconditionError,
    VerifyError,
)
from .frobenius import ClassHandle, FrobeniusPoly, find_relation, frob_cochain, frob_orbit
from .groebner import Ideal, groebner, hilbert_function, ideal_member, normal_form, saturate
from .kill import (
    KillCertificate,
    MembershipNotFound,
    TrivializationCertificate,
    kill_all,
    kill_class,
    trivialize_relation,
    verify_certificate,
)
from .poly import MonomialOrder, Poly, PolyRing
from .ringfile import parse_ring, read_ring, serialize_ring
from .tower import Fraction, Presentation, RingTower, adjoin_root, compositum

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CechComplex",
    "ClassHandle",
    "Cochain",
    "Fraction",
    "FrobKillError",
    "FrobeniusPoly",
    "Ideal",
    "InjectivityError",
    "KillCertificate",
    "MembershipNotFound",
    "MonomialOrder",
    "ParseError",
    "Poly",
    "PolyRing",
    "PreconditionError",
    "Presentation",
    "RingTower",
    "TrivializationCertificate",
    "VerifyError",
    "adjoin_root",
    "boundary_solve",
    "compositum",
    "differential",
    "find_relation",
    "frob_cochain",
    "frob_orbit",
    "groebner",
    "hilbert_function",
    "ideal_member",
    "is_cocycle",
    "kill_all",
    "kill_class",
    "lc_graded_piece",
    "normal_form",
    "parse_ring",
    "read_ring",
    "saturate",
    "serialize_ring",
    "trivialize_relation",
    "unit_homotopy",
    "verify_certificate",
]
