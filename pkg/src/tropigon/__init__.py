"""Convex-polygon semirings over the nine imaginary quadratic fields of class number 1.

Exact-arithmetic building blocks (quadratic integers and rationals, symmetric
lattice polygons, piecewise-affine envelopes), the adelic module catalog with
its prime/valuation toolkit, a formal-tensor laboratory for the reduced
quotient, and JSON/SVG front ends.
"""

from .adelic import (
    GENERIC,
    INERT,
    LOCALIZED,
    PRINCIPAL,
    RAMIFIED,
    SPLIT,
    ZERO_MODULE,
    FiniteSection,
    GenericFiber,
    ModuleHandle,
    PrimeFiber,
    PrimeIdeal,
    ValuationVector,
    adele_from_module,
    complementary_generator,
    ideal_count_upto,
    iso_class_equal,
    module_from_adele,
    point_iso,
    point_over_c,
    primes_above,
    primes_upto,
    pullback_fiber,
    section_act,
    section_validate,
    valuation,
)
from .envelope import Envelope, eval_at, leq, phi, phi_inv, tmax, tplus
from .errors import (
    BothZero,
    DivByZero,
    DomainError,
    FieldMismatch,
    InvalidSection,
    MalformedInput,
    NotLattice,
    NotProper,
    OutOfDomain,
    TropigonError,
    WrongField,
    ZeroInput,
    ZeroModule,
)
from .polygeom import (
    EMPTY,
    PROPER,
    ZERO,
    GeneratorDecomposition,
    StalkElement,
    SymPolygon,
    aut_orbit_equiv,
    dk,
    global_sections_check,
    hull_union,
    membership_in_generated,
    minkowski_sum,
    reconstruct_lemma_polygon,
    scale_act,
    sector_decompose,
    stalk_scale,
)
from .quadfield import (
    HEEGNER_DS,
    Field,
    PlanePoint,
    QuadInt,
    QuadRat,
    canonical_unit_rep,
    field,
    gcd,
)
from .render import render_polygon_svg
from .tensorlab import (
    DISTINCT,
    EQUAL,
    POSSIBLY_EQUAL,
    UNKNOWN,
    FormalTensor,
    ReducedElement,
    act_pair,
    cancellation_instance,
    cancellativity_experiment,
    eval_separator,
    eval_tensor_at,
    gamma,
    normalize,
    reduced_add,
    reduced_equal,
    reduced_mul,
    tensor_add,
    tensor_mul,
    tensor_product,
)

__version__ = "0.1.0"
