"""Sphere-valued decompositions of ball-valued maps for finite-dimensional norms.

The package is organised by task:

``body``
    gauges, support functions, exposed points, polytope approximation.
``section``
    chords bisected by a point, planar sections, chord selections.
``decompose``
    constructive decompositions and their certificates.
``degree``
    winding numbers and piecewise-linear degrees.
``obstruct``
    numerical forms of the impossibility results.
"""

from .body import (
    ConvexBody,
    Ellipsoid,
    LpBall,
    MembershipBody,
    Polytope,
    ball3,
    body_from_json,
    boundary_point,
    disk,
    exposed_point,
    gauge,
    hausdorff_distance,
    hexagon,
    polytope_approx,
    radial_transport,
    square,
    support,
)
from .decompose import (
    DecompositionCertificate,
    ThreeTermParams,
    ball_grid,
    decompose_four_extreme,
    decompose_three,
    decompose_two_disk,
    eps_select,
    shell_convex_decomposition,
    three_term_params,
    two_nonvanishing_average,
    verify_certificate,
)
from .degree import fix_extreme_degree_check, icosphere, pl_degree, winding_number
from .maps import SampledMap, SphereMapSamples, interval_map
from .obstruct import (
    ContradictionCertificate,
    Rejection,
    ThetaBound,
    convex_decomposition_refuter,
    discontinuity_witness,
    face_containment_check,
    lambda_forcing_check,
    theta_bound,
)
from .section import (
    Chord,
    PlanarSection,
    bisected_chords_2d,
    chord_map,
    d_sym,
    disk_chord,
    make_section,
    section_off_line,
    strip_chord,
)

__version__ = "0.1.0"
