"""Disk contact representations: caterpillars, stars, rigid unit packings and a hardness reduction."""

from .geometry import (DEFAULT_TOL, ContactReport, Disk, Packing, Relation, Violation, ViolationKind,
                       disk_relation, extract_contact_graph, render_svg, subtend_angle, tangent_point,
                       validate_dcr)
from .graph import (Caterpillar, Graph, RotationSystem, WeightedStar, caterpillar_from_degrees,
                    check_rotation_system, classify, is_internally_triangulated_outerplane)
from .caterpillar import (bruteforce_caterpillar_udc, construct_caterpillar_udc,
                          decide_caterpillar_udc, narrow_wide_trace)
from .star import decide_and_construct_embedded_star, embedded_star_reference
from .oracle import ThreePartitionInstance, star_wdc_bruteforce, three_partition_bruteforce
from .rigidity import check_rigidity_precondition, reconstruct_rigid
from .interval import Interval, sin_pi_over_pow2
from .hardness import (ReductionParams, build_star_instance, check_feasibility_conditions,
                       compute_outer_central_radii, embed_solution, pad_instance, radius_fn)

__version__ = "0.1.0"
