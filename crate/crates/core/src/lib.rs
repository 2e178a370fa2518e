//! Convex bicombings on metric spaces, discretized convex hulls and
//! extremal points, and numerical checks that compact convex sets are the
//! closed convex hulls of their extremal points.

pub mod convexity;
pub mod error;
pub mod extremal;
mod index;
pub mod km;
pub mod model;
pub mod point;
pub mod space;

pub use convexity::{
    check_convex_functional, dist_to_net, hausdorff, hull_closure, is_convex_net,
    ConvexFunctional, FunctionalCheck, HullClosure, PointNet, SegmentWitness, Verdict,
};
pub use error::{Error, Result};
pub use extremal::{
    argmax_face, extremal_points, is_extremal_point, is_extremal_set, minimal_extremal_descent,
    Descent, ExtremalParams, ExtremalPoints,
};
pub use km::{
    run_paper_checks, verify_krein_milman, HullConfig, KmConfig, KmReport, PaperCheckConfig,
    PaperChecksReport,
};
pub use model::{
    make_hyperbolic_plane, make_lp_space, make_metric_tree, make_product, Exponent,
    HyperbolicPlane, LpSpace, MetricTree, MetricTreeSpec, NormedSpaceSpec, ProductSpace, Space,
    SpaceSpec,
};
pub use point::Point;
pub use space::{
    check_axioms, distance, evaluate_bicombing, sample_segment, AxiomReport, BicombedSpace,
    Quadruple,
};
