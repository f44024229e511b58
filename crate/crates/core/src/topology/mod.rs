//! Open balls, the topology they generate on finite carriers, separation
//! axioms, connectedness, and escape witnesses for infinite ball covers.

mod ball;
mod cover;
mod finite;

pub use ball::{canonical_radii, inner_ball_radius, open_ball, InnerBall, OpenBall};
pub use cover::{uncovered_witness, CoverFamily, CoverSearch, RadiusRule};
pub use finite::{
    ball_family, generate_topology, is_compact, is_connected, is_t0, is_t1, is_t2, separation_report,
    verify_topology_axioms, Connectedness, FiniteTopology, Separation, SeparationFailure, SeparationReport,
    MAX_OPEN_SETS,
};
