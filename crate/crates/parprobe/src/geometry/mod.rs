//! Sets, distances, boundary charts, probe geometry, and the chain-of-balls
//! construction.

pub mod chain;
pub mod charts;
pub mod gridfile;
pub mod inclusion;
pub mod probe_points;
pub mod set;
pub mod shapes;

pub use chain::chain_of_balls;
pub use charts::relative_graph_gamma;
pub use inclusion::{
    boundary_normal, exterior_component, modified_distance, Domain, GeometryConfig,
    InclusionFamily, ModifiedDistance, RasterFamily, Side,
};
pub use probe_points::{calibrate_delta, make_probe, ProbeConfig, SeparationChecks};
pub use set::{dilate_erode, hausdorff_distance, EpsMode, SampledSet};
pub use shapes::{Shape, TimeScalar};
