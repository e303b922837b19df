//! Exact toric and torus-GIT checks together with numerical momentum-map and
//! Kähler-potential tools on coordinate charts.

pub mod cox;
pub mod fan;
pub mod forms;
pub mod lattice;
pub mod moment;
