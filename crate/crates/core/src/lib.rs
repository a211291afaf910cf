//! Free homotopy classes of closed orbits of geodesic flows on closed
//! orientable hyperbolic surfaces, and of the Anosov flows obtained from
//! them by Fried's Dehn surgery along a closed orbit.

pub mod word;
pub mod hyperbolic;
pub mod domain;
pub mod trace;
pub mod intersection;
pub mod filling;
pub mod orbit_models;
pub mod cache;
pub mod surgery;
pub mod svg;
pub mod report;
pub mod tolerance;
