pub mod audio;
pub mod edge;
pub mod gesture;
pub mod model;
pub mod pipeline;
pub mod tracking;
pub mod vision;
