pub mod complex;
pub mod domain;
pub mod families;
pub mod integrator;
pub mod io;
pub mod lorentz;
pub mod mesh;
pub mod singularity;
pub mod topology;
pub mod validate;
