pub mod geom;
pub mod multiscale;
pub mod hull_tree;
pub mod curve_builder;
pub mod certify;
pub mod cli;
