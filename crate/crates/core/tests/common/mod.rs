pub mod finite_oracle;
pub mod polytope_oracle;
