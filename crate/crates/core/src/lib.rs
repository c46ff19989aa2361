pub mod combinatorics;
pub mod constraint_graphs;
pub mod graph_matrix;
pub mod spectrum;
