//! Simplicial complexes, simplicial maps and the higher contiguity distance.
//!
//! The crate decides contiguity classes of simplicial maps with replayable
//! certificates, computes the contiguity distance of a tuple of maps by an
//! exact cover search over good subcomplexes, and derives the discrete
//! simplicial LS category and higher topological complexity from it.

pub mod collapse;
pub mod complex;
pub mod contiguity;
pub mod distance;
pub mod error;
pub mod io;
pub mod maps;
pub mod par;
pub mod product;
pub mod subdivision;
pub mod suite;

pub use collapse::{
    core, dominated_vertices, is_strongly_collapsible, CollapseStep, CollapseTrace,
};
pub use complex::{
    enumerate_subcomplexes, label_order, restrict_complex, Complex, Mode, Simplex, Subcomplex,
    MAX_VERTICES,
};
pub use contiguity::{
    contiguity_witness, contiguous_neighbors, decide_class, is_contiguous, same_contiguity_class,
    search_class, ClassBudget, ClassDecision, ContiguityCertificate, Verdict,
};
pub use distance::{
    axis_inclusion_distance, contiguity_distance, contiguity_distance_factored, discrete_tc,
    distance_of, is_good_piece, piece_verdict, scat, scat_at, CoverSolution, DistanceBudget,
    DistanceReport, Link, MapTuple, PieceVerdict, SdValue, SearchStats,
};
pub use error::{Error, Result};
pub use io::{
    emit_complex, emit_map, parse_complex, parse_complex_file, parse_facets, parse_map,
    parse_map_file, parse_map_table, quote_label,
};
pub use maps::{
    all_maps, build_map, compose, constant_map, preimage_subcomplex, random_map, restrict_map,
    SimplicialMap,
};
pub use product::{
    axis_inclusion, axis_inclusion_factored, axis_inclusions_factored, categorical_power,
    categorical_product, categorical_product_of, diagonal, diagonal_factored, projection,
    projections, slab_inclusion, slab_inclusion_factored, ProductComplex, ProductMap,
};
pub use subdivision::{
    barycentric_subdivision, subdivide_map, subdivide_map_between, SubdividedComplex,
};
pub use suite::{
    check_names, small_corpus, verify_theorem_suite, verify_tuples, CheckReport, SuiteConfig,
    SuiteReport,
};
