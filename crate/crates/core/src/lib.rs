//! Hierarchical clustering by electing representatives among reciprocal
//! nearest neighbours.
//!
//! Each level links the current points into sub-minimum-spanning-trees by
//! following nearest-neighbour chains ([`submst`]). Every sub-MST contains
//! exactly one reciprocal nearest-neighbour pair; one of its two endpoints is
//! elected as the sub-MST's root by topology scores ([`scoring`]), with a
//! boundary-distance fallback for exact ties ([`boundary`]). The roots form
//! the next level, so the point count at least halves per level and the whole
//! tree is built in `O(n log n)` with a k-d tree for neighbour search.
//!
//! ```
//! use srsc::{cluster, ClusterConfig, Dataset};
//!
//! let data = Dataset::from_values(&[0.0, 1.0, 5.0, 6.0]).unwrap();
//! let (tree, partition) = cluster(&data, &ClusterConfig::new(2)).unwrap();
//! assert_eq!(partition.labels(), &[0, 0, 1, 1]);
//! assert_eq!(tree.final_roots().len(), 2);
//! ```

pub mod boundary;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod hierarchy;
pub mod kdtree;
pub mod metric;
pub mod scoring;
pub mod submst;

pub use boundary::{boundary_score, default_sigma, detect_boundary, BoundaryPairSet};
pub use dataset::{load_csv, read_csv, CsvOptions, Dataset, LabelColumn, LabeledDataset};
pub use error::{Error, Result};
pub use evaluation::{entropy, mutual_information, nmi, rand_index, ContingencyTable};
pub use hierarchy::{
    build_tree, cluster, count_roots, cut_level_to_k, cut_to_k, export_tree, labeling, parse_tree,
    ClusterConfig, ClusterTree, Partition, TreeDocument, TreeNode,
};
pub use metric::{JitteredMetric, SpatialIndex};
pub use scoring::{select_root, IndexMode, ScoreVector};
pub use submst::{build_forest, relationship_matrix, rnn_pairs, RelationshipMatrix, SubMstForest};
