use std::io::Cursor;
use std::path::PathBuf;

use srsc::scoring::{distance_centrality, path_centrality, simplified_score};
use srsc::*;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Ten points (node `k` is index `k - 1`): a chain 2 → 3 → 4 ⇄ 5 with
/// 1, 8 → 3, 7 → 8 and 10 → 5 hanging off it, and a separate pair {6, 9}.
fn ten_points() -> Dataset {
    Dataset::new(vec![
        vec![-6.0, 0.0],
        vec![-3.5, 0.0],
        vec![-1.5, 0.0],
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![10.0, 5.0],
        vec![-1.5, 4.5],
        vec![-1.5, 2.0],
        vec![11.0, 5.0],
        vec![3.5, 0.0],
    ])
    .unwrap()
}

#[test]
fn ten_point_chain_structure() {
    let data = ten_points();
    let m = JitteredMetric::new(&data, 0);
    let all: Vec<usize> = (0..10).collect();
    let seed = (0..1000)
        .find(|&s| build_forest(&all, &m, s).unwrap().edges()[0].0 == 1)
        .expect("some seed starts at node 2");
    let f = build_forest(&all, &m, seed).unwrap();
    assert_eq!(&f.edges()[..4], &[(1, 2), (2, 3), (3, 4), (4, 3)]);
    assert_eq!(f.component_count(), 2);
    let big = f.component_of(3);
    for node in [1, 2, 3, 4, 5, 7, 8, 10] {
        assert_eq!(f.component_of(node - 1), big, "node {node}");
    }
    assert_eq!(f.component_of(5), f.component_of(8));
    assert_ne!(f.component_of(5), big);
    let r = relationship_matrix(&f);
    assert_eq!(rnn_pairs(&r), vec![(3, 4), (5, 8)]);
    assert_eq!(count_roots(&r), 2);
}

#[test]
fn mirror_symmetric_pair_falls_back_to_boundary() {
    // Reciprocal pair (-0.5, 0.5) with one mirrored leaf each; point 4 only
    // serves as a boundary endpoint.
    let data = Dataset::new(vec![
        vec![-2.0, 0.0],
        vec![-0.5, 0.0],
        vec![0.5, 0.0],
        vec![2.0, 0.0],
        vec![9.0, 9.0],
    ])
    .unwrap();
    let m = JitteredMetric::new(&data, 0);
    let f = build_forest(&[0, 1, 2, 3], &m, 0).unwrap();
    let r = relationship_matrix(&f);
    assert_eq!(rnn_pairs(&r), vec![(1, 2)]);
    let s1 = ScoreVector::compute(&f, &r, &m, 1);
    let s2 = ScoreVector::compute(&f, &r, &m, 2);
    assert_eq!(simplified_score(&s1, &s2), (0.5, 0.5));

    // ζ(-0.5) = |2.5 - √171.25| < ζ(0.5) = |1.5 - √153.25|.
    let b = BoundaryPairSet::from_pairs(vec![(3, 4)]);
    for mode in IndexMode::ALL {
        assert_eq!(select_root((1, 2), (&s1, &s2), Some(&b), &m, mode), 2, "{mode}");
    }
    // Without a boundary the smaller index wins.
    assert_eq!(select_root((1, 2), (&s1, &s2), None, &m, IndexMode::SimplifiedHybrid), 1);
}

#[test]
fn boundary_score_examples() {
    // {1, 5} against boundary pair (0, 6): ζ = 4 for both, smaller index wins.
    let data = Dataset::from_values(&[0.0, 6.0, 1.0, 5.0]).unwrap();
    let m = JitteredMetric::new(&data, 0);
    let b = BoundaryPairSet::from_pairs(vec![(0, 1)]);
    assert_eq!(boundary_score(2, &b, &data), 4.0);
    assert_eq!(boundary_score(3, &b, &data), 4.0);
    let f = build_forest(&[2, 3], &m, 0).unwrap();
    let r = relationship_matrix(&f);
    let (s0, s1) = (ScoreVector::compute(&f, &r, &m, 0), ScoreVector::compute(&f, &r, &m, 1));
    assert_eq!(select_root((2, 3), (&s0, &s1), Some(&b), &m, IndexMode::SimplifiedHybrid), 2);

    // {4, 1}: ζ(1) = 4 > ζ(4) = 2, so 1 wins despite the larger index.
    let data = Dataset::from_values(&[0.0, 6.0, 4.0, 1.0]).unwrap();
    let m = JitteredMetric::new(&data, 0);
    assert_eq!(boundary_score(3, &b, &data), 4.0);
    assert_eq!(boundary_score(2, &b, &data), 2.0);
    let f = build_forest(&[2, 3], &m, 0).unwrap();
    let r = relationship_matrix(&f);
    let (s0, s1) = (ScoreVector::compute(&f, &r, &m, 0), ScoreVector::compute(&f, &r, &m, 1));
    assert_eq!(select_root((2, 3), (&s0, &s1), Some(&b), &m, IndexMode::SimplifiedHybrid), 3);

    // Extremes: an endpoint scores the full pair distance, the midpoint zero.
    let data = Dataset::from_values(&[0.0, 6.0, 2.0, 3.0]).unwrap();
    assert_eq!(boundary_score(0, &b, &data), 6.0);
    assert_eq!(boundary_score(2, &b, &data), 2.0);
    assert_eq!(boundary_score(3, &b, &data), 0.0);
}

#[test]
fn spatial_examples() {
    let data = Dataset::from_values(&[0.0, 1.0, 3.0]).unwrap();
    let m = JitteredMetric::new(&data, 0);
    assert_eq!(m.nearest_neighbor(0, &[0, 1, 2]).unwrap(), 1);
    assert_eq!(m.nearest_neighbor(2, &[0, 1, 2]).unwrap(), 1);
    let data = Dataset::from_values(&[0.0, 1.0, 5.0, 6.0]).unwrap();
    let m = JitteredMetric::new(&data, 0);
    assert_eq!(m.furthest_point(1, &[]).unwrap(), 3);
    assert_eq!(m.furthest_point(3, &[]).unwrap(), 0);
    let b = srsc::boundary::detect_boundary_from(&m, &[1]).unwrap();
    assert_eq!(b.pairs(), &[(3, 0)]);
    let flat = Dataset::new(vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
    let m = JitteredMetric::with_scale(&flat, 0, 0.0);
    assert_eq!(m.distance(0, 1).unwrap(), 5.0);
}

#[test]
fn centrality_closed_forms() {
    // On an equally spaced line every distance / hop ratio is the gap, so
    // c* = (|τ| - 1) / |τ| · gap for each point; three points always form
    // a single component.
    let data = Dataset::from_values(&[0.0, 2.0, 4.0]).unwrap();
    for seed in 0..10 {
        let m = JitteredMetric::new(&data, seed);
        let f = build_forest(&[0, 1, 2], &m, seed).unwrap();
        assert_eq!(f.component_count(), 1);
        let r = relationship_matrix(&f);
        for i in 0..3 {
            assert!((distance_centrality(&f, &r, &m, i) - 4.0 / 3.0).abs() < 1e-12);
        }
        assert!((path_centrality(&f, &r, 1) - 2.0 / 3.0).abs() < 1e-12);
    }

    // Star: centre with four leaves, c_centre = 4/5 < c_leaf.
    let data = Dataset::new(vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![-1.2, 0.0],
        vec![0.0, 1.4],
        vec![0.0, -1.6],
    ])
    .unwrap();
    let m = JitteredMetric::new(&data, 0);
    let f = build_forest(&[0, 1, 2, 3, 4], &m, 0).unwrap();
    let r = relationship_matrix(&f);
    assert!((path_centrality(&f, &r, 0) - 0.8).abs() < 1e-12);
    for leaf in 1..5 {
        assert!(path_centrality(&f, &r, 0) < path_centrality(&f, &r, leaf));
    }
}

#[test]
fn csv_examples() {
    let plain = read_csv(Cursor::new("0\n1\n3\n"), &CsvOptions::default()).unwrap();
    assert_eq!(plain.dataset.len(), 3);
    assert_eq!(plain.dataset.dim(), 1);
    assert!(plain.labels.is_none());

    let err = read_csv(Cursor::new("1,2\n3\n"), &CsvOptions::default()).unwrap_err();
    assert!(matches!(err, Error::RaggedRow { row: 2, .. }), "{err}");

    let opts = CsvOptions {
        has_header: true,
        label_column: Some(LabelColumn::Index(4)),
        ..CsvOptions::default()
    };
    let iris = load_csv(data_dir().join("iris.csv"), &opts).unwrap();
    assert_eq!(iris.dataset.len(), 150);
    assert_eq!(iris.dataset.dim(), 4);
    assert_eq!(iris.distinct_labels(), 3);
}

#[test]
fn tree_examples() {
    let data = Dataset::from_values(&[0.0, 1.0, 5.0, 6.0]).unwrap();
    let (_, p) = cluster(&data, &ClusterConfig::new(2)).unwrap();
    assert_eq!(p.labels(), &[0, 0, 1, 1]);

    let data = Dataset::from_values(&[0.0, 1.0, 3.0]).unwrap();
    let (tree, p) = cluster(&data, &ClusterConfig::new(1)).unwrap();
    assert_eq!(p.labels(), &[0, 0, 0]);
    let doc = tree.document();
    assert_eq!(doc.levels, 2);
    let top = doc.nodes.last().unwrap();
    assert_eq!((top.rep, top.members.clone()), (0, vec![0, 1, 2]));

    let data = Dataset::from_values(&[3.0, 8.0]).unwrap();
    let (tree, _) = cluster(&data, &ClusterConfig::new(1)).unwrap();
    let top = tree.nodes().last().unwrap();
    assert_eq!(top.children, vec![0, 1]);
    assert!(tree.nodes()[0].children.is_empty() && tree.nodes()[1].children.is_empty());
}

#[test]
fn cut_examples() {
    let data = Dataset::from_values(&[0.0, 1.0, 10.0]).unwrap();
    let m = JitteredMetric::new(&data, 0);
    let tree = build_tree(&m, &ClusterConfig::new(3)).unwrap();
    assert_eq!(tree.final_roots(), vec![0, 1, 2]);
    assert_eq!(cut_to_k(&tree, 2, &m).unwrap().labels(), &[0, 0, 1]);
    assert_eq!(cut_to_k(&tree, 3, &m).unwrap().labels(), &[0, 1, 2]);

    let data = Dataset::from_values(&[0.0, 1.0, 2.0, 3.0]).unwrap();
    for seed in 0..20 {
        let m = JitteredMetric::new(&data, seed);
        let tree = build_tree(&m, &ClusterConfig::new(4)).unwrap();
        let p = cut_to_k(&tree, 2, &m).unwrap();
        assert_eq!(p.k(), 2);
        let breaks = p.labels().windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(breaks, 1, "seed {seed}: {:?}", p.labels());
        assert_eq!(p, cut_to_k(&tree, 2, &m).unwrap());
    }
}
