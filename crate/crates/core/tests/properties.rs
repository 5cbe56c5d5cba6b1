mod common;

use proptest::prelude::*;

use untangle::drawing::{classify_edges, parse_cdraw, stats, to_cdraw, trace_faces, validate_drawing};
use untangle::geometry::{gen_random, ingest, parse_gdraw, to_gdraw, Family, GenParams, Placement, Routing};
use untangle::separator::{exact_separator, heuristic_separator, verify_separator, HeuristicParams, StringGraph};
use untangle::transforms::{normalize, potential, Color, Coloring};
use untangle::EdgeSet;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (4usize..8).prop_map(Family::Complete),
        (2usize..5, 2usize..5).prop_map(|(a, b)| Family::CompleteBipartite(a, b)),
        (3usize..11, 0.2f64..0.8).prop_map(|(n, p)| Family::Random { n, p }),
    ]
}

fn params() -> impl Strategy<Value = GenParams> {
    (family(), 0usize..4, any::<bool>(), any::<u64>()).prop_map(|(f, d, convex, seed)| {
        GenParams::new(
            f,
            if d == 0 { Routing::Straight } else { Routing::Detour(d) },
            if convex { Placement::Convex } else { Placement::Random },
            seed,
        )
    })
}

fn small_graph() -> impl Strategy<Value = StringGraph> {
    (1usize..11).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..(n * 2)).prop_map(move |edges| {
            StringGraph::from_edges((0..n).map(|i| i * 3 + 1).collect(), &edges.iter().map(|&(a, b)| (a * 3 + 1, b * 3 + 1)).collect::<Vec<_>>())
                .unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ingested_drawings_validate_and_faces_partition_darts(p in params()) {
        let g = gen_random(&p).unwrap();
        let d = ingest(&g).unwrap();
        prop_assert!(validate_drawing(&d).ok);
        let faces = trace_faces(&d).unwrap();
        let darts: usize = faces.iter().map(Vec::len).sum();
        let segments = d.edge_count() + 2 * d.crossing_count();
        prop_assert_eq!(darts, 2 * segments);
        let mut seen = std::collections::HashSet::new();
        for dart in faces.iter().flatten() {
            prop_assert!(seen.insert((dart.edge, dart.segment, dart.forward)));
        }
    }

    #[test]
    fn ingestion_matches_segment_oracle(p in params()) {
        let g = gen_random(&p).unwrap();
        let d = ingest(&g).unwrap();
        let oracle = common::segment_crossings(&g);
        prop_assert_eq!(d.crossing_count(), oracle.values().sum::<usize>());
        for (&(e, f), &count) in &oracle {
            prop_assert_eq!(d.multiplicity(e, f), count);
        }
    }

    #[test]
    fn files_round_trip(p in params()) {
        let g = gen_random(&p).unwrap();
        let text = to_gdraw(&g);
        prop_assert_eq!(&to_gdraw(&parse_gdraw(&text).unwrap()), &text);
        let d = ingest(&g).unwrap();
        let text = to_cdraw(&d);
        let back = parse_cdraw(&text).unwrap();
        prop_assert_eq!(&to_cdraw(&back), &text);
        prop_assert_eq!(back, d);
    }

    #[test]
    fn classification_partitions_and_counts_agree(p in params()) {
        let d = ingest(&gen_random(&p).unwrap()).unwrap();
        let all = EdgeSet::all(d.edge_count());
        let (empty, crossing) = classify_edges(&d, &all).unwrap();
        prop_assert_eq!(empty.len() + crossing.len(), d.edge_count());
        prop_assert!(empty.iter().all(|e| !crossing.contains(e)));
        let s = stats(&d, &all).unwrap();
        let (l, k) = (s.paired_edges, s.crossing_pairs);
        if l > 0 {
            prop_assert!(l <= 2 * k && 2 * k <= l * (l - 1));
        }
    }

    #[test]
    fn normalize_descends_and_simplifies(p in params(), reds in proptest::collection::vec(any::<bool>(), 40)) {
        let d = ingest(&gen_random(&p).unwrap()).unwrap();
        let m = d.edge_count();
        let all = EdgeSet::all(m);
        let mut col = Coloring::uniform(m, &all, Color::Blue);
        for e in (0..m).filter(|&e| reds[e % reds.len()]) {
            col.set(e, Color::Red);
        }
        let out = normalize(&d, &col, &all).unwrap();
        let mut last = potential(&d, &col);
        for s in &out.steps {
            prop_assert_eq!(s.potential_before, last);
            prop_assert!(s.potential_after < s.potential_before);
            last = s.potential_after;
        }
        prop_assert!(stats(&out.drawing, &all).unwrap().is_simple());
        prop_assert!(validate_drawing(&out.drawing).ok);
    }

    #[test]
    fn separators_are_valid_and_exact_matches_oracle(h in small_graph(), seed in any::<u64>()) {
        let exact = exact_separator(&h, 14).unwrap();
        prop_assert!(verify_separator(&h, &exact).ok);
        let (f0, f1, f2) = common::separator(&h);
        prop_assert_eq!((&exact.f0, &exact.f1, &exact.f2), (&f0, &f1, &f2));
        let heur = heuristic_separator(&h, &HeuristicParams { restarts: 3, seed });
        prop_assert!(verify_separator(&h, &heur).ok);
        prop_assert!(heur.f0.len() >= exact.f0.len());
    }
}
