use std::fs::{self, File};
use std::io::BufReader;
use std::path::PathBuf;

use num_rational::BigRational;

use hardcore::graph6::{read_corpus, CorpusEntry};
use hardcore::indpoly::{brute_force_counts, ratio_of, Fugacity};
use hardcore::scan::{scan_ratio, verify_bounds, Filters, ScanConfig};
use hardcore::{from_graph6, independence_polynomial, to_graph6, Graph};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn corpus(name: &str) -> Vec<CorpusEntry> {
    read_corpus(BufReader::new(File::open(data(name)).unwrap()))
        .map(|(_, e)| e.unwrap())
        .collect()
}

#[test]
fn graph6_matches_reference_encoder() {
    let text = fs::read_to_string(data("graph6_reference.tsv")).unwrap();
    let mut seen = 0;
    for line in text.lines() {
        let mut cols = line.split('\t');
        let code = cols.next().unwrap();
        let n: usize = cols.next().unwrap().parse().unwrap();
        let edges: Vec<(usize, usize)> = cols
            .next()
            .unwrap_or("")
            .split_whitespace()
            .map(|e| {
                let (u, v) = e.split_once('-').unwrap();
                (u.parse().unwrap(), v.parse().unwrap())
            })
            .collect();
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        assert_eq!(to_graph6(&g), code);
        assert_eq!(from_graph6(code).unwrap(), g);
        seen += 1;
    }
    assert_eq!(seen, 300);
}

#[test]
fn corpus_counts_by_order() {
    let all = corpus("graphs_n1-8.g6");
    let mut counts = [0usize; 9];
    for e in &all {
        counts[e.graph.n()] += 1;
    }
    assert_eq!(counts[1..], [1, 2, 4, 11, 34, 156, 1044, 12346]);
    let tf = corpus("triangle_free_n1-8.g6");
    assert_eq!(tf.len(), all.iter().filter(|e| e.graph.is_triangle_free()).count());
    assert!(tf.iter().all(|e| e.graph.is_triangle_free()));
    let random = corpus("random_n9-20.g6");
    assert_eq!(random.len(), 500);
    assert!(random.iter().all(|e| (9..=20).contains(&e.graph.n())));
}

#[test]
fn named_graphs() {
    let named = corpus("named_n1-10.g6");
    let find = |label: &str| named.iter().find(|e| e.label.as_deref() == Some(label)).unwrap();
    assert_eq!(find("C6").graph, Graph::cycle(6));
    assert_eq!(find("K33").graph, Graph::complete_bipartite(3, 3));
    let petersen = &find("petersen").graph;
    assert_eq!((petersen.n(), petersen.edge_count(), petersen.girth()), (10, 15, Some(5)));
    assert_eq!(independence_polynomial(petersen).unwrap().alpha(), 4);
}

#[test]
fn triangle_free_ratio_scan_up_to_seven() {
    let text: String = corpus("triangle_free_n1-8.g6")
        .into_iter()
        .filter(|e| e.graph.n() <= 7)
        .map(|e| e.graph6 + "\n")
        .collect();
    let cfg = ScanConfig {
        filters: Filters {
            triangle_free: true,
            ..Default::default()
        },
        top_k: 5,
        ..Default::default()
    };
    let out = scan_ratio(text.as_bytes(), &cfg).unwrap();
    let min = &out.records[0];
    assert!(min.ratio >= BigRational::new(4.into(), 3.into()));
    assert!(out.records.windows(2).all(|w| (&w[0].ratio, &w[0].graph6) <= (&w[1].ratio, &w[1].graph6)));
    assert!(out.records.iter().all(|r| from_graph6(&r.graph6).unwrap().is_triangle_free()));
    let oracle = text
        .lines()
        .map(|code| {
            let p = brute_force_counts(&from_graph6(code).unwrap()).unwrap();
            (ratio_of(&p, &BigRational::from_integer(1.into())).unwrap(), code.to_string())
        })
        .min()
        .unwrap();
    assert_eq!((min.ratio.clone(), min.graph6.clone()), oracle);
}

#[test]
fn exhaustive_verification_examples() {
    let lambdas = [Fugacity::ratio(1, 4), Fugacity::one(), Fugacity::ratio(4, 1)];
    let tf = Filters {
        triangle_free: true,
        ..Default::default()
    };
    let file = BufReader::new(File::open(data("triangle_free_n1-8.g6")).unwrap());
    let s = verify_bounds(file, &lambdas, &tf, &Default::default(), |_| {}).unwrap();
    assert_eq!(s.violations, 0);
    assert!(s.min_slack_thm14.unwrap() >= -1e-12, "{:?}", s.min_slack_thm14);
    // every graph whose occupancy meets the K_{d,d} value is a union of K_{d,d}
    for code in &s.kdd_equalities {
        let g = from_graph6(code).unwrap();
        assert!(hardcore::bounds::report::is_union_of_kdd(&g, g.max_degree()), "{code}");
    }

    let mut skipped_big = String::from("Bw\n");
    skipped_big.push_str(&to_graph6(&Graph::cycle(50)));
    skipped_big.push('\n');
    let s = verify_bounds(skipped_big.as_bytes(), &lambdas, &Filters::default(), &Default::default(), |_| {}).unwrap();
    assert_eq!((s.graphs, s.skipped.len(), s.skipped[0].line), (1, 1, 2));
}
