use cactus_star::cactus::{block_decompose, is_cactus};
use cactus_star::constructions::{gen_cycle, gen_figure5, gen_semiregular_tree, gen_tight_odd, gen_ucc};
use cactus_star::exact::{has_star_k_coloring, Budget, Decision};
use cactus_star::io::{graph_to_json, parse_coloring, parse_graph};
use cactus_star::verify::verify_star_coloring;

const FIGURE5: &str = include_str!("fixtures/figure5.json");
const FIGURE5_NINE: &str = include_str!("fixtures/figure5_nine_colors.json");

#[test]
fn figure5_fixture_matches_generator() {
    let g = parse_graph(FIGURE5).unwrap();
    assert_eq!(g, gen_figure5());
    assert_eq!((g.vertex_count(), g.edge_count(), g.max_degree()), (88, 89, 6));
    assert!(is_cactus(&g).unwrap());
}

#[test]
fn figure5_has_a_nine_coloring() {
    let g = gen_figure5();
    let c = parse_coloring(FIGURE5_NINE).unwrap();
    let r = verify_star_coloring(&g, &c).unwrap();
    assert!(r.valid, "{:?}", r.violation);
    assert_eq!(r.colors_used, 9);
    assert_eq!(r.colored_edges, 89);
}

#[test]
fn generators_round_trip_through_json() {
    let graphs = [
        gen_cycle(7).unwrap(),
        gen_semiregular_tree(4, 3).unwrap(),
        gen_tight_odd(5).unwrap(),
        gen_ucc(5, 6).unwrap(),
        gen_figure5(),
    ];
    for g in graphs {
        assert_eq!(parse_graph(&graph_to_json(&g)).unwrap(), g);
    }
}

#[test]
fn tight_odd_three_shape() {
    let g = gen_tight_odd(3).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count(), g.max_degree()), (16, 16, 3));
    let bd = block_decompose(&g).unwrap();
    assert_eq!(bd.cycle_count(), 1);
    assert_eq!(bd.blocks.iter().map(|b| b.edges.len()).max(), Some(3));
    assert_eq!(has_star_k_coloring(&g, 4, &Budget::unlimited()).unwrap(), Decision::No);
    assert!(matches!(has_star_k_coloring(&g, 5, &Budget::unlimited()).unwrap(), Decision::Yes(_)));
}

#[test]
fn semiregular_tree_counts() {
    // 1 + 4 + 4*3 + 4*3*3 vertices
    let g = gen_semiregular_tree(4, 3).unwrap();
    assert_eq!(g.vertex_count(), 53);
    assert_eq!(g.edge_count(), 52);
    assert!(g.is_delta_semiregular(4).unwrap());
}
