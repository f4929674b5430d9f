use proptest::prelude::*;

use octabill::fractal::{is_simple_closed, FractalFamily, Kind, ShapeList};
use octabill::geom::hausdorff;
use octabill::octagon::OctagonDynamics;
use octabill::subst::{build_curve, is_closed, lambda_curve, lambda_curve_f64, word_sum, SubstitutionTable, VectorAssignment};
use octabill::toy::ToySystem;
use octabill::Point2;

fn assignments() -> &'static [(VectorAssignment, VectorAssignment); 2] {
    static A: std::sync::OnceLock<[(VectorAssignment, VectorAssignment); 2]> = std::sync::OnceLock::new();
    A.get_or_init(|| {
        let d = OctagonDynamics::new().unwrap();
        [2, 3].map(|k| {
            let g = VectorAssignment::from_dynamics(&d, k).unwrap();
            let l = VectorAssignment::lambda(&g);
            (g, l)
        })
    })
}

#[test]
fn g_and_lambda_share_endpoints() {
    let table = SubstitutionTable::standard();
    for (g, l) in assignments() {
        for k in 1..=8 {
            let w = table.expand(&[0], k);
            assert_eq!(word_sum(&w, g).unwrap(), word_sum(&w, l).unwrap(), "{:?} at {k}", g.family);
        }
    }
}

#[test]
fn lambda_curves_close() {
    let table = SubstitutionTable::standard();
    for (g, l) in assignments() {
        for k in 1..=6 {
            let closed = is_closed(&build_curve(&table.expand(&[0], k), l).unwrap());
            assert_eq!(closed, g.family.index() == 3 || k % 2 == 1, "{:?} at {k}", l.family);
        }
    }
}

#[test]
fn float_lambda_curve_tracks_exact() {
    let table = SubstitutionTable::standard();
    for (_, l) in assignments() {
        for j in [1, 3, 5] {
            let exact = lambda_curve(&table, l, j).unwrap();
            let float = lambda_curve_f64(&table, l, j).unwrap();
            assert_eq!(exact.points.len(), float.len());
            for (p, q) in exact.points.iter().zip(&float) {
                let (x, y) = p.to_f64();
                assert!((x - q.0).abs() < 1e-9 && (y - q.1).abs() < 1e-9);
            }
        }
        assert!(lambda_curve_f64(&table, l, 2).is_err());
    }
}

#[test]
fn octagon_symbols_never_recur() {
    let table = SubstitutionTable::standard();
    for n in 0..44 {
        let w = table.expand(&[n], 4);
        assert!(w.iter().all(|&m| m % 11 != 0), "symbol {n}");
    }
}

#[test]
fn stage_vertices_persist() {
    for family in [FractalFamily::I3, FractalFamily::I2] {
        let mut prev = ShapeList::seed(family);
        for _ in 0..3 {
            let next = prev.subdivide();
            let have: std::collections::HashSet<Point2> = next.shapes.iter().flat_map(|s| s.vertices()).collect();
            for s in &prev.shapes {
                assert!(have.contains(&s.a), "{family:?} depth {}", prev.depth);
                assert!(have.contains(&s.b));
            }
            assert_eq!(next.shapes.len(), 5 * prev.shapes.len());
            prev = next;
        }
    }
}

#[test]
fn snowflake_outline_embedded() {
    for n in 0..=4 {
        assert!(is_simple_closed(&ShapeList::at_depth(FractalFamily::I3, n).outline()), "depth {n}");
    }
}

/// Trapezoid midpoints and parallelogram centres are different finite sets
/// but close in on each other.
#[test]
fn carpet_special_definitions_converge() {
    let mut list = ShapeList::seed(FractalFamily::I2);
    let (mut traps, mut paras) = (Vec::new(), Vec::new());
    let mut gaps = Vec::new();
    for _ in 0..4 {
        list = list.subdivide();
        for s in &list.shapes {
            let p = s.special();
            if s.kind == Kind::Parallelogram { paras.push(p) } else { traps.push(p) }
        }
        let t: Vec<_> = traps.iter().map(|p| p.to_f64()).collect();
        let q: Vec<_> = paras.iter().map(|p| p.to_f64()).collect();
        gaps.push(hausdorff(&t, &q));
    }
    assert!(traps.iter().any(|p| !paras.contains(p)));
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn carpet_multiplicities() {
    let mut list = ShapeList::seed(FractalFamily::I2);
    let mut got = vec![list.max_multiplicity()];
    for _ in 0..5 {
        list = list.subdivide();
        got.push(list.max_multiplicity());
    }
    assert_eq!(got, [2, 2, 4, 6, 8, 12]);
    assert_eq!(list.shapes.len(), 8 * 5usize.pow(5));
}

#[test]
fn toy_tiles_have_exact_periods() {
    let t = ToySystem::new().unwrap();
    for n in 0..=4 {
        let tiles = t.periodic_tiles(n).unwrap();
        assert_eq!(tiles.len(), 3usize.pow(n as u32));
        for (tile, per) in &tiles {
            assert_eq!(t.period(&tile.centroid(), 200).unwrap(), Some(*per as usize));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_is_a_homomorphism(w in prop::collection::vec(0usize..44, 0..6), v in prop::collection::vec(0usize..44, 0..6)) {
        let table = SubstitutionTable::standard();
        let mut wv = w.clone();
        wv.extend(&v);
        let mut lhs = table.expand(&w, 2);
        lhs.extend(table.expand(&v, 2));
        prop_assert_eq!(table.expand(&wv, 2), lhs);
    }

    #[test]
    fn expansion_composes(n in 0usize..44, a in 0usize..3, b in 0usize..3) {
        let table = SubstitutionTable::standard();
        prop_assert_eq!(table.expand(&table.expand(&[n], a), b), table.expand(&[n], a + b));
    }
}
