use proptest::prelude::*;

use octabill::billiards::{between_necklaces, Table};
use octabill::geom::ConvexPolygon;
use octabill::graph::project_vector;
use octabill::octagon::{strip_value, OctagonDynamics, Periodicity};
use octabill::{Point2, QuadVal};

fn dynamics() -> &'static OctagonDynamics {
    static D: std::sync::OnceLock<OctagonDynamics> = std::sync::OnceLock::new();
    D.get_or_init(|| OctagonDynamics::new().unwrap())
}

fn rat() -> impl Strategy<Value = QuadVal> {
    (1i64..997).prop_map(|n| QuadVal::ratio(n, 997))
}

/// Interior point of a convex polygon from three positive weights.
fn inside(poly: &ConvexPolygon, a: &QuadVal, b: &QuadVal) -> Point2 {
    let c = poly.centroid();
    let v = &poly.vertices;
    let i = (a.to_f64() * v.len() as f64) as usize % v.len();
    let j = (i + 1) % v.len();
    // Convex combination of the centroid and an edge point, kept off the boundary.
    let e = &v[i] + &(&v[j] - &v[i]).scale(b);
    &c + &(&e - &c).scale(&(a * &QuadVal::ratio(9, 10)))
}

#[test]
fn far_steps_are_drifts() {
    let t = Table::octagon();
    let d = dynamics();
    let drifts: Vec<Point2> = d.sys.triples.iter().flat_map(|s| [s.v.clone(), -&s.v]).collect();
    for k in 0..64 {
        let p = Point2::new(QuadVal::ratio(400 * (k % 8) - 1400, 7), QuadVal::ratio(300 * (k / 8) - 1100, 11));
        let (q, ..) = t.phi2(&p).unwrap();
        assert!(drifts.contains(&(&q - &p)), "p = {p}");
    }
}

#[test]
fn images_tile_r() {
    let d = dynamics();
    let cells = d.derive_partition_of_r().unwrap();
    let images: Vec<ConvexPolygon> = cells
        .iter()
        .map(|c| {
            let shift = if c.parity == 1 { &c.translation + &octabill::octagon::sigma() } else { c.translation.clone() };
            c.polygon.translate(&shift)
        })
        .collect();
    let total = images.iter().fold(QuadVal::zero(), |a, c| a + c.area());
    assert_eq!(total, d.atlas.area());
    for i in 0..images.len() {
        assert!(d.atlas.region_of(&images[i].centroid()).is_some());
        for j in i + 1..images.len() {
            assert!(!images[i].interiors_meet(&images[j]));
        }
    }
}

#[test]
fn specially_related_lifts_cancel() {
    let d = dynamics();
    let zeta = Point2::new(QuadVal::ints(2, 2), QuadVal::one());
    for c in d.derive_partition_of_r().unwrap() {
        let y = c.polygon.centroid();
        let z = &zeta.scale(&QuadVal::int(2)) - &y;
        let (_, _, a) = d.phi(&y).unwrap();
        let (_, _, b) = d.phi(&z).unwrap();
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        assert_eq!(sum, vec![0; 8], "cell at {y}");
    }
}

#[test]
fn lifted_drifts_project_to_even_lattice() {
    let d = dynamics();
    for k in 0..16 {
        let p = project_vector(&d.sys.lift_vector(k), 2).unwrap();
        for c in [&p.x, &p.y] {
            assert!(c.is_integer());
            assert!((c.to_f64() as i64) % 2 == 0);
        }
    }
}

#[test]
fn deep_tiles_match_brute_force() {
    let d = dynamics();
    let mut p = d.atlas.cells[11].centroid();
    for k in 0..=6u32 {
        let per = 3u64.pow(k);
        match d.classify_periodic(&p, 10).unwrap() {
            Periodicity::Periodic { period, .. } => assert_eq!(period, per),
            Periodicity::Unresolved => panic!("level {k} unresolved"),
        }
        assert_eq!(d.psi_period(&p, per as usize + 1).unwrap(), Some(per as usize));
        p = d.theta_inv.apply(&p);
    }
}

#[test]
fn parity_sums_even_in_every_region() {
    let rows = dynamics().parity_table().unwrap();
    assert_eq!(rows.len(), 22);
    assert!(rows.iter().all(|r| r.consistent()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn renormalization_on_s(cell in 0usize..22, a in rat(), b in rat()) {
        let d = dynamics();
        let s = &d.s_region()[cell];
        let p = inside(s, &a, &b);
        let lhs = d.theta_inv.apply(&d.psi(&d.theta.apply(&p)).unwrap());
        let rhs = d.psi(&d.psi(&d.psi(&p).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn half_strips_are_invariant(k in 1i64..4, dx in 0i64..400, v in 1i64..399) {
        let d = dynamics();
        let s = QuadVal::silver();
        // x > k·s inside the strip -3 < val < 1.
        let x = &(&s * &QuadVal::int(k)) + &QuadVal::ratio(dx + 1, 20);
        let val = &QuadVal::int(-3) + &QuadVal::ratio(v, 100);
        let y = &val + &(&(&QuadVal::sqrt2() - &QuadVal::one()) * &x);
        let p = Point2::new(x, y);
        prop_assert_eq!(strip_value(&p), val);
        if let Ok((q, ..)) = d.phi(&p) {
            prop_assert!(q.x > &s * &QuadVal::int(k));
        }
    }

    #[test]
    fn buffers_between_necklaces(a in rat(), b in rat(), k in 1usize..3) {
        let t = Table::octagon();
        let base = Point2::new(QuadVal::silver(), QuadVal::one());
        let r = &QuadVal::int(k as i64) + &(&a * &QuadVal::ratio(1, 1));
        let mut p = base.scale(&r).rot45((b.to_f64() * 8.0) as i64);
        prop_assume!(between_necklaces(&p, k));
        for _ in 0..50 {
            match t.ob_map(&p) {
                Ok((q, _)) => p = q,
                Err(_) => return Ok(()),
            }
            prop_assert!(between_necklaces(&p, k));
        }
    }
}
