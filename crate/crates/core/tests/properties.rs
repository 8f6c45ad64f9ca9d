use std::f64::consts::SQRT_2;
use std::sync::OnceLock;

use proptest::prelude::*;

use pillowfold::deformation::{upper_ruling_for, ScheduleFn, ScheduleShape};
use pillowfold::io::{fmt_sig9, read_obj, write_obj};
use pillowfold::kernel::measured_metric;
use pillowfold::verify::Grid;
use pillowfold::{
    assemble_box, deformed_quarter, double_rectangle_mesh, enclosed_volume, horizontal_end_depth,
    quarter_parametrization, validate_fundamental_data, FundamentalData, QuarterMap, Schedule, StripSide, Tolerances,
    TriMesh, Vec3,
};

fn example() -> &'static FundamentalData {
    static DATA: OnceLock<FundamentalData> = OnceLock::new();
    DATA.get_or_init(FundamentalData::example)
}

fn box_mesh() -> &'static (TriMesh, f64) {
    static MESH: OnceLock<(TriMesh, f64)> = OnceLock::new();
    MESH.get_or_init(|| {
        let q = quarter_parametrization(example()).unwrap();
        let m = assemble_box(&q, 16, 8, &Tolerances::default()).unwrap();
        let v = enclosed_volume(&m).unwrap();
        (m, v)
    })
}

fn zeta(s: f64) -> f64 {
    SQRT_2 - ((s - 1.0).powi(2) + 1.0).sqrt()
}

fn zeta_prime(s: f64) -> f64 {
    -(s - 1.0) / ((s - 1.0).powi(2) + 1.0).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn validation_is_monotone_in_b(b1 in 0.05f64..3.0, db in 0.0f64..2.0) {
        let tol = Tolerances::default();
        let z = example().zeta();
        let lo = validate_fundamental_data(b1, z, 128, &tol).unwrap().pass;
        let hi = validate_fundamental_data(b1 + db, z, 128, &tol).unwrap().pass;
        prop_assert!(!lo || hi);
        prop_assert_eq!(lo, b1 > SQRT_2 - 1.0);
    }

    #[test]
    fn volume_is_translation_invariant(dx in -10.0f64..10.0, dy in -10.0f64..10.0, dz in -10.0f64..10.0) {
        let (mesh, v) = box_mesh();
        let moved = enclosed_volume(&mesh.translated(Vec3::new(dx, dy, dz))).unwrap();
        prop_assert!(((moved - v) / v).abs() < 1e-12, "{} vs {}", moved, v);
    }

    #[test]
    fn upper_ruling_is_unit(lambda in -5.0f64..5.0) {
        prop_assert!((upper_ruling_for(lambda).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crease_lies_on_its_plane(t in 0.0f64..=1.0, s in 0.0f64..=2.0) {
        let q = deformed_quarter(example(), &Schedule::linear(), t).unwrap();
        let c = q.crease_point(s);
        prop_assert!((c.y - zeta(s)).abs() < 1e-9);
        prop_assert!((c.z - (1.0 - t) * c.y).abs() < 1e-9);
        prop_assert!((q.vertical_end(s).y - 1.0).abs() < 1e-9);
    }

    #[test]
    fn stages_are_isometric(t in 0.0f64..=1.0, s in 0.01f64..1.99, w in 0.02f64..0.98, upper in any::<bool>()) {
        let q = deformed_quarter(example(), &Schedule::linear(), t).unwrap();
        let (side, v) = if upper { (StripSide::Upper, w * zeta(s)) } else { (StripSide::Lower, (w - 1.0) * (1.0 - zeta(s))) };
        let m = measured_metric(&q.strip(side), s, v, 1e-5);
        prop_assert!((m.e - 1.0).abs() < 1e-6 && (m.f + zeta_prime(s)).abs() < 1e-6 && (m.g - 1.0).abs() < 1e-6, "{:?}", m);
    }

    #[test]
    fn depth_follows_the_closed_form(lambda in 0.0f64..=1.0) {
        let d = horizontal_end_depth(example(), lambda).unwrap().depth;
        let expected = -lambda * (1.0 - lambda * lambda) / (1.0 + lambda * lambda) * (SQRT_2 - 1.0);
        prop_assert!((d - expected).abs() < 1e-8);
        prop_assert!(d <= 0.0);
    }

    #[test]
    fn table_schedule_stays_within_its_values(
        values in prop::collection::vec(-2.0f64..2.0, 2..8),
        t in -0.5f64..1.5,
    ) {
        let n = values.len();
        let ts: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let f = ScheduleFn::Shape(ScheduleShape::Table { t: ts.clone(), values: values.clone() });
        let v = f.eval(t);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo <= v && v <= hi);
        for (ti, vi) in ts.iter().zip(&values) {
            prop_assert_eq!(f.eval(*ti), *vi);
        }
    }

    #[test]
    fn monotone_tables_give_monotone_schedules(
        mut values in prop::collection::vec(0.0f64..1.0, 2..8),
        a in 0.0f64..=1.0,
        b in 0.0f64..=1.0,
    ) {
        values.sort_by(|x, y| y.total_cmp(x));
        let n = values.len();
        let ts: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let f = ScheduleFn::Shape(ScheduleShape::Table { t: ts, values });
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(f.eval(lo) >= f.eval(hi));
    }

    #[test]
    fn obj_round_trip_is_idempotent(coords in prop::collection::vec(-1e6f64..1e6, 9..60)) {
        let n = coords.len() / 3;
        let vertices: Vec<Vec3> = (0..n).map(|i| Vec3::new(coords[3 * i], coords[3 * i + 1], coords[3 * i + 2])).collect();
        let triangles: Vec<[usize; 3]> = (0..n - 2).map(|i| [i, i + 1, i + 2]).collect();
        let mesh = TriMesh::new(vertices, triangles).unwrap();
        let mut first = Vec::new();
        write_obj(&mesh, &mut first).unwrap();
        let back = read_obj(first.as_slice()).unwrap();
        let mut second = Vec::new();
        write_obj(&back, &mut second).unwrap();
        prop_assert_eq!(first, second);
        prop_assert_eq!(back.triangles, mesh.triangles);
    }

    #[test]
    fn sig9_is_within_half_an_ulp_of_nine_digits(x in prop::num::f64::NORMAL) {
        let y: f64 = fmt_sig9(x).parse().unwrap();
        prop_assert!(((y - x) / x).abs() <= 5.000001e-9);
    }

    #[test]
    fn grid_round_trips(n_s in 1usize..4096, n_v in 1usize..4096) {
        let g = Grid::new(n_s, n_v);
        prop_assert_eq!(g.to_string().parse::<Grid>().unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn double_rectangle_counts(n in 2usize..24) {
        let m = double_rectangle_mesh(example(), n).unwrap();
        prop_assert_eq!(m.used_vertex_count(), 2 * (n + 1) * (n + 1) - 4 * n);
        prop_assert_eq!(m.euler_characteristic(), 2);
        prop_assert!(m.is_closed());
    }
}
