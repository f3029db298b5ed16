use std::collections::BTreeSet;

use ballistic_core::interference::local_maxima;
use ballistic_core::scenario::output::{
    read_field_csv, render_pgm, write_field_csv, write_trajectories_csv,
};
use ballistic_core::scenario::{
    parse_config, parse_config_with_overrides, run_scenario, write_bundle, Format, OutputKind,
};
use ballistic_core::trajectories::TrajectorySet;
use ballistic_core::{Grid, ScalarField};

fn pixels(pgm: &[u8]) -> &[u8] {
    let mut seen = 0;
    let end = pgm
        .iter()
        .position(|&b| {
            seen += (b == b'\n') as usize;
            seen == 4
        })
        .unwrap();
    &pgm[end + 1..]
}

#[test]
fn three_by_three_csv_has_ten_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let grid = Grid::new(0.0, 1.0, 3, 1.0, 2).unwrap();
    write_field_csv(&ScalarField::from_fn(grid, |x, t| x + t), &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert_eq!(text.lines().next(), Some("t,x,value"));
    assert!(text.ends_with('\n') && !text.contains('\r'));
    assert_eq!(read_field_csv(&path).unwrap().len(), 9);
}

#[test]
fn empty_trajectory_set_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let empty = TrajectorySet {
        seeds: vec![],
        times: vec![0.0, 1.0],
        positions: vec![],
        truncated: vec![],
    };
    write_trajectories_csv(&empty, &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "seed_id,t,x\n");
}

#[test]
fn pgm_constant_and_single_peak() {
    let grid = Grid::new(0.0, 1.0, 4, 1.0, 3).unwrap();
    let constant = render_pgm(&ScalarField::from_fn(grid, |_, _| 0.7), 1.0, "c");
    assert!(pixels(&constant).iter().all(|&p| p == 255));
    let peak = render_pgm(
        &ScalarField::from_fn(grid, |x, t| {
            if x == 1.0 / 3.0 && t == 1.0 / 3.0 {
                2.0
            } else {
                1.0
            }
        }),
        1.0,
        "p",
    );
    assert_eq!(pixels(&peak).iter().filter(|&&p| p == 255).count(), 1);
}

#[test]
fn fig3a_pgm_size() {
    let s = parse_config_with_overrides("fig3a", &["output.fields=density".into()]).unwrap();
    let b = run_scenario(&s).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let written = write_bundle(&b, dir.path(), &[Format::Pgm]).unwrap();
    assert_eq!(written.len(), 1);
    let bytes = std::fs::read(&written[0]).unwrap();
    assert_eq!(pixels(&bytes).len(), 801 * 401);
    let header = String::from_utf8_lossy(&bytes[..bytes.len() - 801 * 401]);
    assert!(header.starts_with("P5\n# fig3a density max="));
    assert!(header.ends_with("801 401\n255\n"));
}

#[test]
fn fig3a_is_mirrored_with_zero_drift() {
    let s = parse_config("fig3a").unwrap();
    assert_eq!(s.sources[0].center(), -s.sources[1].center());
    assert_eq!(s.sources[0].drift(), 0.0);
    assert_eq!(s.sources[1].drift(), 0.0);
    assert_eq!(s.sources[0].sigma0(), s.sources[1].sigma0());
}

#[test]
fn fig3b_fringes_are_asymmetric() {
    let s = parse_config_with_overrides("fig3b", &["output.fields=density".into()]).unwrap();
    assert_eq!(s.sources[0].sigma0(), 2.0 * s.sources[1].sigma0());
    let b = run_scenario(&s).unwrap();
    let d = b.field("density").unwrap();
    let dx = b.grid.dx();
    for n in [200, 300, 400] {
        let maxima: Vec<f64> = local_maxima(d.row(n))
            .iter()
            .map(|&i| b.grid.x(i))
            .collect();
        let worst = maxima
            .iter()
            .map(|x| {
                maxima
                    .iter()
                    .map(|y| (x + y).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        assert!(
            worst > 1.5 * dx,
            "t = {}: fringes mirror within {worst}",
            b.grid.t(n)
        );
    }
}

#[test]
fn fig4_center_is_a_minimum_after_the_shift() {
    let s = parse_config_with_overrides("fig4", &["output.fields=density".into()]).unwrap();
    let t2 = s.shifter.unwrap().t2();
    let b = run_scenario(&s).unwrap();
    let d = b.field("density").unwrap();
    let c = b.grid.nearest_index(0.0);
    assert_eq!(b.grid.x(c), 0.0);
    let mut checked = 0;
    for n in 0..b.grid.rows() {
        if b.grid.t(n) <= t2 {
            continue;
        }
        let row = d.row(n);
        assert!(
            row[c] <= row[c - 1] && row[c] <= row[c + 1],
            "t = {}",
            b.grid.t(n)
        );
        assert!(row[c] < 1e-12 * d.max());
        checked += 1;
    }
    assert!(checked > 200);
}

#[test]
fn fig5_matches_fig4_after_both_shifts() {
    let only = |name: &str| {
        let s =
            parse_config_with_overrides(name, &["output.fields=density,entangling_current".into()])
                .unwrap();
        (s.shifter.unwrap().t2(), run_scenario(&s).unwrap())
    };
    let (t2_4, fig4) = only("fig4");
    let (t2_5, fig5) = only("fig5");
    let t2 = t2_4.max(t2_5);
    for name in ["density", "entangling_current"] {
        let (a, b) = (fig4.field(name).unwrap(), fig5.field(name).unwrap());
        for n in (0..fig4.grid.rows()).filter(|&n| fig4.grid.t(n) > t2) {
            for (x, y) in a.row(n).iter().zip(b.row(n)) {
                assert!((x - y).abs() <= 1e-12, "{name} row {n}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn bundle_writes_are_byte_identical() {
    let s = parse_config_with_overrides(
        "fig4",
        &[
            "grid.nx=101".into(),
            "grid.nt=50".into(),
            "output.sign_maps=true".into(),
        ],
    )
    .unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let fa = write_bundle(
        &run_scenario(&s).unwrap(),
        a.path(),
        &[Format::Csv, Format::Pgm],
    )
    .unwrap();
    let fb = write_bundle(
        &run_scenario(&s).unwrap(),
        b.path(),
        &[Format::Csv, Format::Pgm],
    )
    .unwrap();
    assert_eq!(fa.len(), fb.len());
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(x.file_name(), y.file_name());
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
    }
    let names: BTreeSet<String> = fa
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into())
        .collect();
    assert!(names.contains("entangling_current_sign.pgm"));
    assert!(names.contains("trajectories.csv"));
}

#[test]
fn solver_outputs_are_written() {
    let s = parse_config_with_overrides(
        "fig1",
        &[
            "grid.x_min=-10".into(),
            "grid.x_max=10".into(),
            "grid.nx=101".into(),
            "grid.t_max=2".into(),
            "grid.nt=auto".into(),
            "solver.mode=closed_form".into(),
            "output.fields=density,diffusivity,norm_trace".into(),
        ],
    )
    .unwrap();
    assert!(s.outputs.contains(&OutputKind::NormTrace));
    let b = run_scenario(&s).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let written = write_bundle(&b, dir.path(), &[Format::Csv]).unwrap();
    let names: Vec<String> = written
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into())
        .collect();
    assert_eq!(names, ["density.csv", "diffusivity.csv", "norm_trace.csv"]);
    let trace = std::fs::read_to_string(dir.path().join("norm_trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), s.grid.rows() + 1);
}

#[test]
fn unwritable_path_names_the_path() {
    let grid = Grid::new(0.0, 1.0, 3, 1.0, 2).unwrap();
    let err = write_field_csv(
        &ScalarField::zeros(grid),
        std::path::Path::new("/nonexistent/dir/f.csv"),
    )
    .unwrap_err();
    assert!(err.to_string().contains("/nonexistent/dir/f.csv"));
}
