use std::fs;

use bfm_core::sweeps::config::{Format, OutputSpec};
use bfm_core::sweeps::{figure_preset, run_grid_with, run_point, run_sweep, Execution, SweepConfig};
use bfm_core::Error;

fn small(name: &str, n1: usize, n2: usize) -> SweepConfig {
    let mut c = figure_preset(name).unwrap();
    c.axis1.count = n1;
    if let Some(a) = c.axis2.as_mut() {
        a.count = n2;
    }
    c
}

#[test]
fn reruns_are_byte_identical_across_schedules() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, exec) in [Execution::Sequential, Execution::Parallel, Execution::Parallel].into_iter().enumerate() {
        let mut c = small("fig3b", 13, 11);
        let path = dir.path().join(format!("run{i}.csv"));
        c.output = Some(OutputSpec { path: path.clone(), format: Format::Csv });
        run_sweep(&c, exec).unwrap();
        outputs.push(fs::read(path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
}

#[test]
fn microscopic_grid_matches_single_points() {
    let c = small("fig1", 4, 3);
    let grid = run_grid_with(&c, Execution::default()).unwrap();
    for row in &grid.rows {
        let mut p = c.fixed.clone();
        p.extend(row.axes.iter().cloned());
        let single = run_point(c.mode, &p);
        assert_eq!(single.values, row.values);
        assert_eq!(single.phase, row.phase);
        assert_eq!(single.warnings, row.warnings);
    }
}

#[test]
fn csv_and_json_carry_equal_values() {
    let grid = run_grid_with(&small("fig2b", 9, 7), Execution::default()).unwrap();
    let csv_text = grid.render(Format::Csv);
    let json: serde_json::Value = serde_json::from_str(&grid.render(Format::Json)).unwrap();
    let rows = json["rows"].as_array().unwrap();

    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let header = reader.headers().unwrap().clone();
    assert_eq!(header.iter().collect::<Vec<_>>(), grid.columns());
    let mut count = 0;
    for (record, json_row) in reader.records().zip(rows) {
        let record = record.unwrap();
        for (name, field) in header.iter().zip(record.iter()) {
            let j = &json_row[name];
            match field.parse::<f64>() {
                // serde_json's default float parser is not correctly rounded,
                // so compare to the 12 written digits.
                Ok(x) => {
                    let y = j.as_f64().unwrap();
                    assert!((x - y).abs() <= 1e-12 * x.abs(), "{name}: {x} vs {y}");
                }
                Err(_) if field.is_empty() => assert!(j.is_null(), "{name}"),
                Err(_) => assert_eq!(Some(field), j.as_str(), "{name}"),
            }
        }
        count += 1;
    }
    assert_eq!(count, 63);
}

#[test]
fn header_has_documented_column_order() {
    let grid = run_grid_with(&small("fig2a", 3, 0), Execution::default()).unwrap();
    let expected = "g,t_b,t_f,U_b,U_bf,U_updown,k_f,v_f,gamma,v_b,K_b,g,G,v_a,v_A,K_beta,inv_K_gamma,\
                    inv_K_eps,inv_K_gammaeps,lambda_c,eta_c,alpha_CDW,alpha_fPP,alpha_BFP,alpha_bP,alpha_BB,\
                    stability,phase,regime,warnings,message";
    assert_eq!(grid.columns().join(","), expected);
    let spinful = run_grid_with(&small("fig3a", 3, 2), Execution::default()).unwrap();
    assert!(spinful.columns().join(",").contains("alpha_SDW,alpha_CDW,alpha_WC,alpha_SPP,alpha_TPP,g1perp,K_sigma"));
}

#[test]
fn global_diagram_shape() {
    let grid = run_grid_with(&figure_preset("fig2b").unwrap(), Execution::default()).unwrap();
    let phase_at = |g: f64, big_g: f64| {
        grid.rows
            .iter()
            .find(|r| (r.axes[0].1 - g).abs() < 1e-9 && (r.axes[1].1 - big_g).abs() < 1e-9)
            .map(|r| r.phase.as_str())
            .unwrap()
    };
    // Induced attraction favors density order, boson coupling favors pairing.
    assert_eq!(phase_at(0.0, 0.15), "CDW");
    assert_eq!(phase_at(0.6, 0.0), "f-PP");
    assert_eq!(phase_at(1.5, 0.0), "PS");
    assert!(grid.rows.iter().all(|r| !r.is_error()));
}

#[test]
fn emit_curves_writes_companion_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small("fig2a", 11, 0);
    c.output = Some(OutputSpec { path: dir.path().join("fig2a.csv"), format: Format::Csv });
    run_sweep(&c, Execution::default()).unwrap();
    let curves = fs::read_to_string(dir.path().join("fig2a.curves.csv")).unwrap();
    assert_eq!(curves.lines().next().unwrap(), "g,alpha_CDW,alpha_fPP,alpha_BFP,alpha_bP,alpha_BB,phase");
    assert_eq!(curves.lines().count(), 12);
}

#[test]
fn unwritable_output_fails_before_computing() {
    let mut c = small("fig2a", 3, 0);
    c.output = Some(OutputSpec { path: "/nonexistent-dir/x.csv".into(), format: Format::Csv });
    match run_sweep(&c, Execution::default()) {
        Err(Error::Io { path, .. }) => assert_eq!(path.to_str(), Some("/nonexistent-dir/x.csv")),
        other => panic!("expected an I/O error, got {other:?}"),
    }
}
