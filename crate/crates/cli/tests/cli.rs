use std::fs;
use std::process::{Command, Output};

fn bfm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bfm")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn point_prints_one_row() {
    let o = bfm(&[
        "point", "--mode", "effective-spinless", "-p", "v_f=1", "-p", "v_b=3", "-p", "K_b=5", "-p", "G=0.1",
        "-p", "g=0.6",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().next().unwrap().starts_with("t_b,t_f,"));
    assert!(text.contains(",f-PP,"));
}

#[test]
fn point_accepts_pi_multiples_and_json() {
    let o = bfm(&[
        "point", "--mode", "effective-spinful", "-p", "v_f=1", "-p", "v_b=5", "-p", "K_b=10", "-p", "G=0.1",
        "-p", "g=0.3", "-p", "U_updown=-0.8pi", "--format", "json",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.trim_start().starts_with('{'));
    assert!(text.contains("\"g1perp\""));
}

#[test]
fn missing_parameter_is_a_config_error() {
    let o = bfm(&["point", "--mode", "effective-spinless", "-p", "v_f=1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing parameter"));
}

#[test]
fn unknown_preset_is_a_config_error() {
    assert_eq!(bfm(&["sweep", "--preset", "fig9"]).status.code(), Some(1));
}

#[test]
fn strict_turns_point_failures_into_exit_two() {
    let args = [
        "point", "--mode", "effective-spinless", "-p", "v_f=1", "-p", "v_b=-3", "-p", "K_b=5", "-p", "G=0.1",
        "-p", "g=0.6",
    ];
    let lenient = bfm(&args);
    assert_eq!(lenient.status.code(), Some(0));
    assert!(stdout(&lenient).contains(",error,"));
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(bfm(&strict).status.code(), Some(2));
}

#[test]
fn config_file_with_cli_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.cfg");
    fs::write(
        &cfg,
        "# coarse fig2a scan\npreset = fig2a\naxis1 = g:0:1:5\nK_b = 5\n",
    )
    .unwrap();
    let out = dir.path().join("scan.json");
    let o = bfm(&[
        "sweep", "--config", cfg.to_str().unwrap(), "--axis1", "g:0:1:3", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"rows\""));
    assert_eq!(text.matches("\"alpha_CDW\"").count(), 4); // header list + 3 rows
    assert!(dir.path().join("scan.curves.csv").exists());
}

#[test]
fn sequential_and_parallel_outputs_match() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let path = dir.path().join(name);
        let mut args = vec!["sweep", "--preset", "fig2b", "--axis1", "g:0:1.5:9", "--axis2", "G:0:0.45:9"];
        let p = path.to_str().unwrap().to_string();
        args.extend(["--out", &p]);
        args.extend(extra);
        assert!(bfm(&args).status.success());
        fs::read(path).unwrap()
    };
    assert_eq!(run("a.csv", &[]), run("b.csv", &["--sequential"]));
}

#[test]
fn dumps_band_and_wannier() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = bfm(&[
        "point", "--mode", "microscopic", "-p", "s_b_par=4", "-p", "s_b_perp=20", "-p", "s_f_par=2", "-p",
        "s_f_perp=20", "-p", "a_bb=0.01", "-p", "a_bf=0.02", "-p", "nu_b=4", "-p", "nu_f=0.5", "--dump-band", d,
        "--dump-wannier", d,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["band_boson.csv", "band_fermion.csv", "wannier_boson.csv", "wannier_fermion.csv"] {
        let text = fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(text.lines().count() > 10, "{f}");
    }
}
