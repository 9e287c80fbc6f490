use std::path::Path;
use std::process::{Command, Output};

use yagi_antenna::{residual_conductivity_sweep, AntennaLayout, BeamConfig, Direction};
use yagi_cli::{plan, RunConfig};
use yagi_oracle::Oracle;

fn yagi(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_yagi"))
        .arg("--out")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) {
    let o = yagi(dir, args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, name)).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .map(|x| x.parse().unwrap_or(f64::NAN))
                .collect()
        })
        .collect()
}

#[test]
fn kubo_table_shape_and_values() {
    let d = tempfile::tempdir().unwrap();
    ok(
        d.path(),
        &["kubo", "--e-f", "0,0.25,0.5", "--freq", "1e12:2.3e12:4"],
    );
    let text = read(d.path(), "kubo.csv");
    assert_eq!(
        text.lines().next().unwrap(),
        "e_f_ev,f_hz,sigma_re,sigma_im,z_re,z_im"
    );
    let rows = rows(&text);
    assert_eq!(rows.len(), 12);

    let spot = rows.iter().find(|r| r[0] == 0.5 && r[1] == 2.3e12).unwrap();
    let (re, im) = Oracle::new().kubo(0.5, 300.0, 0.5e-12, 2.3e12);
    assert!((spot[2] / re - 1.0).abs() < 1e-10);
    assert!((spot[3] / im - 1.0).abs() < 1e-10);
    let (zr, zi) = Oracle::new().impedance(0.5, 300.0, 0.5e-12, 2.3e12, 1);
    assert!((spot[4] / zr - 1.0).abs() < 1e-10);
    assert!((spot[5] / zi - 1.0).abs() < 1e-10);

    // E_F = 0 keeps the thermal Drude weight 2 e^2 k_B T ln 2 / (pi hbar^2)
    let (e, hbar, kb) = (1.602_176_634e-19, 1.054_571_817e-34, 1.380_649e-23);
    let weight = 2.0 * e * e * kb * 300.0 * 2f64.ln() / (std::f64::consts::PI * hbar * hbar);
    let zero = rows.iter().find(|r| r[0] == 0.0 && r[1] == 1e12).unwrap();
    let w = 2.0 * std::f64::consts::PI * 1e12;
    let g = 1.0 / 0.5e-12;
    let (sr, si) = (weight * g / (w * w + g * g), weight * w / (w * w + g * g));
    assert!((zero[2] / sr - 1.0).abs() < 1e-12);
    assert!((zero[3] / si - 1.0).abs() < 1e-12);
}

#[test]
fn directional_beats_omni() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["pattern", "--beam", "omni"]);
    ok(d.path(), &["pattern", "--beam", "+y"]);
    let omni = json(d.path(), "pattern_omni.json");
    let py = json(d.path(), "pattern_py.json");
    let peak = |v: &serde_json::Value| v["metrics"]["peak_directivity_dbi"].as_f64().unwrap();
    assert!(peak(&py) > peak(&omni));
    assert_eq!(py["metrics"]["beam_direction"][1].as_f64().unwrap(), 90.0);
    let csv = read(d.path(), "pattern_py.csv");
    assert_eq!(
        csv.lines().next().unwrap(),
        "theta_deg,phi_deg,directivity_dbi"
    );
    // 181 x 360 samples at 1 degree
    assert_eq!(csv.lines().count(), 1 + 181 * 360);
}

#[test]
fn mirror_check_passes_for_each_axis() {
    let d = tempfile::tempdir().unwrap();
    for (beam, tag) in [("+y", "py"), ("-x", "nx")] {
        ok(d.path(), &["pattern", "--beam", beam, "--mirror-check"]);
        let v = json(d.path(), &format!("pattern_{tag}.json"));
        assert_eq!(v["mirror"]["ok"], true, "{beam}");
        assert!(v["mirror"]["max_diff"].as_f64().unwrap() < 1e-9);
    }
}

#[test]
fn rho_sweep_reproduces_library_sweep() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["pattern", "--beam", "+x", "--rho-sweep"]);
    let v = json(d.path(), "pattern_px.json");
    let cfg = RunConfig::default();
    let rho = cfg.antenna.rho_sweep.clone();
    let lib = residual_conductivity_sweep(
        &cfg.antenna_model().unwrap(),
        &AntennaLayout::cross(),
        BeamConfig::Directional(Direction::PosX),
        &cfg.antenna.point(),
        &rho,
        1.0,
    )
    .unwrap();
    let rows = v["rho_sweep"].as_array().unwrap();
    assert_eq!(rows.len(), rho.len());
    // serde_json's default float parser can be off by one ulp
    let close = |a: f64, b: f64| (a - b).abs() <= 4.0 * f64::EPSILON * b.abs();
    for (r, m) in rows.iter().zip(&lib) {
        assert!(close(
            r["metrics"]["gain_dbi"].as_f64().unwrap(),
            m.gain_dbi
        ));
        assert!(close(
            r["metrics"]["beamwidth_3db"].as_f64().unwrap(),
            m.beamwidth_3db
        ));
    }
    assert!(v["rho_sweep_monotone"].is_boolean());
}

#[test]
fn plan_channel_pattern() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["pattern", "--beam", "-y", "--channel", "3"]);
    let v = json(d.path(), "pattern_ny.json");
    let ch = &plan(&RunConfig::default()).unwrap().channels[3];
    assert_eq!(v["driver_ev"].as_f64().unwrap(), ch.e_f);
    assert!((v["parasitic_ev"].as_f64().unwrap() / ch.e_f - 1.6).abs() < 1e-12);
    let o = yagi(d.path(), &["pattern", "--channel", "99"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn channel_sweep_rows() {
    let d = tempfile::tempdir().unwrap();
    ok(
        d.path(),
        &[
            "channels",
            "--v-range",
            "0:60:13",
            "--t-nm",
            "50,100",
            "--eps-r",
            "3.9,9.3",
        ],
    );
    let text = read(d.path(), "channels.csv");
    assert_eq!(
        text.lines().next().unwrap(),
        "v_range_v,t_nm,eps_r,channel_count,f_res_hz"
    );
    let rows = rows(&text);
    assert_eq!(rows.len(), 13 * 2 * 2);
    let at = |v: f64, t: f64, e: f64| {
        rows.iter()
            .find(|r| r[0] == v && r[1] == t && r[2] == e)
            .unwrap()
            .clone()
    };
    let n35 = at(35.0, 100.0, 9.3)[3];
    assert!((7.0..=9.0).contains(&n35), "{n35}");
    assert_eq!(at(0.0, 100.0, 9.3)[3], 0.0);
    assert!(at(0.0, 100.0, 9.3)[4].is_nan());
    for chunk in rows.chunks(13) {
        for w in chunk.windows(2) {
            assert!(w[1][3] >= w[0][3]);
            assert!(w[1][0] > w[0][0]);
        }
    }
    let plan_csv = read(d.path(), "plan.csv");
    assert_eq!(plan_csv.lines().count(), 1 + n35 as usize);
}

#[test]
fn simulate_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        ok(d.path(), &["simulate", "--seed", "11"]);
    }
    for f in ["trace.jsonl", "metrics.json"] {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f}");
    }
    let c = tempfile::tempdir().unwrap();
    ok(c.path(), &["simulate", "--seed", "12"]);
    assert_ne!(read(a.path(), "trace.jsonl"), read(c.path(), "trace.jsonl"));
}

#[test]
fn single_station_latency_in_metrics() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "[scenario]\nstations = 1\nradius = 2.0\n");
    ok(d.path(), &["--config", &cfg, "simulate"]);
    let m = json(d.path(), "metrics.json");
    let rate = plan(&RunConfig::default()).unwrap().channels[0].bandwidth;
    let expected = 2.0 * 160.0 / rate + 2.0 * 2.5e-9 + 2.0 * 2.0 / 299_792_458.0;
    let got = m["mean_handshake_latency"].as_f64().unwrap();
    assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    assert_eq!(m["data_delivered"], 1);
}

#[test]
fn directional_only_flag_causes_deafness() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["simulate", "--variant", "directional-only"]);
    let m = json(d.path(), "metrics.json");
    assert!(m["deafness_misses"].as_u64().unwrap() > 0);
}

#[test]
fn config_errors_exit_two_and_name_the_key() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "[antenna]\nstep_deg = 1.0\nfrequncy = 2e12\n");
    let o = yagi(d.path(), &["--config", &cfg, "pattern"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("[antenna]") && err.contains("frequncy"),
        "{err}"
    );

    let cfg = write_config(d.path(), "[rf]\nv_range = -3.0\n");
    let o = yagi(d.path(), &["--config", &cfg, "channels"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[rf] v_range"));

    let o = yagi(d.path(), &["--config", "/nonexistent/run.toml", "kubo"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_three() {
    let d = tempfile::tempdir().unwrap();
    // conductivity this far above the scattering rate falls under the singular floor
    let o = yagi(d.path(), &["kubo", "--e-f", "0.5", "--freq", "1e300"]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn bad_flags_are_named() {
    let d = tempfile::tempdir().unwrap();
    let o = yagi(d.path(), &["pattern", "--beem", "+y"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--beem"));
    let o = yagi(d.path(), &["pattern", "--beam", "up"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--beam"));
}

#[test]
fn help_lists_every_flag() {
    let d = tempfile::tempdir().unwrap();
    let top = String::from_utf8(yagi(d.path(), &["--help"]).stdout).unwrap();
    for f in [
        "--config", "--out", "--seed", "kubo", "pattern", "channels", "simulate",
    ] {
        assert!(top.contains(f), "{f}");
    }
    for (cmd, flags) in [
        ("kubo", &["--e-f", "--freq"][..]),
        (
            "pattern",
            &["--beam", "--channel", "--rho-sweep", "--mirror-check"][..],
        ),
        ("channels", &["--v-range", "--t-nm", "--eps-r"][..]),
        ("simulate", &["--variant"][..]),
    ] {
        let h = String::from_utf8(yagi(d.path(), &[cmd, "--help"]).stdout).unwrap();
        for f in flags {
            assert!(h.contains(f), "{cmd} {f}");
        }
    }
}

#[test]
fn reference_config_spells_out_the_defaults() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/reference.toml");
    assert_eq!(RunConfig::load(&path).unwrap(), RunConfig::default());
}

#[test]
fn explicit_nodes_replace_the_ring() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(
        d.path(),
        "[scenario]\nisotropic = true\n\
         [[scenario.nodes]]\nid = 0\nposition = [0.0, 0.0]\nrole = \"ap\"\n\
         [[scenario.nodes]]\nid = 7\nposition = [0.0, 3.0]\nrole = \"station\"\nframes = 2\n",
    );
    ok(d.path(), &["--config", &cfg, "simulate"]);
    let m = json(d.path(), "metrics.json");
    assert_eq!(m["data_delivered"], 2);
    assert!(m["reconfigurations_by_node"].get("7").is_some());
}
