use qzd::overrides::{apply, Override};
use qzd::presets;
use qzd::spec::{ExperimentSpec, Horizon, Scheme};
use qzd::Error;

#[test]
fn presets_round_trip_through_toml() {
    for scheme in Scheme::PRESETS {
        let spec = presets::preset(scheme.as_str()).unwrap();
        spec.validate().unwrap();
        let text = spec.to_toml().unwrap();
        let back = ExperimentSpec::from_toml(&text).unwrap();
        assert_eq!(back, spec, "{scheme}");
    }
    let ext = presets::preset("fig5c-extended").unwrap();
    assert_eq!(ext.name, "fig5c-extended");
    assert_eq!(ext.particles.len(), 4);
}

const MINIMAL: &str = r#"
name = "mini"
scheme = "custom"

[grid]
x_min = -150.0
x_max = 150.0
n = 2048

[potential]
kind = "well"
v0 = 10.0
xp = 30.0

[[particles]]
name = "electron"
mass = 1.0

[packet]
x0 = 30.0
delta_x = 1.4142135623730951

[measurement]
delta_v = 1.4142135623730951
horizon = { fixed = 30.0 }
n_measurements = [64, 128]
"#;

#[test]
fn minimal_file_fills_defaults() {
    let spec = ExperimentSpec::from_toml(MINIMAL).unwrap();
    spec.validate().unwrap();
    assert_eq!(spec.measurement.horizon, Horizon::Fixed(30.0));
    assert_eq!(spec.measurement.max_substep, 0.05);
    assert!(spec.measurement.record_flux);
    assert_eq!(spec.output_dir, std::path::PathBuf::from("runs"));
}

#[test]
fn missing_field_is_named() {
    let text = MINIMAL.replace("x0 = 30.0\n", "");
    let err = ExperimentSpec::from_toml(&text).unwrap_err();
    assert!(err.to_string().contains("missing field `x0`"), "{err}");
}

#[test]
fn unknown_field_is_reported_with_its_line() {
    let text = MINIMAL.replace("xp = 30.0", "xp = 30.0\nwidth = 2.0");
    let err = ExperimentSpec::from_toml(&text).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("width"), "{msg}");
    assert!(msg.contains("line 14"), "{msg}");
}

#[test]
fn file_errors_carry_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, MINIMAL.replace("n = 2048", "n = \"many\"")).unwrap();
    let err = ExperimentSpec::load(&path).unwrap_err();
    assert!(matches!(err, Error::Parse { .. }));
    assert!(err.to_string().contains("bad.toml"));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn exclusive_choices_are_enforced() {
    let mut spec = ExperimentSpec::from_toml(MINIMAL).unwrap();
    spec.packet.thermal_a = Some(1e-3);
    assert!(spec.validate().is_err());

    let mut spec = ExperimentSpec::from_toml(MINIMAL).unwrap();
    spec.measurement.intervals = vec![1.0];
    assert!(spec.validate().is_err());

    let mut spec = ExperimentSpec::from_toml(MINIMAL).unwrap();
    spec.measurement.horizon = Horizon::Thermal;
    assert!(spec.validate().is_err());
}

fn set(spec: &ExperimentSpec, args: &[&str]) -> qzd::Result<ExperimentSpec> {
    let parsed = args.iter().map(|a| a.parse::<Override>()).collect::<qzd::Result<Vec<_>>>()?;
    apply(spec, &parsed)
}

#[test]
fn overrides_follow_dotted_paths_and_unique_leaves() {
    let base = presets::fig2();
    let spec = set(&base, &["n_measurements=0"]).unwrap();
    assert_eq!(spec.measurement.n_measurements, vec![0]);

    let spec = set(&base, &["measurement.max_substep=0.025", "grid.n=4096", "potential.kind=barrier"]).unwrap();
    assert_eq!(spec.measurement.max_substep, 0.025);
    assert_eq!(spec.grid.n, 4096);
    assert_eq!(spec.potential.kind, qzd_core::potential::PotentialKind::Barrier);

    let spec = set(&base, &["horizon=analytic", "particles.0.mass=206.767"]).unwrap();
    assert_eq!(spec.measurement.horizon, Horizon::Analytic);
    assert_eq!(spec.particles[0].mass, 206.767);

    let spec = set(&base, &["horizon.fixed=12"]).unwrap();
    assert_eq!(spec.measurement.horizon, Horizon::Fixed(12.0));

    let spec = set(&presets::fig3(), &["control_horizon=30"]).unwrap();
    assert_eq!(spec.measurement.control_horizon, Some(30.0));
}

#[test]
fn bad_overrides_are_usage_errors() {
    let base = presets::fig2();
    for bad in ["nonsense=1", "n_measurements", "grid.n=-4", "particles.3.mass=1", "=3"] {
        let err = set(&base, &[bad]).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{bad}: {err}");
    }
}
