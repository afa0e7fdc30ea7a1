use hausdorff_core::matrixfam::{KernelSpec, MatrixFamily};
use hausdorff_core::operators::{apply, OperatorSpec};
use hausdorff_core::quadrature::{make_grid, Rule, Shape, TestFunction};
use hausdorff_core::verify::{verify_theorem, PreparedScenario, Scenario};

#[test]
fn hardy_average_of_gaussian() {
    // int_0^1 exp(-t^2 x^2) dt = sqrt(pi) erf(x) / (2x)
    let phi = KernelSpec::PowerCube { coefficient: 1.0, norm_power: 0.0, coord_powers: vec![1.0] };
    let t_grid = make_grid(1, -64, 2, 32, 1, Rule::GaussLegendre).unwrap();
    let op = OperatorSpec::new(
        phi,
        vec![MatrixFamily::coordinate(0)],
        None,
        vec![TestFunction::new(1, Shape::Gaussian).unwrap()],
        t_grid,
    )
    .unwrap();
    for x in [0.125, 0.5, 1.0, 3.0, 10.0] {
        let exact = std::f64::consts::PI.sqrt() * libm::erf(x) / (2.0 * x);
        let v = apply(&op, &[x, 0.0, 0.0]).unwrap();
        assert!((v - exact).abs() <= 1e-10 * exact, "x = {x}: {v} vs {exact}");
    }
}

#[test]
fn shipped_scenarios_pass_their_hypotheses() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    for name in ["t31_desk.json", "t32_desk.json", "t34_desk.json"] {
        let s: Scenario = serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap();
        let r = verify_theorem(&PreparedScenario::new(s).unwrap()).unwrap();
        assert!(r.hypotheses_pass, "{name}: {:?}", r.hypotheses.iter().filter(|h| !h.passed).collect::<Vec<_>>());
        assert!(r.ratio.is_some_and(f64::is_finite));
    }
}
