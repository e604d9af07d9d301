#[allow(dead_code)]
mod pmf {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/pmf.rs"));
}

#[allow(dead_code)]
mod identify {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/identify.rs"));
}

#[allow(dead_code)]
mod distance {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/distance.rs"));
}

#[allow(dead_code)]
mod exception_constant {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/exception_constant.rs"));
}

#[allow(dead_code)]
mod inequalities {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/inequalities.rs"));
}

#[allow(dead_code)]
mod limit_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/limit_sweep.rs"));
}

#[allow(dead_code)]
mod factorize {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/factorize.rs"));
}

#[allow(dead_code)]
mod concentration {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/concentration.rs"));
}

#[allow(dead_code)]
mod verify_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verify_sweep.rs"));
}

#[allow(dead_code)]
mod certified_arithmetic {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/certified_arithmetic.rs"));
}

#[test]
fn pmf_example_runs() {
    pmf::run_example().expect("pmf example");
}

#[test]
fn identify_example_runs() {
    identify::run_example().expect("identify example");
}

#[test]
fn distance_example_runs() {
    distance::run_example().expect("distance example");
}

#[test]
fn exception_constant_example_runs() {
    exception_constant::run_example().expect("exception_constant example");
}

#[test]
fn inequalities_example_runs() {
    inequalities::run_example().expect("inequalities example");
}

#[test]
fn limit_sweep_example_runs() {
    limit_sweep::run_example().expect("limit_sweep example");
}

#[test]
fn factorize_example_runs() {
    factorize::run_example().expect("factorize example");
}

#[test]
fn concentration_example_runs() {
    concentration::run_example().expect("concentration example");
}

#[test]
fn verify_sweep_example_runs() {
    verify_sweep::run_example().expect("verify_sweep example");
}

#[test]
fn certified_arithmetic_example_runs() {
    certified_arithmetic::run_example().expect("certified_arithmetic example");
}
