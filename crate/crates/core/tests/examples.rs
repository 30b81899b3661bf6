//! Every example under `examples/` runs to completion.

#[allow(dead_code)]
mod special_functions {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/special_functions.rs"));
}

#[test]
fn special_functions_runs() {
    special_functions::run_example().expect("special_functions example should run");
}

#[allow(dead_code)]
mod noised_counts {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/noised_counts.rs"));
}

#[test]
fn noised_counts_runs() {
    noised_counts::run_example().expect("noised_counts example should run");
}

#[allow(dead_code)]
mod compare_estimators {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/compare_estimators.rs"));
}

#[test]
fn compare_estimators_runs() {
    compare_estimators::run_example().expect("compare_estimators example should run");
}

#[allow(dead_code)]
mod gaussian_calibration {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/gaussian_calibration.rs"));
}

#[test]
fn gaussian_calibration_runs() {
    gaussian_calibration::run_example().expect("gaussian_calibration example should run");
}

#[allow(dead_code)]
mod bias_analysis {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bias_analysis.rs"));
}

#[test]
fn bias_analysis_runs() {
    bias_analysis::run_example().expect("bias_analysis example should run");
}

#[allow(dead_code)]
mod confidence_intervals {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/confidence_intervals.rs"));
}

#[test]
fn confidence_intervals_runs() {
    confidence_intervals::run_example().expect("confidence_intervals example should run");
}

#[allow(dead_code)]
mod coverage_study {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/coverage_study.rs"));
}

#[test]
fn coverage_study_runs() {
    coverage_study::run_example().expect("coverage_study example should run");
}

#[allow(dead_code)]
mod accuracy_curves {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/accuracy_curves.rs"));
}

#[test]
fn accuracy_curves_runs() {
    accuracy_curves::run_example().expect("accuracy_curves example should run");
}

#[allow(dead_code)]
mod cdf_validation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cdf_validation.rs"));
}

#[test]
fn cdf_validation_runs() {
    cdf_validation::run_example().expect("cdf_validation example should run");
}

#[allow(dead_code)]
mod ptr_and_smooth_sensitivity {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ptr_and_smooth_sensitivity.rs"));
}

#[test]
fn ptr_and_smooth_sensitivity_runs() {
    ptr_and_smooth_sensitivity::run_example().expect("ptr_and_smooth_sensitivity example should run");
}
