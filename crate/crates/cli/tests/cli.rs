use std::path::PathBuf;

use assert_cmd::Command;
use predicates::prelude::*;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn cli() -> Command {
    Command::cargo_bin("theta-orbifold").unwrap()
}

#[test]
fn point_orbifold_normalized() {
    cli()
        .args(["orbifold", "--normalize"])
        .arg(fixture("point_z2.orb"))
        .assert()
        .success()
        .stdout("2\n");
}

#[test]
fn discrete_torsion_twist() {
    cli()
        .args(["twisted", "--normalize"])
        .arg(fixture("point_z2xz2.orb"))
        .arg("--cocycle")
        .arg(fixture("cup_z2xz2.cocycle"))
        .assert()
        .success()
        .stdout("1\n");
}

#[test]
fn mismatched_cocycle_group_is_rejected() {
    cli()
        .arg("twisted")
        .arg(fixture("point_z2.orb"))
        .arg("--cocycle")
        .arg(fixture("cup_z3xz3.cocycle"))
        .assert()
        .code(2)
        .stderr(predicate::str::starts_with("error:"));
}

#[test]
fn canonical_output_parses_back() {
    let out = cli()
        .args(["orbifold", "--order", "4", "--canonical"])
        .arg(fixture("cp1_z2.orb"))
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    let parsed = theta_orbifold::series::parse_canonical(&text).unwrap();
    assert_eq!(parsed.precision(), Some(4));
    assert_eq!(theta_orbifold::series::render_canonical(&parsed), text.trim_end());
}

#[test]
fn weil_pairing_of_the_basis() {
    cli()
        .args(["weil", "--n", "5", "--a", "1,0", "--b", "0,1"])
        .assert()
        .success()
        .stdout("z5^1\n");
}

#[test]
fn h2_of_the_klein_group() {
    cli()
        .arg("h2")
        .arg(fixture("z2xz2.group"))
        .args(["--n", "2"])
        .assert()
        .success()
        .stdout(predicate::str::contains("order 8"));
}

#[test]
fn two_power_pairs_of_s3() {
    cli()
        .arg("pairs")
        .arg(fixture("s3.group"))
        .args(["--p", "2"])
        .assert()
        .success()
        .stdout(predicate::str::ends_with("10 pairs\n"));
}

#[test]
fn witten_genus_of_cp1() {
    cli().arg("witten").arg(fixture("cp1.orb")).assert().success().stdout("0\n");
}

#[test]
fn verify_theta_and_its_corruption() {
    cli().args(["verify-theta", "--order", "6"]).assert().success();
    cli()
        .args(["verify-theta", "--order", "6", "--inject-corruption"])
        .assert()
        .code(1)
        .stdout(predicate::str::contains("mismatch"));
}

#[test]
fn verify_lifts_and_its_corruption() {
    let f = fixture("cp1_z2.orb");
    cli().args(["verify-lifts", "--order", "4"]).arg(&f).assert().success();
    cli()
        .args(["verify-lifts", "--order", "4", "--inject-corruption"])
        .arg(&f)
        .assert()
        .code(1);
}

#[test]
fn compare_analytic_detects_mislabeled_components() {
    cli()
        .args(["compare-analytic", "--order", "4"])
        .arg(fixture("cp1_z3.orb"))
        .assert()
        .success()
        .stdout(predicate::str::contains("MISMATCH").not());
    cli()
        .args(["compare-analytic", "--order", "4"])
        .arg(fixture("cp1_z3_mislabeled.orb"))
        .assert()
        .code(1)
        .stdout(predicate::str::contains("(1, 1): integrand MISMATCH"));
}

#[test]
fn pole_invariant_violation_exits_2() {
    cli()
        .arg("orbifold")
        .arg(fixture("bad_pole.orb"))
        .assert()
        .code(2)
        .stderr(predicate::str::contains("pole invariant violated"));
}

#[test]
fn bad_arguments() {
    cli()
        .args(["orbifold", "--jet-order", "0"])
        .arg(fixture("cp1.orb"))
        .assert()
        .code(2);
    cli().arg("orbifold").arg(fixture("missing.orb")).assert().code(2);
}
