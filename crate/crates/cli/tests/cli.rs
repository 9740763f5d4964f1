use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sperner_core::family::parse_stream;
use sperner_core::Family;

fn sperner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sperner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_examples() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.txt", "n=3\n110\n001\n");
    let o = sperner(&["check", path(&good)]);
    assert_eq!(stdout(&o), "sperner=true type=(1,2) maximal=true\n");
    assert_eq!(o.status.code(), Some(0));

    let o = sperner(&["check", "--naive", path(&good)]);
    assert_eq!(stdout(&o), "sperner=true type=(1,2) maximal=true\n");

    let chain = write(dir.path(), "chain.txt", "n=3\n110\n100\n");
    let o = sperner(&["check", path(&chain)]);
    assert_eq!(stdout(&o), "sperner=false\n");
    assert_eq!(o.status.code(), Some(1));

    let partial = write(dir.path(), "partial.txt", "n=3\n110\n");
    let o = sperner(&["check", path(&partial)]);
    assert_eq!(stdout(&o), "sperner=true type=(1,2) maximal=false\n");
    assert_eq!(o.status.code(), Some(1));

    let bad = write(dir.path(), "bad.txt", "n=3\n110\n1011\n");
    let o = sperner(&["check", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let dup = write(dir.path(), "dup.txt", "n=3\n110\n110\n");
    assert_eq!(sperner(&["check", path(&dup)]).status.code(), Some(2));
}

#[test]
fn check_reports_untypable_family() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.txt", "n=3\n100\n011\n");
    // sizes 1 and 2 are fine; sizes 1 and 3 cannot be Sperner-typed
    assert_eq!(sperner(&["check", path(&f)]).status.code(), Some(0));
    let g = write(dir.path(), "g.txt", "n=4\n1000\n0111\n");
    let o = sperner(&["check", path(&g)]);
    assert_eq!(stdout(&o), "sperner=true type=none\n");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn params_output() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "f.txt",
        "n=4\n1100\n1010\n1001\n0110\n0101\n0011\n",
    );
    let o = sperner(&["params", "--k", "1", path(&f)]);
    assert_eq!(
        stdout(&o),
        "k=1\np=0,0,0,0\nq=3,3,3,3\nr=3,3,3,3\nr_max=3\nr_bound=3 holds=true\n"
    );
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn complete_examples() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(dir.path(), "one.txt", "n=3\n110\npivot=1\n");
    let out = dir.path().join("out.txt");
    let o = sperner(&["complete", path(&one), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("size=2 r_max=2 PASS\n"));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "n=3\n001\n110\n");

    let two = write(
        dir.path(),
        "two.txt",
        "# two pairs\nn=3\n110\n101\npivot=1\n",
    );
    let o = sperner(&["complete", path(&two), "-o", path(&out)]);
    assert!(stdout(&o).starts_with("size=3 r_max=2 PASS\n"));
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        "n=3\n011\n101\n110\n"
    );

    // stdout variant still parses as a family file
    let o = sperner(&["complete", path(&two)]);
    let parsed = Family::parse(&stdout(&o)).unwrap();
    assert_eq!(
        parsed,
        Family::from_bit_strings(3, &["011", "101", "110"]).unwrap()
    );

    let miss = write(dir.path(), "miss.txt", "n=3\n011\npivot=1\n");
    assert_eq!(sperner(&["complete", path(&miss)]).status.code(), Some(2));
    let no_pivot = write(dir.path(), "np.txt", "n=3\n110\n");
    assert_eq!(
        sperner(&["complete", path(&no_pivot)]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_theorem2_examples() {
    let o = sperner(&["verify-theorem2", "--n", "3", "--k", "1", "--pivot", "1"]);
    assert_eq!(
        stdout(&o),
        "fragments=3 completions=3 distinct=3 findings=0\n"
    );
    assert_eq!(o.status.code(), Some(0));

    let o = sperner(&["verify-theorem2", "--n", "5", "--k", "2", "--pivot", "1"]);
    assert_eq!(
        stdout(&o),
        "fragments=63 completions=63 distinct=63 findings=0\n"
    );
    assert_eq!(o.status.code(), Some(0));

    let o = sperner(&["verify-theorem2", "--n", "10", "--k", "4", "--pivot", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("126"));

    let o = sperner(&["verify-theorem2", "--n", "3", "--k", "1", "--pivot", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_theorem1_single_task() {
    let o = sperner(&["verify-theorem1", "--n", "3", "--k", "1"]);
    assert_eq!(
        stdout(&o),
        "n=3 k=1 families=5 min_size=2 max_size=3 bound_lower=2 bound_upper=3 \
         violations=0 r_bound_findings=0 consistency_findings=0\n"
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        sperner(&["verify-theorem1", "--n", "2", "--k", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sperner(&["verify-theorem1", "--n", "8", "--k", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn enumerate_output_reparses() {
    let o = sperner(&["enumerate", "--n", "4", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let families = parse_stream(&stdout(&o)).unwrap();
    assert_eq!(families.len(), 12);
    let mut sorted = families.clone();
    sorted.sort();
    assert_eq!(families, sorted);

    let o = sperner(&["enumerate", "--n", "3", "--k", "1", "--count-only"]);
    assert_eq!(stdout(&o), "count=5\n");

    let o = sperner(&[
        "enumerate",
        "--n",
        "4",
        "--k",
        "1",
        "--pivot",
        "2",
        "--count-only",
    ]);
    assert_eq!(stdout(&o), "count=7\n");

    let o = sperner(&["enumerate", "--n", "3", "--k", "1", "--pivot", "1"]);
    assert_eq!(
        stdout(&o),
        "n=3\n101\npivot=1\n\nn=3\n110\npivot=1\n\nn=3\n101\n110\npivot=1\n"
    );

    assert_eq!(
        sperner(&["enumerate", "--n", "2", "--k", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sperner(&["enumerate", "--n", "7", "--k", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn guard_override() {
    // C(9,1) + C(9,2) = 45 > 40
    let o = sperner(&["enumerate", "--n", "9", "--k", "1", "--count-only"]);
    assert_eq!(o.status.code(), Some(2));
    let o = sperner(&[
        "enumerate",
        "--n",
        "9",
        "--k",
        "1",
        "--count-only",
        "--allow-large",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("count="));
}

#[test]
fn asymmetry_csv() {
    let o = sperner(&[
        "asymmetry",
        "--l",
        "2",
        "--n-min",
        "7",
        "--n-max",
        "9",
        "--construct-up-to",
        "9",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,cipher_size,decipher_lower_bound,decipher_size,ratio"
    );
    assert!(lines[1].starts_with("7,10,20,"));
    assert!(lines[2].starts_with("9,15,70,"));
    assert_eq!(lines.len(), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipping even n=8"));

    let o = sperner(&[
        "asymmetry",
        "--l",
        "1",
        "--n-min",
        "7",
        "--n-max",
        "9",
        "--construct-up-to",
        "26",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cross_check_is_seeded() {
    let a = sperner(&["cross-check", "--samples", "200", "--seed", "9"]);
    let b = sperner(&[
        "cross-check",
        "--samples",
        "200",
        "--seed",
        "9",
        "--jobs",
        "3",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("disagreements=0\n"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sperner(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(sperner(&["check"]).status.code(), Some(2));
    assert_eq!(
        sperner(&["check", "/definitely/missing"]).status.code(),
        Some(2)
    );
    assert_eq!(
        sperner(&["--jobs", "0", "enumerate", "--n", "3", "--k", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(sperner(&["--help"]).status.code(), Some(0));
}
