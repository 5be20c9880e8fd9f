//! Grid-refinement study through the command-line front end, written to a scratch directory.

fn main() {
    let out = std::env::temp_dir().join("hmlab-refinement");
    std::fs::create_dir_all(&out).expect("scratch directory");
    let out = out.to_string_lossy().into_owned();
    let args = [
        "hmlab",
        "refine",
        "--nx",
        "33",
        "--ny",
        "33",
        "--s",
        "0.03125",
        "--levels",
        "3",
        "--metric",
        "spherical",
        "--boundary",
        "holo:0,0,0.5,0",
        "--checks",
        "bochner,hopf",
        "--out",
        &out,
    ];
    let code = hmlab::cli::run(args);
    println!("exit {code}; table in {out}/refine.csv");
    print!(
        "{}",
        std::fs::read_to_string(format!("{out}/refine.csv")).unwrap_or_default()
    );
}
