//! Writing and reading interchange documents, and running a job through the
//! command-line entry point in-process.

use qshape::cli::run_args;
use qshape::io::{self, Body, Document};
use qshape::{Module, QuiverAlgebra, Rationals};

fn main() -> qshape::Result<()> {
    let a = QuiverAlgebra::linear_a(Rationals, 2)?;
    let m = Module::projective(&a, 0)?;
    let doc = Document { header: io::header(&a, None), body: Body::Module { module: io::module_doc(&m) } };
    let text = doc.to_string_pretty();
    print!("{text}");
    assert_eq!(Document::parse(&text)?, doc);

    let dir = std::env::temp_dir().join("qshape-interchange-example");
    std::fs::create_dir_all(&dir).map_err(|e| qshape::Error::Parse(e.to_string()))?;
    let path = dir.join("p1.json");
    std::fs::write(&path, &text).map_err(|e| qshape::Error::Parse(e.to_string()))?;
    let out = run_args(["qshape", "rz", "k", path.to_str().unwrap(), "--format", "summary"]);
    print!("exit {}: {}", out.code, out.stdout);
    Ok(())
}
