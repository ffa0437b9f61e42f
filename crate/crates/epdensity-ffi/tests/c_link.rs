//! Compiles and runs the C demo against the generated header and the static
//! library, proving the advertised ABI from the C side.

use std::env;
use std::path::PathBuf;
use std::process::Command;

#[test]
fn c_demo_builds_and_runs() {
    let manifest = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = manifest.join("include/epdensity.h");
    assert!(header.exists(), "cbindgen header missing at {header:?}");

    // The staticlib lands next to this test's own artifacts.
    let profile = if cfg!(debug_assertions) {
        "debug"
    } else {
        "release"
    };
    let staticlib = manifest
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .join("target")
        .join(profile)
        .join("libepdensity_ffi.a");
    assert!(staticlib.exists(), "staticlib missing at {staticlib:?}");

    let out_dir = env::temp_dir().join(format!("epdensity_cdemo_{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let binary = out_dir.join("demo");

    let compile = Command::new("cc")
        .arg(manifest.join("cdemo/demo.c"))
        .arg(&staticlib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&binary)
        .output()
        .expect("cc not available");
    assert!(
        compile.status.success(),
        "compile failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&binary).output().unwrap();
    assert!(run.status.success(), "demo exited with {:?}", run.status);
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        stdout.contains("P(2,1)=0.399209709407"),
        "unexpected output: {stdout}"
    );
    std::fs::remove_dir_all(&out_dir).ok();
}
