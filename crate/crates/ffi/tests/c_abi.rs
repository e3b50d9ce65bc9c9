//! Compiles a C program against the generated header and the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// The directory holding this test binary's sibling artifacts (`target/<profile>`).
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().expect("test binary path");
    exe.parent().and_then(Path::parent).expect("target/<profile>/deps").to_path_buf()
}

fn compiler() -> String {
    std::env::var("CC").unwrap_or_else(|_| "cc".into())
}

#[test]
fn header_is_valid_c() {
    let header = manifest_dir().join("include");
    let status = Command::new(compiler())
        .args([
            "-std=c11",
            "-Wall",
            "-Werror",
            "-fsyntax-only",
            "-x",
            "c",
            "-include",
            "uqsl_shapovalov.h",
            "/dev/null",
        ])
        .arg("-I")
        .arg(&header)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
}

#[test]
fn c_program_runs_against_static_library() {
    let lib = artifact_dir().join("libuqsl_shapovalov_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let out = std::env::temp_dir().join(format!("uqsl_c_program_{}", std::process::id()));
    let status = Command::new(compiler())
        .args(["-std=c11", "-Wall", "-Werror"])
        .arg(manifest_dir().join("tests").join("c_program.c"))
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("a C compiler is available");
    assert!(status.success(), "compiling the C program failed");
    let run = Command::new(&out).output().expect("run the C program");
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "C program failed: {}", String::from_utf8_lossy(&run.stderr));
}
