//! Compiles a C program against the generated header and links it to the static library.

use std::path::PathBuf;
use std::process::Command;

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok()
}

#[test]
fn c_program_links_and_runs() {
    if !have_cc() {
        eprintln!("no C compiler; skipped");
        return;
    }
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test> -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("liborbifrob_ffi.a");
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("orbifrob_smoke");
    let mut cc = Command::new("cc");
    cc.arg("-std=c99").arg("-Wall").arg("-Werror").arg("-I").arg(root.join("include")).arg(root.join("tests/smoke.c"));
    if !lib.exists() {
        // header-only check when the static library was not produced
        let st = cc.arg("-fsyntax-only").status().unwrap();
        assert!(st.success());
        return;
    }
    let st = cc.arg(&lib).arg("-o").arg(&out).args(["-lpthread", "-ldl", "-lm"]).status().unwrap();
    assert!(st.success(), "link failed");
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "1/2");
}
