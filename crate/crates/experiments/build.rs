use std::process::Command;

fn main() {
    let describe = Command::new("git")
        .args(["describe", "--tags", "--always", "--dirty"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty());
    let version = match describe {
        Some(rev) => format!(
            "v{}-g{}",
            env!("CARGO_PKG_VERSION"),
            rev.trim_start_matches('v')
        ),
        None => format!("v{}", env!("CARGO_PKG_VERSION")),
    };
    println!("cargo:rustc-env=MHK_VERSION={version}");
    println!("cargo:rerun-if-changed=build.rs");
    println!("cargo:rerun-if-changed=../../.git/HEAD");
}
