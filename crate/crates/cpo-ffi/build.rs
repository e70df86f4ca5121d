use std::env;
use std::path::Path;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR");
    let config_path = Path::new(&crate_dir).join("cbindgen.toml");
    let header_path = Path::new(&crate_dir).join("include").join("cpo.h");

    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let config = cbindgen::Config::from_file(&config_path).expect("cbindgen.toml parses");

    // The generated header is committed; regenerating on every build keeps
    // it in lockstep with the Rust source.
    cbindgen::Builder::new()
        .with_config(config)
        .with_crate(&crate_dir)
        .generate()
        .expect("cbindgen generates the C header")
        .write_to_file(header_path);
}
