//! Regenerates include/ppikit.h from the exported items. The header is
//! committed so C consumers never need cbindgen; a generation failure keeps
//! the committed copy and only warns.

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("cargo sets CARGO_MANIFEST_DIR");
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(format!("{crate_dir}/include/ppikit.h"));
        }
        Err(e) => println!("cargo:warning=include/ppikit.h not regenerated: {e}"),
    }
}
