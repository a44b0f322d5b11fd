fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let config = match cbindgen::Config::from_file(format!("{crate_dir}/cbindgen.toml")) {
        Ok(c) => c,
        Err(e) => {
            println!("cargo:warning=cbindgen config: {e}");
            return;
        }
    };
    match cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
    {
        // Rewrites the committed header only when its content changes.
        Ok(bindings) => {
            bindings.write_to_file(format!("{crate_dir}/include/lpaudit.h"));
        }
        Err(e) => println!("cargo:warning=header generation skipped: {e}"),
    }
}
