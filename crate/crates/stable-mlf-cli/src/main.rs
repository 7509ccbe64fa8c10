fn main() {
    // Placeholder during bring-up; replaced by the full dispatcher.
    eprintln!("not yet implemented");
    std::process::exit(2);
}
