fn main() {
    std::process::exit(circhad::app::main_with_std_io());
}
