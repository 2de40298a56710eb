fn main() {
    std::process::exit(gabor_rp::run(std::env::args().skip(1).collect()));
}
