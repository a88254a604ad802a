fn main() -> anyhow::Result<()> {
    netbandit::cli::main()
}
