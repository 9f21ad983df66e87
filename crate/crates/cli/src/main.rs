use std::io::{self, BufWriter};
use std::process::ExitCode;

use elene_cli::{alloc, app};

#[global_allocator]
static GLOBAL: alloc::CountingAlloc = alloc::CountingAlloc;

fn main() -> ExitCode {
    let mut out = BufWriter::new(io::stdout().lock());
    let code = app::main_with(std::env::args_os(), &mut out, &mut io::stderr());
    ExitCode::from(code)
}
