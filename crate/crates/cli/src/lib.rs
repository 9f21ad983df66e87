//! Library side of the `elene` command: output records, the scaling
//! benchmark, and self-checks.

pub mod alloc;
pub mod app;
pub mod bench;
pub mod checks;
pub mod records;

/// Process exit code for a failed command: 1 for unreadable or malformed
/// input, 2 for invalid parameters and everything else.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if let Some(e) = err.downcast_ref::<elene::Error>() {
        return match e {
            elene::Error::Parse { .. } => 1,
            _ => 2,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 1;
    }
    2
}
