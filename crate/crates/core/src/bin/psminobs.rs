use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

fn main() {
    let cancel = Arc::new(AtomicBool::new(false));
    let flag = cancel.clone();
    // A second interrupt falls through to the default handler.
    let _ = ctrlc::set_handler(move || {
        if flag.swap(true, Ordering::SeqCst) {
            std::process::exit(130);
        }
    });
    let code = psminobs::cli::run(std::env::args_os(), Some(cancel), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
