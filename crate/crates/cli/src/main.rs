use std::io::Write;

fn main() {
    let out = growthlab_cli::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.stdout.as_bytes());
    let _ = stdout.flush();
    if let Some(e) = out.report.get("error") {
        eprintln!("growthlab: {}", e["message"].as_str().unwrap_or("error"));
    }
    std::process::exit(out.code);
}
