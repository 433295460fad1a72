use dimer_nccr::cli;

fn main() {
    let result = cli::run(std::env::args_os());
    match (&result.json, result.exit_code) {
        (Some(payload), _) => println!("{}", serde_json::to_string_pretty(payload).unwrap()),
        (None, 0) => {
            if !result.report.is_empty() {
                println!("{}", result.report);
            }
        }
        (None, _) => eprintln!("{}", result.report),
    }
    std::process::exit(result.exit_code);
}
