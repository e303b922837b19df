use clap::Parser;
use momentforge_cli::cli::{exit_code, run, Cli};

fn main() {
    let cli = Cli::parse();
    let echo = std::iter::once("momentforge".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ");
    let outcome = run(&cli, echo);
    match &outcome {
        Ok(report) if cli.json => {
            let body = report.to_json(cli.timings);
            println!("{}", serde_json::to_string_pretty(&body).expect("serializable report"));
        }
        Ok(report) => print!("{}", report.render_text(cli.timings)),
        Err(e) if cli.json => {
            let body =
                serde_json::json!({ "schema": momentforge_cli::report::SCHEMA, "error": e.to_string(), "ok": false });
            println!("{}", serde_json::to_string_pretty(&body).expect("serializable error"));
        }
        Err(e) => eprintln!("momentforge: {e}"),
    }
    std::process::exit(exit_code(&outcome));
}
