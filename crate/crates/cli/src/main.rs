use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use annulus_cli::{
    parse_complex, parse_terms, run, to_json, CliError, Command, CommandRequest, Overrides,
};
use clap::Parser;

/// Function theory on the annulus r < |z| < 1. Prints a JSON report.
#[derive(Parser, Debug)]
#[command(name = "annulus", version)]
struct Args {
    command: Command,
    /// JSON file with inputs (f, g, h, phi, z, w, kernel); repeatable
    #[arg(long = "input")]
    input: Vec<PathBuf>,
    /// Full request as a JSON file; flags given alongside override it
    #[arg(long)]
    request: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Function as n:re[:im] terms, e.g. "1:1,0:-0.5" for z - 0.5
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    /// Point as re or re,im
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long = "trunc-M")]
    trunc_m: Option<usize>,
}

fn request(args: Args) -> Result<CommandRequest, CliError> {
    let mut req = match &args.request {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            })?;
            let mut req: CommandRequest =
                serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
            req.command = args.command;
            req
        }
        None => CommandRequest::new(args.command),
    };
    req.input_paths.extend(args.input);
    if args.out.is_some() {
        req.out = args.out;
    }
    let i = &mut req.inputs;
    for (slot, text) in [(&mut i.f, args.f), (&mut i.g, args.g), (&mut i.h, args.h)] {
        if let Some(t) = text {
            *slot = Some(parse_terms(&t)?);
        }
    }
    for (slot, text) in [(&mut i.z, args.z), (&mut i.w, args.w)] {
        if let Some(t) = text {
            *slot = Some(parse_complex(&t)?);
        }
    }
    let o = &mut req.overrides;
    let flags = Overrides {
        r: args.r,
        tol: args.tol,
        seed: args.seed,
        grid: args.grid,
        degree: args.degree,
        restarts: args.restarts,
        trunc_m: args.trunc_m,
    };
    o.r = flags.r.or(o.r);
    o.tol = flags.tol.or(o.tol);
    o.seed = flags.seed.or(o.seed);
    o.grid = flags.grid.or(o.grid);
    o.degree = flags.degree.or(o.degree);
    o.restarts = flags.restarts.or(o.restarts);
    o.trunc_m = flags.trunc_m.or(o.trunc_m);
    Ok(req)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = request(args).and_then(|req| {
        let report = run(&req)?;
        let text = to_json(&report);
        match &req.out {
            Some(p) => std::fs::write(p, &text).map_err(|e| CliError::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            })?,
            None => {
                // a closed pipe (e.g. `| head`) is not an error for the report
                let _ = writeln!(std::io::stdout(), "{text}");
            }
        }
        Ok(report)
    });
    match outcome {
        Ok(report) if report.command == Command::Verify && !report.certified => ExitCode::from(3),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
