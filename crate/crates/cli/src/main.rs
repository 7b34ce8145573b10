use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use vip_core::model::{render_layout, save_session};
use vip_core::vision::pnm::{read_ppm, write_ppm};
use vip_core::vision::suggest_thresholds;
use vip_sim::server::serve_session;
use vip_sim::{run_scenario_with, to_jsonl, Scenario, SessionEvent};

#[derive(Parser)]
#[command(
    name = "vip",
    version,
    about = "Virtual interactive prototyping: simulated sessions and tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario through the full pipeline and write the event log.
    Run {
        scenario: PathBuf,
        /// Override the scenario's noise seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Event log destination (JSONL); stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write each camera frame and layout overlay as PPM into this directory.
        #[arg(long)]
        dump_frames: Option<PathBuf>,
        /// Write the final session document here.
        #[arg(long)]
        session_out: Option<PathBuf>,
        /// Compare against the scenario's expected outputs; exit 1 on mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Serve live sessions over the session protocol.
    Serve {
        #[arg(long)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Scripted world to start from; a bare surface when omitted.
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Suggest marker HSV thresholds from a sample frame.
    Calibrate {
        #[arg(long)]
        image: PathBuf,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            scenario,
            seed,
            out,
            dump_frames,
            session_out,
            check,
        } => run(
            &scenario,
            seed,
            out.as_deref(),
            dump_frames.as_deref(),
            session_out.as_deref(),
            check,
        ),
        Command::Serve {
            port,
            host,
            scenario,
        } => {
            let sc = scenario
                .map(|p| Scenario::load(&p).with_context(|| format!("loading {}", p.display())))
                .transpose()?;
            eprintln!("serving on {host}:{port}");
            serve_session(&host, port, sc)?;
            Ok(())
        }
        Command::Calibrate { image } => {
            let bytes = fs::read(&image).with_context(|| format!("reading {}", image.display()))?;
            let img = read_ppm(&bytes)?;
            match suggest_thresholds(&img) {
                Some(th) => {
                    println!("{}", serde_json::to_string(&th)?);
                    Ok(())
                }
                None => bail!("no saturated marker colour found in {}", image.display()),
            }
        }
    }
}

fn run(
    path: &Path,
    seed: Option<u64>,
    out: Option<&Path>,
    dump: Option<&Path>,
    session_out: Option<&Path>,
    check: bool,
) -> Result<()> {
    let mut sc = Scenario::load(path).with_context(|| format!("loading {}", path.display()))?;
    if let Some(seed) = seed {
        sc.world.seed = seed;
    }
    if let Some(dir) = dump {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let (width, height) = (sc.world.width, sc.world.height);
    let run = run_scenario_with(&sc, |k, _, frame, session| {
        if let Some(dir) = dump {
            let overlay = render_layout(session.state(), session.display_object(), width, height);
            for (name, img) in [("frame", frame), ("overlay", &overlay)] {
                let file = fs::File::create(dir.join(format!("{name}_{k:05}.ppm")))?;
                write_ppm(io::BufWriter::new(file), img)
                    .map_err(|e| io::Error::other(e.to_string()))?;
            }
        }
        Ok(())
    })?;
    let log = to_jsonl(&run.events);
    match out {
        Some(p) => fs::write(p, &log).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().write_all(log.as_bytes())?,
    }
    let doc = save_session(&run.state);
    if let Some(p) = session_out {
        fs::write(p, &doc).with_context(|| format!("writing {}", p.display()))?;
    }
    eprintln!(
        "{} frames, {} events, {} effects, mode {:?}, {} elements",
        run.frames,
        run.events.len(),
        run.state.effects_log.len(),
        run.state.mode,
        run.state.layout.len()
    );
    if check {
        let Some(expected) = &sc.expected else {
            bail!("scenario has no expected outputs to check against");
        };
        let mut ok = true;
        if let Some(rel) = &expected.layout {
            let want = fs::read(Scenario::resolve(path, rel))?;
            ok &= report("layout", want == doc);
        }
        if let Some(rel) = &expected.effects {
            let want = fs::read_to_string(Scenario::resolve(path, rel))?;
            let effects: Vec<SessionEvent> = run
                .events
                .iter()
                .filter(|e| matches!(e, SessionEvent::Effect(_)))
                .cloned()
                .collect();
            ok &= report("effects", want == to_jsonl(&effects));
        }
        if !ok {
            std::process::exit(1);
        }
    }
    Ok(())
}

fn report(what: &str, pass: bool) -> bool {
    eprintln!("{what}: {}", if pass { "match" } else { "MISMATCH" });
    pass
}
