use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::Range;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use uavsim::bezier::{build_curve, min_time, BoundaryConditions, KinematicLimits};
use uavsim::config::CONFIG_ENV_VAR;
use uavsim::env::TrajectoryRecorder;
use uavsim::policy::{Pilot, PolicyKind};
use uavsim::server::Server;
use uavsim::{Episode, EpisodeConfig, EpisodeStatus, PlanarVector, Scenario};

#[derive(Parser, Debug)]
#[command(name = "uavsim", version, about = "Planar UAV environments with a Bezier time-to-go reward")]
struct Cli {
    /// Episode configuration file (TOML, flat keys). Defaults apply to absent keys.
    #[arg(long, global = true, env = CONFIG_ENV_VAR)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shortest feasible Bezier flight time between two states.
    Mintime(MintimeArgs),
    /// Fly one episode with a scripted policy and write its trajectory.
    Rollout(RolloutArgs),
    /// Run a scripted policy over a range of seeds and summarise the outcomes.
    Sweep(SweepArgs),
    /// Serve episodes over TCP, one JSON object per line.
    Serve(ServeArgs),
}

#[derive(Args, Debug)]
struct MintimeArgs {
    /// Start state `x,y,vx,vy`.
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
    from: [f64; 4],
    /// Required end state `x,y,vx,vy`.
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
    to: [f64; 4],
    /// Speed limit, m/s [default: from config].
    #[arg(long)]
    vmax: Option<f64>,
    /// Acceleration limit, m/s² [default: from config].
    #[arg(long)]
    amax: Option<f64>,
    /// Print N evenly spaced samples of the minimum-time curve (both ends included).
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    /// Exit with status 1 when no feasible duration exists.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct EpisodeArgs {
    /// Scenario: 1 fly to point, 2 evade an interceptor, 3 UAV duel.
    #[arg(long, value_parser = parse_scenario)]
    scenario: Scenario,
    /// Scripted policy.
    #[arg(long, default_value = "goto", value_parser = parse_policy)]
    policy: PolicyKind,
    /// Override the episode step limit.
    #[arg(long)]
    steps: Option<u32>,
}

#[derive(Args, Debug)]
struct RolloutArgs {
    #[command(flatten)]
    episode: EpisodeArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trajectory CSV destination.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    episode: EpisodeArgs,
    /// Seeds as `a..b` (end excluded) or `a..=b`.
    #[arg(long, value_parser = parse_seeds)]
    seeds: Range<u64>,
}

#[derive(Args, Debug)]
struct ServeArgs {
    #[arg(long, default_value_t = 7070)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    bind: String,
}

fn parse_state(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected x,y,vx,vy, got {} values", parts.len()));
    }
    let mut out = [0.0; 4];
    for (slot, p) in out.iter_mut().zip(parts) {
        let v: f64 = p.parse().map_err(|_| format!("{p:?} is not a number"))?;
        if !v.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
        *slot = v;
    }
    Ok(out)
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: uavsim::SimError| e.to_string())
}

fn parse_policy(s: &str) -> Result<PolicyKind, String> {
    s.parse().map_err(|e: uavsim::SimError| e.to_string())
}

fn parse_seeds(s: &str) -> Result<Range<u64>, String> {
    let bad = || format!("{s:?} is not a seed range like 0..100 or 0..=99");
    let (lo, hi, inclusive) = if let Some((a, b)) = s.split_once("..=") {
        (a, b, true)
    } else if let Some((a, b)) = s.split_once("..") {
        (a, b, false)
    } else {
        return Err(bad());
    };
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    let end = if inclusive { hi.checked_add(1).ok_or_else(bad)? } else { hi };
    if end <= lo {
        return Err(format!("seed range {s:?} is empty"));
    }
    Ok(lo..end)
}

fn load_config(path: Option<&PathBuf>) -> Result<EpisodeConfig> {
    match path {
        Some(p) => EpisodeConfig::from_file(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(EpisodeConfig::default()),
    }
}

fn run_mintime(args: &MintimeArgs, cfg: &EpisodeConfig, out: &mut impl Write) -> Result<ExitCode> {
    let limits = KinematicLimits::new(
        args.vmax.unwrap_or(cfg.limits.v_max),
        args.amax.unwrap_or(cfg.limits.a_max),
    )?;
    let [x0, y0, vx0, vy0] = args.from;
    let [x1, y1, vx1, vy1] = args.to;
    let bc = BoundaryConditions::new(
        PlanarVector::new(x0, y0),
        PlanarVector::new(vx0, vy0),
        PlanarVector::new(x1, y1),
        PlanarVector::new(vx1, vy1),
    );
    let r = min_time(&bc, &limits)?;
    writeln!(out, "t_min = {:.6} s", r.t_min)?;
    writeln!(out, "feasible = {}", r.feasible)?;
    writeln!(out, "evaluations = {}", r.iterations)?;
    if r.feasible && r.t_min > 0.0 {
        let curve = build_curve(&bc, r.t_min)?;
        let (v, tv) = curve.max_speed();
        let (a, ta) = curve.max_accel();
        writeln!(out, "max_speed = {v:.6} m/s at tau = {tv:.6} (limit {})", limits.v_max)?;
        writeln!(out, "max_accel = {a:.6} m/s^2 at tau = {ta:.6} (limit {})", limits.a_max)?;
        if let Some(n) = args.samples {
            writeln!(out, "tau,t,x,y,vx,vy,ax,ay")?;
            for i in 0..n {
                let tau = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                let (p, vel, acc) = (curve.position(tau)?, curve.velocity(tau)?, curve.acceleration(tau)?);
                writeln!(
                    out,
                    "{tau},{},{},{},{},{},{},{}",
                    tau * r.t_min,
                    p.x,
                    p.y,
                    vel.x,
                    vel.y,
                    acc.x,
                    acc.y
                )?;
            }
        }
    }
    if !r.feasible && args.strict {
        eprintln!("error: no feasible duration up to the search cap");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

/// Summary of one scripted episode.
struct EpisodeSummary {
    seed: u64,
    status: EpisodeStatus,
    steps: u32,
    reward: f64,
    interceptor_reward: Option<f64>,
    residual: f64,
}

fn fly(
    scenario: Scenario,
    seed: u64,
    policy: PolicyKind,
    cfg: &EpisodeConfig,
    mut recorder: Option<&mut TrajectoryRecorder>,
) -> Result<EpisodeSummary> {
    let (mut ep, _) = Episode::reset(scenario, seed, cfg)?;
    let t0 = ep.state().initial_tmin;
    let mut pilot = Pilot::new(policy, &ep);
    let mut reward = 0.0;
    let mut interceptor_reward = t0.interceptor.map(|_| 0.0);
    let (mut shaped_e, mut shaped_i) = (0.0, 0.0);
    let mut last = None;
    while !ep.is_done() {
        let actions = pilot.actions(&ep);
        let out = ep.step(&actions)?;
        reward += out.rewards.evader;
        if let (Some(total), Some(r)) = (interceptor_reward.as_mut(), out.rewards.interceptor) {
            *total += r;
        }
        shaped_e += out.info.shaped_reward.evader;
        shaped_i += out.info.shaped_reward.interceptor.unwrap_or(0.0);
        if let Some(rec) = recorder.as_deref_mut() {
            rec.record(&out, &actions);
        }
        last = Some(out);
    }
    let last = last.context("episode ended before its first step")?;
    let mut residual = (shaped_e - (t0.evader - last.info.tmin.evader)).abs();
    if let (Some(a), Some(b)) = (t0.interceptor, last.info.tmin.interceptor) {
        residual = residual.max((shaped_i - (a - b)).abs());
    }
    Ok(EpisodeSummary {
        seed,
        status: last.status,
        steps: last.info.step,
        reward,
        interceptor_reward,
        residual,
    })
}

fn episode_config(args: &EpisodeArgs, cfg: &EpisodeConfig) -> Result<EpisodeConfig> {
    let mut cfg = cfg.clone();
    if let Some(steps) = args.steps {
        if steps == 0 {
            bail!("--steps must be at least 1");
        }
        cfg.max_steps = steps;
    }
    Ok(cfg)
}

fn run_rollout(args: &RolloutArgs, cfg: &EpisodeConfig, out: &mut impl Write) -> Result<ExitCode> {
    let cfg = episode_config(&args.episode, cfg)?;
    let scenario = args.episode.scenario;
    let mut rec = TrajectoryRecorder::new(scenario);
    let s = fly(scenario, args.seed, args.episode.policy, &cfg, Some(&mut rec))?;
    let file = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    rec.write_csv(BufWriter::new(file)).with_context(|| format!("writing {}", args.out.display()))?;
    writeln!(out, "scenario = {scenario}")?;
    writeln!(out, "seed = {}", s.seed)?;
    writeln!(out, "policy = {}", args.episode.policy)?;
    writeln!(out, "status = {}", s.status)?;
    writeln!(out, "steps = {}", s.steps)?;
    writeln!(out, "reward = {}", s.reward)?;
    if let Some(r) = s.interceptor_reward {
        writeln!(out, "interceptor_reward = {r}")?;
    }
    writeln!(out, "telescoping_residual = {:.3e}", s.residual)?;
    writeln!(out, "trajectory = {} ({} rows)", args.out.display(), rec.len())?;
    Ok(ExitCode::SUCCESS)
}

fn run_sweep(args: &SweepArgs, cfg: &EpisodeConfig, out: &mut impl Write) -> Result<ExitCode> {
    let cfg = episode_config(&args.episode, cfg)?;
    let scenario = args.episode.scenario;
    let policy = args.episode.policy;
    let results: Vec<EpisodeSummary> = args
        .seeds
        .clone()
        .into_par_iter()
        .map(|seed| fly(scenario, seed, policy, &cfg, None))
        .collect::<Result<_>>()?;

    let duel = scenario == Scenario::UavDuel;
    write!(out, "seed,status,steps,reward")?;
    writeln!(out, "{}", if duel { ",interceptor_reward" } else { "" })?;
    for r in &results {
        write!(out, "{},{},{},{}", r.seed, r.status, r.steps, r.reward)?;
        match r.interceptor_reward {
            Some(i) => writeln!(out, ",{i}")?,
            None => writeln!(out)?,
        }
    }

    let n = results.len() as f64;
    let rate = |s: EpisodeStatus| results.iter().filter(|r| r.status == s).count() as f64 / n;
    let mean_reward = results.iter().map(|r| r.reward).sum::<f64>() / n;
    let mean_steps = results.iter().map(|r| f64::from(r.steps)).sum::<f64>() / n;
    writeln!(out)?;
    writeln!(
        out,
        "episodes,success_rate,intercepted_rate,out_of_bounds_rate,overspin_rate,max_steps_rate,mean_steps,mean_reward"
    )?;
    writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        results.len(),
        rate(EpisodeStatus::Success),
        rate(EpisodeStatus::Intercepted),
        rate(EpisodeStatus::OutOfBounds),
        rate(EpisodeStatus::Overspin),
        rate(EpisodeStatus::MaxSteps),
        mean_steps,
        mean_reward
    )?;
    Ok(ExitCode::SUCCESS)
}

fn run_serve(args: &ServeArgs, cfg: &EpisodeConfig) -> Result<ExitCode> {
    let server = Server::bind((args.bind.as_str(), args.port), cfg.clone())
        .with_context(|| format!("binding {}:{}", args.bind, args.port))?;
    println!("listening on {}", server.local_addr()?);
    io::stdout().flush()?;
    server.run()?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let cfg = load_config(cli.config.as_ref())?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Mintime(a) => run_mintime(a, &cfg, &mut out),
        Command::Rollout(a) => run_rollout(a, &cfg, &mut out),
        Command::Sweep(a) => run_sweep(a, &cfg, &mut out),
        Command::Serve(a) => run_serve(a, &cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
