use std::fmt::Write as _;
use std::path::Path;

use patrol_core::decomposition::{subtree_decomposition, Core};
use patrol_core::engine::{attacker_best_response, evaluate, GridSpec, Method, CSV_HEADER};
use patrol_core::factorization::{
    best_one_factorization, enumerate_one_factorizations, parse_factorization, round_robin_one_factorization,
    write_factorization, Factorization, SearchMode,
};
use patrol_core::network::format::{format_point, format_region, parse_network};
use patrol_core::rational::format_rational as fr;
use patrol_core::strategy::{
    complete_patrolling, default_epsilon, e_patrolling, epsilon_horizon, factor_patrolling, parse_attack,
    parse_patrol, tree_attack_strategy, write_attack, write_patrol,
};
use patrol_core::{Error, Network};

use crate::manifest::Manifest;
use crate::{Cli, CliError, Command, EvalMethod, PatrolKind};

fn in_file(path: &Path) -> impl Fn(Error) -> CliError + '_ {
    move |source| CliError::Core { context: format!("{}: ", path.display()), source }
}

fn load_network(m: &mut Manifest, path: &Path) -> Result<Network, CliError> {
    let text = m.read(path)?;
    parse_network(&text).map_err(in_file(path))
}

/// Writes `text` to the output file or stdout, then the manifest to stderr.
fn finish(mut m: Manifest, output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => {
            std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source })?;
            m.output(p);
        }
        None => print!("{text}"),
    }
    eprint!("{}", m.render());
    Ok(())
}

fn describe_factorization(net: &Network, f: &Factorization) -> String {
    let delta = f.delta(net);
    let slack = net.total_length() - delta;
    format!(
        "# delta(F)={} mu-delta(F)={} valid alpha range: alpha <= {}\n",
        fr(&delta),
        fr(&slack),
        fr(&slack)
    )
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Decompose { network, alpha, out } => {
            let mut m = Manifest::new("decompose");
            let net = load_network(&mut m, network)?;
            m.param("alpha", fr(alpha));
            let d = subtree_decomposition(&net, *alpha)?;
            let mut s = String::new();
            let _ = writeln!(s, "alpha={}", fr(&d.alpha));
            let _ = writeln!(s, "alpha_star={}", fr(&d.critical_alpha));
            let _ = writeln!(s, "local_root={}", format_point(&net, &d.local_root));
            let _ = writeln!(s, "lambda_E={}", fr(&d.extremity_measure));
            let _ = writeln!(s, "value={}", fr(&d.value()));
            match &d.core {
                Core::Region(r) => {
                    let _ = writeln!(s, "core measure={} segments={}", fr(&r.measure()), format_region(&net, r));
                }
                Core::Point(p) => {
                    let _ = writeln!(s, "core measure=0 point={}", format_point(&net, p));
                }
            }
            for (j, c) in d.components.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "component {} root={} measure={} segments={}",
                    j + 1,
                    format_point(&net, &c.root),
                    fr(&c.measure),
                    format_region(&net, &c.region)
                );
            }
            finish(m, out.output.as_deref(), &s)
        }
        Command::Attack { network, alpha, horizon, epsilon, out } => {
            let mut m = Manifest::new("attack");
            let net = load_network(&mut m, network)?;
            m.param("alpha", fr(alpha));
            let horizon = match horizon {
                Some(h) => *h,
                None => {
                    let eps = epsilon.unwrap_or_else(default_epsilon);
                    m.param("epsilon", fr(&eps));
                    epsilon_horizon(*alpha, eps)?
                }
            };
            m.param("T", fr(&horizon));
            let a = tree_attack_strategy(&net, *alpha, horizon)?;
            finish(m, out.output.as_deref(), &write_attack(&net, &a))
        }
        Command::Patrol { network, kind, alpha, factorization, m: regularity, best, out } => {
            let mut m = Manifest::new("patrol");
            let net = load_network(&mut m, network)?;
            let read_factors = |m: &mut Manifest, path: &Path, reg: usize| -> Result<Factorization, CliError> {
                let text = m.read(path)?;
                parse_factorization(&net, &text, Some(reg)).map_err(in_file(path))
            };
            let (patrol, note) = match kind {
                PatrolKind::E => {
                    let alpha = alpha.ok_or_else(|| CliError::Usage("--kind e needs --alpha".into()))?;
                    m.param("kind", "e");
                    m.param("alpha", fr(&alpha));
                    (e_patrolling(&net, alpha)?, String::new())
                }
                PatrolKind::Complete => {
                    m.param("kind", "complete");
                    let f = match (factorization, best) {
                        (Some(path), _) => read_factors(&mut m, path, 1)?,
                        (None, true) => {
                            let mode = if net.node_count() <= patrol_core::factorization::ENUMERATION_NODE_LIMIT {
                                SearchMode::Exhaustive
                            } else {
                                SearchMode::Heuristic
                            };
                            let b = best_one_factorization(&net, mode)?;
                            m.param("best", if b.certified { "certified" } else { "heuristic" });
                            b.factorization
                        }
                        (None, false) => round_robin_one_factorization(&net)?,
                    };
                    let note = describe_factorization(&net, &f);
                    (complete_patrolling(&net, &f)?, note)
                }
                PatrolKind::Factor => {
                    let path = factorization
                        .as_ref()
                        .ok_or_else(|| CliError::Usage("--kind factor needs --factorization".into()))?;
                    m.param("kind", "factor");
                    m.param("m", regularity);
                    let f = read_factors(&mut m, path, *regularity)?;
                    let note = describe_factorization(&net, &f);
                    (factor_patrolling(&net, &f)?, note)
                }
            };
            eprint!("{note}");
            finish(m, out.output.as_deref(), &write_patrol(&net, &patrol))
        }
        Command::Simulate { network, patrol, attack, alpha, method, trials, grid_step, out } => {
            let mut m = Manifest::new("simulate");
            let net = load_network(&mut m, network)?;
            let text = m.read(patrol)?;
            let p = parse_patrol(&net, &text).map_err(in_file(patrol))?;
            m.param("alpha", fr(alpha));
            let result = match method {
                EvalMethod::Grid => {
                    m.param("method", "grid");
                    m.param("grid_step", fr(grid_step));
                    let grid = GridSpec::new(*grid_step, *grid_step);
                    attacker_best_response(&net, &p, *alpha, &grid)?.to_result()
                }
                EvalMethod::Exact | EvalMethod::Mc => {
                    let path = attack
                        .as_ref()
                        .ok_or_else(|| CliError::Usage("simulate needs --attack for exact and mc methods".into()))?;
                    let text = m.read(path)?;
                    let a = parse_attack(&net, &text).map_err(in_file(path))?;
                    let method = if matches!(method, EvalMethod::Mc) {
                        m.param("method", "mc");
                        m.param("seed", cli.seed);
                        m.param("trials", trials);
                        m.param("jobs", cli.jobs.map_or("default".to_string(), |j| j.to_string()));
                        Method::MonteCarlo { trials: *trials, seed: cli.seed, jobs: cli.jobs }
                    } else {
                        m.param("method", "exact");
                        Method::Exact
                    };
                    evaluate(&net, &p, &a, *alpha, method)?
                }
            };
            let text = format!("{CSV_HEADER}\n{}\n", result.csv_row(&net));
            finish(m, out.output.as_deref(), &text)
        }
        Command::Factorize { network, enumerate, best: _, heuristic, out_dir, out } => {
            let mut m = Manifest::new("factorize");
            let net = load_network(&mut m, network)?;
            if *enumerate {
                m.param("mode", "enumerate");
                if let Some(dir) = out_dir {
                    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
                }
                let mut count = 0u64;
                for f in enumerate_one_factorizations(&net)? {
                    count += 1;
                    if let Some(dir) = out_dir {
                        let path = dir.join(format!("factorization_{count:05}.txt"));
                        std::fs::write(&path, write_factorization(&net, &f))
                            .map_err(|source| CliError::Io { path: path.clone(), source })?;
                    }
                }
                if let Some(dir) = out_dir {
                    m.output(dir);
                }
                let first = round_robin_one_factorization(&net)?;
                let text = format!("count={count}\nfactor_count={}\n", first.len());
                finish(m, out.output.as_deref(), &text)
            } else {
                let mode = if *heuristic && net.node_count() > patrol_core::factorization::ENUMERATION_NODE_LIMIT {
                    SearchMode::Heuristic
                } else {
                    SearchMode::Exhaustive
                };
                m.param("mode", if mode == SearchMode::Exhaustive { "best" } else { "best-heuristic" });
                let b = best_one_factorization(&net, mode)?;
                eprintln!(
                    "# delta*={} certified={} examined={}",
                    fr(&b.delta),
                    b.certified,
                    b.examined
                );
                finish(m, out.output.as_deref(), &write_factorization(&net, &b.factorization))
            }
        }
    }
}
