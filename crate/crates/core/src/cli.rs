//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on data or invariant
//! errors. Reports go to standard output unless `--out` names a file.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{bounds_report, conjecture_scan, ScanParams};
use crate::data::{
    build_migration_association, eu_country_name, eu_game_with, load_association, load_game,
    random_association, EuWeightQuota, MigrationTable,
};
use crate::error::BanzhafError;
use crate::exact::{exact_indices, exact_indices_scoped, IndexReport, MAX_EXACT_PLAYERS};
use crate::game::{AssociationMatrix, PersuasionScope, VotingGame};
use crate::report::{Cell, Document, Format, Table, DEFAULT_PRECISION};
use crate::sampling::{
    confidence_interval, default_selfbounding_b, derived_seed, estimate_indices_scoped,
    required_samples, IntervalMethod,
};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "banzhaf",
    version,
    about = "Banzhaf power indices for weighted voting games"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,

    /// Decimal places for real-valued output.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,

    /// Write the report to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Table,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Table => Format::Table,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodArg {
    Hoeffding,
    Student,
    Selfbounding,
}

impl From<MethodArg> for IntervalMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Hoeffding => IntervalMethod::Hoeffding,
            MethodArg::Student => IntervalMethod::Student,
            MethodArg::Selfbounding => IntervalMethod::SelfBounding,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum ScopeArg {
    #[default]
    All,
    Members,
}

impl From<ScopeArg> for PersuasionScope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::All => PersuasionScope::AllPlayers,
            ScopeArg::Members => PersuasionScope::CoalitionMembers,
        }
    }
}

#[derive(Debug, Args)]
pub struct GameArgs {
    /// Game file (JSON), or `eu` for the embedded EU council game.
    #[arg(long, value_name = "FILE")]
    pub game: String,

    /// Association matrix file (JSON array of rows); overrides the game's own.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["identity", "classical"])]
    pub association: Option<PathBuf>,

    /// Use the identity association matrix.
    #[arg(long, conflicts_with = "classical")]
    pub identity: bool,

    /// Ignore any association matrix in the game file.
    #[arg(long)]
    pub classical: bool,

    /// Players counted in the persuasion load.
    #[arg(long, value_enum, default_value_t = ScopeArg::All)]
    pub scope: ScopeArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact indices by full coalition enumeration.
    Exact(GameArgs),
    /// Monte Carlo estimates with confidence intervals.
    Approx {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Hoeffding)]
        method: MethodArg,
        /// Samples per player; planned from epsilon and delta when absent.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: u64,
        /// Bound B for the self-bounding interval; defaults per player.
        #[arg(long = "bound-b", value_name = "B")]
        bound_b: Option<f64>,
        /// Also run exact enumeration and report the absolute errors.
        #[arg(long)]
        compare_exact: bool,
    },
    /// Index bounds with violation flags against exact indices.
    Bounds {
        #[arg(long, value_name = "FILE")]
        game: String,
        #[arg(long, value_name = "ID")]
        player: Option<String>,
    },
    /// EU council study, with migration-based or random associations.
    Eu {
        /// Migration CSV (header of country ids, then a square matrix of flows).
        #[arg(long, value_name = "FILE")]
        migration: Option<PathBuf>,
        /// Average over independent random association matrices.
        #[arg(long)]
        random_association: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        runs: u64,
        /// Use 74% of the votes as is (215.34) instead of whole votes (215).
        #[arg(long)]
        exact_vote_quota: bool,
    },
    /// Scan random games for the 2w/N bound on normalized indices.
    Conjecture {
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        min_players: usize,
        #[arg(long, default_value_t = 12)]
        max_players: usize,
        #[arg(long, default_value_t = 20)]
        max_weight: u32,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl From<BanzhafError> for CliError {
    fn from(e: BanzhafError) -> Self {
        match e {
            BanzhafError::InvalidParameter(_) | BanzhafError::MissingParameter(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Data(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and writes
/// the report. Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let result = execute(&cli).and_then(|doc| {
        let text = doc.render(cli.format.into(), cli.precision);
        match &cli.out {
            Some(path) => fs::write(path, text)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display()))),
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Data(format!("stdout: {e}"))),
        }
    });
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Data(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_DATA
        }
    }
}

fn execute(cli: &Cli) -> CliResult<Document> {
    match &cli.command {
        Command::Exact(args) => cmd_exact(args),
        Command::Approx {
            game,
            epsilon,
            delta,
            method,
            samples,
            seed,
            bound_b,
            compare_exact,
        } => cmd_approx(
            game,
            *epsilon,
            *delta,
            (*method).into(),
            *samples,
            *seed,
            *bound_b,
            *compare_exact,
        ),
        Command::Bounds { game, player } => cmd_bounds(game, player.as_deref()),
        Command::Eu {
            migration,
            random_association,
            seed,
            runs,
            exact_vote_quota,
        } => cmd_eu(
            migration.as_deref(),
            *random_association,
            *seed,
            *runs,
            *exact_vote_quota,
        ),
        Command::Conjecture {
            trials,
            seed,
            min_players,
            max_players,
            max_weight,
        } => cmd_conjecture(
            &ScanParams {
                min_players: *min_players,
                max_players: *max_players,
                max_weight: *max_weight,
            },
            *trials,
            *seed,
        ),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn resolve_game(spec: &str) -> CliResult<VotingGame> {
    if spec == "eu" {
        return Ok(eu_game_with(EuWeightQuota::WholeVotes)?);
    }
    let path = Path::new(spec);
    load_game(&read(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn resolve_association(args: &GameArgs, game: &VotingGame) -> CliResult<Option<AssociationMatrix>> {
    if args.classical {
        return Ok(None);
    }
    if args.identity {
        return Ok(Some(AssociationMatrix::identity(game.players())));
    }
    if let Some(path) = &args.association {
        let phi = load_association(&read(path)?)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        game.check_association(&phi)?;
        return Ok(Some(phi));
    }
    Ok(game.association().cloned())
}

fn game_meta(doc: &mut Document, game: &VotingGame) {
    doc.meta("players", game.players());
    doc.meta(
        "quotas",
        game.quotas()
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    for (k, v) in game.metadata() {
        doc.meta(&format!("game.{k}"), v.as_str());
    }
}

fn index_table(name: &str, report: &IndexReport) -> Table {
    let mut t = Table::new(name, &["player", "swing_count", "absolute", "normalized"]);
    for p in &report.players {
        t.push(vec![
            p.id.as_str().into(),
            p.swing_count.into(),
            p.absolute.into(),
            p.normalized.into(),
        ]);
    }
    t
}

fn cmd_exact(args: &GameArgs) -> CliResult<Document> {
    let game = resolve_game(&args.game)?;
    let phi = resolve_association(args, &game)?;
    let report = exact_indices_scoped(&game, phi.as_ref(), args.scope.into())?;
    let mut doc = Document::new("exact Banzhaf indices");
    game_meta(&mut doc, &game);
    doc.meta("mode", format!("{:?}", report.mode).to_lowercase());
    if phi.is_some() {
        let scope = match report.scope {
            PersuasionScope::AllPlayers => "all",
            PersuasionScope::CoalitionMembers => "members",
        };
        doc.meta("scope", scope);
    }
    doc.meta("coalitions_per_player", report.coalitions_per_player);
    doc.meta("total_swings", report.total_swings);
    doc.tables.push(index_table("indices", &report));
    Ok(doc)
}

#[allow(clippy::too_many_arguments)]
fn cmd_approx(
    args: &GameArgs,
    epsilon: f64,
    delta: f64,
    method: IntervalMethod,
    samples: Option<u64>,
    seed: u64,
    bound_b: Option<f64>,
    compare_exact: bool,
) -> CliResult<Document> {
    let game = resolve_game(&args.game)?;
    let phi = resolve_association(args, &game)?;
    let mode = if phi.is_some() {
        crate::IndexMode::Association
    } else {
        crate::IndexMode::Classical
    };
    let bs: Vec<f64> = match bound_b {
        Some(b) => vec![b; game.players()],
        None => (0..game.players())
            .map(|i| default_selfbounding_b(&game, i, epsilon, mode))
            .collect::<Result<_, _>>()?,
    };
    let n = match samples {
        Some(n) => n,
        None => match method {
            IntervalMethod::Hoeffding => required_samples(epsilon, delta, method, None, None)?,
            // Worst-case Bernoulli variance.
            IntervalMethod::Student => required_samples(epsilon, delta, method, Some(0.25), None)?,
            IntervalMethod::SelfBounding => bs
                .iter()
                .map(|&b| required_samples(epsilon, delta, method, None, Some(b)))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .max()
                .unwrap_or(1),
        },
    };
    let est = estimate_indices_scoped(&game, phi.as_ref(), n, seed, args.scope.into())?;
    let exact = if compare_exact {
        if game.players() > MAX_EXACT_PLAYERS {
            return Err(CliError::Usage(format!(
                "--compare-exact needs at most {MAX_EXACT_PLAYERS} players"
            )));
        }
        Some(exact_indices_scoped(
            &game,
            phi.as_ref(),
            args.scope.into(),
        )?)
    } else {
        None
    };

    let mut doc = Document::new("Monte Carlo Banzhaf estimates");
    game_meta(&mut doc, &game);
    doc.meta("mode", format!("{mode:?}").to_lowercase());
    doc.meta("method", method.to_string());
    doc.meta("epsilon", epsilon);
    doc.meta("delta", delta);
    doc.meta("samples", n);
    doc.meta("samples_planned", samples.is_none());
    doc.meta("seed", seed);

    let mut cols = vec![
        "player",
        "estimate",
        "normalized",
        "swing_count",
        "sample_variance",
        "lower",
        "upper",
        "halfwidth",
    ];
    if method == IntervalMethod::SelfBounding {
        cols.push("bound_b");
    }
    if exact.is_some() {
        cols.extend(["exact", "abs_error", "exact_normalized"]);
    }
    let mut t = Table::new("estimates", &cols);
    let normalized = est.normalized();
    for (i, p) in est.players.iter().enumerate() {
        let ci = confidence_interval(&est, i, delta, method, Some(bs[i]))?;
        let mut row: Vec<Cell> = vec![
            p.id.as_str().into(),
            p.estimate.into(),
            normalized[i].into(),
            p.swing_count.into(),
            p.sample_variance.into(),
            ci.lower.into(),
            ci.upper.into(),
            ci.halfwidth.into(),
        ];
        if method == IntervalMethod::SelfBounding {
            row.push(bs[i].into());
        }
        if let Some(ex) = &exact {
            let e = &ex.players[i];
            row.extend([
                e.absolute.into(),
                (p.estimate - e.absolute).abs().into(),
                e.normalized.into(),
            ]);
        }
        t.push(row);
    }
    doc.tables.push(t);
    Ok(doc)
}

fn cmd_bounds(spec: &str, player: Option<&str>) -> CliResult<Document> {
    let game = resolve_game(spec)?;
    let exact = if game.players() <= MAX_EXACT_PLAYERS {
        Some(exact_indices(&game, None)?)
    } else {
        None
    };
    let report = bounds_report(&game, exact.as_ref())?;
    let only = match player {
        Some(id) => Some(
            game.player_index(id)
                .ok_or_else(|| CliError::Usage(format!("unknown player `{id}`")))?,
        ),
        None => None,
    };
    let g = &report.global;
    let mut doc = Document::new("Banzhaf index bounds");
    game_meta(&mut doc, &game);
    doc.meta("m_low", g.window.m_low);
    doc.meta(
        "m_high",
        g.window.m_high.map_or(Cell::Text("inf".into()), Cell::from),
    );
    doc.meta("bound1", g.bound1);
    doc.meta("bound2", g.bound2);
    doc.meta("max_exact_index", g.max_exact_index);
    doc.meta("bound1_violated", g.bound1_violated);
    doc.meta("bound2_violated", g.bound2_violated);
    for (k, v) in &report.interpretation {
        doc.meta(&format!("reading.{k}"), v.as_str());
    }
    let mut t = Table::new(
        "players",
        &["player", "ht_bound", "t", "h", "exact", "ht_violated"],
    );
    for (i, p) in report.players.iter().enumerate() {
        if only.is_some_and(|o| o != i) {
            continue;
        }
        t.push(vec![
            p.id.as_str().into(),
            p.ht_bound.into(),
            p.t.into(),
            p.h.into(),
            p.exact.into(),
            p.ht_violated.into(),
        ]);
    }
    doc.tables.push(t);
    Ok(doc)
}

fn cmd_eu(
    migration: Option<&Path>,
    random: bool,
    seed: u64,
    runs: u64,
    exact_vote_quota: bool,
) -> CliResult<Document> {
    let rule = if exact_vote_quota {
        EuWeightQuota::Exact
    } else {
        EuWeightQuota::WholeVotes
    };
    let game = eu_game_with(rule)?;
    let m = game.players();
    let wta = exact_indices(&game, None)?;

    let immgr = match migration {
        Some(path) => {
            let table = MigrationTable::from_csv(&read(path)?)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            if table.labels.as_slice() != game.player_ids() {
                return Err(CliError::Data(format!(
                    "{}: migration header must list {} in table order",
                    path.display(),
                    game.player_ids().join(",")
                )));
            }
            let phi = build_migration_association(&table)?;
            Some(exact_indices(&game, Some(&phi))?)
        }
        None => None,
    };

    let random_runs = if random {
        if runs == 0 {
            return Err(CliError::Usage("--runs must be at least 1".into()));
        }
        let mut per_run = Vec::with_capacity(runs as usize);
        for r in 0..runs {
            let phi = random_association(m, derived_seed(seed, r))?;
            per_run.push(exact_indices(&game, Some(&phi))?.normalized());
        }
        Some(per_run)
    } else {
        None
    };

    let mut doc = Document::new("EU council voting power");
    game_meta(&mut doc, &game);
    if random {
        doc.meta("random_seed", seed);
        doc.meta("random_runs", runs);
    }
    let mut cols = vec!["country", "name", "weight", "popln", "WTA", "WTA_absolute"];
    if immgr.is_some() {
        cols.push("WA-immgr");
    }
    if random_runs.is_some() {
        cols.push("WA-Random");
    }
    let mut t = Table::new("indices", &cols);
    for i in 0..m {
        let id = &game.player_ids()[i];
        let mut row: Vec<Cell> = vec![
            id.as_str().into(),
            eu_country_name(id).unwrap_or("").into(),
            game.weight(i)[0].round().to_string().into(),
            game.weight(i)[1].into(),
            wta.players[i].normalized.into(),
            wta.players[i].absolute.into(),
        ];
        if let Some(r) = &immgr {
            row.push(r.players[i].normalized.into());
        }
        if let Some(runs) = &random_runs {
            let mean = runs.iter().map(|r| r[i]).sum::<f64>() / runs.len() as f64;
            row.push(mean.into());
        }
        t.push(row);
    }
    doc.tables.push(t);

    if let Some(per_run) = &random_runs {
        let mut cols: Vec<&str> = vec!["run"];
        cols.extend(game.player_ids().iter().map(String::as_str));
        let mut rt = Table::new("random_runs", &cols);
        for (r, vals) in per_run.iter().enumerate() {
            let mut row: Vec<Cell> = vec![(r as u64).into()];
            row.extend(vals.iter().map(|&v| Cell::Float(v)));
            rt.push(row);
        }
        doc.tables.push(rt);
    }
    Ok(doc)
}

fn cmd_conjecture(params: &ScanParams, trials: u64, seed: u64) -> CliResult<Document> {
    let report = conjecture_scan(params, trials, seed)?;
    let mut doc = Document::new("normalized index vs 2w/N scan");
    doc.meta("seed", seed);
    doc.meta("min_players", params.min_players);
    doc.meta("max_players", params.max_players);
    doc.meta("max_weight", params.max_weight as u64);
    doc.meta("games_scanned", report.games_scanned);
    doc.meta("counterexamples", report.counterexamples.len());
    doc.meta("min_slack", report.min_slack);
    let mut t = Table::new(
        "counterexamples",
        &["weights", "quota", "player", "normalized_index", "limit"],
    );
    for c in &report.counterexamples {
        t.push(vec![
            c.weights
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(" ")
                .into(),
            c.quota.into(),
            c.player.into(),
            c.normalized_index.into(),
            c.limit.into(),
        ]);
    }
    doc.tables.push(t);
    Ok(doc)
}
