mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use crooked::render::Chart;

/// Crooked planes in AdS and Minkowski space.
///
/// Exit status: 0 on success, 2 when the tested criterion comes out negative, 1 on errors.
#[derive(Parser, Debug)]
#[command(name = "crooked", version)]
struct Cli {
    /// Seed for sampled quantities; overrides the scene metadata.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance for marginal flags; overrides the scene metadata.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Endpoint disjointness test for pairs of crooked planes (or half-spaces).
    CheckDisjoint {
        scene: PathBuf,
        /// Object indices of one pair; default is every pair.
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
    },
    /// Factor an element as a product of stem-quadrant elements.
    Decompose {
        scene: PathBuf,
        /// Matrix entries `a,b,c,d` (row-major).
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        element: Vec<f64>,
        /// Objects supplying the two oriented lines; default is the first two that have one.
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
    },
    /// Build or verify a crooked Schottky domain.
    Schottky {
        #[command(subcommand)]
        action: SchottkyCmd,
    },
    /// Obstruction certificate against crooked fundamental domains.
    Certify {
        spec: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Word, comma separated letters (`1,2,-1,-2`); needed for one-boundary and elliptic.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        word: Vec<i32>,
        /// Longest word searched for parabolics (not-cc).
        #[arg(long, default_value_t = 4)]
        maxlen: usize,
    },
    /// Minkowski-space commands.
    Mink {
        #[command(subcommand)]
        action: MinkCmd,
    },
    /// Convergence table of the rescaled AdS family toward its Minkowski limit, as CSV.
    Transition {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        spec: PathBuf,
        /// Samples per plane for the Hausdorff estimate.
        #[arg(long, default_value_t = 400)]
        samples: usize,
    },
    /// Mesh (OBJ) or slice (SVG) of a crooked plane in an affine chart.
    Render {
        scene: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = ChartArg::Y4)]
        chart: ChartArg,
        #[arg(long, default_value_t = 24)]
        res: usize,
        /// Which crooked record; default is the first.
        #[arg(long)]
        index: Option<usize>,
        /// Height of the SVG slice; default 0, or the median vertex height when 0 misses.
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum SchottkyCmd {
    /// Reads a `schottky_input` record, writes a scene with `rep_pair` and `domain_data`.
    Build { spec: PathBuf },
    /// Checks a `rep_pair` against a `domain_data` over words up to `--radius`.
    Verify {
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MinkCmd {
    CheckDisjoint {
        scene: PathBuf,
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    OneBoundary,
    Elliptic,
    NotCc,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ChartArg {
    Y4,
    Y1,
}

impl From<ChartArg> for Chart {
    fn from(c: ChartArg) -> Chart {
        match c {
            ChartArg::Y4 => Chart::Y4,
            ChartArg::Y1 => Chart::Y1,
        }
    }
}

fn pair_of(v: Option<Vec<usize>>) -> Option<(usize, usize)> {
    v.map(|p| (p[0], p[1]))
}

fn run(cli: Cli) -> anyhow::Result<commands::Outcome> {
    let opts = commands::Opts { seed: cli.seed, tol: cli.tol };
    match cli.cmd {
        Cmd::CheckDisjoint { scene, pair } => commands::check_disjoint(&scene, pair_of(pair), opts),
        Cmd::Decompose { scene, element, pair } => commands::decompose(&scene, &element, pair_of(pair)),
        Cmd::Schottky { action: SchottkyCmd::Build { spec } } => commands::schottky_build(&spec),
        Cmd::Schottky { action: SchottkyCmd::Verify { spec, radius } } => commands::schottky_verify(&spec, radius),
        Cmd::Certify { spec, kind, word, maxlen } => {
            let kind = match kind {
                KindArg::OneBoundary => commands::Kind::OneBoundary(word),
                KindArg::Elliptic => commands::Kind::Elliptic(word),
                KindArg::NotCc => commands::Kind::NotCc(maxlen),
            };
            commands::certify(&spec, kind)
        }
        Cmd::Mink { action: MinkCmd::CheckDisjoint { scene, pair } } => commands::mink_check(&scene, pair_of(pair), opts),
        Cmd::Transition { t, spec, samples } => commands::transition(&spec, t, samples, opts),
        Cmd::Render { scene, output, chart, res, index, z } => {
            commands::render(&scene, &output, chart.into(), res, index, z)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // usage errors exit 1; exit 2 is reserved for negative results
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(if out.positive { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
