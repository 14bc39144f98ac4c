//! Command-line flags and the validated run configuration.
//!
//! Every flag can also be set through an environment variable with the
//! `CUBIFS_` prefix, e.g. `CUBIFS_SCALE_M=5`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cubifs::{
    AggregateOptions, EmOptions, LoadOptions, MissingPolicy, RangePolicy, RatingScale, Variant,
    WeightMode, ZeroMassPolicy,
};

use crate::error::{CliError, CliResult};
use crate::table::Format;

#[derive(Debug, Parser)]
#[command(
    name = "cubifs",
    version,
    about = "CUB model fitting and intuitionistic fuzzy satisfaction scores"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a CUB model to every item
    Fit { csv: PathBuf },
    /// Membership, non-membership and uncertainty per item and category
    Fuzzify { csv: PathBuf },
    /// Item weights from fuzzy proportions
    Weights { csv: PathBuf },
    /// Item weights and the overall membership, non-membership and uncertainty scores
    Scores { csv: PathBuf },
    /// Write a synthetic rating matrix drawn from CUB models
    Simulate(SimulateArgs),
    /// Write every table plus one profile series per item into a directory
    Report {
        csv: PathBuf,
        #[arg(long, env = "CUBIFS_OUT_DIR")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Item parameters as NAME=PI:XI; repeat for more items
    #[arg(long = "param", required = true, value_name = "NAME=PI:XI")]
    pub params: Vec<String>,
    /// Number of respondents
    #[arg(short, long, env = "CUBIFS_N")]
    pub n: usize,
    /// Output file; stdout when absent
    #[arg(short, long, env = "CUBIFS_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Zani,
    Cub,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Zani => Variant::Zani,
            VariantArg::Cub => Variant::CubIfs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightsArg {
    /// Fuzzy proportions of membership
    Mu,
    /// Fuzzy proportions of uncertainty
    U,
}

impl From<WeightsArg> for WeightMode {
    fn from(w: WeightsArg) -> Self {
        match w {
            WeightsArg::Mu => WeightMode::MembershipProportions,
            WeightsArg::U => WeightMode::UncertaintyProportions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MissingArg {
    /// Drop respondents with missing ratings from aggregation
    Listwise,
    /// Fail on any missing rating
    Strict,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Number of categories
    #[arg(long, global = true, default_value_t = 7, env = "CUBIFS_SCALE_M")]
    pub scale_m: u32,
    /// Indifference category [default: middle category]
    #[arg(long, global = true, env = "CUBIFS_IP")]
    pub ip: Option<u32>,
    /// Last negative category [default: ip - 1]
    #[arg(long, global = true, env = "CUBIFS_LB")]
    pub lb: Option<u32>,
    /// First category with full membership [default: m]
    #[arg(long, global = true, env = "CUBIFS_UB")]
    pub ub: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = VariantArg::Cub, env = "CUBIFS_VARIANT")]
    pub variant: VariantArg,
    /// Weight system [default: mu for zani, u for cub]
    #[arg(long, global = true, value_enum, env = "CUBIFS_WEIGHTS")]
    pub weights: Option<WeightsArg>,
    /// EM stopping tolerance on the log-likelihood change
    #[arg(long, global = true, default_value_t = 1e-6, env = "CUBIFS_TOL")]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 500, env = "CUBIFS_MAX_ITER")]
    pub max_iter: usize,
    #[arg(long, global = true, default_value_t = 0, env = "CUBIFS_SEED")]
    pub seed: u64,
    /// Cell text that marks a missing rating
    #[arg(long, global = true, default_value = "", env = "CUBIFS_MISSING_TOKEN")]
    pub missing_token: String,
    #[arg(long, global = true, value_enum, default_value_t = MissingArg::Listwise, env = "CUBIFS_MISSING")]
    pub missing: MissingArg,
    /// Treat out-of-range ratings as missing instead of rejecting the row
    #[arg(long, global = true, env = "CUBIFS_LENIENT")]
    pub lenient: bool,
    /// Only use these columns, in this order
    #[arg(long, global = true, value_delimiter = ',', env = "CUBIFS_ITEMS")]
    pub items: Option<Vec<String>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv, env = "CUBIFS_FORMAT")]
    pub format: Format,
    /// Decimal digits in TSV output
    #[arg(long, global = true, default_value_t = 4, env = "CUBIFS_DIGITS")]
    pub digits: usize,
    /// Use this pi for an item instead of the fitted one; repeatable
    #[arg(
        long = "pi-override",
        global = true,
        value_name = "ITEM=VALUE",
        value_delimiter = ',',
        env = "CUBIFS_PI_OVERRIDE"
    )]
    pub pi_override: Vec<String>,
    /// Emit both the classic and the CUB-adjusted pipeline
    #[arg(long, global = true, env = "CUBIFS_COMPARE")]
    pub compare: bool,
    /// Fail on degenerate fuzzy proportions instead of clamping them
    #[arg(long, global = true, env = "CUBIFS_STRICT_PROPORTIONS")]
    pub strict_proportions: bool,
    /// Fail when a membership block has no observed mass instead of flattening it
    #[arg(long, global = true, env = "CUBIFS_STRICT_NORMALIZATION")]
    pub strict_normalization: bool,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scale: RatingScale,
    pub variant: Variant,
    pub mode: WeightMode,
    pub em: EmOptions,
    pub seed: u64,
    pub load: LoadOptions,
    pub aggregate: AggregateOptions,
    pub zero_mass: ZeroMassPolicy,
    pub format: Format,
    pub digits: usize,
    pub pi_overrides: BTreeMap<String, f64>,
    pub compare: bool,
}

impl RunConfig {
    pub fn from_opts(o: &GlobalOpts) -> CliResult<Self> {
        let m = o.scale_m;
        if m <= 3 {
            return Err(CliError::usage(format!(
                "--scale-m must be greater than 3, got {m}"
            )));
        }
        let ip = o.ip.unwrap_or(m.div_ceil(2));
        let lb = o.lb.unwrap_or(ip.saturating_sub(1));
        let ub = o.ub.unwrap_or(m);
        let scale = RatingScale::with_indifference(m, ip, lb, ub)
            .map_err(|e| CliError::usage(e.to_string()))?;
        if o.tol.is_nan() || o.tol <= 0.0 {
            return Err(CliError::usage(format!(
                "--tol must be positive, got {}",
                o.tol
            )));
        }
        if o.max_iter == 0 {
            return Err(CliError::usage("--max-iter must be at least 1"));
        }
        let variant = Variant::from(o.variant);
        let mode = o
            .weights
            .map(WeightMode::from)
            .unwrap_or(cubifs::default_mode(variant));
        Ok(Self {
            scale,
            variant,
            mode,
            em: EmOptions {
                tolerance: o.tol,
                max_iter: o.max_iter,
            },
            seed: o.seed,
            load: LoadOptions {
                missing_token: o.missing_token.clone(),
                range_policy: if o.lenient {
                    RangePolicy::Coerce
                } else {
                    RangePolicy::Reject
                },
                columns: o.items.clone(),
            },
            aggregate: AggregateOptions {
                missing: match o.missing {
                    MissingArg::Listwise => MissingPolicy::Listwise,
                    MissingArg::Strict => MissingPolicy::Strict,
                },
                strict_proportions: o.strict_proportions,
            },
            zero_mass: if o.strict_normalization {
                ZeroMassPolicy::Error
            } else {
                ZeroMassPolicy::Flat
            },
            format: o.format,
            digits: o.digits,
            pi_overrides: parse_overrides(&o.pi_override)?,
            compare: o.compare,
        })
    }

    /// The (variant, weight mode) pipelines to run.
    pub fn pipelines(&self) -> Vec<(Variant, WeightMode)> {
        if self.compare {
            vec![
                (Variant::Zani, WeightMode::MembershipProportions),
                (Variant::CubIfs, WeightMode::UncertaintyProportions),
            ]
        } else {
            vec![(self.variant, self.mode)]
        }
    }
}

fn parse_overrides(raw: &[String]) -> CliResult<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for entry in raw {
        let (item, value) = entry.split_once('=').ok_or_else(|| {
            CliError::usage(format!("--pi-override expects ITEM=VALUE, got `{entry}`"))
        })?;
        let v: f64 = value.trim().parse().map_err(|_| {
            CliError::usage(format!("--pi-override value `{value}` is not a number"))
        })?;
        if !(0.0..=1.0).contains(&v) {
            return Err(CliError::usage(format!(
                "--pi-override for `{item}` must lie in [0, 1], got {v}"
            )));
        }
        out.insert(item.trim().to_string(), v);
    }
    Ok(out)
}

/// Parses `NAME=PI:XI`.
pub fn parse_item_params(raw: &str) -> CliResult<(String, f64, f64)> {
    let bad = || CliError::usage(format!("--param expects NAME=PI:XI, got `{raw}`"));
    let (name, rest) = raw.split_once('=').ok_or_else(bad)?;
    let (pi, xi) = rest.split_once(':').ok_or_else(bad)?;
    let pi: f64 = pi.trim().parse().map_err(|_| bad())?;
    let xi: f64 = xi.trim().parse().map_err(|_| bad())?;
    if name.trim().is_empty() {
        return Err(bad());
    }
    Ok((name.trim().to_string(), pi, xi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("cubifs").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults() {
        let cli = parse(&["fit", "x.csv"]);
        let cfg = RunConfig::from_opts(&cli.opts).unwrap();
        assert_eq!(cfg.scale, RatingScale::new(7).unwrap());
        assert_eq!(cfg.variant, Variant::CubIfs);
        assert_eq!(cfg.mode, WeightMode::UncertaintyProportions);
        assert_eq!(cfg.digits, 4);
        assert_eq!(cfg.em, EmOptions::default());
    }

    #[test]
    fn zani_pairs_with_membership_weights() {
        let cli = parse(&["--variant", "zani", "scores", "x.csv"]);
        let cfg = RunConfig::from_opts(&cli.opts).unwrap();
        assert_eq!(cfg.mode, WeightMode::MembershipProportions);
        let cli = parse(&["scores", "--variant", "zani", "--weights", "u", "x.csv"]);
        assert_eq!(
            RunConfig::from_opts(&cli.opts).unwrap().mode,
            WeightMode::UncertaintyProportions
        );
    }

    #[test]
    fn overrides_parse_and_validate() {
        let cli = parse(&[
            "--pi-override",
            "a=0.5",
            "--pi-override",
            "b=1,c=0",
            "fuzzify",
            "x.csv",
        ]);
        let cfg = RunConfig::from_opts(&cli.opts).unwrap();
        assert_eq!(cfg.pi_overrides.len(), 3);
        assert_eq!(cfg.pi_overrides["b"], 1.0);
        let cli = parse(&["--pi-override", "a=1.5", "fuzzify", "x.csv"]);
        assert!(RunConfig::from_opts(&cli.opts).is_err());
        let cli = parse(&["--pi-override", "a", "fuzzify", "x.csv"]);
        assert!(RunConfig::from_opts(&cli.opts).is_err());
    }

    #[test]
    fn bad_scale_is_usage_error() {
        let cli = parse(&["--scale-m", "3", "fit", "x.csv"]);
        assert!(RunConfig::from_opts(&cli.opts).is_err());
        let cli = parse(&["--lb", "5", "fit", "x.csv"]);
        assert!(RunConfig::from_opts(&cli.opts).is_err());
    }

    #[test]
    fn item_params() {
        assert_eq!(
            parse_item_params("willingn=0.8567:0.1167").unwrap(),
            ("willingn".into(), 0.8567, 0.1167)
        );
        assert!(parse_item_params("x=0.5").is_err());
        assert!(parse_item_params("=0.5:0.5").is_err());
    }
}
