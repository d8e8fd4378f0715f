use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize};

use branchcones::cones::{BetaShift, ConeVariant, LambdaBound, MuSign};
use branchcones::{ReducedWord, RootSystem, Weight};

#[derive(Debug, Parser)]
#[command(name = "branchcones", version, about = "Branching cones, BZ triangles and exact lattice-point counts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Check every count against the character oracle; exit 4 on disagreement.
    #[arg(long, global = true)]
    pub verify: bool,

    /// Worker threads for enumeration.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Result layout.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Direction of the per-letter string bound.
    #[arg(long, global = true, value_parser = kebab::<LambdaBound>)]
    pub lambda_bound: Option<LambdaBound>,

    /// Sign convention for the derived tensor-cone weight.
    #[arg(long, global = true, value_parser = kebab::<MuSign>)]
    pub mu_sign: Option<MuSign>,

    /// How the β pairing enters the second trail family.
    #[arg(long, global = true, value_parser = kebab::<BetaShift>)]
    pub beta_shift: Option<BetaShift>,
}

impl GlobalArgs {
    pub fn variant(&self) -> ConeVariant {
        let d = ConeVariant::default();
        ConeVariant {
            lambda_bound: self.lambda_bound.unwrap_or(d.lambda_bound),
            mu_sign: self.mu_sign.unwrap_or(d.mu_sign),
            beta_shift: self.beta_shift.unwrap_or(d.beta_shift),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    /// One line of compact JSON.
    #[default]
    Json,
    /// Indented JSON.
    Pretty,
}

/// Parses a kebab-case enum value through its serde representation.
fn kebab<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count string-cone points over λ (the dimension of V(λ)).
    Dim(DimArgs),
    /// Count tensor-cone points: the multiplicity of V(μ) in V(λ) ⊗ V(β).
    Lr(LrArgs),
    /// Count Levi-cone points per Levi weight η.
    Branch(BranchArgs),
    /// Count tree fiber-cone points and quilts for given leaf weights.
    Invariant(InvariantArgs),
    /// Enumerate BZ triangles with the given boundary.
    Bz(BzArgs),
    /// Write a cone's H-representation and a JSON block sidecar.
    ConeExport(ConeExportArgs),
    /// List i-trails and their d-vectors.
    Itrails(ItrailsArgs),
    /// Check the face and degeneracy pullback identities on random data.
    MapsCheck(MapsCheckArgs),
    /// Run a JSON job file.
    Run(RunArgs),
}

/// `"default"` or an explicit comma-separated word.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum WordChoice {
    #[default]
    Default,
    Explicit(ReducedWord),
}

impl FromStr for WordChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim() == "default" {
            Ok(WordChoice::Default)
        } else {
            ReducedWord::parse(s).map(WordChoice::Explicit)
        }
    }
}

impl fmt::Display for WordChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordChoice::Default => write!(f, "default"),
            WordChoice::Explicit(w) => write!(f, "{w}"),
        }
    }
}

impl<'de> Deserialize<'de> for WordChoice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            Letters(Vec<usize>),
        }
        match Raw::deserialize(d)? {
            Raw::Name(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Letters(l) => Ok(WordChoice::Explicit(ReducedWord(l))),
        }
    }
}

impl WordChoice {
    /// The word itself, with the default being the lexicographically smallest word for `w_0`.
    pub fn resolve(&self, rs: &RootSystem) -> ReducedWord {
        match self {
            WordChoice::Default => rs.longest_element_word(&(1..=rs.rank()).collect()),
            WordChoice::Explicit(w) => w.clone(),
        }
    }
}

pub fn parse_weight(s: &str) -> Result<Weight, String> {
    Weight::parse(s)
}

pub fn parse_subset(s: &str) -> Result<Subset, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|e| format!("bad index {p:?}: {e}")))
        .collect::<Result<BTreeSet<_>, _>>()
        .map(Subset)
}

/// A set of simple-root indices, written `1,2` (empty string for ∅).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subset(pub BTreeSet<usize>);

/// `v:1,2,1`, the string for internal vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct VertexString {
    pub vertex: usize,
    pub word: ReducedWord,
}

pub fn parse_vertex_string(s: &str) -> Result<VertexString, String> {
    let (v, w) = s.split_once(':').ok_or_else(|| format!("expected VERTEX:WORD, got {s:?}"))?;
    Ok(VertexString {
        vertex: v.trim().parse().map_err(|e| format!("bad vertex {v:?}: {e}"))?,
        word: ReducedWord::parse(w)?,
    })
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DimArgs {
    #[arg(long)]
    pub rank: usize,
    #[arg(long, value_parser = parse_weight)]
    pub lambda: Weight,
    /// Reduced word for w0, or "default".
    #[arg(long, default_value = "default")]
    #[serde(default)]
    pub word: WordChoice,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct LrArgs {
    #[arg(long)]
    pub rank: usize,
    #[arg(long, value_parser = parse_weight)]
    pub lambda: Weight,
    #[arg(long, value_parser = parse_weight)]
    pub beta: Weight,
    #[arg(long, value_parser = parse_weight)]
    pub mu: Weight,
    #[arg(long, default_value = "default")]
    #[serde(default)]
    pub word: WordChoice,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct BranchArgs {
    #[arg(long)]
    pub rank: usize,
    /// Simple roots of the Levi subgroup, e.g. `1,2`.
    #[arg(long, value_parser = parse_subset, default_value = "")]
    #[serde(default)]
    pub subset: Subset,
    #[arg(long, value_parser = parse_weight)]
    pub lambda: Weight,
    /// Word for the longest element of the Levi Weyl group; with `--i2`, replaces the default adapted string.
    #[arg(long, requires = "i2", value_parser = ReducedWord::parse)]
    #[serde(default)]
    pub i1: Option<ReducedWord>,
    #[arg(long, requires = "i1", value_parser = ReducedWord::parse)]
    #[serde(default)]
    pub i2: Option<ReducedWord>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Cone,
    Quilt,
    #[default]
    Both,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct InvariantArgs {
    #[arg(long)]
    pub rank: usize,
    /// Edge list such as `0-4,1-4,4-5,2-5,3-5`; leaf 0 is the source.
    #[arg(long)]
    pub tree: String,
    /// Leaf weights in leaf order 0..n (repeat the flag).
    #[arg(long = "leaf", value_parser = parse_weight, required = true)]
    pub leaves: Vec<Weight>,
    /// Per-vertex string `VERTEX:WORD` (repeat the flag); others use the default word.
    #[arg(long = "string", value_parser = parse_vertex_string)]
    #[serde(default)]
    pub strings: Vec<VertexString>,
    #[arg(long, value_enum, default_value = "both")]
    #[serde(default)]
    pub method: Method,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct BzArgs {
    /// The group is SL_m.
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_parser = parse_weight)]
    pub l1: Weight,
    #[arg(long, value_parser = parse_weight)]
    pub l2: Weight,
    #[arg(long, value_parser = parse_weight)]
    pub l3: Weight,
    /// Include every filling in the output.
    #[arg(long)]
    #[serde(default)]
    pub list: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeKind {
    String,
    C3,
    Levi,
    Tree,
    Bz,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConeExportArgs {
    #[arg(long, value_enum)]
    pub kind: ConeKind,
    /// Rank of SL_{rank+1}; for `bz` this is m − 1.
    #[arg(long)]
    pub rank: usize,
    #[arg(long, default_value = "default")]
    #[serde(default)]
    pub word: WordChoice,
    #[arg(long, value_parser = parse_subset, default_value = "")]
    #[serde(default)]
    pub subset: Subset,
    #[arg(long)]
    #[serde(default)]
    pub tree: Option<String>,
    #[arg(long = "string", value_parser = parse_vertex_string)]
    #[serde(default)]
    pub strings: Vec<VertexString>,
    /// Path of the `.ine` file; the sidecar goes next to it with a `.json` extension.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrailFamily {
    /// `ω_j → w_0 s_j ω_j`
    #[default]
    String,
    /// `s_j ω_j → w_0 ω_j`
    Tensor,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ItrailsArgs {
    #[arg(long)]
    pub rank: usize,
    /// Fundamental representation; all when omitted.
    #[arg(long)]
    #[serde(default)]
    pub j: Option<usize>,
    #[arg(long, default_value = "default")]
    #[serde(default)]
    pub word: WordChoice,
    #[arg(long, value_enum, default_value = "string")]
    #[serde(default)]
    pub family: TrailFamily,
    /// Explicit start weight, overriding the family (needs `--j` and `--to`).
    #[arg(long, value_parser = parse_weight, requires_all = ["to", "j"])]
    #[serde(default)]
    pub from: Option<Weight>,
    #[arg(long, value_parser = parse_weight, requires = "from")]
    #[serde(default)]
    pub to: Option<Weight>,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct MapsCheckArgs {
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
    /// Samples per chain length and identity.
    #[arg(long, default_value_t = 100)]
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Chain lengths k, e.g. `2,3,4`.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    #[serde(default = "default_chain_lengths")]
    pub k: Vec<usize>,
}

fn default_samples() -> usize {
    100
}

fn default_chain_lengths() -> Vec<usize> {
    vec![2, 3, 4]
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Path of the JSON job file.
    #[arg(long)]
    pub job: PathBuf,
}
