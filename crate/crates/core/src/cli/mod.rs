//! Command-line surface. Every subcommand prints one JSON object (except
//! `hasse-dot`, which prints DOT) and exits 0 on success, 1 on a domain
//! error and 2 on a usage or input error.

pub mod io;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::arrangement::Arrangement;
use crate::atlas::{
    build_atlas, check_cocycle, hasse_dot, orbit_flat_table, separation_check, Atlas, CocycleCheck,
    SeparationCheck,
};
use crate::error::Error;
use crate::pha::{
    check_arrangement_morphism, check_morphism, full_lattice, validate, ArrangementMorphismCheck,
    MorphismCheck, PartialHyperplaneArrangement,
};
use crate::schubert::{ExtendedPoint, MorphismComponent, SchubertMorphism, SchubertVariety};

use self::io::{
    error_witness, indices_json, load_input, load_map, load_point, matrix_json, parse_index_set,
    parse_inline_point, parse_inline_vector, point_json, rational_json, rows_json, subspace_json,
    vector_json, Input, InputError,
};

/// Environment variable seeding the randomized checks.
pub const SEED_VAR: &str = "ARRANGEATLAS_SEED";

const DEFAULT_SAMPLES: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "arrangeatlas",
    version,
    about = "Flats, Schubert variety coordinates and chart atlases of hyperplane arrangements"
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate the lattice of flats of an arrangement.
    Flats { file: PathBuf },
    /// Check the partial arrangement axioms.
    ValidatePha { file: PathBuf },
    /// Check a linear map between two arrangements or partial arrangements.
    CheckMorphism {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Decide whether an extended point lies on the Schubert variety.
    Membership {
        file: PathBuf,
        #[command(flatten)]
        point: PointArg,
    },
    /// Translate a point by a vector.
    Act {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[command(flatten)]
        point: PointArg,
    },
    /// Limit of t·v as t grows, or the member it converges into.
    Limit {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Orbit/flat correspondence table.
    OrbitTable { file: PathBuf },
    /// Restrict an arrangement to one of its flats.
    Restrict {
        file: PathBuf,
        #[arg(long, default_value = "")]
        flat: String,
    },
    /// Slice through the distinguished point of a flat.
    Slice {
        file: PathBuf,
        #[arg(long, default_value = "")]
        flat: String,
        /// Point of the restricted variety to inject.
        #[command(flatten)]
        point: OptionalPointArg,
    },
    /// Chart data of the glued variety.
    Atlas { file: PathBuf },
    /// Overlap and separation checks on the atlas.
    Cocycle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Apply the extension of a morphism to a point.
    ExtendMorphism {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[command(flatten)]
        point: PointArg,
    },
    /// Hasse diagram of member containment in DOT.
    HasseDot { file: PathBuf },
}

#[derive(Debug, clap::Args)]
#[group(required = true, multiple = false)]
struct PointArg {
    /// Comma-separated coordinates, `inf` for infinity.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    #[arg(long)]
    point_file: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
#[group(required = false, multiple = false)]
struct OptionalPointArg {
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    #[arg(long)]
    point_file: Option<PathBuf>,
}

fn read_point(
    inline: &Option<String>,
    file: &Option<PathBuf>,
) -> Result<Option<ExtendedPoint>, InputError> {
    match (inline, file) {
        (Some(text), _) => parse_inline_point(text).map(Some),
        (None, Some(path)) => load_point(path).map(Some),
        (None, None) => Ok(None),
    }
}

impl PointArg {
    fn read(&self) -> Result<ExtendedPoint, InputError> {
        Ok(read_point(&self.point, &self.point_file)?.expect("clap enforces one of the two"))
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Flats { .. } => "flats",
            Command::ValidatePha { .. } => "validate-pha",
            Command::CheckMorphism { .. } => "check-morphism",
            Command::Membership { .. } => "membership",
            Command::Act { .. } => "act",
            Command::Limit { .. } => "limit",
            Command::OrbitTable { .. } => "orbit-table",
            Command::Restrict { .. } => "restrict",
            Command::Slice { .. } => "slice",
            Command::Atlas { .. } => "atlas",
            Command::Cocycle { .. } => "cocycle",
            Command::ExtendMorphism { .. } => "extend-morphism",
            Command::HasseDot { .. } => "hasse-dot",
        }
    }
}

/// Exit code and everything written to stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
}

enum Failure {
    Input(InputError),
    Domain(Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

enum Payload {
    Json(Map<String, Value>),
    Text(String),
}

type CmdResult = Result<Payload, Failure>;

fn render(value: &Value) -> String {
    let mut s = serde_json::to_string(value).expect("json values serialize");
    s.push('\n');
    s
}

fn failure_outcome(command: Option<&str>, failure: Failure) -> Outcome {
    let (code, error) = match failure {
        Failure::Input(e) => (2, json!({ "reason": e.reason, "message": e.message })),
        Failure::Domain(e) => (
            1,
            json!({ "reason": e.reason(), "message": e.to_string(), "witness": error_witness(&e) }),
        ),
    };
    Outcome {
        code,
        stdout: render(&json!({ "ok": false, "command": command, "error": error })),
    }
}

/// Runs the CLI, reading the seed from `ARRANGEATLAS_SEED`.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let seed = std::env::var(SEED_VAR).ok();
    run_with_seed(args, seed.as_deref())
}

/// Runs the CLI with an explicit seed string (as the environment would
/// provide it).
pub fn run_with_seed<I, T>(args: I, seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: 0,
                    stdout: e.to_string(),
                };
            }
            return failure_outcome(
                None,
                Failure::Input(InputError::new("usage", e.to_string())),
            );
        }
    };
    let name = cli.command.name();
    let seed = match seed.map(str::trim) {
        None | Some("") => 0,
        Some(text) => match text.parse::<u64>() {
            Ok(s) => s,
            Err(_) => {
                return failure_outcome(
                    Some(name),
                    Failure::Input(InputError::new(
                        "bad-seed",
                        format!("{SEED_VAR} must be a decimal integer, got {text:?}"),
                    )),
                )
            }
        },
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, seed)),
            Err(e) => Err(Failure::Input(InputError::new("usage", e.to_string()))),
        },
        None => dispatch(&cli.command, seed),
    };
    match result {
        Ok(Payload::Text(text)) => Outcome {
            code: 0,
            stdout: text,
        },
        Ok(Payload::Json(fields)) => {
            let mut obj = Map::new();
            obj.insert("ok".into(), Value::Bool(true));
            obj.insert("command".into(), Value::String(name.into()));
            obj.extend(fields);
            Outcome {
                code: 0,
                stdout: render(&Value::Object(obj)),
            }
        }
        Err(f) => failure_outcome(Some(name), f),
    }
}

fn fields(value: Value) -> Payload {
    match value {
        Value::Object(m) => Payload::Json(m),
        _ => unreachable!("payloads are objects"),
    }
}

fn arrangement_from(path: &Path) -> Result<Arrangement, Failure> {
    Ok(load_input(path)?.arrangement()??)
}

fn variety_from(path: &Path) -> Result<SchubertVariety, Failure> {
    Ok(SchubertVariety::new(arrangement_from(path)?)?)
}

/// A partial arrangement from either file kind; arrangement files give
/// their full lattice of flats.
fn pha_from_input(input: &Input) -> Result<PartialHyperplaneArrangement, Failure> {
    match input {
        Input::Arrangement { .. } => Ok(full_lattice(&input.arrangement()??)?),
        Input::Pha {
            ambient_dim,
            subspaces,
        } => Ok(validate(*ambient_dim, subspaces.clone())?
            .pha
            .ok_or(Error::InvalidPha)?),
    }
}

fn pha_from(path: &Path) -> Result<PartialHyperplaneArrangement, Failure> {
    pha_from_input(&load_input(path)?)
}

fn atlas_from(path: &Path) -> Result<Atlas, Failure> {
    Ok(build_atlas(&pha_from(path)?)?)
}

fn dispatch(command: &Command, seed: u64) -> CmdResult {
    match command {
        Command::Flats { file } => cmd_flats(file),
        Command::ValidatePha { file } => cmd_validate(file),
        Command::CheckMorphism {
            source,
            target,
            map,
        } => cmd_check_morphism(source, target, map),
        Command::Membership { file, point } => cmd_membership(file, point),
        Command::Act {
            file,
            vector,
            point,
        } => cmd_act(file, vector, point),
        Command::Limit { file, vector } => cmd_limit(file, vector),
        Command::OrbitTable { file } => cmd_orbit_table(file),
        Command::Restrict { file, flat } => cmd_restrict(file, flat),
        Command::Slice { file, flat, point } => cmd_slice(file, flat, point),
        Command::Atlas { file } => cmd_atlas(file),
        Command::Cocycle { file, samples } => cmd_cocycle(file, *samples, seed),
        Command::ExtendMorphism {
            source,
            target,
            map,
            point,
        } => cmd_extend(source, target, map, point),
        Command::HasseDot { file } => Ok(Payload::Text(hasse_dot(&pha_from(file)?))),
    }
}

fn cmd_flats(file: &Path) -> CmdResult {
    let a = arrangement_from(file)?;
    let lattice = a.flats();
    let flats: Vec<Value> = lattice
        .iter()
        .map(|f| {
            json!({
                "indices": indices_json(&f.indices),
                "rank": f.rank(),
                "basis": matrix_json(f.subspace.basis()),
            })
        })
        .collect();
    Ok(fields(json!({
        "ambient_dim": a.ambient_dim(),
        "hyperplane_count": a.len(),
        "essential": a.is_essential(),
        "flat_count": lattice.len(),
        "flats": flats,
    })))
}

fn cmd_validate(file: &Path) -> CmdResult {
    let (d, subspaces) = match load_input(file)? {
        input @ Input::Arrangement { .. } => {
            let a = input.arrangement()??;
            (a.ambient_dim(), a.flats().subspaces())
        }
        Input::Pha {
            ambient_dim,
            subspaces,
        } => (ambient_dim, subspaces),
    };
    let v = validate(d, subspaces)?;
    let r = &v.report;
    let members: Vec<Value> = match &v.pha {
        Some(pha) => pha.members().iter().map(subspace_json).collect(),
        None => Vec::new(),
    };
    let failures: Vec<Value> = r
        .axiom3_failures
        .iter()
        .map(|f| json!({ "member": subspace_json(&f.member), "reason": f.reason.code() }))
        .collect();
    Ok(fields(json!({
        "valid": r.is_valid(),
        "member_count": v.pha.as_ref().map(|p| p.len()),
        "axiom1_ok": r.axiom1_ok,
        "axiom2_ok": r.axiom2_ok,
        "axiom2_witness": r.axiom2_witness.as_ref().map(|(a, b)| json!([subspace_json(a), subspace_json(b)])),
        "axiom3_failures": failures,
        "members": members,
    })))
}

fn morphism_violation(check: &MorphismCheck) -> Value {
    match check {
        MorphismCheck::Valid => Value::Null,
        MorphismCheck::ImageNotInMember { source, image } => json!({
            "condition": 1,
            "source": subspace_json(source),
            "image": subspace_json(image),
        }),
        MorphismCheck::PreimageNotMember {
            source,
            target,
            preimage,
        } => json!({
            "condition": 2,
            "source": subspace_json(source),
            "target": subspace_json(target),
            "preimage": subspace_json(preimage),
        }),
    }
}

fn cmd_check_morphism(source: &Path, target: &Path, map: &Path) -> CmdResult {
    let (src_in, dst_in) = (load_input(source)?, load_input(target)?);
    let t = load_map(map)?;
    let lattice_check = check_morphism(&t, &pha_from_input(&src_in)?, &pha_from_input(&dst_in)?)?;
    let mut out = json!({
        "morphism": lattice_check.is_valid(),
        "violation": morphism_violation(&lattice_check),
    });
    if let (Input::Arrangement { .. }, Input::Arrangement { .. }) = (&src_in, &dst_in) {
        let hyper =
            check_arrangement_morphism(&t, &src_in.arrangement()??, &dst_in.arrangement()??)?;
        let witness = match &hyper {
            ArrangementMorphismCheck::Valid(_) => Value::Null,
            ArrangementMorphismCheck::PreimageNotHyperplane { target, preimage } => {
                json!({ "target": target, "preimage": subspace_json(preimage) })
            }
        };
        let obj = out.as_object_mut().expect("object");
        obj.insert("hyperplane_check".into(), Value::Bool(hyper.is_valid()));
        obj.insert("hyperplane_witness".into(), witness);
    }
    Ok(fields(out))
}

fn cmd_membership(file: &Path, point: &PointArg) -> CmdResult {
    let y = variety_from(file)?;
    let x = point.read()?;
    let verdict = y.classify(&x)?;
    Ok(fields(json!({
        "member": verdict.is_member(),
        "reason": (!verdict.is_member()).then(|| verdict.code()),
        "support": indices_json(&x.finite_support()),
    })))
}

fn cmd_act(file: &Path, vector: &str, point: &PointArg) -> CmdResult {
    let y = variety_from(file)?;
    let v = parse_inline_vector(vector)?;
    let x = point.read()?;
    let moved = y.act(&v, &x)?;
    Ok(fields(json!({
        "point": point_json(&moved),
        "support": indices_json(&moved.finite_support()),
    })))
}

fn cmd_limit(file: &Path, vector: &str) -> CmdResult {
    let input = load_input(file)?;
    let v = parse_inline_vector(vector)?;
    match &input {
        Input::Arrangement { .. } => {
            let y = SchubertVariety::new(input.arrangement()??)?;
            let flat = y.limit_indices(&v)?;
            let limit = y.limit(&v)?;
            Ok(fields(json!({
                "limit": point_json(&limit),
                "flat": indices_json(&flat),
                "stabilizer": subspace_json(&y.stabilizer(&limit)?),
            })))
        }
        Input::Pha { .. } => {
            let pha = pha_from_input(&input)?;
            let member = pha.limit_flat(&v)?;
            Ok(fields(json!({
                "exists": member.is_some(),
                "member_index": member.and_then(|m| pha.position(m)),
                "member": member.map(subspace_json),
            })))
        }
    }
}

fn cmd_orbit_table(file: &Path) -> CmdResult {
    let atlas = atlas_from(file)?;
    let rows: Vec<Value> = orbit_flat_table(&atlas)
        .iter()
        .map(|r| {
            json!({
                "member": r.member,
                "rank": r.rank,
                "orbit_dim": r.orbit_dim,
                "stabilizer": subspace_json(&r.stabilizer),
                "chart": r.chart,
                "distinguished_point": point_json(&r.distinguished_point),
                "interior_sample": vector_json(&r.interior_sample),
            })
        })
        .collect();
    Ok(fields(json!({ "row_count": rows.len(), "rows": rows })))
}

fn cmd_restrict(file: &Path, flat: &str) -> CmdResult {
    let a = arrangement_from(file)?;
    let f = a.flat(&parse_index_set(flat)?)?;
    let r = a.restriction(&f)?;
    let restricted = r.arrangement();
    let sources: Vec<Value> = (0..restricted.len())
        .map(|k| indices_json(r.sources(k)))
        .collect();
    Ok(fields(json!({
        "flat": indices_json(&f.indices),
        "frame": subspace_json(r.frame()),
        "ambient_dim": restricted.ambient_dim(),
        "normals": rows_json(restricted.normals()),
        "sources": sources,
        "flat_count": restricted.flats().len(),
    })))
}

fn cmd_slice(file: &Path, flat: &str, point: &OptionalPointArg) -> CmdResult {
    let y = variety_from(file)?;
    let f = y.arrangement().flat(&parse_index_set(flat)?)?;
    let slice = y.slice_at(&f)?;
    let injection: Vec<Value> = slice
        .embedding
        .assignment()
        .iter()
        .enumerate()
        .map(|(i, a)| match a {
            None => json!({ "coord": i, "zero": true }),
            Some((k, c)) => json!({ "coord": i, "source": k, "scale": rational_json(c) }),
        })
        .collect();
    let image = match read_point(&point.point, &point.point_file)? {
        Some(q) => {
            if !slice.variety.membership(&q)? {
                return Err(Error::NotAMember.into());
            }
            point_json(&slice.embedding.inject(&q)?)
        }
        None => Value::Null,
    };
    Ok(fields(json!({
        "flat": indices_json(&f.indices),
        "distinguished_point": point_json(&y.distinguished_point(&f)?),
        "restricted": {
            "ambient_dim": slice.variety.ambient_dim(),
            "normals": rows_json(slice.variety.arrangement().normals()),
            "flat_count": slice.variety.lattice().len(),
        },
        "injection": injection,
        "image": image,
    })))
}

fn cmd_atlas(file: &Path) -> CmdResult {
    let atlas = atlas_from(file)?;
    let charts: Vec<Value> = atlas
        .charts()
        .iter()
        .map(|c| {
            json!({
                "member": c.member,
                "rank": c.flat.rank(),
                "basis": matrix_json(c.flat.basis()),
                "fiber_dim": c.fiber_dim,
                "hyperplanes": indices_json(&c.hyperplanes),
                "normals": rows_json(c.restriction.normals()),
                "flat_count": c.variety.lattice().len(),
            })
        })
        .collect();
    Ok(fields(json!({
        "member_count": atlas.pha().len(),
        "charts": charts,
        "overlaps": atlas.overlaps(),
    })))
}

fn cmd_cocycle(file: &Path, samples: usize, seed: u64) -> CmdResult {
    let atlas = atlas_from(file)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cocycle = check_cocycle(&atlas, samples, &mut rng);
    let cocycle_witness = match &cocycle {
        CocycleCheck::Valid => Value::Null,
        CocycleCheck::FlatSetMismatch {
            ambient,
            first,
            second,
        } => {
            json!({ "kind": "flat-set-mismatch", "ambient": ambient, "first": first, "second": second })
        }
        CocycleCheck::SampleMismatch { chart, sub, point } => {
            json!({ "kind": "sample-mismatch", "chart": chart, "sub": sub, "point": point_json(point) })
        }
    };
    let separation = separation_check(&atlas);
    let separation_witness = match &separation {
        SeparationCheck::Valid => Value::Null,
        SeparationCheck::MissingIntersection { first, second } => {
            json!({ "kind": "missing-intersection", "first": first, "second": second })
        }
        SeparationCheck::LargerCommonLower {
            first,
            second,
            witness,
        } => {
            json!({ "kind": "larger-common-lower", "first": first, "second": second, "witness": witness })
        }
    };
    Ok(fields(json!({
        "seed": seed,
        "samples_per_chart": samples,
        "cocycle": cocycle.is_valid(),
        "cocycle_witness": cocycle_witness,
        "separation": separation.is_valid(),
        "separation_witness": separation_witness,
    })))
}

fn cmd_extend(source: &Path, target: &Path, map: &Path, point: &PointArg) -> CmdResult {
    let y1 = variety_from(source)?;
    let y2 = variety_from(target)?;
    let t = load_map(map)?;
    let x = point.read()?;
    let morphism = SchubertMorphism::new(&t, &y1, &y2)?;
    if !y1.membership(&x)? {
        return Err(Error::NotAMember.into());
    }
    let image = morphism.apply(&x)?;
    let components: Vec<Value> = morphism
        .components()
        .iter()
        .map(|c| match c {
            MorphismComponent::Constant => json!({ "constant": "0" }),
            MorphismComponent::Scaled { source, scale } => {
                json!({ "source": source, "scale": rational_json(scale) })
            }
        })
        .collect();
    Ok(fields(json!({
        "components": components,
        "image": point_json(&image),
    })))
}
