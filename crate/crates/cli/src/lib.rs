//! Job files in, certificates and DOT graphs out.

pub mod spec;

use std::fmt::Write as _;
use std::sync::Arc;

use arknit_core::complexes::{ComplexCategory, NComplex};
use arknit_core::fincat::{rep_category, FinCategory};
use arknit_core::linalg::{Field, Mat, PrimeField, Rationals};
use arknit_core::modcat::{
    ar_quiver, decompose_module, global_dimension, yoneda_projective, ArQuiver, CModule,
    KnitOptions, ModuleCategory, ModuleMap,
};
use arknit_core::repcat::{check_adjunction, lemma2_cover, phi, psi, random_rep, QRep, RepSetting};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use spec::{parse_family, Base, Command, FieldChoice, JobSpec, QuiverDesc, Relation, Target};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        source: arknit_core::Error,
    },
    #[error(transparent)]
    Core(#[from] arknit_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let core = match self {
            CliError::Invalid { source, .. } => source,
            CliError::Core(e) => e,
            _ => return 1,
        };
        if core.is_precondition() {
            2
        } else if core.is_verification() {
            3
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutFormat {
    #[default]
    Text,
    Dot,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum FamilyChoice {
    #[default]
    Complete,
    Supplied(Vec<Target>),
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub out: OutFormat,
    pub cap: Option<usize>,
    pub family: FamilyChoice,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    /// Every certificate produced by the command held.
    pub verified: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.verified {
            0
        } else {
            3
        }
    }
}

/// Parses and fully validates a job: quivers, ideals and the field are
/// checked by building the categories involved.
pub fn load_spec(text: &str) -> Result<JobSpec, CliError> {
    validate(spec::parse(text)?)
}

pub fn validate(job: JobSpec) -> Result<JobSpec, CliError> {
    if job.command.needs_target() && job.target.is_none() {
        return Err(CliError::Usage(format!(
            "command {:?} needs a [module] section",
            job.command
        )));
    }
    if job.command == Command::Approximate && !matches!(job.base, Base::Complex(_)) {
        return Err(CliError::Usage(
            "approximate needs a [complex] section".into(),
        ));
    }
    match job.field {
        FieldChoice::Prime(p) => {
            resolve(&job, &PrimeField::new(p)?)?;
        }
        FieldChoice::Rationals => {
            resolve(&job, &Rationals)?;
        }
    }
    Ok(job)
}

/// The categories a job works in.
pub struct Resolved<F: Field> {
    pub setting: Arc<RepSetting<F>>,
    pub complex: Option<ComplexCategory<F>>,
    pub mc: ModuleCategory<F>,
}

impl<F: Field> Resolved<F> {
    pub fn coeff(&self) -> &Arc<FinCategory<F>> {
        &self.setting.coeff
    }

    pub fn tensor(&self) -> &Arc<FinCategory<F>> {
        &self.setting.tensor.cat
    }
}

pub fn resolve<F: Field>(job: &JobSpec, field: &F) -> Result<Resolved<F>, CliError> {
    let coeff = match &job.coefficient {
        Some(desc) => rep_category(field, &desc.build()?),
        None => Arc::new(FinCategory::point(field)),
    };
    let (setting, complex) = match &job.base {
        Base::Quiver(desc) => {
            let bq = desc.build()?;
            (RepSetting::new(bq, coeff)?, None)
        }
        Base::Complex(spec) => {
            let cc = ComplexCategory::new(*spec, coeff)?;
            (cc.setting.clone(), Some(cc))
        }
    };
    let mc = ModuleCategory::new(setting.tensor.cat.clone());
    Ok(Resolved {
        setting,
        complex,
        mc,
    })
}

/// DOT text for an AR quiver; identical inputs give identical bytes.
pub fn export_dot<F: Field>(ar: &ArQuiver<F>) -> String {
    ar.to_dot()
}

pub fn run(job: &JobSpec, opts: &Options) -> Result<Outcome, CliError> {
    match job.field {
        FieldChoice::Prime(p) => Runner::new(job, opts, PrimeField::new(p)?)?.run(),
        FieldChoice::Rationals => Runner::new(job, opts, Rationals)?.run(),
    }
}

struct Runner<'a, F: Field> {
    job: &'a JobSpec,
    opts: &'a Options,
    field: F,
    res: Resolved<F>,
    ar: Option<ArQuiver<F>>,
}

fn field_name(c: FieldChoice) -> String {
    match c {
        FieldChoice::Prime(p) => format!("F_{p}"),
        FieldChoice::Rationals => "Q".into(),
    }
}

impl<'a, F: Field> Runner<'a, F> {
    fn new(job: &'a JobSpec, opts: &'a Options, field: F) -> Result<Self, CliError> {
        let res = resolve(job, &field)?;
        Ok(Runner {
            job,
            opts,
            field,
            res,
            ar: None,
        })
    }

    fn param(&self, key: &str, default: u64) -> Result<u64, CliError> {
        match self.job.params.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| {
                CliError::Usage(format!("parameter `{key}` must be a number, found `{v}`"))
            }),
        }
    }

    fn seed(&self) -> Result<u64, CliError> {
        self.param("seed", 0)
    }

    fn knit(&mut self) -> Result<&ArQuiver<F>, CliError> {
        if self.ar.is_none() {
            let mut opts = KnitOptions {
                seed: self.seed()?,
                ..KnitOptions::default()
            };
            if let Some(cap) = self.opts.cap {
                opts.dim_cap = cap;
            }
            self.ar = Some(ar_quiver(&self.res.mc, opts)?);
        }
        Ok(self.ar.as_ref().expect("just knitted"))
    }

    fn module(&mut self, t: &Target) -> Result<Arc<CModule<F>>, CliError> {
        match t {
            Target::Index(i) => {
                let ar = self.knit()?;
                ar.vertices
                    .get(*i)
                    .map(|v| v.module.clone())
                    .ok_or_else(|| {
                        CliError::Usage(format!(
                            "no vertex {i}; the AR quiver has {}",
                            ar.vertices.len()
                        ))
                    })
            }
            Target::Dims(d) => {
                let ar = self.knit()?;
                let hits: Vec<_> = ar
                    .vertices
                    .iter()
                    .filter(|v| v.module.dims() == d.as_slice())
                    .collect();
                match hits.as_slice() {
                    [v] => Ok(v.module.clone()),
                    [] => Err(CliError::Usage(format!(
                        "no indecomposable with dimension vector {:?} was found",
                        d
                    ))),
                    _ => Err(CliError::Usage(format!(
                        "dimension vector {:?} is ambiguous; give matrices or an index",
                        d
                    ))),
                }
            }
            Target::Matrices { dims, maps, line } => {
                self.from_matrices(dims, maps, *line).map(Arc::new)
            }
        }
    }

    fn from_matrices(
        &self,
        dims: &[usize],
        maps: &[(String, Vec<Vec<String>>, usize)],
        line: usize,
    ) -> Result<CModule<F>, CliError> {
        let setting = &self.res.setting;
        let q = setting.bq.quiver();
        if setting.coeff.num_objects() != 1 || setting.coeff.hom_dim(0, 0) != 1 {
            return Err(CliError::Usage(
                "modules by matrices need the trivial coefficient; use dims or index".into(),
            ));
        }
        if dims.len() != q.num_vertices() {
            return Err(CliError::Parse {
                line,
                msg: format!(
                    "expected {} dimensions, found {}",
                    q.num_vertices(),
                    dims.len()
                ),
            });
        }
        for (name, _, l) in maps {
            if q.arrow(name).is_err() {
                return Err(CliError::Parse {
                    line: *l,
                    msg: format!("unknown arrow `{name}`"),
                });
            }
        }
        let f = &self.field;
        let vms: Vec<Arc<CModule<F>>> = dims
            .iter()
            .map(|&d| {
                CModule::new(setting.coeff.clone(), vec![d], vec![Mat::identity(f, d)])
                    .map(Arc::new)
            })
            .collect::<Result<_, _>>()?;
        let mut arrow_maps = Vec::new();
        for (a, arrow) in q.arrows().iter().enumerate() {
            let (s, t) = (arrow.src, arrow.tgt);
            let (rows, cols) = (dims[t], dims[s]);
            let mat = match maps.iter().find(|m| q.arrow(&m.0).ok() == Some(a)) {
                None => Mat::zeros(f, rows, cols),
                Some((_, entries, l)) => {
                    let bad = |msg: String| CliError::Parse { line: *l, msg };
                    if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
                        return Err(bad(format!(
                            "arrow `{}` needs a {rows}x{cols} matrix",
                            arrow.id
                        )));
                    }
                    let data = entries
                        .iter()
                        .flatten()
                        .map(|e| {
                            f.parse_elem(e)
                                .ok_or_else(|| bad(format!("bad entry `{e}`")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Mat::from_vec(f, rows, cols, data)?
                }
            };
            arrow_maps.push(ModuleMap::new(vms[s].clone(), vms[t].clone(), vec![mat])?);
        }
        let r = QRep::new(setting.clone(), vms, arrow_maps)
            .map_err(|e| CliError::Invalid { line, source: e })?;
        Ok(phi(&r))
    }

    fn run(mut self) -> Result<Outcome, CliError> {
        match self.job.command {
            Command::Info => self.info(),
            Command::Tensor => self.tensor(),
            Command::ArQuiver => self.ar_quiver(),
            Command::Ass => self.ass(),
            Command::Verify => self.verify(),
            Command::Approximate => self.approximate(),
            Command::Roundtrip => self.roundtrip(),
        }
    }

    fn header(&self) -> String {
        let mut s = format!("field: {}\n", field_name(self.job.field));
        let bq = &self.res.setting.bq;
        match &self.job.base {
            Base::Quiver(_) => {}
            Base::Complex(spec) => {
                let _ = writeln!(s, "complex: n = {}, shape {:?}", spec.n, spec.shape);
            }
        }
        let q = bq.quiver();
        let _ = writeln!(
            s,
            "base: {} vertices, {} arrows",
            q.num_vertices(),
            q.arrows().len()
        );
        for g in bq.ideal().generators() {
            let _ = writeln!(s, "  relation {}", g.display(q));
        }
        let c = self.res.coeff();
        let _ = writeln!(s, "coefficient: {} objects", c.num_objects());
        s
    }

    fn info(&self) -> Result<Outcome, CliError> {
        let mut s = self.header();
        let t = self.res.tensor();
        let cap = self.opts.cap.unwrap_or(8);
        let _ = writeln!(s, "objects: {}", t.num_objects());
        let _ = writeln!(s, "basis morphisms: {}", t.basis().len());
        let _ = writeln!(s, "global dimension: {}", global_dimension(t, cap)?);
        let _ = writeln!(s, "certificate: category axioms checked at construction");
        Ok(Outcome {
            text: s,
            verified: true,
        })
    }

    fn tensor(&self) -> Result<Outcome, CliError> {
        let mut s = self.header();
        let t = self.res.tensor();
        let n = t.num_objects();
        let _ = writeln!(s, "objects: {n}");
        for x in 0..n {
            let row: Vec<String> = (0..n).map(|y| t.hom_dim(x, y).to_string()).collect();
            let _ = writeln!(s, "  {} hom: {}", t.objects()[x], row.join(" "));
        }
        let _ = writeln!(s, "certificate: category axioms checked at construction");
        Ok(Outcome {
            text: s,
            verified: true,
        })
    }

    fn ar_quiver(&mut self) -> Result<Outcome, CliError> {
        let out = self.opts.out;
        self.knit()?;
        let mc = &self.res.mc;
        let ar = self.ar.as_ref().expect("knitted");
        let modules = ar.modules();
        let mut ok = true;
        let mut cert = String::new();
        for (&z, seq) in &ar.sequences {
            let report = mc.verify_almost_split(seq, &modules, ar.closed)?;
            ok &= report.passed();
            let _ = writeln!(
                cert,
                "  v{z}: {}",
                if report.passed() { "ok" } else { "FAIL" }
            );
        }
        if out == OutFormat::Dot {
            return Ok(Outcome {
                text: export_dot(ar),
                verified: ok,
            });
        }
        let mut s = self.header();
        let _ = writeln!(s, "vertices: {}", ar.vertices.len());
        for (i, v) in ar.vertices.iter().enumerate() {
            let trunc = if v.truncated { " (truncated)" } else { "" };
            let _ = writeln!(s, "  v{i} {}{trunc}", v.label());
        }
        for (&(a, b), &m) in &ar.arrows {
            let _ = writeln!(s, "  v{a} -> v{b} x{m}");
        }
        for &(z, x) in &ar.tau {
            let _ = writeln!(s, "  tau v{z} = v{x}");
        }
        let _ = writeln!(s, "closed: {}", ar.closed);
        let _ = writeln!(s, "sequences verified: {}", ar.sequences.len());
        s.push_str(&cert);
        let _ = writeln!(s, "certificate: {}", if ok { "passed" } else { "FAILED" });
        Ok(Outcome {
            text: s,
            verified: ok,
        })
    }

    fn family(&mut self) -> Result<(Vec<Arc<CModule<F>>>, bool), CliError> {
        match self.opts.family.clone() {
            FamilyChoice::Complete => {
                let ar = self.knit()?;
                Ok((ar.modules(), ar.closed))
            }
            FamilyChoice::Supplied(ts) => {
                let ms = ts
                    .iter()
                    .map(|t| self.module(t))
                    .collect::<Result<_, _>>()?;
                Ok((ms, false))
            }
        }
    }

    fn ass(&mut self) -> Result<Outcome, CliError> {
        let target = self.job.target.clone().expect("checked at load");
        let z = self.module(&target)?;
        let seed = self.seed()?;
        let seq = self.res.mc.almost_split_sequence(&z, seed)?;
        let (family, complete) = self.family()?;
        let report = self.res.mc.verify_almost_split(&seq, &family, complete)?;
        let mut s = self.header();
        let _ = writeln!(s, "Z: {}", seq.z.dim_vector_string());
        let _ = writeln!(s, "X: {}", seq.x.dim_vector_string());
        let _ = writeln!(s, "Y: {}", seq.y.dim_vector_string());
        if !seq.y.is_zero() {
            for (i, p) in decompose_module(&seq.y, seed)?.iter().enumerate() {
                let _ = writeln!(s, "  Y{i}: {}", p.module.dim_vector_string());
            }
        }
        let _ = writeln!(s, "{report}");
        Ok(Outcome {
            text: s,
            verified: report.passed(),
        })
    }

    fn verify(&mut self) -> Result<Outcome, CliError> {
        let (family, complete) = self.family()?;
        self.knit()?;
        let ar = self.ar.as_ref().expect("knitted");
        let mut s = self.header();
        let mut ok = ar.closed;
        let mut count = 0;
        for (i, v) in ar.vertices.iter().enumerate() {
            if v.projective {
                continue;
            }
            let Some(seq) = ar.sequences.get(&i) else {
                ok = false;
                let _ = writeln!(s, "  v{i} {}: no sequence (truncated)", v.label());
                continue;
            };
            let report = self.res.mc.verify_almost_split(seq, &family, complete)?;
            let good = report.is_certificate();
            ok &= good;
            count += 1;
            let _ = writeln!(
                s,
                "  v{i} {}: 0 -> {} -> {} -> {} -> 0 {}",
                v.label(),
                seq.x.dim_vector_string(),
                seq.y.dim_vector_string(),
                seq.z.dim_vector_string(),
                if good { "ok" } else { "FAIL" }
            );
        }
        let _ = writeln!(s, "indecomposables: {}", ar.vertices.len());
        let _ = writeln!(s, "closed: {}", ar.closed);
        let _ = writeln!(s, "sequences verified: {count}");
        let _ = writeln!(s, "certificate: {}", if ok { "passed" } else { "FAILED" });
        Ok(Outcome {
            text: s,
            verified: ok,
        })
    }

    fn approximate(&mut self) -> Result<Outcome, CliError> {
        let target = self.job.target.clone().expect("checked at load");
        let m = self.module(&target)?;
        let cc = self.res.complex.as_ref().expect("checked at load");
        let z = cc.from_module(&m)?;
        let which = self
            .job
            .params
            .get("generators")
            .map_or("intervals", String::as_str);
        let coeff = cc.coeff().clone();
        let mut gens: Vec<NComplex<F>> = Vec::new();
        for idx in 0..cc.spec.len() {
            let d = cc.spec.degree(idx);
            for x in 0..coeff.num_objects() {
                let p = Arc::new(yoneda_projective(&coeff, x));
                match which {
                    "intervals" => gens.push(cc.interval_j(d, &p)?),
                    "stalks" => gens.push(cc.stalk(d, &p)?),
                    other => return Err(CliError::Usage(format!("unknown generators `{other}`"))),
                }
            }
        }
        let a = cc.right_approximation(&z, &gens)?;
        let coil = cc.coil_epi(&z)?;
        let surj = coil.map.is_vertexwise_surjective();
        let mut s = self.header();
        let _ = writeln!(s, "Z: {:?}", z.total_dims());
        let _ = writeln!(s, "generators: {} {which}", gens.len());
        let _ = writeln!(s, "source: {:?}", a.source.total_dims());
        for c in &a.certificate {
            let _ = writeln!(
                s,
                "  G{}{}: hom {} rank {} {}",
                c.index,
                if c.coil { " (coil)" } else { "" },
                c.hom_dim,
                c.rank,
                if c.passed() { "ok" } else { "FAIL" }
            );
        }
        let _ = writeln!(s, "coil epi surjective: {surj}");
        let ok = a.passed() && surj;
        let _ = writeln!(s, "certificate: {}", if ok { "passed" } else { "FAILED" });
        Ok(Outcome {
            text: s,
            verified: ok,
        })
    }

    fn roundtrip(&mut self) -> Result<Outcome, CliError> {
        let samples = self.param("samples", 50)?;
        let max_dim = self.opts.cap.unwrap_or(3);
        let setting = self.res.setting.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed()?);
        let (mut round, mut cover, mut adj) = (0, 0, 0);
        for _ in 0..samples {
            let r = random_rep(&setting, max_dim, &mut rng);
            let m = phi(&r);
            let back = psi(&setting, &m)?;
            if back == r && phi(&back) == m {
                round += 1;
            }
            if lemma2_cover(&r)?.map.is_vertexwise_surjective() {
                cover += 1;
            }
            let other = random_rep(&setting, max_dim, &mut rng);
            let v = rng.gen_range(0..setting.num_vertices());
            if check_adjunction(&setting, v, &other.vertex_modules[v], &r)?.passed() {
                adj += 1;
            }
        }
        let mut s = self.header();
        let _ = writeln!(s, "samples: {samples}");
        let _ = writeln!(s, "round trip: {round}/{samples}");
        let _ = writeln!(s, "cover surjective: {cover}/{samples}");
        let _ = writeln!(s, "adjunction: {adj}/{samples}");
        let ok = round == samples && cover == samples && adj == samples;
        let _ = writeln!(s, "certificate: {}", if ok { "passed" } else { "FAILED" });
        Ok(Outcome {
            text: s,
            verified: ok,
        })
    }
}
