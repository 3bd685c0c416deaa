//! Batch command-line surface. Every command renders a deterministic text
//! report (or JSON with `--structured`).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::{automorphisms, builtin, is_isomorphic, orbits, FiniteAlgebra, Point, PointSpace};
use crate::error::{Error, Result};
use crate::formula::{parse_formula, FormulaSet};
use crate::fragment::{ConstantPolicy, Fragment};
use crate::geometry::{
    equivalence_from_values, isotypy_from_values, lg_type_classes, mt_type_from_values, GaloisReport, TypeFingerprint,
};
use crate::lexer::{tokenize, Tok};
use crate::semantics::{val_with, FragmentValues, ValueSet};
use crate::terms::{Var, VarContext};
use crate::Limits;

#[derive(Parser, Debug)]
#[command(
    name = "lgeom",
    version,
    about = "Formulas, definable sets and point types over finite algebras"
)]
pub struct Cli {
    /// Variables may use indices 1..=N.
    #[arg(long, global = true, default_value_t = 8, value_name = "N")]
    window: u32,
    /// Largest affine space, in points.
    #[arg(long, global = true, default_value_t = 1 << 24, value_name = "B")]
    max_space: usize,
    /// Largest fragment, in formulas.
    #[arg(long, global = true, default_value_t = 1 << 21, value_name = "F")]
    max_fragment: usize,
    /// Seed for sampled formula sets.
    #[arg(long, global = true, default_value_t = 0, value_name = "S")]
    seed: u64,
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    structured: bool,
    /// Load an algebra file (repeatable).
    #[arg(long = "load", global = true, value_name = "FILE")]
    load: Vec<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the set of points satisfying a formula.
    Eval {
        algebra: String,
        formula: String,
        /// Comma-separated sort; defaults to the free variables.
        sort: Option<String>,
    },
    /// Close a point set or a formula set through the Galois correspondence.
    Close {
        algebra: String,
        #[arg(long)]
        sort: String,
        /// Points such as "(1,2),(2,1)" or "1,2;2,1".
        #[arg(long, required_unless_present = "formulas", conflicts_with = "formulas")]
        points: Option<String>,
        /// Formulas separated by ';'.
        #[arg(long)]
        formulas: Option<String>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// List the distinct realized types of the points of a space.
    Types {
        algebra: String,
        #[arg(default_value = "x1")]
        sort: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Mode::Lg)]
        mode: Mode,
        /// Extra window variables for constant-reduced types.
        #[arg(long)]
        extra: Option<String>,
    },
    /// Compare two algebras by types, double closures and isomorphism.
    Equiv {
        algebra1: String,
        algebra2: String,
        #[arg(long, default_value = "x1")]
        sort: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Automorphism group and its orbits on a space.
    Orbits { algebra: String, sort: String },
    /// Print an algebra in file form.
    Show { algebra: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Kernel types of points.
    Lg,
    /// Constant-reduced types over a window.
    Mt,
}

/// Loaded algebras plus run settings.
#[derive(Debug, Clone)]
pub struct Workspace {
    algebras: BTreeMap<String, FiniteAlgebra>,
    limits: Limits,
    structured: bool,
    seed: u64,
}

impl Workspace {
    pub fn new(limits: Limits, structured: bool, seed: u64) -> Result<Workspace> {
        if limits.window == 0 || limits.max_space == 0 || limits.max_fragment == 0 {
            return Err(Error::Usage("limits must be positive".into()));
        }
        Ok(Workspace {
            algebras: BTreeMap::new(),
            limits,
            structured,
            seed,
        })
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn insert(&mut self, h: FiniteAlgebra) -> Result<()> {
        if self.algebras.contains_key(h.name()) {
            return Err(Error::Usage(format!("algebra `{}` loaded twice", h.name())));
        }
        self.algebras.insert(h.name().to_string(), h);
        Ok(())
    }

    pub fn load(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let h = FiniteAlgebra::from_toml(&text)?;
        let name = h.name().to_string();
        self.insert(h)?;
        Ok(name)
    }

    /// Loaded algebras first, then built-ins (`Z<n>`, `K4`, `LZ<n>`, `Z3r`).
    /// A `+c` suffix adjoins one constant per element.
    pub fn resolve(&self, name: &str) -> Result<FiniteAlgebra> {
        if let Some(h) = self.algebras.get(name) {
            return Ok(h.clone());
        }
        let (base, consts) = match name.strip_suffix("+c") {
            Some(b) => (b, true),
            None => (name, false),
        };
        let h = self
            .algebras
            .get(base)
            .cloned()
            .or_else(|| builtin::lookup(base))
            .ok_or_else(|| Error::UnknownAlgebra(name.to_string()))?;
        if consts && !h.has_element_consts() {
            h.adjoin_constants()
        } else {
            Ok(h)
        }
    }

    fn with_constants(h: FiniteAlgebra) -> Result<FiniteAlgebra> {
        if h.has_element_consts() {
            Ok(h)
        } else {
            h.adjoin_constants()
        }
    }

    fn sort(&self, text: &str) -> Result<VarContext> {
        let ctx = VarContext::parse(text)?;
        if let Some(v) = ctx.vars().iter().find(|v| v.index() > self.limits.window) {
            return Err(Error::LimitExceeded {
                what: "variable window",
                size: v.index() as u128,
                limit: self.limits.window as u128,
            });
        }
        Ok(ctx)
    }

    fn policy(h: &FiniteAlgebra) -> ConstantPolicy {
        if h.signature().consts().is_empty() {
            ConstantPolicy::Free
        } else {
            ConstantPolicy::Include
        }
    }

    fn render(&self, text: String, value: serde_json::Value) -> String {
        if self.structured {
            let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
            s.push('\n');
            s
        } else {
            text
        }
    }

    /// Evaluates a formula. Bound variables missing from the sort are added
    /// while evaluating and projected away afterwards.
    pub fn cmd_eval(&self, algebra: &str, formula: &str, sort: Option<&str>) -> Result<String> {
        let mut h = self.resolve(algebra)?;
        if !h.has_element_consts() {
            // harmless for constant-free formulas; skipped if names collide
            if let Ok(hc) = h.adjoin_constants() {
                h = hc;
            }
        }
        let sig = h.signature().clone();
        let mentioned: Vec<Var> = tokenize(formula)?
            .into_iter()
            .filter_map(|(_, t)| match t {
                Tok::Ident(s) if sig.op_index(&s).is_none() && sig.const_index(&s).is_none() => Var::parse(&s),
                _ => None,
            })
            .collect();
        let given = sort.map(|s| self.sort(s)).transpose()?;
        let wide = VarContext::new(
            mentioned
                .iter()
                .copied()
                .filter(|v| v.index() <= self.limits.window)
                .chain(given.iter().flat_map(|g| g.vars().iter().copied())),
        );
        let u = parse_formula(formula, &wide, &sig)?;
        let free = VarContext::new(u.free_vars());
        let sort = match given {
            Some(g) => {
                if let Some(v) = free.vars().iter().find(|&&v| !g.contains(v)) {
                    return Err(Error::UnboundVariable(format!("{v} (free, outside sort {g})")));
                }
                g
            }
            None => free,
        };
        if let Some(v) = mentioned.iter().find(|v| !wide.contains(**v)) {
            return Err(Error::UnboundVariable(format!("{v} (outside sort {sort} and window)")));
        }
        let a = val_with(&u, &h, &self.limits)?.project_onto(&sort)?;
        let shown = u.display(&sig).to_string();
        let mut text = String::new();
        writeln!(text, "algebra: {}", h.name()).unwrap();
        writeln!(text, "sort: {sort}").unwrap();
        writeln!(text, "formula: {shown}").unwrap();
        writeln!(text, "points: {a}").unwrap();
        writeln!(text, "count: {} of {}", a.len(), a.space().len()).unwrap();
        let value = json!({
            "algebra": h.name(),
            "sort": sort.to_string(),
            "formula": shown,
            "points": a.to_tuples(),
            "count": a.len(),
            "space": a.space().len(),
        });
        Ok(self.render(text, value))
    }

    pub fn cmd_close(
        &self,
        algebra: &str,
        sort: &str,
        points: Option<&str>,
        formulas: Option<&str>,
        depth: usize,
    ) -> Result<String> {
        let h = self.resolve(algebra)?;
        let sort = self.sort(sort)?;
        let f = Fragment::new(sort.clone(), depth, h.signature(), Workspace::policy(&h));
        let report = match (points, formulas) {
            (Some(p), None) => {
                let space = PointSpace::with_limit(sort.clone(), h.size(), self.limits.max_space)?;
                let pts = parse_points(p, &sort)?;
                let a = ValueSet::from_points(space, &pts)?;
                GaloisReport::for_points(&a, &f, &h, &self.limits)?
            }
            (None, Some(t)) => {
                let list = t
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_formula(s, &sort, h.signature()))
                    .collect::<Result<Vec<_>>>()?;
                GaloisReport::for_formulas(&FormulaSet::new(sort.clone(), list)?, &f, &h, &self.limits)?
            }
            _ => return Err(Error::Usage("give exactly one of --points and --formulas".into())),
        };
        let text = format!("algebra: {}\n{}", h.name(), report.to_text(h.signature()));
        let mut value = report.to_json(h.signature());
        value["algebra"] = json!(h.name());
        Ok(self.render(text, value))
    }

    pub fn cmd_types(
        &self,
        algebra: &str,
        sort: &str,
        depth: usize,
        mode: Mode,
        extra: Option<&str>,
    ) -> Result<String> {
        let mut h = self.resolve(algebra)?;
        let sort = self.sort(sort)?;
        let window = match extra {
            Some(e) => sort.union(&self.sort(e)?),
            None => sort.clone(),
        };
        if mode == Mode::Lg && window != sort {
            return Err(Error::Usage("--extra only applies to --mode mt".into()));
        }
        if mode == Mode::Mt {
            h = Workspace::with_constants(h)?;
        }
        let f = Fragment::new(window.clone(), depth, h.signature(), Workspace::policy(&h));
        let table = f.build_with(&self.limits)?;
        let values = FragmentValues::compute_with(&table, &h, &self.limits)?;
        let space = PointSpace::with_limit(sort.clone(), h.size(), self.limits.max_space)?;

        // (fingerprint, realizing point indices) in order of first realization
        let classes: Vec<(TypeFingerprint, Vec<usize>)> = match mode {
            Mode::Lg => lg_type_classes(&values)
                .into_iter()
                .map(|c| (c.fingerprint, c.points))
                .collect(),
            Mode::Mt => {
                let mut out: Vec<(TypeFingerprint, Vec<usize>)> = Vec::new();
                for p in 0..space.len() {
                    let fp = mt_type_from_values(&space.point(p), &values, &h)?;
                    match out.iter_mut().find(|(g, _)| *g == fp) {
                        Some((_, pts)) => pts.push(p),
                        None => out.push((fp, vec![p])),
                    }
                }
                out
            }
        };
        let group = automorphisms(&h);
        let orbit_count = orbits(&space, &group).len();

        let mode_name = match mode {
            Mode::Lg => "lg",
            Mode::Mt => "mt",
        };
        let mut text = String::new();
        writeln!(text, "algebra: {}", h.name()).unwrap();
        writeln!(text, "mode: {mode_name}").unwrap();
        writeln!(text, "sort: {sort}").unwrap();
        writeln!(text, "fragment: {} ({} formulas)", f.id(), table.len()).unwrap();
        writeln!(text, "points: {}", space.len()).unwrap();
        writeln!(text, "types: {}", classes.len()).unwrap();
        for (k, (fp, pts)) in classes.iter().enumerate() {
            let shown: Vec<String> = pts.iter().map(|&p| space.point(p).to_string()).collect();
            writeln!(text, "  type {}: {} point(s) {}", k + 1, pts.len(), shown.join(",")).unwrap();
            writeln!(text, "    {fp}").unwrap();
        }
        writeln!(text, "orbits: {orbit_count}").unwrap();
        let value = json!({
            "algebra": h.name(),
            "mode": mode_name,
            "sort": sort.to_string(),
            "fragment": f.id(),
            "formulas": table.len(),
            "points": space.len(),
            "types": classes.iter().map(|(fp, pts)| json!({
                "fingerprint": fp.to_json(),
                "points": pts.iter().map(|&p| space.coords(p)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "orbits": orbit_count,
        });
        Ok(self.render(text, value))
    }

    pub fn cmd_equiv(&self, a1: &str, a2: &str, sort: &str, depth: usize, samples: usize) -> Result<String> {
        let h1 = self.resolve(a1)?;
        let h2 = self.resolve(a2)?;
        let s1 = h1.signature();
        if s1.ops() != h2.signature().ops() || s1.consts() != h2.signature().consts() {
            return Err(Error::SignatureMismatch(format!(
                "{} and {} have different symbols",
                h1.name(),
                h2.name()
            )));
        }
        let sort = self.sort(sort)?;
        let f = Fragment::new(sort.clone(), depth, s1, Workspace::policy(&h1));
        let table = f.build_with(&self.limits)?;
        let v1 = FragmentValues::compute_with(&table, &h1, &self.limits)?;
        let v2 = FragmentValues::compute_with(&table, &h2, &self.limits)?;
        let iso = isotypy_from_values(&table, &v1, &v2);
        let eq = (h1.size() == h2.size()).then(|| equivalence_from_values(&v1, &v2, samples, self.seed));
        let bijection = is_isomorphic(&h1, &h2)?;

        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let names = [h1.name(), h2.name()];
        let mut text = String::new();
        writeln!(text, "algebras: {} vs {}", h1.name(), h2.name()).unwrap();
        writeln!(text, "fragment: {} ({} formulas)", f.id(), table.len()).unwrap();
        writeln!(text, "isotyped: {}", yes_no(iso.isotyped)).unwrap();
        if let Some((k, fp)) = &iso.fingerprint {
            writeln!(text, "  type realized only in {}: {fp}", names[k - 1]).unwrap();
        }
        let witness = iso.witness.as_ref().map(|w| w.display(s1).to_string());
        if let Some(w) = &witness {
            writeln!(text, "  witness: {w}").unwrap();
        }
        let mut eq_json = json!(null);
        match &eq {
            Some(e) => {
                writeln!(text, "equivalent: {}", yes_no(e.equivalent)).unwrap();
                writeln!(text, "  formula sets checked: {}", e.checked).unwrap();
                let mut disagreement = None;
                if let Some(t) = &e.disagreement {
                    let shown: Vec<String> = t.iter().map(|&i| table.show(i)).collect();
                    let joined = if shown.len() > 4 {
                        format!("whole fragment ({} formulas)", shown.len())
                    } else {
                        format!("{{{}}}", shown.join("; "))
                    };
                    writeln!(text, "  closures differ for T = {joined}").unwrap();
                    disagreement = Some(joined);
                }
                let formula = e.formula.map(|i| table.show(i));
                if let Some(u) = &formula {
                    writeln!(text, "  first differing formula: {u}").unwrap();
                }
                eq_json = json!({
                    "equivalent": e.equivalent,
                    "checked": e.checked,
                    "disagreement": disagreement,
                    "formula": formula,
                });
            }
            None => writeln!(
                text,
                "equivalent: not comparable (carriers {} and {})",
                h1.size(),
                h2.size()
            )
            .unwrap(),
        }
        match &bijection {
            Some(p) => {
                let shown: Vec<String> = p.iter().enumerate().map(|(a, b)| format!("{a}->{b}")).collect();
                writeln!(text, "isomorphic: yes ({})", shown.join(", ")).unwrap();
            }
            None => writeln!(text, "isomorphic: no").unwrap(),
        }
        let value = json!({
            "algebras": [h1.name(), h2.name()],
            "fragment": f.id(),
            "formulas": table.len(),
            "isotyped": iso.isotyped,
            "separating_type": iso.fingerprint.as_ref().map(|(k, fp)| json!({
                "algebra": names[k - 1],
                "fingerprint": fp.to_json(),
            })),
            "witness": witness,
            "equivalence": eq_json,
            "isomorphism": bijection,
        });
        Ok(self.render(text, value))
    }

    pub fn cmd_orbits(&self, algebra: &str, sort: &str) -> Result<String> {
        let h = self.resolve(algebra)?;
        let sort = self.sort(sort)?;
        let space = PointSpace::with_limit(sort.clone(), h.size(), self.limits.max_space)?;
        let group = automorphisms(&h);
        let orbs = orbits(&space, &group);
        let mut text = String::new();
        writeln!(text, "algebra: {}", h.name()).unwrap();
        writeln!(text, "sort: {sort}").unwrap();
        writeln!(text, "automorphisms: {}", group.len()).unwrap();
        writeln!(text, "points: {}", space.len()).unwrap();
        writeln!(text, "orbits: {}", orbs.len()).unwrap();
        for o in &orbs {
            let members: Vec<String> = o.iter().map(|&i| space.point(i).to_string()).collect();
            writeln!(text, "  {} [{}]: {{{}}}", space.point(o[0]), o.len(), members.join(",")).unwrap();
        }
        let value = json!({
            "algebra": h.name(),
            "sort": sort.to_string(),
            "automorphisms": group.iter().map(|g| g.perm().to_vec()).collect::<Vec<_>>(),
            "points": space.len(),
            "orbits": orbs.iter().map(|o| o.iter().map(|&i| space.coords(i)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
        Ok(self.render(text, value))
    }

    pub fn cmd_show(&self, algebra: &str) -> Result<String> {
        let h = self.resolve(algebra)?;
        let value = serde_json::to_value(h.to_file()).expect("algebra files serialize");
        Ok(self.render(h.to_toml(), value))
    }
}

/// Parses `"(1,2),(2,1)"`, `"{(1,2)}"` or `"1,2;2,1"`; empty means no points.
pub fn parse_points(text: &str, sort: &VarContext) -> Result<Vec<Point>> {
    let body = text.trim().trim_start_matches('{').trim_end_matches('}').trim();
    let chunks: Vec<String> = if body.contains('(') {
        body.split(')')
            .map(|s| s.trim().trim_start_matches(',').trim())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.strip_prefix('(')
                    .map(str::to_string)
                    .ok_or_else(|| Error::Usage(format!("bad point list near `{s}`")))
            })
            .collect::<Result<_>>()?
    } else {
        body.split(';')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect()
    };
    chunks
        .iter()
        .map(|c| {
            let values = if c.trim().is_empty() {
                Vec::new()
            } else {
                c.split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Usage(format!("bad coordinate `{v}`")))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            if values.len() != sort.len() {
                return Err(Error::Usage(format!(
                    "point ({c}) does not have {} coordinates",
                    sort.len()
                )));
            }
            Ok(Point::new(sort.clone(), values))
        })
        .collect()
}

/// Outcome of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments (program name first) and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: shown,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: shown,
                },
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn execute(cli: &Cli) -> Result<String> {
    let limits = Limits {
        window: cli.window,
        max_space: cli.max_space,
        max_fragment: cli.max_fragment,
    };
    let mut ws = Workspace::new(limits, cli.structured, cli.seed)?;
    for path in &cli.load {
        ws.load(path)?;
    }
    match &cli.command {
        Command::Eval { algebra, formula, sort } => ws.cmd_eval(algebra, formula, sort.as_deref()),
        Command::Close {
            algebra,
            sort,
            points,
            formulas,
            depth,
        } => ws.cmd_close(algebra, sort, points.as_deref(), formulas.as_deref(), *depth),
        Command::Types {
            algebra,
            sort,
            depth,
            mode,
            extra,
        } => ws.cmd_types(algebra, sort, *depth, *mode, extra.as_deref()),
        Command::Equiv {
            algebra1,
            algebra2,
            sort,
            depth,
            samples,
        } => ws.cmd_equiv(algebra1, algebra2, sort, *depth, *samples),
        Command::Orbits { algebra, sort } => ws.cmd_orbits(algebra, sort),
        Command::Show { algebra } => ws.cmd_show(algebra),
    }
}
