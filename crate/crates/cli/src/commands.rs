use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use latcal_core::bivaluation::{check_product_spaces_rule, BiValuation};
use latcal_core::builders::{Builder, SetFamily};
use latcal_core::dot::to_dot;
use latcal_core::number_theory::DivisorLattice;
use latcal_core::valuation::product_valuation;
use latcal_core::{Error, Lattice, Poset, PosetDocument, RuleReport, Valuation};
use serde_json::{json, Map, Value};

use crate::args::{BuildArgs, BuildKind, CheckArgs, CheckKind, DemoName, ValuateArgs};
use crate::output::{self, num, short};

pub mod exit {
    pub const OK: u8 = 0;
    pub const STRUCTURE: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const SIZE: u8 = 3;
    pub const PRECONDITION: u8 = 4;
    pub const RULE: u8 = 5;
}

pub struct Ctx {
    pub tolerance: f64,
    pub max_elements: usize,
}

impl Ctx {
    fn builder(&self) -> Builder {
        Builder::with_max_elements(self.max_elements)
    }
}

pub struct Outcome {
    pub doc: Value,
    pub text: String,
    pub code: u8,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    /// Size problems keep their own code; everything else gets `code`.
    fn from_core(err: Error, code: u8) -> Self {
        match err {
            Error::SizeLimit {
                what: "lattice elements" | "document elements",
                ..
            } => Failure::new(
                exit::SIZE,
                format!("{err}; raise --max-elements or use a smaller input"),
            ),
            Error::SizeLimit { .. } => Failure::new(exit::SIZE, err.to_string()),
            other => Failure::new(code, other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)
        .map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", path.display())))
}

fn load_poset(path: &Path, ctx: &Ctx) -> Result<Poset> {
    let text = read(path)?;
    let doc = PosetDocument::parse(&text)
        .map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", path.display())))?;
    if doc.elements.len() > ctx.max_elements {
        return Err(Failure::from_core(
            Error::SizeLimit {
                what: "document elements",
                requested: doc.elements.len(),
                limit: ctx.max_elements,
            },
            exit::SIZE,
        ));
    }
    doc.to_poset()
        .map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", path.display())))
}

fn load_lattice(path: &Path, ctx: &Ctx) -> Result<Lattice> {
    let poset = load_poset(path, ctx)?;
    Lattice::certify(poset).map_err(|d| {
        let why = d.failure.map(|f| f.describe()).unwrap_or_default();
        Failure::new(
            exit::STRUCTURE,
            format!("{} is not a lattice: {why}", path.display()),
        )
    })
}

fn load_seed(path: &Path) -> Result<BTreeMap<String, f64>> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", path.display())))?;
    let Value::Object(map) = value else {
        return Err(Failure::new(
            exit::PARSE,
            format!("{}: seed must be a JSON object", path.display()),
        ));
    };
    map.into_iter()
        .map(|(k, v)| match v.as_f64() {
            Some(x) if x.is_finite() => Ok((k, x)),
            _ => Err(Failure::new(
                exit::PARSE,
                format!("{}: value for `{k}` is not a finite number", path.display()),
            )),
        })
        .collect()
}

fn input(path: &Path) -> Value {
    path.display().to_string().into()
}

fn lattice_lines(l: &Lattice) -> String {
    let mut s = format!(
        "lattice: {} elements ({}), bottom {}, top {}\n",
        l.len(),
        l.poset().classify().as_str(),
        l.id(l.bottom()),
        l.id(l.top())
    );
    match l.distributivity_witness() {
        None => s.push_str("distributive: yes\n"),
        Some(w) => {
            let ids = w.map(|e| l.id(e));
            let _ = writeln!(
                s,
                "distributive: no (witness {}, {}, {})",
                ids[0], ids[1], ids[2]
            );
        }
    }
    s
}

pub fn check(args: &CheckArgs, ctx: &Ctx) -> Result<Outcome> {
    let poset = load_poset(&args.input, ctx)?;
    if let Some(path) = &args.dot {
        write(path, &to_dot(&poset, &stem(&args.input)))?;
    }
    let mut extra = Map::new();
    let mut text = format!("input: {}\n", args.input.display());
    let dropped = poset.dropped_covers();
    if !dropped.is_empty() {
        let pairs: Vec<String> = dropped.iter().map(|(a, b)| format!("{a} < {b}")).collect();
        let _ = writeln!(text, "redundant covers dropped: {}", pairs.join(", "));
        extra.insert(
            "droppedCovers".into(),
            json!(dropped.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>()),
        );
    }
    match Lattice::certify(poset.clone()) {
        Ok(l) => {
            text.push_str(&lattice_lines(&l));
            Ok(Outcome {
                doc: output::result_document(
                    "check",
                    input(&args.input),
                    output::lattice_summary(&l),
                    Value::Null,
                    vec![],
                    extra,
                ),
                text,
                code: exit::OK,
            })
        }
        Err(diag) => {
            let p = &poset;
            let _ = writeln!(
                text,
                "poset: {} elements ({})\nnot a lattice: {}",
                p.len(),
                p.classify().as_str(),
                diag.failure
                    .as_ref()
                    .map(|f| f.describe())
                    .unwrap_or_default()
            );
            extra.insert("diagnostic".into(), output::diagnostic(&diag));
            Ok(Outcome {
                doc: output::result_document(
                    "check",
                    input(&args.input),
                    output::poset_summary(p),
                    Value::Null,
                    vec![],
                    extra,
                ),
                text,
                code: if args.poset_only {
                    exit::OK
                } else {
                    exit::STRUCTURE
                },
            })
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "poset".into())
}

fn state_names(count: Option<usize>, names: &Option<Vec<String>>) -> Vec<String> {
    match names {
        Some(n) => n.clone(),
        None => (1..=count.unwrap_or(0)).map(|i| format!("s{i}")).collect(),
    }
}

fn family_lattice(family: &SetFamily, what: &str) -> Result<Lattice> {
    family
        .lattice
        .clone()
        .ok_or_else(|| Failure::new(exit::STRUCTURE, format!("{what} do not form a lattice")))
}

pub fn build(args: &BuildArgs, ctx: &Ctx) -> Result<Outcome> {
    let b = ctx.builder();
    let core = |e| Failure::from_core(e, exit::PRECONDITION);
    let (command, input, poset, lattice, diag): (String, Value, Poset, Option<Lattice>, Option<_>) =
        match &args.kind {
            BuildKind::Downsets {
                input: path,
                include_empty,
            } => {
                let base = load_poset(path, ctx)?;
                let fam = b.downsets(&base, *include_empty).map_err(core)?;
                (
                    "build downsets".into(),
                    json!({"path": path.display().to_string(), "includeEmpty": include_empty}),
                    fam.poset,
                    fam.lattice,
                    fam.diagnostic,
                )
            }
            BuildKind::Powerset { count, names } => {
                let states = state_names(*count, names);
                let fam = b.powerset(&states).map_err(core)?;
                (
                    "build powerset".into(),
                    json!({"states": states}),
                    fam.poset,
                    fam.lattice,
                    None,
                )
            }
            BuildKind::Questions { states, names } => {
                let states = state_names(*states, names);
                let statements = b.powerset(&states).map_err(core)?;
                let statements = family_lattice(&statements, "statements")?;
                let fam = b.questions(&statements).map_err(core)?;
                (
                    "build questions".into(),
                    json!({"states": states}),
                    fam.poset,
                    fam.lattice,
                    None,
                )
            }
            BuildKind::Partition { n } => {
                let l = b.partition_lattice(*n).map_err(core)?;
                (
                    "build partition".into(),
                    json!({"n": n}),
                    l.poset().clone(),
                    Some(l),
                    None,
                )
            }
            BuildKind::Product { left, right } => {
                let x = Arc::new(load_lattice(left, ctx)?);
                let y = Arc::new(load_lattice(right, ctx)?);
                let prod = b.product(&x, &y).map_err(core)?;
                let l = prod.lattice.as_ref().clone();
                (
                    "build product".into(),
                    json!({"left": left.display().to_string(), "right": right.display().to_string()}),
                    l.poset().clone(),
                    Some(l),
                    None,
                )
            }
            BuildKind::Divisor { n } => {
                let d = DivisorLattice::new(*n, ctx.max_elements).map_err(core)?;
                let l = d.lattice().as_ref().clone();
                (
                    "build divisor".into(),
                    json!({"n": n}),
                    l.poset().clone(),
                    Some(l),
                    None,
                )
            }
        };

    if let Some(path) = &args.dot {
        let name = command.trim_start_matches("build ").to_string();
        write(path, &to_dot(&poset, &name))?;
    }
    if let Some(path) = &args.doc {
        write(path, &PosetDocument::from_poset(&poset).to_string())?;
    }

    let ids: Vec<&str> = poset
        .linear_extension()
        .iter()
        .map(|&e| poset.id(e))
        .collect();
    let mut extra = Map::new();
    extra.insert("elements".into(), json!(ids));
    let mut text = format!("{command}: {} elements\n", poset.len());
    let summary = match &lattice {
        Some(l) => {
            text.push_str(&lattice_lines(l));
            output::lattice_summary(l)
        }
        None => {
            let message = diag
                .as_ref()
                .and_then(|d: &latcal_core::LatticeDiagnostic| d.failure.as_ref())
                .map(|f| f.describe())
                .unwrap_or_default();
            let _ = writeln!(text, "not a lattice: {message}");
            if let Some(d) = &diag {
                extra.insert("diagnostic".into(), output::diagnostic(d));
            }
            output::poset_summary(&poset)
        }
    };
    if ids.len() <= 32 {
        let _ = writeln!(text, "elements: {}", ids.join(" "));
    }
    Ok(Outcome {
        doc: output::result_document(&command, input, summary, Value::Null, vec![], extra),
        text,
        code: exit::OK,
    })
}

fn run_checks(v: &Valuation, checks: &[CheckKind], ctx: &Ctx) -> Result<Vec<RuleReport>> {
    let tol = ctx.tolerance;
    let w = BiValuation::new(v.clone());
    let mut reports = Vec::new();
    for check in CheckKind::expand(checks) {
        let r = match check {
            CheckKind::Sum => v.check_sum_rule(tol),
            CheckKind::Monotone => v.check_monotone(tol),
            CheckKind::Chain => w.check_chain_rule(tol),
            CheckKind::ContextProduct => w.check_context_product_rule(tol),
            CheckKind::ContextualSum => w
                .check_contextual_sum_rule(tol)
                .map_err(|e| Failure::from_core(e, exit::PRECONDITION))?,
            CheckKind::Bayes => w.check_bayes(tol),
            CheckKind::ProductSpaces => {
                // The lattice paired with itself under the product valuation.
                let l = v.lattice();
                let prod = ctx
                    .builder()
                    .product(l, l)
                    .map_err(|e| Failure::from_core(e, exit::PRECONDITION))?;
                let joint = product_valuation(v, v, &prod)
                    .map_err(|e| Failure::from_core(e, exit::PRECONDITION))?;
                check_product_spaces_rule(&prod, &BiValuation::new(joint), &w, &w, tol)
                    .map_err(|e| Failure::from_core(e, exit::PRECONDITION))?
            }
            CheckKind::All => unreachable!("expanded above"),
        };
        reports.push(r);
    }
    Ok(reports)
}

pub fn valuate(args: &ValuateArgs, ctx: &Ctx) -> Result<Outcome> {
    let lattice = Arc::new(load_lattice(&args.input, ctx)?);
    let seed = load_seed(&args.seed)?;
    let v = if args.hand_assigned {
        Valuation::from_values(Arc::clone(&lattice), seed.iter().map(|(k, &x)| (k, x)))
    } else {
        Valuation::extend_from_irreducibles(Arc::clone(&lattice), seed.iter().map(|(k, &x)| (k, x)))
    }
    .map_err(|e| {
        let hint = matches!(e, Error::NotIrreducible(_)) && !args.hand_assigned;
        let mut f = Failure::from_core(e, exit::PRECONDITION);
        if hint {
            f.message
                .push_str(" (seed only join-irreducibles, or pass --hand-assigned)");
        }
        f
    })?;
    let reports = run_checks(&v, &args.check, ctx)?;
    let failed = reports.iter().any(|r| !r.passed);

    let mut text = format!(
        "input: {}\nseed: {}\n",
        args.input.display(),
        args.seed.display()
    );
    text.push_str(&lattice_lines(&lattice));
    text.push_str(if args.hand_assigned {
        "valuation (hand assigned):\n"
    } else {
        "valuation (extended from join-irreducibles):\n"
    });
    text.push_str(&output::value_table(&v));
    let _ = writeln!(
        text,
        "monotone: {}",
        if v.is_monotone() { "yes" } else { "no" }
    );
    for r in &reports {
        text.push_str(&output::report_line(r));
        text.push('\n');
    }
    Ok(Outcome {
        doc: output::result_document(
            "valuate",
            json!({"path": args.input.display().to_string(), "seed": args.seed.display().to_string()}),
            output::lattice_summary(&lattice),
            output::valuation(&v, args.hand_assigned),
            reports.iter().map(output::report).collect(),
            Map::new(),
        ),
        text,
        code: if failed { exit::RULE } else { exit::OK },
    })
}

pub fn demo(name: DemoName, ctx: &Ctx) -> Result<Outcome> {
    match name {
        DemoName::Bridge => demo_bridge(ctx),
        DemoName::Divisor => demo_divisor(ctx),
        DemoName::Partition => demo_partition(ctx),
    }
}

fn demo_bridge(ctx: &Ctx) -> Result<Outcome> {
    let core = |e| Failure::from_core(e, exit::PRECONDITION);
    let b = ctx.builder();
    let components = Poset::from_covers(["L", "R", "S"], [("L", "S"), ("R", "S")]).map_err(core)?;
    let states = b.downsets(&components, false).map_err(core)?;
    let state_ids: Vec<&str> = states
        .poset
        .linear_extension()
        .iter()
        .map(|&e| states.poset.id(e))
        .collect();
    let statements = b.powerset(&state_ids).map_err(core)?;
    let statement_lattice = Arc::new(family_lattice(&statements, "statements")?);
    let questions = b.questions(&statement_lattice).map_err(core)?;

    // Equal weight on each state.
    let seed = state_ids.iter().map(|s| (format!("{{{s}}}"), 0.25));
    let v =
        Valuation::extend_from_irreducibles(Arc::clone(&statement_lattice), seed).map_err(core)?;
    let reports = vec![v.check_sum_rule(ctx.tolerance)];
    let w = BiValuation::new(v.clone());
    let example = "{{L},{L,R,S}}";
    let degree = w
        .bival_by_id(example, statement_lattice.id(statement_lattice.top()))
        .map_err(core)?;

    let mut text = String::from("bridge components: L, R below S\n");
    let _ = writeln!(
        text,
        "states (nonempty downsets): {} -> {}",
        states.len(),
        state_ids.join(" ")
    );
    let _ = writeln!(text, "statements (sets of states): {}", statements.len());
    let _ = writeln!(
        text,
        "questions (nonempty downsets of statements): {}",
        questions.len()
    );
    let _ = writeln!(
        text,
        "uniform state weights: v(top) = {}, w({example} | top) = {}",
        short(v.value(statement_lattice.top())),
        short(degree)
    );
    for r in &reports {
        text.push_str(&output::report_line(r));
        text.push('\n');
    }
    let mut extra = Map::new();
    extra.insert(
        "counts".into(),
        json!({"states": states.len(), "statements": statements.len(), "questions": questions.len()}),
    );
    extra.insert("states".into(), json!(state_ids));
    extra.insert(
        "example".into(),
        json!({"statement": example, "degreeGivenTop": num(degree)}),
    );
    Ok(Outcome {
        doc: output::result_document(
            "demo bridge",
            Value::Null,
            output::lattice_summary(&statement_lattice),
            output::valuation(&v, false),
            reports.iter().map(output::report).collect(),
            extra,
        ),
        text,
        code: exit::OK,
    })
}

fn demo_divisor(ctx: &Ctx) -> Result<Outcome> {
    let core = |e| Failure::from_core(e, exit::PRECONDITION);
    let d = DivisorLattice::new(360, ctx.max_elements).map_err(core)?;
    let l = d.lattice();
    let v = d.log_valuation();
    let v12 = v.value(d.elem(12).map_err(core)?);
    let via_sum_rule = v.value(d.elem(4).map_err(core)?) + v.value(d.elem(6).map_err(core)?)
        - v.value(d.elem(2).map_err(core)?);
    let d24 = d.divisibility_degree(2, 4).map_err(core)?;
    let d46 = d.divisibility_degree(4, 6).map_err(core)?;
    let w = d.bivaluation();
    let reports = vec![
        v.check_sum_rule(ctx.tolerance),
        w.check_chain_rule(ctx.tolerance),
        w.check_bayes(ctx.tolerance),
    ];

    let mut text = String::from("divisors of 360 ordered by divisibility\n");
    text.push_str(&lattice_lines(l));
    let _ = writeln!(
        text,
        "v(12) = {} = v(4) + v(6) - v(2) = {} (ln 12 = {})",
        short(v12),
        short(via_sum_rule),
        short(12f64.ln())
    );
    let _ = writeln!(text, "d(2|4) = {}", short(d24));
    let _ = writeln!(text, "d(4|6) = {}", short(d46));
    for r in &reports {
        text.push_str(&output::report_line(r));
        text.push('\n');
    }
    let mut extra = Map::new();
    extra.insert(
        "examples".into(),
        json!({
            "v(12)": num(v12),
            "v(4)+v(6)-v(2)": num(via_sum_rule),
            "ln(12)": num(12f64.ln()),
            "d(2|4)": num(d24),
            "d(4|6)": num(d46),
        }),
    );
    Ok(Outcome {
        doc: output::result_document(
            "demo divisor",
            json!({"n": 360}),
            output::lattice_summary(l),
            output::valuation(v, false),
            reports.iter().map(output::report).collect(),
            extra,
        ),
        text,
        code: exit::OK,
    })
}

fn demo_partition(ctx: &Ctx) -> Result<Outcome> {
    let l = ctx
        .builder()
        .partition_lattice(3)
        .map_err(|e| Failure::from_core(e, exit::PRECONDITION))?;
    let ids: Vec<&str> = l
        .poset()
        .linear_extension()
        .iter()
        .map(|&e| l.id(e))
        .collect();
    let mut text = String::from("partitions of {a,b,c} ordered by refinement\n");
    text.push_str(&lattice_lines(&l));
    let _ = writeln!(text, "partitions: {}", ids.join(" "));
    let mut extra = Map::new();
    extra.insert("elements".into(), json!(ids));
    Ok(Outcome {
        doc: output::result_document(
            "demo partition",
            json!({"n": 3}),
            output::lattice_summary(&l),
            Value::Null,
            vec![],
            extra,
        ),
        text,
        code: exit::OK,
    })
}
