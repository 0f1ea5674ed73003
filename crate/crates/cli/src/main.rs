use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lexsel_core::corpus::{self, parse_corpus, CorpusRecord, EvalReport, FreqTable};
use lexsel_core::selector::{DEFAULT_FLOOR, DEFAULT_MAX_CANDIDATES};
use lexsel_core::taxonomy::PathMetrics;
use lexsel_core::{
    bundled, ArgumentStructure, DecisionTree, DomainWeights, Engine, Lexicon, RoleId, SelectConfig,
};
use lexsel_core::{SelectError, TaxonomyStore, Translation};
use serde_json::json;

/// Taxonomy-backed lexical selection for verb translation.
///
/// Without data flags the bundled taxonomy, lexicon and action tree are used.
#[derive(Parser, Debug)]
#[command(name = "lexsel", version)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Options {
    /// Taxonomy document; repeat to combine domains from several files.
    #[arg(long, global = true, value_name = "PATH")]
    taxonomy: Vec<PathBuf>,
    /// Lexicon document.
    #[arg(long, global = true, value_name = "PATH")]
    lexicon: Option<PathBuf>,
    /// Action decision tree. Defaults to the bundled tree only when the
    /// taxonomy and lexicon are bundled too.
    #[arg(long, global = true, value_name = "PATH")]
    tree: Option<PathBuf>,
    /// JSON object of per-domain weights.
    #[arg(long, global = true, value_name = "PATH")]
    weights: Option<PathBuf>,
    /// Clause corpus (JSON Lines).
    #[arg(long, global = true, value_name = "PATH")]
    corpus: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Minimum similarity for neighboring concepts.
    #[arg(long, global = true, default_value_t = DEFAULT_FLOOR)]
    floor: f64,
    /// Maximum realized neighboring concepts per domain.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CANDIDATES)]
    max_candidates: usize,
    /// Show per-domain and per-constraint score breakdowns.
    #[arg(long, global = true)]
    explain: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Similarity of two concepts in the same domain.
    Sim {
        /// `domain:name`, or a name found in exactly one domain.
        first: String,
        second: String,
    },
    /// Rank target verbs for one clause.
    Select(SelectArgs),
    /// Translate a gold-labelled corpus and report accuracy.
    Eval,
    /// Rank-frequency table of gold translations.
    Freq,
}

#[derive(Args, Debug)]
struct SelectArgs {
    /// Source verb.
    #[arg(required_unless_present = "clause", conflicts_with = "clause")]
    lexeme: Option<String>,
    #[arg(long, value_name = "CONCEPT")]
    e0: Option<String>,
    #[arg(long, value_name = "CONCEPT")]
    e1: Option<String>,
    #[arg(long, value_name = "CONCEPT")]
    e2: Option<String>,
    /// Context marker; repeatable.
    #[arg(long = "marker", value_name = "NAME")]
    markers: Vec<String>,
    /// A single corpus record instead of the flags above.
    #[arg(long, value_name = "JSON", conflicts_with_all = ["e0", "e1", "e2", "markers"])]
    clause: Option<String>,
}

/// Failure with its exit status: 1 for a vocabulary gap, 2 otherwise.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn data(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<SelectError> for Failure {
    fn from(e: SelectError) -> Self {
        let code = if matches!(e, SelectError::VocabularyGap { .. }) {
            1
        } else {
            2
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn load_store(opts: &Options) -> Result<TaxonomyStore, Failure> {
    if opts.taxonomy.is_empty() {
        return Ok(bundled::store());
    }
    let texts = opts
        .taxonomy
        .iter()
        .map(|p| read(p))
        .collect::<Result<Vec<_>, _>>()?;
    TaxonomyStore::load_many(texts.iter().map(String::as_str)).map_err(Failure::data)
}

fn load_engine(opts: &Options) -> Result<Engine, Failure> {
    let store = load_store(opts)?;
    let lexicon = match &opts.lexicon {
        Some(p) => Lexicon::load(&read(p)?, &store).map_err(Failure::data)?,
        None => Lexicon::load(bundled::LEXICON, &store).map_err(Failure::data)?,
    };
    let tree = match &opts.tree {
        Some(p) => Some(DecisionTree::load(&read(p)?, &store, &lexicon).map_err(Failure::data)?),
        None if opts.taxonomy.is_empty() && opts.lexicon.is_none() => {
            Some(bundled::tree(&store, &lexicon))
        }
        None => None,
    };
    let weights = match &opts.weights {
        Some(p) => DomainWeights::from_json(&read(p)?).map_err(Failure::data)?,
        None => DomainWeights::uniform(),
    };
    if !(0.0..=1.0).contains(&opts.floor) {
        return Err(Failure::data(format!(
            "--floor must lie in [0, 1], got {}",
            opts.floor
        )));
    }
    let config = SelectConfig {
        floor: opts.floor,
        max_candidates: opts.max_candidates,
        weights,
        ..SelectConfig::default()
    };
    Ok(Engine::new(store, lexicon, tree, config))
}

fn load_corpus(opts: &Options, fallback: &str) -> Result<Vec<CorpusRecord>, Failure> {
    let text = match &opts.corpus {
        Some(p) => read(p)?,
        None => fallback.to_string(),
    };
    parse_corpus(&text).map_err(Failure::data)
}

fn cmd_sim(opts: &Options, first: &str, second: &str) -> Result<String, Failure> {
    let store = load_store(opts)?;
    let a = store.resolve(first).map_err(Failure::data)?;
    let b = store.resolve(second).map_err(Failure::data)?;
    let m = store
        .least_common_superconcept(&a, &b)
        .map_err(Failure::data)?;
    let sim = m.similarity();
    let (num, den) = m.raw_fraction();
    let decimal = format!("{:.6}", *sim.numer() as f64 / *sim.denom() as f64);
    Ok(match opts.format {
        Format::Text => format!(
            "{a} ~ {b}\nsimilarity {decimal} {sim} ({num}/{den})\nlcs {}\nn1 {}\nn2 {}\nn3 {}\n",
            m.lcs, m.n1, m.n2, m.n3
        ),
        Format::Json => json_line(&json!({
            "first": a.to_string(),
            "second": b.to_string(),
            "similarity": sim.to_string(),
            "decimal": decimal,
            "raw": format!("{num}/{den}"),
            "lcs": m.lcs.to_string(),
            "n1": m.n1,
            "n2": m.n2,
            "n3": m.n3,
        })),
        Format::Tsv => sim_tsv(
            &a.to_string(),
            &b.to_string(),
            &decimal,
            &sim.to_string(),
            &m,
        ),
    })
}

fn sim_tsv(a: &str, b: &str, decimal: &str, sim: &str, m: &PathMetrics) -> String {
    let (num, den) = m.raw_fraction();
    format!(
        "first\tsecond\tsimilarity\tdecimal\traw\tlcs\tn1\tn2\tn3\n{a}\t{b}\t{sim}\t{decimal}\t{num}/{den}\t{}\t{}\t{}\t{}\n",
        m.lcs, m.n1, m.n2, m.n3
    )
}

fn select_args(engine: &Engine, args: &SelectArgs) -> Result<(String, ArgumentStructure), Failure> {
    if let Some(line) = &args.clause {
        let records = parse_corpus(line).map_err(Failure::data)?;
        let [record] = records.as_slice() else {
            return Err(Failure::data("--clause takes exactly one record"));
        };
        return Ok((
            record.id.clone(),
            record.to_args(engine).map_err(Failure::data)?,
        ));
    }
    let mut out = ArgumentStructure::new(args.lexeme.clone().expect("clap requires a lexeme"));
    for (role, token) in [
        (RoleId::E0, &args.e0),
        (RoleId::E1, &args.e1),
        (RoleId::E2, &args.e2),
    ] {
        if let Some(token) = token {
            let concept = corpus::resolve_binding(engine, token).map_err(Failure::data)?;
            out = out.bind(role, concept);
        }
    }
    for m in &args.markers {
        out = out.marker(m);
    }
    Ok(("sentence-1".to_string(), out))
}

fn cmd_select(opts: &Options, args: &SelectArgs) -> Result<String, Failure> {
    let engine = load_engine(opts)?;
    let (id, clause) = select_args(&engine, args)?;
    let t = engine.translate_clause(&id, &clause)?;
    Ok(match opts.format {
        Format::Text => select_text(&t, opts.explain),
        Format::Json => select_json(&t, opts.explain),
        Format::Tsv => select_tsv(&t),
    })
}

fn or_dash(c: Option<&impl ToString>) -> String {
    c.map(|c| c.to_string()).unwrap_or_else(|| "-".to_string())
}

fn select_text(t: &Translation, explain: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "source sense: {}", t.source_sense);
    let _ = writeln!(out, "inter-rep {}:", t.inter_rep.sentence_id);
    for slot in &t.inter_rep.slots {
        let _ = writeln!(out, "  {slot}");
    }
    let _ = writeln!(out, "action: {}", or_dash(t.action.as_ref()));
    let _ = writeln!(out, "selected: {} ({})", t.lexeme(), t.gloss());
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<4} {:<12} {:<12} {:<18} {:<18} {:<8} {:<6} via",
        "rank", "lexeme", "sense", "concept", "constraint", "near", "action"
    );
    for (i, c) in t.candidates.iter().enumerate() {
        let r = &c.result;
        let _ = writeln!(
            out,
            "{:<4} {:<12} {:<12} {:<18} {:<18} {:<8} {:<6} {}",
            i + 1,
            r.lexeme,
            r.sense_id,
            format!(
                "{} {}",
                r.score.concept_score,
                r.score.concept_score.fraction()
            ),
            format!(
                "{} {}",
                r.score.constraint_score,
                r.score.constraint_score.fraction()
            ),
            r.neighborhood_sim.fraction(),
            if c.action_match { "yes" } else { "no" },
            r.via_concept,
        );
        if explain {
            for d in &r.explanation.domains {
                let _ = writeln!(
                    out,
                    "       domain {:<14} weight {:<6} {} vs {}: {}",
                    d.domain,
                    d.weight.fraction(),
                    or_dash(d.left.as_ref().map(|c| &c.name)),
                    or_dash(d.right.as_ref().map(|c| &c.name)),
                    d.similarity.fraction()
                );
            }
            for k in &r.explanation.constraints {
                let _ = writeln!(
                    out,
                    "       {} must be {}: {} -> {}{}",
                    k.role,
                    k.constraint.name,
                    or_dash(k.entity.as_ref().map(|c| &c.name)),
                    k.degree.fraction(),
                    if k.is_a { " (is-a)" } else { "" }
                );
            }
        }
    }
    out
}

fn select_json(t: &Translation, explain: bool) -> String {
    let candidates: Vec<_> = t
        .candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut v = json!({
                "rank": i + 1,
                "lexeme": c.result.lexeme,
                "sense_id": c.result.sense_id,
                "concept_score": c.result.score.concept_score,
                "constraint_score": c.result.score.constraint_score,
                "via_concept": c.result.via_concept.to_string(),
                "neighborhood_sim": c.result.neighborhood_sim,
                "action_component": c.action_component.as_ref().map(ToString::to_string),
                "action_match": c.action_match,
            });
            if explain {
                v["explanation"] =
                    serde_json::to_value(&c.result.explanation).expect("serializable");
            }
            v
        })
        .collect();
    json_line(&json!({
        "sentence_id": t.inter_rep.sentence_id,
        "source_sense": t.source_sense,
        "inter_rep": t.inter_rep.slots.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "action": t.action.as_ref().map(ToString::to_string),
        "selected": t.lexeme(),
        "gloss": t.gloss(),
        "candidates": candidates,
    }))
}

fn select_tsv(t: &Translation) -> String {
    let mut out = String::from("rank\tlexeme\tsense_id\tconcept_score\tconstraint_score\tneighborhood_sim\tvia_concept\taction_match\n");
    for (i, c) in t.candidates.iter().enumerate() {
        let r = &c.result;
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            i + 1,
            r.lexeme,
            r.sense_id,
            r.score.concept_score.fraction(),
            r.score.constraint_score.fraction(),
            r.neighborhood_sim.fraction(),
            r.via_concept,
            c.action_match
        );
    }
    out
}

fn cmd_eval(opts: &Options) -> Result<String, Failure> {
    let engine = load_engine(opts)?;
    let records = load_corpus(opts, bundled::CORPUS)?;
    // Vocabulary gaps are scored as misses, so any error here is a data error.
    let report = corpus::evaluate(&engine, &records).map_err(Failure::data)?;
    Ok(match opts.format {
        Format::Text => eval_text(&report),
        Format::Json => json_line(&report),
        Format::Tsv => eval_tsv(&report),
    })
}

fn eval_text(r: &EvalReport) -> String {
    let mut out = format!("{:<32} {:<12} {:<12} match\n", "id", "predicted", "gold");
    for i in &r.items {
        let _ = writeln!(
            out,
            "{:<32} {:<12} {:<12} {}",
            i.id,
            i.predicted.as_deref().unwrap_or("-"),
            i.gold,
            if i.matched { "yes" } else { "no" }
        );
    }
    let _ = writeln!(
        out,
        "accuracy {}/{} = {:.6}",
        r.correct, r.total, r.accuracy
    );
    out
}

fn eval_tsv(r: &EvalReport) -> String {
    let mut out = String::from("id\tpredicted\tgold\tmatch\n");
    for i in &r.items {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            i.id,
            i.predicted.as_deref().unwrap_or("-"),
            i.gold,
            i.matched
        );
    }
    let _ = writeln!(
        out,
        "# total={} correct={} accuracy={:.6}",
        r.total, r.correct, r.accuracy
    );
    out
}

fn cmd_freq(opts: &Options) -> Result<String, Failure> {
    let records = load_corpus(opts, bundled::FREQ_SAMPLE)?;
    let table = FreqTable::from_records(&records).map_err(Failure::data)?;
    Ok(match opts.format {
        Format::Json => json_line(&table),
        Format::Text | Format::Tsv => {
            let mut out = String::from("rank\tlexeme\tcount\n");
            for r in &table.rows {
                let _ = writeln!(out, "{}\t{}\t{}", r.rank, r.lexeme, r.count);
            }
            out
        }
    })
}

fn json_line(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sim { first, second } => cmd_sim(&cli.opts, first, second),
        Command::Select(args) => cmd_select(&cli.opts, args),
        Command::Eval => cmd_eval(&cli.opts),
        Command::Freq => cmd_freq(&cli.opts),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
