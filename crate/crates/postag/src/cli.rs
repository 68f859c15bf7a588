//! Command implementations for the `postag` binary.

use clap::{Parser, Subcommand, ValueEnum};
use postag::eval::{
    parse_relaxations, report_to_json, AccuracySummary, CoarseClassMap, CrossValOptions,
    RelaxationRule,
};
use postag::rules::serialize_rules;
use postag::{
    correct_corpus, crossvalidate, default_relaxations, evaluate, kfold_split, load_model,
    parse_columnar, parse_plain, parse_rule_file, parse_slash, rank_confusions, save_model,
    serialize, token_accuracy, train, worst_case_sentence_error, Corpus, EngineConfig, Error,
    Format, Gazetteer, Lexicon, Ontology, ParseOptions, Pipeline, Resources, RuleSet, RuleTrace,
    TrainConfig,
};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "postag",
    version,
    about = "Hybrid part-of-speech tagger: averaged perceptron plus rule-based correction"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum FormatArg {
    Slash,
    Columnar,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Slash => Format::Slash,
            FormatArg::Columnar => Format::Columnar,
        }
    }
}

#[derive(clap::Args)]
struct ResourceArgs {
    /// Lexicon file (`word<TAB>TAG[,TAG...]` lines)
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Gazetteer file (one multi-word entity per line)
    #[arg(long)]
    gazetteer: Option<PathBuf>,
    /// Ontology file (one multi-word concept per line)
    #[arg(long)]
    ontology: Option<PathBuf>,
}

impl ResourceArgs {
    fn any(&self) -> bool {
        self.lexicon.is_some() || self.gazetteer.is_some() || self.ontology.is_some()
    }

    fn load(&self) -> Result<Resources, CliError> {
        let mut res = Resources::default();
        if let Some(p) = &self.lexicon {
            res.lexicon = Lexicon::parse(&read(p)?).map_err(data)?;
        }
        if let Some(p) = &self.gazetteer {
            res.gazetteer = Gazetteer::parse(&read(p)?).map_err(data)?;
        }
        if let Some(p) = &self.ontology {
            res.ontology = Ontology::parse(&read(p)?).map_err(data)?;
        }
        Ok(res)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Train a perceptron model on a tagged corpus
    Train {
        /// Tagged training corpus
        #[arg(long)]
        corpus: PathBuf,
        /// Where to write the model (JSON)
        #[arg(long)]
        model: PathBuf,
        /// Training epochs
        #[arg(long, default_value_t = 5)]
        iterations: u32,
        /// Shuffle seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corpus file format
        #[arg(long, value_enum, default_value_t = FormatArg::Slash)]
        format: FormatArg,
        /// Accept tags outside the Penn Treebank inventory
        #[arg(long)]
        allow_extra_tags: bool,
    },
    /// Tag plain text with a trained model, optionally rule-corrected
    Tag {
        /// Trained model file
        #[arg(long)]
        model: PathBuf,
        /// Untagged input, one sentence per line
        #[arg(long)]
        input: PathBuf,
        /// Where to write the tagged output
        #[arg(long)]
        output: PathBuf,
        /// Rule file enabling the correction layer
        #[arg(long)]
        rules: Option<PathBuf>,
        #[command(flatten)]
        resources: ResourceArgs,
        /// Output file format
        #[arg(long, value_enum, default_value_t = FormatArg::Slash)]
        format: FormatArg,
        /// Where to write the rule-application trace
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Correction pass budget
        #[arg(long, default_value_t = 10)]
        max_passes: u32,
    },
    /// Run only the correction rules over already-tagged input
    Correct {
        /// Rule file
        #[arg(long)]
        rules: PathBuf,
        /// Tagged input corpus
        #[arg(long)]
        input: PathBuf,
        /// Where to write the corrected corpus
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        resources: ResourceArgs,
        /// Input and output file format
        #[arg(long, value_enum, default_value_t = FormatArg::Slash)]
        format: FormatArg,
        /// Where to write the rule-application trace
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Correction pass budget
        #[arg(long, default_value_t = 10)]
        max_passes: u32,
        /// Accept tags outside the Penn Treebank inventory
        #[arg(long)]
        allow_extra_tags: bool,
    },
    /// Compare a prediction against gold and write a JSON report
    Eval {
        /// Gold corpus
        #[arg(long)]
        gold: PathBuf,
        /// Predicted corpus
        #[arg(long)]
        pred: PathBuf,
        /// Relaxation pair file (defaults to none)
        #[arg(long)]
        relax: Option<PathBuf>,
        /// Coarse class map override file
        #[arg(long)]
        classes: Option<PathBuf>,
        /// Where to write the JSON report
        #[arg(long)]
        report: PathBuf,
        /// Corpus file format
        #[arg(long, value_enum, default_value_t = FormatArg::Slash)]
        format: FormatArg,
        /// Accept tags outside the Penn Treebank inventory
        #[arg(long)]
        allow_extra_tags: bool,
    },
    /// Print the most frequent gold/predicted tag confusions
    Confusions {
        /// Gold corpus
        #[arg(long)]
        gold: PathBuf,
        /// Predicted corpus
        #[arg(long)]
        pred: PathBuf,
        /// Number of confusion pairs to print
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Corpus file format
        #[arg(long, value_enum, default_value_t = FormatArg::Slash)]
        format: FormatArg,
        /// Accept tags outside the Penn Treebank inventory
        #[arg(long)]
        allow_extra_tags: bool,
    },
    /// K-fold cross-validation of the tagger on a tagged corpus
    Kfold {
        /// Tagged corpus
        #[arg(long)]
        corpus: PathBuf,
        /// Number of folds
        #[arg(long)]
        k: usize,
        /// Fold assignment seed (also the training seed)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rule file enabling the correction layer
        #[arg(long)]
        rules: Option<PathBuf>,
        #[command(flatten)]
        resources: ResourceArgs,
        /// Training epochs per fold
        #[arg(long, default_value_t = 5)]
        iterations: u32,
        /// Relaxation pair file (defaults to the shipped pairs)
        #[arg(long)]
        relax: Option<PathBuf>,
        /// Where to write the JSON report
        #[arg(long)]
        report: Option<PathBuf>,
        /// Corpus file format
        #[arg(long, value_enum, default_value_t = FormatArg::Slash)]
        format: FormatArg,
        /// Accept tags outside the Penn Treebank inventory
        #[arg(long)]
        allow_extra_tags: bool,
    },
    /// Print the worst-case fraction of semantically corrupted sentences
    Bound {
        /// Corpus size in tokens
        #[arg(long)]
        tokens: u64,
        /// Average sentence length in tokens
        #[arg(long)]
        avg_len: u64,
        /// Token-level accuracy in [0, 1]
        #[arg(long)]
        acc: f64,
        /// Fraction of errors that are critical, in [0, 1]
        #[arg(long)]
        critical_frac: f64,
    },
    /// Print the shipped default rule file
    Rules,
}

/// A library error annotated with the exit code it maps to.
struct CliError {
    code: i32,
    message: String,
}

fn usage(e: Error) -> CliError {
    CliError {
        code: 1,
        message: e.to_string(),
    }
}

fn data(e: Error) -> CliError {
    CliError {
        code: 2,
        message: e.to_string(),
    }
}

/// Exit code per error category: config problems are usage errors,
/// malformed inputs are data errors, the rest are internal.
fn classify(e: Error) -> CliError {
    let code = match &e {
        Error::InvalidConfig(_) | Error::InvalidFoldCount { .. } => 1,
        Error::Parse { .. }
        | Error::UnknownTag { .. }
        | Error::UntaggedToken { .. }
        | Error::ShapeMismatch(_)
        | Error::EmptyCorpus
        | Error::ModelVersion { .. }
        | Error::ModelCorrupt(_)
        | Error::Io(_) => 2,
        Error::PhraseNotFound { .. } => 3,
    };
    CliError {
        code,
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn read_corpus(path: &Path, format: FormatArg, allow_extra: bool) -> Result<Corpus, CliError> {
    let text = read(path)?;
    let opts = ParseOptions {
        allow_extra_tags: allow_extra,
    };
    let mut corpus = match format {
        FormatArg::Slash => parse_slash(&text, opts).map_err(data)?,
        FormatArg::Columnar => parse_columnar(&text, opts).map_err(data)?,
    };
    corpus.source_name = path.display().to_string();
    Ok(corpus)
}

fn read_rules(path: &Path) -> Result<RuleSet, CliError> {
    parse_rule_file(&read(path)?).map_err(data)
}

fn read_relaxations(path: &Path) -> Result<Vec<RelaxationRule>, CliError> {
    parse_relaxations(&read(path)?).map_err(data)
}

fn render_traces(traces: &[RuleTrace]) -> String {
    let mut out = String::new();
    for (i, trace) in traces.iter().enumerate() {
        out.push_str(&format!(
            "# sentence {} terminated_by={}\n",
            i + 1,
            trace.terminated_by
        ));
        for e in &trace.entries {
            let fmt = |tags: &[postag::Tag]| {
                tags.iter()
                    .map(|t| t.symbol())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            out.push_str(&format!(
                "pass={} rule={} anchor={} before={} after={}\n",
                e.pass,
                e.rule,
                e.anchor,
                fmt(&e.before),
                fmt(&e.after)
            ));
        }
    }
    out
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Train {
            corpus,
            model,
            iterations,
            seed,
            format,
            allow_extra_tags,
        } => {
            let data_corpus = read_corpus(&corpus, format, allow_extra_tags)?;
            let config = TrainConfig {
                iterations,
                seed,
                shuffle: true,
            };
            let trained = train(&data_corpus, &config).map_err(classify)?;
            write_file(&model, &save_model(&trained))?;
            let pipeline = Pipeline {
                model: &trained,
                resources: None,
                rules: None,
                engine: EngineConfig::default(),
            };
            let (pred, _) = pipeline.tag_corpus(&data_corpus);
            let acc = token_accuracy(&data_corpus, &pred).map_err(classify)?;
            println!("sentences: {}", data_corpus.sentences.len());
            println!("tokens: {}", data_corpus.token_count());
            println!("iterations: {iterations}");
            println!("training token accuracy: {acc:.4}");
            Ok(())
        }
        Command::Tag {
            model,
            input,
            output,
            rules,
            resources,
            format,
            trace,
            max_passes,
        } => {
            let model_bytes =
                fs::read(&model).map_err(|e| CliError {
                    code: 2,
                    message: format!("{}: {e}", model.display()),
                })?;
            let model = load_model(&model_bytes).map_err(data)?;
            let corpus = parse_plain(&read(&input)?);
            let loaded_resources = if resources.any() {
                Some(resources.load()?)
            } else {
                None
            };
            let rule_set = rules.as_deref().map(read_rules).transpose()?;
            let pipeline = Pipeline {
                model: &model,
                resources: loaded_resources.as_ref(),
                rules: rule_set.as_ref(),
                engine: EngineConfig { max_passes },
            };
            let (tagged, traces) = pipeline.tag_corpus(&corpus);
            write_file(
                &output,
                serialize(&tagged, format.into()).map_err(classify)?.as_bytes(),
            )?;
            if let Some(path) = trace {
                write_file(&path, render_traces(&traces).as_bytes())?;
            }
            Ok(())
        }
        Command::Correct {
            rules,
            input,
            output,
            resources,
            format,
            trace,
            max_passes,
            allow_extra_tags,
        } => {
            let rule_set = read_rules(&rules)?;
            let corpus = read_corpus(&input, format, allow_extra_tags)?;
            let loaded = resources.load()?;
            let (corrected, traces) = correct_corpus(
                &rule_set,
                &loaded,
                &EngineConfig { max_passes },
                &corpus,
            );
            write_file(
                &output,
                serialize(&corrected, format.into())
                    .map_err(classify)?
                    .as_bytes(),
            )?;
            if let Some(path) = trace {
                write_file(&path, render_traces(&traces).as_bytes())?;
            }
            Ok(())
        }
        Command::Eval {
            gold,
            pred,
            relax,
            classes,
            report,
            format,
            allow_extra_tags,
        } => {
            let gold = read_corpus(&gold, format, allow_extra_tags)?;
            let pred = read_corpus(&pred, format, allow_extra_tags)?;
            let relaxations = match relax {
                Some(p) => read_relaxations(&p)?,
                None => Vec::new(),
            };
            let class_map = match classes {
                Some(p) => CoarseClassMap::parse(&read(&p)?).map_err(data)?,
                None => CoarseClassMap::default(),
            };
            let r = evaluate(&gold, &pred, &relaxations, &class_map).map_err(classify)?;
            write_file(&report, report_to_json(&r).as_bytes())?;
            println!("token accuracy: {:.4}", r.token_accuracy);
            println!("sentence accuracy: {:.4}", r.sentence_accuracy);
            println!("relaxed token accuracy: {:.4}", r.relaxed_token_accuracy);
            println!(
                "relaxed sentence accuracy: {:.4}",
                r.relaxed_sentence_accuracy
            );
            println!("critical errors: {}", r.critical_errors);
            println!("non-critical errors: {}", r.non_critical_errors);
            Ok(())
        }
        Command::Confusions {
            gold,
            pred,
            top,
            format,
            allow_extra_tags,
        } => {
            let gold = read_corpus(&gold, format, allow_extra_tags)?;
            let pred = read_corpus(&pred, format, allow_extra_tags)?;
            let m = postag::confusion_matrix(&gold, &pred).map_err(classify)?;
            for ((g, p), count) in rank_confusions(&m, top) {
                println!("{g}\t{p}\t{count}");
            }
            Ok(())
        }
        Command::Kfold {
            corpus,
            k,
            seed,
            rules,
            resources,
            iterations,
            relax,
            report,
            format,
            allow_extra_tags,
        } => {
            let data_corpus = read_corpus(&corpus, format, allow_extra_tags)?;
            // fail fast on a bad k before any training
            kfold_split(&data_corpus, k, seed).map_err(classify)?;
            let loaded_resources = if resources.any() {
                Some(resources.load()?)
            } else {
                None
            };
            let rule_set = rules.as_deref().map(read_rules).transpose()?;
            let relaxations = match relax {
                Some(p) => read_relaxations(&p)?,
                None => default_relaxations(),
            };
            let opts = CrossValOptions {
                k,
                seed,
                train: TrainConfig {
                    iterations,
                    seed,
                    shuffle: true,
                },
                resources: loaded_resources.as_ref(),
                rules: rule_set.as_ref(),
                engine: EngineConfig::default(),
                relaxations,
                classes: CoarseClassMap::default(),
            };
            let cv = crossvalidate(&data_corpus, &opts).map_err(classify)?;
            for (i, fold) in cv.folds.iter().enumerate() {
                println!(
                    "fold {i}: token {:.4} sentence {:.4}",
                    fold.token_accuracy, fold.sentence_accuracy
                );
            }
            let line = |label: &str, s: &AccuracySummary| {
                println!(
                    "{label}: token {:.4} sentence {:.4} relaxed-token {:.4} relaxed-sentence {:.4}",
                    s.token_accuracy,
                    s.sentence_accuracy,
                    s.relaxed_token_accuracy,
                    s.relaxed_sentence_accuracy
                );
            };
            line("mean", &cv.mean);
            line("variance", &cv.variance);
            if let Some(path) = report {
                let mut json = serde_json::to_string_pretty(&cv).map_err(|e| CliError {
                    code: 3,
                    message: e.to_string(),
                })?;
                json.push('\n');
                write_file(&path, json.as_bytes())?;
            }
            Ok(())
        }
        Command::Bound {
            tokens,
            avg_len,
            acc,
            critical_frac,
        } => {
            let x =
                worst_case_sentence_error(tokens, avg_len, acc, critical_frac).map_err(usage)?;
            println!("{x}");
            Ok(())
        }
        Command::Rules => {
            print!("{}", serialize_rules(&postag::default_rules()));
            Ok(())
        }
    }
}
