use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use nbparse::audit::{audit, AuditConfig};
use nbparse::dynamic_oracle::Conditions;
use nbparse::evaluator::{evaluate, evaluate_by_arity, stats, timing_profile};
use nbparse::scorer::{Model, DEFAULT_BUCKETS};
use nbparse::trainer::{parse_all, train, TrainConfig};
use nbparse::treebank::{read_ptb, read_tagged, write_ptb, HeadRules, Token, DEFAULT_UNARY_CAP};

use crate::args::{AuditArgs, Cli, Command, Condition, EvalArgs, ParseArgs, StatsArgs, TrainArgs};
use crate::config::ConfigFile;
use crate::CliError;

pub fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(p) => read_text(p)?.parse()?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Train(a) => cmd_train(a, &config, out),
        Command::Parse(a) => cmd_parse(a, &config, out),
        Command::Eval(a) => cmd_eval(a, &config, out),
        Command::OracleAudit(a) => cmd_audit(a, &config, out),
        Command::Stats(a) => cmd_stats(a, &config, out),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_err(e: io::Error) -> CliError {
    CliError::Io(format!("write failed: {e}"))
}

fn emit(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<(), CliError> {
    write!(out, "{text}").map_err(write_err)
}

fn emit_records(out: &mut dyn Write, records: &[String]) -> Result<(), CliError> {
    for r in records {
        writeln!(out, "{r}").map_err(write_err)?;
    }
    Ok(())
}

fn read_trees(path: &Path) -> Result<Vec<nbparse::treebank::Tree>, CliError> {
    read_ptb(&read_text(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn head_rules(path: Option<&Path>) -> Result<HeadRules, CliError> {
    match path {
        None => Ok(HeadRules::english()),
        Some(p) => read_text(p)?
            .parse()
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
    }
}

fn cmd_train(a: TrainArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<(), CliError> {
    let defaults = TrainConfig::default();
    let rules_path = cfg.pick(a.head_rules, "head-rules")?;
    let config = TrainConfig {
        system: cfg.pick(a.system, "system")?.unwrap_or(defaults.system),
        oracle: cfg.pick(a.oracle, "oracle")?.unwrap_or(defaults.oracle),
        policy: cfg.pick(a.explore, "explore")?.unwrap_or(defaults.policy),
        epochs: cfg.pick(a.epochs, "epochs")?.unwrap_or(defaults.epochs),
        seed: cfg.pick(a.seed, "seed")?.unwrap_or(defaults.seed),
        unary_cap: cfg
            .pick(a.unary_cap, "unary-cap")?
            .unwrap_or(DEFAULT_UNARY_CAP),
        buckets: cfg.pick(a.buckets, "buckets")?.unwrap_or(DEFAULT_BUCKETS),
        head_rules: head_rules(rules_path.as_deref())?,
    };
    config.validate()?;
    let trees = read_trees(&a.treebank)?;
    let (model, report) = train(&trees, &config)?;
    model
        .save(&a.output)
        .map_err(|e| CliError::Io(format!("{}: {e}", a.output.display())))?;
    if a.records {
        emit_records(out, &report.records())
    } else {
        emit(out, &report)
    }
}

fn cmd_parse(a: ParseArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<(), CliError> {
    let trace = cfg.switch(a.trace, "trace")?;
    let threads = cfg.pick(a.threads, "threads")?.unwrap_or(1);
    let model_text = read_text(&a.model)?;
    let model: Model = model_text
        .parse()
        .map_err(|e| CliError::Usage(format!("{}: {e}", a.model.display())))?;
    let text = match &a.input {
        Some(p) => read_text(p)?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(format!("standard input: {e}")))?;
            s
        }
    };
    let lines = read_tagged(&text)?;
    let sentences: Vec<Vec<Token>> = lines.iter().map(|(_, t)| t.clone()).collect();
    let results = parse_all(&model, &sentences, threads);

    let mut file;
    let mut sink: Box<dyn Write + '_> = match &a.output {
        Some(p) => {
            file = BufWriter::new(
                fs::File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
            );
            Box::new(&mut file)
        }
        None => Box::new(BufWriter::new(out)),
    };
    for ((line, _), r) in lines.iter().zip(results) {
        let (tree, transitions) = r.map_err(|e| CliError::Usage(format!("line {line}: {e}")))?;
        writeln!(sink, "{}", write_ptb(&tree)).map_err(write_err)?;
        if trace {
            let t: Vec<String> = transitions.iter().map(|t| t.to_string()).collect();
            writeln!(sink, "{}", t.join(" ")).map_err(write_err)?;
        }
    }
    sink.flush().map_err(write_err)
}

fn cmd_eval(a: EvalArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<(), CliError> {
    let by_arity = cfg.switch(a.by_arity, "by-arity")?;
    let gold = read_trees(&a.gold)?;
    let pred = read_trees(&a.predicted)?;
    let result = if by_arity {
        evaluate_by_arity(&gold, &pred)?
    } else {
        evaluate(&gold, &pred)?
    };
    if a.records {
        emit_records(out, &result.records())
    } else {
        emit(out, &result)
    }
}

fn cmd_audit(a: AuditArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<(), CliError> {
    if a.max_len == 0
        || a.labels == 0
        || a.sample_labels == 0
        || (a.samples > 0 && a.sample_len == 0)
    {
        return Err(CliError::Usage("audit sizes must be positive".into()));
    }
    let mut conditions = Conditions::default();
    match a.disable_condition {
        Some(Condition::Built) => conditions.built = false,
        Some(Condition::Buffer) => conditions.in_buffer = false,
        Some(Condition::Stack) => conditions.stack_anchored = false,
        None => {}
    }
    let config = AuditConfig {
        exhaustive_len: a.max_len,
        exhaustive_labels: a.labels,
        depth: a.depth,
        gold_unary: a.max_chain,
        gold_unary_nodes: a.max_unary_nodes,
        samples: a.samples,
        sample_len: a.sample_len,
        sample_labels: a.sample_labels,
        seed: cfg.pick(a.seed, "seed")?.unwrap_or(0),
        unary_cap: cfg
            .pick(a.unary_cap, "unary-cap")?
            .unwrap_or(DEFAULT_UNARY_CAP),
        conditions,
        keep: a.keep,
    };
    let report = audit(&config);
    if a.records {
        emit_records(out, &report.records())?;
    } else {
        emit(out, &report)?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::AuditFailed)
    }
}

fn cmd_stats(a: StatsArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<(), CliError> {
    let rules_path = cfg.pick(a.head_rules, "head-rules")?;
    let rules = head_rules(rules_path.as_deref())?;
    let trees = read_trees(&a.treebank)?;
    let s = stats(&trees, &rules)?;
    let profile = match &a.model {
        None => None,
        Some(p) => {
            let model: Model = read_text(p)?
                .parse()
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            let sentences: Vec<Vec<Token>> = trees.iter().map(|t| t.tokens()).collect();
            Some(timing_profile(&model, &sentences)?)
        }
    };
    if a.records {
        emit_records(out, &s.records())?;
        if let Some(p) = profile {
            emit_records(out, &p.records())?;
        }
        Ok(())
    } else {
        emit(out, &s)?;
        if let Some(p) = profile {
            emit(
                out,
                format!("sentences/second        {:.1}\n", p.sentences_per_second()),
            )?;
            if let Some(fit) = p.fit {
                emit(
                    out,
                    format!(
                        "seconds ~ {:.3e} * length + {:.3e} (R^2 {:.3})\n",
                        fit.slope, fit.intercept, fit.r_squared
                    ),
                )?;
            }
        }
        Ok(())
    }
}
