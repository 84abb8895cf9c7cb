use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use hmmfst::corpus::{read_raw, write_tagged, CorpusError, RawToken, TaggedSentence, TaggedToken};
use hmmfst::eval::{
    benchmark, build_s_plus_n1, gen_synthetic, random_world, run_experiment, select_subsequences, ExperimentConfig,
    Source, WorldConfig,
};
use hmmfst::fsm::{canonical, is_pair_deterministic, FstError};
use hmmfst::hmm::{train_from_tagged, HmmError, TrainOptions, DEFAULT_SMOOTHING};
use hmmfst::ntype::{build_n0, build_n1};
use hmmfst::stype::{complete, disambiguate_all, paired_union, read_subsequences, write_subsequences, Kind};
use hmmfst::tagger::{classify, ClassTagger, FstTagger, Guesser, HmmTagger, Lexicon, StreamTagger, TagError};
use hmmfst::{ClassId, Fst, HmmParams, Inventory, TagId};

const PARAMS_FILE: &str = "params.hmm";
const LEXICON_FILE: &str = "lexicon.tsv";
const GUESSER_FILE: &str = "guesser.tsv";
const UNKNOWN_CLASS: &str = "[UNKNOWN]";

#[derive(Parser)]
#[command(name = "hmmfst", version, about = "HMM taggers and their finite-state approximations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate an HMM, lexicon and suffix guesser from a tagged corpus.
    Train {
        /// `word<TAB>tag` or `word<TAB>class<TAB>tag` lines.
        #[arg(long)]
        corpus: PathBuf,
        /// Model directory to create.
        #[arg(long)]
        out: PathBuf,
        /// Tag of sentence-end tokens.
        #[arg(long, default_value = "SENT")]
        end_tag: String,
        #[arg(long, default_value_t = DEFAULT_SMOOTHING)]
        smoothing: f64,
    },
    /// Build a tagging transducer from a model.
    Build {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "type", value_enum)]
        kind: BuildKind,
        /// Corpus the s-type subsequences are extracted from.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Keep subsequences seen at least this often.
        #[arg(long, default_value_t = 1)]
        min_freq: usize,
        /// Use every subsequence up to this length instead of a corpus.
        #[arg(long, conflicts_with = "corpus")]
        enumerate: Option<usize>,
        /// Read tagged subsequences from a dump instead.
        #[arg(long, conflicts_with_all = ["corpus", "enumerate"])]
        subsequences: Option<PathBuf>,
        /// Write the tagged subsequences here.
        #[arg(long)]
        dump_subsequences: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tag one token per line; a blank line is ignored.
    Tag {
        #[arg(long)]
        model: PathBuf,
        /// Transducer to tag with; the HMM is used when absent.
        #[arg(long)]
        fst: Option<PathBuf>,
        #[arg(long)]
        show_classes: bool,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Accuracy, agreement, speed and size of every tagger type.
    Eval {
        #[arg(long)]
        model: PathBuf,
        /// Corpus for s-type extraction.
        #[arg(long)]
        train: PathBuf,
        /// Tagged corpus to score.
        #[arg(long)]
        test: PathBuf,
        /// s+n1 from the training corpus at this threshold. Repeatable.
        #[arg(long = "min-freq", default_values_t = [1usize])]
        min_freq: Vec<usize>,
        /// s+n1 from all subsequences up to this length. Repeatable.
        #[arg(long)]
        enumerate: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        runs: usize,
        /// Also print `metric<TAB>tagger<TAB>value` lines.
        #[arg(long)]
        machine: bool,
    },
    /// Throughput of the HMM, n0, n1 and any given transducers.
    Bench {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        /// `name=path` of an extra transducer. Repeatable.
        #[arg(long)]
        fst: Vec<String>,
        #[arg(long, default_value_t = 5)]
        runs: usize,
    },
    /// Sample a random model and a corpus from it.
    Gen {
        #[arg(long, default_value_t = 12)]
        tags: usize,
        #[arg(long, default_value_t = 24)]
        ambiguous: usize,
        #[arg(long, default_value_t = 7)]
        world_seed: u64,
        #[arg(long, default_value_t = 1000)]
        sentences: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        words_per_class: usize,
        #[arg(long, default_value_t = 60)]
        max_len: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write the generating model.
        #[arg(long)]
        params_out: Option<PathBuf>,
    },
    /// Summarize a model directory or a transducer.
    Inspect {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        fst: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    N0,
    N1,
    #[value(name = "s+n1")]
    SN1,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_io(&e) { 2 } else { 1 })
        }
    }
}

fn is_io(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.is::<io::Error>()
            || matches!(c.downcast_ref::<CorpusError>(), Some(CorpusError::Io(_)))
            || matches!(c.downcast_ref::<HmmError>(), Some(HmmError::Io(_)))
            || matches!(c.downcast_ref::<TagError>(), Some(TagError::Io(_)))
            || matches!(c.downcast_ref::<FstError>(), Some(FstError::Io(_)))
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("cannot open {}", path.display()))?))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train { corpus, out, end_tag, smoothing } => train(&corpus, &out, &end_tag, smoothing),
        Command::Build { model, kind, corpus, min_freq, enumerate, subsequences, dump_subsequences, out } => {
            let m = Model::load(&model)?;
            let start = Instant::now();
            let fst = match kind {
                BuildKind::N0 => build_n0(&m.params)?,
                BuildKind::N1 => build_n1(&m.params)?,
                BuildKind::SN1 => {
                    build_s_type(&m, corpus.as_deref(), min_freq, enumerate, subsequences.as_deref(), dump_subsequences.as_deref())?
                }
            };
            let mut w = create(&out)?;
            fst.write_text(m.params.inventory(), &mut w)?;
            w.flush()?;
            eprintln!(
                "{} states, {} arcs, built in {:.3} s",
                fst.num_states(),
                fst.num_arcs(),
                start.elapsed().as_secs_f64()
            );
            Ok(())
        }
        Command::Tag { model, fst, show_classes, input, output } => {
            let m = Model::load(&model)?;
            let hmm;
            let fst_tagger;
            let tagger: &dyn ClassTagger = match &fst {
                Some(path) => {
                    fst_tagger = FstTagger::new(m.read_fst(path)?);
                    &fst_tagger
                }
                None => {
                    hmm = HmmTagger::new(&m.params);
                    &hmm
                }
            };
            let stream = StreamTagger {
                tagger,
                inventory: m.params.inventory(),
                lexicon: &m.lexicon,
                guesser: &m.guesser,
                unknown: m.unknown()?,
                sentence_end: m.params.sentence_end(),
                show_classes,
            };
            let reader: Box<dyn BufRead> = match &input {
                Some(p) => Box::new(open(p)?),
                None => Box::new(io::stdin().lock()),
            };
            let writer: Box<dyn Write> = match &output {
                Some(p) => Box::new(create(p)?),
                None => Box::new(BufWriter::new(io::stdout().lock())),
            };
            let stats = stream.tag_stream(reader, writer)?;
            eprintln!(
                "{} sentences, {} tokens, {} unknown, {} unterminated",
                stats.sentences, stats.tokens, stats.unknown, stats.unterminated
            );
            Ok(())
        }
        Command::Eval { model, train, test, min_freq, enumerate, runs, machine } => {
            let m = Model::load(&model)?;
            let train = m.read_corpus(&train, false)?;
            let test = m.read_corpus(&test, true)?;
            let mut sources: Vec<Source> = min_freq.into_iter().map(|f| Source::Corpus { min_freq: f }).collect();
            sources.extend(enumerate.into_iter().map(|l| Source::Enumerate { max_len: l }));
            let report = run_experiment(&m.params, &train, &test, &ExperimentConfig { sources, bench_runs: runs })?;
            print!("{}", report.table());
            if machine {
                print!("{}", report.lines());
            }
            Ok(())
        }
        Command::Bench { model, corpus, fst, runs } => {
            let m = Model::load(&model)?;
            let classes: Vec<Vec<ClassId>> =
                m.read_corpus(&corpus, false)?.iter().map(|s| s.iter().map(|t| t.class).collect()).collect();
            let hmm = HmmTagger::new(&m.params);
            let mut fsts = vec![("n0".to_string(), FstTagger::new(build_n0(&m.params)?))];
            fsts.push(("n1".to_string(), FstTagger::new(build_n1(&m.params)?)));
            for spec in &fst {
                let (name, path) = spec.split_once('=').ok_or_else(|| anyhow!("expected name=path, got {spec}"))?;
                fsts.push((name.to_string(), FstTagger::new(m.read_fst(Path::new(path))?)));
            }
            let mut taggers: Vec<(&str, &dyn ClassTagger)> = vec![("hmm", &hmm)];
            taggers.extend(fsts.iter().map(|(n, t)| (n.as_str(), t as &dyn ClassTagger)));
            let words: usize = classes.iter().map(Vec::len).sum();
            let results = benchmark(&taggers, &classes, runs)?;
            let base = results[0].words_per_sec;
            println!("{words} words, median of {} runs", runs.max(3));
            for r in &results {
                println!("{:<12} {:>14.0} words/sec  {:>6.2}x hmm", r.name, r.words_per_sec, r.words_per_sec / base);
            }
            Ok(())
        }
        Command::Gen { tags, ambiguous, world_seed, sentences, seed, words_per_class, max_len, out, params_out } => {
            if sentences == 0 {
                bail!("--sentences must be at least 1");
            }
            let cfg = WorldConfig { tags, ambiguous_classes: ambiguous, ..WorldConfig::default() };
            if tags < 2 {
                bail!("--tags must be at least 2");
            }
            let world = random_world(&cfg, world_seed);
            let corpus = gen_synthetic(&world, sentences, words_per_class, max_len, seed);
            let mut w = create(&out)?;
            write_tagged(world.inventory(), &corpus, &mut w)?;
            w.flush()?;
            if let Some(p) = params_out {
                let mut w = create(&p)?;
                world.write_to(&mut w)?;
                w.flush()?;
            }
            Ok(())
        }
        Command::Inspect { model, fst } => {
            let m = Model::load(&model)?;
            let inv = m.params.inventory();
            println!("tags\t{}", inv.num_tags());
            println!("classes\t{}", inv.num_classes());
            println!("ambiguous classes\t{}", inv.ambiguous_classes().count());
            println!("sentence end\t{}", inv.class(m.params.sentence_end()).name);
            println!("lexicon entries\t{}", m.lexicon.len());
            println!("guesser suffixes\t{}", m.guesser.len());
            if let Some(path) = fst {
                let f = m.read_fst(&path)?;
                let min = canonical(&f);
                println!("states\t{}", f.num_states());
                println!("arcs\t{}", f.num_arcs());
                println!("minimal states\t{}", min.num_states());
                println!("minimal arcs\t{}", min.num_arcs());
                println!("input deterministic\t{}", f.is_input_deterministic());
                println!("pair deterministic\t{}", is_pair_deterministic(&f));
            }
            Ok(())
        }
    }
}

fn build_s_type(
    m: &Model,
    corpus: Option<&Path>,
    min_freq: usize,
    enumerate: Option<usize>,
    subsequences: Option<&Path>,
    dump: Option<&Path>,
) -> Result<Fst> {
    let p = &m.params;
    let n1 = build_n1(p)?;
    let (initials, middles) = match subsequences {
        Some(path) => {
            let subs = read_subsequences(p.inventory(), open(path)?)?;
            subs.into_iter().partition(|s| s.kind == Kind::Initial)
        }
        None => {
            let source = match (enumerate, corpus) {
                (Some(l), _) => Source::Enumerate { max_len: l },
                (None, Some(_)) => Source::Corpus { min_freq },
                (None, None) => bail!("s+n1 needs --corpus, --enumerate or --subsequences"),
            };
            let classes: Vec<Vec<ClassId>> = match corpus {
                Some(path) => m.read_corpus(path, false)?.iter().map(|s| s.iter().map(|t| t.class).collect()).collect(),
                None => Vec::new(),
            };
            if dump.is_none() {
                return Ok(build_s_plus_n1(p, source, &classes)?.0);
            }
            disambiguate_all(p, &select_subsequences(p, source, &classes)?)?
        }
    };
    if let Some(path) = dump {
        let mut w = create(path)?;
        write_subsequences(p.inventory(), initials.iter().chain(&middles), &mut w)?;
        w.flush()?;
    }
    Ok(complete(&paired_union(&initials), &paired_union(&middles), &n1, p.inventory())?)
}

struct Model {
    params: HmmParams,
    lexicon: Lexicon,
    guesser: Guesser,
}

impl Model {
    fn load(dir: &Path) -> Result<Model> {
        let params = HmmParams::read_from(open(&dir.join(PARAMS_FILE))?)
            .with_context(|| format!("reading {}", dir.join(PARAMS_FILE).display()))?;
        let inv = params.inventory();
        let lexicon = match dir.join(LEXICON_FILE) {
            p if p.exists() => Lexicon::read(inv, open(&p)?)?,
            _ => Lexicon::new(),
        };
        let guesser = match dir.join(GUESSER_FILE) {
            p if p.exists() => Guesser::read(inv, open(&p)?)?,
            _ => Guesser::default(),
        };
        Ok(Model { params, lexicon, guesser })
    }

    fn unknown(&self) -> Result<ClassId> {
        self.params
            .inventory()
            .class_id(UNKNOWN_CLASS)
            .ok_or_else(|| anyhow!("model has no {UNKNOWN_CLASS} class"))
    }

    fn read_fst(&self, path: &Path) -> Result<Fst> {
        Fst::read_text(self.params.inventory(), open(path)?).with_context(|| format!("reading {}", path.display()))
    }

    /// Reads a corpus, taking classes from its class column or else from
    /// the lexicon and guesser. Tags are required only with `need_tags`.
    fn read_corpus(&self, path: &Path, need_tags: bool) -> Result<Vec<TaggedSentence>> {
        let raw = read_raw(open(path)?).with_context(|| format!("reading {}", path.display()))?;
        let inv = self.params.inventory();
        let unknown = inv.class_id(UNKNOWN_CLASS);
        let mut out = Vec::with_capacity(raw.len());
        for (si, sentence) in raw.iter().enumerate() {
            let mut tokens = Vec::with_capacity(sentence.len());
            for (ti, tok) in sentence.iter().enumerate() {
                let at = || format!("{}: sentence {}, token {}", path.display(), si + 1, ti + 1);
                let class = match &tok.class {
                    Some(name) => inv.class_id(name).ok_or_else(|| anyhow!("{}: unknown class {name}", at()))?,
                    None => match unknown {
                        Some(u) => classify(&self.lexicon, &self.guesser, u, &tok.word),
                        None => self
                            .lexicon
                            .get(&tok.word)
                            .or_else(|| self.guesser.guess(&tok.word))
                            .ok_or_else(|| anyhow!("{}: cannot classify {}", at(), tok.word))?,
                    },
                };
                let tag = match &tok.tag {
                    Some(name) => inv.tag_id(name).ok_or_else(|| anyhow!("{}: unknown tag {name}", at()))?,
                    None if need_tags => bail!("{}: missing tag", at()),
                    None => TagId(0),
                };
                tokens.push(TaggedToken { word: tok.word.clone(), class, tag });
            }
            out.push(tokens);
        }
        Ok(out)
    }
}

/// Tag names of a bracketed class name.
fn class_members(name: &str) -> Option<Vec<&str>> {
    let inner = name.strip_prefix('[')?.strip_suffix(']')?;
    let tags: Vec<&str> = inner.split(',').collect();
    (!tags.iter().any(|t| t.is_empty())).then_some(tags)
}

fn train(corpus: &Path, out: &Path, end_tag: &str, smoothing: f64) -> Result<()> {
    let raw = read_raw(open(corpus)?).with_context(|| format!("reading {}", corpus.display()))?;
    let tokens: Vec<&RawToken> = raw.iter().flatten().collect();
    if tokens.is_empty() {
        bail!("{} has no tokens", corpus.display());
    }
    if let Some(t) = tokens.iter().find(|t| t.tag.is_none()) {
        bail!("token {} has no tag", t.word);
    }

    let mut tag_names: BTreeSet<&str> = tokens.iter().map(|t| t.tag.as_deref().unwrap()).collect();
    // a word's class is its class column, else every tag it is seen with
    let mut word_tags: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for t in &tokens {
        let entry = word_tags.entry(&t.word).or_default();
        entry.insert(t.tag.as_deref().unwrap());
        if let Some(c) = &t.class {
            let members = class_members(c).ok_or_else(|| anyhow!("bad class name {c}"))?;
            tag_names.extend(members.iter().copied());
            entry.extend(members);
        }
    }
    if !tag_names.contains(end_tag) {
        bail!("no token is tagged {end_tag}");
    }
    let mut inv = Inventory::new();
    for name in &tag_names {
        inv.add_tag(name)?;
    }
    let ids = |inv: &Inventory, names: &BTreeSet<&str>| -> Vec<TagId> {
        names.iter().map(|n| inv.tag_id(n).unwrap()).collect()
    };
    let end = inv.intern_class(&[inv.tag_id(end_tag).unwrap()])?;
    let mut lexicon = Lexicon::new();
    for (word, tags) in &word_tags {
        let c = inv.intern_class(&ids(&inv, tags))?;
        lexicon.insert(word, c);
    }
    let open_tags: BTreeSet<&str> = tag_names.iter().copied().filter(|&t| t != end_tag).collect();
    if open_tags.is_empty() {
        bail!("corpus has no tags besides {end_tag}");
    }
    let unknown = inv.add_class(UNKNOWN_CLASS, &ids(&inv, &open_tags))?;

    let sentences: Vec<TaggedSentence> = raw
        .iter()
        .map(|s| {
            s.iter()
                .map(|t| TaggedToken {
                    word: t.word.clone(),
                    class: lexicon.get(&t.word).unwrap(),
                    tag: inv.tag_id(t.tag.as_deref().unwrap()).unwrap(),
                })
                .collect()
        })
        .collect();
    if let Some(i) = sentences.iter().position(|s| s.last().map(|t| t.class) != Some(end)) {
        eprintln!("warning: sentence {} does not end with a {end_tag} token", i + 1);
    }
    let params = train_from_tagged(inv, end, &sentences, TrainOptions { smoothing, unknown_class: Some(unknown) })?;
    let guesser = Guesser::compile(&lexicon, Guesser::MAX_SUFFIX, Guesser::MIN_SUPPORT);

    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let inv = params.inventory();
    let mut w = create(&out.join(PARAMS_FILE))?;
    params.write_to(&mut w)?;
    w.flush()?;
    let mut w = create(&out.join(LEXICON_FILE))?;
    lexicon.write(inv, &mut w)?;
    w.flush()?;
    let mut w = create(&out.join(GUESSER_FILE))?;
    guesser.write(inv, &mut w)?;
    w.flush()?;
    eprintln!(
        "{} tags, {} classes, {} lexicon entries, {} guesser suffixes, {} tokens",
        inv.num_tags(),
        inv.num_classes(),
        lexicon.len(),
        guesser.len(),
        tokens.len()
    );
    Ok(())
}
