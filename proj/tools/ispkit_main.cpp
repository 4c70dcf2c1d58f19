// ispkit: idiomatic sentence paraphrasing toolkit command line.
//
// Subcommands: prep, train-ucd, ibt, paraphrase, idiomatize, evaluate,
// export-parallel, demo-mt. Every run writes a manifest JSON recording the
// resolved configuration, the seed and input file hashes, so a run can be
// reproduced byte for byte with toy backends.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ispkit/backends/lexicon_tagger.hpp"
#include "ispkit/backends/registry.hpp"
#include "ispkit/backends/table_lemmatizer.hpp"
#include "ispkit/backends/toy_lm.hpp"
#include "ispkit/backends/toy_seq2seq.hpp"
#include "ispkit/corpus/corpus.hpp"
#include "ispkit/ibt/ibt.hpp"
#include "ispkit/metrics/metrics.hpp"
#include "ispkit/ucd/model.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace isp;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "missing";
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    return hex;
}

struct Manifest {
    json j;

    explicit Manifest(const std::string& command) {
        j["tool"] = "ispkit";
        j["version"] = kVersion;
        j["command"] = command;
        j["config"] = json::object();
        j["inputs"] = json::object();
        j["outputs"] = json::array();
    }
    template <typename T>
    void set(const std::string& key, const T& value) {
        j["config"][key] = value;
    }
    void input(const std::string& path) {
        if (!path.empty()) j["inputs"][path] = file_hash(path);
    }
    void output(const std::string& path) { j["outputs"].push_back(path); }
    void write(const std::string& path) {
        fs::path p(path);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        std::ofstream out(path);
        out << j.dump(2) << '\n';
    }
};

std::string default_cache_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("ISPKIT_CACHE_DIR")) return env;
    return "";
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

DictClient make_dict_client(const std::vector<std::string>& fixtures,
                            const std::string& idiom_lexicon, const std::string& cache_dir,
                            uint64_t seed) {
    std::vector<std::shared_ptr<DictSource>> sources;
    for (const auto& f : fixtures) sources.push_back(std::make_shared<FixtureSource>(f));
    if (!idiom_lexicon.empty())
        sources.push_back(std::make_shared<IdiomLexiconSource>(idiom_lexicon));
    if (sources.empty()) throw std::invalid_argument("no dictionary sources configured");
    return DictClient(std::move(sources), cache_dir, seed);
}

// --- prep -------------------------------------------------------------

struct PrepArgs {
    std::string in, out, stats_out, manifest;
    std::string stopwords, lemmas, tagger, idiom_lexicon, cache_dir;
    std::vector<std::string> dict_fixtures;
    double p_stop = 0.8, p_lemma = 0.4;
    uint64_t seed = 0;
};

int run_prep(const PrepArgs& a) {
    Manifest manifest("prep");
    manifest.set("in", a.in);
    manifest.set("out", a.out);
    manifest.set("stats", a.stats_out);
    manifest.set("stopwords", a.stopwords);
    manifest.set("lemmas", a.lemmas);
    manifest.set("tagger", a.tagger);
    manifest.set("dict_fixtures", a.dict_fixtures);
    manifest.set("idiom_lexicon", a.idiom_lexicon);
    manifest.set("cache_dir", default_cache_dir(a.cache_dir));
    manifest.set("p_stop", a.p_stop);
    manifest.set("p_lemma", a.p_lemma);
    manifest.set("mask_token", BuildConfig{}.mask_token);
    manifest.set("seed", a.seed);
    manifest.input(a.in);
    manifest.input(a.stopwords);
    manifest.input(a.lemmas);
    manifest.input(a.tagger);
    for (const auto& f : a.dict_fixtures) manifest.input(f);

    StopwordList stopwords(a.stopwords);
    TableLemmatizer lemmatizer(a.lemmas);
    LexiconTagger tagger(a.tagger);
    DictClient dict = make_dict_client(a.dict_fixtures, a.idiom_lexicon,
                                       default_cache_dir(a.cache_dir), a.seed);

    BuildConfig cfg;
    cfg.p_stop = a.p_stop;
    cfg.p_lemma = a.p_lemma;
    CorpusStats stats = build_corpus(read_lines(a.in), a.out, dict, tagger, lemmatizer,
                                     stopwords, a.seed, cfg);
    if (!a.stats_out.empty()) {
        std::ofstream(a.stats_out) << stats.to_json_string() << '\n';
        manifest.output(a.stats_out);
    }
    manifest.output(a.out);
    manifest.write(a.manifest);
    std::cout << stats.to_json_string() << '\n';
    return 0;
}

// --- train-ucd ----------------------------------------------------------

struct TrainUcdArgs {
    std::string corpus, out, manifest;
    uint64_t seed = 0;
    Hyperparams hp;
    int epochs = 0, max_steps = 0, warmup = -1;
    double lr = 0.0;
    double align_sigma = 1.5;
};

int run_train_ucd(const TrainUcdArgs& a) {
    Manifest manifest("train-ucd");
    manifest.set("corpus", a.corpus);
    manifest.set("out", a.out);
    manifest.set("seed", a.seed);
    manifest.set("lr", a.lr > 0 ? a.lr : a.hp.ucd_lr);
    manifest.set("epochs", a.epochs > 0 ? a.epochs : a.hp.ucd_epochs);
    manifest.set("warmup_steps", a.warmup >= 0 ? a.warmup : a.hp.warmup_steps);
    manifest.set("batch_size", a.hp.batch_size);
    manifest.set("max_steps", a.max_steps);
    manifest.set("align_sigma", a.align_sigma);
    manifest.input(a.corpus);

    UcdConfig cfg;
    cfg.align_sigma = a.align_sigma;
    UcdModel model(cfg, a.seed);
    UcdTrainOptions opt;
    opt.epochs = a.epochs;
    opt.lr = a.lr;
    opt.warmup_steps = a.warmup;
    opt.max_steps = a.max_steps;
    UcdTrainReport report = train_ucd(a.corpus, model, a.hp, opt, a.out);

    json loss;
    loss["steps"] = report.steps;
    loss["epoch_loss"] = report.epoch_loss;
    std::ofstream(a.out + "/loss.json") << loss.dump(2) << '\n';
    manifest.output(a.out);
    manifest.write(a.manifest);
    std::cout << "trained " << report.steps << " steps, final epoch loss "
              << (report.epoch_loss.empty() ? 0.0 : report.epoch_loss.back()) << '\n';
    return 0;
}

// --- ibt --------------------------------------------------------------

struct IbtArgs {
    std::string parallel, mono, out, manifest, backend_config, lemmas;
    int iterations = 5;
    double lr = 5e-5;
    int max_len = 128;
    uint64_t seed = 0;
    bool continue_models = false;
    int toy_epochs = 0;
};

int run_ibt_cmd(const IbtArgs& a) {
    Manifest manifest("ibt");
    manifest.set("parallel", a.parallel);
    manifest.set("mono", a.mono);
    manifest.set("out", a.out);
    manifest.set("iterations", a.iterations);
    manifest.set("lr", a.lr);
    manifest.set("max_len", a.max_len);
    manifest.set("seed", a.seed);
    manifest.set("backend_config", a.backend_config);
    manifest.set("lemmas", a.lemmas);
    manifest.set("fresh_models_per_iteration", !a.continue_models);
    manifest.set("toy_epochs", a.toy_epochs);
    manifest.set("warmup_steps", 20);
    manifest.set("batch_size", 8);
    manifest.input(a.parallel);
    manifest.input(a.mono);
    manifest.input(a.backend_config);
    manifest.input(a.lemmas);

    auto seed_pairs = load_parallel(a.parallel);
    auto mono = load_idiomatic_only(a.mono);
    TableLemmatizer lemmatizer(a.lemmas);

    BackendConfig bc;
    if (!a.backend_config.empty()) bc = load_backend_config(a.backend_config);
    bc.seed = a.seed;
    manifest.set("backend_name", bc.name);

    Hyperparams hp;
    hp.ibt_lr = a.lr;
    hp.max_seq_len = a.max_len;
    hp.ibt_iterations = a.iterations;
    // toy backends train on a scaled-down schedule
    hp.warmup_steps = 20;
    hp.batch_size = 8;
    if (a.toy_epochs > 0) hp.ucd_epochs = a.toy_epochs;

    // idiom lemmas feed the rule-1 filter
    for (auto& m : mono) {
        Tokens span(m.tokens.begin() + static_cast<long>(m.span.start),
                    m.tokens.begin() + static_cast<long>(m.span.end));
        m.idiom_lemma = detokenize(lemmatizer.lemmas(lowercase(span)));
    }

    IbtOptions opt;
    opt.iterations = a.iterations;
    opt.fresh_models_per_iteration = !a.continue_models;
    opt.decode = bc.decode;
    opt.decode.max_len = a.max_len;
    opt.seed = a.seed;

    IbtResult result = run_ibt(seed_pairs, mono, make_backend_factory(bc), lemmatizer, hp, opt);

    fs::create_directories(a.out);
    std::ofstream stats_out(a.out + "/stats.jsonl");
    for (const auto& iter : result.state.per_iteration) {
        stats_out << iter.to_json_line() << '\n';
        std::cout << iter.to_json_line() << '\n';
    }
    save_parallel(result.state.parallel, a.out + "/enlarged.jsonl");
    manifest.output(a.out + "/enlarged.jsonl");
    if (result.isp_model && result.isg_model) {
        result.isp_model->save(a.out + "/isp_ckpt");
        result.isg_model->save(a.out + "/isg_ckpt");
        manifest.output(a.out + "/isp_ckpt");
        manifest.output(a.out + "/isg_ckpt");
    }
    manifest.output(a.out + "/stats.jsonl");
    if (!result.state.abort_reason.empty())
        manifest.set("abort_reason", result.state.abort_reason);
    manifest.write(a.manifest);
    if (!result.state.abort_reason.empty()) {
        std::cerr << "ispkit: training diverged, partial state written: "
                  << result.state.abort_reason << '\n';
        return 2;
    }
    return 0;
}

// --- paraphrase / idiomatize ---------------------------------------------

struct ParaphraseArgs {
    std::string model, in, out, manifest, engine = "ucd";
    std::string idiom_lexicon, tagger, lemmas, cache_dir;
    std::vector<std::string> dict_fixtures;
    std::string backend_name = "toy-seq2seq";
    DecodeParams decode;
    uint64_t seed = 0;
};

int run_paraphrase(const ParaphraseArgs& a) {
    Manifest manifest("paraphrase");
    manifest.set("model", a.model);
    manifest.set("in", a.in);
    manifest.set("out", a.out);
    manifest.set("engine", a.engine);
    manifest.set("backend_name", a.backend_name);
    manifest.set("idiom_lexicon", a.idiom_lexicon);
    manifest.set("tagger", a.tagger);
    manifest.set("lemmas", a.lemmas);
    manifest.set("beams", a.decode.beams);
    manifest.set("top_k", a.decode.top_k);
    manifest.set("top_p", a.decode.top_p);
    manifest.set("max_len", a.decode.max_len);
    manifest.set("seed", a.seed);
    manifest.input(a.in);

    auto sentences = load_idiomatic_only(a.in);
    std::ofstream out(a.out);
    if (!out) throw DatasetError("cannot write " + a.out);

    if (a.engine == "ucd") {
        UcdModel model(UcdConfig{}, a.seed);
        model.load(a.model);
        TableLemmatizer lemmatizer(a.lemmas);
        LexiconTagger tagger(a.tagger);
        DictClient dict = make_dict_client(a.dict_fixtures, a.idiom_lexicon,
                                           default_cache_dir(a.cache_dir), a.seed);
        for (const auto& s : sentences) {
            LiteralSentence lit = model.infer_paraphrase(s, dict, tagger, lemmatizer, a.decode);
            json j;
            j["idiomatic"] = s.text;
            j["literal"] = lit.text;
            out << j.dump() << '\n';
        }
    } else if (a.engine == "seq2seq") {
        BackendConfig bc;
        bc.name = a.backend_name;
        bc.seed = a.seed;
        bc.checkpoint_path = a.model;
        auto backend = make_backend(bc);
        for (const auto& s : sentences) {
            json j;
            j["idiomatic"] = s.text;
            j["literal"] = backend->generate(s.tokens, a.decode, a.seed);
            out << j.dump() << '\n';
        }
    } else {
        throw std::invalid_argument("unknown engine " + a.engine);
    }
    manifest.output(a.out);
    manifest.write(a.manifest);
    return 0;
}

struct IdiomatizeArgs {
    std::string model, in, out, manifest;
    std::string backend_name = "toy-seq2seq";
    DecodeParams decode;
    uint64_t seed = 0;
};

int run_idiomatize(const IdiomatizeArgs& a) {
    Manifest manifest("idiomatize");
    manifest.set("model", a.model);
    manifest.set("in", a.in);
    manifest.set("out", a.out);
    manifest.set("seed", a.seed);
    manifest.set("beams", a.decode.beams);
    manifest.set("top_k", a.decode.top_k);
    manifest.set("top_p", a.decode.top_p);
    manifest.input(a.in);

    BackendConfig bc;
    bc.name = a.backend_name;
    bc.seed = a.seed;
    bc.checkpoint_path = a.model;
    auto backend = make_backend(bc);

    std::ofstream out(a.out);
    if (!out) throw DatasetError("cannot write " + a.out);
    for (const auto& line : read_lines(a.in)) {
        if (line.empty()) continue;
        out << backend->generate(tokenize(line), a.decode, a.seed) << '\n';
    }
    manifest.output(a.out);
    manifest.write(a.manifest);
    return 0;
}

// --- evaluate -----------------------------------------------------------

struct EvaluateArgs {
    std::string in, out, table_out, manifest, blind_tsv;
    std::string lm = "none"; // none | uniform | bigram
    size_t lm_vocab = 50;
    std::string lm_train;
    std::string label = "system";
    uint64_t seed = 0;
};

int run_evaluate(const EvaluateArgs& a) {
    Manifest manifest("evaluate");
    manifest.set("in", a.in);
    manifest.set("out", a.out);
    manifest.set("table", a.table_out);
    manifest.set("lm", a.lm);
    manifest.set("lm_vocab", a.lm_vocab);
    manifest.set("lm_train", a.lm_train);
    manifest.set("label", a.label);
    manifest.set("blind_tsv", a.blind_tsv);
    manifest.set("seed", a.seed);
    manifest.input(a.in);
    manifest.input(a.lm_train);

    auto records = load_eval_records(a.in);
    std::unique_ptr<LmScorer> scorer;
    if (a.lm == "uniform") {
        scorer = std::make_unique<UniformLm>(a.lm_vocab);
    } else if (a.lm == "bigram") {
        if (a.lm_train.empty()) throw std::invalid_argument("--lm bigram needs --lm-train");
        scorer = std::make_unique<BigramLm>(read_lines(a.lm_train));
    } else if (a.lm != "none") {
        throw std::invalid_argument("unknown --lm " + a.lm);
    }

    ScoreReport report = evaluate_records(records, scorer.get());
    std::string table = report.to_table(a.label);
    std::cout << table;
    if (!a.out.empty()) {
        std::ofstream(a.out) << report.to_json() << '\n';
        manifest.output(a.out);
    }
    if (!a.table_out.empty()) {
        std::ofstream(a.table_out) << table;
        manifest.output(a.table_out);
    }
    if (!a.blind_tsv.empty()) {
        export_blind_rating_tsv(records, a.blind_tsv, a.blind_tsv + ".key.jsonl", a.seed);
        manifest.output(a.blind_tsv);
        manifest.output(a.blind_tsv + ".key.jsonl");
    }
    manifest.write(a.manifest);
    return 0;
}

// --- export-parallel ----------------------------------------------------

struct ExportArgs {
    std::vector<std::string> in;
    std::string out, manifest, only_tag, lemmas;
    bool skip_invalid = false;
};

int run_export(const ExportArgs& a) {
    Manifest manifest("export-parallel");
    manifest.set("in", a.in);
    manifest.set("out", a.out);
    manifest.set("only_tag", a.only_tag);
    manifest.set("skip_invalid", a.skip_invalid);
    manifest.set("lemmas", a.lemmas);
    for (const auto& f : a.in) manifest.input(f);
    manifest.input(a.lemmas);

    LemmaFn lemma = nullptr;
    std::unique_ptr<TableLemmatizer> lemmatizer;
    if (!a.lemmas.empty()) {
        lemmatizer = std::make_unique<TableLemmatizer>(a.lemmas);
        TableLemmatizer* raw = lemmatizer.get();
        lemma = [raw](const std::string& w) { return raw->lemma(w); };
    }

    std::vector<ParallelPair> merged;
    size_t invalid = 0;
    for (const auto& path : a.in) {
        for (auto& pair : load_parallel(path)) {
            if (!a.only_tag.empty() && pair.source_tag.str() != a.only_tag) continue;
            ValidationReport report = validate_pair(pair, lemma);
            if (!report.ok()) {
                ++invalid;
                std::cerr << path << ": invalid pair \"" << pair.idiomatic.text << "\":";
                for (const auto& v : report.violations) std::cerr << ' ' << v;
                std::cerr << '\n';
                if (!a.skip_invalid) throw DatasetError("validation failed (see stderr)");
                continue;
            }
            merged.push_back(std::move(pair));
        }
    }
    size_t written = save_parallel(merged, a.out);
    manifest.output(a.out);
    manifest.write(a.manifest);
    std::cout << "wrote " << written << " pairs (" << invalid << " invalid skipped)" << '\n';
    return 0;
}

// --- demo-mt ------------------------------------------------------------

struct DemoMtArgs {
    std::string model, in, refs, out_dir, manifest, translate_cmd;
    std::string backend_name = "toy-seq2seq";
    DecodeParams decode;
    uint64_t seed = 0;
};

int run_demo_mt(const DemoMtArgs& a) {
    Manifest manifest("demo-mt");
    manifest.set("model", a.model);
    manifest.set("in", a.in);
    manifest.set("refs", a.refs);
    manifest.set("out_dir", a.out_dir);
    manifest.set("translate_cmd", a.translate_cmd);
    manifest.set("seed", a.seed);
    manifest.input(a.in);
    manifest.input(a.refs);

    fs::create_directories(a.out_dir);
    std::string literal_path = a.out_dir + "/literal.txt";
    std::string translated_path = a.out_dir + "/translated.txt";

    // stage 1: paraphrase the idiomatic inputs into literal text
    auto sentences = load_idiomatic_only(a.in);
    BackendConfig bc;
    bc.name = a.backend_name;
    bc.seed = a.seed;
    bc.checkpoint_path = a.model;
    auto backend = make_backend(bc);
    {
        std::ofstream out(literal_path);
        for (const auto& s : sentences)
            out << backend->generate(s.tokens, a.decode, a.seed) << '\n';
    }

    // stage 2: the user-supplied translation command ({in}/{out} placeholders)
    std::string cmd = a.translate_cmd;
    auto substitute = [&cmd](const std::string& key, const std::string& value) {
        if (auto at = cmd.find(key); at != std::string::npos)
            cmd.replace(at, key.size(), value);
    };
    substitute("{in}", literal_path);
    substitute("{out}", translated_path);
    int rc = std::system(cmd.c_str());
    if (rc != 0)
        throw std::runtime_error("translate command failed with status " + std::to_string(rc));

    // stage 3: BLEU of the translations against the supplied references
    auto hyp = read_lines(translated_path);
    auto refs = read_lines(a.refs);
    if (hyp.size() != refs.size())
        throw DatasetError("reference count does not match translation count");
    std::vector<EvalRecord> records;
    for (size_t i = 0; i < hyp.size(); ++i)
        records.push_back(EvalRecord{sentences[i].text, hyp[i], {refs[i]}});
    double bleu = bleu_corpus(records);

    json result;
    result["bleu"] = bleu;
    result["sentences"] = hyp.size();
    std::ofstream(a.out_dir + "/result.json") << result.dump(2) << '\n';
    std::cout << result.dump() << '\n';
    manifest.output(literal_path);
    manifest.output(translated_path);
    manifest.output(a.out_dir + "/result.json");
    manifest.write(a.manifest);
    return 0;
}

std::string default_manifest(const std::string& out_hint) {
    // "run-manifest" keeps clear of checkpoint-internal manifest.json files
    fs::path p(out_hint);
    if (out_hint.empty()) return "run-manifest.json";
    if (!p.has_extension()) return (p / "run-manifest.json").string();
    return p.string() + ".manifest.json";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"idiomatic sentence paraphrasing toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file; explicit flags win");
    app.set_version_flag("--version", kVersion);

    PrepArgs prep;
    auto* prep_cmd = app.add_subcommand("prep", "build a masked-instance training corpus");
    prep_cmd->add_option("--in", prep.in, "plain text, one sentence per line")->required();
    prep_cmd->add_option("--out", prep.out, "masked-instance JSONL output")->required();
    prep_cmd->add_option("--stats", prep.stats_out, "stats JSON output");
    prep_cmd->add_option("--stopwords", prep.stopwords)->required();
    prep_cmd->add_option("--lemmas", prep.lemmas)->required();
    prep_cmd->add_option("--tagger", prep.tagger)->required();
    prep_cmd->add_option("--dict", prep.dict_fixtures, "dictionary fixture JSON (repeatable)")
        ->required();
    prep_cmd->add_option("--idiom-lexicon", prep.idiom_lexicon);
    prep_cmd->add_option("--cache-dir", prep.cache_dir, "overrides ISPKIT_CACHE_DIR");
    prep_cmd->add_option("--p-stop", prep.p_stop)->check(CLI::Range(0.0, 1.0));
    prep_cmd->add_option("--p-lemma", prep.p_lemma)->check(CLI::Range(0.0, 1.0));
    prep_cmd->add_option("--seed", prep.seed);
    prep_cmd->add_option("--manifest", prep.manifest);

    TrainUcdArgs tucd;
    auto* tucd_cmd = app.add_subcommand("train-ucd", "train the definition-fusion model");
    tucd_cmd->add_option("--corpus", tucd.corpus, "masked-instance JSONL")->required();
    tucd_cmd->add_option("--out", tucd.out, "checkpoint directory")->required();
    tucd_cmd->add_option("--seed", tucd.seed);
    tucd_cmd->add_option("--lr", tucd.lr, "learning rate (default 1e-5)");
    tucd_cmd->add_option("--epochs", tucd.epochs, "epochs (default 3)");
    tucd_cmd->add_option("--warmup", tucd.warmup, "warmup steps (default 20000)");
    tucd_cmd->add_option("--batch", tucd.hp.batch_size);
    tucd_cmd->add_option("--max-steps", tucd.max_steps, "optional step cap for toy runs");
    tucd_cmd->add_option("--align-sigma", tucd.align_sigma);
    tucd_cmd->add_option("--manifest", tucd.manifest);

    IbtArgs ibt;
    auto* ibt_cmd = app.add_subcommand("ibt", "iterative back-translation training");
    ibt_cmd->add_option("--parallel", ibt.parallel, "seed parallel JSONL")->required();
    ibt_cmd->add_option("--mono", ibt.mono, "idiomatic-only JSONL")->required();
    ibt_cmd->add_option("--out", ibt.out, "run directory")->required();
    ibt_cmd->add_option("--iterations", ibt.iterations, "default 5");
    ibt_cmd->add_option("--lr", ibt.lr, "default 5e-5");
    ibt_cmd->add_option("--max-len", ibt.max_len, "default 128");
    ibt_cmd->add_option("--seed", ibt.seed);
    ibt_cmd->add_option("--backend", ibt.backend_config, "backend config JSON");
    ibt_cmd->add_option("--lemmas", ibt.lemmas)->required();
    ibt_cmd->add_option("--toy-epochs", ibt.toy_epochs,
                        "per-iteration fine-tune epochs for toy backends");
    ibt_cmd->add_flag("--continue-models", ibt.continue_models,
                      "keep fine-tuning instead of fresh retraining per iteration");
    ibt_cmd->add_option("--manifest", ibt.manifest);

    ParaphraseArgs para;
    auto* para_cmd = app.add_subcommand("paraphrase", "idiomatic -> literal inference (ISP)");
    para_cmd->add_option("--model", para.model, "checkpoint directory")->required();
    para_cmd->add_option("--in", para.in, "idiomatic-only JSONL")->required();
    para_cmd->add_option("--out", para.out, "output JSONL")->required();
    para_cmd->add_option("--engine", para.engine, "ucd | seq2seq");
    para_cmd->add_option("--idiom-lexicon", para.idiom_lexicon);
    para_cmd->add_option("--dict", para.dict_fixtures, "dictionary fixture JSON (repeatable)");
    para_cmd->add_option("--tagger", para.tagger);
    para_cmd->add_option("--lemmas", para.lemmas);
    para_cmd->add_option("--cache-dir", para.cache_dir);
    para_cmd->add_option("--backend-name", para.backend_name);
    para_cmd->add_option("--beams", para.decode.beams);
    para_cmd->add_option("--top-k", para.decode.top_k);
    para_cmd->add_option("--top-p", para.decode.top_p);
    para_cmd->add_option("--max-len", para.decode.max_len);
    para_cmd->add_option("--seed", para.seed);
    para_cmd->add_option("--manifest", para.manifest);

    IdiomatizeArgs idio;
    auto* idio_cmd = app.add_subcommand("idiomatize", "literal -> idiomatic inference (ISG)");
    idio_cmd->add_option("--model", idio.model, "ISG checkpoint directory")->required();
    idio_cmd->add_option("--in", idio.in, "plain text, one sentence per line")->required();
    idio_cmd->add_option("--out", idio.out, "plain text output")->required();
    idio_cmd->add_option("--backend-name", idio.backend_name);
    idio_cmd->add_option("--beams", idio.decode.beams);
    idio_cmd->add_option("--top-k", idio.decode.top_k);
    idio_cmd->add_option("--top-p", idio.decode.top_p);
    idio_cmd->add_option("--max-len", idio.decode.max_len);
    idio_cmd->add_option("--seed", idio.seed);
    idio_cmd->add_option("--manifest", idio.manifest);

    EvaluateArgs eval;
    auto* eval_cmd = app.add_subcommand("evaluate", "automatic evaluation battery");
    eval_cmd->add_option("--in", eval.in, "eval JSONL {source, candidate, references}")
        ->required();
    eval_cmd->add_option("--out", eval.out, "report JSON");
    eval_cmd->add_option("--table", eval.table_out, "plain-text table output");
    eval_cmd->add_option("--lm", eval.lm, "perplexity scorer: none | uniform | bigram");
    eval_cmd->add_option("--lm-vocab", eval.lm_vocab, "vocab size for --lm uniform");
    eval_cmd->add_option("--lm-train", eval.lm_train, "training text for --lm bigram");
    eval_cmd->add_option("--label", eval.label, "row label in the table");
    eval_cmd->add_option("--blind-tsv", eval.blind_tsv,
                         "export a blind-rating TSV for external annotators");
    eval_cmd->add_option("--seed", eval.seed, "row shuffle seed for --blind-tsv");
    eval_cmd->add_option("--manifest", eval.manifest);

    ExportArgs exp;
    auto* exp_cmd = app.add_subcommand("export-parallel", "validate, filter and merge datasets");
    exp_cmd->add_option("--in", exp.in, "parallel JSONL (repeatable)")->required();
    exp_cmd->add_option("--out", exp.out)->required();
    exp_cmd->add_option("--only-tag", exp.only_tag, "keep one source_tag only");
    exp_cmd->add_option("--lemmas", exp.lemmas, "lemma table for the containment check");
    exp_cmd->add_flag("--skip-invalid", exp.skip_invalid);
    exp_cmd->add_option("--manifest", exp.manifest);

    DemoMtArgs demo;
    auto* demo_cmd = app.add_subcommand(
        "demo-mt", "paraphrase, pipe through a translation command, score BLEU");
    demo_cmd->add_option("--model", demo.model, "ISP checkpoint directory")->required();
    demo_cmd->add_option("--in", demo.in, "idiomatic-only JSONL")->required();
    demo_cmd->add_option("--refs", demo.refs, "reference translations, one per line")
        ->required();
    demo_cmd->add_option("--out", demo.out_dir, "output directory")->required();
    demo_cmd->add_option("--translate-cmd", demo.translate_cmd,
                         "shell command with {in} and {out} placeholders")
        ->required();
    demo_cmd->add_option("--backend-name", demo.backend_name);
    demo_cmd->add_option("--seed", demo.seed);
    demo_cmd->add_option("--manifest", demo.manifest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*prep_cmd) {
            if (prep.manifest.empty()) prep.manifest = default_manifest(prep.out);
            return run_prep(prep);
        }
        if (*tucd_cmd) {
            if (tucd.manifest.empty()) tucd.manifest = default_manifest(tucd.out);
            return run_train_ucd(tucd);
        }
        if (*ibt_cmd) {
            if (ibt.manifest.empty()) ibt.manifest = default_manifest(ibt.out);
            return run_ibt_cmd(ibt);
        }
        if (*para_cmd) {
            if (para.manifest.empty()) para.manifest = default_manifest(para.out);
            return run_paraphrase(para);
        }
        if (*idio_cmd) {
            if (idio.manifest.empty()) idio.manifest = default_manifest(idio.out);
            return run_idiomatize(idio);
        }
        if (*eval_cmd) {
            if (eval.manifest.empty())
                eval.manifest = default_manifest(eval.out.empty() ? "evaluate" : eval.out);
            return run_evaluate(eval);
        }
        if (*exp_cmd) {
            if (exp.manifest.empty()) exp.manifest = default_manifest(exp.out);
            return run_export(exp);
        }
        if (*demo_cmd) {
            if (demo.manifest.empty()) demo.manifest = default_manifest(demo.out_dir);
            return run_demo_mt(demo);
        }
    } catch (const DatasetError& e) {
        std::cerr << "ispkit: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "ispkit: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ispkit: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
