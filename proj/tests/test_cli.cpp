#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ispkit/core/jsonl.hpp"
#include "ispkit/core/tokenize.hpp"

#include "support/paths.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;
using namespace isp;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args, const std::string& tag) {
    std::string dir = test_support::tmp_dir("cli");
    std::string out_path = dir + "/" + tag + ".out";
    std::string cmd = std::string(ISPKIT_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    int rc = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string cli_dir(const std::string& sub) {
    std::string d = test_support::tmp_dir("cli") + "/" + sub;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

// seed parallel + mono fixtures for ibt runs
struct IbtFixture {
    std::string parallel, mono, backend;
};

IbtFixture write_ibt_fixture(const std::string& dir) {
    auto world = test_support::make_idiom_world(6);
    auto pairs = test_support::make_seed_pairs(world, 2, 11);
    auto mono = test_support::make_mono_set(world, 30, 12);
    IbtFixture f;
    f.parallel = dir + "/seed.jsonl";
    f.mono = dir + "/mono.jsonl";
    f.backend = dir + "/backend.json";
    save_parallel(pairs, f.parallel);
    save_idiomatic_only(mono, f.mono);
    std::ofstream(f.backend)
        << R"({"backend": {"name": "toy-lexicon"}, "decode": {"beams": 5, "top_k": 100, "top_p": 0.5}})";
    return f;
}

} // namespace

TEST_CASE("cli: bad usage exits 1, missing input exits 2") {
    CHECK(run_cli("no-such-subcommand", "bad_subcmd").exit_code == 1);
    CHECK(run_cli("evaluate --in /nonexistent/eval.jsonl", "missing_input").exit_code == 2);
    CHECK(run_cli("evaluate", "missing_flag").exit_code == 1);
}

TEST_CASE("cli: evaluate on identical candidate and reference reports BLEU 100") {
    std::string dir = cli_dir("eval");
    std::string in = dir + "/eval.jsonl";
    std::ofstream(in) << R"({"source": "x", "candidate": "a b c d", "references": ["a b c d"]})"
                      << '\n';
    auto r = run_cli("evaluate --in " + in + " --out " + dir + "/report.json", "eval_identity");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("100.00") != std::string::npos);
    CHECK(r.out.find("BLEU") != std::string::npos);
    nlohmann::json report = nlohmann::json::parse(slurp(dir + "/report.json"));
    CHECK(report["bleu"].get<double>() == doctest::Approx(100.0));
    CHECK(fs::exists(dir + "/report.json.manifest.json"));
}

TEST_CASE("cli: ibt produces the enlarged corpus, checkpoints and stats") {
    std::string dir = cli_dir("ibt_run");
    IbtFixture f = write_ibt_fixture(dir);
    auto r = run_cli("ibt --parallel " + f.parallel + " --mono " + f.mono +
                         " --iterations 2 --seed 5 --backend " + f.backend + " --lemmas " +
                         test_support::data_file("lemmas.tsv") + " --out " + dir + "/run",
                     "ibt");
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir + "/run/enlarged.jsonl"));
    CHECK(fs::exists(dir + "/run/isp_ckpt/lexicon.json"));
    CHECK(fs::exists(dir + "/run/isg_ckpt/lexicon.json"));
    CHECK(fs::exists(dir + "/run/run-manifest.json"));

    // stats lines are machine-readable JSON
    std::ifstream stats(dir + "/run/stats.jsonl");
    std::string line;
    int lines = 0;
    size_t final_parallel = 0;
    while (std::getline(stats, line)) {
        auto j = nlohmann::json::parse(line);
        CHECK(j.contains("kept"));
        CHECK(j.contains("rejected_rule1"));
        CHECK(j.contains("rejected_rule2"));
        final_parallel = j["parallel_after"].get<size_t>();
        ++lines;
    }
    CHECK(lines == 2);
    auto enlarged = load_parallel(dir + "/run/enlarged.jsonl");
    CHECK(enlarged.size() == final_parallel);
    CHECK(enlarged.size() >= 12); // at least the seed pairs survive
}

TEST_CASE("cli: paraphrase and idiomatize drive the trained checkpoints") {
    std::string dir = cli_dir("para");
    IbtFixture f = write_ibt_fixture(dir);
    auto r1 = run_cli("ibt --parallel " + f.parallel + " --mono " + f.mono +
                          " --iterations 1 --seed 5 --backend " + f.backend + " --lemmas " +
                          test_support::data_file("lemmas.tsv") + " --out " + dir + "/run",
                      "para_train");
    REQUIRE(r1.exit_code == 0);

    // idiom "bonk0 kettle" has the literal form "plainword0"
    std::string in = dir + "/in.jsonl";
    std::ofstream(in)
        << R"({"idiomatic": "peb1 bonk0 kettle peb2", "idiom": "bonk0 kettle", "span": [1, 3]})"
        << '\n';
    auto r2 = run_cli("paraphrase --engine seq2seq --backend-name toy-lexicon --model " + dir +
                          "/run/isp_ckpt --in " + in + " --out " + dir + "/out.jsonl",
                      "para_infer");
    CHECK(r2.exit_code == 0);
    auto out_line = nlohmann::json::parse(slurp(dir + "/out.jsonl"));
    CHECK(out_line["literal"].get<std::string>() == "peb1 plainword0 peb2");

    // idiomatize drives the ISG checkpoint back the other way
    std::string lit = dir + "/lit.txt";
    std::ofstream(lit) << "peb1 plainword0 peb2" << '\n';
    auto r3 = run_cli("idiomatize --backend-name toy-lexicon --model " + dir +
                          "/run/isg_ckpt --in " + lit + " --out " + dir + "/idi.txt",
                      "idiomatize");
    CHECK(r3.exit_code == 0);
    CHECK(slurp(dir + "/idi.txt").find("bonk0 kettle") != std::string::npos);
}

TEST_CASE("cli: export-parallel validates and filters by tag") {
    std::string dir = cli_dir("export");
    IbtFixture f = write_ibt_fixture(dir);
    auto r = run_cli("export-parallel --in " + f.parallel + " --out " + dir +
                         "/merged.jsonl --only-tag seed --lemmas " +
                         test_support::data_file("lemmas.tsv"),
                     "export");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("wrote 12 pairs") != std::string::npos);

    // an invalid pair (literal still contains the idiom) fails validation
    std::string bad = dir + "/bad.jsonl";
    std::ofstream(bad)
        << R"({"idiomatic": "peb1 bonk0 kettle", "literal": "still bonk0 kettle here", "idiom": "bonk0 kettle", "span": [1, 3], "source_tag": "seed"})"
        << '\n';
    auto r2 = run_cli("export-parallel --in " + bad + " --out " + dir + "/bad_out.jsonl",
                      "export_bad");
    CHECK(r2.exit_code == 1);
    auto r3 = run_cli("export-parallel --in " + bad + " --out " + dir +
                          "/bad_skipped.jsonl --skip-invalid",
                      "export_skip");
    CHECK(r3.exit_code == 0);
    CHECK(r3.out.find("wrote 0 pairs") != std::string::npos);
}

TEST_CASE("cli: demo-mt chains paraphrase into a user command and scores BLEU") {
    std::string dir = cli_dir("demomt");
    IbtFixture f = write_ibt_fixture(dir);
    auto r1 = run_cli("ibt --parallel " + f.parallel + " --mono " + f.mono +
                          " --iterations 1 --seed 5 --backend " + f.backend + " --lemmas " +
                          test_support::data_file("lemmas.tsv") + " --out " + dir + "/run",
                      "demomt_train");
    REQUIRE(r1.exit_code == 0);

    std::string in = dir + "/in.jsonl";
    std::ofstream(in)
        << R"({"idiomatic": "peb1 peb3 bonk0 kettle peb2 peb4", "idiom": "bonk0 kettle", "span": [2, 4]})"
        << '\n';
    // identity "translation": references equal the literal output
    std::string refs = dir + "/refs.txt";
    std::ofstream(refs) << "peb1 peb3 plainword0 peb2 peb4" << '\n';
    auto r2 = run_cli("demo-mt --backend-name toy-lexicon --model " + dir +
                          "/run/isp_ckpt --in " + in + " --refs " + refs +
                          " --translate-cmd \"cp {in} {out}\" --out " + dir + "/mt",
                      "demomt");
    CHECK(r2.exit_code == 0);
    nlohmann::json result = nlohmann::json::parse(slurp(dir + "/mt/result.json"));
    CHECK(result["bleu"].get<double>() == doctest::Approx(100.0));
}

TEST_CASE("cli: prep, train-ucd and ucd paraphrase chain together") {
    std::string dir = cli_dir("ucd_chain");
    std::string data = test_support::data_dir();
    std::string sents = dir + "/sents.txt";
    {
        std::ofstream out(sents);
        for (int i = 0; i < 8; ++i) {
            out << "he ran hard\n";
            out << "the cat sat on the mat\n";
            out << "she walked quickly today\n";
        }
    }
    auto r1 = run_cli("prep --in " + sents + " --out " + dir + "/corpus.jsonl --stopwords " +
                          data + "/stopwords.txt --lemmas " + data + "/lemmas.tsv --tagger " +
                          data + "/tagger_lexicon.tsv --dict " + data +
                          "/dict_wordnet_like.json --seed 3",
                      "ucd_prep");
    REQUIRE(r1.exit_code == 0);

    auto r2 = run_cli("train-ucd --corpus " + dir + "/corpus.jsonl --out " + dir +
                          "/ckpt --lr 1e-3 --epochs 2 --warmup 5 --max-steps 20 --seed 11",
                      "ucd_train");
    REQUIRE(r2.exit_code == 0);
    CHECK(fs::exists(dir + "/ckpt/fusion.json"));
    CHECK(fs::exists(dir + "/ckpt/decoder.json"));
    CHECK(fs::exists(dir + "/ckpt/manifest.json"));
    auto ckpt_manifest = nlohmann::json::parse(slurp(dir + "/ckpt/manifest.json"));
    CHECK(ckpt_manifest.contains("corpus_hash"));
    CHECK(ckpt_manifest["seed"].get<uint64_t>() == 11);

    std::string in = dir + "/idiomatic.jsonl";
    std::ofstream(in) << R"({"idiomatic": "Putting him behind bars won't serve any purpose , will it ?", "idiom": "behind bars", "span": [2, 4]})"
                      << '\n';
    auto r3 = run_cli("paraphrase --engine ucd --model " + dir + "/ckpt --in " + in +
                          " --out " + dir + "/literal.jsonl --idiom-lexicon " + data +
                          "/idiom_lexicon.jsonl --tagger " + data +
                          "/tagger_lexicon.tsv --lemmas " + data + "/lemmas.tsv",
                      "ucd_para");
    CHECK(r3.exit_code == 0);
    auto line = nlohmann::json::parse(slurp(dir + "/literal.jsonl"));
    CHECK(line.contains("literal")); // output quality is asserted in the model tests
}

TEST_CASE("cli: two identical runs produce byte-identical outputs") {
    std::string dir = cli_dir("repro");
    std::string sents = dir + "/sents.txt";
    {
        std::ofstream out(sents);
        out << "he ran hard\n";
        out << "the cat sat on the mat\n";
        out << "she walked quickly today\n";
        out << "they felt happy again\n";
    }
    std::string data = test_support::data_dir();
    std::string common = " --in " + sents + " --stopwords " + data + "/stopwords.txt" +
                         " --lemmas " + data + "/lemmas.tsv" + " --tagger " + data +
                         "/tagger_lexicon.tsv" + " --dict " + data + "/dict_wordnet_like.json" +
                         " --dict " + data + "/dict_wiki_like.json" + " --seed 99";
    auto a = run_cli("prep" + common + " --out " + dir + "/a.jsonl --stats " + dir +
                         "/a_stats.json --manifest " + dir + "/a_manifest.json",
                     "prep_a");
    auto b = run_cli("prep" + common + " --out " + dir + "/b.jsonl --stats " + dir +
                         "/b_stats.json --manifest " + dir + "/b_manifest.json",
                     "prep_b");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(slurp(dir + "/a.jsonl") == slurp(dir + "/b.jsonl"));
    CHECK(slurp(dir + "/a_stats.json") == slurp(dir + "/b_stats.json"));

    // manifests agree on config and input hashes (output paths differ)
    auto ma = nlohmann::json::parse(slurp(dir + "/a_manifest.json"));
    auto mb = nlohmann::json::parse(slurp(dir + "/b_manifest.json"));
    CHECK(ma["config"]["seed"] == mb["config"]["seed"]);
    CHECK(ma["inputs"] == mb["inputs"]);
}
