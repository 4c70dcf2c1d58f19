#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "ispkit/backends/hash_embedder.hpp"
#include "ispkit/backends/lexicon_tagger.hpp"
#include "ispkit/backends/registry.hpp"
#include "ispkit/backends/table_lemmatizer.hpp"
#include "ispkit/backends/toy_lexicon.hpp"
#include "ispkit/backends/toy_lm.hpp"
#include "ispkit/backends/toy_seq2seq.hpp"
#include "ispkit/dict/dictionary.hpp"
#include "ispkit/metrics/metrics.hpp"

#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

using namespace isp;
using test_support::make_idiom_world;
using test_support::make_mono_set;

TEST_CASE("toy lexicon applies its table") {
    ToyLexiconBackend backend({{{"behind", "bars"}, {"in", "prison"}}}, 0.0, 0);
    DecodeParams dec;
    CHECK(backend.generate(tokenize("he was behind bars"), dec, 0) == "he was in prison");
    CHECK(backend.generate(tokenize("no phrase here"), dec, 0) == "no phrase here");
    CHECK_THROWS_AS(backend.generate(Tokens(200, "x"), DecodeParams{5, 100, 0.5, 128}, 0),
                    BackendError);
}

TEST_CASE("toy lexicon generation is deterministic for a fixed seed") {
    ToyLexiconBackend backend({{{"behind", "bars"}, {"in", "prison"}}}, 0.5, 1234);
    DecodeParams dec;
    Tokens input = tokenize("they kept him behind bars for a year");
    std::string a = backend.generate(input, dec, 42);
    std::string b = backend.generate(input, dec, 42);
    CHECK(a == b);
}

TEST_CASE("toy lexicon error rate hits its binomial band") {
    ToyLexiconBackend clean({{{"behind", "bars"}, {"in", "prison"}}}, 0.0, 7);
    ToyLexiconBackend noisy({{{"behind", "bars"}, {"in", "prison"}}}, 0.3, 7);
    DecodeParams dec;
    int corrupted = 0;
    const int n = 2000;
    for (int i = 0; i < n; ++i) {
        Tokens input = tokenize("case " + std::to_string(i) + " was behind bars then");
        if (noisy.generate(input, dec, i) != clean.generate(input, dec, i)) ++corrupted;
    }
    // 3 sigma around 0.3 over 2000 draws is about +-0.031
    CHECK(corrupted > n * (0.3 - 0.031));
    CHECK(corrupted < n * (0.3 + 0.031));
}

TEST_CASE("toy lexicon fine_tune learns the table from pair diffs") {
    auto world = make_idiom_world(8);
    auto pairs_src = test_support::make_seed_pairs(world, 3, 99);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& p : pairs_src) pairs.emplace_back(p.idiomatic.text, p.literal.text);

    ToyLexiconBackend backend(55);
    auto curve = backend.fine_tune(pairs, Hyperparams{});
    REQUIRE(curve.size() == 2);
    CHECK(curve.back() < curve.front());
    CHECK(curve.back() == doctest::Approx(0.0));
    DecodeParams dec;
    for (const auto& [src, dst] : pairs) CHECK(backend.generate(tokenize(src), dec, 0) == dst);

    CHECK_THROWS_AS(backend.fine_tune({}, Hyperparams{}), BackendError);
}

TEST_CASE("hash embedder shape, determinism and frozen snapshot") {
    HashEmbedder emb(16, 0x5eed);
    Eigen::MatrixXd m = emb.embed({"first gloss", "second gloss", "third gloss"});
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 16);

    Eigen::MatrixXd dup = emb.embed({"same text", "same text"});
    CHECK((dup.row(0) - dup.row(1)).norm() == 0.0);

    // frozen values for "with effort" under the default seed
    Eigen::MatrixXd w = emb.embed({"with effort"});
    CHECK(w(0, 0) == doctest::Approx(-0.41329427664637436).epsilon(1e-12));
    CHECK(w(0, 1) == doctest::Approx(-0.23100992235040602).epsilon(1e-12));
    CHECK(w(0, 2) == doctest::Approx(0.11642645228957818).epsilon(1e-12));
    CHECK(w(0, 3) == doctest::Approx(-0.41349708717151118).epsilon(1e-12));
    CHECK(w.row(0).norm() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(emb.embed({""}), BackendError);
}

TEST_CASE("lexicon tagger fixture cases") {
    const auto& tagger = test_support::tagger();
    CHECK(tagger.tag({"he", "ran", "hard"}) ==
          std::vector<std::string>{"PRON", "VERB", "ADV"});
    CHECK(tagger.tag({"run"}).size() == 1);
    CHECK(tagger.tag({"run"})[0] == "VERB");
    CHECK_THROWS_AS(tagger.tag({}), BackendError);

    // every tag stays inside the 17-tag universal set, lexicon hit or not
    std::set<std::string> tagset(PosTagger::universal_tagset().begin(),
                                 PosTagger::universal_tagset().end());
    CHECK(tagset.size() == 17);
    Rng rng(31337);
    Tokens junk;
    for (int i = 0; i < 200; ++i) {
        std::string w;
        for (int k = 0; k < 1 + int(rng.uniform(8)); ++k)
            w += char('a' + rng.uniform(26));
        junk.push_back(w);
    }
    junk.push_back(".");
    junk.push_back("42");
    for (const auto& t : tagger.tag(junk)) CHECK(tagset.count(t) == 1);
}

TEST_CASE("table lemmatizer fixture cases") {
    const auto& lem = test_support::lemmatizer();
    CHECK(lem.lemma("cats") == "cat");
    CHECK(lem.lemma("running") == "run");
    CHECK(lem.lemma("bars") == "bar");
    CHECK(lem.lemma("Putting") == "put");
    CHECK(lem.lemma("kettle") == "kettle");
    CHECK(lem.lemmas({"cats", "running"}) == Tokens{"cat", "run"});
}

TEST_CASE("uniform LM scores are flat and perplexity equals vocab size") {
    UniformLm lm(50);
    auto scores = lm.score("one two three four");
    REQUIRE(scores.size() == 4);
    for (double s : scores) CHECK(s == doctest::Approx(std::log(1.0 / 50.0)).epsilon(1e-12));
    CHECK_THROWS_AS(lm.score(""), BackendError);
    CHECK(perplexity({"one two three four"}, lm) == doctest::Approx(50.0).epsilon(1e-9));
}

TEST_CASE("bigram LM favors seen bigrams and normalizes per context") {
    std::vector<std::string> corpus;
    for (int i = 0; i < 100; ++i)
        corpus.push_back(i % 2 == 0 ? "the cat sat on the mat" : "the dog ran to the house");
    BigramLm lm(corpus, 0.1);

    CHECK(lm.token_prob("cat", "sat") > lm.token_prob("cat", "ran"));
    CHECK(lm.token_prob("the", "cat") > lm.token_prob("the", "sat"));

    // probabilities over the vocabulary sum to one
    std::vector<std::string> vocab = {"<s>",  "<unk>", "the", "cat", "sat", "on",
                                      "mat",  "dog",   "ran", "to",  "house"};
    double sum = 0.0;
    for (const auto& w : vocab) sum += lm.token_prob("cat", w);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));

    auto scores = lm.score("the cat sat");
    REQUIRE(scores.size() == 3);
    for (double s : scores) CHECK(s <= 0.0);
}

TEST_CASE("toy seq2seq memorizes a ten-pair corpus") {
    auto world = make_idiom_world(10);
    auto mono = make_mono_set(world, 10, 5);
    ToyLexiconBackend oracle(world.isp_table, 0.0, 0);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& m : mono)
        pairs.emplace_back(m.text, detokenize(oracle.apply_rules(m.tokens)));

    ToySeq2Seq model(77);
    Hyperparams hp;
    hp.ibt_lr = 3e-3;
    hp.ucd_epochs = 60;
    hp.warmup_steps = 10;
    hp.batch_size = 4;
    auto curve = model.fine_tune(pairs, hp);
    CHECK(curve.back() < curve.front());
    CHECK(model.param_count() < 100000);

    DecodeParams dec;
    int hits = 0;
    for (const auto& [src, dst] : pairs)
        hits += model.generate(tokenize(src), dec, 0) == dst ? 1 : 0;
    CHECK(hits == 10);

    // determinism: same seed, byte-identical outputs
    CHECK(model.generate(tokenize(pairs[0].first), dec, 9) ==
          model.generate(tokenize(pairs[0].first), dec, 9));
}

TEST_CASE("toy seq2seq errors") {
    ToySeq2Seq model(1);
    CHECK_THROWS_AS(model.generate(tokenize("not trained"), DecodeParams{}, 0), BackendError);
    CHECK_THROWS_AS(model.fine_tune({}, Hyperparams{}), BackendError);
}

TEST_CASE("toy seq2seq save/load round trip preserves outputs") {
    auto world = make_idiom_world(4);
    auto mono = make_mono_set(world, 8, 3);
    ToyLexiconBackend oracle(world.isp_table, 0.0, 0);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& m : mono)
        pairs.emplace_back(m.text, detokenize(oracle.apply_rules(m.tokens)));
    ToySeq2Seq model(5);
    Hyperparams hp;
    hp.ibt_lr = 3e-3;
    hp.ucd_epochs = 30;
    hp.warmup_steps = 10;
    hp.batch_size = 4;
    model.fine_tune(pairs, hp);

    std::string dir = test_support::tmp_dir("seq2seq_ckpt");
    model.save(dir);
    ToySeq2Seq loaded(0);
    loaded.load(dir);
    DecodeParams dec;
    for (const auto& [src, dst] : pairs)
        CHECK(model.generate(tokenize(src), dec, 0) == loaded.generate(tokenize(src), dec, 0));
}

TEST_CASE("backend config file round trip") {
    std::string path = test_support::tmp_dir("backend_cfg") + "/cfg.json";
    std::ofstream(path) << R"({
        "backend": {"name": "toy-lexicon", "checkpoint_path": "", "device": "cpu"},
        "decode": {"beams": 3, "top_k": 40, "top_p": 0.9, "max_len": 64},
        "seed": 17
    })";
    BackendConfig cfg = load_backend_config(path);
    CHECK(cfg.name == "toy-lexicon");
    CHECK(cfg.device == "cpu");
    CHECK(cfg.decode.beams == 3);
    CHECK(cfg.decode.top_k == 40);
    CHECK(cfg.decode.top_p == doctest::Approx(0.9));
    CHECK(cfg.decode.max_len == 64);
    CHECK(cfg.seed == 17);
    CHECK_THROWS_AS(load_backend_config("/nonexistent.json"), BackendError);
}

TEST_CASE("http dictionary source is off by default") {
    HttpSource src("webapi-like", "http://localhost:1", "/define/{word}");
    CHECK_FALSE(src.available());
    CHECK(src.lookup("anything", std::nullopt).empty());
}

TEST_CASE("backend registry builds bundled backends and rejects unknown names") {
    BackendConfig cfg;
    cfg.name = "toy-lexicon";
    cfg.seed = 3;
    auto lex = make_backend(cfg);
    CHECK(lex->name() == "toy-lexicon");
    cfg.name = "toy-seq2seq";
    auto s2s = make_backend(cfg);
    CHECK(s2s->name() == "toy-seq2seq");
    CHECK(s2s->capabilities().trainable);
    cfg.name = "bart-large";
    CHECK_THROWS_AS(make_backend(cfg), BackendError);

    auto factory = make_backend_factory(BackendConfig{});
    CHECK(factory()->name() == "toy-seq2seq");
}
