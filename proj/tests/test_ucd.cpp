#include <doctest.h>

#include "ispkit/ucd/model.hpp"

#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

using namespace isp;

namespace {

MaskedRecord small_instance() {
    MaskedRecord rec;
    rec.masked = "fil1 fil2 MASK fil3 fil4 fil5";
    rec.mask_index = 2;
    rec.pos = "ADV";
    rec.definitions = {"first gloss", "second gloss", "third gloss"};
    rec.target = "fil1 fil2 wug9 fil3 fil4 fil5";
    return rec;
}

} // namespace

TEST_CASE("embedding stage shapes and determinism") {
    UcdModel model(UcdConfig{}, 42);
    MaskedRecord rec = small_instance();
    auto stage = model.embedding_stage(rec);
    CHECK(stage.context.rows() == 8); // L + sep + tag
    CHECK(stage.context.cols() == 32);
    CHECK(stage.definitions.rows() == 3);
    CHECK(stage.definitions.cols() == 16);
    CHECK(stage.mask_index == 2);

    MaskedRecord one = rec;
    one.definitions = {"only gloss"};
    CHECK(model.embedding_stage(one).definitions.rows() == 1);

    auto again = model.embedding_stage(rec);
    CHECK(stage.context == again.context);        // frozen + deterministic
    CHECK(stage.definitions == again.definitions);
}

TEST_CASE("embedding stage errors") {
    UcdConfig cfg;
    cfg.max_seq_len = 8;
    UcdModel model(cfg, 42);
    MaskedRecord rec = small_instance(); // 6 tokens + 2 = 8, at the limit
    CHECK_NOTHROW(model.embedding_stage(rec));
    rec.masked = "fil1 fil2 MASK fil3 fil4 fil5 fil6";
    CHECK_THROWS_AS(model.embedding_stage(rec), BackendError);
    rec = small_instance();
    rec.mask_index = 1; // does not point at MASK
    CHECK_THROWS_AS(model.embedding_stage(rec), BackendError);
    rec = small_instance();
    rec.definitions.clear();
    CHECK_THROWS_AS(model.embedding_stage(rec), BackendError);
}

TEST_CASE("one-instance overfit: loss falls and keeps falling after warmup") {
    UcdConfig cfg;
    cfg.align_sigma = 0.4;
    UcdModel model(cfg, 7);
    std::vector<MaskedRecord> corpus{small_instance()};
    Hyperparams hp;
    hp.ucd_lr = 2e-3;
    hp.batch_size = 1;
    hp.warmup_steps = 10;
    UcdTrainOptions opt;
    opt.epochs = 100;
    opt.max_steps = 100;
    auto report = model.train(corpus, hp, opt);
    REQUIRE(report.loss_curve.size() == 100);
    CHECK(report.loss_curve.back() < 0.05 * report.loss_curve.front());
    // monotone within noise after warmup: allow tiny upticks only
    for (size_t i = 15; i + 1 < report.loss_curve.size(); ++i)
        CHECK(report.loss_curve[i + 1] <= report.loss_curve[i] + 0.05);
    // after this much overfitting the fill is exact
    DecodeParams dec;
    CHECK(model.infer_fill(corpus[0], dec) == corpus[0].target);
}

TEST_CASE("frozen components are untouched by training") {
    UcdModel model(UcdConfig{}, 99);
    MaskedRecord rec = small_instance();
    Eigen::MatrixXd ctx_before = model.embedding_stage(rec).context;
    Eigen::MatrixXd defs_before = model.embedding_stage(rec).definitions;

    std::vector<MaskedRecord> corpus{rec};
    Hyperparams hp;
    hp.ucd_lr = 1e-3;
    hp.batch_size = 1;
    hp.warmup_steps = 2;
    UcdTrainOptions opt;
    opt.epochs = 10;
    opt.max_steps = 10;
    model.train(corpus, hp, opt);

    auto stage = model.embedding_stage(rec);
    CHECK(stage.context == ctx_before);       // byte-identical
    CHECK(stage.definitions == defs_before);
}

TEST_CASE("checkpoint round trip preserves inference") {
    test_support::PhraseFillSpec spec = test_support::make_word_fill_spec(10, 20, 3);
    auto corpus = test_support::make_phrase_fill_corpus(spec, 200, 17);
    UcdConfig cfg;
    cfg.align_sigma = 0.4;
    UcdModel model(cfg, 21);
    Hyperparams hp;
    hp.ucd_lr = 2e-3;
    hp.warmup_steps = 20;
    hp.batch_size = 16;
    UcdTrainOptions opt;
    opt.epochs = 5;
    model.train(corpus, hp, opt);

    std::string dir = test_support::tmp_dir("ucd_ckpt");
    model.save(dir, "feedc0de");
    UcdModel loaded(UcdConfig{}, 0);
    loaded.load(dir);

    DecodeParams dec;
    for (int i = 0; i < 10; ++i)
        CHECK(model.infer_fill(corpus[static_cast<size_t>(i)], dec) ==
              loaded.infer_fill(corpus[static_cast<size_t>(i)], dec));
}

TEST_CASE("zero-shot paraphrase replaces the idiom with its gloss") {
    // phrase-fill training corpus over everyday words; glosses are the
    // phrases themselves, definitions arrive from the idiom lexicon at
    // inference time
    test_support::PhraseFillSpec spec;
    spec.phrases = {"in prison", "very ill", "delay making a decision", "unexpectedly",
                    "is contrary to", "in a state of confusion", "express", "decide",
                    "incidentally", "very easy"};
    for (auto& p : spec.phrases) spec.glosses.push_back({p});
    spec.fillers = {"putting", "him", "her", "won't", "serve", "any", "purpose", ",", "will",
                    "it", "?", "he", "she", "was", "today", "the", "show", "would", "have",
                    "been", "you", "can't", "longer", "need", "to", "make", "up", "your",
                    "mind", ".", "and", "but", "so", "they", "we", "stay", "house", "friend",
                    "morning", "left", "came", "saw", "told", "asked", "again", "night"};
    spec.pos_tags = {"X"};
    spec.min_fillers = 5;
    spec.max_fillers = 9;

    auto corpus = test_support::make_phrase_fill_corpus(spec, 1500, 11);
    UcdConfig cfg; // default align_sigma 1.5
    UcdModel model(cfg, 4242);
    Hyperparams hp;
    hp.ucd_lr = 2e-3;
    hp.warmup_steps = 50;
    hp.batch_size = 16;
    UcdTrainOptions opt;
    opt.epochs = 25;
    model.train(corpus, hp, opt);

    auto dict = test_support::make_dict_client();
    const auto& tagger = test_support::tagger();
    const auto& lem = test_support::lemmatizer();
    DecodeParams dec;

    IdiomaticSentence bars = IdiomaticSentence::make(
        "Putting him behind bars won't serve any purpose , will it ?", IdiomSpan{2, 4},
        "behind bar");
    LiteralSentence out = model.infer_paraphrase(bars, dict, tagger, lem, dec);
    CHECK(out.text.find("in prison") != std::string::npos);
    CHECK(out.text.find("behind bars") == std::string::npos);

    IdiomaticSentence fence = IdiomaticSentence::make(
        "You can't sit on the fence any longer , you need to make up your mind .",
        IdiomSpan{2, 6}, "sit on the fence");
    LiteralSentence out2 = model.infer_paraphrase(fence, dict, tagger, lem, dec);
    CHECK(out2.text.find("delay making a decision") != std::string::npos);

    // deterministic under a fixed seed
    LiteralSentence again = model.infer_paraphrase(bars, dict, tagger, lem, dec);
    CHECK(out.text == again.text);

    // unknown idiom: definition lookup fails
    IdiomaticSentence unknown = IdiomaticSentence::make(
        "she tried to grok the wumpus yesterday", IdiomSpan{3, 6}, "grok the wumpus");
    CHECK_THROWS_AS(model.infer_paraphrase(unknown, dict, tagger, lem, dec), DictNotFound);
}
