#include "ispkit/ibt/ibt.hpp"

#include <unordered_set>

#include <json.hpp>

#include "ispkit/core/rng.hpp"

namespace isp {

bool contains_idiom(const std::string& text, const std::string& idiom_lemma,
                    const Lemmatizer& lemmatizer) {
    if (idiom_lemma.empty()) throw std::invalid_argument("contains_idiom: empty idiom lemma");
    Tokens hay = lemmatizer.lemmas(lowercase(tokenize(text)));
    Tokens needle = lemmatizer.lemmas(lowercase(tokenize(idiom_lemma)));
    return contains_token_seq(hay, needle);
}

bool roundtrip_equal(const std::string& a, const std::string& b) {
    return normalize_for_compare(a) == normalize_for_compare(b);
}

std::vector<ParallelPair> select_data(const std::vector<CandidateTriple>& candidates,
                                      const Lemmatizer& lemmatizer, int iteration,
                                      SelectionStats& stats) {
    std::vector<ParallelPair> kept;
    for (const CandidateTriple& c : candidates) {
        ++stats.candidates;
        std::string idiom_lemma = c.original.idiom_lemma;
        if (idiom_lemma.empty())
            idiom_lemma = lowercase(c.original.surface_idiom());
        if (c.literal_hyp.text.empty() || contains_idiom(c.literal_hyp.text, idiom_lemma,
                                                         lemmatizer)) {
            ++stats.rejected_rule1;
            continue;
        }
        if (!roundtrip_equal(c.roundtrip.text, c.original.text)) {
            ++stats.rejected_rule2;
            continue;
        }
        ParallelPair pair;
        pair.idiomatic = c.original;
        pair.literal = c.literal_hyp;
        pair.idiom = c.original.surface_idiom();
        pair.source_tag = SourceTag::augmented(iteration);
        kept.push_back(std::move(pair));
        ++stats.kept;
    }
    return kept;
}

std::pair<std::shared_ptr<Seq2SeqBackend>, std::shared_ptr<Seq2SeqBackend>> train_pair_models(
    const std::vector<ParallelPair>& parallel, const BackendFactory& factory,
    const Hyperparams& hp) {
    if (parallel.empty()) throw BackendError("train_pair_models: empty parallel dataset");

    std::vector<std::pair<std::string, std::string>> fwd, bwd;
    fwd.reserve(parallel.size());
    bwd.reserve(parallel.size());
    for (const auto& p : parallel) {
        fwd.emplace_back(p.idiomatic.text, p.literal.text);
        bwd.emplace_back(p.literal.text, p.idiomatic.text);
    }

    auto isp_model = factory();
    auto isg_model = factory();
    isp_model->fine_tune(fwd, hp);
    isg_model->fine_tune(bwd, hp);
    return {isp_model, isg_model};
}

std::vector<CandidateTriple> generate_candidates(const Seq2SeqBackend& isp,
                                                 const Seq2SeqBackend& isg,
                                                 const std::vector<IdiomaticSentence>& mono,
                                                 const DecodeParams& decode, uint64_t seed) {
    std::vector<CandidateTriple> out;
    out.reserve(mono.size());
    for (size_t i = 0; i < mono.size(); ++i) {
        CandidateTriple triple;
        triple.original = mono[i];
        uint64_t item_seed = mix_seed(seed, i);
        try {
            std::string literal = isp.generate(mono[i].tokens, decode, item_seed);
            triple.literal_hyp = LiteralSentence::make(literal);
            std::string back = isg.generate(triple.literal_hyp.tokens, decode,
                                            mix_seed(item_seed, 1));
            triple.roundtrip = LiteralSentence::make(back);
        } catch (const BackendError&) {
            // recorded as an empty-output triple; the filter drops it
            triple.literal_hyp = LiteralSentence{};
            triple.roundtrip = LiteralSentence{};
        }
        out.push_back(std::move(triple));
    }
    return out;
}

std::string IterationStats::to_json_line() const {
    nlohmann::ordered_json j;
    j["iteration"] = iteration;
    j["parallel_before"] = parallel_size_before;
    j["parallel_after"] = parallel_size_after;
    j["mono_remaining"] = mono_remaining;
    j["candidates"] = selection.candidates;
    j["kept"] = selection.kept;
    j["rejected_rule1"] = selection.rejected_rule1;
    j["rejected_rule2"] = selection.rejected_rule2;
    return j.dump();
}

IbtResult run_ibt(const std::vector<ParallelPair>& seed_parallel,
                  const std::vector<IdiomaticSentence>& mono, const BackendFactory& factory,
                  const Lemmatizer& lemmatizer, const Hyperparams& hp, const IbtOptions& opt) {
    if (opt.iterations < 0) throw std::invalid_argument("run_ibt: negative iteration count");

    IbtResult result;
    result.state.parallel = seed_parallel;
    result.state.mono_remaining = mono;

    if (opt.iterations == 0) {
        // loop not entered; models are trained on the seed set only
        auto [isp_model, isg_model] = train_pair_models(seed_parallel, factory, hp);
        result.isp_model = isp_model;
        result.isg_model = isg_model;
        return result;
    }

    std::shared_ptr<Seq2SeqBackend> isp_model, isg_model;
    for (int n = 1; n <= opt.iterations; ++n) {
        IterationStats iter_stats;
        iter_stats.iteration = n;
        iter_stats.parallel_size_before = result.state.parallel.size();

        std::vector<CandidateTriple> candidates;
        try {
            if (opt.fresh_models_per_iteration || !isp_model) {
                auto [fwd, bwd] = train_pair_models(result.state.parallel, factory, hp);
                isp_model = fwd;
                isg_model = bwd;
            } else {
                std::vector<std::pair<std::string, std::string>> fwd, bwd;
                for (const auto& p : result.state.parallel) {
                    fwd.emplace_back(p.idiomatic.text, p.literal.text);
                    bwd.emplace_back(p.literal.text, p.idiomatic.text);
                }
                isp_model->fine_tune(fwd, hp);
                isg_model->fine_tune(bwd, hp);
            }
        } catch (const std::exception& e) {
            // divergence: stop here and hand back the state up to n-1
            result.state.abort_reason =
                "iteration " + std::to_string(n) + ": " + e.what();
            break;
        }

        candidates = generate_candidates(
            *isp_model, *isg_model, result.state.mono_remaining, opt.decode,
            mix_seed(opt.seed, static_cast<uint64_t>(n)));

        std::vector<ParallelPair> kept =
            select_data(candidates, lemmatizer, n, iter_stats.selection);

        // P_{n+1} = P_n  U  D*_M ; I_M^{n+1} = I_M^n \ kept originals
        std::vector<IdiomaticSentence> remaining;
        remaining.reserve(result.state.mono_remaining.size() - kept.size());
        {
            std::unordered_set<std::string> kept_texts;
            for (const auto& p : kept) kept_texts.insert(p.idiomatic.text);
            for (const auto& m : result.state.mono_remaining)
                if (!kept_texts.count(m.text)) remaining.push_back(m);
        }
        for (auto& p : kept) result.state.parallel.push_back(std::move(p));
        result.state.mono_remaining = std::move(remaining);

        iter_stats.parallel_size_after = result.state.parallel.size();
        iter_stats.mono_remaining = result.state.mono_remaining.size();
        result.state.per_iteration.push_back(iter_stats);
        result.state.iteration = n;
    }

    result.isp_model = isp_model;
    result.isg_model = isg_model;
    return result;
}

} // namespace isp
