#ifndef ISPKIT_TESTS_SYNTHETIC_HPP
#define ISPKIT_TESTS_SYNTHETIC_HPP

#include <string>
#include <vector>

#include "ispkit/backends/toy_lexicon.hpp"
#include "ispkit/core/jsonl.hpp"
#include "ispkit/core/rng.hpp"
#include "ispkit/core/types.hpp"

namespace test_support {

// A closed toy language for back-translation runs: K two-token idioms, each
// with a unique single-token literal form, plus filler words. All tokens are
// made-up stems so the fixture lemmatizer leaves them alone.
struct ToyIdiomWorld {
    isp::ToyLexiconBackend::Table isp_table; // idiom -> literal
    isp::ToyLexiconBackend::Table isg_table; // literal -> idiom
    std::vector<isp::Tokens> idioms;
    std::vector<std::string> literals;
    std::vector<std::string> fillers;
};

inline ToyIdiomWorld make_idiom_world(int n_idioms) {
    ToyIdiomWorld w;
    for (int i = 0; i < n_idioms; ++i) {
        isp::Tokens idiom = {"bonk" + std::to_string(i), "kettle"};
        std::string literal = "plainword" + std::to_string(i);
        w.idioms.push_back(idiom);
        w.literals.push_back(literal);
        w.isp_table.emplace_back(idiom, isp::Tokens{literal});
        w.isg_table.emplace_back(isp::Tokens{literal}, idiom);
    }
    for (int i = 0; i < 30; ++i) w.fillers.push_back("peb" + std::to_string(i));
    return w;
}

inline isp::IdiomaticSentence make_idiomatic_sentence(const ToyIdiomWorld& w, int idiom_index,
                                                      isp::Rng& rng) {
    const isp::Tokens& idiom = w.idioms[static_cast<size_t>(idiom_index)];
    size_t left = 1 + rng.uniform(3);
    size_t right = 1 + rng.uniform(3);
    isp::Tokens toks;
    for (size_t i = 0; i < left; ++i) toks.push_back(w.fillers[rng.uniform(w.fillers.size())]);
    size_t start = toks.size();
    for (const auto& t : idiom) toks.push_back(t);
    size_t end = toks.size();
    for (size_t i = 0; i < right; ++i) toks.push_back(w.fillers[rng.uniform(w.fillers.size())]);
    return isp::IdiomaticSentence::make(isp::detokenize(toks), isp::IdiomSpan{start, end},
                                        isp::detokenize(idiom));
}

// unique sentences: a two-token marker from closed pools keeps texts distinct
// without growing the vocabulary past the toy cap
inline std::vector<isp::IdiomaticSentence> make_mono_set(const ToyIdiomWorld& w, int count,
                                                         uint64_t seed) {
    std::vector<isp::IdiomaticSentence> out;
    isp::Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        int idiom_index = static_cast<int>(rng.uniform(w.idioms.size()));
        isp::IdiomaticSentence s = make_idiomatic_sentence(w, idiom_index, rng);
        isp::Tokens toks = s.tokens;
        // coprime cycles: unique (ma, mb) combos for i < 47*53 while every
        // marker token shows up early in the set
        toks.push_back("ma" + std::to_string(i % 47));
        toks.push_back("mb" + std::to_string(i % 53));
        out.push_back(isp::IdiomaticSentence::make(isp::detokenize(toks), s.span, s.idiom_lemma));
    }
    return out;
}

inline std::vector<isp::ParallelPair> make_seed_pairs(const ToyIdiomWorld& w, int per_idiom,
                                                      uint64_t seed) {
    std::vector<isp::ParallelPair> out;
    isp::Rng rng(seed);
    isp::ToyLexiconBackend oracle(w.isp_table, 0.0, 0);
    int counter = 0;
    for (size_t k = 0; k < w.idioms.size(); ++k) {
        for (int j = 0; j < per_idiom; ++j) {
            isp::IdiomaticSentence s = make_idiomatic_sentence(w, static_cast<int>(k), rng);
            isp::Tokens toks = s.tokens;
            toks.push_back("sa" + std::to_string(counter % 23));
            toks.push_back("sb" + std::to_string(counter % 29));
            ++counter;
            s = isp::IdiomaticSentence::make(isp::detokenize(toks), s.span, s.idiom_lemma);
            isp::ParallelPair p;
            p.idiomatic = s;
            p.literal = isp::LiteralSentence::make(isp::detokenize(oracle.apply_rules(s.tokens)));
            p.idiom = s.surface_idiom();
            p.source_tag = isp::SourceTag::seed();
            out.push_back(std::move(p));
        }
    }
    return out;
}

// Mask-filling corpus: filler context with one slot that expands to a phrase;
// the instance's definitions identify the phrase.
struct PhraseFillSpec {
    std::vector<std::string> phrases;                 // slot content
    std::vector<std::vector<std::string>> glosses;    // per phrase, >= 1
    std::vector<std::string> fillers;
    std::vector<std::string> pos_tags = {"VERB", "ADJ", "ADV"};
    int min_fillers = 4;
    int max_fillers = 7;
};

inline std::vector<isp::MaskedRecord> make_phrase_fill_corpus(const PhraseFillSpec& spec,
                                                              int count, uint64_t seed) {
    std::vector<isp::MaskedRecord> out;
    isp::Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        size_t pi = rng.uniform(spec.phrases.size());
        int n_fill = spec.min_fillers +
                     static_cast<int>(rng.uniform(
                         static_cast<uint64_t>(spec.max_fillers - spec.min_fillers + 1)));
        isp::Tokens fillers;
        for (int k = 0; k < n_fill; ++k)
            fillers.push_back(spec.fillers[rng.uniform(spec.fillers.size())]);
        size_t slot = rng.uniform(fillers.size() + 1);

        isp::Tokens target_toks, masked_toks;
        for (size_t k = 0; k <= fillers.size(); ++k) {
            if (k == slot) {
                for (const auto& t : isp::tokenize(spec.phrases[pi])) target_toks.push_back(t);
                masked_toks.push_back("MASK");
            }
            if (k < fillers.size()) {
                target_toks.push_back(fillers[k]);
                masked_toks.push_back(fillers[k]);
            }
        }

        isp::MaskedRecord rec;
        rec.masked = isp::detokenize(masked_toks);
        rec.mask_index = static_cast<int>(slot);
        rec.pos = spec.pos_tags[pi % spec.pos_tags.size()];
        rec.definitions = spec.glosses[pi]; // every sense of the masked word
        rec.target = isp::detokenize(target_toks);
        out.push_back(std::move(rec));
    }
    return out;
}

// single-token fill spec: phrase j is the word "wug<j>", its glosses are
// fixed 2-3 token strings over a disjoint gloss vocabulary
inline PhraseFillSpec make_word_fill_spec(int n_words, int n_fillers, uint64_t seed) {
    PhraseFillSpec spec;
    isp::Rng rng(seed);
    std::vector<std::string> gloss_vocab;
    for (int i = 0; i < 40; ++i) gloss_vocab.push_back("gl" + std::to_string(i));
    for (int j = 0; j < n_words; ++j) {
        spec.phrases.push_back("wug" + std::to_string(j));
        int senses = 1 + static_cast<int>(rng.uniform(2));
        std::vector<std::string> defs;
        for (int s = 0; s < senses; ++s) {
            int len = 2 + static_cast<int>(rng.uniform(2));
            isp::Tokens g;
            for (int t = 0; t < len; ++t)
                g.push_back(gloss_vocab[rng.uniform(gloss_vocab.size())]);
            // the word's index token makes the gloss identifiable
            g.push_back("gk" + std::to_string(j));
            defs.push_back(isp::detokenize(g));
        }
        spec.glosses.push_back(defs);
    }
    for (int f = 0; f < n_fillers; ++f) spec.fillers.push_back("fil" + std::to_string(f));
    return spec;
}

} // namespace test_support

#endif
