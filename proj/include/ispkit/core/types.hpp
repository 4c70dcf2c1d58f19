#ifndef ISPKIT_CORE_TYPES_HPP
#define ISPKIT_CORE_TYPES_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ispkit/core/tokenize.hpp"

namespace isp {

// Token span of an idiomatic expression: [start, end), at least one token.
struct IdiomSpan {
    size_t start = 0;
    size_t end = 0;

    bool valid() const { return start < end; }
    size_t length() const { return end - start; }
};

struct IdiomaticSentence {
    std::string text;
    Tokens tokens;
    IdiomSpan span;
    std::string idiom_lemma; // per-token lemmatized, lowercased form of the IE

    static IdiomaticSentence make(const std::string& text, IdiomSpan span,
                                  const std::string& idiom_lemma) {
        IdiomaticSentence s;
        s.text = text;
        s.tokens = tokenize(text);
        s.span = span;
        s.idiom_lemma = idiom_lemma;
        return s;
    }

    std::string surface_idiom() const {
        if (!span.valid() || span.end > tokens.size()) return {};
        Tokens slice(tokens.begin() + static_cast<long>(span.start),
                     tokens.begin() + static_cast<long>(span.end));
        return detokenize(slice);
    }
};

struct LiteralSentence {
    std::string text;
    Tokens tokens;

    static LiteralSentence make(const std::string& text) {
        LiteralSentence s;
        s.text = text;
        s.tokens = tokenize(text);
        return s;
    }

    bool empty() const { return text.empty(); }
};

// Provenance of a parallel pair: hand-made seed data or back-translation
// output from iteration n.
struct SourceTag {
    enum Kind { Seed, Augmented } kind = Seed;
    int iteration = 0; // meaningful for Augmented only

    static SourceTag seed() { return SourceTag{Seed, 0}; }
    static SourceTag augmented(int iter) { return SourceTag{Augmented, iter}; }

    std::string str() const {
        if (kind == Seed) return "seed";
        return "augmented-iter-" + std::to_string(iteration);
    }

    static SourceTag parse(const std::string& s) {
        if (s == "seed") return seed();
        const std::string prefix = "augmented-iter-";
        if (s.rfind(prefix, 0) == 0) {
            int n = std::stoi(s.substr(prefix.size()));
            return augmented(n);
        }
        throw std::invalid_argument("unknown source_tag: " + s);
    }

    bool operator==(const SourceTag& o) const {
        return kind == o.kind && (kind == Seed || iteration == o.iteration);
    }
};

struct ParallelPair {
    IdiomaticSentence idiomatic;
    LiteralSentence literal;
    std::string idiom; // surface or lemma form covered by idiomatic.span
    SourceTag source_tag = SourceTag::seed();
};

// (I_M, S_hat, I_hat): a monolingual idiomatic sentence, its generated literal
// counterpart, and the round-trip reconstruction.
struct CandidateTriple {
    IdiomaticSentence original;
    LiteralSentence literal_hyp;
    LiteralSentence roundtrip;
};

struct Hyperparams {
    double ucd_lr = 1e-5;
    int warmup_steps = 20000;
    int batch_size = 16;
    int ucd_epochs = 3;
    int max_seq_len = 128;
    int beams = 5;
    int top_k = 100;
    double top_p = 0.5;
    double ibt_lr = 5e-5;
    int ibt_iterations = 5;
    double p_stopword_drop = 0.8;
    double p_lemmatize = 0.4;

    void check() const {
        auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!prob(top_p) || !prob(p_stopword_drop) || !prob(p_lemmatize))
            throw std::invalid_argument("hyperparam probability out of [0,1]");
        if (warmup_steps < 0 || batch_size <= 0 || ucd_epochs <= 0 || max_seq_len <= 0 ||
            beams <= 0 || top_k <= 0 || ibt_iterations < 0)
            throw std::invalid_argument("hyperparam count must be positive");
    }
};

} // namespace isp

#endif
