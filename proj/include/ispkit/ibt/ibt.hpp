#ifndef ISPKIT_IBT_IBT_HPP
#define ISPKIT_IBT_IBT_HPP

#include <functional>
#include <memory>

#include "ispkit/backends/interfaces.hpp"
#include "ispkit/core/jsonl.hpp"

namespace isp {

// true iff the lemmatized, lowercased token sequence of `text` contains the
// idiom lemma's token sequence contiguously (token boundaries, not substring)
bool contains_idiom(const std::string& text, const std::string& idiom_lemma,
                    const Lemmatizer& lemmatizer);

// equality up to case, whitespace runs and terminal punctuation
bool roundtrip_equal(const std::string& a, const std::string& b);

struct SelectionStats {
    size_t candidates = 0;
    size_t kept = 0;
    size_t rejected_rule1 = 0; // literal side still contains the IE
    size_t rejected_rule2 = 0; // round trip differs from the original
};

// Keep a candidate iff the IE is gone from the literal hypothesis (rule 1)
// and the round trip reproduces the original (rule 2). A candidate failing
// both rules counts against rule 1.
std::vector<ParallelPair> select_data(const std::vector<CandidateTriple>& candidates,
                                      const Lemmatizer& lemmatizer, int iteration,
                                      SelectionStats& stats);

struct IterationStats {
    int iteration = 0;
    size_t parallel_size_before = 0;
    size_t parallel_size_after = 0;
    size_t mono_remaining = 0;
    SelectionStats selection;
    std::string to_json_line() const;
};

struct IbtState {
    int iteration = 0;
    std::vector<ParallelPair> parallel;
    std::vector<IdiomaticSentence> mono_remaining;
    std::vector<IterationStats> per_iteration;
    // set when a later iteration diverged; the state holds everything up to
    // the last completed iteration
    std::string abort_reason;
};

struct IbtOptions {
    int iterations = 5;
    // fresh restart from pristine weights each iteration (default) or keep
    // fine-tuning the previous iteration's models
    bool fresh_models_per_iteration = true;
    DecodeParams decode;
    uint64_t seed = 0;
};

struct IbtResult {
    std::shared_ptr<Seq2SeqBackend> isp_model;
    std::shared_ptr<Seq2SeqBackend> isg_model;
    IbtState state;
};

// fine-tunes two independent models: ISP on idiomatic->literal and ISG on
// literal->idiomatic
std::pair<std::shared_ptr<Seq2SeqBackend>, std::shared_ptr<Seq2SeqBackend>> train_pair_models(
    const std::vector<ParallelPair>& parallel, const BackendFactory& factory,
    const Hyperparams& hp);

// one triple per input, order preserved; generation failures come back as
// empty-output triples and fall to the selection rules
std::vector<CandidateTriple> generate_candidates(const Seq2SeqBackend& isp,
                                                 const Seq2SeqBackend& isg,
                                                 const std::vector<IdiomaticSentence>& mono,
                                                 const DecodeParams& decode, uint64_t seed);

// the full loop: train, generate, select, grow P, shrink I_M
IbtResult run_ibt(const std::vector<ParallelPair>& seed_parallel,
                  const std::vector<IdiomaticSentence>& mono, const BackendFactory& factory,
                  const Lemmatizer& lemmatizer, const Hyperparams& hp, const IbtOptions& opt);

} // namespace isp

#endif
