#ifndef ISPKIT_METRICS_METRICS_HPP
#define ISPKIT_METRICS_METRICS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ispkit/backends/interfaces.hpp"

namespace isp {

struct EvalRecord {
    std::string source;    // input idiomatic/literal sentence
    std::string candidate; // system output
    std::vector<std::string> references;
};

// JSONL {"source": str, "candidate": str, "references": [str...]}
std::vector<EvalRecord> load_eval_records(const std::string& path);

// Corpus BLEU: 4-gram, uniform weights over orders that have any candidate
// n-grams, brevity penalty with closest reference length, no smoothing.
// Range [0, 100].
double bleu_corpus(const std::vector<EvalRecord>& records);

// ROUGE-N F1 (n in {1,2}) and ROUGE-L (LCS F1), max over references,
// macro-averaged. Range [0, 100].
double rouge_n_single(const std::string& candidate, const std::vector<std::string>& references,
                      int n);
double rouge_l_single(const std::string& candidate, const std::vector<std::string>& references);
double rouge_corpus(const std::vector<EvalRecord>& records, int variant); // 1, 2 or 0 for L

// METEOR with exact + stem matcher stages, Fmean alpha = 0.9 and fragmenta-
// tion penalty 0.5 * (chunks/matches)^3; max over references. Range [0, 1].
double meteor_single(const std::string& candidate, const std::vector<std::string>& references);
double meteor_corpus(const std::vector<EvalRecord>& records);

// SARI over n-gram types for n = 1..4: mean of add-F1, keep-F1 and
// delete-precision per order, averaged over orders. Keep/delete weights use
// the fraction of references containing an n-gram; an operation with an
// empty target set scores 1 when the candidate proposes nothing for it.
// Range [0, 100].
double sari_single(const std::string& source, const std::string& candidate,
                   const std::vector<std::string>& references);
double sari_corpus(const std::vector<EvalRecord>& records);

// exp of the mean negative log-probability per token over the corpus
double perplexity(const std::vector<std::string>& texts, const LmScorer& scorer);

struct ScoreReport {
    size_t record_count = 0;
    double bleu = 0.0;
    double rouge1 = 0.0;
    double rouge2 = 0.0;
    double rouge_l = 0.0;
    double meteor = 0.0; // [0,1]; rendered x100 in the table
    double sari = 0.0;
    std::optional<double> ppl;
    std::vector<std::map<std::string, double>> per_record;

    std::string to_json() const;
    // fixed column order: BLEU ROUGE-1 ROUGE-2 ROUGE-L METEOR SARI GRUEN PPL
    std::string to_table(const std::string& row_label = "system") const;
};

ScoreReport evaluate_records(const std::vector<EvalRecord>& records,
                             const LmScorer* scorer = nullptr);

// Blind-rating export for external annotators: candidates in seeded random
// order with empty meaning/target/fluency/overall columns, plus a key file
// (JSONL) mapping each row back to its record index for unblinding.
void export_blind_rating_tsv(const std::vector<EvalRecord>& records, const std::string& tsv_path,
                             const std::string& key_path, uint64_t seed);

} // namespace isp

#endif
