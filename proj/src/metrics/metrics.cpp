#include "ispkit/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ispkit/core/rng.hpp"
#include "ispkit/core/tokenize.hpp"
#include "ispkit/metrics/stemmer.hpp"

namespace isp {

namespace {

using NgramCounts = std::map<Tokens, long>;

NgramCounts ngram_counts(const Tokens& tokens, int n) {
    NgramCounts counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
        Tokens gram(tokens.begin() + static_cast<long>(i), tokens.begin() + static_cast<long>(i + n));
        ++counts[gram];
    }
    return counts;
}

std::set<Tokens> ngram_set(const Tokens& tokens, int n) {
    std::set<Tokens> grams;
    if (static_cast<int>(tokens.size()) < n) return grams;
    for (size_t i = 0; i + n <= tokens.size(); ++i)
        grams.insert(Tokens(tokens.begin() + static_cast<long>(i),
                            tokens.begin() + static_cast<long>(i + n)));
    return grams;
}

Tokens eval_tokens(const std::string& text) { return lowercase(tokenize(text)); }

double f1(double p, double r) { return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0; }

} // namespace

std::vector<EvalRecord> load_eval_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<EvalRecord> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("source") || !j.contains("candidate") ||
            !j.contains("references") || !j["references"].is_array() || j["references"].empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected {\"source\", \"candidate\", \"references\"}");
        EvalRecord r;
        r.source = j["source"].get<std::string>();
        r.candidate = j["candidate"].get<std::string>();
        for (const auto& ref : j["references"]) r.references.push_back(ref.get<std::string>());
        out.push_back(std::move(r));
    }
    return out;
}

// --- BLEU -----------------------------------------------------------------

double bleu_corpus(const std::vector<EvalRecord>& records) {
    if (records.empty()) throw std::invalid_argument("bleu: empty candidate set");
    const int max_n = 4;
    std::vector<long> match(max_n, 0), total(max_n, 0);
    long cand_len = 0, ref_len = 0;

    for (const auto& rec : records) {
        Tokens cand = eval_tokens(rec.candidate);
        cand_len += static_cast<long>(cand.size());

        // closest reference length; ties go to the shorter one
        long best_ref = -1;
        for (const auto& ref : rec.references) {
            long len = static_cast<long>(eval_tokens(ref).size());
            if (best_ref < 0 ||
                std::llabs(len - static_cast<long>(cand.size())) <
                    std::llabs(best_ref - static_cast<long>(cand.size())) ||
                (std::llabs(len - static_cast<long>(cand.size())) ==
                     std::llabs(best_ref - static_cast<long>(cand.size())) &&
                 len < best_ref))
                best_ref = len;
        }
        ref_len += best_ref;

        for (int n = 1; n <= max_n; ++n) {
            NgramCounts cgrams = ngram_counts(cand, n);
            NgramCounts clipped;
            for (const auto& ref : rec.references) {
                NgramCounts rgrams = ngram_counts(eval_tokens(ref), n);
                for (const auto& [gram, cnt] : rgrams) {
                    auto it = clipped.find(gram);
                    if (it == clipped.end()) clipped[gram] = cnt;
                    else it->second = std::max(it->second, cnt);
                }
            }
            for (const auto& [gram, cnt] : cgrams) {
                total[n - 1] += cnt;
                auto it = clipped.find(gram);
                if (it != clipped.end()) match[n - 1] += std::min(cnt, it->second);
            }
        }
    }

    // geometric mean over orders with any candidate n-grams, no smoothing
    double log_sum = 0.0;
    int used = 0;
    for (int n = 0; n < max_n; ++n) {
        if (total[n] == 0) continue;
        if (match[n] == 0) return 0.0;
        log_sum += std::log(double(match[n]) / double(total[n]));
        ++used;
    }
    if (used == 0 || cand_len == 0) return 0.0;
    double bp = cand_len < ref_len ? std::exp(1.0 - double(ref_len) / double(cand_len)) : 1.0;
    return 100.0 * bp * std::exp(log_sum / double(used));
}

// --- ROUGE ------------------------------------------------------------

double rouge_n_single(const std::string& candidate, const std::vector<std::string>& references,
                      int n) {
    Tokens cand = eval_tokens(candidate);
    NgramCounts cgrams = ngram_counts(cand, n);
    long cand_total = 0;
    for (const auto& [g, c] : cgrams) cand_total += c;

    double best = 0.0;
    for (const auto& ref : references) {
        NgramCounts rgrams = ngram_counts(eval_tokens(ref), n);
        long ref_total = 0, overlap = 0;
        for (const auto& [g, c] : rgrams) ref_total += c;
        for (const auto& [g, c] : cgrams) {
            auto it = rgrams.find(g);
            if (it != rgrams.end()) overlap += std::min(c, it->second);
        }
        double p = cand_total > 0 ? double(overlap) / double(cand_total) : 0.0;
        double r = ref_total > 0 ? double(overlap) / double(ref_total) : 0.0;
        best = std::max(best, f1(p, r));
    }
    return 100.0 * best;
}

namespace {

long lcs_length(const Tokens& a, const Tokens& b) {
    std::vector<std::vector<long>> dp(a.size() + 1, std::vector<long>(b.size() + 1, 0));
    for (size_t i = 1; i <= a.size(); ++i)
        for (size_t j = 1; j <= b.size(); ++j)
            dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1
                                            : std::max(dp[i - 1][j], dp[i][j - 1]);
    return dp[a.size()][b.size()];
}

} // namespace

double rouge_l_single(const std::string& candidate, const std::vector<std::string>& references) {
    Tokens cand = eval_tokens(candidate);
    double best = 0.0;
    for (const auto& ref : references) {
        Tokens rtoks = eval_tokens(ref);
        long lcs = lcs_length(cand, rtoks);
        double p = cand.empty() ? 0.0 : double(lcs) / double(cand.size());
        double r = rtoks.empty() ? 0.0 : double(lcs) / double(rtoks.size());
        best = std::max(best, f1(p, r));
    }
    return 100.0 * best;
}

double rouge_corpus(const std::vector<EvalRecord>& records, int variant) {
    if (records.empty()) throw std::invalid_argument("rouge: empty candidate set");
    double sum = 0.0;
    for (const auto& rec : records)
        sum += variant == 0 ? rouge_l_single(rec.candidate, rec.references)
                            : rouge_n_single(rec.candidate, rec.references, variant);
    return sum / double(records.size());
}

// --- METEOR -----------------------------------------------------------

namespace {

// exact stage then stem stage, leftmost-first matching within each stage
std::vector<std::pair<size_t, size_t>> meteor_alignment(const Tokens& cand, const Tokens& ref) {
    std::vector<std::pair<size_t, size_t>> matches;
    std::vector<bool> cand_used(cand.size(), false), ref_used(ref.size(), false);

    auto run_stage = [&](auto key) {
        for (size_t ci = 0; ci < cand.size(); ++ci) {
            if (cand_used[ci]) continue;
            for (size_t rj = 0; rj < ref.size(); ++rj) {
                if (ref_used[rj]) continue;
                if (key(cand[ci]) == key(ref[rj])) {
                    matches.emplace_back(ci, rj);
                    cand_used[ci] = true;
                    ref_used[rj] = true;
                    break;
                }
            }
        }
    };
    run_stage([](const std::string& w) { return w; });
    run_stage([](const std::string& w) { return stem(w); });
    std::sort(matches.begin(), matches.end());
    return matches;
}

} // namespace

double meteor_single(const std::string& candidate, const std::vector<std::string>& references) {
    Tokens cand = eval_tokens(candidate);
    double best = 0.0;
    for (const auto& ref : references) {
        Tokens rtoks = eval_tokens(ref);
        auto matches = meteor_alignment(cand, rtoks);
        if (matches.empty() || cand.empty() || rtoks.empty()) continue;
        double m = double(matches.size());
        double p = m / double(cand.size());
        double r = m / double(rtoks.size());
        double fmean = p * r / (0.9 * p + 0.1 * r);
        long chunks = 1;
        for (size_t k = 1; k < matches.size(); ++k) {
            if (matches[k].first != matches[k - 1].first + 1 ||
                matches[k].second != matches[k - 1].second + 1)
                ++chunks;
        }
        double penalty = 0.5 * std::pow(double(chunks) / m, 3.0);
        best = std::max(best, fmean * (1.0 - penalty));
    }
    return best;
}

double meteor_corpus(const std::vector<EvalRecord>& records) {
    if (records.empty()) throw std::invalid_argument("meteor: empty candidate set");
    double sum = 0.0;
    for (const auto& rec : records) sum += meteor_single(rec.candidate, rec.references);
    return sum / double(records.size());
}

// --- SARI ------------------------------------------------------------

namespace {

struct OpScore {
    double precision = 0.0;
    double recall = 0.0;
};

// zero-count convention: an empty proposal against an empty target is
// perfect; an empty side against a non-empty one contributes zero
OpScore op_score(double num_p, double den_p, double num_r, double den_r) {
    OpScore s;
    s.precision = den_p > 0 ? num_p / den_p : (den_r == 0 ? 1.0 : 0.0);
    s.recall = den_r > 0 ? num_r / den_r : (den_p == 0 ? 1.0 : 0.0);
    return s;
}

} // namespace

double sari_single(const std::string& source, const std::string& candidate,
                   const std::vector<std::string>& references) {
    Tokens src = eval_tokens(source);
    Tokens cand = eval_tokens(candidate);
    const double nrefs = double(references.size());

    double total = 0.0;
    for (int n = 1; n <= 4; ++n) {
        std::set<Tokens> S = ngram_set(src, n);
        std::set<Tokens> C = ngram_set(cand, n);
        std::map<Tokens, double> ref_fraction; // fraction of references with the gram
        std::set<Tokens> ref_union;
        for (const auto& ref : references) {
            for (const auto& g : ngram_set(eval_tokens(ref), n)) {
                ref_fraction[g] += 1.0 / nrefs;
                ref_union.insert(g);
            }
        }
        auto rho = [&](const Tokens& g) {
            auto it = ref_fraction.find(g);
            return it != ref_fraction.end() ? it->second : 0.0;
        };

        // KEEP: grams shared by candidate and source, weighted by reference support
        double keep_num = 0.0, keep_den_p = 0.0, keep_den_r = 0.0;
        for (const auto& g : S) {
            keep_den_r += rho(g);
            if (C.count(g)) {
                keep_num += rho(g);
                keep_den_p += 1.0;
            }
        }
        OpScore keep = op_score(keep_num, keep_den_p, keep_num, keep_den_r);

        // ADD: candidate grams not in the source, good if any reference has them
        double add_num = 0.0, add_den_p = 0.0, add_den_r = 0.0;
        for (const auto& g : C)
            if (!S.count(g)) {
                add_den_p += 1.0;
                if (ref_union.count(g)) add_num += 1.0;
            }
        for (const auto& g : ref_union)
            if (!S.count(g)) add_den_r += 1.0;
        OpScore add = op_score(add_num, add_den_p, add_num, add_den_r);

        // DELETE: source grams the candidate dropped, weighted by how much
        // the references dropped them; precision only
        double del_num = 0.0, del_den_p = 0.0, del_want = 0.0;
        for (const auto& g : S) {
            del_want += 1.0 - rho(g);
            if (!C.count(g)) {
                del_den_p += 1.0;
                del_num += 1.0 - rho(g);
            }
        }
        double del_precision = del_den_p > 0 ? del_num / del_den_p : (del_want == 0 ? 1.0 : 0.0);

        total += (f1(add.precision, add.recall) + f1(keep.precision, keep.recall) +
                  del_precision) / 3.0;
    }
    return 100.0 * total / 4.0;
}

double sari_corpus(const std::vector<EvalRecord>& records) {
    if (records.empty()) throw std::invalid_argument("sari: empty candidate set");
    double sum = 0.0;
    for (const auto& rec : records)
        sum += sari_single(rec.source, rec.candidate, rec.references);
    return sum / double(records.size());
}

// --- perplexity ---------------------------------------------------------

double perplexity(const std::vector<std::string>& texts, const LmScorer& scorer) {
    if (texts.empty()) throw std::invalid_argument("perplexity: empty corpus");
    double nll = 0.0;
    long tokens = 0;
    for (const auto& t : texts) {
        for (double lp : scorer.score(t)) {
            nll -= lp;
            ++tokens;
        }
    }
    if (tokens == 0) throw std::invalid_argument("perplexity: no tokens");
    return std::exp(nll / double(tokens));
}

// --- report ------------------------------------------------------------

ScoreReport evaluate_records(const std::vector<EvalRecord>& records, const LmScorer* scorer) {
    ScoreReport rep;
    rep.record_count = records.size();
    rep.bleu = bleu_corpus(records);
    rep.rouge1 = rouge_corpus(records, 1);
    rep.rouge2 = rouge_corpus(records, 2);
    rep.rouge_l = rouge_corpus(records, 0);
    rep.meteor = meteor_corpus(records);
    rep.sari = sari_corpus(records);
    if (scorer) {
        std::vector<std::string> cands;
        for (const auto& r : records) cands.push_back(r.candidate);
        rep.ppl = perplexity(cands, *scorer);
    }
    for (const auto& r : records) {
        std::map<std::string, double> row;
        row["rouge1"] = rouge_n_single(r.candidate, r.references, 1);
        row["rouge2"] = rouge_n_single(r.candidate, r.references, 2);
        row["rougeL"] = rouge_l_single(r.candidate, r.references);
        row["meteor"] = meteor_single(r.candidate, r.references);
        row["sari"] = sari_single(r.source, r.candidate, r.references);
        rep.per_record.push_back(std::move(row));
    }
    return rep;
}

void export_blind_rating_tsv(const std::vector<EvalRecord>& records, const std::string& tsv_path,
                             const std::string& key_path, uint64_t seed) {
    std::vector<size_t> order(records.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    for (size_t i = order.size(); i > 1; --i) {
        size_t j = rng.uniform(i);
        std::swap(order[i - 1], order[j]);
    }

    std::ofstream tsv(tsv_path);
    if (!tsv) throw std::runtime_error("cannot write " + tsv_path);
    tsv << "row\tsentence\tmeaning\ttarget\tfluency\toverall\n";
    for (size_t row = 0; row < order.size(); ++row)
        tsv << row << '\t' << records[order[row]].candidate << "\t\t\t\t\n";

    std::ofstream key(key_path);
    if (!key) throw std::runtime_error("cannot write " + key_path);
    for (size_t row = 0; row < order.size(); ++row) {
        nlohmann::ordered_json j;
        j["row"] = row;
        j["record"] = order[row];
        key << j.dump() << '\n';
    }
}

std::string ScoreReport::to_json() const {
    nlohmann::ordered_json j;
    j["settings"] = {{"tokenizer", "whitespace-punct"},
                     {"bleu_smoothing", "none"},
                     {"bleu_max_ngram", 4},
                     {"meteor_variant", "ex+stem"},
                     {"rouge_aggregation", "macro"},
                     {"sari_ngrams", "1-4 types"}};
    j["records"] = record_count;
    j["bleu"] = bleu;
    j["rouge1"] = rouge1;
    j["rouge2"] = rouge2;
    j["rougeL"] = rouge_l;
    j["meteor"] = meteor;
    j["sari"] = sari;
    if (ppl) j["ppl"] = *ppl;
    else j["ppl"] = nullptr;
    j["gruen"] = nullptr; // out of scope
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : per_record) rows.push_back(r);
    j["per_record"] = std::move(rows);
    return j.dump(2);
}

std::string ScoreReport::to_table(const std::string& row_label) const {
    std::ostringstream os;
    auto cell = [&os](const std::string& s, int w) {
        os << s;
        for (int i = static_cast<int>(s.size()); i < w; ++i) os << ' ';
    };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    cell("Model", 16);
    for (const char* h : {"BLEU", "ROUGE-1", "ROUGE-2", "ROUGE-L", "METEOR", "SARI", "GRUEN", "PPL"})
        cell(h, 9);
    os << '\n';
    cell(row_label, 16);
    cell(num(bleu), 9);
    cell(num(rouge1), 9);
    cell(num(rouge2), 9);
    cell(num(rouge_l), 9);
    cell(num(meteor * 100.0), 9);
    cell(num(sari), 9);
    cell("n/a", 9);
    cell(ppl ? num(*ppl) : "n/a", 9);
    os << '\n';
    return os.str();
}

} // namespace isp
