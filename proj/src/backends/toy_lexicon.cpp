#include "ispkit/backends/toy_lexicon.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "ispkit/core/rng.hpp"

namespace isp {

ToyLexiconBackend::ToyLexiconBackend(Table table, double error_rate, uint64_t seed)
    : table_(std::move(table)), error_rate_(error_rate), seed_(seed) {
    sort_table();
}

void ToyLexiconBackend::sort_table() {
    std::sort(table_.begin(), table_.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
        return a.first < b.first;
    });
}

Tokens ToyLexiconBackend::apply_rules(const Tokens& input) const {
    Tokens lowered = lowercase(input);
    Tokens out;
    size_t i = 0;
    while (i < input.size()) {
        const std::pair<Tokens, Tokens>* hit = nullptr;
        for (const auto& entry : table_) {
            const Tokens& src = entry.first;
            if (src.empty() || i + src.size() > input.size()) continue;
            bool match = true;
            for (size_t k = 0; k < src.size(); ++k) {
                if (lowered[i + k] != src[k]) {
                    match = false;
                    break;
                }
            }
            if (match) {
                hit = &entry;
                break;
            }
        }
        if (hit) {
            for (const auto& t : hit->second) out.push_back(t);
            i += hit->first.size();
        } else {
            out.push_back(input[i]);
            ++i;
        }
    }
    return out;
}

std::string ToyLexiconBackend::generate(const Tokens& input, const DecodeParams& decode,
                                        uint64_t seed) const {
    if (static_cast<int>(input.size()) > decode.max_len)
        throw BackendError("input longer than max_len");
    Rng rng(mix_seed(mix_seed(seed_, seed), fnv1a(detokenize(input))));
    if (error_rate_ > 0.0 && rng.bernoulli(error_rate_)) {
        // two failure modes seen in real back-translation output:
        // the phrase is left untouched, or the sentence is mangled
        if (rng.uniform(2) == 0) return detokenize(input);
        Tokens mangled = apply_rules(input);
        mangled.push_back("indeed");
        return detokenize(mangled);
    }
    return detokenize(apply_rules(input));
}

std::vector<double> ToyLexiconBackend::fine_tune(
    const std::vector<std::pair<std::string, std::string>>& pairs, const Hyperparams& hp) {
    (void)hp;
    if (pairs.empty()) throw BackendError("fine_tune: empty pair list");

    auto mismatch_rate = [&]() {
        size_t bad = 0;
        for (const auto& [src, dst] : pairs) {
            if (detokenize(apply_rules(tokenize(src))) != detokenize(tokenize(dst))) ++bad;
        }
        return double(bad) / double(pairs.size());
    };

    double initial = mismatch_rate();

    // learn one phrase substitution per pair from the longest-common
    // prefix/suffix diff, then keep the majority mapping per source phrase
    std::map<Tokens, std::map<Tokens, int>> votes;
    for (const auto& [src_text, dst_text] : pairs) {
        Tokens src = lowercase(tokenize(src_text));
        Tokens dst = lowercase(tokenize(dst_text));
        size_t p = 0;
        while (p < src.size() && p < dst.size() && src[p] == dst[p]) ++p;
        size_t s = 0;
        while (s < src.size() - p && s < dst.size() - p &&
               src[src.size() - 1 - s] == dst[dst.size() - 1 - s])
            ++s;
        Tokens from(src.begin() + static_cast<long>(p), src.end() - static_cast<long>(s));
        Tokens to(dst.begin() + static_cast<long>(p), dst.end() - static_cast<long>(s));
        if (from.empty()) continue; // identical sentences teach nothing
        votes[from][to] += 1;
    }

    Table learned;
    for (const auto& [from, candidates] : votes) {
        const Tokens* best = nullptr;
        int best_count = -1;
        for (const auto& [to, count] : candidates) {
            if (count > best_count) {
                best = &to;
                best_count = count;
            }
        }
        learned.emplace_back(from, *best);
    }
    table_ = std::move(learned);
    sort_table();

    return {initial, mismatch_rate()};
}

void ToyLexiconBackend::save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    nlohmann::ordered_json j;
    j["backend"] = name();
    j["error_rate"] = error_rate_;
    j["seed"] = seed_;
    nlohmann::ordered_json rules = nlohmann::ordered_json::array();
    for (const auto& [src, dst] : table_) {
        rules.push_back({{"from", detokenize(src)}, {"to", detokenize(dst)}});
    }
    j["table"] = rules;
    std::ofstream out(dir + "/lexicon.json");
    if (!out) throw BackendError("cannot write " + dir + "/lexicon.json");
    out << j.dump(2) << '\n';
}

void ToyLexiconBackend::load(const std::string& dir) {
    std::ifstream in(dir + "/lexicon.json");
    if (!in) throw BackendError("cannot open " + dir + "/lexicon.json");
    nlohmann::json j = nlohmann::json::parse(in);
    error_rate_ = j.at("error_rate").get<double>();
    seed_ = j.at("seed").get<uint64_t>();
    table_.clear();
    for (const auto& rule : j.at("table")) {
        table_.emplace_back(tokenize(rule.at("from").get<std::string>()),
                            tokenize(rule.at("to").get<std::string>()));
    }
    sort_table();
}

} // namespace isp
