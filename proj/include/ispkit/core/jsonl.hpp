#ifndef ISPKIT_CORE_JSONL_HPP
#define ISPKIT_CORE_JSONL_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ispkit/core/types.hpp"

namespace isp {

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One sentence plus one masked slot, with everything the definition-fusion
// model needs to reconstruct it.
struct MaskedRecord {
    std::string masked;        // sentence text with the mask token in place
    int mask_index = 0;        // token index of the mask
    std::string pos;           // POS tag of the original word at mask_index
    std::vector<std::string> definitions;
    std::string target;        // the uncorrupted sentence
};

// contiguous token-sequence containment (both sides already normalized)
bool contains_token_seq(const Tokens& haystack, const Tokens& needle);

using LemmaFn = std::function<std::string(const std::string&)>;

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Reports every violated ParallelPair invariant; never throws.
// When lemma is provided the idiom-in-literal check runs on lemmatized
// tokens, otherwise on lowercased surface tokens.
ValidationReport validate_pair(const ParallelPair& pair, const LemmaFn& lemma = nullptr);

// --- JSONL persistence -------------------------------------------------
//
// parallel:        {"idiomatic": str, "literal": str, "idiom": str,
//                   "span": [start, end], "source_tag": str}
// idiomatic-only:  {"idiomatic": str, "idiom": str, "span": [start, end]}
// masked-instance: {"masked": str, "mask_index": int, "pos": str,
//                   "definitions": [str...], "target": str}

std::vector<ParallelPair> load_parallel(const std::string& path);
std::vector<IdiomaticSentence> load_idiomatic_only(const std::string& path);
std::vector<MaskedRecord> load_masked_instances(const std::string& path);

size_t save_parallel(const std::vector<ParallelPair>& records, const std::string& path);
size_t save_idiomatic_only(const std::vector<IdiomaticSentence>& records, const std::string& path);
size_t save_masked_instances(const std::vector<MaskedRecord>& records, const std::string& path);

} // namespace isp

#endif
