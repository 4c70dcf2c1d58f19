#ifndef ISPKIT_CORPUS_CORPUS_HPP
#define ISPKIT_CORPUS_CORPUS_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>

#include "ispkit/backends/interfaces.hpp"
#include "ispkit/core/jsonl.hpp"
#include "ispkit/core/rng.hpp"
#include "ispkit/dict/dictionary.hpp"

namespace isp {

struct CorruptionFlags {
    bool stopwords_dropped = false;
    bool lemmatized = false;
};

class StopwordList {
public:
    StopwordList() = default;
    explicit StopwordList(const std::string& path);

    void add(const std::string& word);
    bool contains(const std::string& word) const;
    size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

// a masked training unit before serialization; flags are bookkeeping only
struct MaskedInstance {
    Tokens masked_tokens;
    int mask_index = 0;
    std::string pos;
    std::vector<std::string> definitions;
    std::string target_text;
    CorruptionFlags flags;

    MaskedRecord to_record() const;
};

// indices whose tag is VERB, ADJ or ADV
std::vector<size_t> select_maskable_words(const Tokens& tokens,
                                          const std::vector<std::string>& tags);

// Two independent sentence-level draws: with probability p_stop all stop
// words are removed, with probability p_lemma all remaining tokens are
// lemmatized. The mask token is never removed or lemmatized.
std::pair<Tokens, CorruptionFlags> corrupt(const Tokens& tokens, Rng& rng, double p_stop,
                                           double p_lemma, const StopwordList& stopwords,
                                           const Lemmatizer& lemmatizer,
                                           const std::string& mask_token = "MASK");

struct BuildConfig {
    double p_stop = 0.8;
    double p_lemma = 0.4;
    std::string mask_token = "MASK";
};

// nullopt = skipped (no definition found); invalid mask_index throws
std::optional<MaskedInstance> build_instance(const std::string& sentence, size_t mask_index,
                                             const DictClient& dict, const PosTagger& tagger,
                                             const Lemmatizer& lemmatizer,
                                             const StopwordList& stopwords, Rng& rng,
                                             const BuildConfig& cfg = {});

struct CorpusStats {
    size_t sentences = 0;
    size_t instances = 0;
    size_t skipped_no_candidate = 0;
    size_t skipped_no_definition = 0;
    size_t stop_dropped = 0;
    size_t lemmatized = 0;
    size_t both_corruptions = 0;
    std::map<std::string, size_t> masked_word_counts;
    std::set<std::string> tags_seen;

    size_t unique_masked_words() const { return masked_word_counts.size(); }
    std::string to_json_string() const;
};

// One instance per usable sentence, mask chosen uniformly among candidates.
// Deterministic in (config, seed): sentence i uses the rng stream fork(i).
CorpusStats build_corpus(const std::vector<std::string>& sentences, const std::string& out_path,
                         const DictClient& dict, const PosTagger& tagger,
                         const Lemmatizer& lemmatizer, const StopwordList& stopwords,
                         uint64_t seed, const BuildConfig& cfg = {});

} // namespace isp

#endif
