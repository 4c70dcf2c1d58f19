#include "ispkit/corpus/corpus.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace isp {

StopwordList::StopwordList(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stopword list " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        add(line);
    }
}

void StopwordList::add(const std::string& word) { words_.insert(lowercase(word)); }

bool StopwordList::contains(const std::string& word) const {
    return words_.count(lowercase(word)) > 0;
}

MaskedRecord MaskedInstance::to_record() const {
    MaskedRecord r;
    r.masked = detokenize(masked_tokens);
    r.mask_index = mask_index;
    r.pos = pos;
    r.definitions = definitions;
    r.target = target_text;
    return r;
}

std::vector<size_t> select_maskable_words(const Tokens& tokens,
                                          const std::vector<std::string>& tags) {
    if (tokens.size() != tags.size())
        throw std::invalid_argument("select_maskable_words: tokens/tags length mismatch");
    std::vector<size_t> out;
    for (size_t i = 0; i < tags.size(); ++i)
        if (tags[i] == "VERB" || tags[i] == "ADJ" || tags[i] == "ADV") out.push_back(i);
    return out;
}

std::pair<Tokens, CorruptionFlags> corrupt(const Tokens& tokens, Rng& rng, double p_stop,
                                           double p_lemma, const StopwordList& stopwords,
                                           const Lemmatizer& lemmatizer,
                                           const std::string& mask_token) {
    if (p_stop < 0 || p_stop > 1 || p_lemma < 0 || p_lemma > 1)
        throw std::invalid_argument("corrupt: probability out of [0,1]");
    CorruptionFlags flags;
    flags.stopwords_dropped = rng.bernoulli(p_stop);
    flags.lemmatized = rng.bernoulli(p_lemma);

    Tokens out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) {
        if (tok == mask_token) {
            out.push_back(tok);
            continue;
        }
        if (flags.stopwords_dropped && stopwords.contains(tok)) continue;
        out.push_back(flags.lemmatized ? lemmatizer.lemma(tok) : tok);
    }
    return {out, flags};
}

std::optional<MaskedInstance> build_instance(const std::string& sentence, size_t mask_index,
                                             const DictClient& dict, const PosTagger& tagger,
                                             const Lemmatizer& lemmatizer,
                                             const StopwordList& stopwords, Rng& rng,
                                             const BuildConfig& cfg) {
    Tokens tokens = tokenize(sentence);
    if (tokens.empty()) throw std::invalid_argument("build_instance: empty sentence");
    std::vector<std::string> tags = tagger.tag(tokens);
    std::vector<size_t> candidates = select_maskable_words(tokens, tags);
    bool ok = false;
    for (size_t c : candidates) ok = ok || c == mask_index;
    if (!ok)
        throw std::invalid_argument("build_instance: mask_index " + std::to_string(mask_index) +
                                    " is not a maskable word");

    const std::string& word = tokens[mask_index];
    std::string lemma = lemmatizer.lemma(word);

    std::vector<Definition> defs;
    try {
        defs = dict.lookup(lemma, tags[mask_index]);
    } catch (const DictNotFound&) {
        return std::nullopt;
    }

    Tokens masked = tokens;
    masked[mask_index] = cfg.mask_token;
    auto [corrupted, flags] = corrupt(masked, rng, cfg.p_stop, cfg.p_lemma, stopwords,
                                      lemmatizer, cfg.mask_token);

    MaskedInstance inst;
    inst.masked_tokens = std::move(corrupted);
    inst.mask_index = 0;
    for (size_t i = 0; i < inst.masked_tokens.size(); ++i) {
        if (inst.masked_tokens[i] == cfg.mask_token) {
            inst.mask_index = static_cast<int>(i);
            break;
        }
    }
    inst.pos = tags[mask_index];
    for (const auto& d : defs) inst.definitions.push_back(d.gloss);
    inst.target_text = sentence;
    inst.flags = flags;
    return inst;
}

std::string CorpusStats::to_json_string() const {
    nlohmann::ordered_json j;
    j["sentences"] = sentences;
    j["instances"] = instances;
    j["skipped_no_candidate"] = skipped_no_candidate;
    j["skipped_no_definition"] = skipped_no_definition;
    j["unique_masked_words"] = unique_masked_words();
    j["unique_tags"] = tags_seen.size();
    j["stop_dropped"] = stop_dropped;
    j["lemmatized"] = lemmatized;
    j["both_corruptions"] = both_corruptions;
    return j.dump(2);
}

CorpusStats build_corpus(const std::vector<std::string>& sentences, const std::string& out_path,
                         const DictClient& dict, const PosTagger& tagger,
                         const Lemmatizer& lemmatizer, const StopwordList& stopwords,
                         uint64_t seed, const BuildConfig& cfg) {
    CorpusStats stats;
    std::vector<MaskedRecord> records;
    Rng master(seed);

    for (size_t line = 0; line < sentences.size(); ++line) {
        const std::string& sentence = sentences[line];
        ++stats.sentences;
        Tokens tokens = tokenize(sentence);
        if (tokens.empty()) {
            ++stats.skipped_no_candidate;
            continue;
        }
        std::vector<std::string> tags = tagger.tag(tokens);
        std::vector<size_t> candidates = select_maskable_words(tokens, tags);
        if (candidates.empty()) {
            ++stats.skipped_no_candidate;
            continue;
        }
        Rng rng = master.fork(line);
        size_t mask_index = candidates[rng.uniform(candidates.size())];
        auto inst = build_instance(sentence, mask_index, dict, tagger, lemmatizer, stopwords,
                                   rng, cfg);
        if (!inst) {
            ++stats.skipped_no_definition;
            continue;
        }
        ++stats.instances;
        if (inst->flags.stopwords_dropped) ++stats.stop_dropped;
        if (inst->flags.lemmatized) ++stats.lemmatized;
        if (inst->flags.stopwords_dropped && inst->flags.lemmatized) ++stats.both_corruptions;
        ++stats.masked_word_counts[lowercase(tokens[mask_index])];
        stats.tags_seen.insert(inst->pos);
        records.push_back(inst->to_record());
    }
    save_masked_instances(records, out_path);
    return stats;
}

} // namespace isp
