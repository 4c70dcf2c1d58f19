#include "ispkit/backends/lexicon_tagger.hpp"

#include <cctype>
#include <fstream>

#include "ispkit/core/tokenize.hpp"

namespace isp {

const std::vector<std::string>& PosTagger::universal_tagset() {
    static const std::vector<std::string> tags = {
        "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
        "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};
    return tags;
}

LexiconTagger::LexiconTagger(const std::string& lexicon_tsv_path) {
    std::ifstream in(lexicon_tsv_path);
    if (!in) throw BackendError("cannot open tagger lexicon " + lexicon_tsv_path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos) continue;
        add(line.substr(0, tab), line.substr(tab + 1));
    }
}

void LexiconTagger::add(const std::string& word, const std::string& tag) {
    lexicon_[lowercase(word)] = tag;
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (unsigned char c : s)
        if (!std::isdigit(c)) return false;
    return true;
}

std::string suffix_guess(const std::string& w) {
    if (ends_with(w, "ly")) return "ADV";
    if (ends_with(w, "ing") || ends_with(w, "ed") || ends_with(w, "ize") || ends_with(w, "ise"))
        return "VERB";
    if (ends_with(w, "ous") || ends_with(w, "ful") || ends_with(w, "ive") ||
        ends_with(w, "able") || ends_with(w, "ible") || ends_with(w, "al") || ends_with(w, "ish"))
        return "ADJ";
    return "NOUN";
}

} // namespace

std::vector<std::string> LexiconTagger::tag(const Tokens& tokens) const {
    if (tokens.empty()) throw BackendError("tag: empty token list");
    std::vector<std::string> tags;
    tags.reserve(tokens.size());
    for (const auto& tok : tokens) {
        if (is_punctuation_token(tok)) {
            tags.push_back("PUNCT");
            continue;
        }
        if (all_digits(tok)) {
            tags.push_back("NUM");
            continue;
        }
        auto it = lexicon_.find(lowercase(tok));
        tags.push_back(it != lexicon_.end() ? it->second : suffix_guess(lowercase(tok)));
    }
    return tags;
}

} // namespace isp
