#ifndef ISPKIT_BACKENDS_LEXICON_TAGGER_HPP
#define ISPKIT_BACKENDS_LEXICON_TAGGER_HPP

#include <unordered_map>

#include "ispkit/backends/interfaces.hpp"

namespace isp {

// Lexicon-plus-suffix tagger over the 17-tag universal POS set.
// The lexicon is a bundled TSV fixture (word<TAB>TAG); suffix rules and a
// NOUN default cover the rest.
class LexiconTagger : public PosTagger {
public:
    LexiconTagger() = default;
    explicit LexiconTagger(const std::string& lexicon_tsv_path);

    void add(const std::string& word, const std::string& tag);

    std::vector<std::string> tag(const Tokens& tokens) const override;

    size_t lexicon_size() const { return lexicon_.size(); }

private:
    std::unordered_map<std::string, std::string> lexicon_;
};

} // namespace isp

#endif
