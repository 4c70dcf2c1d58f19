#ifndef ISPKIT_BACKENDS_TABLE_LEMMATIZER_HPP
#define ISPKIT_BACKENDS_TABLE_LEMMATIZER_HPP

#include <unordered_map>

#include "ispkit/backends/interfaces.hpp"

namespace isp {

// Table-driven lemmatizer (word<TAB>lemma fixture) with conservative
// plural-stripping fallback. All inputs are lowercased first.
class TableLemmatizer : public Lemmatizer {
public:
    TableLemmatizer() = default;
    explicit TableLemmatizer(const std::string& table_tsv_path);

    void add(const std::string& word, const std::string& lemma);
    std::string lemma(const std::string& word) const override;

    size_t table_size() const { return table_.size(); }

private:
    std::unordered_map<std::string, std::string> table_;
};

} // namespace isp

#endif
