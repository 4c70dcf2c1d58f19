#include "ispkit/backends/table_lemmatizer.hpp"

#include <fstream>

#include "ispkit/core/tokenize.hpp"

namespace isp {

TableLemmatizer::TableLemmatizer(const std::string& table_tsv_path) {
    std::ifstream in(table_tsv_path);
    if (!in) throw BackendError("cannot open lemma table " + table_tsv_path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos) continue;
        add(line.substr(0, tab), line.substr(tab + 1));
    }
}

void TableLemmatizer::add(const std::string& word, const std::string& lemma) {
    table_[lowercase(word)] = lowercase(lemma);
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

std::string TableLemmatizer::lemma(const std::string& word) const {
    std::string w = lowercase(word);
    auto it = table_.find(w);
    if (it != table_.end()) return it->second;
    // plural stripping only; verb morphology goes through the table
    if (ends_with(w, "ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
    if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
    if (ends_with(w, "s") && w.size() > 3 && !ends_with(w, "ss") && !ends_with(w, "us") &&
        !ends_with(w, "is"))
        return w.substr(0, w.size() - 1);
    return w;
}

} // namespace isp
