#include "ispkit/metrics/stemmer.hpp"

#include "ispkit/core/tokenize.hpp"

namespace isp {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

std::string stem(const std::string& word) {
    std::string w = lowercase(word);
    if (w.size() <= 3) return w;
    if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
    if (ends_with(w, "ies")) return w.substr(0, w.size() - 2);
    if (ends_with(w, "ing") && w.size() > 5) return w.substr(0, w.size() - 3);
    if (ends_with(w, "ed") && w.size() > 4) return w.substr(0, w.size() - 2);
    if (ends_with(w, "ly") && w.size() > 4) return w.substr(0, w.size() - 2);
    if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us")) return w.substr(0, w.size() - 1);
    return w;
}

} // namespace isp
