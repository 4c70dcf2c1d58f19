#ifndef ISPKIT_METRICS_STEMMER_HPP
#define ISPKIT_METRICS_STEMMER_HPP

#include <string>

namespace isp {

// Small deterministic suffix stemmer for the METEOR stem stage.
// Not a full Porter stemmer; rules are fixed so scores are reproducible.
std::string stem(const std::string& word);

} // namespace isp

#endif
