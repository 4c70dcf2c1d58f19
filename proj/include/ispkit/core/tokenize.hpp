#ifndef ISPKIT_CORE_TOKENIZE_HPP
#define ISPKIT_CORE_TOKENIZE_HPP

#include <string>
#include <vector>

namespace isp {

using Tokens = std::vector<std::string>;

// Domain-level tokenizer: whitespace split plus leading/trailing punctuation
// peeled into separate tokens. Word-internal apostrophes and hyphens stay put,
// so "won't" and "so-called" are single tokens. Model backends run their own
// subword machinery behind this.
Tokens tokenize(const std::string& text);

// join with single spaces; the canonical surface form of a token sequence
std::string detokenize(const Tokens& tokens);

std::string lowercase(const std::string& s);
Tokens lowercase(const Tokens& tokens);

// lowercase, collapse runs of whitespace, strip terminal punctuation
std::string normalize_for_compare(const std::string& text);

bool is_punctuation_token(const std::string& tok);

} // namespace isp

#endif
