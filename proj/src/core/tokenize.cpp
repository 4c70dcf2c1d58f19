#include "ispkit/core/tokenize.hpp"

#include <algorithm>
#include <cctype>

namespace isp {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_punct_char(char c) {
    switch (c) {
        case '.': case ',': case '!': case '?': case ';': case ':':
        case '"': case '(': case ')': case '[': case ']': case '{': case '}':
        case '<': case '>': case '/': case '\\': case '|': case '~':
        case '*': case '&': case '%': case '$': case '#': case '@':
        case '`': case '^': case '+': case '=':
            return true;
        default:
            return false;
    }
}

void split_word(const std::string& w, Tokens& out) {
    size_t begin = 0;
    size_t end = w.size();
    size_t lead = begin;
    while (lead < end && is_punct_char(w[lead])) ++lead;
    size_t trail = end;
    while (trail > lead && is_punct_char(w[trail - 1])) --trail;
    for (size_t i = begin; i < lead; ++i) out.push_back(std::string(1, w[i]));
    if (trail > lead) out.push_back(w.substr(lead, trail - lead));
    for (size_t i = trail; i < end; ++i) out.push_back(std::string(1, w[i]));
}

} // namespace

Tokens tokenize(const std::string& text) {
    Tokens out;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        while (i < n && is_space(text[i])) ++i;
        size_t j = i;
        while (j < n && !is_space(text[j])) ++j;
        if (j > i) split_word(text.substr(i, j - i), out);
        i = j;
    }
    return out;
}

std::string detokenize(const Tokens& tokens) {
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

std::string lowercase(const std::string& s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

Tokens lowercase(const Tokens& tokens) {
    Tokens out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(lowercase(t));
    return out;
}

bool is_punctuation_token(const std::string& tok) {
    return tok.size() == 1 && is_punct_char(tok[0]);
}

std::string normalize_for_compare(const std::string& text) {
    Tokens toks = tokenize(lowercase(text));
    while (!toks.empty() && is_punctuation_token(toks.back())) toks.pop_back();
    return detokenize(toks);
}

} // namespace isp
