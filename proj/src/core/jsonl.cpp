#include "ispkit/core/jsonl.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace isp {

using json = nlohmann::ordered_json;

namespace {

json parse_line(const std::string& path, size_t lineno, const std::string& line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw DatasetError(path + ":" + std::to_string(lineno) + ": not a JSON object");
    }
    return j;
}

[[noreturn]] void bad_field(const std::string& path, size_t lineno, const std::string& what) {
    throw DatasetError(path + ":" + std::to_string(lineno) + ": " + what);
}

std::string require_string(const json& j, const char* key,
                           const std::string& path, size_t lineno) {
    if (!j.contains(key)) bad_field(path, lineno, std::string("missing field \"") + key + "\"");
    if (!j[key].is_string()) bad_field(path, lineno, std::string("field \"") + key + "\" must be a string");
    return j[key].get<std::string>();
}

IdiomSpan require_span(const json& j, const std::string& path, size_t lineno,
                       size_t token_count) {
    if (!j.contains("span")) bad_field(path, lineno, "missing field \"span\"");
    const json& s = j["span"];
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
        bad_field(path, lineno, "field \"span\" must be [start, end]");
    long start = s[0].get<long>();
    long end = s[1].get<long>();
    if (start < 0 || end <= start)
        bad_field(path, lineno, "span must satisfy 0 <= start < end");
    if (static_cast<size_t>(end) > token_count)
        bad_field(path, lineno, "span.end " + std::to_string(end) + " exceeds token count " +
                                    std::to_string(token_count));
    return IdiomSpan{static_cast<size_t>(start), static_cast<size_t>(end)};
}

template <typename Record, typename ParseFn>
std::vector<Record> load_lines(const std::string& path, ParseFn parse) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open " + path);
    std::vector<Record> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        out.push_back(parse(parse_line(path, lineno, line), lineno));
    }
    return out;
}

template <typename Record, typename DumpFn>
size_t save_lines(const std::vector<Record>& records, const std::string& path, DumpFn dump) {
    std::ofstream out(path);
    if (!out) throw DatasetError("cannot write " + path);
    for (const auto& r : records) out << dump(r).dump() << '\n';
    out.flush();
    if (!out) throw DatasetError("write failed for " + path);
    return records.size();
}

} // namespace

bool contains_token_seq(const Tokens& haystack, const Tokens& needle) {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    for (size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool hit = true;
        for (size_t k = 0; k < needle.size(); ++k) {
            if (haystack[i + k] != needle[k]) {
                hit = false;
                break;
            }
        }
        if (hit) return true;
    }
    return false;
}

ValidationReport validate_pair(const ParallelPair& pair, const LemmaFn& lemma) {
    ValidationReport report;
    auto flag = [&](const char* code) { report.violations.push_back(code); };

    if (pair.idiomatic.text.empty() || pair.idiomatic.tokens.empty()) flag("empty-idiomatic");
    if (pair.literal.text.empty() || pair.literal.tokens.empty()) flag("empty-literal");
    if (pair.idiom.empty()) flag("empty-idiom");

    if (!pair.idiomatic.span.valid() || pair.idiomatic.span.end > pair.idiomatic.tokens.size()) {
        flag("span-out-of-range");
    } else if (!pair.idiom.empty()) {
        auto map_tokens = [&](const Tokens& toks) {
            Tokens out;
            out.reserve(toks.size());
            for (const auto& t : toks) out.push_back(lemma ? lemma(lowercase(t)) : lowercase(t));
            return out;
        };
        Tokens surface(pair.idiomatic.tokens.begin() + static_cast<long>(pair.idiomatic.span.start),
                       pair.idiomatic.tokens.begin() + static_cast<long>(pair.idiomatic.span.end));
        Tokens idiom_toks = tokenize(lowercase(pair.idiom));
        bool surface_match = lowercase(surface) == idiom_toks;
        bool lemma_match = map_tokens(surface) == map_tokens(idiom_toks);
        if (!surface_match && !lemma_match) flag("idiom-span-mismatch");

        if (!pair.literal.tokens.empty() &&
            contains_token_seq(map_tokens(pair.literal.tokens), map_tokens(idiom_toks))) {
            flag("idiom-in-literal");
        }
    }
    return report;
}

std::vector<ParallelPair> load_parallel(const std::string& path) {
    return load_lines<ParallelPair>(path, [&](const json& j, size_t lineno) {
        ParallelPair p;
        std::string idiomatic = require_string(j, "idiomatic", path, lineno);
        std::string literal = require_string(j, "literal", path, lineno);
        p.idiom = require_string(j, "idiom", path, lineno);
        std::string tag = require_string(j, "source_tag", path, lineno);
        Tokens toks = tokenize(idiomatic);
        IdiomSpan span = require_span(j, path, lineno, toks.size());
        p.idiomatic = IdiomaticSentence::make(idiomatic, span, lowercase(p.idiom));
        p.literal = LiteralSentence::make(literal);
        try {
            p.source_tag = SourceTag::parse(tag);
        } catch (const std::exception&) {
            bad_field(path, lineno, "unknown source_tag \"" + tag + "\"");
        }
        return p;
    });
}

std::vector<IdiomaticSentence> load_idiomatic_only(const std::string& path) {
    return load_lines<IdiomaticSentence>(path, [&](const json& j, size_t lineno) {
        std::string text = require_string(j, "idiomatic", path, lineno);
        std::string idiom = require_string(j, "idiom", path, lineno);
        Tokens toks = tokenize(text);
        IdiomSpan span = require_span(j, path, lineno, toks.size());
        return IdiomaticSentence::make(text, span, lowercase(idiom));
    });
}

std::vector<MaskedRecord> load_masked_instances(const std::string& path) {
    return load_lines<MaskedRecord>(path, [&](const json& j, size_t lineno) {
        MaskedRecord r;
        r.masked = require_string(j, "masked", path, lineno);
        if (!j.contains("mask_index") || !j["mask_index"].is_number_integer())
            bad_field(path, lineno, "field \"mask_index\" must be an integer");
        r.mask_index = j["mask_index"].get<int>();
        r.pos = require_string(j, "pos", path, lineno);
        if (!j.contains("definitions") || !j["definitions"].is_array())
            bad_field(path, lineno, "field \"definitions\" must be an array");
        for (const auto& d : j["definitions"]) {
            if (!d.is_string()) bad_field(path, lineno, "definitions must be strings");
            r.definitions.push_back(d.get<std::string>());
        }
        r.target = require_string(j, "target", path, lineno);
        size_t ntokens = tokenize(r.masked).size();
        if (r.mask_index < 0 || static_cast<size_t>(r.mask_index) >= ntokens)
            bad_field(path, lineno, "mask_index out of range");
        return r;
    });
}

size_t save_parallel(const std::vector<ParallelPair>& records, const std::string& path) {
    return save_lines(records, path, [](const ParallelPair& p) {
        json j;
        j["idiomatic"] = p.idiomatic.text;
        j["literal"] = p.literal.text;
        j["idiom"] = p.idiom;
        j["span"] = {p.idiomatic.span.start, p.idiomatic.span.end};
        j["source_tag"] = p.source_tag.str();
        return j;
    });
}

size_t save_idiomatic_only(const std::vector<IdiomaticSentence>& records, const std::string& path) {
    return save_lines(records, path, [](const IdiomaticSentence& s) {
        json j;
        j["idiomatic"] = s.text;
        j["idiom"] = s.idiom_lemma.empty() ? lowercase(s.surface_idiom()) : s.idiom_lemma;
        j["span"] = {s.span.start, s.span.end};
        return j;
    });
}

size_t save_masked_instances(const std::vector<MaskedRecord>& records, const std::string& path) {
    return save_lines(records, path, [](const MaskedRecord& r) {
        json j;
        j["masked"] = r.masked;
        j["mask_index"] = r.mask_index;
        j["pos"] = r.pos;
        j["definitions"] = r.definitions;
        j["target"] = r.target;
        return j;
    });
}

} // namespace isp
