#include "ispkit/dict/dictionary.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "ispkit/core/rng.hpp"
#include "ispkit/core/tokenize.hpp"

namespace isp {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// --- FixtureSource ----------------------------------------------------

FixtureSource::FixtureSource(const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) throw std::runtime_error("cannot open dictionary fixture " + json_path);
    nlohmann::json j = nlohmann::json::parse(in);
    name_ = j.at("name").get<std::string>();
    pos_filter_ = j.value("pos_filter", false);
    for (const auto& [lemma, defs] : j.at("entries").items()) {
        for (const auto& d : defs) {
            std::optional<std::string> pos;
            if (d.contains("pos") && d["pos"].is_string()) pos = d["pos"].get<std::string>();
            add(lemma, d.at("gloss").get<std::string>(), pos);
        }
    }
}

FixtureSource::FixtureSource(std::string name, bool pos_filter)
    : name_(std::move(name)), pos_filter_(pos_filter) {}

void FixtureSource::add(const std::string& lemma, const std::string& gloss,
                        const std::optional<std::string>& pos) {
    entries_[lowercase(lemma)].push_back(Definition{gloss, name_, pos});
}

std::vector<Definition> FixtureSource::lookup(const std::string& lemma,
                                              const std::optional<std::string>& pos) const {
    auto it = entries_.find(lowercase(lemma));
    if (it == entries_.end()) return {};
    if (!pos_filter_ || !pos) return it->second;
    std::vector<Definition> filtered;
    for (const auto& d : it->second)
        if (!d.pos || *d.pos == *pos) filtered.push_back(d);
    // a POS with no senses falls back to every sense; the fusion attention
    // is responsible for sense selection
    return filtered.empty() ? it->second : filtered;
}

// --- IdiomLexiconSource -------------------------------------------------

IdiomLexiconSource::IdiomLexiconSource(const std::string& jsonl_path) {
    std::ifstream in(jsonl_path);
    if (!in) throw std::runtime_error("cannot open idiom lexicon " + jsonl_path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("idiom") || !j.contains("glosses"))
            throw std::runtime_error(jsonl_path + ":" + std::to_string(lineno) +
                                     ": expected {\"idiom\", \"glosses\"}");
        std::vector<std::string> glosses;
        for (const auto& g : j["glosses"]) glosses.push_back(g.get<std::string>());
        add(j["idiom"].get<std::string>(), glosses);
    }
}

void IdiomLexiconSource::add(const std::string& idiom, const std::vector<std::string>& glosses) {
    auto& slot = entries_[lowercase(idiom)];
    slot.insert(slot.end(), glosses.begin(), glosses.end());
}

std::vector<Definition> IdiomLexiconSource::lookup(const std::string& lemma,
                                                   const std::optional<std::string>&) const {
    auto it = entries_.find(lowercase(lemma));
    if (it == entries_.end()) return {};
    std::vector<Definition> out;
    for (const auto& g : it->second) out.push_back(Definition{g, name(), std::nullopt});
    return out;
}

// --- HttpSource -----------------------------------------------------------

HttpSource::HttpSource(std::string name, std::string host, std::string path_template,
                       int timeout_ms, bool enabled)
    : name_(std::move(name)), host_(std::move(host)), path_template_(std::move(path_template)),
      timeout_ms_(timeout_ms), enabled_(enabled) {}

bool HttpSource::available() const { return enabled_ && !failed_; }

std::vector<Definition> HttpSource::lookup(const std::string& lemma,
                                           const std::optional<std::string>&) const {
    if (!available()) return {};
    std::string path = path_template_;
    const std::string placeholder = "{word}";
    if (auto at = path.find(placeholder); at != std::string::npos)
        path.replace(at, placeholder.size(), lemma);

    httplib::Client client(host_);
    client.set_connection_timeout(0, timeout_ms_ * 1000);
    client.set_read_timeout(0, timeout_ms_ * 1000);
    auto res = client.Get(path);
    if (!res || res->status != 200) {
        failed_ = true; // fall through to the next source from now on
        return {};
    }
    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded()) return {};
    std::vector<Definition> out;
    const nlohmann::json& arr = j.is_object() && j.contains("glosses") ? j["glosses"] : j;
    if (arr.is_array())
        for (const auto& g : arr)
            if (g.is_string()) out.push_back(Definition{g.get<std::string>(), name_, std::nullopt});
    return out;
}

// --- DictClient -----------------------------------------------------------

DictClient::DictClient(std::vector<std::shared_ptr<DictSource>> sources, std::string cache_dir,
                       uint64_t seed, size_t max_definitions)
    : sources_(std::move(sources)), cache_dir_(std::move(cache_dir)), seed_(seed),
      max_definitions_(max_definitions) {
    if (sources_.empty()) throw std::invalid_argument("DictClient needs at least one source");
}

void DictClient::clear_memory_cache() const {
    std::lock_guard<std::mutex> lock(mutex_);
    memory_.clear();
}

std::string DictClient::cache_file(const std::string& source, const std::string& lemma) const {
    std::string shard = lemma.substr(0, std::min<size_t>(2, lemma.size()));
    std::string safe;
    for (char c : shard) safe += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    if (safe.empty()) safe = "_";
    return cache_dir_ + "/" + source + "." + safe + ".json";
}

std::vector<Definition> DictClient::source_defs(const DictSource& src, const std::string& lemma,
                                                const std::optional<std::string>& pos) const {
    std::string key = lemma + "\x1f" + (pos ? *pos : "*");
    std::string mem_key = src.name() + "\x1f" + key;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (auto it = memory_.find(mem_key); it != memory_.end()) {
            ++counters_.cache_hits;
            return it->second;
        }
    }

    json shard;
    std::string file;
    if (!cache_dir_.empty()) {
        file = cache_file(src.name(), lemma);
        std::ifstream in(file);
        if (in) {
            shard = json::parse(in, nullptr, false);
            if (shard.is_discarded()) shard = json::object();
            if (shard.contains(key)) {
                std::vector<Definition> defs;
                for (const auto& d : shard[key]) {
                    std::optional<std::string> dpos;
                    if (d.contains("pos") && d["pos"].is_string())
                        dpos = d["pos"].get<std::string>();
                    defs.push_back(Definition{d.at("gloss").get<std::string>(), src.name(), dpos});
                }
                std::lock_guard<std::mutex> lock(mutex_);
                ++counters_.cache_hits;
                memory_[mem_key] = defs;
                return defs;
            }
        }
        if (!shard.is_object()) shard = json::object();
    }

    std::vector<Definition> defs = src.lookup(lemma, pos);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        ++counters_.source_queries;
        memory_[mem_key] = defs;
    }

    if (!cache_dir_.empty()) {
        fs::create_directories(cache_dir_);
        json arr = json::array();
        for (const auto& d : defs) {
            json item;
            item["gloss"] = d.gloss;
            if (d.pos) item["pos"] = *d.pos;
            arr.push_back(std::move(item));
        }
        shard[key] = std::move(arr);
        // write-temp-then-rename keeps concurrent readers consistent
        std::string tmp = file + ".tmp";
        {
            std::ofstream out(tmp);
            out << shard.dump();
        }
        fs::rename(tmp, file);
    }
    return defs;
}

std::vector<Definition> DictClient::lookup(const std::string& lemma,
                                           const std::optional<std::string>& pos) const {
    if (lemma.empty()) throw std::invalid_argument("lookup: empty lemma");
    {
        std::lock_guard<std::mutex> lock(mutex_);
        ++counters_.lookups;
    }

    std::vector<std::pair<size_t, std::vector<Definition>>> holders;
    for (size_t i = 0; i < sources_.size(); ++i) {
        const DictSource& src = *sources_[i];
        if (src.name() == "local-idiom-lexicon") continue;
        if (!src.available()) continue;
        auto defs = source_defs(src, lowercase(lemma), pos);
        if (!defs.empty()) holders.emplace_back(i, std::move(defs));
    }
    if (holders.empty()) throw DictNotFound("no source has an entry for \"" + lemma + "\"");

    // uniform over sources holding the entry, pure in (seed, lemma, pos)
    Rng rng(mix_seed(seed_, fnv1a(lowercase(lemma) + "\x1f" + (pos ? *pos : "*"))));
    auto& picked = holders[rng.uniform(holders.size())].second;
    if (picked.size() > max_definitions_) picked.resize(max_definitions_);
    return picked;
}

std::vector<Definition> DictClient::lookup_idiom(const std::string& idiom_lemma) const {
    if (idiom_lemma.empty()) throw std::invalid_argument("lookup_idiom: empty idiom");
    {
        std::lock_guard<std::mutex> lock(mutex_);
        ++counters_.lookups;
    }

    std::vector<std::pair<size_t, std::vector<Definition>>> holders;
    const DictSource* idiom_lexicon = nullptr;
    for (size_t i = 0; i < sources_.size(); ++i) {
        const DictSource& src = *sources_[i];
        if (src.name() == "local-idiom-lexicon") {
            idiom_lexicon = &src;
            continue;
        }
        if (!src.available()) continue;
        auto defs = source_defs(src, lowercase(idiom_lemma), std::nullopt);
        if (!defs.empty()) holders.emplace_back(i, std::move(defs));
    }
    if (!holders.empty()) {
        Rng rng(mix_seed(seed_, fnv1a("idiom\x1f" + lowercase(idiom_lemma))));
        auto& picked = holders[rng.uniform(holders.size())].second;
        if (picked.size() > max_definitions_) picked.resize(max_definitions_);
        return picked;
    }
    if (idiom_lexicon) {
        auto defs = source_defs(*idiom_lexicon, lowercase(idiom_lemma), std::nullopt);
        if (!defs.empty()) {
            if (defs.size() > max_definitions_) defs.resize(max_definitions_);
            return defs;
        }
    }
    throw DictNotFound("no source has an idiom entry for \"" + idiom_lemma + "\"");
}

} // namespace isp
