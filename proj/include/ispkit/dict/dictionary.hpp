#ifndef ISPKIT_DICT_DICTIONARY_HPP
#define ISPKIT_DICT_DICTIONARY_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace isp {

struct DictNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Definition {
    std::string gloss;
    std::string source; // wordnet-like | wiki-like | webapi-like | local-idiom-lexicon
    std::optional<std::string> pos;

    bool operator==(const Definition& o) const {
        return gloss == o.gloss && source == o.source && pos == o.pos;
    }
};

class DictSource {
public:
    virtual ~DictSource() = default;
    virtual std::string name() const = 0;
    // empty result means the source has no entry; SourceUnavailable is
    // signalled by available() returning false, never by throwing
    virtual std::vector<Definition> lookup(const std::string& lemma,
                                           const std::optional<std::string>& pos) const = 0;
    virtual bool available() const { return true; }
    virtual bool supports_pos_filter() const { return false; }
};

// JSON fixture snapshot: {"name": str, "pos_filter": bool,
//                         "entries": {lemma: [{"gloss": str, "pos": str?}...]}}
class FixtureSource : public DictSource {
public:
    explicit FixtureSource(const std::string& json_path);
    FixtureSource(std::string name, bool pos_filter);

    std::string name() const override { return name_; }
    std::vector<Definition> lookup(const std::string& lemma,
                                   const std::optional<std::string>& pos) const override;
    bool supports_pos_filter() const override { return pos_filter_; }

    void add(const std::string& lemma, const std::string& gloss,
             const std::optional<std::string>& pos = std::nullopt);

private:
    std::string name_;
    bool pos_filter_ = false;
    std::unordered_map<std::string, std::vector<Definition>> entries_;
};

// Bundled idiom lexicon, JSONL: {"idiom": str, "glosses": [str...]}
class IdiomLexiconSource : public DictSource {
public:
    explicit IdiomLexiconSource(const std::string& jsonl_path);
    IdiomLexiconSource() = default;

    std::string name() const override { return "local-idiom-lexicon"; }
    std::vector<Definition> lookup(const std::string& lemma,
                                   const std::optional<std::string>& pos) const override;

    void add(const std::string& idiom, const std::vector<std::string>& glosses);
    size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::vector<std::string>> entries_;
};

// GET {url_template with {word} substituted}; expects a JSON array of glosses
// or {"glosses": [...]}. Off by default; flips unavailable on network failure.
class HttpSource : public DictSource {
public:
    HttpSource(std::string name, std::string host, std::string path_template,
               int timeout_ms = 2000, bool enabled = false);

    std::string name() const override { return name_; }
    bool available() const override;
    std::vector<Definition> lookup(const std::string& lemma,
                                   const std::optional<std::string>& pos) const override;

private:
    std::string name_, host_, path_template_;
    int timeout_ms_;
    bool enabled_;
    mutable bool failed_ = false;
};

struct DictCounters {
    size_t lookups = 0;
    size_t cache_hits = 0;
    size_t source_queries = 0;
};

// Definition retrieval with random source selection, fallback and an
// on-disk cache (one JSON file per (source, two-letter shard)). For a fixed
// seed, (lemma, pos) -> result is a pure function; the cache only saves
// repeated source queries.
class DictClient {
public:
    DictClient(std::vector<std::shared_ptr<DictSource>> sources, std::string cache_dir,
               uint64_t seed, size_t max_definitions = 16);

    // random holder among regular sources; idiom lexicon excluded
    std::vector<Definition> lookup(const std::string& lemma,
                                   const std::optional<std::string>& pos = std::nullopt) const;

    // regular sources first, the local idiom lexicon strictly last-resort
    std::vector<Definition> lookup_idiom(const std::string& idiom_lemma) const;

    const DictCounters& counters() const { return counters_; }
    void clear_memory_cache() const;

private:
    std::vector<std::shared_ptr<DictSource>> sources_;
    std::string cache_dir_;
    uint64_t seed_;
    size_t max_definitions_;

    mutable std::mutex mutex_;
    mutable DictCounters counters_;
    mutable std::map<std::string, std::vector<Definition>> memory_;

    std::vector<Definition> source_defs(const DictSource& src, const std::string& lemma,
                                        const std::optional<std::string>& pos) const;
    std::string cache_file(const std::string& source, const std::string& lemma) const;
};

} // namespace isp

#endif
