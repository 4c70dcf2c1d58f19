#ifndef ISPKIT_TESTS_FIXTURES_HPP
#define ISPKIT_TESTS_FIXTURES_HPP

#include <memory>

#include "ispkit/backends/lexicon_tagger.hpp"
#include "ispkit/backends/table_lemmatizer.hpp"
#include "ispkit/corpus/corpus.hpp"
#include "ispkit/dict/dictionary.hpp"

#include "paths.hpp"

namespace test_support {

inline const isp::LexiconTagger& tagger() {
    static isp::LexiconTagger t(data_file("tagger_lexicon.tsv"));
    return t;
}

inline const isp::TableLemmatizer& lemmatizer() {
    static isp::TableLemmatizer l(data_file("lemmas.tsv"));
    return l;
}

inline const isp::StopwordList& stopwords() {
    static isp::StopwordList s(data_file("stopwords.txt"));
    return s;
}

inline std::vector<std::shared_ptr<isp::DictSource>> fixture_sources() {
    return {
        std::make_shared<isp::FixtureSource>(data_file("dict_wordnet_like.json")),
        std::make_shared<isp::FixtureSource>(data_file("dict_wiki_like.json")),
        std::make_shared<isp::FixtureSource>(data_file("dict_webapi_like.json")),
        std::make_shared<isp::IdiomLexiconSource>(data_file("idiom_lexicon.jsonl")),
    };
}

inline isp::DictClient make_dict_client(const std::string& cache_sub = "", uint64_t seed = 1234) {
    std::string cache = cache_sub.empty() ? std::string() : tmp_dir(cache_sub);
    return isp::DictClient(fixture_sources(), cache, seed);
}

} // namespace test_support

#endif
