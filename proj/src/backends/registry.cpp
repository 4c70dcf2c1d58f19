#include "ispkit/backends/registry.hpp"

#include <fstream>

#include <json.hpp>

#include "ispkit/backends/toy_lexicon.hpp"
#include "ispkit/backends/toy_seq2seq.hpp"

namespace isp {

BackendConfig load_backend_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BackendError("cannot open backend config " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw BackendError("backend config is not valid JSON: " + path);

    BackendConfig cfg;
    if (j.contains("backend")) {
        const auto& b = j["backend"];
        if (b.contains("name")) cfg.name = b["name"].get<std::string>();
        if (b.contains("checkpoint_path")) cfg.checkpoint_path = b["checkpoint_path"].get<std::string>();
        if (b.contains("device")) cfg.device = b["device"].get<std::string>();
    }
    if (j.contains("decode")) {
        const auto& d = j["decode"];
        if (d.contains("beams")) cfg.decode.beams = d["beams"].get<int>();
        if (d.contains("top_k")) cfg.decode.top_k = d["top_k"].get<int>();
        if (d.contains("top_p")) cfg.decode.top_p = d["top_p"].get<double>();
        if (d.contains("max_len")) cfg.decode.max_len = d["max_len"].get<int>();
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
    return cfg;
}

std::shared_ptr<Seq2SeqBackend> make_backend(const BackendConfig& cfg) {
    std::shared_ptr<Seq2SeqBackend> backend;
    if (cfg.name == "toy-seq2seq") {
        backend = std::make_shared<ToySeq2Seq>(cfg.seed);
    } else if (cfg.name == "toy-lexicon") {
        backend = std::make_shared<ToyLexiconBackend>(cfg.seed);
    } else {
        throw BackendError("no adapter registered for backend \"" + cfg.name +
                           "\"; bundled backends are toy-seq2seq and toy-lexicon");
    }
    if (!cfg.checkpoint_path.empty()) backend->load(cfg.checkpoint_path);
    return backend;
}

BackendFactory make_backend_factory(const BackendConfig& cfg) {
    return [cfg]() { return make_backend(cfg); };
}

} // namespace isp
