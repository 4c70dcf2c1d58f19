#ifndef ISPKIT_BACKENDS_REGISTRY_HPP
#define ISPKIT_BACKENDS_REGISTRY_HPP

#include <memory>
#include <string>

#include "ispkit/backends/interfaces.hpp"

namespace isp {

// Backend selection from a JSON config file.
//
// Keys: backend.name, backend.checkpoint_path, backend.device,
//       decode.beams / decode.top_k / decode.top_p, seed.
//
// "toy-seq2seq" and "toy-lexicon" are bundled; anything else is treated as
// the name of an external pretrained adapter, which must be registered by
// the embedding application.
struct BackendConfig {
    std::string name = "toy-seq2seq";
    std::string checkpoint_path;
    std::string device = "cpu";
    DecodeParams decode;
    uint64_t seed = 0;
};

BackendConfig load_backend_config(const std::string& path);

std::shared_ptr<Seq2SeqBackend> make_backend(const BackendConfig& cfg);

// factory producing pristine instances (fresh weights, same config)
BackendFactory make_backend_factory(const BackendConfig& cfg);

} // namespace isp

#endif
