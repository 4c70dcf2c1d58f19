#ifndef ISPKIT_BACKENDS_TOY_LEXICON_HPP
#define ISPKIT_BACKENDS_TOY_LEXICON_HPP

#include <map>

#include "ispkit/backends/interfaces.hpp"

namespace isp {

// Rule-table sequence model: replaces every occurrence of a source phrase
// with its target phrase. With error_rate 0 the output is exactly the
// rule-applied input, which makes a table/inverse-table pair an exact
// oracle for the back-translation loop. fine_tune re-derives the table
// from pair diffs, so the backend behaves like a (perfectly memorizing)
// trainable model.
class ToyLexiconBackend : public Seq2SeqBackend {
public:
    using Table = std::vector<std::pair<Tokens, Tokens>>;

    ToyLexiconBackend(Table table, double error_rate, uint64_t seed);
    explicit ToyLexiconBackend(uint64_t seed) : ToyLexiconBackend({}, 0.0, seed) {}

    std::string name() const override { return "toy-lexicon"; }
    Capabilities capabilities() const override { return Capabilities{0, 1 << 20, true}; }

    std::string generate(const Tokens& input, const DecodeParams& decode,
                         uint64_t seed) const override;

    std::vector<double> fine_tune(
        const std::vector<std::pair<std::string, std::string>>& pairs,
        const Hyperparams& hp) override;

    void save(const std::string& dir) const override;
    void load(const std::string& dir) override;

    const Table& table() const { return table_; }
    void set_error_rate(double r) { error_rate_ = r; }

    // pure substitution, no error channel
    Tokens apply_rules(const Tokens& input) const;

private:
    Table table_;        // kept sorted by source length desc, then lexicographic
    double error_rate_ = 0.0;
    uint64_t seed_ = 0;

    void sort_table();
};

} // namespace isp

#endif
