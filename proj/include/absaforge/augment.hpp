#pragma once

#include <map>
#include <string>
#include <vector>

#include "absaforge/corpus.hpp"
#include "absaforge/gateway.hpp"
#include "absaforge/prompts.hpp"

namespace absaforge {

enum class StrategyKind { CDA, ADA, CADA };

std::string_view strategy_name(StrategyKind kind);
StrategyKind strategy_from_name(std::string_view name);  // accepts cda/ada/cada, any case

// Which augmentation to run. `verify` switches the distinct-aspect
// verification loop on; it only has an effect for ADA and CADA (CDA never
// changes the aspect).
struct Strategy {
    StrategyKind kind = StrategyKind::CDA;
    bool verify = false;

    bool operator==(const Strategy&) const = default;
};

// A generated counterpart of one source triplet. Mirrors the interchange
// schema: the source is referenced by id and the polarity is copied from it
// (every strategy preserves the label).
struct AugmentedSample {
    std::string source_id;
    std::string aug_sentence;
    std::string aug_aspect;
    Polarity polarity = Polarity::neutral;
    Strategy strategy;
    int retries_used = 0;
    bool verified_distinct = false;
    bool fallback = false;

    bool operator==(const AugmentedSample&) const = default;
};

struct AugmentOptions {
    // Budget for re-querying when a CDA reply loses the aspect term; after
    // that the source sentence is kept and the sample flagged.
    int max_aug_retries = 2;
    // Budget for the distinct-aspect verification loop. On exhaustion the
    // last (repeated) term is kept and the sample flagged, not dropped.
    int max_verify_retries = 5;
    // LLM sampling temperatures per strategy.
    double cda_temperature = 0.0;
    double ada_temperature = 1.0;
    std::string model = "gpt-3.5-turbo";
    int transport_max_retries = 3;
};

// Paraphrases the context around the aspect term; the aspect itself must
// survive verbatim or the sample falls back to the source sentence.
AugmentedSample augment_cda(const Triplet& t, Gateway& gateway,
                            const std::vector<ExemplarPair>& exemplars,
                            const AugmentOptions& options = {});

// Replaces the aspect term in place. With `verify`, re-queries with the same
// prompt (advancing the cache retry ordinal) until the sanitized term differs
// from the original or the budget runs out.
AugmentedSample augment_ada(const Triplet& t, Gateway& gateway, bool verify,
                            const AugmentOptions& options = {});

// Runs CDA and ADA independently on the source sentence, then substitutes the
// new aspect term into the paraphrased sentence.
AugmentedSample augment_cada(const Triplet& t, Gateway& gateway,
                             const std::vector<ExemplarPair>& exemplars, bool verify,
                             const AugmentOptions& options = {});

// Per-domain exemplar configuration; domains without an entry fall back to
// the built-in defaults.
struct ExemplarConfig {
    std::map<std::string, std::vector<ExemplarPair>> by_domain;

    const std::vector<ExemplarPair>& for_domain(const std::string& domain) const;
};

struct AugmentRunReport {
    long total = 0;
    long fallbacks = 0;
    long verified_distinct = 0;
    long retries_total = 0;
    std::uint64_t seed = 0;

    double mean_retries() const { return total ? double(retries_total) / double(total) : 0.0; }
    double distinct_rate() const { return total ? double(verified_distinct) / double(total) : 0.0; }
};

// Augments every triplet. Distinct triplets may be processed concurrently
// (`workers` threads, bounded further by the gateway's slot limit); the
// output order always equals the input order.
std::vector<AugmentedSample> run_augmentation(const std::vector<Triplet>& triplets,
                                              Gateway& gateway, Strategy strategy,
                                              const ExemplarConfig& exemplars = {},
                                              const AugmentOptions& options = {},
                                              int workers = 1,
                                              AugmentRunReport* report = nullptr);

}  // namespace absaforge
