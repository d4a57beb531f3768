#include "absaforge/augment.hpp"

#include <atomic>
#include <thread>

#include "absaforge/errors.hpp"
#include "absaforge/text.hpp"

namespace absaforge {

std::string_view strategy_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::CDA: return "CDA";
        case StrategyKind::ADA: return "ADA";
        case StrategyKind::CADA: return "CADA";
    }
    throw ContractViolation("unknown strategy kind");
}

StrategyKind strategy_from_name(std::string_view name) {
    const std::string lower = to_lower_ascii(name);
    if (lower == "cda") return StrategyKind::CDA;
    if (lower == "ada") return StrategyKind::ADA;
    if (lower == "cada") return StrategyKind::CADA;
    throw ConfigError("unknown strategy '" + std::string(name) + "' (expected cda, ada or cada)");
}

namespace {

PromptRequest make_request(const AugmentOptions& options, double temperature, std::string prompt) {
    PromptRequest req;
    req.model = options.model;
    req.temperature = temperature;
    req.max_retries = options.transport_max_retries;
    req.messages.push_back({"user", std::move(prompt)});
    return req;
}

// Sentence replies sometimes arrive wrapped in quotes; strip one matched
// layer plus outer whitespace and leave everything else alone.
std::string clean_sentence_reply(std::string_view raw) {
    std::string s(trim(raw));
    auto strip = [&](std::string_view open, std::string_view close) {
        if (s.size() >= open.size() + close.size() && s.starts_with(open) && s.ends_with(close))
            s = std::string(trim(s.substr(open.size(), s.size() - open.size() - close.size())));
    };
    strip("\"", "\"");
    strip("“", "”");
    return s;
}

}  // namespace

AugmentedSample augment_cda(const Triplet& t, Gateway& gateway,
                            const std::vector<ExemplarPair>& exemplars,
                            const AugmentOptions& options) {
    const PromptRequest req =
        make_request(options, options.cda_temperature, build_cda_prompt(t, exemplars));

    AugmentedSample sample;
    sample.source_id = t.id;
    sample.polarity = t.polarity;
    sample.strategy = {StrategyKind::CDA, false};
    sample.aug_aspect = t.aspect;

    for (int ordinal = 0;; ++ordinal) {
        const ChatResponse reply = gateway.complete(req, ordinal);
        const std::string sentence = clean_sentence_reply(reply.text);
        if (!sentence.empty() && ifind(sentence, t.aspect) != std::string::npos) {
            sample.aug_sentence = sentence;
            sample.retries_used = ordinal;
            return sample;
        }
        if (ordinal >= options.max_aug_retries) {
            // The aspect never survived the paraphrase; keep the source.
            sample.aug_sentence = t.sentence;
            sample.retries_used = ordinal;
            sample.fallback = true;
            return sample;
        }
    }
}

AugmentedSample augment_ada(const Triplet& t, Gateway& gateway, bool verify,
                            const AugmentOptions& options) {
    const PromptRequest req =
        make_request(options, options.ada_temperature, build_ada_prompt(t));
    const std::string original = normalize_term(t.aspect);

    AugmentedSample sample;
    sample.source_id = t.id;
    sample.polarity = t.polarity;
    sample.strategy = {StrategyKind::ADA, verify};

    std::string aspect;
    bool have_aspect = false;
    int ordinal = 0;
    for (;;) {
        const ChatResponse reply = gateway.complete(req, ordinal);
        try {
            aspect = sanitize_aspect(reply.text);
            have_aspect = true;
        } catch (const ValidationError&) {
            have_aspect = false;  // empty reply counts as a retry
        }
        const bool needs_retry =
            !have_aspect || (verify && normalize_term(aspect) == original);
        if (!needs_retry || ordinal >= options.max_verify_retries) break;
        ++ordinal;
    }

    sample.retries_used = ordinal;
    if (!have_aspect) {
        // Budget exhausted on unusable replies; keep the source unchanged.
        sample.aug_aspect = t.aspect;
        sample.aug_sentence = t.sentence;
        sample.fallback = true;
        sample.verified_distinct = false;
        return sample;
    }
    sample.aug_aspect = aspect;
    sample.verified_distinct = normalize_term(aspect) != original;
    sample.aug_sentence = substitute_aspect(
        t.sentence, std::make_pair(t.aspect_from, t.aspect_to), t.aspect, aspect);
    return sample;
}

AugmentedSample augment_cada(const Triplet& t, Gateway& gateway,
                             const std::vector<ExemplarPair>& exemplars, bool verify,
                             const AugmentOptions& options) {
    const AugmentedSample cda = augment_cda(t, gateway, exemplars, options);
    const AugmentedSample ada = augment_ada(t, gateway, verify, options);

    AugmentedSample sample;
    sample.source_id = t.id;
    sample.polarity = t.polarity;
    sample.strategy = {StrategyKind::CADA, verify};
    sample.aug_aspect = ada.aug_aspect;
    sample.retries_used = ada.retries_used;
    sample.verified_distinct = ada.verified_distinct;
    sample.fallback = cda.fallback || ada.fallback;
    try {
        sample.aug_sentence =
            substitute_aspect(cda.aug_sentence, std::nullopt, t.aspect, ada.aug_aspect);
    } catch (const ValidationError&) {
        // Paraphrase lost the aspect and was not caught upstream; the ADA
        // result is still usable on its own.
        sample.aug_sentence = ada.aug_sentence;
        sample.fallback = true;
    }
    return sample;
}

const std::vector<ExemplarPair>& ExemplarConfig::for_domain(const std::string& domain) const {
    const auto it = by_domain.find(domain);
    if (it != by_domain.end()) return it->second;
    return default_exemplars(domain);
}

std::vector<AugmentedSample> run_augmentation(const std::vector<Triplet>& triplets,
                                              Gateway& gateway, Strategy strategy,
                                              const ExemplarConfig& exemplars,
                                              const AugmentOptions& options, int workers,
                                              AugmentRunReport* report) {
    std::vector<AugmentedSample> out(triplets.size());
    const auto process = [&](std::size_t i) {
        const Triplet& t = triplets[i];
        switch (strategy.kind) {
            case StrategyKind::CDA:
                out[i] = augment_cda(t, gateway, exemplars.for_domain(t.domain), options);
                break;
            case StrategyKind::ADA:
                out[i] = augment_ada(t, gateway, strategy.verify, options);
                break;
            case StrategyKind::CADA:
                out[i] = augment_cada(t, gateway, exemplars.for_domain(t.domain), strategy.verify,
                                      options);
                break;
        }
    };

    if (workers <= 1 || triplets.size() < 2) {
        for (std::size_t i = 0; i < triplets.size(); ++i) process(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mu;
        const int n_threads = std::min<int>(workers, static_cast<int>(triplets.size()));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int w = 0; w < n_threads; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= triplets.size()) return;
                    try {
                        process(i);
                    } catch (...) {
                        std::lock_guard lock(error_mu);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    if (report) {
        report->total = static_cast<long>(out.size());
        for (const AugmentedSample& s : out) {
            if (s.fallback) ++report->fallbacks;
            if (s.verified_distinct) ++report->verified_distinct;
            report->retries_total += s.retries_used;
        }
    }
    return out;
}

}  // namespace absaforge
