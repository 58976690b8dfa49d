#include "ncsched/config.hpp"

namespace ncsched {

std::string to_string(SimMode mode) {
    switch (mode) {
        case SimMode::UncodedInfinite: return "UNCODED_INF";
        case SimMode::UncodedFinite: return "UNCODED_FIN";
        case SimMode::CodedFinite: return "CODED_FIN";
    }
    return "?";
}

std::string to_string(TiePolicy policy) {
    switch (policy) {
        case TiePolicy::Spread: return "spread";
        case TiePolicy::Random: return "random";
        case TiePolicy::First: return "first";
    }
    return "?";
}

SimMode mode_from_string(const std::string& name) {
    if (name == "UNCODED_INF") return SimMode::UncodedInfinite;
    if (name == "UNCODED_FIN") return SimMode::UncodedFinite;
    if (name == "CODED_FIN") return SimMode::CodedFinite;
    throw ConfigError("unknown mode: " + name);
}

TiePolicy policy_from_string(const std::string& name) {
    if (name == "spread") return TiePolicy::Spread;
    if (name == "random") return TiePolicy::Random;
    if (name == "first") return TiePolicy::First;
    throw ConfigError("unknown tie policy: " + name);
}

void ScenarioConfig::validate() const {
    if (buffer == 0) throw ConfigError("N must be >= 1");
    if (lambda < 0) throw ConfigError("lambda must be >= 0");
    if (pbd < 0 || pbd > 1) throw ConfigError("pbd must be in [0, 1]");
    if (warmup >= horizon && horizon > 0 && warmup != horizon)
        throw ConfigError("warmup must be < horizon");
    if (warmup > horizon) throw ConfigError("warmup must be <= horizon");
    if (replications == 0) throw ConfigError("replications must be >= 1");
    try {
        layout_params(0).validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
}

LayoutParams ScenarioConfig::layout_params(std::uint64_t layout_seed) const {
    LayoutParams p;
    p.chunks = chunks;
    p.replication = replication;
    p.stripe_sets = stripe_sets;
    p.format = mode == SimMode::CodedFinite ? StorageFormat::Coded
                                            : StorageFormat::Uncoded;
    p.field_order = field_order;
    p.generator = generator;
    p.coded_chunks = coded_chunks;
    p.seed = layout_seed;
    return p;
}

namespace {

void mix(std::uint64_t& h, std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
}

}  // namespace

std::uint64_t ScenarioConfig::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    mix(h, chunks);
    mix(h, replication);
    mix(h, stripe_sets);
    mix(h, buffer);
    mix(h, std::uint64_t(lambda * 1e12));
    mix(h, std::uint64_t(pbd * 1e12));
    mix(h, std::uint64_t(mode));
    mix(h, field_order);
    mix(h, std::uint64_t(generator));
    mix(h, coded_chunks);
    mix(h, horizon);
    mix(h, warmup);
    mix(h, master_seed);
    mix(h, std::uint64_t(policy));
    mix(h, admit_before_service ? 1 : 0);
    return h;
}

}  // namespace ncsched
