#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "ncsched/layout.hpp"

namespace ncsched {

/// Invalid scenario parameters or malformed configuration input.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SimMode { UncodedInfinite, UncodedFinite, CodedFinite };

enum class TiePolicy { Spread, Random, First };

std::string to_string(SimMode mode);
std::string to_string(TiePolicy policy);
SimMode mode_from_string(const std::string& name);      // throws ConfigError
TiePolicy policy_from_string(const std::string& name);  // throws ConfigError

/// Everything one replication needs: layout geometry, traffic, drive
/// blocking, horizon and seeding.
struct ScenarioConfig {
    std::size_t chunks = 1;       // T
    std::size_t replication = 1;  // W
    std::size_t stripe_sets = 1;  // s
    std::size_t buffer = 1;       // N, concurrent users
    double lambda = 0.0;          // arrivals per slot
    double pbd = 0.0;             // P_b^D, per-drive blocking probability
    SimMode mode = SimMode::UncodedInfinite;
    unsigned field_order = 256;
    CodeGenerator generator = CodeGenerator::Vandermonde;
    std::size_t coded_chunks = 0;  // H; 0 means W*T
    std::uint64_t horizon = 100000;
    std::uint64_t warmup = 20000;
    unsigned replications = 20;
    std::uint64_t master_seed = 1;
    TiePolicy policy = TiePolicy::Spread;
    bool admit_before_service = true;  // same-slot arrivals can be targeted
    bool verify_innovation = false;    // echelon cross-check of the MDS rank
                                       // shortcut (slow, small runs only)

    std::size_t drives() const { return replication * stripe_sets; }
    void validate() const;  // throws ConfigError
    LayoutParams layout_params(std::uint64_t layout_seed) const;

    /// Stable digest of everything that shapes simulated trajectories,
    /// used to refuse merging metrics of different provenance.
    std::uint64_t digest() const;
};

}  // namespace ncsched
