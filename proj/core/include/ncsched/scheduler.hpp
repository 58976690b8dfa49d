#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ncsched/config.hpp"
#include "ncsched/layout.hpp"
#include "ncsched/sim.hpp"

namespace ncsched {

struct Decision {
    std::uint32_t drive = 0;
    std::uint32_t chunk = 0;
    std::vector<std::uint64_t> excluded_leaders;  // ids bypassed this slot
};

/// Read-only slice of simulator state the policies decide over.
struct SchedContext {
    const DriveLayout& layout;
    const std::vector<UserState>& users;
    const std::vector<std::uint8_t>& busy;
    TiePolicy policy = TiePolicy::Spread;
    std::mt19937_64* tie_rng = nullptr;
    const std::vector<std::uint64_t>* drive_reads = nullptr;  // uncoded metric
    const std::vector<std::uint32_t>* drive_fresh = nullptr;  // coded metric
    bool coded = false;
    bool mds = false;
};

/// Index of the user with maximum rank, earliest arrival on ties;
/// users.size() when the set is empty.
std::size_t leader_index(const std::vector<UserState>& users);

/// Would broadcasting this chunk raise the user's rank?
bool chunk_innovative(const UserState& user, std::uint32_t chunk,
                      const SchedContext& ctx);

using Candidate = std::pair<std::uint32_t, std::uint32_t>;  // (drive, chunk)

/// Picks one candidate read.  Spread prefers the drive with the most
/// unbroadcast chunks left (coded) or the fewest cumulative reads
/// (uncoded); ties break toward the lowest drive then chunk id.  Random
/// draws uniformly; First takes the lowest (drive, chunk).
Candidate choose_among_candidates(const std::vector<Candidate>& candidates,
                                  TiePolicy policy, std::mt19937_64* tie_rng,
                                  const std::vector<std::uint64_t>* drive_reads,
                                  const std::vector<std::uint32_t>* drive_fresh);

/// The leader's earliest undecoded chunk from any of its drives; no
/// availability constraint.
std::optional<Decision> schedule_uncoded_infinite(const SchedContext& ctx);

/// Temporary-leader loop over undecoded chunks with available drives.
std::optional<Decision> schedule_uncoded_finite(const SchedContext& ctx);

/// Temporary-leader loop over unreceived coded chunks on available drives.
std::optional<Decision> schedule_coded_finite(const SchedContext& ctx);

/// Test oracle: enumerates every feasible (available drive, stored chunk)
/// read and returns the largest number of users that would gain a d.o.f.
/// Refuses states beyond desk scale (more than 8 users, drives, or chunks
/// per drive) with std::length_error.
unsigned brute_force_max_targeted(const SchedContext& ctx);

}  // namespace ncsched
