#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace ncsched {

struct SlotRecord;

struct LeaderBin {
    std::uint64_t observed = 0;
    std::uint64_t blocked = 0;
};

/// Per-replication tallies of the reported quantities: external blocking,
/// targeted-user throughput and true-leader blocking binned by rank (coded)
/// or by completed stripe sets (uncoded).
class MetricsAccumulator {
public:
    MetricsAccumulator() = default;
    explicit MetricsAccumulator(std::uint64_t digest) : config_digest(digest) {}

    void record_slot(const SlotRecord& rec);

    /// Componentwise sum; associative and commutative.  Throws
    /// std::invalid_argument when both sides carry different digests.
    void merge(const MetricsAccumulator& other);

    bool empty() const { return slots == 0 && arrivals == 0; }

    std::uint64_t config_digest = 0;
    std::uint64_t slots = 0;
    std::uint64_t arrivals = 0;
    std::uint64_t blocked = 0;
    std::uint64_t departures = 0;
    std::uint64_t nonempty_slots = 0;  // slots with at least one active user
    std::uint64_t served_slots = 0;
    std::uint64_t targeted_total = 0;
    std::uint64_t active_user_slots = 0;      // sum of |U_A| per slot
    double throughput_ratio_sum = 0;          // sum of |U_n|/|U_A|
    std::map<int, LeaderBin> leader_bins;
};

struct LeaderBlockPoint {
    int key = 0;  // leader rank (coded) or completed stripe sets (uncoded)
    double prob = 0;
    double se = 0;
    std::uint64_t n_obs = 0;
};

struct SummaryStats {
    double ext_block = 0, ext_block_se = 0;
    double throughput_norm = 0, throughput_norm_se = 0;  // mean |U_n|/|U_A|
    double throughput_raw = 0, throughput_raw_se = 0;    // mean |U_n| per slot
    double mean_active = 0;
    std::vector<LeaderBlockPoint> leader_curve;
};

/// Pooled point estimates with standard errors computed across the
/// per-replication means.  Leader bins with fewer than min_obs pooled
/// observations are suppressed.  Throws std::domain_error when no
/// arrivals were observed at all.
SummaryStats summarize(const std::vector<MetricsAccumulator>& replications,
                       std::uint64_t min_obs = 100);

}  // namespace ncsched
