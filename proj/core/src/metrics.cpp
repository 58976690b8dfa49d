#include "ncsched/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "ncsched/sim.hpp"

namespace ncsched {

void MetricsAccumulator::record_slot(const SlotRecord& rec) {
    ++slots;
    arrivals += rec.arrivals;
    blocked += rec.blocked;
    departures += rec.departures;
    targeted_total += rec.targeted;
    active_user_slots += rec.active_before;
    if (rec.active_before > 0) {
        ++nonempty_slots;
        throughput_ratio_sum += double(rec.targeted) / rec.active_before;
        auto& bin = leader_bins[rec.leader_bin];
        ++bin.observed;
        if (rec.leader_blocked) ++bin.blocked;
    }
    if (rec.served) ++served_slots;
}

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
    if (config_digest != 0 && other.config_digest != 0 &&
        config_digest != other.config_digest)
        throw std::invalid_argument("merging metrics from different scenarios");
    if (config_digest == 0) config_digest = other.config_digest;

    slots += other.slots;
    arrivals += other.arrivals;
    blocked += other.blocked;
    departures += other.departures;
    nonempty_slots += other.nonempty_slots;
    served_slots += other.served_slots;
    targeted_total += other.targeted_total;
    active_user_slots += other.active_user_slots;
    throughput_ratio_sum += other.throughput_ratio_sum;
    for (const auto& [key, bin] : other.leader_bins) {
        auto& mine = leader_bins[key];
        mine.observed += bin.observed;
        mine.blocked += bin.blocked;
    }
}

namespace {

struct MeanSe {
    double mean = 0;
    double se = 0;
};

// Standard error across per-replication means (not pooled slots).
MeanSe across_reps(const std::vector<double>& values) {
    MeanSe out;
    if (values.empty()) return out;
    double sum = 0;
    for (double v : values) sum += v;
    out.mean = sum / double(values.size());
    if (values.size() < 2) return out;
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    double var = ss / double(values.size() - 1);
    out.se = std::sqrt(var / double(values.size()));
    return out;
}

}  // namespace

SummaryStats summarize(const std::vector<MetricsAccumulator>& replications,
                       std::uint64_t min_obs) {
    MetricsAccumulator pooled;
    for (const auto& rep : replications) pooled.merge(rep);
    if (pooled.arrivals == 0)
        throw std::domain_error("no arrivals observed; blocking is undefined");

    SummaryStats out;
    out.ext_block = double(pooled.blocked) / double(pooled.arrivals);
    if (pooled.nonempty_slots > 0)
        out.throughput_norm =
            pooled.throughput_ratio_sum / double(pooled.nonempty_slots);
    if (pooled.slots > 0) {
        out.throughput_raw = double(pooled.targeted_total) / double(pooled.slots);
        out.mean_active = double(pooled.active_user_slots) / double(pooled.slots);
    }

    std::vector<double> block, norm, raw;
    for (const auto& rep : replications) {
        if (rep.arrivals > 0) block.push_back(double(rep.blocked) / double(rep.arrivals));
        if (rep.nonempty_slots > 0)
            norm.push_back(rep.throughput_ratio_sum / double(rep.nonempty_slots));
        if (rep.slots > 0)
            raw.push_back(double(rep.targeted_total) / double(rep.slots));
    }
    out.ext_block_se = across_reps(block).se;
    out.throughput_norm_se = across_reps(norm).se;
    out.throughput_raw_se = across_reps(raw).se;

    for (const auto& [key, bin] : pooled.leader_bins) {
        if (bin.observed < min_obs) continue;
        LeaderBlockPoint point;
        point.key = key;
        point.n_obs = bin.observed;
        point.prob = double(bin.blocked) / double(bin.observed);
        std::vector<double> per_rep;
        for (const auto& rep : replications) {
            auto it = rep.leader_bins.find(key);
            if (it != rep.leader_bins.end() && it->second.observed > 0)
                per_rep.push_back(double(it->second.blocked) /
                                  double(it->second.observed));
        }
        point.se = across_reps(per_rep).se;
        out.leader_curve.push_back(point);
    }
    return out;
}

}  // namespace ncsched
