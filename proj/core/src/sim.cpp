#include "ncsched/sim.hpp"

#include <algorithm>
#include <stdexcept>

#include "ncsched/rng.hpp"
#include "ncsched/scheduler.hpp"

namespace ncsched {

Simulator::Simulator(const ScenarioConfig& config, unsigned replication_index)
    : cfg_(config),
      rep_(replication_index),
      arrivals_rng_(make_stream(config.master_seed, replication_index,
                                StreamPurpose::Arrivals)),
      avail_rng_(make_stream(config.master_seed, replication_index,
                             StreamPurpose::Availability)),
      tie_rng_(make_stream(config.master_seed, replication_index,
                           StreamPurpose::TieBreak)) {
    cfg_.validate();
    if (cfg_.mode == SimMode::CodedFinite) {
        field_.emplace(cfg_.field_order);
        auto params = cfg_.layout_params(
            stream_seed(cfg_.master_seed, rep_, StreamPurpose::Layout));
        layout_ = build_coded(params);
        mds_shortcut_ = layout_.mds;
        drive_fresh_.resize(layout_.drive_count());
        for (std::size_t d = 0; d < layout_.drive_count(); ++d)
            drive_fresh_[d] = std::uint32_t(layout_.drive_chunks[d].size());
        chunk_broadcast_.assign(layout_.chunk_count(), 0);
    } else {
        layout_ = build_uncoded(cfg_.layout_params(0));
    }
    busy_.assign(layout_.drive_count(), 0);
    drive_reads_.assign(layout_.drive_count(), 0);
    if (cfg_.lambda > 0)
        poisson_ = std::poisson_distribution<unsigned>(cfg_.lambda);
}

unsigned Simulator::sample_arrivals() {
    if (cfg_.lambda <= 0) return 0;
    return poisson_(arrivals_rng_);
}

void Simulator::sample_availability() {
    std::bernoulli_distribution busy(cfg_.pbd);
    for (auto& b : busy_) b = busy(avail_rng_) ? 1 : 0;
}

UserState Simulator::make_user() {
    UserState u;
    u.id = next_id_++;
    u.arrival_slot = slot_;
    if (cfg_.mode == SimMode::CodedFinite) {
        u.unreceived.assign(layout_.chunk_count(), 1);
        if (!mds_shortcut_ || cfg_.verify_innovation)
            u.knowledge.emplace(*field_, cfg_.chunks);
    } else {
        u.undecoded.assign(cfg_.chunks, 1);
        u.stripe_missing.assign(cfg_.stripe_sets,
                                std::uint16_t(cfg_.chunks / cfg_.stripe_sets));
    }
    return u;
}

std::pair<unsigned, unsigned> Simulator::admit(unsigned count) {
    unsigned free = unsigned(cfg_.buffer - users_.size());
    unsigned admitted = std::min(count, free);
    for (unsigned i = 0; i < admitted; ++i) users_.push_back(make_user());
    return {admitted, count - admitted};
}

unsigned Simulator::apply_broadcast(std::uint32_t drive, std::uint32_t chunk) {
    const auto& holders = drives_holding(layout_, chunk);
    if (std::find(holders.begin(), holders.end(), drive) == holders.end())
        throw std::logic_error("broadcast drive does not hold the chunk");

    unsigned targeted = 0;
    if (cfg_.mode == SimMode::CodedFinite) {
        for (auto& u : users_) {
            if (!u.unreceived[chunk]) continue;
            u.unreceived[chunk] = 0;
            ++u.received;
            bool innovative;
            if (mds_shortcut_) {
                innovative = u.rank < cfg_.chunks;
                if (cfg_.verify_innovation) {
                    bool echelon = u.knowledge->append(layout_.vectors[chunk]);
                    if (echelon != innovative)
                        throw std::logic_error(
                            "MDS rank shortcut disagrees with echelon rank");
                }
            } else {
                innovative = u.knowledge->append(layout_.vectors[chunk]);
            }
            if (innovative) {
                ++u.rank;
                ++targeted;
            }
        }
        if (!chunk_broadcast_[chunk]) {
            chunk_broadcast_[chunk] = 1;
            --drive_fresh_[drive];
        }
    } else {
        auto stripe = layout_.chunk_stripe[chunk];
        for (auto& u : users_) {
            if (!u.undecoded[chunk]) continue;
            u.undecoded[chunk] = 0;
            ++u.rank;
            ++targeted;
            if (--u.stripe_missing[stripe] == 0) ++u.stripes_done;
        }
    }
    ++drive_reads_[drive];
    return targeted;
}

unsigned Simulator::remove_departed() {
    auto departed = std::erase_if(
        users_, [&](const UserState& u) { return u.rank >= cfg_.chunks; });
    return unsigned(departed);
}

SlotRecord Simulator::step() {
    SlotRecord rec;
    rec.slot = slot_;
    rec.arrivals = sample_arrivals();
    if (cfg_.admit_before_service)
        rec.blocked = admit(rec.arrivals).second;
    rec.active_before = unsigned(users_.size());

    if (cfg_.mode != SimMode::UncodedInfinite) sample_availability();
    rec.busy = busy_;

    if (observer_) observer_(*this);

    std::size_t li = leader_index(users_);
    unsigned leader_rank_before = 0;
    if (li < users_.size()) {
        const UserState& leader = users_[li];
        leader_rank_before = leader.rank;
        rec.leader_rank = int(leader.rank);
        rec.leader_bin = cfg_.mode == SimMode::CodedFinite
                             ? int(leader.rank)
                             : int(leader.stripes_done);
    }

    SchedContext ctx{layout_,   users_,        busy_,
                     cfg_.policy, &tie_rng_,   &drive_reads_,
                     &drive_fresh_, cfg_.mode == SimMode::CodedFinite,
                     mds_shortcut_};
    std::optional<Decision> decision;
    switch (cfg_.mode) {
        case SimMode::UncodedInfinite:
            if (!users_.empty()) decision = schedule_uncoded_infinite(ctx);
            break;
        case SimMode::UncodedFinite:
            decision = schedule_uncoded_finite(ctx);
            break;
        case SimMode::CodedFinite:
            decision = schedule_coded_finite(ctx);
            break;
    }
    if (decision) {
        rec.served = true;
        rec.drive = decision->drive;
        rec.chunk = decision->chunk;
        rec.excluded_leaders = unsigned(decision->excluded_leaders.size());
        rec.targeted = apply_broadcast(decision->drive, decision->chunk);
    }

    if (li < users_.size())
        rec.leader_blocked = users_[li].rank == leader_rank_before;

    rec.departures = remove_departed();
    if (!cfg_.admit_before_service)
        rec.blocked = admit(rec.arrivals).second;

    ++slot_;
    return rec;
}

MetricsAccumulator Simulator::run() {
    MetricsAccumulator acc(cfg_.digest());
    for (std::uint64_t i = 0; i < cfg_.horizon; ++i) {
        SlotRecord rec = step();
        if (rec.slot >= cfg_.warmup) acc.record_slot(rec);
    }
    return acc;
}

MetricsAccumulator run_replication(const ScenarioConfig& config,
                                   unsigned replication_index) {
    Simulator sim(config, replication_index);
    return sim.run();
}

}  // namespace ncsched
