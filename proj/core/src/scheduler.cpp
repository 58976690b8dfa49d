#include "ncsched/scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace ncsched {

std::size_t leader_index(const std::vector<UserState>& users) {
    std::size_t best = users.size();
    for (std::size_t i = 0; i < users.size(); ++i) {
        if (best == users.size() || users[i].rank > users[best].rank) best = i;
        // users are ordered by arrival, so the first maximum wins ties
    }
    return best;
}

bool chunk_innovative(const UserState& user, std::uint32_t chunk,
                      const SchedContext& ctx) {
    if (!ctx.coded) return user.undecoded[chunk] != 0;
    if (!user.unreceived[chunk]) return false;
    if (ctx.mds) return user.rank < ctx.layout.params.chunks;
    return user.knowledge->is_innovative(ctx.layout.vectors[chunk]);
}

Candidate choose_among_candidates(const std::vector<Candidate>& candidates,
                                  TiePolicy policy, std::mt19937_64* tie_rng,
                                  const std::vector<std::uint64_t>* drive_reads,
                                  const std::vector<std::uint32_t>* drive_fresh) {
    if (candidates.empty())
        throw std::logic_error("choose_among_candidates: empty candidate set");

    switch (policy) {
        case TiePolicy::Random: {
            if (!tie_rng)
                throw std::logic_error("random tie policy needs an rng stream");
            std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
            return candidates[pick(*tie_rng)];
        }
        case TiePolicy::First:
            return *std::min_element(candidates.begin(), candidates.end());
        case TiePolicy::Spread:
            break;
    }

    Candidate best = candidates.front();
    auto better = [&](const Candidate& a, const Candidate& b) {
        if (drive_fresh) {
            auto fa = (*drive_fresh)[a.first], fb = (*drive_fresh)[b.first];
            if (fa != fb) return fa > fb;  // most unbroadcast chunks left
        } else if (drive_reads) {
            auto ra = (*drive_reads)[a.first], rb = (*drive_reads)[b.first];
            if (ra != rb) return ra < rb;  // least read so far
        }
        return a < b;
    };
    for (const auto& c : candidates)
        if (better(c, best)) best = c;
    return best;
}

namespace {

// Active user indices in temporary-leader order: rank descending,
// earliest arrival first within a rank.
std::vector<std::size_t> leader_order(const std::vector<UserState>& users) {
    std::vector<std::size_t> order(users.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return users[a].rank > users[b].rank;
    });
    return order;
}

std::optional<Decision> uncoded_leader_loop(const SchedContext& ctx) {
    const std::size_t t = ctx.layout.params.chunks;
    Decision decision;
    for (std::size_t idx : leader_order(ctx.users)) {
        const UserState& u = ctx.users[idx];
        for (std::uint32_t j = 0; j < t; ++j) {
            if (!u.undecoded[j]) continue;
            std::vector<Candidate> candidates;
            for (auto d : ctx.layout.chunk_drives[j])
                if (!ctx.busy[d]) candidates.emplace_back(d, j);
            if (candidates.empty()) continue;
            // earliest undecoded chunk with a free drive; the drive is
            // then picked by the configured policy
            auto [drive, chunk] = choose_among_candidates(
                candidates, ctx.policy, ctx.tie_rng, ctx.drive_reads, nullptr);
            decision.drive = drive;
            decision.chunk = chunk;
            return decision;
        }
        decision.excluded_leaders.push_back(u.id);
    }
    return std::nullopt;
}

}  // namespace

std::optional<Decision> schedule_uncoded_infinite(const SchedContext& ctx) {
    // With every drive free the loop stops at the true leader and serves
    // its earliest undecoded chunk.
    return uncoded_leader_loop(ctx);
}

std::optional<Decision> schedule_uncoded_finite(const SchedContext& ctx) {
    return uncoded_leader_loop(ctx);
}

std::optional<Decision> schedule_coded_finite(const SchedContext& ctx) {
    Decision decision;
    for (std::size_t idx : leader_order(ctx.users)) {
        const UserState& u = ctx.users[idx];
        std::vector<Candidate> candidates;
        for (std::uint32_t d = 0; d < ctx.layout.drive_count(); ++d) {
            if (ctx.busy[d]) continue;
            for (auto r : ctx.layout.drive_chunks[d])
                if (u.unreceived[r]) candidates.emplace_back(d, r);
        }
        if (!candidates.empty()) {
            auto [drive, chunk] = choose_among_candidates(
                candidates, ctx.policy, ctx.tie_rng, nullptr, ctx.drive_fresh);
            decision.drive = drive;
            decision.chunk = chunk;
            return decision;
        }
        decision.excluded_leaders.push_back(u.id);
    }
    return std::nullopt;
}

unsigned brute_force_max_targeted(const SchedContext& ctx) {
    if (ctx.users.size() > 8 || ctx.layout.drive_count() > 8)
        throw std::length_error("brute-force oracle limited to 8 users/drives");
    for (const auto& chunks : ctx.layout.drive_chunks)
        if (chunks.size() > 8)
            throw std::length_error("brute-force oracle limited to 8 chunks per drive");

    unsigned best = 0;
    for (std::uint32_t d = 0; d < ctx.layout.drive_count(); ++d) {
        if (ctx.busy[d]) continue;
        for (auto c : ctx.layout.drive_chunks[d]) {
            unsigned gain = 0;
            for (const auto& u : ctx.users)
                if (chunk_innovative(u, c, ctx)) ++gain;
            best = std::max(best, gain);
        }
    }
    return best;
}

}  // namespace ncsched
