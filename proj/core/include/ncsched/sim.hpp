#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ncsched/config.hpp"
#include "ncsched/gf.hpp"
#include "ncsched/layout.hpp"
#include "ncsched/metrics.hpp"

namespace ncsched {

/// One active request.  Uncoded modes track the undecoded-chunk vector;
/// the coded mode tracks the reception vector plus either the MDS rank
/// shortcut or a full echelon basis when the layout is not known MDS.
struct UserState {
    std::uint64_t id = 0;
    std::uint64_t arrival_slot = 0;
    unsigned rank = 0;

    std::vector<std::uint8_t> undecoded;        // uncoded: 1 = not decoded
    std::vector<std::uint16_t> stripe_missing;  // undecoded count per stripe
    unsigned stripes_done = 0;

    std::vector<std::uint8_t> unreceived;  // coded: 1 = not received
    unsigned received = 0;
    std::optional<KnowledgeMatrix> knowledge;
};

struct SlotRecord {
    std::uint64_t slot = 0;
    unsigned arrivals = 0;
    unsigned blocked = 0;
    unsigned active_before = 0;  // |U_A| when the scheduler ran
    std::vector<std::uint8_t> busy;
    bool served = false;
    std::uint32_t drive = 0;
    std::uint32_t chunk = 0;
    unsigned targeted = 0;
    unsigned departures = 0;
    unsigned excluded_leaders = 0;
    int leader_rank = -1;  // true leader's rank; -1 with no active users
    int leader_bin = -1;   // blocking bin: rank (coded) or stripes done
    bool leader_blocked = false;
};

/// Slotted-time engine.  A slot runs arrivals, availability sampling,
/// scheduling, broadcast and departures in that fixed order; arrivals
/// admitted in a slot are eligible for that slot's broadcast unless
/// configured otherwise.
class Simulator {
public:
    Simulator(const ScenarioConfig& config, unsigned replication_index);
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    SlotRecord step();

    /// Runs the configured horizon; slots before the warmup boundary are
    /// excluded from the returned metrics.
    MetricsAccumulator run();

    /// Admits up to the free buffer capacity, returns (admitted, blocked).
    std::pair<unsigned, unsigned> admit(unsigned count);

    /// Broadcasts one chunk to every active user and returns the number
    /// of users whose rank grew.  Throws std::logic_error when the drive
    /// does not hold the chunk.
    unsigned apply_broadcast(std::uint32_t drive, std::uint32_t chunk);

    /// Called after arrivals and availability sampling, before the
    /// scheduling decision of each slot.
    using Observer = std::function<void(const Simulator&)>;
    void set_pre_decision_observer(Observer obs) { observer_ = std::move(obs); }

    const ScenarioConfig& config() const { return cfg_; }
    const DriveLayout& layout() const { return layout_; }
    const std::vector<UserState>& users() const { return users_; }
    const std::vector<std::uint8_t>& busy() const { return busy_; }
    std::uint64_t slot() const { return slot_; }
    bool mds_shortcut() const { return mds_shortcut_; }
    const std::vector<std::uint64_t>& drive_reads() const { return drive_reads_; }
    const std::vector<std::uint32_t>& drive_fresh() const { return drive_fresh_; }
    std::mt19937_64& tie_rng() { return tie_rng_; }

private:
    unsigned sample_arrivals();
    void sample_availability();
    UserState make_user();
    unsigned remove_departed();

    ScenarioConfig cfg_;
    unsigned rep_ = 0;
    std::optional<GaloisField> field_;  // coded mode only
    DriveLayout layout_;
    bool mds_shortcut_ = false;

    std::vector<UserState> users_;
    std::uint64_t next_id_ = 0;
    std::uint64_t slot_ = 0;
    std::vector<std::uint8_t> busy_;
    std::vector<std::uint64_t> drive_reads_;     // cumulative reads per drive
    std::vector<std::uint32_t> drive_fresh_;     // coded: unbroadcast chunks left
    std::vector<std::uint8_t> chunk_broadcast_;  // coded: global served history

    std::mt19937_64 arrivals_rng_, avail_rng_, tie_rng_;
    std::poisson_distribution<unsigned> poisson_;
    Observer observer_;
};

MetricsAccumulator run_replication(const ScenarioConfig& config,
                                   unsigned replication_index);

}  // namespace ncsched
