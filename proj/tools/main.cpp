// Command-line front end: scenario simulation with presets, analytic
// curve emission, and the fast selftest suite.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncsched/harness.hpp"

namespace {

using namespace ncsched;

// Accepts "1..32", "0.1,0.2,0.5" or a single number.
std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    auto parse_one = [](const std::string& tok) {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw ConfigError("bad numeric value: " + tok);
        return v;
    };
    auto range_pos = text.find("..");
    try {
        if (range_pos != std::string::npos) {
            double lo = parse_one(text.substr(0, range_pos));
            double hi = parse_one(text.substr(range_pos + 2));
            if (lo != std::floor(lo) || hi != std::floor(hi) || hi < lo)
                throw ConfigError("bad range: " + text);
            for (double v = lo; v <= hi; v += 1.0) values.push_back(v);
            return values;
        }
        std::size_t start = 0;
        while (start <= text.size()) {
            auto comma = text.find(',', start);
            auto tok = text.substr(start, comma == std::string::npos
                                              ? std::string::npos
                                              : comma - start);
            if (!tok.empty()) values.push_back(parse_one(tok));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad numeric list: " + text);
    } catch (const std::out_of_range&) {
        throw ConfigError("numeric value out of range: " + text);
    }
    if (values.empty()) throw ConfigError("empty value list: " + text);
    return values;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / name,
                      std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + name + " in " + dir);
    out << content;
}

int run_simulate(const std::string& config_path, const std::string& preset,
                 const std::string& out_dir, std::optional<std::uint64_t> seed,
                 std::optional<unsigned> reps,
                 std::optional<std::uint64_t> slots,
                 std::optional<std::uint64_t> warmup,
                 const std::string& policy, unsigned threads) {
    ScenarioDocument doc = config_path.empty()
                               ? ScenarioDocument::preset(preset)
                               : ScenarioDocument::from_file(config_path);
    if (!out_dir.empty()) doc.output_dir = out_dir;
    if (seed) doc.base.master_seed = *seed;
    if (reps) doc.base.replications = *reps;
    if (slots) {
        doc.base.horizon = *slots;
        doc.base.warmup = *slots / 5;
    }
    if (warmup) doc.base.warmup = *warmup;
    if (!policy.empty()) doc.base.policy = policy_from_string(policy);
    doc.validate();

    auto result = run_scenario(doc, threads);
    write_scenario_outputs(result, doc.output_dir);
    std::cout << "wrote " << result.rows.size() << " result rows and "
              << result.leader_rows.size() << " leader rows to "
              << doc.output_dir << "/{results.csv,leader_block.csv,scenario.json}"
              << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"point-to-multipoint storage scheduling simulator"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate", "run a scenario from a config file or preset");
    std::string config_path, preset, out_dir, policy;
    std::optional<std::uint64_t> seed, slots, warmup;
    std::optional<unsigned> reps;
    unsigned threads = 0;
    auto* config_opt =
        simulate->add_option("--config", config_path, "scenario JSON document");
    auto* preset_opt = simulate->add_option(
        "--preset", preset, "built-in experiment: fig3, fig4 or fig5");
    config_opt->excludes(preset_opt);
    preset_opt->excludes(config_opt);
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_option("--seed", seed, "master seed");
    simulate->add_option("--reps", reps, "replication count");
    simulate->add_option("--slots", slots,
                         "slots per replication (warmup rescales to 20%)");
    simulate->add_option("--warmup", warmup, "warmup slots excluded from metrics");
    simulate->add_option("--policy", policy, "tie policy: spread, random or first");
    simulate->add_option("--threads", threads, "worker threads (0 = hardware)");

    // analytic
    auto* analytic = app.add_subcommand("analytic", "closed-form curves");
    analytic->require_subcommand(1);
    auto* erlang = analytic->add_subcommand(
        "erlang", "external blocking of the infinite-IO system");
    double erlang_lambda = 0.9;
    std::size_t erlang_chunks = 100;
    std::string erlang_buffers = "1..32", erlang_out = "out";
    erlang->add_option("--lambda", erlang_lambda, "arrival rate per slot")
        ->required();
    erlang->add_option("--T", erlang_chunks, "file chunks")->required();
    erlang->add_option("--N", erlang_buffers, "buffer sizes, e.g. 1..32 or 4,8")
        ->required();
    erlang->add_option("--out", erlang_out, "output directory");

    auto* leader = analytic->add_subcommand(
        "leader", "true-leader internal blocking by rank");
    std::string leader_pbd = "0.5", leader_mode = "coded", leader_out = "out";
    unsigned leader_w = 2, leader_t = 8, leader_s = 4;
    leader->add_option("--pbd", leader_pbd, "drive blocking, e.g. 0.5 or 0.1,0.5");
    leader->add_option("--W", leader_w, "replication factor");
    leader->add_option("--T", leader_t, "file chunks");
    leader->add_option("--s", leader_s, "stripe sets");
    leader->add_option("--mode", leader_mode, "coded or uncoded");
    leader->add_option("--out", leader_out, "output directory");

    // selftest
    auto* self = app.add_subcommand("selftest", "fast invariant suite");

    try {
        app.parse(argc, argv);

        if (*simulate) {
            if (config_path.empty() && preset.empty())
                throw ncsched::ConfigError("simulate needs --config or --preset");
            return run_simulate(config_path, preset, out_dir, seed, reps, slots,
                                warmup, policy, threads);
        }
        if (*erlang) {
            std::vector<unsigned> buffers;
            for (double v : parse_values(erlang_buffers)) {
                if (v < 1 || v != std::floor(v))
                    throw ncsched::ConfigError("--N values must be positive integers");
                buffers.push_back(unsigned(v));
            }
            auto rows = ncsched::analytic_erlang_rows(erlang_lambda,
                                                      erlang_chunks, buffers);
            write_file(erlang_out, "results.csv", ncsched::results_csv(rows));
            std::cout << "wrote " << rows.size() << " analytic rows to "
                      << erlang_out << "/results.csv" << std::endl;
            return 0;
        }
        if (*leader) {
            ncsched::StorageFormat format;
            if (leader_mode == "coded") format = ncsched::StorageFormat::Coded;
            else if (leader_mode == "uncoded")
                format = ncsched::StorageFormat::Uncoded;
            else
                throw ncsched::ConfigError("--mode must be coded or uncoded");
            auto rows = ncsched::analytic_leader_rows(
                parse_values(leader_pbd), leader_w, leader_t, leader_s, format);
            write_file(leader_out, "leader_block.csv",
                       ncsched::leader_block_csv(rows));
            std::cout << "wrote " << rows.size() << " analytic rows to "
                      << leader_out << "/leader_block.csv" << std::endl;
            return 0;
        }
        if (*self) {
            return ncsched::selftest(std::cout) == 0 ? 0 : 1;
        }
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? 0 : 2;
    } catch (const ncsched::ConfigError& err) {
        std::cerr << "configuration error: " << err.what() << std::endl;
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "configuration error: " << err.what() << std::endl;
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "runtime error: " << err.what() << std::endl;
        return 3;
    }
    return 0;
}
