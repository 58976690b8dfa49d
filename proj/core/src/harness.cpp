#include "ncsched/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "ncsched/sim.hpp"

namespace ncsched {

namespace {

using json = nlohmann::ordered_json;

std::string generator_name(CodeGenerator g) {
    switch (g) {
        case CodeGenerator::Vandermonde: return "VANDERMONDE";
        case CodeGenerator::Random: return "RANDOM";
        case CodeGenerator::PerDrive: return "PER_DRIVE";
    }
    return "?";
}

CodeGenerator generator_from(const std::string& name) {
    if (name == "VANDERMONDE") return CodeGenerator::Vandermonde;
    if (name == "RANDOM") return CodeGenerator::Random;
    if (name == "PER_DRIVE") return CodeGenerator::PerDrive;
    throw ConfigError("unknown generator: " + name);
}

const char* const kKnownKeys[] = {
    "id",        "T",      "W",       "s",             "N",
    "lambda",    "pbd",    "mode",    "compare_modes", "q",
    "generator", "H",      "horizon", "warmup",        "replications",
    "master_seed", "policy", "admit_before_service", "verify_innovation",
    "sweep",     "output"};

}  // namespace

ScenarioDocument ScenarioDocument::from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw ConfigError(std::string("scenario parse error: ") + err.what());
    }
    if (!doc.is_object()) throw ConfigError("scenario document must be an object");

    for (const auto& [key, value] : doc.items()) {
        bool known = false;
        for (const char* k : kKnownKeys) known = known || key == k;
        if (!known) throw ConfigError("unknown scenario field: " + key);
    }

    ScenarioDocument out;
    try {
        out.id = doc.value("id", out.id);
        out.base.chunks = doc.value("T", out.base.chunks);
        out.base.replication = doc.value("W", out.base.replication);
        out.base.stripe_sets = doc.value("s", out.base.stripe_sets);
        out.base.buffer = doc.value("N", out.base.buffer);
        out.base.lambda = doc.value("lambda", out.base.lambda);
        out.base.pbd = doc.value("pbd", out.base.pbd);
        out.base.field_order = doc.value("q", out.base.field_order);
        out.base.coded_chunks = doc.value("H", out.base.coded_chunks);
        out.base.horizon = doc.value("horizon", out.base.horizon);
        out.base.warmup =
            doc.value("warmup", std::uint64_t(out.base.horizon / 5));
        out.base.replications = doc.value("replications", out.base.replications);
        out.base.master_seed = doc.value("master_seed", out.base.master_seed);
        out.base.admit_before_service =
            doc.value("admit_before_service", out.base.admit_before_service);
        out.base.verify_innovation =
            doc.value("verify_innovation", out.base.verify_innovation);
        if (doc.contains("generator"))
            out.base.generator = generator_from(doc["generator"].get<std::string>());
        if (doc.contains("policy"))
            out.base.policy = policy_from_string(doc["policy"].get<std::string>());
        out.output_dir = doc.value("output", out.output_dir);

        if (doc.contains("mode") && doc.contains("compare_modes"))
            throw ConfigError("give either mode or compare_modes, not both");
        if (doc.contains("mode")) {
            out.modes = {mode_from_string(doc["mode"].get<std::string>())};
        } else if (doc.contains("compare_modes")) {
            out.modes.clear();
            for (const auto& m : doc["compare_modes"])
                out.modes.push_back(mode_from_string(m.get<std::string>()));
            if (out.modes.empty()) throw ConfigError("compare_modes is empty");
        }
        if (doc.contains("sweep")) {
            const auto& sw = doc["sweep"];
            SweepSpec spec;
            spec.parameter = sw.at("parameter").get<std::string>();
            for (const auto& v : sw.at("values"))
                spec.values.push_back(v.get<double>());
            if (spec.values.empty()) throw ConfigError("sweep values are empty");
            out.sweep = std::move(spec);
        }
    } catch (const nlohmann::json::exception& err) {
        throw ConfigError(std::string("scenario field error: ") + err.what());
    }
    out.base.mode = out.modes.front();
    out.validate();
    return out;
}

ScenarioDocument ScenarioDocument::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return from_json(text);
}

ScenarioDocument ScenarioDocument::preset(const std::string& name) {
    ScenarioDocument doc;
    doc.id = name;
    doc.base.master_seed = 1;
    if (name == "fig3") {
        // Blocking vs buffer size: lambda 0.9, T 100, W 2, R 8, s 4,
        // drive blocking 0.5, buffer swept over 1..32.
        doc.base.chunks = 100;
        doc.base.replication = 2;
        doc.base.stripe_sets = 4;
        doc.base.lambda = 0.9;
        doc.base.pbd = 0.5;
        doc.base.buffer = 1;
        doc.modes = {SimMode::UncodedFinite, SimMode::CodedFinite,
                     SimMode::UncodedInfinite};
        SweepSpec sweep;
        sweep.parameter = "N";
        for (int n = 1; n <= 32; ++n) sweep.values.push_back(n);
        doc.sweep = sweep;
    } else if (name == "fig4" || name == "fig5") {
        // Throughput and blocking (fig4) and leader blocking (fig5)
        // vs drive blocking probability: lambda 0.9, T 8, W 2, R 8, s 4.
        doc.base.chunks = 8;
        doc.base.replication = 2;
        doc.base.stripe_sets = 4;
        doc.base.lambda = 0.9;
        doc.base.buffer = 16;
        doc.modes = {SimMode::UncodedFinite, SimMode::CodedFinite};
        SweepSpec sweep;
        sweep.parameter = "pbd";
        for (int i = 1; i <= 9; ++i) sweep.values.push_back(0.1 * i);
        doc.sweep = sweep;
    } else {
        throw ConfigError("unknown preset: " + name +
                          " (expected fig3, fig4 or fig5)");
    }
    doc.base.mode = doc.modes.front();
    doc.validate();
    return doc;
}

std::string ScenarioDocument::to_json() const {
    json doc;
    doc["id"] = id;
    doc["T"] = base.chunks;
    doc["W"] = base.replication;
    doc["s"] = base.stripe_sets;
    doc["N"] = base.buffer;
    doc["lambda"] = base.lambda;
    doc["pbd"] = base.pbd;
    doc["q"] = base.field_order;
    doc["generator"] = generator_name(base.generator);
    doc["H"] = base.coded_chunks;
    doc["horizon"] = base.horizon;
    doc["warmup"] = base.warmup;
    doc["replications"] = base.replications;
    doc["master_seed"] = base.master_seed;
    doc["policy"] = to_string(base.policy);
    doc["admit_before_service"] = base.admit_before_service;
    doc["verify_innovation"] = base.verify_innovation;
    auto modes_array = json::array();
    for (auto m : modes) modes_array.push_back(to_string(m));
    doc["compare_modes"] = std::move(modes_array);
    if (sweep) {
        json sw;
        sw["parameter"] = sweep->parameter;
        sw["values"] = sweep->values;
        doc["sweep"] = std::move(sw);
    }
    doc["output"] = output_dir;
    return doc.dump(2);
}

namespace {

void apply_sweep(ScenarioConfig& cfg, const std::string& parameter, double v) {
    auto integral = [&](const char* name) {
        if (v < 0 || v != std::floor(v))
            throw ConfigError(std::string("sweep value for ") + name +
                              " must be a non-negative integer");
        return std::uint64_t(v);
    };
    if (parameter == "N") cfg.buffer = integral("N");
    else if (parameter == "lambda") cfg.lambda = v;
    else if (parameter == "pbd") cfg.pbd = v;
    else if (parameter == "T") cfg.chunks = integral("T");
    else if (parameter == "W") cfg.replication = integral("W");
    else if (parameter == "s") cfg.stripe_sets = integral("s");
    else if (parameter == "q") cfg.field_order = unsigned(integral("q"));
    else if (parameter == "H") cfg.coded_chunks = integral("H");
    else if (parameter == "horizon") cfg.horizon = integral("horizon");
    else if (parameter == "warmup") cfg.warmup = integral("warmup");
    else if (parameter == "replications")
        cfg.replications = unsigned(integral("replications"));
    else
        throw ConfigError(
            "sweep parameter must name a numeric scenario field, got: " +
            parameter);
}

}  // namespace

ScenarioConfig ScenarioDocument::cell_config(
    SimMode mode, std::optional<double> sweep_value) const {
    ScenarioConfig cfg = base;
    cfg.mode = mode;
    if (sweep_value) {
        if (!sweep) throw ConfigError("sweep value without a sweep spec");
        apply_sweep(cfg, sweep->parameter, *sweep_value);
    }
    return cfg;
}

void ScenarioDocument::validate() const {
    if (modes.empty()) throw ConfigError("at least one mode is required");
    std::vector<std::optional<double>> values{std::nullopt};
    if (sweep) {
        values.clear();
        for (double v : sweep->values) values.push_back(v);
    }
    for (auto mode : modes)
        for (auto v : values) cell_config(mode, v).validate();
}

ScenarioResult run_scenario(const ScenarioDocument& doc, unsigned threads) {
    doc.validate();

    struct Cell {
        SimMode mode;
        std::optional<double> sweep_value;
        ScenarioConfig cfg;
    };
    std::vector<Cell> cells;
    std::vector<std::optional<double>> values{std::nullopt};
    if (doc.sweep) {
        values.clear();
        for (double v : doc.sweep->values) values.push_back(v);
    }
    for (auto mode : doc.modes)
        for (auto v : values)
            cells.push_back({mode, v, doc.cell_config(mode, v)});

    ScenarioResult result;
    result.doc = doc;
    result.cell_metrics.assign(cells.size(), {});
    for (std::size_t c = 0; c < cells.size(); ++c)
        result.cell_metrics[c].resize(cells[c].cfg.replications);

    struct Task {
        std::size_t cell;
        unsigned rep;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (unsigned r = 0; r < cells[c].cfg.replications; ++r)
            tasks.push_back({c, r});

    unsigned workers = threads ? threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = unsigned(std::min<std::size_t>(workers, tasks.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                auto [c, r] = tasks[i];
                result.cell_metrics[c][r] = run_replication(cells[c].cfg, r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t c = 0; c < cells.size(); ++c) {
        const Cell& cell = cells[c];
        ResultRow row;
        row.scenario = doc.id;
        row.mode = cell.mode;
        row.sweep_value = cell.sweep_value;
        row.cfg = cell.cfg;
        row.stats = summarize(result.cell_metrics[c]);
        if (cell.mode == SimMode::UncodedInfinite)
            row.analytic_ext_block =
                erlang_blocking(cell.cfg.lambda, double(cell.cfg.chunks),
                                unsigned(cell.cfg.buffer));
        result.rows.push_back(row);

        if (cell.mode == SimMode::UncodedInfinite) continue;
        for (const auto& point : row.stats->leader_curve) {
            LeaderRow lr;
            lr.mode = cell.mode;
            lr.pbd = cell.cfg.pbd;
            lr.key = point.key;
            lr.prob = point.prob;
            lr.se = point.se;
            lr.n_obs = point.n_obs;
            unsigned w = unsigned(cell.cfg.replication);
            unsigned t = unsigned(cell.cfg.chunks);
            unsigned s = unsigned(cell.cfg.stripe_sets);
            if (cell.mode == SimMode::UncodedFinite) {
                lr.analytic_value = leader_block_striped_uncoded(
                    cell.cfg.pbd, w, s, unsigned(point.key));
            } else {
                auto bounds = leader_block_striped_coded_bounds(
                    cell.cfg.pbd, w, s, t, unsigned(point.key));
                lr.analytic_lb = bounds.lower;
                lr.analytic_ub = bounds.upper;
                if (s == t)
                    lr.analytic_value =
                        leader_block_single(cell.cfg.pbd, w, t,
                                            unsigned(point.key),
                                            StorageFormat::Coded);
            }
            result.leader_rows.push_back(lr);
        }
    }
    return result;
}

std::vector<ResultRow> analytic_erlang_rows(
    double lambda, std::size_t chunks, const std::vector<unsigned>& buffers) {
    std::vector<ResultRow> rows;
    for (unsigned n : buffers) {
        ResultRow row;
        row.scenario = "analytic";
        row.mode = SimMode::UncodedInfinite;
        row.sweep_value = double(n);
        row.cfg.chunks = chunks;
        row.cfg.stripe_sets = chunks;
        row.cfg.buffer = n;
        row.cfg.lambda = lambda;
        row.cfg.mode = SimMode::UncodedInfinite;
        row.cfg.horizon = 0;
        row.cfg.warmup = 0;
        row.cfg.replications = 0;
        row.analytic_ext_block = erlang_blocking(lambda, double(chunks), n);
        rows.push_back(row);
    }
    return rows;
}

std::vector<LeaderRow> analytic_leader_rows(const std::vector<double>& pbds,
                                            unsigned replication,
                                            unsigned chunks,
                                            unsigned stripe_sets,
                                            StorageFormat format) {
    std::vector<LeaderRow> rows;
    for (double pbd : pbds) {
        if (format == StorageFormat::Uncoded) {
            for (unsigned r = 0; r < stripe_sets; ++r) {
                LeaderRow row;
                row.mode = SimMode::UncodedFinite;
                row.pbd = pbd;
                row.key = int(r);
                row.analytic_value = leader_block_striped_uncoded(
                    pbd, replication, stripe_sets, r);
                rows.push_back(row);
            }
        } else {
            for (unsigned r = 0; r < chunks; ++r) {
                LeaderRow row;
                row.mode = SimMode::CodedFinite;
                row.pbd = pbd;
                row.key = int(r);
                auto bounds = leader_block_striped_coded_bounds(
                    pbd, replication, stripe_sets, chunks, r);
                row.analytic_lb = bounds.lower;
                row.analytic_ub = bounds.upper;
                if (stripe_sets == chunks)
                    row.analytic_value = leader_block_single(
                        pbd, replication, chunks, r, StorageFormat::Coded);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) {
    return v ? fmt(*v) : std::string{};
}

}  // namespace

std::string results_csv(const std::vector<ResultRow>& rows) {
    std::string out =
        "scenario,mode,sweep_value,N,T,W,R,s,lambda,pbd,reps,slots,"
        "ext_block_prob,ext_block_se,throughput_norm,throughput_norm_se,"
        "throughput_raw,throughput_raw_se,analytic_ext_block\n";
    for (const auto& row : rows) {
        out += row.scenario;
        out += ',' + to_string(row.mode);
        out += ',' + fmt(row.sweep_value);
        out += ',' + std::to_string(row.cfg.buffer);
        out += ',' + std::to_string(row.cfg.chunks);
        out += ',' + std::to_string(row.cfg.replication);
        out += ',' + std::to_string(row.cfg.drives());
        out += ',' + std::to_string(row.cfg.stripe_sets);
        out += ',' + fmt(row.cfg.lambda);
        out += ',' + fmt(row.cfg.pbd);
        out += ',' + std::to_string(row.cfg.replications);
        out += ',' + std::to_string(row.cfg.horizon);
        if (row.stats) {
            out += ',' + fmt(row.stats->ext_block);
            out += ',' + fmt(row.stats->ext_block_se);
            out += ',' + fmt(row.stats->throughput_norm);
            out += ',' + fmt(row.stats->throughput_norm_se);
            out += ',' + fmt(row.stats->throughput_raw);
            out += ',' + fmt(row.stats->throughput_raw_se);
        } else {
            out += ",,,,,,";
        }
        out += ',' + fmt(row.analytic_ext_block);
        out += '\n';
    }
    return out;
}

std::string leader_block_csv(const std::vector<LeaderRow>& rows) {
    std::string out =
        "mode,pbd,rank,block_prob,stderr,n_obs,analytic_value,analytic_lb,"
        "analytic_ub\n";
    for (const auto& row : rows) {
        out += to_string(row.mode);
        out += ',' + fmt(row.pbd);
        out += ',' + std::to_string(row.key);
        out += ',' + fmt(row.prob);
        out += ',' + fmt(row.se);
        out += ',' + std::to_string(row.n_obs);
        out += ',' + fmt(row.analytic_value);
        out += ',' + fmt(row.analytic_lb);
        out += ',' + fmt(row.analytic_ub);
        out += '\n';
    }
    return out;
}

void write_scenario_outputs(const ScenarioResult& result,
                            const std::string& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(std::filesystem::path(dir) / name,
                          std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + name + " in " + dir);
        out << content;
    };
    write("results.csv", results_csv(result.rows));
    write("leader_block.csv", leader_block_csv(result.leader_rows));
    write("scenario.json", result.doc.to_json() + "\n");
}

}  // namespace ncsched
