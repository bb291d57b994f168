#include "projcool/harness.hpp"

#include "projcool/pauli.hpp"

#include <json.hpp>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace projcool {

namespace fs = std::filesystem;
using njson = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kSaltInitial = 1;
constexpr std::uint64_t kSaltNoise = 2;

constexpr const char* kTableTag = "# projcool-table v1\n";
constexpr const char* kGridTag = "# projcool-grid v1\n";

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_text_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

njson model_to_json(const ModelSpec& m) {
    njson j;
    j["name"] = m.name;
    j["chains"] = m.chains;
    j["L"] = m.half_extent;
    j["R"] = m.interior_half_extent;
    j["kinetic_scale"] = m.kinetic_scale;
    if (m.allow_sub_unit_kinetic_scale) j["allow_sub_unit_kinetic_scale"] = true;
    njson pot = njson::array();
    for (const auto& [n, v] : m.potential) pot.push_back(njson{n, v});
    j["potential"] = pot;
    if (m.chains == 2) {
        njson coup = njson::array();
        for (const auto& [nn, w] : m.coupling) coup.push_back(njson{nn.first, nn.second, w});
        j["coupling"] = coup;
    }
    return j;
}

ModelSpec model_from_json(const njson& j) {
    if (j.contains("preset")) {
        auto m = ModelSpec::preset(j.at("preset").get<std::string>(), j.value("L", 25),
                                   j.value("R", 5));
        if (!m) throw ConfigError("unknown model preset: " + j.at("preset").get<std::string>());
        if (j.contains("kinetic_scale")) m->kinetic_scale = j.at("kinetic_scale").get<double>();
        if (j.contains("allow_sub_unit_kinetic_scale"))
            m->allow_sub_unit_kinetic_scale = j.at("allow_sub_unit_kinetic_scale").get<bool>();
        return *m;
    }
    ModelSpec m;
    m.name = j.value("name", "custom");
    m.chains = j.value("chains", 1);
    m.half_extent = j.at("L").get<int>();
    m.interior_half_extent = j.at("R").get<int>();
    m.kinetic_scale = j.value("kinetic_scale", 1.0);
    m.allow_sub_unit_kinetic_scale = j.value("allow_sub_unit_kinetic_scale", false);
    m.potential.clear();
    for (const auto& e : j.value("potential", njson::array()))
        m.potential[e.at(0).get<int>()] += e.at(1).get<double>();
    for (const auto& e : j.value("coupling", njson::array()))
        m.coupling[{e.at(0).get<int>(), e.at(1).get<int>()}] += e.at(2).get<double>();
    return m;
}

njson schedule_to_json(const Schedule& s) {
    njson j;
    j["kind"] = to_string(s.kind);
    if (s.kind == Schedule::Kind::Adiabatic) j["t_final"] = s.total_time;
    if (s.kind == Schedule::Kind::ProjectedCooling) {
        j["kappa"] = s.kinetic_boost;
        j["tau"] = s.decay_time;
    }
    return j;
}

Schedule schedule_from_json(const njson& j) {
    const auto kind = schedule_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw ConfigError("unknown schedule kind: " + j.at("kind").get<std::string>());
    Schedule s;
    s.kind = *kind;
    if (s.kind == Schedule::Kind::Adiabatic) s.total_time = j.value("t_final", 12.0);
    if (s.kind == Schedule::Kind::ProjectedCooling) {
        s.kinetic_boost = j.value("kappa", 10.0);
        s.decay_time = j.value("tau", 3.6);
    }
    return s;
}

std::string epsilon_label(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", eps);
    return buf;
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string ExperimentConfig::to_json_string(int indent) const {
    njson j;
    j["experiment"] = experiment;
    j["model"] = model_to_json(model);
    j["schedule"] = schedule_to_json(schedule);
    j["method"] = to_string(method);
    j["initial"] = to_string(initial);
    j["dt"] = dt;
    j["steps"] = steps;
    j["adiabatic_sweep"] = adiabatic_sweep;
    j["epsilon"] = epsilon;
    j["seed"] = seed;
    j["noise_realizations"] = noise_realizations;
    j["threshold"] = threshold;
    j["engine"] = to_string(engine);
    j["midpoint_time"] = midpoint_time;
    j["output_dir"] = output_dir;
    return j.dump(indent) + "\n";
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
    njson j;
    try {
        j = njson::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    try {
        ExperimentConfig c;
        c.experiment = j.value("experiment", "custom");
        if (j.contains("model")) c.model = model_from_json(j.at("model"));
        if (j.contains("schedule")) c.schedule = schedule_from_json(j.at("schedule"));
        if (j.contains("method")) {
            const auto m = method_from_string(j.at("method").get<std::string>());
            if (!m) throw ConfigError("unknown method: " + j.at("method").get<std::string>());
            c.method = *m;
        }
        if (j.contains("initial")) {
            const auto k = initial_kind_from_string(j.at("initial").get<std::string>());
            if (!k) throw ConfigError("unknown initial kind: " + j.at("initial").get<std::string>());
            c.initial = *k;
        }
        c.dt = j.value("dt", 0.3);
        c.steps = j.value("steps", 40);
        c.adiabatic_sweep = j.value("adiabatic_sweep", false);
        c.epsilon = j.value("epsilon", 0.0);
        c.seed = j.value("seed", std::uint64_t{1});
        c.noise_realizations = j.value("noise_realizations", 1);
        c.threshold = j.value("threshold", 0.0);
        if (j.contains("engine")) {
            const auto e = engine_from_string(j.at("engine").get<std::string>());
            if (!e) throw ConfigError("unknown engine: " + j.at("engine").get<std::string>());
            c.engine = *e;
        }
        c.midpoint_time = j.value("midpoint_time", false);
        c.output_dir = j.value("output_dir", std::string{});
        if (!(c.dt > 0.0)) throw ConfigError("dt must be positive");
        if (c.steps < 0) throw ConfigError("steps must be nonnegative");
        if (c.epsilon < 0.0) throw ConfigError("epsilon must be nonnegative");
        if (c.noise_realizations < 1) throw ConfigError("noise_realizations must be >= 1");
        c.model.validate();
        return c;
    } catch (const njson::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
}

void ExperimentConfig::save(const fs::path& path) const { write_text_atomic(path, to_json_string()); }

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_string(buf.str());
}

RunSummary summarize(const std::string& curve, const Trajectory& trajectory, double threshold) {
    RunSummary s;
    s.curve = curve;
    s.threshold = threshold;
    if (trajectory.records.empty()) return s;
    s.final_overlap = trajectory.records.back().overlap;
    s.final_energy = trajectory.records.back().energy;
    s.final_norm = trajectory.records.back().norm;
    for (const auto& r : trajectory.records) {
        s.max_overlap = std::max(s.max_overlap, r.overlap);
        if (threshold > 0.0 && s.threshold_step < 0 && r.step >= 1 && r.overlap >= threshold)
            s.threshold_step = r.step;
    }
    return s;
}

void write_curve_csv(const fs::path& path, const Trajectory& trajectory) {
    std::string out = kTableTag;
    out += "step,t,overlap,norm,energy\n";
    for (const auto& r : trajectory.records) {
        out += std::to_string(r.step);
        out += ',';
        out += format_double(r.time);
        out += ',';
        out += format_double(r.overlap);
        out += ',';
        out += format_double(r.norm);
        out += ',';
        out += format_double(r.energy);
        out += '\n';
    }
    write_text_atomic(path, out);
}

void write_sweep_csv(const fs::path& path, const std::vector<SweepPoint>& points, double dt) {
    std::string out = kTableTag;
    out += "n_steps,t_final,overlap\n";
    for (const auto& p : points) {
        out += std::to_string(p.steps);
        out += ',';
        out += format_double(p.steps * dt);
        out += ',';
        out += format_double(p.final_overlap);
        out += '\n';
    }
    write_text_atomic(path, out);
}

void write_grid_csv(const fs::path& path, const Matrix& grid, int interior_half_extent) {
    const int r = interior_half_extent;
    std::string out = kGridTag;
    out += "n1";
    for (int n2 = -r; n2 <= r; ++n2) out += "," + std::to_string(n2);
    out += '\n';
    for (int n1 = -r; n1 <= r; ++n1) {
        out += std::to_string(n1);
        for (int n2 = -r; n2 <= r; ++n2) {
            out += ',';
            out += format_double(grid(n1 + r, n2 + r));
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

void write_manifest(const fs::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::string out = "format = projcool-manifest/1\n";
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    write_text_atomic(path, out);
}

namespace {

std::vector<std::pair<std::string, std::string>> config_manifest_entries(
    const ExperimentConfig& c, bool per_run_fields = true) {
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("experiment", c.experiment);
    e.emplace_back("model", c.model.name);
    e.emplace_back("chains", std::to_string(c.model.chains));
    e.emplace_back("L", std::to_string(c.model.half_extent));
    e.emplace_back("R", std::to_string(c.model.interior_half_extent));
    e.emplace_back("kinetic_scale", format_double(c.model.kinetic_scale));
    e.emplace_back("schedule", to_string(c.schedule.kind));
    if (c.schedule.kind == Schedule::Kind::Adiabatic)
        e.emplace_back("t_final", format_double(c.schedule.total_time));
    if (c.schedule.kind == Schedule::Kind::ProjectedCooling) {
        e.emplace_back("kappa", format_double(c.schedule.kinetic_boost));
        e.emplace_back("tau", format_double(c.schedule.decay_time));
    }
    if (per_run_fields) {
        e.emplace_back("method", to_string(c.method));
        e.emplace_back("initial", to_string(c.initial));
    }
    e.emplace_back("dt", format_double(c.dt));
    e.emplace_back("steps", std::to_string(c.steps));
    e.emplace_back("adiabatic_sweep", c.adiabatic_sweep ? "true" : "false");
    e.emplace_back("epsilon", format_double(c.epsilon));
    e.emplace_back("seed", std::to_string(c.seed));
    e.emplace_back("noise_realizations", std::to_string(c.noise_realizations));
    if (c.threshold > 0.0) e.emplace_back("threshold", format_double(c.threshold));
    e.emplace_back("engine", to_string(c.engine));
    e.emplace_back("midpoint_time", c.midpoint_time ? "true" : "false");
    return e;
}

void append_summary_entries(std::vector<std::pair<std::string, std::string>>& e,
                            const RunSummary& s) {
    const std::string p = "curve." + s.curve + ".";
    e.emplace_back(p + "final_overlap", format_double(s.final_overlap));
    e.emplace_back(p + "max_overlap", format_double(s.max_overlap));
    if (s.threshold > 0.0) {
        e.emplace_back(p + "threshold", format_double(s.threshold));
        e.emplace_back(p + "threshold_step", std::to_string(s.threshold_step));
    }
    e.emplace_back(p + "final_energy", format_double(s.final_energy));
    e.emplace_back(p + "final_norm", format_double(s.final_norm));
}

std::string curve_basename(const ExperimentConfig& c) {
    std::string name = c.experiment == "custom" ? "run" : c.experiment;
    name += std::string("_") + to_string(c.schedule.kind);
    name += std::string("_") + to_string(c.method);
    if (c.adiabatic_sweep)
        name += "_sweep";
    else
        name += std::string("_") + to_string(c.initial);
    if (c.epsilon > 0.0) name += "_eps" + epsilon_label(c.epsilon);
    return name;
}

// Mean of per-step record fields across noise realizations of one curve.
Trajectory average_trajectories(const std::vector<Trajectory>& trajs) {
    Trajectory out = trajs.front();
    const double inv = 1.0 / static_cast<double>(trajs.size());
    for (std::size_t k = 0; k < out.records.size(); ++k) {
        double overlap = 0, norm = 0, energy = 0, edge = 0;
        bool escaped = true;
        for (const auto& t : trajs) {
            overlap += t.records[k].overlap;
            norm += t.records[k].norm;
            energy += t.records[k].energy;
            edge += t.records[k].edge_weight;
            escaped = escaped && t.records[k].escaped;
        }
        out.records[k].overlap = overlap * inv;
        out.records[k].norm = norm * inv;
        out.records[k].energy = energy * inv;
        out.records[k].edge_weight = edge * inv;
        out.records[k].escaped = escaped;
    }
    return out;
}

}  // namespace

SingleRunResult run_single(const ExperimentConfig& config) {
    config.model.validate();
    if (config.adiabatic_sweep && config.schedule.kind != Schedule::Kind::Adiabatic)
        throw ConfigError("adiabatic_sweep requires an adiabatic schedule");
    ModelSystem system(config.model);
    EvolveOptions opt;
    opt.method = config.method;
    opt.dt = config.dt;
    opt.steps = config.steps;
    opt.engine = config.engine;
    opt.midpoint_time = config.midpoint_time;

    SingleRunResult res;
    res.artifact.config = config;
    res.artifact.curve_name = curve_basename(config);

    if (config.adiabatic_sweep) {
        const NoiseModel noise{config.epsilon, mix_seed(config.seed, kSaltNoise)};
        res.artifact.sweep = run_adiabatic_sweep(system, opt, config.steps, noise);
        RunSummary s;
        s.curve = res.artifact.curve_name;
        s.threshold = config.threshold;
        for (const auto& p : res.artifact.sweep) {
            s.max_overlap = std::max(s.max_overlap, p.final_overlap);
            if (config.threshold > 0.0 && s.threshold_step < 0 &&
                p.final_overlap >= config.threshold)
                s.threshold_step = p.steps;
        }
        if (!res.artifact.sweep.empty()) s.final_overlap = res.artifact.sweep.back().final_overlap;
        res.artifact.summary = s;
    } else {
        const StateVector initial =
            initial_state(config.model, config.initial, mix_seed(config.seed, kSaltInitial));
        const int runs = config.epsilon > 0.0 ? config.noise_realizations : 1;
        std::vector<FamilyMember> members;
        members.reserve(runs);
        for (int r = 0; r < runs; ++r)
            members.push_back(
                {initial, NoiseModel{config.epsilon,
                                     mix_seed(config.seed, kSaltNoise * 1000 + static_cast<std::uint64_t>(r))}});
        const Schedule schedule = config.schedule;
        auto trajs = evolve_family(system, schedule, opt, members);
        res.artifact.trajectory = runs > 1 ? average_trajectories(trajs) : std::move(trajs[0]);
        res.artifact.summary =
            summarize(res.artifact.curve_name, res.artifact.trajectory, config.threshold);
    }

    if (!config.output_dir.empty()) {
        const fs::path dir = config.output_dir;
        const fs::path csv = dir / (res.artifact.curve_name + ".csv");
        if (config.adiabatic_sweep)
            write_sweep_csv(csv, res.artifact.sweep, config.dt);
        else
            write_curve_csv(csv, res.artifact.trajectory);
        auto entries = config_manifest_entries(config);
        append_summary_entries(entries, res.artifact.summary);
        const fs::path manifest = dir / (res.artifact.curve_name + ".manifest.txt");
        write_manifest(manifest, entries);
        res.files = {csv, manifest};
    }
    return res;
}

// ---------------------------------------------------------------------------
// Figures

FigureResult run_fig1(const Fig1Options& options) {
    ModelSpec spec = ModelSpec::model1a();
    const int L = minimum_half_extent(spec, Schedule::constant(), options.total_time);
    spec = ModelSpec::model1a(L, spec.interior_half_extent);
    ModelSystem system(spec);
    const int steps = static_cast<int>(std::lround(options.total_time / options.dt));

    std::vector<FamilyMember> members;
    for (int k = 1; k <= options.runs; ++k)
        members.push_back(
            {random_interior_state(spec, mix_seed(options.seed, 100 + static_cast<std::uint64_t>(k))),
             NoiseModel{}});
    EvolveOptions opt;
    opt.method = StepMethod::Full;
    opt.dt = options.dt;
    opt.steps = steps;
    auto trajs = evolve_family(system, Schedule::constant(), opt, members);

    FigureResult out;
    ExperimentConfig echo;
    echo.experiment = "fig1";
    echo.model = spec;
    echo.schedule = Schedule::constant();
    echo.initial = InitialStateKind::Random;
    echo.dt = options.dt;
    echo.steps = steps;
    echo.seed = options.seed;
    echo.threshold = 0.99;
    auto entries = config_manifest_entries(echo);
    for (int k = 0; k < options.runs; ++k) {
        RunArtifact art;
        art.config = echo;
        art.curve_name = "fig1_run" + std::to_string(k + 1);
        art.trajectory = std::move(trajs[k]);
        art.summary = summarize(art.curve_name, art.trajectory, 0.99);
        append_summary_entries(entries, art.summary);
        if (!options.output_dir.empty()) {
            const fs::path csv = options.output_dir / (art.curve_name + ".csv");
            write_curve_csv(csv, art.trajectory);
            out.files.push_back(csv);
        }
        out.artifacts.push_back(std::move(art));
    }
    if (!options.output_dir.empty()) {
        const fs::path manifest = options.output_dir / "fig1.manifest.txt";
        write_manifest(manifest, entries);
        out.files.push_back(manifest);
    }
    return out;
}

FigureResult run_fig2(Fig2Panel panel, const Fig2Options& options) {
    const bool panel_a = panel == Fig2Panel::A;
    const ModelSpec spec = panel_a ? ModelSpec::model1b() : ModelSpec::model2();
    const double threshold = panel_a ? 0.94 : 0.85;
    ModelSystem system(spec);

    FigureResult out;
    ExperimentConfig echo;
    echo.experiment = panel_a ? "fig2a" : "fig2b";
    echo.model = spec;
    echo.schedule = Schedule::projected_cooling();
    echo.dt = options.dt;
    echo.steps = options.max_steps;
    echo.seed = options.seed;
    echo.epsilon = options.epsilon;
    echo.noise_realizations = options.noise_realizations;
    echo.threshold = threshold;
    auto entries = config_manifest_entries(echo, /*per_run_fields=*/false);

    auto emit_curve = [&](const std::string& name, const Trajectory& traj) {
        RunArtifact art;
        art.config = echo;
        art.curve_name = name;
        art.trajectory = traj;
        art.summary = summarize(name, traj, threshold);
        append_summary_entries(entries, art.summary);
        if (!options.output_dir.empty()) {
            const fs::path csv = options.output_dir / (name + ".csv");
            write_curve_csv(csv, art.trajectory);
            out.files.push_back(csv);
        }
        out.artifacts.push_back(std::move(art));
    };

    // Adiabatic baseline: independent runs with t_F = N_t dt, point initial.
    EvolveOptions ae_opt;
    ae_opt.dt = options.dt;
    auto sweep = run_adiabatic_sweep(system, ae_opt, options.max_steps);
    {
        RunArtifact art;
        art.config = echo;
        art.curve_name = "ae_full_point";
        art.sweep = sweep;
        RunSummary s;
        s.curve = art.curve_name;
        for (const auto& p : sweep) s.max_overlap = std::max(s.max_overlap, p.final_overlap);
        s.final_overlap = sweep.back().final_overlap;
        art.summary = s;
        append_summary_entries(entries, s);
        if (!options.output_dir.empty()) {
            const fs::path csv = options.output_dir / (art.curve_name + ".csv");
            write_sweep_csv(csv, sweep, options.dt);
            out.files.push_back(csv);
        }
        out.artifacts.push_back(std::move(art));
    }

    // Cooled curves, one lockstep family per stepping method.
    struct Key {
        InitialStateKind initial;
        double eps;
    };
    for (const StepMethod method : {StepMethod::Full, StepMethod::Trotter}) {
        std::vector<FamilyMember> members;
        std::vector<Key> keys;
        for (const InitialStateKind initial : {InitialStateKind::Point, InitialStateKind::Spread}) {
            const StateVector init = initial_state(spec, initial);
            members.push_back({init, NoiseModel{}});
            keys.push_back({initial, 0.0});
            if (options.epsilon > 0.0) {
                for (int r = 0; r < options.noise_realizations; ++r) {
                    const std::uint64_t salt = 10000 * (method == StepMethod::Full ? 1 : 2) +
                                               1000 * (initial == InitialStateKind::Point ? 1 : 2) +
                                               static_cast<std::uint64_t>(r);
                    members.push_back({init, NoiseModel{options.epsilon, mix_seed(options.seed, salt)}});
                    keys.push_back({initial, options.epsilon});
                }
            }
        }
        EvolveOptions opt;
        opt.method = method;
        opt.dt = options.dt;
        opt.steps = options.max_steps;
        auto trajs = evolve_family(system, Schedule::projected_cooling(), opt, members);

        std::vector<double> eps_values{0.0};
        if (options.epsilon > 0.0) eps_values.push_back(options.epsilon);
        for (const InitialStateKind initial : {InitialStateKind::Point, InitialStateKind::Spread}) {
            for (const double eps : eps_values) {
                std::vector<Trajectory> group;
                for (std::size_t i = 0; i < keys.size(); ++i)
                    if (keys[i].initial == initial && keys[i].eps == eps)
                        group.push_back(trajs[i]);
                const std::string name = std::string("pc_") + to_string(method) + "_" +
                                         to_string(initial) + "_eps" + epsilon_label(eps);
                emit_curve(name, group.size() > 1 ? average_trajectories(group) : group.front());
            }
        }
    }

    if (!options.output_dir.empty()) {
        const fs::path manifest =
            options.output_dir / (std::string(panel_a ? "fig2a" : "fig2b") + ".manifest.txt");
        write_manifest(manifest, entries);
        out.files.push_back(manifest);
    }
    return out;
}

namespace {

Matrix interior_magnitude_grid(const StateVector& psi, const InteriorProjector& proj) {
    const int r = proj.interior_half_extent;
    const int n = 2 * r + 1;
    Matrix grid(n, n);
    for (int n1 = -r; n1 <= r; ++n1)
        for (int n2 = -r; n2 <= r; ++n2)
            grid(n1 + r, n2 + r) = std::abs(psi.amps[psi.shape.index_of(n1, n2)]);
    grid /= grid.norm();
    return grid;
}

}  // namespace

Fig3Result run_fig3(const Fig3Options& options) {
    const ModelSpec spec = ModelSpec::model2();
    ModelSystem system(spec);
    const InteriorProjector& proj = system.projector();

    Fig3Result res;
    res.exact = interior_magnitude_grid(system.exact_ground_state(), proj);

    EvolveOptions opt;
    opt.dt = options.dt;
    opt.steps = options.steps;
    const Trajectory ae = evolve(system, Schedule::adiabatic(options.steps * options.dt), opt,
                                 point_state(spec));
    res.adiabatic = interior_magnitude_grid(ae.final_state, proj);

    const Trajectory pc =
        evolve(system, Schedule::projected_cooling(), opt, spread_state(spec));
    res.cooled = interior_magnitude_grid(pc.final_state, proj);

    res.cooled_vs_exact = (res.exact.array() * res.cooled.array()).sum();
    res.adiabatic_vs_exact = (res.exact.array() * res.adiabatic.array()).sum();

    if (!options.output_dir.empty()) {
        const int r = proj.interior_half_extent;
        const fs::path e = options.output_dir / "fig3_exact.csv";
        const fs::path a = options.output_dir / "fig3_adiabatic.csv";
        const fs::path c = options.output_dir / "fig3_cooled.csv";
        write_grid_csv(e, res.exact, r);
        write_grid_csv(a, res.adiabatic, r);
        write_grid_csv(c, res.cooled, r);
        res.files = {e, a, c};
        const fs::path manifest = options.output_dir / "fig3.manifest.txt";
        write_manifest(manifest, {{"experiment", "fig3"},
                                  {"model", spec.name},
                                  {"dt", format_double(options.dt)},
                                  {"steps", std::to_string(options.steps)},
                                  {"cooled_vs_exact", format_double(res.cooled_vs_exact)},
                                  {"adiabatic_vs_exact", format_double(res.adiabatic_vs_exact)}});
        res.files.push_back(manifest);
    }
    return res;
}

SweepGridResult run_sweep(const std::string& sweep_json, const fs::path& output_dir_override) {
    njson j;
    try {
        j = njson::parse(sweep_json);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("sweep parse error: ") + e.what());
    }
    if (!j.contains("base")) throw ConfigError("sweep config needs a \"base\" experiment");
    ExperimentConfig base = ExperimentConfig::from_json_string(j.at("base").dump());
    if (!output_dir_override.empty()) base.output_dir = output_dir_override.string();

    static const std::vector<std::string> kGridKeys = {"epsilon", "seed",  "dt",   "steps",
                                                       "kinetic_scale", "kappa", "tau"};
    std::vector<std::pair<std::string, std::vector<double>>> axes;
    const njson grid = j.value("grid", njson::object());
    for (const auto& key : kGridKeys) {
        if (!grid.contains(key)) continue;
        std::vector<double> values;
        for (const auto& v : grid.at(key)) values.push_back(v.get<double>());
        if (values.empty()) throw ConfigError("sweep grid axis \"" + key + "\" is empty");
        axes.emplace_back(key, values);
    }
    for (const auto& [key, _] : grid.items())
        if (std::find(kGridKeys.begin(), kGridKeys.end(), key) == kGridKeys.end())
            throw ConfigError("unknown sweep grid axis: " + key);

    SweepGridResult out;
    std::string summary = kTableTag;
    summary += "combo";
    for (const auto& [key, _] : axes) summary += "," + key;
    summary += ",final_overlap,max_overlap\n";

    std::vector<std::size_t> idx(axes.size(), 0);
    std::size_t total = 1;
    for (const auto& [_, values] : axes) total *= values.size();
    for (std::size_t combo = 0; combo < total; ++combo) {
        ExperimentConfig c = base;
        std::string label;
        std::size_t rest = combo;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const auto& [key, values] = axes[a];
            const double v = values[rest % values.size()];
            rest /= values.size();
            if (key == "epsilon") c.epsilon = v;
            else if (key == "seed") c.seed = static_cast<std::uint64_t>(v);
            else if (key == "dt") c.dt = v;
            else if (key == "steps") c.steps = static_cast<int>(v);
            else if (key == "kinetic_scale") c.model.kinetic_scale = v;
            else if (key == "kappa") c.schedule.kinetic_boost = v;
            else if (key == "tau") c.schedule.decay_time = v;
            label += "_" + key + epsilon_label(v);
        }
        c.experiment = base.experiment == "custom" ? "sweep" + label : base.experiment + label;
        auto r = run_single(c);
        summary += "sweep" + label;
        rest = combo;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const auto& [key, values] = axes[a];
            summary += "," + format_double(values[rest % values.size()]);
            rest /= values.size();
        }
        summary += "," + format_double(r.artifact.summary.final_overlap);
        summary += "," + format_double(r.artifact.summary.max_overlap) + "\n";
        out.files.insert(out.files.end(), r.files.begin(), r.files.end());
        out.artifacts.push_back(std::move(r.artifact));
    }
    if (!base.output_dir.empty()) {
        const fs::path p = fs::path(base.output_dir) / "sweep_summary.csv";
        write_text_atomic(p, summary);
        out.files.push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Acceptance checks

bool CheckReport::all_passed() const {
    for (const auto& item : items)
        if (!item.passed) return false;
    return true;
}

std::string format_report(const CheckReport& report) {
    std::string out;
    for (const auto& item : report.items) {
        char line[64];
        std::snprintf(line, sizeof line, " (%.1fs)\n", item.seconds);
        out += std::string(item.passed ? "[PASS] " : "[FAIL] ") + item.name + ": " + item.detail +
               line;
    }
    out += report.all_passed() ? "ALL CHECKS PASSED\n" : "SOME CHECKS FAILED\n";
    return out;
}

CheckItem check_panel_thresholds(const std::string& name, const ModelSpec& spec,
                                 double pc_threshold, double ae_ceiling, double eps,
                                 int noise_seed_count, std::uint64_t root_seed, int max_steps,
                                 double dt, double runtime_limit_seconds) {
    Stopwatch timer;
    CheckItem item;
    item.name = name;
    std::vector<std::string> fails;
    ModelSystem system(spec);

    auto max_overlap = [&](const Trajectory& t) {
        double best = 0.0;
        for (const auto& r : t.records)
            if (r.step >= 1) best = std::max(best, r.overlap);
        return best;
    };

    for (const StepMethod method : {StepMethod::Full, StepMethod::Trotter}) {
        std::vector<FamilyMember> members;
        std::vector<std::string> labels;
        for (const InitialStateKind initial : {InitialStateKind::Point, InitialStateKind::Spread}) {
            const StateVector init = initial_state(spec, initial);
            members.push_back({init, NoiseModel{}});
            labels.push_back(std::string(to_string(method)) + "/" + to_string(initial) + " eps=0");
            for (int sdx = 1; sdx <= noise_seed_count; ++sdx) {
                const std::uint64_t salt = 10000 * (method == StepMethod::Full ? 1 : 2) +
                                           1000 * (initial == InitialStateKind::Point ? 1 : 2) +
                                           static_cast<std::uint64_t>(sdx);
                members.push_back({init, NoiseModel{eps, mix_seed(root_seed, salt)}});
                labels.push_back(std::string(to_string(method)) + "/" + to_string(initial) +
                                 " eps=" + epsilon_label(eps) + " seed" + std::to_string(sdx));
            }
        }
        EvolveOptions opt;
        opt.method = method;
        opt.dt = dt;
        opt.steps = max_steps;
        const auto trajs = evolve_family(system, Schedule::projected_cooling(), opt, members);
        for (std::size_t i = 0; i < trajs.size(); ++i) {
            const double best = max_overlap(trajs[i]);
            if (best < pc_threshold) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "pc %s max overlap %.4f < %.2f", labels[i].c_str(),
                              best, pc_threshold);
                fails.push_back(buf);
            }
        }
    }

    EvolveOptions ae_opt;
    ae_opt.dt = dt;
    const auto sweep = run_adiabatic_sweep(system, ae_opt, max_steps);
    double ae_max = 0.0;
    for (const auto& p : sweep) ae_max = std::max(ae_max, p.final_overlap);
    if (ae_max > ae_ceiling) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "ae sweep max %.4f exceeds ceiling %.2f", ae_max, ae_ceiling);
        fails.push_back(buf);
    }

    item.seconds = timer.seconds();
    if (item.seconds > runtime_limit_seconds) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "runtime %.1fs exceeds %.0fs target", item.seconds,
                      runtime_limit_seconds);
        fails.push_back(buf);
    }

    if (fails.empty()) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "all cooled variants reached %.2f within %d steps; ae max %.4f <= %.2f",
                      pc_threshold, max_steps, ae_max, ae_ceiling);
        item.passed = true;
        item.detail = buf;
    } else {
        item.passed = false;
        std::string d;
        for (std::size_t i = 0; i < fails.size(); ++i) d += (i ? "; " : "") + fails[i];
        item.detail = d;
    }
    return item;
}

namespace {

CheckItem check_fixed_point(std::uint64_t root_seed) {
    Stopwatch timer;
    CheckItem item;
    item.name = "criterion 3: fixed point of projected evolution";
    const double dt = 0.25;

    auto run_family = [&](double total_time) {
        ModelSpec spec = ModelSpec::model1a();
        const int L = minimum_half_extent(spec, Schedule::constant(), total_time);
        spec = ModelSpec::model1a(L, spec.interior_half_extent);
        ModelSystem system(spec);
        std::vector<FamilyMember> members;
        for (int k = 1; k <= 5; ++k)
            members.push_back({random_interior_state(
                                   spec, mix_seed(root_seed, 100 + static_cast<std::uint64_t>(k))),
                               NoiseModel{}});
        EvolveOptions opt;
        opt.dt = dt;
        opt.steps = static_cast<int>(std::lround(total_time / dt));
        return evolve_family(system, Schedule::constant(), opt, members);
    };

    const auto trajs = run_family(50.0);
    std::string detail = "O(50) =";
    bool ok = true;
    double worst_dip = 0.0;
    for (const auto& t : trajs) {
        const double o50 = t.records.back().overlap;
        detail += " " + std::to_string(o50).substr(0, 6);
        if (!(o50 > 0.99)) ok = false;
        // centered moving average over a 5-time-unit window
        const int half = static_cast<int>(std::lround(5.0 / dt)) / 2;
        const int n = static_cast<int>(t.records.size());
        std::vector<double> sm(n);
        for (int i = 0; i < n; ++i) {
            const int a = std::max(0, i - half), b = std::min(n - 1, i + half);
            double acc = 0.0;
            for (int k = a; k <= b; ++k) acc += t.records[k].overlap;
            sm[i] = acc / (b - a + 1);
        }
        for (int i = 0; i + 1 < n; ++i) worst_dip = std::min(worst_dip, sm[i + 1] - sm[i]);
    }
    if (worst_dip < -1e-12) ok = false;
    detail += " (need > 0.99); max smoothed dip " + format_double(worst_dip);

    // Convergence diagnostic: first time each seed crosses 0.99 in a longer run.
    const auto long_trajs = run_family(150.0);
    detail += "; 0.99 crossed at t =";
    for (const auto& t : long_trajs) {
        double tc = -1.0;
        for (const auto& r : t.records)
            if (r.overlap > 0.99) {
                tc = r.time;
                break;
            }
        detail += tc < 0 ? " never" : " " + std::to_string(tc).substr(0, 5);
    }

    item.passed = ok;
    item.detail = detail;
    item.seconds = timer.seconds();
    return item;
}

CheckItem check_oracles() {
    Stopwatch timer;
    CheckItem item;
    item.name = "criterion 4: spectral oracles";
    std::vector<std::string> fails;

    const auto s1a = ground_state(build_hamiltonian(ModelSpec::model1a(200, 5)));
    const double analytic = 1.0 - std::numbers::sqrt2;
    if (std::abs(s1a.eigenvalues[0] - analytic) > 1e-4)
        fails.push_back("single-well ground energy " + format_double(s1a.eigenvalues[0]) +
                        " not within 1e-4 of " + format_double(analytic));

    const ModelSpec m1b = ModelSpec::model1b();
    const auto c1b = count_localized_states(build_hamiltonian(m1b), build_projector(m1b));
    if (c1b.count != 4)
        fails.push_back("four-well chain: expected 4 localized states, got " +
                        std::to_string(c1b.count));

    const ModelSpec m2 = ModelSpec::model2();
    const auto c2 = count_localized_states(build_hamiltonian(m2), build_projector(m2));
    if (c2.count != 4)
        fails.push_back("two-particle model: expected 4 localized states, got " +
                        std::to_string(c2.count));

    ModelSpec boosted = ModelSpec::model1b();
    boosted.kinetic_scale = 10.0;
    const auto cb = count_localized_states(build_hamiltonian(boosted), build_projector(boosted));
    if (cb.count > 1)
        fails.push_back("kinetic scale 10 left " + std::to_string(cb.count) +
                        " localized states, expected <= 1");

    item.passed = fails.empty();
    if (item.passed) {
        item.detail = "ground energy within 1e-4 of analytic; censuses 4/4/" +
                      std::to_string(cb.count) + " as expected";
    } else {
        for (std::size_t i = 0; i < fails.size(); ++i)
            item.detail += (i ? "; " : "") + fails[i];
    }
    item.seconds = timer.seconds();
    return item;
}

CheckItem check_qubit_equivalence() {
    Stopwatch timer;
    CheckItem item;
    item.name = "criterion 5: qubit-sector equivalence";
    std::vector<std::string> fails;

    double dev_single = 0.0;
    for (const char* preset : {"model1a", "model1b"}) {
        const ModelSpec spec = *ModelSpec::preset(preset, 3, 2);
        const auto hq = build_chain_pauli(3, spec.potential);
        const auto restricted = sector_restrict(hq, spec.shape());
        const double dev =
            (restricted.mat - build_hamiltonian(spec).mat).cwiseAbs().maxCoeff();
        dev_single = std::max(dev_single, dev);
        if (dev > 1e-12)
            fails.push_back(std::string(preset) + " single-chain deviation " + format_double(dev));
    }

    const ModelSpec m2 = ModelSpec::model2(2, 1);
    const auto hq2 = build_two_chain_pauli(2, m2.potential, m2.coupling);
    const auto restricted2 = sector_restrict(hq2, m2.shape());
    Matrix delta = build_hamiltonian(m2).mat - restricted2.mat;
    const double shift = delta.trace() / delta.rows();
    delta.diagonal().array() -= shift;
    const double dev2 = delta.cwiseAbs().maxCoeff();
    if (dev2 > 1e-12)
        fails.push_back("two-chain deviation " + format_double(dev2) +
                        " beyond an additive identity");

    item.passed = fails.empty();
    item.detail = item.passed ? "single-chain max deviation " + format_double(dev_single) +
                                    "; two-chain max deviation " + format_double(dev2) +
                                    " after identity shift " + format_double(shift)
                              : "";
    for (std::size_t i = 0; i < fails.size(); ++i) item.detail += (i ? "; " : "") + fails[i];
    item.seconds = timer.seconds();
    return item;
}

CheckItem check_stepper_properties() {
    Stopwatch timer;
    CheckItem item;
    item.name = "criterion 6: stepper properties";
    std::vector<std::string> fails;

    const ModelSpec spec = ModelSpec::model1b();
    ModelSystem system(spec);
    const StateVector point = point_state(spec);

    double worst_norm_drift = 0.0;
    for (const StepMethod method : {StepMethod::Full, StepMethod::Trotter}) {
        EvolveOptions opt;
        opt.method = method;
        opt.dt = 0.3;
        opt.steps = 40;
        const auto t = evolve(system, Schedule::projected_cooling(), opt, point);
        for (const auto& r : t.records)
            worst_norm_drift = std::max(worst_norm_drift, std::abs(r.norm - 1.0));
    }
    if (worst_norm_drift > 1e-10)
        fails.push_back("norm drift " + format_double(worst_norm_drift) + " exceeds 1e-10");

    auto deviation = [&](double dt, int steps) {
        EvolveOptions full_opt;
        full_opt.dt = dt;
        full_opt.steps = steps;
        EvolveOptions trot_opt = full_opt;
        trot_opt.method = StepMethod::Trotter;
        const auto f = evolve(system, Schedule::projected_cooling(), full_opt, point);
        const auto t = evolve(system, Schedule::projected_cooling(), trot_opt, point);
        return (f.final_state.amps - t.final_state.amps).norm();
    };
    const double d1 = deviation(0.3, 40);
    const double d2 = deviation(0.15, 80);
    const double ratio = d1 / d2;
    if (!(ratio >= 1.8)) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "halving dt shrank the deviation only %.2fx (need >= 1.8)",
                      ratio);
        fails.push_back(buf);
    }

    // Commuting factors: a single kinetic bond plus the kinetic diagonal.
    ModelSpec tiny;
    tiny.chains = 1;
    tiny.half_extent = 1;
    tiny.interior_half_extent = 0;
    const auto parts = trotter_parts(tiny);
    std::vector<SectorOperator> commuting = {parts[0], parts[2]};  // A and D
    SectorOperator h_sum = parts[0];
    h_sum.tag = Tag::H;
    h_sum.mat += parts[2].mat;
    StateVector psi{tiny.shape(), Vector(3)};
    psi.amps << Complex(0.6, 0.1), Complex(-0.3, 0.7), Complex(0.2, -0.1);
    psi.normalize();
    const double commute_dev =
        (step_trotter(psi, commuting, 0.37).amps - step_full(psi, h_sum, 0.37).amps)
            .cwiseAbs()
            .maxCoeff();
    if (commute_dev > 1e-12)
        fails.push_back("commuting-parts mismatch " + format_double(commute_dev));

    item.passed = fails.empty();
    if (item.passed) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "norm drift %.1e; dt-halving ratio %.2f; commuting parts agree to %.1e",
                      worst_norm_drift, ratio, commute_dev);
        item.detail = buf;
    }
    for (std::size_t i = 0; i < fails.size(); ++i) item.detail += (i ? "; " : "") + fails[i];
    item.seconds = timer.seconds();
    return item;
}

CheckItem check_determinism(const fs::path& work_dir) {
    Stopwatch timer;
    CheckItem item;
    item.name = "criterion 7: byte-level reproducibility";
    std::vector<std::string> fails;

    auto read_all = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };

    ExperimentConfig config;
    config.model = ModelSpec::model1b();
    config.schedule = Schedule::projected_cooling();
    config.method = StepMethod::Trotter;
    config.initial = InitialStateKind::Spread;
    config.steps = 25;
    config.epsilon = 0.05;
    config.seed = 42;
    config.threshold = 0.94;
    for (int variant = 0; variant < 2; ++variant) {
        if (variant == 1) {
            config.method = StepMethod::Full;
            config.initial = InitialStateKind::Random;
            config.epsilon = 0.0;
        }
        ExperimentConfig a = config, b = config;
        a.output_dir = (work_dir / ("det_a" + std::to_string(variant))).string();
        b.output_dir = (work_dir / ("det_b" + std::to_string(variant))).string();
        const auto ra = run_single(a);
        const auto rb = run_single(b);
        for (std::size_t i = 0; i < ra.files.size(); ++i)
            if (read_all(ra.files[i]) != read_all(rb.files[i]))
                fails.push_back("files differ: " + ra.files[i].filename().string());
    }

    item.passed = fails.empty();
    item.detail = item.passed ? "repeated runs produced byte-identical tables" : "";
    for (std::size_t i = 0; i < fails.size(); ++i) item.detail += (i ? "; " : "") + fails[i];
    item.seconds = timer.seconds();
    return item;
}

CheckItem check_decay_fitter() {
    Stopwatch timer;
    CheckItem item;
    item.name = "criterion 8: decay-exponent fitter";
    std::vector<std::string> fails;

    OverlapSeries plain;
    for (double t = 6.0; t <= 105.0; t += 0.5) {
        plain.times.push_back(t);
        plain.values.push_back(1.0 - std::pow(t, -2.0));
    }
    const auto f1 = fit_decay_exponent(plain);
    if (std::abs(f1.alpha - 2.0) > 0.01)
        fails.push_back("pure power law: alpha " + format_double(f1.alpha) + " not 2.00 +- 0.01");

    OverlapSeries wavy;
    for (double t = 6.0; t <= 105.0; t += 0.5) {
        wavy.times.push_back(t);
        wavy.values.push_back(1.0 - std::pow(t, -1.0) * (1.0 + 0.3 * std::sin(5.0 * t)));
    }
    const auto f2 = fit_decay_exponent(wavy);
    if (std::abs(f2.alpha - 1.0) > 0.1)
        fails.push_back("oscillating residual: alpha " + format_double(f2.alpha) +
                        " not within 0.1 of 1");

    item.passed = fails.empty();
    if (item.passed) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "alpha %.3f on t^-2; alpha %.3f (envelope, osc freq %.2f) on t^-1 with "
                      "oscillation",
                      f1.alpha, f2.alpha, f2.oscillation_frequency);
        item.detail = buf;
    }
    for (std::size_t i = 0; i < fails.size(); ++i) item.detail += (i ? "; " : "") + fails[i];
    item.seconds = timer.seconds();
    return item;
}

CheckItem check_fig3_grids() {
    Stopwatch timer;
    CheckItem item;
    item.name = "figure 3: interior wave-function grids";
    std::vector<std::string> fails;

    const auto res = run_fig3({});
    for (const auto* grid : {&res.exact, &res.adiabatic, &res.cooled}) {
        const double ss = grid->squaredNorm();
        if (std::abs(ss - 1.0) > 1e-12)
            fails.push_back("grid sum of squares " + format_double(ss) + " != 1");
    }
    if (res.cooled_vs_exact < 0.85)
        fails.push_back("cooled grid overlap " + format_double(res.cooled_vs_exact) + " < 0.85");

    Eigen::Index imax = 0, jmax = 0;
    res.exact.maxCoeff(&imax, &jmax);
    const ModelSpec m2 = ModelSpec::model2();
    auto attractive = [&](int n) {
        const auto it = m2.potential.find(n);
        return it != m2.potential.end() && it->second < 0.0;
    };
    const int r = m2.interior_half_extent;
    if (!attractive(static_cast<int>(imax) - r) || !attractive(static_cast<int>(jmax) - r))
        fails.push_back("exact grid peak at (" + std::to_string(static_cast<int>(imax) - r) + "," +
                        std::to_string(static_cast<int>(jmax) - r) +
                        ") outside the attractive support");

    item.passed = fails.empty();
    if (item.passed) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "cooled-vs-exact %.4f, adiabatic-vs-exact %.4f, peak at (%d,%d)",
                      res.cooled_vs_exact, res.adiabatic_vs_exact, static_cast<int>(imax) - r,
                      static_cast<int>(jmax) - r);
        item.detail = buf;
    }
    for (std::size_t i = 0; i < fails.size(); ++i) item.detail += (i ? "; " : "") + fails[i];
    item.seconds = timer.seconds();
    return item;
}

}  // namespace

CheckReport run_acceptance(const AcceptanceOptions& options) {
    fs::path work = options.work_dir;
    if (work.empty())
        work = fs::temp_directory_path() /
               ("projcool-check-" + std::to_string(static_cast<unsigned>(::getpid())));
    fs::create_directories(work);

    CheckReport report;
    auto want = [&](int n) {
        return !options.only_criterion.has_value() || *options.only_criterion == n;
    };

    if (want(1))
        report.items.push_back(check_panel_thresholds(
            "criterion 1: fig2a thresholds (four-well chain)", ModelSpec::model1b(), 0.94, 0.35,
            0.05, 10, options.seed, 40, 0.3, 60.0));
    if (want(2))
        report.items.push_back(check_panel_thresholds(
            "criterion 2: fig2b thresholds (two-particle model)", ModelSpec::model2(), 0.85, 0.24,
            0.05, 1, options.seed, 40, 0.3, 300.0));
    if (want(3)) report.items.push_back(check_fixed_point(options.seed));
    if (want(4)) report.items.push_back(check_oracles());
    if (want(5)) report.items.push_back(check_qubit_equivalence());
    if (want(6)) report.items.push_back(check_stepper_properties());
    if (want(7)) report.items.push_back(check_determinism(work));
    if (want(8)) report.items.push_back(check_decay_fitter());
    if (want(9)) report.items.push_back(check_fig3_grids());
    return report;
}

}  // namespace projcool
