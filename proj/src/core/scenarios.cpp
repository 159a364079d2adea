#include "scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "errors.hpp"
#include "fem1d.hpp"
#include "semigroup.hpp"

namespace viscowave::scenarios {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

/// Reads one JSON object, tracking which keys were consumed so that leftovers
/// can be reported with their full path.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& why) {
        throw ValidationError(path + ": " + why);
    }

    std::string child(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    bool has(std::string_view key) const { return j_.contains(key); }

    const json& get(std::string_view key) {
        seen_.insert(std::string(key));
        if (!j_.contains(key)) fail(child(key), "missing required field");
        return j_.at(key);
    }

    double number(std::string_view key) {
        const auto& v = get(key);
        if (!v.is_number()) fail(child(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(child(key), "must be finite");
        return d;
    }

    double number_or(std::string_view key, double fallback) { return has(key) ? number(key) : (seen(key), fallback); }

    std::int64_t integer(std::string_view key) {
        const auto& v = get(key);
        if (!v.is_number_integer()) fail(child(key), "expected an integer");
        return v.get<std::int64_t>();
    }

    std::int64_t integer_or(std::string_view key, std::int64_t fallback) {
        return has(key) ? integer(key) : (seen(key), fallback);
    }

    std::string string(std::string_view key) {
        const auto& v = get(key);
        if (!v.is_string()) fail(child(key), "expected a string");
        return v.get<std::string>();
    }

    std::string string_or(std::string_view key, std::string fallback) {
        return has(key) ? string(key) : (seen(key), std::move(fallback));
    }

    void finish() const {
        for (const auto& item : j_.items())
            if (!seen_.count(item.key())) fail(child(item.key()), "unknown field");
    }

private:
    void seen(std::string_view key) { seen_.insert(std::string(key)); }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::vector<double> number_array(const json& v, const std::string& path) {
    if (!v.is_array()) ObjectReader::fail(path, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) ObjectReader::fail(path + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
        if (!std::isfinite(out.back())) ObjectReader::fail(path + "[" + std::to_string(i) + "]", "must be finite");
    }
    return out;
}

signals::Signal parse_signal(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    signals::Signal s;
    const auto kind = r.string("kind");
    if (kind == "zero") {
        s.kind = signals::SignalKind::Zero;
    } else if (kind == "window" || kind == "pulse_train") {
        s.kind = kind == "window" ? signals::SignalKind::Window : signals::SignalKind::PulseTrain;
        const auto knots = number_array(r.get("knots"), r.child("knots"));
        if (knots.size() != 4) ObjectReader::fail(r.child("knots"), "expected 4 knot times");
        std::copy(knots.begin(), knots.end(), s.knots.begin());
        s.amplitude = r.number_or("amplitude", 1.0);
        if (s.kind == signals::SignalKind::PulseTrain) {
            s.period = r.number("period");
            const auto count = r.integer("count");
            if (count < 1 || count > 1'000'000) ObjectReader::fail(r.child("count"), "must lie in [1, 1e6]");
            s.count = static_cast<int>(count);
        }
    } else {
        ObjectReader::fail(r.child("kind"), "unknown signal kind '" + kind + "' (zero, window, pulse_train)");
    }
    r.finish();
    signals::validate(s, path);
    return s;
}

ordered_json signal_json(const signals::Signal& s) {
    ordered_json j;
    j["kind"] = signals::to_string(s.kind);
    if (s.kind == signals::SignalKind::Zero) return j;
    j["knots"] = std::vector<double>(s.knots.begin(), s.knots.end());
    j["amplitude"] = s.amplitude;
    if (s.kind == signals::SignalKind::PulseTrain) {
        j["period"] = s.period;
        j["count"] = s.count;
    }
    return j;
}

material::MaterialRegion parse_region(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    material::MaterialRegion reg;
    reg.name = r.string("name");
    const auto kind = r.string("kind");
    const auto parsed = material::parse_kind(kind);
    if (!parsed) ObjectReader::fail(r.child("kind"), "unknown model kind '" + kind + "'");
    reg.kind = *parsed;
    reg.x_lo = r.number("x_lo");
    reg.x_hi = r.number("x_hi");
    reg.c0 = r.number("c0");
    reg.c1 = r.number("c1");
    reg.a = r.number("a");
    reg.nu = r.number_or("nu", 1.0);
    reg.rho = r.number("rho");
    r.finish();
    try {
        material::validate(reg);
    } catch (const ValidationError& e) {
        ObjectReader::fail(path, e.what());
    }
    return reg;
}

std::size_t to_size(std::int64_t v, const std::string& path, std::int64_t lo) {
    if (v < lo) ObjectReader::fail(path, "must be >= " + std::to_string(lo));
    return static_cast<std::size_t>(v);
}

void with_output(std::ofstream& f, const std::filesystem::path& path) {
    if (!f) throw ValidationError("cannot open '" + path.string() + "' for writing");
}

std::vector<double> restricted(const std::vector<double>& series, double k, double t0, double t1,
                               std::size_t& first) {
    const double tol = 1e-9 * k;
    std::vector<double> out;
    first = series.size();
    for (std::size_t n = 0; n < series.size(); ++n) {
        const double t = static_cast<double>(n) * k;
        if (t < t0 - tol || t > t1 + tol) continue;
        if (first == series.size()) first = n;
        out.push_back(series[n]);
    }
    return out;
}

}  // namespace

std::string_view to_string(Integrator integrator) { return integrator == Integrator::CQ ? "cq" : "semigroup"; }

SimulationConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: malformed JSON: ") + e.what());
    }
    ObjectReader r(root, "");
    SimulationConfig cfg;
    cfg.description = r.string_or("description", "");

    const auto& regions = r.get("regions");
    if (!regions.is_array() || regions.empty()) ObjectReader::fail("regions", "expected a non-empty array");
    cfg.model.regions.clear();
    for (std::size_t i = 0; i < regions.size(); ++i)
        cfg.model.regions.push_back(parse_region(regions[i], "regions[" + std::to_string(i) + "]"));

    {
        ObjectReader m(r.get("mesh"), "mesh");
        cfg.elements_per_unit = static_cast<int>(to_size(m.integer("elements_per_unit"), "mesh.elements_per_unit", 1));
        cfg.degree = static_cast<int>(m.integer("degree"));
        m.finish();
    }
    {
        ObjectReader t(r.get("time"), "time");
        cfg.T = t.number("T");
        cfg.steps = to_size(t.integer("steps"), "time.steps", 1);
        t.finish();
    }
    {
        ObjectReader s(r.get("signals"), "signals");
        cfg.signals.dirichlet = parse_signal(s.get("dirichlet"), "signals.dirichlet");
        cfg.signals.neumann = parse_signal(s.get("neumann"), "signals.neumann");
        s.finish();
    }
    const auto integrator = r.string_or("integrator", "cq");
    if (integrator == "cq") {
        cfg.integrator = Integrator::CQ;
    } else if (integrator == "semigroup") {
        cfg.integrator = Integrator::Semigroup;
    } else {
        ObjectReader::fail("integrator", "expected \"cq\" or \"semigroup\", got \"" + integrator + "\"");
    }
    cfg.probes = number_array(r.get("probes"), "probes");
    if (r.has("output")) {
        ObjectReader o(r.get("output"), "output");
        cfg.output.timeseries = o.string_or("timeseries", cfg.output.timeseries);
        cfg.output.spacetime = o.string_or("spacetime", cfg.output.spacetime);
        cfg.output.spacetime_nx = to_size(o.integer_or("spacetime_nx", 101), "output.spacetime_nx", 2);
        cfg.output.spacetime_nt = to_size(o.integer_or("spacetime_nt", 401), "output.spacetime_nt", 2);
        cfg.output.stride = to_size(o.integer_or("stride", 1), "output.stride", 1);
        o.finish();
    }
    if (r.has("metric_window")) {
        const auto w = number_array(r.get("metric_window"), "metric_window");
        if (w.size() != 2) ObjectReader::fail("metric_window", "expected [t0, t1]");
        cfg.metric_window = {w[0], w[1]};
    }
    r.finish();
    validate(cfg);
    return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

std::string serialize(const SimulationConfig& cfg) {
    ordered_json root;
    if (!cfg.description.empty()) root["description"] = cfg.description;
    root["regions"] = ordered_json::array();
    for (const auto& reg : cfg.model.regions) {
        ordered_json j;
        j["name"] = reg.name;
        j["kind"] = std::string(material::to_string(reg.kind));
        j["x_lo"] = reg.x_lo;
        j["x_hi"] = reg.x_hi;
        j["c0"] = reg.c0;
        j["c1"] = reg.c1;
        j["a"] = reg.a;
        j["nu"] = reg.nu;
        j["rho"] = reg.rho;
        root["regions"].push_back(j);
    }
    root["mesh"] = {{"elements_per_unit", cfg.elements_per_unit}, {"degree", cfg.degree}};
    root["time"] = {{"T", cfg.T}, {"steps", cfg.steps}};
    root["signals"] = {{"dirichlet", signal_json(cfg.signals.dirichlet)}, {"neumann", signal_json(cfg.signals.neumann)}};
    root["integrator"] = std::string(to_string(cfg.integrator));
    root["probes"] = cfg.probes;
    root["output"] = {{"timeseries", cfg.output.timeseries},
                      {"spacetime", cfg.output.spacetime},
                      {"spacetime_nx", cfg.output.spacetime_nx},
                      {"spacetime_nt", cfg.output.spacetime_nt},
                      {"stride", cfg.output.stride}};
    root["metric_window"] = {cfg.metric_window[0], cfg.metric_window[1]};
    return root.dump(2) + "\n";
}

void validate(const SimulationConfig& cfg) {
    for (std::size_t i = 0; i < cfg.model.regions.size(); ++i) {
        try {
            material::validate(cfg.model.regions[i]);
        } catch (const ValidationError& e) {
            ObjectReader::fail("regions[" + std::to_string(i) + "]", e.what());
        }
    }
    try {
        material::validate(cfg.model);
    } catch (const ValidationError& e) {
        ObjectReader::fail("regions", e.what());
    }
    if (cfg.elements_per_unit < 1) ObjectReader::fail("mesh.elements_per_unit", "must be >= 1");
    if (cfg.degree < 1 || cfg.degree > 4) ObjectReader::fail("mesh.degree", "must lie in 1..4");
    if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) ObjectReader::fail("time.T", "must be > 0");
    if (cfg.steps < 1) ObjectReader::fail("time.steps", "must be >= 1");
    signals::validate(cfg.signals.dirichlet, "signals.dirichlet");
    signals::validate(cfg.signals.neumann, "signals.neumann");
    if (cfg.integrator == Integrator::Semigroup)
        for (const auto& reg : cfg.model.regions)
            if (material::is_fractional(reg.kind))
                ObjectReader::fail("integrator", "semigroup needs nu = 1 in every region; region '" + reg.name +
                                                     "' is " + std::string(material::to_string(reg.kind)));
    if (cfg.probes.empty()) ObjectReader::fail("probes", "at least one probe is required");
    const double len = cfg.model.length();
    for (std::size_t i = 0; i < cfg.probes.size(); ++i)
        if (!(cfg.probes[i] >= 0.0 && cfg.probes[i] <= len))
            ObjectReader::fail("probes[" + std::to_string(i) + "]", "must lie in [0, " + format_number(len) + "]");
    if (cfg.output.stride < 1) ObjectReader::fail("output.stride", "must be >= 1");
    if (!cfg.output.spacetime.empty() && (cfg.output.spacetime_nx < 2 || cfg.output.spacetime_nt < 2))
        ObjectReader::fail("output", "spacetime_nx and spacetime_nt must be >= 2");
    const auto [t0, t1] = cfg.metric_window;
    if (!(t0 >= 0.0 && t0 < t1) || !std::isfinite(t1)) ObjectReader::fail("metric_window", "need 0 <= t0 < t1");
}

fem::Mesh1D make_mesh(const SimulationConfig& cfg) {
    return fem::build_mesh(cfg.model, cfg.elements_per_unit, cfg.degree);
}

ScenarioResult simulate(const SimulationConfig& cfg) {
    validate(cfg);
    const auto mesh = make_mesh(cfg);
    ScenarioResult res;
    if (cfg.integrator == Integrator::CQ) {
        res.trajectory = timestepper_cq::run(cfg.model, mesh, cq::CQScheme(cfg.k(), cfg.steps), cfg.signals);
    } else {
        res.trajectory = semigroup::run(cfg.model, mesh, cfg.k(), cfg.steps, cfg.signals).trajectory;
    }
    for (double x : cfg.probes) res.probe_series.push_back(probe(res.trajectory, x));
    return res;
}

double dissipation_metric(const std::vector<double>& series, double k, double t0, double t1) {
    std::size_t first = 0;
    const auto v = restricted(series, k, t0, t1, first);
    double acc = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) acc += 0.5 * k * (v[i - 1] * v[i - 1] + v[i] * v[i]);
    return acc;
}

SpacetimeGrid spacetime_grid(const Trajectory& traj, std::size_t nx, std::size_t nt) {
    if (nx < 2 || nt < 2) throw ValidationError("spacetime_grid: nx and nt must be >= 2");
    if (traj.u.size() == 0) throw ValidationError("spacetime_grid: empty trajectory");
    SpacetimeGrid g;
    const double len = traj.mesh.length();
    const std::size_t steps = traj.steps();
    for (std::size_t i = 0; i < nx; ++i)
        g.x.push_back(i + 1 == nx ? len : len * static_cast<double>(i) / static_cast<double>(nx - 1));
    std::vector<std::size_t> index(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        index[j] = static_cast<std::size_t>(
            std::llround(static_cast<double>(j) * static_cast<double>(steps) / static_cast<double>(nt - 1)));
        g.t.push_back(traj.time(index[j]));
    }
    // Interpolation weights depend only on x, so tabulate them once.
    const fem::LagrangeBasis basis(traj.mesh.degree);
    const auto p = static_cast<std::size_t>(traj.mesh.degree);
    std::vector<std::size_t> dofs(nx * (p + 1));
    std::vector<double> phi(nx * (p + 1));
    for (std::size_t i = 0; i < nx; ++i) {
        const auto [e, xi] = traj.mesh.locate(g.x[i]);
        for (std::size_t a = 0; a <= p; ++a) {
            dofs[i * (p + 1) + a] = traj.mesh.dof(e, static_cast<int>(a));
            phi[i * (p + 1) + a] = basis.value(static_cast<int>(a), xi);
        }
    }
    g.u.resize(nx * nt);
    for (std::size_t j = 0; j < nt; ++j) {
        const auto un = traj.u[index[j]];
        for (std::size_t i = 0; i < nx; ++i) {
            double v = 0.0;
            for (std::size_t a = 0; a <= p; ++a) v += phi[i * (p + 1) + a] * un[dofs[i * (p + 1) + a]];
            g.u[j * nx + i] = v;
        }
    }
    return g;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_timeseries(std::ostream& out, const ScenarioResult& res, const std::vector<double>& probes,
                      std::size_t stride) {
    if (stride < 1) throw ValidationError("output.stride: must be >= 1");
    out << "t";
    for (double x : probes) out << ",u@" << format_number(x);
    out << "\n";
    const std::size_t steps = res.trajectory.steps();
    for (std::size_t n = stride; n <= steps; n += stride) {
        out << format_number(res.trajectory.time(n));
        for (const auto& s : res.probe_series) out << ',' << format_number(s[n]);
        out << '\n';
    }
}

void write_spacetime(std::ostream& out, const SpacetimeGrid& g) {
    out << "t\\x";
    for (double x : g.x) out << ',' << format_number(x);
    out << '\n';
    for (std::size_t j = 0; j < g.t.size(); ++j) {
        out << format_number(g.t[j]);
        for (std::size_t i = 0; i < g.x.size(); ++i) out << ',' << format_number(g.at(j, i));
        out << '\n';
    }
}

void write_weights(std::ostream& out, const std::vector<double>& omega) {
    out << "j,omega\n";
    for (std::size_t j = 0; j < omega.size(); ++j) out << j << ',' << format_number(omega[j]) << '\n';
}

ScenarioArtifacts run_scenario(const SimulationConfig& cfg, const std::filesystem::path& out_dir) {
    const auto res = simulate(cfg);
    ScenarioArtifacts art;
    const auto& first = res.probe_series.front();
    art.final_probe = first.back();
    art.dissipation_metric = dissipation_metric(first, cfg.k(), cfg.metric_window[0], cfg.metric_window[1]);
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    if (!cfg.output.timeseries.empty()) {
        const auto path = out_dir / cfg.output.timeseries;
        std::ofstream f(path, std::ios::binary);
        with_output(f, path);
        write_timeseries(f, res, cfg.probes, cfg.output.stride);
        art.files.push_back(path);
    }
    if (!cfg.output.spacetime.empty()) {
        const auto path = out_dir / cfg.output.spacetime;
        std::ofstream f(path, std::ios::binary);
        with_output(f, path);
        write_spacetime(f, spacetime_grid(res.trajectory, cfg.output.spacetime_nx, cfg.output.spacetime_nt));
        art.files.push_back(path);
    }
    return art;
}

SimulationConfig with_parameter(const SimulationConfig& cfg, std::string_view parameter, double value) {
    const auto dot = parameter.rfind('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == parameter.size())
        throw ValidationError("parameter: expected <region>.<c0|c1|a|nu>, got '" + std::string(parameter) + "'");
    const auto region = parameter.substr(0, dot);
    const auto field = parameter.substr(dot + 1);
    SimulationConfig out = cfg;
    const auto idx = out.model.find(region);
    if (!idx) throw ValidationError("parameter: no region named '" + std::string(region) + "'");
    auto& reg = out.model.regions[*idx];
    if (field == "c0") {
        reg.c0 = value;
    } else if (field == "c1") {
        reg.c1 = value;
    } else if (field == "a") {
        reg.a = value;
    } else if (field == "nu") {
        using material::ModelKind;
        // nu = 1 selects the integer-order law, nu < 1 its fractional sibling.
        auto integer_of = [](ModelKind k) {
            switch (k) {
                case ModelKind::FractionalZener: return ModelKind::Zener;
                case ModelKind::FractionalMaxwell: return ModelKind::Maxwell;
                case ModelKind::FractionalVoigt: return ModelKind::Voigt;
                default: return k;
            }
        };
        auto fractional_of = [](ModelKind k) {
            switch (k) {
                case ModelKind::Zener: return ModelKind::FractionalZener;
                case ModelKind::Maxwell: return ModelKind::FractionalMaxwell;
                case ModelKind::Voigt: return ModelKind::FractionalVoigt;
                default: return k;
            }
        };
        if (reg.kind == ModelKind::Elastic) throw ValidationError("parameter: elastic region '" + reg.name + "' has no nu");
        reg.kind = value == 1.0 ? integer_of(reg.kind) : fractional_of(reg.kind);
        reg.nu = value;
    } else {
        throw ValidationError("parameter: unknown field '" + std::string(field) + "' (c0, c1, a, nu)");
    }
    validate(out);
    return out;
}

std::vector<SweepRow> sweep(const SimulationConfig& cfg, std::string_view parameter, const std::vector<double>& values,
                            const std::filesystem::path& out_dir, std::size_t workers) {
    if (values.empty()) throw ValidationError("values: at least one value is required");
    std::vector<SimulationConfig> runs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        runs.push_back(with_parameter(cfg, parameter, values[i]));
        runs.back().output.timeseries = out_dir.empty() ? "" : "run_" + std::to_string(i) + ".csv";
        runs.back().output.spacetime.clear();
    }
    std::vector<SweepRow> rows(values.size());
    std::vector<std::exception_ptr> errors(values.size());
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, values.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < runs.size();) {
            try {
                const auto art = run_scenario(runs[i], out_dir);
                rows[i] = {values[i], art.final_probe, art.dissipation_metric};
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    if (!out_dir.empty()) {
        const auto path = out_dir / "summary.csv";
        std::ofstream f(path, std::ios::binary);
        with_output(f, path);
        write_sweep_summary(f, rows);
    }
    return rows;
}

void write_sweep_summary(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "value,final_probe,dissipation_metric\n";
    for (const auto& r : rows)
        out << format_number(r.value) << ',' << format_number(r.final_probe) << ','
            << format_number(r.dissipation_metric) << '\n';
}

namespace {

material::MaterialRegion region(std::string name, material::ModelKind kind, double x_lo, double x_hi, double c0,
                                double c1, double a, double nu, double rho) {
    material::MaterialRegion r;
    r.name = std::move(name);
    r.kind = kind;
    r.x_lo = x_lo;
    r.x_hi = x_hi;
    r.c0 = c0;
    r.c1 = c1;
    r.a = a;
    r.nu = nu;
    r.rho = rho;
    return r;
}

material::CoupledModel single(material::MaterialRegion r) {
    material::CoupledModel m;
    m.regions.push_back(std::move(r));
    return m;
}

material::CoupledModel halves(material::MaterialRegion left, material::MaterialRegion right) {
    left.x_lo = 0.0;
    left.x_hi = 0.5;
    right.x_lo = 0.5;
    right.x_hi = 1.0;
    material::CoupledModel m;
    m.regions = {std::move(left), std::move(right)};
    return m;
}

}  // namespace

std::vector<NamedModel> model_catalogue() {
    using K = material::ModelKind;
    std::vector<NamedModel> out;
    auto add = [&](std::string name, material::CoupledModel m) { out.push_back({std::move(name), std::move(m)}); };

    for (double c1 : {0.75, 1.0, 2.75})
        add("table1_zener_c1_" + format_number(c1), single(region("rod", K::Zener, 0, 1, 1.5, c1, 0.5, 1, 1)));
    for (double c1 : {0.05, 0.25, 2.0})
        add("table1_maxwell_c1_" + format_number(c1), single(region("rod", K::Maxwell, 0, 1, 0, c1, 0.5, 1, 1)));
    for (double c1 : {0.0, 0.25, 2.0})
        add("table1_voigt_c1_" + format_number(c1), single(region("rod", K::Voigt, 0, 1, 1.5, c1, 0, 1, 1)));

    for (double nu : {0.05, 0.5, 0.95}) {
        const auto tag = format_number(nu);
        add("table2_zener_nu_" + tag, single(region("rod", K::FractionalZener, 0, 1, 1.5, 1, 0.5, nu, 1)));
        add("table2_maxwell_nu_" + tag, single(region("rod", K::FractionalMaxwell, 0, 1, 0, 1, 0.5, nu, 1)));
        add("table2_voigt_nu_" + tag, single(region("rod", K::FractionalVoigt, 0, 1, 1.5, 1, 0, nu, 1)));
    }

    for (double nu : {0.25, 0.5, 0.75, 1.0}) {
        const auto tag = format_number(nu);
        const bool frac = nu < 1.0;
        add("table3_zener_nu_" + tag,
            single(region("rod", frac ? K::FractionalZener : K::Zener, 0, 1, 1, 1, 0.5, nu, 1)));
        add("table3_maxwell_nu_" + tag,
            single(region("rod", frac ? K::FractionalMaxwell : K::Maxwell, 0, 1, 0, 1, 0.5, nu, 1)));
        add("table3_voigt_nu_" + tag,
            single(region("rod", frac ? K::FractionalVoigt : K::Voigt, 0, 1, 1, 1, 0, nu, 1)));
    }

    // Space-time tables: the elastic column is a Zener law with c1 = a c0.
    const auto elastic = region("elastic", K::Zener, 0, 1, 1.75, 1.75, 1, 1, 10);
    const auto zener = region("zener", K::Zener, 0, 1, 1.5, 1.75, 0.5, 1, 10);
    const auto fzener = region("zener", K::FractionalZener, 0, 1, 1.5, 1.75, 0.5, 0.3, 10);
    const auto maxwell = region("maxwell", K::Maxwell, 0, 1, 0, 1.75, 1, 1, 10);
    const auto fmaxwell = region("maxwell", K::FractionalMaxwell, 0, 1, 0, 1.75, 1, 0.3, 10);
    const auto voigt = region("voigt", K::Voigt, 0, 1, 1.75, 1.75, 0, 1, 10);
    const auto fvoigt = region("voigt", K::FractionalVoigt, 0, 1, 1.75, 1.75, 0, 0.3, 10);
    add("table4_elastic", single(elastic));
    add("table4_zener", single(zener));
    add("table4_fractional_zener", single(fzener));
    add("table4_heterogeneous", halves(elastic, zener));
    add("table5_elastic", single(elastic));
    add("table5_maxwell", single(maxwell));
    add("table5_fractional_maxwell", single(fmaxwell));
    add("table5_heterogeneous", halves(elastic, maxwell));
    add("table6_elastic", single(elastic));
    add("table6_voigt", single(voigt));
    add("table6_fractional_voigt", single(fvoigt));
    add("table6_heterogeneous", halves(elastic, voigt));
    return out;
}

bool HypothesisSummary::passed() const {
    return power_bound.passed() &&
           std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.report.passed(); });
}

HypothesisSummary check_all_hypotheses(std::size_t samples, std::uint64_t seed) {
    HypothesisSummary out;
    std::uint64_t stream = seed;
    for (const auto& nm : model_catalogue())
        for (const auto& reg : nm.model.regions)
            out.rows.push_back(
                {nm.name, reg.name, material::verify_hypotheses(reg, material::certificate_of(reg), samples, stream++)});
    out.power_bound = material::fractional_power_bound_check(samples, seed);
    return out;
}

LinearFit linear_fit(const std::vector<double>& series, double k, double t0, double t1) {
    std::size_t first = 0;
    const auto y = restricted(series, k, t0, t1, first);
    if (y.size() < 2) throw ValidationError("linear_fit: fewer than two samples in the window");
    const double m = static_cast<double>(y.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        st += static_cast<double>(first + i) * k;
        sy += y[i];
    }
    const double tm = st / m, ym = sy / m;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double dt = static_cast<double>(first + i) * k - tm, dy = y[i] - ym;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    LinearFit fit;
    fit.slope = sty / stt;
    fit.intercept = ym - fit.slope * tm;
    double sse = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * static_cast<double>(first + i) * k);
        sse += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return fit;
}

double max_abs_slope(const std::vector<double>& series, double k, double t0, double t1) {
    double out = 0.0;
    const double tol = 1e-9 * k;
    for (std::size_t n = 1; n + 1 < series.size(); ++n) {
        const double t = static_cast<double>(n) * k;
        if (t < t0 - tol || t > t1 + tol) continue;
        out = std::max(out, std::abs(series[n + 1] - series[n - 1]) / (2.0 * k));
    }
    return out;
}

double segment_energy(const Trajectory& a, const Trajectory* b, const material::CoupledModel& model, double x0,
                      double x1, std::size_t n) {
    if (n == 0 || n + 1 >= a.u.size()) throw ValidationError("segment_energy: need 0 < n < N");
    if (b && (b->u.size() != a.u.size() || b->u.dim() != a.u.dim()))
        throw ValidationError("segment_energy: trajectories differ in shape");
    const auto& mesh = a.mesh;
    const std::size_t nd = mesh.num_dofs();
    std::vector<double> u(nd), v(nd);
    for (std::size_t i = 0; i < nd; ++i) {
        auto at = [&](std::size_t m) { return a.u[m][i] - (b ? b->u[m][i] : 0.0); };
        u[i] = at(n);
        v[i] = (at(n + 1) - at(n - 1)) / (2.0 * a.k);
    }
    const fem::ReferenceTable ref(fem::LagrangeBasis(mesh.degree), mesh.degree + 2);
    double energy = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const double mid = 0.5 * (mesh.vertices[e] + mesh.vertices[e + 1]);
        if (mid < x0 || mid > x1) continue;
        const auto& reg = model.regions[mesh.region_of_element[e]];
        const double h = mesh.element_length(e);
        for (std::size_t q = 0; q < ref.rule.points.size(); ++q) {
            double uq = 0.0, vq = 0.0;
            const std::size_t nloc = static_cast<std::size_t>(ref.nloc);
            for (std::size_t i = 0; i < nloc; ++i) {
                const std::size_t d = mesh.dof(e, static_cast<int>(i));
                vq += ref.values[q * nloc + i] * v[d];
                uq += ref.derivs[q * nloc + i] * u[d] / h;
            }
            energy += 0.5 * ref.rule.weights[q] * h * (reg.rho * vq * vq + reg.c0 * uq * uq);
        }
    }
    return energy;
}

}  // namespace viscowave::scenarios
