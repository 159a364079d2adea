#include "viscowave/viscowave.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "cq.hpp"
#include "errors.hpp"
#include "laplace_probe.hpp"
#include "scenarios.hpp"

using namespace viscowave;

struct vw_config {
    scenarios::SimulationConfig cfg;
};

struct vw_trajectory {
    Trajectory traj;
};

namespace {

thread_local std::string g_last_error;

vw_status fail(vw_status code, std::string msg) {
    g_last_error = std::move(msg);
    return code;
}

template <class F>
vw_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return VW_OK;
    } catch (const ValidationError& e) {
        return fail(VW_ERR_VALIDATION, e.what());
    } catch (const NumericalError& e) {
        return fail(VW_ERR_NUMERICAL, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(VW_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(VW_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(VW_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(VW_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw ValidationError(what);
}

char* dup(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::ofstream open_out(const char* path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::filesystem::filesystem_error("cannot open for writing", std::filesystem::path(path),
                                                    std::make_error_code(std::errc::io_error));
    return f;
}

}  // namespace

extern "C" {

const char* vw_last_error(void) { return g_last_error.c_str(); }

const char* vw_version(void) { return "0.1.0"; }

void vw_string_free(char* s) { delete[] s; }

vw_status vw_config_load(const char* path, vw_config** out) {
    return guarded([&] {
        require(path && out, "vw_config_load: null argument");
        *out = new vw_config{scenarios::load_config(path)};
    });
}

vw_status vw_config_parse(const char* text, vw_config** out) {
    return guarded([&] {
        require(text && out, "vw_config_parse: null argument");
        *out = new vw_config{scenarios::parse_config(text)};
    });
}

void vw_config_free(vw_config* config) { delete config; }

vw_status vw_config_serialize(const vw_config* config, char** out) {
    return guarded([&] {
        require(config && out, "vw_config_serialize: null argument");
        *out = dup(scenarios::serialize(config->cfg));
    });
}

vw_status vw_config_set_integrator(vw_config* config, const char* integrator) {
    return guarded([&] {
        require(config && integrator, "vw_config_set_integrator: null argument");
        auto next = config->cfg;
        const std::string name = integrator;
        if (name == "cq") {
            next.integrator = scenarios::Integrator::CQ;
        } else if (name == "semigroup") {
            next.integrator = scenarios::Integrator::Semigroup;
        } else {
            throw ValidationError("integrator: expected \"cq\" or \"semigroup\", got \"" + name + "\"");
        }
        scenarios::validate(next);
        config->cfg = std::move(next);
    });
}

vw_status vw_config_set_parameter(vw_config* config, const char* parameter, double value) {
    return guarded([&] {
        require(config && parameter, "vw_config_set_parameter: null argument");
        config->cfg = scenarios::with_parameter(config->cfg, parameter, value);
    });
}

vw_status vw_config_time(const vw_config* config, double* T, size_t* steps) {
    return guarded([&] {
        require(config, "vw_config_time: null config");
        if (T) *T = config->cfg.T;
        if (steps) *steps = config->cfg.steps;
    });
}

vw_status vw_run_scenario(const vw_config* config, const char* out_dir, double* final_probe, double* metric) {
    return guarded([&] {
        require(config && out_dir, "vw_run_scenario: null argument");
        const auto art = scenarios::run_scenario(config->cfg, out_dir);
        if (final_probe) *final_probe = art.final_probe;
        if (metric) *metric = art.dissipation_metric;
    });
}

vw_status vw_sweep(const vw_config* config, const char* parameter, const double* values, size_t count,
                   const char* out_dir, size_t workers, double* final_probe, double* metric) {
    return guarded([&] {
        require(config && parameter && out_dir, "vw_sweep: null argument");
        require(values && count > 0, "vw_sweep: need at least one value");
        const auto rows =
            scenarios::sweep(config->cfg, parameter, std::vector<double>(values, values + count), out_dir, workers);
        for (size_t i = 0; i < count; ++i) {
            if (final_probe) final_probe[i] = rows[i].final_probe;
            if (metric) metric[i] = rows[i].dissipation_metric;
        }
    });
}

vw_status vw_simulate(const vw_config* config, vw_trajectory** out) {
    return guarded([&] {
        require(config && out, "vw_simulate: null argument");
        *out = new vw_trajectory{scenarios::simulate(config->cfg).trajectory};
    });
}

void vw_trajectory_free(vw_trajectory* trajectory) { delete trajectory; }

size_t vw_trajectory_steps(const vw_trajectory* trajectory) { return trajectory ? trajectory->traj.steps() : 0; }

double vw_trajectory_step_size(const vw_trajectory* trajectory) { return trajectory ? trajectory->traj.k : 0.0; }

vw_status vw_trajectory_probe(const vw_trajectory* trajectory, double x, double* out, size_t len) {
    return guarded([&] {
        require(trajectory && out, "vw_trajectory_probe: null argument");
        require(len >= trajectory->traj.u.size(), "vw_trajectory_probe: output buffer too short");
        require(x >= 0.0 && x <= trajectory->traj.mesh.length(), "vw_trajectory_probe: x outside the rod");
        const auto series = probe(trajectory->traj, x);
        std::copy(series.begin(), series.end(), out);
    });
}

vw_status vw_trajectory_write_spacetime(const vw_trajectory* trajectory, const char* path, size_t nx, size_t nt) {
    return guarded([&] {
        require(trajectory && path, "vw_trajectory_write_spacetime: null argument");
        const auto grid = scenarios::spacetime_grid(trajectory->traj, nx, nt);
        auto f = open_out(path);
        scenarios::write_spacetime(f, grid);
    });
}

vw_status vw_weights(const char* symbol, double param, double k, size_t steps, double* out, size_t len) {
    return guarded([&] {
        require(symbol && out, "vw_weights: null argument");
        require(k > 0.0 && std::isfinite(k), "vw_weights: k must be > 0");
        require(len >= steps + 1, "vw_weights: output buffer too short");
        const std::string name = symbol;
        cq::Symbol f;
        if (name == "one") {
            f = [](cq::Complex) { return cq::Complex(1.0); };
        } else if (name == "s") {
            f = [](cq::Complex s) { return s; };
        } else if (name == "inv_s") {
            f = [](cq::Complex s) { return 1.0 / s; };
        } else if (name == "power") {
            require(std::isfinite(param), "vw_weights: power needs a finite exponent");
            f = [param](cq::Complex s) { return material::principal_power(s, param); };
        } else {
            throw ValidationError("symbol: expected one, s, inv_s or power, got '" + name + "'");
        }
        const auto w = cq::weights(f, cq::CQScheme(k, steps));
        std::copy(w.begin(), w.end(), out);
    });
}

vw_status vw_region_weights(const vw_config* config, const char* region, double k, size_t steps, double* out,
                            size_t len) {
    return guarded([&] {
        require(config && region && out, "vw_region_weights: null argument");
        require(k > 0.0 && std::isfinite(k), "vw_region_weights: k must be > 0");
        require(len >= steps + 1, "vw_region_weights: output buffer too short");
        const auto idx = config->cfg.model.find(region);
        if (!idx) throw ValidationError(std::string("region: no region named '") + region + "'");
        const auto reg = config->cfg.model.regions[*idx];
        const auto w = cq::weights([reg](cq::Complex s) { return material::eval_transfer_unchecked(reg, s); },
                                   cq::CQScheme(k, steps));
        std::copy(w.begin(), w.end(), out);
    });
}

vw_status vw_write_weights(const char* path, const double* omega, size_t len) {
    return guarded([&] {
        require(path && (omega || len == 0), "vw_write_weights: null argument");
        auto f = open_out(path);
        scenarios::write_weights(f, std::vector<double>(omega, omega + len));
    });
}

vw_status vw_laplace_probe(const vw_config* config, const double* s_re, const double* s_im, size_t count,
                           const char* path, double* worst_margin) {
    return guarded([&] {
        require(config && s_re && s_im && path, "vw_laplace_probe: null argument");
        const auto& model = config->cfg.model;
        const auto mesh = scenarios::make_mesh(config->cfg);
        const auto ops = fem::assemble(mesh, model);
        const auto cert = material::combined_certificate(model);
        laplace::FrequencyData data;
        data.alpha = 1.0;
        std::ostringstream os;
        os << "re_s,im_s,energy_norm,coercivity_margin\n";
        double worst = INFINITY;
        for (size_t i = 0; i < count; ++i) {
            const laplace::Complex s(s_re[i], s_im[i]);
            const auto sol = laplace::solve_at(s, model, mesh, data);
            const double margin = laplace::coercivity_margin(model, ops, s, sol.u, cert);
            worst = std::min(worst, margin);
            os << scenarios::format_number(s.real()) << ',' << scenarios::format_number(s.imag()) << ','
               << scenarios::format_number(sol.energy_norm) << ',' << scenarios::format_number(margin) << '\n';
        }
        auto f = open_out(path);
        f << os.str();
        if (worst_margin) *worst_margin = worst;
    });
}

vw_status vw_coercivity_check(const vw_config* config, size_t trials, uint64_t seed, size_t* violations,
                              double* worst_coercivity, double* worst_boundedness) {
    return guarded([&] {
        require(config, "vw_coercivity_check: null config");
        laplace::CoercivityOptions opt;
        opt.trials = trials;
        opt.seed = seed;
        const auto rep = laplace::coercivity_check(config->cfg.model, scenarios::make_mesh(config->cfg), opt);
        if (violations) *violations = rep.violations.size();
        if (worst_coercivity) *worst_coercivity = rep.worst_coercivity_margin;
        if (worst_boundedness) *worst_boundedness = rep.worst_boundedness_margin;
    });
}

vw_status vw_check_hypotheses(size_t samples, uint64_t seed, size_t* violations, char** report) {
    return guarded([&] {
        require(samples > 0, "vw_check_hypotheses: samples must be > 0");
        const auto sum = scenarios::check_all_hypotheses(samples, seed);
        size_t total = sum.power_bound.violations.size();
        std::ostringstream os;
        for (const auto& row : sum.rows) {
            total += row.report.violations.size();
            os << row.model << '/' << row.region << ": violations=" << row.report.violations.size()
               << " worst_positivity=" << scenarios::format_number(row.report.worst_positivity_margin)
               << " worst_boundedness=" << scenarios::format_number(row.report.worst_boundedness_margin) << '\n';
        }
        os << "power_bound: violations=" << sum.power_bound.violations.size()
           << " worst=" << scenarios::format_number(sum.power_bound.worst_positivity_margin) << '\n';
        if (violations) *violations = total;
        if (report) *report = dup(os.str());
    });
}

}  // extern "C"
