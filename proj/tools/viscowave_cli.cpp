// Command-line front end. Talks to the solver only through the C API.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "viscowave/viscowave.h"

namespace {

struct ConfigDeleter {
    void operator()(vw_config* c) const { vw_config_free(c); }
};
using ConfigPtr = std::unique_ptr<vw_config, ConfigDeleter>;

/// Maps a status to the process exit code: 0 ok, 1 validation / input, 2 numerical.
int report(vw_status st) {
    if (st == VW_OK) return 0;
    std::fprintf(stderr, "viscowave: %s\n", vw_last_error());
    return st == VW_ERR_NUMERICAL ? 2 : 1;
}

struct Failure {
    int code;
};

void check(vw_status st) {
    if (st != VW_OK) throw Failure{report(st)};
}

ConfigPtr load(const std::string& path) {
    vw_config* raw = nullptr;
    check(vw_config_load(path.c_str(), &raw));
    return ConfigPtr(raw);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (item.empty() || end == item.c_str() || *end != '\0') {
            std::fprintf(stderr, "viscowave: %s: '%s' is not a number\n", what, item.c_str());
            throw Failure{1};
        }
        out.push_back(v);
    }
    return out;
}

/// "lo,hi,n" -> n equispaced values (n = 1 gives lo).
std::vector<double> parse_range(const std::string& text, const char* what) {
    const auto v = parse_list(text, what);
    if (v.size() != 3 || v[2] < 1 || v[2] != static_cast<double>(static_cast<long>(v[2]))) {
        std::fprintf(stderr, "viscowave: %s: expected lo,hi,count\n", what);
        throw Failure{1};
    }
    const auto n = static_cast<std::size_t>(v[2]);
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(n == 1 ? v[0] : v[0] + (v[1] - v[0]) * i / (n - 1.0));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"viscowave: 1D viscoelastic wave propagation by convolution quadrature"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(vw_version()));

    std::string config, out, integrator, param, values, symbol = "s", region, s_re, s_im;
    double k = 0.0, power = 0.5;
    std::size_t steps = 0, workers = 0, samples = 10000, trials = 0;
    std::uint64_t seed = 1;
    bool hypotheses = false;

    auto* sim = app.add_subcommand("simulate", "run one scenario and write its CSV files");
    sim->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", out, "output directory")->required();
    sim->add_option("--integrator", integrator, "override the configured integrator")
        ->check(CLI::IsMember({"cq", "semigroup"}));

    auto* sw = app.add_subcommand("sweep", "run a scenario for several values of one parameter");
    sw->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
    sw->add_option("--param", param, "<region>.<c0|c1|a|nu>")->required();
    sw->add_option("--values", values, "comma-separated values")->required();
    sw->add_option("--out", out, "output directory")->required();
    sw->add_option("--workers", workers, "worker threads (0 = all cores)");

    auto* wt = app.add_subcommand("weights", "dump a CQ weight sequence as CSV (j, omega)");
    wt->add_option("--symbol", symbol, "one, s, inv_s, power or region")
        ->check(CLI::IsMember({"one", "s", "inv_s", "power", "region"}));
    wt->add_option("--nu", power, "exponent for --symbol power");
    wt->add_option("--config", config, "scenario file for --symbol region")->check(CLI::ExistingFile);
    wt->add_option("--region", region, "region name for --symbol region");
    wt->add_option("--k", k, "time step")->required();
    wt->add_option("--steps", steps, "N; weights 0..N are written")->required();
    wt->add_option("--out", out, "output CSV")->required();

    auto* lp = app.add_subcommand("laplace-probe", "frequency-domain solves on a grid of s");
    lp->add_option("--config", config, "scenario file (model and mesh)")->required()->check(CLI::ExistingFile);
    lp->add_option("--re", s_re, "Re s grid lo,hi,count")->required();
    lp->add_option("--im", s_im, "Im s grid lo,hi,count")->required();
    lp->add_option("--out", out, "output CSV")->required();
    lp->add_option("--trials", trials, "additionally run the random coercivity test");
    lp->add_option("--seed", seed, "seed for --trials");

    auto* ck = app.add_subcommand("check", "verify the material hypotheses");
    ck->add_flag("--hypotheses", hypotheses, "run hypothesis verification")->required();
    ck->add_option("--seed", seed, "random seed");
    ck->add_option("--samples", samples, "samples per region");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*sim) {
            auto cfg = load(config);
            if (!integrator.empty()) check(vw_config_set_integrator(cfg.get(), integrator.c_str()));
            double final_probe = 0.0, metric = 0.0;
            check(vw_run_scenario(cfg.get(), out.c_str(), &final_probe, &metric));
            std::printf("final_probe=%.17g dissipation_metric=%.17g\n", final_probe, metric);
        } else if (*sw) {
            auto cfg = load(config);
            const auto v = parse_list(values, "--values");
            std::vector<double> fp(v.size()), metric(v.size());
            check(vw_sweep(cfg.get(), param.c_str(), v.data(), v.size(), out.c_str(), workers, fp.data(),
                           metric.data()));
            for (std::size_t i = 0; i < v.size(); ++i)
                std::printf("%s=%.17g final_probe=%.17g dissipation_metric=%.17g\n", param.c_str(), v[i], fp[i],
                            metric[i]);
        } else if (*wt) {
            std::vector<double> w(steps + 1);
            if (symbol == "region") {
                if (config.empty() || region.empty()) {
                    std::fprintf(stderr, "viscowave: --symbol region needs --config and --region\n");
                    return 1;
                }
                auto cfg = load(config);
                check(vw_region_weights(cfg.get(), region.c_str(), k, steps, w.data(), w.size()));
            } else {
                check(vw_weights(symbol.c_str(), power, k, steps, w.data(), w.size()));
            }
            check(vw_write_weights(out.c_str(), w.data(), w.size()));
        } else if (*lp) {
            auto cfg = load(config);
            const auto re = parse_range(s_re, "--re"), im = parse_range(s_im, "--im");
            std::vector<double> sr, si;
            for (double a : re)
                for (double b : im) {
                    sr.push_back(a);
                    si.push_back(b);
                }
            double worst = 0.0;
            check(vw_laplace_probe(cfg.get(), sr.data(), si.data(), sr.size(), out.c_str(), &worst));
            std::printf("points=%zu worst_coercivity_margin=%.6g\n", sr.size(), worst);
            if (trials > 0) {
                std::size_t viol = 0;
                double wc = 0.0, wb = 0.0;
                check(vw_coercivity_check(cfg.get(), trials, seed, &viol, &wc, &wb));
                std::printf("trials=%zu violations=%zu worst_coercivity=%.6g worst_boundedness=%.6g\n", trials, viol,
                            wc, wb);
                if (viol > 0) return 2;
            }
        } else if (*ck) {
            std::size_t viol = 0;
            char* text = nullptr;
            check(vw_check_hypotheses(samples, seed, &viol, &text));
            std::fputs(text, stdout);
            vw_string_free(text);
            std::printf("total_violations=%zu\n", viol);
            if (viol > 0) return 2;
        }
    } catch (const Failure& f) {
        return f.code;
    }
    return 0;
}
