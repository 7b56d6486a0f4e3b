// tasim: performance metrics for shadowing-based transmit antenna selection
// over Generalized-K links. Emits CSV; plotting is downstream.

#include "tasim/asymptotics.hpp"
#include "tasim/closed_form.hpp"
#include "tasim/config.hpp"
#include "tasim/errors.hpp"
#include "tasim/expansion.hpp"
#include "tasim/oracle.hpp"
#include "tasim/simulator.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <iostream>
#include <sstream>
#include <vector>

namespace {

using namespace tasim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct SweepRow {
    double snr_db;
    std::string metric;
    std::string method;
    double value;
    double stderr_ = -1.0; // < 0 means empty
    std::uint64_t trials = 0;
    bool failed = false;
};

void write_rows(std::vector<SweepRow> rows, const std::string& out_path) {
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
        return a.method < b.method;
    });
    std::ostringstream ss;
    ss << "snr_db,metric,method,value,stderr,trials\n";
    ss.precision(12);
    for (const auto& r : rows) {
        ss << r.snr_db << ',' << r.metric << ',' << r.method << ',';
        if (r.failed) {
            ss << "failed";
        } else {
            ss << r.value;
        }
        ss << ',';
        if (r.stderr_ >= 0.0) ss << r.stderr_;
        ss << ',';
        if (r.trials > 0) ss << r.trials;
        ss << '\n';
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << ss.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw ConfigError("cannot open output file: " + out_path);
        f << ss.str();
    }
}

struct CommonOpts {
    std::string config_path;
    std::string snr_spec;
    std::string methods = "closed";
    std::string out_path;
    std::string modulation;
    double gamma_th_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double pe = -1.0;
    double rho = -1.0;
    std::string policy;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_mod) {
    cmd->add_option("--config", o.config_path, "scenario JSON file")->required();
    cmd->add_option("--snr-db", o.snr_spec, "sweep override, start:stop:step in dB");
    cmd->add_option("--method,--methods", o.methods, "comma list: closed,asymptotic,mc,oracle");
    cmd->add_option("--out", o.out_path, "output CSV path (default stdout)");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials");
    cmd->add_option("--seed", o.seed, "Monte Carlo master seed")->each([&o](const std::string&) {
        o.seed_set = true;
    });
    cmd->add_option("--pe", o.pe, "feedback bit error probability");
    cmd->add_option("--rho", o.rho, "shadowing power correlation");
    cmd->add_option("--policy", o.policy, "ssi | random");
    if (with_mod) cmd->add_option("--modulation", o.modulation, "bpsk|bfsk|pam:M|psk:M|qam:M");
}

ChannelConfig apply_overrides(const CommonOpts& o) {
    ChannelConfig cfg = load_config_file(o.config_path);
    if (!o.snr_spec.empty()) {
        SweepSpec sw;
        if (std::sscanf(o.snr_spec.c_str(), "%lf:%lf:%lf", &sw.start_db, &sw.stop_db,
                        &sw.step_db) != 3) {
            throw ConfigError("--snr-db expects start:stop:step");
        }
        cfg = ChannelConfig(cfg.num_links(), cfg.m_alpha_all(), cfg.m_beta_all(), cfg.omega_all(),
                            sw.start_db, sw);
    }
    return cfg;
}

SimOptions sim_options(const ChannelConfig& cfg, const CommonOpts& o) {
    SimOptions s = cfg.sim.value_or(SimOptions{});
    if (o.trials > 0) s.trials = o.trials;
    if (o.seed_set) s.seed = o.seed;
    if (o.pe >= 0.0) s.pe = o.pe;
    if (o.rho >= 0.0) s.rho = o.rho;
    if (!o.policy.empty()) {
        if (o.policy == "ssi") s.policy = SelectionPolicy::ssi;
        else if (o.policy == "random") s.policy = SelectionPolicy::random_antenna;
        else throw ConfigError("--policy expects ssi or random");
    }
    if (s.partitions == 1) {
        s.partitions = 8; // deterministic regardless of worker count
    }
    return s;
}

closed_form::Modulation pick_modulation(const ChannelConfig& cfg, const CommonOpts& o) {
    if (!o.modulation.empty()) return closed_form::Modulation::parse(o.modulation);
    if (cfg.modulation) {
        std::string text = cfg.modulation->family;
        if (text != "bpsk" && text != "bfsk") text += ":" + std::to_string(cfg.modulation->M);
        return closed_form::Modulation::parse(text);
    }
    return closed_form::Modulation::make(closed_form::Modulation::Family::bpsk);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> sweep_points(const ChannelConfig& cfg) {
    if (cfg.sweep()) return cfg.sweep()->grid();
    return {cfg.snr_db()};
}

// Evaluate one closed/asymptotic metric over the sweep, points in parallel.
template <typename Fn>
void eval_sweep(const ChannelConfig& cfg, const std::vector<double>& grid,
                const std::string& metric, const std::string& method, Fn&& fn,
                std::vector<SweepRow>& rows, bool& any_failed) {
    std::vector<std::future<SweepRow>> futs;
    for (double snr : grid) {
        futs.push_back(std::async(std::launch::async, [&, snr]() {
            SweepRow row{snr, metric, method, 0.0};
            try {
                row.value = fn(cfg.at_snr_db(snr));
            } catch (const NumericalError&) {
                row.failed = true;
            }
            return row;
        }));
    }
    for (auto& f : futs) {
        SweepRow r = f.get();
        if (r.failed) any_failed = true;
        rows.push_back(std::move(r));
    }
}

int cmd_outage(const CommonOpts& o) {
    ChannelConfig cfg = apply_overrides(o);
    const double th = db_to_linear(o.gamma_th_db);
    const auto grid = sweep_points(cfg);
    std::vector<SweepRow> rows;
    bool failed = false;
    for (const std::string& m : split_list(o.methods)) {
        if (m == "closed") {
            eval_sweep(cfg, grid, "outage", "closed",
                       [th](const ChannelConfig& c) { return closed_form::outage(c, th); }, rows,
                       failed);
        } else if (m == "asymptotic") {
            eval_sweep(cfg, grid, "outage", "asymptotic",
                       [th](const ChannelConfig& c) {
                           return asymptotics::asymptotic_outage(
                               c, AsymptoticConfig::from_config(c), th, th);
                       },
                       rows, failed);
        } else if (m == "oracle") {
            eval_sweep(cfg, grid, "outage", "oracle",
                       [th](const ChannelConfig& c) {
                           const auto pr0 = oracle::quad_selection_probability(c, 0);
                           double v = pr0.value * oracle::quad_cdf_conditional(c, 0, th).value;
                           for (int r = 1; r < c.num_links(); ++r) {
                               v += oracle::quad_selection_probability(c, r).value *
                                    oracle::quad_cdf_conditional(c, r, th).value;
                           }
                           return v;
                       },
                       rows, failed);
        } else if (m == "mc") {
            const SimOptions so = sim_options(cfg, o);
            for (double snr : grid) {
                auto est = simulator::estimate_outage(cfg.at_snr_db(snr), so, th);
                rows.push_back({snr, "outage", "mc", est.value, est.stderr_, est.trials});
            }
        } else {
            throw ConfigError("unknown method '" + m + "'");
        }
    }
    write_rows(rows, o.out_path);
    return failed ? kExitNumerical : kExitOk;
}

int cmd_sep(const CommonOpts& o) {
    ChannelConfig cfg = apply_overrides(o);
    const auto mod = pick_modulation(cfg, o);
    const auto grid = sweep_points(cfg);
    std::vector<SweepRow> rows;
    bool failed = false;
    for (const std::string& m : split_list(o.methods)) {
        if (m == "closed") {
            eval_sweep(cfg, grid, "sep", "closed",
                       [&mod](const ChannelConfig& c) { return closed_form::sep(c, mod); }, rows,
                       failed);
        } else if (m == "asymptotic") {
            eval_sweep(cfg, grid, "sep", "asymptotic",
                       [&mod](const ChannelConfig& c) {
                           return asymptotics::asymptotic_sep(c, AsymptoticConfig::from_config(c),
                                                              mod);
                       },
                       rows, failed);
        } else if (m == "oracle") {
            eval_sweep(cfg, grid, "sep", "oracle",
                       [&mod](const ChannelConfig& c) { return oracle::quad_sep(c, mod).value; },
                       rows, failed);
        } else if (m == "mc") {
            const SimOptions so = sim_options(cfg, o);
            for (double snr : grid) {
                auto est = simulator::estimate_sep(cfg.at_snr_db(snr), so, mod);
                rows.push_back({snr, "sep", "mc", est.value, est.stderr_, est.trials});
            }
        } else {
            throw ConfigError("unknown method '" + m + "'");
        }
    }
    write_rows(rows, o.out_path);
    return failed ? kExitNumerical : kExitOk;
}

int cmd_moments(const CommonOpts& o, const std::string& orders) {
    ChannelConfig cfg = apply_overrides(o);
    std::vector<SweepRow> rows;
    for (const std::string& os : split_list(orders)) {
        const int p = std::stoi(os);
        for (const std::string& m : split_list(o.methods)) {
            if (m == "closed") {
                rows.push_back({cfg.snr_db(), "moment" + os, "closed", closed_form::moment(cfg, p)});
            } else if (m == "oracle") {
                rows.push_back(
                    {cfg.snr_db(), "moment" + os, "oracle", oracle::moment_factorized(cfg, p).value});
            } else if (m == "mc") {
                const SimOptions so = sim_options(cfg, o);
                auto est = simulator::estimate_moment(cfg, so, p);
                rows.push_back({cfg.snr_db(), "moment" + os, "mc", est.value, est.stderr_, est.trials});
            } else {
                throw ConfigError("method '" + m + "' not supported for moments");
            }
        }
    }
    rows.push_back({cfg.snr_db(), "af", "closed", closed_form::amount_of_fading(cfg)});
    write_rows(rows, o.out_path);
    return kExitOk;
}

int cmd_mgf(const CommonOpts& o, const std::string& sgrid) {
    ChannelConfig cfg = apply_overrides(o);
    std::vector<SweepRow> rows;
    for (const std::string& ss : split_list(sgrid)) {
        const double s = std::stod(ss);
        for (const std::string& m : split_list(o.methods)) {
            if (m == "closed") {
                rows.push_back({cfg.snr_db(), "mgf@s=" + ss, "closed", closed_form::mgf(cfg, s)});
            } else if (m == "oracle") {
                if (s <= 0.0) throw ConfigError("oracle mgf requires s > 0");
                rows.push_back({cfg.snr_db(), "mgf@s=" + ss, "oracle", oracle::quad_mgf(cfg, s).value});
            } else {
                throw ConfigError("method '" + m + "' not supported for mgf");
            }
        }
    }
    write_rows(rows, o.out_path);
    return kExitOk;
}

int cmd_selprob(const CommonOpts& o) {
    ChannelConfig cfg = apply_overrides(o);
    std::vector<SweepRow> rows;
    const auto pr = expansion::selection_probabilities(cfg);
    for (int r = 0; r < cfg.num_links(); ++r) {
        rows.push_back({cfg.snr_db(), "selprob" + std::to_string(r + 1), "closed", pr[r]});
    }
    for (const std::string& m : split_list(o.methods)) {
        if (m == "oracle") {
            for (int r = 0; r < cfg.num_links(); ++r) {
                rows.push_back({cfg.snr_db(), "selprob" + std::to_string(r + 1), "oracle",
                                oracle::quad_selection_probability(cfg, r).value});
            }
        }
    }
    write_rows(rows, o.out_path);
    return kExitOk;
}

int cmd_simulate(const CommonOpts& o, const std::string& metric) {
    ChannelConfig cfg = apply_overrides(o);
    const SimOptions so = sim_options(cfg, o);
    const auto grid = sweep_points(cfg);
    std::vector<SweepRow> rows;
    for (double snr : grid) {
        const ChannelConfig c = cfg.at_snr_db(snr);
        if (metric == "outage") {
            auto est = simulator::estimate_outage(c, so, db_to_linear(o.gamma_th_db));
            rows.push_back({snr, "outage", "mc", est.value, est.stderr_, est.trials});
        } else if (metric == "sep") {
            auto est = simulator::estimate_sep(c, so, pick_modulation(cfg, o));
            rows.push_back({snr, "sep", "mc", est.value, est.stderr_, est.trials});
        } else if (metric == "moment1" || metric == "moment2") {
            const int p = metric == "moment1" ? 1 : 2;
            auto est = simulator::estimate_moment(c, so, p);
            rows.push_back({snr, metric, "mc", est.value, est.stderr_, est.trials});
        } else {
            throw ConfigError("simulate --metric expects outage|sep|moment1|moment2");
        }
    }
    write_rows(rows, o.out_path);
    return kExitOk;
}

struct Check {
    std::string name;
    double worst = 0.0;
    double tol = 0.0;
    bool pass() const { return worst <= tol; }
};

// A check whose closed form blows up numerically is a failed check, not a
// tool crash: record it as infinitely far from tolerance and keep going.
template <typename Fn>
void guarded_check(std::vector<Check>& checks, Check c, Fn&& fn) {
    try {
        fn(c);
    } catch (const NumericalError&) {
        c.worst = std::numeric_limits<double>::infinity();
    }
    checks.push_back(c);
}

int cmd_validate(const CommonOpts& o, bool corrupt_kappa) {
    ChannelConfig cfg = apply_overrides(o);
    expansion::testhook::corrupt_kappa_sign = corrupt_kappa;
    std::vector<Check> checks;

    // expansion vs product of regularized gammas
    guarded_check(checks, {"expansion-vs-product", 0.0, 1e-10}, [&](Check& c) {
        for (int i = 1; i <= 50; ++i) {
            const double x = 0.1 * i * cfg.mean_branch_snr(0);
            c.worst = std::max(c.worst, std::fabs(expansion::cdf_alpha_max(cfg, x) -
                                                  oracle::cdf_alpha_max_product(cfg, x)));
        }
    });
    // selection probabilities: sum and oracle agreement
    guarded_check(checks, {"selprob-sum-1", 0.0, 1e-9}, [&](Check& c) {
        double sum = 0.0;
        for (double p : expansion::selection_probabilities(cfg)) sum += p;
        c.worst = std::fabs(sum - 1.0);
    });
    guarded_check(checks, {"selprob-vs-quad", 0.0, 1e-8}, [&](Check& c) {
        const auto pr = expansion::selection_probabilities(cfg);
        for (int r = 0; r < cfg.num_links(); ++r) {
            c.worst = std::max(c.worst,
                               std::fabs(pr[r] - oracle::quad_selection_probability(cfg, r).value));
        }
    });
    // conditional CDF closed form vs defining integral
    guarded_check(checks, {"cdf-vs-quad", 0.0, 1e-6}, [&](Check& c) {
        for (int r = 0; r < cfg.num_links(); ++r) {
            for (double q : {0.3, 1.0, 3.0}) {
                const double x = q * cfg.mean_branch_snr(r);
                const double cf = closed_form::cdf_conditional(cfg, r, x);
                const double qd = oracle::quad_cdf_conditional(cfg, r, x).value;
                if (cf > 1e-12 || qd > 1e-12) {
                    c.worst = std::max(c.worst, std::fabs(cf - qd) / std::max(qd, 1e-300));
                }
            }
        }
    });
    // MGF closed form vs quadrature
    guarded_check(checks, {"mgf-vs-quad", 0.0, 1e-6}, [&](Check& c) {
        for (double s : {0.1, 1.0, 10.0}) {
            const double cf = closed_form::mgf(cfg, s);
            const double qd = oracle::quad_mgf(cfg, s).value;
            c.worst = std::max(c.worst, std::fabs(cf - qd) / qd);
        }
    });
    // SEP closed form vs quadrature
    guarded_check(checks, {"sep-vs-quad", 0.0, 1e-6}, [&](Check& c) {
        const auto mod = pick_modulation(cfg, o);
        const double cf = closed_form::sep(cfg, mod);
        const double qd = oracle::quad_sep(cfg, mod).value;
        c.worst = std::fabs(cf - qd) / qd;
    });
    // moments vs factorized quadrature
    guarded_check(checks, {"moments-vs-factorized", 0.0, 1e-8}, [&](Check& c) {
        for (int p : {1, 2}) {
            const double cf = closed_form::moment(cfg, p);
            const double qd = oracle::moment_factorized(cfg, p).value;
            c.worst = std::max(c.worst, std::fabs(cf - qd) / qd);
        }
    });

    expansion::testhook::corrupt_kappa_sign = false;
    bool all_pass = true;
    const Check* worst_fail = nullptr;
    for (const auto& c : checks) {
        std::cout << (c.pass() ? "PASS" : "FAIL") << "  " << c.name << "  achieved=" << c.worst
                  << "  required=" << c.tol << "\n";
        if (!c.pass()) {
            all_pass = false;
            if (!worst_fail || c.worst / c.tol > worst_fail->worst / worst_fail->tol) {
                worst_fail = &c;
            }
        }
    }
    if (!all_pass) {
        std::cout << "worst offender: " << worst_fail->name << " achieved=" << worst_fail->worst
                  << " required=" << worst_fail->tol << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transmit antenna selection on shadowing side information: "
                 "Generalized-K performance metrics"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string orders = "1,2";
    std::string sgrid = "0.1,1,10";
    std::string sim_metric = "outage";
    bool corrupt_kappa = false;

    auto* c_outage = app.add_subcommand("outage", "outage probability sweep");
    add_common(c_outage, o, false);
    c_outage->add_option("--gamma-th-db", o.gamma_th_db, "outage threshold in dB");

    auto* c_sep = app.add_subcommand("sep", "symbol error probability sweep");
    add_common(c_sep, o, true);

    auto* c_mom = app.add_subcommand("moments", "SNR moments and amount of fading");
    add_common(c_mom, o, false);
    c_mom->add_option("--orders", orders, "comma list of moment orders");

    auto* c_mgf = app.add_subcommand("mgf", "moment generating function");
    add_common(c_mgf, o, false);
    c_mgf->add_option("--s-grid", sgrid, "comma list of s values");

    auto* c_sel = app.add_subcommand("selprob", "antenna selection probabilities");
    add_common(c_sel, o, false);

    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo estimation");
    add_common(c_sim, o, true);
    c_sim->add_option("--metric", sim_metric, "outage|sep|moment1|moment2");
    c_sim->add_option("--gamma-th-db", o.gamma_th_db, "outage threshold in dB");

    auto* c_val = app.add_subcommand("validate", "oracle cross-check suite");
    add_common(c_val, o, true);
    c_val->add_flag("--corrupt-kappa", corrupt_kappa, "negative-control hook: flip one kappa sign")
        ->group(""); // hidden

    try {
        app.parse(argc, argv);
        if (*c_outage) return cmd_outage(o);
        if (*c_sep) return cmd_sep(o);
        if (*c_mom) return cmd_moments(o, orders);
        if (*c_mgf) return cmd_mgf(o, sgrid);
        if (*c_sel) return cmd_selprob(o);
        if (*c_sim) return cmd_simulate(o, sim_metric);
        if (*c_val) return cmd_validate(o, corrupt_kappa);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CapacityError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
