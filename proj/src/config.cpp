#include "tasim/config.hpp"
#include "tasim/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace tasim {

using nlohmann::json;

std::vector<double> SweepSpec::grid() const {
    std::vector<double> g;
    if (step_db <= 0.0) throw ConfigError("sweep: step must be positive");
    if (start_db > stop_db) throw ConfigError("sweep: start must not exceed stop");
    for (int i = 0;; ++i) {
        const double v = start_db + i * step_db;
        if (v > stop_db + 1e-9 * step_db) break;
        g.push_back(std::min(v, stop_db));
    }
    return g;
}

ChannelConfig::ChannelConfig(int L, std::vector<int> m_alpha, std::vector<double> m_beta,
                             std::vector<double> omega, double snr_db,
                             std::optional<SweepSpec> sweep)
    : L_(L),
      m_alpha_(std::move(m_alpha)),
      m_beta_(std::move(m_beta)),
      omega_(std::move(omega)),
      snr_db_(snr_db),
      sweep_(std::move(sweep)) {
    if (L_ < 1) throw ConfigError("L must be >= 1");
    if (static_cast<int>(m_alpha_.size()) != L_) throw ConfigError("m_alpha: length must equal L");
    if (static_cast<int>(m_beta_.size()) != L_) throw ConfigError("m_beta: length must equal L");
    if (static_cast<int>(omega_.size()) != L_) throw ConfigError("omega: length must equal L");
    for (int i = 0; i < L_; ++i) {
        if (m_alpha_[i] < 1) {
            throw ConfigError("m_alpha[" + std::to_string(i) + "]: must be a positive integer");
        }
        if (!(m_beta_[i] >= 0.5)) {
            throw ConfigError("m_beta[" + std::to_string(i) + "]: must be >= 0.5");
        }
        if (!(omega_[i] > 0.0)) {
            throw ConfigError("omega[" + std::to_string(i) + "]: must be positive");
        }
        if (!std::isfinite(mean_branch_snr(i))) {
            throw ConfigError("mean branch SNR not finite for link " + std::to_string(i));
        }
    }
}

int ChannelConfig::check(int ell) const {
    if (ell < 0 || ell >= L_) throw DomainError("link index out of range");
    return ell;
}

double ChannelConfig::snr_linear() const {
    return std::pow(10.0, snr_db_ / 10.0);
}

double ChannelConfig::mean_branch_snr(int ell) const {
    return omega_.at(check(ell)) * snr_linear();
}

ChannelConfig ChannelConfig::at_snr_db(double snr_db) const {
    ChannelConfig c(L_, m_alpha_, m_beta_, omega_, snr_db, sweep_);
    c.modulation = modulation;
    c.sim = sim;
    return c;
}

bool ChannelConfig::operator==(const ChannelConfig& o) const {
    return L_ == o.L_ && m_alpha_ == o.m_alpha_ && m_beta_ == o.m_beta_ &&
           omega_ == o.omega_ && snr_db_ == o.snr_db_ &&
           sweep_.has_value() == o.sweep_.has_value() &&
           (!sweep_ || (sweep_->start_db == o.sweep_->start_db &&
                        sweep_->stop_db == o.sweep_->stop_db &&
                        sweep_->step_db == o.sweep_->step_db));
}

AsymptoticConfig AsymptoticConfig::from_config(const ChannelConfig& cfg) {
    AsymptoticConfig a;
    a.gamma_bar = cfg.snr_linear();
    a.kappa.resize(cfg.num_links());
    for (int ell = 0; ell < cfg.num_links(); ++ell) {
        a.kappa[ell] = 1.0 / cfg.omega(ell);
    }
    return a;
}

void AsymptoticConfig::validate(const ChannelConfig& cfg) const {
    if (static_cast<int>(kappa.size()) != cfg.num_links()) {
        throw ConfigError("asymptotic config: kappa length must equal L");
    }
    for (int ell = 0; ell < cfg.num_links(); ++ell) {
        if (!(kappa[ell] > 0.0)) throw ConfigError("asymptotic config: kappa must be positive");
        const double g = kappa[ell] * cfg.mean_branch_snr(ell);
        if (std::fabs(g - gamma_bar) > 1e-12 * std::fabs(gamma_bar)) {
            throw ConfigError("asymptotic config: kappa_ell * mean_branch_snr_ell != gamma_bar");
        }
    }
}

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) { known = true; break; }
        }
        if (!known) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

std::vector<int> parse_int_vector(const json& j, const char* key) {
    if (!j.is_array()) throw ConfigError(std::string(key) + ": expected an array");
    std::vector<int> v;
    int i = 0;
    for (const auto& e : j) {
        if (!e.is_number()) throw ConfigError(std::string(key) + ": expected numbers");
        const double d = e.get<double>();
        if (d != std::floor(d)) {
            throw ConfigError(std::string(key) + "[" + std::to_string(i) +
                              "]: must be a positive integer");
        }
        v.push_back(static_cast<int>(d));
        ++i;
    }
    return v;
}

std::vector<double> parse_double_vector(const json& j, const char* key) {
    if (!j.is_array()) throw ConfigError(std::string(key) + ": expected an array");
    std::vector<double> v;
    for (const auto& e : j) {
        if (!e.is_number()) throw ConfigError(std::string(key) + ": expected numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

} // namespace

ChannelConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
    reject_unknown_keys(j, {"L", "m_alpha", "m_beta", "omega", "snr_db", "modulation", "sim"},
                        "scenario");
    for (const char* req : {"L", "m_alpha", "m_beta", "omega", "snr_db"}) {
        if (!j.contains(req)) throw ConfigError(std::string("missing key '") + req + "'");
    }
    if (!j["L"].is_number_integer()) throw ConfigError("L: expected an integer");

    double snr_db = 0.0;
    std::optional<SweepSpec> sweep;
    const json& s = j["snr_db"];
    if (s.is_number()) {
        snr_db = s.get<double>();
    } else if (s.is_object()) {
        reject_unknown_keys(s, {"start", "stop", "step"}, "snr_db");
        for (const char* req : {"start", "stop", "step"}) {
            if (!s.contains(req)) throw ConfigError(std::string("snr_db: missing '") + req + "'");
        }
        SweepSpec sw{s["start"].get<double>(), s["stop"].get<double>(), s["step"].get<double>()};
        if (sw.step_db <= 0.0) throw ConfigError("snr_db.step: must be positive");
        if (sw.start_db > sw.stop_db) throw ConfigError("snr_db: start must not exceed stop");
        snr_db = sw.start_db;
        sweep = sw;
    } else {
        throw ConfigError("snr_db: expected a number or {start,stop,step}");
    }

    ChannelConfig cfg(j["L"].get<int>(), parse_int_vector(j["m_alpha"], "m_alpha"),
                      parse_double_vector(j["m_beta"], "m_beta"),
                      parse_double_vector(j["omega"], "omega"), snr_db, sweep);

    if (j.contains("modulation")) {
        const json& m = j["modulation"];
        if (!m.is_object()) throw ConfigError("modulation: expected an object");
        reject_unknown_keys(m, {"family", "M"}, "modulation");
        if (!m.contains("family")) throw ConfigError("modulation: missing 'family'");
        ModulationSpec ms;
        ms.family = m["family"].get<std::string>();
        if (m.contains("M")) ms.M = m["M"].get<int>();
        cfg.modulation = ms;
    }
    if (j.contains("sim")) {
        const json& m = j["sim"];
        if (!m.is_object()) throw ConfigError("sim: expected an object");
        reject_unknown_keys(m, {"trials", "seed", "rho", "pe", "policy", "partitions"}, "sim");
        SimOptions so;
        if (m.contains("trials")) so.trials = m["trials"].get<std::uint64_t>();
        if (m.contains("seed")) so.seed = m["seed"].get<std::uint64_t>();
        if (m.contains("rho")) so.rho = m["rho"].get<double>();
        if (m.contains("pe")) so.pe = m["pe"].get<double>();
        if (m.contains("partitions")) so.partitions = m["partitions"].get<int>();
        if (m.contains("policy")) {
            const std::string p = m["policy"].get<std::string>();
            if (p == "ssi") so.policy = SelectionPolicy::ssi;
            else if (p == "random") so.policy = SelectionPolicy::random_antenna;
            else throw ConfigError("sim.policy: expected 'ssi' or 'random'");
        }
        if (so.trials < 10000) throw ConfigError("sim.trials: must be >= 10000");
        if (!(so.rho >= 0.0 && so.rho < 1.0)) throw ConfigError("sim.rho: must be in [0,1)");
        if (!(so.pe >= 0.0 && so.pe < 1.0)) throw ConfigError("sim.pe: must be in [0,1)");
        if (so.partitions < 1) throw ConfigError("sim.partitions: must be >= 1");
        cfg.sim = so;
    }
    return cfg;
}

std::string serialize_config(const ChannelConfig& cfg) {
    json j;
    j["L"] = cfg.num_links();
    j["m_alpha"] = cfg.m_alpha_all();
    j["m_beta"] = cfg.m_beta_all();
    j["omega"] = cfg.omega_all();
    if (cfg.sweep()) {
        j["snr_db"] = {{"start", cfg.sweep()->start_db},
                       {"stop", cfg.sweep()->stop_db},
                       {"step", cfg.sweep()->step_db}};
    } else {
        j["snr_db"] = cfg.snr_db();
    }
    if (cfg.modulation) {
        j["modulation"] = {{"family", cfg.modulation->family}, {"M", cfg.modulation->M}};
    }
    if (cfg.sim) {
        const auto& s = *cfg.sim;
        j["sim"] = {{"trials", s.trials}, {"seed", s.seed},       {"rho", s.rho},
                    {"pe", s.pe},         {"partitions", s.partitions},
                    {"policy", s.policy == SelectionPolicy::ssi ? "ssi" : "random"}};
    }
    return j.dump(2);
}

ChannelConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace tasim
